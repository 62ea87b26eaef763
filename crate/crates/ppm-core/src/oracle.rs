//! Brute-force ground truth, deliberately independent of the fast matchers:
//! backtracking containment, complete embedding enumeration, definition-based
//! labellings, lattice meets and joins, a patience-sorting LIS reference, and
//! generators for the two permutation classes.
//!
//! Nothing here consults the linear-time labellings or their neighbour
//! tables; every order check is done from first principles so that the two
//! code paths can cross-validate each other.

use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::{Embedding, Permutation};
use crate::skew::SkewLabel;
use crate::PermClass;

/// Errors from the lattice operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("embeddings have different domains")]
    DomainMismatch,
    #[error("embeddings are not type-preserving at pattern position {0}")]
    TypeMismatch(usize),
}

/// True iff some embedding of `pattern` into `text` exists. Backtracking
/// over increasing position choices with incremental order checks; meant for
/// small texts. Monotone patterns are answered by the subsequence-length
/// references instead, which keeps the oracle usable on longer texts.
pub fn brute_contains(pattern: &Permutation, text: &Permutation) -> bool {
    let k = pattern.size();
    if k == 0 {
        return true;
    }
    if k > text.size() {
        return false;
    }
    if k >= 2 && (1..=k).all(|i| pattern.value_at(i) == i) {
        return lis_reference(text) >= k;
    }
    if k >= 2 && (1..=k).all(|i| pattern.value_at(i) == k + 1 - i) {
        return lds_reference(text) >= k;
    }
    let mut found = false;
    let mut chosen = Vec::with_capacity(k);
    search(pattern, text, &mut chosen, &mut |_| {
        found = true;
        false
    });
    found
}

/// Every embedding of `pattern` into `text`, in lexicographic order of the
/// image-position sequence.
pub fn enumerate_embeddings(pattern: &Permutation, text: &Permutation) -> Vec<Embedding> {
    let mut out = Vec::new();
    if pattern.size() > text.size() {
        return out;
    }
    if pattern.size() == 0 {
        out.push(Embedding::new(0));
        return out;
    }
    let mut chosen = Vec::with_capacity(pattern.size());
    search(pattern, text, &mut chosen, &mut |images| {
        out.push(Embedding::from_images(images));
        true
    });
    out
}

/// Depth-first search over increasing image positions with incremental order
/// checks. `visit` sees each complete image vector and returns false to stop
/// the search; `search` returns false when a stop was requested.
fn search(
    pattern: &Permutation,
    text: &Permutation,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let k = pattern.size();
    let n = text.size();
    let i = chosen.len() + 1;
    let v = pattern.value_at(i);
    // Window of admissible text values given the images chosen so far.
    let mut lo = 0usize;
    let mut hi = n + 1;
    for (j, &img) in chosen.iter().enumerate() {
        let tv = text.value_at(img);
        if pattern.value_at(j + 1) < v {
            lo = lo.max(tv);
        } else {
            hi = hi.min(tv);
        }
    }
    let start = chosen.last().map_or(1, |&q| q + 1);
    for q in start..=n - (k - i) {
        let tv = text.value_at(q);
        if tv <= lo || tv >= hi {
            continue;
        }
        chosen.push(q);
        let keep = if i == k { visit(chosen) } else { search(pattern, text, chosen, visit) };
        chosen.pop();
        if !keep {
            return false;
        }
    }
    true
}

/// Definition-based element roles in the 321 setting. The two flags can
/// overlap exactly when the permutation contains 321.
#[derive(Debug, Clone)]
pub struct BruteLabels321 {
    pub upper: Vec<bool>,
    pub lower: Vec<bool>,
    pub contains_321: bool,
}

/// Labels every element by explicit witness search: upper means it is the 2
/// of some 21, lower means it is the 1 of some 21.
pub fn brute_labels_321(p: &Permutation) -> BruteLabels321 {
    let n = p.size();
    let mut upper = alloc::vec![false; n];
    let mut lower = alloc::vec![false; n];
    for i in 1..=n {
        for j in i + 1..=n {
            if p.value_at(i) > p.value_at(j) {
                upper[i - 1] = true;
                lower[j - 1] = true;
            }
        }
    }
    BruteLabels321 { upper, lower, contains_321: brute_contains_321(p) }
}

fn brute_contains_321(p: &Permutation) -> bool {
    let n = p.size();
    for i in 1..=n {
        for j in i + 1..=n {
            if p.value_at(i) <= p.value_at(j) {
                continue;
            }
            for l in j + 1..=n {
                if p.value_at(j) > p.value_at(l) {
                    return true;
                }
            }
        }
    }
    false
}

/// Definition-based corner roles in the skew-merged setting.
#[derive(Debug, Clone)]
pub struct BruteSkewLabels {
    pub ne: Vec<bool>,
    pub nw: Vec<bool>,
    pub sw: Vec<bool>,
    pub se: Vec<bool>,
    pub is_skew_merged: bool,
}

impl BruteSkewLabels {
    /// The label of a position; for a skew-merged permutation the four
    /// corner flags are disjoint, everything else is central.
    pub fn label(&self, pos: usize) -> SkewLabel {
        if self.ne[pos - 1] {
            SkewLabel::Ne
        } else if self.nw[pos - 1] {
            SkewLabel::Nw
        } else if self.sw[pos - 1] {
            SkewLabel::Sw
        } else if self.se[pos - 1] {
            SkewLabel::Se
        } else {
            SkewLabel::Central
        }
    }
}

/// Labels every element by explicit three-element witness search per the
/// corner definitions: NE is the 3 of a 213, NW the 3 of a 312, SW the 1 of
/// a 132, SE the 1 of a 231.
pub fn brute_labels_skew(p: &Permutation) -> BruteSkewLabels {
    let n = p.size();
    let mut ne = alloc::vec![false; n];
    let mut nw = alloc::vec![false; n];
    let mut sw = alloc::vec![false; n];
    let mut se = alloc::vec![false; n];
    for i in 1..=n {
        let x = p.value_at(i);
        // x as the last letter: the 3 of a 213 (NE) or the 1 of a 231 (SE).
        for a in 1..i {
            for b in a + 1..i {
                let (va, vb) = (p.value_at(a), p.value_at(b));
                if va > vb && va < x {
                    ne[i - 1] = true;
                }
                if x < va && va < vb {
                    se[i - 1] = true;
                }
            }
        }
        // x as the first letter: the 3 of a 312 (NW) or the 1 of a 132 (SW).
        for a in i + 1..=n {
            for b in a + 1..=n {
                let (va, vb) = (p.value_at(a), p.value_at(b));
                if va < vb && vb < x {
                    nw[i - 1] = true;
                }
                if x < vb && vb < va {
                    sw[i - 1] = true;
                }
            }
        }
    }
    BruteSkewLabels { ne, nw, sw, se, is_skew_merged: brute_is_skew_merged(p) }
}

/// True iff `p` avoids 321, by witness search.
pub fn brute_avoids_321(p: &Permutation) -> bool {
    !brute_contains_321(p)
}

/// True iff `p` is skew-merged, i.e. avoids both 3412 and 2143.
pub fn brute_is_skew_merged(p: &Permutation) -> bool {
    let p3412 = Permutation::from_values(&[3, 4, 1, 2]).unwrap();
    let p2143 = Permutation::from_values(&[2, 1, 4, 3]).unwrap();
    !brute_contains(&p3412, p) && !brute_contains(&p2143, p)
}

/// Pointwise meet and join of two embeddings of a rigid pattern, in the
/// per-type linear orders. Inputs must share their domain and be
/// type-preserving with respect to `labels` (the text's roles).
pub fn meet_join_321(
    e1: &Embedding,
    e2: &Embedding,
    labels: &BruteLabels321,
    text: &Permutation,
) -> Result<(Embedding, Embedding), OracleError> {
    if e1.pattern_size() != e2.pattern_size() {
        return Err(OracleError::DomainMismatch);
    }
    let k = e1.pattern_size();
    let mut meet = Embedding::new(k);
    let mut join = Embedding::new(k);
    for pos in 1..=k {
        let (a, b) = match (e1.get(pos), e2.get(pos)) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => continue,
            _ => return Err(OracleError::DomainMismatch),
        };
        let role = |q: usize| (labels.upper[q - 1], labels.lower[q - 1]);
        if role(a) != role(b) {
            return Err(OracleError::TypeMismatch(pos));
        }
        // Within one increasing chain the chain order is the value order.
        let (lo, hi) = if text.value_at(a) <= text.value_at(b) { (a, b) } else { (b, a) };
        meet.set(pos, lo);
        join.set(pos, hi);
    }
    Ok((meet, join))
}

/// Pointwise outer-meet of two type-preserving embeddings of the non-central
/// part of a skew-merged pattern. `labels` are the text's corner roles.
pub fn outer_meet_skew(
    e1: &Embedding,
    e2: &Embedding,
    labels: &BruteSkewLabels,
    text: &Permutation,
) -> Result<Embedding, OracleError> {
    if e1.pattern_size() != e2.pattern_size() {
        return Err(OracleError::DomainMismatch);
    }
    let k = e1.pattern_size();
    let mut meet = Embedding::new(k);
    for pos in 1..=k {
        let (a, b) = match (e1.get(pos), e2.get(pos)) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => continue,
            _ => return Err(OracleError::DomainMismatch),
        };
        let ta = labels.label(a);
        if ta != labels.label(b) || ta == SkewLabel::Central {
            return Err(OracleError::TypeMismatch(pos));
        }
        // Outer means further from the centre: minimal value on the south
        // side, maximal value on the north side.
        let (va, vb) = (text.value_at(a), text.value_at(b));
        let outer = match ta {
            SkewLabel::Sw | SkewLabel::Se => if va <= vb { a } else { b },
            SkewLabel::Nw | SkewLabel::Ne => if va >= vb { a } else { b },
            SkewLabel::Central => unreachable!(),
        };
        meet.set(pos, outer);
    }
    Ok(meet)
}

/// Exact length of a longest increasing subsequence, by patience sorting.
pub fn lis_reference(p: &Permutation) -> usize {
    let mut tails: Vec<usize> = Vec::new();
    for v in p.values() {
        match tails.binary_search(&v) {
            Ok(_) => unreachable!("values are distinct"),
            Err(i) => {
                if i == tails.len() {
                    tails.push(v);
                } else {
                    tails[i] = v;
                }
            }
        }
    }
    tails.len()
}

/// Exact length of a longest decreasing subsequence, via the complement.
pub fn lds_reference(p: &Permutation) -> usize {
    let n = p.size();
    let complemented: Vec<usize> = p.values().map(|v| n + 1 - v).collect();
    lis_reference(&Permutation::from_values(&complemented).unwrap())
}

/// Advances `vals` to the lexicographically next permutation in place,
/// returning false after the last one.
fn next_permutation(vals: &mut [usize]) -> bool {
    let n = vals.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && vals[i - 1] >= vals[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while vals[j] <= vals[i - 1] {
        j -= 1;
    }
    vals.swap(i - 1, j);
    vals[i..].reverse();
    true
}

/// Calls `f` for every permutation of size `n`, in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&Permutation)) {
    let mut vals: Vec<usize> = (1..=n).collect();
    loop {
        f(&Permutation::from_values(&vals).unwrap());
        if !next_permutation(&mut vals) {
            break;
        }
    }
}

/// All permutations of size `n` in the class, by filtering all `n!`
/// candidates through the brute avoidance checks. Lexicographic order.
pub fn enumerate_avoiders(class: PermClass, n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for_each_permutation(n, |p| {
        let keep = match class {
            PermClass::Av321 => brute_avoids_321(p),
            PermClass::SkewMerged => brute_is_skew_merged(p),
        };
        if keep {
            out.push(p.clone());
        }
    });
    out
}

/// A uniform integer below `bound` by rejection sampling.
fn rand_below(rng: &mut ChaCha8Rng, bound: usize) -> usize {
    debug_assert!(bound > 0);
    let bound = bound as u64;
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let r = rng.next_u64();
        if r < zone {
            return (r % bound) as usize;
        }
    }
}

fn shuffle<T>(rng: &mut ChaCha8Rng, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        items.swap(i, rand_below(rng, i + 1));
    }
}

/// A member of the class of the given size, deterministic in the seed.
/// Coverage is broad but uniformity over the class is not promised.
pub fn random_avoider(class: PermClass, n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match class {
        PermClass::Av321 => random_321_avoider(n, &mut rng),
        PermClass::SkewMerged => random_skew_merged(n, &mut rng),
    }
}

/// A uniformly random permutation of size `n`, deterministic in the seed.
pub fn random_permutation(n: usize, seed: u64) -> Permutation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals: Vec<usize> = (1..=n).collect();
    shuffle(&mut rng, &mut vals);
    Permutation::from_values(&vals).unwrap()
}

/// Samples a uniformly random balanced word of `n` up-steps and `n`
/// down-steps via the cycle lemma and decodes it into a 321-avoiding
/// permutation.
fn random_321_avoider(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    if n == 0 {
        return Permutation::empty();
    }
    // n ups and n+1 downs: exactly one rotation of the shuffled word is a
    // balanced word followed by the extra down-step.
    let mut steps = alloc::vec![false; 2 * n + 1];
    for s in steps.iter_mut().take(n) {
        *s = true;
    }
    shuffle(rng, &mut steps);
    let mut min_sum = i64::MAX;
    let mut min_at = 0usize;
    let mut sum = 0i64;
    for (i, &up) in steps.iter().enumerate() {
        sum += if up { 1 } else { -1 };
        if sum < min_sum {
            min_sum = sum;
            min_at = i;
        }
    }
    decode_dyck_word(n, |i| steps[(min_at + 1 + i) % steps.len()])
}

/// Decodes a balanced word into a 321-avoiding permutation: each maximal
/// up-run fixes a left-to-right maximum, the down-runs fix where the maxima
/// sit, and the remaining values fill the remaining positions increasingly.
pub(crate) fn decode_dyck_word(n: usize, word: impl Fn(usize) -> bool) -> Permutation {
    let mut values = alloc::vec![0usize; n];
    let mut used = alloc::vec![false; n + 1];
    let mut ups = 0usize;
    let mut downs = 0usize;
    let mut i = 0usize;
    while i < 2 * n {
        debug_assert!(word(i), "runs of a balanced word start with an up-step");
        while i < 2 * n && word(i) {
            ups += 1;
            i += 1;
        }
        values[downs] = ups;
        used[ups] = true;
        while i < 2 * n && !word(i) {
            downs += 1;
            i += 1;
        }
    }
    let mut next = 1usize;
    for v in values.iter_mut() {
        if *v == 0 {
            while used[next] {
                next += 1;
            }
            *v = next;
            used[next] = true;
        }
    }
    Permutation::from_values(&values).unwrap()
}

/// A random interleaving of an increasing and a decreasing subsequence over
/// a random split of positions and values; skew-merged by construction.
fn random_skew_merged(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    if n == 0 {
        return Permutation::empty();
    }
    let d = rand_below(rng, n + 1);
    let dec_pos = random_subset(rng, n, d);
    let dec_val = random_subset(rng, n, d);
    let mut values = alloc::vec![0usize; n];
    let mut in_dec_val = alloc::vec![false; n];
    for &v in &dec_val {
        in_dec_val[v - 1] = true;
    }
    // Decreasing part: ascending positions take descending chosen values.
    for (i, &p) in dec_pos.iter().enumerate() {
        values[p - 1] = dec_val[d - 1 - i];
    }
    // Increasing part: the remaining positions take the remaining values,
    // both ascending.
    let mut inc_vals = (1..=n).filter(|&v| !in_dec_val[v - 1]);
    for v in values.iter_mut() {
        if *v == 0 {
            *v = inc_vals.next().unwrap();
        }
    }
    Permutation::from_values(&values).unwrap()
}

/// A sorted random subset of `{1..n}` of the given size.
fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut items: Vec<usize> = (1..=n).collect();
    shuffle(rng, &mut items);
    let mut subset = items[..size].to_vec();
    subset.sort_unstable();
    subset
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use crate::perm::verify_embedding;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn tau_f1() -> Permutation {
        perm("3 1 2 4 5 9 6 7 10 8 11 13 12")
    }

    #[test]
    fn contains_basics() {
        assert!(!brute_contains(&perm("21"), &perm("12")));
        assert!(!brute_contains(&perm("321"), &tau_f1()));
        assert!(brute_contains(&perm("214365"), &tau_f1()));
        assert!(brute_contains(&perm(""), &perm("")));
        assert!(brute_contains(&perm(""), &perm("1")));
        assert!(!brute_contains(&perm("1"), &perm("")));
    }

    #[test]
    fn enumerate_counts() {
        let embs = enumerate_embeddings(&perm("21"), &perm("2143"));
        assert_eq!(embs.len(), 2);
        assert_eq!(embs[0].pairs().collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);
        assert_eq!(embs[1].pairs().collect::<Vec<_>>(), vec![(1, 3), (2, 4)]);
        assert_eq!(enumerate_embeddings(&perm("1"), &perm("12")).len(), 2);
        assert_eq!(enumerate_embeddings(&perm("12"), &perm("21")).len(), 0);
    }

    #[test]
    fn enumerated_embeddings_all_verify() {
        let pattern = perm("231");
        let text = perm("3 1 4 2 5");
        let embs = enumerate_embeddings(&pattern, &text);
        assert!(!embs.is_empty());
        for e in &embs {
            assert_eq!(verify_embedding(&pattern, &text, &e), Ok(true));
        }
    }

    #[test]
    fn labels_321_on_fig_permutation() {
        let t = tau_f1();
        let l = brute_labels_321(&t);
        let fluid: Vec<usize> =
            (1..=t.size()).filter(|&p| !l.upper[p - 1] && !l.lower[p - 1]).map(|p| t.value_at(p)).collect();
        assert_eq!(fluid, vec![4, 5, 11]);
        assert!(!l.contains_321);
        assert!(brute_labels_321(&perm("321")).contains_321);
    }

    #[test]
    fn labels_skew_on_examples() {
        let p = perm("1734256");
        let l = brute_labels_skew(&p);
        let central: Vec<usize> =
            (1..=p.size()).filter(|&q| l.label(q) == SkewLabel::Central).map(|q| p.value_at(q)).collect();
        assert_eq!(central, vec![3, 4]);
        assert!(l.is_skew_merged);
        let all_central = brute_labels_skew(&perm("123"));
        assert!((1..=3).all(|q| all_central.label(q) == SkewLabel::Central));
        assert!(!brute_labels_skew(&perm("2143")).is_skew_merged);
    }

    #[test]
    fn meet_join_of_the_two_inversions() {
        let text = perm("2143");
        let labels = brute_labels_321(&text);
        let embs = enumerate_embeddings(&perm("21"), &text);
        let (meet, join) = meet_join_321(&embs[0], &embs[1], &labels, &text).unwrap();
        assert_eq!(meet.pairs().collect::<Vec<_>>(), vec![(1, 1), (2, 2)]);
        assert_eq!(join.pairs().collect::<Vec<_>>(), vec![(1, 3), (2, 4)]);
        let (m, j) = meet_join_321(&embs[0], &embs[0], &labels, &text).unwrap();
        assert_eq!(m, embs[0]);
        assert_eq!(j, embs[0]);
    }

    #[test]
    fn lis_values() {
        assert_eq!(lis_reference(&perm("1324")), 3);
        assert_eq!(lis_reference(&perm("321")), 1);
        assert_eq!(lis_reference(&Permutation::identity(6)), 6);
        assert_eq!(lis_reference(&perm("")), 0);
        assert_eq!(lds_reference(&perm("1324")), 2);
    }

    #[test]
    fn avoider_counts_at_size_four() {
        assert_eq!(enumerate_avoiders(PermClass::Av321, 4).len(), 14);
        assert_eq!(enumerate_avoiders(PermClass::SkewMerged, 4).len(), 22);
        assert_eq!(enumerate_avoiders(PermClass::Av321, 1), alloc::vec![perm("1")]);
    }

    #[test]
    fn random_avoiders_stay_in_class() {
        for seed in 0..50 {
            let p = random_avoider(PermClass::Av321, 12, seed);
            assert_eq!(p.size(), 12);
            assert!(brute_avoids_321(&p));
            let q = random_avoider(PermClass::SkewMerged, 12, seed);
            assert_eq!(q.size(), 12);
            assert!(brute_is_skew_merged(&q));
        }
        assert_eq!(random_avoider(PermClass::Av321, 1, 7), perm("1"));
        let two = random_avoider(PermClass::Av321, 2, 3);
        assert!(two == perm("12") || two == perm("21"));
    }

    #[test]
    fn random_avoiders_are_deterministic() {
        for seed in [0u64, 1, 99] {
            assert_eq!(
                random_avoider(PermClass::Av321, 64, seed),
                random_avoider(PermClass::Av321, 64, seed)
            );
            assert_eq!(
                random_avoider(PermClass::SkewMerged, 64, seed),
                random_avoider(PermClass::SkewMerged, 64, seed)
            );
        }
    }

    #[test]
    fn dyck_decoding_is_a_bijection_on_small_sizes() {
        // All balanced words of semilength n, decoded, must give exactly the
        // 321-avoiders, each once.
        for n in 1..=6 {
            let avoiders = enumerate_avoiders(PermClass::Av321, n);
            let mut seen = Vec::new();
            let words = 1u32 << (2 * n);
            for w in 0..words {
                let bit = |i: usize| w >> i & 1 == 1;
                if (0..2 * n).map(|i| if bit(i) { 1i32 } else { -1 }).sum::<i32>() != 0 {
                    continue;
                }
                let mut s = 0i32;
                if (0..2 * n).any(|i| {
                    s += if bit(i) { 1 } else { -1 };
                    s < 0
                }) {
                    continue;
                }
                let p = decode_dyck_word(n, bit);
                assert!(brute_avoids_321(&p));
                assert!(!seen.contains(&p), "duplicate decode for n={n}");
                seen.push(p);
            }
            assert_eq!(seen.len(), avoiders.len());
        }
    }
}
