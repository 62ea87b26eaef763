//! The skew-merged matcher: a worklist fixpoint computing the pointwise
//! outermost type-preserving embedding of the pattern's corner elements,
//! followed by a capacity check that places the central elements in the
//! rectangle the corner images leave free.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::match321::{FixpointOutcome, MatchError, MatchResult, ProblemBound};
use crate::perm::{verify_embedding, ElementRef, Embedding, Permutation};
use crate::skew::{strictly_outer, CenterDirection, Corner, SkewDir, SkewLabels};
use crate::PermClass;

/// Computes the bound for the non-central pattern position `x` under the
/// type-preserving mapping `f` (text positions indexed by pattern position,
/// defined on the non-central positions). The element is a problem exactly
/// when its image sits strictly outer than the bound.
pub fn problem_bound_skew(
    f: &[Option<usize>],
    x: usize,
    pattern_labels: &SkewLabels,
    text: &Permutation,
    text_labels: &SkewLabels,
) -> ProblemBound {
    let corner = pattern_labels.label(x).corner().expect("x must be non-central");
    let mut best: Option<usize> = None;
    for (out_dir, in_dir) in [(SkewDir::OutH, SkewDir::InH), (SkewDir::OutV, SkewDir::InV)] {
        let Some(ElementRef(np)) = pattern_labels.step(Some(ElementRef(x)), out_dir) else {
            continue;
        };
        let img = f[np - 1].expect("outward neighbours are mapped");
        match text_labels.typed_seek(Some(ElementRef(img)), in_dir, corner) {
            None => return ProblemBound::Unsatisfiable,
            Some(ElementRef(q)) => {
                // Keep the inner of the two constraints.
                if best.is_none_or(|b| strictly_outer(corner, text.value_at(b), text.value_at(q))) {
                    best = Some(q);
                }
            }
        }
    }
    match best {
        None => ProblemBound::NoConstraint,
        Some(q) => ProblemBound::At(ElementRef(q)),
    }
}

/// Finds the pointwise outermost type-preserving embedding of the pattern's
/// non-central elements into the text, or reports that none exists.
///
/// Starts from the map sending every corner element to the outermost text
/// element of its corner, then repairs problems in FIFO order; each repair
/// moves one image inward along its chain, and only the inward pattern
/// neighbours of a repaired element need re-examination.
pub fn min_noncentral_embedding(
    pattern: &Permutation,
    pattern_labels: &SkewLabels,
    text: &Permutation,
    text_labels: &SkewLabels,
) -> FixpointOutcome {
    let k = pattern.size();
    let n = text.size();
    let mut iterations = 0u64;

    let noncentral: Vec<usize> =
        (1..=k).filter(|&p| pattern_labels.label(p) != crate::skew::SkewLabel::Central).collect();
    let mut f: Vec<Option<usize>> = alloc::vec![None; k];
    for &pos in &noncentral {
        let corner = pattern_labels.label(pos).corner().expect("filtered to corners");
        match text_labels.outermost(corner) {
            Some(ElementRef(q)) => f[pos - 1] = Some(q),
            None => return FixpointOutcome { embedding: None, iterations },
        }
    }

    let budget = (k as u64) * (n as u64);
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut queued = alloc::vec![false; k];
    let is_problem = |f: &[Option<usize>], x: usize| {
        match problem_bound_skew(f, x, pattern_labels, text, text_labels) {
            ProblemBound::NoConstraint => None,
            ProblemBound::Unsatisfiable => Some(None),
            ProblemBound::At(ElementRef(q)) => {
                let corner = pattern_labels.label(x).corner().expect("non-central");
                let img = f[x - 1].expect("non-central positions are mapped");
                strictly_outer(corner, text.value_at(img), text.value_at(q)).then_some(Some(q))
            }
        }
    };

    for &pos in &noncentral {
        if is_problem(&f, pos).is_some() {
            queued[pos - 1] = true;
            queue.push_back(pos);
        }
    }

    while let Some(x) = queue.pop_front() {
        queued[x - 1] = false;
        let Some(bound) = is_problem(&f, x) else { continue };
        iterations += 1;
        assert!(iterations <= budget, "fixpoint exceeded its iteration budget");
        let Some(q) = bound else {
            return FixpointOutcome { embedding: None, iterations };
        };
        f[x - 1] = Some(q);
        for dir in [SkewDir::InH, SkewDir::InV] {
            let Some(ElementRef(y)) = pattern_labels.step(Some(ElementRef(x)), dir) else {
                continue;
            };
            if !queued[y - 1] && is_problem(&f, y).is_some() {
                debug_assert!(!queued[y - 1], "no duplicates in the problem queue");
                queued[y - 1] = true;
                queue.push_back(y);
            }
        }
    }

    let mut e = Embedding::new(k);
    for (i, q) in f.iter().enumerate() {
        if let Some(q) = q {
            e.set(i + 1, *q);
        }
    }
    FixpointOutcome { embedding: Some(e), iterations }
}

/// The part of the text still available to the pattern's central elements
/// after the corner images are fixed: everything strictly inside the
/// rectangle spanned by the innermost images on each side.
#[derive(Debug, Clone)]
pub struct Region {
    /// Exclusive position bound on the left (0 when no West image).
    pub pos_low: usize,
    /// Exclusive position bound on the right (n + 1 when no East image).
    pub pos_high: usize,
    /// Exclusive value bound from below (0 when no South image).
    pub val_low: usize,
    /// Exclusive value bound from above (n + 1 when no North image).
    pub val_high: usize,
    /// Text positions strictly inside the rectangle, in order.
    pub members: Vec<usize>,
    /// The pattern of the member points.
    pub subpattern: Permutation,
    /// Region labels recomputed on the subpattern.
    pub sublabels: SkewLabels,
}

/// Cuts the remaining rectangle out of the text, given the minimum
/// embedding of the pattern's non-central part.
pub fn remaining_region(
    text: &Permutation,
    partial: &Embedding,
    pattern_labels: &SkewLabels,
) -> Region {
    let n = text.size();
    let mut pos_low = 0usize;
    let mut pos_high = n + 1;
    let mut val_low = 0usize;
    let mut val_high = n + 1;
    for (ppos, tpos) in partial.pairs() {
        let label = pattern_labels.label(ppos);
        let tval = text.value_at(tpos);
        if label.is_west() {
            pos_low = pos_low.max(tpos);
        }
        if label.is_east() {
            pos_high = pos_high.min(tpos);
        }
        if label.is_south() {
            val_low = val_low.max(tval);
        }
        if label.is_north() {
            val_high = val_high.min(tval);
        }
    }
    let members: Vec<usize> = (pos_low + 1..pos_high)
        .filter(|&q| {
            let v = text.value_at(q);
            v > val_low && v < val_high
        })
        .collect();
    let subpattern = text.normalize_subsequence(&members).expect("members are increasing positions");
    let sublabels = SkewLabels::new(&subpattern);
    debug_assert!(sublabels.is_skew_merged(), "subpermutations stay in the class");
    Region { pos_low, pos_high, val_low, val_high, members, subpattern, sublabels }
}

/// Lengths of the longest increasing and decreasing subsequences of the
/// region, read off its labels: corner chains on the matching diagonal
/// contribute fully, the centre contributes everything when its direction
/// matches and at most one element otherwise.
pub fn monotone_capacity(region: &Region) -> (usize, usize) {
    let l = &region.sublabels;
    let sw = l.chain(Corner::Sw).len();
    let ne = l.chain(Corner::Ne).len();
    let nw = l.chain(Corner::Nw).len();
    let se = l.chain(Corner::Se).len();
    let central = l.central_positions().len();
    let lis = sw
        + ne
        + match l.center_direction() {
            CenterDirection::Increasing | CenterDirection::Trivial => central,
            CenterDirection::Decreasing => central.min(1),
        };
    let lds = nw
        + se
        + match l.center_direction() {
            CenterDirection::Decreasing | CenterDirection::Trivial => central,
            CenterDirection::Increasing => central.min(1),
        };
    (lis, lds)
}

/// Decides whether `text` contains `pattern`, both skew-merged, and returns
/// a witness embedding when it does.
pub fn match_skew_merged(
    pattern: &Permutation,
    text: &Permutation,
) -> Result<MatchResult, MatchError> {
    let pattern_labels = SkewLabels::new(pattern);
    if !pattern_labels.is_skew_merged() {
        return Err(MatchError::PatternOutsideClass(PermClass::SkewMerged));
    }
    let text_labels = SkewLabels::new(text);
    if !text_labels.is_skew_merged() {
        return Err(MatchError::TextOutsideClass(PermClass::SkewMerged));
    }

    let k = pattern.size();
    let n = text.size();
    if k == 0 {
        return Ok(MatchResult { embedding: Some(Embedding::new(0)), iterations: 0 });
    }
    if k > n {
        return Ok(MatchResult { embedding: None, iterations: 0 });
    }

    let out = min_noncentral_embedding(pattern, &pattern_labels, text, &text_labels);
    let iterations = out.iterations;
    let Some(partial) = out.embedding else {
        return Ok(MatchResult { embedding: None, iterations });
    };

    let central = pattern_labels.central_positions();
    if central.is_empty() {
        assert_eq!(
            verify_embedding(pattern, text, &partial),
            Ok(true),
            "produced assignment failed verification"
        );
        return Ok(MatchResult { embedding: Some(partial), iterations });
    }

    let region = remaining_region(text, &partial, &pattern_labels);
    let (lis, lds) = monotone_capacity(&region);
    let c = central.len();
    let can_increase =
        matches!(pattern_labels.center_direction(), CenterDirection::Increasing | CenterDirection::Trivial)
            && c <= lis;
    let can_decrease =
        matches!(pattern_labels.center_direction(), CenterDirection::Decreasing | CenterDirection::Trivial)
            && c <= lds;
    if !can_increase && !can_decrease {
        return Ok(MatchResult { embedding: None, iterations });
    }

    let witness = monotone_witness(&region, can_increase);
    debug_assert!(witness.len() >= c);
    let mut embedding = partial;
    for (&ppos, &tpos) in central.iter().zip(witness.iter()) {
        embedding.set(ppos as usize, tpos);
    }
    assert_eq!(
        verify_embedding(pattern, text, &embedding),
        Ok(true),
        "produced assignment failed verification"
    );
    Ok(MatchResult { embedding: Some(embedding), iterations })
}

/// A maximal monotone sequence of text positions through the region:
/// the outer corner chain on the matching diagonal, then the centre (all of
/// it when its direction matches, else its leftmost element), then the
/// other corner chain. The region's band structure makes the concatenation
/// monotone.
fn monotone_witness(region: &Region, increasing: bool) -> Vec<usize> {
    let l = &region.sublabels;
    let to_text = |q: &u32| region.members[*q as usize - 1];
    let (first, second) = if increasing { (Corner::Sw, Corner::Ne) } else { (Corner::Nw, Corner::Se) };
    let center_matches = match l.center_direction() {
        CenterDirection::Trivial => true,
        CenterDirection::Increasing => increasing,
        CenterDirection::Decreasing => !increasing,
    };
    let mut witness: Vec<usize> = l.chain(first).iter().map(to_text).collect();
    let central = l.central_positions();
    if center_matches {
        witness.extend(central.iter().map(to_text));
    } else {
        witness.extend(central.first().map(to_text));
    }
    witness.extend(l.chain(second).iter().map(to_text));
    witness
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use crate::skew::SkewLabel;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn pi_f3() -> Permutation {
        perm("1734256")
    }

    fn tau_f3() -> Permutation {
        perm("10 1 9 3 5 4 6 2 7 8")
    }

    fn value_map(pattern: &Permutation, text: &Permutation, e: &Embedding) -> Vec<(usize, usize)> {
        e.pairs().map(|(p, t)| (pattern.value_at(p), text.value_at(t))).collect()
    }

    #[test]
    fn bounds_along_the_worked_run() {
        let pattern = pi_f3();
        let text = tau_f3();
        let pl = SkewLabels::new(&pattern);
        let tl = SkewLabels::new(&text);
        // f0: 1 -> 1, 7 -> 10, 2 -> 2, 5 -> 8, 6 -> 8 as values.
        let at = |v: usize| Some(text.position_of(v));
        let mut f: Vec<Option<usize>> = alloc::vec![None; 7];
        f[0] = at(1);
        f[1] = at(10);
        f[4] = at(2);
        f[5] = at(8);
        f[6] = at(8);
        let x5 = pattern.position_of(5);
        assert_eq!(
            problem_bound_skew(&f, x5, &pl, &text, &tl),
            ProblemBound::At(ElementRef(text.position_of(7)))
        );
        let x7 = pattern.position_of(7);
        assert_eq!(
            problem_bound_skew(&f, x7, &pl, &text, &tl),
            ProblemBound::At(ElementRef(text.position_of(9)))
        );
        // After resolving both, 6 is bounded by 8 and is not a problem.
        f[5] = at(7);
        f[1] = at(9);
        let x6 = pattern.position_of(6);
        assert_eq!(
            problem_bound_skew(&f, x6, &pl, &text, &tl),
            ProblemBound::At(ElementRef(text.position_of(8)))
        );
    }

    #[test]
    fn minimum_noncentral_embedding_of_the_worked_example() {
        let pattern = pi_f3();
        let text = tau_f3();
        let out = min_noncentral_embedding(
            &pattern,
            &SkewLabels::new(&pattern),
            &text,
            &SkewLabels::new(&text),
        );
        let e = out.embedding.expect("embedding exists");
        assert_eq!(
            value_map(&pattern, &text, &e),
            vec![(1, 1), (7, 9), (2, 2), (5, 7), (6, 8)]
        );
        assert_eq!(out.iterations, 2);
    }

    #[test]
    fn noncentral_embedding_edge_cases() {
        let text = tau_f3();
        let tl = SkewLabels::new(&text);
        // A pattern with no corner elements embeds with an empty partial map.
        let p = perm("123");
        let out = min_noncentral_embedding(&p, &SkewLabels::new(&p), &text, &tl);
        assert_eq!(out.embedding.unwrap().domain_size(), 0);
        // A single NW element goes to the outermost NW element.
        let p = perm("312");
        let out = min_noncentral_embedding(&p, &SkewLabels::new(&p), &text, &tl);
        let e = out.embedding.unwrap();
        assert_eq!(value_map(&p, &text, &e), vec![(3, 10)]);
        assert_eq!(out.iterations, 0);
    }

    #[test]
    fn region_of_the_worked_example() {
        let pattern = pi_f3();
        let text = tau_f3();
        let pl = SkewLabels::new(&pattern);
        let out = min_noncentral_embedding(&pattern, &pl, &text, &SkewLabels::new(&text));
        let region = remaining_region(&text, &out.embedding.unwrap(), &pl);
        assert_eq!(
            (region.pos_low, region.pos_high, region.val_low, region.val_high),
            (3, 8, 2, 7)
        );
        let member_values: Vec<usize> = region.members.iter().map(|&q| text.value_at(q)).collect();
        assert_eq!(member_values, vec![3, 5, 4, 6]);
        assert_eq!(region.subpattern, perm("1324"));
        assert_eq!(monotone_capacity(&region), (3, 2));
    }

    #[test]
    fn region_defaults_to_the_whole_text() {
        let text = tau_f3();
        let pl = SkewLabels::new(&perm("123"));
        let region = remaining_region(&text, &Embedding::new(3), &pl);
        assert_eq!(
            (region.pos_low, region.pos_high, region.val_low, region.val_high),
            (0, 11, 0, 11)
        );
        assert_eq!(region.members.len(), 10);

        let p = perm("312");
        let pl = SkewLabels::new(&p);
        let out = min_noncentral_embedding(&p, &pl, &text, &SkewLabels::new(&text));
        let region = remaining_region(&text, &out.embedding.unwrap(), &pl);
        assert_eq!(
            (region.pos_low, region.pos_high, region.val_low, region.val_high),
            (1, 11, 0, 10)
        );
    }

    #[test]
    fn capacity_edge_cases() {
        let empty_labels = SkewLabels::new(&perm(""));
        let inc = perm("123");
        let region = remaining_region(&inc, &Embedding::new(0), &empty_labels);
        assert_eq!(monotone_capacity(&region), (3, 1));
        let empty = remaining_region(&perm(""), &Embedding::new(0), &empty_labels);
        assert_eq!(monotone_capacity(&empty), (0, 0));
    }

    #[test]
    fn match_extends_to_the_central_elements() {
        let pattern = pi_f3();
        let text = tau_f3();
        let result = match_skew_merged(&pattern, &text).unwrap();
        let e = result.embedding.expect("found");
        let map = value_map(&pattern, &text, &e);
        assert!(map.contains(&(3, 3)));
        assert!(map.contains(&(4, 5)));
        assert_eq!(verify_embedding(&pattern, &text, &e), Ok(true));
    }

    #[test]
    fn match_simple_outcomes() {
        assert!(!match_skew_merged(&perm("321"), &perm("123")).unwrap().found());
        let result = match_skew_merged(&perm("4321"), &tau_f3()).unwrap();
        let e = result.embedding.expect("found");
        let images: Vec<usize> = e.pairs().map(|(_, t)| tau_f3().value_at(t)).collect();
        assert_eq!(images, vec![10, 9, 5, 4]);
        assert!(match_skew_merged(&perm(""), &perm("")).unwrap().found());
        assert!(!match_skew_merged(&perm("12"), &perm("1")).unwrap().found());
    }

    #[test]
    fn class_violations_are_errors() {
        assert_eq!(
            match_skew_merged(&perm("2143"), &tau_f3()),
            Err(MatchError::PatternOutsideClass(PermClass::SkewMerged))
        );
        assert_eq!(
            match_skew_merged(&perm("12"), &perm("3412")),
            Err(MatchError::TextOutsideClass(PermClass::SkewMerged))
        );
    }

    #[test]
    fn central_only_patterns_use_both_directions() {
        // 123 needs the increasing witness, 321 the decreasing one.
        assert!(match_skew_merged(&perm("123"), &tau_f3()).unwrap().found());
        assert!(match_skew_merged(&perm("321"), &tau_f3()).unwrap().found());
        assert!(!match_skew_merged(&perm("1234567"), &tau_f3()).unwrap().found());
    }

    #[test]
    fn noncentral_labels_where_expected() {
        let l = SkewLabels::new(&pi_f3());
        let labels: Vec<SkewLabel> = l.labels().collect();
        assert_eq!(
            labels,
            vec![
                SkewLabel::Sw,
                SkewLabel::Nw,
                SkewLabel::Central,
                SkewLabel::Central,
                SkewLabel::Se,
                SkewLabel::Ne,
                SkewLabel::Ne
            ]
        );
    }
}
