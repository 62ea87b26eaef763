//! The fast matchers against the brute-force oracle and their lattice and
//! minimality properties on small instances. The full size-8 sweeps live in
//! the acceptance suite.

use ppm_core::oracle::{
    brute_contains, brute_labels_321, brute_labels_skew, enumerate_avoiders, enumerate_embeddings,
    meet_join_321, outer_meet_skew,
};
use ppm_core::{
    match_321, match_skew_merged, min_noncentral_embedding, min_rigid_embedding, skew,
    verify_embedding, Embedding, Frontier, Label321, Labels321, PermClass, Permutation, SkewLabel,
    SkewLabels,
};

fn avoiders_up_to(class: PermClass, max: usize) -> Vec<Vec<Permutation>> {
    (0..=max).map(|n| enumerate_avoiders(class, n)).collect()
}

#[test]
fn match_321_agrees_with_oracle_up_to_seven() {
    let by_size = avoiders_up_to(PermClass::Av321, 7);
    for n in 1..=7 {
        for text in &by_size[n] {
            for k in 1..=n {
                for pattern in &by_size[k] {
                    let result = match_321(pattern, text).unwrap();
                    assert_eq!(
                        result.found(),
                        brute_contains(pattern, text),
                        "disagreement on {pattern} in {text}"
                    );
                    assert!(result.iterations <= (k * n) as u64);
                    if let Some(e) = &result.embedding {
                        assert_eq!(verify_embedding(pattern, text, e), Ok(true));
                    }
                }
            }
        }
    }
}

#[test]
fn match_skew_agrees_with_oracle_up_to_six() {
    let by_size = avoiders_up_to(PermClass::SkewMerged, 6);
    for n in 1..=6 {
        for text in &by_size[n] {
            for k in 1..=n {
                for pattern in &by_size[k] {
                    let result = match_skew_merged(pattern, text).unwrap();
                    assert_eq!(
                        result.found(),
                        brute_contains(pattern, text),
                        "disagreement on {pattern} in {text}"
                    );
                    assert!(result.iterations <= (k * n) as u64);
                    if let Some(e) = &result.embedding {
                        assert_eq!(verify_embedding(pattern, text, e), Ok(true));
                    }
                }
            }
        }
    }
}

fn is_rigid(labels: &Labels321) -> bool {
    labels.labels().all(|l| l != Label321::Fluid)
}

/// The fixpoint result is pointwise at or below every embedding, in the
/// per-type value order.
#[test]
fn rigid_minimum_is_pointwise_least_up_to_seven() {
    let by_size = avoiders_up_to(PermClass::Av321, 7);
    for k in 2..=7 {
        let rigid: Vec<(&Permutation, Labels321)> = by_size[k]
            .iter()
            .map(|p| (p, Labels321::new(p)))
            .filter(|(_, l)| is_rigid(l))
            .collect();
        for n in k..=7 {
            for text in &by_size[n] {
                let tl = Labels321::new(text);
                for (pattern, pl) in &rigid {
                    let all = enumerate_embeddings(pattern, text);
                    let out = min_rigid_embedding(pattern, pl, text, &tl, Frontier::EMPTY);
                    match out.embedding {
                        None => assert!(all.is_empty(), "missed embedding of {pattern} in {text}"),
                        Some(min) => {
                            assert!(!all.is_empty(), "phantom embedding of {pattern} in {text}");
                            for e in &all {
                                for pos in 1..=pattern.size() {
                                    let got = text.value_at(min.get(pos).unwrap());
                                    let other = text.value_at(e.get(pos).unwrap());
                                    assert!(got <= other, "non-minimal at {pos}: {pattern} in {text}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Meets and joins of embeddings of rigid patterns are embeddings again.
#[test]
fn lattice_closure_up_to_six() {
    let by_size = avoiders_up_to(PermClass::Av321, 6);
    for k in 2..=6 {
        for n in k..=6 {
            for text in &by_size[n] {
                let brute = brute_labels_321(text);
                for pattern in &by_size[k] {
                    if !is_rigid(&Labels321::new(pattern)) {
                        continue;
                    }
                    let all = enumerate_embeddings(pattern, text);
                    for e1 in &all {
                        for e2 in &all {
                            let (meet, join) = meet_join_321(e1, e2, &brute, text).unwrap();
                            assert_eq!(verify_embedding(pattern, text, &meet), Ok(true));
                            assert_eq!(verify_embedding(pattern, text, &join), Ok(true));
                        }
                    }
                }
            }
        }
    }
}

fn restrict_to_noncentral(e: &Embedding, labels: &SkewLabels) -> Embedding {
    let mut out = Embedding::new(e.pattern_size());
    for (p, t) in e.pairs() {
        if labels.label(p) != SkewLabel::Central {
            out.set(p, t);
        }
    }
    out
}

/// The skew fixpoint result is pointwise outermost among the restrictions
/// of all full embeddings.
#[test]
fn skew_minimum_is_pointwise_outermost_up_to_six() {
    let by_size = avoiders_up_to(PermClass::SkewMerged, 6);
    for k in 1..=6 {
        for n in k..=6 {
            for text in &by_size[n] {
                let tl = SkewLabels::new(text);
                for pattern in &by_size[k] {
                    let pl = SkewLabels::new(pattern);
                    let all = enumerate_embeddings(pattern, text);
                    let out = min_noncentral_embedding(pattern, &pl, text, &tl);
                    if all.is_empty() {
                        continue;
                    }
                    let min = out.embedding.unwrap_or_else(|| {
                        panic!("non-central part of {pattern} must embed into {text}")
                    });
                    for e in &all {
                        for pos in 1..=pattern.size() {
                            let Some(corner) = pl.label(pos).corner() else { continue };
                            let got = text.value_at(min.get(pos).unwrap());
                            let other = text.value_at(e.get(pos).unwrap());
                            assert!(
                                got == other || skew::strictly_outer(corner, got, other),
                                "not outermost at {pos}: {pattern} in {text}"
                            );
                        }
                    }
                }
            }
        }
    }
}

/// Outer-meets of embeddings of central-free skew patterns are embeddings.
#[test]
fn skew_meet_closure_up_to_six() {
    let by_size = avoiders_up_to(PermClass::SkewMerged, 6);
    for k in 4..=6 {
        for n in k..=6 {
            for text in &by_size[n] {
                let brute = brute_labels_skew(text);
                for pattern in &by_size[k] {
                    let pl = SkewLabels::new(pattern);
                    if pl.labels().any(|l| l == SkewLabel::Central) {
                        continue;
                    }
                    let all = enumerate_embeddings(pattern, text);
                    for e1 in &all {
                        for e2 in &all {
                            let meet = outer_meet_skew(e1, e2, &brute, text).unwrap();
                            assert_eq!(verify_embedding(pattern, text, &meet), Ok(true));
                        }
                    }
                }
            }
        }
    }
}
