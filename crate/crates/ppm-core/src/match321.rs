//! The 321-avoiding matcher: a worklist fixpoint computing the minimum
//! embedding of a rigid pattern into a frontier-restricted region of the
//! text, and the block-by-block driver that carries at most two candidate
//! embeddings across the direct-sum decomposition of the pattern.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::classify321::{Block, BlockDecomposition, Labels321, RigidType};
use crate::perm::{verify_embedding, Direction, ElementRef, Embedding, Permutation};
use crate::PermClass;

/// Inputs to `match_321` and `match_skew_merged` must lie in the advertised
/// class; anything else is rejected up front.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("pattern is not {0}")]
    PatternOutsideClass(PermClass),
    #[error("text is not {0}")]
    TextOutsideClass(PermClass),
}

/// The corner of the rectangle strictly above and to the right of a partial
/// embedding's images; (0, 0) when nothing is placed yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frontier {
    pub max_pos: usize,
    pub max_val: usize,
}

impl Frontier {
    pub const EMPTY: Frontier = Frontier { max_pos: 0, max_val: 0 };

    /// True iff every extension available to `other` is also available to
    /// `self`: the smaller corner sees the larger rectangle.
    pub fn dominates(&self, other: &Frontier) -> bool {
        self.max_pos <= other.max_pos && self.max_val <= other.max_val
    }
}

/// Outcome of one fixpoint run: the embedding when it exists, plus the
/// number of resolved problems.
#[derive(Debug, Clone)]
pub struct FixpointOutcome {
    pub embedding: Option<Embedding>,
    pub iterations: u64,
}

/// Outcome of a full match: the witness embedding when the pattern is
/// contained, plus the total number of resolved problems across all
/// fixpoint runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchResult {
    pub embedding: Option<Embedding>,
    pub iterations: u64,
}

impl MatchResult {
    pub fn found(&self) -> bool {
        self.embedding.is_some()
    }
}

/// Candidate frontiers that survive pruning after each block, in creation
/// order.
#[derive(Debug, Clone, Default)]
pub struct MatchTrace {
    pub blocks: Vec<BlockTrace>,
}

#[derive(Debug, Clone)]
pub struct BlockTrace {
    pub frontiers: Vec<Frontier>,
}

/// The least admissible image of a pattern element under the current
/// mapping, derived from the images of its left and lower neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemBound {
    /// The element has no left or lower neighbour; any image is admissible.
    NoConstraint,
    /// The least admissible image.
    At(ElementRef),
    /// A constraining chain has run off the text: no admissible image
    /// exists now or after any later update.
    Unsatisfiable,
}

/// Computes the bound for pattern position `x` under the rigid mapping `f`
/// (text positions indexed by pattern position, total). The element is a
/// problem exactly when its current image sits strictly below the bound in
/// its type chain.
pub fn problem_bound_321(
    f: &[usize],
    x: usize,
    pattern: &Permutation,
    pattern_labels: &Labels321,
    text: &Permutation,
    text_labels: &Labels321,
) -> ProblemBound {
    let t = pattern_labels.label(x).rigid_type().expect("pattern must be rigid");
    let left = (x > 1).then(|| x - 1);
    let down = {
        let v = pattern.value_at(x);
        (v > 1).then(|| pattern.position_of(v - 1))
    };
    let mut best: Option<usize> = None;
    for (neighbor, dir) in [(left, Direction::Right), (down, Direction::Up)] {
        let Some(np) = neighbor else { continue };
        let img = ElementRef(f[np - 1]);
        match text_labels.typed_next(Some(img), dir, t) {
            None => return ProblemBound::Unsatisfiable,
            Some(ElementRef(q)) => {
                if best.is_none_or(|b| text.value_at(q) > text.value_at(b)) {
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

/// Smallest element of the chain strictly inside the frontier rectangle.
/// Chains increase in both coordinates, so the answer sits at the later of
/// the two partition points.
fn first_inside(chain: &[u32], text: &Permutation, frontier: Frontier) -> Option<usize> {
    let i = chain
        .partition_point(|&q| q as usize <= frontier.max_pos)
        .max(chain.partition_point(|&q| text.value_at(q as usize) <= frontier.max_val));
    chain.get(i).map(|&q| q as usize)
}

/// Finds the pointwise least embedding of a rigid pattern into the part of
/// the text strictly above and to the right of `frontier`, or reports that
/// none exists.
///
/// Starts from the map sending every upper element to the least upper text
/// element inside the rectangle and every lower element to the least lower
/// one, then repairs problems in FIFO order; each repair moves one image up
/// its chain, and only the right and upper pattern neighbours of a repaired
/// element need re-examination.
pub fn min_rigid_embedding(
    pattern: &Permutation,
    pattern_labels: &Labels321,
    text: &Permutation,
    text_labels: &Labels321,
    frontier: Frontier,
) -> FixpointOutcome {
    let k = pattern.size();
    let n = text.size();
    let mut iterations = 0u64;
    if k == 0 {
        return FixpointOutcome { embedding: Some(Embedding::new(0)), iterations };
    }

    let least_upper = first_inside(text_labels.chain(RigidType::Upper), text, frontier);
    let least_lower = first_inside(text_labels.chain(RigidType::Lower), text, frontier);
    let mut f = alloc::vec![0usize; k];
    for pos in 1..=k {
        let t = pattern_labels.label(pos).rigid_type().expect("pattern must be rigid");
        let least = match t {
            RigidType::Upper => least_upper,
            RigidType::Lower => least_lower,
        };
        match least {
            Some(q) => f[pos - 1] = q,
            None => return FixpointOutcome { embedding: None, iterations },
        }
    }

    let budget = (k as u64) * (n as u64);
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut queued = alloc::vec![false; k];
    let enqueue = |queue: &mut VecDeque<usize>, queued: &mut [bool], x: usize| {
        debug_assert!(!queued[x - 1], "no duplicates in the problem queue");
        queued[x - 1] = true;
        queue.push_back(x);
    };
    let is_problem = |f: &[usize], x: usize| match problem_bound_321(
        f,
        x,
        pattern,
        pattern_labels,
        text,
        text_labels,
    ) {
        ProblemBound::NoConstraint => None,
        ProblemBound::Unsatisfiable => Some(None),
        ProblemBound::At(ElementRef(q)) => {
            (text.value_at(f[x - 1]) < text.value_at(q)).then_some(Some(q))
        }
    };

    for pos in 1..=k {
        if is_problem(&f, pos).is_some() {
            enqueue(&mut queue, &mut queued, pos);
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
        f[x - 1] = q;
        let right = (x < k).then(|| x + 1);
        let up = {
            let v = pattern.value_at(x);
            (v < k).then(|| pattern.position_of(v + 1))
        };
        for y in [right, up].into_iter().flatten() {
            if !queued[y - 1] && is_problem(&f, y).is_some() {
                enqueue(&mut queue, &mut queued, y);
            }
        }
    }

    let mut e = Embedding::new(k);
    for (i, &q) in f.iter().enumerate() {
        e.set(i + 1, q);
    }
    FixpointOutcome { embedding: Some(e), iterations }
}

#[derive(Clone)]
struct Candidate {
    embedding: Embedding,
    frontier: Frontier,
}

/// Decides whether `text` contains `pattern`, both 321-avoiding, and
/// returns a witness embedding when it does.
pub fn match_321(pattern: &Permutation, text: &Permutation) -> Result<MatchResult, MatchError> {
    match_321_impl(pattern, text, false).map(|(r, _)| r)
}

/// As `match_321`, also reporting the surviving candidate frontiers after
/// every block of the pattern.
pub fn match_321_traced(
    pattern: &Permutation,
    text: &Permutation,
) -> Result<(MatchResult, MatchTrace), MatchError> {
    match_321_impl(pattern, text, true).map(|(r, t)| (r, t.unwrap_or_default()))
}

fn match_321_impl(
    pattern: &Permutation,
    text: &Permutation,
    want_trace: bool,
) -> Result<(MatchResult, Option<MatchTrace>), MatchError> {
    let pattern_labels = Labels321::new(pattern);
    if !pattern_labels.is_avoider() {
        return Err(MatchError::PatternOutsideClass(PermClass::Av321));
    }
    let text_labels = Labels321::new(text);
    if !text_labels.is_avoider() {
        return Err(MatchError::TextOutsideClass(PermClass::Av321));
    }

    let k = pattern.size();
    let n = text.size();
    let mut trace = want_trace.then(MatchTrace::default);
    if k == 0 {
        let result = MatchResult { embedding: Some(Embedding::new(0)), iterations: 0 };
        return Ok((result, trace));
    }
    if k > n {
        return Ok((MatchResult { embedding: None, iterations: 0 }, trace));
    }

    let decomposition = BlockDecomposition::new(pattern, &pattern_labels);
    let mut iterations = 0u64;
    let mut candidates =
        alloc::vec![Candidate { embedding: Embedding::new(k), frontier: Frontier::EMPTY }];

    for block in decomposition.blocks() {
        let mut extended: Vec<Candidate> = Vec::new();
        match block {
            Block::Rigid { start, end: _, pattern: block_pattern } => {
                let block_labels = Labels321::new(block_pattern);
                for cand in &candidates {
                    let out = min_rigid_embedding(
                        block_pattern,
                        &block_labels,
                        text,
                        &text_labels,
                        cand.frontier,
                    );
                    iterations += out.iterations;
                    let Some(block_embedding) = out.embedding else { continue };
                    let mut embedding = cand.embedding.clone();
                    let mut frontier = Frontier::EMPTY;
                    for (bpos, tpos) in block_embedding.pairs() {
                        embedding.set(*start + bpos - 1, tpos);
                        frontier.max_pos = frontier.max_pos.max(tpos);
                        frontier.max_val = frontier.max_val.max(text.value_at(tpos));
                    }
                    extended.push(Candidate { embedding, frontier });
                }
            }
            Block::Singleton { pos } => {
                for cand in &candidates {
                    let inside = [
                        first_inside(text_labels.chain(RigidType::Upper), text, cand.frontier),
                        first_inside(text_labels.chain(RigidType::Lower), text, cand.frontier),
                        first_inside(text_labels.fluid_chain(), text, cand.frontier),
                    ];
                    let leftmost = inside.iter().flatten().copied().min_by_key(|&q| q);
                    let minimum = inside.iter().flatten().copied().min_by_key(|&q| text.value_at(q));
                    let Some(leftmost) = leftmost else { continue };
                    let minimum = minimum.expect("regions agree on emptiness");
                    let mut targets = alloc::vec![leftmost];
                    if minimum != leftmost {
                        targets.push(minimum);
                    }
                    for q in targets {
                        let mut embedding = cand.embedding.clone();
                        embedding.set(*pos, q);
                        let frontier = Frontier { max_pos: q, max_val: text.value_at(q) };
                        extended.push(Candidate { embedding, frontier });
                    }
                }
            }
        }

        let survivors = prune(extended);
        assert!(survivors.len() <= 2, "more than two candidates survived pruning");
        if let Some(t) = &mut trace {
            t.blocks.push(BlockTrace { frontiers: survivors.iter().map(|c| c.frontier).collect() });
        }
        if survivors.is_empty() {
            return Ok((MatchResult { embedding: None, iterations }, trace));
        }
        candidates = survivors;
    }

    let best = candidates
        .into_iter()
        .min_by_key(|c| (c.frontier.max_pos, c.frontier.max_val))
        .expect("at least one candidate survived");
    assert_eq!(
        verify_embedding(pattern, text, &best.embedding),
        Ok(true),
        "produced assignment failed verification"
    );
    Ok((MatchResult { embedding: Some(best.embedding), iterations }, trace))
}

/// Keeps only candidates whose frontier is not dominated by another's; on
/// equal frontiers the earlier-created candidate wins.
fn prune(candidates: Vec<Candidate>) -> Vec<Candidate> {
    let frontiers: Vec<Frontier> = candidates.iter().map(|c| c.frontier).collect();
    candidates
        .into_iter()
        .enumerate()
        .filter(|(i, c)| {
            !frontiers.iter().enumerate().any(|(j, f)| {
                j != *i && f.dominates(&c.frontier) && (*f != c.frontier || j < *i)
            })
        })
        .map(|(_, c)| c)
        .collect()
}
