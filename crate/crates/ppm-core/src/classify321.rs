//! Linear-time structure of 321-avoiding permutations: the upper/lower/fluid
//! labelling, typed nearest-neighbour tables, and the decomposition into
//! direct-sum blocks.
//!
//! An element is upper if it is the 2 of some 21 and lower if it is the 1 of
//! some 21; a single left-to-right scan recovers both roles. In a
//! 321-avoider the two roles cannot coincide, the upper elements form one
//! increasing subsequence and the lower elements another, and the leftover
//! fluid elements are exactly the points that are simultaneously
//! left-to-right maxima and right-to-left minima.

use alloc::vec::Vec;
use core::num::NonZeroU32;

use crate::perm::{direct_sum, Direction, ElementRef, Permutation};

/// Role of an element of a 321-avoiding permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label321 {
    Upper,
    Lower,
    Fluid,
}

/// The two rigid roles; targets for the typed neighbour tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RigidType {
    Upper,
    Lower,
}

impl RigidType {
    fn index(self) -> usize {
        match self {
            RigidType::Upper => 0,
            RigidType::Lower => 1,
        }
    }

    fn label(self) -> Label321 {
        match self {
            RigidType::Upper => Label321::Upper,
            RigidType::Lower => Label321::Lower,
        }
    }
}

impl Label321 {
    /// The rigid role, if any.
    pub fn rigid_type(self) -> Option<RigidType> {
        match self {
            Label321::Upper => Some(RigidType::Upper),
            Label321::Lower => Some(RigidType::Lower),
            Label321::Fluid => None,
        }
    }
}

fn dir_index(dir: Direction) -> usize {
    match dir {
        Direction::Left => 0,
        Direction::Right => 1,
        Direction::Up => 2,
        Direction::Down => 3,
    }
}

/// Upper/lower/fluid labels of a permutation together with, for every
/// element, the nearest element of each rigid type in each of the four
/// directions.
///
/// When the permutation contains 321 the labels are still the definitional
/// roles but no longer partition the permutation meaningfully; `is_avoider`
/// gates their use.
#[derive(Debug, Clone)]
pub struct Labels321 {
    labels: Vec<Label321>,
    is_avoider: bool,
    // next[d][t][p-1] = nearest element of type t strictly in direction d of p.
    next: [[Vec<Option<NonZeroU32>>; 2]; 4],
    // Positions of each role in left-to-right order; within the upper and
    // lower chains values increase as well (for avoiders).
    upper_chain: Vec<u32>,
    lower_chain: Vec<u32>,
    fluid_chain: Vec<u32>,
}

impl Labels321 {
    /// Labels the permutation with one scan, flags 321 containment, and
    /// materialises the typed neighbour tables with eight more scans.
    pub fn new(p: &Permutation) -> Self {
        let n = p.size();
        let mut labels = Vec::with_capacity(n);
        let mut is_avoider = true;

        // Smallest value still to come strictly to the right of each position.
        let mut suffix_min = alloc::vec![0usize; n + 1];
        suffix_min[n] = usize::MAX;
        for pos in (1..=n).rev() {
            suffix_min[pos - 1] = suffix_min[pos].min(p.value_at(pos));
        }
        let mut max_so_far = 0usize;
        for pos in 1..=n {
            let x = p.value_at(pos);
            let upper = x > suffix_min[pos];
            let lower = x < max_so_far;
            labels.push(if upper {
                Label321::Upper
            } else if lower {
                Label321::Lower
            } else {
                Label321::Fluid
            });
            if upper && lower {
                is_avoider = false;
            }
            max_so_far = max_so_far.max(x);
        }

        let mut upper_chain = Vec::new();
        let mut lower_chain = Vec::new();
        let mut fluid_chain = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match l {
                Label321::Upper => upper_chain.push(i as u32 + 1),
                Label321::Lower => lower_chain.push(i as u32 + 1),
                Label321::Fluid => fluid_chain.push(i as u32 + 1),
            }
        }

        let empty = || [alloc::vec![None; n], alloc::vec![None; n]];
        let mut next = [empty(), empty(), empty(), empty()];
        for t in [RigidType::Upper, RigidType::Lower] {
            let ti = t.index();
            let want = t.label();
            // Left and right neighbours scan by position.
            let mut carry: Option<NonZeroU32> = None;
            for pos in 1..=n {
                next[dir_index(Direction::Left)][ti][pos - 1] = carry;
                if labels[pos - 1] == want {
                    carry = NonZeroU32::new(pos as u32);
                }
            }
            carry = None;
            for pos in (1..=n).rev() {
                next[dir_index(Direction::Right)][ti][pos - 1] = carry;
                if labels[pos - 1] == want {
                    carry = NonZeroU32::new(pos as u32);
                }
            }
            // Up and down neighbours scan by value through the inverse.
            carry = None;
            for val in (1..=n).rev() {
                let pos = p.position_of(val);
                next[dir_index(Direction::Up)][ti][pos - 1] = carry;
                if labels[pos - 1] == want {
                    carry = NonZeroU32::new(pos as u32);
                }
            }
            carry = None;
            for val in 1..=n {
                let pos = p.position_of(val);
                next[dir_index(Direction::Down)][ti][pos - 1] = carry;
                if labels[pos - 1] == want {
                    carry = NonZeroU32::new(pos as u32);
                }
            }
        }

        Labels321 { labels, is_avoider, next, upper_chain, lower_chain, fluid_chain }
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// True iff the permutation avoids 321.
    pub fn is_avoider(&self) -> bool {
        self.is_avoider
    }

    /// Label of the element at a position.
    pub fn label(&self, pos: usize) -> Label321 {
        self.labels[pos - 1]
    }

    /// Labels in position order.
    pub fn labels(&self) -> impl Iterator<Item = Label321> + '_ {
        self.labels.iter().copied()
    }

    /// The nearest element of type `t` strictly in direction `dir` of `x`,
    /// skipping elements of every other role. Undefined propagates.
    pub fn typed_next(&self, x: Option<ElementRef>, dir: Direction, t: RigidType) -> Option<ElementRef> {
        let ElementRef(pos) = x?;
        self.next[dir_index(dir)][t.index()][pos - 1].map(|p| ElementRef(p.get() as usize))
    }

    pub(crate) fn chain(&self, t: RigidType) -> &[u32] {
        match t {
            RigidType::Upper => &self.upper_chain,
            RigidType::Lower => &self.lower_chain,
        }
    }

    pub(crate) fn fluid_chain(&self) -> &[u32] {
        &self.fluid_chain
    }
}

/// One summand of the direct-sum decomposition.
#[derive(Debug, Clone)]
pub enum Block {
    /// A maximal run of rigid elements, with its normalised pattern.
    Rigid { start: usize, end: usize, pattern: Permutation },
    /// A fluid element.
    Singleton { pos: usize },
}

/// The unique decomposition of a 321-avoider into direct-sum blocks in which
/// singletons are exactly the fluid elements and no two rigid blocks are
/// adjacent.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    blocks: Vec<Block>,
}

impl BlockDecomposition {
    /// Splits `p` at its fluid positions. Requires `labels.is_avoider()`.
    pub fn new(p: &Permutation, labels: &Labels321) -> Self {
        debug_assert!(labels.is_avoider());
        let n = p.size();
        let mut blocks = Vec::new();
        let mut run_start = None;
        for pos in 1..=n {
            if labels.label(pos) == Label321::Fluid {
                if let Some(start) = run_start.take() {
                    blocks.push(rigid_block(p, start, pos - 1));
                }
                blocks.push(Block::Singleton { pos });
            } else if run_start.is_none() {
                run_start = Some(pos);
            }
        }
        if let Some(start) = run_start {
            blocks.push(rigid_block(p, start, n));
        }
        BlockDecomposition { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// The direct sum of the block patterns; equals the original input.
    pub fn reassemble(&self) -> Permutation {
        let parts: Vec<Permutation> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Rigid { pattern, .. } => pattern.clone(),
                Block::Singleton { .. } => Permutation::identity(1),
            })
            .collect();
        direct_sum(&parts)
    }
}

fn rigid_block(p: &Permutation, start: usize, end: usize) -> Block {
    let positions: Vec<usize> = (start..=end).collect();
    let pattern = p.normalize_subsequence(&positions).expect("block range is valid");
    Block::Rigid { start, end, pattern }
}
