//! Linear-time structure of skew-merged permutations: the five-region
//! labelling, the centre band boundaries, and typed neighbour seeks along
//! the corner chains.
//!
//! A skew-merged permutation splits into an increasing and a decreasing
//! subsequence. Its corner elements are fixed by three-letter witnesses (NE
//! is the 3 of a 213, NW the 3 of a 312, SW the 1 of a 132, SE the 1 of a
//! 231); everything else is central and forms a monotone subsequence inside
//! an axis-aligned centre rectangle. Four boundary scans recover the
//! rectangle: a prefix avoiding both 231 and 213 keeps every element extreme
//! among its successors, so the first position breaking that shape is the
//! first Eastern element, and the remaining three boundaries follow from the
//! same scan on the reverse and on the inverse.

use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use crate::perm::{ElementRef, Permutation};

/// Region of an element of a skew-merged permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewLabel {
    Ne,
    Nw,
    Sw,
    Se,
    Central,
}

/// The four corner regions; targets for typed seeks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corner {
    Ne,
    Nw,
    Sw,
    Se,
}

/// Step directions along the corner chains, resolved per element: outward
/// horizontal is left in the West half and right in the East half, outward
/// vertical is up in the North half and down in the South half.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewDir {
    OutH,
    InH,
    OutV,
    InV,
}

/// Shape of the central subsequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CenterDirection {
    Increasing,
    Decreasing,
    /// At most one central element; compatible with both directions.
    Trivial,
}

impl SkewLabel {
    pub fn corner(self) -> Option<Corner> {
        match self {
            SkewLabel::Ne => Some(Corner::Ne),
            SkewLabel::Nw => Some(Corner::Nw),
            SkewLabel::Sw => Some(Corner::Sw),
            SkewLabel::Se => Some(Corner::Se),
            SkewLabel::Central => None,
        }
    }

    pub fn is_west(self) -> bool {
        matches!(self, SkewLabel::Nw | SkewLabel::Sw)
    }

    pub fn is_east(self) -> bool {
        matches!(self, SkewLabel::Ne | SkewLabel::Se)
    }

    pub fn is_north(self) -> bool {
        matches!(self, SkewLabel::Nw | SkewLabel::Ne)
    }

    pub fn is_south(self) -> bool {
        matches!(self, SkewLabel::Sw | SkewLabel::Se)
    }
}

impl fmt::Display for SkewLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkewLabel::Ne => "NE",
            SkewLabel::Nw => "NW",
            SkewLabel::Sw => "SW",
            SkewLabel::Se => "SE",
            SkewLabel::Central => "C",
        })
    }
}

impl Corner {
    fn index(self) -> usize {
        match self {
            Corner::Ne => 0,
            Corner::Nw => 1,
            Corner::Sw => 2,
            Corner::Se => 3,
        }
    }

    pub fn label(self) -> SkewLabel {
        match self {
            Corner::Ne => SkewLabel::Ne,
            Corner::Nw => SkewLabel::Nw,
            Corner::Sw => SkewLabel::Sw,
            Corner::Se => SkewLabel::Se,
        }
    }
}

/// True iff value `a` lies strictly further out from the centre than value
/// `b`, both read from elements of the given corner type.
pub fn strictly_outer(corner: Corner, a: usize, b: usize) -> bool {
    match corner {
        Corner::Sw | Corner::Se => a < b,
        Corner::Ne | Corner::Nw => a > b,
    }
}

/// Region labels of a permutation, its centre band boundaries, and the
/// precomputed neighbour tables along the corner chains.
///
/// `is_skew_merged` is decided by exhibiting the witness partition: the SW,
/// NE and increasing-or-trivial central elements must read increasingly and
/// the NW, SE and decreasing central elements decreasingly. Labels of inputs
/// that fail the check are unreliable and gated by the flag.
#[derive(Debug, Clone)]
pub struct SkewLabels {
    labels: Vec<SkewLabel>,
    is_skew_merged: bool,
    center_direction: CenterDirection,
    west_end: usize,
    east_start: usize,
    south_end: usize,
    north_start: usize,
    // step[d][p-1] = single step from p in direction d, within its half.
    step: [Vec<Option<NonZeroU32>>; 4],
    // seek_in[axis][corner][p-1] = first element of that corner on the
    // inward chain from p; axis 0 horizontal, 1 vertical.
    seek_in: [[Vec<Option<NonZeroU32>>; 4]; 2],
    chains: [Vec<u32>; 4],
    central: Vec<u32>,
}

fn dir_index(dir: SkewDir) -> usize {
    match dir {
        SkewDir::OutH => 0,
        SkewDir::InH => 1,
        SkewDir::OutV => 2,
        SkewDir::InV => 3,
    }
}

/// Index of the first element whose prefix contains 231 or 213 with it as
/// the extreme letter, i.e. the first element East of the centre in scan
/// order. Tracks only the most recent ascent and descent.
fn first_break(vals: &[usize]) -> Option<usize> {
    let mut last_asc: Option<usize> = None;
    let mut last_desc: Option<usize> = None;
    for i in 0..vals.len() {
        if let Some(a) = last_asc {
            if vals[i] < vals[a] {
                return Some(i);
            }
        }
        if let Some(d) = last_desc {
            if vals[i] > vals[d] {
                return Some(i);
            }
        }
        if i >= 1 {
            if vals[i - 1] < vals[i] {
                last_asc = Some(i - 1);
            } else {
                last_desc = Some(i - 1);
            }
        }
    }
    None
}

impl SkewLabels {
    /// Labels the permutation with four boundary scans and verifies the
    /// witness partition.
    pub fn new(p: &Permutation) -> Self {
        let n = p.size();
        let by_pos: Vec<usize> = p.values().collect();
        let by_val: Vec<usize> = (1..=n).map(|v| p.position_of(v)).collect();
        let rev = |v: &[usize]| v.iter().rev().copied().collect::<Vec<usize>>();

        let east_start = first_break(&by_pos).map_or(n + 1, |i| i + 1);
        let west_end = first_break(&rev(&by_pos)).map_or(0, |i| n - i);
        let north_start = first_break(&by_val).map_or(n + 1, |i| i + 1);
        let south_end = first_break(&rev(&by_val)).map_or(0, |i| n - i);

        let mut labels = Vec::with_capacity(n);
        for pos in 1..=n {
            let val = p.value_at(pos);
            let west = pos <= west_end;
            let east = pos >= east_start;
            let north = val >= north_start;
            let south = val <= south_end;
            labels.push(match (west, east, north, south) {
                (true, _, true, _) => SkewLabel::Nw,
                (true, _, _, true) => SkewLabel::Sw,
                (_, true, true, _) => SkewLabel::Ne,
                (_, true, _, true) => SkewLabel::Se,
                _ => SkewLabel::Central,
            });
        }

        let central: Vec<u32> = (1..=n as u32).filter(|&q| labels[q as usize - 1] == SkewLabel::Central).collect();
        let central_vals: Vec<usize> = central.iter().map(|&q| p.value_at(q as usize)).collect();
        let increasing = central_vals.windows(2).all(|w| w[0] < w[1]);
        let decreasing = central_vals.windows(2).all(|w| w[0] > w[1]);
        let center_direction = if central_vals.len() <= 1 {
            CenterDirection::Trivial
        } else if increasing {
            CenterDirection::Increasing
        } else {
            CenterDirection::Decreasing
        };
        let center_monotone = increasing || decreasing || central_vals.len() <= 1;

        let is_skew_merged = center_monotone && witnesses_hold(p, &labels, center_direction);

        let mut chains: [Vec<u32>; 4] = Default::default();
        for pos in 1..=n {
            if let Some(c) = labels[pos - 1].corner() {
                chains[c.index()].push(pos as u32);
            }
        }

        let mut this = SkewLabels {
            labels,
            is_skew_merged,
            center_direction,
            west_end,
            east_start,
            south_end,
            north_start,
            step: Default::default(),
            seek_in: Default::default(),
            chains,
            central,
        };
        this.build_tables(p);
        this
    }

    fn build_tables(&mut self, p: &Permutation) {
        let n = p.size();
        let empty = || {
            [
                alloc::vec![None; n],
                alloc::vec![None; n],
                alloc::vec![None; n],
                alloc::vec![None; n],
            ]
        };
        self.step = empty();
        for pos in 1..=n {
            for dir in [SkewDir::OutH, SkewDir::InH, SkewDir::OutV, SkewDir::InV] {
                let target = self.step_target(p, pos, dir);
                self.step[dir_index(dir)][pos - 1] = target.and_then(|q| NonZeroU32::new(q as u32));
            }
        }

        self.seek_in = [empty(), empty()];
        // Inward chains run toward the centre rectangle; filling from the
        // centre outward lets each entry reuse the entry one step further in.
        for pos in (1..=self.west_end).rev() {
            self.fill_seek(0, pos);
        }
        for pos in self.east_start..=n {
            self.fill_seek(0, pos);
        }
        for val in self.north_start..=n {
            self.fill_seek(1, p.position_of(val));
        }
        for val in (1..=self.south_end).rev() {
            self.fill_seek(1, p.position_of(val));
        }
    }

    fn fill_seek(&mut self, axis: usize, pos: usize) {
        let dir = if axis == 0 { SkewDir::InH } else { SkewDir::InV };
        let step = self.step[dir_index(dir)][pos - 1];
        for c in [Corner::Ne, Corner::Nw, Corner::Sw, Corner::Se] {
            let entry = match step {
                None => None,
                Some(q) if self.labels[q.get() as usize - 1] == c.label() => Some(q),
                Some(q) => self.seek_in[axis][c.index()][q.get() as usize - 1],
            };
            self.seek_in[axis][c.index()][pos - 1] = entry;
        }
    }

    /// Resolves one step from a non-central element; `None` at the centre
    /// rectangle, the grid boundary, or a central element.
    fn step_target(&self, p: &Permutation, pos: usize, dir: SkewDir) -> Option<usize> {
        let label = self.labels[pos - 1];
        label.corner()?;
        let n = p.size();
        let val = p.value_at(pos);
        let q = match dir {
            SkewDir::OutH => {
                if label.is_west() {
                    (pos > 1).then(|| pos - 1)?
                } else {
                    (pos < n).then(|| pos + 1)?
                }
            }
            SkewDir::InH => {
                if label.is_west() {
                    (pos + 1 <= self.west_end).then(|| pos + 1)?
                } else {
                    (pos > self.east_start).then(|| pos - 1)?
                }
            }
            SkewDir::OutV => {
                if label.is_north() {
                    (val < n).then(|| p.position_of(val + 1))?
                } else {
                    (val > 1).then(|| p.position_of(val - 1))?
                }
            }
            SkewDir::InV => {
                if label.is_north() {
                    (val > self.north_start).then(|| p.position_of(val - 1))?
                } else {
                    (val + 1 <= self.south_end).then(|| p.position_of(val + 1))?
                }
            }
        };
        (self.labels[q - 1] != SkewLabel::Central).then_some(q)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_skew_merged(&self) -> bool {
        self.is_skew_merged
    }

    pub fn center_direction(&self) -> CenterDirection {
        self.center_direction
    }

    pub fn label(&self, pos: usize) -> SkewLabel {
        self.labels[pos - 1]
    }

    pub fn labels(&self) -> impl Iterator<Item = SkewLabel> + '_ {
        self.labels.iter().copied()
    }

    /// Last position of the West band; 0 when the band is empty.
    pub fn west_end(&self) -> usize {
        self.west_end
    }

    /// First position of the East band; `n + 1` when the band is empty.
    pub fn east_start(&self) -> usize {
        self.east_start
    }

    /// Top value of the South band; 0 when the band is empty.
    pub fn south_end(&self) -> usize {
        self.south_end
    }

    /// Bottom value of the North band; `n + 1` when the band is empty.
    pub fn north_start(&self) -> usize {
        self.north_start
    }

    /// One step along the element's chain; undefined propagates.
    pub fn step(&self, x: Option<ElementRef>, dir: SkewDir) -> Option<ElementRef> {
        let ElementRef(pos) = x?;
        self.step[dir_index(dir)][pos - 1].map(|q| ElementRef(q.get() as usize))
    }

    /// First element of the target corner on the step chain from `x` in the
    /// given direction, or `None` when the chain ends first.
    pub fn typed_seek(&self, x: Option<ElementRef>, dir: SkewDir, target: Corner) -> Option<ElementRef> {
        let ElementRef(pos) = x?;
        match dir {
            SkewDir::InH => self.seek_in[0][target.index()][pos - 1].map(|q| ElementRef(q.get() as usize)),
            SkewDir::InV => self.seek_in[1][target.index()][pos - 1].map(|q| ElementRef(q.get() as usize)),
            SkewDir::OutH | SkewDir::OutV => {
                let mut cur = self.step(x, dir);
                while let Some(e) = cur {
                    if self.label(e.0) == target.label() {
                        return Some(e);
                    }
                    cur = self.step(cur, dir);
                }
                None
            }
        }
    }

    /// Positions of one corner's elements in left-to-right order.
    pub(crate) fn chain(&self, c: Corner) -> &[u32] {
        &self.chains[c.index()]
    }

    /// Positions of the central elements in left-to-right order.
    pub(crate) fn central_positions(&self) -> &[u32] {
        &self.central
    }

    /// The element of the corner furthest from the centre, if any.
    pub(crate) fn outermost(&self, c: Corner) -> Option<ElementRef> {
        let chain = self.chain(c);
        let pos = match c {
            Corner::Sw | Corner::Nw => chain.first(),
            Corner::Ne | Corner::Se => chain.last(),
        };
        pos.map(|&q| ElementRef(q as usize))
    }
}

/// Checks the witness partition: SW, NE and the increasing-or-trivial centre
/// must read increasingly; NW, SE and the decreasing centre decreasingly.
fn witnesses_hold(p: &Permutation, labels: &[SkewLabel], dir: CenterDirection) -> bool {
    let central_up = !matches!(dir, CenterDirection::Decreasing);
    let mut last_up = 0usize;
    let mut last_down = usize::MAX;
    for pos in 1..=p.size() {
        let val = p.value_at(pos);
        let in_up = match labels[pos - 1] {
            SkewLabel::Sw | SkewLabel::Ne => true,
            SkewLabel::Nw | SkewLabel::Se => false,
            SkewLabel::Central => central_up,
        };
        if in_up {
            if val <= last_up {
                return false;
            }
            last_up = val;
        } else {
            if val >= last_down {
                return false;
            }
            last_down = val;
        }
    }
    true
}
