//! Permutations in one-line notation and the point geometry the matchers
//! are built on: element addressing, the four immediate-neighbour operators,
//! direct sums, subsequence normalisation, and embedding verification.
//!
//! A permutation of size `n` is a bijection on `{1..n}`; we treat it as the
//! point set `{(i, values[i])}` and identify each point by its position.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;
use core::str::FromStr;

/// Errors raised when constructing or slicing permutations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("token `{0}` is not a positive integer")]
    InvalidToken(String),
    #[error("value {0} appears more than once")]
    DuplicateValue(usize),
    #[error("value {value} is outside 1..={size}")]
    ValueOutOfRange { value: usize, size: usize },
    #[error("position {0} is out of range")]
    PositionOutOfRange(usize),
    #[error("positions must be strictly increasing")]
    PositionsNotIncreasing,
}

/// A reference to one point of a permutation, identified by its 1-based
/// position. The value of the point is derived from the owning permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementRef(pub usize);

/// Axis-aligned step directions between points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

/// A permutation of `{1..n}` with O(1) lookup in both directions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    values: Vec<u32>,
    inverse: Vec<u32>,
}

impl Permutation {
    /// The empty permutation.
    pub fn empty() -> Self {
        Permutation { values: Vec::new(), inverse: Vec::new() }
    }

    /// Builds a permutation from its one-line notation, validating that the
    /// values form a bijection on `{1..n}`.
    pub fn from_values(values: &[usize]) -> Result<Self, PermError> {
        let n = values.len();
        let mut vals = Vec::with_capacity(n);
        let mut inverse = alloc::vec![0u32; n];
        for (i, &v) in values.iter().enumerate() {
            if v == 0 || v > n {
                return Err(PermError::ValueOutOfRange { value: v, size: n });
            }
            if inverse[v - 1] != 0 {
                return Err(PermError::DuplicateValue(v));
            }
            inverse[v - 1] = (i + 1) as u32;
            vals.push(v as u32);
        }
        Ok(Permutation { values: vals, inverse })
    }

    /// Identity permutation of the given size.
    pub fn identity(n: usize) -> Self {
        let values: Vec<u32> = (1..=n as u32).collect();
        Permutation { inverse: values.clone(), values }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at a 1-based position. Panics if `pos` is out of range.
    pub fn value_at(&self, pos: usize) -> usize {
        self.values[pos - 1] as usize
    }

    /// Position of a value. Panics if `val` is out of range.
    pub fn position_of(&self, val: usize) -> usize {
        self.inverse[val - 1] as usize
    }

    /// The element at a 1-based position.
    pub fn element(&self, pos: usize) -> ElementRef {
        debug_assert!(pos >= 1 && pos <= self.size());
        ElementRef(pos)
    }

    /// The element carrying the given value.
    pub fn element_with_value(&self, val: usize) -> ElementRef {
        ElementRef(self.position_of(val))
    }

    /// Values in position order.
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().map(|&v| v as usize)
    }

    /// The immediate neighbour of `x` in the given direction, or `None` at
    /// the boundary. An undefined input propagates to an undefined output.
    pub fn neighbor(&self, x: Option<ElementRef>, dir: Direction) -> Option<ElementRef> {
        let ElementRef(pos) = x?;
        let n = self.size();
        match dir {
            Direction::Left => (pos > 1).then(|| ElementRef(pos - 1)),
            Direction::Right => (pos < n).then(|| ElementRef(pos + 1)),
            Direction::Up => {
                let v = self.value_at(pos);
                (v < n).then(|| ElementRef(self.position_of(v + 1)))
            }
            Direction::Down => {
                let v = self.value_at(pos);
                (v > 1).then(|| ElementRef(self.position_of(v - 1)))
            }
        }
    }

    /// The pattern formed by the points at the selected positions: values are
    /// replaced by their ranks within the selection.
    pub fn normalize_subsequence(&self, positions: &[usize]) -> Result<Permutation, PermError> {
        let n = self.size();
        let mut last = 0usize;
        for &p in positions {
            if p == 0 || p > n {
                return Err(PermError::PositionOutOfRange(p));
            }
            if p <= last {
                return Err(PermError::PositionsNotIncreasing);
            }
            last = p;
        }
        let selected: Vec<u32> = positions.iter().map(|&p| self.values[p - 1]).collect();
        let mut order: Vec<u32> = (0..selected.len() as u32).collect();
        order.sort_by_key(|&i| selected[i as usize]);
        let mut ranked = alloc::vec![0u32; selected.len()];
        for (rank, &i) in order.iter().enumerate() {
            ranked[i as usize] = rank as u32 + 1;
        }
        let mut inverse = alloc::vec![0u32; ranked.len()];
        for (i, &v) in ranked.iter().enumerate() {
            inverse[v as usize - 1] = i as u32 + 1;
        }
        Ok(Permutation { values: ranked, inverse })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl fmt::Display for Permutation {
    /// Canonical one-line form: values separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Accepts values separated by whitespace or commas. A single unseparated
    /// run of digits is read digit by digit, so `31254` means `3 1 2 5 4`.
    /// Empty input yields the empty permutation.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let tokens: Vec<&str> = s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
        if tokens.is_empty() {
            return Ok(Permutation::empty());
        }
        if tokens.len() == 1 && tokens[0].len() > 1 && tokens[0].bytes().all(|b| b.is_ascii_digit()) {
            let digits: Vec<usize> = tokens[0].bytes().map(|b| (b - b'0') as usize).collect();
            return Permutation::from_values(&digits);
        }
        let mut values = Vec::with_capacity(tokens.len());
        for t in tokens {
            let v: usize = t.parse().map_err(|_| PermError::InvalidToken(t.to_string()))?;
            values.push(v);
        }
        Permutation::from_values(&values)
    }
}

/// Concatenates the parts, shifting positions and values of each part by the
/// total size of the preceding parts.
pub fn direct_sum(parts: &[Permutation]) -> Permutation {
    let n: usize = parts.iter().map(Permutation::size).sum();
    let mut values = Vec::with_capacity(n);
    let mut offset = 0u32;
    for part in parts {
        values.extend(part.values.iter().map(|&v| v + offset));
        offset += part.size() as u32;
    }
    let mut inverse = alloc::vec![0u32; n];
    for (i, &v) in values.iter().enumerate() {
        inverse[v as usize - 1] = i as u32 + 1;
    }
    Permutation { values, inverse }
}

/// Errors raised when an embedding cannot be checked at all.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("embedding domain has size {domain}, pattern has size {pattern}")]
    DomainMismatch { domain: usize, pattern: usize },
    #[error("pattern position {0} has no image")]
    NotTotal(usize),
    #[error("image {image} of pattern position {position} is out of range")]
    ImageOutOfRange { position: usize, image: usize },
}

/// A partial injective map from pattern positions to text positions.
#[derive(Clone, PartialEq, Eq)]
pub struct Embedding {
    image: Vec<Option<NonZeroU32>>,
}

impl Embedding {
    /// An embedding with empty domain over a pattern of the given size.
    pub fn new(pattern_size: usize) -> Self {
        Embedding { image: alloc::vec![None; pattern_size] }
    }

    /// Builds a total embedding from images listed in pattern-position order.
    pub fn from_images(images: &[usize]) -> Self {
        let mut e = Embedding::new(images.len());
        for (i, &t) in images.iter().enumerate() {
            e.set(i + 1, t);
        }
        e
    }

    pub fn pattern_size(&self) -> usize {
        self.image.len()
    }

    /// Image of a pattern position, if assigned.
    pub fn get(&self, pos: usize) -> Option<usize> {
        self.image[pos - 1].map(|t| t.get() as usize)
    }

    /// Assigns the image of a pattern position.
    pub fn set(&mut self, pos: usize, text_pos: usize) {
        self.image[pos - 1] = Some(NonZeroU32::new(text_pos as u32).expect("text positions are 1-based"));
    }

    pub fn is_total(&self) -> bool {
        self.image.iter().all(Option::is_some)
    }

    pub fn domain_size(&self) -> usize {
        self.image.iter().filter(|t| t.is_some()).count()
    }

    /// Assigned pairs `(pattern position, text position)` in position order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.image
            .iter()
            .enumerate()
            .filter_map(|(i, t)| t.map(|t| (i + 1, t.get() as usize)))
    }
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// Checks whether a total assignment is an embedding of `pattern` into
/// `text`, looking only at each element's left and lower neighbours. Strict
/// inequalities along those chains imply the full pairwise order conditions
/// as well as injectivity.
pub fn verify_embedding(
    pattern: &Permutation,
    text: &Permutation,
    e: &Embedding,
) -> Result<bool, EmbeddingError> {
    let k = pattern.size();
    let n = text.size();
    if e.pattern_size() != k {
        return Err(EmbeddingError::DomainMismatch { domain: e.pattern_size(), pattern: k });
    }
    let mut images = Vec::with_capacity(k);
    for pos in 1..=k {
        let img = e.get(pos).ok_or(EmbeddingError::NotTotal(pos))?;
        if img == 0 || img > n {
            return Err(EmbeddingError::ImageOutOfRange { position: pos, image: img });
        }
        images.push(img);
    }
    for pos in 2..=k {
        if images[pos - 1] <= images[pos - 2] {
            return Ok(false);
        }
    }
    for pos in 1..=k {
        let v = pattern.value_at(pos);
        if v > 1 {
            let below = pattern.position_of(v - 1);
            if text.value_at(images[pos - 1]) <= text.value_at(images[below - 1]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
