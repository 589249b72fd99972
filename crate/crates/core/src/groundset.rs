//! Subsets of a finite ground set `[n] = {1, ..., n}` stored as bitmasks.
//!
//! Element `i` is bit `i - 1`. Ordering masks as integers is exactly the
//! colexicographic order on subsets, for sets of equal or of different size,
//! so every canonical ordering in the crate is plain numeric order on masks.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{input_err, Error, Result};

/// Largest supported ground set. Wick vectors have `2^n` coordinates.
pub const MAX_GROUND: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::Capability(format!(
                "ground set size {n} exceeds the cap of {MAX_GROUND}"
            )));
        }
        Ok(GroundSet { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Mask of the whole ground set.
    pub fn full_mask(&self) -> u32 {
        full_mask(self.n)
    }

    /// Number of subsets, `2^n`.
    pub fn subset_count(&self) -> usize {
        1usize << self.n
    }

    pub fn empty(&self) -> Subset {
        Subset { n: self.n as u8, bits: 0 }
    }

    pub fn full(&self) -> Subset {
        Subset { n: self.n as u8, bits: self.full_mask() }
    }

    pub fn subset(&self, bits: u32) -> Result<Subset> {
        Subset::from_bits(*self, bits)
    }

    /// Builds a subset from 1-based elements. Duplicates are rejected.
    pub fn subset_of(&self, elements: &[usize]) -> Result<Subset> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > self.n {
                return input_err(format!("element {e} is outside [1, {}]", self.n));
            }
            let b = 1u32 << (e - 1);
            if bits & b != 0 {
                return input_err(format!("element {e} listed twice"));
            }
            bits |= b;
        }
        Ok(Subset { n: self.n as u8, bits })
    }

    /// Every subset of `[n]` in colex order.
    pub fn all_subsets(&self) -> impl Iterator<Item = Subset> + '_ {
        let n = self.n as u8;
        (0..(1u32 << self.n)).map(move |bits| Subset { n, bits })
    }
}

/// A subset of a ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset {
    n: u8,
    bits: u32,
}

impl Subset {
    pub fn from_bits(ground: GroundSet, bits: u32) -> Result<Self> {
        if bits & !ground.full_mask() != 0 {
            return input_err(format!(
                "mask {bits:#b} has elements outside [1, {}]",
                ground.size()
            ));
        }
        Ok(Subset { n: ground.size() as u8, bits })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet { n: self.n as usize }
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, element: usize) -> bool {
        element >= 1 && element <= self.n as usize && self.bits & (1 << (element - 1)) != 0
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(&self) -> Vec<usize> {
        elements(self.bits)
    }

    fn same_ground(&self, other: &Subset) -> Result<()> {
        if self.n != other.n {
            return input_err(format!(
                "subsets of different ground sets ([{}] and [{}])",
                self.n, other.n
            ));
        }
        Ok(())
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Colex order; ties between ground sets broken by size.
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.bits, self.n).cmp(&(other.bits, other.n))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.elements().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements().serialize(serializer)
    }
}

/// Symmetric difference `a Δ b`.
pub fn sym_diff(a: Subset, b: Subset) -> Result<Subset> {
    a.same_ground(&b)?;
    Ok(Subset { n: a.n, bits: a.bits ^ b.bits })
}

/// `sign(x; S, T) = (-1)^m` with `m = #{s in S : s > x} + #{t in T : t > x}`.
pub fn sign_xst(x: usize, s: Subset, t: Subset) -> Result<i8> {
    s.same_ground(&t)?;
    if !s.contains(x) {
        return input_err(format!("element {x} is not in {s}"));
    }
    Ok(sign_bits(x - 1, s.bits, t.bits))
}

/// Bit-level sign for a 0-based element index.
#[inline]
pub(crate) fn sign_bits(x: usize, s: u32, t: u32) -> i8 {
    let above = !((2u32 << x).wrapping_sub(1));
    let m = (s & above).count_ones() + (t & above).count_ones();
    if m % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All `r`-subsets of the ground set in colex order.
pub fn subsets_of_size(g: GroundSet, r: usize) -> Result<Vec<Subset>> {
    if r > g.size() {
        return input_err(format!("subset size {r} exceeds ground set size {}", g.size()));
    }
    let n = g.size() as u8;
    Ok(masks_of_size(g.size(), r)
        .into_iter()
        .map(|bits| Subset { n, bits })
        .collect())
}

/// Raw colex enumeration of `r`-subsets of `[n]` (Gosper's hack).
pub(crate) fn masks_of_size(n: usize, r: usize) -> Vec<u32> {
    if r > n {
        return Vec::new();
    }
    if r == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut out = Vec::with_capacity(binomial(n, r) as usize);
    let mut v: u64 = (1u64 << r) - 1;
    while v < limit {
        out.push(v as u32);
        let c = v & v.wrapping_neg();
        let hi = v + c;
        v = (((v ^ hi) >> 2) / c) | hi;
    }
    out
}

pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn elements(bits: u32) -> Vec<usize> {
    BitIter(bits).map(|i| i + 1).collect()
}

/// Iterates 0-based bit positions in increasing order.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u32);

impl Iterator for BitIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Position of an `r`-subset within the colex list of all `r`-subsets.
pub(crate) fn colex_rank(bits: u32) -> usize {
    BitIter(bits)
        .enumerate()
        .map(|(k, c)| binomial(c, k + 1) as usize)
        .sum()
}

/// Parses a coordinate key such as `"1,4"`; the empty string is the empty set.
pub fn parse_key(ground: GroundSet, key: &str) -> Result<Subset> {
    let key = key.trim();
    if key.is_empty() {
        return Ok(ground.empty());
    }
    let mut elems = Vec::new();
    for part in key.split(',') {
        let e: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("bad subset key {key:?}")))?;
        elems.push(e);
    }
    ground.subset_of(&elems)
}

/// Inverse of [`parse_key`].
pub fn format_key(bits: u32) -> String {
    elements(bits)
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
