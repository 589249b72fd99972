//! Zero patterns of the principal Pfaffians of a generic skew matrix over
//! GF(2).

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::bounds::certified_nelson_r;
use crate::error::{Error, Result};
use crate::exactalg::{principal_pfaffians, Ring, Scalar, SkewMatrix};
use crate::groundset::GroundSet;
use crate::io::FamilyFile;
use crate::matroid::BasisFamily;

pub const MAX_DEMO_N: usize = 4;

fn families<S: Serializer>(v: &[BasisFamily], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(FamilyFile::from_family))
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Distinct supports `{J : Pf(A_J(u)) ≠ 0}` over all assignments `u`.
#[derive(Clone, Debug, Serialize)]
pub struct RealizableSets {
    pub n: usize,
    /// Number of polynomials, the even subsets of `[n]`.
    #[serde(rename = "N")]
    pub polynomials: u64,
    /// Number of variables.
    pub m: u64,
    pub d: u64,
    pub c: u64,
    pub assignments: u64,
    /// Colex order of the family indicator.
    #[serde(serialize_with = "families")]
    pub patterns: Vec<BasisFamily>,
    /// A certified zero-pattern bound at these parameters.
    #[serde(serialize_with = "decimal")]
    pub nelson_bound: BigUint,
}

/// Upper-triangle entries of the `index`-th skew matrix over `GF(q)`, in
/// base `q` with the first entry least significant.
pub(crate) fn skew_from_index(ring: Ring, q: u64, n: usize, mut index: u64) -> SkewMatrix {
    let m = n * n.saturating_sub(1) / 2;
    let upper: Vec<Scalar> = (0..m)
        .map(|_| {
            let v = ring.from_i64((index % q) as i64);
            index /= q;
            v
        })
        .collect();
    SkewMatrix::from_upper(ring, n, &upper).expect("sizes agree")
}

/// Bit `J` set iff `Pf(A_J) ≠ 0`.
pub(crate) fn support_indicator(a: &SkewMatrix) -> u64 {
    principal_pfaffians(a)
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .fold(0u64, |acc, (j, _)| acc | 1 << j)
}

pub(crate) fn family_from_indicator(ground: GroundSet, ind: u64) -> BasisFamily {
    let masks = (0..64u32).filter(|&j| ind >> j & 1 == 1);
    BasisFamily::from_masks(ground, masks).expect("indicator is nonempty")
}

/// All zero patterns over `GF(2)` for `n ≤ 4`.
pub fn realizable_sets_demo(n: usize) -> Result<RealizableSets> {
    if n > MAX_DEMO_N {
        return Err(Error::Capability(format!("realizable-set demo supports n <= {MAX_DEMO_N}, got {n}")));
    }
    let ground = GroundSet::new(n)?;
    let ring = Ring::prime_field(2)?;
    let m = (n * n.saturating_sub(1) / 2) as u64;
    let assignments = 1u64 << m;
    let mut seen: Vec<u64> = (0..assignments).map(|i| support_indicator(&skew_from_index(ring, 2, n, i))).collect();
    seen.sort_unstable();
    seen.dedup();
    let polynomials = if n == 0 { 1 } else { 1u64 << (n - 1) };
    let d = n.saturating_sub(1) as u64;
    Ok(RealizableSets {
        n,
        polynomials,
        m,
        d,
        c: 1,
        assignments,
        patterns: seen.into_iter().map(|ind| family_from_indicator(ground, ind)).collect(),
        nelson_bound: certified_nelson_r(1, d.max(1), polynomials, m.max(1)),
    })
}
