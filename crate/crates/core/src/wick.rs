//! Wick vectors: projective points indexed by all subsets of `[n]`, the Wick
//! equations, twisting and reconstruction from a skew-symmetric matrix.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{input_err, Error, Result};
use crate::exactalg::{is_element, principal_pfaffians, PartialField, Scalar, SkewMatrix};
use crate::groundset::{format_key, masks_of_size, BitIter, GroundSet, Subset};
use crate::matroid::{is_orthogonal, BasisFamily, OrthogonalWitness, Verdict};
use crate::plucker::{canonical_scale, Label};
use crate::sweep::PARALLEL_THRESHOLD;

/// Dense vector of `2^n` coordinates indexed by subset mask, in canonical
/// scaling (colex-first nonzero coordinate equal to `1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WickVector {
    ground: GroundSet,
    pf: PartialField,
    coords: Vec<Scalar>,
}

/// A skew-symmetric matrix `A` and twist `T` with `p_J = Pf(A_{J Δ T})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WickRepresentation {
    pub matrix: SkewMatrix,
    pub twist: Subset,
}

impl WickVector {
    pub fn new(ground: GroundSet, pf: PartialField, mut coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != ground.subset_count() {
            return input_err(format!(
                "{} coordinates given, 2^{} expected",
                coords.len(),
                ground.size()
            ));
        }
        for (mask, c) in coords.iter().enumerate() {
            if !is_element(&pf, c) {
                return Err(Error::NotElement { key: format_key(mask as u32), value: c.to_string() });
            }
        }
        canonical_scale(&pf, &mut coords)?;
        Ok(WickVector { ground, pf, coords })
    }

    /// Sparse constructor; missing coordinates are zero.
    pub fn from_entries(
        ground: GroundSet,
        pf: PartialField,
        entries: impl IntoIterator<Item = (Subset, Scalar)>,
    ) -> Result<Self> {
        let mut coords = vec![pf.ring().zero(); ground.subset_count()];
        let mut seen = vec![false; coords.len()];
        for (s, v) in entries {
            if s.ground() != ground {
                return input_err(format!("coordinate {s} is not a subset of [{}]", ground.size()));
            }
            let k = s.bits() as usize;
            if std::mem::replace(&mut seen[k], true) {
                return input_err(format!("coordinate {s} given twice"));
            }
            coords[k] = v;
        }
        Self::new(ground, pf, coords)
    }

    /// The vector that is `1` on `s` and `0` elsewhere.
    pub fn indicator(pf: PartialField, s: Subset) -> Self {
        let ring = pf.ring();
        let mut coords = vec![ring.zero(); s.ground().subset_count()];
        coords[s.bits() as usize] = ring.one();
        WickVector { ground: s.ground(), pf, coords }
    }

    /// The vector that is `1` on every member of `f`.
    pub fn family_indicator(pf: PartialField, f: &BasisFamily) -> Self {
        let ring = pf.ring();
        let mut coords = vec![ring.zero(); f.ground().subset_count()];
        for &m in f.masks() {
            coords[m as usize] = ring.one();
        }
        WickVector { ground: f.ground(), pf, coords }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn partial_field(&self) -> PartialField {
        self.pf
    }

    /// Coordinates indexed by mask.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn get(&self, s: Subset) -> Option<&Scalar> {
        (s.ground() == self.ground).then(|| &self.coords[s.bits() as usize])
    }
}

/// `{J : p_J ≠ 0}`.
pub fn wick_support(p: &WickVector) -> BasisFamily {
    let masks = (0..p.coords.len() as u32).filter(|&m| !p.coords[m as usize].is_zero());
    BasisFamily::from_masks(p.ground, masks).expect("a Wick vector is nonzero")
}

/// `p_J = Pf(A_{J Δ T})` for all `J`.
pub fn wick_from_representation(rep: &WickRepresentation, pf: PartialField) -> Result<WickVector> {
    let n = rep.matrix.size();
    if rep.matrix.ring() != pf.ring() {
        return input_err(format!("matrix over {} used with the {pf}", rep.matrix.ring()));
    }
    if rep.twist.ground().size() != n {
        return input_err(format!("twist {} is not a subset of [{n}]", rep.twist));
    }
    let ground = GroundSet::new(n)?;
    let pfs = principal_pfaffians(&rep.matrix);
    let t = rep.twist.bits() as usize;
    let coords = (0..pfs.len()).map(|j| pfs[j ^ t].clone()).collect();
    WickVector::new(ground, pf, coords)
}

/// `q_J = p_{J Δ T}`.
pub fn twist_wick(p: &WickVector, t: Subset) -> Result<WickVector> {
    if t.ground() != p.ground {
        return input_err(format!("twist {t} is not a subset of [{}]", p.ground.size()));
    }
    let t = t.bits() as usize;
    let coords = (0..p.coords.len()).map(|j| p.coords[j ^ t].clone()).collect();
    WickVector::new(p.ground, p.pf, coords)
}

/// A Wick equation instance `(J1, J2)` that does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WickWitness {
    #[serde(rename = "J1")]
    pub j1: Subset,
    #[serde(rename = "J2")]
    pub j2: Subset,
    pub value: String,
}

/// `Σ_j (-1)^j p_{J1 Δ {i_j}} p_{J2 Δ {i_j}}` over `J1 Δ J2 = {i_1 < ... < i_k}`.
fn wick_residual(p: &WickVector, j1: u32, j2: u32) -> Scalar {
    let mut acc = p.pf.ring().zero();
    for (k, i) in BitIter(j1 ^ j2).enumerate() {
        let a = &p.coords[(j1 ^ (1 << i)) as usize];
        let b = &p.coords[(j2 ^ (1 << i)) as usize];
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let term = a * b;
        // j = k + 1
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    acc
}

fn witness(p: &WickVector, j1: u32, j2: u32) -> Option<WickWitness> {
    let v = wick_residual(p, j1, j2);
    (!v.is_zero()).then(|| WickWitness {
        j1: Subset::from_bits(p.ground, j1).unwrap(),
        j2: Subset::from_bits(p.ground, j2).unwrap(),
        value: v.to_string(),
    })
}

/// Least failing `(J1, J2)` with `J1 < J2`; `partners(J1)` lists the
/// candidate `J2` in increasing order.
fn sweep(p: &WickVector, partners: impl Fn(u32) -> Vec<u32> + Sync) -> Option<WickWitness> {
    let count = p.coords.len() as u32;
    let row = |j1: u32| partners(j1).into_iter().find_map(|j2| witness(p, j1, j2));
    if (count as usize) * (count as usize) / 2 >= PARALLEL_THRESHOLD {
        (0..count).into_par_iter().find_map_first(row)
    } else {
        (0..count).find_map(row)
    }
}

/// Every Wick equation, one per unordered pair `{J1, J2}` with `J1 ≠ J2`.
pub fn check_wick_full(p: &WickVector) -> Verdict<WickWitness> {
    let count = p.coords.len() as u32;
    Verdict { witness: sweep(p, |j1| (j1 + 1..count).collect()) }
}

/// The instances with `|J1 Δ J2| = 4`.
pub fn check_wick_4term(p: &WickVector) -> Verdict<WickWitness> {
    let quads = masks_of_size(p.ground.size(), 4);
    Verdict {
        witness: sweep(p, |j1| {
            let mut v: Vec<u32> = quads.iter().map(|d| j1 ^ d).filter(|&j2| j2 > j1).collect();
            v.sort_unstable();
            v
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WickClassification {
    pub label: Label,
    pub full: Option<WickWitness>,
    pub four_term: Option<WickWitness>,
    pub support: Verdict<OrthogonalWitness>,
}

/// Strong when every Wick equation holds; Weak when the 4-term equations hold
/// and the support is an orthogonal matroid.
pub fn classify_wick(p: &WickVector) -> WickClassification {
    let full = check_wick_full(p).witness;
    let four_term = if full.is_none() { None } else { check_wick_4term(p).witness };
    let support = is_orthogonal(&wick_support(p));
    let label = if full.is_none() {
        Label::Strong
    } else if four_term.is_none() && support.holds() {
        Label::Weak
    } else {
        Label::Neither
    };
    WickClassification { label, full, four_term, support }
}

/// Twists by the colex-least support member `T`, scales so the empty
/// coordinate is `1`, and reads off `a_ij = q_{{i,j}}`.
pub fn reconstruct_wick(p: &WickVector) -> Result<WickRepresentation> {
    let cls = classify_wick(p);
    if cls.label == Label::Neither {
        let msg = match (&cls.four_term, &cls.support.witness) {
            (Some(w), _) => format!("4-term equation J1={}, J2={} evaluates to {}", w.j1, w.j2, w.value),
            (None, Some(w)) => format!(
                "support is not an orthogonal matroid: exchange fails at B1={}, B2={}, x1={}",
                w.b1, w.b2, w.x1
            ),
            (None, None) => unreachable!("label would be at least weak"),
        };
        return Err(Error::Classification(msg));
    }
    let ring = p.pf.ring();
    let t = (0..p.coords.len()).find(|&m| !p.coords[m].is_zero()).ok_or(Error::ZeroVector)?;
    let pt = &p.coords[t];
    let scale = match pt.inverse() {
        Some(inv) if p.pf.is_unit(pt) => inv,
        _ => return Err(Error::Scaling(format!("p_T = {pt} is not a unit"))),
    };
    let n = p.ground.size();
    let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            upper.push(&p.coords[t ^ (1 << i) ^ (1 << j)] * &scale);
        }
    }
    Ok(WickRepresentation {
        matrix: SkewMatrix::from_upper(ring, n, &upper)?,
        twist: Subset::from_bits(p.ground, t as u32)?,
    })
}
