//! Basis-family axiomatics for matroids and orthogonal matroids.
//!
//! All checks are brute force over pairs of bases. Witnesses are the least
//! violation in (colex `B1`, colex `B2`, element) order, independent of how
//! the search is scheduled.

use serde::Serialize;

use crate::error::{input_err, Result};
use crate::groundset::{BitIter, GroundSet, Subset};

/// A nonempty, deduplicated collection of subsets of one ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisFamily {
    ground: GroundSet,
    bases: Vec<u32>,
}

impl BasisFamily {
    pub fn new(ground: GroundSet, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut masks = Vec::new();
        for b in bases {
            if b.ground() != ground {
                return input_err(format!("basis {b} is not a subset of [{}]", ground.size()));
            }
            masks.push(b.bits());
        }
        Self::from_masks(ground, masks)
    }

    pub fn from_masks(ground: GroundSet, masks: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut bases: Vec<u32> = masks.into_iter().collect();
        if let Some(bad) = bases.iter().find(|&&m| m & !ground.full_mask() != 0) {
            return input_err(format!("mask {bad:#b} is not a subset of [{}]", ground.size()));
        }
        bases.sort_unstable();
        bases.dedup();
        if bases.is_empty() {
            return input_err("a basis family must be nonempty");
        }
        Ok(BasisFamily { ground, bases })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Bases as masks, colex order.
    pub fn masks(&self) -> &[u32] {
        &self.bases
    }

    pub fn bases(&self) -> impl Iterator<Item = Subset> + '_ {
        self.bases.iter().map(|&m| self.subset(m))
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.bases.binary_search(&mask).is_ok()
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.ground() == self.ground && self.contains_mask(s.bits())
    }

    /// Common size parity of the members, if they share one.
    pub fn parity(&self) -> Option<u32> {
        let p = self.bases[0].count_ones() % 2;
        self.bases.iter().all(|b| b.count_ones() % 2 == p).then_some(p)
    }

    fn subset(&self, mask: u32) -> Subset {
        Subset::from_bits(self.ground, mask).expect("masks validated at construction")
    }

    /// Searches pairs `(B1, B2)` in colex order and returns the least witness.
    fn first_violation<W: Send>(&self, check: impl Fn(u32, u32) -> Option<W> + Sync) -> Option<W> {
        let m = self.bases.len();
        crate::sweep::find_first(m * m, |k| check(self.bases[k / m], self.bases[k % m]))
    }
}

/// Why a family fails to be a matroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum MatroidWitness {
    UnequalSizes {
        #[serde(rename = "B1")]
        b1: Subset,
        #[serde(rename = "B2")]
        b2: Subset,
        sizes: [usize; 2],
    },
    Exchange {
        #[serde(rename = "B1")]
        b1: Subset,
        #[serde(rename = "B2")]
        b2: Subset,
        x: usize,
    },
}

/// A failed symmetric exchange at `(B1, B2, x1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalWitness {
    #[serde(rename = "B1")]
    pub b1: Subset,
    #[serde(rename = "B2")]
    pub b2: Subset,
    pub x1: usize,
}

/// Outcome of an axiom check: holds, or fails with the least counterexample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict<W> {
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

fn equicardinal(f: &BasisFamily) -> Option<MatroidWitness> {
    let first = f.bases[0];
    let r = first.count_ones();
    f.bases.iter().find(|b| b.count_ones() != r).map(|&b| MatroidWitness::UnequalSizes {
        b1: f.subset(first),
        b2: f.subset(b),
        sizes: [r as usize, b.count_ones() as usize],
    })
}

fn matroid_check(f: &BasisFamily, strong: bool) -> Verdict<MatroidWitness> {
    if let Some(w) = equicardinal(f) {
        return Verdict { witness: Some(w) };
    }
    let witness = f.first_violation(|b1, b2| {
        BitIter(b1 & !b2).find_map(|x| {
            let ok = BitIter(b2 & !b1).any(|y| {
                f.contains_mask((b1 & !(1 << x)) | (1 << y))
                    && (!strong || f.contains_mask((b2 & !(1 << y)) | (1 << x)))
            });
            (!ok).then(|| MatroidWitness::Exchange { b1: f.subset(b1), b2: f.subset(b2), x: x + 1 })
        })
    });
    Verdict { witness }
}

/// Equicardinality plus the basis exchange axiom.
pub fn is_matroid(f: &BasisFamily) -> Verdict<MatroidWitness> {
    matroid_check(f, false)
}

/// Equicardinality plus the strong (two-sided) basis exchange axiom.
pub fn is_matroid_strong(f: &BasisFamily) -> Verdict<MatroidWitness> {
    matroid_check(f, true)
}

fn orthogonal_check(f: &BasisFamily, strong: bool) -> Verdict<OrthogonalWitness> {
    let witness = f.first_violation(|b1, b2| {
        let diff = b1 ^ b2;
        BitIter(diff).find_map(|x1| {
            let ok = BitIter(diff & !(1 << x1)).any(|x2| {
                let pair = (1 << x1) | (1 << x2);
                f.contains_mask(b1 ^ pair) && (!strong || f.contains_mask(b2 ^ pair))
            });
            (!ok).then(|| OrthogonalWitness { b1: f.subset(b1), b2: f.subset(b2), x1: x1 + 1 })
        })
    });
    Verdict { witness }
}

/// Symmetric exchange: for `x1 ∈ B1 Δ B2` some `x2 ∈ B1 Δ B2`, `x2 ≠ x1`,
/// has `B1 Δ {x1, x2}` a basis.
pub fn is_orthogonal(f: &BasisFamily) -> Verdict<OrthogonalWitness> {
    orthogonal_check(f, false)
}

/// Strong symmetric exchange: the same `x2` also makes `B2 Δ {x1, x2}` a basis.
pub fn is_orthogonal_strong(f: &BasisFamily) -> Verdict<OrthogonalWitness> {
    orthogonal_check(f, true)
}

/// `{B Δ T : B ∈ 𝓑}`.
pub fn twist(f: &BasisFamily, t: Subset) -> Result<BasisFamily> {
    if t.ground() != f.ground {
        return input_err(format!("twist set {t} is not a subset of [{}]", f.ground.size()));
    }
    BasisFamily::from_masks(f.ground, f.bases.iter().map(|b| b ^ t.bits()))
}

/// For a normal orthogonal matroid and a nonempty basis `J`, a basis
/// `J' ⊆ J` with `|J'| = |J| - 2`. The colex-least such `J'` is returned.
pub fn find_smaller_basis(f: &BasisFamily, j: Subset) -> Result<Subset> {
    if j.ground() != f.ground {
        return input_err(format!("{j} is not a subset of [{}]", f.ground.size()));
    }
    if j.is_empty() {
        return input_err("the basis must be nonempty");
    }
    if !f.contains_mask(0) {
        return input_err("the family is not normal (the empty set is not a basis)");
    }
    if !f.contains(j) {
        return input_err(format!("{j} is not a basis"));
    }
    if let Some(w) = is_orthogonal(f).witness {
        return input_err(format!(
            "not an orthogonal matroid: exchange fails at B1={}, B2={}, x1={}",
            w.b1, w.b2, w.x1
        ));
    }
    let bits = j.bits();
    let found = BitIter(bits)
        .flat_map(|a| BitIter(bits & !((2u32 << a) - 1)).map(move |b| bits & !(1 << a) & !(1 << b)))
        .filter(|&m| f.contains_mask(m))
        .min();
    match found {
        Some(m) => Ok(f.subset(m)),
        None => input_err(format!("no basis of size {} inside {j}", j.len() - 2)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, bases: &[&[usize]]) -> BasisFamily {
        let g = GroundSet::new(n).unwrap();
        BasisFamily::new(g, bases.iter().map(|b| g.subset_of(b).unwrap())).unwrap()
    }

    fn sub(n: usize, e: &[usize]) -> Subset {
        GroundSet::new(n).unwrap().subset_of(e).unwrap()
    }

    #[test]
    fn matroid_examples() {
        let u23 = fam(3, &[&[1, 2], &[1, 3], &[2, 3]]);
        assert!(is_matroid(&u23).holds());
        assert!(is_matroid_strong(&u23).holds());

        let bad = fam(4, &[&[1, 2], &[3, 4]]);
        let expected = MatroidWitness::Exchange { b1: sub(4, &[1, 2]), b2: sub(4, &[3, 4]), x: 1 };
        assert_eq!(is_matroid(&bad).witness, Some(expected.clone()));
        assert_eq!(is_matroid_strong(&bad).witness, Some(expected));

        let single = fam(4, &[&[]]);
        assert!(is_matroid(&single).holds());
        assert!(is_matroid_strong(&single).holds());

        let mixed = fam(3, &[&[1], &[1, 2]]);
        assert!(matches!(is_matroid(&mixed).witness, Some(MatroidWitness::UnequalSizes { .. })));
    }

    #[test]
    fn orthogonal_examples() {
        let b = fam(4, &[&[], &[1, 2], &[1, 4], &[2, 4]]);
        assert!(is_orthogonal(&b).holds());
        assert!(is_orthogonal_strong(&b).holds());

        let bad = fam(4, &[&[], &[1, 2, 3, 4]]);
        let w = OrthogonalWitness { b1: sub(4, &[]), b2: sub(4, &[1, 2, 3, 4]), x1: 1 };
        assert_eq!(is_orthogonal(&bad).witness, Some(w.clone()));
        assert_eq!(is_orthogonal_strong(&bad).witness, Some(w));
        assert_eq!(
            serde_json::to_string(&is_orthogonal(&bad).witness).unwrap(),
            r#"{"B1":[],"B2":[1,2,3,4],"x1":1}"#
        );

        let twisted = fam(4, &[&[3], &[1, 2, 3], &[1, 3, 4], &[2, 3, 4]]);
        assert!(is_orthogonal(&twisted).holds());
        assert!(is_orthogonal_strong(&fam(5, &[&[2, 5]])).holds());
    }

    #[test]
    fn twist_examples() {
        let b = fam(4, &[&[], &[1, 2], &[1, 4], &[2, 4]]);
        let t3 = sub(4, &[3]);
        assert_eq!(twist(&b, t3).unwrap(), fam(4, &[&[3], &[1, 2, 3], &[1, 3, 4], &[2, 3, 4]]));
        assert_eq!(twist(&b, sub(4, &[])).unwrap(), b);
        assert_eq!(twist(&fam(4, &[&[3]]), t3).unwrap(), fam(4, &[&[]]));
        assert_eq!(twist(&twist(&b, t3).unwrap(), t3).unwrap(), b);
        assert!(twist(&b, sub(5, &[5])).is_err());
    }

    #[test]
    fn smaller_basis_examples() {
        let b = fam(4, &[&[], &[1, 2], &[1, 4], &[2, 4]]);
        assert_eq!(find_smaller_basis(&b, sub(4, &[1, 2])).unwrap(), sub(4, &[]));
        let c = fam(4, &[&[], &[1, 2], &[3, 4], &[1, 2, 3, 4]]);
        assert_eq!(find_smaller_basis(&c, sub(4, &[1, 2, 3, 4])).unwrap(), sub(4, &[1, 2]));
        let d = fam(2, &[&[], &[1, 2]]);
        assert_eq!(find_smaller_basis(&d, sub(2, &[1, 2])).unwrap(), sub(2, &[]));
        // precondition failures
        assert!(find_smaller_basis(&b, sub(4, &[])).is_err());
        assert!(find_smaller_basis(&b, sub(4, &[3, 4])).is_err());
        assert!(find_smaller_basis(&fam(4, &[&[1, 2], &[3, 4]]), sub(4, &[1, 2])).is_err());
        assert!(find_smaller_basis(&fam(4, &[&[], &[1, 2, 3, 4]]), sub(4, &[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn family_construction() {
        let g = GroundSet::new(3).unwrap();
        assert!(BasisFamily::from_masks(g, []).is_err());
        assert!(BasisFamily::from_masks(g, [8]).is_err());
        let f = BasisFamily::from_masks(g, [3, 1, 3]).unwrap();
        assert_eq!(f.masks(), &[1, 3]);
        assert_eq!(f.parity(), None);
    }

    #[test]
    fn parallel_search_matches_sequential() {
        // all 2-subsets of [12] minus one: large enough to take the parallel path
        let g = GroundSet::new(12).unwrap();
        let masks: Vec<u32> = crate::groundset::masks_of_size(12, 2).into_iter().skip(1).collect();
        let f = BasisFamily::from_masks(g, masks.clone()).unwrap();
        assert!(f.len() * f.len() >= crate::sweep::PARALLEL_THRESHOLD);
        let seq = {
            let m = f.bases.len();
            (0..m * m).find_map(|k| {
                let (b1, b2) = (f.bases[k / m], f.bases[k % m]);
                BitIter(b1 ^ b2).find_map(|x1| {
                    let ok = BitIter((b1 ^ b2) & !(1 << x1))
                        .any(|x2| f.contains_mask(b1 ^ (1 << x1) ^ (1 << x2)));
                    (!ok).then_some((b1, b2, x1 + 1))
                })
            })
        };
        let par = is_orthogonal(&f).witness.map(|w| (w.b1.bits(), w.b2.bits(), w.x1));
        assert_eq!(seq, par);
        assert!(is_matroid(&f).holds());
    }
}
