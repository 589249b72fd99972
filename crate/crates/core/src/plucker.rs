//! Plücker vectors over a partial field and the Grassmann–Plücker equations.

use serde::Serialize;

use crate::error::{input_err, Error, Result};
use crate::exactalg::{determinant, is_element, Matrix, PartialField, Scalar};
use crate::groundset::{binomial, colex_rank, format_key, masks_of_size, sign_bits, BitIter, GroundSet, Subset};
use crate::matroid::{is_matroid, BasisFamily, MatroidWitness, Verdict};
use crate::sweep::find_first;

/// A projective point indexed by the `r`-subsets of `[n]`, in canonical
/// scaling: the colex-first nonzero coordinate is `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    ground: GroundSet,
    rank: usize,
    pf: PartialField,
    coords: Vec<Scalar>,
}

/// Divides `coords` by its first nonzero entry, which must be a unit.
pub(crate) fn canonical_scale(pf: &PartialField, coords: &mut [Scalar]) -> Result<()> {
    let first = coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
    if first.is_one() {
        return Ok(());
    }
    let inv = match first.inverse() {
        Some(inv) if pf.is_unit(first) => inv,
        _ => return Err(Error::Scaling(format!("{first} is not a unit of the {pf}"))),
    };
    for c in coords.iter_mut() {
        if !c.is_zero() {
            *c = &*c * &inv;
        }
    }
    Ok(())
}

impl PluckerVector {
    /// `coords` lists the `r`-subsets in colex order.
    pub fn new(ground: GroundSet, rank: usize, pf: PartialField, mut coords: Vec<Scalar>) -> Result<Self> {
        let n = ground.size();
        if rank > n {
            return input_err(format!("rank {rank} exceeds ground set size {n}"));
        }
        let expected = binomial(n, rank) as usize;
        if coords.len() != expected {
            return input_err(format!("{} coordinates given, C({n},{rank}) = {expected} expected", coords.len()));
        }
        for (mask, c) in masks_of_size(n, rank).into_iter().zip(&coords) {
            if !is_element(&pf, c) {
                return Err(Error::NotElement { key: format_key(mask), value: c.to_string() });
            }
        }
        canonical_scale(&pf, &mut coords)?;
        Ok(PluckerVector { ground, rank, pf, coords })
    }

    /// Builds a vector from sparse `(subset, value)` pairs; missing entries are zero.
    pub fn from_entries(
        ground: GroundSet,
        rank: usize,
        pf: PartialField,
        entries: impl IntoIterator<Item = (Subset, Scalar)>,
    ) -> Result<Self> {
        if rank > ground.size() {
            return input_err(format!("rank {rank} exceeds ground set size {}", ground.size()));
        }
        let mut coords = vec![pf.ring().zero(); binomial(ground.size(), rank) as usize];
        let mut seen = vec![false; coords.len()];
        for (s, v) in entries {
            if s.ground() != ground || s.len() != rank {
                return input_err(format!("coordinate {s} is not an {rank}-subset of [{}]", ground.size()));
            }
            let k = colex_rank(s.bits());
            if std::mem::replace(&mut seen[k], true) {
                return input_err(format!("coordinate {s} given twice"));
            }
            coords[k] = v;
        }
        Self::new(ground, rank, pf, coords)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn partial_field(&self) -> PartialField {
        self.pf
    }

    /// Coordinates in colex order of the `r`-subsets.
    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// `(subset mask, value)` for every nonzero coordinate.
    pub fn nonzero(&self) -> impl Iterator<Item = (u32, &Scalar)> + '_ {
        masks_of_size(self.ground.size(), self.rank)
            .into_iter()
            .zip(&self.coords)
            .filter(|(_, c)| !c.is_zero())
    }

    /// Coordinate of an `r`-subset; `None` for sets of any other size.
    fn at(&self, mask: u32) -> Option<&Scalar> {
        (mask.count_ones() as usize == self.rank).then(|| &self.coords[colex_rank(mask)])
    }

    pub fn get(&self, s: Subset) -> Option<&Scalar> {
        (s.ground() == self.ground).then(|| self.at(s.bits())).flatten()
    }

    /// Relabels the ground set by `perm` (0-based, `perm[e]` is the new
    /// label of `e`): the Plücker vector of the column-permuted matrix.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.ground.size();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&e| e >= n || std::mem::replace(&mut seen[e], true)) {
            return input_err("not a permutation of the ground set");
        }
        let mut coords = vec![self.pf.ring().zero(); self.coords.len()];
        for (mask, c) in masks_of_size(n, self.rank).into_iter().zip(&self.coords) {
            let (image, sign) = permute_mask(mask, perm);
            coords[colex_rank(image)] = if sign { -c } else { c.clone() };
        }
        Self::new(self.ground, self.rank, self.pf, coords)
    }
}

/// Image of `mask` under `perm`, and whether sorting the images takes an
/// odd permutation.
fn permute_mask(mask: u32, perm: &[usize]) -> (u32, bool) {
    let images: Vec<usize> = BitIter(mask).map(|e| perm[e]).collect();
    let mut odd = false;
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            if images[i] > images[j] {
                odd = !odd;
            }
        }
    }
    (images.iter().fold(0, |m, &e| m | (1 << e)), odd)
}

/// `Supp(p)`: the `r`-subsets with nonzero coordinate.
pub fn plucker_support(p: &PluckerVector) -> BasisFamily {
    BasisFamily::from_masks(p.ground, p.nonzero().map(|(m, _)| m)).expect("a Plücker vector is nonzero")
}

/// `p_J = det(A_J)` for every `r`-subset `J` of columns.
pub fn plucker_from_matrix(a: &Matrix, pf: PartialField) -> Result<PluckerVector> {
    if a.ring() != pf.ring() {
        return input_err(format!("matrix over {} used with the {pf}", a.ring()));
    }
    let (r, n) = (a.rows(), a.cols());
    let ground = GroundSet::new(n)?;
    if r > n {
        return Err(Error::Rank(r));
    }
    let mut coords = Vec::with_capacity(binomial(n, r) as usize);
    for mask in masks_of_size(n, r) {
        let d = determinant(&a.columns(mask))?;
        if !is_element(&pf, &d) {
            return Err(Error::NotElement { key: format_key(mask), value: d.to_string() });
        }
        coords.push(d);
    }
    if coords.iter().all(Scalar::is_zero) {
        return Err(Error::Rank(r));
    }
    PluckerVector::new(ground, r, pf, coords)
}

/// A Grassmann–Plücker equation instance `(S, T)` that does not vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GpWitness {
    #[serde(rename = "S")]
    pub s: Subset,
    #[serde(rename = "T")]
    pub t: Subset,
    /// Value of the left-hand side.
    pub value: String,
}

/// `Σ_{x∈S} sign(x;S,T) p_{S∖x} p_{T∪x}`; terms with `x ∈ T` vanish.
fn gp_residual(p: &PluckerVector, s: u32, t: u32) -> Scalar {
    let mut acc = p.pf.ring().zero();
    for x in BitIter(s & !t) {
        let (Some(a), Some(b)) = (p.at(s & !(1 << x)), p.at(t | (1 << x))) else {
            continue;
        };
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let term = a * b;
        acc = if sign_bits(x, s, t) > 0 { acc + term } else { acc - term };
    }
    acc
}

fn gp_sweep(p: &PluckerVector, only_three_term: bool) -> Option<GpWitness> {
    let (n, r) = (p.ground.size(), p.rank);
    if r == 0 || r == n {
        return None;
    }
    let ss = masks_of_size(n, r + 1);
    let ts = masks_of_size(n, r - 1);
    let per_s = ts.len();
    find_first(ss.len() * per_s, |k| {
        let (s, t) = (ss[k / per_s], ts[k % per_s]);
        if only_three_term && (s & !t).count_ones() != 3 {
            return None;
        }
        let v = gp_residual(p, s, t);
        (!v.is_zero()).then(|| GpWitness {
            s: Subset::from_bits(p.ground, s).unwrap(),
            t: Subset::from_bits(p.ground, t).unwrap(),
            value: v.to_string(),
        })
    })
}

/// All Plücker equations: every `S` of size `r+1` against every `T` of size
/// `r-1`, `C(n,r+1)·C(n,r-1)` instances without deduplication.
pub fn check_gp_full(p: &PluckerVector) -> Verdict<GpWitness> {
    Verdict { witness: gp_sweep(p, false) }
}

/// Only the instances with `|S ∖ T| = 3`.
pub fn check_gp_3term(p: &PluckerVector) -> Verdict<GpWitness> {
    Verdict { witness: gp_sweep(p, true) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Neither,
    Weak,
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PluckerClassification {
    pub label: Label,
    /// Failing instance of the full equations, if any.
    pub full: Option<GpWitness>,
    /// Failing 3-term instance, if any.
    pub three_term: Option<GpWitness>,
    pub support: Verdict<MatroidWitness>,
}

/// Strong when every Plücker equation holds; Weak when the 3-term equations
/// hold and the support is a matroid.
pub fn classify_plucker(p: &PluckerVector) -> PluckerClassification {
    let full = check_gp_full(p).witness;
    let three_term = if full.is_none() { None } else { check_gp_3term(p).witness };
    let support = is_matroid(&plucker_support(p));
    let label = if full.is_none() {
        Label::Strong
    } else if three_term.is_none() && support.holds() {
        Label::Weak
    } else {
        Label::Neither
    };
    PluckerClassification { label, full, three_term, support }
}

/// Builds an `r × n` matrix whose maximal minors are `p` up to a unit.
///
/// The colex-least basis `B` is moved to the first `r` positions, `p` is
/// scaled so `p_B = 1`, and the matrix `(I_r | a_ij)` with
/// `a_ij = (-1)^(r+i) p([r] ∖ {i} ∪ {j})` is built and its columns moved back.
pub fn reconstruct_plucker(p: &PluckerVector) -> Result<Matrix> {
    let cls = classify_plucker(p);
    if cls.label == Label::Neither {
        return Err(Error::Classification(describe_failure(&cls)));
    }
    let (n, r) = (p.ground.size(), p.rank);
    let ring = p.pf.ring();
    let (basis, value) = p.nonzero().next().ok_or(Error::ZeroVector)?;
    let scale = match value.inverse() {
        Some(inv) if p.pf.is_unit(value) => inv,
        _ => return Err(Error::Scaling(format!("p_B = {value} is not a unit"))),
    };

    // perm[e] = new position of e: basis elements first, then the rest
    let mut perm = vec![0; n];
    for (k, e) in BitIter(basis).chain(BitIter(!basis & p.ground.full_mask())).enumerate() {
        perm[e] = k;
    }
    let q = p.relabel(&perm)?;
    let head = (1u32 << r) - 1;
    let q_at = |mask: u32| q.at(mask).cloned().unwrap_or_else(|| ring.zero()) * &scale;

    let mut relabeled = Matrix::zeros(ring, r, n);
    for i in 0..r {
        relabeled.set(i, i, ring.one());
        for j in r..n {
            let v = q_at((head & !(1 << i)) | (1 << j));
            // (-1)^(r+i) with 1-based i
            let v = if (r + i + 1) % 2 == 0 { v } else { -v };
            relabeled.set(i, j, v);
        }
    }
    let rows: Vec<usize> = (0..r).collect();
    Ok(relabeled.submatrix(&rows, &perm))
}

fn describe_failure(cls: &PluckerClassification) -> String {
    if let Some(w) = &cls.three_term {
        format!("3-term equation S={}, T={} evaluates to {}", w.s, w.t, w.value)
    } else if let Some(MatroidWitness::Exchange { b1, b2, x }) = &cls.support.witness {
        format!("support is not a matroid: exchange fails at B1={b1}, B2={b2}, x={x}")
    } else {
        "support is not a matroid: bases of unequal size".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;

    fn q() -> PartialField {
        PartialField::rationals()
    }

    fn vec_q(n: usize, r: usize, vals: &[i64]) -> PluckerVector {
        let g = GroundSet::new(n).unwrap();
        PluckerVector::new(g, r, q(), vals.iter().map(|&v| Ring::Rationals.from_i64(v)).collect()).unwrap()
    }

    // colex order for n=4, r=2: 12, 13, 23, 14, 24, 34
    fn example() -> PluckerVector {
        vec_q(4, 2, &[1, 1, -1, 2, -1, 1])
    }

    fn sub(n: usize, e: &[usize]) -> Subset {
        GroundSet::new(n).unwrap().subset_of(e).unwrap()
    }

    #[test]
    fn from_matrix_example() {
        let a = Matrix::from_rows(Ring::Rationals, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        assert_eq!(plucker_from_matrix(&a, q()).unwrap(), example());
        let id = Matrix::from_rows(Ring::Rationals, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let p = plucker_from_matrix(&id, q()).unwrap();
        assert_eq!(p, vec_q(4, 2, &[1, 0, 0, 0, 0, 0]));
        let singular = Matrix::from_rows(Ring::Rationals, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(plucker_from_matrix(&singular, q()), Err(Error::Rank(2)));
        let big = Matrix::from_rows(Ring::Integers, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            plucker_from_matrix(&big, PartialField::regular()),
            Err(Error::NotElement { .. })
        ));
    }

    #[test]
    fn support_examples() {
        let all: Vec<u32> = masks_of_size(4, 2);
        assert_eq!(plucker_support(&example()).masks(), &all[..]);
        assert_eq!(plucker_support(&vec_q(4, 2, &[1, 0, 0, 0, 0, 0])).masks(), &[0b11]);
    }

    #[test]
    fn gp_checks() {
        assert!(check_gp_full(&example()).holds());
        assert!(check_gp_3term(&example()).holds());
        let corrupted = vec_q(4, 2, &[1, 1, -1, 2, -1, 2]);
        let w = check_gp_full(&corrupted).witness.unwrap();
        assert_eq!((w.s, w.t), (sub(4, &[1, 2, 3]), sub(4, &[4])));
        assert!(!check_gp_3term(&corrupted).holds());
        // the instance S={1,3,4}, T={2} also fails
        assert!(!gp_residual(&corrupted, 0b1101, 0b0010).is_zero());
        // rank one: every instance cancels
        assert!(check_gp_full(&vec_q(4, 1, &[3, -1, 2, 5])).holds());
        assert!(check_gp_3term(&vec_q(5, 2, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 4])).holds());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_plucker(&example()).label, Label::Strong);
        let two_blocks = vec_q(4, 2, &[1, 0, 0, 0, 0, 1]);
        let cls = classify_plucker(&two_blocks);
        assert_eq!(cls.label, Label::Neither);
        let w = cls.three_term.unwrap();
        assert_eq!((w.s, w.t), (sub(4, &[1, 2, 3]), sub(4, &[4])));
        assert!(!cls.support.holds());
        assert_eq!(classify_plucker(&vec_q(3, 2, &[1, 0, 0])).label, Label::Strong);
        assert_eq!(classify_plucker(&vec_q(3, 0, &[7])).label, Label::Strong);
        assert_eq!(classify_plucker(&vec_q(3, 3, &[7])).label, Label::Strong);
    }

    #[test]
    fn reconstruction_examples() {
        let a = reconstruct_plucker(&example()).unwrap();
        assert_eq!(a, Matrix::from_rows(Ring::Rationals, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap());
        let ind = vec_q(4, 2, &[1, 0, 0, 0, 0, 0]);
        let a = reconstruct_plucker(&ind).unwrap();
        assert_eq!(a, Matrix::from_rows(Ring::Rationals, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap());
        let a = reconstruct_plucker(&vec_q(2, 1, &[1, 1])).unwrap();
        assert_eq!(a, Matrix::from_rows(Ring::Rationals, &[vec![1, 1]]).unwrap());
        let bad = vec_q(4, 2, &[1, 0, 0, 0, 0, 1]);
        assert!(matches!(reconstruct_plucker(&bad), Err(Error::Classification(_))));
    }

    #[test]
    fn reconstruction_with_relabeling() {
        // first basis is {2,4}: columns must be moved
        let a = Matrix::from_rows(Ring::Rationals, &[vec![0, 1, 3, 0, 5], vec![0, 0, 2, 1, -1]]).unwrap();
        let p = plucker_from_matrix(&a, q()).unwrap();
        let b = reconstruct_plucker(&p).unwrap();
        assert_eq!(plucker_from_matrix(&b, q()).unwrap(), p);
        let reg = PartialField::regular();
        let a = Matrix::from_rows(Ring::Integers, &[vec![0, -1, 1, 0], vec![1, 0, 1, -1]]).unwrap();
        let p = plucker_from_matrix(&a, reg).unwrap();
        let b = reconstruct_plucker(&p).unwrap();
        assert_eq!(plucker_from_matrix(&b, reg).unwrap(), p);
    }

    #[test]
    fn input_validation() {
        let g = GroundSet::new(3).unwrap();
        let z = Ring::Integers;
        assert_eq!(
            PluckerVector::new(g, 1, PartialField::regular(), vec![z.zero(); 3]),
            Err(Error::ZeroVector)
        );
        assert!(matches!(
            PluckerVector::new(g, 1, PartialField::regular(), vec![z.from_i64(2), z.zero(), z.zero()]),
            Err(Error::NotElement { .. })
        ));
        assert!(PluckerVector::new(g, 1, q(), vec![]).is_err());
        let regular = PluckerVector::new(g, 1, PartialField::regular(), vec![z.zero(), z.from_i64(-1), z.one()]).unwrap();
        assert_eq!(regular.coords(), &[z.zero(), z.one(), z.from_i64(-1)]);
        let dup = [(sub(3, &[1]), Ring::Rationals.one()), (sub(3, &[1]), Ring::Rationals.one())];
        assert!(PluckerVector::from_entries(g, 1, q(), dup).is_err());
    }

    #[test]
    fn relabel_matches_column_permutation() {
        let a = Matrix::from_rows(Ring::Rationals, &[vec![1, 2, 0, 3], vec![0, 1, 4, -1]]).unwrap();
        let p = plucker_from_matrix(&a, q()).unwrap();
        let perm = [2, 0, 3, 1];
        // column e of a becomes column perm[e]
        let mut inv = [0; 4];
        for (e, &k) in perm.iter().enumerate() {
            inv[k] = e;
        }
        let permuted = a.submatrix(&[0, 1], &inv);
        assert_eq!(p.relabel(&perm).unwrap(), plucker_from_matrix(&permuted, q()).unwrap());
        assert!(p.relabel(&[0, 0, 1, 2]).is_err());
    }
}
