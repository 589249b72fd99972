use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{input_err, Error, Result};

use super::matrix::{Matrix, SkewMatrix};
use super::scalar::{PartialField, Scalar};

/// The concrete ring maps that are supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HomMap {
    Identity,
    /// Reduction `Z -> GF(p)`.
    IntegerToPrimeField(u64),
    /// Reduction of rationals whose denominators are prime to `p`.
    RationalsToPrimeField(u64),
}

/// A homomorphism of partial fields: a ring map sending `G1` into `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    source: PartialField,
    target: PartialField,
    map: HomMap,
}

impl Homomorphism {
    pub fn identity(pf: PartialField) -> Self {
        Homomorphism { source: pf, target: pf, map: HomMap::Identity }
    }

    /// `Q -> GF(p)`, defined on rationals with denominators prime to `p`.
    pub fn rationals_to_prime_field(p: u64) -> Result<Self> {
        Ok(Homomorphism {
            source: PartialField::rationals(),
            target: PartialField::gf(p)?,
            map: HomMap::RationalsToPrimeField(p),
        })
    }

    pub fn source(&self) -> PartialField {
        self.source
    }

    pub fn target(&self) -> PartialField {
        self.target
    }

    pub fn map(&self) -> HomMap {
        self.map
    }

    pub fn apply(&self, v: &Scalar) -> Result<Scalar> {
        if v.ring() != self.source.ring() {
            return input_err(format!("{v} is not in the source ring {}", self.source.ring()));
        }
        match (self.map, v) {
            (HomMap::Identity, _) => Ok(v.clone()),
            (HomMap::IntegerToPrimeField(_), Scalar::Int(x)) => Ok(self.target.ring().from_bigint(x)),
            (HomMap::RationalsToPrimeField(p), Scalar::Rat(x)) => {
                let pb = BigInt::from(p);
                if x.denom().is_multiple_of(&pb) {
                    return Err(Error::MapUndefined(format!(
                        "{p} divides the denominator of {v}"
                    )));
                }
                let ring = self.target.ring();
                let num = ring.from_bigint(x.numer());
                let den = ring.from_bigint(x.denom());
                Ok(num * den.inverse().expect("denominator is a unit mod p"))
            }
            _ => unreachable!("source ring checked above"),
        }
    }
}

/// Residue map `Z -> Z/(p) = GF(p)`, a homomorphism from the regular
/// partial field onto `GF(p)`.
pub fn residue_hom(p: u64) -> Result<Homomorphism> {
    Ok(Homomorphism {
        source: PartialField::regular(),
        target: PartialField::gf(p)?,
        map: HomMap::IntegerToPrimeField(p),
    })
}

/// Entrywise image of a matrix.
pub fn apply_hom(h: &Homomorphism, m: &Matrix) -> Result<Matrix> {
    m.map(|v| h.apply(v), h.target().ring())
}

pub fn apply_hom_skew(h: &Homomorphism, m: &SkewMatrix) -> Result<SkewMatrix> {
    SkewMatrix::new(apply_hom(h, m.matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{pfaffian, Ring};

    #[test]
    fn reductions() {
        let z = Ring::Integers;
        let m = Matrix::from_rows(z, &[vec![0, -3], vec![3, 0]]).unwrap();
        let h2 = residue_hom(2).unwrap();
        let gf2 = h2.target().ring();
        assert_eq!(apply_hom(&h2, &m).unwrap(), Matrix::from_rows(gf2, &[vec![0, 1], vec![1, 0]]).unwrap());
        let id = Homomorphism::identity(PartialField::regular());
        assert_eq!(apply_hom(&id, &m).unwrap(), m);

        let a = SkewMatrix::new(
            Matrix::from_rows(z, &[vec![0, -3, 0, 1], vec![3, 0, 0, 6], vec![0, 0, 0, 0], vec![-1, -6, 0, 0]])
                .unwrap(),
        )
        .unwrap();
        let h3 = residue_hom(3).unwrap();
        let b = apply_hom_skew(&h3, &a).unwrap();
        let gf3 = h3.target().ring();
        assert_eq!(*b.get(0, 1), gf3.zero());
        assert_eq!(*b.get(0, 3), gf3.one());
        assert_eq!(*b.get(1, 3), gf3.zero());
    }

    #[test]
    fn residue_values() {
        let z = Ring::Integers;
        assert_eq!(residue_hom(2).unwrap().apply(&z.from_i64(-1)).unwrap().to_string(), "1");
        assert_eq!(residue_hom(3).unwrap().apply(&z.from_i64(-1)).unwrap().to_string(), "2");
        assert_eq!(residue_hom(7).unwrap().apply(&z.from_i64(10)).unwrap().to_string(), "3");
        assert!(residue_hom(4).is_err());
        // units go to units
        for p in [2, 3, 5, 7] {
            let h = residue_hom(p).unwrap();
            for u in [-1, 1] {
                assert!(h.target().is_unit(&h.apply(&z.from_i64(u)).unwrap()));
            }
        }
    }

    #[test]
    fn rational_reduction() {
        let q = Ring::Rationals;
        let h = Homomorphism::rationals_to_prime_field(5).unwrap();
        let v = h.apply(&q.parse("1/2").unwrap()).unwrap();
        assert_eq!(v.to_string(), "3");
        assert!(matches!(h.apply(&q.parse("1/5").unwrap()), Err(Error::MapUndefined(_))));
        assert!(h.apply(&Ring::Integers.one()).is_err());
    }

    #[test]
    fn hom_commutes_with_pfaffian() {
        let z = Ring::Integers;
        let upper: Vec<Scalar> = [2, -1, 4, 0, 3, -5].iter().map(|&v| z.from_i64(v)).collect();
        let a = SkewMatrix::from_upper(z, 4, &upper).unwrap();
        for p in [2, 3, 5, 7, 11] {
            let h = residue_hom(p).unwrap();
            let lhs = h.apply(&pfaffian(&a)).unwrap();
            assert_eq!(lhs, pfaffian(&apply_hom_skew(&h, &a).unwrap()));
        }
    }
}
