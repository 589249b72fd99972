use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{input_err, Error, Result};

/// The commutative ring scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl Ring {
    /// `GF(p)`; fails unless `p` is prime.
    pub fn prime_field(p: u64) -> Result<Ring> {
        if !is_prime(p) {
            return input_err(format!("{p} is not prime"));
        }
        Ok(Ring::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Ring::Integers => Scalar::Int(v.clone()),
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            Ring::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Mod(Residue { value: r.to_u64().unwrap_or(0), p })
            }
        }
    }

    /// Parses the decimal serialization: `"-3"`, and `"2/5"` over the rationals.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Input(format!("cannot parse {text:?} as an element of {self}"));
        match self {
            Ring::Rationals => {
                let v = match text.split_once('/') {
                    Some((num, den)) => {
                        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                        if den.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(num, den)
                    }
                    None => BigRational::from_integer(text.parse().map_err(|_| bad())?),
                };
                Ok(Scalar::Rat(v))
            }
            _ => {
                let v: BigInt = text.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&v))
            }
        }
    }

    pub fn contains(&self, v: &Scalar) -> bool {
        v.ring() == *self
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// A residue class modulo a prime, kept in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    p: u64,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(self, mut e: u64) -> Residue {
        let mut base = self.value as u128;
        let p = self.p as u128;
        let mut acc = 1u128 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Residue { value: acc as u64, p: self.p }
    }
}

/// An exact scalar tagged by its ring. Arithmetic between scalars of
/// different rings is a logic error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Mod(Residue),
}

impl Scalar {
    pub fn ring(&self) -> Ring {
        match self {
            Scalar::Int(_) => Ring::Integers,
            Scalar::Rat(_) => Ring::Rationals,
            Scalar::Mod(r) => Ring::PrimeField(r.p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Mod(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(v) => v.is_one(),
            Scalar::Rat(v) => v.is_one(),
            Scalar::Mod(r) => r.value == 1 % r.p,
        }
    }

    /// `true` for `1` and `-1`.
    pub fn is_sign(&self) -> bool {
        self.is_one() || (-self).is_one()
    }

    /// Multiplicative inverse when it exists in the ring.
    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Int(v) => {
                if v.abs().is_one() {
                    Some(self.clone())
                } else {
                    None
                }
            }
            Scalar::Rat(v) => Some(Scalar::Rat(v.recip())),
            Scalar::Mod(r) => Some(Scalar::Mod(r.pow(r.p - 2))),
        }
    }

    /// Exact quotient over the integers (the divisor must divide); field
    /// division elsewhere.
    pub(crate) fn exact_div(&self, d: &Scalar) -> Scalar {
        match (self, d) {
            (Scalar::Int(a), Scalar::Int(b)) => {
                debug_assert!((a % b).is_zero());
                Scalar::Int(a / b)
            }
            _ => self * &d.inverse().expect("division by zero"),
        }
    }

    /// Integer value, when the scalar is an integer or an integral rational.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) if v.is_integer() => Some(v.to_integer()),
            Scalar::Rat(_) => None,
            Scalar::Mod(r) => Some(BigInt::from(r.value)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}"),
            Scalar::Rat(v) => {
                if v.is_integer() {
                    write!(f, "{}", v.numer())
                } else {
                    write!(f, "{}/{}", v.numer(), v.denom())
                }
            }
            Scalar::Mod(r) => write!(f, "{}", r.value),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("arithmetic between {} and {}", a.ring(), b.ring())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod(a), Scalar::Mod(b)) if a.p == b.p => {
                let v = (a.value as u128 + b.value as u128) % a.p as u128;
                Scalar::Mod(Residue { value: v as u64, p: a.p })
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a - b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            (Scalar::Mod(a), Scalar::Mod(b)) if a.p == b.p => {
                let v = (a.value as u128 + a.p as u128 - b.value as u128) % a.p as u128;
                Scalar::Mod(Residue { value: v as u64, p: a.p })
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod(a), Scalar::Mod(b)) if a.p == b.p => {
                let v = (a.value as u128 * b.value as u128) % a.p as u128;
                Scalar::Mod(Residue { value: v as u64, p: a.p })
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod(a) => Scalar::Mod(Residue { value: (a.p - a.value) % a.p, p: a.p }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// The unit subgroup `G` of a partial field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnitGroup {
    /// Every nonzero element; the partial field is a field.
    AllNonzero,
    /// `{1, -1}`.
    PlusMinusOne,
}

/// A partial field `(G, R)`: elements are `G ∪ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartialField {
    ring: Ring,
    units: UnitGroup,
}

impl PartialField {
    /// A field viewed as a partial field.
    pub fn field(ring: Ring) -> Result<Self> {
        if !ring.is_field() {
            return input_err("the integers are not a field; use the regular partial field");
        }
        Ok(PartialField { ring, units: UnitGroup::AllNonzero })
    }

    /// `({1, -1}, Z)`.
    pub fn regular() -> Self {
        PartialField { ring: Ring::Integers, units: UnitGroup::PlusMinusOne }
    }

    pub fn gf(p: u64) -> Result<Self> {
        Self::field(Ring::prime_field(p)?)
    }

    pub fn rationals() -> Self {
        PartialField { ring: Ring::Rationals, units: UnitGroup::AllNonzero }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn units(&self) -> UnitGroup {
        self.units
    }

    pub fn is_unit(&self, v: &Scalar) -> bool {
        if v.ring() != self.ring || v.is_zero() {
            return false;
        }
        match self.units {
            UnitGroup::AllNonzero => true,
            UnitGroup::PlusMinusOne => v.is_sign(),
        }
    }
}

impl fmt::Display for PartialField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.units {
            UnitGroup::AllNonzero => write!(f, "{}", self.ring),
            UnitGroup::PlusMinusOne => write!(f, "regular partial field"),
        }
    }
}

/// `v ∈ P` iff `v = 0` or `v ∈ G`.
pub fn is_element(pf: &PartialField, v: &Scalar) -> bool {
    v.ring() == pf.ring && (v.is_zero() || pf.is_unit(v))
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
