//! Exact verification of the counting bound for representable orthogonal
//! matroids, instantiated from the zero-pattern theorem with `c = 1`,
//! `d = n - 1`, `N = 2^(n-1)`, `m = n(n-1)/2` and `r = 2^(n^3)`.
//!
//! Every transcendental quantity is replaced by a rational over-approximation
//! with a certified proof, so a `true` verdict never depends on floating point.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{input_err, Result};

/// `e ≤ 2.71828183`.
pub const E_UPPER: (u64, u64) = (271_828_183, 100_000_000);
/// `e ≥ 2.71828182`.
pub const E_LOWER: (u64, u64) = (271_828_182, 100_000_000);
/// `log2(e) ≤ 1.4426951`.
pub const LOG2_E_UPPER: (u64, u64) = (14_426_951, 10_000_000);

/// Largest supported `precision` argument.
pub const MAX_PRECISION: u32 = 6;

fn ratio(p: (u64, u64)) -> BigRational {
    BigRational::new(BigInt::from(p.0), BigInt::from(p.1))
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

fn pw(base: &BigInt, e: u64) -> BigInt {
    Pow::pow(base, e)
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Rounds `x` up to a multiple of `10^-digits`.
fn round_up(x: &BigRational, digits: u32) -> BigRational {
    let scale = pow10(digits);
    BigRational::new((x * int(scale.clone())).ceil().to_integer(), scale)
}

/// Upper bound for `e` good to `8 + extra` decimals. The tail of the series
/// after `k` terms is below `1/(k!·k)`.
fn e_upper(extra: u32) -> BigRational {
    if extra == 0 {
        return ratio(E_UPPER);
    }
    let k = 40u32;
    let mut sum = BigRational::zero();
    let mut fact = BigInt::one();
    for i in 0..=k {
        if i > 0 {
            fact *= i;
        }
        sum += BigRational::new(BigInt::one(), fact.clone());
    }
    sum += BigRational::new(BigInt::one(), fact * k);
    round_up(&sum, 8 + extra).min(ratio(E_UPPER))
}

/// Upper bound for `log2(e) = 1/ln 2` good to `7 + extra` decimals, from a
/// partial sum of `ln 2 = Σ 1/(k 2^k)`, which is a lower bound.
fn log2_e_upper(extra: u32) -> BigRational {
    if extra == 0 {
        return ratio(LOG2_E_UPPER);
    }
    let mut ln2 = BigRational::zero();
    for k in 1..=80u32 {
        ln2 += BigRational::new(BigInt::one(), BigInt::from(k) * BigInt::from(2u32).pow(k));
    }
    round_up(&ln2.recip(), 7 + extra).min(ratio(LOG2_E_UPPER))
}

/// Upper bound `j/q` for `log2(3)` with `q = 10^extra`: `3^q < 2^j` where `j`
/// is the bit length of `3^q`. At `extra = 0` this is the plain bit-length
/// bound `2`.
fn log2_3_upper(extra: u32) -> BigRational {
    let q = pow10(extra);
    let power: BigUint = Pow::pow(BigUint::from(3u32), q.to_biguint().unwrap());
    BigRational::new(BigInt::from(power.bits()), q)
}

/// Outcome of one inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    /// Holds, proved with exact arithmetic.
    Certified,
    /// Fails, proved with exact arithmetic.
    Refuted,
    /// The available bounds decide neither way.
    Undecided,
}

impl StepStatus {
    fn of(holds: bool) -> Self {
        if holds {
            StepStatus::Certified
        } else {
            StepStatus::Refuted
        }
    }
}

/// One inequality of the chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub id: &'static str,
    pub claim: String,
    pub status: StepStatus,
    /// Whether the verdict depends on this step.
    pub required: bool,
}

fn decimal<S: Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Instantiated parameters, certified bounds and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub n: u64,
    pub precision: u32,
    #[serde(serialize_with = "decimal")]
    pub c: BigInt,
    #[serde(serialize_with = "decimal")]
    pub d: BigInt,
    #[serde(rename = "N", serialize_with = "decimal")]
    pub big_n: BigInt,
    #[serde(serialize_with = "decimal")]
    pub m: BigInt,
    /// `2^(n^3)`.
    #[serde(serialize_with = "decimal")]
    pub r: BigInt,
    #[serde(serialize_with = "decimal")]
    pub e_upper: BigRational,
    #[serde(serialize_with = "decimal")]
    pub log2_e_upper: BigRational,
    #[serde(serialize_with = "decimal")]
    pub log2_3_upper: BigRational,
    /// `binom(Nd + m, m)`.
    #[serde(serialize_with = "decimal")]
    pub binomial: BigInt,
    /// Upper bound for `log(3r) + N log(c (eN)^d)`.
    #[serde(serialize_with = "decimal")]
    pub log_term_upper: BigRational,
    /// `binomial · log_term_upper`.
    #[serde(serialize_with = "decimal")]
    pub lhs_upper_bound: BigRational,
    /// Bit length of `ceil(lhs_upper_bound)`, for reading at a glance.
    pub lhs_upper_bound_bits: u64,
    pub steps: Vec<ChainStep>,
    /// `log2` of the total bound `2^n · 2^(n^3)` over all orthogonal matroids.
    pub total_bound_log2: u64,
    /// `n - 1.5 log2 n`, the lower bound for `log log` of the matroid count.
    /// Context only; not used by the verdict.
    pub knuth_loglog_lower: f64,
    pub verdict: bool,
}

/// Runs the chain at ground size `n ≥ 12`. `precision` tightens every
/// transcendental bound by that many extra decimal digits (0 uses the fixed
/// published bounds).
pub fn verify_nelson_chain(n: u64, precision: u32) -> Result<BoundCheck> {
    if n < 12 {
        return input_err(format!("precondition n >= 12 violated: n = {n}"));
    }
    if n > 64 {
        return input_err(format!("n = {n} is beyond the supported range 12..=64"));
    }
    if precision > MAX_PRECISION {
        return input_err(format!("precision {precision} exceeds {MAX_PRECISION}"));
    }
    let two = BigInt::from(2u32);
    let nn = BigInt::from(n);
    let c = BigInt::one();
    let d = BigInt::from(n - 1);
    let big_n = pw(&two, n - 1);
    let m = BigInt::from(n * (n - 1) / 2);
    let n_cubed = n * n * n;
    let n_sq = n * n;
    let r = pw(&two, n_cubed);

    let e_up = e_upper(precision);
    let log2_e = log2_e_upper(precision);
    let log2_3 = log2_3_upper(precision);

    let binom = binomial(&big_n * &d + &m, m.clone());
    // log(3r) = log 3 + n^3 and log(c (eN)^d) = d (log e + n - 1) since c = 1
    let log_term = &log2_3 + int(n_cubed) + int(&big_n * &d) * (&log2_e + int(n - 1));
    let lhs = int(binom.clone()) * &log_term;

    let mut steps = Vec::new();

    let wide = binomial(&nn * &pw(&two, n), BigInt::from(n_sq));
    steps.push(ChainStep {
        id: "binomial-widen",
        claim: "binom(Nd+m, m) <= binom(n*2^n, n^2)".into(),
        status: StepStatus::of(binom <= wide),
        required: false,
    });

    // (e * n * 2^(n-1) / n^2)^(n^2), increasing in e
    let estimate = |e: &BigRational| (e * int(pw(&two, n - 1)) / int(nn.clone())).pow(n_sq as i32);
    let estimate_status = if int(wide.clone()) <= estimate(&ratio(E_LOWER)) {
        StepStatus::Certified
    } else if int(wide.clone()) > estimate(&e_up) {
        StepStatus::Refuted
    } else {
        StepStatus::Undecided
    };
    steps.push(ChainStep {
        id: "binomial-estimate",
        claim: "binom(n*2^n, n^2) <= (e*n*2^(n-1)/n^2)^(n^2)".into(),
        status: estimate_status,
        required: false,
    });
    steps.push(ChainStep {
        id: "estimate-power",
        claim: "(e*n*2^(n-1)/n^2)^(n^2) < (2^(n+1)/n)^(n^2)".into(),
        status: StepStatus::of(e_up < int(4)),
        required: false,
    });

    // binom · n^(n^2) < 2^((n+1) n^2)
    let power_bound = BigRational::new(pw(&two, (n + 1) * n_sq), pw(&nn, n_sq));
    steps.push(ChainStep {
        id: "binomial-direct",
        claim: "binom(Nd+m, m) < (2^(n+1)/n)^(n^2)".into(),
        status: StepStatus::of(int(binom.clone()) < power_bound),
        required: true,
    });

    let integer_log = int(2 + n_cubed) + int(BigInt::from(n - 1) * &big_n * (n + 1));
    steps.push(ChainStep {
        id: "log-expansion",
        claim: "log(3r) + N log(c(eN)^d) <= 2 + n^3 + (n-1)*2^(n-1)*(n+1)".into(),
        status: StepStatus::of(log_term <= integer_log && log2_3 <= int(2) && log2_e <= int(2)),
        required: true,
    });
    let power_log = int(&nn * &nn * &big_n);
    steps.push(ChainStep {
        id: "log-power",
        claim: "2 + n^3 + (n-1)*2^(n-1)*(n+1) < n^2 * 2^(n-1)".into(),
        status: StepStatus::of(integer_log < power_log),
        required: true,
    });
    let product = &power_bound * &power_log;
    let factored = int(r.clone()) * BigRational::new(pw(&two, n_sq + n - 1), pw(&nn, n_sq - 2));
    steps.push(ChainStep {
        id: "identity",
        claim: "(2^(n+1)/n)^(n^2) * n^2 * 2^(n-1) = 2^(n^3) * 2^(n^2+n-1) / n^(n^2-2)".into(),
        status: StepStatus::of(product == factored),
        required: true,
    });
    steps.push(ChainStep {
        id: "final-ratio",
        claim: "2^(n^2+n-1) < n^(n^2-2)".into(),
        status: StepStatus::of(pw(&two, n_sq + n - 1) < pw(&nn, n_sq - 2)),
        required: true,
    });
    steps.push(ChainStep {
        id: "hypothesis",
        claim: "binom(Nd+m, m) * (log(3r) + N log(c(eN)^d)) < r".into(),
        status: StepStatus::of(lhs < int(r.clone())),
        required: true,
    });

    let verdict = steps.iter().filter(|s| s.required).all(|s| s.status == StepStatus::Certified);
    let lhs_bits = lhs.ceil().to_integer().abs().bits();
    Ok(BoundCheck {
        n,
        precision,
        c,
        d,
        big_n,
        m,
        r,
        e_upper: e_up,
        log2_e_upper: log2_e,
        log2_3_upper: log2_3,
        binomial: binom,
        log_term_upper: log_term,
        lhs_upper_bound: lhs,
        lhs_upper_bound_bits: lhs_bits,
        steps,
        total_bound_log2: n + n_cubed,
        knuth_loglog_lower: n as f64 - 1.5 * (n as f64).log2(),
        verdict,
    })
}

/// Certified upper bound for `binom(Nd + m, m) (log(3r) + N log(c (eN)^d))`
/// with the default bounds, where `log(3r)` is bounded by the bit length of
/// `3r` and `log N` by the bit length of `N`.
pub(crate) fn nelson_rhs_upper(c: &BigUint, d: u64, big_n: u64, m: u64, r: &BigUint) -> BigRational {
    let binom = binomial(BigUint::from(big_n * d + m), BigUint::from(m));
    let bits = |v: &BigUint| int(BigInt::from(v.bits()));
    let three_r = r * 3u32;
    // log(c (eN)^d) = log c + d (log e + log N)
    let inner = bits(c) + int(d) * (ratio(LOG2_E_UPPER) + bits(&BigUint::from(big_n)));
    int(BigInt::from(binom)) * (bits(&three_r) + int(big_n) * inner)
}

/// The smallest `r` found by doubling and bisection for which the
/// zero-pattern hypothesis `r > binom(Nd + m, m) (...)` is certified. The
/// certificate is checked at the returned value itself.
pub fn certified_nelson_r(c: u64, d: u64, big_n: u64, m: u64) -> BigUint {
    let c = BigUint::from(c);
    let ok = |r: &BigUint| int(BigInt::from(r.clone())) > nelson_rhs_upper(&c, d, big_n, m, r);
    let mut hi = BigUint::one();
    while !ok(&hi) {
        hi <<= 1;
    }
    let mut lo = &hi >> 1u32;
    while &lo + 1u32 < hi {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step<'a>(b: &'a BoundCheck, id: &str) -> &'a ChainStep {
        b.steps.iter().find(|s| s.id == id).unwrap()
    }

    #[test]
    fn holds_at_twelve_and_sixteen() {
        for n in [12, 16] {
            let b = verify_nelson_chain(n, 0).unwrap();
            assert!(b.verdict, "n = {n}");
            assert_eq!(b.r, pw(&BigInt::from(2u32), n * n * n));
            assert_eq!(b.big_n, pw(&BigInt::from(2u32), n - 1));
            assert_eq!(b.total_bound_log2, n + n * n * n);
        }
    }

    #[test]
    fn precondition() {
        assert!(verify_nelson_chain(11, 0).is_err());
        assert!(verify_nelson_chain(12, MAX_PRECISION + 1).is_err());
    }

    #[test]
    fn printed_estimate_is_refuted() {
        let b = verify_nelson_chain(12, 0).unwrap();
        assert_eq!(step(&b, "binomial-widen").status, StepStatus::Certified);
        assert_eq!(step(&b, "binomial-estimate").status, StepStatus::Refuted);
        assert_eq!(step(&b, "binomial-direct").status, StepStatus::Certified);
    }

    #[test]
    fn log_term_matches_closed_form() {
        // with the bit-length bound log 3 <= 2 the log term is exactly
        // 2 + n^3 + (n-1) 2^(n-1) (log2e + n - 1)
        let b = verify_nelson_chain(12, 0).unwrap();
        let expect = int(2 + 1728) + int(11 * 2048) * (ratio(LOG2_E_UPPER) + int(11));
        assert_eq!(b.log_term_upper, expect);
    }

    #[test]
    fn tighter_bounds_are_tighter() {
        let mut prev: Option<BoundCheck> = None;
        for p in 0..=3 {
            let b = verify_nelson_chain(12, p).unwrap();
            assert!(b.verdict);
            if let Some(prev) = prev {
                assert!(b.e_upper <= prev.e_upper);
                assert!(b.log2_e_upper <= prev.log2_e_upper);
                assert!(b.log2_3_upper <= prev.log2_3_upper);
                assert!(b.lhs_upper_bound <= prev.lhs_upper_bound);
            }
            assert!(b.e_upper >= ratio(E_LOWER));
            prev = Some(b);
        }
    }

    #[test]
    fn refined_constants_are_sound() {
        // 3^q <= 2^(j) with q, j from the bound
        for p in 0..=3 {
            let b = log2_3_upper(p);
            let q = b.denom().to_biguint().unwrap();
            let j = b.numer().to_biguint().unwrap();
            assert!(Pow::pow(BigUint::from(3u32), &q) <= Pow::pow(BigUint::from(2u32), &j));
        }
        let e = e_upper(4);
        assert!(e > BigRational::new(2718281828i64.into(), 1_000_000_000i64.into()));
        let l = log2_e_upper(4);
        assert!(l > BigRational::new(14426950i64.into(), 10_000_000i64.into()));
    }

    #[test]
    fn certified_r_is_a_threshold() {
        let r = certified_nelson_r(1, 1, 2, 1);
        let c = BigUint::one();
        assert!(int(BigInt::from(r.clone())) > nelson_rhs_upper(&c, 1, 2, 1, &r));
        let below = &r - 1u32;
        assert!(int(BigInt::from(below.clone())) <= nelson_rhs_upper(&c, 1, 2, 1, &below));
    }
}
