//! Exact rational arithmetic helpers: factorials, Catalan numbers,
//! half-integer Gamma values, and the closed-form volume products.

use std::fmt;
use std::ops::{Div, Mul};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Cat(k) = C(2k, k) / (k + 1)`, memoized.
pub fn catalan(k: u64) -> BigInt {
    static CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigInt::one()]));
    let mut cache = cache.lock().unwrap();
    while cache.len() as u64 <= k {
        let i = cache.len() as u64;
        cache.push(binomial(2 * i, i) / BigInt::from(i + 1));
    }
    cache[k as usize].clone()
}

/// `2^exp` as an exact rational; `exp` may be negative.
pub fn pow2(exp: i64) -> Rational {
    let p = BigInt::from(2).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// A value `factor * sqrt(pi)^sqrt_pi_exponent` with `factor` rational.
///
/// Gamma at positive half-integers always lands in this ring, so products and
/// quotients of such Gamma values never require transcendental arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaHalf {
    pub factor: Rational,
    pub sqrt_pi_exponent: i64,
}

impl GammaHalf {
    pub fn one() -> Self {
        GammaHalf {
            factor: Rational::one(),
            sqrt_pi_exponent: 0,
        }
    }

    /// Converts to a plain rational; fails when sqrt(pi) did not cancel.
    pub fn into_rational(self) -> Result<Rational> {
        if self.sqrt_pi_exponent == 0 || self.factor.is_zero() {
            Ok(self.factor)
        } else {
            Err(Error::SqrtPiResidue(self.sqrt_pi_exponent))
        }
    }
}

impl Mul for GammaHalf {
    type Output = GammaHalf;
    fn mul(self, rhs: GammaHalf) -> GammaHalf {
        GammaHalf {
            factor: self.factor * rhs.factor,
            sqrt_pi_exponent: self.sqrt_pi_exponent + rhs.sqrt_pi_exponent,
        }
    }
}

impl Div for GammaHalf {
    type Output = GammaHalf;
    fn div(self, rhs: GammaHalf) -> GammaHalf {
        GammaHalf {
            factor: self.factor / rhs.factor,
            sqrt_pi_exponent: self.sqrt_pi_exponent - rhs.sqrt_pi_exponent,
        }
    }
}

/// `Gamma(x)` for a positive half-integer `x`, passed as `two_x = 2x`.
///
/// `Gamma(m) = (m-1)!` for integer `m`, and
/// `Gamma(k + 1/2) = (2k)! / (4^k k!) * sqrt(pi)`.
pub fn gamma_half(two_x: i64) -> Result<GammaHalf> {
    if two_x <= 0 {
        return Err(Error::GammaArgument(two_x));
    }
    if two_x % 2 == 0 {
        let m = (two_x / 2) as u64;
        Ok(GammaHalf {
            factor: Rational::from_integer(factorial(m - 1)),
            sqrt_pi_exponent: 0,
        })
    } else {
        let k = ((two_x - 1) / 2) as u64;
        let numer = factorial(2 * k);
        let denom = BigInt::from(4).pow(k as u32) * factorial(k);
        Ok(GammaHalf {
            factor: Rational::new(numer, denom),
            sqrt_pi_exponent: 1,
        })
    }
}

/// Parameters `(n, a, b, c)` of the Morris-type constant terms; `c` is a
/// positive half-integer stored as `two_c = 2c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorrisParams {
    pub n: usize,
    pub a: i64,
    pub b: i64,
    pub two_c: i64,
}

impl MorrisParams {
    pub fn new(n: usize, a: i64, b: i64, two_c: i64) -> Result<Self> {
        if a < 0 || b < 0 {
            return Err(Error::InvalidParameter(format!(
                "morris parameters need a, b >= 0, got a = {a}, b = {b}"
            )));
        }
        if two_c < 1 {
            return Err(Error::InvalidParameter(format!(
                "morris parameter c must be a positive half-integer, got 2c = {two_c}"
            )));
        }
        Ok(MorrisParams { n, a, b, two_c })
    }

    /// Renders `c` as `1/2`, `1`, `3/2`, ...
    pub fn c_display(&self) -> String {
        if self.two_c % 2 == 0 {
            format!("{}", self.two_c / 2)
        } else {
            format!("{}/2", self.two_c)
        }
    }
}

impl fmt::Display for MorrisParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={}, a={}, b={}, c={}",
            self.n,
            self.a,
            self.b,
            self.c_display()
        )
    }
}

/// Right-hand side of the Morris identity:
/// `(1/n!) prod_{j=0}^{n-1} G(a+b+(n-1+j)c) G(c) / (G(a+jc) G(c+jc) G(b+jc+1))`
/// with all Gamma arguments half-integers.
pub fn morris_rhs(p: &MorrisParams) -> Result<Rational> {
    let (n, a, b, c2) = (p.n as i64, p.a, p.b, p.two_c);
    let mut acc = GammaHalf::one();
    for j in 0..n {
        let numer = gamma_half(2 * (a + b) + (n - 1 + j) * c2)? * gamma_half(c2)?;
        let denom = gamma_half(2 * a + j * c2)? * gamma_half(c2 + j * c2)?
            * gamma_half(2 * b + j * c2 + 2)?;
        acc = acc * (numer / denom);
    }
    let value = acc.into_rational()?;
    Ok(value / Rational::from_integer(factorial(p.n as u64)))
}

/// Right-hand side of the type `C` analogue of the Morris identity:
/// `2^{2an + 4c*C(n,2) - 2n} (1/n!)
///  prod_{j=0}^{n-1} G(a+(b-1)/2+(n-1+j)c) G(c) / (G((b+1)/2+jc) G(c+jc) G(a+jc))`.
pub fn morris_c_rhs(p: &MorrisParams) -> Result<Rational> {
    let (n, a, b, c2) = (p.n as i64, p.a, p.b, p.two_c);
    let mut acc = GammaHalf::one();
    for j in 0..n {
        let numer = gamma_half(2 * a + (b - 1) + (n - 1 + j) * c2)? * gamma_half(c2)?;
        let denom = gamma_half((b + 1) + j * c2)? * gamma_half(c2 + j * c2)?
            * gamma_half(2 * a + j * c2)?;
        acc = acc * (numer / denom);
    }
    let value = acc.into_rational()?;
    // 4c * C(n,2) = 2c * n(n-1), always an integer exponent.
    let exponent = 2 * a * n + c2 * n * (n - 1) - 2 * n;
    Ok(pow2(exponent) * value / Rational::from_integer(factorial(p.n as u64)))
}

/// `vol(CRY_n) = prod_{i=1}^{n-2} Cat(i)` for `n >= 2`.
pub fn cry_volume_formula(n: u64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "CRY_n needs n >= 2, got {n}"
        )));
    }
    let mut acc = BigInt::one();
    for i in 1..=n.saturating_sub(2) {
        acc *= catalan(i);
    }
    Ok(acc)
}

/// `vol(CRYD_{n+1}) = 2^{(n-1)^2} prod_{k=0}^{n-1} Cat(k)` for `n >= 1`.
pub fn cryd_volume_formula(n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "CRYD_{{n+1}} needs n >= 1, got {n}"
        )));
    }
    let mut acc = BigInt::from(2).pow(((n - 1) * (n - 1)) as u32);
    for k in 0..n {
        acc *= catalan(k);
    }
    Ok(acc)
}

/// `vol(CRYC_{n+1}) = 2^{n(n-1)} prod_{k=0}^{n-1} Cat(k)` for `n >= 1`.
pub fn cryc_volume_formula(n: u64) -> Result<BigInt> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "CRYC_{{n+1}} needs n >= 1, got {n}"
        )));
    }
    let mut acc = BigInt::from(2).pow((n * (n - 1)) as u32);
    for k in 0..n {
        acc *= catalan(k);
    }
    Ok(acc)
}

/// Convenience: an integer as a `Rational`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigInt::from(1));
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(catalan(5), BigInt::from(42));
    }

    #[test]
    fn gamma_at_half_integers() {
        // Gamma(1/2) = sqrt(pi)
        let g = gamma_half(1).unwrap();
        assert_eq!(g.factor, rat(1));
        assert_eq!(g.sqrt_pi_exponent, 1);
        // Gamma(3) = 2
        let g = gamma_half(6).unwrap();
        assert_eq!(g.factor, rat(2));
        assert_eq!(g.sqrt_pi_exponent, 0);
        // Gamma(5/2) = (3/4) sqrt(pi)
        let g = gamma_half(5).unwrap();
        assert_eq!(g.factor, Rational::new(BigInt::from(3), BigInt::from(4)));
        assert_eq!(g.sqrt_pi_exponent, 1);
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(gamma_half(0).is_err());
        assert!(gamma_half(-3).is_err());
    }

    #[test]
    fn morris_rhs_values() {
        let p = MorrisParams::new(1, 2, 0, 1).unwrap();
        assert_eq!(morris_rhs(&p).unwrap(), rat(1));
        let p = MorrisParams::new(2, 2, 0, 1).unwrap();
        assert_eq!(morris_rhs(&p).unwrap(), rat(2));
        // n = 1 case reduces to a binomial coefficient: C(a+b-1, b).
        let p = MorrisParams::new(1, 3, 2, 1).unwrap();
        assert_eq!(morris_rhs(&p).unwrap(), rat(6));
    }

    #[test]
    fn morris_rhs_n1_is_binomial_for_any_c() {
        for a in 1..=5i64 {
            for b in 0..=4i64 {
                for two_c in [1, 2, 3] {
                    let p = MorrisParams::new(1, a, b, two_c).unwrap();
                    let expect = binomial((a + b - 1) as u64, b as u64);
                    assert_eq!(
                        morris_rhs(&p).unwrap(),
                        Rational::from_integer(expect),
                        "a={a} b={b} 2c={two_c}"
                    );
                }
            }
        }
    }

    #[test]
    fn morris_c_rhs_values() {
        // Matches the one-variable constant term x^-1 (1-x)^-2 directly.
        let p = MorrisParams::new(1, 2, 0, 1).unwrap();
        assert_eq!(morris_c_rhs(&p).unwrap(), rat(2));
        // 2^{n^2+n} Cat(1) Cat(2) at n = 2.
        let p = MorrisParams::new(2, 2, 1, 1).unwrap();
        assert_eq!(morris_c_rhs(&p).unwrap(), rat(128));
        // 2^{n^2} Cat(1) Cat(2) at n = 2.
        let p = MorrisParams::new(2, 2, 0, 1).unwrap();
        assert_eq!(morris_c_rhs(&p).unwrap(), rat(32));
    }

    #[test]
    fn volume_formulas() {
        assert_eq!(cry_volume_formula(2).unwrap(), BigInt::from(1));
        assert_eq!(cry_volume_formula(4).unwrap(), BigInt::from(2));
        assert_eq!(cry_volume_formula(6).unwrap(), BigInt::from(140));
        assert_eq!(cryd_volume_formula(1).unwrap(), BigInt::from(1));
        assert_eq!(cryd_volume_formula(2).unwrap(), BigInt::from(2));
        assert_eq!(cryd_volume_formula(3).unwrap(), BigInt::from(32));
        assert_eq!(cryc_volume_formula(1).unwrap(), BigInt::from(1));
        assert_eq!(cryc_volume_formula(2).unwrap(), BigInt::from(4));
        assert_eq!(cryc_volume_formula(3).unwrap(), BigInt::from(128));
    }

    #[test]
    fn cryc_is_power_of_two_times_cryd() {
        for n in 1..=8u64 {
            let lhs = cryc_volume_formula(n).unwrap();
            let rhs = BigInt::from(2).pow((n - 1) as u32) * cryd_volume_formula(n).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn gamma_ratio_collapses_to_power_of_two() {
        // G(n+1) G(1/2) / (G((n+2)/2) G((n+1)/2)) = 2^n
        for n in 1..=6i64 {
            let v = gamma_half(2 * (n + 1)).unwrap() * gamma_half(1).unwrap()
                / (gamma_half(n + 2).unwrap() * gamma_half(n + 1).unwrap());
            assert_eq!(v.into_rational().unwrap(), pow2(n));
        }
    }

    #[test]
    fn sqrt_pi_residue_is_reported() {
        let v = gamma_half(1).unwrap();
        assert!(matches!(
            v.into_rational(),
            Err(Error::SqrtPiResidue(1))
        ));
    }
}
