//! Exact iterated constant-term extraction for factored Laurent expressions,
//! builders for every identity's left-hand side, and identity verification.
//!
//! Expressions live in the region `|x_1| << |x_2| << ... << 1` with `x_1`
//! innermost: each constant term is taken by Laurent-expanding at the
//! innermost variable over the rational-function field in the remaining
//! ones.  In that region `(x_j - x_i)^{-m}` with `i < j` expands as
//! `x_j^{-m} sum_k C(m+k-1, k) (x_i/x_j)^k` and `(1 - x_i x_j^{-1})^{-1}` as
//! `sum_k x_i^k x_j^{-k}`; any other region would change the answers.

mod mpoly;
mod series_check;

pub use series_check::{eval_by_truncated_series, eval_truncated_stabilized};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::exact::{catalan, cryc_volume_formula, cryd_volume_formula, morris_c_rhs, morris_rhs,
    MorrisParams, Rational};
use crate::graphs::{Sign, SignedGraph};
use crate::{Error, Result};
use mpoly::MPoly;

/// One factor of a Laurent expression.  Variables are indices into the
/// owning expression's variable list, innermost first.
#[derive(Clone, Debug, PartialEq)]
pub enum LaurentFactor {
    /// `x^alpha` with integer exponents of either sign.
    Monomial(Vec<i64>),
    /// `(1 - u)^{-power}` with `u` a short sum of positive multiples of
    /// Laurent monomials, e.g. `x_i`, `2 x_i`, `x_i + x_j`, `x_i x_j^{-1}`.
    BinomialSeries {
        base: Vec<(BigInt, Vec<i64>)>,
        power: u32,
    },
    /// `(x_hi - x_lo)^{-power}`, with `x_lo` the inner variable.
    DifferenceInverse { lo: usize, hi: usize, power: u32 },
}

impl LaurentFactor {
    /// Innermost variable referenced, if any.
    fn min_var(&self) -> Option<usize> {
        match self {
            LaurentFactor::Monomial(alpha) => alpha.iter().position(|&a| a != 0),
            LaurentFactor::BinomialSeries { base, .. } => base
                .iter()
                .filter_map(|(_, alpha)| alpha.iter().position(|&a| a != 0))
                .min(),
            LaurentFactor::DifferenceInverse { lo, .. } => Some(*lo),
        }
    }

    /// Same factor with all variable indices shifted down by one; must not
    /// reference variable 0.
    fn shift_down(&self) -> LaurentFactor {
        match self {
            LaurentFactor::Monomial(alpha) => {
                debug_assert_eq!(alpha[0], 0);
                LaurentFactor::Monomial(alpha[1..].to_vec())
            }
            LaurentFactor::BinomialSeries { base, power } => LaurentFactor::BinomialSeries {
                base: base
                    .iter()
                    .map(|(c, alpha)| {
                        debug_assert_eq!(alpha[0], 0);
                        (c.clone(), alpha[1..].to_vec())
                    })
                    .collect(),
                power: *power,
            },
            LaurentFactor::DifferenceInverse { lo, hi, power } => {
                debug_assert!(*lo > 0);
                LaurentFactor::DifferenceInverse {
                    lo: lo - 1,
                    hi: hi - 1,
                    power: *power,
                }
            }
        }
    }

    fn validate(&self, nvars: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            LaurentFactor::Monomial(alpha) => {
                if alpha.len() != nvars {
                    return bad("monomial exponent vector has the wrong length".into());
                }
            }
            LaurentFactor::BinomialSeries { base, power } => {
                if *power == 0 {
                    return bad("binomial series power must be at least 1".into());
                }
                if base.is_empty() || base.len() > 2 {
                    return bad("binomial series base must have one or two terms".into());
                }
                for (c, alpha) in base {
                    if alpha.len() != nvars {
                        return bad("binomial base exponents have the wrong length".into());
                    }
                    if !c.is_positive() {
                        return bad("binomial base coefficients must be positive".into());
                    }
                    if alpha.iter().all(|&a| a == 0) {
                        return bad("binomial base terms must involve a variable".into());
                    }
                }
            }
            LaurentFactor::DifferenceInverse { lo, hi, power } => {
                if *power == 0 {
                    return bad("difference power must be at least 1".into());
                }
                if lo >= hi || *hi >= nvars {
                    return bad(format!(
                        "difference factor needs inner < outer < {nvars}, got ({lo}, {hi})"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Carried state of a partially evaluated expression: the exact rational
/// function `x^offset * num / den` accumulated by earlier constant terms.
#[derive(Clone, Debug)]
struct RatFun {
    offset: Vec<i64>,
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    fn one(nvars: usize) -> Self {
        RatFun {
            offset: vec![0; nvars],
            num: MPoly::one(nvars),
            den: MPoly::one(nvars),
        }
    }

    fn is_one(&self) -> bool {
        self.offset.iter().all(|&o| o == 0)
            && self.num.constant_value().map_or(false, |c| c.is_one())
            && self.den.constant_value().map_or(false, |c| c.is_one())
    }
}

/// A factored Laurent expression under iterated constant terms, variables
/// listed innermost first.
#[derive(Clone, Debug)]
pub struct CTExpression {
    vars: Vec<String>,
    factors: Vec<LaurentFactor>,
    carried: RatFun,
}

impl CTExpression {
    pub fn new(vars: Vec<String>, factors: Vec<LaurentFactor>) -> Result<Self> {
        for f in &factors {
            f.validate(vars.len())?;
        }
        let carried = RatFun::one(vars.len());
        Ok(CTExpression {
            vars,
            factors,
            carried,
        })
    }

    /// Variable names, innermost first.
    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn factors(&self) -> &[LaurentFactor] {
        &self.factors
    }

    /// True when no constant-term step has been taken yet.
    pub fn is_pristine(&self) -> bool {
        self.carried.is_one()
    }

    /// The value of a fully extracted expression (no variables left).
    pub fn value(&self) -> Result<Rational> {
        if !self.vars.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{} variables still to extract",
                self.vars.len()
            )));
        }
        let num = self
            .carried
            .num
            .constant_value()
            .expect("no variables remain");
        let den = self
            .carried
            .den
            .constant_value()
            .expect("no variables remain");
        Ok(num / den)
    }

    /// Canonical form for syntactic comparison: a difference
    /// `(x_j - x_i)^{-m}` is rewritten as `x_j^{-m} (1 - x_i x_j^{-1})^{-m}`,
    /// like factors are merged with powers added, and the list is sorted.
    pub fn normalized(&self) -> CTExpression {
        let nvars = self.vars.len();
        let mut mono = vec![0i64; nvars];
        let mut series: Vec<(Vec<(BigInt, Vec<i64>)>, u32)> = Vec::new();
        let mut add_series = |base: Vec<(BigInt, Vec<i64>)>, power: u32| {
            let mut key = base;
            key.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
            if let Some(entry) = series.iter_mut().find(|(b, _)| *b == key) {
                entry.1 += power;
            } else {
                series.push((key, power));
            }
        };
        for f in &self.factors {
            match f {
                LaurentFactor::Monomial(alpha) => {
                    for (m, a) in mono.iter_mut().zip(alpha) {
                        *m += a;
                    }
                }
                LaurentFactor::BinomialSeries { base, power } => {
                    add_series(base.clone(), *power);
                }
                LaurentFactor::DifferenceInverse { lo, hi, power } => {
                    mono[*hi] -= *power as i64;
                    let mut ratio = vec![0i64; nvars];
                    ratio[*lo] = 1;
                    ratio[*hi] = -1;
                    add_series(vec![(BigInt::one(), ratio)], *power);
                }
            }
        }
        let mut factors = Vec::new();
        if mono.iter().any(|&m| m != 0) {
            factors.push(LaurentFactor::Monomial(mono));
        }
        series.sort_by(|a, b| a.0.cmp(&b.0));
        for (base, power) in series {
            factors.push(LaurentFactor::BinomialSeries { base, power });
        }
        CTExpression {
            vars: self.vars.clone(),
            factors,
            carried: self.carried.clone(),
        }
    }

    /// The same expression over renamed variables (innermost first).
    pub fn with_variables(&self, vars: Vec<String>) -> Result<CTExpression> {
        if vars.len() != self.vars.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} variable names, got {}",
                self.vars.len(),
                vars.len()
            )));
        }
        Ok(CTExpression {
            vars,
            factors: self.factors.clone(),
            carried: self.carried.clone(),
        })
    }
}

impl PartialEq for CTExpression {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.factors == other.factors
            && self.is_pristine()
            && other.is_pristine()
    }
}

fn fold_factor(f: &LaurentFactor, nvars: usize, offset: &mut [i64], den: &mut MPoly) {
    match f {
        LaurentFactor::Monomial(alpha) => {
            for (o, a) in offset.iter_mut().zip(alpha) {
                *o += a;
            }
        }
        LaurentFactor::BinomialSeries { base, power } => {
            // Clear negative exponents: (1 - u)^{-m} = x^{m d} (x^d (1-u))^{-m}
            // with d the componentwise depth of u's denominators.
            let mut depth = vec![0i64; nvars];
            for (_, alpha) in base {
                for (d, a) in depth.iter_mut().zip(alpha) {
                    *d = (*d).max(-a);
                }
            }
            let dexp: Vec<u32> = depth.iter().map(|&d| d as u32).collect();
            let mut poly = MPoly::monomial(nvars, dexp.clone(), Rational::one());
            for (c, alpha) in base {
                let exps: Vec<u32> = depth
                    .iter()
                    .zip(alpha)
                    .map(|(d, a)| (d + a) as u32)
                    .collect();
                poly.add_term(exps, -Rational::from_integer(c.clone()));
            }
            *den = den.mul(&poly.pow(*power));
            for (o, d) in offset.iter_mut().zip(&depth) {
                *o += *power as i64 * d;
            }
        }
        LaurentFactor::DifferenceInverse { lo, hi, power } => {
            let mut poly = MPoly::zero(nvars);
            let mut e = vec![0u32; nvars];
            e[*hi] = 1;
            poly.add_term(e.clone(), Rational::one());
            e[*hi] = 0;
            e[*lo] = 1;
            poly.add_term(e, -Rational::one());
            *den = den.mul(&poly.pow(*power));
        }
    }
}

/// Taylor coefficient `c_k` of `num/den` at variable 0, with `den` having a
/// nonzero constant term there.  Returns `(e_k, d0^{k+1})` where
/// `c_k = e_k / d0^{k+1}` and `d0 = den(x_0 = 0)`.
fn taylor_coefficient(num: &MPoly, den: &MPoly, k: u32) -> (MPoly, MPoly) {
    let nvars = num.nvars;
    let d0 = den.coeff_of(0, 0);
    debug_assert!(!d0.is_zero());
    let mut d0_pows = Vec::with_capacity(k as usize + 2);
    d0_pows.push(MPoly::one(nvars));
    for _ in 0..=k {
        d0_pows.push(d0_pows.last().unwrap().mul(&d0));
    }
    let mut e: Vec<MPoly> = Vec::with_capacity(k as usize + 1);
    for kk in 0..=k {
        let mut t = num.coeff_of(0, kk).mul(&d0_pows[kk as usize]);
        for i in 1..=kk {
            let di = den.coeff_of(0, i);
            if di.is_zero() {
                continue;
            }
            t = t.sub(&di.mul(&e[(kk - i) as usize]).mul(&d0_pows[(i - 1) as usize]));
        }
        e.push(t);
    }
    (e.pop().unwrap(), d0_pows[k as usize + 1].clone())
}

/// Extracts the constant term with respect to the innermost variable,
/// leaving an expression over one fewer variable whose untouched factors
/// stay factored and whose extracted part is carried as an explicit
/// rational function.
pub fn ct_innermost(expr: &CTExpression) -> Result<CTExpression> {
    if expr.vars.is_empty() {
        return Err(Error::InvalidParameter(
            "no variable left to extract".into(),
        ));
    }
    let nvars = expr.vars.len();
    let mut offset = expr.carried.offset.clone();
    let num = expr.carried.num.clone();
    let mut den = expr.carried.den.clone();
    let mut rest = Vec::new();
    for f in &expr.factors {
        if f.min_var() == Some(0) {
            fold_factor(f, nvars, &mut offset, &mut den);
        } else {
            rest.push(f.clone());
        }
    }

    let (new_num, new_den) = if num.is_zero() {
        (MPoly::zero(nvars), MPoly::one(nvars))
    } else {
        let mu_n = num.min_exp(0);
        let mu_d = den.min_exp(0);
        let k = mu_d as i64 - mu_n as i64 - offset[0];
        if k < 0 {
            (MPoly::zero(nvars), MPoly::one(nvars))
        } else {
            let np = num.shift_down(0, mu_n);
            let dp = den.shift_down(0, mu_d);
            taylor_coefficient(&np, &dp, k as u32)
        }
    };

    let mut offset: Vec<i64> = offset[1..].to_vec();
    let mut num = new_num.drop_var(0);
    let mut den = new_den.drop_var(0);

    // Monomial content moves into the offset; the denominator is kept
    // primitive to bound coefficient growth.
    let cn = num.monomial_content();
    num = num.shift_down_all(&cn);
    for (o, c) in offset.iter_mut().zip(&cn) {
        *o += *c as i64;
    }
    let cd = den.monomial_content();
    den = den.shift_down_all(&cd);
    for (o, c) in offset.iter_mut().zip(&cd) {
        *o -= *c as i64;
    }
    let content = den.rational_content();
    if !content.is_one() {
        let inv = Rational::one() / content;
        den = den.scale(&inv);
        num = num.scale(&inv);
    }

    Ok(CTExpression {
        vars: expr.vars[1..].to_vec(),
        factors: rest.iter().map(LaurentFactor::shift_down).collect(),
        carried: RatFun { offset, num, den },
    })
}

/// Folds [`ct_innermost`] over every variable and returns the exact value.
pub fn iterated_ct(expr: &CTExpression) -> Result<Rational> {
    let mut cur = expr.clone();
    while !cur.vars.is_empty() {
        cur = ct_innermost(&cur)?;
    }
    cur.value()
}

fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn unit_vec(nvars: usize, i: usize, value: i64) -> Vec<i64> {
    let mut v = vec![0i64; nvars];
    v[i] = value;
    v
}

/// `prod_i (1-x_i)^{-a} x_i^{-b} prod_{i<j} (x_j-x_i)^{-2c}` over `n`
/// variables: the Morris kernel.
pub fn build_morris_lhs(p: &MorrisParams) -> Result<CTExpression> {
    let n = p.n;
    let mut factors = Vec::new();
    for i in 0..n {
        if p.b != 0 {
            factors.push(LaurentFactor::Monomial(unit_vec(n, i, -p.b)));
        }
        if p.a != 0 {
            factors.push(LaurentFactor::BinomialSeries {
                base: vec![(BigInt::one(), unit_vec(n, i, 1))],
                power: p.a as u32,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            factors.push(LaurentFactor::DifferenceInverse {
                lo: i,
                hi: j,
                power: p.two_c as u32,
            });
        }
    }
    CTExpression::new(var_names(n), factors)
}

/// `prod_j x_j^{-a+1} (1-x_j)^{-a} (1-2x_j)^{-b}
///  prod_{j<k} (x_k-x_j)^{-2c} (1-x_j-x_k)^{-2c}` over `n` variables: the
/// type `C` Morris kernel.
pub fn build_morris_c_lhs(p: &MorrisParams) -> Result<CTExpression> {
    let n = p.n;
    let mut factors = Vec::new();
    for i in 0..n {
        if p.a != 1 {
            factors.push(LaurentFactor::Monomial(unit_vec(n, i, 1 - p.a)));
        }
        if p.a != 0 {
            factors.push(LaurentFactor::BinomialSeries {
                base: vec![(BigInt::one(), unit_vec(n, i, 1))],
                power: p.a as u32,
            });
        }
        if p.b != 0 {
            factors.push(LaurentFactor::BinomialSeries {
                base: vec![(BigInt::from(2), unit_vec(n, i, 1))],
                power: p.b as u32,
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            factors.push(LaurentFactor::DifferenceInverse {
                lo: i,
                hi: j,
                power: p.two_c as u32,
            });
            factors.push(LaurentFactor::BinomialSeries {
                base: vec![
                    (BigInt::one(), unit_vec(n, i, 1)),
                    (BigInt::one(), unit_vec(n, j, 1)),
                ],
                power: p.two_c as u32,
            });
        }
    }
    CTExpression::new(var_names(n), factors)
}

/// Catalan-product kernel over `n` variables: the Morris kernel at
/// `a = 2, b = 0, c = 1/2`, whose constant term is `Cat(1) ... Cat(n)`.
pub fn build_cry_lhs(n: usize) -> Result<CTExpression> {
    build_morris_lhs(&MorrisParams::new(n, 2, 0, 1)?)
}

/// Kernel for `vol(CRYD_{n+1})`, over `n - 1` variables.
pub fn build_cryd_lhs(n: usize) -> Result<CTExpression> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "CRYD kernel needs n >= 1, got {n}"
        )));
    }
    build_morris_c_lhs(&MorrisParams::new(n - 1, 2, 0, 1)?)
}

/// Kernel for `vol(CRYC_{n+1})`, over `n - 1` variables.
pub fn build_cryc_lhs(n: usize) -> Result<CTExpression> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "CRYC kernel needs n >= 1, got {n}"
        )));
    }
    build_morris_c_lhs(&MorrisParams::new(n - 1, 2, 1, 1)?)
}

/// Generating-series coefficient expression for the dynamic count of `g` at
/// netflow `a`: the factor per edge times the target monomial `x^{-a}`, so
/// its iterated constant term is the coefficient of `x^a`.
pub fn build_kdyn_coeff_expr(g: &SignedGraph, a: &[i64]) -> Result<CTExpression> {
    crate::graphs::check_netflow(g, a)?;
    let n = g.vertex_count();
    let mut factors = Vec::new();
    let target: Vec<i64> = a.iter().map(|&x| -x).collect();
    if target.iter().any(|&t| t != 0) {
        factors.push(LaurentFactor::Monomial(target));
    }
    for e in g.edges() {
        let (i, j) = (e.lo - 1, e.hi - 1);
        let factor = if e.is_loop() {
            LaurentFactor::BinomialSeries {
                base: vec![(BigInt::from(2), unit_vec(n, i, 1))],
                power: 1,
            }
        } else if e.sign == Sign::Minus {
            let mut ratio = vec![0i64; n];
            ratio[i] = 1;
            ratio[j] = -1;
            LaurentFactor::BinomialSeries {
                base: vec![(BigInt::one(), ratio)],
                power: 1,
            }
        } else {
            LaurentFactor::BinomialSeries {
                base: vec![
                    (BigInt::one(), unit_vec(n, i, 1)),
                    (BigInt::one(), unit_vec(n, j, 1)),
                ],
                power: 1,
            }
        };
        factors.push(factor);
    }
    CTExpression::new(var_names(n), factors)
}

/// Sets the innermost variable to zero and drops it: base terms carrying it
/// vanish, a difference `(x_j - x_inner)^{-m}` collapses to `x_j^{-m}`, and
/// factors reduced to 1 disappear.  Fails on factors where the substitution
/// is not a plain evaluation (poles or vanishing monomials).
pub fn substitute_innermost_zero(expr: &CTExpression) -> Result<CTExpression> {
    if expr.vars.is_empty() {
        return Err(Error::InvalidParameter("no variable to set to zero".into()));
    }
    if !expr.is_pristine() {
        return Err(Error::InvalidParameter(
            "substitution applies to unevaluated expressions only".into(),
        ));
    }
    let nvars = expr.vars.len();
    let mut factors = Vec::new();
    for f in &expr.factors {
        match f {
            LaurentFactor::Monomial(alpha) => {
                if alpha[0] != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "cannot set {} = 0 in a bare monomial with exponent {}",
                        expr.vars[0], alpha[0]
                    )));
                }
                factors.push(f.clone());
            }
            LaurentFactor::BinomialSeries { base, power } => {
                let mut kept = Vec::new();
                for (c, alpha) in base {
                    if alpha[0] > 0 {
                        continue; // the term vanishes at x = 0
                    }
                    if alpha[0] < 0 {
                        return Err(Error::InvalidParameter(format!(
                            "pole in base term at {} = 0",
                            expr.vars[0]
                        )));
                    }
                    kept.push((c.clone(), alpha.clone()));
                }
                if !kept.is_empty() {
                    factors.push(LaurentFactor::BinomialSeries {
                        base: kept,
                        power: *power,
                    });
                }
            }
            LaurentFactor::DifferenceInverse { lo, hi, power } => {
                if *lo == 0 {
                    factors.push(LaurentFactor::Monomial(unit_vec(
                        nvars,
                        *hi,
                        -(*power as i64),
                    )));
                } else {
                    factors.push(f.clone());
                }
            }
        }
    }
    let factors = factors.iter().map(LaurentFactor::shift_down).collect();
    CTExpression::new(expr.vars[1..].to_vec(), factors)
}

/// An identity instance the crate can verify end to end.
#[derive(Clone, Debug, PartialEq)]
pub enum Identity {
    /// Catalan-product identity over `n` variables.
    Cry { n: usize },
    /// `vol(CRYD_{n+1})` as a constant term.
    Cryd { n: usize },
    /// `vol(CRYC_{n+1})` as a constant term.
    Cryc { n: usize },
    /// The Morris identity.
    Morris(MorrisParams),
    /// The type `C` Morris identity.
    MorrisC(MorrisParams),
}

impl Identity {
    pub fn label(&self) -> &'static str {
        match self {
            Identity::Cry { .. } => "cry",
            Identity::Cryd { .. } => "cryd",
            Identity::Cryc { .. } => "cryc",
            Identity::Morris(_) => "morris",
            Identity::MorrisC(_) => "morris-c",
        }
    }

    pub fn params(&self) -> String {
        match self {
            Identity::Cry { n } | Identity::Cryd { n } | Identity::Cryc { n } => {
                format!("n={n}")
            }
            Identity::Morris(p) | Identity::MorrisC(p) => p.to_string(),
        }
    }
}

/// Outcome of one identity check: both sides computed independently.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: Identity,
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}]: lhs = {}, rhs = {} -> {}",
            self.identity.label(),
            self.identity.params(),
            self.lhs,
            self.rhs,
            if self.equal { "pass" } else { "fail" }
        )
    }
}

/// Computes one identity's left side by iterated constant term and its right
/// side in closed form; inequality is a reported result, not an error.
pub fn verify_identity(id: &Identity) -> Result<IdentityReport> {
    let (lhs, rhs) = match id {
        Identity::Cry { n } => {
            let lhs = iterated_ct(&build_cry_lhs(*n)?)?;
            let mut rhs = Rational::one();
            for k in 1..=*n {
                rhs *= Rational::from_integer(catalan(k as u64));
            }
            (lhs, rhs)
        }
        Identity::Cryd { n } => {
            let lhs = iterated_ct(&build_cryd_lhs(*n)?)?;
            (lhs, Rational::from_integer(cryd_volume_formula(*n as u64)?))
        }
        Identity::Cryc { n } => {
            let lhs = iterated_ct(&build_cryc_lhs(*n)?)?;
            (lhs, Rational::from_integer(cryc_volume_formula(*n as u64)?))
        }
        Identity::Morris(p) => {
            let lhs = iterated_ct(&build_morris_lhs(p)?)?;
            (lhs, morris_rhs(p)?)
        }
        Identity::MorrisC(p) => {
            let lhs = iterated_ct(&build_morris_c_lhs(p)?)?;
            (lhs, morris_c_rhs(p)?)
        }
    };
    let equal = lhs == rhs;
    Ok(IdentityReport {
        identity: id.clone(),
        lhs,
        rhs,
        equal,
    })
}

// ---------------------------------------------------------------------------
// Text format: `CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1`
// ---------------------------------------------------------------------------

impl fmt::Display for CTExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CT[")?;
        for (i, v) in self.vars.iter().rev().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")?;
        let mut parts = Vec::new();
        for factor in &self.factors {
            match factor {
                LaurentFactor::Monomial(alpha) => {
                    for (i, &a) in alpha.iter().enumerate() {
                        if a != 0 {
                            parts.push(render_power(&self.vars[i], a));
                        }
                    }
                }
                LaurentFactor::BinomialSeries { base, power } => {
                    let mut s = String::from("(1");
                    for (c, alpha) in base {
                        s.push_str(" - ");
                        s.push_str(&render_term(c, alpha, &self.vars));
                    }
                    s.push_str(&format!(")^-{power}"));
                    parts.push(s);
                }
                LaurentFactor::DifferenceInverse { lo, hi, power } => {
                    parts.push(format!(
                        "({} - {})^-{power}",
                        self.vars[*hi], self.vars[*lo]
                    ));
                }
            }
        }
        if parts.is_empty() {
            write!(f, " 1")
        } else {
            write!(f, " {}", parts.join(" * "))
        }
    }
}

fn render_power(name: &str, exp: i64) -> String {
    if exp == 1 {
        name.to_string()
    } else {
        format!("{name}^{exp}")
    }
}

fn render_term(c: &BigInt, alpha: &[i64], vars: &[String]) -> String {
    let mut parts = Vec::new();
    if !c.is_one() {
        parts.push(c.to_string());
    }
    for (i, &a) in alpha.iter().enumerate() {
        if a != 0 {
            parts.push(render_power(&vars[i], a));
        }
    }
    if parts.is_empty() {
        c.to_string()
    } else {
        parts.join("*")
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pending: Option<Token>,
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Int(i64),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Star,
    Minus,
    Caret,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer {
            chars: s.chars().peekable(),
            pending: None,
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        if let Some(t) = self.pending.take() {
            return Ok(Some(t));
        }
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '[' => {
                self.chars.next();
                Token::LBracket
            }
            ']' => {
                self.chars.next();
                Token::RBracket
            }
            '(' => {
                self.chars.next();
                Token::LParen
            }
            ')' => {
                self.chars.next();
                Token::RParen
            }
            ',' => {
                self.chars.next();
                Token::Comma
            }
            '*' => {
                self.chars.next();
                Token::Star
            }
            '-' => {
                self.chars.next();
                Token::Minus
            }
            '^' => {
                self.chars.next();
                Token::Caret
            }
            c if c.is_ascii_digit() => {
                let mut n = 0i64;
                while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                    n = n * 10 + (self.chars.next().unwrap() as i64 - '0' as i64);
                }
                Token::Int(n)
            }
            c if c.is_alphabetic() => {
                let mut s = String::new();
                while matches!(self.chars.peek(), Some(d) if d.is_alphanumeric() || *d == '_') {
                    s.push(self.chars.next().unwrap());
                }
                Token::Ident(s)
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?}"))),
        };
        Ok(Some(tok))
    }

    fn peek_token(&mut self) -> Result<Option<Token>> {
        if self.pending.is_none() {
            self.pending = self.next_token()?;
        }
        Ok(self.pending.clone())
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        match self.next_token()? {
            Some(t) if t == want => Ok(()),
            other => Err(Error::Parse(format!("expected {want:?}, got {other:?}"))),
        }
    }
}

/// Parses the textual form produced by `Display`.
pub fn parse_ct_expression(s: &str) -> Result<CTExpression> {
    let mut lex = Lexer::new(s);
    match lex.next_token()? {
        Some(Token::Ident(id)) if id == "CT" => {}
        other => return Err(Error::Parse(format!("expected CT, got {other:?}"))),
    }
    lex.expect(Token::LBracket)?;
    let mut vars_outer_first = Vec::new();
    loop {
        match lex.next_token()? {
            Some(Token::RBracket) => break,
            Some(Token::Ident(v)) => {
                vars_outer_first.push(v);
                match lex.peek_token()? {
                    Some(Token::Comma) => {
                        lex.next_token()?;
                    }
                    Some(Token::RBracket) => {}
                    other => {
                        return Err(Error::Parse(format!(
                            "expected , or ] in variable list, got {other:?}"
                        )))
                    }
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "expected variable or ], got {other:?}"
                )))
            }
        }
    }
    let vars: Vec<String> = vars_outer_first.into_iter().rev().collect();
    let index_of = |name: &str, vars: &[String]| -> Result<usize> {
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))
    };

    let nvars = vars.len();
    let mut factors = Vec::new();
    loop {
        match lex.peek_token()? {
            None => break,
            Some(Token::Int(1)) => {
                lex.next_token()?;
            }
            Some(Token::Ident(_)) => {
                let Some(Token::Ident(name)) = lex.next_token()? else {
                    unreachable!()
                };
                let exp = parse_optional_power(&mut lex)?;
                let i = index_of(&name, &vars)?;
                factors.push(LaurentFactor::Monomial(unit_vec(nvars, i, exp)));
            }
            Some(Token::LParen) => {
                lex.next_token()?;
                factors.push(parse_paren_factor(&mut lex, &vars)?);
            }
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
        match lex.peek_token()? {
            Some(Token::Star) => {
                lex.next_token()?;
            }
            None => break,
            other => return Err(Error::Parse(format!("expected * or end, got {other:?}"))),
        }
    }
    CTExpression::new(vars, factors)
}

fn parse_optional_power(lex: &mut Lexer) -> Result<i64> {
    if lex.peek_token()? == Some(Token::Caret) {
        lex.next_token()?;
        let neg = if lex.peek_token()? == Some(Token::Minus) {
            lex.next_token()?;
            true
        } else {
            false
        };
        match lex.next_token()? {
            Some(Token::Int(n)) => Ok(if neg { -n } else { n }),
            other => Err(Error::Parse(format!("expected exponent, got {other:?}"))),
        }
    } else {
        Ok(1)
    }
}

fn parse_paren_factor(lex: &mut Lexer, vars: &[String]) -> Result<LaurentFactor> {
    let nvars = vars.len();
    let index_of = |name: &str| -> Result<usize> {
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))
    };
    enum Inner {
        Series(Vec<(BigInt, Vec<i64>)>),
        Diff { hi: usize, lo: usize },
    }
    let inner = match lex.next_token()? {
        Some(Token::Int(1)) => {
            // 1 - term (- term)?
            let mut base = Vec::new();
            while lex.peek_token()? == Some(Token::Minus) {
                lex.next_token()?;
                let coeff = if let Some(Token::Int(n)) = lex.peek_token()? {
                    lex.next_token()?;
                    lex.expect(Token::Star)?;
                    BigInt::from(n)
                } else {
                    BigInt::one()
                };
                let mut alpha = vec![0i64; nvars];
                loop {
                    match lex.next_token()? {
                        Some(Token::Ident(name)) => {
                            let exp = parse_optional_power(lex)?;
                            alpha[index_of(&name)?] += exp;
                        }
                        other => {
                            return Err(Error::Parse(format!(
                                "expected variable in series term, got {other:?}"
                            )))
                        }
                    }
                    if lex.peek_token()? == Some(Token::Star) {
                        lex.next_token()?;
                    } else {
                        break;
                    }
                }
                base.push((coeff, alpha));
            }
            Inner::Series(base)
        }
        Some(Token::Ident(first)) => {
            lex.expect(Token::Minus)?;
            match lex.next_token()? {
                Some(Token::Ident(second)) => Inner::Diff {
                    hi: index_of(&first)?,
                    lo: index_of(&second)?,
                },
                other => {
                    return Err(Error::Parse(format!(
                        "expected variable after -, got {other:?}"
                    )))
                }
            }
        }
        other => {
            return Err(Error::Parse(format!(
                "expected 1 or variable after (, got {other:?}"
            )))
        }
    };
    lex.expect(Token::RParen)?;
    lex.expect(Token::Caret)?;
    lex.expect(Token::Minus)?;
    let power = match lex.next_token()? {
        Some(Token::Int(n)) if n >= 1 => n as u32,
        other => {
            return Err(Error::Parse(format!(
                "expected positive power after ^-, got {other:?}"
            )))
        }
    };
    match inner {
        Inner::Series(base) => Ok(LaurentFactor::BinomialSeries { base, power }),
        Inner::Diff { hi, lo } => {
            if lo >= hi {
                return Err(Error::Parse(
                    "difference factor must subtract the inner variable from the outer".into(),
                ));
            }
            Ok(LaurentFactor::DifferenceInverse { lo, hi, power })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynflow::kdyn;
    use crate::exact::rat;
    use crate::graphs::{complete_type_c, demo_dynamic_graph, LoopRange};

    fn ct1(factors: Vec<LaurentFactor>) -> Rational {
        let expr = CTExpression::new(vec!["x1".into()], factors).unwrap();
        iterated_ct(&expr).unwrap()
    }

    #[test]
    fn one_variable_constant_terms() {
        // CT x^-1 (1-x)^-2 = 2
        let v = ct1(vec![
            LaurentFactor::Monomial(vec![-1]),
            LaurentFactor::BinomialSeries {
                base: vec![(BigInt::one(), vec![1])],
                power: 2,
            },
        ]);
        assert_eq!(v, rat(2));
        // CT x^-1 (1-x)^-2 (1-2x)^-1 = 4
        let v = ct1(vec![
            LaurentFactor::Monomial(vec![-1]),
            LaurentFactor::BinomialSeries {
                base: vec![(BigInt::one(), vec![1])],
                power: 2,
            },
            LaurentFactor::BinomialSeries {
                base: vec![(BigInt::from(2), vec![1])],
                power: 1,
            },
        ]);
        assert_eq!(v, rat(4));
        // CT (1-x)^-a = 1
        let v = ct1(vec![LaurentFactor::BinomialSeries {
            base: vec![(BigInt::one(), vec![1])],
            power: 7,
        }]);
        assert_eq!(v, rat(1));
    }

    #[test]
    fn catalan_product_small() {
        assert_eq!(iterated_ct(&build_cry_lhs(1).unwrap()).unwrap(), rat(1));
        assert_eq!(iterated_ct(&build_cry_lhs(2).unwrap()).unwrap(), rat(2));
        assert_eq!(iterated_ct(&build_cry_lhs(3).unwrap()).unwrap(), rat(10));
    }

    #[test]
    fn cryd_cryc_kernels() {
        assert_eq!(iterated_ct(&build_cryd_lhs(1).unwrap()).unwrap(), rat(1));
        assert_eq!(iterated_ct(&build_cryd_lhs(2).unwrap()).unwrap(), rat(2));
        assert_eq!(iterated_ct(&build_cryc_lhs(2).unwrap()).unwrap(), rat(4));
        // The loop kernel is 2^{n-1} times the loopless one.
        for n in 1..=3usize {
            let d = iterated_ct(&build_cryd_lhs(n).unwrap()).unwrap();
            let c = iterated_ct(&build_cryc_lhs(n).unwrap()).unwrap();
            assert_eq!(c, d * rat(1 << (n - 1)));
        }
    }

    #[test]
    fn builder_factor_lists() {
        let e = build_cryd_lhs(2).unwrap();
        assert_eq!(e.factors().len(), 2);
        assert!(matches!(e.factors()[0], LaurentFactor::Monomial(_)));

        let e = build_cryc_lhs(3).unwrap();
        // Two variables, three univariate factors each, plus two pair factors.
        assert_eq!(e.variables().len(), 2);
        assert_eq!(e.factors().len(), 8);

        let p = MorrisParams::new(2, 2, 0, 1).unwrap();
        let e = build_morris_lhs(&p).unwrap();
        assert_eq!(e.factors().len(), 3);
    }

    #[test]
    fn kdyn_expression_matches_enumeration() {
        let g = complete_type_c(3, LoopRange::AllVertices).unwrap();
        let expr = build_kdyn_coeff_expr(&g, &[0, 0, 1]).unwrap();
        assert_eq!(iterated_ct(&expr).unwrap(), rat(4));

        let g = demo_dynamic_graph();
        let expr = build_kdyn_coeff_expr(&g, &[2, 1, 1]).unwrap();
        assert_eq!(iterated_ct(&expr).unwrap(), rat(17));
        assert_eq!(kdyn(&g, &[2, 1, 1]), 17u32.into());
    }

    #[test]
    fn zero_variable_expression_is_one() {
        let e = CTExpression::new(vec![], vec![]).unwrap();
        assert_eq!(iterated_ct(&e).unwrap(), rat(1));
        assert_eq!(e.to_string(), "CT[] 1");
    }

    #[test]
    fn reduction_pipeline_matches_direct_kernel() {
        // Setting the two innermost variables of the coefficient expression
        // to zero and relabeling yields the direct volume kernel.
        for n in [2usize, 3] {
            let m = n + 1;
            let g = complete_type_c(m, LoopRange::AllVertices).unwrap();
            let a = crate::graphs::staircase_netflow(m);
            let expr = build_kdyn_coeff_expr(&g, &a).unwrap();
            let step1 = substitute_innermost_zero(&expr).unwrap();
            let step2 = substitute_innermost_zero(&step1).unwrap();
            let direct = build_cryc_lhs(n).unwrap();
            let relabeled = step2.with_variables(direct.variables().to_vec()).unwrap();
            assert_eq!(relabeled.normalized(), direct.normalized());
            assert_eq!(
                iterated_ct(&step2).unwrap(),
                iterated_ct(&direct).unwrap()
            );
        }
    }

    #[test]
    fn identities_verify() {
        for (id, expect) in [
            (Identity::Cry { n: 3 }, rat(10)),
            (Identity::Cryc { n: 2 }, rat(4)),
            (Identity::Cryd { n: 2 }, rat(2)),
        ] {
            let report = verify_identity(&id).unwrap();
            assert!(report.equal, "{report}");
            assert_eq!(report.lhs, expect);
        }
        let p = MorrisParams::new(2, 1, 1, 1).unwrap();
        let report = verify_identity(&Identity::Morris(p)).unwrap();
        assert!(report.equal, "{report}");
    }

    #[test]
    fn display_round_trips() {
        let exprs = vec![
            build_cry_lhs(3).unwrap(),
            build_cryd_lhs(3).unwrap(),
            build_cryc_lhs(3).unwrap(),
            build_morris_c_lhs(&MorrisParams::new(2, 3, 2, 2).unwrap()).unwrap(),
            build_kdyn_coeff_expr(&demo_dynamic_graph(), &[2, 1, 1]).unwrap(),
        ];
        for e in exprs {
            let text = e.to_string();
            let back = parse_ct_expression(&text).unwrap();
            assert_eq!(back.normalized(), e.normalized(), "{text}");
            assert_eq!(iterated_ct(&back).unwrap(), iterated_ct(&e).unwrap());
        }
    }

    #[test]
    fn parse_example_string() {
        let e = parse_ct_expression("CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1").unwrap();
        assert_eq!(e.variables(), &["x1".to_string(), "x2".to_string()]);
        assert_eq!(e.factors().len(), 3);
        // Inner step: [x1^1] (1-x1)^-2 (x2-x1)^-1 = 2/x2 + 1/x2^2, whose
        // constant term in x2 vanishes.
        assert_eq!(iterated_ct(&e).unwrap(), rat(0));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_ct_expression("x1^-1").is_err());
        assert!(parse_ct_expression("CT[x1] (x1 - x1)^-1").is_err());
        assert!(parse_ct_expression("CT[x1] (1 - y)^-1").is_err());
        assert!(parse_ct_expression("CT[x1] (1 - x1)^2").is_err());
    }
}
