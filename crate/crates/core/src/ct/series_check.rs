//! Non-authoritative cross-check for the constant-term engine.
//!
//! The expansion region `|x_1| << ... << |x_m|` is encoded by the
//! substitution `x_i = y_i y_{i+1} ... y_m`, under which every factor of the
//! inventory becomes a genuine power series in the `y` variables times one
//! Laurent monomial.  The whole expression is multiplied out truncated to a
//! total `y`-degree and a single coefficient is read off; the caller raises
//! the order until the answer stops moving.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CTExpression, LaurentFactor};
use crate::exact::{binomial, Rational};
use crate::{Error, Result};

type Series = HashMap<Vec<i64>, Rational>;

/// y-exponents of the monomial `x^alpha`: entry `k` is `sum_{i <= k} alpha_i`.
fn y_image(alpha: &[i64]) -> Vec<i64> {
    let mut acc = 0i64;
    alpha
        .iter()
        .map(|&a| {
            acc += a;
            acc
        })
        .collect()
}

fn total_degree(exps: &[i64]) -> i64 {
    exps.iter().sum()
}

fn series_mul(a: &Series, b: &Series, order: i64) -> Series {
    let mut out: Series = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if total_degree(&e) > order {
                continue;
            }
            let v = ca.clone() * cb.clone();
            let entry = out.entry(e).or_insert_with(Rational::zero);
            *entry += v;
            if entry.is_zero() {
                // keep the map sparse
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `(1 - u)^{-power}` truncated, where `u` is the given sum of terms whose
/// y-images all have positive total degree.
fn binomial_series(
    terms: &[(BigInt, Vec<i64>)],
    power: u32,
    nvars: usize,
    order: i64,
) -> Result<Series> {
    for (_, e) in terms {
        if e.iter().any(|&x| x < 0) || total_degree(e) < 1 {
            return Err(Error::InvalidParameter(
                "series base term does not vanish in the expansion region".into(),
            ));
        }
    }
    let mut out: Series = HashMap::new();
    out.insert(vec![0; nvars], Rational::one());
    // sum_t C(power - 1 + t, t) u^t, expanding u^t by the binomial theorem
    // when u has two terms.
    let min_deg: i64 = terms.iter().map(|(_, e)| total_degree(e)).min().unwrap_or(1);
    let t_max = order / min_deg;
    for t in 1..=t_max {
        let outer = binomial((power as u64 - 1) + t as u64, t as u64);
        match terms {
            [(c, e)] => {
                let exps: Vec<i64> = e.iter().map(|x| x * t).collect();
                if total_degree(&exps) <= order {
                    let coef = Rational::from_integer(&outer * c.pow(t as u32));
                    *out.entry(exps).or_insert_with(Rational::zero) += coef;
                }
            }
            [(c1, e1), (c2, e2)] => {
                for s in 0..=t {
                    let exps: Vec<i64> = e1
                        .iter()
                        .zip(e2)
                        .map(|(a, b)| a * s + b * (t - s))
                        .collect();
                    if total_degree(&exps) > order {
                        continue;
                    }
                    let ways = binomial(t as u64, s as u64);
                    let coef = Rational::from_integer(
                        &outer * ways * c1.pow(s as u32) * c2.pow((t - s) as u32),
                    );
                    *out.entry(exps).or_insert_with(Rational::zero) += coef;
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "series base must have one or two terms".into(),
                ))
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// The y-monomial the evaluation must read off: minus the accumulated
/// Laurent-monomial offsets of the expression.
fn target_vector(expr: &CTExpression) -> Vec<i64> {
    let nvars = expr.variables().len();
    let mut offset = vec![0i64; nvars];
    for f in expr.factors() {
        match f {
            LaurentFactor::Monomial(alpha) => {
                for (o, y) in offset.iter_mut().zip(y_image(alpha)) {
                    *o += y;
                }
            }
            LaurentFactor::DifferenceInverse { hi, power, .. } => {
                let mut mono = vec![0i64; nvars];
                mono[*hi] = -(*power as i64);
                for (o, y) in offset.iter_mut().zip(y_image(&mono)) {
                    *o += y;
                }
            }
            LaurentFactor::BinomialSeries { .. } => {}
        }
    }
    offset.iter().map(|&o| -o).collect()
}

/// Evaluates the iterated constant term by truncated series expansion to the
/// given total order.  Exact once the order reaches the target degree; meant
/// to corroborate `iterated_ct`, not to replace it.
pub fn eval_by_truncated_series(expr: &CTExpression, order: usize) -> Result<Rational> {
    if !expr.is_pristine() {
        return Err(Error::InvalidParameter(
            "series evaluation applies to unevaluated expressions only".into(),
        ));
    }
    let nvars = expr.variables().len();
    if nvars == 0 {
        return Ok(Rational::one());
    }
    let order = order as i64;
    let mut offset = vec![0i64; nvars];
    let mut product: Series = HashMap::new();
    product.insert(vec![0; nvars], Rational::one());
    for f in expr.factors() {
        match f {
            LaurentFactor::Monomial(alpha) => {
                for (o, y) in offset.iter_mut().zip(y_image(alpha)) {
                    *o += y;
                }
            }
            LaurentFactor::BinomialSeries { base, power } => {
                let terms: Vec<(BigInt, Vec<i64>)> = base
                    .iter()
                    .map(|(c, alpha)| (c.clone(), y_image(alpha)))
                    .collect();
                let s = binomial_series(&terms, *power, nvars, order)?;
                product = series_mul(&product, &s, order);
            }
            LaurentFactor::DifferenceInverse { lo, hi, power } => {
                // x_hi^{-power} (1 - x_lo / x_hi)^{-power}
                let mut mono = vec![0i64; nvars];
                mono[*hi] = -(*power as i64);
                for (o, y) in offset.iter_mut().zip(y_image(&mono)) {
                    *o += y;
                }
                let mut ratio = vec![0i64; nvars];
                ratio[*lo] = 1;
                ratio[*hi] = -1;
                let s = binomial_series(
                    &[(BigInt::one(), y_image(&ratio))],
                    *power,
                    nvars,
                    order,
                )?;
                product = series_mul(&product, &s, order);
            }
        }
    }
    let target: Vec<i64> = offset.iter().map(|&o| -o).collect();
    if target.iter().any(|&t| t < 0) {
        return Ok(Rational::zero());
    }
    Ok(product
        .get(&target)
        .cloned()
        .unwrap_or_else(Rational::zero))
}

/// Raises the truncation order, starting where the target monomial first
/// fits, until two consecutive evaluations agree.
pub fn eval_truncated_stabilized(expr: &CTExpression) -> Result<Rational> {
    const EXTRA_ORDERS: usize = 200;
    let target = target_vector(expr);
    if target.iter().any(|&t| t < 0) {
        return Ok(Rational::zero());
    }
    let start = total_degree(&target).max(0) as usize;
    let mut prev = eval_by_truncated_series(expr, start)?;
    for order in (start + 1)..=(start + EXTRA_ORDERS) {
        let cur = eval_by_truncated_series(expr, order)?;
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::InvalidParameter(
        "series evaluation did not stabilize".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ct::{
        build_cry_lhs, build_cryc_lhs, build_cryd_lhs, build_kdyn_coeff_expr, build_morris_lhs,
        iterated_ct, parse_ct_expression,
    };
    use crate::exact::{rat, MorrisParams};
    use crate::graphs::demo_dynamic_graph;

    #[test]
    fn agrees_with_exact_engine() {
        let exprs = vec![
            build_cry_lhs(2).unwrap(),
            build_cry_lhs(3).unwrap(),
            build_cryd_lhs(3).unwrap(),
            build_cryc_lhs(2).unwrap(),
            build_cryc_lhs(3).unwrap(),
            build_morris_lhs(&MorrisParams::new(2, 2, 1, 1).unwrap()).unwrap(),
            build_kdyn_coeff_expr(&demo_dynamic_graph(), &[2, 1, 1]).unwrap(),
        ];
        for e in exprs {
            let exact = iterated_ct(&e).unwrap();
            let series = eval_truncated_stabilized(&e).unwrap();
            assert_eq!(exact, series, "{e}");
        }
    }

    #[test]
    fn vanishing_constant_term() {
        let e = parse_ct_expression("CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1").unwrap();
        assert_eq!(eval_truncated_stabilized(&e).unwrap(), rat(0));
    }
}
