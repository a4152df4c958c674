use num::{BigInt, One};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::numeric::{Exact, Scalar};

/// Binomial pmf `f_r(x, t)` and cdf `F_r(x, t)` at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct BinomialTriple<S> {
    pub r: S,
    pub t: u64,
    pub x: u64,
    pub pmf: S,
    pub cdf: S,
}

fn check_args(t: u64, x: u64) -> Result<()> {
    if x > t {
        return Err(Error::InvalidParameter(format!("x = {x} exceeds t = {t}")));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParameter(format!("r = {r} must lie in (0, 1)")));
    }
    Ok(())
}

/// `ln n! − ((n + ½) ln n − n + ½ ln 2π)`, the Stirling remainder.
fn stirling_error(n: u64) -> f64 {
    let nf = n as f64;
    if n <= 15 {
        return ln_factorial(n) - (nf + 0.5) * nf.ln() + nf - 0.5 * std::f64::consts::TAU.ln();
    }
    let nn = nf * nf;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * nn)) / nn) / nn) / nn) / nf
}

/// `x ln(x/m) + m − x`, with a series near `x = m` to avoid cancellation.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let v2 = v * v;
        let mut s = (x - m) * v;
        let mut term = 2.0 * x * v;
        for j in 1.. {
            term *= v2;
            let next = s + term / (2 * j + 1) as f64;
            if next == s {
                break;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `f_r(i, t) = C(t, i) r^i (1−r)^(t−i)`, in saddle-point form so that it
/// stays accurate for large `t`.
pub fn binomial_pmf(r: f64, i: u64, t: u64) -> f64 {
    if i > t {
        return 0.0;
    }
    if i == 0 {
        return (t as f64 * (-r).ln_1p()).exp();
    }
    if i == t {
        return (t as f64 * r.ln()).exp();
    }
    let (n, x) = (t as f64, i as f64);
    let lc = stirling_error(t) - stirling_error(i) - stirling_error(t - i) - deviance(x, n * r)
        - deviance(n - x, n * (1.0 - r));
    let lf = std::f64::consts::TAU.ln() + x.ln() + (-x / n).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// `F_r(x, t) = Σ_{i ≤ x} f_r(i, t)`.
pub fn binomial_cdf(r: f64, x: u64, t: u64) -> f64 {
    if x >= t {
        return 1.0;
    }
    (0..=x).map(|i| binomial_pmf(r, i, t)).sum::<f64>().min(1.0)
}

pub fn binomial_pmf_cdf(r: f64, t: u64, x: u64) -> Result<BinomialTriple<f64>> {
    check_r(r)?;
    check_args(t, x)?;
    Ok(BinomialTriple { r, t, x, pmf: binomial_pmf(r, x, t), cdf: binomial_cdf(r, x, t) })
}

/// Exact rational pmf and cdf.
pub fn binomial_pmf_cdf_exact(r: &Exact, t: u64, x: u64) -> Result<BinomialTriple<Exact>> {
    if *r <= <Exact as Scalar>::zero() || *r >= <Exact as Scalar>::one() {
        return Err(Error::InvalidParameter(format!("r = {r} must lie in (0, 1)")));
    }
    check_args(t, x)?;
    let s = <Exact as Scalar>::one() - r;
    let mut coef = BigInt::one();
    let mut cdf = <Exact as Scalar>::zero();
    let mut pmf = <Exact as Scalar>::zero();
    for i in 0..=x {
        if i > 0 {
            coef = coef * BigInt::from(t - i + 1) / BigInt::from(i);
        }
        pmf = Exact::from_integer(coef.clone()) * r.powi(i) * s.powi(t - i);
        cdf += &pmf;
    }
    Ok(BinomialTriple { r: r.clone(), t, x, pmf, cdf })
}

/// Slack in `F(x, t+1) + (x/t)·f(x+1, t+1) ≤ F(x, t)`, right side minus
/// left side. Requires `x < t`.
pub fn cdf_step_slack(r: f64, x: u64, t: u64) -> Result<f64> {
    check_r(r)?;
    if x >= t {
        return Err(Error::InvalidParameter(format!("need x < t, got x = {x}, t = {t}")));
    }
    let lhs = binomial_cdf(r, x, t + 1) + x as f64 / t as f64 * binomial_pmf(r, x + 1, t + 1);
    Ok(binomial_cdf(r, x, t) - lhs)
}

/// Exact counterpart of [`cdf_step_slack`].
pub fn cdf_step_slack_exact(r: &Exact, x: u64, t: u64) -> Result<Exact> {
    if x >= t {
        return Err(Error::InvalidParameter(format!("need x < t, got x = {x}, t = {t}")));
    }
    let next = binomial_pmf_cdf_exact(r, t + 1, x + 1)?;
    let f_next = next.pmf;
    let big_f_next = next.cdf - &f_next;
    let here = binomial_pmf_cdf_exact(r, t, x)?;
    Ok(here.cdf - big_f_next - Exact::ratio(x, t) * f_next)
}
