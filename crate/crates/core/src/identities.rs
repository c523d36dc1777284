//! Numerical checks of Gamma-quotient summation identities and of the
//! Cesàro-number estimates built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, gamma_real, kernel_values_real, ln_gamma_real};
use crate::numerics::{one_minus_exp_neg, ComplexSum, DoubleDouble as DD, NeumaierSum, C64, ZERO};
use crate::report::VerificationReport;

/// Term budget for slowly converging series.
pub const SERIES_BUDGET: usize = 2_000_000;

fn require_fractional(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha == alpha.round() {
        return Err(Error::Pole(format!("Gamma(-alpha) with alpha = {alpha}")));
    }
    Ok(())
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive (got {x})")))
    }
}

fn real_ratio(a: f64, b: f64) -> Result<f64> {
    Ok(gamma_ratio(C64::new(a, 0.0), C64::new(b, 0.0))?.value.re)
}

/// sign(Γ(x₀)) · exp(Σ ± lnΓ) for real arguments; `num` and `den` list the
/// Gamma arguments in numerator and denominator.
fn gamma_product(num: &[f64], den: &[f64]) -> Result<f64> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for &x in num {
        let (l, s) = ln_gamma_real(x)?;
        ln += l;
        sign *= s;
    }
    for &x in den {
        let (l, s) = ln_gamma_real(x)?;
        ln -= l;
        sign *= s;
    }
    Ok(sign * ln.exp())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn dd(x: f64) -> DD {
    DD::new(x)
}

/// Σ_{l=0}^{m} w_l P_l in double-double, where P_0 = 1 and
/// P_{l+1} = P_l · ratio(l). Returns (sum, Σ|w_l P_l|).
fn hypergeometric_sum<R, W>(m: usize, ratio: R, weight: W) -> (DD, f64)
where
    R: Fn(DD) -> DD,
    W: Fn(DD) -> DD,
{
    let mut p = dd(1.0);
    let mut sum = dd(0.0);
    let mut mag = 0.0;
    for l in 0..=m {
        let lf = dd(l as f64);
        let term = weight(lf).mul(p);
        sum = sum.add(term);
        mag += term.value().abs();
        p = p.mul(ratio(lf));
    }
    (sum, mag)
}

/// Σ_{l≥0} Γ(l−α)/Γ(l+1) · Γ(u+l+1)/Γ(v+u+l+1) against its closed form.
///
/// Terms follow the ratio recurrence; once l > α they keep one sign and
/// |t_l| ≤ |t_L|((L+c)/(l+c))^σ with c = 1+u+v, σ = 1+α+v, so the remainder
/// from L on is at most |t_L|(1 + (L+c)/(σ−1)). Summation stops when that
/// bound drops below tol·|partial sum| or the term budget is spent.
pub fn verify_fits(alpha: f64, u: f64, v: f64, tol: f64) -> Result<VerificationReport> {
    require_fractional(alpha)?;
    require_positive("u", u)?;
    require_positive("v", v)?;
    if v + alpha <= 0.0 {
        return Err(Error::NonConvergence(format!(
            "terms decay like l^-(v+alpha+1) and need v + alpha > 0 (got {})",
            v + alpha
        )));
    }
    let g_neg_alpha = gamma_real(-alpha)?;
    let rhs = g_neg_alpha * real_ratio(u + 1.0, u + alpha + v + 1.0)? * real_ratio(v + alpha, v)?;

    let c = 1.0 + u + v;
    let sigma = 1.0 + alpha + v;
    let mut term = g_neg_alpha * real_ratio(u + 1.0, v + u + 1.0)?;
    let mut sum = NeumaierSum::new();
    let mut l = 0usize;
    let tail = loop {
        sum.add(term);
        let lf = l as f64;
        term *= (lf - alpha) / (lf + 1.0) * (u + lf + 1.0) / (v + u + lf + 1.0);
        l += 1;
        let big_l = l as f64;
        if big_l > alpha {
            let bound = term.abs() * (1.0 + (big_l + c) / (sigma - 1.0));
            if bound <= tol * sum.value().abs() || l >= SERIES_BUDGET {
                break bound;
            }
        }
    };
    Ok(VerificationReport::new("fits", real(sum.value()), real(rhs))
        .param("alpha", alpha)
        .param("u", u)
        .param("v", v)
        .param("tol", tol)
        .terms(l)
        .tail(tail))
}

/// Σ_{l≤m} (αr + l(v+α)) Γ(l−α)Γ(l+r)/(Γ(l+1)Γ(v+1+l+r)) against
/// −Γ(m+1+r)Γ(m+1−α)/(Γ(m+1)Γ(v+m+r+1)).
pub fn verify_key(alpha: f64, v: f64, r: f64, m: usize) -> Result<VerificationReport> {
    require_fractional(alpha)?;
    require_positive("v", v)?;
    require_positive("r", r)?;
    // terms are c0 · w_l · P_l with c0 = Γ(−α)Γ(r)/Γ(v+1+r) and rational P_l,
    // so heavy cancellation in the sum costs nothing beyond c0's rounding
    let c0 = gamma_real(-alpha)? * real_ratio(r, v + 1.0 + r)?;
    let (a, vv, rr) = (dd(alpha), dd(v), dd(r));
    let (sum, mag) = hypergeometric_sum(
        m,
        |l| {
            l.sub(a)
                .div(l.add(dd(1.0)))
                .mul(l.add(rr).div(vv.add(dd(1.0)).add(l).add(rr)))
        },
        |l| a.mul(rr).add(l.mul(vv.add(a))),
    );
    let mf = m as f64;
    let rhs = -real_ratio(mf + 1.0 + r, v + mf + r + 1.0)? * real_ratio(mf + 1.0 - alpha, mf + 1.0)?;
    Ok(VerificationReport::new("key", real(c0 * sum.value()), real(rhs))
        .param("alpha", alpha)
        .param("v", v)
        .param("r", r)
        .param("m", m)
        .terms(m + 1)
        .magnitude(c0.abs() * mag))
}

/// G_{m,r}(v) against F_{m,r}(v), all terms formed in log space.
pub fn verify_funda(alpha: f64, v: f64, r: f64, m: usize) -> Result<VerificationReport> {
    require_fractional(alpha)?;
    require_positive("v", v)?;
    require_positive("r", r)?;
    let mf = m as f64;
    let (a, vv, rr, mm) = (dd(alpha), dd(v), dd(r), dd(mf));
    let one = dd(1.0);
    // G: c_G · Σ P_l with P_{l+1}/P_l = (l−α)/(l+1) · (r+m−l)/(v+α+r+m−l−1)
    let cg = gamma_product(&[mf + r + 1.0, -alpha, v + alpha + r + mf], &[v + mf + r, r + 1.0 + mf])?;
    let (gs, gmag) = hypergeometric_sum(
        m,
        |l| {
            l.sub(a)
                .div(l.add(one))
                .mul(rr.add(mm).sub(l).div(vv.add(a).add(rr).add(mm).sub(l).sub(one)))
        },
        |_| one,
    );
    // F: c_F · Σ P_l with P_{l+1}/P_l = (l−α)/(l+1) · (l+r)/(v+l+r)
    let cf = gamma_product(&[alpha + r + v, -alpha, r], &[r, v + r])?;
    let (fs, fmag) = hypergeometric_sum(
        m,
        |l| l.sub(a).div(l.add(one)).mul(l.add(rr).div(vv.add(l).add(rr))),
        |_| one,
    );
    let (g, f) = (cg * gs.value(), cf * fs.value());
    let (gmag, fmag) = (cg.abs() * gmag, cf.abs() * fmag);
    Ok(VerificationReport::new("funda", real(g), real(f))
        .param("alpha", alpha)
        .param("v", v)
        .param("r", r)
        .param("m", m)
        .terms(m + 1)
        .magnitude(gmag.max(fmag)))
}

/// The two closed forms for Σ Γ(l−α)/Γ(v+l+1) and Σ (l+1)Γ(l−α)/Γ(v+l+2).
///
/// The second sum carries Γ(v+l+2) in the denominator: that is the r = 2
/// instance of the G/F identity, and it is the form whose right-hand side
/// (with the factor Γ(v+m+2)) holds already at m = 0. With Γ(v+l+1) the
/// printed right-hand side is off by the factor (v+1) at m = 0.
pub fn verify_special_cases(alpha: f64, v: f64, m: usize) -> Result<(VerificationReport, VerificationReport)> {
    require_fractional(alpha)?;
    require_positive("v", v)?;
    let mf = m as f64;
    let (a, vv, one) = (dd(alpha), dd(v), dd(1.0));
    let c1 = gamma_product(&[-alpha], &[v + 1.0])?;
    let (s1, mag1) = hypergeometric_sum(m, |l| l.sub(a).div(vv.add(l).add(one)), |_| one);
    let c2 = gamma_product(&[-alpha], &[v + 2.0])?;
    let (s2, mag2) = hypergeometric_sum(m, |l| l.sub(a).div(vv.add(l).add(dd(2.0))), |l| l.add(one));
    let (s1, mag1, s2, mag2) = (c1 * s1.value(), c1.abs() * mag1, c2 * s2.value(), c2.abs() * mag2);
    let av = alpha + v;
    let lead = gamma_product(&[-alpha], &[v])?;
    let rhs1 = lead / av - gamma_product(&[mf + 1.0 - alpha], &[v + mf + 1.0])? / av;
    let poly = alpha * mf + mf * v + alpha + mf + 2.0 * v + 1.0;
    let rhs2 =
        lead / ((av + 1.0) * av) - poly * gamma_product(&[mf + 1.0 - alpha], &[v + mf + 2.0])? / ((av + 1.0) * av);
    let tag = |r: VerificationReport| r.param("alpha", alpha).param("v", v).param("m", m).terms(m + 1);
    Ok((
        tag(VerificationReport::new("special-case-1", real(s1), real(rhs1)).magnitude(mag1)),
        tag(VerificationReport::new("special-case-2", real(s2), real(rhs2)).magnitude(mag2)),
    ))
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// e^{−tu} Σ_{j≥max(u,n)} C(j,u) k^{−α}(j−n) x^{j−u} against
/// e^{−tα} Σ_{j≤min(u,n)} C(n,j) k^{−α}(u−j) e^{−tj} x^{n−j}, x = 1−e^{−t}.
///
/// Direct summation needs |x| < 1. Beyond j ≥ n+⌈α⌉ and j ≥ u the term
/// ratio is at most q_J = (J+1)/(J+1−u)·|x|, giving the geometric tail
/// |a_J| q_J/(1−q_J).
pub fn verify_llave(alpha: f64, t: C64, n: usize, u: usize, tol: f64) -> Result<VerificationReport> {
    require_fractional(alpha)?;
    if t != ZERO && t.re <= 0.0 {
        return Err(Error::Domain(format!("need Re t > 0 or t = 0 (got {t})")));
    }
    let x = one_minus_exp_neg(t);
    if x.norm() >= 1.0 {
        return Err(Error::Divergence(format!(
            "|1 - exp(-t)| = {} >= 1 at t = {t}",
            x.norm()
        )));
    }
    let tag = |r: VerificationReport| {
        r.param("alpha", alpha)
            .param("t", t)
            .param("n", n)
            .param("u", u)
            .param("tol", tol)
    };

    let j0 = u.max(n);
    let mut kernel = kernel_values_real(-alpha, j0 - n + 1);
    let mut term = real(binomial(j0, u) * kernel[j0 - n]) * x.powi((j0 - u) as i32);
    let mut kcur = kernel[j0 - n];
    let mut sum = ComplexSum::new();
    let mut j = j0;
    let first_certified = (n + alpha.ceil() as usize).max(u + 1);
    let tail = loop {
        sum.add(term);
        // a_{j+1} = a_j · (j+1)/(j+1−u) · k^{−α}(j+1−n)/k^{−α}(j−n) · x
        let m = (j - n) as f64;
        let knext = kcur * (m - alpha) / (m + 1.0);
        let ratio_binom = (j + 1) as f64 / (j + 1 - u) as f64;
        term = if kcur != 0.0 {
            term * (ratio_binom * knext / kcur) * x
        } else {
            real(binomial(j + 1, u) * knext) * x.powi((j + 1 - u) as i32)
        };
        kcur = knext;
        j += 1;
        if j >= first_certified {
            let q = (j + 1) as f64 / (j + 1 - u) as f64 * x.norm();
            if q < 1.0 {
                let bound = term.norm() * q / (1.0 - q);
                if term == ZERO || bound <= tol * sum.value().norm() || j - j0 >= SERIES_BUDGET {
                    break bound;
                }
            }
        }
        if j - j0 >= SERIES_BUDGET {
            break f64::INFINITY;
        }
    };
    let lhs = (-t * u as f64).exp() * sum.value();
    let terms_used = j - j0 + 1;

    if kernel.len() < u + 1 {
        kernel = kernel_values_real(-alpha, u + 1);
    }
    let e = (-t).exp();
    let mut rhs_sum = ComplexSum::new();
    for jj in 0..=u.min(n) {
        rhs_sum.add(real(binomial(n, jj) * kernel[u - jj]) * e.powi(jj as i32) * x.powi((n - jj) as i32));
    }
    let rhs = (-t * alpha).exp() * rhs_sum.value();
    let scale = (-t * u as f64).exp().norm();
    Ok(tag(VerificationReport::new("llave", lhs, rhs))
        .terms(terms_used)
        .tail(tail * scale))
}

/// Empirical constant of the Cesàro-ratio estimate
/// Σ_{l>n} (k^α(l−n+j)/k^{α+1}(l))^q ≤ C · j (k^α(j)/k^{α+1}(n))^q.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioEstimateReport {
    pub alpha: f64,
    pub q: f64,
    /// Sup of the ratios using partial inner sums (a lower bound).
    pub sup: f64,
    /// Sup of the ratios with the certified inner tail added.
    pub sup_upper: f64,
    pub argsup: (usize, usize),
    /// (n, j, ratio lower bound, ratio upper bound) for every grid pair.
    pub values: Vec<(usize, usize, f64, f64)>,
}

const RATIO_INNER_TERMS: usize = 1 << 17;

pub fn check_ratio_estimate(alpha: f64, q: f64, n_grid: &[usize], j_grid: &[usize]) -> Result<RatioEstimateReport> {
    require_positive("alpha", alpha)?;
    if q <= 1.0 {
        return Err(Error::Domain(format!("q must exceed 1 (got {q})")));
    }
    let n_max = n_grid.iter().copied().max().unwrap_or(0);
    let j_max = j_grid.iter().copied().max().unwrap_or(0);
    let len = RATIO_INNER_TERMS + j_max.max(n_max) + 2;
    let ka = kernel_values_real(alpha, len);
    let ka1 = kernel_values_real(alpha + 1.0, len);
    let mut values = Vec::new();
    let (mut sup, mut sup_upper, mut argsup) = (0.0_f64, 0.0_f64, (0, 0));
    for &n in n_grid {
        for &j in j_grid {
            if j <= n {
                continue;
            }
            let mut s = NeumaierSum::new();
            for m in 1..=RATIO_INNER_TERMS {
                s.add((ka[m + j] / ka1[m + n]).powf(q));
            }
            let big_m = RATIO_INNER_TERMS as f64;
            let base = big_m + n as f64 + alpha;
            let mut tail = alpha.powf(q) * base.powf(1.0 - q) / (q - 1.0);
            if alpha > 1.0 {
                let growth = (base / (big_m + n as f64 + 1.0)).powf(q * (j - n) as f64);
                tail *= growth;
            }
            let denom = j as f64 * (ka[j] / ka1[n]).powf(q);
            let lo = s.value() / denom;
            let hi = (s.value() + tail) / denom;
            if lo > sup {
                sup = lo;
                argsup = (n, j);
            }
            sup_upper = sup_upper.max(hi);
            values.push((n, j, lo, hi));
        }
    }
    Ok(RatioEstimateReport {
        alpha,
        q,
        sup,
        sup_upper,
        argsup,
        values,
    })
}

/// Samples of the conjectured polynomial P_r(α, m, v) and a least-squares
/// fit of degree r−1 in m. Exploratory: nothing here is asserted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrExploration {
    pub alpha: f64,
    pub v: f64,
    pub r: usize,
    pub samples: Vec<(usize, f64)>,
    /// Fitted coefficients c_0..c_{r−1} of Σ c_k m^k.
    pub fit: Vec<f64>,
    pub max_residual: f64,
}

pub fn explore_pr_conjecture(alpha: f64, v: f64, r: usize, m_grid: &[usize]) -> Result<PrExploration> {
    require_fractional(alpha)?;
    require_positive("v", v)?;
    if r == 0 {
        return Err(Error::Domain("r must be a positive integer".into()));
    }
    let rf = r as f64;
    let mut samples = Vec::new();
    for &m in m_grid {
        let mf = m as f64;
        // Γ(v+α+r)/Γ(r) Σ Γ(l+r)Γ(l−α)/(Γ(v+l+r)Γ(l+1)) = c · Σ P_l
        let c = gamma_product(&[v + alpha + rf, -alpha], &[v + rf])?;
        let (a, vv, rr, one) = (dd(alpha), dd(v), dd(rf), dd(1.0));
        let (s, _) = hypergeometric_sum(
            m,
            |l| l.add(rr).div(l.add(one)).mul(l.sub(a).div(vv.add(l).add(rr))),
            |_| one,
        );
        let lhs = c * s.value();
        let bracket = gamma_product(&[-alpha], &[v])? - lhs / gamma_real(v + alpha)?;
        let p = bracket * gamma_product(&[mf + v + rf], &[mf - alpha + 1.0])?;
        samples.push((m, p));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0 as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let fit = polyfit(&xs, &ys, r - 1);
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(&x, &y)| (eval_poly(&fit, x) - y).abs())
        .fold(0.0, f64::max);
    Ok(PrExploration {
        alpha,
        v,
        r,
        samples,
        fit,
        max_residual,
    })
}

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// Least-squares polynomial fit via modified Gram–Schmidt on a centred,
/// scaled variable; returns monomial coefficients in the original variable.
fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let k = (degree + 1).min(xs.len().max(1));
    let n = xs.len();
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let centre = 0.5 * (lo + hi);
    let half = (0.5 * (hi - lo)).max(1.0);
    let s: Vec<f64> = xs.iter().map(|&x| (x - centre) / half).collect();
    // columns of the scaled Vandermonde matrix
    let mut q: Vec<Vec<f64>> = (0..k)
        .map(|p| s.iter().map(|&si| si.powi(p as i32)).collect())
        .collect();
    let mut rmat = vec![vec![0.0; k]; k];
    for i in 0..k {
        for jj in 0..i {
            let d: f64 = (0..n).map(|t| q[jj][t] * q[i][t]).sum();
            rmat[jj][i] = d;
            for t in 0..n {
                q[i][t] -= d * q[jj][t];
            }
        }
        let norm = (0..n).map(|t| q[i][t] * q[i][t]).sum::<f64>().sqrt();
        rmat[i][i] = norm;
        if norm > 0.0 {
            for t in 0..n {
                q[i][t] /= norm;
            }
        }
    }
    let qty: Vec<f64> = (0..k).map(|i| (0..n).map(|t| q[i][t] * ys[t]).sum()).collect();
    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = qty[i];
        for jj in i + 1..k {
            acc -= rmat[i][jj] * b[jj];
        }
        b[i] = if rmat[i][i] != 0.0 { acc / rmat[i][i] } else { 0.0 };
    }
    // expand Σ b_p ((x − centre)/half)^p into monomials in x
    let mut out = vec![0.0; k];
    for (p, &bp) in b.iter().enumerate() {
        for i in 0..=p {
            out[i] += bp * binomial(p, i) * (-centre).powi((p - i) as i32) / half.powi(p as i32);
        }
    }
    out
}

/// The standard parameter grids used by the identity suites.
pub mod grid {
    pub const ALPHA: [f64; 4] = [0.3, 0.7, 1.5, 2.6];
    pub const VRU: [f64; 3] = [0.5, 1.0, 2.5];
    pub const M: [usize; 5] = [0, 1, 5, 25, 60];
    pub const LLAVE_T: [(f64, f64); 4] = [(0.1, 0.0), (1.0, 0.0), (3.0, 0.0), (0.2, 0.1)];
    pub const LLAVE_NU: [usize; 4] = [0, 1, 3, 6];
}

/// All identity reports over the standard grids.
pub fn standard_suite(series_tol: f64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for &alpha in &grid::ALPHA {
        for &u in &grid::VRU {
            for &v in &grid::VRU {
                out.push(verify_fits(alpha, u, v, series_tol)?);
            }
        }
        for &v in &grid::VRU {
            for &r in &grid::VRU {
                for &m in &grid::M {
                    out.push(verify_key(alpha, v, r, m)?);
                    out.push(verify_funda(alpha, v, r, m)?);
                }
            }
            for &m in &grid::M {
                let (a, b) = verify_special_cases(alpha, v, m)?;
                out.push(a);
                out.push(b);
            }
        }
        for &(tr, ti) in &grid::LLAVE_T {
            for &n in &grid::LLAVE_NU {
                for &u in &grid::LLAVE_NU {
                    out.push(verify_llave(alpha, C64::new(tr, ti), n, u, series_tol)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma_real;

    #[test]
    fn fits_example_and_brute_force() {
        let r = verify_fits(0.5, 1.0, 2.0, 1e-10).unwrap();
        assert!(r.rel_err <= 1e-9, "{r:?}");
        let g = |x: f64| gamma_real(x).unwrap();
        let closed = g(2.0) * g(2.5) * g(-0.5) / (g(2.0) * g(4.5));
        assert!((r.rhs.re - closed).abs() < 1e-13 * closed.abs());
        // brute force: 10^6 terms with each Gamma quotient formed directly
        let mut s = NeumaierSum::new();
        for l in 0..1_000_000usize {
            let lf = l as f64;
            s.add(gamma_product(&[lf - 0.5, 2.0 + lf], &[lf + 1.0, 4.0 + lf]).unwrap());
        }
        assert!((s.value() - closed).abs() < 1e-9 * closed.abs());
    }

    #[test]
    fn fits_tail_monotone_in_terms() {
        let mut prev = f64::INFINITY;
        for tol in [1e-4, 1e-6, 1e-8, 1e-10] {
            let r = verify_fits(0.7, 1.0, 1.0, tol).unwrap();
            assert!(r.tail_bound <= prev);
            assert!(r.passes(1e-12));
            prev = r.tail_bound;
        }
    }

    #[test]
    fn fits_preconditions() {
        assert!(matches!(verify_fits(2.0, 1.0, 1.0, 1e-8), Err(Error::Pole(_))));
        assert!(matches!(
            verify_fits(-1.5, 1.0, 1.0, 1e-8),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn key_examples() {
        for (a, v, r) in [(0.3, 1.5, 2.0), (2.6, 0.5, 0.5), (1.5, 1.0, 2.5)] {
            let base = verify_key(a, v, r, 0).unwrap();
            assert!(base.rel_err < 1e-14);
        }
        assert!(verify_key(0.3, 1.5, 2.0, 25).unwrap().rel_err <= 1e-10);
        assert!(verify_key(2.6, 0.5, 0.5, 40).unwrap().rel_err <= 1e-9);
    }

    #[test]
    fn funda_examples() {
        assert!(verify_funda(0.7, 2.0, 1.0, 0).unwrap().rel_err <= 1e-13);
        assert!(verify_funda(0.7, 2.0, 1.0, 30).unwrap().rel_err <= 1e-10);
        assert!(verify_funda(1.5, 0.5, 2.5, 60).unwrap().rel_err <= 1e-9);
    }

    #[test]
    fn special_case_examples() {
        let (a, b) = verify_special_cases(0.4, 1.2, 0).unwrap();
        assert!(a.rel_err < 1e-14 && b.rel_err < 1e-14, "{a:?} {b:?}");
        let (a, b) = verify_special_cases(0.4, 1.2, 50).unwrap();
        assert!(a.rel_err <= 1e-10 && b.rel_err <= 1e-10);
    }

    #[test]
    fn second_special_case_needs_shifted_denominator() {
        // with Γ(v+l+1) the m = 0 sides differ by the factor v+1
        let (alpha, v) = (0.4, 1.2);
        let printed_lhs = gamma_product(&[-alpha], &[v + 1.0]).unwrap();
        let (_, b) = verify_special_cases(alpha, v, 0).unwrap();
        assert!((printed_lhs / b.rhs.re - (v + 1.0)).abs() < 1e-13);
    }

    #[test]
    fn llave_examples() {
        for (n, u) in [(0, 0), (3, 5), (5, 3), (4, 4)] {
            let r = verify_llave(0.5, ZERO, n, u, 1e-14).unwrap();
            assert!(r.abs_err == 0.0, "{r:?}");
        }
        let r = verify_llave(0.5, C64::new(1.0, 0.0), 3, 5, 1e-13).unwrap();
        assert!(r.rel_err <= 1e-9, "{r:?}");
        let r = verify_llave(1.7, C64::new(0.2, 0.1), 6, 2, 1e-13).unwrap();
        assert!(r.rel_err <= 1e-8, "{r:?}");
        assert!(matches!(
            verify_llave(0.5, C64::new(0.1, 3.0), 1, 1, 1e-10),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn ratio_estimate_positive_and_stable() {
        let small: Vec<usize> = (1..=64).step_by(7).collect();
        let large: Vec<usize> = (1..=256).step_by(7).collect();
        let ns = [0, 1, 3, 10];
        let a = check_ratio_estimate(0.5, 2.0, &ns, &small).unwrap();
        let b = check_ratio_estimate(0.5, 2.0, &ns, &large).unwrap();
        assert!(a.values.iter().all(|v| v.2 > 0.0));
        assert!(b.sup < 2.0 * a.sup && b.sup.is_finite());
        let c1 = check_ratio_estimate(1.5, 1.5, &[0], &[8]).unwrap();
        let c2 = check_ratio_estimate(1.5, 1.5, &[0], &[8]).unwrap();
        assert_eq!(c1, c2);
        assert!(c1.sup.is_finite() && c1.sup_upper >= c1.sup);
    }

    #[test]
    fn pr_conjecture_low_orders() {
        let ms = [0, 1, 2, 5, 10, 25];
        let p1 = explore_pr_conjecture(0.5, 1.0, 1, &ms).unwrap();
        assert!((p1.fit[0] - 1.0).abs() < 1e-8, "{p1:?}");
        let p2 = explore_pr_conjecture(0.5, 1.0, 2, &ms).unwrap();
        for &(m, p) in &p2.samples {
            let mf = m as f64;
            let expect = 0.5 * mf + mf + 0.5 + mf + 2.0 + 1.0;
            assert!((p - expect).abs() < 1e-8 * expect, "m = {m}: {p}");
        }
        let p3 = explore_pr_conjecture(0.5, 1.0, 3, &ms).unwrap();
        assert!(p3.max_residual.is_finite());
        assert_eq!(p3.fit.len(), 3);
    }

    #[test]
    fn polyfit_recovers_quadratic() {
        let xs = [0.0, 1.0, 2.0, 5.0, 10.0];
        let ys: Vec<f64> = xs.iter().map(|&x| 3.0 - 2.0 * x + 0.5 * x * x).collect();
        let c = polyfit(&xs, &ys, 2);
        assert!((c[0] - 3.0).abs() < 1e-10 && (c[1] + 2.0).abs() < 1e-10 && (c[2] - 0.5).abs() < 1e-10);
    }
}
