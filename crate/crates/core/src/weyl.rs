//! Fractional Weyl sums W^{−α} and differences W^α on finitely supported
//! sequences, plus closed-form images of the analytic families.

use crate::error::{Error, Result};
use crate::gamma::{kernel_values, kernel_values_real};
use crate::numerics::{ComplexSum, C64, ZERO};
use crate::report::VerificationReport;
use crate::sequence::{AnalyticSequence, FiniteSequence};

/// W^s f(n) = Σ_{j≥n} k^{−s}(j−n) f(j) for any real s: a difference for
/// s > 0, a sum for s < 0, the identity for s = 0. Support is preserved.
pub fn weyl(f: &FiniteSequence, s: f64) -> FiniteSequence {
    if s == 0.0 {
        return f.clone();
    }
    let vals = f.values();
    let len = vals.len();
    let k = kernel_values_real(-s, len);
    let out = (0..len)
        .map(|n| {
            let mut acc = ComplexSum::new();
            for j in n..len {
                if k[j - n] != 0.0 {
                    acc.add(vals[j] * k[j - n]);
                }
            }
            acc.value()
        })
        .collect();
    FiniteSequence::new(out)
}

fn check_order(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::Domain(format!("order must be finite and >= 0 (got {alpha})")));
    }
    Ok(())
}

/// Weyl sum W^{−α}f(n) = Σ_{j≥n} k^α(j−n) f(j).
pub fn weyl_sum(f: &FiniteSequence, alpha: f64) -> Result<FiniteSequence> {
    check_order(alpha)?;
    Ok(weyl(f, -alpha))
}

/// Weyl difference W^αf(n) = Σ_{j≥n} k^{−α}(j−n) f(j).
pub fn weyl_diff(f: &FiniteSequence, alpha: f64) -> Result<FiniteSequence> {
    check_order(alpha)?;
    Ok(weyl(f, alpha))
}

/// First difference Wf(n) = f(n) − f(n+1).
pub fn first_difference(f: &FiniteSequence) -> FiniteSequence {
    let len = f.len();
    FiniteSequence::new((0..len).map(|n| f.get(n) - f.get(n + 1)).collect())
}

/// W^α through its definition: m = ⌊α⌋+1 first differences applied to the
/// Weyl sum of order m−α.
pub fn weyl_diff_composed(f: &FiniteSequence, alpha: f64) -> Result<FiniteSequence> {
    check_order(alpha)?;
    if alpha == 0.0 {
        return Ok(f.clone());
    }
    let m = alpha.floor() as usize + 1;
    let mut g = weyl(f, -(m as f64 - alpha));
    for _ in 0..m {
        g = first_difference(&g);
    }
    Ok(g)
}

fn integer_order(alpha: f64) -> Option<usize> {
    if alpha >= 0.0 && alpha == alpha.round() {
        Some(alpha as usize)
    } else {
        None
    }
}

/// First N+1 values of W^α g for an analytic sequence g.
///
/// W^α r_λ = ((λ−1)/λ)^α r_λ (principal power, any real α);
/// W^m k^β(n) = (−1)^m k^{β−m}(n+m) for integer m ≥ 0.
pub fn weyl_closed_form(g: &AnalyticSequence, alpha: f64, n_max: usize) -> Result<FiniteSequence> {
    match *g {
        AnalyticSequence::Geometric { lambda } => {
            if lambda.norm() <= 1.0 {
                return Err(Error::Domain("geometric sequence needs |lambda| > 1".into()));
            }
            let factor = ((lambda - 1.0) / lambda).powf(alpha);
            let vals = g.values(n_max + 1).into_iter().map(|v| v * factor).collect();
            Ok(FiniteSequence::new(vals))
        }
        AnalyticSequence::CesaroKernel { beta } => {
            let m = integer_order(alpha).ok_or_else(|| {
                Error::Unsupported(format!(
                    "closed form of W^alpha k^beta only for integer alpha (got {alpha})"
                ))
            })?;
            Ok(shifted_kernel(beta, m, n_max, C64::new(1.0, 0.0)))
        }
        AnalyticSequence::Constant { c } => {
            let m = integer_order(alpha).ok_or_else(|| {
                Error::Unsupported(format!(
                    "W^alpha of a constant is only defined for integer alpha (got {alpha})"
                ))
            })?;
            Ok(shifted_kernel(C64::new(1.0, 0.0), m, n_max, c))
        }
    }
}

fn shifted_kernel(beta: C64, m: usize, n_max: usize, scale: C64) -> FiniteSequence {
    let k = kernel_values(beta - m as f64, n_max + m + 1);
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    FiniteSequence::new((0..=n_max).map(|n| k[n + m] * sign * scale).collect())
}

/// Compares W^α(j f(j))(n) with (n+α)W^αf(n) − αW^{α−1}f(n) over the
/// support; errors are normwise (max deviation over max entry).
pub fn leibniz_check(f: &FiniteSequence, alpha: f64) -> VerificationReport {
    let jf = f.weighted(|j| C64::new(j as f64, 0.0));
    let lhs = weyl(&jf, alpha);
    let wa = weyl(f, alpha);
    let wa1 = weyl(f, alpha - 1.0);
    let rhs: Vec<C64> = (0..f.len())
        .map(|n| wa.get(n) * (n as f64 + alpha) - wa1.get(n) * alpha)
        .collect();
    vector_report("leibniz", lhs.values(), &rhs).param("alpha", alpha)
}

/// Report for an elementwise vector identity: lhs/rhs are the entries with
/// the largest deviation, rel_err is max|l−r| / max(max|l|, max|r|).
pub fn vector_report(name: &str, lhs: &[C64], rhs: &[C64]) -> VerificationReport {
    let len = lhs.len().max(rhs.len());
    let get = |v: &[C64], i: usize| v.get(i).copied().unwrap_or(ZERO);
    let mut worst = 0;
    let mut max_err = 0.0;
    let mut scale = 0.0_f64;
    for i in 0..len {
        let (a, b) = (get(lhs, i), get(rhs, i));
        let e = (a - b).norm();
        if e > max_err {
            max_err = e;
            worst = i;
        }
        scale = scale.max(a.norm()).max(b.norm());
    }
    VerificationReport::with_errors(name, get(lhs, worst), get(rhs, worst), max_err, scale)
        .terms(len)
        .param("worst_index", worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ONE;

    fn seq(v: &[f64]) -> FiniteSequence {
        FiniteSequence::from_real(v)
    }

    fn pseudo_random(len: usize, seed: u64) -> FiniteSequence {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        FiniteSequence::new((0..len).map(|_| C64::new(next(), next())).collect())
    }

    #[test]
    fn sum_examples() {
        let e0 = FiniteSequence::unit(0);
        assert_eq!(weyl_sum(&e0, 0.7).unwrap(), e0);
        let e2 = FiniteSequence::unit(2);
        assert_eq!(weyl_sum(&e2, 1.0).unwrap(), seq(&[1.0, 1.0, 1.0]));
        assert!(weyl_sum(&e2, -1.0).is_err());
    }

    #[test]
    fn integer_difference_is_iterated_difference() {
        let f = pseudo_random(20, 3);
        for m in 1..4usize {
            let w = weyl_diff(&f, m as f64).unwrap();
            for n in 0..20 {
                let mut expect = ZERO;
                let mut binom = 1.0;
                for j in 0..=m {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    expect += f.get(n + j) * sign * binom;
                    binom = binom * (m - j) as f64 / (j + 1) as f64;
                }
                assert!((w.get(n) - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn routes_agree() {
        let e0 = FiniteSequence::unit(0);
        let a = weyl_diff(&e0, 0.5).unwrap();
        let b = weyl_diff_composed(&e0, 0.5).unwrap();
        assert!((a.get(0) - b.get(0)).norm() < 1e-15);
        let e3 = FiniteSequence::unit(3);
        let a = weyl_diff(&e3, 1.5).unwrap();
        let b = weyl_diff_composed(&e3, 1.5).unwrap();
        for n in 0..4 {
            assert!((a.get(n) - b.get(n)).norm() < 1e-13);
        }
        let f = pseudo_random(33, 9);
        let a = weyl_diff(&f, 2.0).unwrap();
        let b = weyl_diff_composed(&f, 2.0).unwrap();
        for n in 0..33 {
            assert!((a.get(n) - b.get(n)).norm() < 1e-13);
        }
    }

    #[test]
    fn round_trip() {
        let f = pseudo_random(33, 1);
        let back = weyl_diff(&weyl_sum(&f, 0.5).unwrap(), 0.5).unwrap();
        for n in 0..33 {
            assert!((back.get(n) - f.get(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn closed_forms() {
        let r2 = AnalyticSequence::geometric(C64::new(2.0, 0.0)).unwrap();
        let w = weyl_closed_form(&r2, 1.0, 10).unwrap();
        for n in 0..=10 {
            assert!((w.get(n).re - 0.5 * 2f64.powi(-(n as i32) - 1)).abs() < 1e-16);
        }
        let k = AnalyticSequence::kernel(C64::new(0.5, 0.0));
        let w = weyl_closed_form(&k, 1.0, 10).unwrap();
        let km = kernel_values_real(-0.5, 12);
        for n in 0..=10 {
            assert!((w.get(n).re + km[n + 1]).abs() < 1e-16);
        }
        let k2 = AnalyticSequence::kernel(C64::new(2.0, 0.0));
        let w = weyl_closed_form(&k2, 2.0, 10).unwrap();
        assert!(w.values().iter().all(|&v| v == ZERO));
        assert!(matches!(weyl_closed_form(&k, 0.5, 3), Err(Error::Unsupported(_))));
        let c = AnalyticSequence::constant(ONE);
        assert!(weyl_closed_form(&c, 1.0, 5)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == ZERO));
    }

    #[test]
    fn leibniz_examples() {
        let r = leibniz_check(&FiniteSequence::unit(0), 0.5);
        assert_eq!(r.abs_err, 0.0);
        let r = leibniz_check(&FiniteSequence::unit(5), 1.0);
        assert!(r.abs_err <= 1e-14);
        let r = leibniz_check(&pseudo_random(33, 5), 0.5);
        assert!(r.rel_err <= 1e-11, "{r:?}");
    }
}
