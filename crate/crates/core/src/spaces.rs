//! Weighted sequence spaces τ_p^α: norms, the isometry D^α onto ℓ^p, the
//! bilinear pairing, and membership tests for the analytic families.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gamma::{convolve, kernel_values, kernel_values_real};
use crate::numerics::{compensated_sum, compensated_sum_real, Exponent, C64};
use crate::sequence::{AnalyticSequence, FiniteSequence};
use crate::weyl::weyl;

/// Smoothness α ≥ 0 and exponent p ∈ [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpaceParams {
    pub alpha: f64,
    pub p: Exponent,
}

impl SpaceParams {
    pub fn new(alpha: f64, p: Exponent) -> Result<Self> {
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::Domain(format!("alpha must be >= 0 (got {alpha})")));
        }
        Ok(Self { alpha, p })
    }
}

/// Where a norm was cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    Exact,
    At(usize),
}

impl Serialize for Truncation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Truncation::Exact => s.serialize_str("exact"),
            Truncation::At(n) => s.serialize_u64(*n as u64),
        }
    }
}

/// The true norm lies in [value, value + tail_bound].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub tail_bound: f64,
    pub truncation: Truncation,
}

/// D^αf(n) = k^{α+1}(n) W^αf(n).
pub fn d_alpha(f: &FiniteSequence, alpha: f64) -> FiniteSequence {
    if alpha == 0.0 {
        return f.clone();
    }
    let w = weyl(f, alpha);
    let k = kernel_values_real(alpha + 1.0, f.len());
    w.weighted(|n| C64::new(k[n], 0.0))
}

/// (D^α)^{−1}f = W^{−α}(f / k^{α+1}).
pub fn d_alpha_inv(f: &FiniteSequence, alpha: f64) -> FiniteSequence {
    if alpha == 0.0 {
        return f.clone();
    }
    let k = kernel_values_real(alpha + 1.0, f.len());
    weyl(&f.weighted(|n| C64::new(1.0 / k[n], 0.0)), -alpha)
}

/// ‖f‖_{α,p} = ‖D^αf‖_{ℓ^p}; exact for finitely supported input.
pub fn norm(f: &FiniteSequence, sp: SpaceParams) -> NormResult {
    NormResult {
        value: d_alpha(f, sp.alpha).lp_norm(sp.p),
        tail_bound: 0.0,
        truncation: Truncation::Exact,
    }
}

/// ⟨f,g⟩_α = Σ W^αf(n) W^αg(n) (k^{α+1}(n))², bilinear (no conjugation).
pub fn pairing(f: &FiniteSequence, g: &FiniteSequence, alpha: f64) -> C64 {
    let df = d_alpha(f, alpha);
    let dg = d_alpha(g, alpha);
    compensated_sum((0..df.len().min(dg.len())).map(|n| df.get(n) * dg.get(n)))
}

/// Outcome of a closed-form membership criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub criterion: String,
    /// The quantity tested (Re β for kernels, |λ| for geometric sequences).
    pub value: f64,
    pub threshold: f64,
    /// Closed-form norm expression for geometric sequences, evaluated with a
    /// unit constant.
    pub norm_bound: Option<f64>,
}

/// Closed-form membership of k^β or r_λ in τ_p^α.
pub fn membership(seq: &AnalyticSequence, sp: SpaceParams) -> Result<Membership> {
    match *seq {
        AnalyticSequence::CesaroKernel { beta } => Ok(kernel_membership(beta, sp.p)),
        AnalyticSequence::Constant { c } => {
            let mut m = kernel_membership(C64::new(1.0, 0.0), sp.p);
            if c == C64::new(0.0, 0.0) {
                m.member = true;
                m.criterion = "zero sequence".into();
            }
            Ok(m)
        }
        AnalyticSequence::Geometric { lambda } => {
            let r = lambda.norm();
            if r <= 1.0 {
                return Err(Error::Domain("geometric sequence needs |lambda| > 1".into()));
            }
            let a = sp.alpha;
            let bound = match sp.p {
                Exponent::Finite(p) => {
                    let lp = lambda.powf(p);
                    let base = (lp - lambda.powf(p - 1.0)).norm() / (r.powf(p) - 1.0);
                    pow0(base, a) * (r.powf(p) - 1.0).powf(-1.0 / p)
                }
                Exponent::Infinite => pow0(a, a) * pow0((lambda - 1.0).norm(), a) / r.powf(2.0 * a + 1.0),
            };
            Ok(Membership {
                member: true,
                criterion: "|lambda| > 1".into(),
                value: r,
                threshold: 1.0,
                norm_bound: Some(bound),
            })
        }
    }
}

// x^a with 0^0 = 1
fn pow0(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        1.0
    } else {
        x.powf(a)
    }
}

fn kernel_membership(beta: C64, p: Exponent) -> Membership {
    let b = beta.re;
    let (member, criterion, threshold) = match p {
        Exponent::Infinite => (b <= 1.0, "Re beta <= 1", 1.0),
        Exponent::Finite(q) if q == 1.0 => (b < 0.0 || beta == C64::new(0.0, 0.0), "Re beta < 0 or beta = 0", 0.0),
        Exponent::Finite(_) => {
            let t = 1.0 - p.recip();
            (b < t, "Re beta < 1 - 1/p", t)
        }
    };
    // Nonpositive integers give finitely supported kernels.
    let finite = beta.im == 0.0 && b <= 0.0 && b == b.round();
    Membership {
        member: member || finite,
        criterion: if finite && !member {
            "finite support".into()
        } else {
            criterion.into()
        },
        value: b,
        threshold,
        norm_bound: None,
    }
}

/// Trend read off a sweep of partial norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    /// Partial norms stopped changing exactly.
    Saturated,
    /// Increments shrink geometrically along the grid.
    Converging,
    /// Increments do not shrink.
    Diverging,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipTable {
    pub rows: Vec<(usize, f64)>,
    /// Ratio of the last two increments of the p-th power sums.
    pub increment_ratio: f64,
    pub trend: Trend,
    /// Geometric extrapolation of the limit when converging.
    pub extrapolated: Option<f64>,
}

/// Partial τ_p^α norms of an analytic sequence over truncations 0..=N.
///
/// Kernels need integer α (closed-form image); geometric sequences accept
/// any α.
pub fn empirical_membership(seq: &AnalyticSequence, sp: SpaceParams, grid: &[usize]) -> Result<MembershipTable> {
    let n_max = grid.iter().copied().max().unwrap_or(0);
    let terms = weighted_terms(seq, sp.alpha, n_max)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut powered = Vec::with_capacity(grid.len());
    for &n in grid {
        let s = match sp.p {
            Exponent::Infinite => terms[..=n].iter().fold(0.0_f64, |m, &x| m.max(x)),
            Exponent::Finite(p) => compensated_sum_real(terms[..=n].iter().map(|&x| x.powf(p))),
        };
        powered.push(s);
        rows.push((n, s.powf(sp.p.recip().max(if sp.p.is_infinite() { 1.0 } else { 0.0 }))));
    }
    let (increment_ratio, trend, extrapolated) = classify(&powered, sp.p);
    Ok(MembershipTable {
        rows,
        increment_ratio,
        trend,
        extrapolated,
    })
}

fn classify(s: &[f64], p: Exponent) -> (f64, Trend, Option<f64>) {
    if s.len() < 3 {
        return (f64::NAN, Trend::Undetermined, None);
    }
    let k = s.len();
    let d1 = s[k - 2] - s[k - 3];
    let d2 = s[k - 1] - s[k - 2];
    let root = |x: f64| match p {
        Exponent::Finite(p) => x.powf(1.0 / p),
        Exponent::Infinite => x,
    };
    if d2 == 0.0 {
        return (0.0, Trend::Saturated, Some(root(s[k - 1])));
    }
    let r = d2 / d1;
    if !r.is_finite() {
        return (r, Trend::Undetermined, None);
    }
    if r < 0.98 {
        (r, Trend::Converging, Some(root(s[k - 1] + d2 * r / (1.0 - r))))
    } else if r >= 1.0 - 1e-3 {
        (r, Trend::Diverging, None)
    } else {
        (r, Trend::Undetermined, None)
    }
}

// |W^α g(n)| k^{α+1}(n) for n = 0..=n_max
fn weighted_terms(seq: &AnalyticSequence, alpha: f64, n_max: usize) -> Result<Vec<f64>> {
    let k = kernel_values_real(alpha + 1.0, n_max + 1);
    let image: Vec<f64> = match *seq {
        AnalyticSequence::Geometric { lambda } => {
            if lambda.norm() <= 1.0 {
                return Err(Error::Domain("geometric sequence needs |lambda| > 1".into()));
            }
            let c = pow0(((lambda - 1.0) / lambda).norm(), alpha);
            let r = lambda.norm().recip();
            let lr = r.ln();
            (0..=n_max).map(|n| c * ((n + 1) as f64 * lr).exp()).collect()
        }
        AnalyticSequence::CesaroKernel { .. } | AnalyticSequence::Constant { .. } => {
            let (beta, scale) = match *seq {
                AnalyticSequence::CesaroKernel { beta } => (beta, 1.0),
                AnalyticSequence::Constant { c } => (C64::new(1.0, 0.0), c.norm()),
                _ => unreachable!(),
            };
            if alpha != alpha.round() {
                return Err(Error::Unsupported(format!(
                    "partial norms of kernels need integer alpha (got {alpha})"
                )));
            }
            let m = alpha as usize;
            let kb = kernel_values(beta - m as f64, n_max + m + 1);
            (0..=n_max).map(|n| kb[n + m].norm() * scale).collect()
        }
    };
    Ok(image.iter().zip(&k).map(|(a, b)| a * b).collect())
}

/// ‖f∗g‖_{α,p} / (‖f‖_{α,p} ‖g‖_{α,1}).
pub fn convolution_module_check(f: &FiniteSequence, g: &FiniteSequence, sp: SpaceParams) -> f64 {
    let conv = convolve(f, g);
    let one = SpaceParams {
        alpha: sp.alpha,
        p: Exponent::Finite(1.0),
    };
    norm(&conv, sp).value / (norm(f, sp).value * norm(g, one).value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sp(alpha: f64, p: f64) -> SpaceParams {
        SpaceParams::new(alpha, Exponent::new(p).unwrap()).unwrap()
    }

    fn arb_seq(max_len: usize) -> impl Strategy<Value = FiniteSequence> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..max_len)
            .prop_map(|v| FiniteSequence::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
    }

    #[test]
    fn unit_norms() {
        let e0 = FiniteSequence::unit(0);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert_eq!(norm(&e0, sp(0.0, p)).value, 1.0);
        }
        assert_eq!(norm(&e0, sp(1.0, f64::INFINITY)).value, 1.0);
        assert_eq!(pairing(&e0, &e0, 0.7), C64::new(1.0, 0.0));
        assert_eq!(d_alpha_inv(&e0, 0.7).get(0), C64::new(1.0, 0.0));
    }

    #[test]
    fn norm_matches_d_alpha() {
        let f = FiniteSequence::new((0..65).map(|n| C64::new((n as f64 * 0.7).sin(), 0.3)).collect());
        let s = sp(1.3, 2.0);
        let d = d_alpha(&f, 1.3);
        let direct: f64 = (0..65).map(|n| d.get(n).norm_sqr()).sum::<f64>().sqrt();
        assert!((norm(&f, s).value - direct).abs() <= 1e-13 * direct);
        let back = d_alpha_inv(&d, 1.3);
        for n in 0..65 {
            assert!((back.get(n) - f.get(n)).norm() < 1e-12);
        }
    }

    #[test]
    fn kernel_membership_rules() {
        let k = |b: f64| AnalyticSequence::kernel(C64::new(b, 0.0));
        assert!(membership(&k(0.4), sp(0.0, 2.0)).unwrap().member);
        assert!(!membership(&k(0.6), sp(0.0, 2.0)).unwrap().member);
        assert!(membership(&k(1.0), sp(0.0, f64::INFINITY)).unwrap().member);
        assert!(!membership(&k(1.01), sp(0.0, f64::INFINITY)).unwrap().member);
        assert!(membership(&k(0.0), sp(0.0, 1.0)).unwrap().member);
        assert!(!membership(&k(0.2), sp(0.0, 1.0)).unwrap().member);
        assert!(membership(&k(-3.0), sp(0.0, 1.0)).unwrap().member);
        let g = AnalyticSequence::geometric(C64::new(2.0, 0.0)).unwrap();
        let m = membership(&g, sp(1.0, 2.0)).unwrap();
        assert!(m.member && m.norm_bound.unwrap().is_finite());
    }

    #[test]
    fn printed_sup_bound_undershoots_at_lambda_two() {
        // Exact sup: W r_2(n) k^2(n) = (n+1) 2^{-(n+2)}, maximal 1/4 at n = 0, 1.
        // The printed sup-norm expression gives 1/8, so it is reported
        // but not treated as an upper bound.
        let g = AnalyticSequence::geometric(C64::new(2.0, 0.0)).unwrap();
        let t = empirical_membership(&g, sp(1.0, f64::INFINITY), &[8, 16, 32, 64]).unwrap();
        assert!((t.rows.last().unwrap().1 - 0.25).abs() < 1e-16);
        assert_eq!(t.trend, Trend::Saturated);
        let b = membership(&g, sp(1.0, f64::INFINITY)).unwrap().norm_bound.unwrap();
        assert!((b - 0.125).abs() < 1e-16);
    }

    #[test]
    fn geometric_partial_norms_converge() {
        let g = AnalyticSequence::geometric(C64::new(2.0, 1.0)).unwrap();
        let t = empirical_membership(&g, sp(1.5, 2.0), &[8, 16, 24, 32]).unwrap();
        assert_eq!(t.trend, Trend::Converging);
    }

    #[test]
    fn empirical_trends() {
        let grid: Vec<usize> = (8..15).map(|k| 1usize << k).collect();
        let k = |b: f64| AnalyticSequence::kernel(C64::new(b, 0.0));
        let t = empirical_membership(&k(0.6), sp(0.0, 2.0), &grid).unwrap();
        assert_eq!(t.trend, Trend::Diverging);
        let t = empirical_membership(&k(0.4), sp(0.0, 2.0), &grid).unwrap();
        assert_eq!(t.trend, Trend::Converging);
        let t = empirical_membership(&k(-1.0), sp(0.0, 2.0), &[1, 2, 4, 8]).unwrap();
        assert_eq!(t.trend, Trend::Saturated);
        assert_eq!(t.rows[0].1, t.rows[3].1);
    }

    #[test]
    fn convolution_ratio_examples() {
        let e0 = FiniteSequence::unit(0);
        assert!((convolution_module_check(&e0, &e0, sp(0.5, 2.0)) - 1.0).abs() < 1e-15);
        let f = FiniteSequence::new((0..65).map(|n| C64::new(1.0 / (n + 1) as f64, 0.0)).collect());
        let r1 = convolution_module_check(&f.resized(33), &f.resized(33), sp(0.5, 2.0));
        let r2 = convolution_module_check(&f, &f, sp(0.5, 2.0));
        assert!(r1.is_finite() && r2.is_finite() && r2 / r1 < 2.0 && r1 / r2 < 2.0);
        assert!((convolution_module_check(&f, &e0, sp(0.5, 2.0)) - 1.0).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn embedding_chain(f in arb_seq(40), alpha in 0.0f64..2.5) {
            let n = |p: f64| norm(&f, sp(alpha, p)).value;
            let (ninf, n3, n2, n1) = (n(f64::INFINITY), n(3.0), n(2.0), n(1.0));
            let slack = 1.0 + 1e-12;
            prop_assert!(ninf <= n3 * slack && n3 <= n2 * slack && n2 <= n1 * slack);
        }

        #[test]
        fn holder_bound(f in arb_seq(30), g in arb_seq(30), alpha in 0.0f64..2.0) {
            let s = sp(alpha, 3.0);
            let sc = SpaceParams { alpha, p: s.p.conjugate() };
            let lhs = pairing(&f, &g, alpha).norm();
            prop_assert!(lhs <= norm(&f, s).value * norm(&g, sc).value * (1.0 + 1e-12));
        }

        #[test]
        fn pairing_bilinear(f in arb_seq(20), h in arb_seq(20), g in arb_seq(20), alpha in 0.0f64..2.0) {
            let two = C64::new(2.0, 0.0);
            let lhs = pairing(&f.scale(two).add(&h), &g, alpha);
            let rhs = pairing(&f, &g, alpha) * two + pairing(&h, &g, alpha);
            let scale = norm(&f, sp(alpha, 2.0)).value * norm(&g, sp(alpha, 2.0)).value
                + norm(&h, sp(alpha, 2.0)).value * norm(&g, sp(alpha, 2.0)).value;
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale.max(1e-300) * 4.0);
        }

        #[test]
        fn isometry_round_trip(f in arb_seq(64), alpha in 0.0f64..2.5) {
            let back = d_alpha_inv(&d_alpha(&f, alpha), alpha);
            let sup = f.sup_norm();
            for n in 0..f.len() {
                prop_assert!((back.get(n) - f.get(n)).norm() <= 1e-11 * sup.max(1e-300));
            }
        }
    }
}
