//! Spectral symbol g(z) = Γ(β+1)Γ(z+a)/Γ(β+z+a) of the Cesàro operators,
//! border curves t ↦ g(it), axis crossings and the envelope scan.

use serde::Serialize;

use crate::cesaro::Side;
use crate::error::{Error, Result};
use crate::gamma::{ln_gamma, ln_gamma_ratio};
use crate::numerics::{Exponent, C64, ONE};

/// Shift a = 1 − 1/p for C_β (p ∈ (1,∞]) or a = 1/p for C_β* (p ∈ [1,∞)).
pub fn symbol_shift(p: Exponent, side: Side) -> Result<f64> {
    match (side, p) {
        (Side::Primal, Exponent::Finite(q)) if q <= 1.0 => {
            Err(Error::Domain("primal symbol needs p in (1, inf]".into()))
        }
        (Side::Dual, Exponent::Infinite) => Err(Error::Domain("dual symbol needs p in [1, inf)".into())),
        (Side::Primal, _) => Ok(1.0 - p.recip()),
        (Side::Dual, _) => Ok(p.recip()),
    }
}

/// g(z) for the given shift a.
///
/// The Gamma quotient is paired so the large arguments meet in a single
/// ratio: for |β| ≤ |z+a−1|, g = Γ(β+1)·Γ(z+a)/Γ(z+a+β); otherwise
/// g = Γ(z+a)·Γ(β+1)/Γ(β+z+a), whose arguments differ by z+a−1.
pub fn symbol_with_shift(beta: C64, a: f64, z: C64) -> Result<C64> {
    let za = z + a;
    let log = if beta.norm() <= (za - 1.0).norm() {
        ln_gamma(beta + 1.0)? - ln_gamma_ratio(za + beta, za)?
    } else {
        ln_gamma(za)? - ln_gamma_ratio(beta + za, beta + 1.0)?
    };
    Ok(log.exp())
}

pub fn symbol(beta: C64, p: Exponent, side: Side, z: C64) -> Result<C64> {
    if !(beta.re > 0.0) {
        return Err(Error::Domain(format!("symbol needs Re beta > 0 (got {beta})")));
    }
    symbol_with_shift(beta, symbol_shift(p, side)?, z)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceOptions {
    /// Largest allowed turn between consecutive chords, radians.
    pub angle_tol: f64,
    /// Largest chord as a fraction of max|w|.
    pub chord_tol: f64,
    /// Tails are cut once |w| drops below this.
    pub cutoff: f64,
    /// Fixed half-range in t; grown automatically when None.
    pub t_max: Option<f64>,
    pub max_samples: usize,
    /// Initial samples on each side of t = 0.
    pub initial: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            angle_tol: 0.05,
            chord_tol: 0.01,
            cutoff: 1e-4,
            t_max: None,
            max_samples: 1_000_000,
            initial: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralCurve {
    pub side: Side,
    pub p: Exponent,
    pub beta: C64,
    pub shift: f64,
    pub t_max: f64,
    /// (t, g(it)) ordered by t.
    pub samples: Vec<(f64, C64)>,
    /// Largest turn angle left between consecutive chords.
    pub refinement: f64,
}

const S_LIMIT: f64 = 60.0;
const MIN_STEP: f64 = 1e-10;

/// Samples t ↦ g(it) on [−t_max, t_max] using t = sinh(s), refining every
/// interval whose neighbouring chords turn by more than `angle_tol` or
/// whose chord exceeds `chord_tol`·max|w|.
pub fn trace_border(beta: C64, p: Exponent, side: Side, opts: TraceOptions) -> Result<SpectralCurve> {
    let a = symbol_shift(p, side)?;
    if !(beta.re > 0.0) {
        return Err(Error::Domain(format!("symbol needs Re beta > 0 (got {beta})")));
    }
    let w = |s: f64| symbol_with_shift(beta, a, C64::new(0.0, s.sinh()));
    let s_max = match opts.t_max {
        Some(t) => t.asinh(),
        None => {
            let mut s = 2.0_f64;
            loop {
                let small = |s: f64| -> Result<bool> { Ok(w(s)?.norm() < opts.cutoff && w(-s)?.norm() < opts.cutoff) };
                if small(s)? && small(s + 0.5)? {
                    break s + 0.5;
                }
                s += 0.5;
                if s > S_LIMIT {
                    return Err(Error::BudgetExceeded(opts.max_samples));
                }
            }
        }
    };
    let k = opts.initial.max(2);
    let mut pts: Vec<(f64, C64)> = Vec::with_capacity(4 * k + 1);
    for i in 0..=2 * k {
        let s = s_max * (i as f64 - k as f64) / k as f64;
        pts.push((s, w(s)?));
    }
    loop {
        let scale = pts.iter().fold(0.0_f64, |m, (_, v)| m.max(v.norm()));
        let n = pts.len();
        let mut split = vec![false; n - 1];
        for i in 0..n - 1 {
            let (s0, w0) = pts[i];
            let (s1, w1) = pts[i + 1];
            if s1 - s0 < MIN_STEP || w0.norm().max(w1.norm()) < opts.cutoff {
                continue;
            }
            if (w1 - w0).norm() > opts.chord_tol * scale {
                split[i] = true;
            }
            if i + 2 < n {
                let turn = turn_angle(w0, w1, pts[i + 2].1);
                if turn > opts.angle_tol && pts[i + 2].0 - s1 >= MIN_STEP {
                    split[i] = true;
                    split[i + 1] = true;
                }
            }
        }
        let extra = split.iter().filter(|&&b| b).count();
        if extra == 0 {
            break;
        }
        if n + extra > opts.max_samples {
            return Err(Error::BudgetExceeded(opts.max_samples));
        }
        let mut next = Vec::with_capacity(n + extra);
        for i in 0..n - 1 {
            next.push(pts[i]);
            if split[i] {
                let s = 0.5 * (pts[i].0 + pts[i + 1].0);
                next.push((s, w(s)?));
            }
        }
        next.push(pts[n - 1]);
        pts = next;
    }
    let refinement = (1..pts.len() - 1)
        .filter(|&i| {
            pts[i - 1].1.norm().max(pts[i].1.norm()) >= opts.cutoff
                && pts[i].0 - pts[i - 1].0 >= MIN_STEP
                && pts[i + 1].0 - pts[i].0 >= MIN_STEP
        })
        .map(|i| turn_angle(pts[i - 1].1, pts[i].1, pts[i + 1].1))
        .fold(0.0, f64::max);
    Ok(SpectralCurve {
        side,
        p,
        beta,
        shift: a,
        t_max: s_max.sinh(),
        samples: pts.into_iter().map(|(s, v)| (s.sinh(), v)).collect(),
        refinement,
    })
}

fn turn_angle(w0: C64, w1: C64, w2: C64) -> f64 {
    let d0 = w1 - w0;
    let d1 = w2 - w1;
    if d0.norm() == 0.0 || d1.norm() == 0.0 {
        return 0.0;
    }
    (d1 / d0).arg().abs()
}

/// max over samples of ||w − c| − r| for the circle |w − c| = r.
pub fn circle_residual(curve: &SpectralCurve, center: C64, radius: f64) -> f64 {
    curve
        .samples
        .iter()
        .map(|(_, w)| ((w - center).norm() - radius).abs())
        .fold(0.0, f64::max)
}

/// max over samples of |g_{conj β}(−it) − conj(g_β(it))|.
pub fn mirror_deviation(curve: &SpectralCurve) -> Result<f64> {
    let bc = curve.beta.conj();
    let mut worst = 0.0_f64;
    for &(t, w) in &curve.samples {
        let m = symbol_with_shift(bc, curve.shift, C64::new(0.0, -t))?;
        worst = worst.max((m - w.conj()).norm());
    }
    Ok(worst)
}

/// Rectangle [0, re_max] × [−im_max, im_max] in the closed right half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionGrid {
    pub re_max: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
}

/// Images g(z) over the grid points.
pub fn sample_region(beta: C64, p: Exponent, side: Side, grid: RegionGrid) -> Result<Vec<(C64, C64)>> {
    let a = symbol_shift(p, side)?;
    let mut out = Vec::with_capacity((grid.n_re + 1) * (grid.n_im + 1));
    for i in 0..=grid.n_re {
        let x = grid.re_max * i as f64 / grid.n_re.max(1) as f64;
        for j in 0..=grid.n_im {
            let y = -grid.im_max + 2.0 * grid.im_max * j as f64 / grid.n_im.max(1) as f64;
            let z = C64::new(x, y);
            out.push((z, symbol_with_shift(beta, a, z)?));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Crossing {
    pub t: f64,
    pub w: C64,
    /// |Im w| for real-axis crossings, |Re w| for imaginary-axis ones.
    pub residual: f64,
    /// Bracketing interval in t.
    pub bracket: (f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingReport {
    pub real_axis: Vec<Crossing>,
    pub imag_axis: Vec<Crossing>,
}

#[derive(Clone, Copy)]
enum Axis {
    Real,
    Imag,
}

impl Axis {
    // coordinate whose sign change marks a crossing of this axis
    fn coord(self, w: C64) -> f64 {
        match self {
            Axis::Real => w.im,
            Axis::Imag => w.re,
        }
    }
}

/// Sign changes of Im w (real axis) and Re w (imaginary axis) between
/// consecutive samples, refined by bisection in t.
pub fn find_axis_crossings(curve: &SpectralCurve) -> Result<CrossingReport> {
    Ok(CrossingReport {
        real_axis: crossings_on(curve, Axis::Real)?,
        imag_axis: crossings_on(curve, Axis::Imag)?,
    })
}

fn crossings_on(curve: &SpectralCurve, axis: Axis) -> Result<Vec<Crossing>> {
    let eval = |t: f64| symbol_with_shift(curve.beta, curve.shift, C64::new(0.0, t));
    let pts = &curve.samples;
    let mut out = Vec::new();
    let mut prev: Option<usize> = None;
    for j in 0..pts.len() {
        let c = axis.coord(pts[j].1);
        if c == 0.0 {
            continue;
        }
        if let Some(i) = prev {
            let ci = axis.coord(pts[i].1);
            if ci.signum() != c.signum() {
                if j == i + 1 {
                    out.push(bisect(&eval, axis, pts[i], pts[j])?);
                } else {
                    // exact zeros strictly between: report the middle one
                    let mid = (i + j) / 2;
                    let (t, w) = pts[mid];
                    out.push(Crossing {
                        t,
                        w,
                        residual: axis.coord(w).abs(),
                        bracket: (pts[i].0, pts[j].0),
                    });
                }
            }
        }
        prev = Some(j);
    }
    Ok(out)
}

fn bisect<F: Fn(f64) -> Result<C64>>(eval: &F, axis: Axis, lo: (f64, C64), hi: (f64, C64)) -> Result<Crossing> {
    let bracket = (lo.0, hi.0);
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        if b.0 - a.0 <= 1e-12 * a.0.abs().max(b.0.abs()).max(1.0) {
            break;
        }
        let m = 0.5 * (a.0 + b.0);
        if m <= a.0 || m >= b.0 {
            break;
        }
        let wm = eval(m)?;
        let cm = axis.coord(wm);
        if cm == 0.0 {
            a = (m, wm);
            b = (m, wm);
            break;
        }
        if cm.signum() == axis.coord(a.1).signum() {
            a = (m, wm);
        } else {
            b = (m, wm);
        }
    }
    let best = if axis.coord(a.1).abs() <= axis.coord(b.1).abs() {
        a
    } else {
        b
    };
    Ok(Crossing {
        t: best.0,
        w: best.1,
        residual: axis.coord(best.1).abs(),
        bracket,
    })
}

/// Crossings recomputed with angle_tol halved until the counts agree for
/// two successive refinements (at most `rounds` halvings).
pub fn stable_crossings(
    beta: C64,
    p: Exponent,
    side: Side,
    opts: TraceOptions,
    rounds: usize,
) -> Result<(SpectralCurve, CrossingReport)> {
    let mut o = opts;
    let mut curve = trace_border(beta, p, side, o)?;
    let mut report = find_axis_crossings(&curve)?;
    for _ in 0..rounds {
        o.angle_tol *= 0.5;
        o.chord_tol *= 0.5;
        let c2 = trace_border(beta, p, side, o)?;
        let r2 = find_axis_crossings(&c2)?;
        let same = r2.real_axis.len() == report.real_axis.len() && r2.imag_axis.len() == report.imag_axis.len();
        curve = c2;
        report = r2;
        if same {
            break;
        }
    }
    Ok((curve, report))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub beta: f64,
    pub max_abs: f64,
    pub argmax_t: f64,
    pub at_zero: C64,
}

/// max_t |g(it)| for C_β on τ_∞ (a = 1) over each β.
pub fn envelope_scan(betas: &[f64], opts: TraceOptions) -> Result<Vec<EnvelopeRow>> {
    betas
        .iter()
        .map(|&b| {
            let beta = C64::new(b, 0.0);
            let curve = trace_border(beta, Exponent::Infinite, Side::Primal, opts)?;
            let (argmax_t, max_abs) = curve
                .samples
                .iter()
                .map(|&(t, w)| (t, w.norm()))
                .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            Ok(EnvelopeRow {
                beta: b,
                max_abs,
                argmax_t,
                at_zero: symbol_with_shift(beta, 1.0, C64::new(0.0, 0.0))?,
            })
        })
        .collect()
}

/// Parameters of a border curve family drawn in one figure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FigureSpec {
    pub name: &'static str,
    pub p: Exponent,
    pub betas: Vec<C64>,
}

/// The seven figure datasets (all primal border curves).
pub fn figure_specs() -> Vec<FigureSpec> {
    let re = |v: &[f64]| v.iter().map(|&b| C64::new(b, 0.0)).collect::<Vec<_>>();
    let cx = |v: &[(f64, f64)]| v.iter().map(|&(a, b)| C64::new(a, b)).collect::<Vec<_>>();
    vec![
        FigureSpec {
            name: "fig1",
            p: Exponent::Finite(2.0),
            betas: re(&[0.5, 1.0, 2.0, 3.0, 5.0]),
        },
        FigureSpec {
            name: "fig2",
            p: Exponent::Finite(1.5),
            betas: re(&[100.0, 200.0]),
        },
        FigureSpec {
            name: "fig3",
            p: Exponent::Infinite,
            betas: re(&[1.0, 10.0, 100.0, 1000.0, 10000.0]),
        },
        FigureSpec {
            name: "fig4",
            p: Exponent::Finite(2.0),
            betas: cx(&[(1.0, 1.0), (1.0, -1.0)]),
        },
        FigureSpec {
            name: "fig5",
            p: Exponent::Finite(1.5),
            betas: cx(&[(100.0, 0.0), (100.0, 1.0), (100.0, 20.0), (100.0, 100.0)]),
        },
        FigureSpec {
            name: "fig6",
            p: Exponent::Finite(2.0),
            betas: cx(&[(1.0, 10.0)]),
        },
        FigureSpec {
            name: "fig7",
            p: Exponent::Infinite,
            betas: cx(&[
                (100.0, 100.0),
                (200.0, 200.0),
                (300.0, 300.0),
                (100.0, 200.0),
                (100.0, 300.0),
            ]),
        },
    ]
}

/// g(0) = Γ(β+1)Γ(a)/Γ(β+a).
pub fn symbol_at_zero(beta: C64, p: Exponent, side: Side) -> Result<C64> {
    symbol(beta, p, side, C64::new(0.0, 0.0))
}

/// Unit used by callers that need the β = 1 circle: center and radius 1/(2a).
pub fn unit_order_circle(p: Exponent, side: Side) -> Result<(C64, f64)> {
    let a = symbol_shift(p, side)?;
    Ok((ONE / (2.0 * a), 1.0 / (2.0 * a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn symbol_examples() {
        for p in [1.5, 2.0, 4.0] {
            let p = Exponent::Finite(p);
            for z in [c(0.0, 0.0), c(0.3, 2.0), c(5.0, -40.0)] {
                let a = 1.0 - p.recip();
                let g = symbol(c(1.0, 0.0), p, Side::Primal, z).unwrap();
                assert!((g - ONE / (z + a)).norm() < 1e-14 * g.norm().max(1.0));
            }
        }
        let g0 = symbol_at_zero(c(1.0, 0.0), Exponent::Finite(2.0), Side::Dual).unwrap();
        assert!((g0 - 2.0).norm() < 1e-14);
        let beta = c(2.5, 0.0);
        let g0 = symbol_at_zero(beta, Exponent::Finite(3.0), Side::Dual).unwrap();
        let direct = gamma(beta + 1.0).unwrap() * gamma(c(1.0 / 3.0, 0.0)).unwrap() / gamma(beta + 1.0 / 3.0).unwrap();
        assert!((g0 - direct).norm() < 1e-13 * direct.norm());
        assert!(symbol(c(0.0, 1.0), Exponent::Finite(2.0), Side::Primal, ONE).is_err());
        assert!(symbol(ONE, Exponent::Finite(1.0), Side::Primal, ONE).is_err());
    }

    #[test]
    fn symbol_matches_direct_gamma() {
        for beta in [c(0.5, 0.0), c(3.0, 1.0), c(12.0, -4.0)] {
            for z in [c(0.0, 0.7), c(1.0, -3.0), c(0.0, 30.0)] {
                let a = 0.5;
                let g = symbol_with_shift(beta, a, z).unwrap();
                let d = gamma(beta + 1.0).unwrap() * gamma(z + a).unwrap() / gamma(beta + z + a).unwrap();
                assert!((g - d).norm() < 1e-12 * d.norm(), "{beta} {z}");
            }
        }
    }

    #[test]
    fn circle_for_unit_order() {
        for (side, ps) in [
            (Side::Dual, vec![1.0, 1.5, 2.0, 4.0]),
            (Side::Primal, vec![1.5, 2.0, 4.0, f64::INFINITY]),
        ] {
            for p in ps {
                let p = Exponent::new(p).unwrap();
                let curve = trace_border(ONE, p, side, TraceOptions::default()).unwrap();
                let (center, r) = unit_order_circle(p, side).unwrap();
                assert!(circle_residual(&curve, center, r) <= 1e-10);
                let last = curve.samples.last().unwrap().1.norm();
                assert!(last < 1e-4 && curve.samples[0].1.norm() < 1e-4);
                assert!(curve.refinement <= TraceOptions::default().angle_tol);
            }
        }
    }

    #[test]
    fn unit_order_crossings() {
        let curve = trace_border(ONE, Exponent::Finite(2.0), Side::Dual, TraceOptions::default()).unwrap();
        let r = find_axis_crossings(&curve).unwrap();
        assert_eq!(r.real_axis.len(), 1);
        assert!(r.real_axis[0].t.abs() < 1e-12);
        assert!((r.real_axis[0].w - 2.0).norm() < 1e-12);
        assert!(r.imag_axis.is_empty());
    }

    #[test]
    fn figure_properties() {
        let two = Exponent::Finite(2.0);
        let o = TraceOptions::default();
        let (_, r5) = stable_crossings(c(5.0, 0.0), two, Side::Primal, o, 3).unwrap();
        assert!(r5.imag_axis.len() >= 2);
        assert!(r5.imag_axis.iter().all(|x| x.residual <= 1e-10));
        let half = trace_border(c(0.5, 0.0), two, Side::Primal, o).unwrap();
        assert!(find_axis_crossings(&half).unwrap().imag_axis.is_empty());
        assert!(circle_residual(&half, ONE, 0.0) <= 1.0 + 1e-6);
        let rows = envelope_scan(&[1.0, 10.0, 100.0], o).unwrap();
        for row in rows {
            assert!(row.max_abs <= 1.0 + 1e-9);
            assert!((row.at_zero - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn mirror_symmetry() {
        for beta in [c(1.0, 1.0), c(2.0, 0.0), c(100.0, 20.0)] {
            let curve = trace_border(beta, Exponent::Finite(1.5), Side::Primal, TraceOptions::default()).unwrap();
            assert!(mirror_deviation(&curve).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn resampling_is_stable() {
        let o = TraceOptions::default();
        let a =
            find_axis_crossings(&trace_border(c(5.0, 0.0), Exponent::Finite(2.0), Side::Primal, o).unwrap()).unwrap();
        let half = TraceOptions {
            angle_tol: o.angle_tol / 2.0,
            ..o
        };
        let b = find_axis_crossings(&trace_border(c(5.0, 0.0), Exponent::Finite(2.0), Side::Primal, half).unwrap())
            .unwrap();
        assert_eq!(a.imag_axis.len(), b.imag_axis.len());
        assert_eq!(a.real_axis.len(), b.real_axis.len());
        for (x, y) in a
            .imag_axis
            .iter()
            .zip(&b.imag_axis)
            .chain(a.real_axis.iter().zip(&b.real_axis))
        {
            assert!((x.t - y.t).abs() <= 1e-10 * x.t.abs().max(1.0));
        }
    }

    #[test]
    fn region_samples() {
        let grid = RegionGrid {
            re_max: 20.0,
            im_max: 20.0,
            n_re: 20,
            n_im: 40,
        };
        let pts = sample_region(ONE, Exponent::Finite(2.0), Side::Dual, grid).unwrap();
        assert!(pts.iter().all(|(_, w)| (w - 1.0).norm() <= 1.0 + 1e-10));
        for (z, w) in &pts {
            if z.im == 0.0 {
                assert_eq!(w.im, 0.0);
            }
        }
        let far = symbol(c(2.0, 0.0), Exponent::Finite(2.0), Side::Primal, c(1e6, 0.0)).unwrap();
        assert!(far.norm() < 1e-10);
    }
}
