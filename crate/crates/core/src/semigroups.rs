//! Binomial semigroups T(t), S(t), their weighted versions T_p, S_p, the
//! generators A and B, Z-transform functional equations and the
//! intertwining relations with W^α.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{kernel_values, kernel_values_real};
use crate::numerics::{compensated_sum, one_minus_exp_neg, one_minus_exp_neg_real, Exponent, C64, ONE, ZERO};
use crate::report::VerificationReport;
use crate::sequence::{FiniteSequence, Tail, TruncatedSequence};
use crate::weyl::{vector_report, weyl};

/// Initial guard band for truncated T(t) outputs.
pub const GUARD_BAND: usize = 64;
const MAX_TRUNCATION: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SemigroupKind {
    T,
    S,
}

/// Time t ≥ 0 and an optional weight exponent p (None: unweighted).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemigroupParams {
    pub kind: SemigroupKind,
    pub t: f64,
    pub p: Option<Exponent>,
}

impl SemigroupParams {
    pub fn new(kind: SemigroupKind, t: f64, p: Option<Exponent>) -> Result<Self> {
        check_time(t)?;
        Ok(Self { kind, t, p })
    }

    /// Scalar weight e^{−t/p} for T_p, e^{−t(1−1/p)} for S_p.
    pub fn weight(&self) -> f64 {
        match (self.kind, self.p) {
            (_, None) => 1.0,
            (SemigroupKind::T, Some(p)) => (-self.t * p.recip()).exp(),
            (SemigroupKind::S, Some(p)) => (-self.t * (1.0 - p.recip())).exp(),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Domain(format!("time must be finite and >= 0 (got {t})")));
    }
    Ok(())
}

/// Row n of the weights w(n,j) = C(n,j) e^{−tj} (1−e^{−t})^{n−j}, kept
/// for j ≤ width−1 and advanced by w(n+1,j) = x w(n,j) + e w(n,j−1).
struct BinomialRow {
    w: Vec<f64>,
    e: f64,
    x: f64,
}

impl BinomialRow {
    fn new(t: f64, width: usize) -> Self {
        let mut w = vec![0.0; width.max(1)];
        w[0] = 1.0;
        Self {
            w,
            e: (-t).exp(),
            x: one_minus_exp_neg_real(t),
        }
    }

    fn advance(&mut self) {
        for j in (1..self.w.len()).rev() {
            self.w[j] = self.x * self.w[j] + self.e * self.w[j - 1];
        }
        self.w[0] *= self.x;
    }
}

/// T(t)f on 0..=N with N = max(n_out, last index of f), plus a geometric
/// envelope for n > N.
///
/// For n > N ≥ M the ratio w(n+1,j)/w(n,j) = x(n+1)/(n+1−j) is at most
/// x(N+2)/(N+2−M), which bounds every later term.
pub fn apply_t(f: &FiniteSequence, t: f64, n_out: usize) -> Result<TruncatedSequence> {
    check_time(t)?;
    let vals = f.values();
    let m = f.support_end().unwrap_or(0);
    let big_n = n_out.max(m);
    let mut row = BinomialRow::new(t, m + 1);
    let mut out = Vec::with_capacity(big_n + 1);
    for n in 0..=big_n {
        let top = n.min(m);
        out.push(compensated_sum((0..=top).map(|j| vals[j] * row.w[j])));
        row.advance();
    }
    let x = row.x;
    let tail = if x == 0.0 || f.support_end().is_none() {
        Tail::Finite
    } else {
        let first: f64 = (0..=m).map(|j| vals[j].norm() * row.w[j]).sum();
        let ratio = x * (big_n + 2) as f64 / (big_n + 2 - m) as f64;
        Tail::Geometric { first, ratio }
    };
    Ok(TruncatedSequence { values: out, tail })
}

/// S(t)f(n) = Σ_{j≥n} C(j,n) e^{−tn}(1−e^{−t})^{j−n} f(j); exact, same support.
pub fn apply_s(f: &FiniteSequence, t: f64) -> Result<FiniteSequence> {
    check_time(t)?;
    let len = f.len();
    let mut row = BinomialRow::new(t, len);
    let mut acc = vec![crate::numerics::ComplexSum::new(); len];
    for j in 0..len {
        let fj = f.get(j);
        if fj != ZERO {
            for (n, a) in acc.iter_mut().enumerate().take(j + 1) {
                a.add(fj * row.w[n]);
            }
        }
        row.advance();
    }
    Ok(FiniteSequence::new(acc.iter().map(|a| a.value()).collect()))
}

/// T_p(t)f or S_p(t)f (unweighted when `params.p` is None). S outputs carry
/// a finite tail.
pub fn apply_weighted(f: &FiniteSequence, params: SemigroupParams, n_out: usize) -> Result<TruncatedSequence> {
    let c = params.weight();
    let mut out = match params.kind {
        SemigroupKind::T => apply_t(f, params.t, n_out)?,
        SemigroupKind::S => TruncatedSequence::finite(apply_s(f, params.t)?.into_values()),
    };
    for v in out.values.iter_mut() {
        *v *= c;
    }
    if let Tail::Geometric { first, ratio } = out.tail {
        out.tail = Tail::Geometric {
            first: first * c,
            ratio,
        };
    }
    Ok(out)
}

/// Af(n) = −n(f(n) − f(n−1)) − f(n)/p on 0..=N+1.
pub fn generator_a(f: &FiniteSequence, p: Exponent) -> FiniteSequence {
    let q = p.recip();
    let len = f.len() + 1;
    FiniteSequence::new(
        (0..len)
            .map(|n| {
                let prev = if n == 0 { ZERO } else { f.get(n - 1) };
                -(f.get(n) - prev) * n as f64 - f.get(n) * q
            })
            .collect(),
    )
}

/// Bf(n) = (n+1)(f(n+1) − f(n)) + f(n)/p on 0..=N.
pub fn generator_b(f: &FiniteSequence, p: Exponent) -> FiniteSequence {
    let q = p.recip();
    FiniteSequence::new(
        (0..f.len())
            .map(|n| (f.get(n + 1) - f.get(n)) * (n + 1) as f64 + f.get(n) * q)
            .collect(),
    )
}

/// B k^μ against λ k^μ with μ = λ + 1 − 1/p, on 0..=n_max (the kernel is
/// stored one index further so every compared entry is exact).
pub fn b_eigen_check(lambda: C64, p: Exponent, n_max: usize) -> VerificationReport {
    let mu = lambda + 1.0 - p.recip();
    let k = FiniteSequence::new(kernel_values(mu, n_max + 2));
    let b = generator_b(&k, p);
    let mut worst = 0.0_f64;
    let mut at = 0;
    for n in 0..=n_max {
        let rhs = lambda * k.get(n);
        let e = (b.get(n) - rhs).norm() / rhs.norm().max(1e-300);
        if e > worst {
            worst = e;
            at = n;
        }
    }
    let rhs = lambda * k.get(at);
    let mut r = VerificationReport::new("b-eigen", b.get(at), rhs)
        .param("lambda", lambda)
        .param("p", p.as_f64())
        .param("worst_index", at)
        .terms(n_max + 1);
    r.rel_err = worst;
    r
}

/// ‖(T_p(h)f − f)/h − Af‖∞ over 0..=N+1.
pub fn generator_limit_error(f: &FiniteSequence, p: Exponent, h: f64) -> Result<f64> {
    let params = SemigroupParams::new(SemigroupKind::T, h, Some(p))?;
    let th = apply_weighted(f, params, f.len())?;
    let a = generator_a(f, p);
    Ok((0..a.len())
        .map(|n| ((th.get(n) - f.get(n)) / h - a.get(n)).norm())
        .fold(0.0, f64::max))
}

/// Z-transform value with its certified tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZValue {
    pub value: C64,
    pub tail_bound: f64,
    pub terms: usize,
}

/// Σ f(n) z^n for a finitely supported f.
pub fn z_transform_finite(f: &FiniteSequence, z: C64) -> C64 {
    let mut pw = ONE;
    compensated_sum(f.values().iter().map(|&v| {
        let term = v * pw;
        pw *= z;
        term
    }))
}

/// Σ f(n) z^n with the omitted tail bounded through the declared decay.
pub fn z_transform(f: &TruncatedSequence, z: C64, tol: f64) -> Result<ZValue> {
    let tail = f.weighted_tail(z.norm());
    if !tail.is_finite() {
        return Err(Error::Divergence(format!(
            "decay class cannot certify convergence at |z| = {}",
            z.norm()
        )));
    }
    if tail > tol {
        return Err(Error::NonConvergence(format!(
            "tail bound {tail:e} exceeds tolerance {tol:e}; extend the truncation"
        )));
    }
    Ok(ZValue {
        value: z_transform_finite(&f.to_finite(), z),
        tail_bound: tail,
        terms: f.values.len(),
    })
}

/// Truncation of T(t)f long enough that the Z-transform tail at |z| is ≤ tol.
fn t_for_z(f: &FiniteSequence, t: f64, z: C64, tol: f64) -> Result<(TruncatedSequence, ZValue)> {
    let mut n = 512;
    loop {
        let tf = apply_t(f, t, n)?;
        match z_transform(&tf, z, tol) {
            Ok(v) => return Ok((tf, v)),
            Err(e) if n >= MAX_TRUNCATION => return Err(e),
            Err(_) => n *= 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZFunctionalReport {
    /// z̃(S(t)f)(z) against f̃(φ_t(z)).
    pub s_identity: VerificationReport,
    /// z̃(T(t)f)(z) against (1 − z(1−e^{−t}))^{−1} f̃(ψ_t(z)).
    pub t_proof_form: VerificationReport,
    /// z̃(T(t)f)(z) against f̃(ψ_t(z)) without the prefactor; reported only.
    pub t_statement_form: VerificationReport,
}

/// ψ_t(z) = e^{−t}z/(1 − z(1−e^{−t})), φ_t(z) = e^{−t}(z−1) + 1.
pub fn z_functional_equations(f: &FiniteSequence, t: f64, z: C64, tol: f64) -> Result<ZFunctionalReport> {
    if z.norm() >= 1.0 {
        return Err(Error::Divergence(format!("need |z| < 1 (got {})", z.norm())));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("need t > 0 (got {t})")));
    }
    let e = (-t).exp();
    let x = one_minus_exp_neg(C64::new(t, 0.0));
    let phi = (z - 1.0) * e + 1.0;
    let denom = ONE - z * x;
    let psi = z * e / denom;

    let sf = apply_s(f, t)?;
    let s_lhs = z_transform_finite(&sf, z);
    let s_rhs = z_transform_finite(f, phi);
    let (_, tz) = t_for_z(f, t, z, tol)?;
    let f_psi = z_transform_finite(f, psi);
    let tag = |r: VerificationReport| r.param("t", t).param("z", z);
    Ok(ZFunctionalReport {
        s_identity: tag(VerificationReport::new("z-transform-S", s_lhs, s_rhs).terms(sf.len())),
        t_proof_form: tag(VerificationReport::new("z-transform-T-proof", tz.value, f_psi / denom)
            .terms(tz.terms)
            .tail(tz.tail_bound)),
        t_statement_form: tag(VerificationReport::new("z-transform-T-statement", tz.value, f_psi)
            .terms(tz.terms)
            .tail(tz.tail_bound)),
    })
}

/// max_m |k^{−α}(m)|; attained at m ≤ ⌈α⌉+1 since |k^{−α}(m)/k^{−α}(m−1)| =
/// |m−1−α|/m < 1 once 2m > α+1.
fn kernel_sup(alpha: f64) -> f64 {
    let len = alpha.ceil() as usize + 2;
    kernel_values_real(-alpha, len).iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// W^α T(t)f against e^{−tα} T(t) W^αf on 0..=n_out. The left side uses a
/// truncation of T(t)f whose certified omitted contribution is below
/// tol·scale; the guard band starts at 64 and doubles.
pub fn intertwine_t(f: &FiniteSequence, alpha: f64, t: f64, n_out: usize, tol: f64) -> Result<VerificationReport> {
    check_time(t)?;
    let wf = weyl(f, alpha);
    let rhs_t = apply_t(&wf, t, n_out)?;
    let c = (-t * alpha).exp();
    let rhs: Vec<C64> = (0..=n_out).map(|n| rhs_t.get(n) * c).collect();
    let scale = rhs.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
    let ksup = kernel_sup(alpha);
    let mut guard = GUARD_BAND;
    let (tf, tail) = loop {
        let tf = apply_t(f, t, n_out + guard)?;
        let tail = ksup * tf.tail_bound();
        if tail <= tol * scale || tail == 0.0 {
            break (tf, tail);
        }
        if n_out + guard >= MAX_TRUNCATION {
            return Err(Error::NonConvergence(format!(
                "tail {tail:e} above {:e} at truncation {}",
                tol * scale,
                n_out + guard
            )));
        }
        guard *= 2;
    };
    let len = tf.values.len();
    let k = kernel_values_real(-alpha, len);
    let lhs: Vec<C64> = (0..=n_out)
        .map(|n| compensated_sum((n..len).map(|j| tf.values[j] * k[j - n])))
        .collect();
    Ok(vector_report("intertwine-T", &lhs, &rhs)
        .tail(tail)
        .param("alpha", alpha)
        .param("t", t)
        .param("guard", guard))
}

/// Both forms of the S intertwining, exact finite sums:
/// k^{α+1}W^α(S(t)f) = S(t)(k^{α+1}W^αf), and
/// W^αS(t)f(n) = e^{−tn} Σ_{j≥n} C(j+α, n+α)(1−e^{−t})^{j−n} W^αf(j).
pub fn intertwine_s(f: &FiniteSequence, alpha: f64, t: f64) -> Result<(VerificationReport, VerificationReport)> {
    check_time(t)?;
    let len = f.len();
    let k = kernel_values_real(alpha + 1.0, len);
    let wf = weyl(f, alpha);
    let wsf = weyl(&apply_s(f, t)?, alpha);
    let lhs: Vec<C64> = (0..len).map(|n| wsf.get(n) * k[n]).collect();
    let rhs = apply_s(&wf.weighted(|n| C64::new(k[n], 0.0)), t)?;
    let commute = vector_report("intertwine-S", &lhs, rhs.values())
        .param("alpha", alpha)
        .param("t", t);

    let x = one_minus_exp_neg_real(t);
    let binom: Vec<C64> = (0..len)
        .map(|n| {
            let mut c = 1.0;
            let mut pw = 1.0;
            let mut acc = crate::numerics::ComplexSum::new();
            for j in n..len {
                acc.add(wf.get(j) * (c * pw));
                c *= (j as f64 + 1.0 + alpha) / (j + 1 - n) as f64;
                pw *= x;
            }
            acc.value() * (-t * n as f64).exp()
        })
        .collect();
    let binomial = vector_report("intertwine-S-binomial", wsf.values(), &binom)
        .param("alpha", alpha)
        .param("t", t);
    Ok((commute, binomial))
}

/// ⟨T_p(t)f, g⟩₀ against ⟨f, S_{p'}(t)g⟩₀ (bilinear, finite sums since g
/// is finitely supported).
pub fn duality_check(f: &FiniteSequence, g: &FiniteSequence, t: f64, p: Exponent) -> Result<VerificationReport> {
    let tp = apply_weighted(f, SemigroupParams::new(SemigroupKind::T, t, Some(p))?, g.len())?;
    let sp = apply_weighted(g, SemigroupParams::new(SemigroupKind::S, t, Some(p.conjugate()))?, 0)?;
    let lhs = compensated_sum((0..g.len()).map(|n| tp.get(n) * g.get(n)));
    let rhs = compensated_sum((0..f.len()).map(|n| f.get(n) * sp.get(n)));
    let mag: f64 = (0..g.len()).map(|n| (tp.get(n) * g.get(n)).norm()).sum();
    Ok(VerificationReport::new("duality", lhs, rhs)
        .magnitude(mag)
        .param("t", t)
        .param("p", p.as_f64()))
}

/// Upper bounds for ‖X_p(h)f − f‖_{ℓ^p} along h = 2^{−k}, k = 1..=k_max.
pub fn strong_continuity(f: &FiniteSequence, kind: SemigroupKind, p: Exponent, k_max: u32) -> Result<Vec<(f64, f64)>> {
    (1..=k_max)
        .map(|k| {
            let h = 0.5_f64.powi(k as i32);
            let out = apply_weighted(f, SemigroupParams::new(kind, h, Some(p))?, f.len() + GUARD_BAND)?;
            let diff = FiniteSequence::new(out.values.clone()).sub(f);
            Ok((h, diff.lp_norm(p) + out.tail_lp(p)))
        })
        .collect()
}

/// Point z = ρ₀e^{iδ₀} with ρ₀ sin δ₀ = π/2 where |1 − e^{−z}| > 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonHolomorphyWitness {
    pub delta0: f64,
    pub z: C64,
    pub modulus: f64,
    /// 2cos(ρ₀ sin δ₀) − e^{−ρ₀ cos δ₀}; negative exactly when modulus > 1.
    pub f_value: f64,
}

pub fn nonholomorphy_witness(delta0: f64) -> Result<NonHolomorphyWitness> {
    if !(delta0 > 0.0 && delta0 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Domain(format!("delta0 must lie in (0, pi/2) (got {delta0})")));
    }
    let rho = std::f64::consts::FRAC_PI_2 / delta0.sin();
    let z = C64::from_polar(rho, delta0);
    Ok(NonHolomorphyWitness {
        delta0,
        z,
        modulus: one_minus_exp_neg(z).norm(),
        f_value: 2.0 * (rho * delta0.sin()).cos() - (-rho * delta0.cos()).exp(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rand_seq(len: usize, seed: u64) -> FiniteSequence {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        FiniteSequence::new(
            (0..len)
                .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn t_examples() {
        let f = rand_seq(10, 1);
        let t0 = apply_t(&f, 0.0, 12).unwrap();
        assert_eq!(t0.tail, Tail::Finite);
        assert_eq!(&t0.values[..10], f.values());
        let t = 0.8;
        let x = one_minus_exp_neg_real(t);
        let te = apply_t(&FiniteSequence::unit(0), t, 40).unwrap();
        for n in 0..=40 {
            assert!((te.values[n].re - x.powi(n as i32)).abs() <= 1e-14 * x.powi(n as i32));
        }
        assert!(apply_t(&f, -1.0, 3).is_err());
    }

    #[test]
    fn t_tail_envelope_holds() {
        let f = rand_seq(6, 2);
        let short = apply_t(&f, 0.5, 10).unwrap();
        let long = apply_t(&f, 0.5, 200).unwrap();
        for n in 11..=200 {
            assert!(long.values[n].norm() <= short.envelope(n) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn semigroup_laws() {
        let f = rand_seq(17, 3);
        let ts = [0.1, 0.5, 1.0, 3.0];
        for &s in &ts {
            for &t in &ts {
                let tt = apply_t(&f, t, 400).unwrap();
                let ts_ = apply_t(&tt.to_finite(), s, 64).unwrap();
                let direct = apply_t(&f, s + t, 64).unwrap();
                // T(s) applied to the truncation drops only indices > 400
                // which do not reach n ≤ 64.
                assert!(max_diff(&ts_.values[..65], &direct.values[..65]) <= 1e-12);
                let ss = apply_s(&apply_s(&f, t).unwrap(), s).unwrap();
                let sd = apply_s(&f, s + t).unwrap();
                assert!(max_diff(ss.values(), sd.values()) <= 1e-12);
            }
        }
    }

    #[test]
    fn s_examples() {
        assert_eq!(apply_s(&FiniteSequence::unit(0), 0.7).unwrap(), FiniteSequence::unit(0));
        let f = rand_seq(9, 4);
        assert_eq!(apply_s(&f, 0.0).unwrap(), f);
    }

    #[test]
    fn weighted_examples() {
        let f = rand_seq(8, 5);
        let t = 0.6;
        let s_inf = apply_weighted(
            &f,
            SemigroupParams::new(SemigroupKind::S, t, Some(Exponent::Infinite)).unwrap(),
            0,
        )
        .unwrap();
        let s = apply_s(&f, t).unwrap().scale(C64::new((-t).exp(), 0.0));
        assert!(max_diff(&s_inf.values, s.values()) <= 1e-16);
        // T_1 preserves the ℓ¹ norm of nonnegative sequences.
        let g = FiniteSequence::from_real(&[0.3, 0.0, 1.2, 0.5, 0.9]);
        let t1 = apply_weighted(
            &g,
            SemigroupParams::new(SemigroupKind::T, 1.0, Some(Exponent::Finite(1.0))).unwrap(),
            400,
        )
        .unwrap();
        let trunc: f64 = t1.values.iter().map(|v| v.norm()).sum();
        assert!(trunc <= g.l1_norm() * (1.0 + 1e-12));
        assert!((trunc + t1.tail_bound() - g.l1_norm()).abs() <= 1e-12 * g.l1_norm());
    }

    #[test]
    fn s_p_contracts() {
        use crate::spaces::{norm, SpaceParams};
        for seed in 0..20 {
            let f = rand_seq(24, 100 + seed);
            for p in [1.0, 2.0, 4.0, f64::INFINITY] {
                let p = Exponent::new(p).unwrap();
                for alpha in [0.0, 0.5, 1.7] {
                    let sp = SpaceParams::new(alpha, p).unwrap();
                    let out =
                        apply_weighted(&f, SemigroupParams::new(SemigroupKind::S, 0.7, Some(p)).unwrap(), 0).unwrap();
                    assert!(norm(&out.to_finite(), sp).value <= norm(&f, sp).value * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn generators() {
        let a = generator_a(&FiniteSequence::unit(0), Exponent::Finite(2.0));
        assert_eq!(a.values(), &[C64::new(-0.5, 0.0), C64::new(1.0, 0.0)]);
        let f = rand_seq(12, 6);
        let e1 = generator_limit_error(&f, Exponent::Finite(2.0), 1e-4).unwrap();
        let e2 = generator_limit_error(&f, Exponent::Finite(2.0), 5e-5).unwrap();
        assert!(e1 <= 1e-3 * f.sup_norm().max(1.0) * 100.0);
        assert!(e2 < e1 * 0.6);
        for lambda in [C64::new(-0.5, 0.0), C64::new(-1.0, 0.5)] {
            for p in [1.0, 2.0, 4.0] {
                let r = b_eigen_check(lambda, Exponent::Finite(p), 512);
                assert!(r.rel_err <= 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn z_transform_examples() {
        let k = FiniteSequence::new(kernel_values(C64::new(0.7, 0.0), 257));
        let z = C64::new(0.3, 0.0);
        let v = z_transform_finite(&k, z);
        assert!((v - (ONE - z).powf(-0.7)).norm() <= 1e-10);
        assert_eq!(z_transform_finite(&FiniteSequence::unit(0), z), ONE);
        assert_eq!(z_transform_finite(&FiniteSequence::unit(1), z), z);
        let tf = apply_t(&FiniteSequence::unit(0), 0.5, 20).unwrap();
        assert!(matches!(
            z_transform(&tf, C64::new(3.0, 0.0), 1e-10),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn z_functional_forms() {
        let f = rand_seq(17, 7);
        let r = z_functional_equations(&f, 0.5, C64::new(0.4, 0.0), 1e-13).unwrap();
        assert!(r.s_identity.abs_err <= 1e-11, "{:?}", r.s_identity);
        assert!(
            r.t_proof_form.abs_err <= 1e-10 + r.t_proof_form.tail_bound,
            "{:?}",
            r.t_proof_form
        );
        assert!(r.t_statement_form.rel_err > 1e-3);
    }

    #[test]
    fn intertwining() {
        let f = rand_seq(12, 8);
        let r = intertwine_t(&f, 0.5, 0.0, 20, 1e-12).unwrap();
        assert!(r.abs_err <= 1e-15 * r.lhs.norm().max(1.0) * 10.0);
        let r = intertwine_t(&FiniteSequence::unit(1), 1.0, 0.3, 30, 1e-13).unwrap();
        assert!(r.rel_err <= 1e-12, "{r:?}");
        let r = intertwine_t(&rand_seq(17, 9), 0.5, 1.0, 40, 1e-12).unwrap();
        assert!(r.rel_err <= 1e-9, "{r:?}");
        let (a, b) = intertwine_s(&FiniteSequence::unit(2), 1.0, 0.5).unwrap();
        assert!(a.abs_err <= 1e-13 && b.abs_err <= 1e-13);
        let (a, b) = intertwine_s(&rand_seq(30, 10), 1.5, 2.0).unwrap();
        assert!(a.rel_err <= 1e-12 && b.rel_err <= 1e-12, "{a:?} {b:?}");
    }

    #[test]
    fn continuity_is_monotone() {
        let f = rand_seq(10, 11);
        for kind in [SemigroupKind::T, SemigroupKind::S] {
            let c = strong_continuity(&f, kind, Exponent::Finite(2.0), 20).unwrap();
            assert!(c.windows(2).all(|w| w[1].1 <= w[0].1));
            assert!(c.last().unwrap().1 < 1e-4);
        }
    }

    #[test]
    fn witnesses() {
        use std::f64::consts::PI;
        for d in [PI / 6.0, PI / 4.0, PI / 3.0] {
            let w = nonholomorphy_witness(d).unwrap();
            assert!(w.modulus > 1.0 && w.f_value < 0.0);
        }
        let w = nonholomorphy_witness(PI / 4.0).unwrap();
        assert!((w.f_value + (-PI / 2.0).exp()).abs() < 1e-15);
        // The excess over 1 shrinks as δ₀ → 0⁺.
        let sweep: Vec<f64> = [0.5, 0.3, 0.2, 0.1]
            .iter()
            .map(|&d| nonholomorphy_witness(d).unwrap().modulus - 1.0)
            .collect();
        assert!(sweep.iter().all(|&e| e > 0.0));
        assert!(sweep.windows(2).all(|w| w[1] < w[0]));
        assert!(nonholomorphy_witness(0.0).is_err());
    }

    proptest! {
        #[test]
        fn duality_holds(seed in 0u64..1000, t in 0.0f64..3.0, p in 1.0f64..8.0) {
            let f = rand_seq(15, seed);
            let g = rand_seq(20, seed + 7);
            let r = duality_check(&f, &g, t, Exponent::Finite(p)).unwrap();
            prop_assert!(r.rel_err <= 1e-10, "{:?}", r);
        }

        #[test]
        fn s_law(seed in 0u64..1000, s in 0.0f64..3.0, t in 0.0f64..3.0) {
            let f = rand_seq(20, seed);
            let a = apply_s(&apply_s(&f, t).unwrap(), s).unwrap();
            let b = apply_s(&f, s + t).unwrap();
            prop_assert!(max_diff(a.values(), b.values()) <= 1e-12);
        }
    }
}
