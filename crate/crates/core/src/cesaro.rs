//! Generalized Cesàro operators C_β and C_β*, evaluated directly and through
//! semigroup subordination, with norm bounds, Hardy audits and witnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma_real, kernel_values, kernel_values_real};
use crate::numerics::{compensated_sum, lp_norm, ComplexSum, Exponent, C64, ONE};
use crate::quadrature::{integrate, QuadOptions};
use crate::report::VerificationReport;
use crate::semigroups::{generator_a, generator_b};
use crate::sequence::{FiniteSequence, Tail, TruncatedSequence};
use crate::spaces::{norm, pairing, SpaceParams};
use crate::weyl::{vector_report, weyl};

/// Order β with Re β > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorOrder(C64);

impl OperatorOrder {
    pub fn new(beta: C64) -> Result<Self> {
        if !(beta.re > 0.0) || !beta.im.is_finite() {
            return Err(Error::Domain(format!("Cesaro order needs Re beta > 0 (got {beta})")));
        }
        Ok(Self(beta))
    }

    pub fn real(beta: f64) -> Result<Self> {
        Self::new(C64::new(beta, 0.0))
    }

    pub fn beta(&self) -> C64 {
        self.0
    }
}

/// Which operator of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Primal,
    Dual,
}

/// Weights w(n,j) = k^β(n−j)/k^{β+1}(n) for j = 0..=top, from
/// w(n,0) = β/(n+β) and w(n,j+1) = w(n,j)(n−j)/(n−j−1+β). Every factor is
/// moderate, so the row never overflows.
fn weight_row(beta: C64, n: usize, top: usize) -> Vec<C64> {
    let mut w = Vec::with_capacity(top + 1);
    let mut cur = beta / (n as f64 + beta);
    for j in 0..=top {
        w.push(cur);
        if j < top {
            cur *= (n - j) as f64 / ((n - j - 1) as f64 + beta);
        }
    }
    w
}

/// C_βf(n) = Σ_{j≤n} k^β(n−j)f(j)/k^{β+1}(n) on 0..=N, N = max(n_out, M),
/// with a polynomial envelope beyond N.
///
/// For n > N ≥ M and b = Re β: |C_βf(n)| ≤ |β| ‖f‖₁ G/(n+b), where G = 1
/// for b ≥ 1 and G = ((N+2−M)/(N+1−M+b))^M otherwise (each ratio
/// (n−i)/|n−i−1+β| in the weight recurrence is at most that factor).
pub fn cesaro_direct(f: &FiniteSequence, order: OperatorOrder, n_out: usize) -> TruncatedSequence {
    let beta = order.beta();
    let vals = f.values();
    let m = f.support_end().unwrap_or(0);
    let big_n = n_out.max(m);
    let out = (0..=big_n)
        .map(|n| {
            let top = n.min(m);
            let w = weight_row(beta, n, top);
            compensated_sum((0..=top).map(|j| w[j] * vals[j]))
        })
        .collect();
    let tail = if f.support_end().is_none() {
        Tail::Finite
    } else {
        let b = beta.re;
        let g = if b >= 1.0 {
            1.0
        } else {
            ((big_n + 2 - m) as f64 / ((big_n + 1 - m) as f64 + b)).powi(m as i32)
        };
        Tail::Polynomial {
            coef: beta.norm() * f.l1_norm() * g,
            shift: b,
            exponent: 1.0,
        }
    };
    TruncatedSequence { values: out, tail }
}

/// C_β*f(n) = Σ_{j≥n} k^β(j−n)f(j)/k^{β+1}(j); exact, same support.
pub fn cesaro_dual_direct(f: &FiniteSequence, order: OperatorOrder) -> FiniteSequence {
    let beta = order.beta();
    let len = f.len();
    let mut acc = vec![ComplexSum::new(); len];
    for j in 0..len {
        let fj = f.get(j);
        if fj == C64::new(0.0, 0.0) {
            continue;
        }
        for (n, w) in weight_row(beta, j, j).into_iter().enumerate() {
            acc[n].add(w * fj);
        }
    }
    FiniteSequence::new(acc.iter().map(|a| a.value()).collect())
}

/// C_β*f(0) alone, for long inputs.
pub fn cesaro_dual_at_zero(f: &FiniteSequence, order: OperatorOrder) -> C64 {
    let beta = order.beta();
    compensated_sum((0..f.len()).map(|j| f.get(j) * beta / (j as f64 + beta)))
}

fn check_range(side: Side, p: Exponent) -> Result<()> {
    match (side, p) {
        (Side::Primal, Exponent::Finite(q)) if q <= 1.0 => {
            Err(Error::Domain("C_beta subordination needs p in (1, inf]".into()))
        }
        (Side::Dual, Exponent::Infinite) => Err(Error::Domain("C_beta* subordination needs p in [1, inf)".into())),
        _ => Ok(()),
    }
}

/// Binomial row w(n,j) = C(n,j)(1−u)^j u^{n−j}, j = 0..width−1.
fn binomial_row(n: usize, u: f64, width: usize) -> Vec<f64> {
    let mut w = vec![0.0; width.max(1)];
    w[0] = 1.0;
    let e = 1.0 - u;
    for _ in 0..n {
        for j in (1..w.len()).rev() {
            w[j] = u * w[j] + e * w[j - 1];
        }
        w[0] *= u;
    }
    w
}

/// C_βf(n) (or C_β*f(n)) from the subordination integral
/// β∫₀^∞ (1−e^{−t})^{β−1} e^{−t(1−1/p)} T_p(t)f(n) dt, respectively with
/// e^{−t/p} S_p(t), after u = 1 − e^{−t}. For Re β < 1 the further
/// substitution u = s^{1/Re β} removes the endpoint singularity.
pub fn cesaro_via_subordination(
    f: &FiniteSequence,
    order: OperatorOrder,
    side: Side,
    p: Exponent,
    n: usize,
    tol: f64,
) -> Result<C64> {
    check_range(side, p)?;
    let beta = order.beta();
    let b = beta.re;
    let q = p.recip();
    let (outer, inner) = match side {
        Side::Primal => (1.0 - q, q),
        Side::Dual => (q, 1.0 - q),
    };
    let m = f.support_end().unwrap_or(0);
    let len = f.len();
    // semigroup part at u, without the β u^{β−1} factor
    let semigroup = |u: f64| -> C64 {
        let v = 1.0 - u;
        let weights = v.powf(outer) * v.powf(inner) / v;
        let s = match side {
            Side::Primal => {
                let top = n.min(m);
                let w = binomial_row(n, u, top + 1);
                compensated_sum((0..=top).map(|j| f.get(j) * w[j]))
            }
            Side::Dual => {
                let mut acc = ComplexSum::new();
                for j in n..len {
                    let w = binomial_row(j, u, n + 1);
                    acc.add(f.get(j) * w[n]);
                }
                acc.value()
            }
        };
        s * weights
    };
    let opts = QuadOptions {
        abs_tol: tol,
        rel_tol: tol,
        ..QuadOptions::default()
    };
    let result = if b < 1.0 {
        let shift = C64::new(0.0, beta.im / b);
        integrate(
            |s| {
                let u = s.powf(1.0 / b);
                let factor = if s == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    (shift * s.ln()).exp()
                };
                factor * semigroup(u) / b
            },
            0.0,
            1.0,
            opts,
        )?
    } else {
        integrate(
            |u| (C64::new(u.ln(), 0.0) * (beta - 1.0)).exp() * semigroup(u),
            0.0,
            1.0,
            opts,
        )?
    };
    Ok(result.value * beta)
}

/// Γ(β)Γ(1−1/p)/Γ(β+1−1/p) (primal) or Γ(β)Γ(1/p)/Γ(β+1/p) (dual).
pub fn hardy_constant(beta: f64, p: f64, side: Side) -> Result<f64> {
    if !(beta > 0.0) || !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!(
            "need beta > 0 and 1 < p < inf (got {beta}, {p})"
        )));
    }
    let s = match side {
        Side::Primal => 1.0 - 1.0 / p,
        Side::Dual => 1.0 / p,
    };
    Ok(gamma_real(beta)? * gamma_real(s)? / gamma_real(beta + s)?)
}

/// |β| Γ(Re β)Γ(s)/Γ(Re β + s) with s = 1−1/p for C_β (p ∈ (1,∞]) and
/// s = 1/p for C_β* (p ∈ [1,∞)).
pub fn operator_norm_bound(order: OperatorOrder, p: Exponent, side: Side) -> Result<f64> {
    check_range(side, p)?;
    let b = order.beta().re;
    let s = match side {
        Side::Primal => 1.0 - p.recip(),
        Side::Dual => p.recip(),
    };
    Ok(order.beta().norm() * gamma_real(b)? * gamma_real(s)? / gamma_real(b + s)?)
}

/// ((1−1/p) − A)C₁f = f (primal) or (1/p − B)C₁*f = f (dual) on 0..n_out−1.
pub fn resolvent_check_c1(f: &FiniteSequence, p: Exponent, side: Side, n_out: usize) -> Result<VerificationReport> {
    check_range(side, p)?;
    let one = OperatorOrder::real(1.0)?;
    let q = p.recip();
    let applied = match side {
        Side::Primal => {
            let g = FiniteSequence::new(cesaro_direct(f, one, n_out).values[..=n_out].to_vec());
            g.scale(C64::new(1.0 - q, 0.0)).sub(&generator_a(&g, p))
        }
        Side::Dual => {
            let g = cesaro_dual_direct(f, one);
            g.scale(C64::new(q, 0.0)).sub(&generator_b(&g, p))
        }
    };
    let lhs: Vec<C64> = (0..n_out).map(|n| applied.get(n)).collect();
    let rhs: Vec<C64> = (0..n_out).map(|n| f.get(n)).collect();
    Ok(vector_report(
        match side {
            Side::Primal => "resolvent-C1",
            Side::Dual => "resolvent-C1-dual",
        },
        &lhs,
        &rhs,
    )
    .param("p", p.as_f64()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerGap {
    pub n: usize,
    pub c1_squared: C64,
    pub c2: C64,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct C1SquaredWitness {
    pub lambda: C64,
    pub gaps: Vec<PowerGap>,
    pub max_gap: f64,
    pub argmax: usize,
    /// Largest deviation of the computed C₁r_λ, C₂r_λ, C₁²r_λ from their
    /// closed forms over the scanned indices.
    pub closed_form_residual: f64,
}

/// Scans n = 0..=n_max for C₁²r_λ(n) ≠ C₂r_λ(n). Entries up to n only use
/// r_λ(0..=n), so the truncation is exact.
pub fn witness_c1sq_neq_c2(lambda: C64, n_max: usize) -> Result<C1SquaredWitness> {
    if lambda.norm() <= 1.0 {
        return Err(Error::Domain("need |lambda| > 1".into()));
    }
    let r: Vec<C64> = (0..=n_max).map(|n| lambda.powi(-(n as i32) - 1)).collect();
    let f = FiniteSequence::new(r.clone());
    let c1 = OperatorOrder::real(1.0)?;
    let c1r = cesaro_direct(&f, c1, n_max);
    let c1sq = cesaro_direct(&FiniteSequence::new(c1r.values[..=n_max].to_vec()), c1, n_max);
    let c2 = cesaro_direct(&f, OperatorOrder::real(2.0)?, n_max);
    let lm1 = lambda - 1.0;
    let mut residual = 0.0_f64;
    let mut harmonic = ComplexSum::new();
    let mut gaps = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let n1 = (n + 1) as f64;
        let c1_closed = (ONE - r[n]) / (lm1 * n1);
        harmonic.add((ONE - r[n]) / n1);
        let c1sq_closed = harmonic.value() / (lm1 * n1);
        let c2_closed = (lm1 * n1 - 1.0 + r[n]) * 2.0 / (lm1 * lm1 * n1 * (n1 + 1.0));
        for (a, b) in [
            (c1r.values[n], c1_closed),
            (c1sq.values[n], c1sq_closed),
            (c2.values[n], c2_closed),
        ] {
            residual = residual.max((a - b).norm() / b.norm().max(1e-300));
        }
        gaps.push(PowerGap {
            n,
            c1_squared: c1sq.values[n],
            c2: c2.values[n],
            gap: (c1sq.values[n] - c2.values[n]).norm(),
        });
    }
    let (argmax, max_gap) = gaps
        .iter()
        .map(|g| (g.n, g.gap))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(C1SquaredWitness {
        lambda,
        gaps,
        max_gap,
        argmax,
        closed_form_residual: residual,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthWitness {
    pub name: String,
    pub beta: C64,
    /// (N, partial sum through index N).
    pub partials: Vec<(usize, f64)>,
    /// Increase of the partial sum from N to 2N at the largest N.
    pub doubling_increment: f64,
}

/// Partial ℓ¹ norms of C_β(k^{−β}(·+1)) (p = 1 witness) and partial sums
/// of C_β*(1)(0) (p = ∞ witness) at each N in `grid` and at 2·max(grid).
pub fn unboundedness_witnesses(order: OperatorOrder, grid: &[usize]) -> (GrowthWitness, GrowthWitness) {
    let beta = order.beta();
    let n_top = 2 * grid.iter().copied().max().unwrap_or(1);
    let k = kernel_values(-beta, n_top + 2);
    let f = FiniteSequence::new(k[1..].to_vec());
    let cf = cesaro_direct(&f, order, n_top);
    let mut running = crate::numerics::NeumaierSum::new();
    let mut partial_l1 = Vec::with_capacity(n_top + 1);
    for n in 0..=n_top {
        running.add(cf.values[n].norm());
        partial_l1.push(running.value());
    }
    let mut running = ComplexSum::new();
    let mut partial_dual = Vec::with_capacity(n_top + 1);
    // C_β*(1 on 0..=N)(0) = Σ_{j≤N} β/(j+β)
    for j in 0..=n_top {
        running.add(beta / (j as f64 + beta));
        partial_dual.push(running.value().norm());
    }
    let build = |name: &str, partial: &[f64]| {
        let mut partials: Vec<(usize, f64)> = grid.iter().map(|&n| (n, partial[n])).collect();
        partials.push((n_top, partial[n_top]));
        GrowthWitness {
            name: name.to_string(),
            beta,
            doubling_increment: partial[n_top] - partial[n_top / 2],
            partials,
        }
    };
    (build("primal-l1", &partial_l1), build("dual-linf", &partial_dual))
}

/// Outcome of an inequality audit over random samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub name: String,
    pub samples: usize,
    pub violations: usize,
    /// max over samples of (certified lower bound of the left side) /
    /// (constant · right side).
    pub max_ratio: f64,
    /// max over samples of the certified upper bound ratio.
    pub max_upper_ratio: f64,
}

fn random_nonnegative(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let sparse = rng.gen_bool(0.3);
    (0..len)
        .map(|_| {
            if sparse && rng.gen_bool(0.7) {
                0.0
            } else {
                rng.gen_range(0.0..1.0_f64).powi(2)
            }
        })
        .collect()
}

fn random_complex(rng: &mut ChaCha8Rng, len: usize) -> FiniteSequence {
    FiniteSequence::new(
        (0..len)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

// x^{β−1} for integer-distance kernels, diagonal term dropped for β < 1
// (0^{β−1} is infinite) and 0^0 = 1 at β = 1.
fn hardy_power(d: usize, beta: f64) -> f64 {
    if d == 0 {
        if beta == 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (d as f64).powf(beta - 1.0)
    }
}

/// Hardy-type inequalities for nonnegative f supported on 1..=len with
/// f(0) = 0. The primal left side has infinite support; it is summed to
/// 64·len and the remainder bounded by ‖f‖₁^p Σ_{m>L−len} m^{−p}.
pub fn hardy_audit(beta: f64, p: f64, side: Side, samples: usize, len: usize, seed: u64) -> Result<AuditReport> {
    let c = hardy_constant(beta, p, side)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut max_ratio = 0.0_f64;
    let mut max_upper = 0.0_f64;
    for _ in 0..samples {
        let mut f = random_nonnegative(&mut rng, len + 1);
        f[0] = 0.0;
        let rhs = lp_norm(&f, Exponent::Finite(p));
        if rhs == 0.0 {
            continue;
        }
        let (lower, upper) = match side {
            Side::Primal => {
                let big_l = 64 * len;
                let terms: Vec<f64> = (1..=big_l)
                    .map(|n| {
                        let s: f64 = (0..=n.min(len)).map(|j| hardy_power(n - j, beta) * f[j]).sum();
                        s / (n as f64).powf(beta)
                    })
                    .collect();
                let lower = lp_norm(&terms, Exponent::Finite(p));
                let l1: f64 = f.iter().sum();
                let m0 = (big_l - len) as f64;
                let tail = l1 * (m0.powf(1.0 - p) / (p - 1.0)).powf(1.0 / p);
                (lower, lower + tail)
            }
            Side::Dual => {
                let terms: Vec<f64> = (1..=len)
                    .map(|n| {
                        (n..=len)
                            .map(|j| hardy_power(j - n, beta) / (j as f64).powf(beta) * f[j])
                            .sum()
                    })
                    .collect();
                let v = lp_norm(&terms, Exponent::Finite(p));
                (v, v)
            }
        };
        let ratio = lower / (c * rhs);
        if ratio > 1.0 + 1e-12 {
            violations += 1;
        }
        max_ratio = max_ratio.max(ratio);
        max_upper = max_upper.max(upper / (c * rhs));
    }
    Ok(AuditReport {
        name: format!("hardy-{side:?}").to_lowercase(),
        samples,
        violations,
        max_ratio,
        max_upper_ratio: max_upper,
    })
}

/// ‖C_βf‖ ≤ bound·‖f‖ on random f. Primal: ℓ^p with the polynomial tail
/// added to the upper side (α = 0 only). Dual: exact τ_p^α norms.
pub fn norm_bound_audit(
    order: OperatorOrder,
    sp: SpaceParams,
    side: Side,
    samples: usize,
    len: usize,
    seed: u64,
) -> Result<AuditReport> {
    if side == Side::Primal && sp.alpha != 0.0 {
        return Err(Error::Unsupported("primal norm audit is limited to alpha = 0".into()));
    }
    let bound = operator_norm_bound(order, sp.p, side)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut max_ratio = 0.0_f64;
    let mut max_upper = 0.0_f64;
    for _ in 0..samples {
        let f = random_complex(&mut rng, len);
        let fn_ = norm(&f, sp).value;
        let (lower, upper) = match side {
            Side::Primal => {
                let cf = cesaro_direct(&f, order, 16 * len);
                let v = cf.to_finite().lp_norm(sp.p);
                (v, v + cf.tail_lp(sp.p))
            }
            Side::Dual => {
                let v = norm(&cesaro_dual_direct(&f, order), sp).value;
                (v, v)
            }
        };
        let ratio = lower / (bound * fn_);
        if ratio > 1.0 + 1e-12 {
            violations += 1;
        }
        max_ratio = max_ratio.max(ratio);
        max_upper = max_upper.max(upper / (bound * fn_));
    }
    Ok(AuditReport {
        name: format!("norm-bound-{side:?}").to_lowercase(),
        samples,
        violations,
        max_ratio,
        max_upper_ratio: max_upper,
    })
}

/// ⟨C_βf, g⟩₀ against ⟨f, C_β*g⟩₀; exact since g is finitely supported.
pub fn duality_check(f: &FiniteSequence, g: &FiniteSequence, order: OperatorOrder) -> VerificationReport {
    let cf = cesaro_direct(f, order, g.len());
    let lhs = compensated_sum((0..g.len()).map(|n| cf.get(n) * g.get(n)));
    let cg = cesaro_dual_direct(g, order);
    let rhs = compensated_sum((0..f.len()).map(|n| f.get(n) * cg.get(n)));
    let mag: f64 = (0..g.len()).map(|n| (cf.get(n) * g.get(n)).norm()).sum();
    VerificationReport::new("cesaro-duality", lhs, rhs)
        .magnitude(mag)
        .param("beta", order.beta())
}

/// ⟨C_βf, g⟩_α against ⟨f, C_β*g⟩_α for α > 0. W^α(C_βf)(n) needs the
/// infinite tail of C_βf; it is summed to `big_l` and the rest bounded by
/// envelope(L)·Σ_{m>L−n}|k^{−α}(m)| = envelope(L)·|k^{1−α}(L−n)|.
pub fn duality_check_alpha(
    f: &FiniteSequence,
    g: &FiniteSequence,
    order: OperatorOrder,
    alpha: f64,
    big_l: usize,
) -> VerificationReport {
    let len = g.len();
    let cf = cesaro_direct(f, order, big_l);
    let km = kernel_values_real(-alpha, big_l + 1);
    let k1 = kernel_values_real(1.0 - alpha, big_l + 1);
    let ka = kernel_values_real(alpha + 1.0, len);
    let wg = weyl(g, alpha);
    let mut tail = 0.0;
    let lhs = compensated_sum((0..len).map(|n| {
        let wcf = compensated_sum((n..=big_l).map(|j| cf.values[j] * km[j - n]));
        let rem = cf.envelope(big_l + 1) * k1[big_l - n].abs();
        tail += rem * (wg.get(n) * ka[n] * ka[n]).norm();
        wcf * wg.get(n) * ka[n] * ka[n]
    }));
    let rhs = pairing(f, &cesaro_dual_direct(g, order), alpha);
    VerificationReport::new("cesaro-duality-alpha", lhs, rhs)
        .tail(tail)
        .param("alpha", alpha)
        .param("beta", order.beta())
        .terms(big_l + 1)
}
