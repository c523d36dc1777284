//! Named, runtime-selectable operator strategies and verification suites.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cesaro::{self, OperatorOrder, Side};
use crate::error::{Error, Result};
use crate::identities;
use crate::numerics::{Exponent, C64, ONE};
use crate::report::VerificationReport;
use crate::semigroups::{self, SemigroupKind, SemigroupParams};
use crate::sequence::{FiniteSequence, TruncatedSequence};
use crate::spaces::{d_alpha, d_alpha_inv};
use crate::spectra::{self, TraceOptions};
use crate::weyl::{self, vector_report};

/// Parameters shared by all operators; each reads the ones it needs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorParams {
    pub alpha: f64,
    pub t: f64,
    pub p: Exponent,
    pub beta: C64,
    /// Last output index for operators with infinite output support.
    pub n_out: usize,
    pub tol: f64,
}

impl Default for OperatorParams {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            t: 1.0,
            p: Exponent::Finite(2.0),
            beta: ONE,
            n_out: 64,
            tol: 1e-12,
        }
    }
}

pub trait SequenceOperator: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn apply(&self, f: &FiniteSequence, params: &OperatorParams) -> Result<TruncatedSequence>;
}

type ApplyFn = fn(&FiniteSequence, &OperatorParams) -> Result<TruncatedSequence>;

/// Operator backed by a plain function.
struct FnOperator {
    name: &'static str,
    description: &'static str,
    apply: ApplyFn,
}

impl SequenceOperator for FnOperator {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn apply(&self, f: &FiniteSequence, params: &OperatorParams) -> Result<TruncatedSequence> {
        (self.apply)(f, params)
    }
}

/// C_β or C_β* evaluated index by index from the subordination integral.
struct SubordinatedCesaro {
    side: Side,
}

impl SequenceOperator for SubordinatedCesaro {
    fn name(&self) -> &'static str {
        match self.side {
            Side::Primal => "cesaro-subordination",
            Side::Dual => "cesaro-dual-subordination",
        }
    }

    fn description(&self) -> &'static str {
        match self.side {
            Side::Primal => "C_beta f(0..=n_out) by quadrature of the T_p(t) subordination integral",
            Side::Dual => "C_beta* f by quadrature of the S_p(t) subordination integral",
        }
    }

    fn apply(&self, f: &FiniteSequence, params: &OperatorParams) -> Result<TruncatedSequence> {
        let order = OperatorOrder::new(params.beta)?;
        let last = match self.side {
            Side::Primal => params.n_out,
            Side::Dual => f.last_index(),
        };
        let values = (0..=last)
            .map(|n| cesaro::cesaro_via_subordination(f, order, self.side, params.p, n, params.tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSequence::finite(values))
    }
}

fn finite(f: FiniteSequence) -> Result<TruncatedSequence> {
    Ok(TruncatedSequence::finite(f.into_values()))
}

fn weighted(kind: SemigroupKind, weighted: bool, f: &FiniteSequence, o: &OperatorParams) -> Result<TruncatedSequence> {
    let params = SemigroupParams::new(kind, o.t, weighted.then_some(o.p))?;
    semigroups::apply_weighted(f, params, o.n_out)
}

/// Registry of sequence operators keyed by name.
pub struct OperatorRegistry {
    operators: BTreeMap<&'static str, Box<dyn SequenceOperator>>,
}

impl OperatorRegistry {
    pub fn empty() -> Self {
        Self {
            operators: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, op: Box<dyn SequenceOperator>) {
        self.operators.insert(op.name(), op);
    }

    pub fn get(&self, name: &str) -> Result<&dyn SequenceOperator> {
        self.operators.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Unsupported(format!(
                "unknown operator '{name}' (known: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.operators.keys().copied().collect()
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        let table: [(&'static str, &'static str, ApplyFn); 13] = [
            ("weyl-sum", "W^{-alpha} f", |f, o| finite(weyl::weyl_sum(f, o.alpha)?)),
            ("weyl-diff", "W^alpha f by the k^{-alpha} kernel", |f, o| {
                finite(weyl::weyl_diff(f, o.alpha)?)
            }),
            ("weyl-diff-composed", "W^alpha f as W^m W^{-(m-alpha)} f", |f, o| {
                finite(weyl::weyl_diff_composed(f, o.alpha)?)
            }),
            ("d-alpha", "k^{alpha+1} W^alpha f", |f, o| finite(d_alpha(f, o.alpha))),
            ("d-alpha-inv", "W^{-alpha}(f / k^{alpha+1})", |f, o| {
                finite(d_alpha_inv(f, o.alpha))
            }),
            ("T", "T(t) f on 0..=n_out with geometric tail", |f, o| {
                weighted(SemigroupKind::T, false, f, o)
            }),
            ("S", "S(t) f", |f, o| weighted(SemigroupKind::S, false, f, o)),
            ("Tp", "e^{-t/p} T(t) f", |f, o| weighted(SemigroupKind::T, true, f, o)),
            ("Sp", "e^{-t(1-1/p)} S(t) f", |f, o| {
                weighted(SemigroupKind::S, true, f, o)
            }),
            ("A", "generator of T_p", |f, o| finite(semigroups::generator_a(f, o.p))),
            ("B", "generator of S_p", |f, o| finite(semigroups::generator_b(f, o.p))),
            ("cesaro", "C_beta f on 0..=n_out with polynomial tail", |f, o| {
                Ok(cesaro::cesaro_direct(f, OperatorOrder::new(o.beta)?, o.n_out))
            }),
            ("cesaro-dual", "C_beta* f", |f, o| {
                finite(cesaro::cesaro_dual_direct(f, OperatorOrder::new(o.beta)?))
            }),
        ];
        for (name, description, apply) in table {
            r.register(Box::new(FnOperator {
                name,
                description,
                apply,
            }));
        }
        r.register(Box::new(SubordinatedCesaro { side: Side::Primal }));
        r.register(Box::new(SubordinatedCesaro { side: Side::Dual }));
        r
    }
}

/// One check with the tolerance it is judged against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(flatten)]
    pub report: VerificationReport,
}

pub trait IdentitySuite: Send + Sync {
    fn name(&self) -> &'static str;
    /// Seed of any randomized inputs.
    fn seed(&self) -> Option<u64>;
    fn run(&self) -> Result<Vec<(VerificationReport, f64)>>;
}

fn checks(suite: &dyn IdentitySuite) -> Result<Vec<Check>> {
    Ok(suite
        .run()?
        .into_iter()
        .map(|(report, tolerance)| Check {
            suite: suite.name().to_string(),
            seed: suite.seed(),
            tolerance,
            pass: report.passes(tolerance),
            report,
        })
        .collect())
}

pub fn random_sequence(rng: &mut ChaCha8Rng, len: usize) -> FiniteSequence {
    FiniteSequence::new(
        (0..len)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

/// Entries uniform in the unit square, reproducible from `seed`.
pub fn seeded_sequence(seed: u64, len: usize) -> FiniteSequence {
    random_sequence(&mut ChaCha8Rng::seed_from_u64(seed), len)
}

struct GammaIdentities;

impl IdentitySuite for GammaIdentities {
    fn name(&self) -> &'static str {
        "gamma-identities"
    }

    fn seed(&self) -> Option<u64> {
        None
    }

    fn run(&self) -> Result<Vec<(VerificationReport, f64)>> {
        Ok(identities::standard_suite(1e-12)?
            .into_iter()
            .map(|r| (r, 1e-9))
            .collect())
    }
}

struct WeylSuite;

const WEYL_ORDERS: [f64; 5] = [0.3, 0.5, 1.0, 1.7, 2.5];

impl IdentitySuite for WeylSuite {
    fn name(&self) -> &'static str {
        "weyl"
    }

    fn seed(&self) -> Option<u64> {
        Some(0x5eed_0001)
    }

    fn run(&self) -> Result<Vec<(VerificationReport, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed().unwrap_or_default());
        let mut out = Vec::new();
        for len in [16, 64, 128] {
            let f = random_sequence(&mut rng, len);
            for &a in &WEYL_ORDERS {
                let tag = |r: VerificationReport| r.param("alpha", a).param("len", len);
                let sd = weyl::weyl_diff(&weyl::weyl_sum(&f, a)?, a)?;
                out.push((
                    tag(vector_report("weyl-round-trip-sum-diff", sd.values(), f.values())),
                    1e-12,
                ));
                let ds = weyl::weyl_sum(&weyl::weyl_diff(&f, a)?, a)?;
                out.push((
                    tag(vector_report("weyl-round-trip-diff-sum", ds.values(), f.values())),
                    1e-12,
                ));
                let d = weyl::weyl_diff(&f, a)?;
                let c = weyl::weyl_diff_composed(&f, a)?;
                out.push((tag(vector_report("weyl-routes", d.values(), c.values())), 1e-12));
                let b = 0.4;
                let ab = weyl::weyl_diff(&weyl::weyl_diff(&f, b)?, a)?;
                let sum = weyl::weyl_diff(&f, a + b)?;
                out.push((tag(vector_report("weyl-composition", ab.values(), sum.values())), 1e-11));
                out.push((tag(weyl::leibniz_check(&f, a)), 1e-11));
            }
        }
        Ok(out)
    }
}

struct SemigroupSuite;

impl IdentitySuite for SemigroupSuite {
    fn name(&self) -> &'static str {
        "semigroups"
    }

    fn seed(&self) -> Option<u64> {
        Some(0x5eed_0002)
    }

    fn run(&self) -> Result<Vec<(VerificationReport, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed().unwrap_or_default());
        let mut out = Vec::new();
        let f = random_sequence(&mut rng, 17);
        let times = [0.1, 0.5, 1.0, 3.0];
        for &s in &times {
            for &t in &times {
                let tag = |r: VerificationReport| r.param("s", s).param("t", t);
                // entries n ≤ 64 of T(s)T(t)f only read T(t)f(0..=64)
                let tt = semigroups::apply_t(&f, t, 64)?;
                let two = semigroups::apply_t(&tt.to_finite(), s, 64)?;
                let one = semigroups::apply_t(&f, s + t, 64)?;
                out.push((
                    tag(vector_report("T-semigroup-law", &two.values[..65], &one.values[..65])),
                    1e-12,
                ));
                let ss = semigroups::apply_s(&semigroups::apply_s(&f, t)?, s)?;
                let sd = semigroups::apply_s(&f, s + t)?;
                out.push((tag(vector_report("S-semigroup-law", ss.values(), sd.values())), 1e-12));
            }
        }
        for &p in &[1.0, 1.5, 2.0, 4.0] {
            let g = random_sequence(&mut rng, 20);
            for &t in &times {
                out.push((semigroups::duality_check(&f, &g, t, Exponent::Finite(p))?, 1e-10));
            }
        }
        for lambda in [C64::new(-0.5, 0.0), C64::new(-1.0, 0.5)] {
            for p in [1.0, 2.0, 4.0] {
                out.push((semigroups::b_eigen_check(lambda, Exponent::Finite(p), 512), 1e-12));
            }
        }
        let h = random_sequence(&mut rng, 17);
        for (alpha, t) in [(0.5, 1.0), (1.0, 0.3), (1.7, 0.5), (2.5, 2.0)] {
            out.push((semigroups::intertwine_t(&h, alpha, t, 32, 1e-12)?, 1e-9));
            let (a, b) = semigroups::intertwine_s(&h, alpha, t)?;
            out.push((a, 1e-12));
            out.push((b, 1e-12));
        }
        let z = semigroups::z_functional_equations(&h, 0.5, C64::new(0.4, 0.0), 1e-13)?;
        out.push((z.s_identity, 1e-11));
        out.push((z.t_proof_form, 1e-10));
        Ok(out)
    }
}

struct CesaroSuite;

const CESARO_ORDERS: [(f64, f64); 4] = [(0.5, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)];

impl IdentitySuite for CesaroSuite {
    fn name(&self) -> &'static str {
        "cesaro"
    }

    fn seed(&self) -> Option<u64> {
        Some(0x5eed_0003)
    }

    fn run(&self) -> Result<Vec<(VerificationReport, f64)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed().unwrap_or_default());
        let mut out = Vec::new();
        let f = random_sequence(&mut rng, 17);
        let g = random_sequence(&mut rng, 25);
        for &(re, im) in &CESARO_ORDERS {
            let beta = C64::new(re, im);
            let order = OperatorOrder::new(beta)?;
            let direct = cesaro::cesaro_direct(&f, order, 32);
            let dual = cesaro::cesaro_dual_direct(&f, order);
            for n in [0, 1, 4, 9, 16, 32] {
                let tag = |r: VerificationReport| r.param("beta", beta).param("n", n);
                let s2 = cesaro::cesaro_via_subordination(&f, order, Side::Primal, Exponent::Finite(2.0), n, 1e-12)?;
                let s4 = cesaro::cesaro_via_subordination(&f, order, Side::Primal, Exponent::Infinite, n, 1e-12)?;
                out.push((
                    tag(VerificationReport::new("subordination-primal", s2, direct.values[n])),
                    1e-8,
                ));
                out.push((tag(VerificationReport::new("p-independence-primal", s2, s4)), 1e-10));
                let d1 = cesaro::cesaro_via_subordination(&f, order, Side::Dual, Exponent::Finite(1.0), n, 1e-12)?;
                let d2 = cesaro::cesaro_via_subordination(&f, order, Side::Dual, Exponent::Finite(2.0), n, 1e-12)?;
                out.push((
                    tag(VerificationReport::new("subordination-dual", d2, dual.get(n))),
                    1e-8,
                ));
                out.push((tag(VerificationReport::new("p-independence-dual", d1, d2)), 1e-10));
            }
            out.push((cesaro::duality_check(&f, &g, order), 1e-10));
            let k = crate::gamma::kernel_values(-beta, 66);
            let seq = FiniteSequence::new(k[1..].to_vec());
            let c = cesaro::cesaro_direct(&seq, order, 64);
            let expect: Vec<C64> = (0..64).map(|n| -beta / (n + 1) as f64).collect();
            out.push((
                vector_report("cesaro-kernel-sequence", &c.values[..64], &expect).param("beta", beta),
                1e-12,
            ));
        }
        out.push((
            cesaro::resolvent_check_c1(&FiniteSequence::unit(0), Exponent::Finite(2.0), Side::Primal, 64)?,
            1e-12,
        ));
        out.push((
            cesaro::resolvent_check_c1(&g, Exponent::Infinite, Side::Primal, 24)?,
            1e-12,
        ));
        out.push((
            cesaro::resolvent_check_c1(&g, Exponent::Finite(4.0), Side::Dual, 24)?,
            1e-12,
        ));
        Ok(out)
    }
}

struct SpectraSuite;

impl IdentitySuite for SpectraSuite {
    fn name(&self) -> &'static str {
        "spectra"
    }

    fn seed(&self) -> Option<u64> {
        None
    }

    fn run(&self) -> Result<Vec<(VerificationReport, f64)>> {
        let mut out = Vec::new();
        let cases = [
            (Side::Dual, Exponent::Finite(1.0)),
            (Side::Dual, Exponent::Finite(1.5)),
            (Side::Dual, Exponent::Finite(2.0)),
            (Side::Dual, Exponent::Finite(4.0)),
            (Side::Primal, Exponent::Finite(1.5)),
            (Side::Primal, Exponent::Finite(2.0)),
            (Side::Primal, Exponent::Finite(4.0)),
            (Side::Primal, Exponent::Infinite),
        ];
        for (side, p) in cases {
            let curve = spectra::trace_border(ONE, p, side, TraceOptions::default())?;
            let (center, radius) = spectra::unit_order_circle(p, side)?;
            let res = spectra::circle_residual(&curve, center, radius);
            let worst = curve
                .samples
                .iter()
                .map(|(_, w)| (w - center).norm())
                .fold(
                    radius,
                    |m, d| if (d - radius).abs() > (m - radius).abs() { d } else { m },
                );
            out.push((
                VerificationReport::with_errors(
                    "unit-order-circle",
                    C64::new(worst, 0.0),
                    C64::new(radius, 0.0),
                    res,
                    radius,
                )
                .param("p", p.as_f64())
                .param("side", format!("{side:?}").to_lowercase().as_str())
                .terms(curve.samples.len()),
                1e-10,
            ));
        }
        for beta in [C64::new(1.0, 1.0), C64::new(100.0, 20.0), C64::new(5.0, 0.0)] {
            let curve = spectra::trace_border(beta, Exponent::Finite(2.0), Side::Primal, TraceOptions::default())?;
            let dev = spectra::mirror_deviation(&curve)?;
            let scale = curve.samples.iter().fold(0.0_f64, |m, (_, w)| m.max(w.norm()));
            out.push((
                VerificationReport::with_errors("conjugate-mirror", C64::new(dev, 0.0), C64::new(0.0, 0.0), dev, scale)
                    .param("beta", beta),
                1e-12,
            ));
        }
        Ok(out)
    }
}

/// Registry of verification suites keyed by name.
pub struct SuiteRegistry {
    suites: BTreeMap<&'static str, Box<dyn IdentitySuite>>,
}

impl SuiteRegistry {
    pub fn empty() -> Self {
        Self {
            suites: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, suite: Box<dyn IdentitySuite>) {
        self.suites.insert(suite.name(), suite);
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(GammaIdentities));
        r.register(Box::new(WeylSuite));
        r.register(Box::new(SemigroupSuite));
        r.register(Box::new(CesaroSuite));
        r.register(Box::new(SpectraSuite));
        r
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.suites.keys().copied().collect()
    }

    /// Runs one suite, or every suite for "all".
    pub fn run(&self, name: &str) -> Result<Vec<Check>> {
        if name == "all" {
            let mut out = Vec::new();
            for s in self.suites.values() {
                out.extend(checks(s.as_ref())?);
            }
            return Ok(out);
        }
        let suite = self.suites.get(name).ok_or_else(|| {
            Error::Unsupported(format!(
                "unknown suite '{name}' (known: all, {})",
                self.names().join(", ")
            ))
        })?;
        checks(suite.as_ref())
    }
}
