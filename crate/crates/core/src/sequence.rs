//! Sequence carriers: exactly supported, closed-form, and truncated with a
//! certified tail envelope.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::kernel_values;
use crate::numerics::{Exponent, C64, ZERO};

/// Complex sequence supported on 0..len; values beyond are exactly zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteSequence {
    values: Vec<C64>,
}

impl FiniteSequence {
    pub fn new(values: Vec<C64>) -> Self {
        Self { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![ZERO; len])
    }

    /// Unit sequence e_k stored on 0..=k.
    pub fn unit(k: usize) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = C64::new(1.0, 0.0);
        Self::new(v)
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Last stored index N (0 for an empty sequence).
    pub fn last_index(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Index of the last nonzero entry, if any.
    pub fn support_end(&self) -> Option<usize> {
        self.values.iter().rposition(|v| *v != ZERO)
    }

    pub fn get(&self, n: usize) -> C64 {
        self.values.get(n).copied().unwrap_or(ZERO)
    }

    /// Copy padded or cut to exactly `len` entries.
    pub fn resized(&self, len: usize) -> Self {
        let mut v = self.values.clone();
        v.resize(len, ZERO);
        Self::new(v)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn l1_norm(&self) -> f64 {
        crate::numerics::compensated_sum_real(self.values.iter().map(|v| v.norm()))
    }

    pub fn lp_norm(&self, p: Exponent) -> f64 {
        let mags: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        crate::numerics::lp_norm(&mags, p)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.values.iter().map(|&v| v * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        Self::new((0..len).map(|n| self.get(n) + other.get(n)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        Self::new((0..len).map(|n| self.get(n) - other.get(n)).collect())
    }

    /// Pointwise product with a weight w(n).
    pub fn weighted<F: Fn(usize) -> C64>(&self, w: F) -> Self {
        Self::new(self.values.iter().enumerate().map(|(n, &v)| v * w(n)).collect())
    }
}

/// Closed-form sequence families with known operator images.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AnalyticSequence {
    /// k^β(n).
    CesaroKernel { beta: C64 },
    /// r_λ(n) = λ^{−(n+1)}, |λ| > 1.
    Geometric { lambda: C64 },
    /// The constant sequence c (= c·k¹).
    Constant { c: C64 },
}

impl AnalyticSequence {
    pub fn kernel(beta: C64) -> Self {
        AnalyticSequence::CesaroKernel { beta }
    }

    pub fn geometric(lambda: C64) -> Result<Self> {
        if lambda.norm() <= 1.0 {
            return Err(Error::Domain(format!(
                "geometric sequence needs |lambda| > 1 (got {lambda})"
            )));
        }
        Ok(AnalyticSequence::Geometric { lambda })
    }

    pub fn constant(c: C64) -> Self {
        AnalyticSequence::Constant { c }
    }

    pub fn value(&self, n: usize) -> C64 {
        match *self {
            AnalyticSequence::CesaroKernel { beta } => kernel_values(beta, n + 1)[n],
            AnalyticSequence::Geometric { lambda } => lambda.powi(-(n as i32) - 1),
            AnalyticSequence::Constant { c } => c,
        }
    }

    /// Values on 0..len.
    pub fn values(&self, len: usize) -> Vec<C64> {
        match *self {
            AnalyticSequence::CesaroKernel { beta } => kernel_values(beta, len),
            AnalyticSequence::Geometric { lambda } => {
                let r = lambda.inv();
                let mut cur = r;
                (0..len)
                    .map(|_| {
                        let v = cur;
                        cur *= r;
                        v
                    })
                    .collect()
            }
            AnalyticSequence::Constant { c } => vec![c; len],
        }
    }

    pub fn truncate(&self, len: usize) -> FiniteSequence {
        FiniteSequence::new(self.values(len))
    }
}

/// Envelope for |x(n)| beyond the stored range 0..=N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Tail {
    /// Nothing beyond N.
    Finite,
    /// |x(n)| ≤ first · ratio^{n−N−1}.
    Geometric { first: f64, ratio: f64 },
    /// |x(n)| ≤ coef · (n + shift)^{−exponent}.
    Polynomial { coef: f64, shift: f64, exponent: f64 },
}

/// Decay classification reported with a truncated sequence.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Decay {
    Finite,
    Geometric { ratio: f64 },
    Polynomial { exponent: f64 },
}

/// Values on 0..=N together with a certified envelope for n > N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSequence {
    pub values: Vec<C64>,
    pub tail: Tail,
}

impl TruncatedSequence {
    pub fn finite(values: Vec<C64>) -> Self {
        Self {
            values,
            tail: Tail::Finite,
        }
    }

    pub fn last_index(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn get(&self, n: usize) -> C64 {
        self.values.get(n).copied().unwrap_or(ZERO)
    }

    pub fn decay(&self) -> Decay {
        match self.tail {
            Tail::Finite => Decay::Finite,
            Tail::Geometric { ratio, .. } => Decay::Geometric { ratio },
            Tail::Polynomial { exponent, .. } => Decay::Polynomial { exponent },
        }
    }

    /// Bound on |x(n)| for n beyond the stored range.
    pub fn envelope(&self, n: usize) -> f64 {
        let big_n = self.last_index();
        if n <= big_n && !self.values.is_empty() {
            return self.values[n].norm();
        }
        match self.tail {
            Tail::Finite => 0.0,
            Tail::Geometric { first, ratio } => first * ratio.powf((n - big_n - 1) as f64),
            Tail::Polynomial { coef, shift, exponent } => coef * (n as f64 + shift).powf(-exponent),
        }
    }

    /// Bound on the ℓ^p norm of the omitted part (∞ if not certified).
    pub fn tail_lp(&self, p: Exponent) -> f64 {
        let big_n = self.last_index() as f64;
        match (self.tail, p) {
            (Tail::Finite, _) => 0.0,
            (Tail::Geometric { first, .. }, Exponent::Infinite) => first,
            (Tail::Polynomial { .. }, Exponent::Infinite) => self.envelope(self.last_index() + 1),
            (Tail::Geometric { first, ratio }, Exponent::Finite(p)) => {
                if ratio >= 1.0 {
                    f64::INFINITY
                } else {
                    first * (1.0 / (1.0 - ratio.powf(p))).powf(1.0 / p)
                }
            }
            (Tail::Polynomial { coef, shift, exponent }, Exponent::Finite(p)) => {
                let e = exponent * p;
                if e <= 1.0 {
                    f64::INFINITY
                } else {
                    // Σ_{n>N} (n+s)^{−e} ≤ ∫_N^∞ (x+s)^{−e} dx
                    coef * ((big_n + shift).powf(1.0 - e) / (e - 1.0)).powf(1.0 / p)
                }
            }
        }
    }

    /// Certified bound on Σ_{n>N} |x(n)|.
    pub fn tail_bound(&self) -> f64 {
        self.tail_lp(Exponent::Finite(1.0))
    }

    /// Bound on Σ_{n>N} |x(n)| |z|^n.
    pub fn weighted_tail(&self, z_abs: f64) -> f64 {
        let n1 = (self.last_index() + 1) as i32;
        match self.tail {
            Tail::Finite => 0.0,
            Tail::Geometric { first, ratio } => {
                let q = ratio * z_abs;
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    first * z_abs.powi(n1) / (1.0 - q)
                }
            }
            Tail::Polynomial { .. } => {
                if z_abs >= 1.0 {
                    self.tail_bound() * z_abs.powi(n1).max(1.0)
                } else {
                    self.envelope(self.last_index() + 1) * z_abs.powi(n1) / (1.0 - z_abs)
                }
            }
        }
    }

    pub fn to_finite(&self) -> FiniteSequence {
        FiniteSequence::new(self.values.clone())
    }
}
