//! Uniform result record for identity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::numerics::C64;

/// A named parameter value recorded with a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Real(f64),
    Complex([f64; 2]),
    Text(String),
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Real(x)
    }
}

impl From<usize> for ParamValue {
    fn from(x: usize) -> Self {
        ParamValue::Int(x as i64)
    }
}

impl From<C64> for ParamValue {
    fn from(z: C64) -> Self {
        ParamValue::Complex([z.re, z.im])
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        ParamValue::Text(s.to_string())
    }
}

const TINY: f64 = 1e-300;
/// Below this fraction of the summed term magnitudes an identity value is
/// treated as an exact cancellation and errors are measured against the
/// term magnitude instead.
const CANCELLATION_FLOOR: f64 = 1e-8;

/// Both sides of an identity with their discrepancy.
///
/// For infinite series `lhs` is the partial sum and `tail_bound` a certified
/// bound on the omitted remainder; finite identities carry `tail_bound = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: BTreeMap<String, ParamValue>,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub terms_used: usize,
    pub tail_bound: f64,
    /// Σ|terms| of the larger side (0 when not applicable).
    #[serde(default)]
    pub magnitude: f64,
    /// Aggregate scale supplied through [`VerificationReport::with_errors`].
    #[serde(skip)]
    scale: Option<f64>,
}

impl VerificationReport {
    pub fn new(identity: &str, lhs: C64, rhs: C64) -> Self {
        let abs_err = (lhs - rhs).norm();
        Self {
            identity: identity.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            abs_err,
            rel_err: abs_err / lhs.norm().max(rhs.norm()).max(TINY),
            terms_used: 0,
            tail_bound: 0.0,
            magnitude: 0.0,
            scale: None,
        }
    }

    fn reference_scale(&self) -> f64 {
        if let Some(s) = self.scale {
            return s.max(TINY);
        }
        let s = self.lhs.norm().max(self.rhs.norm());
        if s < CANCELLATION_FLOOR * self.magnitude {
            self.magnitude
        } else {
            s.max(TINY)
        }
    }

    /// Records the summed term magnitude and re-derives rel_err.
    pub fn magnitude(mut self, m: f64) -> Self {
        self.magnitude = m;
        self.rel_err = self.abs_err / self.reference_scale();
        self
    }

    /// Report built from an already aggregated discrepancy (for vector
    /// identities where lhs/rhs are representative entries).
    pub fn with_errors(identity: &str, lhs: C64, rhs: C64, abs_err: f64, scale: f64) -> Self {
        let mut r = Self::new(identity, lhs, rhs);
        r.abs_err = abs_err;
        r.rel_err = abs_err / scale.max(TINY);
        r.scale = Some(scale);
        r
    }

    pub fn param(mut self, name: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(name.to_string(), value.into());
        self
    }

    pub fn terms(mut self, n: usize) -> Self {
        self.terms_used = n;
        self
    }

    pub fn tail(mut self, bound: f64) -> Self {
        self.tail_bound = bound;
        self
    }

    /// Whether |lhs − rhs| ≤ tol·scale + tail_bound, scale = max(|lhs|,|rhs|)
    /// outside the cancellation regime.
    pub fn passes(&self, tol: f64) -> bool {
        self.abs_err <= tol * self.reference_scale() + self.tail_bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error_definition() {
        let r = VerificationReport::new("x", C64::new(1.0, 0.0), C64::new(1.0 + 1e-10, 0.0));
        assert!((r.rel_err - 1e-10).abs() < 1e-15);
        assert!(r.passes(1e-9));
        assert!(!r.passes(1e-11));
        let json = serde_json::to_value(r.param("alpha", 0.5).param("n", 3usize)).unwrap();
        assert_eq!(json["params"]["n"], 3);
        assert_eq!(json["lhs"][0], 1.0);
    }

    #[test]
    fn cancellation_uses_term_magnitude() {
        let r = VerificationReport::new("x", C64::new(3e-15, 0.0), C64::new(-2e-15, 0.0));
        assert!(r.rel_err > 1.0);
        let r = r.magnitude(10.0);
        assert!(r.rel_err < 1e-15);
        let kept = VerificationReport::new("x", C64::new(1.0, 0.0), C64::new(1.0, 0.0)).magnitude(10.0);
        assert_eq!(kept.rel_err, 0.0);
    }
}
