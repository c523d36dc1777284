//! Small numerical building blocks: compensated sums, the extended exponent
//! type, and accurate elementary functions near cancellation points.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated sum of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

pub fn compensated_sum<I: IntoIterator<Item = C64>>(terms: I) -> C64 {
    let mut acc = ComplexSum::new();
    for z in terms {
        acc.add(z);
    }
    acc.value()
}

pub fn compensated_sum_real<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in terms {
        acc.add(x);
    }
    acc.value()
}

/// Lebesgue exponent p ∈ [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Domain(format!("exponent p = {p} outside [1, inf]")))
        }
    }

    /// 1/p, with 1/∞ = 0.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinite => 0.0,
        }
    }

    /// Conjugate exponent p' with 1/p + 1/p' = 1.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinite => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinite,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "inf" || t == "infinity" || t == "∞" {
            return Ok(Exponent::Infinite);
        }
        let p: f64 = t.parse().map_err(|_| Error::Parse(format!("invalid exponent '{s}'")))?;
        Exponent::new(p)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p).map_err(serde::de::Error::custom),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// e^w − 1 without cancellation for small |w|.
pub fn expm1(w: C64) -> C64 {
    let (s, c) = w.im.sin_cos();
    let half = (0.5 * w.im).sin();
    C64::new(w.re.exp_m1() * c - 2.0 * half * half, w.re.exp() * s)
}

/// ln(1 + w), principal branch, accurate for small |w|.
pub fn ln_1p(w: C64) -> C64 {
    let (u, v) = (w.re, w.im);
    if w.norm() > 0.5 {
        return (ONE + w).ln();
    }
    C64::new(0.5 * (u * (2.0 + u) + v * v).ln_1p(), v.atan2(1.0 + u))
}

/// 1 − e^{−t}, accurate near t = 0.
pub fn one_minus_exp_neg(t: C64) -> C64 {
    -expm1(-t)
}

pub fn one_minus_exp_neg_real(t: f64) -> f64 {
    -(-t).exp_m1()
}

/// ℓ^p norm of a list of magnitudes, scaled to avoid overflow.
pub fn lp_norm(mags: &[f64], p: Exponent) -> f64 {
    let max = mags.iter().fold(0.0_f64, |m, &x| m.max(x));
    match p {
        Exponent::Infinite => max,
        _ if max == 0.0 || !max.is_finite() => max,
        Exponent::Finite(p) => {
            let s = compensated_sum_real(mags.iter().map(|&x| (x / max).powf(p)));
            max * s.powf(1.0 / p)
        }
    }
}

/// Relative distance |a − b| / max(|a|, |b|, floor).
pub fn rel_diff(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Parses "re" or "re,im" into a complex number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid complex number '{s}'")))
    };
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("invalid complex number '{s}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_lost_bits() {
        let mut s = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn exponent_reciprocal_and_conjugate() {
        assert_eq!(Exponent::Infinite.recip(), 0.0);
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinite);
        assert_eq!(Exponent::Finite(4.0).conjugate(), Exponent::Finite(4.0 / 3.0));
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert!("0.5".parse::<Exponent>().is_err());
        let json = serde_json::to_string(&Exponent::Infinite).unwrap();
        assert_eq!(json, "\"inf\"");
        let back: Exponent = serde_json::from_str("2.5").unwrap();
        assert_eq!(back, Exponent::Finite(2.5));
    }

    #[test]
    fn expm1_small_argument() {
        let w = C64::new(1e-12, 2e-12);
        let e = expm1(w);
        assert!((e - w).norm() < 1e-23);
        let big = C64::new(0.7, -1.3);
        assert!((expm1(big) - (big.exp() - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn ln_1p_matches_direct_form() {
        let w = C64::new(0.3, -0.2);
        assert!((ln_1p(w) - (ONE + w).ln()).norm() < 1e-15);
        let tiny = C64::new(1e-14, 1e-14);
        assert!((ln_1p(tiny) - tiny).norm() < 1e-27);
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("1,-2").unwrap(), C64::new(1.0, -2.0));
        assert!(parse_complex("a,b").is_err());
    }
}

/// Unevaluated sum hi + lo carrying about 32 significant digits.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, y: Self) -> Self {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, y: Self) -> Self {
        self.add(y.neg())
    }

    pub fn mul(self, y: Self) -> Self {
        let p = self.hi * y.hi;
        let e = self.hi.mul_add(y.hi, -p) + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn div(self, y: Self) -> Self {
        let q1 = self.hi / y.hi;
        let r = self.sub(y.mul(Self::new(q1)));
        let q2 = r.hi / y.hi;
        let r = r.sub(y.mul(Self::new(q2)));
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add(Self::new(q3))
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod dd_tests {
    use super::DoubleDouble as DD;

    #[test]
    fn double_double_arithmetic() {
        let third = DD::new(1.0).div(DD::new(3.0));
        let back = third.mul(DD::new(3.0)).sub(DD::new(1.0));
        assert!(back.value().abs() < 1e-31);
        let big = DD::new(1e16).add(DD::new(1.0)).sub(DD::new(1e16));
        assert_eq!(big.value(), 1.0);
    }
}
