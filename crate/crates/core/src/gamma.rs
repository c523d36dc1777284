//! Complex log-Gamma, Gamma quotients, Beta function and Cesàro kernels
//! k^α(n) = Γ(n+α)/(Γ(α)Γ(n+1)).

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{ln_1p, DoubleDouble, C64, ONE, ZERO};
use crate::sequence::FiniteSequence;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_78;

/// B_{2k} / (2k(2k−1)) for k = 1..8.
const STIRLING_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Integer-difference quotients up to this length are evaluated as products.
const MAX_PRODUCT_SPAN: usize = 64;
/// Both arguments at least this large (and in the right half-plane) use the
/// Stirling difference formula for quotients.
const STIRLING_RADIUS: f64 = 20.0;

pub fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn pole(z: C64) -> Error {
    Error::Pole(format!("{} + {}i", z.re, z.im))
}

fn ln_gamma_lanczos(z: C64) -> C64 {
    let zm1 = z - 1.0;
    let mut series = C64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm1 + k as f64);
    }
    let t = zm1 + (LANCZOS_G + 0.5);
    HALF_LN_2PI + (zm1 + 0.5) * t.ln() - t + series.ln()
}

fn ln_factorial_small(n: u32) -> f64 {
    (2..=n).map(f64::from).product::<f64>().ln()
}

/// Branch-continuous logarithm of Γ(z): the imaginary part varies
/// continuously on C minus the nonpositive real axis and satisfies
/// lnΓ(z+1) = lnΓ(z) + ln z with the principal ln z.
pub fn ln_gamma(z: C64) -> Result<C64> {
    if is_nonpositive_integer(z) {
        return Err(pole(z));
    }
    if z.im == 0.0 && z.re >= 1.0 && z.re <= 171.0 && z.re == z.re.round() {
        return Ok(C64::new(ln_factorial_small(z.re as u32 - 1), 0.0));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_lanczos(z));
    }
    // Upward recurrence keeps the branch continuous; reflection would need
    // an explicit multiple of 2πi that is awkward to pin down.
    let m = (0.5 - z.re).ceil() as usize;
    let mut shift = ZERO;
    for k in 0..m {
        shift += (z + k as f64).ln();
    }
    Ok(ln_gamma_lanczos(z + m as f64) - shift)
}

/// ln|Γ(x)| and the sign of Γ(x) for real x.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    let lg = ln_gamma(C64::new(x, 0.0))?;
    let turns = (lg.im / PI).round() as i64;
    let sign = if turns.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok((lg.re, sign))
}

/// Γ(x) for real x (may overflow to ±∞).
pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}

/// Γ(z) for complex z (may overflow).
pub fn gamma(z: C64) -> Result<C64> {
    Ok(ln_gamma(z)?.exp())
}

fn stirling_series(z: C64) -> C64 {
    let w = z.inv();
    let w2 = w * w;
    let mut acc = ZERO;
    for &c in STIRLING_COEF.iter().rev() {
        acc = acc * w2 + c;
    }
    acc * w
}

/// Complex number stored as mantissa · 2^exp2, for products and kernels
/// whose magnitude leaves the double range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: C64,
    pub exp2: i64,
}

fn pow2(e: i64) -> f64 {
    let mut e = e;
    let mut f = 1.0;
    while e > 1000 {
        f *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        f *= 2f64.powi(-1000);
        e += 1000;
    }
    f * 2f64.powi(e as i32)
}

impl ScaledComplex {
    pub fn from_c64(z: C64) -> Self {
        let mut s = ScaledComplex { mantissa: z, exp2: 0 };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return;
        }
        if !(2f64.powi(-500)..=2f64.powi(500)).contains(&m) {
            let e = m.log2().floor() as i64;
            self.mantissa *= pow2(-e);
            self.exp2 += e;
        }
    }

    pub fn mul(self, z: C64) -> Self {
        let mut s = ScaledComplex {
            mantissa: self.mantissa * z,
            exp2: self.exp2,
        };
        s.normalize();
        s
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == ZERO
    }

    pub fn to_c64(self) -> C64 {
        if self.exp2 == 0 {
            return self.mantissa;
        }
        // split the scale to avoid spurious intermediate overflow
        let half = self.exp2 / 2;
        self.mantissa * pow2(half) * pow2(self.exp2 - half)
    }

    /// ln|value|, −∞ for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.exp2 as f64 * LN_2
    }
}

/// Logarithm of Γ(a)/Γ(b), the difference of branch-continuous log-Gammas.
/// Uses an exact product for integer differences and a Stirling difference
/// when both arguments are large in the right half-plane, which avoids the
/// cancellation of two large log-Gamma values.
pub fn ln_gamma_ratio(a: C64, b: C64) -> Result<C64> {
    if is_nonpositive_integer(a) {
        return Err(pole(a));
    }
    if is_nonpositive_integer(b) {
        return Err(pole(b));
    }
    if a == b {
        return Ok(ZERO);
    }
    if let Some((prod, arg)) = integer_shift_product(a, b) {
        return Ok(C64::new(prod.ln_abs(), arg));
    }
    if a.re > 0.0 && b.re > 0.0 && a.norm() >= STIRLING_RADIUS && b.norm() >= STIRLING_RADIUS {
        let delta = a - b;
        let d = (b - 0.5) * ln_1p(delta / b) + delta * a.ln() - delta + stirling_series(a) - stirling_series(b);
        return Ok(d);
    }
    Ok(ln_gamma(a)? - ln_gamma(b)?)
}

/// For a − b = n a small integer, returns (Γ(a)/Γ(b) as a scaled product,
/// summed argument of the factors).
fn integer_shift_product(a: C64, b: C64) -> Option<(ScaledComplex, f64)> {
    let d = a - b;
    if d.im != 0.0 || d.re != d.re.round() || d.re.abs() > MAX_PRODUCT_SPAN as f64 {
        return None;
    }
    let n = d.re as i64;
    // Γ(b+n)/Γ(b) = Π_{k<n} (b+k); for n < 0 invert the product over a.
    let (base, count, invert) = if n > 0 {
        (b, n as usize, false)
    } else {
        (a, (-n) as usize, true)
    };
    let mut prod = ScaledComplex::from_c64(ONE);
    let mut arg = 0.0;
    for k in 0..count {
        let f = base + k as f64;
        prod = prod.mul(f);
        arg += f.arg();
    }
    if invert {
        prod = ScaledComplex {
            mantissa: prod.mantissa.inv(),
            exp2: -prod.exp2,
        };
        arg = -arg;
    }
    Some((prod, arg))
}

/// A Gamma quotient Γ(numerator_arg)/Γ(denominator_arg).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaRatio {
    pub numerator_arg: C64,
    pub denominator_arg: C64,
    pub value: C64,
    pub log_value: C64,
}

pub fn gamma_ratio(a: C64, b: C64) -> Result<GammaRatio> {
    let a_pole = is_nonpositive_integer(a);
    let b_pole = is_nonpositive_integer(b);
    let make = |value, log_value| GammaRatio {
        numerator_arg: a,
        denominator_arg: b,
        value,
        log_value,
    };
    match (a_pole, b_pole) {
        (true, true) => {
            return Err(Error::BothPoles(format!(
                "{} + {}i over {} + {}i",
                a.re, a.im, b.re, b.im
            )))
        }
        (true, false) => return Err(pole(a)),
        (false, true) => return Ok(make(ZERO, C64::new(f64::NEG_INFINITY, 0.0))),
        _ => {}
    }
    if a == b {
        return Ok(make(ONE, ZERO));
    }
    if let Some((prod, arg)) = integer_shift_product(a, b) {
        return Ok(make(prod.to_c64(), C64::new(prod.ln_abs(), arg)));
    }
    let log_value = ln_gamma_ratio(a, b)?;
    Ok(make(log_value.exp(), log_value))
}

/// Euler Beta function B(u,v) = Γ(u)Γ(v)/Γ(u+v) on Re u, Re v > 0.
pub fn beta_function(u: C64, v: C64) -> Result<C64> {
    if u.re <= 0.0 || v.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Beta function needs Re u > 0 and Re v > 0 (got {u}, {v})"
        )));
    }
    Ok((ln_gamma(u)? + ln_gamma_ratio(v, u + v)?).exp())
}

/// Storage mode of a kernel table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelScale {
    Direct,
    LogScaled,
}

#[derive(Clone, Debug, PartialEq)]
enum KernelStorage {
    Direct(Vec<C64>),
    LogScaled(Vec<ScaledComplex>),
}

/// Values k^α(0..=N) of the Cesàro kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTable {
    alpha: C64,
    storage: KernelStorage,
}

const DIRECT_RANGE: (f64, f64) = (1e-300, 1e300);

impl KernelTable {
    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn max_index(&self) -> usize {
        match &self.storage {
            KernelStorage::Direct(v) => v.len() - 1,
            KernelStorage::LogScaled(v) => v.len() - 1,
        }
    }

    pub fn scale(&self) -> KernelScale {
        match self.storage {
            KernelStorage::Direct(_) => KernelScale::Direct,
            KernelStorage::LogScaled(_) => KernelScale::LogScaled,
        }
    }

    /// k^α(n) as a plain double (may over/underflow for log-scaled tables).
    pub fn value(&self, n: usize) -> C64 {
        match &self.storage {
            KernelStorage::Direct(v) => v[n],
            KernelStorage::LogScaled(v) => v[n].to_c64(),
        }
    }

    pub fn scaled(&self, n: usize) -> ScaledComplex {
        match &self.storage {
            KernelStorage::Direct(v) => ScaledComplex::from_c64(v[n]),
            KernelStorage::LogScaled(v) => v[n],
        }
    }

    pub fn to_vec(&self) -> Vec<C64> {
        (0..=self.max_index()).map(|n| self.value(n)).collect()
    }
}

fn negative_integer_order(alpha: C64) -> Option<usize> {
    if is_nonpositive_integer(alpha) {
        Some((-alpha.re) as usize)
    } else {
        None
    }
}

/// Kernel table on 0..=N via k(0) = 1, k(n) = k(n−1)(n−1+α)/n.
pub fn cesaro_kernel(alpha: C64, n_max: usize) -> KernelTable {
    let cutoff = negative_integer_order(alpha);
    let mut scaled = Vec::with_capacity(n_max + 1);
    let mut cur = ScaledComplex::from_c64(ONE);
    let mut in_range = true;
    for n in 0..=n_max {
        if n > 0 {
            cur = match cutoff {
                Some(c) if n > c => ScaledComplex::from_c64(ZERO),
                _ => cur.mul((alpha + (n - 1) as f64) / n as f64),
            };
        }
        if !cur.is_zero() {
            let l = cur.ln_abs();
            if l < DIRECT_RANGE.0.ln() || l > DIRECT_RANGE.1.ln() {
                in_range = false;
            }
        }
        scaled.push(cur);
    }
    let storage = if in_range {
        KernelStorage::Direct(scaled.iter().map(|s| s.to_c64()).collect())
    } else {
        KernelStorage::LogScaled(scaled)
    };
    KernelTable { alpha, storage }
}

/// Plain-double kernel values k^α(0..len) for complex order.
pub fn kernel_values(alpha: C64, len: usize) -> Vec<C64> {
    let cutoff = negative_integer_order(alpha);
    let mut out = Vec::with_capacity(len);
    let mut cur = ONE;
    for n in 0..len {
        if n > 0 {
            cur = match cutoff {
                Some(c) if n > c => ZERO,
                _ => cur * (alpha + (n - 1) as f64) / n as f64,
            };
        }
        out.push(cur);
    }
    out
}

/// Plain-double kernel values k^α(0..len) for real order.
pub fn kernel_values_real(alpha: f64, len: usize) -> Vec<f64> {
    let cutoff = negative_integer_order(C64::new(alpha, 0.0));
    let mut out = Vec::with_capacity(len);
    // the running product is kept in double-double so values stay correctly
    // rounded out to large n
    let mut cur = DoubleDouble::new(1.0);
    for n in 0..len {
        if n > 0 {
            cur = match cutoff {
                Some(c) if n > c => DoubleDouble::new(0.0),
                _ => cur
                    .mul(DoubleDouble::new(alpha).add(DoubleDouble::new((n - 1) as f64)))
                    .div(DoubleDouble::new(n as f64)),
            };
        }
        out.push(cur.value());
    }
    out
}

/// First-order asymptote n^{α−1}/Γ(α) of k^α(n); relative error O(1/n).
pub fn kernel_asymptote(alpha: f64, n: usize) -> Result<C64> {
    if n == 0 {
        return Err(Error::Domain("kernel asymptote needs n >= 1".into()));
    }
    let (lg, sign) = ln_gamma_real(alpha)?;
    Ok(C64::new(sign * ((alpha - 1.0) * (n as f64).ln() - lg).exp(), 0.0))
}

/// Convolution (f∗g)(n) = Σ_{j≤n} f(n−j) g(j); support length |f|+|g|−1.
pub fn convolve(f: &FiniteSequence, g: &FiniteSequence) -> FiniteSequence {
    let (a, b) = (f.values(), g.values());
    if a.is_empty() || b.is_empty() {
        return FiniteSequence::new(Vec::new());
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == ZERO {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    FiniteSequence::new(out)
}
