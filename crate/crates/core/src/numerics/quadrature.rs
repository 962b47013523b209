//! Adaptive Gauss–Kronrod quadrature and a decade-by-decade divergence probe.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("no convergence after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    NoConvergence { subdivisions: usize, estimate: f64, error: f64 },
    #[error("invalid interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("invalid quadrature settings: {0}")]
    BadSettings(&'static str),
}

/// Settings for [`Quadrature::integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

/// Value and error estimate of a converged integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

/// One 21-point Kronrod panel; the abscissae never touch the endpoints, which
/// is what lets integrable endpoint singularities through.
fn kronrod21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64), QuadratureError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite { x })
        }
    };
    let fc = eval(center)?;
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    Ok((res_k * half, rescale_error(err, res_abs * half.abs(), res_asc * half.abs())))
}

impl Quadrature {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Quadrature { abs_tol, rel_tol, ..Default::default() }
    }

    fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(QuadratureError::BadSettings("tolerances must be non-negative"));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(QuadratureError::BadSettings("at least one tolerance must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::BadSettings("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Globally adaptive integration of `f` over `[lo, hi]`: the panel with the
    /// largest error estimate is bisected until the summed error falls below
    /// `max(abs_tol, rel_tol·|value|)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<Integral, QuadratureError> {
        self.validate()?;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(QuadratureError::BadInterval { lo, hi });
        }
        let (v, e) = kronrod21(&f, lo, hi)?;
        let mut heap = BinaryHeap::new();
        heap.push(Panel { lo, hi, value: v, error: e });
        let (mut total, mut total_err) = (v, e);
        let mut subdivisions = 1;
        loop {
            if total_err <= self.abs_tol.max(self.rel_tol * total.abs()) {
                // Re-sum to shed accumulated rounding from the running totals.
                let value = heap.iter().map(|p| p.value).sum();
                let error = heap.iter().map(|p| p.error).sum();
                return Ok(Integral { value, error, subdivisions });
            }
            if subdivisions >= self.max_subdivisions {
                return Err(QuadratureError::NoConvergence { subdivisions, estimate: total, error: total_err });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.lo + worst.hi);
            if mid <= worst.lo || mid >= worst.hi {
                // Panel can no longer be split in floating point.
                return Err(QuadratureError::NoConvergence { subdivisions, estimate: total, error: total_err });
            }
            let (v1, e1) = kronrod21(&f, worst.lo, mid)?;
            let (v2, e2) = kronrod21(&f, mid, worst.hi)?;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            heap.push(Panel { lo: worst.lo, hi: mid, value: v1, error: e1 });
            heap.push(Panel { lo: mid, hi: worst.hi, value: v2, error: e2 });
            subdivisions += 1;
        }
    }

    /// Integral over `[lo, ∞)` through the map x = lo + u/(1−u).
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(&self, f: F, lo: f64) -> Result<Integral, QuadratureError> {
        let g = |u: f64| {
            let w = 1.0 - u;
            f(lo + u / w) / (w * w)
        };
        self.integrate(g, 0.0, 1.0)
    }
}

/// Convenience wrapper using the default tolerances.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, q: &Quadrature) -> Result<f64, QuadratureError> {
    q.integrate(f, lo, hi).map(|r| r.value)
}

/// Where a divergence-aware integral is heading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Toward {
    PlusInfinity,
    MinusInfinity,
    /// A finite endpoint where the integrand may blow up.
    Point(f64),
}

/// Verdict of [`DivergenceProbe::integrate_toward`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Growth {
    Converges {
        value: f64,
        tail_estimate: f64,
    },
    /// `exponent` is log10 of the ratio of successive decade increments: 0 for
    /// logarithmic growth, positive for power-law growth.
    Diverges {
        partial: f64,
        exponent: f64,
        decades: usize,
    },
}

impl Growth {
    pub fn diverges(&self) -> bool {
        matches!(self, Growth::Diverges { .. })
    }
    pub fn value(&self) -> Option<f64> {
        match self {
            Growth::Converges { value, .. } => Some(*value),
            Growth::Diverges { .. } => None,
        }
    }
}

/// Integrates a one-signed integrand decade by decade toward a limit and
/// watches how the per-decade increments scale.
///
/// For an integrand behaving like |x|^(−p) the increments scale by 10^(1−p)
/// per decade; the probe reports divergence once that exponent stays above
/// `-threshold` over `window` decades or the partial sum passes `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceProbe {
    pub quadrature: Quadrature,
    pub cap: f64,
    pub min_decades: usize,
    pub max_decades: usize,
    pub window: usize,
    pub threshold: f64,
}

impl Default for DivergenceProbe {
    fn default() -> Self {
        DivergenceProbe {
            quadrature: Quadrature::default(),
            cap: 1e12,
            min_decades: 6,
            max_decades: 30,
            window: 3,
            threshold: 0.01,
        }
    }
}

impl DivergenceProbe {
    pub fn with_cap(cap: f64) -> Self {
        DivergenceProbe { cap, ..Default::default() }
    }

    fn edge(from: f64, toward: Toward, k: usize) -> f64 {
        let scale = 10f64.powi(k as i32);
        match toward {
            Toward::PlusInfinity => from + from.abs().max(1.0) * (scale - 1.0),
            Toward::MinusInfinity => from - from.abs().max(1.0) * (scale - 1.0),
            Toward::Point(x) => x + (from - x) / scale,
        }
    }

    pub fn integrate_toward<F: Fn(f64) -> f64>(
        &self,
        f: F,
        from: f64,
        toward: Toward,
    ) -> Result<Growth, QuadratureError> {
        if let Toward::Point(x) = toward {
            if x == from {
                return Ok(Growth::Converges { value: 0.0, tail_estimate: 0.0 });
            }
        }
        let mut partial = 0.0;
        let mut increments: Vec<f64> = Vec::new();
        let mut last_piece = 0.0;
        let mut exponents: Vec<f64> = Vec::new();
        for k in 0..self.max_decades {
            let (a, b) = (Self::edge(from, toward, k), Self::edge(from, toward, k + 1));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            if !(hi - lo > 1e4 * f64::EPSILON * lo.abs().max(hi.abs())) {
                // The panel is at roundoff width and nodes would land on the
                // endpoint; classify what we have.
                break;
            }
            let piece = self.quadrature.integrate(&f, lo, hi)?.value;
            let d = piece.abs();
            partial += piece;
            last_piece = piece;
            if let Some(&prev) = increments.last() {
                if prev > 0.0 && d > 0.0 {
                    exponents.push((d / prev).log10());
                } else if d == 0.0 {
                    exponents.push(f64::NEG_INFINITY);
                }
            }
            increments.push(d);
            let decades = k + 1;
            if partial.abs() > self.cap {
                let exponent = exponents.last().copied().unwrap_or(f64::NAN);
                return Ok(Growth::Diverges { partial, exponent, decades });
            }
            if decades >= self.min_decades && exponents.len() >= self.window {
                let recent = &exponents[exponents.len() - self.window..];
                if recent.iter().all(|&e| e > -self.threshold) {
                    let exponent = recent.iter().sum::<f64>() / self.window as f64;
                    return Ok(Growth::Diverges { partial, exponent, decades });
                }
                if recent.iter().all(|&e| e < -self.threshold) {
                    let worst = recent.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let ratio = 10f64.powf(worst);
                    let tail = d * ratio / (1.0 - ratio);
                    let tol = self.quadrature.abs_tol.max(self.quadrature.rel_tol * partial.abs());
                    if tail <= tol {
                        return Ok(Growth::Converges { value: partial, tail_estimate: tail });
                    }
                }
            }
        }
        let recent = &exponents[exponents.len().saturating_sub(self.window)..];
        let mean = recent.iter().sum::<f64>() / recent.len().max(1) as f64;
        if mean > -self.threshold {
            Ok(Growth::Diverges { partial, exponent: mean, decades: self.max_decades })
        } else {
            // Stopped before the tail fell below tolerance: extrapolate the
            // geometric decay, which is exact for a power-law end.
            let ratio = 10f64.powf(mean);
            let tail = last_piece * ratio / (1.0 - ratio);
            Ok(Growth::Converges { value: partial + tail, tail_estimate: tail.abs() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_sqrt_singularity() {
        let q = Quadrature::default();
        assert!((integrate(|x| x, 0.0, 1.0, &q).unwrap() - 0.5).abs() < 1e-14);
        let r = q.integrate(|x: f64| x.powf(-0.5), 0.0, 1.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn log_singularity() {
        let q = Quadrature::default();
        let v = integrate(|x: f64| x.ln(), 0.0, 1.0, &q).unwrap();
        assert!((v + 1.0).abs() < 1e-9);
    }

    #[test]
    fn nan_is_reported() {
        let q = Quadrature::default();
        let e = q.integrate(|x: f64| (x - 0.5).sqrt(), 0.0, 1.0).unwrap_err();
        assert!(matches!(e, QuadratureError::NonFinite { .. }));
    }

    #[test]
    fn semi_infinite() {
        let q = Quadrature::default();
        let r = q.integrate_to_infinity(|x: f64| (-x).exp(), 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn probe_classifies_power_laws() {
        let p = DivergenceProbe::default();
        assert!(p.integrate_toward(|x: f64| 1.0 / x, 1.0, Toward::PlusInfinity).unwrap().diverges());
        assert!(p.integrate_toward(|x: f64| 1.0 / x, 1.0, Toward::Point(0.0)).unwrap().diverges());
        let c = p.integrate_toward(|x: f64| x.powi(-2), 1.0, Toward::PlusInfinity).unwrap();
        assert!((c.value().unwrap() - 1.0).abs() < 1e-8, "{c:?}");
        let c = p.integrate_toward(|x: f64| x.powf(-0.5), 1.0, Toward::Point(0.0)).unwrap();
        assert!((c.value().unwrap() - 2.0).abs() < 1e-8, "{c:?}");
        match p.integrate_toward(|_| 1.0, -1.0, Toward::MinusInfinity).unwrap() {
            Growth::Diverges { exponent, .. } => assert!((exponent - 1.0).abs() < 0.05),
            g => panic!("{g:?}"),
        }
    }
}
