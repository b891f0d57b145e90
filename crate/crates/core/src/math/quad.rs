//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! The integrator is generic over the value type so the same routine serves
//! real moment integrals and the complex transform integrals of the affine
//! pricer. A semi-infinite upper limit (`b = f64::INFINITY`) is mapped onto
//! `[0, 1)` with `x = a + t / (1 - t)`; Kronrod nodes never touch `t = 1`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for moment integrals.
pub const MOMENT_TOL: f64 = 1e-10;
/// Default tolerance for Fourier inversion integrals.
pub const INVERSION_TOL: f64 = 1e-8;

const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;
const DEFAULT_REL_TOL: f64 = 1e-13;

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

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

#[derive(Debug, Clone, Copy)]
struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

/// 21-point Kronrod estimate with the QUADPACK error heuristic.
fn gk21<V: QuadValue, F: Fn(f64) -> V>(f: &F, a: f64, b: f64) -> Segment<V> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = V::zero();
    let mut kronrod = fc * WGK[10];
    let mut res_abs = fc.magnitude() * WGK[10];
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];

    for j in 0..5 {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        gauss = gauss + (f1 + f2) * WG[j];
        kronrod = kronrod + (f1 + f2) * WGK[k];
        res_abs += WGK[k] * (f1.magnitude() + f2.magnitude());
    }
    for j in 0..5 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[k] = f1;
        fv2[k] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[k];
        res_abs += WGK[k] * (f1.magnitude() + f2.magnitude());
    }

    let mean = kronrod * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for k in 0..10 {
        res_asc += WGK[k] * ((fv1[k] - mean).magnitude() + (fv2[k] - mean).magnitude());
    }

    let scale = half.abs();
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }

    Segment { a, b, value: kronrod * half, error: err }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive integrator. Converged when the error estimate is below
/// `max(tol, rel_tol * |value|)`; the default `rel_tol` only matters once `tol`
/// drops under the roundoff floor of the integral.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Integrator {
    pub fn new(tol: f64) -> Self {
        Self { tol, rel_tol: DEFAULT_REL_TOL, max_subdivisions: DEFAULT_MAX_SUBDIVISIONS }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol.max(0.0);
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n.max(1);
        self
    }

    /// Integrate `f` over `(a, b)`; `b` may be `f64::INFINITY`.
    pub fn integrate<V, F>(&self, f: F, a: f64, b: f64) -> Result<QuadResult<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
    {
        if !(self.tol > 0.0) {
            return Err(Error::invalid(format!("quadrature tolerance must be > 0, got {}", self.tol)));
        }
        if a.is_nan() || b.is_nan() || a.is_infinite() {
            return Err(Error::invalid(format!("unsupported integration limits ({a}, {b})")));
        }
        if b == f64::INFINITY {
            let mapped = |t: f64| {
                let one_minus = 1.0 - t;
                let x = a + t / one_minus;
                f(x) * (1.0 / (one_minus * one_minus))
            };
            return self.adapt(&mapped, 0.0, 1.0);
        }
        if a == b {
            return Ok(QuadResult { value: V::zero(), error: 0.0, evaluations: 0 });
        }
        if b < a {
            let r = self.adapt(&f, b, a)?;
            return Ok(QuadResult { value: r.value * -1.0, ..r });
        }
        self.adapt(&f, a, b)
    }

    fn adapt<V: QuadValue, F: Fn(f64) -> V>(&self, f: &F, a: f64, b: f64) -> Result<QuadResult<V>> {
        let mut segments = vec![gk21(f, a, b)];
        let mut evaluations = 21;
        loop {
            let (value, error) = segments
                .iter()
                .fold((V::zero(), 0.0), |(v, e), s| (v + s.value, e + s.error));
            if error <= self.tol.max(self.rel_tol * value.magnitude()) {
                return Ok(QuadResult { value, error, evaluations });
            }
            let worst = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .map(|(i, _)| i)
                .expect("at least one segment");
            let seg = segments[worst];
            let mid = 0.5 * (seg.a + seg.b);
            let exhausted = segments.len() >= self.max_subdivisions;
            let unsplittable = mid <= seg.a || mid >= seg.b;
            if exhausted || unsplittable || !error.is_finite() {
                return Err(Error::QuadratureNonConvergence {
                    estimate: value.magnitude(),
                    error_bound: error,
                });
            }
            segments[worst] = gk21(f, seg.a, mid);
            segments.push(gk21(f, mid, seg.b));
            evaluations += 42;
        }
    }
}

/// Integrate a real function over `(a, b)` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    Integrator::new(tol).integrate(f, a, b).map(|r| r.value)
}

/// Like [`integrate`] for an integrand that can fail; the first failure wins.
pub fn try_integrate<F: Fn(f64) -> Result<f64>>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let failed = std::cell::Cell::new(None);
    let value = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                let prev = failed.take();
                failed.set(prev.or(Some(e)));
                0.0
            }
        },
        a,
        b,
        tol,
    );
    match failed.take() {
        Some(e) => Err(e),
        None => value,
    }
}
