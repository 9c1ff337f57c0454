//! Fixed Gauss–Legendre and adaptive Gauss–Kronrod (7/15) quadrature for
//! complex-valued integrands on finite intervals.

use num::complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const GAUSS_LEGENDRE_POINTS: usize = 10;

const GL_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights on the odd-indexed Kronrod nodes (1, 3, 5, 7).
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 40;

/// 10-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

/// Kronrod estimate on `[a, b]` with `|K15 − G7|` as error estimate.
pub fn gk15<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * GK_WEIGHTS[7];
    let mut gauss = fc * G7_WEIGHTS[3];
    for i in 0..7 {
        let pair = f(c - h * GK_NODES[i]) + f(c + h * GK_NODES[i]);
        kron += pair * GK_WEIGHTS[i];
        if i % 2 == 1 {
            gauss += pair * G7_WEIGHTS[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum of the accepted local error estimates.
    pub error: f64,
    pub evaluations: usize,
}

impl std::ops::Add for QuadResult {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            error: self.error + o.error,
            evaluations: self.evaluations + o.evaluations,
        }
    }
}

impl QuadResult {
    pub const ZERO: Self = Self {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
    };
}

/// Adaptive bisection on `[a, b]` until each piece meets its share of `tol`.
pub fn adaptive<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> QuadResult {
    let total = (b - a).abs().max(f64::MIN_POSITIVE);
    let mut out = QuadResult::ZERO;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, e) = gk15(f, lo, hi);
        out.evaluations += 15;
        let share = tol * (hi - lo).abs() / total;
        if e <= share || e <= 1e-15 * v.norm() || depth >= MAX_DEPTH {
            out.value += v;
            out.error += e;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    out
}

/// Splits `[a, b]` into equal panels no wider than `max_width` and integrates
/// each adaptively, in parallel.
pub fn integrate_panels<F>(f: &F, a: f64, b: f64, max_width: f64, tol: f64) -> QuadResult
where
    F: Fn(f64) -> Complex64 + Sync + ?Sized,
{
    if b <= a {
        return QuadResult::ZERO;
    }
    let panels = ((b - a) / max_width).ceil().max(1.0) as usize;
    let width = (b - a) / panels as f64;
    let per_panel = tol / panels as f64;
    (0..panels)
        .into_par_iter()
        .map(|i| {
            let lo = a + i as f64 * width;
            let hi = if i + 1 == panels { b } else { lo + width };
            adaptive(f, lo, hi, per_panel)
        })
        .reduce(|| QuadResult::ZERO, |x, y| x + y)
}

/// Integrates over consecutive intervals `[breaks[i], breaks[i+1]]`, sharing
/// `tol` in proportion to interval length.
pub fn integrate_breaks<F>(f: &F, breaks: &[f64], tol: f64) -> QuadResult
where
    F: Fn(f64) -> Complex64 + Sync + ?Sized,
{
    if breaks.len() < 2 {
        return QuadResult::ZERO;
    }
    let pieces: Vec<(f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1]))
        .collect();
    let n = pieces.len().max(1) as f64;
    pieces
        .into_par_iter()
        .map(|(lo, hi)| adaptive(f, lo, hi, tol / n))
        .reduce(|| QuadResult::ZERO, |x, y| x + y)
}

/// Breakpoints `c ± scale·2^j` around each centre, clipped to `[-limit, limit]`.
pub fn geometric_breaks(centres: &[f64], scale: f64, limit: f64) -> Vec<f64> {
    let mut pts = vec![-limit, limit];
    for &c in centres {
        if c.abs() <= limit {
            pts.push(c);
        }
        let mut d = scale;
        while d < 2.0 * limit {
            for p in [c - d, c + d] {
                if p.abs() < limit {
                    pts.push(p);
                }
            }
            d *= 2.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
