//! Adaptive Gauss–Kronrod quadrature.
//!
//! Used as the independent numerical reference for every series formula in
//! [`analytics`](crate::analytics). Integrals over `(0, ∞)` are taken in the
//! log coordinate `v = ln x`; for BIR integrands this is the substitution
//! `u = θ/x²` up to an affine change, which turns the essential singularity
//! at the origin into a double-exponential decay and the power-law upper
//! tail into an exponential one.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances for [`integrate`] and [`integrate_positive`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Number of equal panels the range is cut into before refinement.
    pub initial_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_intervals: 4000, initial_panels: 48 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Segment { lo, hi, value: kron * half, error: ((kron - gauss) * half).abs() }
}

/// Globally adaptive G7–K15 quadrature of `f` over the finite `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(crate::error::domain("integrate needs finite limits"));
    }
    if lo == hi {
        return Ok(QuadResult { value: 0.0, error: 0.0, intervals: 0 });
    }
    let panels = opts.initial_panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut heap: BinaryHeap<Segment> = (0..panels)
        .map(|i| {
            let a = lo + width * i as f64;
            let b = if i + 1 == panels { hi } else { lo + width * (i + 1) as f64 };
            kronrod(&f, a, b)
        })
        .collect();
    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(crate::error::domain("integrand produced a non-finite value"));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadResult { value: total, error: err, intervals: heap.len() });
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::NoConvergence {
                what: "adaptive quadrature",
                iterations: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Interval collapsed to adjacent floats; accept what we have.
            heap.push(Segment { error: 0.0, ..worst });
            continue;
        }
        heap.push(kronrod(&f, worst.lo, mid));
        heap.push(kronrod(&f, mid, worst.hi));
    }
}

/// ∫ f(x) dx over `[lo, hi]` with `0 ≤ lo < hi ≤ ∞`, integrated in `v = ln x`.
///
/// `scale` is a characteristic location (for BIR, `√θ`) used to start the
/// search for the truncation points of the infinite ends.
pub fn integrate_positive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    scale: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(lo >= 0.0 && hi > lo) {
        return Err(crate::error::domain(format!("bad positive-axis limits [{lo}, {hi}]")));
    }
    let g = |v: f64| {
        let x = v.exp();
        let y = f(x) * x;
        if y.is_nan() {
            0.0
        } else {
            y
        }
    };
    let centre = if scale > lo && scale < hi {
        scale.ln()
    } else if hi.is_finite() {
        if lo > 0.0 {
            0.5 * (lo.ln() + hi.ln())
        } else {
            hi.ln() - 1.0
        }
    } else {
        lo.ln() + 1.0
    };
    let v_lo = if lo > 0.0 { lo.ln() } else { tail_cut(&g, centre, -1.0) };
    let v_hi = if hi.is_finite() { hi.ln() } else { tail_cut(&g, centre, 1.0) };
    if v_hi <= v_lo {
        return Ok(QuadResult { value: 0.0, error: 0.0, intervals: 0 });
    }
    integrate(g, v_lo, v_hi, opts)
}

/// Walks from `start` in direction `dir` until the integrand has fallen
/// below 1e-22 of the largest value seen for several consecutive steps.
fn tail_cut<G: Fn(f64) -> f64>(g: &G, start: f64, dir: f64) -> f64 {
    const STEP: f64 = 0.5;
    const LIMIT: f64 = 700.0;
    let mut peak = g(start).abs();
    let mut v = start;
    let mut quiet = 0;
    while v.abs() < LIMIT {
        v += dir * STEP;
        let y = g(v).abs();
        peak = peak.max(y);
        if y <= 1e-22 * peak {
            quiet += 1;
            if quiet >= 6 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    v
}
