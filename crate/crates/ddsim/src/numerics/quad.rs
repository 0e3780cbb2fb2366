//! Globally adaptive Gauss-Kronrod quadrature over a list of segments.
//!
//! The caller supplies breakpoints (PSD support edges, filter zeros);
//! the worst segment is bisected until the summed error estimate meets the
//! tolerance. Deterministic for fixed inputs.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// 15-point Gauss-Kronrod abscissae and weights on [-1, 1] (QUADPACK dqk15).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// One Gauss-Kronrod 15-point pass over [a, b]: (integral, error estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        let fsum = f1 + f2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
    }
    let value = res_kronrod * half;
    let err = ((res_kronrod - res_gauss) * half).abs();
    (value, err)
}

/// Append the 15 Kronrod abscissae and weights for [a, b] to `xs`/`ws`,
/// for callers that freeze a node set and re-integrate many integrands.
pub fn gk15_nodes(a: f64, b: f64, xs: &mut Vec<f64>, ws: &mut Vec<f64>) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    xs.push(center);
    ws.push(WGK[7] * half);
    for j in 0..7 {
        let x = half * XGK[j];
        xs.push(center - x);
        ws.push(WGK[j] * half);
        xs.push(center + x);
        ws.push(WGK[j] * half);
    }
}

#[derive(Debug)]
struct Segment {
    err: f64,
    value: f64,
    a: f64,
    b: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
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
        // max-heap on error; tie-break on the left edge for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Quadrature outcome with the final error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: f64,
    pub abs_error: f64,
    pub segments: usize,
}

/// Integrate `f` over the union of `[breakpoints[i], breakpoints[i+1]]`,
/// bisecting the worst segment until
/// `sum(err) <= max(rel_tol * |value|, abs_floor)`.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_floor: f64,
    max_segments: usize,
) -> Result<QuadOutcome> {
    if breakpoints.len() < 2 {
        return Err(Error::invalid("quadrature needs at least one segment"));
    }
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() + 64);
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let (v, e) = gk15(f, a, b);
        total += v;
        total_err += e;
        heap.push(Segment { err: e, value: v, a, b });
    }
    let mut n = heap.len();
    while total_err > f64::max(rel_tol * total.abs(), abs_floor) && n < max_segments {
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; keep its estimate
            heap.push(Segment { err: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment { err: e1, value: v1, a: worst.a, b: mid });
        heap.push(Segment { err: e2, value: v2, a: mid, b: worst.b });
        n += 1;
    }
    let tol = f64::max(rel_tol * total.abs(), abs_floor);
    if total_err > tol && total_err > 0.0 {
        return Err(Error::QuadratureNotConverged {
            requested: rel_tol,
            achieved: total_err / total.abs().max(f64::MIN_POSITIVE),
        });
    }
    Ok(QuadOutcome { value: total, abs_error: total_err, segments: n })
}
