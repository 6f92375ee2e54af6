//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Result;

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quad<const K: usize> {
    pub value: [f64; K],
    /// Kronrod–Gauss difference summed over the final partition, per component.
    pub error: [f64; K],
    pub evaluations: usize,
}

struct Piece<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: [f64; K],
    key: f64,
}

impl<const K: usize> PartialEq for Piece<K> {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}
impl<const K: usize> Eq for Piece<K> {}
impl<const K: usize> PartialOrd for Piece<K> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<const K: usize> Ord for Piece<K> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.total_cmp(&o.key)
    }
}

fn rule<const K: usize, F>(f: &mut F, a: f64, b: f64, scale: &[f64; K]) -> Result<Piece<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kron = [0.0; K];
    let mut gauss = [0.0; K];
    let fc = f(c)?;
    for i in 0..K {
        kron[i] = WGK[7] * fc[i];
        gauss[i] = WG[3] * fc[i];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx)?;
        let f2 = f(c + dx)?;
        for i in 0..K {
            let s = f1[i] + f2[i];
            kron[i] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * s;
            }
        }
    }
    let mut value = [0.0; K];
    let mut error = [0.0; K];
    let mut key: f64 = 0.0;
    for i in 0..K {
        value[i] = kron[i] * h;
        error[i] = ((kron[i] - gauss[i]) * h).abs();
        key = key.max(error[i] / scale[i]);
    }
    Ok(Piece {
        a,
        b,
        value,
        error,
        key,
    })
}

/// Integrate `f` over `[a, b]` (either orientation) until every
/// component's error estimate is below `tol[i]`, splitting at `breaks`
/// first. Stops after `max_pieces` subintervals and returns the best
/// estimate; callers compare `error` to their tolerance.
pub fn integrate<const K: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: [f64; K],
    max_pieces: usize,
) -> Result<Quad<K>>
where
    F: FnMut(f64) -> Result<[f64; K]>,
{
    if a == b {
        return Ok(Quad {
            value: [0.0; K],
            error: [0.0; K],
            evaluations: 0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut nodes = vec![lo];
    nodes.extend(cuts);
    nodes.push(hi);

    let scale = tol.map(|t| t.max(f64::MIN_POSITIVE));
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in nodes.windows(2) {
        heap.push(rule(&mut f, w[0], w[1], &scale)?);
        evaluations += 15;
    }
    loop {
        let mut err = [0.0; K];
        for p in heap.iter() {
            for (e, pe) in err.iter_mut().zip(&p.error) {
                *e += pe;
            }
        }
        let done = (0..K).all(|i| err[i] <= tol[i]);
        let exhausted = heap.peek().map_or(true, |p| p.key < 0.0);
        if done || exhausted || heap.len() >= max_pieces {
            let mut value = [0.0; K];
            // Sum small pieces first for a stable total.
            let mut pieces = heap.into_vec();
            pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
            for p in &pieces {
                for (v, pv) in value.iter_mut().zip(&p.value) {
                    *v += pv;
                }
            }
            return Ok(Quad {
                value: value.map(|v| sign * v),
                error: err,
                evaluations,
            });
        }
        let worst = heap.pop().expect("nonempty partition");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine resolution; keep it as is.
            let mut frozen = worst;
            frozen.key = -1.0;
            heap.push(frozen);
            continue;
        }
        heap.push(rule(&mut f, worst.a, mid, &scale)?);
        heap.push(rule(&mut f, mid, worst.b, &scale)?);
        evaluations += 30;
    }
}

/// Scalar convenience wrapper around [`integrate`].
pub fn integrate_scalar<F>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: f64, max_pieces: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let q = integrate(|x| f(x).map(|v| [v]), a, b, breaks, [tol], max_pieces)?;
    Ok((q.value[0], q.error[0]))
}
