//! Certified tail sums over power-law center tails.
//!
//! An axial tail is a sequence of centers `(a_n, 0)` with `a_n = c·n^β`
//! for `n > N`. Everything the potential and chart code needs from the
//! tail reduces to the normalized moments
//!
//! `m_s = Σ_{n>N} (R/a_n)^s`,  `R = a_{N+1}`,
//!
//! which equal `(N+1)^{sβ} ζ(sβ, N+1)` and are evaluated by Euler–Maclaurin.
//! Normalizing by `R` keeps every quantity O(1) so high moments neither
//! overflow nor underflow.

use num_complex::Complex64;

use crate::potential::CertifiedValue;

/// Number of moments kept per table; with `|ζ|/R ≤ 1/2` this leaves
/// series remainders below `2^-60` relative.
pub const MAX_ORDER: usize = 64;

/// Largest ratio `|ξ|/R` at which tail expansions are attempted.
pub const MAX_RATIO: f64 = 0.5;

// B_2 .. B_18
const BERNOULLI: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// `a^σ ζ(σ, a) = Σ_{j≥0} (a/(a+j))^σ` for `σ > 1`, `a ≥ 1`, with an
/// absolute error bound.
///
/// Summed directly until the Euler–Maclaurin cut `b` exceeds `σ + 20`;
/// past that the correction terms shrink by a factor of at least 30 each,
/// so the first omitted one bounds the remainder.
pub fn scaled_hurwitz(sigma: f64, a: f64) -> (f64, f64) {
    assert!(sigma > 1.0 && a >= 1.0, "scaled_hurwitz needs σ > 1, a ≥ 1");
    let cut = (sigma + 20.0).max(a).ceil();
    let direct_terms = (cut - a).max(0.0).ceil() as usize;
    let mut direct = 0.0;
    // Summing smallest-first keeps the rounding error relative to the total.
    for j in (0..direct_terms).rev() {
        direct += (a / (a + j as f64)).powf(sigma);
    }
    let b = a + direct_terms as f64;
    let scale = (a / b).powf(sigma);

    let mut em = b / (sigma - 1.0) + 0.5;
    // rising = σ(σ+1)…(σ+2j−2); fact = (2j)!; bpow = b^{1−2j}
    let mut rising = sigma;
    let mut fact = 2.0;
    let mut bpow = 1.0 / b;
    let mut last = 0.0;
    let used = BERNOULLI.len() - 1;
    for (j, bern) in BERNOULLI.iter().enumerate() {
        let term = bern / fact * rising * bpow;
        if j == used {
            last = term.abs();
            break;
        }
        em += term;
        let k = (2 * j + 2) as f64;
        rising *= (sigma + k - 1.0) * (sigma + k);
        fact *= (k + 1.0) * (k + 2.0);
        bpow /= b * b;
    }
    let value = direct + scale * em;
    let err = 2.0 * scale * last + 4.0 * f64::EPSILON * value;
    (value, err)
}

/// Normalized moments of an axial power tail `a_n = c·n^β`, `n > N`.
#[derive(Debug, Clone)]
pub struct AxialMoments {
    /// `R = a_{N+1}`, the smallest tail center distance.
    pub radius: f64,
    /// `m[s] = Σ (R/a_n)^s` for `s = 1..=MAX_ORDER + 2`; `m[0]` is unused.
    pub m: Vec<f64>,
    /// Largest relative error over the table.
    pub rel_err: f64,
}

impl AxialMoments {
    pub fn new(scale: f64, exponent: f64, explicit: usize) -> Self {
        let a = (explicit + 1) as f64;
        let radius = scale * a.powf(exponent);
        let mut m = vec![0.0; MAX_ORDER + 3];
        let mut rel_err: f64 = 0.0;
        for (s, slot) in m.iter_mut().enumerate().skip(1) {
            let (v, e) = scaled_hurwitz(s as f64 * exponent, a);
            *slot = v;
            rel_err = rel_err.max(e / v);
        }
        Self { radius, m, rel_err }
    }

    /// `Σ_{n>N} 1/|ξ + λ_n|` for `ξ = (x, w)` with `|w| = w_abs`, via the
    /// Legendre (multipole) expansion about the origin. `None` if `|ξ|/R`
    /// is too large for `tol` to be met.
    pub fn inverse_distance_sum(&self, x: f64, w_abs: f64, tol: f64) -> Option<CertifiedValue> {
        let r = x.hypot(w_abs);
        let q = r / self.radius;
        if q > MAX_RATIO {
            return None;
        }
        let u = if r > 0.0 { -x / r } else { 0.0 };
        let goal = tol * self.radius;
        let (mut p_prev, mut p_cur) = (0.0, 1.0); // P_{k-1}, P_k
        let mut qk = 1.0;
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for k in 0..MAX_ORDER {
            let term = self.m[k + 1] * qk * p_cur;
            sum += term;
            abs_sum += term.abs();
            qk *= q;
            let remainder = self.m[1] * qk / (1.0 - q);
            if remainder <= goal {
                let bound = remainder + (self.rel_err + 4.0 * f64::EPSILON) * abs_sum;
                return Some(CertifiedValue::new(sum / self.radius, bound / self.radius));
            }
            let kf = k as f64;
            let p_next = ((2.0 * kf + 1.0) * u * p_cur - kf * p_prev) / (kf + 1.0);
            p_prev = p_cur;
            p_cur = p_next;
        }
        None
    }

    /// `S(x, w) = Σ_{n>N} log(P(a_n + x, w) / (2 a_n))` where
    /// `P(A, B) = |(A, B)| + A`. Differences of `S` give the tail of every
    /// log-sum used by the flow function and the charts.
    pub fn log_sum(&self, x: f64, w_abs: f64, tol: f64) -> Option<CertifiedValue> {
        let r = x.hypot(w_abs);
        if r / self.radius > MAX_RATIO {
            return None;
        }
        let q = x.abs() / self.radius;
        let y = x / self.radius;
        let goal = tol * 0.25;

        // Σ log(1 + x/a_n) = Σ_k (−1)^{k+1} y^k m_k / k
        let mut lin = 0.0;
        let mut lin_abs = 0.0;
        let mut yk = 1.0;
        let mut lin_rem = f64::INFINITY;
        for k in 1..=MAX_ORDER {
            yk *= y;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let term = sign * yk * self.m[k] / k as f64;
            lin += term;
            lin_abs += term.abs();
            lin_rem = self.m[1] * q.powi(k as i32 + 1) / ((k as f64 + 1.0) * (1.0 - q));
            if lin_rem <= goal {
                break;
            }
        }
        if lin_rem > goal {
            return None;
        }

        // Σ h(u_n) with u_n = w²/(a_n + x)², h(u) = log((1 + √(1+u))/2)
        // and u/4 − 3u²/32 ≤ h(u) ≤ u/4.
        let w2 = w_abs * w_abs / (self.radius * self.radius);
        let mut quad = 0.0;
        let mut quad_abs = 0.0;
        let mut quad_rem = 0.0;
        if w2 > 0.0 {
            let mut mk = 1.0; // (−y)^k
            quad_rem = f64::INFINITY;
            for k in 0..MAX_ORDER {
                let term = (k as f64 + 1.0) * mk * self.m[k + 2];
                quad += term;
                quad_abs += term.abs();
                mk *= -y;
                let kk = k as f64;
                let tail = q.powi(k as i32 + 1) * ((kk + 2.0) - (kk + 1.0) * q) / ((1.0 - q) * (1.0 - q));
                quad_rem = 0.25 * w2 * self.m[1] * tail;
                if quad_rem <= goal {
                    break;
                }
            }
            if quad_rem > goal {
                return None;
            }
            quad *= 0.25 * w2;
            quad_abs *= 0.25 * w2;
        }
        let h_gap = 3.0 / 32.0 * w2 * w2 * self.m[4] / (1.0 - q).powi(4);

        let value = lin + quad - 0.5 * h_gap;
        let bound = lin_rem + quad_rem + 0.5 * h_gap + (self.rel_err + 4.0 * f64::EPSILON) * (lin_abs + quad_abs);
        Some(CertifiedValue::new(value, bound))
    }
}

/// `P(A, B) = √(A² + |B|²) + A`, without cancellation for `A < 0`.
pub fn p_plus(a: f64, b_abs: f64) -> f64 {
    let h = a.hypot(b_abs);
    if a >= 0.0 {
        h + a
    } else {
        b_abs * b_abs / (h - a)
    }
}

/// `Q(A, B) = P(−A, B)`; note `P·Q = |B|²`.
pub fn q_minus(a: f64, b_abs: f64) -> f64 {
    p_plus(-a, b_abs)
}

/// `ln P(A, B)`, finite whenever `P > 0` even if `P` underflows.
pub fn ln_p(a: f64, b_abs: f64) -> f64 {
    let h = a.hypot(b_abs);
    if a >= 0.0 {
        (h + a).ln()
    } else {
        2.0 * b_abs.ln() - (h - a).ln()
    }
}

/// `ln Q(A, B)`.
pub fn ln_q(a: f64, b_abs: f64) -> f64 {
    ln_p(-a, b_abs)
}

/// `ln P(A₁, B₁) − ln P(A₀, B₀)`.
///
/// When both `A` are positive the difference is formed as
/// `ln_1p((P₁ − P₀)/P₀)` with `P₁ − P₀` expanded algebraically, so nearby
/// arguments keep full relative precision; otherwise the logs are
/// subtracted directly (they then differ by O(1) or more).
pub fn ln_p_diff(a1: f64, b1: Complex64, a0: f64, b0: Complex64) -> f64 {
    let (n1, n0) = (b1.norm(), b0.norm());
    if a1 > 0.0 && a0 > 0.0 {
        let h1 = a1.hypot(n1);
        let h0 = a0.hypot(n0);
        let da = a1 - a0;
        // |B₁|² − |B₀|² = Re((B₁ − B₀)·conj(B₁ + B₀))
        let db2 = ((b1 - b0) * (b1 + b0).conj()).re;
        let dp = da + (da * (a1 + a0) + db2) / (h1 + h0);
        (dp / (h0 + a0)).ln_1p()
    } else {
        ln_p(a1, n1) - ln_p(a0, n0)
    }
}

/// `ln Q(A₁, B₁) − ln Q(A₀, B₀)`.
pub fn ln_q_diff(a1: f64, b1: Complex64, a0: f64, b0: Complex64) -> f64 {
    ln_p_diff(-a1, b1, -a0, b0)
}

/// `Π (1 + x_n)` evaluated as `exp Σ log(1 + x_n)`.
///
/// Each logarithm uses `ln_1p` on `|1+x|² = 1 + (2 Re x + |x|²)`, so tiny
/// factors lose no digits; the sum of logs converges whenever `Σ|x_n|`
/// does. Returns `None` if some `x_n = −1`.
pub fn product_one_plus(xs: &[Complex64]) -> Option<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for x in xs {
        let re = x.re.mul_add(2.0, x.norm_sqr());
        if re <= -1.0 {
            return None;
        }
        acc += Complex64::new(0.5 * re.ln_1p(), x.im.atan2(1.0 + x.re));
    }
    Some(acc.exp())
}
