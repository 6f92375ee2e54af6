//! Holomorphic charts `F^φ = (f^{o,φ}, μ_ℂ): X(λ)^s → ℂ× × ℂ`.
//!
//! With `A_n = ζ_ℝ + λ_{n,ℝ}`, `B_n = ζ_ℂ + λ_{n,ℂ}` and
//! `P = |v| + A`, `Q = |v| − A` (`|v|² = A² + |B|²`) the moduli of a point
//! over `ζ` are `|z_n|² = P/2`, `|w_n|² = Q/2`, and
//!
//! `L(ζ) = log|f^o|² = Σ_{λ_{n,ℝ}>0} log(P_n(ζ)/P_n(0)) − Σ_{λ_{n,ℝ}<0} log(Q_n(ζ)/Q_n(0))`.
//!
//! `L` increases in `ζ_ℝ` with derivative `Σ 1/|ζ+λ_n| = 4Φ`. On a center's
//! own fiber one of `P, Q` vanishes; writing `P·Q = |B|²` and dropping the
//! `2 log|B|` factors gives the regularised `L_reg` and the local order
//! `k` with `|f^o| = e^{L_reg/2}·|B|^{−k}`, which the multiplier's zero or
//! pole of order `k` cancels. Points are `(ζ, θ)` with
//! `f = e^{L_reg/2 + iθ}·φ_reg(q)` in every chart through them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::{f_lambda, inverse_distance_sum, CertifiedValue};
use crate::quotient::{base_gap, class_of, k_divisor, CombinatorialSection, Gap, IntegerDivisor, Position};
use crate::roots::increasing_root;
use crate::series::{ln_p, ln_p_diff, ln_q, ln_q_diff, p_plus, q_minus};
use crate::types::{Configuration, FiberKey, ImHPoint, Tail, TruncatedRepresentative};

/// `Λ_n = α_n + β_n j` with `Λ_n i Λ̄_n = λ_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterSplit {
    #[serde(serialize_with = "complex_vec::serialize")]
    pub alpha: Vec<Complex64>,
    #[serde(serialize_with = "complex_vec::serialize")]
    pub beta: Vec<Complex64>,
}

/// `(α, β)` for one center: `α > 0` when `λ_ℝ > 0`, `β > 0` when `λ_ℝ < 0`.
pub fn split_center(lambda: ImHPoint, index: usize) -> Result<(Complex64, Complex64)> {
    let r = lambda.norm();
    if lambda.t > 0.0 {
        let a = (0.5 * (r + lambda.t)).sqrt();
        Ok((Complex64::new(a, 0.0), lambda.z / (2.0 * a)))
    } else if lambda.t < 0.0 {
        let b = (0.5 * (r - lambda.t)).sqrt();
        Ok((lambda.z / (2.0 * b), Complex64::new(b, 0.0)))
    } else {
        Err(Error::NotChartAdmissible { index })
    }
}

/// Split the first `count` centers (all of them for finite lists).
pub fn split_centers(config: &Configuration, count: usize) -> Result<CenterSplit> {
    let n = config.listed().map_or(count, |c| c.len().min(count));
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for i in 1..=n {
        let (a, b) = split_center(config.center(i), i)?;
        alpha.push(a);
        beta.push(b);
    }
    Ok(CenterSplit { alpha, beta })
}

/// `(|z_n|², |w_n|²)` over `ζ`.
pub fn moduli_from_moment(config: &Configuration, zeta: ImHPoint, n: usize) -> (f64, f64) {
    let c = config.center(n);
    let a = zeta.t + c.t;
    let b = (zeta.z + c.z).norm();
    (0.5 * p_plus(a, b), 0.5 * q_minus(a, b))
}

/// The first `count` entries of a point over `ζ`, gauge-fixed so `z_n ≥ 0`
/// (or `w_n ≥ 0` where `z_n = 0`). Then `2 z_n w_n − λ_{n,ℂ} = ζ_ℂ`.
pub fn representative_at(config: &Configuration, zeta: ImHPoint, count: usize) -> Result<TruncatedRepresentative> {
    let n = config.listed().map_or(count, |c| c.len().min(count));
    let entries = (1..=n)
        .map(|i| {
            let (zz, ww) = moduli_from_moment(config, zeta, i);
            let b = zeta.z + config.center(i).z;
            if zz > 0.0 {
                let z = zz.sqrt();
                (Complex64::new(z, 0.0), b / (2.0 * z))
            } else {
                (Complex64::new(0.0, 0.0), Complex64::new(ww.sqrt(), 0.0))
            }
        })
        .collect();
    TruncatedRepresentative::new(config, entries)
}

/// A point of `X(λ)*`: base point and fiber phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManifoldPoint {
    pub zeta: ImHPoint,
    pub theta: f64,
}

impl ManifoldPoint {
    pub fn new(zeta: ImHPoint, theta: f64) -> Self {
        Self {
            zeta,
            theta: wrap(theta),
        }
    }
}

/// Angle in `[−π, π)`.
pub fn wrap(a: f64) -> f64 {
    a - TAU * ((a + PI) / TAU).floor()
}

/// `φ(q) = exp(Σ_j c_j q^j) · Π (q − z)^{k(z)}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Multiplier {
    pub divisor: IntegerDivisor,
    /// Coefficients `c_0, c_1, …` of the exponent.
    #[serde(default, with = "complex_vec")]
    pub unit: Vec<Complex64>,
}

mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<[f64; 2]>::deserialize(d)?
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

impl Multiplier {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_divisor(divisor: IntegerDivisor) -> Self {
        Self { divisor, unit: vec![] }
    }

    pub fn with_unit(mut self, coefficients: Vec<Complex64>) -> Self {
        self.unit = coefficients;
        self
    }

    pub fn product(&self, other: &Self) -> Self {
        let n = self.unit.len().max(other.unit.len());
        let c = |v: &[Complex64], i: usize| v.get(i).copied().unwrap_or_default();
        Self {
            divisor: self.divisor.sum(&other.divisor),
            unit: (0..n).map(|i| c(&self.unit, i) + c(&other.unit, i)).collect(),
        }
    }

    pub fn order_at(&self, q: Complex64) -> i64 {
        self.divisor.get(q)
    }

    /// `lim_{w→q} φ(w)(w − q)^{−k(q)}`: the value with the factor at `q`
    /// removed; equals `φ(q)` off the support.
    pub fn eval_reg(&self, q: Complex64) -> Complex64 {
        let key = FiberKey::new(q);
        let exponent = self
            .unit
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * q + c);
        let mut v = exponent.exp();
        for (z, k) in &self.divisor.0 {
            if *z != key {
                v *= (q - z.z()).powi(*k as i32);
            }
        }
        v
    }

    /// `φ(q)`, or `None` at a zero or pole.
    pub fn eval(&self, q: Complex64) -> Option<Complex64> {
        (self.order_at(q) == 0).then(|| self.eval_reg(q))
    }
}

/// `L_reg(ζ)` with its certified error and the local order `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogModulus {
    pub value: f64,
    pub error_bound: f64,
    pub order: i64,
}

pub fn log_modulus(config: &Configuration, zeta: ImHPoint, eps: f64) -> Result<LogModulus> {
    if !zeta.is_finite() {
        return Err(Error::InvalidArgument(format!("point {zeta} is not finite")));
    }
    let o = config.offset();
    let xi = zeta + o;
    let key = FiberKey::new(zeta.z);
    for rung in 0..config.rungs().len() {
        let tail = match config.tail(rung) {
            Tail::Empty => CertifiedValue::exact(0.0),
            Tail::Axial(m) => {
                let (Some(a), Some(b)) = (
                    m.log_sum(xi.t, xi.z.norm(), 0.5 * eps),
                    m.log_sum(o.t, o.z.norm(), 0.5 * eps),
                ) else {
                    continue;
                };
                a - b
            }
            Tail::Declared { .. } => {
                return Err(Error::TailUnresolved(
                    "charts need every center listed or a closed-form tail".into(),
                ))
            }
        };
        let explicit = config.explicit(rung);
        let (mut sum, mut abs_sum, mut order) = (0.0, 0.0, 0i64);
        for n in 1..=explicit.len() {
            let l = explicit.get(n);
            let (a0, b0) = (l.t + o.t, l.z + o.z);
            if a0 == 0.0 {
                return Err(Error::NotChartAdmissible { index: n });
            }
            let on_fiber = FiberKey::new(config.fiber_point(n).0) == key;
            let a = xi.t + l.t;
            let b = if on_fiber { Complex64::new(0.0, 0.0) } else { xi.z + l.z };
            if on_fiber && a == 0.0 {
                return Err(Error::SingularPoint { point: zeta, index: n });
            }
            let term = match (a0 > 0.0, on_fiber && (a > 0.0) != (a0 > 0.0)) {
                (true, false) => ln_p_diff(a, b, a0, b0),
                (false, false) => -ln_q_diff(a, b, a0, b0),
                // Below a center with λ_ℝ > 0: log P = 2 log|B| − log Q.
                (true, true) => {
                    order -= 1;
                    -ln_q(a, 0.0) - ln_p(a0, b0.norm())
                }
                // Above a center with λ_ℝ < 0: −log Q = −2 log|B| + log P.
                (false, true) => {
                    order += 1;
                    ln_p(a, 0.0) + ln_q(a0, b0.norm())
                }
            };
            sum += term;
            abs_sum += term.abs();
        }
        let total = CertifiedValue::new(sum, 4.0 * f64::EPSILON * abs_sum) + tail;
        return Ok(LogModulus {
            value: total.value,
            error_bound: total.error_bound,
            order,
        });
    }
    Err(Error::TailUnresolved(format!("log-modulus tail at {zeta}")))
}

/// `Π_z (q − z)^{k_{o,s}(z)}`, the simplest multiplier for section `s`.
pub fn section_multiplier(config: &Configuration, s: &CombinatorialSection) -> Result<Multiplier> {
    Ok(Multiplier::from_divisor(k_divisor(
        config,
        &CombinatorialSection::base(),
        s,
        f64::INFINITY,
    )?))
}

/// Chart data for one section and multiplier `φ ∈ A(k_{o,s})`.
#[derive(Debug, Clone)]
pub struct Chart {
    pub config: Configuration,
    pub section: CombinatorialSection,
    pub multiplier: Multiplier,
}

impl Chart {
    pub fn new(config: &Configuration, section: CombinatorialSection, multiplier: Multiplier) -> Result<Self> {
        section.validate(config)?;
        let expected = k_divisor(config, &CombinatorialSection::base(), &section, f64::INFINITY)?;
        let keys: std::collections::BTreeSet<FiberKey> =
            expected.0.keys().chain(multiplier.divisor.0.keys()).copied().collect();
        for key in keys {
            let (e, f) = (expected.get(key.z()), multiplier.divisor.get(key.z()));
            if e != f {
                return Err(Error::WrongDivisor {
                    z: key.z(),
                    expected: e,
                    found: f,
                });
            }
        }
        Ok(Self {
            config: config.clone(),
            section,
            multiplier,
        })
    }

    /// Chart of `s` with the multiplier [`section_multiplier`].
    pub fn canonical(config: &Configuration, section: CombinatorialSection) -> Result<Self> {
        let m = section_multiplier(config, &section)?;
        Self::new(config, section, m)
    }

    /// The base chart `s = o_λ`, `φ = 1`.
    pub fn base(config: &Configuration) -> Self {
        Self {
            config: config.clone(),
            section: CombinatorialSection::base(),
            multiplier: Multiplier::one(),
        }
    }

    fn on_section(&self, point: &ManifoldPoint) -> Result<()> {
        let class = class_of(&self.config, point.zeta)?;
        if let Position::Fixed(index) = class.position {
            return Err(Error::SingularPoint {
                point: point.zeta,
                index,
            });
        }
        if !self.section.contains(&self.config, &class)? {
            return Err(Error::NotOnSection { z: class.z });
        }
        Ok(())
    }

    /// `f^{o,φ}(x)`.
    pub fn value(&self, point: &ManifoldPoint, eps: f64) -> Result<Complex64> {
        self.on_section(point)?;
        let q = FiberKey::new(point.zeta.z).z();
        let lm = log_modulus(&self.config, point.zeta, eps)?;
        let k = self.multiplier.order_at(q);
        if lm.order != k {
            return Err(Error::WrongDivisor {
                z: q,
                expected: lm.order,
                found: k,
            });
        }
        Ok(Complex64::from_polar((0.5 * lm.value).exp(), point.theta) * self.multiplier.eval_reg(q))
    }

    /// `(p, q) = (f^{o,φ}(x), μ_ℂ(x))`.
    pub fn forward(&self, point: &ManifoldPoint, eps: f64) -> Result<(Complex64, Complex64)> {
        Ok((self.value(point, eps)?, point.zeta.z))
    }

    /// The point of the section over `q` with chart value `p`.
    pub fn inverse(&self, p: Complex64, q: Complex64, eps: f64) -> Result<ManifoldPoint> {
        if !(p.norm() > 0.0) || !p.is_finite() || !q.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "chart value ({p}, {q}) is not in ℂ× × ℂ"
            )));
        }
        let q = FiberKey::new(q).z();
        let gap = self.section.gap_at(&self.config, q)?;
        let (lo, hi) = gap_heights(&self.config, gap);
        let reg = self.multiplier.eval_reg(q);
        let target = 2.0 * (p.norm().ln() - reg.norm().ln());
        let cfg = &self.config;
        let t = solve_in_gap(lo, hi, None, |t| {
            let z = ImHPoint::from_parts(t, q);
            let l = log_modulus(cfg, z, eps)?;
            Ok((l.value - target, inverse_distance_sum(cfg, z, eps)?.value))
        })?;
        Ok(ManifoldPoint::new(ImHPoint::from_parts(t, q), p.arg() - reg.arg()))
    }
}

fn gap_heights(config: &Configuration, gap: Gap) -> (f64, f64) {
    (
        gap.lower.map_or(f64::NEG_INFINITY, |n| config.fiber_point(n).1),
        gap.upper.map_or(f64::INFINITY, |n| config.fiber_point(n).1),
    )
}

/// Root of an increasing `g` on the open interval `(lo, hi)` that tends to
/// `∓∞` at the ends; `g` returns `(value, derivative)`.
fn solve_in_gap<F>(lo: f64, hi: f64, start: Option<f64>, mut g: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let start = start.unwrap_or(match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    });
    let v0 = g(start)?.0;
    if v0 == 0.0 {
        return Ok(start);
    }
    // Move toward the end where g has the opposite sign: double the step
    // on an unbounded side, square the remaining fraction on a bounded one.
    let (toward, sign) = if v0 < 0.0 { (hi, 1.0) } else { (lo, -1.0) };
    let mut inner = start;
    let mut outer = None;
    for k in 0..1100 {
        let c = if toward.is_finite() {
            let frac = 0.5f64.powf(2f64.powi(k.min(11)));
            toward - (toward - start) * frac
        } else {
            start + sign * 2f64.powi(k)
        };
        if c == toward || !c.is_finite() || c == inner {
            break;
        }
        let v = g(c)?.0;
        if (v > 0.0) == (sign > 0.0) || v == 0.0 {
            outer = Some(c);
            break;
        }
        inner = c;
    }
    let Some(outer) = outer else {
        return Err(Error::RootBracketFailure {
            lo,
            hi,
            f_lo: if sign > 0.0 { v0 } else { f64::NAN },
            f_hi: if sign > 0.0 { f64::NAN } else { v0 },
        });
    };
    let (a, b) = if sign > 0.0 { (inner, outer) } else { (outer, inner) };
    increasing_root(g, a, b, 1e-3, 1e-13)
}

/// `f^{o}` in the canonical gauge, defined where the point's class lies on `o_λ`.
pub fn f_base(config: &Configuration, point: &ManifoldPoint, eps: f64) -> Result<Complex64> {
    Chart::base(config).value(point, eps)
}

pub fn f_chart(
    config: &Configuration,
    s: &CombinatorialSection,
    phi: &Multiplier,
    point: &ManifoldPoint,
    eps: f64,
) -> Result<Complex64> {
    Chart::new(config, s.clone(), phi.clone())?.value(point, eps)
}

pub fn chart_forward(
    config: &Configuration,
    s: &CombinatorialSection,
    phi: &Multiplier,
    point: &ManifoldPoint,
    eps: f64,
) -> Result<(Complex64, Complex64)> {
    Chart::new(config, s.clone(), phi.clone())?.forward(point, eps)
}

pub fn chart_inverse(
    config: &Configuration,
    s: &CombinatorialSection,
    phi: &Multiplier,
    pq: (Complex64, Complex64),
    eps: f64,
) -> Result<ManifoldPoint> {
    Chart::new(config, s.clone(), phi.clone())?.inverse(pq.0, pq.1, eps)
}

/// `ψ^{φ₂,φ₁}(p, q) = (p·φ₂(q)/φ₁(q), q)` on `q ∉ supp(div φ₂ − div φ₁)`.
pub fn transition(phi1: &Multiplier, phi2: &Multiplier, pq: (Complex64, Complex64)) -> Result<(Complex64, Complex64)> {
    let (p, q) = pq;
    if phi1.order_at(q) != phi2.order_at(q) {
        return Err(Error::OutsideOverlap { q });
    }
    Ok((p * (phi2.eval_reg(q) / phi1.eval_reg(q)), q))
}

/// `x·g` for `g ∈ ℂ×`: rotate the phase by `arg g` and flow `ζ_ℝ` inside its
/// gap until `∫Φ dt = ½ log|g|`. The flow is computed from the closed form
/// of the flow integral, independently of the chart functions.
pub fn act(config: &Configuration, point: &ManifoldPoint, g: Complex64, eps: f64) -> Result<ManifoldPoint> {
    if !(g.norm() > 0.0) || !g.is_finite() {
        return Err(Error::InvalidArgument(format!("{g} is not in ℂ×")));
    }
    let class = class_of(config, point.zeta)?;
    let gap = match class.position {
        Position::Gap(gap) => gap,
        Position::Fixed(_) => return Err(Error::FixedPointInput(point.zeta)),
    };
    let target = 0.5 * g.norm().ln();
    let (t0, z) = (point.zeta.t, class.z);
    let t = if target == 0.0 {
        t0
    } else {
        let (lo, hi) = gap_heights(config, gap);
        solve_in_gap(lo, hi, Some(t0), |t| {
            let f = f_lambda(config, t, t0, z, eps)?.value;
            let d = 0.25 * inverse_distance_sum(config, ImHPoint::from_parts(t, z), eps)?.value;
            Ok((f - target, d))
        })?
    };
    Ok(ManifoldPoint::new(
        ImHPoint::from_parts(t, point.zeta.z),
        point.theta + g.arg(),
    ))
}

/// The section through the class of `x`, for choosing a chart that contains it.
pub fn section_through(config: &Configuration, point: &ManifoldPoint) -> Result<CombinatorialSection> {
    let class = class_of(config, point.zeta)?;
    let s = CombinatorialSection::through(config, &class)?;
    // Drop a deviation that coincides with the base gap.
    if base_gap(config, class.z)? == class.gap().unwrap_or(Gap::WHOLE_LINE) {
        return Ok(CombinatorialSection::base());
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pl() -> Configuration {
        Configuration::power_law(2.0).unwrap()
    }

    #[test]
    fn split_examples() {
        let (a, b) = split_center(ImHPoint::new(4.0, 0.0, 0.0), 1).unwrap();
        assert_eq!((a, b), (c(2.0, 0.0), c(0.0, 0.0)));
        let (a, b) = split_center(ImHPoint::new(-4.0, 0.0, 0.0), 1).unwrap();
        assert_eq!((a, b), (c(0.0, 0.0), c(2.0, 0.0)));
        let (a, b) = split_center(ImHPoint::new(3.0, 4.0, 0.0), 1).unwrap();
        assert!((a - c(2.0, 0.0)).norm() < 1e-15 && (b - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            split_center(ImHPoint::new(0.0, 1.0, 0.0), 7),
            Err(Error::NotChartAdmissible { index: 7 })
        ));
    }

    #[test]
    fn base_value_at_origin_is_one() {
        let x = ManifoldPoint::new(ImHPoint::ORIGIN, 0.0);
        assert_eq!(f_base(&pl(), &x, 1e-12).unwrap(), c(1.0, 0.0));
        let y = ManifoldPoint::new(ImHPoint::ORIGIN, PI / 2.0);
        assert!((f_base(&pl(), &y, 1e-12).unwrap() - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn log_modulus_is_four_flow() {
        let cfg = pl();
        for &t in &[-0.7, 0.3, 5.0] {
            let l = log_modulus(&cfg, ImHPoint::new(t, 0.0, 0.0), 1e-12).unwrap();
            let f = f_lambda(&cfg, t, 0.0, c(0.0, 0.0), 1e-12).unwrap();
            assert!((l.value - 4.0 * f.value).abs() < 1e-11, "{t}");
        }
    }

    #[test]
    fn order_on_deviated_gap() {
        let l = log_modulus(&pl(), ImHPoint::new(-2.5, 0.0, 0.0), 1e-12).unwrap();
        assert_eq!(l.order, -1);
        let l = log_modulus(&pl(), ImHPoint::new(-12.5, 0.0, 0.0), 1e-12).unwrap();
        assert_eq!(l.order, -3);
    }

    #[test]
    fn inverse_at_unit_value() {
        let x = Chart::base(&pl()).inverse(c(1.0, 0.0), c(0.0, 0.0), 1e-12).unwrap();
        assert!(x.zeta.t.abs() < 1e-13 && x.theta == 0.0);
    }

    #[test]
    fn cancellation_limit_exists() {
        let cfg = pl();
        let s = CombinatorialSection::base().with(
            c(0.0, 0.0),
            Gap {
                lower: Some(2),
                upper: Some(1),
            },
        );
        let chart = Chart::canonical(&cfg, s).unwrap();
        assert_eq!(chart.multiplier.order_at(c(0.0, 0.0)), -1);
        let at = |q: f64| {
            chart
                .value(&ManifoldPoint::new(ImHPoint::new(-2.5, q, 0.0), 0.0), 1e-13)
                .unwrap()
        };
        let limit = at(0.0);
        assert!(limit.norm() > 0.0 && limit.is_finite());
        // The removed factor is Q(A, q)/(2|A|) = 1 + O(q²).
        for m in 3..=8 {
            let q = 10f64.powi(-m);
            let d = (at(q) - limit).norm();
            assert!(d <= (q * q + 1e-14) * limit.norm(), "{m}: {d}");
        }
    }

    #[test]
    fn transition_examples() {
        let one = Multiplier::one();
        let q1 = Multiplier::from_divisor({
            let mut d = IntegerDivisor::default();
            d.add(c(0.0, 0.0), 1);
            d
        });
        let (p, q) = (c(0.3, -2.0), c(1.5, 0.5));
        assert_eq!(transition(&one, &one, (p, q)).unwrap(), (p, q));
        let (pp, _) = transition(&one, &q1, (p, q)).unwrap();
        assert!((pp - p * q).norm() < 1e-15);
        assert!(matches!(
            transition(&one, &q1, (p, c(0.0, 0.0))),
            Err(Error::OutsideOverlap { .. })
        ));
    }

    #[test]
    fn multiplier_json() {
        let m: Multiplier = serde_json::from_str(r#"{"divisor":[{"z":[0.0,0.0],"k":-2}],"unit":[[0.5,0.0]]}"#).unwrap();
        assert_eq!(m.order_at(c(0.0, 0.0)), -2);
        let v = m.eval(c(2.0, 0.0)).unwrap();
        assert!((v - 0.5f64.exp() / 4.0).norm() < 1e-15);
    }
}
