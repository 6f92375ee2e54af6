//! The Gibbons–Hawking potential `Φ(ζ) = ¼ Σ 1/|ζ + λ_n|`, its vertical
//! flow integral, and the base-distance machinery of the growth experiment.

mod growth;

pub use growth::{growth_exponent, growth_exponent_with, GrowthFit, GrowthOptions};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_scalar};
use crate::series::{ln_p_diff, ln_q_diff};
use crate::types::{Configuration, Explicit, ImHPoint, Tail};

/// A value with a bound on its distance to the true value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifiedValue {
    pub value: f64,
    pub error_bound: f64,
}

impl CertifiedValue {
    pub fn new(value: f64, error_bound: f64) -> Self {
        Self { value, error_bound }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error_bound
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.value * s, self.error_bound * s.abs())
    }
}

impl std::ops::Add for CertifiedValue {
    type Output = CertifiedValue;
    fn add(self, o: Self) -> Self {
        Self::new(self.value + o.value, self.error_bound + o.error_bound)
    }
}

impl std::ops::Sub for CertifiedValue {
    type Output = CertifiedValue;
    fn sub(self, o: Self) -> Self {
        Self::new(self.value - o.value, self.error_bound + o.error_bound)
    }
}

/// Distances below this multiple of the operand scale count as hitting a center.
const SINGULAR_REL: f64 = 8.0 * f64::EPSILON;

/// `Σ_n 1/|ζ + λ′_n|` with the tail certified to `tol`.
pub(crate) fn inverse_distance_sum(config: &Configuration, zeta: ImHPoint, tol: f64) -> Result<CertifiedValue> {
    let xi = zeta + config.offset();
    let (x, w) = (xi.t, xi.z);
    let r = xi.norm();
    let mut last_reason = String::from("no truncation rung resolves the tail");
    for rung in 0..config.rungs().len() {
        let tail = match config.tail(rung) {
            Tail::Empty => CertifiedValue::exact(0.0),
            Tail::Axial(m) => match m.inverse_distance_sum(x, w.norm(), tol) {
                Some(v) => v,
                None => continue,
            },
            Tail::Declared { radius, mass } => {
                let Some(mass) = mass else {
                    return Err(Error::TailUnresolved(
                        "tail_mass is required to evaluate the potential".into(),
                    ));
                };
                if r >= radius {
                    return Err(Error::TailUnresolved(format!(
                        "|ζ| = {r} reaches the tail radius {radius}"
                    )));
                }
                // |ξ + λ| ∈ [|λ| − r, |λ| + r] and |λ| ≥ R.
                let (lo, hi) = (mass / (1.0 + r / radius), mass / (1.0 - r / radius));
                let v = CertifiedValue::new(0.5 * (lo + hi), 0.5 * (hi - lo));
                if v.error_bound > tol {
                    last_reason = format!("declared tail bound {} exceeds {tol}", v.error_bound);
                    break;
                }
                v
            }
        };
        let mut sum = 0.0;
        match config.explicit(rung) {
            Explicit::Axial(a) => {
                let w2 = w.norm_sqr();
                for (i, &an) in a.iter().enumerate() {
                    let d2 = (x + an) * (x + an) + w2;
                    let d = d2.sqrt();
                    if d <= SINGULAR_REL * (r + an.abs()) {
                        return Err(Error::SingularPoint {
                            point: zeta,
                            index: i + 1,
                        });
                    }
                    sum += 1.0 / d;
                }
            }
            Explicit::Listed(c) => {
                for (i, l) in c.iter().enumerate() {
                    let d = (x + l.t).hypot((w + l.z).norm());
                    if d <= SINGULAR_REL * (r + l.norm()) {
                        return Err(Error::SingularPoint {
                            point: zeta,
                            index: i + 1,
                        });
                    }
                    sum += 1.0 / d;
                }
            }
        }
        let rounding = 4.0 * f64::EPSILON * sum * (config.explicit(rung).len() as f64).sqrt().max(1.0);
        return Ok(CertifiedValue::new(sum + tail.value, tail.error_bound + rounding));
    }
    Err(Error::TailUnresolved(format!("at ζ = {zeta}: {last_reason}")))
}

/// `Φ_λ(ζ)` with `error_bound ≤ eps`.
pub fn phi(config: &Configuration, zeta: ImHPoint, eps: f64) -> Result<CertifiedValue> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    let v = inverse_distance_sum(config, zeta, 2.0 * eps)?.scale(0.25);
    if v.error_bound > eps {
        return Err(Error::TailUnresolved(format!(
            "potential bound {} exceeds eps = {eps}",
            v.error_bound
        )));
    }
    Ok(v)
}

/// Density of the base measure after integrating out the circle fiber
/// (up to the constant fiber length): equal to `Φ_λ`.
pub fn volume_density(config: &Configuration, zeta: ImHPoint, eps: f64) -> Result<CertifiedValue> {
    phi(config, zeta, eps)
}

/// Fiber points over `z` strictly inside `(lo, hi)` together with the
/// heights of centers close to the line, used as quadrature breakpoints.
fn nearby_heights(config: &Configuration, z: Complex64, lo: f64, hi: f64) -> Vec<f64> {
    let reach = (hi - lo).max(1.0);
    let mut out = vec![];
    match config.listed() {
        Some(c) => {
            for n in 1..=c.len() {
                let (b, v) = config.fiber_point(n);
                if (b - z).norm() <= reach && v > lo && v < hi {
                    out.push(v);
                }
            }
        }
        None => {
            let b = -config.offset().z;
            if (b - z).norm() <= reach {
                if let Ok(pts) = config.fiber_points(b, lo, hi) {
                    out.extend(pts.into_iter().map(|p| p.1));
                }
            }
        }
    }
    out
}

fn check_segment(config: &Configuration, z: Complex64, from_t: f64, to_t: f64) -> Result<()> {
    let (lo, hi) = (from_t.min(to_t), from_t.max(to_t));
    let hits = config.fiber_points(z, lo, hi)?;
    if let Some(&(index, _)) = hits.first() {
        return Err(Error::SegmentHitsCenter {
            z,
            from: from_t,
            to: to_t,
            index,
        });
    }
    Ok(())
}

/// `∫_{from_t}^{to_t} Φ_λ(t, z) dt` by adaptive quadrature.
///
/// The bound adds the quadrature's Kronrod–Gauss estimate to the
/// certified truncation error of the integrand.
pub fn flow_log_g(config: &Configuration, z: Complex64, from_t: f64, to_t: f64, eps: f64) -> Result<CertifiedValue> {
    if from_t == to_t {
        return Ok(CertifiedValue::exact(0.0));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    check_segment(config, z, from_t, to_t)?;
    let len = (to_t - from_t).abs();
    let (lo, hi) = (from_t.min(to_t), from_t.max(to_t));
    let breaks = nearby_heights(config, z, lo, hi);
    let tol_sum = eps / len;
    let mut worst_tail: f64 = 0.0;
    let (value, qerr) = integrate_scalar(
        |t| {
            let v = inverse_distance_sum(config, ImHPoint::from_parts(t, z), tol_sum)?;
            worst_tail = worst_tail.max(v.error_bound);
            Ok(0.25 * v.value)
        },
        from_t,
        to_t,
        &breaks,
        0.5 * eps,
        20_000,
    )?;
    Ok(CertifiedValue::new(value, qerr + 0.25 * worst_tail * len))
}

/// The flow function in closed form: `¼ Σ_n ∫_{ζ_t}^{η_t} dt/|(t,z) + λ_n|`,
/// each integral written as a difference of logarithms
/// (`ln P(η) − ln P(ζ)` on centers above the segment, `ln Q(ζ) − ln Q(η)`
/// below). Agrees with [`flow_log_g`]`(z, ζ_t, η_t)`.
pub fn f_lambda(config: &Configuration, eta_t: f64, zeta_t: f64, z: Complex64, eps: f64) -> Result<CertifiedValue> {
    if eta_t == zeta_t {
        return Ok(CertifiedValue::exact(0.0));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be positive")));
    }
    check_segment(config, z, zeta_t, eta_t)?;
    let o = config.offset();
    let (x_eta, x_zeta, w) = (eta_t + o.t, zeta_t + o.t, z + o.z);
    let tol = 2.0 * eps;
    for rung in 0..config.rungs().len() {
        let tail = match config.tail(rung) {
            Tail::Empty => CertifiedValue::exact(0.0),
            Tail::Axial(m) => {
                let (Some(te), Some(tz)) = (
                    m.log_sum(x_eta, w.norm(), 0.5 * tol),
                    m.log_sum(x_zeta, w.norm(), 0.5 * tol),
                ) else {
                    continue;
                };
                te - tz
            }
            Tail::Declared { radius, mass } => {
                let r = ImHPoint::from_parts(x_eta, w)
                    .norm()
                    .max(ImHPoint::from_parts(x_zeta, w).norm());
                let Some(mass) = mass.filter(|_| r < radius) else {
                    return Err(Error::TailUnresolved("declared tail cannot bound the flow".into()));
                };
                CertifiedValue::new(0.0, (eta_t - zeta_t).abs() * mass / (1.0 - r / radius))
            }
        };
        let explicit = config.explicit(rung);
        let mut sum = 0.0;
        let mut abs_sum = 0.0;
        for n in 1..=explicit.len() {
            let l = explicit.get(n);
            let b = w + l.z;
            let (a_eta, a_zeta) = (x_eta + l.t, x_zeta + l.t);
            let term = if a_zeta > 0.0 {
                ln_p_diff(a_eta, b, a_zeta, b)
            } else {
                ln_q_diff(a_zeta, b, a_eta, b)
            };
            sum += term;
            abs_sum += term.abs();
        }
        let total = CertifiedValue::new(sum, 4.0 * f64::EPSILON * abs_sum) + tail;
        return Ok(total.scale(0.25));
    }
    Err(Error::TailUnresolved(format!(
        "flow function between heights {zeta_t} and {eta_t} over {z}"
    )))
}

fn unit(direction: [f64; 3]) -> Result<[f64; 3]> {
    let n = (direction[0].powi(2) + direction[1].powi(2) + direction[2].powi(2)).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(Error::InvalidArgument(
            "direction must be a nonzero finite vector".into(),
        ));
    }
    Ok(direction.map(|c| c / n))
}

fn ray_point(d: &[f64; 3], s: f64) -> ImHPoint {
    ImHPoint::new(s * d[0], s * d[1], s * d[2])
}

/// Parameters `s ∈ (0, R]` where the ray `s·d` passes a center closer than
/// `reach`, and the first exact hit if any.
pub(crate) fn ray_encounters(
    config: &Configuration,
    d: &[f64; 3],
    r_max: f64,
    reach: f64,
) -> (Vec<f64>, Option<(usize, f64)>) {
    let mut near = vec![];
    let mut hit = None;
    let mut visit = |n: usize, c: ImHPoint| {
        // The singular point is −λ′_n; project it onto the ray.
        let p = [-c.t, -c.z.re, -c.z.im];
        let s = p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
        if s <= 0.0 || s > r_max + reach {
            return;
        }
        let perp = ((p[0] - s * d[0]).powi(2) + (p[1] - s * d[1]).powi(2) + (p[2] - s * d[2]).powi(2)).sqrt();
        if perp <= 1e-12 * (1.0 + s) && s <= r_max && hit.is_none() {
            hit = Some((n, s));
        }
        if perp <= reach {
            near.push(s);
        }
    };
    match config.listed() {
        Some(c) => {
            for n in 1..=c.len() {
                visit(n, config.center(n));
            }
        }
        None => {
            let eta = config.offset().norm();
            let mut n = 1;
            while n <= config.truncation() {
                let c = config.center(n);
                if c.norm() > r_max + reach + eta + 1.0 && c.t > 0.0 && c.t - eta > r_max + reach {
                    break;
                }
                visit(n, c);
                n += 1;
            }
        }
    }
    (near, hit)
}

/// `∫_0^R √Φ(s·d) ds`: the base-distance proxy along a ray from the origin.
///
/// The first stretch is integrated in `s = u²` so a center at the origin
/// (`Φ ~ 1/(4s)`) leaves a smooth integrand.
pub fn radial_distance(config: &Configuration, direction: [f64; 3], r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius {r} must be nonnegative")));
    }
    let d = unit(direction)?;
    let (near, hit) = ray_encounters(config, &d, r, 1.0);
    if let Some((index, s)) = hit {
        return Err(Error::RayHitsCenter { index, s });
    }
    let tol_phi = 1e-13;
    let sqrt_phi = |s: f64| -> Result<f64> {
        let v = inverse_distance_sum(config, ray_point(&d, s), tol_phi)?;
        Ok((0.25 * v.value).sqrt())
    };
    let s0 = r.min(1e-2);
    let (head, _) = integrate_scalar(|u| Ok(2.0 * u * sqrt_phi(u * u)?), 0.0, s0.sqrt(), &[], 1e-13, 2000)?;
    let (rest, _) = integrate_scalar(sqrt_phi, s0, r, &near, 1e-10 * (1.0 + r.sqrt()), 20_000)?;
    Ok(head + rest)
}

/// `(∫_0^R √Φ, ∫_0^R Φ s²)` along a ray; exposed for the growth experiment.
pub(crate) fn ray_integrals(
    config: &Configuration,
    d: &[f64; 3],
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    scale: [f64; 2],
) -> Result<[f64; 2]> {
    let f = |s: f64| -> Result<[f64; 2]> {
        let v = 0.25 * inverse_distance_sum(config, ray_point(d, s), 1e-14)?.value;
        Ok([v.sqrt(), v * s * s])
    };
    if a == 0.0 {
        // s = u² removes the 1/√s behaviour of a center at the origin.
        let g = |u: f64| -> Result<[f64; 2]> {
            let [p, q] = f(u * u)?;
            Ok([2.0 * u * p, 2.0 * u * q])
        };
        let q = integrate(g, 0.0, b.sqrt(), &[], scale.map(|x| x * rel_tol), 400)?;
        return Ok(q.value);
    }
    let q = integrate(f, a, b, breaks, scale.map(|x| x * rel_tol), 400)?;
    Ok(q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn single() -> Configuration {
        Configuration::finite(vec![ImHPoint::ORIGIN]).unwrap()
    }

    #[test]
    fn single_center_values() {
        let v = phi(&single(), ImHPoint::new(1.0, 0.0, 0.0), 1e-12).unwrap();
        assert_eq!(v.value, 0.25);
        let v = phi(&single(), ImHPoint::new(3.0, 4.0, 0.0), 1e-12).unwrap();
        assert!((v.value - 0.05).abs() < 1e-16);
    }

    #[test]
    fn singular_point_is_reported() {
        let cfg = Configuration::power_law(2.0).unwrap();
        let e = phi(&cfg, ImHPoint::new(-9.0, 0.0, 0.0), 1e-10).unwrap_err();
        assert_eq!(
            e,
            Error::SingularPoint {
                point: ImHPoint::new(-9.0, 0.0, 0.0),
                index: 3
            }
        );
    }

    #[test]
    fn power_law_at_origin() {
        let cfg = Configuration::power_law(2.0).unwrap();
        let v = phi(&cfg, ImHPoint::ORIGIN, 1e-10).unwrap();
        assert!((v.value - PI * PI / 24.0).abs() < 1e-14);
        assert!(v.error_bound <= 1e-10);
    }

    #[test]
    fn flow_single_center_asinh() {
        let one = Complex64::new(1.0, 0.0);
        let v = flow_log_g(&single(), one, 0.0, 1.0, 1e-12).unwrap();
        assert!((v.value - 1f64.asinh() / 4.0).abs() < 1e-12);
        let f = f_lambda(&single(), 1.0, 0.0, one, 1e-12).unwrap();
        assert!((f.value - 1f64.asinh() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn flow_and_closed_form_agree_in_gap() {
        let cfg = Configuration::power_law(2.0).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let a = flow_log_g(&cfg, z, -2.5, -3.5, 1e-10).unwrap();
        let b = f_lambda(&cfg, -3.5, -2.5, z, 1e-10).unwrap();
        assert!((a.value - b.value).abs() < 1e-8);
        assert!((a.value - b.value).abs() <= a.error_bound + b.error_bound);
    }

    #[test]
    fn segment_through_center_is_rejected() {
        let cfg = Configuration::power_law(2.0).unwrap();
        let e = flow_log_g(&cfg, Complex64::new(0.0, 0.0), -2.5, -0.5, 1e-8).unwrap_err();
        assert!(matches!(e, Error::SegmentHitsCenter { index: 1, .. }));
    }

    #[test]
    fn radial_distance_single_center() {
        for &r in &[0.01, 1.0, 250.0] {
            let d = radial_distance(&single(), [0.3, -0.2, 0.9], r).unwrap();
            assert!((d - r.sqrt()).abs() < 1e-9 * (1.0 + r.sqrt()), "{r}: {d}");
        }
    }

    #[test]
    fn ray_through_center_is_rejected() {
        let cfg = Configuration::power_law(2.0).unwrap();
        let e = radial_distance(&cfg, [-1.0, 0.0, 0.0], 10.0).unwrap_err();
        assert!(matches!(e, Error::RayHitsCenter { index: 1, .. }));
    }
}
