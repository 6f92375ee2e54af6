//! Seeded invariant suites, one per module, bundled for `ainf verify`.
//!
//! Each suite draws its cases from a `ChaCha8` stream and compares the
//! library against an independent oracle (closed forms, brute force,
//! finite differences). Trial counts are kept small enough for interactive
//! use; the acceptance tests run the same checks at full size.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charts::{act, section_multiplier, transition, wrap, Chart, ManifoldPoint, Multiplier};
use crate::error::{Error, Result};
use crate::isomorphism::{isom_exists, isom_exists_up_to_translation, IsomorphismData};
use crate::potential::{f_lambda, flow_log_g, phi};
use crate::quotient::{k_divisor, same_class, CombinatorialSection, Gap};
use crate::types::{delta_set, validate, Configuration, FiberKey, ImHPoint, OrderType};

pub const SUITES: [&str; 5] = ["core", "potential", "quotient", "charts", "isomorphism"];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub trials: usize,
    /// Largest observed deviation, where the check is quantitative.
    pub max_error: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Accumulates the worst error and first failure of a check.
struct Tally {
    name: &'static str,
    tol: f64,
    trials: usize,
    worst: f64,
    failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            tol,
            trials: 0,
            worst: 0.0,
            failure: None,
        }
    }

    fn error(&mut self, err: f64, context: impl FnOnce() -> String) {
        self.trials += 1;
        if !(err <= self.worst) {
            self.worst = err;
        }
        if !(err <= self.tol) && self.failure.is_none() {
            self.failure = Some(format!("error {err:e} > {:e} at {}", self.tol, context()));
        }
    }

    fn truth(&mut self, ok: bool, context: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(context());
        }
    }

    fn fail(&mut self, e: &Error, context: impl FnOnce() -> String) {
        self.trials += 1;
        if self.failure.is_none() {
            self.failure = Some(format!("{e} at {}", context()));
        }
    }

    fn finish(self, quantitative: bool) -> Check {
        Check {
            name: self.name.into(),
            passed: self.failure.is_none(),
            trials: self.trials,
            max_error: quantitative.then_some(self.worst),
            detail: self.failure.unwrap_or_else(|| "ok".into()),
        }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let checks = match name {
        "core" => core_suite(&mut rng)?,
        "potential" => potential_suite(&mut rng)?,
        "quotient" => quotient_suite(&mut rng)?,
        "charts" => charts_suite(&mut rng)?,
        "isomorphism" => isomorphism_suite(&mut rng)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(SuiteReport {
        suite: name.into(),
        seed,
        checks,
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Distance between two points of `X(λ)`: heights relative, phases mod 2π.
pub(crate) fn point_distance(x: &ManifoldPoint, y: &ManifoldPoint) -> f64 {
    let dt = (x.zeta.t - y.zeta.t).abs() / (1.0 + x.zeta.t.abs());
    let dz = (x.zeta.z - y.zeta.z).norm() / (1.0 + x.zeta.z.norm());
    dt.max(dz).max(wrap(x.theta - y.theta).abs())
}

fn random_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    let (rho, a) = (r * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
    Complex64::from_polar(rho, a)
}

/// Axial finite configurations with distinct integer heights; fiber points
/// `−λ_n` over `z ∈ {0, −1}`.
fn random_two_fiber(rng: &mut ChaCha8Rng, max: usize) -> Configuration {
    let n = rng.gen_range(1..=max);
    let mut heights: Vec<i32> = (-12..=12).collect();
    let mut centers = Vec::with_capacity(n);
    for _ in 0..n {
        let t = heights.swap_remove(rng.gen_range(0..heights.len()));
        let re = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
        centers.push(ImHPoint::new(f64::from(t), re, 0.0));
    }
    Configuration::finite(centers).expect("distinct centers")
}

fn core_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut valid = Tally::new("power-law families validate", 0.0);
    for beta in [1.5, 2.0, 3.0] {
        let report = validate(&Configuration::power_law(beta)?);
        valid.truth(report.generic && report.violations.is_empty(), || {
            format!("β = {beta}: {:?}", report.violations)
        });
    }
    let mut order = Tally::new("axial fiber of a power law is ω*", 0.0);
    let pl = Configuration::power_law(2.0)?;
    let ot = pl.order_type(Complex64::new(0.0, 0.0))?;
    order.truth(ot == OrderType::OmegaDown, || format!("got {ot:?}"));

    let mut delta = Tally::new("Δ of finite configs matches the distinct center bases", 0.0);
    for _ in 0..50 {
        let c = random_two_fiber(rng, 8);
        let expect: std::collections::BTreeSet<FiberKey> =
            c.listed().unwrap().iter().map(|x| FiberKey::new(-x.z)).collect();
        let got: std::collections::BTreeSet<FiberKey> = delta_set(&c, 10.0)?.into_iter().map(FiberKey::new).collect();
        delta.truth(expect == got, || format!("{:?}", c.listed()));
    }
    let mut json = Tally::new("configuration JSON round trip", 0.0);
    for _ in 0..20 {
        let c = random_two_fiber(rng, 8);
        let back =
            Configuration::from_json(&serde_json::to_string(&c).map_err(|e| Error::InvalidArgument(e.to_string()))?)?;
        json.truth(back.listed() == c.listed(), || format!("{:?}", c.listed()));
    }
    Ok(vec![
        valid.finish(false),
        order.finish(false),
        delta.finish(false),
        json.finish(false),
    ])
}

fn potential_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let pl = Configuration::power_law(2.0)?;
    let mut origin = Tally::new("Φ of the β = 2 power law at the origin is π²/24", 1e-10);
    let v = phi(&pl, ImHPoint::new(0.0, 0.0, 0.0), 1e-10)?;
    let oracle = PI * PI / 24.0;
    origin.error((v.value - oracle).abs(), || format!("{v:?}"));
    origin.truth((v.value - oracle).abs() <= v.error_bound + 1e-15, || {
        "bound excludes π²/24".into()
    });

    let mut flow = Tally::new("∂F/∂η_ℝ = Φ by central differences", 1e-6);
    let mut closed = Tally::new("closed-form flow agrees with quadrature", 1.0);
    for _ in 0..20 {
        let z = Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-PI..PI));
        let (eta, zeta) = (rng.gen_range(-40.0..5.0), rng.gen_range(-40.0..5.0));
        // Well inside the scale set by the nearest center, which is ≥ |z| away.
        let h = 1e-4 * z.norm();
        let fd =
            (f_lambda(&pl, eta + h, zeta, z, 1e-14)?.value - f_lambda(&pl, eta - h, zeta, z, 1e-14)?.value) / (2.0 * h);
        let p = phi(&pl, ImHPoint::from_parts(eta, z), 1e-14)?.value;
        flow.error(rel(fd, p), || format!("η = {eta}, z = {z}"));

        let a = f_lambda(&pl, eta, zeta, z, 1e-12)?;
        let b = flow_log_g(&pl, z, zeta, eta, 1e-10)?;
        // Measured in units of the combined bound; ≤ 1 means consistent.
        closed.error(
            (a.value - b.value).abs() / (a.error_bound + b.error_bound + 1e-15),
            || format!("η = {eta}, ζ = {zeta}, z = {z}"),
        );
    }
    let mut asinh = Tally::new("single-center flow is ¼(asinh(η/r) − asinh(ζ/r))", 1e-10);
    let one = Configuration::finite(vec![ImHPoint::new(0.0, 0.0, 0.0)])?;
    for _ in 0..20 {
        let z = random_disk(rng, 3.0) + Complex64::new(0.05, 0.0);
        let (eta, zeta) = (rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let r = z.norm();
        let oracle = 0.25 * ((eta / r).asinh() - (zeta / r).asinh());
        asinh.error((f_lambda(&one, eta, zeta, z, 1e-14)?.value - oracle).abs(), || {
            format!("η = {eta}, ζ = {zeta}, z = {z}")
        });
    }
    Ok(vec![
        origin.finish(true),
        flow.finish(true),
        closed.finish(true),
        asinh.finish(true),
    ])
}

/// Random point on one of the two special fibers (or off them), landing
/// exactly on a fiber point a fifth of the time.
fn random_quotient_point(rng: &mut ChaCha8Rng, c: &Configuration) -> ImHPoint {
    let z = match rng.gen_range(0..3) {
        0 => Complex64::new(0.0, 0.0),
        1 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.5, 0.0),
    };
    if rng.gen_bool(0.2) {
        let n = rng.gen_range(1..=c.listed().unwrap().len());
        let (base, t) = c.fiber_point(n);
        return ImHPoint::from_parts(t, base);
    }
    ImHPoint::from_parts(rng.gen_range(-14.0..14.0), z)
}

/// Brute force: same base and no center `−λ_n` on the closed vertical
/// segment between them, or the same fixed point.
pub(crate) fn brute_same_class(c: &Configuration, a: ImHPoint, b: ImHPoint) -> bool {
    if FiberKey::new(a.z) != FiberKey::new(b.z) {
        return false;
    }
    let fixed = |p: ImHPoint| (1..=c.listed().unwrap().len()).any(|n| c.center(n) + p == ImHPoint::new(0.0, 0.0, 0.0));
    if fixed(a) || fixed(b) {
        return a == b;
    }
    let (lo, hi) = (a.t.min(b.t), a.t.max(b.t));
    !(1..=c.listed().unwrap().len()).any(|n| {
        let (base, t) = c.fiber_point(n);
        FiberKey::new(base) == FiberKey::new(a.z) && lo <= t && t <= hi
    })
}

/// A random section of a finite two-fiber configuration: a random gap on
/// each of the fibers `0` and `−1`.
pub(crate) fn random_section(rng: &mut ChaCha8Rng, c: &Configuration) -> CombinatorialSection {
    let mut s = CombinatorialSection::base();
    for z in [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)] {
        let mut pts: Vec<(usize, f64)> = (1..=c.listed().unwrap().len())
            .map(|n| (n, c.fiber_point(n)))
            .filter(|(_, (b, _))| FiberKey::new(*b) == FiberKey::new(z))
            .map(|(n, (_, t))| (n, t))
            .collect();
        pts.sort_by(|x, y| x.1.total_cmp(&y.1));
        let i = rng.gen_range(0..=pts.len());
        let gap = Gap {
            lower: i.checked_sub(1).map(|j| pts[j].0),
            upper: pts.get(i).map(|p| p.0),
        };
        s = s.with(z, gap);
    }
    s
}

fn quotient_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let mut classes = Tally::new("same_class agrees with segment brute force", 0.0);
    let mut cocycle = Tally::new("k-divisor cocycle", 0.0);
    let mut anti = Tally::new("k-divisor antisymmetry", 0.0);
    for _ in 0..100 {
        let c = random_two_fiber(rng, 8);
        let (a, b) = (random_quotient_point(rng, &c), random_quotient_point(rng, &c));
        let b = if rng.gen_bool(0.5) {
            ImHPoint::from_parts(b.t, a.z)
        } else {
            b
        };
        let got = same_class(&c, a, b)?;
        let want = brute_same_class(&c, a, b);
        classes.truth(got == want, || format!("{a} ~ {b} in {:?}: got {got}", c.listed()));

        let (s1, s2, s3) = (
            random_section(rng, &c),
            random_section(rng, &c),
            random_section(rng, &c),
        );
        let k12 = k_divisor(&c, &s1, &s2, 10.0)?;
        let k23 = k_divisor(&c, &s2, &s3, 10.0)?;
        let k13 = k_divisor(&c, &s1, &s3, 10.0)?;
        let k21 = k_divisor(&c, &s2, &s1, 10.0)?;
        cocycle.truth(k12.sum(&k23) == k13, || format!("{s1:?} {s2:?} {s3:?}"));
        anti.truth(k21 == k12.negated(), || format!("{s1:?} {s2:?}"));
    }
    Ok(vec![classes.finish(false), cocycle.finish(false), anti.finish(false)])
}

/// Base section and the four sections moving the axial fiber of the
/// `β = 2` power law into the gaps `(−(n+1)², −n²)`, `n = 1..4`.
pub(crate) fn power_law_sections() -> Vec<(CombinatorialSection, f64, f64)> {
    let z = Complex64::new(0.0, 0.0);
    let mut out = vec![(CombinatorialSection::base(), -1.0, 6.0)];
    for n in 1..=4usize {
        let gap = Gap {
            lower: Some(n + 1),
            upper: Some(n),
        };
        out.push((
            CombinatorialSection::base().with(z, gap),
            -(((n + 1) * (n + 1)) as f64),
            -((n * n) as f64),
        ));
    }
    out
}

/// A point of the chart domain: on the axial fiber inside the section's
/// gap half the time, otherwise off-axis.
pub(crate) fn random_chart_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> ManifoldPoint {
    let theta = rng.gen_range(-PI..PI);
    if rng.gen_bool(0.5) {
        let w = hi - lo;
        return ManifoldPoint::new(
            ImHPoint::new(rng.gen_range(lo + 0.02 * w..hi - 0.02 * w), 0.0, 0.0),
            theta,
        );
    }
    let z = random_disk(rng, 2.0);
    ManifoldPoint::new(ImHPoint::from_parts(rng.gen_range(-30.0..6.0), z), theta)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI))
}

/// `det ∂(p′, q′)/∂(p, q) · p / p′` by central differences: 1 when the map
/// preserves `dp/p ∧ dq`.
pub(crate) fn darboux_defect(
    map: impl Fn(Complex64, Complex64) -> Result<(Complex64, Complex64)>,
    p: Complex64,
    q: Complex64,
) -> Result<f64> {
    let (hp, hq) = (1e-5 * p.norm(), 1e-5 * q.norm().max(1e-3));
    let d = |f: &dyn Fn(Complex64) -> Result<(Complex64, Complex64)>, h: f64| -> Result<(Complex64, Complex64)> {
        let (a, b) = (f(Complex64::new(h, 0.0))?, f(Complex64::new(-h, 0.0))?);
        Ok(((a.0 - b.0) / (2.0 * h), (a.1 - b.1) / (2.0 * h)))
    };
    let (dp_dp, dq_dp) = d(&|e| map(p + e, q), hp)?;
    let (dp_dq, dq_dq) = d(&|e| map(p, q + e), hq)?;
    let (p2, _) = map(p, q)?;
    let ratio = (dp_dp * dq_dq - dp_dq * dq_dp) * p / p2;
    Ok((ratio - 1.0).norm())
}

fn charts_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let pl = Configuration::power_law(2.0)?;
    let eps = 1e-13;
    let sections = power_law_sections();
    let charts: Vec<Chart> = sections
        .iter()
        .map(|(s, _, _)| Chart::canonical(&pl, s.clone()))
        .collect::<Result<_>>()?;
    let mut round = Tally::new("forward/inverse round trip on five sections", 1e-8);
    let mut equi = Tally::new("f(x·g) = g·f(x)", 1e-8);
    let mut glue = Tally::new("charts agree through the transition", 1e-8);
    for ((_, lo, hi), chart) in sections.iter().zip(&charts) {
        for _ in 0..10 {
            let x = random_chart_point(rng, *lo, *hi);
            let ctx = || format!("{x:?}");
            let pq = match chart.forward(&x, eps) {
                Ok(v) => v,
                Err(e) => {
                    round.fail(&e, ctx);
                    continue;
                }
            };
            match chart.inverse(pq.0, pq.1, eps) {
                Ok(y) => round.error(point_distance(&x, &y), ctx),
                Err(e) => round.fail(&e, ctx),
            }
            let g = random_unit(rng);
            match act(&pl, &x, g, eps).and_then(|xg| chart.forward(&xg, eps)) {
                Ok((p2, q2)) => equi.error((p2 - g * pq.0).norm() / pq.0.norm() + (q2 - pq.1).norm(), ctx),
                Err(e) => equi.fail(&e, ctx),
            }
            if x.zeta.z != Complex64::new(0.0, 0.0) {
                let other = &charts[rng.gen_range(0..charts.len())];
                match (
                    other.forward(&x, eps),
                    transition(&chart.multiplier, &other.multiplier, pq),
                ) {
                    (Ok(a), Ok(b)) => glue.error((a.0 - b.0).norm() / a.0.norm(), ctx),
                    (Err(e), _) | (_, Err(e)) => glue.fail(&e, ctx),
                }
            }
        }
    }
    let mut cocycle = Tally::new("transition cocycle ψ₂₃∘ψ₁₂ = ψ₁₃", 1e-14);
    let mut darboux = Tally::new("transitions preserve dp/p ∧ dq", 1e-6);
    for _ in 0..30 {
        let pick = |rng: &mut ChaCha8Rng| -> Multiplier {
            let unit: Vec<Complex64> = (0..rng.gen_range(0..3)).map(|_| random_disk(rng, 0.5)).collect();
            charts[rng.gen_range(0..charts.len())]
                .multiplier
                .clone()
                .with_unit(unit)
        };
        let (f1, f2, f3) = (pick(rng), pick(rng), pick(rng));
        let (p, q) = (random_unit(rng), random_disk(rng, 3.0) + Complex64::new(0.1, 0.0));
        let a = transition(&f2, &f3, transition(&f1, &f2, (p, q))?)?;
        let b = transition(&f1, &f3, (p, q))?;
        cocycle.error((a.0 - b.0).norm() / b.0.norm() + (a.1 - b.1).norm(), || {
            format!("p = {p}, q = {q}")
        });
        darboux.error(darboux_defect(|p, q| transition(&f1, &f2, (p, q)), p, q)?, || {
            format!("p = {p}, q = {q}")
        });
    }
    Ok(vec![
        round.finish(true),
        equi.finish(true),
        glue.finish(true),
        cocycle.finish(true),
        darboux.finish(true),
    ])
}

/// Brute force: an increasing bijection between two finite fibers exists
/// iff some permutation of the target is increasing against the sorted
/// source — searched exhaustively.
pub(crate) fn brute_fibers_isomorphic(a: &[f64], b: &[f64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut src = a.to_vec();
    src.sort_by(f64::total_cmp);
    let mut perm: Vec<usize> = (0..b.len()).collect();
    // Heap's algorithm over all bijections.
    let increasing = |perm: &[usize]| perm.windows(2).all(|w| b[w[0]] < b[w[1]]);
    if increasing(&perm) {
        return true;
    }
    let mut c = vec![0usize; perm.len()];
    let mut i = 0;
    while i < perm.len() {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if increasing(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Brute-force classifier for finite configurations.
pub(crate) fn brute_isomorphic(a: &Configuration, b: &Configuration) -> bool {
    let fibers = |c: &Configuration| {
        let mut m: std::collections::BTreeMap<FiberKey, Vec<f64>> = Default::default();
        for n in 1..=c.listed().unwrap().len() {
            let (z, t) = c.fiber_point(n);
            m.entry(FiberKey::new(z)).or_default().push(t);
        }
        m
    };
    let (fa, fb) = (fibers(a), fibers(b));
    fa.keys().eq(fb.keys()) && fa.iter().all(|(k, v)| brute_fibers_isomorphic(v, &fb[k]))
}

fn isomorphism_suite(rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let eps = 1e-13;
    let (a, b) = (Configuration::power_law(2.0)?, Configuration::power_law(3.0)?);
    let data = IsomorphismData::build(&a, &b, 100.0)?;
    let mut fiber = Tally::new("μ′_ℂ∘H = μ_ℂ", 0.0);
    let mut equi = Tally::new("H(x·g) = H(x)·g", 1e-8);
    let mut indep = Tally::new("H independent of the covering section", 1e-8);
    for _ in 0..20 {
        let x = random_chart_point(rng, -1.0, 6.0);
        let ctx = || format!("{x:?}");
        let hx = match data.apply(&x, eps) {
            Ok(v) => v,
            Err(e) => {
                fiber.fail(&e, ctx);
                continue;
            }
        };
        fiber.truth(hx.zeta.z == x.zeta.z, || format!("{x:?} ↦ {hx:?}"));
        let g = random_unit(rng);
        match act(&a, &x, g, eps)
            .and_then(|xg| data.apply(&xg, eps))
            .and_then(|l| act(&b, &hx, g, eps).map(|r| (l, r)))
        {
            Ok((l, r)) => equi.error(point_distance(&l, &r), ctx),
            Err(e) => equi.fail(&e, ctx),
        }
        if x.zeta.z != Complex64::new(0.0, 0.0) {
            let (s, _, _) = power_law_sections()[rng.gen_range(1..5)].clone();
            match section_multiplier(&a, &s).and_then(|phi| data.apply_via(&s, &phi, &x, eps)) {
                Ok(y) => indep.error(point_distance(&y, &hx), ctx),
                Err(e) => indep.fail(&e, ctx),
            }
        }
    }
    let mut brute = Tally::new("classifier agrees with exhaustive search", 0.0);
    for _ in 0..100 {
        let (c1, c2) = (random_two_fiber(rng, 6), random_two_fiber(rng, 6));
        let got = isom_exists(&c1, &c2, 100.0)?.isomorphic;
        let want = brute_isomorphic(&c1, &c2);
        brute.truth(got == want, || {
            format!("{:?} vs {:?}: got {got}", c1.listed(), c2.listed())
        });
    }
    let mut inv = Tally::new("invariant under permutation and translation", 0.0);
    for _ in 0..20 {
        let c = random_two_fiber(rng, 8);
        let mut centers = c.listed().unwrap().to_vec();
        centers.reverse();
        let permuted = Configuration::finite(centers)?;
        let eta = ImHPoint::from_parts(rng.gen_range(-5.0..5.0), random_disk(rng, 3.0));
        let moved = c.translated(eta)?;
        inv.truth(isom_exists(&c, &permuted, 100.0)?.isomorphic, || {
            format!("permuted {:?}", c.listed())
        });
        inv.truth(isom_exists_up_to_translation(&c, &moved, 100.0)?.isomorphic, || {
            format!("{:?} by {eta}", c.listed())
        });
    }
    Ok(vec![
        fiber.finish(false),
        equi.finish(true),
        indep.finish(true),
        brute.finish(false),
        inv.finish(false),
    ])
}
