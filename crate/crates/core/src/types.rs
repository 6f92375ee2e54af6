//! Points of Im ℍ, center configurations, fibers and truncated
//! representatives.
//!
//! Fiber data is stored in the negated convention: center `λ_n` contributes
//! the fiber point `−λ_{n,ℝ}` over the base point `−λ_{n,ℂ}`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::AxialMoments;

/// `ζ = (ζ_ℝ, ζ_ℂ) ∈ ℝ × ℂ ≅ Im ℍ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImHPoint {
    pub t: f64,
    pub z: Complex64,
}

impl ImHPoint {
    pub const ORIGIN: ImHPoint = ImHPoint {
        t: 0.0,
        z: Complex64::new(0.0, 0.0),
    };

    pub fn new(t: f64, re: f64, im: f64) -> Self {
        Self {
            t,
            z: Complex64::new(re, im),
        }
    }

    pub fn from_parts(t: f64, z: Complex64) -> Self {
        Self { t, z }
    }

    pub fn norm(&self) -> f64 {
        self.t.hypot(self.z.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.z.re.is_finite() && self.z.im.is_finite()
    }
}

impl std::ops::Add for ImHPoint {
    type Output = ImHPoint;
    fn add(self, o: ImHPoint) -> ImHPoint {
        ImHPoint::from_parts(self.t + o.t, self.z + o.z)
    }
}

impl std::ops::Sub for ImHPoint {
    type Output = ImHPoint;
    fn sub(self, o: ImHPoint) -> ImHPoint {
        ImHPoint::from_parts(self.t - o.t, self.z - o.z)
    }
}

impl std::ops::Neg for ImHPoint {
    type Output = ImHPoint;
    fn neg(self) -> ImHPoint {
        ImHPoint::from_parts(-self.t, -self.z)
    }
}

impl fmt::Display for ImHPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.t, self.z.re, self.z.im)
    }
}

// Serialized as `[t, re, im]`.
impl Serialize for ImHPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.t, self.z.re, self.z.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for ImHPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [t, re, im] = <[f64; 3]>::deserialize(d)?;
        Ok(ImHPoint::new(t, re, im))
    }
}

/// Complex numbers as `[re, im]` in JSON.
pub mod complex_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// A fiber base point usable as an ordered map key. Negative zero is
/// folded into positive zero so `−0` (the negation of a real-axis center)
/// and `0` name the same fiber.
#[derive(Debug, Clone, Copy)]
pub struct FiberKey(Complex64);

impl FiberKey {
    pub fn new(z: Complex64) -> Self {
        FiberKey(Complex64::new(z.re + 0.0, z.im + 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }
}

impl PartialEq for FiberKey {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for FiberKey {}

impl PartialOrd for FiberKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for FiberKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.re.total_cmp(&o.0.re).then(self.0.im.total_cmp(&o.0.im))
    }
}

impl Serialize for FiberKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        complex_serde::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for FiberKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        complex_serde::deserialize(d).map(FiberKey::new)
    }
}

/// Order type of a discrete closed subset of ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderType {
    Finite(usize),
    /// Bounded below, unbounded above (ω).
    OmegaUp,
    /// Bounded above, unbounded below (ω*).
    OmegaDown,
    /// Unbounded in both directions (ω* + ω).
    OmegaBoth,
}

impl OrderType {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderType::Finite(_))
    }
}

/// A declared fiber of a [`Family::GeneralAxialFibered`] configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeclaredFiber {
    /// Fiber base point, i.e. `−λ_{n,ℂ}` for the centers on it.
    #[serde(with = "complex_serde")]
    pub z: Complex64,
    pub order_type: OrderType,
}

/// Center families. Indices are 1-based throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `λ_n = (n^β, 0)`, `β > 1`.
    PowerLaw { beta: f64 },
    /// Finitely many centers.
    Finite { centers: Vec<ImHPoint> },
    /// `λ_n = (a_n, 0)` with `a_n = head[n−1]` for `n ≤ head.len()` and
    /// `a_n = tail_scale·n^tail_exponent` afterwards; strictly increasing.
    AxialMonotone {
        head: Vec<f64>,
        tail_scale: f64,
        tail_exponent: f64,
    },
    /// Explicit centers plus declared asymptotics.
    ///
    /// Contract: every center with `|λ_n| < tail_radius` is listed, and every
    /// unlisted center lies on a declared fiber or has
    /// `|λ_{n,ℂ}| > working_radius`. On a fiber declared `omega_down`
    /// (`omega_up`) the unlisted points lie below (above) the listed ones.
    /// `tail_mass` bounds `Σ 1/|λ_n|` over the
    /// unlisted centers and is needed only for potential evaluation.
    GeneralAxialFibered {
        centers: Vec<ImHPoint>,
        #[serde(default)]
        fibers: Vec<DeclaredFiber>,
        working_radius: f64,
        #[serde(default)]
        tail_radius: Option<f64>,
        #[serde(default)]
        tail_mass: Option<f64>,
    },
}

/// Default cap on explicitly enumerated centers for infinite families.
pub const DEFAULT_TRUNCATION: usize = 1 << 20;

const FIRST_RUNG: usize = 16;

/// Tail of the center sequence beyond an explicit prefix.
#[derive(Debug, Clone, Copy)]
pub enum Tail<'a> {
    /// No further centers.
    Empty,
    /// Axial power tail, described by its moment table.
    Axial(&'a AxialMoments),
    /// Unlisted centers with `|λ_n| ≥ radius` and, if known,
    /// `Σ 1/|λ_n| ≤ mass`.
    Declared { radius: f64, mass: Option<f64> },
}

#[derive(Debug, Default)]
struct Cache {
    rungs: Vec<usize>,
    moments: Vec<OnceLock<AxialMoments>>,
    prefixes: Vec<OnceLock<Vec<f64>>>,
}

/// Explicitly summed centers for one truncation rung, in base coordinates
/// (before the offset).
#[derive(Debug, Clone, Copy)]
pub enum Explicit<'a> {
    /// `a_1, …, a_N` of an axial family: centers `(a_n, 0)`.
    Axial(&'a [f64]),
    /// Listed centers.
    Listed(&'a [ImHPoint]),
}

impl Explicit<'_> {
    pub fn len(&self) -> usize {
        match self {
            Explicit::Axial(a) => a.len(),
            Explicit::Listed(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Base center `n` (1-based).
    pub fn get(&self, n: usize) -> ImHPoint {
        match self {
            Explicit::Axial(a) => ImHPoint::new(a[n - 1], 0.0, 0.0),
            Explicit::Listed(c) => c[n - 1],
        }
    }
}

/// A center configuration `λ`, translated by a common `offset`
/// (`λ′_n = λ_n + offset`).
#[derive(Debug, Clone)]
pub struct Configuration {
    family: Family,
    truncation: usize,
    offset: ImHPoint,
    cache: Arc<Cache>,
}

impl PartialEq for Configuration {
    fn eq(&self, o: &Self) -> bool {
        self.family == o.family && self.truncation == o.truncation && self.offset == o.offset
    }
}

#[derive(Serialize, Deserialize)]
struct ConfigFile {
    #[serde(flatten)]
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    offset: Option<ImHPoint>,
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConfigFile {
            family: self.family.clone(),
            truncation: Some(self.truncation),
            offset: (self.offset != ImHPoint::ORIGIN).then_some(self.offset),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = ConfigFile::deserialize(d)?;
        let mut c = Configuration::new(f.family).map_err(serde::de::Error::custom)?;
        if let Some(n) = f.truncation {
            c = c.with_truncation(n).map_err(serde::de::Error::custom)?;
        }
        if let Some(o) = f.offset {
            c = c.translated(o).map_err(serde::de::Error::custom)?;
        }
        Ok(c)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

impl Configuration {
    pub fn new(family: Family) -> Result<Self> {
        check_family(&family)?;
        let truncation = match &family {
            Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => centers.len(),
            _ => DEFAULT_TRUNCATION,
        };
        Self::assemble(family, truncation, ImHPoint::ORIGIN)
    }

    pub fn power_law(beta: f64) -> Result<Self> {
        Self::new(Family::PowerLaw { beta })
    }

    pub fn finite(centers: Vec<ImHPoint>) -> Result<Self> {
        Self::new(Family::Finite { centers })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    fn assemble(family: Family, truncation: usize, offset: ImHPoint) -> Result<Self> {
        if !offset.is_finite() {
            return Err(invalid("offset must be finite"));
        }
        let rungs = match &family {
            Family::PowerLaw { .. } | Family::AxialMonotone { .. } => {
                let head = match &family {
                    Family::AxialMonotone { head, .. } => head.len(),
                    _ => 0,
                };
                if truncation < head.max(1) {
                    return Err(invalid(format!(
                        "truncation {truncation} is below the {head} explicit head values"
                    )));
                }
                let mut r = vec![];
                let mut n = FIRST_RUNG.max(head).min(truncation);
                while n < truncation {
                    r.push(n);
                    n *= 2;
                }
                r.push(truncation);
                r
            }
            Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => {
                vec![centers.len()]
            }
        };
        let moments = rungs.iter().map(|_| OnceLock::new()).collect();
        let prefixes = rungs.iter().map(|_| OnceLock::new()).collect();
        Ok(Self {
            family,
            truncation,
            offset,
            cache: Arc::new(Cache {
                rungs,
                moments,
                prefixes,
            }),
        })
    }

    /// Replace the cap on explicitly enumerated centers. Ignored by
    /// families whose centers are all listed.
    pub fn with_truncation(self, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(invalid("truncation must be positive"));
        }
        match self.family {
            Family::Finite { .. } | Family::GeneralAxialFibered { .. } => Ok(self),
            _ => Self::assemble(self.family, truncation, self.offset),
        }
    }

    /// The configuration `λ_n + η`.
    pub fn translated(&self, eta: ImHPoint) -> Result<Self> {
        Self::assemble(self.family.clone(), self.truncation, self.offset + eta)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn offset(&self) -> ImHPoint {
        self.offset
    }

    /// Number of centers when the index set is known to be finite.
    pub fn len(&self) -> Option<usize> {
        match &self.family {
            Family::Finite { centers } => Some(centers.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// True for power-law and axially monotone families.
    pub fn is_axial_family(&self) -> bool {
        matches!(self.family, Family::PowerLaw { .. } | Family::AxialMonotone { .. })
    }

    /// Number of listed centers for families with an explicit list.
    pub fn listed(&self) -> Option<&[ImHPoint]> {
        match &self.family {
            Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => Some(centers),
            _ => None,
        }
    }

    /// `a_n` of an axial family (before the offset).
    fn axial_value(&self, n: usize) -> f64 {
        match &self.family {
            Family::PowerLaw { beta } => (n as f64).powf(*beta),
            Family::AxialMonotone {
                head,
                tail_scale,
                tail_exponent,
            } => {
                if n <= head.len() {
                    head[n - 1]
                } else {
                    tail_scale * (n as f64).powf(*tail_exponent)
                }
            }
            _ => unreachable!("axial_value on a listed family"),
        }
    }

    /// Center `λ′_n` (1-based), offset included. For listed families `n`
    /// must not exceed the list length.
    pub fn center(&self, n: usize) -> ImHPoint {
        debug_assert!(n >= 1);
        let base = match &self.family {
            Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => centers[n - 1],
            _ => ImHPoint::new(self.axial_value(n), 0.0, 0.0),
        };
        base + self.offset
    }

    /// Fiber point `−λ′_{n,ℝ}` and its base `−λ′_{n,ℂ}`.
    pub fn fiber_point(&self, n: usize) -> (Complex64, f64) {
        let c = self.center(n);
        (FiberKey::new(-c.z).z(), -c.t)
    }

    /// Truncation ladder: explicit prefix lengths tried in order when
    /// certifying a tail.
    pub fn rungs(&self) -> &[usize] {
        &self.cache.rungs
    }

    /// Tail beyond the first `rungs()[i]` centers, in base coordinates
    /// (evaluate it at `ζ + offset`).
    pub fn tail(&self, rung: usize) -> Tail<'_> {
        match &self.family {
            Family::Finite { .. } => Tail::Empty,
            Family::GeneralAxialFibered {
                tail_radius, tail_mass, ..
            } => match tail_radius {
                None => Tail::Empty,
                Some(r) => Tail::Declared {
                    radius: *r,
                    mass: *tail_mass,
                },
            },
            Family::PowerLaw { beta } => Tail::Axial(self.moments(rung, 1.0, *beta)),
            Family::AxialMonotone {
                tail_scale,
                tail_exponent,
                ..
            } => Tail::Axial(self.moments(rung, *tail_scale, *tail_exponent)),
        }
    }

    /// Centers summed explicitly at rung `i`.
    pub fn explicit(&self, rung: usize) -> Explicit<'_> {
        match &self.family {
            Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => Explicit::Listed(centers),
            _ => {
                let n = self.cache.rungs[rung];
                Explicit::Axial(
                    self.cache.prefixes[rung].get_or_init(|| (1..=n).map(|k| self.axial_value(k)).collect()),
                )
            }
        }
    }

    fn moments(&self, rung: usize, scale: f64, exponent: f64) -> &AxialMoments {
        let n = self.cache.rungs[rung];
        self.cache.moments[rung].get_or_init(|| AxialMoments::new(scale, exponent, n))
    }

    /// Base point of the single fiber carrying an axial family.
    fn axial_fiber(&self) -> Complex64 {
        FiberKey::new(-self.offset.z).z()
    }

    /// Fiber points over `z` with values in `[lo, hi]`, sorted ascending.
    /// Either bound may be infinite when the set is certifiably finite.
    pub fn fiber_points(&self, z: Complex64, lo: f64, hi: f64) -> Result<Vec<(usize, f64)>> {
        let mut out = vec![];
        match &self.family {
            Family::Finite { centers } => {
                for n in 1..=centers.len() {
                    let (b, v) = self.fiber_point(n);
                    if b == z && v >= lo && v <= hi {
                        out.push((n, v));
                    }
                }
            }
            Family::PowerLaw { .. } | Family::AxialMonotone { .. } => {
                if z != self.axial_fiber() || lo > hi {
                    return Ok(out);
                }
                if lo == f64::NEG_INFINITY {
                    return Err(Error::TailUnresolved(format!("fiber over {z} is infinite below")));
                }
                // v_n = −(a_n + η_ℝ) decreases in n.
                let mut n = 1;
                loop {
                    if n > self.truncation {
                        return Err(Error::TailUnresolved(format!(
                            "window reaches below center {} (truncation)",
                            self.truncation
                        )));
                    }
                    let v = -(self.axial_value(n) + self.offset.t);
                    if v < lo {
                        break;
                    }
                    if v <= hi {
                        out.push((n, v));
                    }
                    n += 1;
                }
            }
            Family::GeneralAxialFibered { centers, .. } => {
                let (ex_lo, ex_hi) = self.general_certified_range(z);
                if (lo <= ex_lo && ex_lo.is_finite()) || (hi >= ex_hi && ex_hi.is_finite()) {
                    return Err(Error::TailUnresolved(format!(
                        "window [{lo}, {hi}] over {z} leaves the certified range ({ex_lo}, {ex_hi})"
                    )));
                }
                for n in 1..=centers.len() {
                    let (b, v) = self.fiber_point(n);
                    if b == z && v >= lo && v <= hi {
                        out.push((n, v));
                    }
                }
            }
        }
        out.sort_by(|a, b| a.1.total_cmp(&b.1));
        Ok(out)
    }

    /// Open interval of fiber values over `z` within which the listed
    /// centers of a general configuration are complete.
    fn general_certified_range(&self, z: Complex64) -> (f64, f64) {
        let Family::GeneralAxialFibered {
            centers,
            fibers,
            working_radius,
            tail_radius,
            ..
        } = &self.family
        else {
            return (f64::NEG_INFINITY, f64::INFINITY);
        };
        let Some(radius) = tail_radius else {
            return (f64::NEG_INFINITY, f64::INFINITY);
        };
        let base = z + self.offset.z;
        let declared = fibers.iter().find(|f| FiberKey::new(f.z) == FiberKey::new(base));
        match declared {
            None if base.norm() <= *working_radius => (f64::NEG_INFINITY, f64::INFINITY),
            Some(DeclaredFiber {
                order_type: OrderType::Finite(k),
                ..
            }) if centers
                .iter()
                .filter(|c| FiberKey::new(-c.z) == FiberKey::new(base))
                .count()
                == *k =>
            {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            other => {
                // Unlisted centers satisfy (v + η_ℝ)² + |z + η_ℂ|² ≥ R²; a
                // declared ω or ω* fiber keeps them on its unbounded side.
                let h2 = radius * radius - base.norm_sqr();
                if h2 <= 0.0 {
                    return (0.0, 0.0);
                }
                let h = h2.sqrt();
                let (lo, hi) = (-self.offset.t - h, -self.offset.t + h);
                match other.map(|f| f.order_type) {
                    Some(OrderType::OmegaDown) => (lo, f64::INFINITY),
                    Some(OrderType::OmegaUp) => (f64::NEG_INFINITY, hi),
                    _ => (lo, hi),
                }
            }
        }
    }

    /// Position of height `x` on the fiber over `z`.
    pub fn locate(&self, z: Complex64, x: f64) -> Result<Slot> {
        match &self.family {
            Family::PowerLaw { .. } | Family::AxialMonotone { .. } => {
                if z != self.axial_fiber() {
                    return Ok(Slot::Between {
                        lower: None,
                        upper: None,
                    });
                }
                // Largest n with a_n < y is the upper neighbor.
                let y = -x - self.offset.t;
                let mut n = 1;
                loop {
                    if n > self.truncation {
                        return Err(Error::TailUnresolved(format!(
                            "height {x} lies below center {}",
                            self.truncation
                        )));
                    }
                    let a = self.axial_value(n);
                    if a == y {
                        return Ok(Slot::Fixed(n));
                    }
                    if a > y {
                        return Ok(Slot::Between {
                            lower: Some(n),
                            upper: (n > 1).then(|| n - 1),
                        });
                    }
                    n += 1;
                }
            }
            Family::Finite { .. } | Family::GeneralAxialFibered { .. } => {
                let (ex_lo, ex_hi) = self.general_certified_range(z);
                if x <= ex_lo || x >= ex_hi {
                    return Err(Error::TailUnresolved(format!(
                        "height {x} over {z} is outside the certified range ({ex_lo}, {ex_hi})"
                    )));
                }
                let n_listed = self.listed().map_or(0, |c| c.len());
                let mut lower: Option<(usize, f64)> = None;
                let mut upper: Option<(usize, f64)> = None;
                for n in 1..=n_listed {
                    let (b, v) = self.fiber_point(n);
                    if b != z {
                        continue;
                    }
                    if v == x {
                        return Ok(Slot::Fixed(n));
                    }
                    if v < x && lower.map_or(true, |(_, lv)| v > lv) {
                        lower = Some((n, v));
                    }
                    if v > x && upper.map_or(true, |(_, uv)| v < uv) {
                        upper = Some((n, v));
                    }
                }
                let lower_ok = lower.map_or(ex_lo == f64::NEG_INFINITY, |(_, v)| v > ex_lo);
                let upper_ok = upper.map_or(ex_hi == f64::INFINITY, |(_, v)| v < ex_hi);
                if !(lower_ok && upper_ok) {
                    return Err(Error::TailUnresolved(format!(
                        "neighbors of {x} over {z} are not certified"
                    )));
                }
                Ok(Slot::Between {
                    lower: lower.map(|p| p.0),
                    upper: upper.map(|p| p.0),
                })
            }
        }
    }

    /// Order type of the fiber over `z`.
    pub fn order_type(&self, z: Complex64) -> Result<OrderType> {
        match &self.family {
            Family::Finite { centers } => Ok(OrderType::Finite(
                (1..=centers.len()).filter(|&n| self.fiber_point(n).0 == z).count(),
            )),
            Family::PowerLaw { .. } | Family::AxialMonotone { .. } => Ok(if z == self.axial_fiber() {
                OrderType::OmegaDown
            } else {
                OrderType::Finite(0)
            }),
            Family::GeneralAxialFibered {
                centers,
                fibers,
                working_radius,
                tail_radius,
                ..
            } => {
                let base = z + self.offset.z;
                if let Some(f) = fibers.iter().find(|f| FiberKey::new(f.z) == FiberKey::new(base)) {
                    return Ok(f.order_type);
                }
                if tail_radius.is_none() || base.norm() <= *working_radius {
                    let k = (1..=centers.len()).filter(|&n| self.fiber_point(n).0 == z).count();
                    return Ok(OrderType::Finite(k));
                }
                Err(Error::UnknownOrderType { z })
            }
        }
    }

    /// `true` if every fiber base lies on the real axis through the origin,
    /// i.e. the potential is invariant under rotations about the `t` axis.
    pub fn is_axisymmetric(&self) -> bool {
        let zero = Complex64::new(0.0, 0.0);
        match &self.family {
            Family::PowerLaw { .. } | Family::AxialMonotone { .. } => self.offset.z == zero,
            Family::Finite { centers } => centers.iter().all(|c| c.z + self.offset.z == zero),
            Family::GeneralAxialFibered { .. } => false,
        }
    }
}

/// Where a height sits on a fiber: on a point, or strictly between two
/// adjacent points (`None` = unbounded side).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Fixed(usize),
    Between { lower: Option<usize>, upper: Option<usize> },
}

fn check_family(family: &Family) -> Result<()> {
    let finite = |x: f64, what: &str| {
        if x.is_finite() {
            Ok(())
        } else {
            Err(invalid(format!("{what} must be finite")))
        }
    };
    match family {
        Family::PowerLaw { beta } => {
            finite(*beta, "beta")?;
            if *beta <= 1.0 {
                return Err(invalid(format!("beta = {beta} must exceed 1 for summability")));
            }
        }
        Family::Finite { centers } => {
            if centers.iter().any(|c| !c.is_finite()) {
                return Err(invalid("centers must be finite"));
            }
        }
        Family::AxialMonotone {
            head,
            tail_scale,
            tail_exponent,
        } => {
            finite(*tail_scale, "tail_scale")?;
            finite(*tail_exponent, "tail_exponent")?;
            if *tail_scale <= 0.0 || *tail_exponent <= 1.0 {
                return Err(invalid("tail needs tail_scale > 0 and tail_exponent > 1"));
            }
            if head.iter().any(|a| !a.is_finite()) {
                return Err(invalid("head values must be finite"));
            }
            if let Some(i) = head.windows(2).position(|w| w[0] >= w[1]) {
                return Err(invalid(format!("head not strictly increasing at index {}", i + 2)));
            }
            let next = tail_scale * ((head.len() + 1) as f64).powf(*tail_exponent);
            if head.last().is_some_and(|&l| l >= next) {
                return Err(invalid("first tail value does not exceed the last head value"));
            }
        }
        Family::GeneralAxialFibered {
            centers,
            fibers,
            working_radius,
            tail_radius,
            tail_mass,
        } => {
            if centers.iter().any(|c| !c.is_finite()) {
                return Err(invalid("centers must be finite"));
            }
            if !(*working_radius >= 0.0) {
                return Err(invalid("working_radius must be nonnegative"));
            }
            if tail_radius.is_some_and(|r| !(r > 0.0)) || tail_mass.is_some_and(|m| !(m >= 0.0)) {
                return Err(invalid("tail_radius must be positive and tail_mass nonnegative"));
            }
            let mut keys: Vec<FiberKey> = fibers.iter().map(|f| FiberKey::new(f.z)).collect();
            keys.sort();
            if keys.windows(2).any(|w| w[0] == w[1]) {
                return Err(invalid("fiber declared twice"));
            }
            for f in fibers {
                let on: Vec<f64> = centers
                    .iter()
                    .filter(|c| FiberKey::new(-c.z) == FiberKey::new(f.z))
                    .map(|c| -c.t)
                    .collect();
                if let OrderType::Finite(k) = f.order_type {
                    if on.len() > k {
                        return Err(invalid(format!(
                            "fiber over {} declared Finite({k}) but lists {} centers",
                            f.z,
                            on.len()
                        )));
                    }
                }
                if tail_radius.is_none() && !matches!(f.order_type, OrderType::Finite(k) if k == on.len()) {
                    return Err(invalid(format!(
                        "fiber over {} declares more centers than listed but no tail_radius is given",
                        f.z
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub generic: bool,
    /// Upper bound for `Σ 1/(1 + |λ_n|)`; infinite if it cannot be certified.
    pub summability_bound: f64,
    pub chart_admissible: bool,
    /// Index pairs of coinciding centers.
    pub duplicate_pairs: Vec<(usize, usize)>,
    /// Indices with `λ_{n,ℝ} = 0`.
    pub zero_real_parts: Vec<usize>,
    pub violations: Vec<String>,
}

/// Check genericity, summability and chart admissibility. Infinite
/// families are checked on their enumerated prefix; the tail is certified
/// analytically.
pub fn validate(config: &Configuration) -> ValidityReport {
    let mut duplicate_pairs = vec![];
    let mut zero_real_parts = vec![];
    let mut violations = vec![];
    let mut partial = 0.0;
    let mut tail_bound = 0.0;

    match config.family() {
        Family::Finite { centers } | Family::GeneralAxialFibered { centers, .. } => {
            let mut idx: Vec<usize> = (1..=centers.len()).collect();
            let key = |n: &usize| {
                let c = config.center(*n);
                (c.t, c.z.re, c.z.im)
            };
            idx.sort_by(|a, b| {
                let (x, y) = (key(a), key(b));
                x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.total_cmp(&y.2))
            });
            // Equal centers are adjacent after sorting; runs may exceed two.
            let mut i = 0;
            while i < idx.len() {
                let mut j = i + 1;
                while j < idx.len() && config.center(idx[j]) == config.center(idx[i]) {
                    j += 1;
                }
                for a in i..j {
                    for b in a + 1..j {
                        let (p, q) = (idx[a].min(idx[b]), idx[a].max(idx[b]));
                        duplicate_pairs.push((p, q));
                    }
                }
                i = j;
            }
            duplicate_pairs.sort();
            for n in 1..=centers.len() {
                let c = config.center(n);
                partial += 1.0 / (1.0 + c.norm());
                if c.t == 0.0 {
                    zero_real_parts.push(n);
                }
            }
            if let Tail::Declared { radius, mass } = config.tail(0) {
                let eta = config.offset().norm();
                match mass {
                    Some(m) if eta < radius => tail_bound = m / (1.0 - eta / radius),
                    _ => {
                        tail_bound = f64::INFINITY;
                        violations.push("summability of the unlisted tail is not certified".into());
                    }
                }
            }
        }
        Family::PowerLaw { .. } | Family::AxialMonotone { .. } => {
            let eta = config.offset().norm();
            let last = config.rungs().len() - 1;
            let n_explicit = config.rungs()[last];
            for n in 1..=n_explicit {
                let c = config.center(n);
                partial += 1.0 / (1.0 + c.norm());
                if c.t == 0.0 {
                    zero_real_parts.push(n);
                }
            }
            let Tail::Axial(m) = config.tail(last) else {
                unreachable!()
            };
            // 1/(1+|λ+η|) ≤ 1/(a_n − |η|) ≤ (1/a_n)/(1 − |η|/R)
            if eta < m.radius {
                let m1 = m.m[1] / m.radius;
                tail_bound = m1 * (1.0 + m.rel_err) / (1.0 - eta / m.radius);
            } else {
                tail_bound = f64::INFINITY;
                violations.push("offset exceeds the first tail center; raise the truncation".into());
            }
            // A tail value c·n^β can only vanish after the offset at n = (−η_ℝ/c)^{1/β}.
            let (scale, exponent) = match config.family() {
                Family::PowerLaw { beta } => (1.0, *beta),
                Family::AxialMonotone {
                    tail_scale,
                    tail_exponent,
                    ..
                } => (*tail_scale, *tail_exponent),
                _ => unreachable!(),
            };
            if config.offset().z == Complex64::new(0.0, 0.0) && config.offset().t < 0.0 {
                let n = (-config.offset().t / scale).powf(1.0 / exponent).round() as usize;
                if n > n_explicit && scale * (n as f64).powf(exponent) + config.offset().t == 0.0 {
                    zero_real_parts.push(n);
                }
            }
        }
    }
    for &(a, b) in &duplicate_pairs {
        violations.push(format!("centers {a} and {b} coincide"));
    }
    for &n in &zero_real_parts {
        violations.push(format!("center {n} has zero real part"));
    }
    ValidityReport {
        generic: duplicate_pairs.is_empty(),
        summability_bound: partial + tail_bound,
        chart_admissible: zero_real_parts.is_empty(),
        duplicate_pairs,
        zero_real_parts,
        violations,
    }
}

/// `{−λ_{n,ℂ}} ∩ {|z| ≤ radius}`, sorted by [`FiberKey`] order.
pub fn delta_set(config: &Configuration, radius: f64) -> Result<Vec<Complex64>> {
    let mut keys: Vec<FiberKey> = vec![];
    match config.family() {
        Family::PowerLaw { .. } | Family::AxialMonotone { .. } => {
            keys.push(FiberKey::new(-config.offset().z));
        }
        Family::Finite { centers } => {
            keys.extend((1..=centers.len()).map(|n| FiberKey::new(config.fiber_point(n).0)));
        }
        Family::GeneralAxialFibered {
            centers,
            fibers,
            working_radius,
            tail_radius,
            ..
        } => {
            if tail_radius.is_some() && radius + config.offset().z.norm() > *working_radius {
                return Err(Error::TailUnresolved(format!(
                    "disk of radius {radius} exceeds the working radius {working_radius}"
                )));
            }
            keys.extend((1..=centers.len()).map(|n| FiberKey::new(config.fiber_point(n).0)));
            keys.extend(
                fibers
                    .iter()
                    .filter(|f| f.order_type != OrderType::Finite(0))
                    .map(|f| FiberKey::new(f.z - config.offset().z)),
            );
        }
    }
    keys.retain(|k| k.z().norm() <= radius);
    keys.sort();
    keys.dedup();
    Ok(keys.into_iter().map(|k| k.z()).collect())
}

/// Fiber over `z`: points within a window plus the global order type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fiber {
    #[serde(with = "complex_serde")]
    pub z: Complex64,
    /// `(n, −λ_{n,ℝ})`, ascending.
    pub points: Vec<(usize, f64)>,
    pub order_type: OrderType,
}

pub fn fiber(config: &Configuration, z: Complex64, window: (f64, f64)) -> Result<Fiber> {
    let z = FiberKey::new(z).z();
    let order_type = config.order_type(z)?;
    let points = config.fiber_points(z, window.0, window.1)?;
    Ok(Fiber { z, points, order_type })
}

/// A finite prefix `(z_n, w_n)_{n ≤ N}` of a point of the level set.
#[derive(Debug, Clone)]
pub struct TruncatedRepresentative {
    pub entries: Vec<(Complex64, Complex64)>,
    pub config: Configuration,
}

impl TruncatedRepresentative {
    pub fn new(config: &Configuration, entries: Vec<(Complex64, Complex64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("representative has no entries".into()));
        }
        if let Some(n) = config.len() {
            if entries.len() > n {
                return Err(Error::InvalidArgument(format!(
                    "{} entries for a configuration with {n} centers",
                    entries.len()
                )));
            }
        }
        Ok(Self {
            entries,
            config: config.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// `2 z_1 w_1 − λ_{1,ℂ}`.
    #[serde(with = "complex_serde")]
    pub moment_constant: Complex64,
    /// Largest relative deviation of `2 z_n w_n − λ_{n,ℂ}` from the first.
    pub moment_spread: f64,
    pub moment_constant_ok: bool,
    pub stable: bool,
    /// A pair `(n, m)` with `t_n > t_m` and `z_n = 0 = w_m`.
    pub unstable_pair: Option<(usize, usize)>,
}

/// Default relative tolerance for moment constancy.
pub const MOMENT_REL_TOL: f64 = 1e-9;

/// Complex-moment constancy and `t`-stability of a representative. `t`
/// defaults to `λ_ℝ`.
pub fn check_representative(rep: &TruncatedRepresentative, t: Option<&[f64]>, rel_tol: f64) -> StabilityReport {
    let n = rep.entries.len();
    let ts: Vec<f64> = match t {
        Some(t) => t[..n].to_vec(),
        None => (1..=n).map(|i| rep.config.center(i).t).collect(),
    };
    let constants: Vec<Complex64> = rep
        .entries
        .iter()
        .enumerate()
        .map(|(i, (z, w))| 2.0 * z * w - rep.config.center(i + 1).z)
        .collect();
    let c0 = constants[0];
    let moment_spread = constants
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let (z, w) = rep.entries[i];
            let scale = 1.0 + (2.0 * z * w).norm() + rep.config.center(i + 1).z.norm();
            (c - c0).norm() / scale
        })
        .fold(0.0, f64::max);

    // Unstable iff some n with z_n = 0 sits strictly above some m with w_m = 0.
    let zero = Complex64::new(0.0, 0.0);
    let top_z = (0..n)
        .filter(|&i| rep.entries[i].0 == zero)
        .max_by(|&a, &b| ts[a].total_cmp(&ts[b]));
    let bottom_w = (0..n)
        .filter(|&i| rep.entries[i].1 == zero)
        .min_by(|&a, &b| ts[a].total_cmp(&ts[b]));
    let unstable_pair = match (top_z, bottom_w) {
        (Some(a), Some(b)) if ts[a] > ts[b] => Some((a + 1, b + 1)),
        _ => None,
    };
    StabilityReport {
        moment_constant: c0,
        moment_spread,
        moment_constant_ok: moment_spread <= rel_tol,
        stable: unstable_pair.is_none(),
        unstable_pair,
    }
}
