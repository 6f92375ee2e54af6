//! The quotient `Im ℍ/∼_λ`: classes on vertical lines, their order,
//! combinatorial sections and the divisors `k_{s₁,s₂}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{complex_serde, Configuration, FiberKey, ImHPoint, OrderType, Slot};

/// An open gap between adjacent fiber points; `None` is the unbounded side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gap {
    pub lower: Option<usize>,
    pub upper: Option<usize>,
}

impl Gap {
    pub const WHOLE_LINE: Gap = Gap {
        lower: None,
        upper: None,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    Fixed(usize),
    Gap(Gap),
}

/// A point of `Im ℍ/∼_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientClass {
    #[serde(with = "complex_serde")]
    pub z: Complex64,
    pub position: Position,
}

impl QuotientClass {
    pub fn gap(&self) -> Option<Gap> {
        match self.position {
            Position::Gap(g) => Some(g),
            Position::Fixed(_) => None,
        }
    }
}

pub fn class_of(config: &Configuration, zeta: ImHPoint) -> Result<QuotientClass> {
    let z = FiberKey::new(zeta.z).z();
    let position = match config.locate(z, zeta.t)? {
        Slot::Fixed(n) => Position::Fixed(n),
        Slot::Between { lower, upper } => Position::Gap(Gap { lower, upper }),
    };
    Ok(QuotientClass { z, position })
}

/// Whether `ζ ∼ η`: equal points, or the closed vertical segment between
/// them misses every center.
pub fn same_class(config: &Configuration, zeta: ImHPoint, eta: ImHPoint) -> Result<bool> {
    Ok(class_of(config, zeta)? == class_of(config, eta)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Incomparable,
}

fn height(config: &Configuration, n: usize) -> f64 {
    config.fiber_point(n).1
}

/// Closed hull `[inf, sup]` of the heights in a class.
fn hull(config: &Configuration, p: Position) -> (f64, f64) {
    match p {
        Position::Fixed(n) => (height(config, n), height(config, n)),
        Position::Gap(g) => (
            g.lower.map_or(f64::NEG_INFINITY, |n| height(config, n)),
            g.upper.map_or(f64::INFINITY, |n| height(config, n)),
        ),
    }
}

/// The order induced on classes by `ζ ≺ η ⇔ ζ_ℂ = η_ℂ, ζ_ℝ < η_ℝ`.
pub fn compare(config: &Configuration, c1: &QuotientClass, c2: &QuotientClass) -> Comparison {
    if FiberKey::new(c1.z) != FiberKey::new(c2.z) {
        return Comparison::Incomparable;
    }
    if c1.position == c2.position {
        return Comparison::Equal;
    }
    let (lo1, hi1) = hull(config, c1.position);
    let (lo2, hi2) = hull(config, c2.position);
    // Distinct classes on one line are disjoint, so their hulls meet at
    // most in an endpoint that one of them does not contain.
    if hi1 <= lo2 {
        Comparison::Less
    } else if hi2 <= lo1 {
        Comparison::Greater
    } else {
        Comparison::Incomparable
    }
}

/// Check that `gap` is a gap of the fiber over `z`.
pub fn check_gap(config: &Configuration, z: Complex64, gap: Gap) -> Result<()> {
    let bad = |why: String| Error::InvalidArgument(format!("not a gap over {z}: {why}"));
    let key = FiberKey::new(z);
    for n in [gap.lower, gap.upper].into_iter().flatten() {
        if n == 0 || config.len().is_some_and(|l| n > l) || config.listed().is_some_and(|c| n > c.len()) {
            return Err(bad(format!("no center {n}")));
        }
        if n > config.truncation() && config.listed().is_none() {
            return Err(bad(format!("center {n} is beyond the truncation")));
        }
        if FiberKey::new(config.fiber_point(n).0) != key {
            return Err(bad(format!("center {n} lies over another fiber")));
        }
    }
    let ot = config.order_type(z)?;
    if gap.lower.is_none() && matches!(ot, OrderType::OmegaDown | OrderType::OmegaBoth) {
        return Err(bad("the fiber is unbounded below".into()));
    }
    if gap.upper.is_none() && matches!(ot, OrderType::OmegaUp | OrderType::OmegaBoth) {
        return Err(bad("the fiber is unbounded above".into()));
    }
    let (lo, hi) = hull(config, Position::Gap(gap));
    if lo >= hi {
        return Err(bad("lower end is not below the upper end".into()));
    }
    let inside = config.fiber_points(z, lo, hi)?;
    let ends = gap.lower.is_some() as usize + gap.upper.is_some() as usize;
    if inside.len() != ends {
        return Err(bad(format!("{} fiber points lie strictly inside", inside.len() - ends)));
    }
    Ok(())
}

/// The gap `o_λ(z)` containing height 0.
pub fn base_gap(config: &Configuration, z: Complex64) -> Result<Gap> {
    match config.locate(FiberKey::new(z).z(), 0.0)? {
        Slot::Between { lower, upper } => Ok(Gap { lower, upper }),
        Slot::Fixed(index) => Err(Error::NotChartAdmissible { index }),
    }
}

/// A continuous section of `π_λ(Y_λ) → ℂ`, stored as one gap per fiber:
/// `o_λ` except on finitely many fibers.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CombinatorialSection {
    pub deviations: BTreeMap<FiberKey, Gap>,
}

#[derive(Serialize, Deserialize)]
struct DeviationEntry {
    #[serde(with = "complex_serde")]
    z: Complex64,
    gap: (Option<usize>, Option<usize>),
}

impl Serialize for CombinatorialSection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<DeviationEntry> = self
            .deviations
            .iter()
            .map(|(k, g)| DeviationEntry {
                z: k.z(),
                gap: (g.lower, g.upper),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CombinatorialSection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<DeviationEntry>::deserialize(d)?;
        let mut deviations = BTreeMap::new();
        for e in v {
            let gap = Gap {
                lower: e.gap.0,
                upper: e.gap.1,
            };
            if deviations.insert(FiberKey::new(e.z), gap).is_some() {
                return Err(serde::de::Error::custom(format!("fiber {} listed twice", e.z)));
            }
        }
        Ok(Self { deviations })
    }
}

impl CombinatorialSection {
    /// The base section `o_λ`.
    pub fn base() -> Self {
        Self::default()
    }

    pub fn with(mut self, z: Complex64, gap: Gap) -> Self {
        self.deviations.insert(FiberKey::new(z), gap);
        self
    }

    /// The gap chosen over `z`.
    pub fn gap_at(&self, config: &Configuration, z: Complex64) -> Result<Gap> {
        match self.deviations.get(&FiberKey::new(z)) {
            Some(g) => Ok(*g),
            None => base_gap(config, z),
        }
    }

    /// The section through `class`, equal to `o_λ` elsewhere.
    pub fn through(config: &Configuration, class: &QuotientClass) -> Result<Self> {
        match class.position {
            Position::Gap(g) => Ok(Self::base().with(class.z, g)),
            Position::Fixed(n) => Err(Error::FixedPointInput(ImHPoint::from_parts(height(config, n), class.z))),
        }
    }

    pub fn validate(&self, config: &Configuration) -> Result<()> {
        for (k, g) in &self.deviations {
            check_gap(config, k.z(), *g)?;
        }
        Ok(())
    }

    /// Whether the class lies on this section.
    pub fn contains(&self, config: &Configuration, class: &QuotientClass) -> Result<bool> {
        Ok(match class.position {
            Position::Fixed(_) => false,
            Position::Gap(g) => self.gap_at(config, class.z)? == g,
        })
    }
}

/// `♯{points strictly between g₁ and g₂}`, negative when `g₂` is below `g₁`.
pub fn signed_count(config: &Configuration, z: Complex64, g1: Gap, g2: Gap) -> Result<i64> {
    if g1 == g2 {
        return Ok(0);
    }
    let (lo1, hi1) = hull(config, Position::Gap(g1));
    let (lo2, hi2) = hull(config, Position::Gap(g2));
    let (a, b, sign) = if hi1 <= lo2 {
        (hi1, lo2, 1)
    } else if hi2 <= lo1 {
        (hi2, lo1, -1)
    } else {
        return Err(Error::InvalidArgument(format!("gaps over {z} overlap")));
    };
    Ok(sign * config.fiber_points(z, a, b)?.len() as i64)
}

/// A finitely supported integer function on `ℂ`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntegerDivisor(pub BTreeMap<FiberKey, i64>);

#[derive(Serialize, Deserialize)]
struct DivisorEntry {
    #[serde(with = "complex_serde")]
    z: Complex64,
    k: i64,
}

impl Serialize for IntegerDivisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<DivisorEntry> = self.0.iter().map(|(z, k)| DivisorEntry { z: z.z(), k: *k }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerDivisor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mut out = IntegerDivisor::default();
        for e in Vec::<DivisorEntry>::deserialize(d)? {
            out.add(e.z, e.k);
        }
        Ok(out)
    }
}

impl IntegerDivisor {
    pub fn get(&self, z: Complex64) -> i64 {
        self.0.get(&FiberKey::new(z)).copied().unwrap_or(0)
    }

    /// Add `k` at `z`, dropping entries that cancel.
    pub fn add(&mut self, z: Complex64, k: i64) {
        let key = FiberKey::new(z);
        let v = self.0.get(&key).copied().unwrap_or(0) + k;
        if v == 0 {
            self.0.remove(&key);
        } else {
            self.0.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.0.keys().map(|k| k.z())
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|(z, k)| (*z, -k)).collect())
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (z, k) in &other.0 {
            out.add(z.z(), *k);
        }
        out
    }
}

impl std::ops::Neg for IntegerDivisor {
    type Output = IntegerDivisor;
    fn neg(self) -> Self {
        self.negated()
    }
}

/// `k_{s₁,s₂}(z) = ♯{s₁(z) < p < s₂(z)} − ♯{s₂(z) < p < s₁(z)}` over the
/// fibers with `|z| ≤ disk`.
pub fn k_divisor(
    config: &Configuration,
    s1: &CombinatorialSection,
    s2: &CombinatorialSection,
    disk: f64,
) -> Result<IntegerDivisor> {
    let mut out = IntegerDivisor::default();
    let keys: std::collections::BTreeSet<FiberKey> =
        s1.deviations.keys().chain(s2.deviations.keys()).copied().collect();
    for key in keys {
        let z = key.z();
        if z.norm() > disk {
            continue;
        }
        let k = signed_count(config, z, s1.gap_at(config, z)?, s2.gap_at(config, z)?)?;
        out.add(z, k);
    }
    Ok(out)
}

/// Whether the gap assignment `candidate` defines a continuous section:
/// its divisor against `base` must have discrete, closed support. A
/// finite list of valid deviations always qualifies; configurations whose
/// fibers accumulate are rejected when they are built.
pub fn is_continuous(
    config: &Configuration,
    base: &CombinatorialSection,
    candidate: &CombinatorialSection,
    disk: f64,
) -> Result<bool> {
    base.validate(config)?;
    candidate.validate(config)?;
    // Every gap is located with certified truncation, so the support is a
    // finite set of fibers.
    k_divisor(config, base, candidate, disk)?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pl() -> Configuration {
        Configuration::power_law(2.0).unwrap()
    }

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn classes_on_the_axis() {
        let c = class_of(&pl(), ImHPoint::new(-2.5, 0.0, 0.0)).unwrap();
        assert_eq!(
            c.position,
            Position::Gap(Gap {
                lower: Some(2),
                upper: Some(1)
            })
        );
        let f = class_of(&pl(), ImHPoint::new(-4.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.position, Position::Fixed(2));
        let off = class_of(&pl(), ImHPoint::new(7.0, 1.0, 0.0)).unwrap();
        assert_eq!(off.position, Position::Gap(Gap::WHOLE_LINE));
        assert_eq!(compare(&pl(), &f, &c), Comparison::Less);
        assert_eq!(compare(&pl(), &c, &f), Comparison::Greater);
        assert_eq!(compare(&pl(), &c, &off), Comparison::Incomparable);
    }

    #[test]
    fn same_class_examples() {
        let p = |t| ImHPoint::new(t, 0.0, 0.0);
        assert!(same_class(&pl(), p(-2.5), p(-3.9)).unwrap());
        assert!(!same_class(&pl(), p(-2.5), p(-0.5)).unwrap());
    }

    #[test]
    fn divisor_against_base() {
        let s = CombinatorialSection::base().with(
            zero(),
            Gap {
                lower: Some(3),
                upper: Some(2),
            },
        );
        let k = k_divisor(&pl(), &CombinatorialSection::base(), &s, 10.0).unwrap();
        assert_eq!(k.get(zero()), -2);
        let back = k_divisor(&pl(), &s, &CombinatorialSection::base(), 10.0).unwrap();
        assert_eq!(back, k.negated());
    }

    #[test]
    fn gap_validation() {
        let cfg = pl();
        assert!(check_gap(
            &cfg,
            zero(),
            Gap {
                lower: Some(3),
                upper: Some(2)
            }
        )
        .is_ok());
        assert!(check_gap(
            &cfg,
            zero(),
            Gap {
                lower: Some(3),
                upper: Some(1)
            }
        )
        .is_err());
        assert!(check_gap(
            &cfg,
            zero(),
            Gap {
                lower: None,
                upper: Some(1)
            }
        )
        .is_err());
        assert!(check_gap(&cfg, Complex64::new(1.0, 0.0), Gap::WHOLE_LINE).is_ok());
    }

    #[test]
    fn section_json_round_trip() {
        let s = CombinatorialSection::base().with(
            zero(),
            Gap {
                lower: Some(2),
                upper: Some(1),
            },
        );
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"[{"z":[0.0,0.0],"gap":[2,1]}]"#);
        let back: CombinatorialSection = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
