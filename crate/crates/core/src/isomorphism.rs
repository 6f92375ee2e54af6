//! Biholomorphisms `X(λ) → X(λ′)` from fiberwise order isomorphisms.
//!
//! `X(λ) ≅ X(λ′)` as soon as `Δ_λ = Δ_λ′` and every fiber of `λ` is order
//! isomorphic to the fiber of `λ′` over the same point. Given the matching
//! `h` and a multiplier `φ₀` with divisor `k_{o′, h(o)}`, the map is
//! `H = (F_{λ′}^{φφ₀})^{−1} ∘ F_λ^{φ}` on any chart through the point.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::charts::{section_multiplier, Chart, ManifoldPoint, Multiplier};
use crate::error::{Error, Result};
use crate::quotient::{base_gap, class_of, signed_count, CombinatorialSection, Gap, IntegerDivisor};
use crate::types::{complex_serde, delta_set, Configuration, FiberKey, OrderType};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberCertificate {
    #[serde(with = "complex_serde")]
    pub source_z: Complex64,
    #[serde(with = "complex_serde")]
    pub target_z: Complex64,
    pub source: OrderType,
    pub target: OrderType,
    pub matches: bool,
}

/// Verdict of the classifier with per-fiber evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsomCertificate {
    pub isomorphic: bool,
    /// `z′ − z` between matched fibers (zero for the strict test).
    #[serde(with = "complex_serde")]
    pub shift: Complex64,
    pub fibers: Vec<FiberCertificate>,
    pub obstruction: Option<String>,
}

fn compare_fibers(
    a: &Configuration,
    b: &Configuration,
    pairs: &[(Complex64, Complex64)],
    shift: Complex64,
) -> Result<IsomCertificate> {
    let mut fibers = Vec::with_capacity(pairs.len());
    let mut obstruction = None;
    for &(za, zb) in pairs {
        let (source, target) = (a.order_type(za)?, b.order_type(zb)?);
        let matches = source == target;
        if !matches && obstruction.is_none() {
            obstruction = Some(format!(
                "fiber over {za} has order type {source:?}, target over {zb} has {target:?}"
            ));
        }
        fibers.push(FiberCertificate {
            source_z: za,
            target_z: zb,
            source,
            target,
            matches,
        });
    }
    Ok(IsomCertificate {
        isomorphic: obstruction.is_none(),
        shift,
        fibers,
        obstruction,
    })
}

/// Decide whether `Δ_λ = Δ_λ′` on the disk and every pair of fibers over
/// the same point has the same order type.
pub fn isom_exists(a: &Configuration, b: &Configuration, disk: f64) -> Result<IsomCertificate> {
    let da: BTreeSet<FiberKey> = delta_set(a, disk)?.into_iter().map(FiberKey::new).collect();
    let db: BTreeSet<FiberKey> = delta_set(b, disk)?.into_iter().map(FiberKey::new).collect();
    let zero = Complex64::new(0.0, 0.0);
    if let Some(z) = da.symmetric_difference(&db).next() {
        let side = if da.contains(z) { "source" } else { "target" };
        return Ok(IsomCertificate {
            isomorphic: false,
            shift: zero,
            fibers: vec![],
            obstruction: Some(format!("fiber base {} occurs only in the {side}", z.z())),
        });
    }
    let pairs: Vec<_> = da.iter().map(|k| (k.z(), k.z())).collect();
    compare_fibers(a, b, &pairs, zero)
}

/// As [`isom_exists`], but also allowing `Δ_λ′ = Δ_λ + c` for a constant
/// `c` (a common translation of the centers moves every fiber base).
/// Fiber bases are matched to a relative tolerance of `1e−9`.
pub fn isom_exists_up_to_translation(a: &Configuration, b: &Configuration, disk: f64) -> Result<IsomCertificate> {
    let strict = isom_exists(a, b, disk)?;
    if strict.isomorphic {
        return Ok(strict);
    }
    let da = delta_set(a, disk)?;
    let Some(&anchor) = da.iter().min_by(|x, y| {
        x.norm()
            .total_cmp(&y.norm())
            .then(FiberKey::new(**x).cmp(&FiberKey::new(**y)))
    }) else {
        return Ok(strict);
    };
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-9 * (1.0 + x.norm().max(y.norm()));
    let reach = da.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let candidates = delta_set(b, disk + reach + anchor.norm())?;
    let mut first_failure = strict;
    for &target in &candidates {
        let shift = target - anchor;
        let db = delta_set(b, disk + shift.norm())?;
        let mut pairs = vec![];
        let mut ok = true;
        for &z in &da {
            match db.iter().find(|&&w| close(z + shift, w)) {
                Some(&w) => pairs.push((z, w)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        // Target fibers inside the translated disk must all be matched.
        ok &= db
            .iter()
            .filter(|&&w| (w - shift).norm() <= disk * (1.0 - 1e-12))
            .all(|&w| pairs.iter().any(|p| p.1 == w));
        if !ok {
            continue;
        }
        let cert = compare_fibers(a, b, &pairs, shift)?;
        if cert.isomorphic {
            return Ok(cert);
        }
        first_failure = cert;
    }
    Ok(first_failure)
}

/// Fiber point index at a given rank and back, counting from the end the
/// order type fixes: the top for `ω*`, the bottom for `ω` and finite
/// fibers, the least nonnegative point for `ω* + ω`.
struct Ranking;

impl Ranking {
    fn listed_heights(config: &Configuration, z: Complex64) -> Vec<(usize, f64)> {
        let key = FiberKey::new(z);
        let mut v: Vec<(usize, f64)> = (1..=config.listed().map_or(0, |c| c.len()))
            .map(|n| config.fiber_point(n))
            .enumerate()
            .filter(|(_, (b, _))| FiberKey::new(*b) == key)
            .map(|(i, (_, h))| (i + 1, h))
            .collect();
        v.sort_by(|x, y| x.1.total_cmp(&y.1));
        v
    }

    fn origin(ot: OrderType, pts: &[(usize, f64)]) -> Result<i64> {
        Ok(match ot {
            OrderType::Finite(_) | OrderType::OmegaUp => 0,
            OrderType::OmegaDown => pts.len() as i64 - 1,
            OrderType::OmegaBoth => match pts.iter().position(|p| p.1 >= 0.0) {
                Some(i) => i as i64,
                None => {
                    return Err(Error::TailUnresolved(
                        "no listed nonnegative point to anchor an ω*+ω fiber".into(),
                    ))
                }
            },
        })
    }

    fn rank(config: &Configuration, z: Complex64, n: usize, ot: OrderType) -> Result<i64> {
        if config.listed().is_none() {
            // Axial family: heights decrease with the index, ω* from the top.
            return Ok(n as i64 - 1);
        }
        let pts = Self::listed_heights(config, z);
        let i = pts
            .iter()
            .position(|p| p.0 == n)
            .ok_or_else(|| Error::InvalidArgument(format!("center {n} is not over {z}")))?;
        let r = i as i64 - Self::origin(ot, &pts)?;
        Ok(if ot == OrderType::OmegaDown { -r } else { r })
    }

    fn at_rank(config: &Configuration, z: Complex64, r: i64, ot: OrderType) -> Result<usize> {
        if config.listed().is_none() {
            let n = usize::try_from(r + 1).map_err(|_| Error::InvalidArgument(format!("rank {r}")))?;
            if n > config.truncation() {
                return Err(Error::TailUnresolved(format!("rank {r} is beyond the truncation")));
            }
            return Ok(n);
        }
        let pts = Self::listed_heights(config, z);
        let i = Self::origin(ot, &pts)? + if ot == OrderType::OmegaDown { -r } else { r };
        usize::try_from(i)
            .ok()
            .and_then(|i| pts.get(i))
            .map(|p| p.0)
            .ok_or_else(|| Error::TailUnresolved(format!("rank {r} over {z} is not among the listed centers")))
    }
}

/// The canonical fiberwise order isomorphism between two configurations
/// with equal `Δ` and matching order types.
#[derive(Debug, Clone)]
pub struct OrderIso {
    pub source: Configuration,
    pub target: Configuration,
    pub disk: f64,
    pub certificate: IsomCertificate,
}

impl OrderIso {
    fn order_type(&self, z: Complex64) -> Result<OrderType> {
        let (a, b) = (self.source.order_type(z)?, self.target.order_type(z)?);
        if a != b {
            return Err(Error::NotIsomorphic(format!("order types differ over {z}")));
        }
        Ok(a)
    }

    /// `h` on fiber point indices over `z`.
    pub fn map_index(&self, z: Complex64, n: usize) -> Result<usize> {
        let ot = self.order_type(z)?;
        let r = Ranking::rank(&self.source, z, n, ot)?;
        Ranking::at_rank(&self.target, z, r, ot)
    }

    /// `h` on gaps over `z`.
    pub fn map_gap(&self, z: Complex64, gap: Gap) -> Result<Gap> {
        Ok(Gap {
            lower: gap.lower.map(|n| self.map_index(z, n)).transpose()?,
            upper: gap.upper.map(|n| self.map_index(z, n)).transpose()?,
        })
    }

    /// Matched pairs `(n, h(n))` for up to `count` points per fiber, starting
    /// at the end the ranking counts from.
    pub fn pairs(&self, count: usize) -> Result<Vec<(Complex64, usize, usize)>> {
        let mut out = vec![];
        for f in &self.certificate.fibers {
            let z = f.source_z;
            let ot = f.source;
            let limit = match ot {
                OrderType::Finite(k) => k.min(count),
                _ => count,
            };
            for r in 0..limit as i64 {
                let Ok(n) = Ranking::at_rank(&self.source, z, r, ot) else {
                    break;
                };
                out.push((z, n, self.map_index(z, n)?));
            }
        }
        Ok(out)
    }
}

pub fn build_h(a: &Configuration, b: &Configuration, disk: f64) -> Result<OrderIso> {
    let certificate = isom_exists(a, b, disk)?;
    if !certificate.isomorphic {
        return Err(Error::NotIsomorphic(
            certificate
                .obstruction
                .clone()
                .unwrap_or_else(|| "fibers differ".into()),
        ));
    }
    Ok(OrderIso {
        source: a.clone(),
        target: b.clone(),
        disk,
        certificate,
    })
}

/// `φ₀ = Π (q − z)^{k(z)}` with `k = k_{o_{λ′}, h(o_λ)}` over the disk.
pub fn build_phi0(h: &OrderIso) -> Result<Multiplier> {
    let mut k = IntegerDivisor::default();
    for f in &h.certificate.fibers {
        let z = f.source_z;
        let image = h.map_gap(z, base_gap(&h.source, z)?)?;
        k.add(z, signed_count(&h.target, z, base_gap(&h.target, z)?, image)?);
    }
    Ok(Multiplier::from_divisor(k))
}

/// `h` and `φ₀`: everything needed to evaluate `H(h, φ₀)`.
#[derive(Debug, Clone)]
pub struct IsomorphismData {
    pub h: OrderIso,
    pub phi0: Multiplier,
}

impl IsomorphismData {
    pub fn build(a: &Configuration, b: &Configuration, disk: f64) -> Result<Self> {
        let h = build_h(a, b, disk)?;
        let phi0 = build_phi0(&h)?;
        Ok(Self { h, phi0 })
    }

    /// `h(s)` as a section of the target.
    pub fn map_section(&self, s: &CombinatorialSection) -> Result<CombinatorialSection> {
        let (src, tgt) = (&self.h.source, &self.h.target);
        let fibers: BTreeSet<FiberKey> = s
            .deviations
            .keys()
            .copied()
            .chain(self.h.certificate.fibers.iter().map(|f| FiberKey::new(f.source_z)))
            .collect();
        let mut out = CombinatorialSection::base();
        for key in fibers {
            let z = key.z();
            let image = self.h.map_gap(z, s.gap_at(src, z)?)?;
            if image != base_gap(tgt, z)? {
                out = out.with(z, image);
            }
        }
        Ok(out)
    }

    /// `H(x)` through the chart `(s, φ)` of the source.
    pub fn apply_via(
        &self,
        s: &CombinatorialSection,
        phi: &Multiplier,
        point: &ManifoldPoint,
        eps: f64,
    ) -> Result<ManifoldPoint> {
        if let crate::quotient::Position::Fixed(_) = class_of(&self.h.source, point.zeta)?.position {
            return Err(Error::FixedPointInput(point.zeta));
        }
        let (p, q) = Chart::new(&self.h.source, s.clone(), phi.clone())?.forward(point, eps)?;
        let target = Chart::new(&self.h.target, self.map_section(s)?, phi.product(&self.phi0))?;
        target.inverse(p, q, eps)
    }

    /// `H(x)` through the chart of the section through `x`.
    pub fn apply(&self, point: &ManifoldPoint, eps: f64) -> Result<ManifoldPoint> {
        let class = class_of(&self.h.source, point.zeta)?;
        if let crate::quotient::Position::Fixed(_) = class.position {
            return Err(Error::FixedPointInput(point.zeta));
        }
        let s = CombinatorialSection::through(&self.h.source, &class)?;
        let phi = section_multiplier(&self.h.source, &s)?;
        self.apply_via(&s, &phi, point, eps)
    }
}

pub fn apply_h(data: &IsomorphismData, point: &ManifoldPoint, eps: f64) -> Result<ManifoldPoint> {
    data.apply(point, eps)
}
