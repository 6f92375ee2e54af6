//! Volume growth of base-distance balls.
//!
//! `W(ρ) = 2π ∫_{D(x) ≤ ρ} Φ(x) d³x`, where `D` is the ray distance
//! `∫_0^{|x|} √Φ` from the origin and `2π` is the circle fiber length. Along
//! each ray `D` is increasing, so the region is star-shaped and
//!
//! `W(ρ) = 2π ∫_{S²} V(ω, R_ρ(ω)) dω`,  `V(ω, R) = ∫_0^R Φ(sω) s² ds`.
//!
//! Ray profiles `ρ ↦ V(ω, R_ρ(ω))` are tabulated on an angular grid
//! (Chebyshev in `cos θ`, uniform in the azimuth; a single azimuth when the
//! configuration is axisymmetric) and the sphere average is a seeded Monte
//! Carlo mean over directions evaluated on the interpolated table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{inverse_distance_sum, ray_encounters, ray_integrals, ray_point};
use crate::error::{Error, Result};
use crate::roots::increasing_root;
use crate::types::Configuration;

#[derive(Debug, Clone, Copy)]
pub struct GrowthOptions {
    /// Polar nodes of the ray table.
    pub polar_nodes: usize,
    /// Azimuthal nodes when the configuration is not axisymmetric.
    pub azimuth_nodes: usize,
    /// Ratio between consecutive radial panel ends.
    pub panel_ratio: f64,
    /// Relative tolerance of the radial quadrature.
    pub rel_tol: f64,
    /// Monte Carlo samples per random stream.
    pub chunk: usize,
}

impl Default for GrowthOptions {
    fn default() -> Self {
        Self {
            polar_nodes: 384,
            azimuth_nodes: 64,
            panel_ratio: 1.05,
            rel_tol: 1e-8,
            chunk: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthFit {
    /// `(ln ρ, ln W)`.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub rho: Vec<f64>,
    pub volume: Vec<f64>,
}

/// Fit the exponent of `W(ρ) ~ ρ^α` over `rho_grid` with default options.
pub fn growth_exponent(config: &Configuration, rho_grid: &[f64], mc_samples: usize, seed: u64) -> Result<GrowthFit> {
    growth_exponent_with(config, rho_grid, mc_samples, seed, &GrowthOptions::default())
}

pub fn growth_exponent_with(
    config: &Configuration,
    rho_grid: &[f64],
    mc_samples: usize,
    seed: u64,
    opts: &GrowthOptions,
) -> Result<GrowthFit> {
    if rho_grid.len() < 2 || rho_grid.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidArgument(
            "rho grid needs at least two positive values".into(),
        ));
    }
    if rho_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("rho grid must be strictly increasing".into()));
    }
    let decades = (rho_grid[rho_grid.len() - 1] / rho_grid[0]).log10();
    if decades < 1.0 {
        return Err(Error::InsufficientRange { decades });
    }
    if mc_samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one Monte Carlo sample is needed".into(),
        ));
    }

    let np = opts.polar_nodes.max(2);
    let na = if config.is_axisymmetric() {
        1
    } else {
        opts.azimuth_nodes.max(1)
    };
    // Chebyshev nodes never touch the poles, where axial centers sit.
    let us: Vec<f64> = (0..np)
        .map(|i| -((i as f64 + 0.5) * std::f64::consts::PI / np as f64).cos())
        .collect();
    let phis: Vec<f64> = (0..na)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / na as f64)
        .collect();

    let nodes: Vec<(usize, usize)> = (0..np).flat_map(|i| (0..na).map(move |j| (i, j))).collect();
    let table: Vec<Vec<f64>> = nodes
        .par_iter()
        .map(|&(i, j)| {
            let u = us[i];
            let s = (1.0 - u * u).max(0.0).sqrt();
            let d = [u, s * phis[j].cos(), s * phis[j].sin()];
            ray_profile(config, &d, rho_grid, opts)
        })
        .collect::<Result<_>>()?;

    // Deterministic reduction: one ChaCha stream per chunk, summed in order.
    let chunks = mc_samples.div_ceil(opts.chunk);
    let partial: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = opts.chunk.min(mc_samples - c * opts.chunk);
            let mut acc = vec![0.0; rho_grid.len()];
            let mut row = vec![0.0; rho_grid.len()];
            for _ in 0..count {
                let u: f64 = rng.gen_range(-1.0..=1.0);
                let phi: f64 = if na > 1 {
                    rng.gen_range(0.0..std::f64::consts::TAU)
                } else {
                    0.0
                };
                interpolate(&table, &us, na, u, phi, &mut row);
                for (a, r) in acc.iter_mut().zip(&row) {
                    *a += r;
                }
            }
            acc
        })
        .collect();
    let mut mean = vec![0.0; rho_grid.len()];
    for p in &partial {
        for (m, v) in mean.iter_mut().zip(p) {
            *m += v;
        }
    }
    // 2π (fiber) × 4π (sphere) × mean over directions.
    let norm = 8.0 * std::f64::consts::PI * std::f64::consts::PI / mc_samples as f64;
    let volume: Vec<f64> = mean.iter().map(|m| m * norm).collect();

    let samples: Vec<(f64, f64)> = rho_grid.iter().zip(&volume).map(|(r, w)| (r.ln(), w.ln())).collect();
    let (slope, slope_stderr) = least_squares_slope(&samples);
    Ok(GrowthFit {
        samples,
        slope,
        slope_stderr,
        rho: rho_grid.to_vec(),
        volume,
    })
}

/// Ordinary least-squares slope and its standard error.
pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    if pts.len() < 3 {
        return (slope, 0.0);
    }
    let ssr: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    (slope, (ssr / (n - 2.0) / sxx).sqrt())
}

/// Bilinear interpolation in `(cos θ, azimuth)`, clamped in `cos θ` beyond
/// the outermost nodes and periodic in the azimuth.
fn interpolate(table: &[Vec<f64>], us: &[f64], na: usize, u: f64, phi: f64, out: &mut [f64]) {
    let np = us.len();
    let (i0, i1, tu) = match us.partition_point(|&x| x < u) {
        0 => (0, 0, 0.0),
        k if k >= np => (np - 1, np - 1, 0.0),
        k => (k - 1, k, (u - us[k - 1]) / (us[k] - us[k - 1])),
    };
    let (j0, j1, tp) = if na == 1 {
        (0, 0, 0.0)
    } else {
        let x = phi / std::f64::consts::TAU * na as f64;
        let j = (x.floor() as usize).min(na - 1);
        (j, (j + 1) % na, x - j as f64)
    };
    let at = |i: usize, j: usize| &table[i * na + j];
    let (a, b, c, d) = (at(i0, j0), at(i0, j1), at(i1, j0), at(i1, j1));
    for k in 0..out.len() {
        let lo = a[k] + tp * (b[k] - a[k]);
        let hi = c[k] + tp * (d[k] - c[k]);
        out[k] = lo + tu * (hi - lo);
    }
}

/// `V(ω, R_ρ)` for each `ρ` along the ray `s·d`.
fn ray_profile(config: &Configuration, d: &[f64; 3], rhos: &[f64], opts: &GrowthOptions) -> Result<Vec<f64>> {
    const CONE: f64 = 0.1;
    let sqrt_phi =
        |s: f64| -> Result<f64> { Ok((0.25 * inverse_distance_sum(config, ray_point(d, s), 1e-14)?.value).sqrt()) };

    let mut out = Vec::with_capacity(rhos.len());
    let mut s = 0.0;
    let mut dist = 0.0;
    let mut vol = 0.0;
    let mut next: f64 = 1e-3;
    let mut horizon = 0.0;
    let mut breaks: Vec<f64> = vec![];
    while out.len() < rhos.len() {
        if next > 1e18 {
            return Err(Error::InvalidArgument(format!(
                "ray distance saturates below rho = {}",
                rhos[out.len()]
            )));
        }
        if next > horizon {
            // Refresh the list of centers near the ray in doubling blocks.
            horizon = (2.0 * next).max(64.0);
            let (near, hit) = ray_encounters_cone(config, d, horizon, CONE);
            if let Some((index, at)) = hit {
                return Err(Error::RayHitsCenter { index, s: at });
            }
            breaks = near;
        }
        let local: Vec<f64> = breaks.iter().copied().filter(|&b| b > s && b < next).collect();
        let probe = sqrt_phi(next)?;
        let scale = [
            dist + probe * (next - s),
            vol + probe * probe * next * next * (next - s),
        ];
        let [dd, dv] = ray_integrals(config, d, s, next, &local, opts.rel_tol, scale)?;
        while out.len() < rhos.len() && dist + dd >= rhos[out.len()] {
            let target = rhos[out.len()];
            let radius = increasing_root(
                |r| {
                    let [p, _] = ray_integrals(config, d, s, r, &local, opts.rel_tol * 0.1, scale)?;
                    Ok((dist + p - target, sqrt_phi(r)?))
                },
                s,
                next,
                1e-6,
                1e-13,
            )?;
            let [_, v] = ray_integrals(config, d, s, radius, &local, opts.rel_tol * 0.1, scale)?;
            out.push(vol + v);
        }
        dist += dd;
        vol += dv;
        s = next;
        next *= opts.panel_ratio;
    }
    Ok(out)
}

fn ray_encounters_cone(
    config: &Configuration,
    d: &[f64; 3],
    horizon: f64,
    cone: f64,
) -> (Vec<f64>, Option<(usize, f64)>) {
    // Breakpoints are centers inside a cone around the ray, so spikes of
    // width ~ distance-to-ray are resolved at every scale.
    let (_, hit) = ray_encounters(config, d, horizon, 0.0);
    let mut keep = vec![];
    let visit = |c: crate::types::ImHPoint| {
        let p = [-c.t, -c.z.re, -c.z.im];
        let s = p[0] * d[0] + p[1] * d[1] + p[2] * d[2];
        let perp = ((p[0] - s * d[0]).powi(2) + (p[1] - s * d[1]).powi(2) + (p[2] - s * d[2]).powi(2)).sqrt();
        (s > 0.0 && s <= horizon && perp <= cone * s.max(1.0)).then_some(s)
    };
    match config.listed() {
        Some(c) => keep.extend((1..=c.len()).filter_map(|n| visit(config.center(n)))),
        None => {
            let eta = config.offset().norm();
            for n in 1..=config.truncation() {
                let c = config.center(n);
                if c.t - eta > 2.0 * horizon {
                    break;
                }
                if let Some(s) = visit(c) {
                    keep.push(s);
                }
            }
        }
    }
    keep.sort_by(f64::total_cmp);
    (keep, hit)
}
