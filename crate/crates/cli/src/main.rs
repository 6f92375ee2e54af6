//! `ainf`: command-line access to potentials, quotient combinatorics,
//! charts and the isomorphism classifier.

// `!(x > 0.0)` is deliberate throughout: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ainf::{
    apply_h, class_of, f_lambda, flow_log_g, growth_exponent, isom_exists, isom_exists_up_to_translation, k_divisor,
    log_modulus, phi, run_suite, section_multiplier, section_through, transition, validate, Chart,
    CombinatorialSection, Configuration, IsomorphismData, ManifoldPoint, Multiplier, SUITES,
};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use args::{ComplexArg, PointArg};
use output::{RunManifest, Sink};

const SCHEMAS: &str = "\
File schemas (JSON):
  config   {\"family\": \"power_law\", \"beta\": 2.0}
           {\"family\": \"finite\", \"centers\": [[t, re, im], ...]}
           {\"family\": \"axial_monotone\", \"head\": [a_1, ...], \"tail_scale\": c, \"tail_exponent\": b}
           {\"family\": \"general_axial_fibered\", \"centers\": [...], \"fibers\": [{\"z\": [re, im],
            \"order_type\": \"omega_down\"}], \"working_radius\": R, \"tail_radius\": r, \"tail_mass\": m}
           optional on every family: \"offset\": [t, re, im], \"truncation\": N
  section  {\"deviations\": [{\"z\": [re, im], \"gap\": [lower | null, upper | null]}], \"unit\": [[re, im], ...]}
           gap ends are 1-based center indices; \"unit\" holds the coefficients c_0, c_1, ... of
           exp(c_0 + c_1 q + ...), constant term first
  iso      {\"source\": config, \"target\": config, \"disk\": R}
Points are given as t,re,im and complex numbers as re,im.";

#[derive(Parser)]
#[command(name = "ainf", version, about = "Numerics for A∞ hyper-Kähler 4-manifolds", after_long_help = SCHEMAS)]
struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Absolute error target for certified values.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps: f64,
    /// Working disk radius in the ℂ-plane.
    #[arg(long, global = true, default_value_t = 100.0)]
    disk: f64,
    /// Cap on explicitly enumerated centers of infinite families.
    #[arg(long, global = true)]
    truncation: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Genericity, summability and chart admissibility of a configuration.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Gibbons–Hawking potential Φ at a point.
    Phi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
    },
    /// Flow integral ∫ Φ(t, z) dt from one height to another.
    Flow {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: ComplexArg,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Integrate numerically instead of using the closed form.
        #[arg(long)]
        quadrature: bool,
    },
    /// Quotient class (fixed point or gap) of a point.
    ClassifyPoint {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
    },
    /// Signed count k_{s1,s2} of fiber points between two sections.
    KDivisor {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Chart coordinates (p, q) of a point.
    Chart {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        theta: f64,
        /// Section file; defaults to the section through the point.
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// The point with chart coordinates (p, q).
    Invert {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: ComplexArg,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexArg,
        /// Section file; defaults to the base section.
        #[arg(long)]
        section: Option<PathBuf>,
    },
    /// Transition map between the charts of two sections.
    Transition {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        p: ComplexArg,
        #[arg(long, allow_hyphen_values = true)]
        q: ComplexArg,
    },
    /// Decide whether X(λ) and X(λ′) are isomorphic.
    Isom {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        /// Matched point pairs to list per fiber.
        #[arg(long, default_value_t = 5)]
        pairs: usize,
    },
    /// Image of a point under the biholomorphism of an iso file.
    MapPoint {
        #[arg(long)]
        iso: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: PointArg,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        theta: f64,
    },
    /// Volume growth W(ρ) on a logarithmic grid, as CSV with the fitted slope.
    Growth {
        /// Power law λ_n = n^β; alternative to --config.
        #[arg(long, conflicts_with = "config")]
        beta: Option<f64>,
        #[arg(long, required_unless_present = "beta")]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 100.0)]
        rho_min: f64,
        #[arg(long, default_value_t = 10_000.0)]
        rho_max: f64,
        #[arg(long, default_value_t = 17)]
        points: usize,
        /// Monte Carlo samples for the sphere average (ignored when axisymmetric).
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Run a bundled invariant suite.
    Verify {
        /// One of core, potential, quotient, charts, isomorphism, or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

/// Errors in how the tool was invoked rather than in the mathematics.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

struct Ctx {
    manifest: RunManifest,
    eps: f64,
    disk: f64,
    truncation: Option<usize>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let bytes = std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        self.manifest.record(path, &bytes);
        String::from_utf8(bytes).map_err(|_| usage(format!("{} is not UTF-8", path.display())))
    }

    fn parse<T: for<'de> Deserialize<'de>>(&mut self, path: &Path) -> anyhow::Result<T> {
        let text = self.read(path)?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    fn config(&mut self, path: &Path) -> anyhow::Result<Configuration> {
        let text = self.read(path)?;
        let config = Configuration::from_json(&text)?;
        self.truncate(config)
    }

    fn truncate(&self, config: Configuration) -> anyhow::Result<Configuration> {
        Ok(match self.truncation {
            Some(n) if config.listed().is_none() => config.with_truncation(n)?,
            _ => config,
        })
    }

    fn section(&mut self, path: &Path, config: &Configuration) -> anyhow::Result<(CombinatorialSection, Multiplier)> {
        let file: SectionFile = self.parse(path)?;
        let phi = section_multiplier(config, &file.deviations)?.with_unit(file.unit.into_iter().map(c).collect());
        Ok((file.deviations, phi))
    }
}

#[derive(Serialize, Deserialize)]
struct SectionFile {
    #[serde(default = "CombinatorialSection::base")]
    deviations: CombinatorialSection,
    #[serde(default)]
    unit: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct IsoFile {
    source: serde_json::Value,
    target: serde_json::Value,
    disk: Option<f64>,
}

fn c(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Serialize)]
struct ChartOutput {
    p: [f64; 2],
    q: [f64; 2],
    log_modulus: ainf::LogModulus,
    /// In section-file form, ready for `invert` and `transition`.
    section: SectionFile,
    divisor: ainf::IntegerDivisor,
}

#[derive(Serialize)]
struct IsomOutput {
    isomorphic: bool,
    certificate: ainf::IsomCertificate,
    up_to_translation: ainf::IsomCertificate,
    /// `(z, n, h(n))` when the strict test succeeds.
    matching: Vec<([f64; 2], usize, usize)>,
    phi0: Option<Multiplier>,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let name = match &cli.command {
        Command::Validate { .. } => "validate",
        Command::Phi { .. } => "phi",
        Command::Flow { .. } => "flow",
        Command::ClassifyPoint { .. } => "classify-point",
        Command::KDivisor { .. } => "k-divisor",
        Command::Chart { .. } => "chart",
        Command::Invert { .. } => "invert",
        Command::Transition { .. } => "transition",
        Command::Isom { .. } => "isom",
        Command::MapPoint { .. } => "map-point",
        Command::Growth { .. } => "growth",
        Command::Verify { .. } => "verify",
    };
    if !(cli.eps > 0.0) || !(cli.disk > 0.0) {
        return Err(usage("--eps and --disk must be positive"));
    }
    let mut ctx = Ctx {
        manifest: RunManifest::new(name, cli.seed, cli.eps, cli.disk, cli.truncation),
        eps: cli.eps,
        disk: cli.disk,
        truncation: cli.truncation,
    };
    let sink = Sink::new(cli.out);
    match cli.command {
        Command::Validate { config } => {
            let config = ctx.config(&config)?;
            let report = validate(&config);
            sink.json(&ctx.manifest, &report)?;
        }
        Command::Phi { config, point } => {
            let config = ctx.config(&config)?;
            sink.json(&ctx.manifest, phi(&config, point.0, ctx.eps)?)?;
        }
        Command::Flow {
            config,
            z,
            from,
            to,
            quadrature,
        } => {
            let config = ctx.config(&config)?;
            let v = if quadrature {
                flow_log_g(&config, z.0, from, to, ctx.eps)?
            } else {
                f_lambda(&config, to, from, z.0, ctx.eps)?
            };
            sink.json(&ctx.manifest, v)?;
        }
        Command::ClassifyPoint { config, point } => {
            let config = ctx.config(&config)?;
            sink.json(&ctx.manifest, class_of(&config, point.0)?)?;
        }
        Command::KDivisor { config, from, to } => {
            let config = ctx.config(&config)?;
            let (s1, _) = ctx.section(&from, &config)?;
            let (s2, _) = ctx.section(&to, &config)?;
            sink.json(&ctx.manifest, k_divisor(&config, &s1, &s2, ctx.disk)?)?;
        }
        Command::Chart {
            config,
            point,
            theta,
            section,
        } => {
            let config = ctx.config(&config)?;
            let x = ManifoldPoint::new(point.0, theta);
            let (s, multiplier) = match section {
                Some(path) => ctx.section(&path, &config)?,
                None => {
                    let s = section_through(&config, &x)?;
                    let m = section_multiplier(&config, &s)?;
                    (s, m)
                }
            };
            let chart = Chart::new(&config, s.clone(), multiplier.clone())?;
            let (p, q) = chart.forward(&x, ctx.eps)?;
            let out = ChartOutput {
                p: pair(p),
                q: pair(q),
                log_modulus: log_modulus(&config, point.0, ctx.eps)?,
                section: SectionFile {
                    deviations: s,
                    unit: multiplier.unit.iter().map(|&u| pair(u)).collect(),
                },
                divisor: multiplier.divisor,
            };
            sink.json(&ctx.manifest, out)?;
        }
        Command::Invert { config, p, q, section } => {
            let config = ctx.config(&config)?;
            let chart = match section {
                Some(path) => {
                    let (s, m) = ctx.section(&path, &config)?;
                    Chart::new(&config, s, m)?
                }
                None => Chart::base(&config),
            };
            sink.json(&ctx.manifest, chart.inverse(p.0, q.0, ctx.eps)?)?;
        }
        Command::Transition { config, from, to, p, q } => {
            let config = ctx.config(&config)?;
            let (_, f1) = ctx.section(&from, &config)?;
            let (_, f2) = ctx.section(&to, &config)?;
            let (p2, q2) = transition(&f1, &f2, (p.0, q.0))?;
            sink.json(&ctx.manifest, serde_json::json!({ "p": pair(p2), "q": pair(q2) }))?;
        }
        Command::Isom {
            config_a,
            config_b,
            pairs,
        } => {
            let a = ctx.config(&config_a)?;
            let b = ctx.config(&config_b)?;
            let certificate = isom_exists(&a, &b, ctx.disk)?;
            let up_to_translation = isom_exists_up_to_translation(&a, &b, ctx.disk)?;
            let (matching, phi0) = if certificate.isomorphic {
                let data = IsomorphismData::build(&a, &b, ctx.disk)?;
                let m = data
                    .h
                    .pairs(pairs)?
                    .into_iter()
                    .map(|(z, n, m)| (pair(z), n, m))
                    .collect();
                (m, Some(data.phi0))
            } else {
                (vec![], None)
            };
            let out = IsomOutput {
                isomorphic: certificate.isomorphic,
                certificate,
                up_to_translation,
                matching,
                phi0,
            };
            sink.json(&ctx.manifest, out)?;
        }
        Command::MapPoint { iso, point, theta } => {
            let file: IsoFile = ctx.parse(&iso)?;
            let load = |v: serde_json::Value| -> anyhow::Result<Configuration> {
                let config: Configuration =
                    serde_json::from_value(v).map_err(|e| ainf::Error::InvalidConfig(e.to_string()))?;
                ctx.truncate(config)
            };
            let (a, b) = (load(file.source)?, load(file.target)?);
            let data = IsomorphismData::build(&a, &b, file.disk.unwrap_or(ctx.disk))?;
            sink.json(
                &ctx.manifest,
                apply_h(&data, &ManifoldPoint::new(point.0, theta), ctx.eps)?,
            )?;
        }
        Command::Growth {
            beta,
            config,
            rho_min,
            rho_max,
            points,
            samples,
        } => {
            let config = match (beta, config) {
                (Some(beta), _) => ctx.truncate(Configuration::power_law(beta)?)?,
                (None, Some(path)) => ctx.config(&path)?,
                (None, None) => return Err(usage("growth needs --beta or --config")),
            };
            if points < 2 || !(rho_min > 0.0 && rho_max > rho_min) {
                return Err(usage("growth needs --points ≥ 2 and 0 < --rho-min < --rho-max"));
            }
            let step = (rho_max / rho_min).ln() / (points - 1) as f64;
            let grid: Vec<f64> = (0..points).map(|i| rho_min * (step * i as f64).exp()).collect();
            let fit = growth_exponent(&config, &grid, samples, ctx.manifest.seed)?;
            let rows: Vec<Vec<f64>> = fit.samples.iter().map(|&(r, w)| vec![r, w, r.ln(), w.ln()]).collect();
            let trailer = format!("# slope={} stderr={}", fit.slope, fit.slope_stderr);
            sink.csv(&ctx.manifest, "rho,W,logrho,logW", &rows, &trailer)?;
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else if SUITES.contains(&suite.as_str()) {
                vec![suite.as_str()]
            } else {
                return Err(usage(format!(
                    "unknown suite {suite:?}; expected all or one of {}",
                    SUITES.join(", ")
                )));
            };
            let reports = names
                .iter()
                .map(|n| run_suite(n, ctx.manifest.seed))
                .collect::<ainf::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed());
            sink.json(
                &ctx.manifest,
                serde_json::json!({ "passed": passed, "suites": reports }),
            )?;
            return Ok(passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            if let Some(u) = e.downcast_ref::<UsageError>() {
                eprintln!("error: {u}\n\n{SCHEMAS}");
                return ExitCode::from(2);
            }
            match e.downcast_ref::<ainf::Error>() {
                Some(d) => eprintln!("error[{}]: {d}", d.kind()),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(1)
        }
    }
}
