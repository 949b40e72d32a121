//! The `uniqpair` command-line front end: one subcommand per operation, JSON
//! in, JSON (and optionally CSV) out.

use crate::certificate::{
    build_vanishing_function_with, certify, CertifyOptions, DerivativeMode, FourierCheck,
    SamplingOptions,
};
use crate::confined::{box_bounds_with, solve_confined, Interval, ZeroPolicy, MIN_GRID};
use crate::criticality::{
    convert_convention, gse_report, lemma_from_reports, spacing_products, to_angular, PointSet,
};
use crate::error::{Error, Result};
use crate::hermite::{eval_hermite, gauss_hermite, HermiteExpansion, MAX_QUADRATURE_NODES};
use crate::sobolev::{h_norm_sq_quadrature_with, DEFAULT_ROUTE_TOL};
use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const INPUT_HELP: &str = "\
Input schemas (JSON):
  hermite   {\"n\": 3, \"xs\": [0.0, 0.5]}
  norm      {\"re\": [0, 1], \"im\": [0, 0]}            (im optional)
  spectrum  {\"a\": 1, \"b\": 2, \"k\": 3}
  bounds    {\"a\": 1, \"b\": 2, \"n\": 0}              (n optional, default 0)
  classify, lemma, convert
            {\"points\": [...], \"convention\": \"angular\"|\"ordinary\",
             \"first_index\": 0, \"tail\": {\"alpha\": 0.5}}
  gse       {\"lambda\": <point set>, \"mu\": <point set>}  (mu optional)
  certify   {\"lambda\": <point set>, \"mu\": <point set>|null,
             \"f_weights\": {\"re\": [...], \"im\": [...]},
             \"f_hat_weights\": {\"re\": [...]}|null,
             \"fourier_check\": \"enforce\"|\"report\",
             \"derivative_mode\": \"finite-difference\"|\"spectral\"}

CSV columns (--csv):
  hermite   x,phi_n
  norm      n,re,im,abs_sq
  spectrum  x,psi0,psi1,... (grid nodes and normalised eigenvectors)
  bounds    n,e_down,e_up
  classify  j,a,b,product,product_left
  gse       side,j,a,b,energy,error_estimate,ratio,enclosure_lo,enclosure_hi
  lemma     j,a,b,energy,error_estimate,ratio,enclosure_lo,enclosure_hi
  convert   j,point
  certify   side,j,a,b,ground_energy,energy_integral,l2_mass,rayleigh_bound,
            x_moment,weighted_bound,ratio,slack

Exit status: 0 success, 2 precondition or schema error, 3 numerical failure.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Evaluate the Hermite function φ_n at points.
    Hermite,
    /// Sobolev norm of a Hermite expansion by both routes.
    Norm,
    /// Lowest confined energies and eigenvectors on [a, b].
    Spectrum,
    /// Analytic box bounds on the n-th confined energy.
    Bounds,
    /// Spacing-product criticality of a point set.
    Classify,
    /// Ground-state-energy criticality of Λ (and M).
    Gse,
    /// Numerical checks of the criticality lemma.
    Lemma,
    /// Convert a point set between conventions.
    Convert,
    /// Evaluate the uniqueness inequality chain on a witness.
    Certify,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "uniqpair", version, about = "Confined-oscillator numerics for Fourier uniqueness pairs", after_help = INPUT_HELP)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON input file.
    pub input: PathBuf,
    /// JSON report destination (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write a CSV table here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Ground-energy tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Finite-difference cells for `spectrum`.
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// Allow intervals containing 0 in `bounds` (potential minimum 0).
    #[arg(long)]
    pub relaxed: bool,
}

impl RunConfig {
    pub fn new(command: Command, input: impl Into<PathBuf>) -> Self {
        Self {
            command,
            input: input.into(),
            output: None,
            csv: None,
            tol: 1e-8,
            grid: 1024,
            relaxed: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Precondition(format!("--tol must be positive, got {}", self.tol)));
        }
        if self.grid < MIN_GRID {
            return Err(Error::Precondition(format!(
                "--grid must be at least {MIN_GRID}, got {}",
                self.grid
            )));
        }
        Ok(())
    }

    fn zero_policy(&self) -> ZeroPolicy {
        if self.relaxed {
            ZeroPolicy::Relaxed
        } else {
            ZeroPolicy::Strict
        }
    }
}

/// What a run produces before anything is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifacts {
    pub json: String,
    pub csv: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HermiteInput {
    n: usize,
    xs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
pub struct HermiteOutput {
    pub n: usize,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumInput {
    a: f64,
    b: f64,
    k: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundsInput {
    a: f64,
    b: f64,
    #[serde(default)]
    n: usize,
}

#[derive(Serialize, Deserialize)]
pub struct BoundsOutput {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub e_down: f64,
    pub e_up: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GseInput {
    lambda: PointSet,
    #[serde(default)]
    mu: Option<PointSet>,
}

#[derive(Serialize, Deserialize)]
pub struct GseOutput {
    pub lambda: crate::criticality::GseReport,
    pub mu: Option<crate::criticality::GseReport>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Weights {
    re: Vec<f64>,
    #[serde(default)]
    im: Vec<f64>,
}

impl Weights {
    fn complex(&self, what: &str) -> Result<Vec<Complex64>> {
        if !self.im.is_empty() && self.im.len() != self.re.len() {
            return Err(Error::Precondition(format!(
                "{what}: \"im\" has {} entries but \"re\" has {}",
                self.im.len(),
                self.re.len()
            )));
        }
        Ok(self
            .re
            .iter()
            .enumerate()
            .map(|(i, &r)| Complex64::new(r, self.im.get(i).copied().unwrap_or(0.0)))
            .collect())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertifyInput {
    lambda: PointSet,
    #[serde(default)]
    mu: Option<PointSet>,
    f_weights: Weights,
    #[serde(default)]
    f_hat_weights: Option<Weights>,
    #[serde(default)]
    fourier_check: FourierCheck,
    #[serde(default)]
    derivative_mode: DerivativeMode,
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

/// Run the command on already-loaded input text.
pub fn execute(config: &RunConfig, text: &str) -> Result<Artifacts> {
    config.validate()?;
    let path = config.input.as_path();
    let mut csv = String::new();
    let json = match config.command {
        Command::Hermite => {
            let input: HermiteInput = parse(path, text)?;
            let values = eval_hermite(input.n, &input.xs)?;
            csv.push_str(&format!("x,phi_{}\n", input.n));
            for (x, v) in input.xs.iter().zip(&values) {
                let _ = writeln!(csv, "{x},{v}");
            }
            to_json(&HermiteOutput {
                n: input.n,
                xs: input.xs,
                values,
            })
        }
        Command::Norm => {
            let e: HermiteExpansion = parse(path, text)?;
            let nodes = (2 * e.degree() + 2).clamp(64, MAX_QUADRATURE_NODES);
            let report = h_norm_sq_quadrature_with(&e, &gauss_hermite(nodes)?, DEFAULT_ROUTE_TOL)?;
            csv.push_str("n,re,im,abs_sq\n");
            for (n, c) in e.coeffs().iter().enumerate() {
                let _ = writeln!(csv, "{n},{},{},{}", c.re, c.im, c.norm_sqr());
            }
            to_json(&report)
        }
        Command::Spectrum => {
            let input: SpectrumInput = parse(path, text)?;
            let result = solve_confined(Interval::new(input.a, input.b)?, input.k, config.grid)?;
            csv = result.to_csv();
            to_json(&result)
        }
        Command::Bounds => {
            let input: BoundsInput = parse(path, text)?;
            let iv = Interval::new(input.a, input.b)?;
            let b = box_bounds_with(iv, input.n, config.zero_policy())?;
            let _ = write!(csv, "n,e_down,e_up\n{},{},{}\n", b.n, b.e_down, b.e_up);
            to_json(&BoundsOutput {
                a: iv.a(),
                b: iv.b(),
                n: b.n,
                e_down: b.e_down,
                e_up: b.e_up,
            })
        }
        Command::Classify => {
            let set: PointSet = parse(path, text)?;
            let report = spacing_products(&set);
            csv.push_str("j,a,b,product,product_left\n");
            for g in &report.per_gap_products {
                let _ = writeln!(csv, "{},{},{},{},{}", g.j, g.a, g.b, g.product, g.product_left);
            }
            to_json(&report)
        }
        Command::Gse => {
            let input: GseInput = parse(path, text)?;
            let lambda = gse_report(&input.lambda, config.tol)?;
            let mu = input.mu.as_ref().map(|m| gse_report(m, config.tol)).transpose()?;
            csv.push_str("side,j,a,b,energy,error_estimate,ratio,enclosure_lo,enclosure_hi\n");
            for (side, report) in [("lambda", Some(&lambda)), ("mu", mu.as_ref())] {
                for g in report.iter().flat_map(|r| &r.per_gap_ratios) {
                    let _ = writeln!(
                        csv,
                        "{side},{},{},{},{},{},{},{},{}",
                        g.j, g.a, g.b, g.energy, g.error_estimate, g.ratio, g.enclosure.0, g.enclosure.1
                    );
                }
            }
            to_json(&GseOutput { lambda, mu })
        }
        Command::Lemma => {
            let set: PointSet = parse(path, text)?;
            let tail = set.tail.ok_or_else(|| {
                Error::Precondition("lemma needs a tail model, e.g. \"tail\": {\"alpha\": 0.5}".into())
            })?;
            let set = to_angular(&set);
            let gse = gse_report(&set, config.tol)?;
            let report = lemma_from_reports(&set, tail, &spacing_products(&set), &gse)?;
            csv.push_str("j,a,b,energy,error_estimate,ratio,enclosure_lo,enclosure_hi\n");
            for g in &gse.per_gap_ratios {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},{}",
                    g.j, g.a, g.b, g.energy, g.error_estimate, g.ratio, g.enclosure.0, g.enclosure.1
                );
            }
            to_json(&report)
        }
        Command::Convert => {
            let set: PointSet = parse(path, text)?;
            let out = convert_convention(&set);
            csv.push_str("j,point\n");
            for (i, p) in out.points.iter().enumerate() {
                let _ = writeln!(csv, "{},{p}", out.first_index + i as i64);
            }
            to_json(&out)
        }
        Command::Certify => {
            let input: CertifyInput = parse(path, text)?;
            let sampling = SamplingOptions::default();
            let mode = input.derivative_mode;
            let f = build_vanishing_function_with(
                &input.lambda,
                &input.f_weights.complex("f_weights")?,
                sampling,
                mode,
            )?;
            let f_hat = match (&input.mu, &input.f_hat_weights) {
                (Some(mu), Some(w)) => {
                    let w = w.complex("f_hat_weights")?;
                    // an all-zero f̂ is a legitimate (if uninteresting) witness
                    if w.iter().all(|c| c.norm() == 0.0) && w.len() == mu.gap_count() {
                        let ones = vec![Complex64::new(1.0, 0.0); w.len()];
                        Some(
                            build_vanishing_function_with(mu, &ones, sampling, mode)?
                                .scale(Complex64::new(0.0, 0.0)),
                        )
                    } else {
                        Some(build_vanishing_function_with(mu, &w, sampling, mode)?)
                    }
                }
                (None, None) => None,
                _ => {
                    return Err(Error::Precondition(
                        "\"mu\" and \"f_hat_weights\" must be given together".into(),
                    ))
                }
            };
            let opts = CertifyOptions {
                tol: config.tol,
                fourier_check: input.fourier_check,
                ..CertifyOptions::default()
            };
            let cert = certify(&input.lambda, input.mu.as_ref(), &f, f_hat.as_ref(), &opts)?;
            csv = cert.to_csv();
            to_json(&cert)
        }
    };
    Ok(Artifacts { json, csv })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

/// Read the input, run, write outputs. Returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let result = std::fs::read_to_string(&config.input)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", config.input.display())))
        .and_then(|text| execute(config, &text))
        .and_then(|art| {
            if let Some(path) = &config.csv {
                write_file(path, &art.csv)?;
            }
            match &config.output {
                Some(path) => write_file(path, &art.json),
                None => {
                    print!("{}", art.json);
                    Ok(())
                }
            }
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("uniqpair: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exec(cmd: Command, text: &str) -> Result<Artifacts> {
        execute(&RunConfig::new(cmd, "input.json"), text)
    }

    fn value(a: &Artifacts) -> serde_json::Value {
        serde_json::from_str(&a.json).unwrap()
    }

    #[test]
    fn classify_example() {
        let out = exec(Command::Classify, r#"{"points": [1, 2]}"#).unwrap();
        let v = value(&out);
        assert_eq!(v["sup_product"], 2.0);
        assert_eq!(v["uniformly_supercritical"], true);
    }

    #[test]
    fn bounds_example() {
        let out = exec(Command::Bounds, r#"{"a": 1, "b": 2, "n": 0}"#).unwrap();
        let v = value(&out);
        assert!((v["e_down"].as_f64().unwrap() - 5.434802200544679).abs() < 1e-14);
        assert!((v["e_up"].as_f64().unwrap() - 6.934802200544679).abs() < 1e-14);
        assert_eq!(out.csv.lines().count(), 2);
    }

    #[test]
    fn bounds_zero_policy() {
        let text = r#"{"a": -1, "b": 2}"#;
        assert_eq!(exec(Command::Bounds, text).unwrap_err().exit_code(), 2);
        let mut cfg = RunConfig::new(Command::Bounds, "in.json");
        cfg.relaxed = true;
        assert!(execute(&cfg, text).is_ok());
    }

    #[test]
    fn norm_example() {
        let out = exec(Command::Norm, r#"{"re": [0, 1]}"#).unwrap();
        let v = value(&out);
        assert!((v["h_sq_spectral"].as_f64().unwrap() - 3.0).abs() < 1e-15);
        assert!((v["ratio"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn schema_errors_exit_2() {
        let e = exec(Command::Classify, r#"{"points": [1, 2], "bogus": 1}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("line 1"), "{e}");
        let e = exec(Command::Spectrum, "{\n  \"a\": 1\n}").unwrap_err();
        assert!(e.to_string().contains("`b`") || e.to_string().contains("b"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn config_validation() {
        let mut cfg = RunConfig::new(Command::Bounds, "in.json");
        cfg.tol = 0.0;
        assert!(execute(&cfg, r#"{"a": 1, "b": 2}"#).is_err());
        cfg.tol = 1e-8;
        cfg.grid = 16;
        assert!(execute(&cfg, r#"{"a": 1, "b": 2}"#).is_err());
    }

    #[test]
    fn certify_single_gap() {
        let out = exec(Command::Certify, r#"{"lambda": {"points": [1, 2]}, "f_weights": {"re": [1]}}"#).unwrap();
        let v = value(&out);
        assert_eq!(v["verdict"], "contradiction");
        assert_eq!(v["side_lambda"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn parse_help() {
        let cfg = RunConfig::try_parse_from(["uniqpair", "gse", "x.json", "--tol", "1e-6", "--csv", "o.csv"]).unwrap();
        assert_eq!(cfg.command, Command::Gse);
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.grid, 1024);
        assert!(!cfg.relaxed);
        assert!(RunConfig::try_parse_from(["uniqpair", "frobnicate", "x.json"]).is_err());
    }
}
