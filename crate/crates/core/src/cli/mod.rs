//! Instance files, command dispatch, reports and the Monte-Carlo oracle
//! behind the `toric` binary.

pub mod instance;
pub mod oracle;
pub mod report;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Parser;
use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{factorial, Q};
use crate::envelope::{mixed_integral, upper_envelope, RoofFunction, WeightedConfig};
use crate::error::Error;
use crate::invariants::{
    degree, instance_chow_weight, minima_report, monomial_bezout, multiheight_terms,
    normalized_height, normalized_multiheight, ToricInstance,
};
use crate::logvalue::{with_precision_cap, LogValue, DEFAULT_PRECISION_CAP};
use crate::places::{Place, PlaceWeights};

pub use instance::{parse_instance, render, Instance};
pub use oracle::{height_oracle, integral_oracle, Estimate, OracleConfig};
use report::record;
pub use report::{Outcome, Report, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error at {0}")]
    Syntax(String),

    #[error("{field}: {source}")]
    Field {
        field: String,
        #[source]
        source: Error,
    },

    #[error("incompatible instance: {0}")]
    Incompatible(String),

    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    /// 2 for unreadable or invalid input, 3 for failed computations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(Error::PrecisionExhausted { .. } | Error::OutsideDomain) => 3,
            CliError::Field {
                source: Error::PrecisionExhausted { .. },
                ..
            } => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Degree,
    ChowWeight,
    Height,
    Multiheight,
    MixedIntegral,
    Bezout,
    Envelope,
    Check,
    Oracle,
    MinimaReport,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Degree,
        Command::ChowWeight,
        Command::Height,
        Command::Multiheight,
        Command::MixedIntegral,
        Command::Bezout,
        Command::Envelope,
        Command::Check,
        Command::Oracle,
        Command::MinimaReport,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Degree => "degree",
            Command::ChowWeight => "chow-weight",
            Command::Height => "height",
            Command::Multiheight => "multiheight",
            Command::MixedIntegral => "mixed-integral",
            Command::Bezout => "bezout",
            Command::Envelope => "envelope",
            Command::Check => "check",
            Command::Oracle => "oracle",
            Command::MinimaReport => "minima-report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
                format!("unknown command {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Settings that are not part of the instance file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[derive(Default)]
pub struct RunConfig {
    pub oracle: OracleConfig,
}


/// Runs `command` on a parsed instance under the instance's precision cap.
pub fn execute(command: Command, inst: &Instance, cfg: &RunConfig) -> Result<Report, CliError> {
    let cap = inst.precision_cap_bits.unwrap_or(DEFAULT_PRECISION_CAP);
    with_precision_cap(cap, || dispatch(command, inst, cfg))
}

fn dispatch(command: Command, inst: &Instance, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut r = Report::new(command.name());
    match command {
        Command::Degree => {
            let t = inst.toric()?;
            r.push("degree", degree(&t));
            r.push("volume", t.polytope().volume());
            r.push("lattice_index", t.lattice().saturation_index());
            r.push("normalized_mode", t.options().normalized_mode);
        }
        Command::ChowWeight => {
            let t = inst.toric()?;
            let mut rows = Vec::new();
            for e in t.weights().entries() {
                rows.push(record! {
                    "place" => e.place.to_string(),
                    "multiplicity" => e.multiplicity.clone(),
                    "chow_weight" => instance_chow_weight(&t, &e.tau)?,
                });
            }
            r.push("places", rows);
        }
        Command::Height => {
            let t = inst.toric()?;
            r.push("height", normalized_height(&t)?);
            r.push("product_formula", t.product_formula().passed);
        }
        Command::Multiheight => {
            let m = inst.multi()?;
            let terms = multiheight_terms(&m)?;
            r.push("c", m.index_vector().to_vec());
            r.push("multiheight", normalized_multiheight(&m)?);
            r.push("places", place_rows(&terms, "mixed_integral"));
        }
        Command::MixedIntegral => mixed_integral_report(inst, &mut r)?,
        Command::Bezout => {
            let t = inst.toric()?;
            let b = inst
                .b
                .as_ref()
                .ok_or_else(|| CliError::Incompatible("bezout needs the exponent vector b".into()))?;
            bezout_report(&t, b, &mut r)?;
        }
        Command::Envelope => {
            let mut blocks = Vec::new();
            for b in &inst.blocks {
                let mut places = Vec::new();
                for e in b.weights.entries() {
                    let f = upper_envelope(&WeightedConfig::new(b.points.clone(), e.tau.clone())?)?;
                    places.push(record! {
                        "place" => e.place.to_string(),
                        "roof" => roof_value(&f),
                    });
                }
                blocks.push(record! {"A" => points_value(&b.points), "places" => places});
            }
            r.push("blocks", blocks);
        }
        Command::Check => check_report(inst, &mut r)?,
        Command::Oracle => oracle_report(inst, cfg.oracle, &mut r)?,
        Command::MinimaReport => {
            let t = inst.toric()?;
            let m = minima_report(&t, &inst.samples)?;
            r.push("height", m.height);
            r.push("degree", m.degree);
            r.push("height_per_degree", m.height_per_degree);
            r.push("reference_bound", m.reference);
            r.push(
                "reference_note",
                "successive minima satisfy mu_1 >= reference_bound >= mu_{n+1}; not checked",
            );
            let rows: Vec<Value> = m
                .samples
                .into_iter()
                .map(|(t, h)| record! {"t" => t, "height" => h})
                .collect();
            r.push("samples", rows);
            if let Some(min) = m.minimum {
                r.push("minimum", min);
            }
        }
    }
    Ok(r)
}

fn place_rows(terms: &[(Place, Q, LogValue)], label: &str) -> Vec<Value> {
    terms
        .iter()
        .map(|(p, l, v)| {
            record! {
                "place" => p.to_string(),
                "multiplicity" => l.clone(),
                label => v.clone(),
            }
        })
        .collect()
}

fn points_value(points: &[Vec<i64>]) -> Value {
    Value::List(
        points
            .iter()
            .map(|p| Value::List(p.iter().map(|&x| Value::Integer(x.into())).collect()))
            .collect(),
    )
}

fn qpoints_value(points: &[Vec<Q>]) -> Value {
    Value::List(points.iter().map(|p| p.clone().into()).collect())
}

fn roof_value(f: &RoofFunction) -> Value {
    let cells: Vec<Value> = f
        .cells()
        .iter()
        .map(|c| {
            record! {
                "vertices" => qpoints_value(c.polytope().vertices()),
                "support" => c.support().to_vec(),
                "volume" => c.volume(),
                "gradient" => c.affine().gradient().to_vec(),
                "constant" => c.affine().constant().clone(),
            }
        })
        .collect();
    let on_roof: Vec<bool> = (0..f.points().len()).map(|i| f.on_roof(i)).collect();
    record! {
        "domain_volume" => f.domain().volume(),
        "integral" => f.integrate(),
        "on_roof" => on_roof,
        "cells" => cells,
    }
}

fn block_weights(w: &PlaceWeights, place: Place, len: usize) -> Vec<LogValue> {
    w.get(place)
        .map_or_else(|| vec![LogValue::zero(); len], |e| e.tau.clone())
}

fn mixed_integral_report(inst: &Instance, r: &mut Report) -> Result<(), CliError> {
    let repeat: Vec<usize> = match &inst.c {
        Some(c) => c.clone(),
        None if inst.blocks.len() == inst.n + 1 => vec![1; inst.blocks.len()],
        None => {
            return Err(CliError::Incompatible(format!(
                "mixed-integral needs n+1 = {} blocks or an index vector c",
                inst.n + 1
            )))
        }
    };
    let mut places: Vec<(Place, Q)> = Vec::new();
    for b in &inst.blocks {
        for e in b.weights.entries() {
            if !places.iter().any(|(p, _)| *p == e.place) {
                places.push((e.place, e.multiplicity.clone()));
            }
        }
    }
    places.sort();
    let mut terms = Vec::new();
    for (place, lambda) in places {
        let mut roofs = Vec::new();
        for (b, &k) in inst.blocks.iter().zip(&repeat) {
            let tau = block_weights(&b.weights, place, b.points.len());
            let f = upper_envelope(&WeightedConfig::new(b.points.clone(), tau)?)?;
            roofs.extend(std::iter::repeat_n(f, k));
        }
        terms.push((place, lambda, mixed_integral(&roofs)?));
    }
    let total: LogValue = terms.iter().map(|(_, l, v)| v.scale(l)).sum();
    r.push("roofs_per_block", repeat);
    r.push("weighted_sum", total);
    r.push("places", place_rows(&terms, "mixed_integral"));
    Ok(())
}

fn bezout_report(t: &ToricInstance, b: &[i64], r: &mut Report) -> Result<(), CliError> {
    let rep = monomial_bezout(t, b)?;
    r.push("height", rep.height);
    r.push("base_height", rep.base_height);
    r.push("D", rep.d);
    r.push("a", rep.a);
    if let Some(ok) = rep.effective_bound {
        r.push("effective_bound_holds", ok);
        if !ok {
            r.outcome = Outcome::CheckFailed;
        }
    }
    let places: Vec<Value> = rep
        .places
        .into_iter()
        .map(|p| {
            let cells: Vec<Value> = p
                .cells
                .into_iter()
                .map(|c| {
                    record! {
                        "vertices" => qpoints_value(&c.vertices),
                        "volume" => c.volume,
                        "value_at_a" => c.value_at_a,
                        "lattice_index" => c.lattice_index,
                    }
                })
                .collect();
            record! {
                "place" => p.place.to_string(),
                "multiplicity" => p.multiplicity,
                "cell_sum" => p.sum,
                "cells" => cells,
            }
        })
        .collect();
    r.push("places", places);
    Ok(())
}

struct Checks {
    rows: Vec<Value>,
    failed: bool,
}

impl Checks {
    fn add(&mut self, name: String, passed: bool, note: &str) {
        self.failed |= !passed;
        self.rows.push(record! {"check" => name, "passed" => passed, "note" => note});
    }

    fn warn(&mut self, name: String, note: &str) {
        self.rows.push(record! {"check" => name, "passed" => "warning", "note" => note});
    }
}

fn check_report(inst: &Instance, r: &mut Report) -> Result<(), CliError> {
    let mut checks = Checks {
        rows: Vec::new(),
        failed: false,
    };
    for (i, b) in inst.blocks.iter().enumerate() {
        let pf = crate::places::product_formula_check(&b.weights);
        if pf.passed {
            checks.add(format!("block {i}: product formula"), true, "");
        } else {
            checks.warn(
                format!("block {i}: product formula"),
                "fails; waived, heights are not guaranteed nonnegative",
            );
        }
        let qs: Vec<Vec<Q>> = b
            .points
            .iter()
            .map(|p| p.iter().map(|&x| Q::from(BigInt::from(x))).collect())
            .collect();
        let hull = crate::geometry::convex_hull(&qs)?;
        let inside = qs.iter().all(|x| hull.contains(x));
        checks.add(format!("block {i}: hull contains every point"), inside, "");
        let mut taus: Vec<(String, Vec<LogValue>)> = vec![("zero".into(), vec![LogValue::zero(); b.points.len()])];
        taus.extend(b.weights.entries().iter().map(|e| (e.place.to_string(), e.tau.clone())));
        for (name, tau) in taus {
            let f = upper_envelope(&WeightedConfig::new(b.points.clone(), tau)?)?;
            let a = f.audit()?;
            checks.add(
                format!("block {i}, place {name}: roof cells, majorization, continuity, concavity"),
                a.passed(),
                &a.failures().join(", "),
            );
        }
    }
    if inst.blocks.len() == 1 {
        let t = inst.toric()?;
        let d = degree(&t);
        checks.add("degree is a positive integer".into(), d.is_positive(), "");
        let h = normalized_height(&t)?;
        if t.product_formula().passed {
            checks.add("height is nonnegative".into(), !h.is_negative()?, "");
        }
        if let Some(b) = &inst.b {
            let rep = monomial_bezout(&t, b)?;
            if let Some(ok) = rep.effective_bound {
                checks.add("effective bezout bound".into(), ok, "");
            }
        }
        for (k, s) in inst.samples.iter().enumerate() {
            let scaled = crate::invariants::orbit_point_height(&t, s)?;
            checks.add(format!("sample {k}: orbit height is nonnegative"), !scaled.is_negative()?, "");
        }
    }
    if inst.c.is_some() {
        let m = inst.multi()?;
        let h = normalized_multiheight(&m)?;
        if inst.blocks.len() == 1 {
            let t = inst.toric()?;
            checks.add(
                "multiheight with one block equals height".into(),
                h == normalized_height(&t)?,
                "",
            );
        }
        let pf = inst.blocks.iter().all(|b| crate::places::product_formula_check(&b.weights).passed);
        if pf {
            checks.add("multiheight is nonnegative".into(), !h.is_negative()?, "");
        }
    }
    if checks.failed {
        r.outcome = Outcome::CheckFailed;
    }
    r.push("passed", !checks.failed);
    r.push("checks", checks.rows);
    Ok(())
}

fn estimate_value(e: &Estimate) -> Value {
    record! {
        "exact" => e.exact,
        "estimate" => e.estimate,
        "standard_error" => e.standard_error,
        "deviation_in_standard_errors" => e.deviation(),
        "agrees" => e.agrees(),
    }
}

fn oracle_report(inst: &Instance, cfg: OracleConfig, r: &mut Report) -> Result<(), CliError> {
    r.push("samples", Value::Integer(cfg.samples.into()));
    r.push("seed", Value::Integer(cfg.seed.into()));
    let mut all = true;
    let mut rows = Vec::new();
    for (i, b) in inst.blocks.iter().enumerate() {
        let mut taus = vec![("zero".to_string(), vec![LogValue::zero(); b.points.len()])];
        taus.extend(b.weights.entries().iter().map(|e| (e.place.to_string(), e.tau.clone())));
        for (name, tau) in taus {
            let f = upper_envelope(&WeightedConfig::new(b.points.clone(), tau)?)?;
            let e = integral_oracle(&f, cfg);
            all &= e.agrees();
            rows.push(record! {
                "block" => i,
                "place" => name,
                "integral" => f.integrate(),
                "check" => estimate_value(&e),
            });
        }
    }
    r.push("integrals", rows);
    if inst.blocks.len() == 1 {
        let t = inst.toric()?;
        let e = height_oracle(&t, cfg)?;
        all &= e.agrees();
        r.push("height", normalized_height(&t)?);
        r.push("height_check", estimate_value(&e));
        let volume = t.polytope().volume() * Q::from(factorial(t.dim()));
        r.push("n_factorial_volume", volume);
    }
    if !all {
        r.outcome = Outcome::OracleDisagreement;
    }
    r.push("agrees", all);
    Ok(())
}

/// Flags of the `toric` binary.
#[derive(Debug, Clone, Parser)]
#[command(name = "toric", version, about = "Exact invariants of projective toric varieties")]
pub struct Args {
    /// Instance file (JSON)
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// degree, chow-weight, height, multiheight, mixed-integral, bezout,
    /// envelope, check, oracle or minima-report
    #[arg(long, value_name = "NAME")]
    pub command: Command,

    /// Fractional digits of decimal approximations
    #[arg(long, value_name = "DIGITS", default_value_t = 10)]
    pub precision: usize,

    /// Oracle seed
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,

    /// Oracle sample count
    #[arg(long, value_name = "N", default_value_t = 100_000)]
    pub samples: u64,

    /// Measure volumes relative to the lattice spanned by the configuration
    #[arg(long)]
    pub normalized_mode: bool,

    /// Accept weights that fail the product formula
    #[arg(long)]
    pub waive_product_formula: bool,

    /// JSON output
    #[arg(long)]
    pub machine: bool,
}

/// Reads the instance named by `args`, with command-line options applied.
pub fn load(args: &Args) -> Result<Instance, CliError> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| CliError::Io {
        path: args.input.display().to_string(),
        message: e.to_string(),
    })?;
    let mut file: instance::InstanceFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Syntax(format!("line {} column {}: {e}", e.line(), e.column())))?;
    file.options.normalized_mode |= args.normalized_mode;
    file.options.waive_product_formula |= args.waive_product_formula;
    instance::from_file(&file)
}

/// Runs the binary's logic, writing to the given streams; returns the exit
/// code.
pub fn run(args: &Args, out: &mut impl std::io::Write, err: &mut impl std::io::Write) -> i32 {
    let cfg = RunConfig {
        oracle: OracleConfig {
            samples: args.samples,
            seed: args.seed,
        },
    };
    let result = load(args).and_then(|inst| execute(args.command, &inst, &cfg));
    match result {
        Ok(report) => {
            let text = if args.machine {
                serde_json::to_string_pretty(&report.to_json(args.precision)).expect("report serializes") + "\n"
            } else {
                report.to_text(args.precision)
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            if args.machine {
                let j = serde_json::json!({"status": "error", "error": e.to_string(), "exit_code": e.exit_code()});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&j).expect("error serializes"));
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
