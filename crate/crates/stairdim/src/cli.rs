//! Batch command implementations behind the `stairdim` binary.
//!
//! Each command loads a [`RunConfig`], runs one computation, and renders a
//! single CSV or JSON document. The document is fully built before any
//! file is touched, so a failing run leaves no partial output. Exit
//! classes: 0 success, 2 input, 3 numerical, 4 resource.

use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::gibbs::GibbsModel;
use crate::hoelder::{
    lambda_dimension, oscillating_point_prefix, oscillation_score_series, OscillationReport,
};
use crate::ifs::{validate_ifs, CodedPoint, IfsSpec, Tail, Violation, Word};
use crate::settings::Settings;
use crate::thermo::{admissibility_check, beta, pressure, solve_delta, PotentialSpec};

/// One CLI invocation: what to run and where to put the result.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub config: PathBuf,
    pub depth: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub action: Action,
}

#[derive(Debug, Clone)]
pub enum Action {
    Validate,
    Pressure {
        t: Option<f64>,
    },
    BetaCurve {
        t_min: f64,
        t_max: f64,
        steps: usize,
    },
    Dimensions,
    Staircase {
        level: usize,
    },
    ScanPoint {
        point: Option<String>,
        synthesize: bool,
    },
}

/// Rendered document plus the destination it should be written to.
pub struct Execution {
    pub document: String,
    pub out: Option<PathBuf>,
}

pub fn execute(invocation: &Invocation) -> Result<Execution> {
    let config = RunConfig::load(&invocation.config)?;
    let mut settings = config.build_settings()?;
    if let Some(depth) = invocation.depth {
        if depth == 0 {
            return Err(Error::input("--depth must be >= 1"));
        }
        // For scan-point the flag is the expansion depth of the point,
        // handled below; everywhere else it is the enumeration depth.
        if !matches!(invocation.action, Action::ScanPoint { .. }) {
            settings.pressure_depth = depth;
        }
    }
    let spec = config.build_system()?;
    let format = invocation
        .format
        .or(config.output.format)
        .unwrap_or(OutputFormat::Csv);
    let out = invocation
        .out
        .clone()
        .or_else(|| config.output.path.as_ref().map(PathBuf::from));

    let document = match &invocation.action {
        Action::Validate => render_validation(&spec, &settings, format),
        other => {
            // Every computing command requires a valid system.
            let violations = validate_ifs(&spec, &settings);
            if !violations.is_empty() {
                let summary: Vec<String> = violations
                    .iter()
                    .map(|v| format!("{}: {}", v.condition, v.detail))
                    .collect();
                return Err(Error::input(format!(
                    "system fails validation: {}",
                    summary.join("; ")
                )));
            }
            match other {
                Action::Validate => unreachable!(),
                Action::Pressure { t } => cmd_pressure(&config, &spec, &settings, *t, format)?,
                Action::BetaCurve {
                    t_min,
                    t_max,
                    steps,
                } => cmd_beta_curve(&config, &spec, &settings, *t_min, *t_max, *steps, format)?,
                Action::Dimensions => cmd_dimensions(&config, &spec, &settings, format)?,
                Action::Staircase { level } => {
                    cmd_staircase(&config, &spec, &settings, *level, format)?
                }
                Action::ScanPoint { point, synthesize } => cmd_scan_point(
                    &config,
                    &spec,
                    &settings,
                    point.as_deref(),
                    *synthesize,
                    invocation.depth.unwrap_or(settings.pressure_depth),
                    format,
                )?,
            }
        }
    };
    Ok(Execution { document, out })
}

/// Write the rendered document to its destination (stdout when none).
pub fn deliver(execution: &Execution) -> Result<()> {
    match &execution.out {
        Some(path) => fs::write(path, &execution.document)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{}", execution.document);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ValidationDoc<'a> {
    valid: bool,
    violations: &'a [Violation],
}

fn render_validation(spec: &IfsSpec, settings: &Settings, format: OutputFormat) -> String {
    let violations = validate_ifs(spec, settings);
    match format {
        OutputFormat::Json => to_json(&ValidationDoc {
            valid: violations.is_empty(),
            violations: &violations,
        }),
        OutputFormat::Csv => {
            let mut doc = String::from("condition,detail\n");
            for v in &violations {
                doc.push_str(&format!(
                    "{},{}\n",
                    csv_field(&v.condition),
                    csv_field(&v.detail)
                ));
            }
            doc
        }
    }
}

fn cmd_pressure(
    config: &RunConfig,
    spec: &IfsSpec,
    settings: &Settings,
    t: Option<f64>,
    format: OutputFormat,
) -> Result<String> {
    let potential = match t {
        Some(t) => PotentialSpec::ScaledGeometric(t),
        None => config.build_potential(spec, settings)?,
    };
    let estimate = pressure(spec, &potential, settings.pressure_depth, settings)?;
    Ok(match format {
        OutputFormat::Json => to_json(&estimate),
        OutputFormat::Csv => {
            let mut doc = String::from("n,P_n\n");
            for &(n, p) in &estimate.per_level {
                doc.push_str(&format!("{n},{p}\n"));
            }
            doc
        }
    })
}

#[derive(Serialize)]
struct BetaCurveDoc {
    alpha: f64,
    delta: f64,
    points: Vec<crate::thermo::BetaPoint>,
}

fn cmd_beta_curve(
    config: &RunConfig,
    spec: &IfsSpec,
    settings: &Settings,
    t_min: f64,
    t_max: f64,
    steps: usize,
    format: OutputFormat,
) -> Result<String> {
    if steps < 2 {
        return Err(Error::input("beta-curve needs steps >= 2"));
    }
    if t_min.is_nan() || t_max.is_nan() || t_min >= t_max {
        return Err(Error::input("beta-curve needs t_min < t_max"));
    }
    let alpha = config.require_alpha()?;
    let psi = config.build_potential(spec, settings)?;
    let depth = settings.pressure_depth;
    let admissible = admissibility_check(spec, &psi, alpha, depth, settings)?;
    if !admissible.pass {
        return Err(Error::input(format!(
            "psi is not admissible for alpha = {alpha}: {}",
            admissible.failures.join("; ")
        )));
    }
    let delta = solve_delta(spec, depth, settings)?;
    // Anchor abscissae are always included, whatever the grid.
    let mut ts: Vec<f64> = (0..steps)
        .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64)
        .collect();
    ts.push(delta);
    ts.push(alpha);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let mut points = Vec::with_capacity(ts.len());
    for t in ts {
        points.push(beta(spec, &psi, alpha, t, depth, settings)?);
    }
    Ok(match format {
        OutputFormat::Json => to_json(&BetaCurveDoc {
            alpha,
            delta,
            points,
        }),
        OutputFormat::Csv => {
            let mut doc = String::from("t,beta,residual\n");
            for p in &points {
                doc.push_str(&format!("{},{},{}\n", p.t, p.beta, p.residual));
            }
            doc
        }
    })
}

#[derive(Serialize)]
struct DimensionsDoc {
    delta: f64,
    dim_nu: f64,
    s: f64,
    s_0: f64,
    s_1: f64,
    min_ratio: f64,
    ordering_note: String,
}

fn cmd_dimensions(
    config: &RunConfig,
    spec: &IfsSpec,
    settings: &Settings,
    format: OutputFormat,
) -> Result<String> {
    let alpha = config.require_alpha()?;
    let psi = config.build_potential(spec, settings)?;
    let report = lambda_dimension(spec, &psi, alpha, settings.pressure_depth, settings)?;
    let doc = DimensionsDoc {
        delta: report.delta,
        dim_nu: report.dim_nu,
        s: report.s,
        s_0: report.s_per_letter.0,
        s_1: report.s_per_letter.1,
        min_ratio: report.min_ratio,
        ordering_note: report.ordering_note,
    };
    Ok(match format {
        OutputFormat::Json => to_json(&doc),
        OutputFormat::Csv => format!(
            "delta,dim_nu,s,s_0,s_1,min_ratio,ordering_note\n{},{},{},{},{},{},{}\n",
            doc.delta,
            doc.dim_nu,
            doc.s,
            doc.s_0,
            doc.s_1,
            doc.min_ratio,
            csv_field(&doc.ordering_note)
        ),
    })
}

fn cmd_staircase(
    config: &RunConfig,
    spec: &IfsSpec,
    settings: &Settings,
    level: usize,
    format: OutputFormat,
) -> Result<String> {
    if level == 0 {
        return Err(Error::input("staircase level must be >= 1"));
    }
    let psi = config.build_potential(spec, settings)?;
    let model = GibbsModel::new(spec, &psi, settings)?;
    let sample = model.staircase(level)?;
    Ok(match format {
        OutputFormat::Json => to_json(&sample),
        OutputFormat::Csv => sample.to_csv(),
    })
}

fn cmd_scan_point(
    config: &RunConfig,
    spec: &IfsSpec,
    settings: &Settings,
    point_arg: Option<&str>,
    synthesize: bool,
    depth: usize,
    format: OutputFormat,
) -> Result<String> {
    let alpha = config.require_alpha()?;
    let psi = config.build_potential(spec, settings)?;
    let point = if synthesize {
        if point_arg.is_some() {
            return Err(Error::input(
                "--point and --synthesize-blocks are mutually exclusive",
            ));
        }
        let prefix = oscillating_point_prefix(spec, &psi, alpha, depth, settings)?;
        CodedPoint::new(prefix, Tail::Periodic(Word::new(vec![1, 0])))?
    } else if let Some(desc) = point_arg {
        parse_point(desc)?
    } else {
        config.build_point()?.ok_or_else(|| {
            Error::input("scan-point needs --point, --synthesize-blocks, or `point` in the config")
        })?
    };
    let report = oscillation_score_series(spec, &psi, alpha, &point, depth, settings)?;
    Ok(render_scan(&report, format))
}

fn render_scan(report: &OscillationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut doc = String::from("n,k,symbol,birkhoff_chi,score,below_ceiling,candidate\n");
            for e in &report.events {
                doc.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    e.level,
                    e.length,
                    e.symbol,
                    e.birkhoff_chi,
                    e.score,
                    e.score <= report.ceiling,
                    report.candidate
                ));
            }
            doc
        }
    }
}

/// Compact point syntax: `PREFIX/TAIL` with `PREFIX` a comma list (possibly
/// empty) and `TAIL` either `const:S` or `cycle:A,B,...`.
pub fn parse_point(desc: &str) -> Result<CodedPoint> {
    let (prefix_part, tail_part) = desc
        .split_once('/')
        .ok_or_else(|| Error::input(format!("point {desc:?}: expected PREFIX/TAIL")))?;
    let prefix = parse_symbols(prefix_part)?;
    let tail = if let Some(rest) = tail_part.strip_prefix("const:") {
        Tail::Constant(
            rest.trim()
                .parse()
                .map_err(|_| Error::input(format!("point tail {rest:?}: not a symbol")))?,
        )
    } else if let Some(rest) = tail_part.strip_prefix("cycle:") {
        let symbols = parse_symbols(rest)?;
        if symbols.is_empty() {
            return Err(Error::input("point tail cycle needs at least one symbol"));
        }
        Tail::Periodic(Word::new(symbols))
    } else {
        return Err(Error::input(format!(
            "point tail {tail_part:?}: expected const:S or cycle:A,B,..."
        )));
    };
    CodedPoint::new(Word::new(prefix), tail)
}

fn parse_symbols(text: &str) -> Result<Vec<usize>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("symbol {s:?} is not a nonnegative integer")))
        })
        .collect()
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut doc = serde_json::to_string_pretty(value).expect("reports serialize");
    doc.push('\n');
    doc
}

/// RFC 4180 quoting: wrap fields containing separators or quotes.
fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}
