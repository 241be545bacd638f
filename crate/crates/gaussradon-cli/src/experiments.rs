//! Experiment dispatch: parse a config, run the named experiment through the
//! library, write machine-readable outputs, and summarize in one line.
//!
//! Output files are bit-identical for identical configs: every stochastic
//! stage derives its stream from the config seed, reports embed the resolved
//! config, and nothing reads the clock.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use gaussradon::gaussian::{tail_decay, AffineGaussian};
use gaussradon::hilbert::{AffineSubspace, Frame, HVector, Hyperplane};
use gaussradon::norms::SequenceBuilder;
use gaussradon::radon::{
    disintegrate_check, disintegration_probe, probe_directions, radon_transform, recover_point,
    DisintegrationConfig, McConfig,
};
use gaussradon::registry::Registry;
use gaussradon::seed::{derive_seed, stage_salt};
use gaussradon::support::{helgason_check_2d, support_experiment, LineGrid, SupportConfig};
use gaussradon::wiener::{brownian_sanity, condition_functional, path_from_coeffs, SchauderBasis};

use crate::config::*;
use crate::csvout::{csv_document, fmt_f64};

/// Errors mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: malformed config, unknown registry names, I/O problems.
    Config(String),
    /// Exit 3: a proof step failed (separation, certification, modulus,
    /// bound enforcement).
    Proof(String),
    /// Exit 4: outputs were produced but a numeric tolerance contract failed.
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Proof(_) => 3,
            CliError::Tolerance(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Proof(_) => "proof-step",
            CliError::Tolerance(_) => "tolerance",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Proof(m) | CliError::Tolerance(m) => m,
        }
    }
}

impl From<gaussradon::Error> for CliError {
    fn from(err: gaussradon::Error) -> Self {
        if err.is_proof_step_failure() {
            CliError::Proof(err.to_string())
        } else {
            CliError::Config(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Config(format!("i/o error: {err}"))
    }
}

pub struct Outcome {
    pub summary: String,
}

/// Loads the config for `kind`, applies CLI overrides, runs the experiment,
/// and writes its artifacts.
pub fn run(
    kind: &str,
    config_path: &Path,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", config_path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
    let declared = value
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Config("config needs a string `kind` field".into()))?;
    if declared != kind {
        return Err(CliError::Config(format!(
            "config kind `{declared}` does not match subcommand `{kind}`"
        )));
    }
    let registry = Registry::builtin();
    match kind {
        "sample" => run_sample(parse(value)?, seed_override, out_override),
        "transform" => run_transform(parse(value)?, &registry, seed_override, out_override),
        "disintegrate" => run_disintegrate(parse(value)?, &registry, seed_override, out_override),
        "recover" => run_recover(parse(value)?, &registry, seed_override, out_override),
        "tails" => run_tails(parse(value)?, &registry, seed_override, out_override),
        "support" => run_support(parse(value)?, &registry, seed_override, out_override),
        "helgason2d" => run_helgason(parse(value)?, &registry, seed_override, out_override),
        "wiener-sanity" => run_wiener(parse(value)?, &registry, seed_override, out_override),
        other => Err(CliError::Config(format!(
            "unknown experiment kind `{other}`"
        ))),
    }
}

fn parse<T: serde::de::DeserializeOwned>(value: Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Config(format!("config error: {e}")))
}

fn require_positive(value: usize, field: &str) -> Result<(), CliError> {
    if value == 0 {
        Err(CliError::Config(format!("`{field}` must be positive")))
    } else {
        Ok(())
    }
}

fn out_dir(kind: &str, configured: &Option<String>, cli: Option<PathBuf>) -> PathBuf {
    cli.unwrap_or_else(|| {
        configured
            .as_ref()
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("gaussradon-out").join(kind))
    })
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Config(format!("serialization error: {e}")))?;
    text.push('\n');
    fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_csv(
    dir: &Path,
    name: &str,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), csv_document(header, rows))?;
    Ok(())
}

fn frame_from_rows(rows: &[Vec<f64>], what: &str) -> Result<Frame, CliError> {
    let vectors: Vec<HVector> = rows.iter().map(|r| HVector::from_dense(r)).collect();
    Frame::new(vectors)
        .map_err(|e| CliError::Config(format!("{what} rows must be orthonormal: {e}")))
}

fn run_sample(
    mut cfg: SampleConfig,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.count, "count")?;
    require_positive(cfg.truncation, "truncation")?;
    let dir = out_dir("sample", &cfg.out_dir, out_override);
    let anchor = HVector::from_dense(&cfg.anchor);
    let mu = match (&cfg.conormals, &cfg.directions) {
        (Some(c), None) => {
            let conormals = frame_from_rows(c, "conormal")?;
            AffineGaussian::new(
                AffineSubspace::from_conormals(anchor, conormals).map_err(CliError::from)?,
                cfg.truncation,
            )?
        }
        (None, Some(d)) => {
            let directions = frame_from_rows(d, "direction")?;
            AffineGaussian::from_directions(anchor, directions)?
        }
        (None, None) => AffineGaussian::standard(cfg.truncation),
        (Some(_), Some(_)) => {
            return Err(CliError::Config(
                "give either `conormals` or `directions`, not both".into(),
            ))
        }
    };

    let t = cfg.truncation;
    let mut sums = vec![0.0; t];
    let mut sq = vec![0.0; t];
    let mut csv_rows: Vec<Vec<String>> = Vec::new();
    let keep = cfg.csv_rows.min(cfg.count);
    mu.for_each_sample(cfg.seed, cfg.count, |s| {
        let dense = s.to_dense(t);
        for (i, v) in dense.iter().enumerate() {
            sums[i] += v;
            sq[i] += v * v;
        }
        if csv_rows.len() < keep {
            csv_rows.push(dense.iter().map(|v| fmt_f64(*v)).collect());
        }
    });
    let n = cfg.count as f64;
    let mean: Vec<f64> = sums.iter().map(|s| s / n).collect();
    let variance: Vec<f64> = sq
        .iter()
        .zip(&mean)
        .map(|(q, m)| (q / n - m * m).max(0.0))
        .collect();

    let header: Vec<String> = (0..t).map(|i| format!("x{i}")).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&dir, "samples.csv", &header_refs, &csv_rows)?;
    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "moments": {"mean": mean, "variance": variance},
            "csv_rows_written": keep,
        }),
    )?;
    Ok(Outcome {
        summary: format!(
            "sample: {} draws at truncation {} -> {}",
            cfg.count,
            t,
            dir.display()
        ),
    })
}

fn run_transform(
    mut cfg: TransformConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.samples, "samples")?;
    require_positive(cfg.truncation, "truncation")?;
    let dir = out_dir("transform", &cfg.out_dir, out_override);
    let f = registry.functional(&cfg.functional.name, &cfg.functional.params)?;
    let plane = Hyperplane::new(HVector::from_dense(&cfg.normal), cfg.offset)?;
    let result = radon_transform(
        f.as_ref(),
        &plane,
        &McConfig {
            truncation: cfg.truncation,
            samples: cfg.samples,
            seed: cfg.seed,
        },
    )?;
    write_json(
        &dir,
        "report.json",
        &json!({"config": cfg, "result": result}),
    )?;
    Ok(Outcome {
        summary: format!(
            "transform: estimate {} +- {} -> {}",
            result.estimate,
            result.stderr,
            dir.display()
        ),
    })
}

fn run_disintegrate(
    mut cfg: DisintegrateConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.lhs_samples, "lhs_samples")?;
    require_positive(cfg.outer_slices, "outer_slices")?;
    require_positive(cfg.inner_samples, "inner_samples")?;
    let dir = out_dir("disintegrate", &cfg.out_dir, out_override);
    let f = registry.functional(&cfg.functional.name, &cfg.functional.params)?;
    let plane = Hyperplane::new(HVector::from_dense(&cfg.normal), cfg.offset)?;
    let frame = frame_from_rows(&cfg.frame, "frame")?;
    let report = disintegrate_check(
        f.as_ref(),
        &plane,
        &frame,
        &DisintegrationConfig {
            truncation: cfg.truncation,
            lhs_samples: cfg.lhs_samples,
            outer_slices: cfg.outer_slices,
            inner_samples: cfg.inner_samples,
            seed: cfg.seed,
        },
    )?;

    // closed-form probe family over random dual directions
    let t_grid = [0.25, 0.5, 1.0, 2.0, -0.25, -0.5, -1.0, -2.0];
    let mut probes = Vec::new();
    let mut probe_max = 0.0f64;
    let directions = probe_directions(
        derive_seed(cfg.seed, stage_salt("probe")),
        cfg.probe_directions,
        cfg.truncation,
    );
    for xstar in &directions {
        for t in t_grid {
            let (lhs, rhs) = disintegration_probe(&plane, &frame, xstar, t, cfg.truncation)?;
            let deviation = (lhs - rhs).norm();
            probe_max = probe_max.max(deviation);
            probes.push(json!({
                "direction": xstar,
                "t": t,
                "lhs": [lhs.re, lhs.im],
                "rhs": [rhs.re, rhs.im],
                "deviation": deviation,
            }));
        }
    }
    let probe_ok = probe_max <= 1e-9;
    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "monte_carlo": report,
            "probes": probes,
            "probe_max_deviation": probe_max,
            "agrees": report.agrees && probe_ok,
        }),
    )?;
    if !report.agrees {
        return Err(CliError::Tolerance(format!(
            "disintegration sides differ by {} against tolerance {}",
            report.difference, report.tolerance
        )));
    }
    if !probe_ok {
        return Err(CliError::Tolerance(format!(
            "probe family deviation {probe_max} exceeds 1e-9"
        )));
    }
    Ok(Outcome {
        summary: format!(
            "disintegrate: lhs {} vs rhs {} (|diff| {} <= {}) -> {}",
            report.lhs.estimate,
            report.rhs,
            report.difference,
            report.tolerance,
            dir.display()
        ),
    })
}

fn run_recover(
    mut cfg: RecoverConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.count, "count")?;
    require_positive(cfg.depth, "depth")?;
    let dir = out_dir("recover", &cfg.out_dir, out_override);
    let norm = registry.norm(&cfg.norm.name, &cfg.norm.params)?;
    let f = registry.functional(&cfg.functional.name, &cfg.functional.params)?;
    let point = HVector::from_dense(&cfg.point);
    let dense =
        gaussradon::norms::default_dense_seed(&Frame::empty(), cfg.dense_width, cfg.dense_count);
    let seq = SequenceBuilder::new(
        Frame::empty(),
        norm.as_ref(),
        cfg.depth,
        dense,
        derive_seed(cfg.seed, stage_salt("sequence")),
    )
    .with_initial(vec![point.clone()])
    .build()?;
    let levels = recover_point(f.as_ref(), &point, &seq, norm.as_ref(), cfg.count, cfg.seed)?;
    let value_at_point = f.eval(&point);

    let rows: Vec<Vec<String>> = levels
        .iter()
        .map(|l| {
            vec![
                l.level.to_string(),
                fmt_f64(l.estimate),
                fmt_f64(l.stderr),
                fmt_f64(l.envelope),
                fmt_f64((l.estimate - value_at_point).abs()),
            ]
        })
        .collect();
    write_csv(
        &dir,
        "levels.csv",
        &["level", "estimate", "stderr", "envelope", "abs_deviation"],
        &rows,
    )?;
    let within = levels
        .iter()
        .all(|l| (l.estimate - value_at_point).abs() <= l.envelope + 1e-12);
    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "value_at_point": value_at_point,
            "levels": levels,
            "within_envelope": within,
            "certificates": seq.certificates(),
            "dense_coverage": seq.dense_coverage(),
        }),
    )?;
    if !within {
        return Err(CliError::Tolerance(
            "a recovery level left the proof envelope".into(),
        ));
    }
    let deepest = levels.last().expect("depth >= 2");
    Ok(Outcome {
        summary: format!(
            "recover: level {} estimate {} (target {}) within envelope {} -> {}",
            deepest.level,
            deepest.estimate,
            value_at_point,
            deepest.envelope,
            dir.display()
        ),
    })
}

fn run_tails(
    mut cfg: TailsConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.count, "count")?;
    require_positive(cfg.depth, "depth")?;
    let dir = out_dir("tails", &cfg.out_dir, out_override);
    let norm = registry.norm(&cfg.norm.name, &cfg.norm.params)?;
    let conormals = frame_from_rows(&cfg.conormals, "conormal")?;
    let dense = gaussradon::norms::default_dense_seed(&conormals, cfg.dense_width, cfg.dense_count);
    let mut builder = SequenceBuilder::new(
        conormals,
        norm.as_ref(),
        cfg.depth,
        dense,
        derive_seed(cfg.seed, stage_salt("sequence")),
    );
    if let Some(samples) = cfg.certificate_samples {
        builder = builder.with_certificate_samples(samples);
    }
    let seq = builder.build()?;
    let points = tail_decay(&seq, norm.as_ref(), cfg.radius, cfg.count, cfg.seed)?;

    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                p.level.to_string(),
                fmt_f64(p.estimate),
                fmt_f64(p.half_width),
                p.bound.map(fmt_f64).unwrap_or_default(),
            ]
        })
        .collect();
    write_csv(
        &dir,
        "tails.csv",
        &["level", "estimate", "half_width", "bound"],
        &rows,
    )?;
    let bounded = points
        .iter()
        .all(|p| p.bound.is_none_or(|b| p.estimate <= b + p.half_width));
    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "points": points,
            "certificates": seq.certificates(),
            "bounded": bounded,
        }),
    )?;
    if !bounded {
        return Err(CliError::Tolerance(
            "a tail estimate exceeded its certified bound".into(),
        ));
    }
    Ok(Outcome {
        summary: format!(
            "tails: {} levels at radius {} all within certified bounds -> {}",
            points.len(),
            cfg.radius,
            dir.display()
        ),
    })
}

fn run_support(
    mut cfg: SupportExperimentConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.samples_per_level, "samples_per_level")?;
    require_positive(cfg.depth, "depth")?;
    let dir = out_dir("support", &cfg.out_dir, out_override);
    let norm = registry.norm(&cfg.norm.name, &cfg.norm.params)?;
    let body = registry.body(&cfg.body.kind, &cfg.body.params)?;
    let f = registry.functional(&cfg.functional.name, &cfg.functional.params)?;
    let point = HVector::from_dense(&cfg.point);
    let support_cfg = SupportConfig {
        depth: cfg.depth,
        truncation: cfg.truncation,
        samples_per_level: cfg.samples_per_level,
        witness_samples: cfg.witness_samples,
        seed: cfg.seed,
        dense_seed: gaussradon::norms::default_dense_seed(
            &Frame::empty(),
            cfg.dense_width,
            cfg.dense_count,
        ),
    };
    let report = support_experiment(f.as_ref(), &body, &point, norm.as_ref(), &support_cfg)?;

    let rows: Vec<Vec<String>> = report
        .levels
        .iter()
        .map(|l| {
            vec![
                l.level.to_string(),
                l.p_in_projection.to_string(),
                fmt_f64(l.separation_margin),
                fmt_f64(l.projection_distance),
                fmt_f64(l.estimate),
                fmt_f64(l.stderr),
                fmt_f64(l.envelope),
            ]
        })
        .collect();
    write_csv(
        &dir,
        "levels.csv",
        &[
            "level",
            "p_in_projection",
            "separation_margin",
            "projection_distance",
            "estimate",
            "stderr",
            "envelope",
        ],
        &rows,
    )?;
    write_json(
        &dir,
        "report.json",
        &json!({"config": cfg, "report": report}),
    )?;
    if !(report.verdict.passes && report.verdict.converged) {
        return Err(CliError::Tolerance(format!(
            "support verdict failed: limit {} against tolerance {} (converged: {})",
            report.verdict.limit_estimate, report.verdict.tolerance, report.verdict.converged
        )));
    }
    Ok(Outcome {
        summary: format!(
            "support: {} levels separated; deepest |f_n(p)| {} within envelope {} -> {}",
            report.levels.len(),
            report.verdict.limit_estimate.abs(),
            report.verdict.tolerance,
            dir.display()
        ),
    })
}

fn run_helgason(
    mut cfg: HelgasonConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.samples, "samples")?;
    require_positive(cfg.angles, "angles")?;
    require_positive(cfg.offsets, "offsets")?;
    let dir = out_dir("helgason2d", &cfg.out_dir, out_override);
    let f = registry.functional(&cfg.functional.name, &cfg.functional.params)?;
    let body = registry.body(&cfg.body.kind, &cfg.body.params)?;
    let grid = LineGrid {
        angles: cfg.angles,
        offsets: cfg.offsets,
        offset_step: cfg.offset_step,
    };
    let report = helgason_check_2d(f.as_ref(), &body, &grid, cfg.samples, cfg.seed)?;

    let rows: Vec<Vec<String>> = report
        .lines
        .iter()
        .map(|l| {
            vec![
                fmt_f64(l.angle),
                fmt_f64(l.offset),
                fmt_f64(l.estimate),
                fmt_f64(l.stderr),
                l.meets_body.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir,
        "lines.csv",
        &["angle", "offset", "estimate", "stderr", "meets_body"],
        &rows,
    )?;
    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "max_missing_abs": report.max_missing_abs,
            "max_meeting_abs": report.max_meeting_abs,
            "missing_ok": report.missing_ok,
            "lines": report.lines.len(),
        }),
    )?;
    if !report.missing_ok {
        return Err(CliError::Tolerance(format!(
            "a line missing the body carries |estimate| {} above 3 stderr",
            report.max_missing_abs
        )));
    }
    Ok(Outcome {
        summary: format!(
            "helgason2d: {} lines; max |Gf| missing {} vs meeting {} -> {}",
            report.lines.len(),
            report.max_missing_abs,
            report.max_meeting_abs,
            dir.display()
        ),
    })
}

fn run_wiener(
    mut cfg: WienerSanityConfig,
    registry: &Registry,
    seed_override: Option<u64>,
    out_override: Option<PathBuf>,
) -> Result<Outcome, CliError> {
    if let Some(s) = seed_override {
        cfg.seed = s;
    }
    require_positive(cfg.count, "count")?;
    let dir = out_dir("wiener-sanity", &cfg.out_dir, out_override);
    let basis = SchauderBasis::new(cfg.levels)?;
    let report = brownian_sanity(&basis, cfg.count, cfg.seed)?;

    let rows: Vec<Vec<String>> = report
        .variances
        .iter()
        .map(|v| {
            vec![
                fmt_f64(v.t),
                fmt_f64(v.variance),
                fmt_f64(v.target),
                fmt_f64(v.tolerance),
                v.ok.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir,
        "variance.csv",
        &["t", "variance", "target", "tolerance", "ok"],
        &rows,
    )?;

    // a few full paths for plotting: t column plus one column per path
    let mu = AffineGaussian::standard(basis.dim());
    let coeffs = mu.sample(derive_seed(cfg.seed, stage_salt("paths")), cfg.paths_csv);
    let paths: Vec<_> = coeffs
        .iter()
        .map(|c| path_from_coeffs(c, &basis).expect("in-range coefficients"))
        .collect();
    let times = basis.grid_times();
    let mut header: Vec<String> = vec!["t".into()];
    header.extend((0..paths.len()).map(|k| format!("path{k}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path_rows: Vec<Vec<String>> = times
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut row = vec![fmt_f64(*t)];
            row.extend(paths.iter().map(|p| fmt_f64(p.value(i))));
            row
        })
        .collect();
    write_csv(&dir, "paths.csv", &header_refs, &path_rows)?;

    let mut condition_report = None;
    let mut condition_ok = true;
    if let Some(spec) = &cfg.condition {
        let f = registry.path_functional(&basis, &spec.functional.name, &spec.functional.params)?;
        let h = HVector::from_dense(&spec.normal);
        let result = condition_functional(
            f,
            &h,
            spec.offset,
            &basis,
            spec.samples,
            derive_seed(cfg.seed, stage_salt("condition")),
        )?;
        condition_ok = (result.estimate - spec.offset).abs() <= 3.0 * result.stderr + 1e-9;
        condition_report = Some(json!({
            "result": result,
            "pinned_to": spec.offset,
            "ok": condition_ok,
        }));
    }

    write_json(
        &dir,
        "report.json",
        &json!({
            "config": cfg,
            "brownian": report,
            "condition": condition_report,
        }),
    )?;
    if !report.pass {
        return Err(CliError::Tolerance(
            "Brownian moment checks left the four-standard-error band".into(),
        ));
    }
    if !condition_ok {
        return Err(CliError::Tolerance(
            "conditioning did not pin the Paley-Wiener coordinate".into(),
        ));
    }
    Ok(Outcome {
        summary: format!(
            "wiener-sanity: {} grid moments ok over {} samples -> {}",
            report.variances.len() + report.covariances.len(),
            report.count,
            dir.display()
        ),
    })
}

/// Stable listing of the built-in registry.
pub fn list() -> String {
    let registry = Registry::builtin();
    let mut out = String::new();
    for entry in registry.listing() {
        out.push_str(&format!(
            "{:<16} {:<18} {}\n{:<16} {:<18} params: {}\n",
            entry.kind, entry.name, entry.summary, "", "", entry.params
        ));
    }
    out
}
