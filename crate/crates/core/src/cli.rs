//! The `hecke-density` command line.
//!
//! Each subcommand runs one pipeline and emits a [`Report`]. Exit codes:
//! 0 when every verdict passes, 1 when a verdict fails, 2 on usage or input
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dirichlet::{
    moment_profile, theorem_check, upper_density_estimate, SGrid, ThresholdSet, DEFAULT_COUPLING,
    DEFAULT_GRID_STEPS,
};
use crate::error::{Error, Result};
use crate::optimizer::{
    dichotomy_check, inequality_audit, solve_constants, tradeoff_sweep, uniform_grid,
    MomentBounds, EQUATION_TOLERANCE, REFERENCE_BETA, REFERENCE_D, REFERENCE_PRODUCT,
    REFERENCE_PROOF_BETA,
};
use crate::report::{emit_report, Cell, Destination, Format, Report};
use crate::satake::{cg_decomposition, identity_survey};
use crate::sources::{
    load_csv, sample_dihedral, sample_sato_tate, sieve_primes, tau_coefficients, tau_sequence,
    validate_kim_sarnak, EigenvalueSequence,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Discrepancy and residual budgets for `identities`.
const CG_DISCREPANCY_TOL: f64 = 1e-12;
const CG_TRACE_TOL: f64 = 1e-10;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "hecke-density", version, about = "Upper Dirichlet density experiments for Hecke eigenvalues")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: FormatArg,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Record the wall-clock time in the report metadata (output is then no
    /// longer byte-reproducible).
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceKind {
    Tau,
    #[value(name = "sato_tate")]
    SatoTate,
    Dihedral,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Where the eigenvalues come from.
    #[arg(long, value_enum, default_value = "tau")]
    pub source: SourceKind,
    /// CSV file for `--source csv`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Largest prime for `--source tau`. The default is the smallest round
    /// limit at which the default s-grid keeps a point.
    #[arg(long, default_value_t = 30_000)]
    pub limit: u64,
    /// Number of samples for the synthetic sources.
    #[arg(long, default_value_t = 100_000)]
    pub count: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated s values in (1, 2); defaults to 1 + 10^(-j/2), j = 1..4,
    /// restricted to points satisfying the coupling rule.
    #[arg(long = "s-grid", value_delimiter = ',')]
    pub s_grid: Option<Vec<f64>>,
    /// Minimum (s - 1) ln X for every grid point.
    #[arg(long, default_value_t = DEFAULT_COUPLING)]
    pub coupling: f64,
}

#[derive(Debug, Clone, Args)]
pub struct MomentArgs {
    #[arg(long, default_value_t = 2.0)]
    pub m4: f64,
    #[arg(long, default_value_t = 5.0)]
    pub m6: f64,
    #[arg(long, default_value_t = 14.0)]
    pub m8: f64,
}

impl MomentArgs {
    fn bounds(&self) -> MomentBounds {
        MomentBounds {
            m4: self.m4,
            m6: self.m6,
            m8: self.m8,
            ..MomentBounds::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the primes up to a limit.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Ramanujan tau at primes, with normalized eigenvalues.
    Tau {
        #[arg(long, default_value_t = 30_000)]
        limit: u64,
    },
    /// Emit an eigenvalue sequence in the `p,a_p` schema.
    Sample {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Check a sequence against the Kim–Sarnak bound |a_p| <= 2 p^(7/64).
    Validate {
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Check the Clebsch–Gordan identities on random unit-circle parameters.
    Identities {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Self-normalized moment profile against the targets (1, 0, 2, 5, 14).
    Moments {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Upper Dirichlet density estimate of {p : a_p > threshold}.
    Density {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
    },
    /// Density check at the solved threshold minus epsilon.
    Theorem {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        moments: MomentArgs,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
    /// Solve for (d, beta, alpha, c) and verify the case split.
    Solve {
        #[command(flatten)]
        moments: MomentArgs,
        #[arg(long, default_value_t = 0.01)]
        delta: f64,
        /// Number of d values in the case-split check on (0.01, M4 - 0.01).
        #[arg(long, default_value_t = 10_000)]
        grid_points: usize,
    },
    /// Threshold against density target.
    Sweep {
        #[command(flatten)]
        moments: MomentArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.02,0.01,0.005,0.002,0.001")]
        deltas: Vec<f64>,
    },
    /// Evaluate the Hölder and Cauchy–Schwarz instances on data.
    Audit {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes the report. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(config) => config,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&config) {
        Ok(mut report) => {
            if config.timestamp {
                let secs = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs());
                report.metadata.timestamp = Some(format!("{secs}"));
            }
            let destination = match &config.out {
                Some(path) => Destination::File(path.clone()),
                None => Destination::Writer(stdout),
            };
            if let Err(e) = emit_report(&report, config.format.into(), destination) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_USAGE;
            }
            for v in report.verdicts.iter().filter(|v| !v.pass) {
                let _ = writeln!(stderr, "FAIL {}: {}", v.name, v.detail);
            }
            if report.all_pass() {
                EXIT_OK
            } else {
                EXIT_VERDICT_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Runs the pipeline for a parsed configuration.
pub fn execute(config: &RunConfig) -> Result<Report> {
    match &config.command {
        Command::Sieve { limit } => sieve_report(*limit),
        Command::Tau { limit } => tau_report(*limit),
        Command::Sample { source } => sample_report(source),
        Command::Validate { source } => validate_report(source),
        Command::Identities { samples, seed } => identities_report(*samples, *seed),
        Command::Moments { source, grid } => moments_report(source, grid),
        Command::Density {
            source,
            grid,
            threshold,
            delta,
        } => density_report(source, grid, *threshold, *delta),
        Command::Theorem {
            source,
            grid,
            moments,
            delta,
            epsilon,
        } => theorem_report(source, grid, moments, *delta, *epsilon),
        Command::Solve {
            moments,
            delta,
            grid_points,
        } => solve_report(moments, *delta, *grid_points),
        Command::Sweep { moments, deltas } => sweep_report(moments, deltas),
        Command::Audit { source, grid } => audit_report(source, grid),
    }
}

fn load_sequence(args: &SourceArgs) -> Result<EigenvalueSequence> {
    match args.source {
        SourceKind::Tau => tau_sequence(args.limit),
        SourceKind::SatoTate => sample_sato_tate(args.count, args.seed),
        SourceKind::Dihedral => sample_dihedral(args.count, args.seed),
        SourceKind::Csv => {
            let path = args.input.as_ref().ok_or_else(|| {
                Error::out_of_range("input", "<missing>", "a path (required with --source csv)")
            })?;
            load_csv(path)
        }
    }
}

fn echo_source(report: &mut Report, args: &SourceArgs) {
    report.config("source", source_name(args.source));
    match args.source {
        SourceKind::Tau => {
            report.config("limit", args.limit);
        }
        SourceKind::SatoTate | SourceKind::Dihedral => {
            report.config("count", args.count).config("seed", args.seed);
        }
        SourceKind::Csv => {
            let input = args
                .input
                .as_ref()
                .map_or(String::new(), |p| p.display().to_string());
            report.config("input", input);
        }
    }
}

fn source_name(kind: SourceKind) -> &'static str {
    match kind {
        SourceKind::Tau => "tau",
        SourceKind::SatoTate => "sato_tate",
        SourceKind::Dihedral => "dihedral",
        SourceKind::Csv => "csv",
    }
}

fn build_grid(args: &GridArgs, seq: &EigenvalueSequence) -> Result<SGrid> {
    match &args.s_grid {
        Some(points) => SGrid::new(points.clone(), seq.truncation(), args.coupling),
        None => SGrid::geometric(DEFAULT_GRID_STEPS, seq.truncation(), args.coupling),
    }
}

fn echo_grid(report: &mut Report, grid: &SGrid) {
    let list = |v: &[f64]| {
        v.iter()
            .map(|s| crate::report::format_float(*s))
            .collect::<Vec<_>>()
            .join(",")
    };
    report
        .config("s_grid", list(grid.points()))
        .config("s_grid_dropped", list(grid.dropped()))
        .config("coupling", crate::report::format_float(grid.coupling_constant()))
        .config("truncation", grid.truncation_limit());
}

fn sieve_report(limit: u64) -> Result<Report> {
    let table = sieve_primes(limit)?;
    let mut report = Report::new("sieve", ["index", "p"]);
    report.config("limit", limit);
    for (i, &p) in table.primes().iter().enumerate() {
        report.row(vec![(i + 1).into(), p.into()]);
    }
    report.verdict(
        "count",
        !table.is_empty(),
        format!("{} primes up to {limit}", table.len()),
    );
    Ok(report)
}

fn tau_report(limit: u64) -> Result<Report> {
    let seq = tau_sequence(limit)?;
    let tau = tau_coefficients(limit as usize);
    let mut report = Report::new("tau", ["p", "tau_p", "a_p"]);
    report.config("limit", limit);
    for e in seq.entries() {
        report.row(vec![e.p.into(), tau[e.p as usize].into(), e.a.into()]);
    }
    report.verdict(
        "deligne_bound",
        seq.entries().iter().all(|e| e.a.abs() <= 2.0),
        "|a_p| <= 2 for every listed prime",
    );
    if limit >= 6 {
        report.verdict(
            "multiplicativity",
            tau[6] == tau[2] * tau[3],
            format!("tau(6) = {} = tau(2) tau(3)", tau[6]),
        );
        report.verdict(
            "hecke_relation",
            tau[4] == tau[2] * tau[2] - (1 << 11),
            format!("tau(4) = {} = tau(2)^2 - 2^11", tau[4]),
        );
    }
    Ok(report)
}

fn sample_report(args: &SourceArgs) -> Result<Report> {
    let seq = load_sequence(args)?;
    let mut report = Report::new("sample", ["p", "a_p"]);
    echo_source(&mut report, args);
    if !seq.excluded().is_empty() {
        let list: Vec<String> = seq.excluded().iter().map(u64::to_string).collect();
        report.config("excluded", list.join(" "));
    }
    for e in seq.entries() {
        report.row(vec![e.p.into(), Cell::Exact(e.a)]);
    }
    Ok(report)
}

fn validate_report(args: &SourceArgs) -> Result<Report> {
    let seq = load_sequence(args)?;
    let violations = validate_kim_sarnak(&seq);
    let mut report = Report::new("validate", ["p", "a_p", "bound"]);
    echo_source(&mut report, args);
    for v in &violations {
        report.row(vec![v.p.into(), v.a.into(), v.bound.into()]);
    }
    report.verdict(
        "kim_sarnak",
        violations.is_empty(),
        format!("{} of {} entries exceed 2 p^(7/64)", violations.len(), seq.len()),
    );
    Ok(report)
}

fn identities_report(samples: usize, seed: u64) -> Result<Report> {
    if samples == 0 {
        return Err(Error::out_of_range("samples", samples, "samples >= 1"));
    }
    let summaries = identity_survey(samples, seed)?;
    let mut report = Report::new(
        "identities",
        ["k", "pieces", "total_dim", "draws", "max_discrepancy", "max_trace_residual"],
    );
    report.config("samples", samples).config("seed", seed);
    for s in &summaries {
        let pieces: Vec<String> = cg_decomposition(s.k)?
            .parts
            .iter()
            .map(|(p, m)| format!("{m}*{p}"))
            .collect();
        report.row(vec![
            s.k.into(),
            pieces.join(" + ").into(),
            s.dimension.into(),
            s.draws.into(),
            s.max_discrepancy.into(),
            s.max_trace_residual.into(),
        ]);
        report.verdict(
            format!("cg_identity_k{}", s.k),
            s.dimension == 1 << s.k
                && s.max_discrepancy < CG_DISCREPANCY_TOL
                && s.max_trace_residual < CG_TRACE_TOL,
            format!(
                "discrepancy {:e} < {CG_DISCREPANCY_TOL:e}, trace residual {:e} < {CG_TRACE_TOL:e}",
                s.max_discrepancy, s.max_trace_residual
            ),
        );
    }
    Ok(report)
}

fn moments_report(args: &SourceArgs, grid_args: &GridArgs) -> Result<Report> {
    let seq = load_sequence(args)?;
    let grid = build_grid(grid_args, &seq)?;
    let profile = moment_profile(&seq, &grid)?;
    let mut report = Report::new(
        "moments",
        ["k", "s", "target", "kind", "normalized_ratio", "raw_ratio", "baseline_ratio"],
    );
    echo_source(&mut report, args);
    echo_grid(&mut report, &grid);
    for row in &profile.rows {
        for (i, &s) in profile.s_points.iter().enumerate() {
            report.row(vec![
                row.k.into(),
                s.into(),
                row.target.into(),
                row.kind.as_str().into(),
                row.normalized[i].into(),
                row.raw[i].into(),
                profile.baseline[i].into(),
            ]);
        }
        report.verdict(
            format!("moment_k{}", row.k),
            row.consistent,
            format!(
                "{} target {} at s = {}: {}",
                row.kind.as_str(),
                row.target,
                grid.smallest(),
                row.headline()
            ),
        );
    }
    Ok(report)
}

fn density_rows(report: &mut Report, estimate: &crate::dirichlet::DensityEstimate) {
    for p in &estimate.per_point {
        report.row(vec![p.s.into(), p.ratio.into(), p.nondecreasing.into()]);
    }
}

fn density_report(args: &SourceArgs, grid_args: &GridArgs, threshold: f64, delta: f64) -> Result<Report> {
    let seq = load_sequence(args)?;
    let grid = build_grid(grid_args, &seq)?;
    let check = theorem_check(&seq, threshold, delta, &grid)?;
    let mut report = Report::new("density", ["s", "ratio", "nondecreasing"]);
    echo_source(&mut report, args);
    echo_grid(&mut report, &grid);
    report
        .config("threshold", crate::report::format_float(threshold))
        .config("delta", crate::report::format_float(delta));
    density_rows(&mut report, &check.estimate);
    report.verdict(
        "density_at_least_delta",
        check.pass,
        format!(
            "estimate {} over {} of {} primes, delta {}",
            crate::report::format_float(check.estimate.value),
            check.estimate.subset_size,
            seq.len(),
            delta
        ),
    );
    Ok(report)
}

fn theorem_report(
    args: &SourceArgs,
    grid_args: &GridArgs,
    moments: &MomentArgs,
    delta: f64,
    epsilon: f64,
) -> Result<Report> {
    let bounds = moments.bounds();
    let sol = solve_constants(&bounds, delta)?;
    let threshold = sol.threshold_c - epsilon;
    let seq = load_sequence(args)?;
    let grid = build_grid(grid_args, &seq)?;
    let check = theorem_check(&seq, threshold, delta, &grid)?;
    let all = upper_density_estimate(&seq, &ThresholdSet::All, &grid)?;
    let mut report = Report::new("theorem", ["s", "ratio", "nondecreasing"]);
    echo_source(&mut report, args);
    echo_grid(&mut report, &grid);
    report
        .config("delta", crate::report::format_float(delta))
        .config("epsilon", crate::report::format_float(epsilon))
        .config("threshold", crate::report::format_float(threshold));
    density_rows(&mut report, &check.estimate);
    report.verdict(
        "density_at_least_delta",
        check.pass,
        format!(
            "density of a_p > {} is {} (all primes: {}), required {}",
            crate::report::format_float(threshold),
            crate::report::format_float(check.estimate.value),
            crate::report::format_float(all.value),
            delta
        ),
    );
    Ok(report)
}

fn solve_report(moments: &MomentArgs, delta: f64, grid_points: usize) -> Result<Report> {
    let bounds = moments.bounds();
    let sol = solve_constants(&bounds, delta)?;
    let grid = uniform_grid(0.01, bounds.m4 - 0.01, grid_points);
    let dichotomy = dichotomy_check(&sol, &bounds, &grid)?;

    let mut report = Report::new("solve", ["quantity", "value", "reference"]);
    report
        .config("delta", crate::report::format_float(delta))
        .config("m4", crate::report::format_float(bounds.m4))
        .config("m6", crate::report::format_float(bounds.m6))
        .config("m8", crate::report::format_float(bounds.m8))
        .config("grid_points", grid_points);
    let is_default = bounds == MomentBounds::default() && delta == 0.01;
    let reference = |v: f64| if is_default { Cell::Float(v) } else { Cell::Empty };
    report
        .row(vec!["d".into(), sol.d.into(), reference(REFERENCE_D)])
        .row(vec!["beta".into(), sol.beta.into(), reference(REFERENCE_BETA)])
        .row(vec!["beta_rounded".into(), sol.beta.into(), reference(REFERENCE_PROOF_BETA)])
        .row(vec!["alpha".into(), sol.alpha.into(), Cell::Empty])
        .row(vec!["c".into(), sol.threshold_c.into(), reference(REFERENCE_PRODUCT.powf(0.25))])
        .row(vec![
            "c^4".into(),
            sol.threshold_fourth_power().into(),
            reference(REFERENCE_PRODUCT),
        ])
        .row(vec!["residual".into(), sol.residual.into(), Cell::Empty])
        .row(vec!["f1_crossing".into(), dichotomy.f1_crossing.into(), Cell::Empty])
        .row(vec!["f2_crossing".into(), dichotomy.f2_crossing.into(), Cell::Empty]);

    report.verdict(
        "equations",
        sol.residual < EQUATION_TOLERANCE,
        format!("max residual {:e} < {EQUATION_TOLERANCE:e}", sol.residual),
    );
    let detail = match dichotomy.first_violation() {
        None => format!(
            "{} grid points: every d < d* contradicts the fourth-moment bound, every d > d* the cubic one",
            dichotomy.points_checked
        ),
        Some(v) => format!(
            "violated at d = {}: {} ({} vs {})",
            v.d,
            v.claim.as_str(),
            v.value,
            v.bound
        ),
    };
    report.verdict("dichotomy", dichotomy.pass(), detail);
    Ok(report)
}

fn sweep_report(moments: &MomentArgs, deltas: &[f64]) -> Result<Report> {
    let bounds = moments.bounds();
    bounds.validate()?;
    let rows = tradeoff_sweep(&bounds, deltas);
    let mut report = Report::new(
        "sweep",
        ["delta", "status", "c", "c^4", "d", "beta", "alpha", "residual"],
    );
    let list: Vec<String> = deltas.iter().map(|d| crate::report::format_float(*d)).collect();
    report
        .config("deltas", list.join(","))
        .config("m4", crate::report::format_float(bounds.m4))
        .config("m6", crate::report::format_float(bounds.m6))
        .config("m8", crate::report::format_float(bounds.m8));
    for row in &rows {
        match &row.outcome {
            Ok(sol) => report.row(vec![
                row.delta.into(),
                "ok".into(),
                sol.threshold_c.into(),
                sol.threshold_fourth_power().into(),
                sol.d.into(),
                sol.beta.into(),
                sol.alpha.into(),
                sol.residual.into(),
            ]),
            Err(reason) => report.row(vec![
                row.delta.into(),
                format!("infeasible: {reason}").into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]),
        };
    }
    Ok(report)
}

fn audit_report(args: &SourceArgs, grid_args: &GridArgs) -> Result<Report> {
    let seq = load_sequence(args)?;
    let grid = build_grid(grid_args, &seq)?;
    let audit = inequality_audit(&seq, &grid)?;
    let mut report = Report::new(
        "audit",
        ["s", "instance", "lhs", "rhs", "margin", "normalized_margin", "pass"],
    );
    echo_source(&mut report, args);
    echo_grid(&mut report, &grid);
    for e in &audit.entries {
        report.row(vec![
            e.s.into(),
            e.name.into(),
            e.lhs.into(),
            e.rhs.into(),
            e.margin.into(),
            e.normalized_margin.into(),
            e.pass.into(),
        ]);
    }
    let failures = audit.entries.iter().filter(|e| !e.pass).count();
    report.verdict(
        "finite_sum_inequalities",
        audit.pass(),
        format!(
            "{failures} of {} instances fail; smallest inequality margin {:e}",
            audit.entries.len(),
            audit.min_margin()
        ),
    );
    Ok(report)
}
