//! Command-line front end: `tc`, `delta0`, `solve`, `sweep`, `asymptote` and
//! `verify`.
//!
//! Exit codes: `0` on success, `1` when the solver fails, `2` for invalid
//! arguments. Diagnostics go to the error stream only.

pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use bcs_gap::verify::{run_suite, Check};
use bcs_gap::{
    asymptote_near_tc, GapError, GapProblem, Grid, MaterialParams, QuadratureConfig, SolverConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{fmt_f64, ConstantsRecord, Format, SolveRecord, SweepDocument};

/// Boltzmann constant in meV/K.
pub const BOLTZMANN_MEV_PER_K: f64 = 0.086_173_332_62;

pub const EXIT_SOLVER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Squared superconducting gap f(T) = Delta(T)^2 from the BCS gap equation.
#[derive(Debug, Parser)]
#[command(name = "bcs-gap", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Transition temperature T_c.
    Tc(Common),
    /// Zero-temperature gap Delta_0.
    Delta0(Common),
    /// f, Delta and their derivatives at one temperature.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Temperature, 0 <= T <= T_c.
        #[arg(long, allow_hyphen_values = true)]
        temperature: f64,
    },
    /// The curve f(T) on a grid over [0, T_c].
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, value_enum, default_value_t = GridKind::Cheb)]
        grid: GridKind,
    },
    /// f(T) against the linear law -f'(T_c)(T_c - T) at T = T_c(1 - 2^-k).
    Asymptote {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        k_min: u32,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Runs the self-check suite; exits 0 only if every check passes.
    Verify(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    Cheb,
    Uniform,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dimensionless coupling lambda = U0 N0.
    #[arg(long, allow_hyphen_values = true)]
    pub coupling: f64,
    /// Debye energy hbar omega_D (meV unless --kb says otherwise).
    #[arg(long, allow_hyphen_values = true)]
    pub debye_energy: Option<f64>,
    /// Boltzmann constant in energy units per kelvin.
    #[arg(long, allow_hyphen_values = true)]
    pub kb: Option<f64>,
    /// Work in units of hbar omega_D with k_B = 1.
    #[arg(long)]
    pub reduced: bool,
    #[arg(long, default_value_t = QuadratureConfig::default().abs_tol)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = QuadratureConfig::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = SolverConfig::default().residual_tol)]
    pub residual_tol: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A failure, tagged with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Solver(GapError),
    Io(io::Error),
    ChecksFailed(usize),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<GapError> for Failure {
    fn from(e: GapError) -> Self {
        Failure::Solver(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            _ => EXIT_SOLVER,
        }
    }

    fn report(&self, err: &mut dyn Write) {
        let _ = match self {
            Failure::Usage(m) => writeln!(err, "error: {m}"),
            Failure::Solver(e) => writeln!(err, "error: {}: {e}", e.name()),
            Failure::Io(e) => writeln!(err, "error: IoError: {e}"),
            Failure::ChecksFailed(n) => writeln!(err, "error: {n} check(s) failed"),
        };
    }
}

impl Common {
    fn params(&self) -> Result<MaterialParams, Failure> {
        let usage = |e: GapError| Failure::Usage(e.to_string());
        if self.reduced {
            if self.kb.is_some() {
                return Err(Failure::Usage(
                    "--kb cannot be combined with --reduced".into(),
                ));
            }
            if self.debye_energy.is_some_and(|e| e != 1.0) {
                return Err(Failure::Usage(
                    "--reduced measures energies in units of the Debye energy; \
                     --debye-energy must be 1 or omitted"
                        .into(),
                ));
            }
            return MaterialParams::reduced(self.coupling).map_err(usage);
        }
        let energy = self
            .debye_energy
            .ok_or_else(|| Failure::Usage("--debye-energy is required without --reduced".into()))?;
        MaterialParams::new(
            self.coupling,
            energy,
            self.kb.unwrap_or(BOLTZMANN_MEV_PER_K),
        )
        .map_err(usage)
    }

    fn configs(&self) -> Result<(SolverConfig, QuadratureConfig), Failure> {
        let quad = QuadratureConfig::new(
            self.abs_tol,
            self.rel_tol,
            QuadratureConfig::default().max_subdivisions,
        )
        .map_err(|e| Failure::Usage(e.to_string()))?;
        let solver = SolverConfig {
            residual_tol: self.residual_tol,
            ..SolverConfig::default()
        };
        solver
            .validate()
            .map_err(|e| Failure::Usage(e.to_string()))?;
        Ok((solver, quad))
    }

    fn problem(&self) -> Result<GapProblem, Failure> {
        let params = self.params()?;
        let (solver, quad) = self.configs()?;
        Ok(GapProblem::new(params, solver, quad)?)
    }

    fn sink(&self) -> Result<Option<BufWriter<File>>, Failure> {
        match &self.output {
            None => Ok(None),
            Some(path) => File::create(path)
                .map(|f| Some(BufWriter::new(f)))
                .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display()))),
        }
    }

    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }
}

/// Sends `body` to `--output` if given, else to `stdout`.
fn emit(
    common: &Common,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), Failure> {
    match common.sink()? {
        Some(mut file) => {
            body(&mut file)?;
            file.flush()?;
        }
        None => body(stdout)?,
    }
    Ok(())
}

fn verify_table(checks: &[Check], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>3}  {:<52} {:>12} {:>12} {:>12}  result",
        "id", "check", "measured", "limit", "margin"
    )?;
    for c in checks {
        writeln!(
            out,
            "{:>3}  {:<52} {:>12.3e} {:>12.3e} {:>12.3e}  {}",
            c.id,
            c.name,
            c.measured,
            c.limit,
            c.margin(),
            if c.passed { "PASS" } else { "FAIL" }
        )?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(
        out,
        "{} of {} checks passed",
        checks.len() - failed,
        checks.len()
    )
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Tc(common) => {
            let p = common.problem()?;
            let fields = [("T_c", p.t_c()), ("tau_c", p.domain().tau_c)];
            emit(&common, stdout, |w| {
                output::write_scalars(w, &fields, common.format())
            })
        }
        Command::Delta0(common) => {
            let p = common.problem()?;
            let fields = [
                ("delta0", p.delta0()),
                ("delta0_reduced", p.domain().delta0),
            ];
            emit(&common, stdout, |w| {
                output::write_scalars(w, &fields, common.format())
            })
        }
        Command::Solve {
            common,
            temperature,
        } => {
            let p = common.problem()?;
            let t_c = p.t_c();
            if !(temperature >= 0.0
                && temperature <= t_c * (1.0 + bcs_gap::solver::ENDPOINT_FRACTION))
            {
                return Err(Failure::Usage(format!(
                    "--temperature {temperature} outside [0, T_c = {t_c}]"
                )));
            }
            let rec = SolveRecord::new(&p.point(temperature)?);
            emit(&common, stdout, |w| {
                output::write_solve(w, &rec, common.format())
            })
        }
        Command::Sweep {
            common,
            points,
            grid,
        } => {
            if points < 2 {
                return Err(Failure::Usage(format!(
                    "--points must be at least 2, got {points}"
                )));
            }
            let p = common.problem()?;
            let grid = match grid {
                GridKind::Cheb => Grid::Chebyshev(points),
                GridKind::Uniform => Grid::Uniform(points),
            };
            let doc = SweepDocument::new(&p.sweep(&grid)?);
            emit(&common, stdout, |w| {
                output::write_sweep(w, &doc, common.format())
            })
        }
        Command::Asymptote {
            common,
            k_min,
            k_max,
        } => {
            if k_min > k_max || k_max > 40 {
                return Err(Failure::Usage(format!(
                    "need k_min <= k_max <= 40, got {k_min}..{k_max}"
                )));
            }
            let p = common.problem()?;
            let c = p.constants()?;
            let mut rows = Vec::new();
            for k in k_min..=k_max {
                let t = c.t_c * (1.0 - 2f64.powi(-(k as i32)));
                let f = p.solve(t)?.f;
                let a = asymptote_near_tc(t, &c);
                rows.push((k, t, f, a, f / a));
            }
            emit(&common, stdout, |w| match common.format() {
                Format::Csv => output::write_csv_table(
                    w,
                    &["k", "T", "f", "asymptote", "asymptote_ratio"],
                    &rows
                        .iter()
                        .map(|&(k, t, f, a, r)| {
                            vec![
                                k.to_string(),
                                fmt_f64(t),
                                fmt_f64(f),
                                fmt_f64(a),
                                fmt_f64(r),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
                Format::Json => {
                    let points: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|&(k, t, f, a, r)| {
                            serde_json::json!({
                                "k": k, "T": t, "f": f, "asymptote": a, "asymptote_ratio": r
                            })
                        })
                        .collect();
                    output::write_json(
                        w,
                        &serde_json::json!({
                            "constants": ConstantsRecord::new(p.params(), &c),
                            "points": points,
                        }),
                    )
                }
            })
        }
        Command::Verify(common) => {
            let p = common.problem()?;
            let checks = run_suite(&p)?;
            emit(&common, stdout, |w| match common.format {
                None => verify_table(&checks, w),
                Some(Format::Json) => output::write_json(w, &checks),
                Some(Format::Csv) => output::write_csv_table(
                    w,
                    &["id", "check", "measured", "limit", "margin", "passed"],
                    &checks
                        .iter()
                        .map(|c| {
                            vec![
                                c.id.to_string(),
                                c.name.to_string(),
                                fmt_f64(c.measured),
                                fmt_f64(c.limit),
                                fmt_f64(c.margin()),
                                c.passed.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            })?;
            match checks.iter().filter(|c| !c.passed).count() {
                0 => Ok(()),
                n => Err(Failure::ChecksFailed(n)),
            }
        }
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(f) => {
            f.report(stderr);
            f.exit_code()
        }
    }
}
