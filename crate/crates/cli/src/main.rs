use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use circle_deform::cohomology::{standard_cochain, WindowSpec};
use circle_deform::deformations::DeformationMap;
use circle_deform::recursion::Branch;
use circle_deform::report::{
    cmd_central_extension, cmd_check_integrability, cmd_coboundary_search, cmd_cocycle_report, cmd_formal_solve,
    cmd_moment_map, cmd_report_errata, cmd_solve_recursion, cmd_verify_homomorphism, parse_params, CSpec, MapSpec,
    ParamSpec, VerificationReport,
};
use circle_deform::scalar::parse_poly;
use circle_deform::{Basis, Error, ParamScalar, Var};
use clap::{Args, Parser, Subcommand, ValueEnum};

const WORKERS_ENV: &str = "CIRCLE_DEFORM_WORKERS";
const USAGE_EXIT: u8 = 4;

#[derive(Parser)]
#[command(name = "circle-deform", version, about = "Exact checks for deformations of circle vector field embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit indented text instead of JSON.
    #[arg(long, global = true, conflicts_with = "json")]
    text: bool,
    /// Emit JSON (default).
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// Keep λ and μ as indeterminates.
    #[arg(long, conflicts_with = "params")]
    symbolic: bool,
    /// Numeric parameter values, e.g. `λ=1/2,μ=3`.
    #[arg(long)]
    params: Option<String>,
}

impl ParamArgs {
    fn spec(&self) -> Result<ParamSpec, Error> {
        match &self.params {
            Some(s) => Ok(ParamSpec::numeric(parse_params(s)?)),
            None => Ok(ParamSpec::symbolic()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

#[derive(Args, Clone)]
struct CArgs {
    #[arg(long, allow_hyphen_values = true)]
    c0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<String>,
    /// Use the parametrized integrability locus at λ, μ on this branch.
    #[arg(long, value_enum, conflicts_with_all = ["c0", "c1", "c2"])]
    variety: Option<BranchArg>,
    #[command(flatten)]
    params: ParamArgs,
}

impl CArgs {
    fn spec(&self) -> Result<CSpec, Error> {
        if let Some(b) = self.variety {
            let p = self.params.spec()?;
            let branch = match b {
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            };
            return Ok(CSpec::Variety { lambda: p.get(Var::Lambda)?, mu: p.get(Var::Mu)?, branch });
        }
        let get = |v: &Option<String>, name: &str| parse_poly(v.as_deref().unwrap_or(name));
        Ok(CSpec::Explicit([get(&self.c0, "c0")?, get(&self.c1, "c1")?, get(&self.c2, "c2")?]))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKindArg {
    Standard,
    Universal,
    Formal,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check {π(X), π(Y)} = π([X,Y]) on basis pairs.
    #[command(allow_negative_numbers = true)]
    VerifyHomomorphism {
        #[arg(long, value_enum)]
        map: MapKindArg,
        /// Table file for `--map table`.
        table: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 4)]
        window: i64,
        #[arg(long, default_value_t = -10)]
        floor: i64,
        /// Series order for `--map formal`.
        #[arg(long, default_value_t = 6)]
        order: u32,
    },
    /// Solve the homogeneous identities order by order.
    SolveRecursion {
        #[command(flatten)]
        c: CArgs,
        #[arg(long, default_value_t = 5)]
        order: i64,
    },
    /// Evaluate the integrability polynomial and the semicubic coordinates.
    CheckIntegrability {
        #[command(flatten)]
        c: CArgs,
    },
    /// Solve a formal deformation order by order in t.
    #[command(allow_negative_numbers = true)]
    FormalSolve {
        #[command(flatten)]
        c: CArgs,
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Free coefficient as `ORDER,GRADE=EXPR` (grades -1 or -2).
        #[arg(long = "free", allow_hyphen_values = true)]
        free: Vec<String>,
    },
    /// Check the cocycle identity for the standard cocycles.
    CocycleReport {
        #[arg(long, value_delimiter = ',', default_values_t = [0u8, 1, 2])]
        which: Vec<u8>,
        #[arg(long, default_value_t = 6)]
        window: i64,
    },
    /// Search a finite window for F with C(X) = {π(X), F}.
    #[command(allow_negative_numbers = true)]
    CoboundarySearch {
        /// Standard cocycle index.
        #[arg(long, conflicts_with = "table")]
        which: Option<u8>,
        /// Cochain table file.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        window: i64,
        /// Witness grades as `MIN,MAX`.
        #[arg(long, default_value = "-4,2", allow_hyphen_values = true)]
        grades: String,
        /// Bound on witness x-frequencies.
        #[arg(long, default_value_t = 6)]
        modes: i64,
    },
    /// sl₂ images, Casimir and orbit type.
    MomentMap {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Kirillov cocycles against the Gelfand-Fuks class.
    CentralExtension {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 2)]
        depth: i64,
    },
    /// Printed versus recomputed values.
    ReportErrata,
}

fn read_table(path: &PathBuf) -> Result<DeformationMap, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    DeformationMap::from_table_json(&v)
}

fn parse_free(items: &[String]) -> Result<BTreeMap<(u32, i64), ParamScalar>, Error> {
    let bad = |s: &str| Error::InvalidArgument(format!("expected ORDER,GRADE=EXPR, got `{s}`"));
    let mut out = BTreeMap::new();
    for item in items {
        let (key, expr) = item.split_once('=').ok_or_else(|| bad(item))?;
        let (k, g) = key.split_once(',').ok_or_else(|| bad(item))?;
        let k: u32 = k.trim().parse().map_err(|_| bad(item))?;
        let g: i64 = g.trim().parse().map_err(|_| bad(item))?;
        out.insert((k, -g), parse_poly(expr)?);
    }
    Ok(out)
}

fn parse_grades(s: &str) -> Result<(i64, i64), Error> {
    let bad = || Error::InvalidArgument(format!("expected MIN,MAX, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cmd: Command) -> Result<VerificationReport, Error> {
    match cmd {
        Command::VerifyHomomorphism { map, table, params, window, floor, order } => {
            let spec = match map {
                MapKindArg::Standard => MapSpec::Standard,
                MapKindArg::Universal => {
                    let p = params.spec()?;
                    MapSpec::Universal { lambda: p.get(Var::Lambda)?, mu: p.get(Var::Mu)? }
                }
                MapKindArg::Formal => MapSpec::Formal { lambda: params.spec()?.get(Var::Lambda)?, order },
                MapKindArg::Table => {
                    let path = table.ok_or_else(|| Error::InvalidArgument("`--map table` needs a file".into()))?;
                    MapSpec::Table(read_table(&path)?)
                }
            };
            cmd_verify_homomorphism(&spec, window, floor)
        }
        Command::SolveRecursion { c, order } => cmd_solve_recursion(&c.spec()?, order),
        Command::CheckIntegrability { c } => cmd_check_integrability(&c.spec()?),
        Command::FormalSolve { c, order, free } => cmd_formal_solve(&c.spec()?, order, &parse_free(&free)?),
        Command::CocycleReport { which, window } => cmd_cocycle_report(&which, window),
        Command::CoboundarySearch { which, table, window, grades, modes } => {
            let w = WindowSpec::new(window, parse_grades(&grades)?, modes)?;
            match (which, table) {
                (_, Some(path)) => {
                    let map = read_table(&path)?;
                    cmd_coboundary_search(&path.display().to_string(), map.table(), &w)
                }
                (Some(k), None) => cmd_coboundary_search(&format!("C{k}"), &standard_cochain(k, Basis::Fourier)?, &w),
                (None, None) => Err(Error::InvalidArgument("give `--which` or `--table`".into())),
            }
        }
        Command::MomentMap { params } => cmd_moment_map(&params.spec()?),
        Command::CentralExtension { params, depth } => cmd_central_extension(&params.spec()?, depth),
        Command::ReportErrata => cmd_report_errata(),
    }
}

fn configure_workers() -> Result<(), String> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = raw.parse().map_err(|_| format!("{WORKERS_ENV} must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_EXIT } else { 0 });
        }
    };
    if let Err(e) = configure_workers() {
        eprintln!("error: {e}");
        return ExitCode::from(USAGE_EXIT);
    }
    match run(cli.command) {
        Ok(report) => {
            if cli.text {
                print!("{}", report.to_text());
            } else {
                println!("{}", report.to_json_string());
            }
            ExitCode::from(report.verdict.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
