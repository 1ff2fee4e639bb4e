mod args;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use symconc::bounds::{gsic_bound, nm_bound, realignment_bound, sic_bound, BoundReport};
use symconc::povm::{validate_povm, GroupingSpec, PovmDump};
use symconc::sweep::{find_crossings, preset, run_sweep, MethodSpec, SweepSpec, PRESET_NAMES};

use args::{MethodKind, PovmArgs, StateArgs};

/// Tolerance used by `validate` for every condition.
const VALIDATE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(symconc::Error),
}

impl From<symconc::Error> for CliError {
    fn from(e: symconc::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_infeasible() => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "symconc",
    version,
    about = "Concurrence lower bounds from symmetric measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one bound on one state.
    Bound(BoundArgs),
    /// Sweep a state parameter and write the bounds as CSV.
    Sweep(SweepArgs),
    /// Check the defining conditions of a POVM.
    Validate(ValidateArgs),
    /// Dump a builtin state as JSON.
    State(StateCmdArgs),
    /// Dump the effects of a POVM as JSON.
    Povm(PovmCmdArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value = "nm")]
    povm: MethodKind,
    #[command(flatten)]
    povm_args: PovmArgs,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Builtin figure sweep.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESET_NAMES))]
    preset: Option<String>,
    #[arg(long, value_enum)]
    state: Option<args::StateKind>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q1: Option<f64>,
    /// Name of the swept parameter.
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Bound methods, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    method: Vec<MethodKind>,
    /// Grouping preset for the nm method.
    #[arg(long)]
    grouping: Option<symconc::povm::GroupingPreset>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long = "M")]
    m: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_enum, default_value = "nm")]
    povm: MethodKind,
    #[command(flatten)]
    povm_args: PovmArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StateCmdArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PovmCmdArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, value_enum, default_value = "nm")]
    povm: MethodKind,
    #[command(flatten)]
    povm_args: PovmArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::Usage(format!("stdout: {e}")))
        }
    }
}

fn print_report(r: &BoundReport) {
    println!("method        {}", r.method);
    println!("d             {}", r.d);
    if let (Some(n), Some(m)) = (r.n, r.m) {
        println!("N             {n}");
        println!("M             {m}");
    }
    if let Some(x) = r.x {
        println!("x             {x}");
    }
    if let Some(t) = r.t {
        println!("t             {t}");
    }
    println!("trace_norm_P  {}", r.trace_norm_p);
    println!("threshold     {}", r.threshold);
    println!("bound_raw     {}", r.bound_raw);
    println!("bound         {}", r.bound);
}

fn cmd_bound(a: BoundArgs) -> Result<(), CliError> {
    let rho = a.state.load()?;
    let d = rho.local_dim()?;
    let report = match a.povm {
        MethodKind::Nm => nm_bound(&rho, &a.povm_args.build(MethodKind::Nm, d)?)?,
        MethodKind::Gsic => gsic_bound(&rho, d, a.povm_args.x()?)?,
        MethodKind::Sic => sic_bound(&rho, d)?,
        MethodKind::Realignment => realignment_bound(&rho)?,
    };
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        print_report(&report);
    }
    Ok(())
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec, CliError> {
    let mut spec = match &a.preset {
        Some(name) => {
            if a.state.is_some() || a.param.is_some() || !a.method.is_empty() {
                return Err(CliError::Usage(
                    "--preset fixes the state, parameter and methods; only --from, --to, --steps and --output may be combined with it".into(),
                ));
            }
            preset(name)?
        }
        None => {
            let kind = a
                .state
                .ok_or_else(|| CliError::Usage("sweep needs --preset or --state".into()))?;
            let parameter = match (&a.param, kind) {
                (Some(p), _) => p.clone(),
                (None, args::StateKind::Tiles) => "p".into(),
                (None, args::StateKind::Isotropic) => "f".into(),
                (None, args::StateKind::Corners) => "q1".into(),
                _ => return Err(CliError::Usage("sweep needs --param".into())),
            };
            let from = a
                .from
                .ok_or_else(|| CliError::Usage("sweep needs --from".into()))?;
            // The swept parameter needs no flag of its own.
            let fill = |name: &str, v: Option<f64>| {
                if parameter == name {
                    v.or(Some(from))
                } else {
                    v
                }
            };
            let state = StateArgs {
                state: kind,
                d: a.d,
                f: fill("f", a.f),
                tau: fill("tau", a.tau),
                q: fill("q", a.q),
                p: fill("p", a.p),
                q1: fill("q1", a.q1),
                weights: None,
                state_file: None,
            };
            let family = state
                .family()?
                .ok_or_else(|| CliError::Usage("sweeps need a builtin state family".into()))?;
            if a.method.is_empty() {
                return Err(CliError::Usage("sweep needs at least one --method".into()));
            }
            let methods = a
                .method
                .iter()
                .map(|&m| method_spec(a, m))
                .collect::<Result<Vec<_>, _>>()?;
            SweepSpec {
                family,
                parameter,
                from,
                to: a
                    .to
                    .ok_or_else(|| CliError::Usage("sweep needs --to".into()))?,
                steps: a.steps.unwrap_or(symconc::sweep::PRESET_STEPS),
                methods,
            }
        }
    };
    if a.preset.is_some() {
        if let Some(v) = a.from {
            spec.from = v;
        }
        if let Some(v) = a.to {
            spec.to = v;
        }
        if let Some(v) = a.steps {
            spec.steps = v;
        }
    }
    spec.validate()?;
    Ok(spec)
}

fn method_spec(a: &SweepArgs, m: MethodKind) -> Result<MethodSpec, CliError> {
    Ok(match m {
        MethodKind::Nm => {
            let povm = PovmArgs {
                preset: a.grouping,
                n: a.n,
                m: a.m,
                t: a.t,
                x: None,
                povm_config: None,
            };
            // d is irrelevant for the recipe shape; the sweep resolves it.
            let cfg = povm.nm_config(0)?;
            MethodSpec::Nm {
                n: cfg.n,
                m: cfg.m,
                t: cfg.t,
                grouping: a.grouping.map(GroupingSpec::Preset).unwrap_or_default(),
            }
        }
        MethodKind::Gsic => MethodSpec::Gsic {
            x: a.x
                .ok_or_else(|| CliError::Usage("the gsic method needs --x".into()))?,
        },
        MethodKind::Sic => MethodSpec::Sic,
        MethodKind::Realignment => MethodSpec::Realignment,
    })
}

fn cmd_sweep(a: SweepArgs) -> Result<(), CliError> {
    let spec = sweep_spec(&a)?;
    let result = run_sweep(&spec)?;
    emit(a.output.as_ref(), &result.to_csv())?;
    let crossings = find_crossings(&spec, &result)?;
    let mut lines = String::new();
    for c in &crossings {
        let side = if c.detected_above {
            "detected above"
        } else {
            "detected below"
        };
        lines.push_str(&format!(
            "crossing {} {} = {:.7} ({side})\n",
            c.method, spec.parameter, c.value
        ));
    }
    if a.output.is_some() {
        print!("{lines}");
    } else {
        eprint!("{lines}");
    }
    Ok(())
}

fn povm_dim(d: Option<usize>, a: &PovmArgs) -> Result<usize, CliError> {
    if let Some(d) = d {
        return Ok(d);
    }
    if let Some(path) = &a.povm_config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(symconc::povm::PovmConfig::from_json_str(&text)?.d);
    }
    Err(CliError::Usage("--d is required".into()))
}

fn cmd_validate(a: ValidateArgs) -> Result<ExitCode, CliError> {
    let d = povm_dim(a.d, &a.povm_args)?;
    let povm = a.povm_args.build(a.povm, d)?;
    let report = validate_povm(&povm);
    let ok = report.passes(VALIDATE_TOL);
    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        );
    } else {
        println!(
            "d = {}, N = {}, M = {}, x = {}",
            report.d, report.n, report.m, report.x
        );
        for (label, value) in report.rows() {
            println!("{label:<20} {value:.3e}");
        }
        println!("{:<20} {}", "x in range", report.x_in_range);
        println!("{}", if ok { "PASS" } else { "FAIL" });
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_state(a: StateCmdArgs) -> Result<(), CliError> {
    let rho = a.state.load()?;
    emit(a.output.as_ref(), &(rho.to_json_string() + "\n"))
}

fn cmd_povm(a: PovmCmdArgs) -> Result<(), CliError> {
    let d = povm_dim(a.d, &a.povm_args)?;
    let povm = a.povm_args.build(a.povm, d)?;
    let dump = PovmDump::from(&povm);
    let text = serde_json::to_string_pretty(&dump).map_err(symconc::Error::from)?;
    emit(a.output.as_ref(), &(text + "\n"))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Bound(a) => cmd_bound(a).map(|_| ExitCode::SUCCESS),
        Command::Sweep(a) => cmd_sweep(a).map(|_| ExitCode::SUCCESS),
        Command::Validate(a) => cmd_validate(a),
        Command::State(a) => cmd_state(a).map(|_| ExitCode::SUCCESS),
        Command::Povm(a) => cmd_povm(a).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exit_of(argv: &[&str]) -> u8 {
        let mut full = vec!["symconc"];
        full.extend_from_slice(argv);
        match Cli::try_parse_from(full) {
            Err(e) => e.exit_code() as u8,
            Ok(cli) => match run(cli) {
                Ok(code) if code == ExitCode::SUCCESS => 0,
                Ok(_) => 1,
                Err(e) => e.exit_code(),
            },
        }
    }

    #[test]
    fn bound_examples() {
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "tiles",
                "--povm",
                "nm",
                "--preset",
                "paper-ex1",
                "--t",
                "0.01"
            ]),
            0
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "maximally-mixed",
                "--d",
                "3",
                "--povm",
                "nm",
                "--preset",
                "paper-ex1",
                "--t",
                "0.01"
            ]),
            0
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "isotropic",
                "--d",
                "3",
                "--f",
                "1",
                "--povm",
                "sic"
            ]),
            0
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "horodecki",
                "--tau",
                "0.3",
                "--q",
                "0.995",
                "--povm",
                "realignment"
            ]),
            0
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "corners",
                "--q1",
                "0.5",
                "--povm",
                "nm",
                "--preset",
                "paper-ex4",
                "--t",
                "0.01"
            ]),
            0
        );
        assert_eq!(
            exit_of(&["bound", "--state", "tiles", "--povm", "gsic", "--x", "0.04984", "--json"]),
            0
        );
    }

    #[test]
    fn bound_usage_errors() {
        // Missing --t, missing --d, inapplicable flag, unknown preset.
        assert_eq!(
            exit_of(&["bound", "--state", "tiles", "--preset", "paper-ex1"]),
            2
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "isotropic",
                "--f",
                "0.5",
                "--povm",
                "sic"
            ]),
            2
        );
        assert_eq!(
            exit_of(&["bound", "--state", "tiles", "--tau", "0.2", "--povm", "sic"]),
            2
        );
        assert_eq!(
            exit_of(&["bound", "--state", "tiles", "--preset", "nope", "--t", "0.01"]),
            2
        );
        assert_eq!(exit_of(&["bound", "--state", "file", "--povm", "sic"]), 2);
    }

    #[test]
    fn infeasible_configurations_exit_one() {
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "tiles",
                "--preset",
                "paper-ex1",
                "--t",
                "0.3"
            ]),
            1
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "isotropic",
                "--d",
                "4",
                "--f",
                "1",
                "--povm",
                "sic"
            ]),
            1
        );
        assert_eq!(
            exit_of(&["validate", "--d", "3", "--N", "8", "--M", "2", "--t", "0.3"]),
            1
        );
    }

    #[test]
    fn validate_examples() {
        assert_eq!(
            exit_of(&[
                "validate",
                "--d",
                "3",
                "--N",
                "8",
                "--M",
                "2",
                "--t",
                "0.01",
                "--preset",
                "paper-ex1"
            ]),
            0
        );
        assert_eq!(
            exit_of(&[
                "validate",
                "--d",
                "4",
                "--N",
                "5",
                "--M",
                "4",
                "--t",
                "0.05",
                "--preset",
                "paper-ex4"
            ]),
            0
        );
        assert_eq!(exit_of(&["validate", "--d", "3", "--povm", "sic"]), 0);
        assert_eq!(
            exit_of(&["validate", "--d", "3", "--povm", "gsic", "--x", "0.05"]),
            0
        );
    }

    #[test]
    fn state_file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rho.json");
        let p = path.to_str().unwrap();
        assert_eq!(
            exit_of(&[
                "state",
                "--state",
                "horodecki",
                "--tau",
                "0.25",
                "--output",
                p
            ]),
            0
        );
        let text = fs::read_to_string(&path).unwrap();
        let rho = symconc::DensityMatrix::from_json_str(&text).unwrap();
        assert_eq!(
            rho.matrix(),
            symconc::states::horodecki_state(0.25).unwrap().matrix()
        );
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "file",
                "--state-file",
                p,
                "--povm",
                "sic"
            ]),
            0
        );

        let bad = dir.path().join("bad.json");
        fs::write(&bad, r#"{"dA": 2, "dB": 2, "re": [[1]]}"#).unwrap();
        let b = bad.to_str().unwrap();
        assert_eq!(
            exit_of(&[
                "bound",
                "--state",
                "file",
                "--state-file",
                b,
                "--povm",
                "sic"
            ]),
            2
        );
    }

    #[test]
    fn povm_dump_and_config() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("povm.json");
        let o = out.to_str().unwrap();
        assert_eq!(
            exit_of(&[
                "povm",
                "--d",
                "4",
                "--preset",
                "paper-ex4",
                "--t",
                "0.01",
                "--output",
                o
            ]),
            0
        );
        let dump: PovmDump = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!((dump.n, dump.m, dump.effects.len()), (5, 4, 20));

        let cfg = dir.path().join("cfg.json");
        fs::write(&cfg, r#"{"d": 3, "N": 4, "M": 3, "t": 0.05}"#).unwrap();
        let c = cfg.to_str().unwrap();
        assert_eq!(exit_of(&["validate", "--povm-config", c]), 0);
        assert_eq!(
            exit_of(&["bound", "--state", "tiles", "--povm-config", c]),
            0
        );
        fs::write(&cfg, r#"{"d": 3, "N": 4, "M": 3, "tt": 0.05}"#).unwrap();
        assert_eq!(exit_of(&["validate", "--povm-config", c]), 2);
    }

    #[test]
    fn sweep_arguments() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let o = out.to_str().unwrap();
        assert_eq!(exit_of(&["sweep", "--preset", "fig1", "--steps", "1"]), 2);
        assert_eq!(exit_of(&["sweep", "--preset", "fig9"]), 2);
        assert_eq!(
            exit_of(&["sweep", "--preset", "fig1", "--method", "sic"]),
            2
        );
        assert_eq!(
            exit_of(&[
                "sweep",
                "--state",
                "isotropic",
                "--d",
                "3",
                "--from",
                "0.2",
                "--to",
                "1",
                "--steps",
                "5",
                "--method",
                "nm,sic",
                "--N",
                "4",
                "--M",
                "3",
                "--t",
                "0.05",
                "--output",
                o,
            ]),
            0
        );
        let csv = fs::read_to_string(&out).unwrap();
        assert_eq!(csv.lines().next(), Some("param,nm,sic"));
        assert_eq!(csv.lines().count(), 6);
        assert_eq!(
            exit_of(&[
                "sweep",
                "--state",
                "isotropic",
                "--d",
                "3",
                "--from",
                "0.2",
                "--to",
                "1",
                "--method",
                "sic,sic",
                "--output",
                o
            ]),
            2
        );
        assert_eq!(
            exit_of(&[
                "sweep", "--state", "tiles", "--from", "0.9", "--to", "0.8", "--method", "sic",
                "--output", o
            ]),
            2
        );
    }
}
