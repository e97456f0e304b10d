//! `alphafix`: evaluate, compare and check α-fixed semantics of `.blp`
//! programs.
//!
//! Exit status is 0 on success, 1 on a user error (unreadable input, syntax,
//! bad flags or model files) and 2 when an internal invariant fails.

mod output;

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use alphafix::engine::{self, EngineError, ModelOrientation, SemanticsResult};
use alphafix::grounder::{ground_with, BaseMode, GroundOptions, GroundProgram};
use alphafix::oracles::{self, ThreeValuation, DEFAULT_ENUMERATION_CAP};
use alphafix::syntax::{is_conventional, parse_program};
use alphafix::{TruthValue, Valuation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::Table;

#[derive(Parser)]
#[command(
    name = "alphafix",
    version,
    about = "Parameterized fixpoint semantics of logic programs over FOUR"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one or more semantics of a program.
    Eval {
        /// Program file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Default value for atoms that head no rule.
        #[arg(long, value_parser = parse_alpha)]
        alpha: Option<TruthValue>,
        /// Comma-separated list of semantics, one output column each.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "fixU")]
        semantics: Vec<Semantics>,
    },
    /// Print fixU under every alpha plus the consensus semantics, and the
    /// orderings that hold between them.
    Compare {
        /// Program file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a candidate valuation against a program.
    Check {
        /// Program file; `-` reads standard input.
        input: PathBuf,
        /// Valuation as `atom<TAB>value` lines or a JSON object.
        model: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Default value for atoms that head no rule.
        #[arg(long, value_parser = parse_alpha)]
        alpha: TruthValue,
    },
    /// Print the ground program with one clause per head atom.
    Ground {
        /// Program file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long, value_enum, default_value = "occurring")]
    base: BaseArg,
    /// Extra constants added to the Herbrand domain.
    #[arg(long = "const", value_delimiter = ',')]
    constants: Vec<String>,
    /// Require classical clause bodies: conjunctions of literals.
    #[arg(long)]
    strict_conventional: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Full,
    Occurring,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semantics {
    #[value(name = "fixU")]
    FixU,
    #[value(name = "fixI")]
    FixI,
    #[value(name = "fixF")]
    FixF,
    #[value(name = "fixT")]
    FixT,
    #[value(name = "consensus")]
    Consensus,
    #[value(name = "wfs")]
    Wfs,
    #[value(name = "kk")]
    Kk,
    #[value(name = "stable-enum")]
    StableEnum,
}

impl Semantics {
    fn label(self) -> &'static str {
        match self {
            Semantics::FixU => "fixU",
            Semantics::FixI => "fixI",
            Semantics::FixF => "fixF",
            Semantics::FixT => "fixT",
            Semantics::Consensus => "consensus",
            Semantics::Wfs => "wfs",
            Semantics::Kk => "kk",
            Semantics::StableEnum => "stable",
        }
    }

    fn needs_alpha(self) -> bool {
        matches!(
            self,
            Semantics::FixU | Semantics::FixI | Semantics::FixF | Semantics::FixT
        )
    }
}

fn parse_alpha(s: &str) -> Result<TruthValue, String> {
    s.parse()
        .map_err(|_| format!("expected one of F, T, U, I; got {s:?}"))
}

enum Failure {
    User(String),
    Invariant(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::User(m) => f.write_str(m),
            Failure::Invariant(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Valuation(v) => Failure::User(v.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<oracles::OracleError> for Failure {
    fn from(e: oracles::OracleError) -> Self {
        match e {
            oracles::OracleError::IterationBound { .. } => Failure::Invariant(e.to_string()),
            other => Failure::User(other.to_string()),
        }
    }
}

fn user<E: fmt::Display>(e: E) -> Failure {
    Failure::User(e.to_string())
}

fn read_input(path: Option<&Path>) -> Result<(String, String), Failure> {
    match path {
        None => read_stdin(),
        Some(p) if p == Path::new("-") => read_stdin(),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::User(format!("{}: {e}", p.display())))?;
            Ok((p.display().to_string(), text))
        }
    }
}

fn read_stdin() -> Result<(String, String), Failure> {
    let mut text = String::new();
    std::io::stdin().read_to_string(&mut text).map_err(user)?;
    Ok(("<stdin>".into(), text))
}

fn is_identifier(c: &str) -> bool {
    let mut chars = c.chars();
    matches!(chars.next(), Some(ch) if ch.is_ascii_lowercase() || ch.is_ascii_digit())
        && chars.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

fn load(input: Option<&Path>, common: &Common) -> Result<GroundProgram, Failure> {
    let (name, text) = read_input(input)?;
    let program = parse_program(&text).map_err(|e| Failure::User(format!("{name}:{e}")))?;
    if common.strict_conventional && !is_conventional(&program, true) {
        return Err(Failure::User(format!(
            "{name}: not a conventional program (bodies must be conjunctions of literals)"
        )));
    }
    if let Some(bad) = common.constants.iter().find(|c| !is_identifier(c)) {
        return Err(Failure::User(format!(
            "--const: {bad:?} is not a constant name"
        )));
    }
    let opts = GroundOptions {
        base: match common.base {
            BaseArg::Full => BaseMode::Full,
            BaseArg::Occurring => BaseMode::Occurring,
        },
        extra_constants: common.constants.clone(),
    };
    Ok(ground_with(&program, &opts))
}

fn eval(
    input: Option<&Path>,
    common: &Common,
    alpha: Option<TruthValue>,
    semantics: &[Semantics],
) -> Result<String, Failure> {
    let gp = load(input, common)?;
    let needs_alpha = semantics.iter().find(|s| s.needs_alpha());
    let fixpoints = match (needs_alpha, alpha) {
        (Some(s), None) => {
            return Err(Failure::User(format!(
                "--semantics {} requires --alpha",
                s.label()
            )))
        }
        (Some(_), Some(a)) => Some(SemanticsResult::compute(&gp, a)?),
        (None, _) => None,
    };

    let mut table = Table::new(gp.base());
    for &s in semantics {
        let column = |r: &SemanticsResult| match s {
            Semantics::FixU => r.fix_u.clone(),
            Semantics::FixI => r.fix_i.clone(),
            Semantics::FixF => r.fix_f.clone(),
            _ => r.fix_t.clone(),
        };
        match s {
            s if s.needs_alpha() => {
                let r = fixpoints.as_ref().expect("computed above");
                table.push(s.label(), column(r).values());
            }
            Semantics::Consensus => {
                table.push(
                    s.label(),
                    engine::consensus_semantics(&gp)?.valuation.values(),
                );
            }
            Semantics::Wfs => table.push(
                s.label(),
                oracles::well_founded(&gp)?.to_valuation().values(),
            ),
            Semantics::Kk => table.push(
                s.label(),
                oracles::kripke_kleene(&gp)?.to_valuation().values(),
            ),
            _ => {
                let models = oracles::enumerate_stable_models(&gp, DEFAULT_ENUMERATION_CAP)?;
                for (i, m) in models.iter().enumerate() {
                    table.push(format!("stable{}", i + 1), m.to_valuation().values());
                }
            }
        }
    }
    Ok(table.render(common.format))
}

fn compare(input: Option<&Path>, common: &Common) -> Result<String, Failure> {
    let gp = load(input, common)?;
    let report = engine::compare_semantics(&gp)?;
    let mut table = Table::new(gp.base());
    for alpha in TruthValue::ALL {
        table.push(alpha.to_string(), report.fix_u(alpha).values());
    }
    table.push("consensus", report.consensus.valuation.values());
    let mut out = table.render(common.format);
    if common.format == Format::Table {
        out.push('\n');
        for r in &report.relations {
            out.push_str(&format!("{r}\n"));
        }
    }
    Ok(out)
}

fn check(
    input: &Path,
    model: &Path,
    common: &Common,
    alpha: TruthValue,
) -> Result<String, Failure> {
    let gp = load(Some(input), common)?;
    let text = std::fs::read_to_string(model)
        .map_err(|e| Failure::User(format!("{}: {e}", model.display())))?;
    let looks_json =
        model.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let v = if looks_json {
        Valuation::from_json(gp.base(), &text)
    } else {
        Valuation::parse_tsv(gp.base(), &text)
    }
    .map_err(|e| Failure::User(format!("{}: {e}", model.display())))?;

    let fixed = engine::is_alpha_fixed_model(&gp, alpha, &v)?;
    let psi_fixed = engine::satisfies_psi(&gp, alpha, &v)?;
    let stable = match ThreeValuation::from_valuation(&v) {
        Some(three) if gp.is_conventional() => match oracles::gl_transform(&gp, &three) {
            Ok(out) => Some(out == three),
            Err(oracles::OracleError::NonConventional(_)) => None,
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };
    let model_t = engine::is_model(&gp, &v, ModelOrientation::HeadBelowBody)?;

    let yes_no = |b: bool| if b { "yes" } else { "no" };
    Ok(match common.format {
        Format::Json => {
            let obj = json!({
                "alpha": alpha.to_string(),
                "alpha_fixed_model": fixed,
                "psi_fixed": psi_fixed,
                "model": model_t,
                "three_valued_stable": stable,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&obj).expect("JSON values serialize")
            )
        }
        format => {
            let rows = [
                ("alpha-fixed model", yes_no(fixed)),
                ("psi(v,v) = v", yes_no(psi_fixed)),
                ("model", yes_no(model_t)),
                ("three-valued stable model", stable.map_or("n/a", yes_no)),
            ];
            let sep = if format == Format::Tsv { "\t" } else { ": " };
            rows.iter().map(|(k, v)| format!("{k}{sep}{v}\n")).collect()
        }
    })
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Eval {
            input,
            common,
            alpha,
            semantics,
        } => eval(input.as_deref(), &common, alpha, &semantics),
        Command::Compare { input, common } => compare(input.as_deref(), &common),
        Command::Check {
            input,
            model,
            common,
            alpha,
        } => check(&input, &model, &common, alpha),
        Command::Ground { input, common } => Ok(load(input.as_deref(), &common)?.render()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("alphafix: {e}");
            ExitCode::from(match e {
                Failure::User(_) => 1,
                Failure::Invariant(_) => 2,
            })
        }
    }
}
