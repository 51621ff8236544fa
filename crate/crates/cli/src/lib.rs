//! The `goedel` command line.
//!
//! Exit codes: 0 the claim holds (or the command succeeded), 1 it fails and a
//! witness is printed, 2 a bounded search found nothing but is not
//! conclusive, 3 usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use goedel::decision::{fo_check_bounded_with, one_entails, BoundedOptions, EntailmentVerdict};
use goedel::interpolation::{
    countermodel_synthesize, find_separator_with, interpolate_with, InterpolationError, PipelineOptions,
    DEFAULT_CLONE_BUDGET,
};
use goedel::lemmas::{run_suite, Suite, SuiteConfig};
use goedel::lindenbaum::{build_chain, CompleteTheoryOracle};
use goedel::linorder::{embed_into_unit, AmalgamInput, BoundedChain};
use goedel::semantics::Valuation;
use goedel::syntax::{
    count_closed_formulas, enumerate_closed_formulas, parse_formula_inferred, Formula, Signature, Theory,
};

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_INCONCLUSIVE: u8 = 2;
pub const EXIT_USAGE: u8 = 3;

/// Overrides the default clone budget when `--clone-budget` is not given.
pub const BUDGET_ENV: &str = "GOEDEL_BUDGET";

/// Largest formula universe `lindenbaum` enumerates on its own.
const MAX_ENUMERATED: u128 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub depth_budget: usize,
    pub clone_budget: usize,
    pub max_universe: usize,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            depth_budget: 3,
            clone_budget: DEFAULT_CLONE_BUDGET,
            max_universe: 3,
            seed: 0,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Flags win over the environment, which wins over the defaults.
    fn resolve(g: &GlobalArgs, env_budget: Option<&str>) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(b) = env_budget {
            c.clone_budget = b
                .trim()
                .parse()
                .with_context(|| format!("{BUDGET_ENV}={b:?} is not a budget"))?;
        }
        if let Some(b) = g.clone_budget {
            c.clone_budget = b;
        }
        c.depth_budget = g.depth_budget.unwrap_or(c.depth_budget);
        c.max_universe = g.max_universe.unwrap_or(c.max_universe);
        c.seed = g.seed.unwrap_or(c.seed);
        c.output_format = g.format;
        if c.depth_budget == 0 || c.clone_budget == 0 || c.max_universe == 0 {
            bail!("budgets must be positive");
        }
        Ok(c)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "goedel",
    version,
    about = "Gödel logic G and G^Δ: entailment, interpolation, countermodels"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest formula depth enumerated by `lindenbaum` and the countermodel stream.
    #[arg(long, global = true)]
    depth_budget: Option<usize>,
    #[arg(long, global = true)]
    clone_budget: Option<usize>,
    /// Largest universe for first-order checks.
    #[arg(long, global = true)]
    max_universe: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a tautology or a 1-entailment.
    Check {
        #[arg(long, value_name = "FORMULA", conflicts_with = "entail")]
        taut: Option<String>,
        /// Theory file followed by the conclusion.
        #[arg(long, num_args = 2, value_names = ["THEORY", "FORMULA"])]
        entail: Option<Vec<String>>,
    },
    /// Find an interpolant for φ ⊩ ψ over the common atoms.
    Interpolate {
        phi: String,
        psi: String,
        #[arg(long)]
        g_only: bool,
    },
    /// Find a separator of two theories.
    Separate {
        t: String,
        u: String,
        #[arg(long)]
        g_only: bool,
    },
    /// Build a countermodel to φ ⊩ ψ through chains and amalgamation.
    Countermodel {
        phi: String,
        psi: String,
        /// Allow Δ in the chains.
        #[arg(long)]
        with_delta: bool,
        #[arg(long, default_value_t = 1)]
        stream_depth: usize,
    },
    /// Amalgamate two chains over a common one (JSON input).
    Amalgamate {
        input: String,
        #[arg(long)]
        dot: bool,
    },
    /// Embed a finite chain (JSON `{"elements": [...]}`) into [0,1].
    Embed { chain: String },
    /// The chain of classes of formulas modulo the 1-set of a valuation.
    Lindenbaum {
        valuation: String,
        /// Theory file of formulas; all closed formulas up to the depth budget when absent.
        formulas: Option<String>,
        #[arg(long)]
        g_only: bool,
    },
    /// Run a seeded lemma suite.
    Lemmas {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
    },
}

/// What a command prints and the exit code it returns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn usage(message: String) -> Output {
        Output {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: message,
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output::usage(text)
            } else {
                Output {
                    code: EXIT_HOLDS,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let env = std::env::var(BUDGET_ENV).ok();
    let config = match RunConfig::resolve(&cli.global, env.as_deref()) {
        Ok(c) => c,
        Err(e) => return Output::usage(format!("error: {e:#}\n")),
    };
    match dispatch(&cli.command, &config) {
        Ok((code, text, value)) => {
            let stdout = match config.output_format {
                OutputFormat::Json => {
                    let envelope = json!({"command": command_name(&cli.command), "seed": config.seed, "result": value});
                    format!("{}\n", serde_json::to_string_pretty(&envelope).expect("json"))
                }
                OutputFormat::Text => text,
            };
            Output {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Output::usage(format!("error: {e:#}\n")),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Interpolate { .. } => "interpolate",
        Command::Separate { .. } => "separate",
        Command::Countermodel { .. } => "countermodel",
        Command::Amalgamate { .. } => "amalgamate",
        Command::Embed { .. } => "embed",
        Command::Lindenbaum { .. } => "lindenbaum",
        Command::Lemmas { .. } => "lemmas",
    }
}

/// A path to an existing file is read; anything else is taken literally.
fn text_arg(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

fn read_file(arg: &str) -> Result<String> {
    std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
}

fn formula_arg(arg: &str) -> Result<(Formula, Signature)> {
    let text = text_arg(arg)?;
    let line = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ");
    parse_formula_inferred(&line).map_err(|e| anyhow!("{arg}: {e}"))
}

fn theory_file(arg: &str) -> Result<(Theory, Signature)> {
    Theory::parse_inferred(&read_file(arg)?).map_err(|e| anyhow!("{arg}: {e}"))
}

fn strings(fs: &[Formula]) -> Vec<String> {
    fs.iter().map(ToString::to_string).collect()
}

fn seed_line(c: &RunConfig) -> String {
    format!("seed: {}\n", c.seed)
}

type Dispatched = (u8, String, Value);

fn dispatch(command: &Command, c: &RunConfig) -> Result<Dispatched> {
    match command {
        Command::Check { taut, entail } => {
            let (theory, formula) = match (taut, entail) {
                (Some(f), None) => (Theory::empty(), formula_arg(f)?.0),
                (None, Some(v)) => {
                    let (t, ts) = theory_file(&v[0])?;
                    let (f, fs) = formula_arg(&v[1])?;
                    ts.union(&fs).map_err(|e| anyhow!("{e}"))?;
                    (t, f)
                }
                _ => bail!("check needs exactly one of --taut or --entail"),
            };
            check(&theory, &formula, c)
        }
        Command::Interpolate { phi, psi, g_only } => {
            let (phi, _) = formula_arg(phi)?;
            let (psi, _) = formula_arg(psi)?;
            match interpolate_with(&phi, &psi, *g_only, c.clone_budget) {
                Ok(Some(i)) => {
                    let text = format!("{}interpolant: {}\n", seed_line(c), i.theta);
                    Ok((EXIT_HOLDS, text, i.to_json()))
                }
                Ok(None) => Ok((
                    EXIT_FAILS,
                    format!("{}no interpolant\n", seed_line(c)),
                    json!({"interpolant": null}),
                )),
                Err(InterpolationError::NotEntailed { witness }) => {
                    let w = witness.as_ref().map(Valuation::to_json);
                    let text = format!(
                        "{}not entailed\nwitness: {}\n",
                        seed_line(c),
                        w.clone().unwrap_or(Value::Null)
                    );
                    Ok((EXIT_FAILS, text, json!({"entailed": false, "witness": w})))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Separate { t, u, g_only } => {
            let (t, _) = theory_file(t)?;
            let (u, _) = theory_file(u)?;
            match find_separator_with(&t, &u, *g_only, c.clone_budget)? {
                Some(cert) => Ok((
                    EXIT_HOLDS,
                    format!("{}separator: {}\n", seed_line(c), cert.separator),
                    cert.to_json(),
                )),
                None => Ok((
                    EXIT_FAILS,
                    format!("{}inseparable\n", seed_line(c)),
                    json!({"separator": null, "inseparable": true}),
                )),
            }
        }
        Command::Countermodel {
            phi,
            psi,
            with_delta,
            stream_depth,
        } => {
            if *stream_depth == 0 || *stream_depth > c.depth_budget {
                bail!("stream depth must be between 1 and the depth budget {}", c.depth_budget);
            }
            let (phi, _) = formula_arg(phi)?;
            let (psi, _) = formula_arg(psi)?;
            let opts = PipelineOptions {
                g_only: !with_delta,
                stream_depth: *stream_depth,
                ..PipelineOptions::default()
            };
            match countermodel_synthesize(&phi, &psi, &opts) {
                Ok(cm) => {
                    let text = format!("{}countermodel: {}\n", seed_line(c), cm.valuation.to_json());
                    Ok((EXIT_HOLDS, text, cm.to_json()))
                }
                Err(InterpolationError::Separable(theta)) => {
                    let text = format!("{}entailed; separator: {theta}\n", seed_line(c));
                    Ok((
                        EXIT_FAILS,
                        text,
                        json!({"entailed": true, "separator": theta.to_string()}),
                    ))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Amalgamate { input, dot } => {
            let input: AmalgamInput = serde_json::from_str(&read_file(input)?).context("amalgamation input")?;
            let result = input.run()?;
            let value = serde_json::to_value(&result).expect("json");
            let text = if *dot {
                result.to_dot()
            } else {
                format!("{}chain: {}\n", seed_line(c), result.chain.elements().join(" < "))
            };
            Ok((EXIT_HOLDS, text, value))
        }
        Command::Embed { chain } => {
            let chain: BoundedChain = serde_json::from_str(&read_file(chain)?).context("chain input")?;
            let h = embed_into_unit(&chain);
            let rows: Vec<Value> = chain
                .elements()
                .iter()
                .map(|e| json!({"element": e, "value": h[e].to_string()}))
                .collect();
            let mut text = seed_line(c);
            for e in chain.elements() {
                let _ = writeln!(text, "{e}\t{}", h[e]);
            }
            Ok((EXIT_HOLDS, text, json!({"embedding": rows})))
        }
        Command::Lindenbaum {
            valuation,
            formulas,
            g_only,
        } => {
            let v = Valuation::from_json_str(&read_file(valuation)?)?;
            let fs = match formulas {
                Some(path) => theory_file(path)?.0.formulas().to_vec(),
                None => {
                    let sig = Signature::propositional(v.relation_names().map(str::to_string));
                    let n = count_closed_formulas(&sig, c.depth_budget, !g_only);
                    if n > MAX_ENUMERATED {
                        bail!("{n} formulas up to depth {}; lower --depth-budget", c.depth_budget);
                    }
                    enumerate_closed_formulas(&sig, c.depth_budget, !g_only)
                }
            };
            let chain = build_chain(CompleteTheoryOracle::new(v), &fs, *g_only)?;
            let mut text = seed_line(c);
            for (i, class) in chain.classes.iter().enumerate() {
                let _ = writeln!(
                    text,
                    "{}\t{}\t{}",
                    chain.class_name(i),
                    class.value,
                    strings(&class.members).join(", ")
                );
            }
            Ok((EXIT_HOLDS, text, chain.to_json()))
        }
        Command::Lemmas { suite, cases } => {
            let suite = Suite::parse(suite)?;
            let mut config = SuiteConfig::new(suite, c.seed);
            config.cases = cases.unwrap_or(config.cases);
            config.max_universe = c.max_universe;
            let report = run_suite(suite, &config)?;
            let code = if report.passed() { EXIT_HOLDS } else { EXIT_FAILS };
            Ok((code, report.to_text(), report.to_json()))
        }
    }
}

fn check(theory: &Theory, formula: &Formula, c: &RunConfig) -> Result<Dispatched> {
    let propositional = theory.is_propositional() && formula.is_propositional();
    let verdict: EntailmentVerdict = if propositional {
        one_entails(theory, formula)?
    } else {
        let opts = BoundedOptions {
            max_universe: c.max_universe,
            ..BoundedOptions::default()
        };
        fo_check_bounded_with(theory, formula, &opts, Default::default())?
    };
    let code = match (verdict.holds, verdict.bounded) {
        (false, _) => EXIT_FAILS,
        (true, false) => EXIT_HOLDS,
        (true, true) => EXIT_INCONCLUSIVE,
    };
    let mut text = seed_line(c);
    match code {
        EXIT_HOLDS => text.push_str("holds\n"),
        EXIT_INCONCLUSIVE => {
            let _ = writeln!(
                text,
                "no countermodel with at most {} elements (inconclusive)",
                c.max_universe
            );
        }
        _ => {
            let w = verdict.witness.as_ref().map(Valuation::to_json).unwrap_or(Value::Null);
            let _ = writeln!(text, "fails\nwitness: {w}");
        }
    }
    Ok((code, text, verdict.to_json()))
}
