mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use jolt_core::classify::{classify, ClassifyOptions};
use jolt_core::factorize::{hamiltonian_from_map, jolt_factorize, Factorization};
use jolt_core::hamalg::{is_symplectic, linear_flow, poisson};
use jolt_core::normalform::{seminormal_at, simple_form_reduction, Reduction};
use jolt_core::polycore::{format_vec, parse, parse_constant, parse_point, FieldSpec, Poly};
use jolt_core::sampling::SampleBudget;
use jolt_core::Error;

use input::{infer_field, infer_n, load, parse_field, Inline};

#[derive(Parser)]
#[command(name = "jolt", version, about = "Hamiltonians with straight-line flows: classify, normalize, factorize")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for random sample points.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Phase-space dimension n for inline expressions (default: largest index used).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Coefficient field for inline expressions: `rational` or `sqrt<d>`.
    #[arg(long, global = true, value_parser = field_arg)]
    field: Option<FieldSpec>,
}

fn field_arg(s: &str) -> Result<FieldSpec, String> {
    parse_field(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Affine integrability, shear, triple nilpotency, regularity and rank.
    Classify {
        /// `.ham` file, `corpus:<name>` or an inline expression.
        input: String,
        /// Evaluate identities at random integer points instead of expanding them.
        #[arg(long)]
        numeric: bool,
        /// Number of trials in numeric mode.
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// ζ, θ and the seminormalizing unitary at a point.
    Seminormal {
        input: String,
        /// Point as comma-separated constants, e.g. `0,0,0,0,0,0,1,1`.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Unitary reduction to K(p̄) + qᵀV(p̄) + pᵀW(p̄).
    Reduce {
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Split a cubic symplectic map (or the time-one map of H) into two shear flows.
    Factorize {
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Poisson bracket {F, G}.
    Bracket {
        f: String,
        g: String,
        #[command(flatten)]
        common: Common,
    },
    /// The flow map I + tX.
    Flow {
        input: String,
        #[arg(long, default_value = "1")]
        t: String,
        #[command(flatten)]
        common: Common,
    },
    /// Symplecticity of a map and recovery of its Hamiltonian.
    VerifyMap {
        input: String,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Classify { common, .. }
            | Command::Seminormal { common, .. }
            | Command::Reduce { common, .. }
            | Command::Factorize { common, .. }
            | Command::Bracket { common, .. }
            | Command::Flow { common, .. }
            | Command::VerifyMap { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Seminormal { .. } => "seminormal",
            Command::Reduce { .. } => "reduce",
            Command::Factorize { .. } => "factorize",
            Command::Bracket { .. } => "bracket",
            Command::Flow { .. } => "flow",
            Command::VerifyMap { .. } => "verify-map",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    input: &'a str,
    seed: u64,
    result: serde_json::Value,
    elapsed_ms: f64,
}

/// Result of one command: a JSON body and its text rendering.
struct Outcome {
    input: String,
    body: serde_json::Value,
    text: String,
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn run(cmd: &Command) -> Result<Outcome, Error> {
    let common = cmd.common();
    let inline = Inline { n: common.n, field: common.field };
    let budget = SampleBudget::with_seed(common.seed);
    match cmd {
        Command::Classify { input, numeric, samples, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let h = src.hamiltonian()?;
            let opts = ClassifyOptions { budget, numeric: numeric.then_some(*samples) };
            let r = classify(&h, &opts)?;
            Ok(Outcome { input: name, text: report::classification(&h, &r), body: to_json(&r) })
        }
        Command::Seminormal { input, at, tol, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let h = src.hamiltonian()?;
            let field = FieldSpec::from_radicand(h.poly().field_radicand());
            let s = match at {
                Some(pt) => {
                    let x = parse_point(pt, field)?;
                    if x.len() != 2 * h.n() {
                        return Err(Error::Parse { pos: 0, msg: format!("point has {} coordinates, expected {}", x.len(), 2 * h.n()) });
                    }
                    seminormal_at(&h, &x, *tol)?
                }
                None => budget
                    .points(2 * h.n())
                    .iter()
                    .find_map(|x| seminormal_at(&h, x, *tol).ok())
                    .ok_or(Error::NoValidPoint)?,
            };
            Ok(Outcome { input: name, text: report::seminormal(&s), body: to_json(&s) })
        }
        Command::Reduce { input, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let h = src.hamiltonian()?;
            let r = simple_form_reduction(&h, &budget)?;
            let (text, mut body) = match &r {
                Reduction::Exact(s) => (report::simple_form(s, "exact"), to_json(s)),
                Reduction::Float(s) => (report::simple_form(s, "float"), to_json(s)),
            };
            body["exact_integrability"] = json!(r.exact_integrability());
            Ok(Outcome { input: name, text, body })
        }
        Command::Factorize { input, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let f = src.map();
            let (text, body) = match jolt_factorize(&f, &budget)? {
                Factorization::Exact(j) => (report::factorization(&j), to_json(&j)),
                Factorization::Float(j) => (report::factorization(&j), to_json(&j)),
            };
            Ok(Outcome { input: name, text, body })
        }
        Command::Bracket { f, g, .. } => {
            let both = format!("{f} {g}");
            let n = common.n.unwrap_or_else(|| infer_n(&both));
            let field = common.field.unwrap_or_else(|| infer_field(&both));
            let b = poisson(&parse(f, n, field)?, &parse(g, n, field)?)?;
            Ok(Outcome { input: both, text: format!("{b}\n"), body: json!({ "n": n, "bracket": b }) })
        }
        Command::Flow { input, t, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let h = src.hamiltonian()?;
            let field = FieldSpec::from_radicand(h.poly().field_radicand());
            let tc = Poly::constant(h.vars(), parse_constant(t, field)?);
            let map = linear_flow(&h, &tc)?;
            let text = format!("{}\n", format_vec(&map));
            Ok(Outcome { input: name, text, body: json!({ "n": h.n(), "t": t, "map": map }) })
        }
        Command::VerifyMap { input, .. } => {
            let src = load(input, inline)?;
            let name = src.name().to_string();
            let f = src.map();
            let (symplectic, _) = is_symplectic(&f)?;
            let h = if symplectic { Some(hamiltonian_from_map(&f)?) } else { None };
            let text = match &h {
                Some(h) => format!("symplectic: true\nhamiltonian: {}\n", h.poly()),
                None => "symplectic: false\n".to_string(),
            };
            let body = json!({ "symplectic": symplectic, "hamiltonian": h.as_ref().map(|h| h.poly()) });
            Ok(Outcome { input: name, text, body })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_parse() {
        2
    } else if e.is_numeric() {
        4
    } else {
        3
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.command.common().clone();
    let start = Instant::now();
    match run(&cli.command) {
        Ok(out) => {
            if common.json {
                let env = Envelope {
                    tool: "jolt",
                    version: env!("CARGO_PKG_VERSION"),
                    command: cli.command.name(),
                    input: &out.input,
                    seed: common.seed,
                    result: out.body,
                    elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
                };
                println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(exit_code(&e))
        }
    }
}
