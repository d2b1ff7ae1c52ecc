use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ruppert_core::flattening::{
    cubic_lie_rank, cubic_lie_rank_bound, flattening_rank, FieldSpec, RankOptions, VerdictKind,
};
use ruppert_core::linalg::Field;
use ruppert_core::poly::{infer_num_vars, parse_poly, HomogeneousPoly, ParseError, PolyError};
use ruppert_core::protocols::{
    codim_sigma_r, conjecture_experiment, prolongation_dim, reducibility_protocol, slicerank3_certificate,
    ProtocolConfig, ProtocolReport,
};
use ruppert_core::syzygy::{
    augmented_kernel_dim, delta, verify_delta_annihilates, verify_delta_prolongation, StrengthDecomposition,
};
use ruppert_core::Error;

mod render;

/// Certify irreducibility and slice-rank lower bounds of homogeneous forms.
#[derive(Parser, Debug)]
#[command(name = "ruppert", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Rank field: q, fp:<prime> or fp:random.
    #[arg(long, global = true, default_value = "fp:random")]
    field: String,
    /// Random restrictions per protocol run.
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Settle every deficient rank with an exact kernel over ℚ.
    #[arg(long, global = true)]
    exact: bool,
    /// A form like "x0^3 + x1^3 + x2^3", or a file holding one ('#' starts a comment).
    #[arg(long, global = true)]
    input: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Number of variables; inferred from the largest index when omitted.
    #[arg(long, global = true)]
    vars: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and print the canonical form.
    Parse,
    /// Rank of the flattening ρ_f^(e).
    Rank {
        #[arg(long)]
        e: u32,
    },
    /// Irreducibility through restrictions to 3 variables.
    ReduceTest,
    /// Rank of ρ_f^(1) for a cubic against the reducible bound n(n+5)/2.
    LieRank,
    /// Slice rank at least 3 through restrictions to 5 variables.
    SlicerankTest {
        /// Also emit a random restriction to 14 variables.
        #[arg(long)]
        reduction: bool,
    },
    /// Build Δ from f = g_1 h_1 + ... + g_r h_r and check both syzygy identities.
    DeltaVerify {
        #[arg(long = "g", required = true)]
        gs: Vec<String>,
        #[arg(long = "h", required = true)]
        hs: Vec<String>,
    },
    /// Closed-form dimensions.
    Dims {
        /// dim sl^(e)(V) with dim V = n + 1.
        #[arg(long, num_args = 2, value_names = ["N", "E"], conflicts_with = "codim", required_unless_present = "codim")]
        prolongation: Option<Vec<u64>>,
        /// Codimension of the r-th secant of reducible degree-d forms in P^n.
        #[arg(long, num_args = 3, value_names = ["N", "D", "R"])]
        codim: Option<Vec<u64>>,
    },
    /// Experimental scan of restrictions to 2r+1 variables.
    Conjecture {
        #[arg(long)]
        r: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse => "parse",
            Command::Rank { .. } => "rank",
            Command::ReduceTest => "reduce-test",
            Command::LieRank => "lie-rank",
            Command::SlicerankTest { .. } => "slicerank-test",
            Command::DeltaVerify { .. } => "delta-verify",
            Command::Dims { .. } => "dims",
            Command::Conjecture { .. } => "conjecture",
        }
    }
}

/// A failure reported on stderr with exit code 1.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

const EXIT_OK: u8 = 0;
const EXIT_INCONCLUSIVE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, code)) => {
            let text = match cli.common.output {
                Output::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                Output::Human => render::human(&report),
            };
            // a closed pipe is not an error worth reporting
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    let c = &cli.common;
    let field: FieldSpec = c.field.parse().map_err(|e: Error| Failure(format!("--field: {e}")))?;
    let cfg = ProtocolConfig { trials: c.trials, seed: c.seed, field, exact_verify: c.exact, emit_reduction: false };
    let (body, code) = match &cli.command {
        Command::Parse => {
            let f = read_form(c)?;
            let body = json!({
                "num_vars": f.num_vars(),
                "degree": f.degree(),
                "canonical": f.to_string(),
                "input_digest": f.digest(),
                "support": f.support(),
            });
            (body, EXIT_OK)
        }
        Command::Rank { e } => {
            let f = read_form(c)?;
            let mode = field.resolve(c.seed);
            let opts = RankOptions { mode, exact_verify: c.exact || matches!(field, FieldSpec::Rational) };
            let ev = flattening_rank(&f, *e, &opts)?;
            let body = json!({
                "input_digest": f.digest(),
                "e": e,
                "field": mode.label(),
                "rows": ev.rows,
                "cols": ev.cols,
                "rank": ev.rank,
                "rank_exact": ev.exact,
                "full_rank": ev.is_full(),
                "primes": ev.primes,
            });
            (body, EXIT_OK)
        }
        Command::ReduceTest => protocol(reducibility_protocol(&read_form(c)?, &cfg)?),
        Command::LieRank => {
            let f = read_form(c)?;
            let rank = cubic_lie_rank(&f)?;
            let bound = cubic_lie_rank_bound(f.num_vars() - 1);
            let body = json!({
                "input_digest": f.digest(),
                "field": "q",
                "rank": rank,
                "bound": bound,
                "exceeds_bound": rank > bound,
            });
            (body, EXIT_OK)
        }
        Command::SlicerankTest { reduction } => {
            let cfg = ProtocolConfig { emit_reduction: *reduction, ..cfg };
            protocol(slicerank3_certificate(&read_form(c)?, &cfg)?)
        }
        Command::DeltaVerify { gs, hs } => delta_verify(c, gs, hs)?,
        Command::Dims { prolongation, codim } => {
            let (quantity, args, value) = match (prolongation, codim) {
                (Some(a), _) => {
                    if a[1] == 0 {
                        return Err(Failure("--prolongation: E must be at least 1".into()));
                    }
                    let e =
                        u32::try_from(a[1]).map_err(|_| Failure(format!("--prolongation: E = {} too large", a[1])))?;
                    let v = prolongation_dim(a[0] as usize, e)
                        .ok_or_else(|| Failure("--prolongation: value does not fit in 64 bits".into()))?;
                    ("prolongation", a.clone(), v)
                }
                (None, Some(a)) => ("codim", a.clone(), codim_sigma_r(a[0], a[1], a[2])?),
                (None, None) => return Err(Failure("dims needs --prolongation or --codim".into())),
            };
            (json!({ "quantity": quantity, "args": args, "value": value }), EXIT_OK)
        }
        Command::Conjecture { r } => protocol(conjecture_experiment(&read_form(c)?, *r, &cfg)?),
    };
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!(cli.command.name()));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Ok((Value::Object(out), code))
}

/// Certificates and direct tests exit 0; sampled evidence without a certificate exits 2.
fn protocol(report: ProtocolReport) -> (Value, u8) {
    let code = match report.final_verdict {
        VerdictKind::IrreducibleCertified | VerdictKind::SliceRankAtLeast(_) => EXIT_OK,
        VerdictKind::ReducibleConsistent if report.is_direct() => EXIT_OK,
        _ => EXIT_INCONCLUSIVE,
    };
    (to_value(&report), code)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn delta_verify(c: &Common, gs: &[String], hs: &[String]) -> Result<(Value, u8), Failure> {
    let input = c.input.as_deref().map(load_text).transpose()?;
    let nv = match c.vars {
        Some(n) => n,
        None => gs
            .iter()
            .chain(hs)
            .map(String::as_str)
            .chain(input.as_deref())
            .filter_map(infer_num_vars)
            .max()
            .ok_or_else(|| Failure("cannot infer the number of variables, pass --vars".into()))?,
    };
    let parse = |flag: &str, s: &str| parse_poly(s, nv, Field::Rational).map_err(|e| parse_failure(flag, s, e));
    let gs = gs.iter().map(|s| parse("--g", s)).collect::<Result<Vec<_>, _>>()?;
    let hs = hs.iter().map(|s| parse("--h", s)).collect::<Result<Vec<_>, _>>()?;
    let dec = StrengthDecomposition::new(gs, hs)?;
    let form = dec.form();
    let mut augmented = None;
    if let Some(text) = &input {
        let f = parse("--input", text)?;
        if f != form {
            return Err(Failure("--input: f differs from Σ g_i h_i".into()));
        }
        if dec.r() as u32 * (dec.degree() - 2) == dec.degree() - 1 {
            augmented = Some(augmented_kernel_dim(&f, &dec)?);
        }
    }
    let t = delta(&dec)?;
    let in_prolongation = verify_delta_prolongation(&t);
    let annihilates = verify_delta_annihilates(&t, &form)?;
    let mut body = json!({
        "input_digest": form.digest(),
        "r": dec.r(),
        "num_vars": nv,
        "degree": t.degree(),
        "delta": t.components().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "delta_is_zero": t.is_zero(),
        "in_prolongation": in_prolongation,
        "annihilates": annihilates,
    });
    if let Some(a) = augmented {
        body["augmented_kernel_dim"] = json!(a);
    }
    let code = if in_prolongation && annihilates { EXIT_OK } else { EXIT_INCONCLUSIVE };
    Ok((body, code))
}

/// `--input` is a file path when such a file exists, inline text otherwise.
fn load_text(raw: &str) -> Result<String, Failure> {
    let path = Path::new(raw);
    if !path.is_file() {
        return Ok(raw.to_string());
    }
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("--input: cannot read {raw}: {e}")))?;
    // blank out comments so parse positions still index the file
    Ok(text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => format!("{}{}", &l[..i], " ".repeat(l[i..].chars().count())),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n"))
}

fn read_form(c: &Common) -> Result<HomogeneousPoly, Failure> {
    let raw = c.input.as_deref().ok_or_else(|| Failure("missing --input".into()))?;
    let text = load_text(raw)?;
    if text.trim().is_empty() {
        return Err(Failure("--input: no polynomial given".into()));
    }
    let nv = match c.vars {
        Some(n) => n,
        None => infer_num_vars(&text)
            .ok_or_else(|| Failure("--input: no variables x0, x1, ... found; pass --vars".into()))?,
    };
    parse_poly(&text, nv, Field::Rational).map_err(|e| parse_failure("--input", &text, e))
}

fn parse_failure(flag: &str, text: &str, e: PolyError) -> Failure {
    match e {
        PolyError::Parse(ParseError { kind, position }) => {
            let token: String = text
                .chars()
                .skip(position)
                .take_while(|ch| !ch.is_whitespace() && !matches!(ch, '+' | '-'))
                .take(24)
                .collect();
            let near = if token.is_empty() { "end of input".to_string() } else { format!("`{token}`") };
            Failure(format!("{flag}: {kind} near {near} at position {position}"))
        }
        other => Failure(format!("{flag}: {other}")),
    }
}
