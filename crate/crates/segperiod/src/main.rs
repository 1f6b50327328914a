//! Command line front end: classify representations, decompose
//! two-factor products, compare and enumerate multisegments, dualize,
//! restrict, and batch-classify, with plain or JSON output.
//!
//! Exit codes: 0 success, 1 parse or configuration error, 2 unsupported
//! input (weight above four, unsupported restriction presentation).

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use segperiod::decomp::{decompose_pair_l, decompose_pair_z, normalize, RepForm};
use segperiod::distinction::{Classifier, DistinctionError};
use segperiod::duality::mw_dual;
use segperiod::jacquet::{jacquet_of_form, JacquetError};
use segperiod::order::{enumerate_below, leq};
use segperiod::rules::{RuleError, RuleTable, Status, Verdict};
use segperiod::support::Registry;
use segperiod::textio::{format_form, format_multisegment, parse_expr, parse_multisegment};

#[derive(Parser)]
#[command(name = "segperiod", version, about = "Symplectic period engine for segment calculus")]
struct Cli {
    /// Support registry file (TOML); falls back to SEGPERIOD_SUPPORT,
    /// then to the built-in registry (chi, mu, rho2, rho3).
    #[arg(long, global = true)]
    support: Option<String>,

    /// Rule table file; defaults to the built-in table.
    #[arg(long, global = true)]
    rules: Option<String>,

    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a representation carries a symplectic period.
    Classify {
        expr: String,
        /// Classify the (possibly reducible) induced representation
        /// with the given factor order.
        #[arg(long)]
        induced: bool,
    },
    /// Two-factor product decomposition.
    Decompose { expr: String },
    /// Is the first multisegment reachable from the second?
    Leq { below: String, above: String },
    /// All multisegments reachable by elementary operations.
    Enumerate { mseg: String },
    /// The dual multisegment.
    Dual { mseg: String },
    /// Restriction to a maximal Levi block at the given cut.
    Jacquet {
        #[arg(long)]
        cut: u32,
        expr: String,
    },
    /// Classify expressions from a file, one per line; emits one JSON
    /// object per line.
    Batch { file: String },
}

enum CliError {
    Config(String),
    Unsupported(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(1),
            CliError::Unsupported(_) => ExitCode::from(2),
        }
    }
    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Unsupported(m) => m,
        }
    }
}

fn from_distinction(e: DistinctionError) -> CliError {
    match e {
        DistinctionError::UnsupportedWeight(_)
        | DistinctionError::UnsupportedSplit(_)
        | DistinctionError::WeightMismatch { .. }
        | DistinctionError::Jacquet(JacquetError::UnsupportedPresentation)
        | DistinctionError::Rules(RuleError::UnsupportedWeight(_)) => {
            CliError::Unsupported(e.to_string())
        }
        other => CliError::Config(other.to_string()),
    }
}

fn load_registry(cli: &Cli) -> Result<Registry, CliError> {
    let path = cli
        .support
        .clone()
        .or_else(|| std::env::var("SEGPERIOD_SUPPORT").ok());
    match path {
        None => Ok(Registry::default_registry()),
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| CliError::Config(format!("cannot read support file {p}: {e}")))?;
            Registry::from_toml_str(&text).map_err(|e| CliError::Config(e.to_string()))
        }
    }
}

fn load_rules(cli: &Cli) -> Result<RuleTable, CliError> {
    match &cli.rules {
        None => Ok(RuleTable::default_table()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read rule table {p}: {e}")))?;
            RuleTable::parse(&text).map_err(|e| CliError::Config(e.to_string()))
        }
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Distinguished => "distinguished",
        Status::NotDistinguished => "not_distinguished",
        Status::Inconclusive => "inconclusive",
    }
}

fn verdict_json(input: &str, normalized: &str, v: &Verdict) -> serde_json::Value {
    json!({
        "input": input,
        "normalized": normalized,
        "verdict": status_str(v.status),
        "rules": v.justification.iter().map(|(id, citation)| {
            json!({"id": id, "citation": citation})
        }).collect::<Vec<_>>(),
    })
}

fn classify_expr(
    text: &str,
    induced: bool,
    reg: &Registry,
    table: &RuleTable,
) -> Result<serde_json::Value, CliError> {
    let form = parse_expr(text, reg).map_err(|e| CliError::Config(e.to_string()))?;
    let classifier = Classifier::new(reg, table);
    let (normal, _) = normalize(&form, reg).map_err(|e| CliError::Config(e.to_string()))?;
    let verdict = if induced {
        let factors: Vec<RepForm> = match &form {
            RepForm::Product(fs) => fs.clone(),
            single => vec![single.clone()],
        };
        classifier
            .classify_induced(&factors)
            .map_err(from_distinction)?
    } else {
        classifier.classify(&form).map_err(from_distinction)?
    };
    Ok(verdict_json(text, &format_form(&normal, reg), &verdict))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let reg = load_registry(cli)?;
    let table = load_rules(cli)?;
    let mut out = std::io::stdout().lock();
    let emit = |out: &mut dyn Write, value: &serde_json::Value, plain: String, json_mode: bool| {
        if json_mode {
            writeln!(out, "{value}").expect("stdout");
        } else {
            writeln!(out, "{plain}").expect("stdout");
        }
    };

    match &cli.command {
        Command::Classify { expr, induced } => {
            let value = classify_expr(expr, *induced, &reg, &table)?;
            let plain = format!(
                "{}  [{}]",
                value["verdict"].as_str().unwrap_or(""),
                value["rules"]
                    .as_array()
                    .map(|rules| rules
                        .iter()
                        .map(|r| format!(
                            "{}: {}",
                            r["id"].as_str().unwrap_or(""),
                            r["citation"].as_str().unwrap_or("")
                        ))
                        .collect::<Vec<_>>()
                        .join("; "))
                    .unwrap_or_default()
            );
            emit(&mut out, &value, plain, cli.json);
        }
        Command::Decompose { expr } => {
            let form = parse_expr(expr, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let RepForm::Product(factors) = &form else {
                return Err(CliError::Unsupported(
                    "decompose expects a two-factor product".into(),
                ));
            };
            if factors.len() != 2 {
                return Err(CliError::Unsupported(
                    "decompose expects exactly two factors".into(),
                ));
            }
            let single_seg = |f: &RepForm| match f {
                RepForm::Z(m) if m.len() == 1 => Some((true, m.segments()[0].clone())),
                RepForm::L(m) if m.len() == 1 => Some((false, m.segments()[0].clone())),
                _ => None,
            };
            let (Some((z1, d1)), Some((z2, d2))) =
                (single_seg(&factors[0]), single_seg(&factors[1]))
            else {
                return Err(CliError::Unsupported(
                    "decompose expects single-segment factors".into(),
                ));
            };
            let dec = if z1 && z2 {
                decompose_pair_z(&d1, &d2, &reg)
            } else if !z1 && !z2 {
                decompose_pair_l(&d1, &d2, &reg)
            } else {
                return Err(CliError::Unsupported(
                    "decompose expects both factors in the same presentation".into(),
                ));
            }
            .map_err(|e| CliError::Config(e.to_string()))?;
            let fmt = |f: &Option<RepForm>| f.as_ref().map(|g| format_form(g, &reg));
            let value = json!({
                "input": expr,
                "irreducible": dec.irreducible,
                "sub": fmt(&dec.sub),
                "quotient": fmt(&dec.quotient),
                "subquotients": dec.subquotients.iter().map(|f| format_form(f, &reg)).collect::<Vec<_>>(),
            });
            let plain = if dec.irreducible {
                format!("irreducible: {}", format_form(&dec.subquotients[0], &reg))
            } else {
                let mut s = String::new();
                if let Some(sub) = &dec.sub {
                    s.push_str(&format!("sub: {}\n", format_form(sub, &reg)));
                }
                if let Some(q) = &dec.quotient {
                    s.push_str(&format!("quotient: {}\n", format_form(q, &reg)));
                }
                s.push_str(&format!(
                    "subquotients: {}",
                    dec.subquotients
                        .iter()
                        .map(|f| format_form(f, &reg))
                        .collect::<Vec<_>>()
                        .join(" ; ")
                ));
                s
            };
            emit(&mut out, &value, plain, cli.json);
        }
        Command::Leq { below, above } => {
            let b = parse_multisegment(below, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let a = parse_multisegment(above, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let ans = leq(&b, &a, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            emit(&mut out, &json!({ "leq": ans }), ans.to_string(), cli.json);
        }
        Command::Enumerate { mseg } => {
            let a = parse_multisegment(mseg, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let below = enumerate_below(&a, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let rendered: Vec<String> = below
                .iter()
                .map(|m| format_multisegment(m, &reg))
                .collect();
            emit(
                &mut out,
                &json!({ "count": rendered.len(), "below": rendered }),
                rendered.join("\n"),
                cli.json,
            );
        }
        Command::Dual { mseg } => {
            let m = parse_multisegment(mseg, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let d = mw_dual(&m, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let rendered = format_multisegment(&d, &reg);
            emit(&mut out, &json!({ "dual": rendered }), rendered, cli.json);
        }
        Command::Jacquet { cut, expr } => {
            let form = parse_expr(expr, &reg).map_err(|e| CliError::Config(e.to_string()))?;
            let terms = jacquet_of_form(&form, *cut, &reg).map_err(|e| match e {
                JacquetError::UnsupportedPresentation => CliError::Unsupported(e.to_string()),
                other => CliError::Config(other.to_string()),
            })?;
            let rendered: Vec<serde_json::Value> = terms
                .iter()
                .map(|t| {
                    json!({
                        "left": format_form(&t.left, &reg),
                        "right": format_form(&t.right, &reg),
                        "multiplicity": t.multiplicity,
                    })
                })
                .collect();
            let plain = terms
                .iter()
                .map(|t| {
                    format!(
                        "{} (x) {}  [{}]",
                        format_form(&t.left, &reg),
                        format_form(&t.right, &reg),
                        t.multiplicity
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(&mut out, &json!({ "terms": rendered }), plain, cli.json);
        }
        Command::Batch { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Config(format!("cannot read batch file {file}: {e}")))?;
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let value = match classify_expr(line, false, &reg, &table) {
                    Ok(v) => v,
                    Err(e) => json!({ "input": line, "error": e.message() }),
                };
                writeln!(out, "{value}").expect("stdout");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "segperiod: {}", e.message());
            e.code()
        }
    }
}
