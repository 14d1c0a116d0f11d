//! `infocoh`: batch front end for the information-cohomology library.
//!
//! Exit status is 0 on success or PASS, 1 on a FAIL verdict and 2 on any
//! input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use infocoh::asymptotics::{default_sizes, entropy_limit_check};
use infocoh::cohomology::{
    classify_cocycle, cocycle_check, comb_feith_solve, extract_sequence, nondegenerate_witness, prob_cocycle_check,
    CombCochain, ProbCochain,
};
use infocoh::fontene_ward::{fw_multinomial, AdmissibleSequence, BinomialTable};
use infocoh::functionals::{chain_rule_residual, entropy_f64, ProbFamily, ProbabilityLaw};
use infocoh::rational::{format_rational, parse_rational_list, parse_real};
use infocoh::structure::{validate, InformationStructure, RawStructure, VarId};
use infocoh::{CohomologyError, StructureError};

#[derive(Parser)]
#[command(name = "infocoh", version, about = "Information cohomology with Fontené-Ward coefficients")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of an information structure file.
    Validate { structure: PathBuf },
    /// Fontené-Ward multinomial coefficient of the given parts.
    Coeff {
        #[arg(long)]
        seq: String,
        #[arg(long, value_delimiter = ',')]
        parts: Vec<u32>,
    },
    /// Exhaustive cocycle check up to a magnitude (or denominator) bound.
    CocycleCheck {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        bound: u32,
        /// Treat the cochain as probabilistic with this α-action.
        #[arg(long)]
        alpha: Option<String>,
    },
    /// Solve the combinatorial FEITH for a binomial table.
    FeithSolve {
        #[arg(long)]
        table: PathBuf,
    },
    /// Search for a nondegeneracy witness of the product XY.
    Nondeg {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Read the admissible sequence of a 1-cocycle off a nondegenerate product.
    Extract {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        bound: u32,
        /// Defaults to the first declared nondegenerate product.
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// One admissible sequence per connected component, plus the coboundary flag.
    Classify {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        bound: u32,
    },
    /// Certify ln W_D(ν_n)/n^α → c·S_α(p).
    Asymptote {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "0.01")]
        tol: String,
        /// Sample sizes; defaults to powers of two capped by α.
        #[arg(long, value_delimiter = ',')]
        ns: Option<Vec<u32>>,
        /// Also write the samples as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Tsallis (Shannon for α = 1) entropy of a law.
    Entropy {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        p: String,
    },
    /// Largest α-chain rule residual of S_α over all pairs below a variable.
    ChainResidual {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        structure: PathBuf,
        /// Law in outcome order of `--variable`.
        #[arg(long)]
        p: String,
        /// Defaults to the finest variable.
        #[arg(long)]
        variable: Option<String>,
    },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

enum Report {
    Pass { json: Value, text: String },
    Fail { json: Value, text: String },
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<InformationStructure, InputError> {
    Ok(InformationStructure::from_json(&read(path)?)?)
}

fn lookup(s: &InformationStructure, id: &str) -> Result<VarId, InputError> {
    Ok(s.lookup(id)?)
}

fn rationals(text: &str) -> Result<Vec<BigRational>, InputError> {
    Ok(parse_rational_list(text)?)
}

fn terms(d: &AdmissibleSequence, n: usize) -> Result<Vec<String>, InputError> {
    (1..=n).map(|i| Ok(d.term(i)?.to_string())).collect()
}

/// Verdict-level failures of the cohomology checks; anything else is an input error.
fn is_verdict(e: &CohomologyError) -> bool {
    matches!(
        e,
        CohomologyError::BoundaryViolation { .. }
            | CohomologyError::SymmetryViolation { .. }
            | CohomologyError::FunctionalEquationViolation { .. }
            | CohomologyError::NotACocycle(_)
            | CohomologyError::DegenerateProduct(..)
            | CohomologyError::NoNondegenerateProduct(_)
            | CohomologyError::Fw(infocoh::FwError::InconsistentTable { .. })
    )
}

fn verdict_failure(e: CohomologyError) -> Result<Report, InputError> {
    if !is_verdict(&e) {
        return Err(InputError(e.to_string()));
    }
    let witness = match &e {
        CohomologyError::FunctionalEquationViolation { triple, lhs, rhs } => {
            json!({ "triple": [triple.0, triple.1, triple.2], "lhs": lhs, "rhs": rhs })
        }
        _ => Value::Null,
    };
    let mut body = json!({ "status": "FAIL", "reason": e.to_string() });
    if !witness.is_null() {
        body["witness"] = witness;
    }
    Ok(Report::Fail {
        json: body,
        text: format!("FAIL: {e}"),
    })
}

fn verdict_report(v: Value, what: &str) -> Report {
    let text = if v["status"] == "PASS" {
        format!("PASS: {what}")
    } else {
        format!("FAIL: {what}\nwitness: {}", v["witness"])
    };
    if v["status"] == "PASS" {
        Report::Pass { json: v, text }
    } else {
        Report::Fail { json: v, text }
    }
}

fn run(cmd: Command) -> Result<Report, InputError> {
    match cmd {
        Command::Validate { structure } => {
            let raw = RawStructure::from_json(&read(&structure)?)?;
            match validate(&raw) {
                Ok(s) => {
                    let comps = s.component_names();
                    Ok(Report::Pass {
                        json: json!({
                            "status": "PASS",
                            "variables": s.variables().len(),
                            "components": comps,
                        }),
                        text: format!("valid: {} variables, {} component(s)", s.variables().len(), comps.len()),
                    })
                }
                Err(StructureError::Invalid(vs)) => Ok(Report::Fail {
                    text: format!(
                        "invalid:\n{}",
                        vs.iter().map(|v| format!("  - {v}")).collect::<Vec<_>>().join("\n")
                    ),
                    json: json!({ "status": "FAIL", "violations": vs }),
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Coeff { seq, parts } => {
            let d: AdmissibleSequence = seq.parse()?;
            let v = fw_multinomial(&d, &parts)?;
            Ok(Report::Pass {
                json: json!({ "sequence": d.tag(), "parts": parts, "value": v.to_string(), "ln": v.ln() }),
                text: v.to_string(),
            })
        }
        Command::CocycleCheck {
            structure,
            cochain,
            bound,
            alpha,
        } => {
            let s = load_structure(&structure)?;
            let text = read(&cochain)?;
            let v = match alpha {
                Some(a) => {
                    let phi = ProbCochain::from_json(&text)?;
                    serde_json::to_value(prob_cocycle_check(&s, &phi, parse_real(&a)?, bound)?)?
                }
                None => {
                    let psi = CombCochain::from_json(&s, &text)?;
                    serde_json::to_value(cocycle_check(&s, &psi, bound)?)?
                }
            };
            Ok(verdict_report(v, &format!("cocycle up to bound {bound}")))
        }
        Command::FeithSolve { table } => {
            let value: Value = serde_json::from_str(&read(&table)?)?;
            let (f1, f2) = match value {
                Value::Object(mut m) => {
                    let mut take = |k: &str| {
                        m.remove(k)
                            .ok_or_else(|| InputError(format!("table object needs `{k}`")))
                            .and_then(|v| Ok(BinomialTable::from_json_value(v)?))
                    };
                    (take("f1")?, take("f2")?)
                }
                v => {
                    let t = BinomialTable::from_json_value(v)?;
                    (t.clone(), t)
                }
            };
            match comb_feith_solve(&f1, &f2) {
                Ok(d) => {
                    let n = f1.max_total().min(f2.max_total()) as usize;
                    let seq = terms(&d, n)?;
                    Ok(Report::Pass {
                        text: format!("D = ({})", seq.join(", ")),
                        json: json!({ "status": "PASS", "sequence": seq }),
                    })
                }
                Err(e) => verdict_failure(e),
            }
        }
        Command::Nondeg { structure, x, y } => {
            let s = load_structure(&structure)?;
            match nondegenerate_witness(&s, lookup(&s, &x)?, lookup(&s, &y)?)? {
                Some(w) => Ok(Report::Pass {
                    text: format!(
                        "nondegenerate\n  {x}: {}\n  {y}: {}\n  path: {:?}",
                        w.x_order.join(" "),
                        w.y_order.join(" "),
                        w.path
                    ),
                    json: json!({ "status": "PASS", "witness": w }),
                }),
                None => Ok(Report::Fail {
                    text: "NotFound: no enumeration and path satisfy both conditions".into(),
                    json: json!({ "status": "FAIL", "result": "NotFound" }),
                }),
            }
        }
        Command::Extract {
            structure,
            cochain,
            bound,
            x,
            y,
        } => {
            let s = load_structure(&structure)?;
            let psi = CombCochain::from_json(&s, &read(&cochain)?)?;
            let (x, y) = match (x, y) {
                (Some(x), Some(y)) => (lookup(&s, &x)?, lookup(&s, &y)?),
                _ => {
                    let mut found = None;
                    for (l, r, _) in s.products() {
                        if nondegenerate_witness(&s, l, r)?.is_some() {
                            found = Some((l, r));
                            break;
                        }
                    }
                    found.ok_or_else(|| InputError("no nondegenerate product in the structure".into()))?
                }
            };
            match extract_sequence(&s, &psi, x, y, bound) {
                Ok(d) => {
                    let seq = terms(&d, bound as usize)?;
                    Ok(Report::Pass {
                        text: format!("D = ({})", seq.join(", ")),
                        json: json!({
                            "status": "PASS",
                            "product": [s.name(x), s.name(y)],
                            "sequence": seq,
                        }),
                    })
                }
                Err(e) => verdict_failure(e),
            }
        }
        Command::Classify {
            structure,
            cochain,
            bound,
        } => {
            let s = load_structure(&structure)?;
            let psi = CombCochain::from_json(&s, &read(&cochain)?)?;
            match classify_cocycle(&s, &psi, bound) {
                Ok(c) => {
                    let mut text = String::new();
                    for comp in &c.components {
                        text.push_str(&format!("{{{}}}: D = ({})\n", comp.variables.join(", "), comp.terms.join(", ")));
                    }
                    text.push_str(&format!("coboundary: {}", c.coboundary));
                    let mut v = serde_json::to_value(&c)?;
                    v["status"] = json!("PASS");
                    Ok(Report::Pass { json: v, text })
                }
                Err(e) => verdict_failure(e),
            }
        }
        Command::Asymptote {
            seq,
            p,
            alpha,
            tol,
            ns,
            csv,
        } => {
            let d: AdmissibleSequence = seq.parse()?;
            let alpha = parse_real(&alpha)?;
            let ns = ns.unwrap_or_else(|| default_sizes(alpha));
            let rep = entropy_limit_check(&d, alpha, &rationals(&p)?, parse_real(&tol)?, &ns)?;
            if let Some(path) = csv {
                let mut out = String::from("n,value\n");
                for (n, v) in &rep.samples {
                    out.push_str(&format!("{n},{v}\n"));
                }
                std::fs::write(&path, out).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            }
            let text = format!(
                "{}: limit {:.6} target {:.6} certificate {:.2e}",
                if rep.passed() { "PASS" } else { "FAIL" },
                rep.limit,
                rep.target,
                rep.certificate
            );
            let json = serde_json::to_value(&rep)?;
            Ok(if rep.passed() { Report::Pass { json, text } } else { Report::Fail { json, text } })
        }
        Command::Entropy { alpha, p } => {
            let a = parse_real(&alpha)?;
            if !(a > 0.0) {
                return Err(InputError("alpha must be positive".into()));
            }
            let p = rationals(&p)?;
            let total: BigRational = p.iter().sum();
            if p.iter().any(|w| w < &BigRational::from_integer(0.into())) || total != BigRational::from_integer(1.into())
            {
                return Err(InputError("p must be a probability vector".into()));
            }
            let value = entropy_f64(a, p.iter().map(|w| num_traits::ToPrimitive::to_f64(w).unwrap_or(0.0)));
            Ok(Report::Pass {
                json: json!({ "alpha": a, "p": p.iter().map(format_rational).collect::<Vec<_>>(), "entropy": value }),
                text: format!("{value}"),
            })
        }
        Command::ChainResidual {
            alpha,
            structure,
            p,
            variable,
        } => {
            let s = load_structure(&structure)?;
            let a = parse_real(&alpha)?;
            let x = match variable {
                Some(v) => lookup(&s, &v)?,
                None => s
                    .var_ids()
                    .find(|&v| s.var_ids().all(|w| s.refines(v, w)))
                    .ok_or_else(|| InputError("no finest variable; pass --variable".into()))?,
            };
            let law = ProbabilityLaw::new(&s, x, rationals(&p)?)?;
            let phi = ProbFamily::entropy(a);
            let mut worst = (0.0f64, String::new(), String::new());
            for y in s.coarser(x) {
                for z in s.coarser(x) {
                    if s.meet_id(y, z).is_none() {
                        continue;
                    }
                    let r = chain_rule_residual(&s, a, (y, z), &phi, &law)?.abs();
                    if r > worst.0 || worst.1.is_empty() {
                        worst = (r.max(worst.0), s.name(y).to_string(), s.name(z).to_string());
                    }
                }
            }
            let pass = worst.0 < infocoh::cohomology::PROB_TOLERANCE;
            let json = json!({
                "status": if pass { "PASS" } else { "FAIL" },
                "variable": s.name(x),
                "residual": worst.0,
                "worst_pair": [worst.1, worst.2],
            });
            let text = format!("max residual {:.3e} at ({}, {})", worst.0, worst.1, worst.2);
            Ok(if pass { Report::Pass { json, text } } else { Report::Fail { json, text } })
        }
    }
}

fn configure_threads() -> Result<(), InputError> {
    if let Ok(v) = std::env::var("INFOCOH_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("INFOCOH_THREADS must be a positive integer, got `{v}`")))?;
        if n == 0 {
            return Err(InputError("INFOCOH_THREADS must be a positive integer, got `0`".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("usage error");
            eprintln!("infocoh: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    if let Err(InputError(msg)) = configure_threads() {
        eprintln!("infocoh: {msg}");
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(report) => {
            let (json, text, code) = match report {
                Report::Pass { json, text } => (json, text, 0),
                Report::Fail { json, text } => (json, text, 1),
            };
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json).expect("serializable"));
            } else {
                println!("{text}");
            }
            ExitCode::from(code)
        }
        Err(InputError(msg)) => {
            eprintln!("infocoh: {}", msg.lines().map(str::trim).collect::<Vec<_>>().join("; "));
            ExitCode::from(2)
        }
    }
}
