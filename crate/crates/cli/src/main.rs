use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use latin_gct::gamma::{gamma_power_sum_check_with, GammaConfig};
use latin_gct::kronecker::check_corollary35_with;
use latin_gct::latin::{
    signed_tally_checkpointed, signed_tally_with, EnumerationOrder, Reduction, SignedTally,
    TallyOptions,
};
use latin_gct::orbit::{witness_search, WitnessConfig};
use latin_gct::rational::{format_rational, RationalJson};
use latin_gct::tensor::{
    latin_sign_sum_pairing, latin_sign_sum_pairing_tensor, prop20_lhs_full, prop20_lhs_with,
    prop20_rhs, Prop20Report, SymmetrizerConfig, DEFAULT_FULL_CAP, DEFAULT_LATIN_BUDGET,
};
use latin_gct::verify::{verify_all, Outcome, VerifyConfig};
use latin_gct::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "latin-gct", version, about = "Exact experiments on signed Latin rectangles and the determinant orbit closure")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Size cap for the guarded computation of the subcommand.
    #[arg(long, global = true)]
    budget: Option<u128>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append-only progress file for `tally` and `alon-tarsi`.
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Order {
    Rows,
    Columns,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Per-pattern signed counts of Latin (i, m)-rectangles.
    Tally {
        i: usize,
        m: usize,
        #[arg(long, value_enum, default_value_t = Order::Rows)]
        order: Order,
    },
    /// Even minus odd Latin squares of order m.
    AlonTarsi {
        m: usize,
        #[arg(long, value_enum, default_value_t = Order::Rows)]
        order: Order,
        /// Enumerate squares with a fixed first row and rescale.
        #[arg(long)]
        reduced: bool,
    },
    /// Both sides of the symmetrizer pairing identity.
    Prop20 { i: usize, m: usize },
    /// Sign-sum pairing of the symmetrized constant-row tensor.
    SignSum { m: usize },
    /// γ of a power sum against its closed form.
    GammaCheck { m: usize, i: usize },
    /// Search for a restriction of the determinant where γ does not vanish.
    Witness { m: usize, i: usize },
    /// Symmetric Kronecker coefficients for rectangular shapes.
    Kronecker { m: usize, d: usize },
    /// Every check for one even m.
    VerifyAll {
        m: usize,
        /// Random samples for the sampled checks.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// What a subcommand produced: the JSON body, a CSV table and a verdict.
struct Report {
    body: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    passed: bool,
}

impl Report {
    fn single(body: Value, passed: bool) -> Self {
        let (header, row) = match &body {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| (k.clone(), scalar(v)))
                .unzip(),
            other => (vec!["value".into()], vec![scalar(other)]),
        };
        Report {
            body,
            header,
            rows: vec![row],
            passed,
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(map) if map.len() == 2 && map.contains_key("num") && map.contains_key("den") => {
            let num = map["num"].as_str().unwrap_or_default();
            let den = map["den"].as_str().unwrap_or_default();
            if den == "1" {
                num.to_string()
            } else {
                format!("{num}/{den}")
            }
        }
        other => other.to_string(),
    }
}

fn rational(r: &latin_gct::Rational) -> Value {
    serde_json::to_value(RationalJson::from(r)).expect("serializable")
}

fn order_options(order: Order) -> TallyOptions {
    TallyOptions {
        order: match order {
            Order::Rows => EnumerationOrder::RowByRow,
            Order::Columns => EnumerationOrder::ColumnByColumn,
        },
        ..TallyOptions::default()
    }
}

fn tally(cli: &Cli, i: usize, m: usize, options: &TallyOptions) -> Result<SignedTally> {
    match &cli.checkpoint {
        Some(path) => signed_tally_checkpointed(i, m, options, path),
        None => signed_tally_with(i, m, options),
    }
}

fn gamma_config(cli: &Cli) -> GammaConfig {
    cli.budget
        .map(|det_budget| GammaConfig { det_budget })
        .unwrap_or_default()
}

fn run(cli: &Cli) -> Result<Report> {
    match cli.command {
        Command::Tally { i, m, order } => {
            let t = tally(cli, i, m, &order_options(order))?;
            let json = t.to_json();
            let rows = json
                .patterns
                .iter()
                .map(|p| {
                    let pattern: Vec<String> = p
                        .pattern
                        .iter()
                        .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
                        .collect();
                    vec![pattern.join("|"), p.plus.clone(), p.minus.clone()]
                })
                .collect();
            Ok(Report {
                body: serde_json::to_value(&json)?,
                header: vec!["pattern".into(), "plus".into(), "minus".into()],
                rows,
                passed: true,
            })
        }
        Command::AlonTarsi { m, order, reduced } => {
            let options = TallyOptions {
                reduction: if reduced {
                    Reduction::FirstRowFixed
                } else {
                    Reduction::None
                },
                ..order_options(order)
            };
            let t = tally(cli, m, m, &options)?;
            Ok(Report::single(
                json!({
                    "m": m,
                    "even": t.plus_total().to_string(),
                    "odd": t.minus_total().to_string(),
                    "difference": t.signed_sum().to_string(),
                }),
                true,
            ))
        }
        Command::Prop20 { i, m } => {
            let lhs = prop20_lhs_with(i, m, cli.budget.unwrap_or(DEFAULT_LATIN_BUDGET))?;
            let rhs = prop20_rhs(i, m)?;
            let lhs_full = match prop20_lhs_full(i, m, DEFAULT_FULL_CAP) {
                Ok(v) => Some(v),
                Err(e) if e.is_infeasible() => None,
                Err(e) => return Err(e),
            };
            let report = Prop20Report {
                i,
                m,
                lhs,
                rhs,
                lhs_full,
            };
            Ok(Report::single(serde_json::to_value(report.to_json())?, report.passed()))
        }
        Command::SignSum { m } => {
            let pairing = latin_sign_sum_pairing(m)?;
            let difference = tally(cli, m, m, &TallyOptions::default())?.signed_sum();
            let tensor = if m <= 4 {
                Some(latin_sign_sum_pairing_tensor(m, &SymmetrizerConfig::default())?)
            } else {
                None
            };
            let agree = pairing == difference
                && tensor
                    .as_ref()
                    .is_none_or(|t| *t == latin_gct::Rational::from_integer(pairing.clone()));
            Ok(Report::single(
                json!({
                    "m": m,
                    "pairing": pairing.to_string(),
                    "difference": difference.to_string(),
                    "tensor_route": tensor.as_ref().map(format_rational),
                    "agree": agree,
                }),
                agree,
            ))
        }
        Command::GammaCheck { m, i } => {
            let r = gamma_power_sum_check_with(m, i, &gamma_config(cli))?;
            Ok(Report::single(
                json!({
                    "m": m,
                    "i": i,
                    "computed": rational(&r.computed),
                    "closed_form": rational(&r.closed_form),
                    "passed": r.passed(),
                }),
                r.passed(),
            ))
        }
        Command::Witness { m, i } => {
            let config = WitnessConfig {
                seed: cli.seed,
                gamma: gamma_config(cli),
                ..WitnessConfig::default()
            };
            match witness_search(m, i, &config)? {
                Some(w) => {
                    let json = w.to_json();
                    let a: Vec<String> = json.a.iter().map(|r| r.join(" ")).collect();
                    let mut report = Report::single(serde_json::to_value(&json)?, true);
                    report.header = vec!["m".into(), "i".into(), "A".into(), "gamma".into(), "schedule_index".into(), "seed".into()];
                    report.rows = vec![vec![
                        m.to_string(),
                        i.to_string(),
                        a.join("|"),
                        format_rational(&w.gamma),
                        w.schedule_index.to_string(),
                        w.seed.to_string(),
                    ]];
                    Ok(report)
                }
                None => Ok(Report::single(
                    json!({"m": m, "i": i, "found": false, "seed": cli.seed}),
                    false,
                )),
            }
        }
        Command::Kronecker { m, d } => {
            let cap = cli.budget.map_or(latin_gct::kronecker::DEFAULT_TABLE_BUDGET, |b| b as usize);
            let r = check_corollary35_with(m, d, cap)?;
            let json = r.to_json();
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            Ok(Report {
                rows: json
                    .iter()
                    .map(|e| {
                        vec![
                            join(&e.lambda_bar),
                            join(&e.m_lambda_bar),
                            e.sk.clone(),
                            e.positive.to_string(),
                        ]
                    })
                    .collect(),
                body: serde_json::to_value(&json)?,
                header: ["lambda_bar", "m_lambda_bar", "sk", "positive"].map(String::from).to_vec(),
                passed: r.passed(),
            })
        }
        Command::VerifyAll { m, samples } => {
            let config = VerifyConfig {
                seed: cli.seed,
                samples,
                gamma: gamma_config(cli),
            };
            let r = verify_all(m, &config)?;
            for c in &r.checks {
                let verdict = match c.outcome {
                    Outcome::Pass => "PASS",
                    Outcome::Fail => "FAIL",
                    Outcome::Skipped => "SKIP",
                };
                eprintln!("{verdict} {}: {}", c.name, c.detail);
            }
            Ok(Report {
                rows: r
                    .checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.clone(),
                            scalar(&serde_json::to_value(c.outcome).expect("serializable")),
                            c.detail.clone(),
                        ]
                    })
                    .collect(),
                body: serde_json::to_value(&r)?,
                header: vec!["check".into(), "outcome".into(), "detail".into()],
                passed: r.passed(),
            })
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Tally { .. } => "tally",
        Command::AlonTarsi { .. } => "alon-tarsi",
        Command::Prop20 { .. } => "prop20",
        Command::SignSum { .. } => "sign-sum",
        Command::GammaCheck { .. } => "gamma-check",
        Command::Witness { .. } => "witness",
        Command::Kronecker { .. } => "kronecker",
        Command::VerifyAll { .. } => "verify-all",
    }
}

fn render(cli: &Cli, report: &Report) -> Result<String> {
    match cli.format {
        Format::Json => {
            let envelope = json!({
                "command": command_name(&cli.command),
                "seed": cli.seed,
                "passed": report.passed,
                "result": report.body,
            });
            Ok(serde_json::to_string_pretty(&envelope)? + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Internal(e.to_string());
            w.write_record(&report.header).map_err(csv_err)?;
            for row in &report.rows {
                w.write_record(row).map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn error_exit(kind: &str, message: &str, code: u8) -> ExitCode {
    let body = json!({"error": {"kind": kind, "message": message}});
    println!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
    ExitCode::from(code)
}

fn classify(e: &Error) -> (&'static str, u8) {
    if e.is_infeasible() {
        ("infeasible", 2)
    } else if e.is_internal() {
        ("internal", 1)
    } else if matches!(e, Error::Io(_)) {
        ("io", 3)
    } else {
        ("input", 3)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return error_exit("input", e.to_string().trim(), 3),
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return error_exit("input", "--threads must be positive", 3);
        }
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return error_exit("internal", &e.to_string(), 1),
    };
    if cli.budget == Some(0) {
        return error_exit("input", "--budget must be positive", 3);
    }
    let outcome = pool.install(|| run(&cli).and_then(|r| Ok((render(&cli, &r)?, r.passed))));
    match outcome {
        Ok((text, passed)) => {
            if let Err(e) = emit(&cli, &text) {
                return error_exit("io", &e.to_string(), 3);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let (kind, code) = classify(&e);
            error_exit(kind, &e.to_string(), code)
        }
    }
}
