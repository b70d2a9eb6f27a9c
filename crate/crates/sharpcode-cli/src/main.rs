//! Command-line front end: catalog listing, point export, quadrature rule
//! construction, bound verification, and batch table reproduction.
//!
//! Exit codes: 0 on success (including a bound explicitly refused because
//! its multiplicities are not integers), 1 on verification failure, 2 on
//! usage errors.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sharpcode::codes::{build_code, catalog_names};
use sharpcode::error::Error;
use sharpcode::potentials::Potential;
use sharpcode::quadrature::{self, verify_exactness, QuadratureRule};
use sharpcode::report::{self, expression_string, RowStatus, TableReport, TableRow};
use sharpcode::verify::{attainment_check, energy, BoundReport, CheckConfig, Level, ScanMode};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sharpcode",
    version,
    about = "Sharp spherical codes and universal bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog operations.
    Codes {
        #[command(subcommand)]
        action: CodesAction,
    },
    /// Reproduce one of the four bound tables across the catalog.
    Tables {
        /// Which table: 1 energy, 2 first-level case (i), 3 second level,
        /// 4 first-level case (ii).
        which: u8,
        /// Kernel spec: `riesz:<s>`, `log`, `exp:<a>`, `dist`, `trunc_exp:<a>`.
        #[arg(long = "h")]
        potential: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Verify one bound at its universal-minimum witness.
    Verify {
        code: String,
        #[arg(long)]
        level: String,
        #[arg(long = "h", default_value = "riesz:1")]
        potential: String,
        /// Empirical minimization restarts (0 = skip the search).
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Construct a quadrature rule and print nodes/weights.
    Quadrature {
        /// gauss | pulb_i | pulb_ii | levenshtein | skip1add2
        kind: String,
        #[arg(long)]
        n: usize,
        /// Strength tau (pulb_i, pulb_ii, levenshtein).
        #[arg(long)]
        tau: Option<usize>,
        /// Half-strength k (gauss, skip1add2).
        #[arg(long)]
        k: Option<usize>,
        /// Cardinality N (levenshtein).
        #[arg(long)]
        cardinality: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Export the points of a catalog code.
    Export {
        code: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: String,
    },
    /// Run the h-energy of a code against its universal lower bound.
    Energy {
        code: String,
        #[arg(long = "h", default_value = "riesz:2")]
        potential: String,
        /// full | sampled
        #[arg(long, default_value = "full")]
        mode: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Subcommand)]
enum CodesAction {
    /// List every catalog name with its parameters.
    List,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnknownCode(_) | Error::InvalidArgument(_) | Error::BadPotentialSpec(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Codes {
            action: CodesAction::List,
        } => {
            for name in catalog_names() {
                let code = build_code(name)?;
                println!(
                    "{:<20} n={:<3} N={:<7} strength={}",
                    name,
                    code.n,
                    code.cardinality(),
                    code.strength
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tables {
            which,
            potential,
            format,
            out,
        } => {
            let default = match which {
                1 => "riesz:2",
                4 => "dist",
                _ => "riesz:1",
            };
            let h = Potential::parse(potential.as_deref().unwrap_or(default))?;
            let table = tables(which, &h)?;
            emit(&table, format, out.as_deref(), render_table_text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            code,
            level,
            potential,
            restarts,
            seed,
            format,
            out,
        } => {
            let code = build_code(&code)?;
            let level = Level::parse(&level)?;
            let h = Potential::parse(&potential)?;
            let cfg = CheckConfig { restarts, seed };
            match attainment_check(&code, level, &h, &cfg) {
                Ok(report) => {
                    let attained = report.attained;
                    let doc = Envelope {
                        schema: report::SCHEMA,
                        status: if attained { "attained" } else { "not_attained" },
                        reason: None,
                        report: Some(report),
                    };
                    emit(&doc, format, out.as_deref(), render_verify_text)?;
                    Ok(if attained {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    })
                }
                Err(Error::LevelNotAttained {
                    code,
                    level,
                    reason,
                }) => {
                    let doc = Envelope {
                        schema: report::SCHEMA,
                        status: "refused",
                        reason: Some(format!(
                            "{code} does not attain the {level} bound: {reason}"
                        )),
                        report: None,
                    };
                    emit(&doc, format, out.as_deref(), render_verify_text)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => Err(e),
            }
        }
        Command::Quadrature {
            kind,
            n,
            tau,
            k,
            cardinality,
            format,
            out,
        } => {
            let rule = build_rule(&kind, n, tau, k, cardinality)?;
            let residual = verify_exactness(&rule, true);
            let doc = report::RuleReport {
                schema: report::SCHEMA,
                rule: &rule,
                exactness_residual: residual,
            };
            emit(&doc, format, out.as_deref(), |d| {
                render_rule_text(d.rule, d.exactness_residual)
            })?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { code, format, out } => {
            let code = build_code(&code)?;
            let body = match format {
                Format::Csv | Format::Text => code.export_csv(),
                Format::Json => code.export_json(),
            };
            std::fs::write(&out, body)?;
            eprintln!("wrote {} points to {out}", code.cardinality());
            Ok(ExitCode::SUCCESS)
        }
        Command::Energy {
            code,
            potential,
            mode,
            format,
            out,
        } => {
            let code = build_code(&code)?;
            let h = Potential::parse(&potential)?;
            let mode = match mode.as_str() {
                "full" => ScanMode::Full,
                "sampled" => ScanMode::Sampled(20),
                other => return Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
            };
            let rule =
                quadrature::levenshtein_1_over_n(code.n, code.cardinality() as f64, code.strength)?;
            let num = code.cardinality() as f64;
            let bound_per_point: f64 = rule.interior().map(|(x, w)| num * w * h.value(x)).sum();
            let report = energy(&code, &h, mode)?;
            let doc = EnergyEnvelope {
                schema: report::SCHEMA,
                code: code.name.clone(),
                potential: h.spec().to_string(),
                per_point: report.per_point,
                total: report.total,
                bound_per_point,
                relative_gap: (report.per_point - bound_per_point).abs()
                    / bound_per_point.abs().max(1.0),
            };
            emit(&doc, format, out.as_deref(), |d| {
                format!(
                    "{}  E/N = {:.12e}  bound/N = {:.12e}  gap = {:.3e}\n",
                    d.code, d.per_point, d.bound_per_point, d.relative_gap
                )
            })?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct Envelope {
    schema: &'static str,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<BoundReport>,
}

#[derive(Serialize)]
struct EnergyEnvelope {
    schema: &'static str,
    code: String,
    potential: String,
    per_point: f64,
    total: f64,
    bound_per_point: f64,
    relative_gap: f64,
}

fn emit<T: Serialize>(
    doc: &T,
    format: Format,
    out: Option<&str>,
    text: impl Fn(&T) -> String,
) -> Result<(), Error> {
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text | Format::Csv => text(doc),
    };
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn render_verify_text(doc: &Envelope) -> String {
    match (&doc.report, &doc.reason) {
        (Some(r), _) => format!(
            "{} level={} h={} bound={:.12e} witness={:.12e} gap={:.3e} attained={}\n",
            r.code, r.level, r.potential, r.bound, r.witness_value, r.relative_gap, r.attained
        ),
        (None, Some(reason)) => format!("refused: {reason}\n"),
        _ => String::new(),
    }
}

fn render_rule_text(rule: &QuadratureRule, residual: f64) -> String {
    let mut s = format!(
        "kind={} n={} exact on {:?} residual={:.3e}\n",
        rule.kind.as_str(),
        rule.n,
        rule.exact_on.to_vec(),
        residual
    );
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        s.push_str(&format!("  node {x:+.16e}   weight {w:.16e}\n"));
    }
    s
}

fn render_table_text(t: &TableReport) -> String {
    let mut s = format!("table {} under h = {}\n", t.table, t.potential);
    for row in &t.rows {
        let status = match &row.status {
            RowStatus::Attained => "attained".to_string(),
            RowStatus::EnergyBound => "energy bound".to_string(),
            RowStatus::NotAttainedAtThisLevel { reason } => format!("not attained: {reason}"),
            RowStatus::Failed { reason } => format!("FAILED: {reason}"),
        };
        s.push_str(&format!(
            "{:<20} ({:>2},{:>6},{:>2})  {:+.12e}  [{status}]\n    = {}\n",
            row.code, row.n, row.cardinality, row.strength, row.value, row.expression
        ));
    }
    s
}

fn build_rule(
    kind: &str,
    n: usize,
    tau: Option<usize>,
    k: Option<usize>,
    cardinality: Option<f64>,
) -> Result<QuadratureRule, Error> {
    let need_tau = || tau.ok_or_else(|| Error::InvalidArgument("--tau required".into()));
    let need_k = || k.ok_or_else(|| Error::InvalidArgument("--k required".into()));
    match kind {
        "gauss" => quadrature::gauss(n, need_k()?),
        "pulb_i" => quadrature::pulb_case_i(n, need_tau()?),
        "pulb_ii" => quadrature::pulb_case_ii(n, need_tau()?),
        "levenshtein" => {
            let big_n = cardinality
                .ok_or_else(|| Error::InvalidArgument("--cardinality required".into()))?;
            quadrature::levenshtein_1_over_n(n, big_n, need_tau()?)
        }
        "skip1add2" => quadrature::skip1add2(n, need_k()?),
        other => Err(Error::InvalidArgument(format!(
            "unknown rule kind '{other}'"
        ))),
    }
}

/// Rows mirroring the published tables, in catalog order.
fn table_codes(which: u8) -> Result<Vec<&'static str>, Error> {
    Ok(match which {
        1 => vec![
            "ngon(6)",
            "ngon(7)",
            "simplex(4)",
            "cross_polytope(4)",
            "icosahedron",
            "c_5_16_3",
            "c_6_27_4",
            "c_7_56_5",
            "e8_240",
            "c_21_112_3",
            "c_21_162_3",
            "c_22_100_3",
            "c_22_275_4",
            "c_22_891_5",
            "c_23_552_5",
            "c_23_4600_7",
            "leech_196560",
        ],
        2 => vec![
            "ngon(6)",
            "ngon(7)",
            "simplex(4)",
            "cross_polytope(4)",
            "cube",
            "icosahedron",
            "c_5_16_3",
            "c_6_27_4",
            "c_7_56_5",
            "e8_240",
            "c_21_112_3",
            "c_21_162_3",
            "c_22_100_3",
            "c_22_275_4",
            "c_22_891_5",
            "c_23_552_5",
            "c_23_4600_7",
            "leech_196560",
        ],
        3 => vec!["icosahedron", "dodecahedron", "e8_240", "leech_196560"],
        4 => vec![
            "ngon(6)",
            "ngon(7)",
            "simplex(4)",
            "cross_polytope(4)",
            "icosahedron",
            "c_5_16_3",
            "c_6_27_4",
            "c_7_56_5",
            "e8_240",
            "c_21_112_3",
            "c_21_162_3",
            "c_22_100_3",
            "c_22_275_4",
            "c_22_891_5",
            "c_23_552_5",
            "c_23_4600_7",
            "leech_196560",
            "cell_600",
        ],
        other => {
            return Err(Error::InvalidArgument(format!(
                "table must be 1..4, got {other}"
            )))
        }
    })
}

fn tables(which: u8, h: &Potential) -> Result<TableReport, Error> {
    let mut rows = Vec::new();
    for name in table_codes(which)? {
        let code = build_code(name)?;
        let num = code.cardinality() as f64;
        let row = match which {
            1 => {
                let rule = quadrature::levenshtein_1_over_n(code.n, num, code.strength)?;
                let (nodes, mult): (Vec<f64>, Vec<f64>) =
                    rule.interior().map(|(x, w)| (x, w * num)).unzip();
                let value: f64 = nodes.iter().zip(&mult).map(|(x, m)| m * h.value(*x)).sum();
                TableRow {
                    code: code.name.clone(),
                    n: code.n,
                    cardinality: code.cardinality(),
                    strength: code.strength,
                    rule_kind: rule.kind.as_str().to_string(),
                    expression: expression_string(&nodes, &mult),
                    nodes,
                    multiplicities: mult,
                    value,
                    status: RowStatus::EnergyBound,
                }
            }
            _ => {
                let level = match which {
                    2 => Level::FirstI,
                    3 => Level::Second,
                    _ => {
                        if name == "cell_600" {
                            Level::Cell600
                        } else {
                            Level::FirstII
                        }
                    }
                };
                bound_row(&code, level, h)?
            }
        };
        rows.push(row);
    }
    Ok(TableReport {
        schema: report::SCHEMA,
        table: which,
        potential: h.spec().to_string(),
        rows,
    })
}

fn bound_row(
    code: &sharpcode::codes::SphericalCode,
    level: Level,
    h: &Potential,
) -> Result<TableRow, Error> {
    let base = |nodes: Vec<f64>, mult: Vec<f64>, value: f64, status: RowStatus| TableRow {
        code: code.name.clone(),
        n: code.n,
        cardinality: code.cardinality(),
        strength: code.strength,
        rule_kind: match level {
            Level::FirstI => "pulb_i",
            Level::FirstII => "pulb_ii",
            Level::Second => "skip1add2",
            Level::Cell600 => "cell600",
        }
        .to_string(),
        expression: expression_string(&nodes, &mult),
        nodes,
        multiplicities: mult,
        value,
        status,
    };
    match attainment_check(code, level, h, &CheckConfig::default()) {
        Ok(r) => {
            let status = if r.attained {
                RowStatus::Attained
            } else {
                RowStatus::Failed {
                    reason: format!("relative gap {:.3e} at the witness", r.relative_gap),
                }
            };
            Ok(base(r.nodes, r.multiplicities, r.bound, status))
        }
        Err(Error::LevelNotAttained { reason, .. }) => {
            // Still print the rule data for the row.
            let (_, nodes, weights) = sharpcode::verify::level_rule(code, level)?;
            let num = code.cardinality() as f64;
            let mult: Vec<f64> = weights.iter().map(|w| w * num).collect();
            let value: f64 = nodes.iter().zip(&mult).map(|(x, m)| m * h.value(*x)).sum();
            Ok(base(
                nodes,
                mult,
                value,
                RowStatus::NotAttainedAtThisLevel { reason },
            ))
        }
        Err(Error::InvalidArgument(reason)) => {
            let (_, nodes, weights) = sharpcode::verify::level_rule(code, level)?;
            let num = code.cardinality() as f64;
            let mult: Vec<f64> = weights.iter().map(|w| w * num).collect();
            let value: f64 = nodes.iter().zip(&mult).map(|(x, m)| m * h.value(*x)).sum();
            Ok(base(
                nodes,
                mult,
                value,
                RowStatus::NotAttainedAtThisLevel {
                    reason: format!("kernel not admissible: {reason}"),
                },
            ))
        }
        Err(e) => Err(e),
    }
}
