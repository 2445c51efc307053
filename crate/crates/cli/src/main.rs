#![allow(clippy::neg_cmp_op_on_partial_ord)]
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use siegel_theta::cocycle::cocycle_report;
use siegel_theta::exact::ZMat;
use siegel_theta::f2::{CosetTable, F2Vector};
use siegel_theta::gauss::{beta_tilde, lambda_multiplier, symplectic_gauss_sum, SnappedRoot};
use siegel_theta::io::{parse_config, parse_int_matrix, parse_siegel_point, parse_symplectic, RunConfig};
use siegel_theta::theta::{big_theta, theta_component, ThetaParams, Weight};
use siegel_theta::verify::{selftest, verify_scalar_law_with, verify_vector_law_with, VerifyConfig, REPORT_SCHEMA};
use siegel_theta::{Error, Mu8};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Metaplectic cocycles, symplectic Gauss sums and Siegel theta transformation laws.
#[derive(Parser, Debug)]
#[command(name = "siegel-theta", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// JSON file whose keys mirror the flags (`m`, `trials`, `tol`, `tail-tol`, `seed`, `max-radius`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Coset representatives of the theta group.
    CosetTable {
        #[arg(long)]
        m: Option<usize>,
    },
    /// Cocycle values for a pair of integral symplectic matrices.
    Cocycle {
        #[arg(long)]
        g1: PathBuf,
        #[arg(long)]
        g2: PathBuf,
    },
    /// Symplectic Gauss sum `G(d, c)`.
    GaussSum {
        #[arg(long)]
        d: PathBuf,
        #[arg(long)]
        c: PathBuf,
    },
    /// The trivializing root of unity on the theta group.
    Beta {
        #[arg(long)]
        g: PathBuf,
    },
    /// The scalar multiplier on the theta group.
    Lambda {
        #[arg(long)]
        g: PathBuf,
    },
    /// Theta series or vector components at a point.
    Theta {
        #[arg(long)]
        z: PathBuf,
        #[arg(long, default_value = "1/2")]
        weight: Weight,
        /// Single component `x|x*` (bits), e.g. `01|10`; all components if omitted.
        #[arg(long)]
        component: Option<String>,
        /// Certified truncation bound.
        #[arg(long, alias = "tol")]
        tail_tol: Option<f64>,
        #[arg(long)]
        max_radius: Option<usize>,
    },
    /// Randomized check of a transformation law.
    Verify {
        #[arg(long, value_enum, default_value_t = Theorem::Main1)]
        thm: Theorem,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        num: Numerics,
    },
    /// Exact anchored constants.
    Selftest,
}

#[derive(Args, Debug)]
struct Numerics {
    /// Certified truncation bound for theta series.
    #[arg(long)]
    tail_tol: Option<f64>,
    #[arg(long)]
    max_radius: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Theorem {
    /// Scalar law on the theta group.
    Main1,
    /// Vector law on the double cover.
    Main112,
}

/// Exit status: 0 pass, 1 failed verification, 2 bad input.
enum Failure {
    Input(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: siegel_theta::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn rows(z: &ZMat) -> Value {
    match z.to_i64_rows() {
        Some(r) => json!(r),
        None => json!(z.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
    }
}

fn complex(w: num_complex::Complex64) -> Value {
    json!([w.re, w.im])
}

fn root_json(r: &SnappedRoot) -> Value {
    json!({ "value": complex(r.value.embed()), "mu8_exponent": r.value.exponent(), "raw": complex(r.raw), "residual": r.residual })
}

fn params(cfg: &RunConfig, num: &Numerics) -> ThetaParams {
    let d = ThetaParams::default();
    ThetaParams {
        tail_tol: num.tail_tol.or(cfg.tail_tol).unwrap_or(d.tail_tol),
        max_radius: num.max_radius.or(cfg.max_radius).unwrap_or(d.max_radius),
    }
}

fn emit(json_out: bool, value: &Value, text: impl FnOnce() -> String) {
    if json_out {
        println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
    } else {
        println!("{}", text());
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(p) => with_path(p, parse_config(&read(p)?))?,
        None => RunConfig::default(),
    };
    let js = cli.json;
    match cli.cmd {
        Cmd::CosetTable { m } => {
            let m = m.or(cfg.m).unwrap_or(1);
            if !(1..=6).contains(&m) {
                return Err(Failure::Input("coset-table supports 1 ≤ m ≤ 6".into()));
            }
            let table = CosetTable::new(m)?;
            let recs: Vec<Value> = table
                .records
                .iter()
                .map(|r| {
                    json!({
                        "q": r.q.to_string(),
                        "m_prime": rows(r.m_prime.matrix()),
                        "m": rows(r.m.matrix()),
                        "m_q": r.m_q,
                        "eps_q": r.eps_q,
                        "m_xstar_exponent": r.m_xstar_q.exponent(),
                    })
                })
                .collect();
            let out = json!({ "schema": REPORT_SCHEMA, "genus": m, "count": recs.len(), "records": recs });
            emit(js, &out, || {
                let mut s = format!("{:<3} {:<w$} {:<w$} {:<w$} m_X*\n", "#", "q", "m_q", "eps_q", w = 2 * m + 8);
                for (i, r) in table.records.iter().enumerate() {
                    s += &format!(
                        "{:<3} {:<w$} {:<w$} {:<w$} {}\n",
                        i,
                        r.q.to_string(),
                        format!("{:?}", r.m_q),
                        format!("{:?}", r.eps_q),
                        r.m_xstar_q,
                        w = 2 * m + 8
                    );
                }
                s.trim_end().to_string()
            });
        }
        Cmd::Cocycle { g1, g2 } => {
            let a = with_path(&g1, parse_symplectic(&read(&g1)?))?;
            let b = with_path(&g2, parse_symplectic(&read(&g2)?))?;
            if a.genus() != b.genus() {
                return Err(Failure::Input("g1 and g2 have different genus".into()));
            }
            let rep = cocycle_report(&a, &b)?;
            let mut out = serde_json::to_value(&rep).expect("report serializes");
            out["schema"] = json!(REPORT_SCHEMA);
            emit(js, &out, || {
                format!(
                    "c~ = {}\nc- = {}\nm(g1) = {}\nm(g2) = {}\nm(g1 g2) = {}",
                    Mu8::new(rep.c_tilde_exponent as i64),
                    rep.c_bar,
                    Mu8::new(rep.m_xstar_g1 as i64),
                    Mu8::new(rep.m_xstar_g2 as i64),
                    Mu8::new(rep.m_xstar_g1g2 as i64)
                )
            });
        }
        Cmd::GaussSum { d, c } => {
            let dm = with_path(&d, parse_int_matrix(&read(&d)?))?;
            let cm = with_path(&c, parse_int_matrix(&read(&c)?))?;
            let g = symplectic_gauss_sum(&dm, &cm)?;
            let norm = g.norm();
            let (root, residual) = if norm > 0.0 { Mu8::snap(g / norm) } else { (Mu8::ONE, f64::NAN) };
            let out = json!({ "schema": REPORT_SCHEMA, "value": complex(g), "modulus": norm, "mu8_exponent": root.exponent(), "residual": residual });
            emit(js, &out, || format!("G = {:.12} {:+.12}i  (|G| = {norm:.12}, phase {root}, residual {residual:.2e})", g.re, g.im));
        }
        Cmd::Beta { g } => {
            let m = with_path(&g, parse_symplectic(&read(&g)?))?;
            let b = beta_tilde(&m)?;
            let mut out = root_json(&b);
            out["schema"] = json!(REPORT_SCHEMA);
            emit(js, &out, || format!("beta = {} (residual {:.2e})", b.value, b.residual));
        }
        Cmd::Lambda { g } => {
            let m = with_path(&g, parse_symplectic(&read(&g)?))?;
            let b = beta_tilde(&m)?;
            let l = lambda_multiplier(&m)?;
            let out = json!({ "schema": REPORT_SCHEMA, "value": complex(l.embed()), "mu8_exponent": l.exponent(), "residual": b.residual });
            emit(js, &out, || format!("lambda = {l} (residual {:.2e})", b.residual));
        }
        Cmd::Theta { z, weight, component, tail_tol, max_radius } => {
            let point = with_path(&z, parse_siegel_point(&read(&z)?))?;
            let p = params(&cfg, &Numerics { tail_tol, max_radius });
            let table = CosetTable::new(point.genus())?;
            let comps = match component {
                Some(q) => {
                    let q = F2Vector::parse(&q)?;
                    let i =
                        table.position(&q).ok_or_else(|| Failure::Input(format!("{q} is not a coset label of genus {}", point.genus())))?;
                    vec![theta_component(&table.records[i], 1, &point, weight, &p)?]
                }
                None => big_theta(&table, &point, weight, &p)?,
            };
            let out = json!({
                "schema": REPORT_SCHEMA,
                "weight": weight,
                "tail_tol": p.tail_tol,
                "components": comps.iter().map(|c| json!({
                    "q": c.q.to_string(),
                    "value": c.value.iter().map(|w| complex(*w)).collect::<Vec<_>>(),
                    "tail_bound": c.tail_bound,
                })).collect::<Vec<_>>(),
            });
            emit(js, &out, || {
                comps
                    .iter()
                    .map(|c| {
                        let vals: Vec<String> = c.value.iter().map(|w| format!("{:.15} {:+.15}i", w.re, w.im)).collect();
                        format!("{:<12} {}  (tail ≤ {:.1e})", c.q.to_string(), vals.join(", "), c.tail_bound)
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
        }
        Cmd::Verify { thm, m, trials, tol, seed, num } => {
            let d = VerifyConfig::default();
            let vc = VerifyConfig {
                m: m.or(cfg.m).unwrap_or(d.m),
                trials: trials.or(cfg.trials).unwrap_or(d.trials),
                tol: tol.or(cfg.tol).unwrap_or(d.tol),
                seed: seed.or(cfg.seed).unwrap_or(d.seed),
                theta: params(&cfg, &num),
                ..d
            };
            if !(vc.tol > 0.0) {
                return Err(Failure::Input("--tol must be positive".into()));
            }
            let report = match thm {
                Theorem::Main1 => verify_scalar_law_with(&vc)?,
                Theorem::Main112 => verify_vector_law_with(&vc)?,
            };
            let out = serde_json::to_value(&report).expect("report serializes");
            emit(js, &out, || {
                let mut s = format!(
                    "{} m={} trials={}: max rel error {:.3e} (tol {:.1e}) -> {}",
                    report.theorem,
                    report.genus,
                    report.trials,
                    report.max_rel_error,
                    report.tolerance,
                    if report.pass { "PASS" } else { "FAIL" }
                );
                for n in report.notes.iter().chain(&report.failures) {
                    s += &format!("\n  {n}");
                }
                s
            });
            if !report.pass {
                return Err(Failure::Verification);
            }
        }
        Cmd::Selftest => {
            let report = selftest()?;
            let out = serde_json::to_value(&report).expect("report serializes");
            emit(js, &out, || {
                report.checks.iter().map(|c| format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name)).collect::<Vec<_>>().join("\n")
            });
            if !report.pass {
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
