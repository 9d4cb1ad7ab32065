//! Command-line front end: parse/compile/evaluate expressions, search for
//! certified witnesses, and run the decomposition pipelines. Human report
//! on stdout, JSON artifacts to --out; outputs are deterministic given
//! the same arguments and seed.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncrat::jobio::{
    certificate_to_json, decomposition_to_json, matrix_from_json, matrix_to_json,
    realization_to_json, thresholds_to_json, tuple_from_json,
};
use ncrat::matrixkit::{Matrix, MatrixTuple};
use ncrat::ncexpr::{expr_to_poly, parse, RatExpr};
use ncrat::realization::{from_expr, thresholds};
use ncrat::scalarkit::{Cx, Rat};
use ncrat::waring::{
    decompose_difference, decompose_linear_three, decompose_linear_two,
    decompose_product_three, decompose_product_twelve, decompose_product_two,
    decompose_quotient, verify, Decomposition, DecomposeOptions, WaringError,
};
use ncrat::witness::{find_distinct_eigs, SearchConfig, WitnessCertificate};

#[derive(Parser)]
#[command(
    name = "ncrat",
    about = "Noncommutative rational functions on matrix tuples: pencil realizations, eigenvalue certificates, Waring decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Difference,
    Linear2,
    Linear3,
    Quotient,
    Product2,
    Product3,
    Product12,
}

#[derive(Args)]
struct CommonExpr {
    /// Expression text, e.g. "x1*x2 - x2*x1"
    #[arg(long)]
    expr: String,
    /// Number of variables x1..xm
    #[arg(long)]
    m: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression on a tuple read from a JSON file.
    Eval {
        #[command(flatten)]
        common: CommonExpr,
        /// Tuple file: {"m": .., "matrices": [{"n": .., "entries": [[..]]}, ..]}
        #[arg(long)]
        tuple: String,
        #[arg(long, value_enum, default_value = "exact")]
        backend: Backend,
        /// Write the value matrix as JSON here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Compile an expression to a linear (pencil) representation.
    Realize {
        #[command(flatten)]
        common: CommonExpr,
        /// Also apply the bordered inversion to the compiled pencil.
        #[arg(long, default_value_t = false)]
        invert: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Search for a tuple where the value has n distinct eigenvalues.
    Witness {
        #[command(flatten)]
        common: CommonExpr,
        #[arg(long)]
        n: usize,
        /// Also demand nonzero eigenvalues.
        #[arg(long, default_value_t = true)]
        nonzero: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Sampling box: integer entries in [-box, box].
        #[arg(long, default_value_t = 5)]
        r#box: i64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Decompose a target matrix into values of the expression(s).
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        common: CommonExpr,
        /// Second factor expression (product2/product3).
        #[arg(long)]
        expr2: Option<String>,
        /// Third factor expression (product3).
        #[arg(long)]
        expr3: Option<String>,
        /// Target matrix file: {"n": .., "entries": [[..]]}
        #[arg(long)]
        target: String,
        /// Operational threshold for product12.
        #[arg(long, default_value_t = 2)]
        n0: usize,
        /// Supplied witness tuple file (bypasses the search).
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 5)]
        r#box: i64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn read_json(path: &str) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {path}: {e}"))
}

fn write_out(out: &Option<String>, doc: &Value) -> Result<(), String> {
    if let Some(path) = out {
        let mut text = serde_json::to_string_pretty(doc).expect("serializable");
        text.push('\n');
        fs::write(path, text).map_err(|e| format!("cannot write {path}: {e}"))?;
    }
    Ok(())
}

fn parse_expr(text: &str, m: usize) -> Result<RatExpr, String> {
    parse(text, m).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval {
            common,
            tuple,
            backend,
            out,
        } => {
            let e = parse_expr(&common.expr, common.m)?;
            let doc = read_json(&tuple)?;
            let value_doc = match backend {
                Backend::Exact => {
                    let x: MatrixTuple<Rat> =
                        tuple_from_json(&doc).map_err(|e| e.to_string())?;
                    let v = e.eval(&x).map_err(|e| e.to_string())?;
                    matrix_to_json(&v)
                }
                Backend::Float => {
                    let x: MatrixTuple<Cx> =
                        tuple_from_json(&doc).map_err(|e| e.to_string())?;
                    let v = e.eval(&x).map_err(|e| e.to_string())?;
                    matrix_to_json(&v)
                }
            };
            println!("value of {} on the supplied tuple:", common.expr);
            println!("{}", serde_json::to_string(&value_doc).unwrap());
            write_out(&out, &value_doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize {
            common,
            invert,
            out,
        } => {
            let e = parse_expr(&common.expr, common.m)?;
            let base = from_expr(&e);
            let r = if invert {
                base.inverse_bordered()
            } else {
                base.clone()
            };
            let degree = expr_to_poly(&e).ok().map(|p| p.degree());
            let t = thresholds(r.delta(), degree);
            let doc = json!({
                "realization": realization_to_json(&r),
                "thresholds": thresholds_to_json(&t),
            });
            println!(
                "compiled `{}` to a pencil of size {}",
                common.expr,
                base.delta()
            );
            if invert {
                println!(
                    "bordered inversion applied: size {} (2*{}+1)",
                    r.delta(),
                    base.delta()
                );
            }
            println!(
                "thresholds: domain nonempty for n >= {}, noncentral for n >= {}, primes ({}, {}), distinct eigenvalues for n >= {}, prime-free bound {}",
                t.n_domain_nonempty, t.n_noncentral, t.p, t.q, t.n_distinct, t.bertrand_bound
            );
            if let Some(poly_n) = t.poly_noncentral {
                println!("polynomial threshold: noncentral for n >= {poly_n}");
            }
            write_out(&out, &doc)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness {
            common,
            n,
            nonzero,
            seed,
            budget,
            r#box,
            out,
        } => {
            let e = parse_expr(&common.expr, common.m)?;
            let cfg = SearchConfig {
                budget,
                box_bound: r#box,
                require_nonzero: nonzero,
                require_nonzero_trace: false,
            };
            match find_distinct_eigs(&e, n, &cfg, seed) {
                Ok(cert) => {
                    println!(
                        "witness found at trial {} (seed {}): {} distinct{} eigenvalues, certificates exact",
                        cert.trial,
                        seed,
                        n,
                        if cert.det_nonzero { " nonzero" } else { "" }
                    );
                    write_out(&out, &certificate_to_json(&cert))?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(err) => {
                    eprintln!("witness search failed: {err}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Decompose {
            mode,
            common,
            expr2,
            expr3,
            target,
            n0,
            witness,
            seed,
            budget,
            tol,
            r#box,
            out,
        } => {
            let e = parse_expr(&common.expr, common.m)?;
            let doc = read_json(&target)?;
            let m: Matrix<Rat> = matrix_from_json(&doc).map_err(|e| e.to_string())?;
            if !m.is_square() {
                return Err("target must be square".into());
            }
            let default_tol = if mode == Mode::Product12 { 1e-6 } else { 1e-8 };
            let mut opts = DecomposeOptions {
                seed,
                budget,
                box_bound: r#box,
                tol: tol.unwrap_or(default_tol),
                witness: None,
            };
            if let Some(path) = witness {
                let wdoc = read_json(&path)?;
                let x: MatrixTuple<Rat> = tuple_from_json(&wdoc).map_err(|e| e.to_string())?;
                let cert = WitnessCertificate::certify(&e, x, seed, 0)
                    .map_err(|e| format!("supplied witness rejected: {e}"))?;
                opts.witness = Some(cert);
            }
            let needs = |o: &Option<String>, name: &str| -> Result<RatExpr, String> {
                match o {
                    Some(t) => parse_expr(t, common.m),
                    None => Err(format!("mode requires --{name}")),
                }
            };
            let result: Result<(Decomposition, Vec<RatExpr>), WaringError> = match mode {
                Mode::Difference => {
                    decompose_difference(&e, &m, &opts).map(|d| (d, vec![e.clone()]))
                }
                Mode::Linear2 => {
                    decompose_linear_two(&e, &m, &opts).map(|d| (d, vec![e.clone()]))
                }
                Mode::Linear3 => {
                    decompose_linear_three(&e, &m, &opts).map(|d| (d, vec![e.clone()]))
                }
                Mode::Quotient => {
                    decompose_quotient(&e, &m, &opts).map(|d| (d, vec![e.clone()]))
                }
                Mode::Product2 => match needs(&expr2, "expr2") {
                    Ok(g) => decompose_product_two(&e, &g, &m, &opts)
                        .map(|d| (d, vec![e.clone(), g])),
                    Err(msg) => return Err(msg),
                },
                Mode::Product3 => {
                    let g = match needs(&expr2, "expr2") {
                        Ok(g) => g,
                        Err(msg) => return Err(msg),
                    };
                    let h = match needs(&expr3, "expr3") {
                        Ok(h) => h,
                        Err(msg) => return Err(msg),
                    };
                    decompose_product_three(&e, &g, &h, &m, &opts)
                        .map(|d| (d, vec![e.clone(), g, h]))
                }
                Mode::Product12 => {
                    decompose_product_twelve(&e, &m, n0, &opts).map(|d| (d, vec![e.clone()]))
                }
            };
            match result {
                Ok((d, exprs)) => {
                    let expr_refs: Vec<&RatExpr> = exprs.iter().collect();
                    let report = verify(&d, &expr_refs, opts.tol);
                    println!(
                        "{} decomposition of a {}x{} target: {} term(s), backend {}, seed {}",
                        d.kind.as_str(),
                        m.nrows(),
                        m.nrows(),
                        d.terms.len(),
                        if d.terms.is_exact() { "exact" } else { "float" },
                        seed
                    );
                    println!(
                        "verification: residual {:e} (tolerance {:e}) -> {}",
                        report.residual,
                        opts.tol,
                        if report.pass { "PASS" } else { "FAIL" }
                    );
                    write_out(&out, &decomposition_to_json(&d))?;
                    if report.pass {
                        Ok(ExitCode::SUCCESS)
                    } else {
                        Ok(ExitCode::from(1))
                    }
                }
                Err(err) if err.is_contractual() => {
                    eprintln!("unsupported case: {err}");
                    Ok(ExitCode::from(2))
                }
                Err(err) => {
                    eprintln!("decomposition failed: {err}");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}
