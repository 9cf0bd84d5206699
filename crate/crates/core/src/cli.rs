//! The `latdec` command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input or violated input invariant, 2 violated
//! mathematical precondition (with witness), 3 desk-scale rank guard, 4 internal failure
//! (including a failed `--verify` audit).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num::BigInt;
use serde_json::{json, Value};

use crate::algebra::{
    check_l_eq_lstar, check_l_eq_r, check_nd, check_nd_star, check_positive_involution,
    check_ss, positivity_witness,
};
use crate::aut::{closure_order, is_isometry, verify_aut_factorization_with_limit};
use crate::error::{Error, Result};
use crate::hermitian::{decompose_hermitian, verify_hermitian_decomposition};
use crate::hodge::{decompose_hodge, verify_hodge_decomposition, verify_round_trip};
use crate::idempotent::{blocks_from_idempotents, decompose_unity, verify_idempotents};
use crate::lattice::{decompose, verify_decomposition};
use crate::schema::{self, int_json, int_matrix_json, int_vec_json, rat_json, rat_matrix_json};

pub const DEFAULT_DECOMPOSE_MAX_RANK: usize = 12;
pub const DEFAULT_AUT_MAX_RANK: usize = crate::aut::DEFAULT_MAX_RANK;
const CLOSURE_LIMIT: usize = 1_000_000;

#[derive(Parser, Debug)]
#[command(name = "latdec", version, about = "Exact orthogonal decompositions of lattices, orders and polarised Hodge structures")]
struct Cli {
    /// Render aligned tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Re-audit every result before printing it.
    #[arg(long, global = true)]
    verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decompose a positive-definite lattice {"gram"}.
    Decompose { file: PathBuf },
    /// Decompose a Hermitian lattice over an order.
    Hermitian { file: PathBuf },
    /// Decompose 1 into indecomposable Hermitian idempotents.
    Idempotents { file: PathBuf },
    /// Automorphism group and its block factorization.
    Aut { file: PathBuf },
    /// Decompose a polarised Hodge structure {"g", "J", "psi"}.
    Hodge { file: PathBuf },
    /// Evaluate the trace predicates of an algebra with involution.
    AlgebraCheck { file: PathBuf },
}

/// Desk-scale guard, overridable through `LATDEC_MAX_RANK`.
pub fn rank_limit(default: usize) -> usize {
    std::env::var("LATDEC_MAX_RANK")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

fn guard(rank: usize, limit: usize) -> Result<()> {
    if rank > limit {
        return Err(Error::RankTooLarge { rank, limit });
    }
    Ok(())
}

fn audit(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InternalInvariantFailure(format!("{what} failed verification")))
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::schema("<file>", format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::schema("<file>", format!("invalid JSON: {e}")))
}

fn execute(command: &Command, verify: bool) -> Result<Value> {
    let decompose_limit = rank_limit(DEFAULT_DECOMPOSE_MAX_RANK);
    match command {
        Command::Decompose { file } => {
            let l = schema::parse_lattice(&read_json(file)?)?;
            guard(l.rank(), decompose_limit)?;
            let d = decompose(&l)?;
            if verify {
                audit(verify_decomposition(&l, &d), "decomposition")?;
            }
            Ok(schema::decomposition_json(&d))
        }
        Command::Hermitian { file } => {
            let m = schema::parse_hermitian(&read_json(file)?)?;
            guard(m.rank(), decompose_limit)?;
            let d = decompose_hermitian(&m)?;
            if verify {
                audit(verify_hermitian_decomposition(&m, &d), "Hermitian decomposition")?;
            }
            Ok(schema::decomposition_json(&d))
        }
        Command::Idempotents { file } => {
            let r = schema::parse_order(&read_json(file)?)?;
            guard(r.dim(), decompose_limit)?;
            let d = decompose_unity(&r)?;
            let blocks = blocks_from_idempotents(&r, &d.idems)?;
            if verify {
                audit(verify_idempotents(&r, &d), "idempotent decomposition")?;
            }
            Ok(json!({
                "idempotents": d.idems.iter().map(|i| int_vec_json(i)).collect::<Vec<_>>(),
                "blocks": blocks.iter().map(int_matrix_json).collect::<Vec<_>>(),
            }))
        }
        Command::Aut { file } => {
            let l = schema::parse_lattice(&read_json(file)?)?;
            let limit = rank_limit(DEFAULT_AUT_MAX_RANK);
            let report = verify_aut_factorization_with_limit(&l, limit)?;
            if verify {
                let gens_ok = report
                    .group
                    .generators
                    .iter()
                    .all(|u| is_isometry(l.gram(), u));
                let order_ok = report.group.order > BigInt::from(CLOSURE_LIMIT)
                    || closure_order(l.rank(), &report.group.generators, CLOSURE_LIMIT)
                        == Some(report.group.order.clone());
                audit(gens_ok && order_ok, "automorphism group")?;
            }
            let classes = report
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "e": c.multiplicity(),
                        "block_gram": rat_matrix_json(&c.representative.gram),
                    })
                })
                .collect::<Vec<_>>();
            Ok(json!({
                "order": int_json(&report.group.order),
                "generators": report.group.generators.iter().map(int_matrix_json).collect::<Vec<_>>(),
                "factorization_ok": report.ok(),
                "classes": classes,
            }))
        }
        Command::Hodge { file } => {
            let h = schema::parse_hodge(&read_json(file)?)?;
            guard(h.rank(), decompose_limit)?;
            let d = decompose_hodge(&h)?;
            if verify {
                audit(
                    verify_hodge_decomposition(&h, &d) && verify_round_trip(&h, &d)?,
                    "Hodge decomposition",
                )?;
            }
            Ok(schema::hodge_json(&d))
        }
        Command::AlgebraCheck { file } => {
            let (a, s) = schema::parse_algebra(&read_json(file)?)?;
            let basis: Vec<_> = (0..a.dim()).map(|i| a.basis_element(i)).collect();
            let out = json!({
                "dim": a.dim(),
                "left_traces": basis.iter().map(|e| rat_json(&a.left_trace(e))).collect::<Vec<_>>(),
                "right_traces": basis.iter().map(|e| rat_json(&a.right_trace(e))).collect::<Vec<_>>(),
                "nd": check_nd(&a),
                "ss": check_ss(&a),
                "l_eq_r": check_l_eq_r(&a),
                "l_eq_lstar": check_l_eq_lstar(&a, &s),
                "nd_star": check_nd_star(&a, &s),
                "pd_star": check_positive_involution(&a, &s),
                "positivity_witness": positivity_witness(&a, &s).map_or(Value::Null, |w| int_vec_json(&w)),
            });
            if verify {
                let pd = check_positive_involution(&a, &s);
                let chain = (!pd || check_nd(&a))
                    && (!check_nd(&a) || check_l_eq_r(&a))
                    && check_l_eq_lstar(&a, &s) == check_l_eq_r(&a)
                    && pd == positivity_witness(&a, &s).is_none();
                audit(chain, "trace predicates")?;
            }
            Ok(out)
        }
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-readable rendering: matrices become right-aligned tables, objects become indented
/// key sections.
pub fn render_pretty(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar_text(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(x, indent + 2, out);
                }
            }
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(|r| r.as_array().is_some_and(|r| r.iter().all(is_scalar))) => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.as_array().unwrap().iter().map(scalar_text).collect())
                .collect();
            let cols = cells.iter().map(Vec::len).max().unwrap_or(0);
            let widths: Vec<usize> = (0..cols)
                .map(|c| cells.iter().filter_map(|r| r.get(c)).map(String::len).max().unwrap_or(0))
                .collect();
            for r in &cells {
                let line: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect();
                out.push_str(&format!("{pad}[ {} ]\n", line.join("  ")));
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let line: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}({})\n", line.join(", ")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                out.push_str(&format!("{pad}#{i}\n"));
                render(x, indent + 2, out);
            }
        }
        scalar => out.push_str(&format!("{pad}{}\n", scalar_text(scalar))),
    }
}

/// Parses `argv`, runs the command and writes the result or error report; returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 1;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match execute(&cli.command, cli.verify) {
        Ok(v) => {
            let text = if cli.pretty {
                render_pretty(&v)
            } else {
                format!("{v}\n")
            };
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stdout, "{}", schema::error_json(&e));
            let _ = writeln!(stderr, "latdec: {e}");
            e.exit_code()
        }
    }
}
