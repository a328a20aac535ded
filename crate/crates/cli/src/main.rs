use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use fi_tails::catalan::Pairing;
use fi_tails::combinatorics::Permutation;
use fi_tails::fj::{fj_basis, q_ring, FJBasisElement};
use fi_tails::linalg::{AbelianGroup, IntMatrix};
use fi_tails::tails::{
    effective_poly_degree, evaluate_tail, oracle_check, tail_invariants, OracleReport, TailProfile,
    DEFAULT_MAX_MATRIX_CELLS,
};
use fi_tails::FIPresentation;
use num_bigint::BigInt;
use serde_json::{json, Value};

const BASIS_ORDER: &str = "\
Canonical basis order:
  Ξ(ℓ)_n words are listed lexicographically with 1 < 2 < … < ℓ < x1 < x2 < …,
  which is the order of the corresponding permutations of [n].
  Blocks of a presentation matrix follow generator (rows) and relation
  (columns) order; labels carry an `i:` prefix when there is more than one block.
  Injections [k] → [n] are listed lexicographically by their image lists.
  Group-ring coordinates are indexed by permutations of [d] in lexicographic order.";

#[derive(Parser)]
#[command(name = "fitails", version, about = "Tail invariants of finitely presented FI-modules", after_help = BASIS_ORDER)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest presentation matrix (rows × columns) the oracle may build.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_MATRIX_CELLS, value_name = "C")]
    max_matrix_cells: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tail invariants A_0, …, A_d of a presentation.
    Tails { file: PathBuf },
    /// M_n from the tail invariants (n in the stable range).
    Evaluate {
        file: PathBuf,
        #[arg(long = "n")]
        n: usize,
    },
    /// The matrix Ξ(ℓ)_Z with its row and column labels.
    XiMatrix {
        file: PathBuf,
        #[arg(long)]
        ell: usize,
    },
    /// Compare the tail formula with the cokernel of the degree-n matrix.
    Oracle {
        file: PathBuf,
        #[arg(long = "n")]
        n: usize,
    },
    /// Basis of FJ(ℓ, m) up to a level.
    FjBasis {
        #[arg(long)]
        source: usize,
        #[arg(long)]
        target: usize,
        #[arg(long)]
        max_level: usize,
    },
    /// The lattices of the ring Q_d inside ℤS_d.
    Qring {
        #[arg(long)]
        degree: usize,
    },
    /// Determinant of the matching pairing between FI(k, n) and CB'(k, n).
    Pairing {
        #[arg(long)]
        k: usize,
        #[arg(long = "n")]
        n: usize,
    },
}

struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Tails { file } => {
            let profile = tail_invariants(&load(file)?);
            Ok(Output::ok(if cli.json { to_json(profile_json(&profile)) } else { profile_text(&profile) }))
        }
        Command::Evaluate { file, n } => {
            let profile = tail_invariants(&load(file)?);
            let group = evaluate_tail(&profile, *n)?;
            Ok(Output::ok(if cli.json {
                to_json(json!({ "n": n, "stable_from": profile.stable_from, "group": group_json(&group) }))
            } else {
                format!("M_{n} = {group}\n")
            }))
        }
        Command::XiMatrix { file, ell } => {
            let z = load(file)?;
            let m = z.evaluate_xi(*ell);
            let (rows, cols) = z.xi_labels(*ell);
            Ok(Output::ok(if cli.json {
                let mut v = matrix_json(&m, &rows, &cols);
                v["ell"] = json!(ell);
                to_json(v)
            } else {
                format!("Ξ({ell})_Z, {}×{}\n{}", m.rows(), m.cols(), matrix_text(&m, &rows, &cols))
            }))
        }
        Command::Oracle { file, n } => {
            let report = oracle_check(&load(file)?, *n, cli.max_matrix_cells)?;
            let text = if cli.json { to_json(oracle_json(&report)) } else { oracle_text(&report) };
            Ok(Output { text, code: if report.failed() { 1 } else { 0 } })
        }
        Command::FjBasis { source, target, max_level } => {
            let basis = fj_basis(*source, *target, *max_level);
            Ok(Output::ok(if cli.json {
                to_json(json!({
                    "source": source,
                    "target": target,
                    "max_level": max_level,
                    "elements": basis.iter().map(element_json).collect::<Vec<_>>(),
                }))
            } else {
                let mut s = format!("FJ({source}, {target}) up to level {max_level}: {} elements\n", basis.len());
                for b in &basis {
                    let _ = writeln!(s, "{b}");
                }
                s
            }))
        }
        Command::Qring { degree } => Ok(Output::ok(qring_output(*degree, cli.json))),
        Command::Pairing { k, n } => {
            let p = Pairing::new(*k, *n);
            let det = p.determinant();
            let unimodular = p.is_unimodular();
            Ok(Output::ok(if cli.json {
                to_json(json!({
                    "k": k,
                    "n": n,
                    "rows": p.matrix().rows(),
                    "cols": p.matrix().cols(),
                    "square": p.is_square(),
                    "determinant": det.as_ref().map(big_json),
                    "unimodular": unimodular,
                }))
            } else {
                match det {
                    Some(d) => format!("unimodular: {unimodular}, size {}, determinant {d}\n", p.matrix().rows()),
                    None => format!("unimodular: false, not square ({}×{})\n", p.matrix().rows(), p.matrix().cols()),
                }
            }))
        }
    }
}

fn load(path: &Path) -> Result<FIPresentation> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading standard input")?;
        s
    } else {
        if !path.exists() {
            bail!("no such file: {}", path.display());
        }
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    FIPresentation::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn to_json(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Integers that fit in i64 are JSON numbers, larger ones decimal strings.
fn big_json(x: &BigInt) -> Value {
    i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from)
}

fn group_json(g: &AbelianGroup) -> Value {
    json!({
        "free_rank": g.free_rank(),
        "torsion": g.invariant_factors().iter().map(big_json).collect::<Vec<_>>(),
    })
}

fn profile_json(p: &TailProfile) -> Value {
    json!({
        "d": p.degree,
        "stable_from": p.stable_from,
        "invariants": p.invariants.iter().map(group_json).collect::<Vec<_>>(),
        "poly_degree": effective_poly_degree(p),
    })
}

fn profile_text(p: &TailProfile) -> String {
    let mut s = String::new();
    for (ell, a) in p.invariants.iter().enumerate() {
        let _ = writeln!(s, "A_{ell} = {a}");
    }
    let _ = writeln!(s, "stable_from = {}", p.stable_from);
    let _ = writeln!(s, "poly_degree = {}", effective_poly_degree(p));
    s
}

fn oracle_json(r: &OracleReport) -> Value {
    json!({
        "n": r.n,
        "stable_from": r.stable_from,
        "in_stable_range": r.in_stable_range(),
        "predicted": r.predicted.as_ref().map(group_json),
        "actual": group_json(&r.actual),
        "equal": r.equal,
    })
}

fn oracle_text(r: &OracleReport) -> String {
    let predicted = r.predicted.as_ref().map_or("undefined".to_string(), |g| g.to_string());
    let verdict = match r.equal {
        Some(true) => "PASS",
        Some(false) => "FAIL",
        None => "no verdict below the stable range",
    };
    format!("n = {} (stable from {})\npredicted: {predicted}\nactual:    {}\n{verdict}\n", r.n, r.stable_from, r.actual)
}

fn matrix_json(m: &IntMatrix, rows: &[String], cols: &[String]) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "row_labels": rows,
        "col_labels": cols,
        "entries": m.row_vecs().iter().map(|r| r.iter().map(big_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn matrix_text(m: &IntMatrix, rows: &[String], cols: &[String]) -> String {
    let cells: Vec<Vec<String>> = m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let label_w = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..m.cols())
        .map(|j| cells.iter().map(|r| r[j].len()).chain([cols[j].chars().count()]).max().unwrap_or(0))
        .collect();
    let pad = |s: &str, w: usize| format!("{}{s}", " ".repeat(w - s.chars().count()));
    let mut s = " ".repeat(label_w);
    for (c, &w) in cols.iter().zip(&widths) {
        s.push_str("  ");
        s.push_str(&pad(c, w));
    }
    s.push('\n');
    for (label, row) in rows.iter().zip(&cells) {
        s.push_str(&pad(label, label_w));
        for (x, &w) in row.iter().zip(&widths) {
            s.push_str("  ");
            s.push_str(&pad(x, w));
        }
        s.push('\n');
    }
    s
}

fn element_json(b: &FJBasisElement) -> Value {
    json!({
        "label": b.to_string(),
        "level": b.level(),
        "injection": b.injection().images(),
        "blocks": b.blocks().iter().map(|br| br.letters().to_vec()).collect::<Vec<_>>(),
    })
}

fn qring_output(d: usize, as_json: bool) -> String {
    let q = q_ring(d);
    let labels: Vec<String> = Permutation::all(d).iter().map(|p| p.to_string()).collect();
    if as_json {
        let entries: Vec<Vec<Value>> = q
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        json!({
                            "source": e.ell,
                            "target": e.m,
                            "rank": e.rank(),
                            "generators": e.lattice.iter()
                                .map(|g| g.to_dense().iter().map(big_json).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        })
                    })
                    .collect()
            })
            .collect();
        return to_json(json!({
            "d": d,
            "total_rank": q.total_rank(),
            "coordinate_labels": labels,
            "entries": entries,
        }));
    }
    let mut s = format!("Q_{d}: total rank {}\n", q.total_rank());
    for row in &q.entries {
        for e in row {
            let gens: Vec<String> = e.lattice.iter().map(|g| g.to_string()).collect();
            let _ = writeln!(
                s,
                "({}, {}) rank {}: {}",
                e.ell,
                e.m,
                e.rank(),
                if gens.is_empty() { "0".to_string() } else { gens.join("; ") }
            );
        }
    }
    s
}
