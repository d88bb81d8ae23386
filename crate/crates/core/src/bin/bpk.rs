use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bpk::asymptotics::calibrate_prefactor;
use bpk::bessel::{bessel_zero, z_derivative, z_eval, GeneralSolution, Order};
use bpk::coeff_db::{
    compute_record, generate, reproduce_table1, BinaryIndex, Database, GenerationPolicy, AUDIT_REL_TOL,
};
use bpk::fourier_bessel::{expand, parseval_gap, rms_error};
use bpk::validate::{run_suite, Scope, Summary};
use bpk::Error;

#[derive(Parser)]
#[command(name = "bpk", version, about = "Integrals of products of Bessel functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Two,
    Three,
    Approx,
    All,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Two => Scope::Two,
            ScopeArg::Three => Scope::Three,
            ScopeArg::Approx => Scope::Approx,
            ScopeArg::All => Scope::All,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Z_n(scale·x) = a J_n + b Y_n, or its x-derivative.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long)]
        derivative: bool,
    },
    /// Positive zeros of J_q.
    Zeros {
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long, default_value_t = 10)]
        count: u32,
        #[arg(long, default_value_t = 1)]
        from: u32,
    },
    /// Check the closed forms against quadrature on seeded random draws.
    Validate {
        #[arg(value_enum)]
        scope: ScopeArg,
        #[arg(long, default_value_t = 20)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recompute the published triple-product comparison table.
    Table1 {
        /// Write (lhs, rhs) scatter pairs here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate the coefficient database.
    Dbgen {
        #[arg(long)]
        max_mode: u32,
        /// Largest index computed by quadrature; above it the asymptotic formula is used.
        #[arg(long, default_value_t = 150)]
        threshold: u32,
        /// Largest index computed without compensated summation.
        #[arg(long, default_value_t = 100)]
        extended_above: u32,
        #[arg(long, default_value_t = 1)]
        q: u32,
        #[arg(long)]
        out: PathBuf,
        /// Also write the sorted binary index.
        #[arg(long)]
        binary: Option<PathBuf>,
    },
    /// Look up one coefficient triple.
    Dbquery {
        q: u32,
        m: u32,
        n: u32,
        p: u32,
        /// CSV database or BPK1 index; without it the triple is computed directly.
        #[arg(long)]
        db: Option<PathBuf>,
    },
    /// Fourier-Bessel coefficients of J_j(j_{i,m}x) J_k(j_{i,n}x).
    Expand {
        #[arg(long)]
        i: u8,
        #[arg(long)]
        j: u8,
        #[arg(long)]
        k: u8,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long = "N", short = 'N')]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Computational failure, as opposed to a usage error.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// `9.061E-05` style: fixed significant digits, two-digit exponent.
fn sci(v: f64, decimals: usize) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    let s = format!("{v:.decimals$E}");
    let (mant, exp) = s.split_once('E').unwrap();
    let e: i32 = exp.parse().unwrap();
    format!("{mant}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

fn cmd_eval(n: i32, a: f64, b: f64, scale: f64, x: f64, derivative: bool) -> Outcome {
    let sol = GeneralSolution::new(a, b);
    let v = if derivative {
        z_derivative(sol, Order(n), scale, x)?
    } else {
        z_eval(sol, Order(n), scale, x)?
    };
    println!("{v:.17e}");
    Ok(true)
}

fn cmd_zeros(q: u32, count: u32, from: u32) -> Outcome {
    if from == 0 {
        return Err(Failure("zero indices start at 1".into()));
    }
    let mut out = std::io::stdout().lock();
    for p in from..from.saturating_add(count) {
        let z = bessel_zero(q, p)?;
        writeln!(out, "{p} {:.17e}", z.value)?;
    }
    Ok(true)
}

fn cmd_validate(scope: Scope, draws: usize, seed: u64, format: Format) -> Outcome {
    let reports = run_suite(scope, draws, seed)?;
    let summary = Summary::of(&reports);
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports)?)?,
        Format::Text => {
            for r in &reports {
                writeln!(out, "{r}")?;
            }
            writeln!(
                out,
                "{} checks: {} passed, {} failed, {} errors, {} warnings",
                summary.total, summary.passed, summary.failed, summary.errors, summary.warnings
            )?;
        }
    }
    Ok(summary.all_pass())
}

fn cmd_table1(csv_path: Option<PathBuf>, format: Format) -> Outcome {
    let rows = reproduce_table1()?;
    let cal = calibrate_prefactor();
    let all_ok = rows.iter().all(|r| r.lhs_ok && r.rhs_ok) && cal.agrees(4);
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Text => {
            writeln!(
                out,
                "  m   n   p  printed_lhs  printed_rhs     lhs          rhs          d_lhs      d_rhs     status"
            )?;
            for r in &rows {
                let status = match (r.lhs_ok, r.rhs_ok) {
                    (true, true) => "ok",
                    (false, true) => "LHS",
                    (true, false) => "RHS",
                    (false, false) => "LHS+RHS",
                };
                writeln!(
                    out,
                    "{:3} {:3} {:3}  {}  {}  {}  {}  {}  {}  {}{}",
                    r.row.m,
                    r.row.n,
                    r.row.p,
                    sci(r.row.lhs, 3),
                    sci(r.row.rhs, 3),
                    sci(r.lhs, 4),
                    sci(r.rhs, 4),
                    sci(r.lhs - r.row.lhs, 2),
                    sci(r.rhs - r.row.rhs, 2),
                    status,
                    r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
                )?;
            }
            writeln!(out, "calibrated prefactor {:.6e}", cal.constant)?;
            if !cal.agrees(4) {
                writeln!(out, "{}", cal.discrepancy_report())?;
            }
        }
    }
    if let Some(path) = csv_path {
        let mut w = csv::Writer::from_path(&path).map_err(|e| Failure(e.to_string()))?;
        w.write_record(["m", "n", "p", "lhs", "rhs"]).map_err(|e| Failure(e.to_string()))?;
        for r in &rows {
            w.write_record([
                r.row.m.to_string(),
                r.row.n.to_string(),
                r.row.p.to_string(),
                format!("{:.16e}", r.lhs),
                format!("{:.16e}", r.rhs),
            ])
            .map_err(|e| Failure(e.to_string()))?;
        }
        w.flush()?;
    }
    Ok(all_ok)
}

fn cmd_dbgen(
    max_mode: u32,
    threshold: u32,
    extended_above: u32,
    q: u32,
    out: PathBuf,
    binary: Option<PathBuf>,
) -> Outcome {
    let policy = GenerationPolicy {
        asymptotic_above: threshold,
        extended_above,
        ..Default::default()
    };
    let (db, report) = generate(max_mode, q, &policy)?;
    db.export_csv(&out)?;
    if let Some(path) = binary {
        db.export_binary(&path)?;
    }
    let bad = db.audit(AUDIT_REL_TOL)?;
    eprintln!(
        "wrote {} records to {} ({} quadrature fallbacks, {} audit failures)",
        report.records,
        out.display(),
        report.fallbacks.len(),
        bad.len()
    );
    for k in &report.fallbacks {
        eprintln!("fallback to asymptotic: {k:?}");
    }
    Ok(bad.is_empty())
}

fn cmd_dbquery(q: u32, m: u32, n: u32, p: u32, db: Option<PathBuf>) -> Outcome {
    let rec = match db {
        None => compute_record(q, m, n, p, &GenerationPolicy::default())?.0,
        Some(path) => {
            let bytes = std::fs::read(&path)?;
            if bytes.starts_with(bpk::coeff_db::BINARY_MAGIC) {
                let idx = BinaryIndex::from_bytes(bytes)?;
                let mut r = idx.get(q, m, n, p)?.ok_or_else(|| Failure(format!("({q},{m},{n},{p}) not in index")))?;
                if (r.m, r.n, r.p) != (m, n, p) {
                    r.c110 = bpk::three_product::c110_from_c000(q, m, n, p, r.c000)?;
                    (r.m, r.n, r.p) = (m, n, p);
                }
                r
            } else {
                Database::read_csv(&bytes[..])?.lookup(q, m, n, p)?
            }
        }
    };
    println!("q={} m={} n={} p={}", rec.q, rec.m, rec.n, rec.p);
    println!("c000    {:.16e}", rec.c000);
    println!("c110    {:.16e}", rec.c110);
    println!("d111    {:.16e}", rec.d111);
    println!("abs_err {:.3e}", rec.abs_err);
    println!("method  {}", rec.method);
    Ok(true)
}

fn cmd_expand(i: u8, j: u8, k: u8, m: u32, n: u32, terms: usize, out: Option<PathBuf>) -> Outcome {
    let series = expand(i, j, k, m, n, terms)?;
    match out {
        Some(path) => series.write_csv(std::io::BufWriter::new(std::fs::File::create(&path)?))?,
        None => series.write_csv(std::io::stdout().lock())?,
    }
    eprintln!(
        "{} terms, rms error {:.3e} on 512 points, Parseval gap {:.3e}",
        series.truncation(),
        rms_error(&series, 512),
        parseval_gap(&series)?
    );
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Eval {
            n,
            a,
            b,
            scale,
            x,
            derivative,
        } => cmd_eval(n, a, b, scale, x, derivative),
        Command::Zeros { q, count, from } => cmd_zeros(q, count, from),
        Command::Validate {
            scope,
            draws,
            seed,
            format,
        } => cmd_validate(scope.into(), draws, seed, format),
        Command::Table1 { csv, format } => cmd_table1(csv, format),
        Command::Dbgen {
            max_mode,
            threshold,
            extended_above,
            q,
            out,
            binary,
        } => cmd_dbgen(max_mode, threshold, extended_above, q, out, binary),
        Command::Dbquery { q, m, n, p, db } => cmd_dbquery(q, m, n, p, db),
        Command::Expand {
            i,
            j,
            k,
            m,
            n,
            terms,
            out,
        } => cmd_expand(i, j, k, m, n, terms, out),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
