use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use bchforge_core::catalog::{self, CatalogRecord, CheckStatus};
use bchforge_core::numtheory::prime_power;
use bchforge_core::theorems::{self, Agreement, Verification};
use bchforge_core::{coset, min_distance, BchCode, DistanceReport, FiniteField, Method, SearchConfig};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

/// Antiprimitive BCH codes: construction, exact minimum distance, and
/// theorem checks.
#[derive(Parser)]
#[command(name = "bchforge", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Zero out wall-clock times and timestamps so output is reproducible.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Run every search on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Largest q^k message-enum will walk.
    #[arg(long, global = true, default_value_t = SearchConfig::default().message_budget)]
    message_budget: u64,
    /// Largest per-weight support count support-enum will walk.
    #[arg(long, global = true, default_value_t = SearchConfig::default().support_budget)]
    support_budget: u64,
    /// Largest half-table mitm-syndrome will build.
    #[arg(long, global = true, default_value_t = SearchConfig::default().mitm_budget)]
    mitm_budget: u64,
}

impl Global {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            message_budget: self.message_budget,
            support_budget: self.support_budget,
            mitm_budget: self.mitm_budget,
            parallel: !self.sequential,
        }
    }

    fn elapsed_ms(&self, d: Duration) -> u128 {
        if self.deterministic {
            0
        } else {
            d.as_millis()
        }
    }

    fn timestamp(&self) -> u64 {
        if self.deterministic {
            return 0;
        }
        SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Describe GF(q) and, with --m, the ambient field GF(q^(2m)).
    FieldInfo {
        q: u64,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Print the q-cyclotomic coset of s modulo n.
    Coset { q: u64, n: u64, s: u64 },
    /// Build or measure a single code.
    #[command(subcommand)]
    Bch(BchCommand),
    /// Check every applicable theorem against a measured distance.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        /// Search ceiling; defaults to what the combined prediction needs.
        #[arg(long)]
        wmax: Option<u64>,
        #[arg(long, default_value = "mitm-syndrome")]
        method: Method,
    },
    /// Verify every (q, m, h) in a grid and write JSON lines plus a CSV summary.
    Sweep {
        #[arg(long, value_delimiter = ',', required = true)]
        q_list: Vec<u64>,
        #[arg(long)]
        m_max: u32,
        #[arg(long)]
        out: PathBuf,
        /// CSV summary path; defaults to the output path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value = "mitm-syndrome")]
        method: Method,
    },
    /// Persisted table of measured codes.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args, Clone, Copy)]
struct CodeArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    h: u64,
}

#[derive(Subcommand)]
enum BchCommand {
    /// Print n, k, the generator polynomial, and the defining-set leaders.
    Build {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 3)]
        delta: u64,
    },
    /// Exact minimum distance up to --wmax.
    Mindist {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 3)]
        delta: u64,
        #[arg(long)]
        wmax: u64,
        #[arg(long, default_value = "mitm-syndrome")]
        method: Method,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Measure a code and merge it into the catalog.
    Add {
        #[arg(long)]
        path: PathBuf,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 3)]
        delta: u64,
        #[arg(long)]
        wmax: u64,
        #[arg(long, default_value = "mitm-syndrome")]
        method: Method,
    },
    /// Print every record.
    List {
        #[arg(long)]
        path: PathBuf,
    },
    /// Rebuild every record and confirm its invariants.
    Check {
        #[arg(long)]
        path: PathBuf,
        /// Also re-measure distances.
        #[arg(long)]
        remeasure: bool,
        /// Stop re-measuring after this many seconds.
        #[arg(long, default_value_t = 300)]
        time_budget: u64,
    },
}

/// Outcome of a successful run.
enum Status {
    Ok,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("BCHFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.parse().with_context(|| format!("BCHFORGE_THREADS={raw} is not a thread count"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli) -> Result<Status> {
    let g = &cli.global;
    match &cli.command {
        Command::FieldInfo { q, m } => field_info(*q, *m),
        Command::Coset { q, n, s } => {
            println!("{}", coset(*q, *n, *s)?);
            Ok(Status::Ok)
        }
        Command::Bch(BchCommand::Build { code, delta }) => build(*code, *delta),
        Command::Bch(BchCommand::Mindist { code, delta, wmax, method }) => {
            let c = BchCode::build(code.q, code.m, *delta, code.h)?;
            let report = min_distance(&c, *wmax, *method, &g.config())?;
            print_report(&report, g);
            Ok(Status::Ok)
        }
        Command::Verify { code, wmax, method } => {
            let v = theorems::verify(code.q, code.m, code.h, *wmax, *method, &g.config())?;
            print_verification(&v, g);
            Ok(status_of(v.agrees))
        }
        Command::Sweep { q_list, m_max, out, csv, method } => {
            let runs = theorems::sweep(q_list, *m_max, *method, &g.config())?;
            let csv = csv.clone().unwrap_or_else(|| out.with_extension("csv"));
            write_sweep(&runs, out, &csv, g)?;
            let mismatches = runs.iter().filter(|v| v.agrees == Agreement::Mismatch).count();
            println!("{} codes, {} mismatches; wrote {} and {}", runs.len(), mismatches, out.display(), csv.display());
            Ok(if mismatches > 0 { Status::Mismatch } else { Status::Ok })
        }
        Command::Catalog(cmd) => run_catalog(cmd, g),
    }
}

fn status_of(a: Agreement) -> Status {
    if a == Agreement::Mismatch {
        Status::Mismatch
    } else {
        Status::Ok
    }
}

fn field_info(q: u64, m: Option<u32>) -> Result<Status> {
    let (p, k) = prime_power(q).ok_or_else(|| anyhow!("{q} is not a prime power"))?;
    let f = FiniteField::new(p, k)?;
    println!("GF({q}): characteristic {p}, degree {k}");
    println!("modulus = {}", tuple(f.modulus()));
    println!("primitive element = {}", f.primitive_element());
    println!("log tables = {}", if f.has_tables() { "yes" } else { "no" });
    if let Some(m) = m {
        let amb = FiniteField::new(p, k * 2 * m)?;
        let beta = amb.root_of_unity(q, m)?;
        println!("ambient GF({q}^{}) modulus = {}", 2 * m, tuple(amb.modulus()));
        println!("beta = {beta} (order {})", amb.multiplicative_order(beta.raw())?);
    }
    Ok(Status::Ok)
}

fn tuple(c: &[u64]) -> String {
    let parts: Vec<String> = c.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

fn list(c: &[impl ToString]) -> String {
    c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn build(code: CodeArgs, delta: u64) -> Result<Status> {
    let c = BchCode::build(code.q, code.m, delta, code.h)?;
    let leaders: Vec<u64> = c.defining_cosets().iter().map(|s| s.leader()).collect();
    println!("C({}, {}, {}, {})", c.q(), c.n(), c.delta(), c.h());
    println!("n = {}", c.n());
    println!("k = {}", c.dimension());
    println!("generator = {}", list(c.generator().coeffs()));
    println!("defining set leaders = {}", list(&leaders));
    println!("self-reciprocal generator = {}", if c.is_lcd() { "yes" } else { "no" });
    Ok(Status::Ok)
}

fn print_report(r: &DistanceReport, g: &Global) {
    println!("C({}, {}, {}, {}): [n={}, k={}]", r.q, r.n, r.delta, r.h, r.n, r.k);
    println!("d = {}", r.d);
    if let Some(w) = &r.witness {
        println!("witness support = {}", list(&w.support));
        println!("witness coefficients = {}", list(&w.coeffs));
    }
    println!("method = {}, searched to w = {}", r.method, r.w_explored);
    println!("elapsed = {} ms", g.elapsed_ms(r.elapsed));
}

fn print_verification(v: &Verification, g: &Global) {
    for t in &v.verdicts {
        let note = if t.open_case { " (open case)" } else { "" };
        let k = t.predicted_k.map(|k| format!(" k={k}")).unwrap_or_default();
        println!("{:<5} predicts d {}{}: {}{}", t.theorem_id.as_str(), t.predicted, k, t.agrees, note);
    }
    println!("combined prediction = {}", v.predicted);
    print_report(&v.report, g);
    let verdict = match (v.agrees, v.open_case) {
        (Agreement::Match, true) => "match (open case: measured value recorded as data, not a confirmation)".to_string(),
        (a, _) => a.to_string(),
    };
    println!("verdict = {verdict}");
}

fn write_sweep(runs: &[Verification], out: &Path, csv: &Path, g: &Global) -> Result<()> {
    let mut jsonl = Vec::new();
    let mut table = String::from("q,m,h,n,k,d_pred,d_meas,agree\n");
    for v in runs {
        let rec = json!({
            "q": v.q,
            "m": v.m,
            "h": v.h,
            "n": v.n,
            "k": v.k,
            "theorem_ids": v.theorem_ids().iter().map(|t| t.as_str()).collect::<Vec<_>>(),
            "predicted": v.predicted.to_string(),
            "measured": v.report.d.to_string(),
            "agrees": v.agrees.to_string(),
            "open_case": v.open_case,
            "witness_support": v.report.witness.as_ref().map(|w| w.support.clone()),
            "elapsed_ms": g.elapsed_ms(v.report.elapsed),
        });
        serde_json::to_writer(&mut jsonl, &rec)?;
        jsonl.push(b'\n');
        table.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            v.q, v.m, v.h, v.n, v.k, v.predicted, v.report.d, v.agrees
        ));
    }
    fs::File::create(out)
        .and_then(|mut f| f.write_all(&jsonl))
        .with_context(|| format!("writing {}", out.display()))?;
    fs::write(csv, table).with_context(|| format!("writing {}", csv.display()))?;
    Ok(())
}

fn run_catalog(cmd: &CatalogCommand, g: &Global) -> Result<Status> {
    match cmd {
        CatalogCommand::Add { path, code, delta, wmax, method } => {
            let c = BchCode::build(code.q, code.m, *delta, code.h)?;
            let report = min_distance(&c, *wmax, *method, &g.config())?;
            let rec = CatalogRecord::from_report(&report, g.timestamp());
            let outcome = catalog::add(path, rec)?;
            println!("{outcome:?}: C({}, {}, {}, {}) d = {}", code.q, c.n(), delta, c.h(), report.d);
        }
        CatalogCommand::List { path } => {
            println!("q,m,delta,h,n,k,d,method,optimal,singleton");
            for r in catalog::read(path)? {
                let class = r.singleton_class.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
                println!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.q, r.m, r.delta, r.h, r.n, r.k, r.d, r.method, r.optimality_flag, class
                );
            }
        }
        CatalogCommand::Check { path, remeasure, time_budget } => {
            let records = catalog::read(path)?;
            let results = catalog::check(&records, *remeasure, Duration::from_secs(*time_budget), &g.config());
            let mut failed = 0;
            for r in &results {
                let (q, m, delta, h) = r.key;
                let status = match &r.status {
                    CheckStatus::Ok => "ok".to_string(),
                    CheckStatus::DimensionOnly => "ok (dimension only)".to_string(),
                    CheckStatus::Failed(why) => {
                        failed += 1;
                        format!("FAILED: {why}")
                    }
                };
                println!("q={q} m={m} delta={delta} h={h}: {status}");
            }
            if failed > 0 {
                bail!("{failed} of {} records failed", results.len());
            }
        }
    }
    Ok(Status::Ok)
}
