use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weylball::report::ScanReport;
use weylball::scan::{self, CountMethod, ScanKind, RESIDUAL_COLUMNS};
use weylball::spectral::{check_budget, CountConfig};
use weylball::verify::{self, Suite};
use weylball::zeros::{self, ZeroConfig};
use weylball::BesselOrder;

#[derive(Parser, Debug)]
#[command(name = "weylball", version, about = "Dirichlet eigenvalue counts for balls: Bessel zeros, Weyl remainders, lattice sums")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Relative tolerance for zeros and knife-edge detection.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Regime cutoff: a zero is oscillatory when j ≥ (1 + c)ν.
    #[arg(long, global = true, default_value_t = 0.5)]
    c: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (stdout when omitted). Scan statistics go to `<out>.stats.json`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Lattice,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Remainder,
    Residual,
    Lemma41,
    PsiBlocks,
    Comparison,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Specfun,
    Geometry,
    WeylConstants,
    Approx,
    Comparison,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the k-th positive zero of J_ν.
    Zero {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        k: u64,
    },
    /// Certify zeros k_from..=k_to of J_ν.
    ZerosScan {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long, default_value_t = 1)]
        k_from: u64,
        #[arg(long)]
        k_to: u64,
    },
    /// Count Dirichlet eigenvalues of the unit ball at most μ².
    Count {
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        /// Ball radius for the exact count.
        #[arg(long)]
        radius: Option<f64>,
        /// Largest admissible μ (defaults to a dimension-dependent budget).
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Run a parameter scan and write a report plus its statistics.
    Scan(ScanArgs),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 3)]
    d: u32,
    #[arg(long, default_value_t = 50.0)]
    mu_min: f64,
    #[arg(long, default_value_t = 800.0)]
    mu_max: f64,
    #[arg(long, default_value_t = 40)]
    samples: usize,
    /// Linear instead of logarithmic spacing.
    #[arg(long)]
    linear: bool,
    /// Explicit μ values (comma separated); overrides the range.
    #[arg(long, value_delimiter = ',')]
    mu: Vec<f64>,
    /// Residual scans: orders ν = twice/2 for twice in twice_min..=twice_max.
    #[arg(long, default_value_t = 1)]
    twice_min: u64,
    #[arg(long, default_value_t = 200)]
    twice_max: u64,
    #[arg(long, default_value_t = 1)]
    twice_step: u64,
    #[arg(long, default_value_t = 1)]
    k_min: u64,
    #[arg(long, default_value_t = 1000)]
    k_max: u64,
    #[arg(long, default_value_t = 1)]
    k_step: u64,
    /// Head cutoff V for psi-block scans (default μ^{131/208}).
    #[arg(long)]
    v: Option<f64>,
    /// Constant C of the comparison sandwich.
    #[arg(long, default_value_t = 2.0)]
    comparison_c: f64,
    #[arg(long)]
    budget: Option<f64>,
    /// Re-read a CSV written by an earlier scan and recompute its statistics.
    #[arg(long)]
    from_csv: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<weylball::Error> for Failure {
    fn from(e: weylball::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.threads == 0 {
        return Err(usage("--threads must be positive"));
    }
    let zcfg = ZeroConfig { tol: g.tol, c: g.c };
    zcfg.validate().map_err(|e| usage(e.to_string()))?;

    match cli.command {
        Command::Zero { nu, k } => {
            let order = order_arg(nu)?;
            if k == 0 {
                return Err(usage("--k counts from 1"));
            }
            let r = zeros::zero(order, k, &zcfg)?;
            let mut report = ScanReport::new("zero", &RESIDUAL_COLUMNS);
            report.push(vec![
                order.nu().into(),
                r.k.into(),
                r.value.into(),
                r.approx.into(),
                r.residual.into(),
                r.regime.as_str().into(),
                r.envelope_product().into(),
                r.phase_offset().into(),
            ]);
            emit_table(g, &report)
        }
        Command::ZerosScan { nu, k_from, k_to } => {
            let order = order_arg(nu)?;
            if k_from == 0 || k_to < k_from {
                return Err(usage("need 1 ≤ --k-from ≤ --k-to"));
            }
            let ks: Vec<u64> = (k_from..=k_to).collect();
            let report = scan::with_threads(g.threads, || scan::residual_report(&[order], &ks, &zcfg))??;
            emit_scan(g, &report)
        }
        Command::Count { d, mu, method, radius, budget } => {
            check_dimension_arg(d)?;
            positive("--mu", mu)?;
            let cfg = count_config(g, budget)?;
            if let Some(r) = radius {
                positive("--radius", r)?;
                if method != Method::Exact {
                    return Err(usage("--radius applies to --method exact only"));
                }
                check_budget(mu * r, d, &cfg).map_err(|e| usage(e.to_string()))?;
                let s = scan::with_threads(g.threads, || weylball::spectral::exact_count_radius(mu, d, r, &cfg))??;
                let mut report = ScanReport::new("count", &["d", "mu", "radius", "exact", "weyl_lead", "weyl_second", "remainder", "ambiguous_flag"]);
                report.push(vec![
                    d.into(),
                    mu.into(),
                    r.into(),
                    s.exact.into(),
                    s.weyl_lead.into(),
                    s.weyl_second.into(),
                    s.remainder.into(),
                    s.ambiguous.into(),
                ]);
                return emit_table(g, &report);
            }
            check_budget(mu, d, &cfg).map_err(|e| usage(e.to_string()))?;
            let method = match method {
                Method::Exact => CountMethod::Exact,
                Method::Lattice => CountMethod::Lattice,
                Method::Both => CountMethod::Both,
            };
            let report = scan::with_threads(g.threads, || scan::count_report(d, mu, method, &cfg))??;
            emit_table(g, &report)
        }
        Command::Scan(args) => run_scan(g, &zcfg, args),
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Specfun => Suite::Specfun,
                SuiteArg::Geometry => Suite::Geometry,
                SuiteArg::WeylConstants => Suite::WeylConstants,
                SuiteArg::Approx => Suite::Approx,
                SuiteArg::Comparison => Suite::Comparison,
                SuiteArg::All => Suite::All,
            };
            let reports = scan::with_threads(g.threads, || verify::run(suite))??;
            let mut text = String::new();
            let mut ok = true;
            for r in &reports {
                for c in &r.checks {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    text.push_str(&format!("{mark} {}: {} ({})\n", r.suite, c.name, c.detail));
                }
                ok &= r.passed();
                let mark = if r.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{mark} suite {}\n", r.suite));
            }
            write_output(g.out.as_deref(), &text)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Compute("verification failed".into()))
            }
        }
    }
}

fn run_scan(g: &Global, zcfg: &ZeroConfig, a: ScanArgs) -> Result<(), Failure> {
    let kind = match a.kind {
        Kind::Remainder => ScanKind::Remainder,
        Kind::Residual => ScanKind::Residual,
        Kind::Lemma41 => ScanKind::Lemma41,
        Kind::PsiBlocks => ScanKind::PsiBlocks,
        Kind::Comparison => ScanKind::Comparison,
    };

    if let Some(path) = &a.from_csv {
        let file = fs::File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let mut report = ScanReport::parse_csv(kind.as_str(), file)?;
        report.stats = scan::recompute_stats(kind, &report)?;
        return emit_scan(g, &report);
    }

    if kind == ScanKind::Residual {
        if a.twice_step == 0 || a.k_step == 0 || a.k_min == 0 {
            return Err(usage("residual grid steps and --k-min must be positive"));
        }
        let orders: Vec<BesselOrder> = (a.twice_min..=a.twice_max)
            .step_by(a.twice_step as usize)
            .map(BesselOrder::from_twice)
            .collect();
        let ks: Vec<u64> = (a.k_min..=a.k_max).step_by(a.k_step as usize).collect();
        if orders.is_empty() || ks.is_empty() {
            return Err(usage("empty grid"));
        }
        let report = scan::with_threads(g.threads, || scan::residual_report(&orders, &ks, zcfg))??;
        return emit_scan(g, &report);
    }

    check_dimension_arg(a.d)?;
    let grid = mu_grid(&a)?;
    let cfg = count_config(g, a.budget)?;
    let report = match kind {
        ScanKind::Remainder => {
            check_budget(*grid.last().expect("nonempty"), a.d, &cfg).map_err(|e| usage(e.to_string()))?;
            scan::with_threads(g.threads, || scan::remainder_report(a.d, &grid, &cfg))??
        }
        ScanKind::Lemma41 => scan::with_threads(g.threads, || scan::lemma41_report(a.d, &grid))??,
        ScanKind::PsiBlocks => {
            if let Some(v) = a.v {
                positive("--v", v)?;
            }
            scan::with_threads(g.threads, || scan::psi_blocks_report(a.d, &grid, a.v))??
        }
        ScanKind::Comparison => {
            positive("--comparison-c", a.comparison_c)?;
            check_budget(*grid.last().expect("nonempty"), a.d, &cfg).map_err(|e| usage(e.to_string()))?;
            scan::with_threads(g.threads, || scan::comparison_report(a.d, &grid, a.comparison_c, &cfg))??
        }
        ScanKind::Residual => unreachable!("handled above"),
    };
    emit_scan(g, &report)
}

fn mu_grid(a: &ScanArgs) -> Result<Vec<f64>, Failure> {
    if !a.mu.is_empty() {
        let mut grid = a.mu.clone();
        for &m in &grid {
            positive("--mu", m)?;
        }
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        return Ok(grid);
    }
    if a.samples == 0 {
        return Err(usage("empty grid: --samples must be positive"));
    }
    let grid = if a.linear {
        scan::linear_grid(a.mu_min, a.mu_max, a.samples)
    } else {
        scan::log_grid(a.mu_min, a.mu_max, a.samples)
    };
    grid.map_err(|e| usage(e.to_string()))
}

fn order_arg(nu: f64) -> Result<BesselOrder, Failure> {
    BesselOrder::new(nu).map_err(|e| usage(e.to_string()))
}

fn positive(flag: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("{flag} must be positive and finite, got {v}")))
    }
}

fn check_dimension_arg(d: u32) -> Result<(), Failure> {
    if (3..=weylball::spectral::MAX_DIMENSION).contains(&d) {
        Ok(())
    } else {
        Err(usage(format!("--d must lie in 3..={}, got {d}", weylball::spectral::MAX_DIMENSION)))
    }
}

fn count_config(g: &Global, budget: Option<f64>) -> Result<CountConfig, Failure> {
    if let Some(b) = budget {
        positive("--budget", b)?;
    }
    Ok(CountConfig { budget, tol: g.tol })
}

fn render(g: &Global, report: &ScanReport) -> String {
    match g.format {
        Format::Csv => report.to_csv_string(),
        Format::Json => report.to_json(),
    }
}

fn emit_table(g: &Global, report: &ScanReport) -> Result<(), Failure> {
    write_output(g.out.as_deref(), &render(g, report))
}

/// The table to `--out` (or stdout) and the statistics next to it
/// (or to stderr when writing to stdout).
fn emit_scan(g: &Global, report: &ScanReport) -> Result<(), Failure> {
    let table = render(g, report);
    let stats = report.stats_json();
    match &g.out {
        Some(path) => {
            fs::write(path, table)?;
            fs::write(stats_path(path), stats)?;
        }
        None => {
            io::stdout().write_all(table.as_bytes())?;
            io::stderr().write_all(stats.as_bytes())?;
        }
    }
    Ok(())
}

fn stats_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".stats.json");
    PathBuf::from(s)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
