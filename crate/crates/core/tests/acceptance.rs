//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines always reach the
//! terminal; the process exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use weylball::lattice::{
    comparison_check, decomposition_range, straddle_multiplicity, volume_boundary_decomposition, weighted_count,
    weyl_constant_identity,
};
use weylball::report::ScanReport;
use weylball::scan::{self, lemma41_report, log_grid, remainder_report};
use weylball::spectral::{brute_force_count, exact_count, CountConfig};
use weylball::stats::{least_squares_slope, quartile_ratio, relative_change};
use weylball::zeros::{residual_scan, zero, ResidualScan, ZeroConfig};
use weylball::BesselOrder;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let o = f();
    (o, t.elapsed())
}

fn within(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    let ok = elapsed <= limit;
    Outcome {
        passed: o.passed && ok,
        detail: format!("{}; {:.2?} (limit {:?})", o.detail, elapsed, limit),
    }
}

fn half_integer_exactness() -> Outcome {
    let (o, t) = timed(|| {
        let cfg = ZeroConfig::default();
        let order = BesselOrder::new(0.5).unwrap();
        let mut worst = 0.0f64;
        for k in 1..=10_000u64 {
            match zero(order, k, &cfg) {
                Ok(r) => worst = worst.max((r.value / (k as f64 * PI) - 1.0).abs()),
                Err(e) => return outcome(false, format!("k = {k}: {e}")),
            }
        }
        outcome(worst <= 1e-11, format!("max relative error {worst:.2e} over k ≤ 10^4"))
    });
    within(o, t, Duration::from_secs(10))
}

fn classical_zeros() -> Outcome {
    // 40-digit references from an independent arbitrary-precision solver
    let reference = [
        (0.0, 1, 2.404825557695772768621631879326454643124),
        (1.0, 1, 3.831705970207512315614435886308160766565),
        (0.0, 2, 5.520078110286310649596604112813027425222),
    ];
    let cfg = ZeroConfig::default();
    let mut worst = 0.0f64;
    for (nu, k, want) in reference {
        let got = zero(BesselOrder::new(nu).unwrap(), k, &cfg).unwrap().value;
        worst = worst.max((got / want - 1.0).abs());
    }
    outcome(worst <= 1e-11, format!("max relative error {worst:.2e}"))
}

fn weyl_constants() -> Outcome {
    let (o, t) = timed(|| {
        let mut worst = 0.0f64;
        for d in 3..=12 {
            let (quad, closed) = weyl_constant_identity(d).unwrap();
            worst = worst.max((quad - closed).abs());
        }
        outcome(worst <= 1e-10, format!("max |quadrature − closed form| {worst:.2e} for d = 3..=12"))
    });
    within(o, t, Duration::from_secs(1))
}

fn small_mu_equivalence() -> Outcome {
    let (o, t) = timed(|| {
        let mut brute_bad = Vec::new();
        let mut lattice_bad = Vec::new();
        let mut straddling = 0;
        for i in 1..=200 {
            let mu = 12.0 * i as f64 / 200.0;
            let exact = exact_count(mu, 3).unwrap().exact;
            if brute_force_count(mu, 3).unwrap() != exact {
                brute_bad.push(mu);
            }
            let weighted = weighted_count(mu, 3).unwrap().weighted;
            let straddle = straddle_multiplicity(mu, 3, 1e-12).unwrap();
            if straddle > 0 {
                straddling += 1;
            }
            if exact.abs_diff(weighted) > straddle {
                lattice_bad.push(mu);
            }
        }
        outcome(
            brute_bad.is_empty() && lattice_bad.is_empty(),
            format!(
                "enumeration mismatches {brute_bad:?}, unexplained lattice differences {lattice_bad:?}, \
                 {straddling} of 200 values with straddling zeros"
            ),
        )
    });
    within(o, t, Duration::from_secs(120))
}

struct Envelopes {
    full: ResidualScan,
    extended: ResidualScan,
}

fn envelope_scans() -> (Result<Envelopes, String>, Duration) {
    let t = Instant::now();
    let cfg = ZeroConfig::default();
    let run = || -> Result<Envelopes, String> {
        let orders: Vec<BesselOrder> = (1..=400).map(BesselOrder::from_twice).collect();
        let ks: Vec<u64> = (1..=2000).collect();
        let full = residual_scan(&orders, &ks, &cfg).map_err(|e| e.to_string())?;
        // ν ≤ 400 on every fourth order and every tenth k
        let orders: Vec<BesselOrder> = (1..=800).step_by(4).map(BesselOrder::from_twice).collect();
        let ks: Vec<u64> = (1..=2000).step_by(10).collect();
        let extended = residual_scan(&orders, &ks, &cfg).map_err(|e| e.to_string())?;
        Ok(Envelopes { full, extended })
    };
    let r = scan::with_threads(4, run).map_err(|e| e.to_string()).and_then(|r| r);
    (r, t.elapsed())
}

fn envelope_constants(env: &Result<Envelopes, String>, elapsed: Duration) -> Outcome {
    let o = match env {
        Err(e) => outcome(false, e.clone()),
        Ok(Envelopes { full, extended }) => {
            let osc = relative_change(full.c_osc, extended.c_osc);
            let tr = relative_change(full.c_tr, extended.c_tr);
            let finite = full.c_osc.is_finite() && full.c_tr.is_finite() && full.failures.is_empty();
            outcome(
                finite && osc < 0.1 && tr < 0.1,
                format!(
                    "ν ≤ 200: C_osc {:.4}, C_tr {:.4} ({} zeros, {} failures); ν ≤ 400 subsample: C_osc {:.4} ({:.1}%), C_tr {:.4} ({:.1}%)",
                    full.c_osc,
                    full.c_tr,
                    full.records.len(),
                    full.failures.len(),
                    extended.c_osc,
                    100.0 * osc,
                    extended.c_tr,
                    100.0 * tr
                ),
            )
        }
    };
    within(o, elapsed, Duration::from_secs(300))
}

fn phase_window(env: &Result<Envelopes, String>) -> Outcome {
    match env {
        Err(e) => outcome(false, e.clone()),
        Ok(Envelopes { full, extended }) => {
            let records = full.records.iter().chain(&extended.records);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut n = 0usize;
            for r in records {
                let off = r.phase_offset();
                lo = lo.min(off);
                hi = hi.max(off);
                n += 1;
            }
            let violations = full.window_violations + extended.window_violations;
            outcome(
                violations == 0 && lo > -0.125 && hi < 0.25,
                format!("{violations} violations over {n} records; offsets in [{lo:.4}, {hi:.4}]"),
            )
        }
    }
}

fn remainder_growth() -> Outcome {
    let (o, t) = timed(|| {
        let grid = log_grid(50.0, 800.0, 40).unwrap();
        let report = scan::with_threads(4, || remainder_report(3, &grid, &CountConfig::default()))
            .unwrap()
            .unwrap();
        let mus = report.floats("mu").unwrap();
        let rem = report.floats("remainder").unwrap();
        let norm: Vec<f64> = report.floats("normalized_remainder").unwrap().iter().map(|v| v.abs()).collect();
        let xs: Vec<f64> = mus.iter().map(|m| m.ln()).collect();
        let ys: Vec<f64> = rem.iter().map(|r| r.abs().ln()).collect();
        let slope = least_squares_slope(&xs, &ys).unwrap();
        let ratio = quartile_ratio(&norm).unwrap();
        outcome(
            (1.3..=1.95).contains(&slope) && ratio <= 2.0,
            format!("slope {slope:.4}; normalized last/first quartile mean {ratio:.3}"),
        )
    });
    within(o, t, Duration::from_secs(300))
}

fn sandwich() -> Outcome {
    let cfg = CountConfig::default();
    let grid = [20.0, 50.0, 100.0, 200.0];
    let rows: Vec<_> = grid.iter().map(|&mu| comparison_check(mu, 3, 2.0, &cfg).unwrap()).collect();
    // the constant needed on a prefix of the grid versus on the whole grid
    let positive: Vec<f64> = rows.iter().map(|r| r.slack_normalized.max(0.0)).collect();
    let sup = |s: &[f64]| s.iter().fold(0.0f64, |a, b| a.max(*b));
    let (head, all) = (sup(&positive[..3]), sup(&positive));
    let stable = if head == 0.0 { all == 0.0 } else { relative_change(head, all) <= 0.2 };
    let detail: Vec<String> = rows
        .iter()
        .map(|r| format!("μ={}: |diff| {} vs sandwich {}", r.mu, r.lhs, r.sandwich))
        .collect();
    outcome(
        stable,
        format!("constant {all:.3e} (prefix {head:.3e}); {}", detail.join(", ")),
    )
}

fn level_series(report: &ScanReport, label: &str) -> Vec<f64> {
    let levels = report.column("level").unwrap();
    let norm = report.floats("lemma41_residual_normalized").unwrap();
    levels
        .iter()
        .zip(&norm)
        .filter(|(l, _)| l.as_text() == Some(label))
        .map(|(_, v)| *v)
        .collect()
}

/// Bounded with no upward trend, on the scan grid and on a dense one. The
/// sampled maximum itself creeps up with density (𝒩_l is a step function), so
/// it is reported rather than required to be stable.
fn lemma41(report: &ScanReport, dense: &ScanReport) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    let sup = |s: &[f64]| s.iter().fold(0.0f64, |a, b| a.max(*b));
    for label in ["zero", "quarter", "half"] {
        let (coarse, fine) = (level_series(report, label), level_series(dense, label));
        let (ratio, fine_ratio) = (quartile_ratio(&coarse).unwrap(), quartile_ratio(&fine).unwrap());
        ok &= coarse.iter().chain(&fine).all(|v| v.is_finite()) && ratio <= 2.0 && fine_ratio <= 2.0;
        parts.push(format!(
            "{label}: max {:.2e} (dense {:.2e}), quartile ratio {ratio:.2} (dense {fine_ratio:.2})",
            sup(&coarse),
            sup(&fine)
        ));
    }
    outcome(ok, parts.join("; "))
}

fn decomposition(report: &ScanReport) -> Outcome {
    let scanned = report.floats("identity_defect").unwrap();
    let mut bad = scanned.iter().filter(|&&v| v != 0.0).count();
    let mut total = scanned.len();
    // and every level at a few unaligned μ
    for mu in [57.3, 211.0, 640.25] {
        for l in 0..decomposition_range(mu, 3) {
            let dec = volume_boundary_decomposition(mu, l, 3).unwrap();
            total += 1;
            if dec.identity_defect != 0.0 {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{bad} nonzero defects over {total} (μ, l) pairs"))
}

fn determinism() -> Outcome {
    let grid = log_grid(50.0, 800.0, 40).unwrap();
    let csv = |threads| {
        scan::with_threads(threads, || remainder_report(3, &grid, &CountConfig::default()))
            .unwrap()
            .unwrap()
            .to_csv_string()
    };
    let (one, eight) = (csv(1), csv(8));
    outcome(one == eight, format!("{} bytes, identical: {}", one.len(), one == eight))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    results.push((1, "zeros of J_1/2 are kπ", half_integer_exactness()));
    results.push((2, "classical zeros", classical_zeros()));
    results.push((3, "Weyl-constant identity", weyl_constants()));
    results.push((4, "small-μ exact equivalence", small_mu_equivalence()));

    let (env, elapsed) = envelope_scans();
    results.push((5, "envelope constants", envelope_constants(&env, elapsed)));
    results.push((6, "phase window", phase_window(&env)));
    drop(env);

    results.push((7, "remainder growth", remainder_growth()));
    results.push((8, "comparison sandwich", sandwich()));

    let grid = log_grid(50.0, 800.0, 40).unwrap();
    let report = scan::with_threads(4, || lemma41_report(3, &grid)).unwrap().unwrap();
    let dense = scan::with_threads(4, || lemma41_report(3, &log_grid(50.0, 800.0, 1249).unwrap())).unwrap().unwrap();
    results.push((9, "lattice residual", lemma41(&report, &dense)));
    results.push((10, "decomposition exactness", decomposition(&report)));
    results.push((11, "determinism across thread counts", determinism()));

    let mut failed = 0;
    for (n, name, o) in &results {
        let mark = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {mark}  {name}: {}", o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
