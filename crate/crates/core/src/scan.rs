//! Scan drivers: build [`ScanReport`]s for each kind of sweep and derive
//! their fitted statistics from the table alone.
//!
//! Rows are always produced in grid order (parallel work is collected in
//! order) and every reduction is either integer or order-independent, so
//! the bytes written do not depend on the number of worker threads.

use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact_sum::ExactSum;
use crate::geometry::truncated_dilate_volume;
use crate::lattice::{
    columns, comparison_check, decomposition_from_columns, decomposition_range, default_head,
    psi_sum_blocks, weighted_count,
};
use crate::report::{Cell, ScanReport};
use crate::specfun::BesselOrder;
use crate::spectral::{exact_count_with, CountConfig, HUXLEY_EXPONENT};
use crate::stats::{least_squares_slope, quartile_ratio};
use crate::zeros::{make_record, zero_value, ZeroConfig, ZeroRegime};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    Remainder,
    Residual,
    Lemma41,
    PsiBlocks,
    Comparison,
}

impl ScanKind {
    pub const ALL: [ScanKind; 5] = [
        ScanKind::Remainder,
        ScanKind::Residual,
        ScanKind::Lemma41,
        ScanKind::PsiBlocks,
        ScanKind::Comparison,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScanKind::Remainder => "remainder",
            ScanKind::Residual => "residual",
            ScanKind::Lemma41 => "lemma41",
            ScanKind::PsiBlocks => "psi-blocks",
            ScanKind::Comparison => "comparison",
        }
    }
}

impl FromStr for ScanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScanKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Report(format!("unknown scan kind {s:?}")))
    }
}

/// Run `f` on a dedicated pool of `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Err(domain("thread count", 0.0));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Inconsistent(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// `samples` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    check_range(lo, hi, samples)?;
    if samples == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == samples => hi,
            _ => (a + step * i as f64).exp(),
        })
        .collect())
}

/// `samples` evenly spaced points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    check_range(lo, hi, samples)?;
    if samples == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| if i + 1 == samples { hi } else { lo + step * i as f64 })
        .collect())
}

fn check_range(lo: f64, hi: f64, samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::Inconsistent("empty grid".into()));
    }
    if !(lo > 0.0) || !lo.is_finite() {
        return Err(domain("grid start", lo));
    }
    if !(hi >= lo) || !hi.is_finite() || (samples > 1 && hi == lo) {
        return Err(domain("grid end", hi));
    }
    Ok(())
}

fn require_ascending(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Inconsistent("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Inconsistent("grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Recompute the statistics of a report of the given kind from its rows.
pub fn recompute_stats(kind: ScanKind, report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    match kind {
        ScanKind::Remainder => remainder_stats(report),
        ScanKind::Residual => residual_stats(report),
        ScanKind::Lemma41 => lemma41_stats(report),
        ScanKind::PsiBlocks => psi_blocks_stats(report),
        ScanKind::Comparison => comparison_stats(report),
    }
}

fn stat(name: &str, v: impl Into<Cell>) -> (String, Cell) {
    (name.to_string(), v.into())
}

fn opt(v: Option<f64>) -> Cell {
    Cell::Float(v.unwrap_or(f64::NAN))
}

// ---------------------------------------------------------------- remainder

pub const REMAINDER_COLUMNS: [&str; 10] = [
    "d",
    "mu",
    "exact",
    "weyl_lead",
    "weyl_second",
    "remainder",
    "normalized_remainder",
    "ambiguous_flag",
    "log_mu",
    "log_abs_remainder",
];

pub fn remainder_report(d: u32, grid: &[f64], cfg: &CountConfig) -> Result<ScanReport> {
    require_ascending(grid)?;
    let rows = grid
        .par_iter()
        .map(|&mu| exact_count_with(mu, d, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::new(ScanKind::Remainder.as_str(), &REMAINDER_COLUMNS);
    for r in rows {
        report.push(vec![
            r.d.into(),
            r.mu.into(),
            r.exact.into(),
            r.weyl_lead.into(),
            r.weyl_second.into(),
            r.remainder.into(),
            r.normalized_remainder().into(),
            r.ambiguous.into(),
            r.mu.ln().into(),
            r.remainder.abs().ln().into(),
        ]);
    }
    report.stats = remainder_stats(&report)?;
    Ok(report)
}

pub fn remainder_stats(report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    let mus = report.floats("mu")?;
    let rem = report.floats("remainder")?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = mus
        .iter()
        .zip(&rem)
        .filter(|(_, r)| **r != 0.0)
        .map(|(m, r)| (m.ln(), r.abs().ln()))
        .unzip();
    let normalized: Vec<f64> = report
        .floats("normalized_remainder")?
        .into_iter()
        .filter(|v| v.is_finite())
        .collect();
    let d = report.column("d")?.first().and_then(|c| c.as_int()).unwrap_or(3) as f64;
    let ambiguous = report.column("ambiguous_flag")?.iter().filter(|c| c.as_bool() == Some(true)).count();
    Ok(vec![
        stat("slope", opt(least_squares_slope(&xs, &ys))),
        stat("predicted_slope", d - 2.0 + HUXLEY_EXPONENT),
        stat("trivial_slope", d - 1.0),
        stat("normalized_quartile_ratio", opt(quartile_ratio(&normalized))),
        stat("normalized_max", normalized.iter().fold(0.0, |a: f64, b| a.max(*b))),
        stat("ambiguous_rows", ambiguous),
    ])
}

// ----------------------------------------------------------------- residual

pub const RESIDUAL_COLUMNS: [&str; 8] =
    ["nu", "k", "value", "approx", "residual", "regime", "envelope_product", "phase_offset"];

/// Certify the zeros of every order in `orders` for every k in `ks`.
/// A zero that cannot be certified becomes a row with regime `failed`.
pub fn residual_report(orders: &[BesselOrder], ks: &[u64], cfg: &ZeroConfig) -> Result<ScanReport> {
    cfg.validate()?;
    if orders.is_empty() || ks.is_empty() {
        return Err(Error::Inconsistent("empty residual grid".into()));
    }
    let pairs: Vec<(BesselOrder, u64)> = orders
        .iter()
        .flat_map(|&o| ks.iter().map(move |&k| (o, k)))
        .collect();
    let rows: Vec<Vec<Cell>> = pairs
        .par_iter()
        .map(|&(o, k)| match zero_value(o, k, cfg.tol) {
            Ok(v) => {
                let r = make_record(o, k, v, cfg.c);
                vec![
                    o.nu().into(),
                    k.into(),
                    r.value.into(),
                    r.approx.into(),
                    r.residual.into(),
                    r.regime.as_str().into(),
                    r.envelope_product().into(),
                    r.phase_offset().into(),
                ]
            }
            Err(_) => vec![
                o.nu().into(),
                k.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                "failed".into(),
                f64::NAN.into(),
                f64::NAN.into(),
            ],
        })
        .collect();
    let mut report = ScanReport::new(ScanKind::Residual.as_str(), &RESIDUAL_COLUMNS);
    for row in rows {
        report.push(row);
    }
    report.stats = residual_stats(&report)?;
    Ok(report)
}

pub fn residual_stats(report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    let regimes = report.column("regime")?;
    let products = report.floats("envelope_product")?;
    let offsets = report.floats("phase_offset")?;
    let nus = report.floats("nu")?;
    let values = report.floats("value")?;
    let (mut c_osc, mut c_tr) = (0.0f64, 0.0f64);
    let (mut failures, mut violations) = (0usize, 0usize);
    let mut large_nu_offset = 0.0f64;
    for i in 0..report.rows.len() {
        match regimes[i].as_text() {
            Some(s) if s == ZeroRegime::Oscillatory.as_str() => c_osc = c_osc.max(products[i]),
            Some(s) if s == ZeroRegime::Transition.as_str() => c_tr = c_tr.max(products[i]),
            _ => {
                failures += 1;
                continue;
            }
        }
        if !(offsets[i] > -0.125 && offsets[i] < 0.25) {
            violations += 1;
        }
        if nus[i] >= 100.0 && values[i] >= 1.5 * nus[i] {
            large_nu_offset = large_nu_offset.max(offsets[i].abs());
        }
    }
    Ok(vec![
        stat("records", report.rows.len() - failures),
        stat("failures", failures),
        stat("c_osc", c_osc),
        stat("c_tr", c_tr),
        stat("window_violations", violations),
        stat("max_phase_offset_large_nu", large_nu_offset),
    ])
}

// ------------------------------------------------------------------ lemma41

pub const LEMMA41_COLUMNS: [&str; 12] = [
    "d",
    "mu",
    "level",
    "l",
    "count",
    "volume_term",
    "boundary_term",
    "psi_sum",
    "sum_linear",
    "euler_maclaurin_error",
    "identity_defect",
    "lemma41_residual_normalized",
];

/// The levels examined at each μ: `0`, `⌊μ/4⌋`, `⌊μ/2⌋`.
pub const LEMMA41_LEVELS: [(&str, f64); 3] = [("zero", 0.0), ("quarter", 0.25), ("half", 0.5)];

pub fn lemma41_report(d: u32, grid: &[f64]) -> Result<ScanReport> {
    require_ascending(grid)?;
    let per_mu = grid
        .par_iter()
        .map(|&mu| {
            let cols = columns(mu, d)?;
            let range = decomposition_range(mu, d);
            let mut rows = Vec::new();
            for (label, frac) in LEMMA41_LEVELS {
                let l = (frac * mu).floor() as u64;
                if l >= range {
                    continue;
                }
                let vol = truncated_dilate_volume(mu, l, d)?;
                let dec = decomposition_from_columns(&cols, mu, l, d, vol)?;
                rows.push(vec![
                    d.into(),
                    mu.into(),
                    label.into(),
                    l.into(),
                    dec.count.into(),
                    dec.volume_term.into(),
                    dec.boundary_term.into(),
                    dec.psi_sum.into(),
                    dec.sum_linear.into(),
                    dec.euler_maclaurin_error.into(),
                    dec.identity_defect.into(),
                    dec.residual_normalized().into(),
                ]);
            }
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::new(ScanKind::Lemma41.as_str(), &LEMMA41_COLUMNS);
    for row in per_mu.into_iter().flatten() {
        report.push(row);
    }
    report.stats = lemma41_stats(&report)?;
    Ok(report)
}

pub fn lemma41_stats(report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    let levels = report.column("level")?;
    let mus = report.floats("mu")?;
    let normalized = report.floats("lemma41_residual_normalized")?;
    let em = report.floats("euler_maclaurin_error")?;
    let defects = report.floats("identity_defect")?;
    let mut out = vec![stat("identity_violations", defects.iter().filter(|&&v| v != 0.0).count())];
    let em_const = mus
        .iter()
        .zip(&em)
        .map(|(m, e)| e.abs() / m.cbrt())
        .fold(0.0, f64::max);
    out.push(stat("euler_maclaurin_constant", em_const));
    for (label, _) in LEMMA41_LEVELS {
        let series: Vec<f64> = levels
            .iter()
            .zip(&normalized)
            .filter(|(l, v)| l.as_text() == Some(label) && v.is_finite())
            .map(|(_, v)| *v)
            .collect();
        out.push(stat(&format!("{label}_max_normalized"), series.iter().fold(0.0, |a: f64, b| a.max(*b))));
        out.push(stat(&format!("{label}_quartile_ratio"), opt(quartile_ratio(&series))));
    }
    Ok(out)
}

// --------------------------------------------------------------- psi-blocks

pub const PSI_BLOCK_COLUMNS: [&str; 11] = [
    "d",
    "mu",
    "v",
    "j",
    "M",
    "terms",
    "block_value",
    "huxley_ratio",
    "rescaling_deviation",
    "head_value",
    "partition_exact",
];

/// Dyadic ψ-blocks at each μ of the grid; `v = None` uses `V = μ^{131/208}`.
pub fn psi_blocks_report(d: u32, grid: &[f64], v: Option<f64>) -> Result<ScanReport> {
    require_ascending(grid)?;
    let per_mu = grid
        .par_iter()
        .map(|&mu| psi_sum_blocks(mu, d, v.unwrap_or_else(|| default_head(mu))))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::new(ScanKind::PsiBlocks.as_str(), &PSI_BLOCK_COLUMNS);
    for b in per_mu {
        let exact = b.rebuilt == b.direct;
        for blk in &b.blocks {
            report.push(vec![
                d.into(),
                b.mu.into(),
                b.v.into(),
                blk.j.into(),
                blk.m.into(),
                blk.terms.into(),
                blk.value.into(),
                blk.huxley_ratio.into(),
                blk.rescaling_deviation.into(),
                b.head.into(),
                exact.into(),
            ]);
        }
    }
    report.stats = psi_blocks_stats(&report)?;
    Ok(report)
}

pub fn psi_blocks_stats(report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    let mus = report.floats("mu")?;
    let ratios = report.floats("huxley_ratio")?;
    let values = report.floats("block_value")?;
    let terms = report.floats("terms")?;
    let exact = report.column("partition_exact")?;
    let max_for = |mu: f64| {
        mus.iter()
            .zip(&ratios)
            .filter(|(m, _)| **m == mu)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    };
    let (first, last) = match (mus.first(), mus.last()) {
        (Some(&a), Some(&b)) => (max_for(a), max_for(b)),
        _ => (f64::NAN, f64::NAN),
    };
    let trivial_violations = values.iter().zip(&terms).filter(|(v, t)| v.abs() > **t / 2.0).count();
    Ok(vec![
        stat("max_huxley_ratio", ratios.iter().fold(0.0, |a: f64, b| a.max(*b))),
        stat("first_mu_max_ratio", first),
        stat("last_mu_max_ratio", last),
        stat("trivial_bound_violations", trivial_violations),
        stat("partition_exact", exact.iter().all(|c| c.as_bool() == Some(true))),
    ])
}

// --------------------------------------------------------------- comparison

pub const COMPARISON_COLUMNS: [&str; 9] =
    ["d", "mu", "c", "exact", "weighted", "lhs", "sandwich", "slack", "slack_normalized"];

pub fn comparison_report(d: u32, grid: &[f64], c: f64, cfg: &CountConfig) -> Result<ScanReport> {
    require_ascending(grid)?;
    let rows = grid
        .par_iter()
        .map(|&mu| comparison_check(mu, d, c, cfg))
        .collect::<Result<Vec<_>>>()?;
    let mut report = ScanReport::new(ScanKind::Comparison.as_str(), &COMPARISON_COLUMNS);
    for r in rows {
        report.push(vec![
            r.d.into(),
            r.mu.into(),
            r.c.into(),
            r.exact.into(),
            r.weighted.into(),
            r.lhs.into(),
            r.sandwich.into(),
            Cell::Int(r.slack),
            r.slack_normalized.into(),
        ]);
    }
    report.stats = comparison_stats(&report)?;
    Ok(report)
}

pub fn comparison_stats(report: &ScanReport) -> Result<Vec<(String, Cell)>> {
    let slack = report.floats("slack_normalized")?;
    let lhs = report.floats("lhs")?;
    let positive: Vec<f64> = slack.iter().map(|s| s.max(0.0)).collect();
    let max_pos = positive.iter().fold(0.0, |a: f64, b| a.max(*b));
    let min_pos = positive.iter().fold(f64::INFINITY, |a: f64, b| a.min(*b));
    Ok(vec![
        stat("max_positive_slack_normalized", max_pos),
        stat("min_positive_slack_normalized", if positive.is_empty() { f64::NAN } else { min_pos }),
        stat("rows_exceeding_sandwich", slack.iter().filter(|&&s| s > 0.0).count()),
        stat("max_lhs", lhs.iter().fold(0.0, |a: f64, b| a.max(*b))),
    ])
}

// -------------------------------------------------------------------- count

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Exact,
    Lattice,
    Both,
}

/// A one-row report for a single (d, μ).
pub fn count_report(d: u32, mu: f64, method: CountMethod, cfg: &CountConfig) -> Result<ScanReport> {
    match method {
        CountMethod::Exact => {
            let mut r = ScanReport::new("count", &REMAINDER_COLUMNS[..8]);
            let s = exact_count_with(mu, d, cfg)?;
            r.push(vec![
                d.into(),
                mu.into(),
                s.exact.into(),
                s.weyl_lead.into(),
                s.weyl_second.into(),
                s.remainder.into(),
                s.normalized_remainder().into(),
                s.ambiguous.into(),
            ]);
            Ok(r)
        }
        CountMethod::Lattice => {
            let mut r = ScanReport::new(
                "count",
                &["d", "mu", "weighted", "volume_term", "boundary_term", "psi_sum", "lemma41_residual_normalized"],
            );
            let l = weighted_count(mu, d)?;
            r.push(vec![
                d.into(),
                mu.into(),
                l.weighted.into(),
                l.volume_term.into(),
                l.boundary_term.into(),
                l.psi_sum.into(),
                l.residual_normalized().into(),
            ]);
            Ok(r)
        }
        CountMethod::Both => {
            let mut r = ScanReport::new(
                "count",
                &["d", "mu", "exact", "weighted", "diff", "diff_normalized", "remainder", "ambiguous_flag"],
            );
            let s = exact_count_with(mu, d, cfg)?;
            let l = weighted_count(mu, d)?;
            let diff = s.exact.abs_diff(l.weighted);
            r.push(vec![
                d.into(),
                mu.into(),
                s.exact.into(),
                l.weighted.into(),
                diff.into(),
                (diff as f64 / mu.powf(d as f64 - 2.0 + 4.0 / 7.0)).into(),
                s.remainder.into(),
                s.ambiguous.into(),
            ]);
            Ok(r)
        }
    }
}

/// Exact sum of one float column; used by consumers that want a total
/// independent of row order.
pub fn column_total(report: &ScanReport, name: &str) -> Result<f64> {
    Ok(report.floats(name)?.into_iter().collect::<ExactSum>().value())
}
