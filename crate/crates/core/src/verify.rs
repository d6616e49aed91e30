//! Self-check suites behind `weylball verify`.
//!
//! Each suite is a list of named checks with a pass flag and a one-line
//! detail. Reference values here are independent of the code under test:
//! closed forms, or digits taken from an extended-precision evaluation.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, g_derivative, g_inverse, minkowski_f, PROFILE_AREA};
use crate::lattice::{
    comparison_check, straddle_multiplicity, volume_boundary_decomposition, weighted_count,
    weyl_constant_identity,
};
use crate::quadrature::integrate_right_sqrt;
use crate::specfun::{
    airy_ai, bessel_j, bessel_j_oscillatory_approx, bessel_j_transition_approx, olver_zeta,
    AsymptoticConfig, BesselOrder,
};
use crate::spectral::{brute_force_count, exact_count, weyl_terms, weyl_terms_from_volumes, CountConfig};
use crate::zeros::{residual_scan, ZeroConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Geometry,
    WeylConstants,
    Approx,
    Comparison,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["specfun", "geometry", "weyl-constants", "approx", "comparison", "all"];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Specfun,
                Suite::Geometry,
                Suite::WeylConstants,
                Suite::Approx,
                Suite::Comparison,
            ],
            s => vec![s],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Geometry => "geometry",
            Suite::WeylConstants => "weyl-constants",
            Suite::Approx => "approx",
            Suite::Comparison => "comparison",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "specfun" => Suite::Specfun,
            "geometry" => Suite::Geometry,
            "weyl-constants" => Suite::WeylConstants,
            "approx" => Suite::Approx,
            "comparison" => Suite::Comparison,
            "all" => Suite::All,
            _ => return Err(Error::Report(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check { name: name.to_string(), passed, detail }
}

/// Run a suite (or all of them).
pub fn run(suite: Suite) -> Result<Vec<SuiteReport>> {
    suite
        .expand()
        .into_iter()
        .map(|s| {
            let checks = match s {
                Suite::Specfun => specfun_suite()?,
                Suite::Geometry => geometry_suite()?,
                Suite::WeylConstants => weyl_constants_suite()?,
                Suite::Approx => approx_suite()?,
                Suite::Comparison => comparison_suite()?,
                Suite::All => unreachable!("expanded"),
            };
            Ok(SuiteReport { suite: s.as_str(), checks })
        })
        .collect()
}

/// Deterministic, well-spread points in `[0,1)^3` (additive recurrence with
/// the plastic-number generalisation of the golden ratio).
pub fn kronecker_points(count: usize) -> impl Iterator<Item = [f64; 3]> {
    // φ_3 is the real root of x⁴ = x + 1
    let phi = 1.220_744_084_605_759_5_f64;
    let alpha = [1.0 / phi, 1.0 / (phi * phi), 1.0 / (phi * phi * phi)];
    (1..=count).map(move |i| {
        let i = i as f64;
        [(0.5 + alpha[0] * i).fract(), (0.5 + alpha[1] * i).fract(), (0.5 + alpha[2] * i).fract()]
    })
}

// ------------------------------------------------------------------ specfun

/// `(ν, x, J_ν(x))` from a 30-digit evaluation.
pub const BESSEL_REFERENCE: [(f64, f64, f64); 6] = [
    (1.0, 1.0, 0.440_050_585_744_933_5),
    (0.0, 100.0, 0.019_985_850_304_223_122),
    (20.0, 40.0, 0.127_793_933_550_848_9),
    (100.0, 100.5, 0.105_739_878_875_664_07),
    (50.0, 74.0, 0.104_639_739_058_906_12),
    (0.5, PI, 0.0),
];

fn specfun_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for &(nu, x, want) in &BESSEL_REFERENCE {
        let got = bessel_j(BesselOrder::new(nu)?, x)?;
        let err = if want == 0.0 { got.abs() } else { (got / want - 1.0).abs() };
        worst = worst.max(err);
    }
    out.push(check("reference values", worst <= 1e-12, format!("max relative error {worst:.2e}")));

    let half = BesselOrder::from_twice(1);
    let worst = (1..=20_000)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * 0.5;
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            bessel_j(half, x).map(|j| (j - exact).abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(check("half-integer reduction", worst <= 1e-13, format!("max |error| {worst:.2e} on (0, 1e4]")));

    let worst = (2..=400u64)
        .into_par_iter()
        .map(|twice| {
            let o = BesselOrder::from_twice(twice);
            let nu = o.nu();
            let mut worst = 0.0f64;
            for i in 0..=200 {
                let x = 1.0 + i as f64 * 4.995;
                let below = bessel_j(BesselOrder::from_twice(twice - 2), x)?;
                let above = bessel_j(BesselOrder::from_twice(twice + 2), x)?;
                let mid = 2.0 * nu / x * bessel_j(o, x)?;
                let scale = below.abs().max(above.abs()).max(mid.abs());
                if scale < 1e-280 {
                    continue;
                }
                worst = worst.max((below + above - mid).abs() / scale);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(check("three-term recurrence", worst <= 1e-10, format!("max relative defect {worst:.2e}")));

    let t1 = first_airy_zero();
    let (lo, hi) = ((1.5 * PI * 0.64f64).powf(2.0 / 3.0), (1.5 * PI * 0.86f64).powf(2.0 / 3.0));
    out.push(check(
        "first Airy zero window",
        t1 > lo && t1 < hi,
        format!("t1 = {t1:.15} in ({lo:.4}, {hi:.4})"),
    ));

    let c = airy_oscillation_constant();
    out.push(check(
        "Airy oscillatory form",
        c.is_finite() && c < 1.0,
        format!("sup r^(3/2)|sqrt(pi) r^(1/4) Ai(-r) - sin(2r^(3/2)/3 + pi/4)| = {c:.4} on [5, 100]"),
    ));

    let mut worst = 0.0f64;
    for i in 0..=5000 {
        let z = 1.0 + 1e-6 * (5e7f64).powf(i as f64 / 5000.0);
        let z = z.min(50.0);
        let zeta = olver_zeta(z)?;
        let lhs = 2.0 / 3.0 * (-zeta).powf(1.5);
        let rhs = ((z - 1.0) * (z + 1.0)).sqrt() - (1.0 / z).acos();
        worst = worst.max((lhs - rhs).abs());
    }
    out.push(check("zeta round trip", worst <= 1e-12, format!("max |defect| {worst:.2e} on [1+1e-6, 50]")));

    let mut worst = 0.0f64;
    for &nu in &[10.0, 33.5, 120.0] {
        for i in 1..=100 {
            let z = 1.0 + 0.05 * i as f64;
            let x = nu * z;
            let lhs = nu.powf(2.0 / 3.0) * olver_zeta(z)?;
            let rhs = -(1.5 * PI * x * geometry::g(nu / x)?).powf(2.0 / 3.0);
            worst = worst.max((lhs / rhs - 1.0).abs());
        }
    }
    out.push(check("zeta-phase identity", worst <= 1e-12, format!("max relative defect {worst:.2e}")));
    Ok(out)
}

/// The first zero of Ai on the negative axis, as a positive number.
pub fn first_airy_zero() -> f64 {
    let (mut a, mut b) = (2.0, 2.6);
    while b - a > 1e-15 {
        let m = 0.5 * (a + b);
        if airy_ai(-m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `sup_{r∈[5,100]} r^{3/2} |√π r^{1/4} Ai(−r) − sin(2r^{3/2}/3 + π/4)|`.
pub fn airy_oscillation_constant() -> f64 {
    (0..=9500)
        .map(|i| {
            let r = 5.0 + i as f64 * 0.01;
            let form = (2.0 / 3.0 * r.powf(1.5) + PI / 4.0).sin();
            r.powf(1.5) * (PI.sqrt() * r.powf(0.25) * airy_ai(-r) - form).abs()
        })
        .fold(0.0, f64::max)
}

// ----------------------------------------------------------------- geometry

fn geometry_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let half = geometry::g(0.5)?;
    let want = (3f64.sqrt() / 2.0 - PI / 6.0) / PI;
    out.push(check(
        "profile values",
        (geometry::g(0.0)? - 1.0 / PI).abs() < 1e-16 && geometry::g(1.0)? == 0.0 && (half - want).abs() < 1e-16,
        format!("g(1/2) = {half:.17}"),
    ));

    let n = 10_000;
    let g_mono = (0..n).all(|i| {
        let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
        geometry::g(a).unwrap() > geometry::g(b).unwrap()
    });
    let h_mono = (0..n).all(|i| {
        let (a, b) = (i as f64 / n as f64 / PI, (i + 1) as f64 / n as f64 / PI);
        g_inverse(a).unwrap() > g_inverse(b.min(1.0 / PI)).unwrap()
    });
    out.push(check("monotonicity", g_mono && h_mono, format!("g and h strictly decreasing on {n}-point grids")));

    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let y = i as f64 / 1000.0 / PI;
        let y = y.min(1.0 / PI);
        worst = worst.max((geometry::g(g_inverse(y)?)? - y).abs());
    }
    out.push(check("inverse round trip", worst <= 1e-12, format!("max |g(h(y)) - y| {worst:.2e}")));

    let mut worst = 0.0f64;
    for p in kronecker_points(2000) {
        let (x, y) = (p[0] * 10.0, p[1] * 4.0);
        let f = minkowski_f(x, y)?;
        for lambda in [2.0, 10.0, 1.0 / 3.0] {
            worst = worst.max((minkowski_f(lambda * x, lambda * y)? / (lambda * f) - 1.0).abs());
        }
    }
    out.push(check("homogeneity", worst <= 1e-12, format!("max relative defect {worst:.2e}")));

    let mut mismatches = 0usize;
    let mut tested = 0usize;
    for p in kronecker_points(100_000) {
        let mu = 0.5 + 100.0 * p[2];
        let x = mu * p[0];
        let y = 0.4 * mu * p[1];
        let boundary = mu * geometry::g(x / mu)?;
        if (y - boundary).abs() <= 1e-12 * mu {
            continue;
        }
        tested += 1;
        if (minkowski_f(x, y)? <= mu) != (y <= boundary) {
            mismatches += 1;
        }
    }
    out.push(check(
        "membership duality",
        mismatches == 0,
        format!("{mismatches} disagreements in {tested} points"),
    ));

    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..=2000 {
        let y = 1e-4 + (1.0 / PI - 2e-4) * i as f64 / 2000.0;
        let step = 1e-6 * y.min(1.0 / PI - y);
        let deriv = (g_inverse(y + step)? - g_inverse(y - step)?) / (2.0 * step);
        let v = deriv.abs() * y.cbrt();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    out.push(check(
        "derivative scale of h",
        lo > 0.1 && hi < 10.0,
        format!("|h'(y)| y^(1/3) in [{lo:.4}, {hi:.4}]"),
    ));

    let mut worst = 0.0f64;
    for i in 1..1000 {
        let t = i as f64 / 1000.0;
        let step = 1e-6 * t.min(1.0 - t);
        let fd = (geometry::g(t + step)? - geometry::g(t - step)?) / (2.0 * step);
        worst = worst.max((fd - g_derivative(t)?).abs());
    }
    out.push(check("derivative of g", worst <= 1e-6, format!("max |g' - central difference| {worst:.2e}")));

    let area = integrate_right_sqrt(|t| geometry::g(t).unwrap(), 0.0, 1.0, 1e-16, 1e-15).value;
    out.push(check(
        "area of the profile domain",
        (area - PROFILE_AREA).abs() < 1e-14,
        format!("integral of g over [0,1] = {area:.17}"),
    ));
    Ok(out)
}

// ----------------------------------------------------------- weyl-constants

fn weyl_constants_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for d in 3..=12 {
        let (q, c) = weyl_constant_identity(d)?;
        out.push(check(
            &format!("d = {d}"),
            (q - c).abs() <= 1e-10,
            format!("quadrature {q:.17e}  closed form {c:.17e}  |diff| {:.2e}", (q - c).abs()),
        ));
    }
    let mut worst = 0.0f64;
    for d in 3..=30 {
        let (a, b) = weyl_terms(1.0, d)?;
        let (c, e) = weyl_terms_from_volumes(1.0, d)?;
        worst = worst.max((a / c - 1.0).abs()).max((b / e - 1.0).abs());
    }
    out.push(check(
        "general Weyl constants",
        worst <= 1e-12,
        format!("max relative difference {worst:.2e} for d in [3, 30]"),
    ));
    Ok(out)
}

// ------------------------------------------------------------------- approx

/// Measured sup of `|J_ν(x) − approx| · x / prefactor` over the oscillatory
/// regime `x ≥ max((1+c)ν, 2)`, `x ≤ 1000`, `2ν ∈ {0, stride, 2·stride, …} ≤ 400`.
pub fn measure_oscillatory_constant(c: f64, twice_stride: u64, x_step: f64) -> Result<f64> {
    let cfg = AsymptoticConfig { c, oscillatory_constant: 1.0, ..AsymptoticConfig::default() };
    let orders: Vec<u64> = (0..=400).step_by(twice_stride as usize).collect();
    let per = orders
        .par_iter()
        .map(|&tw| {
            let o = BesselOrder::from_twice(tw);
            let start = ((1.0 + c) * o.nu()).max(2.0);
            let mut worst = 0.0f64;
            let mut i = 0u64;
            loop {
                let x = start + i as f64 * x_step;
                if x > 1000.0 {
                    break;
                }
                let a = bessel_j_oscillatory_approx(o, x, &cfg)?;
                // with C = 1 the envelope is exactly prefactor / x
                worst = worst.max((bessel_j(o, x)? - a.value).abs() / a.error_envelope);
                i += 1;
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

/// Measured sup of `|J_ν(x) − approx| / (prefactor ν^{−4/3} (1 + h^{1/6}))`
/// over `ν_min ≤ ν ≤ 200` and `ν < x ≤ (1+c)ν` (`points` per order).
pub fn measure_transition_constant(c: f64, nu_min: f64, twice_stride: u64, points: u64) -> Result<f64> {
    let cfg = AsymptoticConfig { c, nu_min, transition_constant: 1.0, ..AsymptoticConfig::default() };
    let first = (2.0 * nu_min).ceil() as u64;
    let orders: Vec<u64> = (first..=400).step_by(twice_stride as usize).collect();
    let per = orders
        .par_iter()
        .map(|&tw| {
            let o = BesselOrder::from_twice(tw);
            let nu = o.nu();
            let mut worst = 0.0f64;
            for i in 1..=points {
                let x = nu + c * nu * i as f64 / points as f64;
                let a = bessel_j_transition_approx(o, x, &cfg)?;
                worst = worst.max((bessel_j(o, x)? - a.value).abs() / a.error_envelope);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(per.into_iter().fold(0.0, f64::max))
}

fn approx_suite() -> Result<Vec<Check>> {
    let cfg = AsymptoticConfig::default();
    let mut out = Vec::new();
    let o = |nu: f64| BesselOrder::new(nu);

    let a = bessel_j_oscillatory_approx(o(0.0)?, 100.0, &cfg)?;
    let diff = (a.value - bessel_j(o(0.0)?, 100.0)?).abs();
    out.push(check("oscillatory at (0, 100)", diff <= 2e-3, format!("|approx - J| = {diff:.2e}")));

    let x = 50.0 * PI;
    let a = bessel_j_oscillatory_approx(o(0.5)?, x, &cfg)?;
    out.push(check(
        "oscillatory at a zero of J_1/2",
        a.value.abs() <= a.error_envelope,
        format!("|approx| = {:.2e}, envelope {:.2e}", a.value.abs(), a.error_envelope),
    ));

    let mut within = Vec::new();
    for (nu, x, transition) in [(20.0, 40.0, false), (100.0, 100.5, true), (50.0, 74.0, true)] {
        let a = if transition {
            bessel_j_transition_approx(o(nu)?, x, &cfg)?
        } else {
            bessel_j_oscillatory_approx(o(nu)?, x, &cfg)?
        };
        let diff = (a.value - bessel_j(o(nu)?, x)?).abs();
        within.push((nu, x, diff, a.error_envelope));
    }
    out.push(check(
        "envelope examples",
        within.iter().all(|w| w.2 <= w.3),
        within
            .iter()
            .map(|(nu, x, d, e)| format!("({nu}, {x}): {d:.1e} <= {e:.1e}"))
            .collect::<Vec<_>>()
            .join("; "),
    ));

    let base = measure_oscillatory_constant(cfg.c, 8, 2.0)?;
    let fine = measure_oscillatory_constant(cfg.c, 4, 1.0)?;
    out.push(check(
        "oscillatory envelope stable",
        fine.is_finite() && fine <= 1.1 * base && fine <= cfg.oscillatory_constant,
        format!("C = {base:.4} (grid), {fine:.4} (2x refined); configured {}", cfg.oscillatory_constant),
    ));

    let base = measure_transition_constant(cfg.c, cfg.nu_min, 8, 50)?;
    let fine = measure_transition_constant(cfg.c, cfg.nu_min, 4, 100)?;
    out.push(check(
        "transition envelope stable",
        fine.is_finite() && fine <= 1.1 * base && fine <= cfg.transition_constant,
        format!("C = {base:.4} (grid), {fine:.4} (2x refined); configured {}", cfg.transition_constant),
    ));

    let mut disagreements = 0usize;
    let mut decided = 0usize;
    for tw in (20..=400u64).step_by(4) {
        let ord = BesselOrder::from_twice(tw);
        let nu = ord.nu();
        for i in 1..=100 {
            let x = nu + cfg.c * nu * i as f64 / 100.0;
            let a = bessel_j_transition_approx(ord, x, &cfg)?;
            let j = bessel_j(ord, x)?;
            if j.abs() > 2.0 * a.error_envelope {
                decided += 1;
                if j.signum() != a.value.signum() {
                    disagreements += 1;
                }
            }
        }
    }
    out.push(check(
        "transition sign agreement",
        disagreements == 0,
        format!("{disagreements} sign disagreements among {decided} decided points"),
    ));

    let orders: Vec<BesselOrder> = (0..=40).map(BesselOrder::from_twice).collect();
    let ks: Vec<u64> = (1..=60).collect();
    let scan = residual_scan(&orders, &ks, &ZeroConfig::default())?;
    out.push(check(
        "zero phase window",
        scan.window_violations == 0 && scan.failures.is_empty(),
        format!(
            "{} records, {} outside (-1/8, 1/4), C_osc {:.4}, C_tr {:.4}",
            scan.records.len(),
            scan.window_violations,
            scan.c_osc,
            scan.c_tr
        ),
    ));
    Ok(out)
}

// --------------------------------------------------------------- comparison

fn comparison_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let cfg = CountConfig::default();

    let grid: Vec<f64> = (1..=200).map(|i| 12.0 * i as f64 / 200.0).collect();
    let rows = grid
        .par_iter()
        .map(|&mu| {
            let exact = exact_count(mu, 3)?.exact;
            let brute = brute_force_count(mu, 3)?;
            let weighted = weighted_count(mu, 3)?.weighted;
            let straddle = straddle_multiplicity(mu, 3, 1e-12)?;
            Ok((exact, brute, weighted, straddle))
        })
        .collect::<Result<Vec<_>>>()?;
    let brute_bad = rows.iter().filter(|r| r.0 != r.1).count();
    let lattice_bad = rows
        .iter()
        .filter(|r| if r.3 == 0 { r.0 != r.2 } else { r.0.abs_diff(r.2) > r.3 })
        .count();
    out.push(check(
        "exact count vs zero enumeration",
        brute_bad == 0,
        format!("{brute_bad} mismatches over 200 values of mu in (0, 12]"),
    ));
    out.push(check(
        "weighted count vs exact count",
        lattice_bad == 0,
        format!(
            "{lattice_bad} unexplained differences; {} rows with straddling zeros",
            rows.iter().filter(|r| r.3 > 0).count()
        ),
    ));

    let row = comparison_check(4.0, 3, 1.0, &cfg)?;
    out.push(check(
        "comparison at mu = 4",
        row.lhs == 0 && row.exact == 1,
        format!("exact {}, weighted {}", row.exact, row.weighted),
    ));

    let mut defects = 0usize;
    let mut tested = 0usize;
    for &mu in &[25.0, 80.0, 150.5] {
        for d in [3, 4, 6] {
            for l in [0u64, 2, 7] {
                if let Ok(dec) = volume_boundary_decomposition(mu, l, d) {
                    tested += 1;
                    if dec.identity_defect != 0.0 {
                        defects += 1;
                    }
                }
            }
        }
    }
    out.push(check(
        "floor decomposition exact",
        defects == 0 && tested > 0,
        format!("{defects} nonzero defects in {tested} cases"),
    ));
    Ok(out)
}
