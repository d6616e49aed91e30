//! Airy function Ai on the real line.
//!
//! For |t| ≤ 8 the Maclaurin series is summed in pair arithmetic (the two
//! series cancel by up to six digits at t = 8). Beyond that the standard
//! large-argument expansions are truncated at their smallest term; on the
//! negative axis the phase (2/3) r^{3/2} + π/4 is carried as a pair so that
//! the result stays accurate to ~1e-15 out to r = 10^4.

use std::f64::consts::PI;

use super::dd::Dd;

const SERIES_LIMIT: f64 = 8.0;

// Ai(0) and -Ai'(0) split into high and low parts
const AI0: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const AIP0: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);
const QUARTER_PI: Dd = Dd::new(0.785_398_163_397_448_3, 3.061_616_997_868_383e-17);

/// Ai(t).
pub fn airy_ai(t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.abs() <= SERIES_LIMIT {
        maclaurin(t)
    } else if t > 0.0 {
        decaying(t)
    } else {
        oscillating(-t)
    }
}

fn maclaurin(t: f64) -> f64 {
    let t_dd = Dd::from_f64(t);
    let t3 = t_dd * t_dd * t_dd;
    // f = Σ 3^k (1/3)_k t^{3k} / (3k)!, g = Σ 3^k (2/3)_k t^{3k+1} / (3k+1)!
    let mut f_term = Dd::from_f64(1.0);
    let mut g_term = t_dd;
    let mut f = f_term;
    let mut g = g_term;
    let mut k = 1.0_f64;
    loop {
        f_term = (f_term * t3).div_f64((3.0 * k - 1.0) * (3.0 * k));
        g_term = (g_term * t3).div_f64((3.0 * k) * (3.0 * k + 1.0));
        f = f + f_term;
        g = g + g_term;
        if f_term.hi.abs() < 1e-34 * f.hi.abs().max(1.0)
            && g_term.hi.abs() < 1e-34 * g.hi.abs().max(1.0)
        {
            break;
        }
        k += 1.0;
    }
    (AI0 * f + -(AIP0 * g)).to_f64()
}

/// Coefficients u_k of the Airy asymptotic expansions.
fn u_coeff(k: u32, prev: f64) -> f64 {
    let k = f64::from(k);
    prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k)
}

fn decaying(t: f64) -> f64 {
    let zeta = 2.0 / 3.0 * t * t.sqrt();
    let mut sum = 1.0;
    let mut u = 1.0;
    let mut prev = f64::INFINITY;
    let mut sign = -1.0;
    for k in 1..40 {
        u = u_coeff(k, u);
        let term = u / zeta.powi(k as i32);
        if term > prev || term < 1e-17 {
            break;
        }
        prev = term;
        sum += sign * term;
        sign = -sign;
    }
    (-zeta).exp() / (2.0 * PI.sqrt() * t.powf(0.25)) * sum
}

fn oscillating(r: f64) -> f64 {
    // ζ = (2/3) r^{3/2} as a pair
    let zeta = (Dd::sqrt_f64(r).mul_f64(r)).mul_f64(2.0).div_f64(3.0);
    let z = zeta.to_f64();
    let mut p = 1.0;
    let mut q = 0.0;
    let mut u = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..40u32 {
        u = u_coeff(k, u);
        let term = u / z.powi(k as i32);
        if term > prev || term < 1e-17 {
            break;
        }
        prev = term;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    let (s, c) = (zeta + QUARTER_PI).sin_cos();
    (s * p - c * q) / (PI.sqrt() * r.powf(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath at 40 digits
    const TABLE: &[(f64, f64)] = &[
        (-1.0, 0.535_560_883_292_352_1),
        (-5.0, 0.350_761_009_024_114_3),
        (-8.0, -0.052_705_050_356_386_2),
        (-9.0, -0.022_133_721_547_341_4),
        (-10.0, 0.040_241_238_486_443_19),
        (-100.0, 0.176_753_393_239_552_88),
        (-1000.0, 0.055_971_895_773_019_92),
        (-9999.5, 0.013_085_787_097_520_297),
        (1.0, 0.135_292_416_312_881_42),
        (2.0, 0.034_924_130_423_274_38),
        (4.0, 9.515_638_512_048_019e-4),
        (6.0, 9.947_694_360_252_89e-6),
        (8.0, 4.692_207_616_099_232e-8),
        (9.0, 2.471_168_430_872_49e-9),
        (10.0, 1.104_753_255_289_868_6e-10),
        (50.0, 4.584_941_724_074_828e-104),
    ];

    #[test]
    fn ai_at_zero() {
        // 3^{-2/3} / Γ(2/3)
        assert!((airy_ai(0.0) - 0.355_028_053_887_817_2).abs() < 1e-16);
    }

    #[test]
    fn matches_reference_table() {
        for &(t, want) in TABLE {
            let got = airy_ai(t);
            assert!((got - want).abs() < 1e-13, "t={t}: {got} vs {want}");
            if t > 0.0 {
                assert!(((got - want) / want).abs() < 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn continuous_across_series_limit() {
        for &t in &[-8.0, 8.0] {
            let a = maclaurin(t * (1.0 + 1e-12));
            let b = if t > 0.0 {
                decaying(t * (1.0 + 1e-12))
            } else {
                oscillating(-t * (1.0 + 1e-12))
            };
            assert!((a - b).abs() < 1e-13, "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        let h = 1e-3;
        for i in 0..200 {
            let t = -30.0 + 0.17 * i as f64;
            let d2 = (airy_ai(t + h) - 2.0 * airy_ai(t) + airy_ai(t - h)) / (h * h);
            assert!((d2 - t * airy_ai(t)).abs() < 1e-5 * (1.0 + t.abs()), "t={t}");
        }
    }
}
