//! The lattice side: points `(n + d/2 − 1, k − 1/4)` of the dilated profile
//! domain μ𝒟, weighted by multiplicity differences.
//!
//! Everything is organised by columns in k. For each `k ≥ 1` with
//! `k − 1/4 ≤ μ/π` put `t_k = μ h((k − 1/4)/μ) − d/2 + 1`; the lattice points
//! of that row are exactly `n = 0, …, ⌊t_k⌋`. From the per-column tops all
//! per-l counts `𝒩_l` follow by suffix sums, and the weighted count is
//! `Σ_k Σ_{n ≤ ⌊t_k⌋} m_n^d`.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::exact_sum::ExactSum;
use crate::geometry::{g_inverse_unchecked, g_unchecked, minkowski_unchecked, VolumeTable};
use crate::quadrature::integrate_right_sqrt;
use crate::spectral::{
    check_dimension, cumulative_multiplicity, exact_count_with, gamma_half_dim_plus_one,
    multiplicity_difference, normalized_by_remainder_bound, weyl_terms, CountConfig,
    HUXLEY_EXPONENT, LOG_EXPONENT,
};

/// Floors of `t_k` closer than this to an integer are re-decided by
/// evaluating the Minkowski functional directly.
pub const FLOOR_GUARD: f64 = 1e-9;

/// Relative band around μ inside which even the direct comparison
/// `F(ν, k − 1/4) ≤ μ` is not trusted; such columns are flagged.
const MEMBERSHIP_GUARD: f64 = 1e-13;

/// The row-of-teeth function `ψ(t) = t − ⌊t⌋ − 1/2`.
pub fn psi(t: f64) -> f64 {
    t - t.floor() - 0.5
}

/// One column of lattice points at height `k − 1/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Column {
    pub k: u64,
    /// `μ h((k − 1/4)/μ) − d/2 + 1`.
    pub t: f64,
    /// Largest n with the point inside μ𝒟; −1 when the column is empty.
    pub top: i64,
    /// The floor of `t` was re-decided through F.
    pub redecided: bool,
    /// Even F could not separate the point from the boundary.
    pub unresolved: bool,
}

impl Column {
    /// `ψ` taken relative to the decided floor, so that
    /// `top = t − 1/2 − ψ` holds exactly.
    pub fn psi(&self) -> f64 {
        self.t - self.top as f64 - 0.5
    }
}

/// All non-trivial columns for (μ, d), in increasing k.
pub fn columns(mu: f64, d: u32) -> Result<Vec<Column>> {
    check_dimension(d)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    let k_max = (mu / std::f64::consts::PI + 0.25).floor() as u64;
    let offset = d as f64 / 2.0 - 1.0;
    Ok((1..=k_max)
        .into_par_iter()
        .filter_map(|k| {
            let y = k as f64 - 0.25;
            let level = y / mu;
            if level > std::f64::consts::FRAC_1_PI {
                return None;
            }
            let t = mu * g_inverse_unchecked(level) - offset;
            let nearest = t.round();
            let mut top = t.floor() as i64;
            let (mut redecided, mut unresolved) = (false, false);
            if (t - nearest).abs() < FLOOR_GUARD && nearest >= 0.0 {
                redecided = true;
                let f = minkowski_unchecked(nearest + offset, y);
                unresolved = (f - mu).abs() <= MEMBERSHIP_GUARD * mu;
                top = if f <= mu { nearest as i64 } else { nearest as i64 - 1 };
            }
            Some(Column { k, t, top: top.max(-1), redecided, unresolved })
        })
        .collect())
}

/// Weighted count and its per-l decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCount {
    pub d: u32,
    pub mu: f64,
    /// `𝒩(μ) = Σ_l Δ_l 𝒩_l(μ)`.
    pub weighted: u128,
    /// `𝒩_l(μ)` for `l = 0, 1, …` up to the last nonzero value.
    pub per_l: Vec<u64>,
    /// `Σ_l Δ_l vol((μ𝒟)_l)`.
    pub volume_term: f64,
    /// `−¼ Σ_l Δ_l (μ − l − (d−3)/2)`.
    pub boundary_term: f64,
    /// `Σ_l Δ_l Σ_{k} ψ(t_k)` over the columns reaching level l.
    pub psi_sum: f64,
    /// Columns whose floor was re-decided / left unresolved.
    pub redecided: usize,
    pub unresolved: usize,
}

impl LatticeCount {
    /// `|weighted − volume − boundary|` over the Lemma-type bound
    /// `μ^{d−2+131/208}(log μ)^{18627/8320}`.
    pub fn residual_normalized(&self) -> f64 {
        let r = self.weighted as f64 - self.volume_term - self.boundary_term;
        normalized_by_remainder_bound(r.abs(), self.mu, self.d)
    }
}

/// `𝒩_l` for every l from the column tops, via suffix sums:
/// `𝒩_l = Σ_{top ≥ l} (top − l + 1)`.
pub fn per_l_counts(cols: &[Column]) -> Vec<u64> {
    let Some(max_top) = cols.iter().map(|c| c.top).max().filter(|&t| t >= 0) else {
        return Vec::new();
    };
    let len = max_top as usize + 1;
    let mut hist = vec![0u64; len];
    for c in cols.iter().filter(|c| c.top >= 0) {
        hist[c.top as usize] += 1;
    }
    let mut out = vec![0u64; len];
    let (mut cnt, mut weighted_tops) = (0u64, 0u64);
    for l in (0..len).rev() {
        cnt += hist[l];
        weighted_tops += hist[l] * (l as u64 + 1);
        out[l] = weighted_tops - l as u64 * cnt;
    }
    out
}

/// `𝒩_l(μ)` for a single l.
pub fn lattice_count_l(mu: f64, l: u64, d: u32) -> Result<u64> {
    let cols = columns(mu, d)?;
    Ok(cols
        .iter()
        .filter(|c| c.top >= l as i64)
        .map(|c| (c.top - l as i64 + 1) as u64)
        .sum())
}

/// The weighted count with the volume/boundary/ψ aggregates. The sum
/// `Σ_l Δ_l 𝒩_l` is checked against the reordered form
/// `Σ_k Σ_{n ≤ top_k} m_n^d`; a mismatch is reported as an error.
pub fn weighted_count(mu: f64, d: u32) -> Result<LatticeCount> {
    let cols = columns(mu, d)?;
    let per_l = per_l_counts(&cols);
    let mut weighted = 0u128;
    for (l, &n_l) in per_l.iter().enumerate() {
        let term = multiplicity_difference(l as u64, d)?
            .checked_mul(n_l as u128)
            .ok_or(Error::Overflow("weighted count"))?;
        weighted = weighted.checked_add(term).ok_or(Error::Overflow("weighted count"))?;
    }
    let direct = reordered_count(&cols, d)?;
    if direct != weighted {
        return Err(Error::Inconsistent(format!(
            "weighted lattice count {weighted} differs from reordered sum {direct} at mu={mu}, d={d}"
        )));
    }

    let l_end = decomposition_range(mu, d);
    let volumes = if l_end > 0 { Some(VolumeTable::new(mu, d)?) } else { None };
    let shift = (d as f64 - 3.0) / 2.0;
    let mut volume = ExactSum::new();
    let mut boundary = ExactSum::new();
    let mut psi_total = ExactSum::new();
    // ψ sums per level via suffix accumulation over column tops
    let psi_by_top = psi_suffix(&cols);
    for l in 0..l_end {
        let delta = multiplicity_difference(l, d)? as f64;
        let vol = volumes.as_ref().map_or(0.0, |v| v.volume(l));
        add_product(&mut volume, delta, vol);
        add_product(&mut boundary, delta, -0.25 * (mu - l as f64 - shift));
        let psi_l = psi_by_top.get(l as usize).map_or(0.0, ExactSum::value);
        add_product(&mut psi_total, delta, psi_l);
    }
    Ok(LatticeCount {
        d,
        mu,
        weighted,
        per_l,
        volume_term: volume.value(),
        boundary_term: boundary.value(),
        psi_sum: psi_total.value(),
        redecided: cols.iter().filter(|c| c.redecided).count(),
        unresolved: cols.iter().filter(|c| c.unresolved).count(),
    })
}

/// `Σ_k Σ_{n ≤ top_k} m_n^d`.
pub fn reordered_count(cols: &[Column], d: u32) -> Result<u128> {
    let mut total = 0u128;
    for c in cols.iter().filter(|c| c.top >= 0) {
        total = total
            .checked_add(cumulative_multiplicity(c.top as u64, d)?)
            .ok_or(Error::Overflow("weighted count"))?;
    }
    Ok(total)
}

/// Levels `0 ≤ l < μ − d/2 + 1` where the volume/boundary split applies.
pub fn decomposition_range(mu: f64, d: u32) -> u64 {
    let bound = mu - d as f64 / 2.0 + 1.0;
    if bound <= 0.0 {
        0
    } else {
        bound.ceil() as u64
    }
}

fn add_product(acc: &mut ExactSum, a: f64, b: f64) {
    let p = a * b;
    acc.add(p);
    acc.add(a.mul_add(b, -p));
}

/// `S_l = Σ_{top_k ≥ l} ψ_k` as exact sums, for each l up to the max top.
fn psi_suffix(cols: &[Column]) -> Vec<ExactSum> {
    let Some(max_top) = cols.iter().map(|c| c.top).max().filter(|&t| t >= 0) else {
        return Vec::new();
    };
    let mut by_top = vec![ExactSum::new(); max_top as usize + 1];
    for c in cols.iter().filter(|c| c.top >= 0) {
        by_top[c.top as usize].add(c.psi());
    }
    for l in (0..max_top as usize).rev() {
        let next = by_top[l + 1].clone();
        by_top[l].absorb(&next);
    }
    by_top
}

/// The per-level split of `𝒩_l(μ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub d: u32,
    pub mu: f64,
    pub l: u64,
    pub count: u64,
    /// `vol((μ𝒟)_l)`.
    pub volume_term: f64,
    /// `−(μ − l − (d−3)/2)/4`.
    pub boundary_term: f64,
    /// `Σ_k ψ(t_k)` over columns reaching level l.
    pub psi_sum: f64,
    /// The term-by-term sum `Σ_k (t_k − l + 1/2)`.
    pub sum_linear: f64,
    /// `count − volume − boundary + psi_sum`.
    pub euler_maclaurin_error: f64,
    /// `count + psi_sum − sum_linear`, evaluated exactly; zero when the
    /// floor identity holds on every column.
    pub identity_defect: f64,
}

impl Decomposition {
    /// `|𝒩_l − volume − boundary| / (μ^{131/208} (log μ)^{18627/8320})`.
    pub fn residual_normalized(&self) -> f64 {
        let r = self.count as f64 - self.volume_term - self.boundary_term;
        if self.mu <= 1.0 {
            return f64::NAN;
        }
        r.abs() / (self.mu.powf(HUXLEY_EXPONENT) * self.mu.ln().powf(LOG_EXPONENT))
    }
}

/// Split `𝒩_l(μ)` into volume, boundary and ψ parts.
pub fn volume_boundary_decomposition(mu: f64, l: u64, d: u32) -> Result<Decomposition> {
    let cols = columns(mu, d)?;
    if l >= decomposition_range(mu, d) {
        return Err(domain("level l (must be below mu - d/2 + 1)", l as f64));
    }
    let volume = crate::geometry::truncated_dilate_volume(mu, l, d)?;
    decomposition_from_columns(&cols, mu, l, d, volume)
}

pub(crate) fn decomposition_from_columns(
    cols: &[Column],
    mu: f64,
    l: u64,
    d: u32,
    volume: f64,
) -> Result<Decomposition> {
    let reach: Vec<&Column> = cols.iter().filter(|c| c.top >= l as i64).collect();
    let count: u64 = reach.iter().map(|c| (c.top - l as i64 + 1) as u64).sum();
    let psi: ExactSum = reach.iter().map(|c| c.psi()).collect();
    // Σ (t_k − 1/2 − l + 1), kept exact
    let mut linear: ExactSum = reach.iter().map(|c| c.t).collect();
    linear.add((0.5 - l as f64) * reach.len() as f64);
    let mut defect = linear.clone();
    defect.negate();
    defect.absorb(&psi);
    defect.add(count as f64);
    let boundary_term = -0.25 * (mu - l as f64 - (d as f64 - 3.0) / 2.0);
    let psi_sum = psi.value();
    Ok(Decomposition {
        d,
        mu,
        l,
        count,
        volume_term: volume,
        boundary_term,
        psi_sum,
        sum_linear: linear.value(),
        euler_maclaurin_error: count as f64 - volume - boundary_term + psi_sum,
        identity_defect: defect.value(),
    })
}

/// Total multiplicity of pairs (n, k) for which μ separates the zero
/// `j_{ν,k}` from its lattice proxy `F(ν, k − 1/4)`; exactly these pairs can
/// make the exact and the weighted count differ.
pub fn straddle_multiplicity(mu: f64, d: u32, tol: f64) -> Result<u128> {
    check_dimension(d)?;
    let mut total = 0u128;
    let offset = d as f64 / 2.0 - 1.0;
    let mut n = 0u64;
    while n as f64 + offset < mu {
        let order = crate::specfun::BesselOrder::spectral(n, d);
        let m = crate::spectral::multiplicity(n, d)?;
        for k in 1.. {
            let approx = minkowski_unchecked(order.nu(), k as f64 - 0.25);
            let value = crate::zeros::zero_value(order, k, tol)?;
            if approx > mu && value > mu {
                break;
            }
            if (approx <= mu) != (value <= mu) {
                total += m;
            }
        }
        n += 1;
    }
    Ok(total)
}

/// The exact count against the weighted count, with the sandwich that bounds their gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub d: u32,
    pub mu: f64,
    pub c: f64,
    pub exact: u128,
    pub weighted: u128,
    /// `|exact − weighted|`.
    pub lhs: u128,
    /// `𝒩(μ + Cμ^{−3/7}) − 𝒩(μ − Cμ^{−3/7})`.
    pub sandwich: u128,
    /// `lhs − sandwich`.
    pub slack: i128,
    /// `slack / μ^{d−2+4/7}`.
    pub slack_normalized: f64,
}

/// `|𝒩_ℬ(μ) − 𝒩(μ)|` against the sandwich `𝒩(μ+δ) − 𝒩(μ−δ)`, `δ = Cμ^{−3/7}`.
pub fn comparison_check(mu: f64, d: u32, c: f64, cfg: &CountConfig) -> Result<ComparisonRow> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(domain("comparison constant C", c));
    }
    let exact = exact_count_with(mu, d, cfg)?.exact;
    let weighted = weighted_count(mu, d)?.weighted;
    let delta = c * mu.powf(-3.0 / 7.0);
    let upper = weighted_count(mu + delta, d)?.weighted;
    let lower = if mu - delta > 0.0 { weighted_count(mu - delta, d)?.weighted } else { 0 };
    let lhs = exact.abs_diff(weighted);
    let sandwich = upper - lower;
    let slack = lhs as i128 - sandwich as i128;
    Ok(ComparisonRow {
        d,
        mu,
        c,
        exact,
        weighted,
        lhs,
        sandwich,
        slack,
        slack_normalized: slack as f64 / mu.powf(d as f64 - 2.0 + 4.0 / 7.0),
    })
}

/// Both sides of `(2/(d−2)!) ∫₀¹ t^{d−2} g(t) dt = 2^{−d} Γ(d/2+1)^{−2}`:
/// adaptive quadrature and the gamma-function closed form.
pub fn weyl_constant_identity(d: u32) -> Result<(f64, f64)> {
    if !(3..=30).contains(&d) {
        return Err(domain("dimension d (3..=30)", d as f64));
    }
    let p = d as i32 - 2;
    let integral = integrate_right_sqrt(|t| t.powi(p) * g_unchecked(t), 0.0, 1.0, 1e-16, 1e-14).value;
    let fact: f64 = (1..=d - 2).map(f64::from).product();
    let quadrature = 2.0 / fact * integral;
    let gamma = gamma_half_dim_plus_one(d);
    let closed = 0.5f64.powi(d as i32) / (gamma * gamma);
    Ok((quadrature, closed))
}

/// `¼ Σ_{0 ≤ l ≤ μ−(d−2)/2} Δ_l (μ − l − (d−3)/2)` against `μ^{d−1}/(2(d−1)!)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondTerm {
    pub lhs: f64,
    pub rhs: f64,
    /// `(lhs − rhs)/μ^{d−2}`.
    pub scaled_difference: f64,
}

pub fn second_term_identity(mu: f64, d: u32) -> Result<SecondTerm> {
    check_dimension(d)?;
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("mu", mu));
    }
    let top = mu - (d as f64 - 2.0) / 2.0;
    let shift = (d as f64 - 3.0) / 2.0;
    let mut acc = ExactSum::new();
    if top >= 0.0 {
        for l in 0..=top.floor() as u64 {
            let delta = multiplicity_difference(l, d)? as f64;
            add_product(&mut acc, delta, mu - l as f64 - shift);
        }
    }
    let lhs = 0.25 * acc.value();
    let rhs = weyl_terms(mu, d)?.1;
    Ok(SecondTerm { lhs, rhs, scaled_difference: (lhs - rhs) / mu.powi(d as i32 - 2) })
}

/// One dyadic block of the ψ-sum at level 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiBlock {
    pub j: u32,
    /// `M = 2^j V`.
    pub m: f64,
    /// Indices `M < k ≤ 2M` present in the block.
    pub terms: u64,
    pub value: f64,
    /// `|value| / ((M^{5/3} μ^{1/3})^{131/416} (log μ)^{18627/8320})`.
    pub huxley_ratio: f64,
    /// `max |N F(k/M) − t_k|` with `N = M^{2/3} μ^{1/3}` and the rescaled
    /// phase `F(x) = (μ/M)^{2/3} h(Mx/μ − 1/(4μ)) + (1 − d/2)/N`.
    pub rescaling_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiBlocks {
    pub d: u32,
    pub mu: f64,
    pub v: f64,
    /// `Σ_{k ≤ V} ψ(t_k)`.
    pub head: f64,
    pub blocks: Vec<PsiBlock>,
    /// `Σ_k ψ(t_k)` over all level-0 columns, summed directly.
    pub direct: f64,
    /// Head plus blocks, summed exactly; equals `direct`.
    pub rebuilt: f64,
}

/// Split the level-0 ψ-sum into a head `k ≤ V` and dyadic blocks
/// `2^j V < k ≤ 2^{j+1} V` (the last block clipped at the final column).
pub fn psi_sum_blocks(mu: f64, d: u32, v: f64) -> Result<PsiBlocks> {
    if !(v >= 1.0) || !v.is_finite() {
        return Err(domain("head cutoff V (must be >= 1)", v));
    }
    let cols: Vec<Column> = columns(mu, d)?.into_iter().filter(|c| c.top >= 0).collect();
    let direct: ExactSum = cols.iter().map(Column::psi).collect();
    let head: ExactSum = cols.iter().filter(|c| (c.k as f64) <= v).map(Column::psi).collect();
    let mut rebuilt = head.clone();
    let mut blocks = Vec::new();
    let last_k = cols.last().map_or(0, |c| c.k) as f64;
    let log_factor = mu.ln().powf(LOG_EXPONENT);
    let offset = 1.0 - d as f64 / 2.0;
    let mut j = 0u32;
    loop {
        let m = v * 2f64.powi(j as i32);
        if m >= last_k {
            break;
        }
        let members: Vec<&Column> = cols
            .iter()
            .filter(|c| (c.k as f64) > m && (c.k as f64) <= 2.0 * m)
            .collect();
        let sum: ExactSum = members.iter().map(|c| c.psi()).collect();
        rebuilt.absorb(&sum);
        let n_scale = m.powf(2.0 / 3.0) * mu.powf(1.0 / 3.0);
        let rescaling_deviation = members
            .iter()
            .map(|c| {
                let x = c.k as f64 / m;
                let f = (mu / m).powf(2.0 / 3.0) * g_inverse_unchecked(m * x / mu - 0.25 / mu) + offset / n_scale;
                (n_scale * f - c.t).abs()
            })
            .fold(0.0, f64::max);
        let value = sum.value();
        blocks.push(PsiBlock {
            j,
            m,
            terms: members.len() as u64,
            value,
            huxley_ratio: value.abs() / ((m.powf(5.0 / 3.0) * mu.powf(1.0 / 3.0)).powf(131.0 / 416.0) * log_factor),
            rescaling_deviation,
        });
        j += 1;
    }
    Ok(PsiBlocks { d, mu, v, head: head.value(), blocks, direct: direct.value(), rebuilt: rebuilt.value() })
}

/// Default head cutoff `V = μ^{131/208}`.
pub fn default_head(mu: f64) -> f64 {
    mu.powf(HUXLEY_EXPONENT).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::exact_count;

    #[test]
    fn psi_examples() {
        assert_eq!(psi(0.75), 0.25);
        assert_eq!(psi(3.0), -0.5);
        assert_eq!(psi(-0.25), 0.25);
    }

    #[test]
    fn small_lattice_counts() {
        assert_eq!(lattice_count_l(4.0, 0, 3).unwrap(), 1);
        assert_eq!(lattice_count_l(4.0, 1, 3).unwrap(), 0);
        assert_eq!(lattice_count_l(50.0, 49, 3).unwrap(), 0);
        assert_eq!(weighted_count(4.0, 3).unwrap().weighted, 1);
        assert_eq!(weighted_count(3.0, 3).unwrap().weighted, 0);
        assert!(minkowski_unchecked(0.5, 0.75) > 3.0);
    }

    #[test]
    fn per_l_matches_brute_enumeration() {
        // count points (n + d/2 − 1, k − 1/4) with F ≤ μ directly
        for &(mu, d) in &[(17.3, 3), (25.0, 4), (31.7, 5)] {
            let per_l = per_l_counts(&columns(mu, d).unwrap());
            for l in 0..per_l.len() as u64 + 2 {
                let mut brute = 0u64;
                for n in l..200 {
                    for k in 1..200 {
                        if minkowski_unchecked(n as f64 + d as f64 / 2.0 - 1.0, k as f64 - 0.25) <= mu {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(per_l.get(l as usize).copied().unwrap_or(0), brute, "mu={mu} d={d} l={l}");
            }
        }
    }

    #[test]
    fn per_l_nonincreasing() {
        let per_l = per_l_counts(&columns(120.0, 3).unwrap());
        assert!(per_l.windows(2).all(|w| w[0] >= w[1]));
        assert!(per_l.len() as f64 <= 120.0 - 0.5 + 1.0);
    }

    #[test]
    fn decomposition_identity_exact() {
        for &mu in &[12.5, 77.0, 203.3] {
            for l in [0, 3, 20] {
                if l >= decomposition_range(mu, 3) {
                    continue;
                }
                let dec = volume_boundary_decomposition(mu, l, 3).unwrap();
                assert_eq!(dec.identity_defect, 0.0, "mu={mu} l={l}");
            }
        }
    }

    #[test]
    fn aggregates_consistent_with_levels() {
        let mu = 60.0;
        let agg = weighted_count(mu, 3).unwrap();
        let mut vol = 0.0;
        for l in 0..decomposition_range(mu, 3) {
            let dec = volume_boundary_decomposition(mu, l, 3).unwrap();
            vol += multiplicity_difference(l, 3).unwrap() as f64 * dec.volume_term;
        }
        assert!((agg.volume_term - vol).abs() < 1e-9 * vol);
    }

    #[test]
    fn weyl_constants() {
        let (q, c) = weyl_constant_identity(3).unwrap();
        assert!((q / 2.0 - 1.0 / (9.0 * std::f64::consts::PI)).abs() < 1e-14);
        assert!((c - weyl_terms(1.0, 3).unwrap().0).abs() < 1e-16);
        assert_eq!(weyl_constant_identity(4).unwrap().1, 1.0 / 64.0);
        for d in 3..=12 {
            let (q, c) = weyl_constant_identity(d).unwrap();
            assert!((q - c).abs() <= 1e-10, "d={d}");
        }
    }

    #[test]
    fn second_term_small_mu() {
        // μ below d/2: only l = 0 contributes
        let s = second_term_identity(1.2, 3).unwrap();
        assert!((s.lhs - 0.25 * 1.2).abs() < 1e-15);
        let s = second_term_identity(100.0, 3).unwrap();
        assert!(s.scaled_difference.abs() < 1.0);
    }

    #[test]
    fn blocks_partition_sum() {
        let mu = 500.0;
        let b = psi_sum_blocks(mu, 3, default_head(mu)).unwrap();
        assert_eq!(b.rebuilt, b.direct);
        for blk in &b.blocks {
            assert!(blk.value.abs() <= blk.terms as f64 / 2.0 + 1e-9);
            assert!(blk.rescaling_deviation < 1e-8);
        }
        assert!(psi_sum_blocks(mu, 3, 0.5).is_err());
    }

    #[test]
    fn comparison_small() {
        let row = comparison_check(4.0, 3, 1.0, &CountConfig::default()).unwrap();
        assert_eq!(row.lhs, 0);
        assert_eq!(exact_count(4.0, 3).unwrap().exact, row.weighted);
    }
}
