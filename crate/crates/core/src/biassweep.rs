//! Center-bias sweeps on odd chains: escape of the top eigenvalue, decay of
//! the capacity to the center, and the split into two weakly coupled halves.

use rayon::prelude::*;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{ItcError, Result};
use crate::itc::{itc_matrix, p_max};
use crate::metric::Distance;
use crate::spectral::spectrum;

/// Default sweep grid.
pub const DEFAULT_GRID: [f64; 5] = [1.0, 10.0, 1e2, 1e3, 1e4];

/// Scaling fits only use bias values at or above this.
pub const FIT_MIN_ZETA: f64 = 1e2;

/// Allowance for the monotone decay of `p_max(1, ω)` along a sweep.
pub const MONOTONE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub zeta: f64,
    /// `None` at ζ = 0.
    pub lambda_max_over_zeta: Option<f64>,
    pub pmax_1_omega: f64,
    pub pmax_1_n: f64,
    pub d_1_omega: Distance,
    pub d_1_n: Distance,
    /// Defined for ζ > 1.
    pub d_1_omega_over_log_zeta: Option<f64>,
}

pub fn sweep_point(n: usize, zeta: f64) -> Result<SweepPoint> {
    let spec = ChainSpec::new(n, zeta)?;
    let omega = spec.center()?;
    let dec = spectrum(&spec)?;
    let pmax_1_omega = p_max(&dec, 1, omega)?;
    let pmax_1_n = p_max(&dec, 1, n)?;
    let d_1_omega = Distance::from_probability(pmax_1_omega);
    let top = dec.eigenvalues()[n - 1];
    Ok(SweepPoint {
        zeta,
        lambda_max_over_zeta: (zeta > 0.0).then(|| top / zeta),
        pmax_1_omega,
        pmax_1_n,
        d_1_omega,
        d_1_n: Distance::from_probability(pmax_1_n),
        d_1_omega_over_log_zeta: match d_1_omega {
            Distance::Finite(d) if zeta > 1.0 => Some(d / zeta.ln()),
            _ => None,
        },
    })
}

/// One point per grid value, in grid order.
pub fn sweep(n: usize, zeta_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if n % 2 == 0 {
        return Err(ItcError::InvalidChain(format!(
            "bias sweeps need an odd chain, got N = {n}"
        )));
    }
    if zeta_grid.iter().any(|z| !z.is_finite() || *z < 0.0) {
        return Err(ItcError::invalid_argument(
            "bias values must be finite and non-negative",
        ));
    }
    if zeta_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(ItcError::invalid_argument("bias grid must be ascending"));
    }
    zeta_grid.par_iter().map(|&z| sweep_point(n, z)).collect()
}

/// Consecutive grid values `(ζ1, ζ2)` where `p_max(1, ω)` went up.
pub fn monotonicity_violations(points: &[SweepPoint]) -> Vec<(f64, f64)> {
    points
        .windows(2)
        .filter(|w| w[1].zeta > w[0].zeta && w[1].pmax_1_omega > w[0].pmax_1_omega + MONOTONE_TOL)
        .map(|w| (w[0].zeta, w[1].zeta))
        .collect()
}

/// Power law `p_max(1, ω) ≈ prefactor · ζ^slope` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub prefactor: f64,
    pub points_used: usize,
}

pub fn scaling_constant_estimate(points: &[SweepPoint]) -> Result<ScalingFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.zeta >= FIT_MIN_ZETA && p.pmax_1_omega > 0.0)
        .map(|p| (p.zeta.ln(), p.pmax_1_omega.ln()))
        .collect();
    if usable.len() < 3 {
        return Err(ItcError::invalid_argument(format!(
            "scaling fit needs at least 3 points with ζ ≥ {FIT_MIN_ZETA}, got {}",
            usable.len()
        )));
    }
    let k = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = usable.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = usable.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx <= f64::EPSILON * mean_x.abs().max(1.0) {
        return Err(ItcError::invalid_argument(
            "bias grid has no spread to fit against",
        ));
    }
    let sxy: f64 = usable.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    Ok(ScalingFit {
        slope,
        prefactor: (mean_y - slope * mean_x).exp(),
        points_used: usable.len(),
    })
}

/// Range of `p_max` over one class of spin pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairClass {
    pub min: f64,
    pub max: f64,
    pub pairs: usize,
}

impl PairClass {
    fn collect(values: impl Iterator<Item = f64>) -> Option<Self> {
        values.fold(None, |acc, v| {
            Some(match acc {
                None => PairClass {
                    min: v,
                    max: v,
                    pairs: 1,
                },
                Some(c) => PairClass {
                    min: c.min.min(v),
                    max: c.max.max(v),
                    pairs: c.pairs + 1,
                },
            })
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecouplingReport {
    pub n: usize,
    pub zeta: f64,
    /// Both spins strictly on the same side of ω (absent for N = 3).
    pub same_half: Option<PairClass>,
    /// Spins on opposite sides of ω.
    pub cross_half: PairClass,
    /// Pairs with one spin at ω.
    pub with_omega: PairClass,
    /// Every ω-pair sits strictly below every other pair.
    pub omega_pairs_minimal: bool,
}

pub fn decoupling_report(spec: &ChainSpec) -> Result<DecouplingReport> {
    let n = spec.n_spins();
    let omega = spec.center()?;
    let m = itc_matrix(spec)?;
    let pairs = || (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)));
    let same_half = PairClass::collect(
        pairs()
            .filter(|&(i, j)| (i < omega && j < omega) || (i > omega && j > omega))
            .map(|(i, j)| m.pmax(i, j)),
    );
    let cross_half = PairClass::collect(
        pairs()
            .filter(|&(i, j)| i < omega && j > omega)
            .map(|(i, j)| m.pmax(i, j)),
    )
    .expect("odd chains with N ≥ 3 have a cross pair");
    let with_omega = PairClass::collect(
        pairs()
            .filter(|&(i, j)| i == omega || j == omega)
            .map(|(i, j)| m.pmax(i, j)),
    )
    .expect("odd chains with N ≥ 3 have an ω pair");
    let others_min = same_half.map_or(cross_half.min, |s| s.min.min(cross_half.min));
    Ok(DecouplingReport {
        n,
        zeta: spec.bias(),
        same_half,
        cross_half,
        with_omega,
        omega_pairs_minimal: with_omega.max < others_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form N = 3 eigenvectors `(1, a, 1)/√(a²+2)` with
    /// `a = ζ/2 ± √(ζ²+8)/2`, and `(−1, 0, 1)/√2`.
    fn three_spin_pmax_1_2(zeta: f64) -> f64 {
        let root = (zeta * zeta + 8.0).sqrt() / 2.0;
        let term = |a: f64| (a / (a * a + 2.0)).abs();
        let amp = term(zeta / 2.0 - root) + term(zeta / 2.0 + root);
        amp * amp
    }

    #[test]
    fn unbiased_three_spin_point() {
        let p = sweep_point(3, 0.0).unwrap();
        assert!((p.pmax_1_n - 1.0).abs() < 1e-12);
        assert!((p.pmax_1_omega - 0.5).abs() < 1e-12);
        assert_eq!(p.lambda_max_over_zeta, None);
        assert_eq!(p.d_1_omega_over_log_zeta, None);
    }

    #[test]
    fn end_to_end_capacity_survives_bias() {
        let p = sweep_point(3, 1e3).unwrap();
        assert!(p.pmax_1_n >= 1.0 - 1e-6);
    }

    #[test]
    fn matches_three_spin_closed_form() {
        for z in [0.5, 1.0, 10.0, 1e2, 1e3, 1e4] {
            let p = sweep_point(3, z).unwrap();
            let want = three_spin_pmax_1_2(z);
            assert!(
                (p.pmax_1_omega - want).abs() <= 1e-9 * want.max(1e-3),
                "ζ={z}"
            );
        }
    }

    #[test]
    fn log_ratio_settles() {
        let pts = sweep(3, &[1e2, 1e3, 1e4]).unwrap();
        let r: Vec<f64> = pts
            .iter()
            .map(|p| p.d_1_omega_over_log_zeta.unwrap())
            .collect();
        assert!(r.iter().all(|&x| x > 0.0));
        assert!((r[2] - r[1]).abs() / r[2] <= 0.10, "{r:?}");
    }

    #[test]
    fn sweep_preserves_order_and_validates() {
        let grid = [0.0, 1.0, 10.0, 100.0];
        let pts = sweep(5, &grid).unwrap();
        assert_eq!(pts.iter().map(|p| p.zeta).collect::<Vec<_>>(), grid);
        assert!(monotonicity_violations(&pts).is_empty());
        assert!(sweep(4, &grid).is_err());
        assert!(sweep(5, &[10.0, 1.0]).is_err());
        assert!(sweep(5, &[-1.0]).is_err());
    }

    #[test]
    fn monotone_decay_to_center() {
        for n in [5, 21] {
            let pts = sweep(n, &[1e2, 1e3, 1e4]).unwrap();
            assert!(pts
                .windows(2)
                .all(|w| w[1].pmax_1_omega < w[0].pmax_1_omega));
        }
    }

    #[test]
    fn fit_on_three_spins() {
        let pts = sweep(3, &[1e2, 1e3, 1e4]).unwrap();
        let fit = scaling_constant_estimate(&pts).unwrap();
        assert_eq!(fit.points_used, 3);
        // p_max(1,2) = 4/ζ² (1 + O(ζ⁻²)) from the closed form
        assert!((fit.slope + 2.0).abs() < 1e-3, "{fit:?}");
        assert!((fit.prefactor - 4.0).abs() < 1e-2, "{fit:?}");
    }

    #[test]
    fn fit_rejects_degenerate_grids() {
        let pts = sweep(3, &[1e3, 1e3, 1e3]).unwrap();
        assert!(scaling_constant_estimate(&pts).is_err());
        let pts = sweep(3, &[1.0, 10.0, 1e2]).unwrap();
        assert!(scaling_constant_estimate(&pts).is_err());
    }

    #[test]
    fn decoupling_five_spins() {
        let r = decoupling_report(&ChainSpec::biased(5, 1e3).unwrap()).unwrap();
        assert!(r.omega_pairs_minimal);
        assert!(r.cross_half.min > 0.1);
        let base = decoupling_report(&ChainSpec::homogeneous(5).unwrap()).unwrap();
        assert_eq!(base.zeta, 0.0);
        assert_eq!(base.with_omega.pairs, 4);
        assert_eq!(base.cross_half.pairs, 4);
        assert_eq!(base.same_half.unwrap().pairs, 2);
    }

    #[test]
    fn decoupling_three_spins() {
        let r = decoupling_report(&ChainSpec::biased(3, 1e3).unwrap()).unwrap();
        assert!(r.same_half.is_none());
        assert!((r.cross_half.min - 1.0).abs() < 1e-6);
        assert!(r.omega_pairs_minimal);
    }

    #[test]
    fn suppression_within_fitted_envelope() {
        for n in [3, 5, 11] {
            let points = sweep(n, &DEFAULT_GRID).unwrap();
            let fit = scaling_constant_estimate(&points).unwrap();
            for p in points.iter().filter(|p| p.zeta >= FIT_MIN_ZETA) {
                assert!(
                    p.pmax_1_omega <= 10.0 * fit.prefactor / p.zeta,
                    "N={n} ζ={}",
                    p.zeta
                );
            }
        }
    }
}
