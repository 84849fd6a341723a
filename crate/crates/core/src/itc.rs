//! Transfer probabilities, information transfer capacity (ITC) and the
//! induced pre-metric `d(i,j) = −log p_max(i,j)`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::chain::{check_spin, ChainSpec};
use crate::error::{ItcError, Result};
use crate::metric::{Distance, PreMetric};
use crate::spectral::{spectrum, SpectralDecomposition};

/// Rounding allowance above 1 tolerated (and clipped) in `p_max`.
pub const PMAX_EXCESS_TOL: f64 = 1e-12;

/// Default inertia exponent.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// `p_t(i,j) = |Σ_k e^{−iλ_k t} v_ki v_kj|²`.
pub fn p_t(dec: &SpectralDecomposition, i: usize, j: usize, t: f64) -> Result<f64> {
    let n = dec.dim();
    check_spin(i, n)?;
    check_spin(j, n)?;
    if !t.is_finite() {
        return Err(ItcError::invalid_argument(format!(
            "time must be finite, got {t}"
        )));
    }
    let (mut re, mut im) = (0.0, 0.0);
    for (k, &lambda) in dec.eigenvalues().iter().enumerate() {
        let w = dec.component(k, i) * dec.component(k, j);
        let (s, c) = (lambda * t).sin_cos();
        re += c * w;
        im -= s * w;
    }
    Ok(re * re + im * im)
}

/// `Σ_j p_t(i,j)`, which unitarity pins to 1.
pub fn row_sum_check(dec: &SpectralDecomposition, i: usize, t: f64) -> Result<f64> {
    (1..=dec.dim()).map(|j| p_t(dec, i, j, t)).sum()
}

/// `p_max(i,j) = (Σ_k |v_ki v_kj|)²`.
pub fn p_max(dec: &SpectralDecomposition, i: usize, j: usize) -> Result<f64> {
    let n = dec.dim();
    check_spin(i, n)?;
    check_spin(j, n)?;
    let amp: f64 = (0..n)
        .map(|k| (dec.component(k, i) * dec.component(k, j)).abs())
        .sum();
    clip_probability(amp * amp, i, j)
}

/// `p_max` of a homogeneous chain straight from the sine expression
/// `√p_max = 2/(N+1) Σ_k |sin(πki/(N+1)) sin(πkj/(N+1))|`, bypassing any
/// eigendecomposition.
pub fn p_max_explicit(n: usize, i: usize, j: usize) -> Result<f64> {
    check_spin(i, n)?;
    check_spin(j, n)?;
    let period = 2 * (n + 1);
    let scale = PI / (n + 1) as f64;
    let sum: f64 = (1..=n)
        .map(|k| {
            let a = ((k * i) % period) as f64 * scale;
            let b = ((k * j) % period) as f64 * scale;
            (a.sin() * b.sin()).abs()
        })
        .sum();
    let amp = 2.0 / (n + 1) as f64 * sum;
    clip_probability(amp * amp, i, j)
}

fn clip_probability(p: f64, i: usize, j: usize) -> Result<f64> {
    if p > 1.0 + PMAX_EXCESS_TOL || p.is_nan() {
        Err(ItcError::ProbabilityExcess { i, j, value: p })
    } else {
        Ok(p.min(1.0))
    }
}

/// All-pairs ITC and distances for one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ItcMatrix {
    spec: ChainSpec,
    pmax: Vec<f64>,
    distance: PreMetric,
}

impl ItcMatrix {
    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n_spins()
    }

    pub fn pmax(&self, i: usize, j: usize) -> f64 {
        self.pmax[(i - 1) * self.n() + j - 1]
    }

    pub fn sqrt_pmax(&self, i: usize, j: usize) -> f64 {
        self.pmax(i, j).sqrt()
    }

    pub fn distance(&self, i: usize, j: usize) -> Distance {
        self.distance.get(i, j)
    }

    pub fn premetric(&self) -> &PreMetric {
        &self.distance
    }
}

pub fn itc_matrix(spec: &ChainSpec) -> Result<ItcMatrix> {
    let dec = spectrum(spec)?;
    itc_matrix_from(spec, &dec)
}

/// Builds the matrix from an existing decomposition of `spec`'s Hamiltonian.
pub fn itc_matrix_from(spec: &ChainSpec, dec: &SpectralDecomposition) -> Result<ItcMatrix> {
    let n = spec.n_spins();
    if dec.dim() != n {
        return Err(ItcError::invalid_argument(format!(
            "decomposition has dimension {}, chain has {n} spins",
            dec.dim()
        )));
    }
    let abs = dec.abs_spin_major();
    // upper triangle row by row, each unordered pair evaluated once
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = &abs[i * n..(i + 1) * n];
            (i..n)
                .map(|j| {
                    let rj = &abs[j * n..(j + 1) * n];
                    let amp: f64 = ri.iter().zip(rj).map(|(a, b)| a * b).sum();
                    clip_probability(amp * amp, i + 1, j + 1)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut pmax = vec![0.0; n * n];
    let mut dist = vec![Distance::Finite(0.0); n * n];
    for (i, row) in rows.iter().enumerate() {
        for (offset, &p) in row.iter().enumerate() {
            let j = i + offset;
            pmax[i * n + j] = p;
            pmax[j * n + i] = p;
            if i != j {
                let d = Distance::from_probability(p);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
    }
    Ok(ItcMatrix {
        spec: *spec,
        pmax,
        distance: PreMetric::from_entries(n, dist),
    })
}

/// `I^(α)(j) = Σ_i d(i,j)^α`; `+∞` when any distance in the row is infinite.
pub fn inertia(m: &ItcMatrix, j: usize, alpha: f64) -> f64 {
    m.premetric()
        .row(j)
        .iter()
        .map(|d| match d {
            Distance::Finite(x) => x.powf(alpha),
            Distance::Infinite => f64::INFINITY,
        })
        .sum()
}

pub fn inertia_profile(m: &ItcMatrix, alpha: f64) -> Vec<f64> {
    (1..=m.n()).map(|j| inertia(m, j, alpha)).collect()
}
