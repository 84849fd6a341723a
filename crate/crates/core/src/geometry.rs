//! Metric-geometry diagnostics on ITC pre-metrics: anti-core detection,
//! diameter, triangle audit, four-point hyperbolicity and the path-product
//! transport bound.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{center_index, check_spin};
use crate::error::{ItcError, Result};
use crate::itc::{inertia_profile, ItcMatrix};
use crate::metric::{Distance, PreMetric};

/// Exhaustive four-point scan up to this many quadruples.
pub const DEFAULT_QUADRUPLE_BUDGET: u64 = 2_000_000;

/// Distances within this of each other count as tied.
pub const TIE_TOL: f64 = 1e-12;

/// Excess over the triangle inequality that counts as a violation.
pub const TRIANGLE_TOL: f64 = 1e-12;

/// Violations kept verbatim in a [`TriangleAudit`]; the count is always exact.
pub const TRIANGLE_LIST_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntiCore {
    pub omega: usize,
    /// Most frequent farthest spin over rows `i ≠ ω`.
    pub majority: usize,
    /// True iff every row `i ≠ ω` is farthest from ω.
    pub holds: bool,
    /// `(i, j)` where row `i` is strictly farther from `j` than from ω.
    pub violations: Vec<(usize, usize)>,
    /// `(i, j)` where `j ≠ ω` ties with ω for the farthest spin of row `i`.
    pub ties: Vec<(usize, usize)>,
}

pub fn find_anticore(m: &ItcMatrix) -> Result<AntiCore> {
    let n = m.n();
    let omega = center_index(n)?;
    let mut votes = vec![0usize; n + 1];
    let mut violations = Vec::new();
    let mut ties = Vec::new();
    for i in (1..=n).filter(|&i| i != omega) {
        let row = m.premetric().row(i);
        let to_omega = row[omega - 1].to_f64();
        // farthest spin, ties broken toward ω and then toward the lower index
        let mut best = omega;
        let mut best_d = to_omega;
        for j in (1..=n).filter(|&j| j != i && j != omega) {
            let d = row[j - 1].to_f64();
            if d > best_d + TIE_TOL {
                best = j;
                best_d = d;
            }
        }
        votes[best] += 1;
        if best != omega {
            violations.push((i, best));
        } else {
            ties.extend(
                (1..=n)
                    .filter(|&j| j != i && j != omega)
                    .filter(|&j| row[j - 1].to_f64() >= to_omega - TIE_TOL)
                    .map(|j| (i, j)),
            );
        }
    }
    let majority = (1..=n)
        .max_by(|&a, &b| {
            votes[a]
                .cmp(&votes[b])
                .then((b == omega).cmp(&(a == omega)))
                .then(b.cmp(&a))
        })
        .unwrap_or(omega);
    Ok(AntiCore {
        omega,
        majority,
        holds: violations.is_empty(),
        violations,
        ties,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diameter {
    pub value: Distance,
    pub pair: (usize, usize),
}

/// Largest off-diagonal distance with its first attaining pair `i < j`.
pub fn diameter(metric: &PreMetric) -> Diameter {
    let n = metric.len();
    let mut best = Diameter {
        value: Distance::Finite(0.0),
        pair: (1, 1.min(n)),
    };
    for i in 1..=n {
        for j in i + 1..=n {
            let d = metric.get(i, j);
            if d.total_cmp(&best.value).is_gt() || best.pair.0 == best.pair.1 {
                best = Diameter {
                    value: d,
                    pair: (i, j),
                };
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleAudit {
    /// `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k) + tol`, truncated to
    /// [`TRIANGLE_LIST_LIMIT`] entries.
    pub violations: Vec<(usize, usize, usize)>,
    pub count: u64,
    pub max_excess: f64,
    /// Triples skipped because a distance was infinite.
    pub skipped: u64,
}

pub fn triangle_violations(metric: &PreMetric) -> TriangleAudit {
    let n = metric.len();
    let per_i: Vec<TriangleAudit> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let mut audit = TriangleAudit {
                violations: Vec::new(),
                count: 0,
                max_excess: 0.0,
                skipped: 0,
            };
            for k in i + 1..=n {
                for j in (1..=n).filter(|&j| j != i && j != k) {
                    let (Some(ik), Some(ij), Some(jk)) = (
                        metric.get(i, k).finite(),
                        metric.get(i, j).finite(),
                        metric.get(j, k).finite(),
                    ) else {
                        audit.skipped += 1;
                        continue;
                    };
                    let excess = ik - ij - jk;
                    if excess > TRIANGLE_TOL {
                        audit.count += 1;
                        audit.max_excess = audit.max_excess.max(excess);
                        if audit.violations.len() < TRIANGLE_LIST_LIMIT {
                            audit.violations.push((i, j, k));
                        }
                    }
                }
            }
            audit
        })
        .collect();

    let mut total = TriangleAudit {
        violations: Vec::new(),
        count: 0,
        max_excess: 0.0,
        skipped: 0,
    };
    for a in per_i {
        total.count += a.count;
        total.skipped += a.skipped;
        total.max_excess = total.max_excess.max(a.max_excess);
        let room = TRIANGLE_LIST_LIMIT - total.violations.len();
        total.violations.extend(a.violations.into_iter().take(room));
    }
    total
}

/// Four-point Gromov δ (diagnostic).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourPointReport {
    pub delta: f64,
    /// Attaining quadruple, if any quadruple was evaluated.
    pub quadruple: Option<[usize; 4]>,
    pub evaluated: u64,
    /// Quadruples skipped because one of their distances was infinite.
    pub skipped: u64,
    pub exhaustive: bool,
    pub seed: u64,
}

fn binomial4(n: usize) -> u64 {
    if n < 4 {
        return 0;
    }
    let n = n as u128;
    (n * (n - 1) * (n - 2) * (n - 3) / 24).min(u64::MAX as u128) as u64
}

/// Half the gap between the largest and middle of the three pair sums.
fn quadruple_delta(metric: &PreMetric, [x, y, z, w]: [usize; 4]) -> Option<f64> {
    let d = |a, b| metric.get(a, b).finite();
    let mut sums = [
        d(x, y)? + d(z, w)?,
        d(x, z)? + d(y, w)?,
        d(x, w)? + d(y, z)?,
    ];
    sums.sort_by(f64::total_cmp);
    Some(((sums[2] - sums[1]) / 2.0).max(0.0))
}

#[derive(Clone, Copy)]
struct Best {
    delta: f64,
    quad: Option<[usize; 4]>,
    evaluated: u64,
    skipped: u64,
}

impl Best {
    const EMPTY: Best = Best {
        delta: 0.0,
        quad: None,
        evaluated: 0,
        skipped: 0,
    };

    fn offer(&mut self, metric: &PreMetric, q: [usize; 4]) {
        match quadruple_delta(metric, q) {
            Some(delta) => {
                self.evaluated += 1;
                if self.quad.is_none() || delta > self.delta {
                    self.delta = delta;
                    self.quad = Some(q);
                }
            }
            None => self.skipped += 1,
        }
    }

    // `other` comes later in the scan order, so it only wins strictly
    fn merge(mut self, other: Best) -> Best {
        self.evaluated += other.evaluated;
        self.skipped += other.skipped;
        if other.quad.is_some() && (self.quad.is_none() || other.delta > self.delta) {
            self.delta = other.delta;
            self.quad = other.quad;
        }
        self
    }
}

/// Max over quadruples of the four-point δ. Exhaustive when `C(N,4)` fits in
/// `budget`, otherwise `budget` quadruples drawn with a ChaCha8 stream seeded
/// by `seed`.
pub fn four_point_delta(metric: &PreMetric, budget: u64, seed: u64) -> FourPointReport {
    let n = metric.len();
    let total = binomial4(n);
    let exhaustive = total <= budget;
    let best = if exhaustive {
        (1..=n)
            .into_par_iter()
            .map(|x| {
                let mut b = Best::EMPTY;
                for y in x + 1..=n {
                    for z in y + 1..=n {
                        for w in z + 1..=n {
                            b.offer(metric, [x, y, z, w]);
                        }
                    }
                }
                b
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Best::EMPTY, Best::merge)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let quads: Vec<[usize; 4]> = (0..budget)
            .map(|_| {
                let mut q = [0usize; 4];
                for (slot, idx) in q.iter_mut().zip(sample(&mut rng, n, 4).iter()) {
                    *slot = idx + 1;
                }
                q.sort_unstable();
                q
            })
            .collect();
        quads
            .par_chunks(4096)
            .map(|chunk| {
                let mut b = Best::EMPTY;
                for &q in chunk {
                    b.offer(metric, q);
                }
                b
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Best::EMPTY, Best::merge)
    };
    FourPointReport {
        delta: best.delta,
        quadruple: best.quad,
        evaluated: best.evaluated,
        skipped: best.skipped,
        exhaustive,
        seed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathProductReport {
    pub i: usize,
    pub j: usize,
    pub segments: usize,
    /// `√p_max(i,j)`.
    pub lhs: f64,
    /// Sum over all intermediate sequences `k_1..k_{segments−2}` of the
    /// product of `√p_max` along the path.
    pub rhs: f64,
    pub margin: f64,
    /// Part of `rhs` from paths with at least one intermediate at ω.
    pub transit_rhs: Option<f64>,
    pub transit_share: Option<f64>,
}

/// Checks `√p_max(i,j) ≤ Σ_{k_1..k_{s−2}} Π_l √p_max(k_{l−1}, k_l)`.
///
/// The full sum over `N^{s−2}` sequences is the `(i,j)` entry of the
/// `(s−1)`-th power of the `√p_max` matrix, evaluated here as repeated
/// row-vector products, so it is exact rather than sampled.
pub fn path_product_bound_check(
    m: &ItcMatrix,
    i: usize,
    j: usize,
    segments: usize,
) -> Result<PathProductReport> {
    let n = m.n();
    check_spin(i, n)?;
    check_spin(j, n)?;
    if segments < 2 || segments > n {
        return Err(ItcError::invalid_argument(format!(
            "segments must lie in 2..={n}, got {segments}"
        )));
    }
    let amp: Vec<f64> = (1..=n)
        .flat_map(|a| (1..=n).map(move |b| (a, b)))
        .map(|(a, b)| m.sqrt_pmax(a, b))
        .collect();
    let step = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|b| (0..n).map(|a| x[a] * amp[a * n + b]).sum())
            .collect()
    };

    let omega = center_index(n).ok();
    let mut all = vec![0.0; n];
    all[i - 1] = 1.0;
    let mut avoiding = all.clone();
    for _ in 0..segments - 2 {
        all = step(&all);
        avoiding = step(&avoiding);
        if let Some(w) = omega {
            avoiding[w - 1] = 0.0;
        }
    }
    let rhs = step(&all)[j - 1];
    let lhs = m.sqrt_pmax(i, j);
    let transit_rhs = omega.map(|_| rhs - step(&avoiding)[j - 1]);
    Ok(PathProductReport {
        i,
        j,
        segments,
        lhs,
        rhs,
        margin: rhs - lhs,
        transit_rhs,
        transit_share: transit_rhs.map(|t| if rhs > 0.0 { t / rhs } else { 0.0 }),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryReport {
    /// `None` for even chains, which have no center spin.
    pub anticore: Option<AntiCore>,
    pub alpha: f64,
    pub inertia_profile: Vec<f64>,
    pub diameter: Diameter,
    pub triangle: TriangleAudit,
    pub four_point: FourPointReport,
}

pub fn geometry_report(m: &ItcMatrix, alpha: f64, budget: u64, seed: u64) -> GeometryReport {
    GeometryReport {
        anticore: find_anticore(m).ok(),
        alpha,
        inertia_profile: inertia_profile(m, alpha),
        diameter: diameter(m.premetric()),
        triangle: triangle_violations(m.premetric()),
        four_point: four_point_delta(m.premetric(), budget, seed),
    }
}
