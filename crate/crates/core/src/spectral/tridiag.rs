//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! Eigenvectors are accumulated as rows of `vectors` (row `k` is the
//! eigenvector paired with `values[k]`) so every Givens rotation touches two
//! contiguous slices. The output is unsorted; callers order it.

use crate::error::{ItcError, Result};

/// Iteration cap per eigenvalue. QL with Wilkinson-type shifts converges in
/// two or three sweeps for almost every input; 60 leaves plenty of room.
pub const MAX_SWEEPS: usize = 60;

pub(crate) struct TridiagEigen {
    pub values: Vec<f64>,
    /// Row-major, row `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
}

pub(crate) fn solve(diag: &[f64], offdiag: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    debug_assert_eq!(offdiag.len() + 1, n.max(1));
    let mut d = diag.to_vec();
    // e[i] couples i and i+1; the trailing slot is scratch
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(offdiag);

    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(ItcError::NotConverged {
                    index: l,
                    iterations: sweeps - 1,
                });
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // underflow: split the matrix and restart this block
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (lo, hi) = z.split_at_mut((i + 1) * n);
                let zi = &mut lo[i * n..];
                let zi1 = &mut hi[..n];
                for k in 0..n {
                    let f = zi1[k];
                    zi1[k] = s * zi[k] + c * f;
                    zi[k] = c * zi[k] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    Ok(TridiagEigen {
        values: d,
        vectors: z,
    })
}
