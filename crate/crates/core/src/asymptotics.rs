//! Infinite-chain limits of `√p_max`.
//!
//! Two ways of growing the chain give different limits. In the semi-infinite
//! frame spins are counted from the left end (`i, j ≥ 1`); in the
//! doubly-infinite frame they are counted from the center ω (`i′, j′ ∈ ℤ`).
//! Either way the value depends only on the gcd-reduced pair, through a
//! positive series over even `m` and an equivalent cotangent closed form.
//! The closed form is returned; the series is kept as an independent check.

use std::f64::consts::{FRAC_2_PI, PI};

use serde::Serialize;

use crate::error::{ItcError, Result};

/// Largest admissible truncation tolerance.
pub const MAX_TOL: f64 = 1e-3;

/// Slack added on top of the truncation tolerance when comparing the two
/// representations.
pub const DUAL_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    SemiInfinite,
    DoublyInfinite,
}

/// Whether the two positions carry the same power of 2. After gcd reduction
/// "equal" means both reduced positions are odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParityClass {
    EqualDyadicValuation,
    UnequalDyadicValuation,
}

impl ParityClass {
    /// Spacing of the even `m` in the series (2 or 4), which is also the
    /// denominator factor in the cotangent arguments `π/(q·i)`.
    pub fn step(self) -> u64 {
        match self {
            ParityClass::EqualDyadicValuation => 2,
            ParityClass::UnequalDyadicValuation => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReducedPair {
    pub frame: Frame,
    pub i_raw: i64,
    pub j_raw: i64,
    pub g: u64,
    pub i_red: u64,
    pub j_red: u64,
    /// Always `EqualDyadicValuation` in the semi-infinite frame, where only
    /// the `m = 2, 4, …` series occurs.
    pub parity_class: ParityClass,
    /// Positions on opposite sides of ω, folded onto one side.
    pub reflected: bool,
}

impl ReducedPair {
    pub fn is_diagonal(&self) -> bool {
        self.i_red == self.j_red
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exponent of 2 in a nonzero integer.
pub fn dyadic_valuation(x: u64) -> u32 {
    debug_assert!(x != 0);
    x.trailing_zeros()
}

pub fn reduce_pair(i: i64, j: i64, frame: Frame) -> Result<ReducedPair> {
    match frame {
        Frame::SemiInfinite if i < 1 || j < 1 => {
            return Err(ItcError::invalid_argument(format!(
                "semi-infinite positions start at 1, got ({i}, {j})"
            )))
        }
        Frame::DoublyInfinite if i == 0 || j == 0 => {
            return Err(ItcError::invalid_argument(
                "the center position 0 has no reduced pair; use doubly_infinite_pmax",
            ))
        }
        _ => {}
    }
    let (a, b) = (i.unsigned_abs(), j.unsigned_abs());
    let g = gcd(a, b);
    let parity_class = match frame {
        Frame::DoublyInfinite if dyadic_valuation(a) != dyadic_valuation(b) => {
            ParityClass::UnequalDyadicValuation
        }
        _ => ParityClass::EqualDyadicValuation,
    };
    Ok(ReducedPair {
        frame,
        i_raw: i,
        j_raw: j,
        g,
        i_red: a / g,
        j_red: b / g,
        parity_class,
        reflected: (i < 0) != (j < 0),
    })
}

/// A truncated series value with its certified truncation error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Upper bound on the omitted tail, in units of `√p_max`.
    pub tail_bound: f64,
    pub last_m: u64,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol <= MAX_TOL {
        Ok(())
    } else {
        Err(ItcError::invalid_argument(format!(
            "tolerance must lie in (0, {MAX_TOL}], got {tol}"
        )))
    }
}

/// Tail bound after the last included term `m = last_m`.
///
/// For `m ≥ 4` each term `4/((m²j²−1)(m²i²−1))` is at most
/// `(16/15)²·4/(m⁴i²j²)`, and a sum over every second (or fourth) integer
/// beyond `M` is at most half of `∫_M^∞ x⁻⁴ dx`. Together that stays below
/// `4/(3(M−1)³i²j²)`, which is what we report.
fn tail_bound(last_m: u64, i_red: u64, j_red: u64) -> f64 {
    let m = last_m as f64;
    let (i, j) = (i_red as f64, j_red as f64);
    4.0 / (3.0 * (m - 1.0).powi(3) * i * i * j * j)
}

/// `(4/π²)(2 + Σ_{m = q, 2q, …} 4/((m²j²−1)(m²i²−1)))` truncated once the
/// certified tail drops below `tol`.
fn series(i_red: u64, j_red: u64, step: u64, tol: f64) -> SeriesValue {
    let (i2, j2) = ((i_red * i_red) as f64, (j_red * j_red) as f64);
    let pref = 4.0 / (PI * PI);
    let mut sum = 0.0;
    let mut m = step;
    loop {
        let m2 = (m * m) as f64;
        sum += 4.0 / ((m2 * j2 - 1.0) * (m2 * i2 - 1.0));
        // the bound needs m ≥ 4 before it is valid
        if m >= 4 {
            let tail = pref * tail_bound(m, i_red, j_red);
            if tail < tol {
                return SeriesValue {
                    value: pref * (2.0 + sum),
                    tail_bound: tail,
                    last_m: m,
                };
            }
        }
        m += step;
    }
}

/// `x cot x`, with the exact zero at `x = π/2`.
fn x_cot_x(x: f64) -> f64 {
    if x == PI / 2.0 {
        0.0
    } else {
        x / x.tan()
    }
}

/// Cotangent closed form for coprime `i ≠ j`:
/// `(8/π²)·(i²·f(π/(q·i)) − j²·f(π/(q·j)))/(i² − j²)` with `f(x) = x cot x`.
fn closed_form(i_red: u64, j_red: u64, q: u64) -> f64 {
    let (i, j) = (i_red as f64, j_red as f64);
    let (i2, j2) = (i * i, j * j);
    let q = q as f64;
    let fi = if i_red == 1 && q == 2.0 {
        0.0
    } else {
        x_cot_x(PI / (q * i))
    };
    let fj = if j_red == 1 && q == 2.0 {
        0.0
    } else {
        x_cot_x(PI / (q * j))
    };
    8.0 / (PI * PI) * (i2 * fi - j2 * fj) / (i2 - j2)
}

pub fn semi_infinite_pmax_series(p: &ReducedPair, tol: f64) -> Result<SeriesValue> {
    check_tol(tol)?;
    if p.frame != Frame::SemiInfinite {
        return Err(ItcError::invalid_argument("expected a semi-infinite pair"));
    }
    Ok(series(p.i_red, p.j_red, 2, tol))
}

pub fn semi_infinite_pmax_closed(p: &ReducedPair) -> Result<f64> {
    if p.frame != Frame::SemiInfinite {
        return Err(ItcError::invalid_argument("expected a semi-infinite pair"));
    }
    if p.is_diagonal() {
        return Err(ItcError::invalid_argument(
            "closed form is singular for i = j; the value there is exactly 1",
        ));
    }
    Ok(closed_form(p.i_red, p.j_red, 2))
}

/// Which formula produced a doubly-infinite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DoublyCase {
    /// One position is the center ω.
    Center,
    /// Same reduced position, value exactly 1.
    Diagonal,
    Series(ParityClass),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoublyInfiniteValue {
    pub value: f64,
    pub case: DoublyCase,
    pub pair: Option<ReducedPair>,
    pub series: Option<SeriesValue>,
    pub closed_form: Option<f64>,
    /// Mirror-image positions `i′ = −j′`; handled by folding onto one side.
    pub mirror_pair: bool,
}

/// Doubly-infinite `√p_max` for positions measured from the center.
pub fn doubly_infinite_pmax(i_rel: i64, j_rel: i64, tol: f64) -> Result<DoublyInfiniteValue> {
    check_tol(tol)?;
    if i_rel == 0 && j_rel == 0 {
        return Err(ItcError::invalid_argument(
            "both positions at the center: use p_max(ω, ω) = 1 directly",
        ));
    }
    if i_rel == 0 || j_rel == 0 {
        return Ok(DoublyInfiniteValue {
            value: FRAC_2_PI,
            case: DoublyCase::Center,
            pair: None,
            series: None,
            closed_form: None,
            mirror_pair: false,
        });
    }
    let pair = reduce_pair(i_rel, j_rel, Frame::DoublyInfinite)?;
    let mirror_pair = i_rel == -j_rel;
    if pair.is_diagonal() {
        return Ok(DoublyInfiniteValue {
            value: 1.0,
            case: DoublyCase::Diagonal,
            pair: Some(pair),
            series: None,
            closed_form: None,
            mirror_pair,
        });
    }
    let step = pair.parity_class.step();
    let s = series(pair.i_red, pair.j_red, step, tol);
    let c = closed_form(pair.i_red, pair.j_red, step);
    if (s.value - c).abs() > tol + DUAL_SLACK {
        return Err(ItcError::CrossCheck(format!(
            "doubly-infinite ({i_rel}, {j_rel}): series {} vs closed form {c}",
            s.value
        )));
    }
    Ok(DoublyInfiniteValue {
        value: c,
        case: DoublyCase::Series(pair.parity_class),
        pair: Some(pair),
        series: Some(s),
        closed_form: Some(c),
        mirror_pair,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiameterConstants {
    /// `64/π⁴`, lower bound of semi-infinite `p_max`.
    pub semi_floor_pmax: f64,
    /// `8/π²`, lower bound of doubly-infinite `√p_max` away from the center.
    pub doubly_floor_sqrt: f64,
    /// `2/π`, doubly-infinite `√p_max` to the center.
    pub center_sqrt: f64,
    /// `−2 log(2/π)`.
    pub doubly_diameter: f64,
    /// `π² − 8`.
    pub even_zeta_sum: f64,
}

pub fn diameter_constants() -> DiameterConstants {
    let pi2 = PI * PI;
    DiameterConstants {
        semi_floor_pmax: 64.0 / (pi2 * pi2),
        doubly_floor_sqrt: 8.0 / pi2,
        center_sqrt: FRAC_2_PI,
        doubly_diameter: -2.0 * FRAC_2_PI.ln(),
        even_zeta_sum: pi2 - 8.0,
    }
}

/// `Σ_{m = 2, 4, …, M} 16/(m²−1)²`, which tends to `π² − 8`.
pub fn zeta_identity_check(cutoff: u64) -> Result<f64> {
    if cutoff < 2 {
        return Err(ItcError::invalid_argument("cutoff must be at least 2"));
    }
    // summed from the small tail end up for accuracy
    let last = cutoff - cutoff % 2;
    Ok((1..=last / 2)
        .rev()
        .map(|h| {
            let m = (2 * h) as f64;
            16.0 / ((m * m - 1.0) * (m * m - 1.0))
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    fn semi(i: i64, j: i64) -> ReducedPair {
        reduce_pair(i, j, Frame::SemiInfinite).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let p = semi(6, 4);
        assert_eq!((p.g, p.i_red, p.j_red), (2, 3, 2));

        let p = reduce_pair(-3, 5, Frame::DoublyInfinite).unwrap();
        assert_eq!((p.i_red, p.j_red), (3, 5));
        assert_eq!(p.parity_class, ParityClass::EqualDyadicValuation);
        assert!(p.reflected);

        let p = reduce_pair(2, 4, Frame::DoublyInfinite).unwrap();
        assert_eq!((p.i_red, p.j_red), (1, 2));
        assert_eq!(p.parity_class, ParityClass::UnequalDyadicValuation);
    }

    #[test]
    fn reduction_errors() {
        assert!(reduce_pair(0, 3, Frame::SemiInfinite).is_err());
        assert!(reduce_pair(-1, 3, Frame::SemiInfinite).is_err());
        assert!(reduce_pair(0, 3, Frame::DoublyInfinite).is_err());
    }

    /// The four textual cases (both odd; both even, same power of 2; both
    /// even, different powers; odd and even) against the valuation rule.
    #[test]
    fn four_parity_cases_collapse_to_valuations() {
        let class = |i, j| {
            reduce_pair(i, j, Frame::DoublyInfinite)
                .unwrap()
                .parity_class
        };
        use ParityClass::*;
        for (i, j) in [(3, 5), (1, 7), (9, 15)] {
            assert_eq!(class(i, j), EqualDyadicValuation, "both odd {i},{j}");
        }
        for (i, j) in [(2, 6), (4, 12), (12, 20)] {
            assert_eq!(class(i, j), EqualDyadicValuation, "same power {i},{j}");
        }
        for (i, j) in [(2, 4), (4, 6), (8, 12)] {
            assert_eq!(
                class(i, j),
                UnequalDyadicValuation,
                "different power {i},{j}"
            );
        }
        for (i, j) in [(1, 2), (3, 8), (5, 6), (6, 5)] {
            assert_eq!(class(i, j), UnequalDyadicValuation, "mixed {i},{j}");
        }
    }

    #[test]
    fn diagonal_series_is_one() {
        let s = semi_infinite_pmax_series(&semi(4, 4), TOL).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9 + s.tail_bound);
        assert!(s.tail_bound < TOL);
    }

    #[test]
    fn far_coprime_pair_approaches_floor() {
        let s = semi_infinite_pmax_series(&semi(997, 1), TOL).unwrap();
        let floor = 8.0 / (PI * PI);
        assert!(s.value >= floor && s.value - floor < 1e-4, "{}", s.value);
    }

    #[test]
    fn closed_form_one_two() {
        let c = semi_infinite_pmax_closed(&semi(1, 2)).unwrap();
        assert!((c - 8.0 / (3.0 * PI)).abs() < 1e-15);
        let s = semi_infinite_pmax_series(&semi(1, 2), TOL).unwrap();
        assert!((s.value - c).abs() <= TOL + DUAL_SLACK);
        let scaled = semi_infinite_pmax_closed(&semi(2, 4)).unwrap();
        assert_eq!(scaled, c);
    }

    #[test]
    fn closed_form_rejects_diagonal() {
        assert!(semi_infinite_pmax_closed(&semi(3, 3)).is_err());
    }

    #[test]
    fn series_and_closed_form_agree() {
        for (i, j) in [(2, 3), (3, 5), (4, 9), (7, 30)] {
            let p = semi(i, j);
            let s = semi_infinite_pmax_series(&p, TOL).unwrap();
            let c = semi_infinite_pmax_closed(&p).unwrap();
            assert!((s.value - c).abs() <= 1e-10, "({i},{j}) {} vs {c}", s.value);
        }
    }

    #[test]
    fn invalid_tolerance() {
        assert!(semi_infinite_pmax_series(&semi(1, 2), 0.0).is_err());
        assert!(semi_infinite_pmax_series(&semi(1, 2), 0.1).is_err());
        assert!(doubly_infinite_pmax(1, 2, -1.0).is_err());
    }

    #[test]
    fn doubly_special_cases() {
        let v = doubly_infinite_pmax(0, 14, TOL).unwrap();
        assert_eq!(v.value, 2.0 / PI);
        assert_eq!(v.case, DoublyCase::Center);
        assert!((v.value - std::f64::consts::FRAC_2_PI).abs() < 1e-6);

        let v = doubly_infinite_pmax(5, 5, TOL).unwrap();
        assert_eq!((v.value, v.case), (1.0, DoublyCase::Diagonal));

        let v = doubly_infinite_pmax(-4, 4, TOL).unwrap();
        assert_eq!(v.value, 1.0);
        assert!(v.mirror_pair);

        assert!(doubly_infinite_pmax(0, 0, TOL).is_err());
    }

    #[test]
    fn doubly_branches() {
        let v = doubly_infinite_pmax(3, 5, TOL).unwrap();
        assert_eq!(
            v.case,
            DoublyCase::Series(ParityClass::EqualDyadicValuation)
        );
        assert!(v.value >= 8.0 / (PI * PI));

        // (8/π²)(−π/12 + (π/6)(1+√2)) = 2(1+2√2)/(3π)
        let v = doubly_infinite_pmax(1, 2, TOL).unwrap();
        assert_eq!(
            v.case,
            DoublyCase::Series(ParityClass::UnequalDyadicValuation)
        );
        let want = 2.0 * (1.0 + 2.0 * 2f64.sqrt()) / (3.0 * PI);
        assert!((v.value - want).abs() < 1e-14);
        assert!((v.series.unwrap().value - want).abs() < 1e-10);
    }

    #[test]
    fn constants() {
        let c = diameter_constants();
        assert!((c.doubly_diameter - 0.903_165_410_578_9).abs() < 1e-12);
        assert!((c.semi_floor_pmax - 0.657_022_864_3).abs() < 1e-10);
        assert!(c.center_sqrt.powi(2) < c.doubly_floor_sqrt.powi(2));
    }

    #[test]
    fn zeta_partial_sums() {
        assert!((zeta_identity_check(2).unwrap() - 16.0 / 9.0).abs() < 1e-15);
        let big = zeta_identity_check(10_000).unwrap();
        assert!((big - (PI * PI - 8.0)).abs() < 1e-9);
        let mut prev = 0.0;
        for m in (2..200).step_by(2) {
            let s = zeta_identity_check(m).unwrap();
            assert!(s > prev);
            prev = s;
        }
        assert!(zeta_identity_check(1).is_err());
    }
}
