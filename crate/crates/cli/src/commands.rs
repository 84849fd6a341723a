use itc_core::asymptotics::{DoublyCase, DUAL_SLACK};
use itc_core::biassweep::monotonicity_violations;
use itc_core::geometry::{diameter, triangle_violations};
use itc_core::{
    diameter_constants, doubly_infinite_pmax, find_anticore, four_point_delta, inertia_profile,
    itc_matrix, p_max, p_max_explicit, p_t, reduce_pair, scaling_constant_estimate,
    semi_infinite_pmax_closed, semi_infinite_pmax_series, spectrum, sweep, ChainSpec, Distance,
    Frame, ParityClass,
};

use crate::output::{Cell, Table};
use crate::{
    AnticoreArgs, AsymptoticArgs, ChainArgs, Command, EvolveArgs, Failure, FrameArg,
    HyperbolicityArgs, SelectArgs, SweepArgs,
};

/// Agreement demanded between the spectral-sum and sine-formula `p_max`.
const EXPLICIT_CHECK_TOL: f64 = 1e-10;

/// Allowance in `p_t ≤ p_max`.
const BOUND_CHECK_TOL: f64 = 1e-10;

pub fn run(command: &Command) -> Result<Table, Failure> {
    match command {
        Command::Pmax(a) => select(a, Quantity::SqrtPmax),
        Command::Distance(a) => select(a, Quantity::Distance),
        Command::Anticore(a) => anticore(a),
        Command::Asymptotic(a) => asymptotic(a),
        Command::Sweep(a) => bias_sweep(a),
        Command::Hyperbolicity(a) => hyperbolicity(a),
        Command::Evolve(a) => evolve(a),
        Command::Constants(_) => Ok(constants()),
    }
}

fn chain(a: &ChainArgs) -> Result<ChainSpec, Failure> {
    Ok(ChainSpec::new(a.n, a.bias)?)
}

#[derive(Clone, Copy, PartialEq)]
enum Quantity {
    SqrtPmax,
    Distance,
}

impl Quantity {
    fn name(self) -> &'static str {
        match self {
            Quantity::SqrtPmax => "sqrt_pmax",
            Quantity::Distance => "distance",
        }
    }

    fn cell(self, p: f64) -> Cell {
        match self {
            Quantity::SqrtPmax => p.sqrt().into(),
            Quantity::Distance => Distance::from_probability(p).into(),
        }
    }
}

fn select(a: &SelectArgs, q: Quantity) -> Result<Table, Failure> {
    let spec = chain(&a.chain)?;
    let n = spec.n_spins();
    let dec = spectrum(&spec)?;

    // every emitted value of a homogeneous chain is re-derived from the
    // sine formula; disagreement means an indexing or convention bug
    let mut mismatch: Option<(usize, usize, f64, f64)> = None;
    let mut value = |i: usize, j: usize| -> Result<f64, Failure> {
        let p = p_max(&dec, i, j)?;
        if spec.is_homogeneous() && mismatch.is_none() {
            let e = p_max_explicit(n, i, j)?;
            if (p - e).abs() > EXPLICIT_CHECK_TOL {
                mismatch = Some((i, j, p, e));
            }
        }
        Ok(p)
    };

    let table = if let Some(pair) = &a.pair {
        let (i, j) = (pair[0], pair[1]);
        let p = value(i, j)?;
        let mut t = Table::new(["i", "j", "pmax", q.name()]);
        t.push(vec![i.into(), j.into(), p.into(), q.cell(p)]);
        t
    } else if !a.row.is_empty() {
        let columns = std::iter::once("j".to_string())
            .chain(a.row.iter().map(|r| format!("{}_from_{r}", q.name())));
        let mut t = Table::new(columns);
        for r in &a.row {
            spec_check(*r, n)?;
        }
        for j in 1..=n {
            let mut row = vec![Cell::from(j)];
            for &r in &a.row {
                row.push(q.cell(value(r, j)?));
            }
            t.push(row);
        }
        t
    } else {
        let m = itc_matrix(&spec)?;
        let mut t = Table::new(["i", "j", "pmax", q.name()]);
        for i in 1..=n {
            for j in 1..=n {
                let p = m.pmax(i, j);
                if spec.is_homogeneous() && i <= j && mismatch.is_none() {
                    let e = p_max_explicit(n, i, j)?;
                    if (p - e).abs() > EXPLICIT_CHECK_TOL {
                        mismatch = Some((i, j, p, e));
                    }
                }
                t.push(vec![i.into(), j.into(), p.into(), q.cell(p)]);
            }
        }
        t
    };

    match mismatch {
        None => Ok(table),
        Some((i, j, p, e)) => Err(Failure::cross_check(
            format!("p_max({i},{j}): spectral sum {p} vs sine formula {e}"),
            table,
        )),
    }
}

fn spec_check(index: usize, n: usize) -> Result<(), Failure> {
    if index == 0 || index > n {
        Err(Failure::usage(format!(
            "spin index {index} out of range 1..={n}"
        )))
    } else {
        Ok(())
    }
}

fn anticore(a: &AnticoreArgs) -> Result<Table, Failure> {
    let spec = chain(&a.chain)?;
    let m = itc_matrix(&spec)?;
    let ac = find_anticore(&m)?;
    let profile = inertia_profile(&m, a.alpha);
    let inertia_argmax = (1..=m.n())
        .max_by(|&x, &y| profile[x - 1].total_cmp(&profile[y - 1]).then(y.cmp(&x)))
        .unwrap_or(1);
    let diam = diameter(m.premetric());
    let violations = ac
        .violations
        .iter()
        .map(|(i, j)| format!("{i}:{j}"))
        .collect::<Vec<_>>()
        .join(";");

    eprintln!("omega={} flag={}", ac.omega, ac.holds);
    let mut t = Table::new([
        "n",
        "omega",
        "flag",
        "majority_argmax",
        "inertia_argmax",
        "inertia_omega",
        "diameter",
        "diameter_i",
        "diameter_j",
        "violations",
        "ties",
    ]);
    t.push(vec![
        m.n().into(),
        ac.omega.into(),
        ac.holds.into(),
        ac.majority.into(),
        inertia_argmax.into(),
        profile[ac.omega - 1].into(),
        diam.value.into(),
        diam.pair.0.into(),
        diam.pair.1.into(),
        violations.into(),
        ac.ties.len().into(),
    ]);
    Ok(t)
}

fn parity_name(c: ParityClass) -> &'static str {
    match c {
        ParityClass::EqualDyadicValuation => "equal_dyadic_valuation",
        ParityClass::UnequalDyadicValuation => "unequal_dyadic_valuation",
    }
}

const ASYMPTOTIC_COLUMNS: [&str; 14] = [
    "frame",
    "i",
    "j",
    "g",
    "i_red",
    "j_red",
    "parity_class",
    "case",
    "series",
    "closed_form",
    "truncation_bound",
    "sqrt_pmax",
    "pmax",
    "mirror_pair",
];

fn asymptotic(a: &AsymptoticArgs) -> Result<Table, Failure> {
    let mut t = Table::new(ASYMPTOTIC_COLUMNS);
    let mut disagreement = None;
    match a.frame {
        FrameArg::Semi => {
            let p = reduce_pair(a.i, a.j, Frame::SemiInfinite)?;
            let s = semi_infinite_pmax_series(&p, a.tol)?;
            let (case, closed, value) = if p.is_diagonal() {
                ("special_diagonal", None, 1.0)
            } else {
                let c = semi_infinite_pmax_closed(&p)?;
                ("series", Some(c), c)
            };
            if (s.value - value).abs() > a.tol + DUAL_SLACK {
                disagreement = Some((s.value, value));
            }
            t.push(vec![
                "semi".into(),
                a.i.into(),
                a.j.into(),
                p.g.into(),
                p.i_red.into(),
                p.j_red.into(),
                parity_name(p.parity_class).into(),
                case.into(),
                s.value.into(),
                closed.into(),
                s.tail_bound.into(),
                value.into(),
                (value * value).into(),
                false.into(),
            ]);
        }
        FrameArg::Doubly => {
            let v = doubly_infinite_pmax(a.i, a.j, a.tol)?;
            let case = match v.case {
                DoublyCase::Center => "special_center",
                DoublyCase::Diagonal => "special_diagonal",
                DoublyCase::Series(_) => "series",
            };
            let parity = v.pair.map(|p| parity_name(p.parity_class));
            t.push(vec![
                "doubly".into(),
                a.i.into(),
                a.j.into(),
                v.pair.map(|p| p.g).into(),
                v.pair.map(|p| p.i_red).into(),
                v.pair.map(|p| p.j_red).into(),
                parity.into(),
                case.into(),
                v.series.map(|s| s.value).into(),
                v.closed_form.into(),
                v.series.map(|s| s.tail_bound).into(),
                v.value.into(),
                (v.value * v.value).into(),
                v.mirror_pair.into(),
            ]);
        }
    }
    match disagreement {
        None => Ok(t),
        Some((s, c)) => Err(Failure::cross_check(
            format!("series {s} and closed form {c} disagree beyond tolerance"),
            t,
        )),
    }
}

fn bias_sweep(a: &SweepArgs) -> Result<Table, Failure> {
    let points = sweep(a.n, &a.zeta)?;
    let flagged = monotonicity_violations(&points);
    let mut t = Table::new([
        "zeta",
        "lambda_max_over_zeta",
        "pmax_1_omega",
        "pmax_1_n",
        "d_1_omega",
        "d_1_n",
        "d_1_omega_over_log_zeta",
        "monotone",
    ]);
    for (k, p) in points.iter().enumerate() {
        let rises = k > 0 && flagged.iter().any(|&(_, z2)| z2 == p.zeta);
        t.push(vec![
            p.zeta.into(),
            p.lambda_max_over_zeta.into(),
            p.pmax_1_omega.into(),
            p.pmax_1_n.into(),
            p.d_1_omega.into(),
            p.d_1_n.into(),
            p.d_1_omega_over_log_zeta.into(),
            (!rises).into(),
        ]);
    }
    if let Ok(fit) = scaling_constant_estimate(&points) {
        eprintln!(
            "fit pmax_1_omega ~ {:.6} * zeta^{:.6} over {} points",
            fit.prefactor, fit.slope, fit.points_used
        );
    }
    Ok(t)
}

fn hyperbolicity(a: &HyperbolicityArgs) -> Result<Table, Failure> {
    let spec = chain(&a.chain)?;
    let m = itc_matrix(&spec)?;
    let fp = four_point_delta(m.premetric(), a.budget, a.seed);
    let tri = triangle_violations(m.premetric());
    let diam = diameter(m.premetric());
    let q = fp.quadruple;
    let corner = |k: usize| q.map(|q| q[k]);
    let mut t = Table::new([
        "n",
        "four_point_delta_diagnostic",
        "x",
        "y",
        "z",
        "w",
        "evaluated",
        "skipped",
        "exhaustive",
        "seed",
        "triangle_violations",
        "triangle_max_excess",
        "diameter",
        "diameter_i",
        "diameter_j",
    ]);
    t.push(vec![
        m.n().into(),
        fp.delta.into(),
        corner(0).into(),
        corner(1).into(),
        corner(2).into(),
        corner(3).into(),
        fp.evaluated.into(),
        fp.skipped.into(),
        fp.exhaustive.into(),
        fp.seed.into(),
        tri.count.into(),
        tri.max_excess.into(),
        diam.value.into(),
        diam.pair.0.into(),
        diam.pair.1.into(),
    ]);
    Ok(t)
}

fn evolve(a: &EvolveArgs) -> Result<Table, Failure> {
    let spec = chain(&a.chain)?;
    if !(a.dt > 0.0 && a.dt.is_finite() && a.t_max >= 0.0 && a.t_max.is_finite()) {
        return Err(Failure::usage("need dt > 0 and a finite t_max ≥ 0"));
    }
    let dec = spectrum(&spec)?;
    let cap = p_max(&dec, a.i, a.j)?;
    // integer steps keep the grid identical across runs
    let steps = (a.t_max / a.dt + 1e-9).floor() as u64;
    let mut t = Table::new(["t", "p_t", "p_max"]);
    let mut breach = None;
    for k in 0..=steps {
        let time = k as f64 * a.dt;
        let p = p_t(&dec, a.i, a.j, time)?;
        if p > cap + BOUND_CHECK_TOL && breach.is_none() {
            breach = Some((time, p));
        }
        t.push(vec![time.into(), p.into(), cap.into()]);
    }
    match breach {
        None => Ok(t),
        Some((time, p)) => Err(Failure::cross_check(
            format!("p_t = {p} exceeds p_max = {cap} at t = {time}"),
            t,
        )),
    }
}

fn constants() -> Table {
    let c = diameter_constants();
    let mut t = Table::new(["name", "value"]);
    for (name, value) in [
        ("2/pi", c.center_sqrt),
        ("8/pi^2", c.doubly_floor_sqrt),
        ("64/pi^4", c.semi_floor_pmax),
        ("pi^2-8", c.even_zeta_sum),
        ("-2log(2/pi)", c.doubly_diameter),
    ] {
        t.push(vec![name.into(), value.into()]);
    }
    t
}
