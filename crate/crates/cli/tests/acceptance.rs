//! Acceptance suite: one PASS/FAIL line per criterion, with its runtime
//! against the allowed budget. Runs without the libtest harness so the
//! lines always reach the test log.

use std::process::Command;
use std::time::{Duration, Instant};

use fadel_core::diag::{solve, LinearDiffSystem};
use fadel_core::finite::{check_implications, make_matrix_ring_2x2_f2, make_product, make_zmod};
use fadel_core::oracle::{standard_oracle, DEFAULT_POLY_BOUND};
use fadel_core::series::{laurent_witness, witness_descend, FieldOracle, PowerSeries, SeriesIdentity};
use fadel_core::witness::{
    build_coefficient_equations, eliminate_b, fadelian_witness, inverse_by_evaluation, weak_witness,
};
use fadel_core::{DifferentialField, Op, Poly, RatFun, Rational, Ring, Side, Theta};
use fadel_testkit::{
    dominant_system, random_const_op, random_int_poly, random_nonzero_rational, random_op, random_poly_op,
    random_ratfun, random_rational, rng,
};
use rand::Rng;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(n/d)' = (n'd − nd')/d²`, straight from the polynomials.
fn quotient_rule(f: &RatFun) -> RatFun {
    let (n, d) = (f.numer(), f.denom());
    let num = n.derivative().mul(d).sub(&n.mul(&d.derivative()));
    RatFun::new(num, d.mul(d)).expect("nonzero denominator")
}

fn commutation_law() -> Check {
    let mut r = rng(1001);
    let delta = Op::delta();
    for k in 0..500 {
        let x = random_ratfun(&mut r);
        let xt = Op::embed(x.clone());
        let lhs = delta.compose(&xt).sub_op(&xt.compose(&delta));
        ensure(lhs == Op::embed(x.derive()), || format!("instance {k}: [D, {x}] = {lhs}"))?;
        ensure(x.derive() == quotient_rule(&x), || format!("instance {k}: derivative of {x}"))?;
    }
    Ok("500 rational functions".into())
}

fn euclidean_division() -> Check {
    let mut r = rng(1002);
    for k in 0..500 {
        let (m, n) = (r.gen_range(0..=4), r.gen_range(0..=4));
        let x = random_op(&mut r, m);
        let y = random_op(&mut r, n);
        for side in [Side::Left, Side::Right] {
            let (q, rem) = Op::divide(side, &x, &y).map_err(|e| e.to_string())?;
            let back = match side {
                Side::Left => q.compose(&y).add_op(&rem),
                Side::Right => y.compose(&q).add_op(&rem),
            };
            ensure(back == x, || format!("pair {k} {side:?}: recomposition"))?;
            ensure(rem.theta() < y.theta(), || format!("pair {k} {side:?}: θ(r) = {}", rem.theta()))?;
        }
    }
    Ok("500 pairs on both sides".into())
}

fn is_weak_witness(x: &Op, b: &Op, c: &Op) -> bool {
    b.compose(x).add_op(&x.compose(c)) == Op::one()
}

fn witness_soundness() -> Check {
    let out =
        Command::new(env!("CARGO_BIN_EXE_fadel")).args(["weak-witness", "D"]).output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let field = |key: &str| text.lines().find_map(|l| l.strip_prefix(key)).map(str::to_string);
    ensure(out.status.code() == Some(0), || format!("exit {:?}", out.status.code()))?;
    ensure(field("b = ").as_deref() == Some("-t") && field("c = ").as_deref() == Some("t"), || text.to_string())?;
    let (b, c) = (Op::embed(RatFun::t().neg()), Op::embed(RatFun::t()));
    ensure(is_weak_witness(&Op::delta(), &b, &c), || "(-t)D + Dt != 1".into())?;

    let oracle = standard_oracle(DEFAULT_POLY_BOUND);
    let mut r = rng(1003);
    let (mut emitted, mut unverified, mut incomplete) = (0, 0, 0);
    for k in 0..100 {
        match k % 3 {
            0 => {
                let theta = r.gen_range(1..=3);
                let x = if k % 2 == 0 { random_const_op(&mut r, theta) } else { random_poly_op(&mut r, theta.min(2)) };
                match weak_witness(&x, &oracle) {
                    Ok(w) => {
                        emitted += 1;
                        unverified += !is_weak_witness(&x, &w.b, &w.c) as usize;
                    }
                    Err(_) => incomplete += 1,
                }
            }
            1 => {
                let (m, n) = (r.gen_range(0..=2), r.gen_range(0..=2));
                let x = random_const_op(&mut r, m);
                let a = random_const_op(&mut r, n);
                match fadelian_witness(&x, &a, &oracle) {
                    Ok(w) => {
                        emitted += 1;
                        unverified += (a.compose(&w.b).add_op(&w.c.compose(&a)) != x) as usize;
                    }
                    Err(_) => incomplete += 1,
                }
            }
            _ => {
                let p = PowerSeries::from_coeffs((0..4).map(|_| random_rational(&mut r, 5)).collect());
                let q = PowerSeries::from_coeffs(vec![random_nonzero_rational(&mut r, 5), random_rational(&mut r, 5)]);
                let w = laurent_witness(&p, &q, FieldOracle, 8).map_err(|e| e.to_string())?;
                emitted += 1;
                let lhs = q.mul(&w.b).add(&w.c.mul(&q));
                unverified += (lhs.truncate(8) != p.truncate(8)) as usize;
            }
        }
    }
    ensure(unverified == 0, || format!("{unverified} of {emitted} emitted witnesses fail"))?;
    Ok(format!("D gives b = -t, c = t; {emitted} emitted, 0 unverified, {incomplete} incomplete"))
}

fn dominance_structure() -> Check {
    let mut r = rng(1004);
    for k in 0..100 {
        let n = 1 + k % 3;
        let x = random_poly_op(&mut r, n);
        let eqs = build_coefficient_equations(&x).map_err(|e| e.to_string())?;
        let (_, sys) = eliminate_b(&eqs, &x).map_err(|e| e.to_string())?;
        for (d, row) in sys.matrix.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                let ok = if j == d { p.theta() == Theta::Finite(n) } else { p.theta() <= Theta::Finite(n - 1) };
                ensure(ok, || format!("operator {k} ({x}): θ(P[{d}][{j}]) = {}", p.theta()))?;
            }
        }
    }
    Ok("100 operators, θ in 1..=3".into())
}

fn diagonalization_equivalence() -> Check {
    let mut r = rng(1005);
    let oracle = standard_oracle(DEFAULT_POLY_BOUND);
    for k in 0..100 {
        let size = r.gen_range(1..=3);
        let degrees: Vec<usize> = (0..size).map(|_| r.gen_range(1..=3)).collect();
        let sys = dominant_system(&mut r, &degrees, random_const_op, vec![RatFun::zero(); size]);
        let known: Vec<RatFun> = (0..size).map(|_| RatFun::from_poly(random_int_poly(&mut r, 3, 4))).collect();
        let rhs: Vec<RatFun> = sys
            .matrix
            .iter()
            .map(|row| row.iter().zip(&known).fold(RatFun::zero(), |acc, (p, v)| &acc + &p.apply(v)))
            .collect();
        let sys = LinearDiffSystem::new(sys.matrix, rhs.clone()).map_err(|e| e.to_string())?;
        let sol = solve(&sys, &oracle).map_err(|e| format!("system {k}: {e}"))?;
        let back: Vec<RatFun> = sys
            .matrix
            .iter()
            .map(|row| row.iter().zip(&sol).fold(RatFun::zero(), |acc, (p, v)| &acc + &p.apply(v)))
            .collect();
        ensure(back == rhs, || format!("system {k}: substitution differs"))?;
    }
    Ok("100 forward-applied constant-coefficient systems".into())
}

fn ore_condition() -> Check {
    let mut r = rng(1006);
    for k in 0..200 {
        let (m, n) = (r.gen_range(0..=2), r.gen_range(0..=2));
        let a = random_op(&mut r, m);
        let x = random_op(&mut r, n);
        let cm = Op::common_multiple(Side::Right, &a, &x).map_err(|e| e.to_string())?;
        ensure(!cm.b.is_zero() && !cm.c.is_zero(), || format!("pair {k}: zero cofactor"))?;
        ensure(a.compose(&cm.b) == x.compose(&cm.c), || format!("pair {k}: a*b != x*c"))?;
    }
    Ok("200 pairs, θ <= 2".into())
}

/// Cauchy product on truncated coefficient vectors.
fn cauchy(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..a.len().min(b.len())).map(|n| (0..=n).fold(Rational::zero(), |acc, i| acc + &a[i] * &b[n - i])).collect()
}

fn laurent_induction() -> Check {
    const PREC: usize = 32;
    let p = PowerSeries::one();
    let q = PowerSeries::from_coeffs(vec![Rational::one(), Rational::from_int(-1)]);
    let w = laurent_witness(&p, &q, FieldOracle, PREC).map_err(|e| e.to_string())?;
    ensure(w.b.truncate(PREC).iter().all(Ring::is_one), || "B is not all ones".into())?;
    ensure(w.c.truncate(PREC).iter().all(Ring::is_zero), || "C is not zero".into())?;
    let mut r = rng(1007);
    for k in 0..50 {
        let pc: Vec<Rational> = (0..r.gen_range(1..=6)).map(|_| random_rational(&mut r, 6)).collect();
        let mut qc: Vec<Rational> = (0..r.gen_range(1..=6)).map(|_| random_rational(&mut r, 6)).collect();
        qc[0] = random_nonzero_rational(&mut r, 6);
        let (p, q) = (PowerSeries::from_coeffs(pc), PowerSeries::from_coeffs(qc));
        let w = laurent_witness(&p, &q, FieldOracle, PREC).map_err(|e| e.to_string())?;
        let (qt, bt, ct) = (q.truncate(PREC), w.b.truncate(PREC), w.c.truncate(PREC));
        let lhs: Vec<Rational> = cauchy(&qt, &bt).iter().zip(cauchy(&ct, &qt)).map(|(x, y)| x + y).collect();
        ensure(lhs == p.truncate(PREC), || format!("pair {k}: identity fails below X^{PREC}"))?;
    }
    Ok("1/(1-X) and 50 random pairs through X^31".into())
}

fn descent_round_trip() -> Check {
    let mut r = rng(1008);
    for k in 0..50 {
        let x = random_nonzero_rational(&mut r, 9);
        let a = random_nonzero_rational(&mut r, 9);
        let shift = r.gen_range(0..6usize);
        let j = r.gen_range(0..=shift) as i64;
        let kk = r.gen_range(0..=j);
        // x·X^s = X^j·P·a + a·X^k·Q with P arbitrary and Q solved for; k <= j
        // keeps Q a power series.
        let p = PowerSeries::from_coeffs((0..8).map(|_| random_rational(&mut r, 6)).collect());
        let target = PowerSeries::constant(x.clone()).shift_up(shift);
        let rest = target.sub(&p.scale_right(&a).shift_up(j as usize));
        let q = rest.shift_down(kk as usize).scale_left(&a.recip());
        let id = SeriesIdentity { j, p, k: kk, q, r: shift as i64 };
        let d = witness_descend(&x, &a, &id, 16).map_err(|e| format!("identity {k}: {e}"))?;
        ensure(&d.b * &a + &a * &d.c == x, || format!("identity {k}: x != b*a + a*c"))?;
    }
    Ok("50 shifted identities".into())
}

fn finite_ring_mirror() -> Check {
    let z = |n| make_zmod(n).map_err(|e| e.to_string());
    let mut corpus = (2..=12).map(z).collect::<Result<Vec<_>, _>>()?;
    corpus.push(make_matrix_ring_2x2_f2());
    corpus.push(make_product(&z(2)?, &z(3)?).map_err(|e| e.to_string())?);
    for ring in &corpus {
        let report = check_implications(ring);
        ensure(report.violations().is_empty(), || format!("{}: {:?}", ring.name(), report.violations()))?;
        let name = ring.name();
        if ["Z/2", "Z/3", "Z/5", "Z/7", "Z/11"].contains(&name) {
            ensure(report.weakly_fadelian && report.fadelian, || format!("{name} should be fadelian"))?;
        }
        if name == "Z/4" || ring == &make_matrix_ring_2x2_f2() {
            ensure(!report.weakly_fadelian, || format!("{name} should not be weakly fadelian"))?;
        }
    }
    Ok(format!("{} rings, 0 violations", corpus.len()))
}

fn inverse_extraction() -> Check {
    let oracle = standard_oracle(DEFAULT_POLY_BOUND);
    let t = RatFun::t();
    let samples = [
        ("t", t.clone()),
        ("t^2+1", RatFun::from_poly(Poly::from_ints(&[1, 0, 1]))),
        ("1/(t-1)", RatFun::from_ints(&[-1, 1]).inv().expect("nonzero")),
    ];
    let mut succeeded = Vec::new();
    for (name, a) in samples {
        if let Ok(w) = weak_witness(&Op::monomial(a.clone(), 1), &oracle) {
            let u = inverse_by_evaluation(&w).ok_or_else(|| format!("{name}: no inverse from a verified witness"))?;
            ensure(&a * &u == RatFun::one(), || format!("{name}: a*u = {}", &a * &u))?;
            succeeded.push(name);
        }
    }
    Ok(format!("witness found for [{}], each inverse exact", succeeded.join(", ")))
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "commutation law", budget: Duration::from_secs(5), run: commutation_law },
        Criterion { id: 2, name: "Euclidean division", budget: Duration::from_secs(10), run: euclidean_division },
        Criterion { id: 3, name: "witness soundness", budget: Duration::from_secs(60), run: witness_soundness },
        Criterion { id: 4, name: "dominance structure", budget: Duration::from_secs(30), run: dominance_structure },
        Criterion {
            id: 5,
            name: "diagonalization equivalence",
            budget: Duration::from_secs(60),
            run: diagonalization_equivalence,
        },
        Criterion { id: 6, name: "Ore condition", budget: Duration::from_secs(30), run: ore_condition },
        Criterion { id: 7, name: "Laurent induction", budget: Duration::from_secs(20), run: laurent_induction },
        Criterion { id: 8, name: "descent round trip", budget: Duration::from_secs(20), run: descent_round_trip },
        Criterion { id: 9, name: "finite-ring mirror", budget: Duration::from_secs(120), run: finite_ring_mirror },
        Criterion { id: 10, name: "inverse extraction", budget: Duration::from_secs(30), run: inverse_extraction },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (verdict, note) = match outcome {
            Ok(note) if elapsed <= c.budget => ("PASS", note),
            Ok(note) => ("FAIL", format!("{note}; over budget")),
            Err(why) => ("FAIL", why),
        };
        failures += (verdict == "FAIL") as usize;
        println!("{verdict} criterion {:>2} {:<28} {:>8.2?} / {:?}  {note}", c.id, c.name, elapsed, c.budget);
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
