use fadel_core::finite::{
    check_implications, make_matrix_ring_2x2_f2, make_product, make_zmod, FiniteRing, FiniteRingError, Status,
};
use fadel_core::Side;

/// `𝔽₄ = 𝔽₂[u]/(u² + u + 1)`, bit `i` of an index holding the coefficient of `uⁱ`.
fn f4() -> FiniteRing {
    let mul = |x: usize, y: usize| {
        // Carry-less product, then reduce u² = u + 1 and u³ = 1.
        let mut p = 0;
        for i in 0..2 {
            if y & (1 << i) != 0 {
                p ^= x << i;
            }
        }
        if p & 0b100 != 0 {
            p ^= 0b111;
        }
        p
    };
    let add = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
    let mul = (0..4).map(|x| (0..4).map(|y| mul(x, y)).collect()).collect();
    FiniteRing::new("F4", add, mul, 0, 1).unwrap()
}

/// Upper triangular 2×2 matrices over `𝔽₂`: bits are the entries `(1,1), (1,2), (2,2)`.
fn upper_triangular_f2() -> FiniteRing {
    let entries = |i: usize| (i & 1, (i >> 1) & 1, (i >> 2) & 1);
    let add = (0..8).map(|x| (0..8).map(|y| x ^ y).collect()).collect();
    let mul = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let ((a, b, d), (e, f, h)) = (entries(x), entries(y));
                    (a * e % 2) | ((a * f + b * h) % 2) << 1 | (d * h % 2) << 2
                })
                .collect()
        })
        .collect();
    FiniteRing::new("T2(F2)", add, mul, 0, 0b101).unwrap()
}

fn corpus() -> Vec<FiniteRing> {
    let z = |n| make_zmod(n).unwrap();
    let mut rings: Vec<FiniteRing> = (2..=12).map(z).collect();
    rings.push(make_matrix_ring_2x2_f2());
    rings.push(make_product(&z(2), &z(3)).unwrap());
    rings.push(make_product(&z(2), &z(2)).unwrap());
    rings.push(make_product(&z(3), &z(3)).unwrap());
    rings.push(f4());
    rings.push(upper_triangular_f2());
    rings
}

/// Direct quantifier evaluation, independent of the bitset implementation.
fn naive_fadelian(r: &FiniteRing, only_one: bool) -> bool {
    let targets: Vec<usize> = if only_one { vec![r.one()] } else { r.elements().collect() };
    targets.iter().all(|&x| {
        r.elements()
            .filter(|&a| a != r.zero())
            .all(|a| r.elements().any(|b| r.elements().any(|c| r.add(r.mul(a, b), r.mul(c, a)) == x)))
    })
}

fn naive_integral(r: &FiniteRing) -> bool {
    r.elements().all(|x| r.elements().all(|y| r.mul(x, y) != r.zero() || x == r.zero() || y == r.zero()))
}

#[test]
fn predicates_match_naive_quantifiers() {
    for r in corpus() {
        assert_eq!(r.is_weakly_fadelian(), naive_fadelian(&r, true), "{}", r.name());
        assert_eq!(r.is_fadelian(), naive_fadelian(&r, false), "{}", r.name());
        assert_eq!(r.is_integral(), naive_integral(&r), "{}", r.name());
    }
}

#[test]
fn corpus_has_no_implication_violations() {
    for r in corpus() {
        let report = check_implications(&r);
        assert!(report.violations().is_empty(), "{}: {:?}", r.name(), report.violations());
        if report.weakly_fadelian {
            assert!(report.simple && report.integral, "{}", r.name());
        }
        if report.fadelian {
            assert!(report.weakly_fadelian, "{}", r.name());
        }
        if report.weakly_fadelian && report.right_ore == Some(true) {
            assert!(report.fadelian, "{}", r.name());
        }
        if report.commutative {
            assert_eq!(report.weakly_fadelian, report.division_ring, "{}", r.name());
        }
    }
}

#[test]
fn classification_of_small_rings() {
    for p in [2, 3, 5, 7, 11] {
        let r = make_zmod(p).unwrap();
        assert!(r.is_weakly_fadelian() && r.is_fadelian(), "Z/{p}");
    }
    for n in [4, 6, 8, 9, 10, 12] {
        assert!(!make_zmod(n).unwrap().is_weakly_fadelian(), "Z/{n}");
    }
    assert!(!make_matrix_ring_2x2_f2().is_weakly_fadelian());
    assert!(f4().is_fadelian());
    assert!(!upper_triangular_f2().is_simple());
}

#[test]
fn non_weakly_fadelian_rings_are_vacuous() {
    let report = check_implications(&make_zmod(4).unwrap());
    let premised_on_wf = report.implications.iter().filter(|i| i.name.starts_with("weakly fadelian"));
    assert!(premised_on_wf.into_iter().all(|i| i.status == Status::Vacuous));
    let report = check_implications(&make_zmod(5).unwrap());
    assert!(report.implications.iter().all(|i| i.status == Status::Pass));
}

#[test]
fn ore_needs_a_domain() {
    assert_eq!(make_zmod(6).unwrap().is_ore(Side::Right), Err(FiniteRingError::NotADomain));
    assert_eq!(f4().is_ore(Side::Left), Ok(true));
}

fn tables(r: &FiniteRing) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let m = r.size();
    let add = (0..m).map(|x| (0..m).map(|y| r.add(x, y)).collect()).collect();
    let mul = (0..m).map(|x| (0..m).map(|y| r.mul(x, y)).collect()).collect();
    (add, mul)
}

#[test]
fn every_single_entry_corruption_is_caught() {
    for n in [4, 5] {
        let r = make_zmod(n).unwrap();
        let (add, mul) = tables(&r);
        for x in 0..n {
            for y in 0..n {
                for v in (0..n).filter(|&v| v != add[x][y]) {
                    let mut bad = add.clone();
                    bad[x][y] = v;
                    let res = FiniteRing::new("mutant", bad, mul.clone(), 0, 1);
                    assert!(matches!(res, Err(FiniteRingError::AxiomViolation(_))), "add[{x}][{y}] = {v} in Z/{n}");
                }
                for v in (0..n).filter(|&v| v != mul[x][y]) {
                    let mut bad = mul.clone();
                    bad[x][y] = v;
                    let res = FiniteRing::new("mutant", add.clone(), bad, 0, 1);
                    assert!(matches!(res, Err(FiniteRingError::AxiomViolation(_))), "mul[{x}][{y}] = {v} in Z/{n}");
                }
            }
        }
    }
}

#[test]
fn tables_round_trip_through_text() {
    for r in corpus() {
        let back = FiniteRing::parse_table(r.name(), &r.to_table()).unwrap();
        assert_eq!(back, r);
    }
    let too_big = FiniteRing::parse_table("x", "ring 65\n");
    assert_eq!(too_big, Err(FiniteRingError::TooLarge(65)));
    let bad_token = FiniteRing::parse_table("x", "ring 2\n0 1\n1 x\n");
    assert!(matches!(bad_token, Err(FiniteRingError::Parse { line: 3, .. })));
}
