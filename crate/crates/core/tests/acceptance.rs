//! Acceptance suite: one test per criterion, each printing a `criterion N:` line and
//! asserting the stated tolerances and runtime bounds.
//!
//! Criterion 3 is asserted exactly as stated and is expected to fail: exact
//! certification shows the bundled supplementary cover leaves a thin uncovered sliver
//! (see the fixtures module documentation and `README.md`); the repaired cover that
//! closes the sliver is verified in the companion test suites.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::Rng;

use simplex_cover::closure::{
    covered_implies_closed_check, is_integrally_closed_up_to, ClosureBudget,
};
use simplex_cover::coverage::{a_coefficients, certify, monte_carlo_uncovered, CertStatus};
use simplex_cover::dilation::{
    apex_nonmembership, explicit_nonmembership, translation_valid, Dilation,
    NonMembershipCondition, StrictInequality,
};
use simplex_cover::fixtures;
use simplex_cover::lattice::{LatticeSimplex, LatticeVector};
use simplex_cover::lp::{strict_feasibility, StrictFeasibility};
use simplex_cover::strategy::{cover_dim3, cover_dim4, CaseTag};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn br(n: i64, d: i64) -> BigRational {
    BigRational::new(bi(n), bi(d))
}

fn assert_runtime(criterion: u32, elapsed: Duration, bound: Duration) {
    assert!(
        elapsed <= bound,
        "criterion {criterion}: runtime {elapsed:?} exceeds bound {bound:?}"
    );
}

/// The five strict rows "outside every apex 3-dilation" of the bundled simplex.
fn base_rows(p: &LatticeSimplex) -> Vec<StrictInequality> {
    (0..5)
        .map(|i| apex_nonmembership(p, i, 3).unwrap())
        .collect()
}

#[test]
fn criterion_1_length5_regression() {
    let t0 = Instant::now();
    let p = fixtures::len5_simplex();

    let expected: [[i64; 5]; 5] = [
        [0, 5, 5, 3, 4],
        [5, 0, 60, 4, 3],
        [5, 60, 0, 4, 3],
        [3, 4, 4, 0, 5],
        [4, 3, 3, 5, 0],
    ];
    let lengths = p.edge_length_matrix();
    for (i, row) in expected.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if i != j {
                assert_eq!(lengths.get(i, j), &bi(*entry));
            }
        }
    }

    let a = a_coefficients(&p, 3).unwrap();
    assert_eq!(
        a.a,
        vec![br(-2, 3), br(0, 1), br(0, 1), br(-1, 3), br(0, 1)]
    );

    let rows = base_rows(&p);
    let cert = certify(&fixtures::len5_base_cover()).unwrap();
    let lambda = match &cert.status {
        CertStatus::Witness { lambda, .. } => lambda.clone(),
        CertStatus::Covered => panic!("criterion 1: base cover must not certify"),
    };
    for row in &rows {
        assert!(
            row.holds_at(lambda.as_slice()),
            "LP witness must satisfy every row strictly"
        );
    }
    let derived = [br(11, 50), br(19, 100), br(19, 100), br(1, 5), br(1, 5)];
    for row in &rows {
        assert!(
            row.holds_at(&derived),
            "derived witness must satisfy every row strictly"
        );
    }

    let elapsed = t0.elapsed();
    assert_runtime(1, elapsed, Duration::from_secs(5));
    println!("criterion 1: PASS — edge matrix, A table, and witness reproduced ({elapsed:?})");
}

#[test]
fn criterion_2_monte_carlo_rate() {
    let t0 = Instant::now();
    let est = monte_carlo_uncovered(&fixtures::len5_base_cover(), 1_000_000, 42).unwrap();
    let elapsed = t0.elapsed();
    assert!(
        (est.rate - 0.011).abs() <= 0.002,
        "criterion 2: rate {} outside 0.011 +- 0.002",
        est.rate
    );
    assert_runtime(2, elapsed, Duration::from_secs(60));
    println!(
        "criterion 2: PASS — uncovered rate {:.5} (stderr {:.5}) at 10^6 samples ({elapsed:?})",
        est.rate, est.stderr
    );
}

#[test]
fn criterion_3_supplementary_cover() {
    let t0 = Instant::now();
    let cover = fixtures::len5_full_cover();
    let cert = certify(&cover).unwrap();
    let est = monte_carlo_uncovered(&cover, 100_000, 42).unwrap();
    let elapsed = t0.elapsed();
    assert_runtime(3, elapsed, Duration::from_secs(30));
    if cert.is_covered() && est.uncovered == 0 {
        println!("criterion 3: PASS — supplementary cover certified ({elapsed:?})");
    } else {
        println!(
            "criterion 3: FAIL — certify = {:?}, {} of {} samples uncovered; the bundled \
             supplementary cover leaves a thin sliver (points escape its first explicit \
             dilation through a facet the one-row reduction dropped). The repaired \
             16-dilation cover closes it; see fixtures::len5_repaired_cover.",
            match cert.status {
                CertStatus::Covered => "Covered".to_string(),
                CertStatus::Witness { ref lambda, .. } => format!("Witness({lambda})"),
            },
            est.uncovered,
            est.samples
        );
        panic!("criterion 3 does not hold under exact certification");
    }
}

#[test]
fn criterion_4_dim3_covering_suite() {
    let t0 = Instant::now();
    let mut rng = common::rng(0x5B5E_C3A1);
    let mut tags = [0usize; 2]; // [all-nonnegative, special]
    for round in 0..100 {
        let p = common::dim3_realized_simplex(&mut rng, 4000);
        let report = cover_dim3(&p).unwrap_or_else(|e| panic!("criterion 4: round {round}: {e}"));
        assert!(
            report.is_covered(),
            "criterion 4: round {round} not covered"
        );
        assert!(report.cover.min_modulus() >= 2);
        // Relabeling must emit genuine sub-simplices of the original.
        let facets = p.facet_system().unwrap();
        for d in report.cover.dilations() {
            for v in d.vertices() {
                assert!(facets.contains_lattice(v));
            }
        }
        match report.case_tag {
            CaseTag::AllNonNegative { .. } => tags[0] += 1,
            CaseTag::Dim3Special { .. } => tags[1] += 1,
            ref other => panic!("criterion 4: unexpected tag {other:?}"),
        }
    }
    let elapsed = t0.elapsed();
    assert!(
        tags[0] > 0 && tags[1] > 0,
        "both strategies must be exercised: {tags:?}"
    );
    assert_runtime(4, elapsed, Duration::from_secs(300));
    println!(
        "criterion 4: PASS — 100 random dim-3 simplices covered ({} plain, {} special) ({elapsed:?})",
        tags[0], tags[1]
    );
}

#[test]
fn criterion_5_dim4_covering_suite() {
    let t0 = Instant::now();
    let mut rng = common::rng(0x4D1A_77E2);
    let mut nonneg = 0usize;
    let mut cases = [0usize; 3]; // A, B, C
    for round in 0..50 {
        let p = common::dim4_family_simplex(&mut rng, round);
        let report = cover_dim4(&p).unwrap_or_else(|e| panic!("criterion 5: round {round}: {e}"));
        assert!(
            report.is_covered(),
            "criterion 5: round {round} not covered"
        );
        assert!(report.cover.min_modulus() >= 3);
        match report.case_tag {
            CaseTag::AllNonNegative { .. } => nonneg += 1,
            CaseTag::CaseA => cases[0] += 1,
            CaseTag::CaseB { .. } => cases[1] += 1,
            CaseTag::CaseC { .. } => cases[2] += 1,
            ref other => panic!("criterion 5: unexpected tag {other:?}"),
        }
    }
    let elapsed = t0.elapsed();
    assert!(nonneg > 0, "the all-nonnegative path must be exercised");
    assert!(
        cases.iter().sum::<usize>() > 0,
        "at least one special case must be exercised"
    );
    assert_runtime(5, elapsed, Duration::from_secs(900));
    println!(
        "criterion 5: PASS — 50 random dim-4 simplices covered ({nonneg} plain, {:?} cases A/B/C) ({elapsed:?})",
        cases
    );
}

#[test]
fn criterion_6_membership_oracle_equivalence() {
    let t0 = Instant::now();
    let len5 = fixtures::len5_simplex();
    let case_c = LatticeSimplex::from_i64(&[
        &[0, 0, 0, 0],
        &[4, 0, 0, 0],
        &[0, 4, 0, 0],
        &[11, 11, 11, 0],
        &[7, 7, 7, 7],
    ])
    .unwrap();
    let t_last = [bi(0), bi(0), bi(0), bi(1)];
    let t_third = [bi(0), bi(0), bi(1), bi(0)];

    let apex: Vec<Dilation> = (0..5)
        .map(|i| Dilation::apex(&len5, i, 3).unwrap())
        .collect();
    let translated = vec![
        Dilation::translated(&case_c, 0, 3, &t_last).unwrap(),
        Dilation::translated(&case_c, 0, 3, &t_third).unwrap(),
    ];
    let explicit = fixtures::len5_supplementary();

    let mut rng = common::rng(0x06AC);
    for (kind, dilations) in [
        ("apex", &apex),
        ("translated", &translated),
        ("explicit", &explicit),
    ] {
        for trial in 0..1000 {
            let d = &dilations[trial % dilations.len()];
            let parent = d.parent();
            let lambda = common::random_barycentric(&mut rng, parent.dim() + 1);
            let by_condition = d.contains(&lambda).unwrap();
            let point = parent.from_barycentric(&lambda);
            let by_facets = d
                .as_simplex()
                .facet_system()
                .unwrap()
                .contains_rational(&point);
            assert_eq!(
                by_condition, by_facets,
                "{kind} oracle disagreement at trial {trial}: {lambda}"
            );
        }
    }
    let elapsed = t0.elapsed();
    assert_runtime(6, elapsed, Duration::from_secs(60));
    println!(
        "criterion 6: PASS — 3000 membership decisions agree across both oracles ({elapsed:?})"
    );
}

#[test]
fn criterion_7_translation_validity_equivalence() {
    let t0 = Instant::now();
    let mut rng = common::rng(0x7A51);
    let mut valid = 0usize;
    let mut invalid = 0usize;
    let mut done = 0usize;
    while done < 500 {
        let scale = rng.random_range(3i64..=6);
        let mut vertices = vec![LatticeVector::zero(3)];
        for _ in 0..3 {
            vertices.push(LatticeVector::from_i64(
                &(0..3)
                    .map(|_| rng.random_range(-2i64..=2))
                    .collect::<Vec<_>>(),
            ));
        }
        let Ok(p) = LatticeSimplex::new(vertices) else {
            continue;
        };
        let p = p.dilated(&bi(scale));
        let lengths = p.edge_length_matrix();
        let apex = rng.random_range(0..4);
        let k = rng.random_range(2u32..=3);
        let min_incident = lengths.incident(apex).into_iter().min().unwrap().clone();
        if BigInt::from(k) > min_incident {
            continue;
        }
        let t: Vec<BigInt> = (0..3).map(|_| bi(rng.random_range(0i64..=2))).collect();

        let by_criterion = translation_valid(&p, apex, k, &t).unwrap();

        // Independent route: shift the apex dilation's vertices and test containment.
        let base = Dilation::apex(&p, apex, k).unwrap();
        let mut shift = LatticeVector::zero(3);
        let mut tj = t.iter();
        for j in 0..4 {
            if j == apex {
                continue;
            }
            let dir = p.primitive_direction(apex, j).unwrap();
            shift = shift.add(&dir.scaled(tj.next().unwrap()));
        }
        let facets = p.facet_system().unwrap();
        let by_containment = base
            .vertices()
            .iter()
            .all(|v| facets.contains_lattice(&v.add(&shift)));

        assert_eq!(by_criterion, by_containment, "disagreement for t {t:?}");
        if by_criterion {
            valid += 1;
        } else {
            invalid += 1;
        }
        done += 1;
    }
    let elapsed = t0.elapsed();
    assert!(
        valid > 0 && invalid > 0,
        "both outcomes must occur: {valid}/{invalid}"
    );
    assert_runtime(7, elapsed, Duration::from_secs(60));
    println!(
        "criterion 7: PASS — 500 translation-validity decisions agree ({valid} valid, {invalid} invalid) ({elapsed:?})"
    );
}

#[test]
fn criterion_8_closure_cross_checks() {
    let t0 = Instant::now();
    let mut rng = common::rng(0xC105);
    let budget = ClosureBudget::default();

    // Dimension 2: every lattice triangle is integrally closed.
    let mut done = 0usize;
    while done < 50 {
        let vertices: Vec<LatticeVector> = (0..3)
            .map(|_| {
                LatticeVector::from_i64(&[rng.random_range(0i64..=12), rng.random_range(0i64..=12)])
            })
            .collect();
        let Ok(p) = LatticeSimplex::new(vertices) else {
            continue;
        };
        let report = is_integrally_closed_up_to(&p, 4, &budget).unwrap();
        assert!(report.is_closed(), "triangle {:?} not closed", p.vertices());
        done += 1;
    }

    // Dimension 3: covered simplices are integrally closed.
    for round in 0..20 {
        let p = common::dim3_realized_simplex(&mut rng, 2500);
        let report = cover_dim3(&p).unwrap();
        assert!(report.is_covered());
        let closure = covered_implies_closed_check(&report, 2, &budget)
            .unwrap_or_else(|e| panic!("criterion 8: round {round}: {e}"));
        assert!(closure.is_closed());
    }
    let elapsed = t0.elapsed();
    assert_runtime(8, elapsed, Duration::from_secs(600));
    println!("criterion 8: PASS — 50 triangles and 20 covered dim-3 simplices integrally closed ({elapsed:?})");
}

#[test]
fn criterion_9_lp_reproduction() {
    let t0 = Instant::now();
    let p = fixtures::len5_simplex();
    let rows = base_rows(&p);

    match strict_feasibility(&rows, 4) {
        StrictFeasibility::Feasible { slack, witness } => {
            assert!(slack.is_positive());
            for row in &rows {
                assert!(row.holds_at(&witness));
            }
        }
        StrictFeasibility::Infeasible { .. } => {
            panic!("criterion 9: the five-row system must be strictly feasible")
        }
    }

    // The published one-row-per-dilation reductions appear among the pruned branches;
    // appending them makes the eight-row system infeasible.
    let published = [
        vec![br(1, 1), br(1, 6), br(-2, 3), br(0, 1), br(-1, 3)],
        vec![br(1, 1), br(-2, 3), br(-2, 3), br(2, 7), br(1, 21)],
        vec![br(1, 1), br(-2, 3), br(-2, 3), br(0, 1), br(5, 6)],
    ];
    let mut eight = rows.clone();
    for (d, coeffs) in fixtures::len5_supplementary().iter().zip(published) {
        let expected = StrictInequality {
            coeffs,
            rhs: br(0, 1),
        };
        let cond = explicit_nonmembership(d).unwrap();
        let found = match &cond {
            NonMembershipCondition::AnyOf(branches) => branches
                .iter()
                .find(|b| b.normalized() == expected.normalized())
                .cloned(),
            NonMembershipCondition::Never => None,
        };
        eight.push(found.expect("published row must survive pruning"));
    }
    assert_eq!(eight.len(), 8);
    match strict_feasibility(&eight, 4) {
        StrictFeasibility::Infeasible { .. } => {}
        StrictFeasibility::Feasible { witness, .. } => {
            panic!("criterion 9: eight-row system unexpectedly feasible at {witness:?}")
        }
    }
    let elapsed = t0.elapsed();
    assert_runtime(9, elapsed, Duration::from_secs(1));
    println!(
        "criterion 9: PASS — five-row system feasible, eight-row system infeasible ({elapsed:?})"
    );
}
