//! Acceptance suite: one numbered check per criterion, each printing a
//! PASS line on success.  Run with `cargo test --test acceptance`.

use dp4::algebra::field::{FieldElement, FieldSpec};
use dp4::algebra::matrix::Mat;
use dp4::algebra::multipoly::MultiPoly;
use dp4::algebra::poly::UniPoly;
use dp4::census::{
    base_points, fiber_point_count, figure1_d1_check, section_height, section_search,
    verify_section, SearchBudget,
};
use dp4::fibration::{
    case_splitting, chi_via_koszul, closed_form_height, discriminant_profile,
    distinguished_sections, expected_dims_high_height, generate_model, height_from_splitting,
    height_two_parameter_pieces, numerology, rr_quartic_count, CaseSpec, Parity, SplittingType,
};
use dp4::lattice::{
    discriminant_group, exceptional_classes, k3_class_arith, pic_pairing, weyl_group, weyl_orbit,
    GramTable, PicClass, LAMBDA_GRAM,
};
use dp4::pencil::{
    classify_stability, line_in_surface, lines_on_surface, rho_limit, singular_points,
    Line, QuadricPencil, StabilityStatus,
};
use dp4::quintic::{invariants_quintic, xi_of_pencil};

fn pass(n: &str, what: &str) {
    println!("criterion {n}: PASS ({what})");
}

#[test]
fn criterion_01_numerology_suite() {
    for case in 1..=5u8 {
        for parity in [Parity::Even, Parity::Odd] {
            for n in -3..=4i64 {
                let c = CaseSpec { case, parity, n };
                let h = closed_form_height(&c);
                if !(0..=60).contains(&h) {
                    continue;
                }
                let row = case_splitting(&c).unwrap();
                assert_eq!(row.height, h, "closed-form height for {c:?}");
                assert_eq!(
                    height_from_splitting(&row.w).unwrap(),
                    h,
                    "splitting height for {c:?}"
                );
                let rep = numerology(h, 2).unwrap();
                assert_eq!(rep.singular_fibers, 2 * h);
                assert_eq!(rep.euler, 16 - 2 * h);
                assert_eq!(rep.chi_omega1, h - 7);
                assert_eq!(rep.parameters, 3 * h / 2 - 1);
                assert_eq!(rep.h12, h + rep.h11 - 7);
            }
        }
    }
    // the closed forms themselves, spot-pinned
    let heights: Vec<i64> = (1..=5u8)
        .flat_map(|case| {
            [Parity::Even, Parity::Odd].into_iter().map(move |parity| {
                closed_form_height(&CaseSpec {
                    case,
                    parity,
                    n: 0,
                })
            })
        })
        .collect();
    assert_eq!(heights, vec![0, 10, 8, 18, 16, 26, 24, 34, 32, 42]);
    pass("1", "case heights and the five numerical identities, heights 0..60");
}

#[test]
fn criterion_02_koszul_cross_check() {
    for n in 1..=5i64 {
        let (chi_omega1, chi_x, h2) = chi_via_koszul(n).unwrap();
        assert_eq!(chi_omega1, -7 + 20 * n, "chi(Omega^1) at n={n}");
        assert_eq!(chi_x, 16 - 40 * n, "chi at n={n}");
        assert_eq!(h2, -5 + 20 * n, "h^2(Omega^1) at n={n}");
    }
    pass("2", "four-term Koszul sums reproduce the closed forms, n = 1..5");
}

#[test]
fn criterion_03_discriminant_profile_experiment() {
    let f = FieldSpec::prime_field(101).unwrap();
    let even = CaseSpec::new(1, Parity::Even, 1).unwrap();
    for seed in 0..10u64 {
        let m = generate_model(&even, &f, seed).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 40, "seed {seed}");
        assert!(prof.squarefree, "seed {seed}");
    }
    let odd = CaseSpec::new(1, Parity::Odd, 0).unwrap();
    for seed in 0..10u64 {
        let m = generate_model(&odd, &f, seed).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 20, "seed {seed}");
        assert!(prof.squarefree, "seed {seed}");
    }
    pass("3", "ten seeded models each: degree 40 (height 20) and 20 (height 10), squarefree");
}

#[test]
fn criterion_04_lattice_suite() {
    assert_eq!(weyl_group().len(), 1920);
    let e1 = PicClass::new(0, [1, 0, 0, 0, 0]);
    let orbit = weyl_orbit(&e1);
    assert_eq!(orbit.len(), 16);
    assert_eq!(orbit, exceptional_classes());
    let gram: Vec<Vec<i64>> = LAMBDA_GRAM.iter().map(|r| r.to_vec()).collect();
    assert_eq!(discriminant_group(&gram).unwrap(), vec![4]);
    let k = PicClass::canonical();
    assert_eq!(pic_pairing(&k, &k), 4);
    pass("4", "Weyl order 1920, orbit of E1 = 16 lines, cyclic order-4 discriminant, K.K = 4");
}

#[test]
fn criterion_05_k3_lattice_arithmetic() {
    let cubic = GramTable::from_strs(
        &["h", "C", "E", "R'"],
        &[
            &[4, 8, 1, 3],
            &[8, 12, 4, 4],
            &[1, 4, -2, 2],
            &[3, 4, 2, -2],
        ],
    )
    .unwrap();
    let r = k3_class_arith(&cubic, "2h - C + R'").unwrap();
    assert_eq!(r.self_intersection, -2);
    assert_eq!(r.pairings[1], 8);

    let quartic =
        GramTable::from_strs(&["h", "C", "R"], &[&[4, 8, 4], &[8, 12, 11], &[4, 11, -2]]).unwrap();
    let r2 = k3_class_arith(&quartic, "2h - R").unwrap();
    assert_eq!(r2.pairings[0], 4);
    assert_eq!(r2.self_intersection, -2);
    assert_eq!(r2.pairings[1], 5);

    let sextic =
        GramTable::from_strs(&["h", "C", "R"], &[&[4, 8, 6], &[8, 12, 17], &[6, 17, -2]]).unwrap();
    let r3 = k3_class_arith(&sextic, "3h - R").unwrap();
    assert_eq!(r3.pairings[1] - r3.pairings[0], 1);
    assert_eq!(r3.pairings[1], 7);
    pass("5", "residuation pairings in the three Gram tables, exactly");
}

#[test]
fn criterion_06_riemann_roch_counts() {
    assert_eq!(rr_quartic_count(12, 15, 4), 1);
    assert_eq!(rr_quartic_count(13, 20, 4), 2);
    assert_eq!(rr_quartic_count(12, 17, 4), 3);
    assert_eq!(rr_quartic_count(14, 23, 4), 35 - 34);
    assert_eq!(rr_quartic_count(6, 0, 3), 1);
    pass("6", "expected dimensions 1, 2, 3, 35-34, and the cubic-surface count");
}

#[test]
fn criterion_07_invariant_theory() {
    use rand_core::{RngCore, SeedableRng};
    let f = FieldSpec::prime_field(101).unwrap();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7001);
    let mut random_quintic = |rng: &mut rand_chacha::ChaCha20Rng| loop {
        let coeffs: Vec<FieldElement> = (0..6)
            .map(|_| f.element_from_index(rng.next_u64() as u128 % 101).unwrap())
            .collect();
        if !coeffs[5].is_zero() {
            return dp4::algebra::poly::BinaryForm::from_coeffs(&f, coeffs);
        }
    };
    // 100 unimodular substitutions leave the invariants fixed
    for _ in 0..100 {
        let quintic = random_quintic(&mut rng);
        let base = invariants_quintic(&quintic).unwrap();
        let (a, b, c) = loop {
            let a = f.element_from_index(rng.next_u64() as u128 % 101).unwrap();
            let b = f.element_from_index(rng.next_u64() as u128 % 101).unwrap();
            let c = f.element_from_index(rng.next_u64() as u128 % 101).unwrap();
            if !a.is_zero() {
                break (a, b, c);
            }
        };
        let d = &(&f.one() + &(&b * &c)) * &a.inv().unwrap();
        let g = Mat::from_rows(&f, &[vec![a, b], vec![c, d]]);
        assert!(g.det().is_one());
        let moved = invariants_quintic(&quintic.substitute(&g)).unwrap();
        assert_eq!(base, moved);
    }
    // 100 general substitutions scale by det^10, det^20, det^30
    for _ in 0..100 {
        let quintic = random_quintic(&mut rng);
        let base = invariants_quintic(&quintic).unwrap();
        let g = loop {
            let g = Mat::from_fn(&f, 2, 2, |_, _| {
                f.element_from_index(rng.next_u64() as u128 % 101).unwrap()
            });
            if !g.det().is_zero() {
                break g;
            }
        };
        let det = g.det();
        let moved = invariants_quintic(&quintic.substitute(&g)).unwrap();
        assert_eq!(moved.i4, &base.i4 * &det.pow(10).unwrap());
        assert_eq!(moved.i8, &base.i8 * &det.pow(20).unwrap());
        assert_eq!(moved.i12, &base.i12 * &det.pow(30).unwrap());
    }
    // the moduli point is constant on 20 random congruence moves of a
    // diagonal pencil
    let c: [FieldElement; 5] = core::array::from_fn(|i| f.from_int(i as i64));
    let pencil = QuadricPencil::diagonal(&f, &c);
    let base = xi_of_pencil(&pencil).unwrap();
    for _ in 0..20 {
        let m = loop {
            let m = Mat::from_fn(&f, 5, 5, |_, _| {
                f.element_from_index(rng.next_u64() as u128 % 101).unwrap()
            });
            if !m.det().is_zero() {
                break m;
            }
        };
        assert_eq!(xi_of_pencil(&pencil.congruate(&m)).unwrap(), base);
    }
    pass("7", "100 unimodular fixes, 100 weighted scalings, 20 congruence moves of the moduli point");
}

#[test]
fn criterion_08_sixteen_lines() {
    // all five ruling discriminants are squares mod 11 for this tuple, so
    // every line of the diagonal surface is rational
    let f = FieldSpec::prime_field(11).unwrap();
    let c: [FieldElement; 5] = [
        f.from_int(0),
        f.from_int(1),
        f.from_int(2),
        f.from_int(4),
        f.from_int(7),
    ];
    let pencil = QuadricPencil::diagonal(&f, &c);
    let lines = lines_on_surface(&pencil, 1).unwrap();
    assert_eq!(lines.len(), 16);
    // the diagonal sign flips act transitively
    let mut orbit = std::collections::BTreeSet::new();
    let mut frontier = vec![lines[0].clone()];
    orbit.insert(lines[0].clone());
    while let Some(line) = frontier.pop() {
        for mask in 1u32..32 {
            let flip = |v: &[FieldElement]| -> Vec<FieldElement> {
                v.iter()
                    .enumerate()
                    .map(|(i, x)| if mask & (1 << i) != 0 { -x } else { x.clone() })
                    .collect()
            };
            let u = flip(&line.points[0]);
            let v = flip(&line.points[1]);
            assert!(line_in_surface(&pencil, &u, &v));
            let m = Mat::from_rows(&f, &[u, v]);
            let (rref, _) = m.rref();
            let moved = Line {
                points: [rref.row(0).to_vec(), rref.row(1).to_vec()],
            };
            if orbit.insert(moved.clone()) {
                frontier.push(moved);
            }
        }
    }
    assert_eq!(orbit.len(), 16);
    pass("8", "sixteen rational lines over F_11 with a transitive sign-flip action");
}

#[test]
fn criterion_09_git_degeneration() {
    // nodal normal form Q0 = x0 x4 + R2(x1..x3), Q1 = x0 l1 + R1(x1..x3)
    let f = FieldSpec::prime_field(101).unwrap();
    let half = f.from_ratio(1, 2).unwrap();
    let mut a = Mat::zeros(&f, 5, 5);
    a.set(0, 4, half.clone());
    a.set(4, 0, half.clone());
    a.set(1, 1, f.from_int(1));
    a.set(2, 2, f.from_int(2));
    a.set(3, 3, f.from_int(3));
    a.set(1, 2, half.clone());
    a.set(2, 1, half.clone());
    let mut b = Mat::zeros(&f, 5, 5);
    b.set(1, 1, f.from_int(1));
    b.set(2, 2, f.from_int(-1));
    b.set(3, 3, f.from_int(1));
    b.set(2, 3, half.clone());
    b.set(3, 2, half.clone());
    // l1 = x1 + 2 x2 enters Q1 through x0
    b.set(0, 1, half.clone());
    b.set(1, 0, half.clone());
    b.set(0, 2, f.one());
    b.set(2, 0, f.one());
    let pencil = QuadricPencil::new(a, b).unwrap();
    let limit = rho_limit(&pencil, &[1, 0, 0, 0, -1]).unwrap();
    let pts = singular_points(&limit, 3).unwrap();
    assert_eq!(pts.len(), 2);
    let e0: Vec<FieldElement> = (0..5)
        .map(|i| if i == 0 { f.one() } else { f.zero() })
        .collect();
    let e4: Vec<FieldElement> = (0..5)
        .map(|i| if i == 4 { f.one() } else { f.zero() })
        .collect();
    assert!(pts.iter().any(|s| s.point == e0 && s.ordinary));
    assert!(pts.iter().any(|s| s.point == e4 && s.ordinary));
    let verdict = classify_stability(&limit).unwrap();
    assert_eq!(verdict.status, StabilityStatus::StrictlySemistable);
    pass("9", "one-parameter limit has exactly the two coordinate nodes, both ordinary");
}

#[test]
fn criterion_10_section_existence_desk_scale() {
    let f3 = FieldSpec::prime_field(3).unwrap();
    let budget = SearchBudget {
        max_candidates: 1_000_000_000,
        force: true,
    };

    // (a) constant family: the constant sections are the rational points
    let c1 = CaseSpec::new(1, Parity::Even, 0).unwrap();
    let m1 = generate_model(&c1, &f3, 1).unwrap();
    let found = section_search(&m1, 0, &budget).unwrap();
    let points = fiber_point_count(&m1, &f3.zero(), &f3.one(), 1).unwrap();
    assert_eq!(found.sections.len() as u64, points);
    for s in &found.sections {
        assert!(verify_section(&m1, s), "constant section re-verifies");
    }
    // and a degree-one sweep still finds them all (plus any moving ones)
    let found_d1 = section_search(&m1, 1, &budget).unwrap();
    assert!(found_d1.sections.len() >= found.sections.len());
    for s in &found_d1.sections {
        assert!(verify_section(&m1, s));
    }

    // (b) height-twelve special model: the canonical section appears
    let c5 = CaseSpec::new(5, Parity::Even, -1).unwrap();
    let m5 = generate_model(&c5, &f3, 1).unwrap();
    let found5 = section_search(&m5, 1, &budget).unwrap();
    let canonical = found5
        .sections
        .iter()
        .find(|s| s.polys[..8].iter().all(UniPoly::is_zero))
        .expect("canonical section found");
    assert!(verify_section(&m5, canonical));
    assert_eq!(section_height(&m5, canonical).unwrap(), -2);

    // (c) height-six special model: the constant conic sections appear
    let c3 = CaseSpec::new(3, Parity::Odd, -1).unwrap();
    let m3 = generate_model(&c3, &f3, 1).unwrap();
    let distinguished = distinguished_sections(&m3).unwrap();
    assert!(!distinguished.sections.is_empty());
    let found3 = section_search(&m3, 0, &budget).unwrap();
    for s in &distinguished.sections {
        let constant: Vec<UniPoly> = s
            .point
            .iter()
            .map(|v| UniPoly::constant(&f3, "t", v.clone()))
            .collect();
        let hit = found3.sections.iter().any(|cand| {
            // compare projectively: the canonical representative of the
            // constant tuple
            let lead = constant
                .iter()
                .find(|p| !p.is_zero())
                .and_then(|p| p.leading().cloned())
                .unwrap();
            let inv = lead.inv().unwrap();
            let scaled: Vec<UniPoly> = constant.iter().map(|p| p.scale(&inv)).collect();
            cand.polys == scaled
        });
        assert!(hit, "conic point missing from the search output");
    }
    for s in &found3.sections {
        assert!(verify_section(&m3, s));
    }
    pass("10", "constant, canonical, and conic sections over F_3, all re-verified exactly");
}

#[test]
fn criterion_11_height_twenty_nodes_and_expected_dims() {
    // split example: sixteen rational base points with vanishing gradient
    let f = FieldSpec::prime_field(101).unwrap();
    let vars = ["x0", "x1", "x2", "x3", "x4"];
    let sq = |i: usize| {
        let mut e = vec![0u32; 5];
        e[i] = 2;
        e
    };
    let quad =
        |i: usize| MultiPoly::from_terms(&f, &vars, [(sq(i), f.one()), (sq(0), -&f.one())]);
    let quads = [quad(1), quad(2), quad(3), quad(4)];
    let pts = base_points(&quads, 1, &SearchBudget::default()).unwrap();
    assert_eq!(pts.len(), 16);
    let y = &(&quads[0] * &quads[3]) - &(&quads[1] * &quads[2]);
    for p in &pts {
        for var in 0..5 {
            assert!(
                y.derivative(var).eval(&p.point).is_zero(),
                "gradient vanishes at each node"
            );
        }
    }
    // expected dimensions and contracted-section counts
    let rows = expected_dims_high_height();
    let by_height = |h: i64| rows.iter().find(|r| r.height == h).unwrap();
    assert_eq!(by_height(16).variety_dim, Some(23));
    assert_eq!(by_height(18).variety_dim, Some(26));
    assert_eq!(by_height(20).variety_dim, Some(30));
    assert_eq!(by_height(20).fibration_dim, 29);
    assert_eq!(
        rows.iter().map(|r| r.contracted_sections).collect::<Vec<_>>(),
        vec![2, 4, 8, 16]
    );
    pass("11", "sixteen nodes with vanishing gradient; dimensions (23, 26, 30 vs 29); counts 2, 4, 8, 16");
}

#[test]
fn criterion_12_section_space_dimension_formulas() {
    let v3 = SplittingType::new(vec![1, 1, 0, 0, 0]);
    assert_eq!(v3.sym2().twist(-1).h0(), 12);
    let v4 = SplittingType::new(vec![1, 1, 1, 0, 0]);
    assert_eq!(v4.sym2().twist(-1).h0(), 18);
    let v5 = SplittingType::new(vec![1, 1, 1, 1, 0]);
    assert_eq!(v5.sym2().twist(-1).h0(), 24);
    assert_eq!(height_two_parameter_pieces(), (9, 21));
    pass("12", "section-space dimensions 12, 18, 24 and parameter pieces 9 and 21");
}

#[test]
fn supplementary_degree_one_line_incidence() {
    // computable shadow of the height-ten analysis: lines on the ambient
    // quadric meeting the base curve once, certified fiberwise, with the
    // count frozen at first computation
    let f7 = FieldSpec::prime_field(7).unwrap();
    let c = CaseSpec::new(1, Parity::Odd, 0).unwrap();
    let m = generate_model(&c, &f7, 1).unwrap();
    let report = figure1_d1_check(&m, &SearchBudget::default()).unwrap();
    for s in &report.verified_sections {
        assert_eq!(s.secancy, 1, "secancy 2d - 1 at d = 1");
    }
    assert!(report.rejected_disjoint > 0, "disjoint lines are rejected");
    assert_eq!(
        (
            report.lines_on_quadric,
            report.lines_meeting_curve_once,
            report.verified_sections.len()
        ),
        FROZEN_FIGURE1,
        "frozen regression for the seed-1 model over F_7"
    );
    // the fibration really has height 10
    assert_eq!(m.height(), 10);
    let prof = discriminant_profile(&m).unwrap();
    assert_eq!(prof.projective_degree, 20);
    // spot check: a verified line really is a section: it meets three
    // sample fibers in exactly one point away from the curve
    if let Some(line) = report.verified_sections.first() {
        let [u, v] = &line.points;
        for tau in 0..3i64 {
            let fiber = dp4::fibration::fiber_at(&m, &f7.from_int(tau), &f7.one()).unwrap();
            let mut on_fiber = 0;
            let mut on_curve = 0;
            for idx in 0..=7u128 {
                let (s, t) = if idx == 7 {
                    (f7.one(), f7.zero())
                } else {
                    (f7.element_from_index(idx).unwrap(), f7.one())
                };
                let pt: Vec<FieldElement> = u
                    .iter()
                    .zip(v.iter())
                    .map(|(a, b)| &(a * &s) + &(b * &t))
                    .collect();
                if fiber.is_point_on_surface(&pt) {
                    on_fiber += 1;
                    let (qa, qb) = (
                        roots_marker(&m, &pt, 0),
                        roots_marker(&m, &pt, 1),
                    );
                    if qa && qb {
                        on_curve += 1;
                    }
                }
            }
            // one residual point per fiber except at the single crossing
            // parameter, where it returns to the curve
            assert!(on_fiber >= 1 && on_fiber - on_curve <= 1);
        }
    }
    pass("10+", "degree-one line sections certified with secancy one; count frozen");
}

// whether the point lies on the two base-curve quadrics of the pencil form
fn roots_marker(m: &dp4::fibration::FibrationModel, pt: &[FieldElement], which: usize) -> bool {
    let spec = m.spec().clone();
    for form in m.forms() {
        if form.bidegree == (1, 2) {
            let member = if which == 0 {
                form.poly.substitute(0, &spec.one()).substitute(1, &spec.zero())
            } else {
                form.poly.substitute(0, &spec.zero()).substitute(1, &spec.one())
            };
            let mut val = member;
            for (i, x) in pt.iter().enumerate() {
                val = val.substitute(2 + i, x);
            }
            return val.is_zero();
        }
    }
    false
}

// frozen at first computation: (lines on the quadric over F_5, lines
// meeting the curve once, certified sections)
const FROZEN_FIGURE1: (usize, usize, usize) = (400, 92, 92);
