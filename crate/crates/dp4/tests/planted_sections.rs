//! Build a height-twenty model around a planted degree-three section and
//! check its anticanonical height two ways: the `alpha + d` formula and an
//! explicit pullback-degree computation.

use dp4::algebra::field::{FieldElement, FieldSpec};
use dp4::algebra::matrix::Mat;
use dp4::algebra::multipoly::MultiPoly;
use dp4::algebra::poly::UniPoly;
use dp4::census::{section_height, verify_section, SectionCandidate};
use dp4::fibration::{
    case_splitting, fiber_at, model_vars, CaseSpec, FibrationModel, FormRole, FormTag, ModelForm,
    Parity,
};
use rand_core::{RngCore, SeedableRng};

/// Monomial exponent vectors of a bihomogeneous (a, 2) form on the product.
fn bidegree_monomials(n_x: usize, a: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a0 in 0..=a {
        for i in 0..n_x {
            for j in i..n_x {
                let mut e = vec![a0, a - a0];
                let mut xs = vec![0u32; n_x];
                xs[i] += 1;
                xs[j] += 1;
                e.extend(xs);
                out.push(e);
            }
        }
    }
    out
}

#[test]
fn planted_degree_three_section_has_height_one() {
    let f = FieldSpec::prime_field(101).unwrap();
    let case = CaseSpec::new(1, Parity::Even, 1).unwrap();
    let vars_owned = model_vars(case.ambient_dim());
    let vars: Vec<&str> = vars_owned.iter().map(String::as_str).collect();
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(33);

    // the section: five degree-three polynomials, content-free
    let sigma: Vec<UniPoly> = (0..5)
        .map(|i| {
            let coeffs: Vec<FieldElement> = (0..4)
                .map(|j| f.from_int((rng.next_u64() % 101) as i64 + i64::from(i == 0 && j == 3)))
                .collect();
            UniPoly::from_coeffs(&f, "t", coeffs)
        })
        .collect();
    let mut content = sigma[0].clone();
    for p in &sigma[1..] {
        content = content.gcd(p);
    }
    assert_eq!(content.degree(), Some(0), "planted tuple is content-free");

    // forms of bidegree (1, 2) vanishing on the section: linear conditions
    // on the monomial coefficients, one per t-power of the composition
    let monomials = bidegree_monomials(5, 1);
    let images: Vec<UniPoly> = {
        let mut v = vec![UniPoly::x(&f, "t"), UniPoly::from_ints(&f, "t", &[1])];
        v.extend(sigma.iter().cloned());
        v
    };
    let max_deg = 1 + 2 * 3; // bidegree (1,2) composed with degree-3 tuple
    let rows: Vec<Vec<FieldElement>> = (0..=max_deg)
        .map(|m| {
            monomials
                .iter()
                .map(|exp| {
                    let mono = MultiPoly::from_terms(&f, &vars, [(exp.clone(), f.one())]);
                    mono.compose_unipolys(&images, "t").coeff(m)
                })
                .collect()
        })
        .collect();
    let conditions = Mat::from_rows(&f, &rows);
    let kernel = conditions.nullspace();
    assert!(kernel.len() >= 2, "room for two independent forms");

    // two random kernel combinations as the defining quadratic forms
    let mut draw_form = |rng: &mut rand_chacha::ChaCha20Rng| -> MultiPoly {
        loop {
            let mut coeffs = vec![f.zero(); monomials.len()];
            for basis_vec in &kernel {
                let c = f.from_int((rng.next_u64() % 101) as i64);
                for (slot, b) in coeffs.iter_mut().zip(basis_vec.iter()) {
                    *slot = &*slot + &(b * &c);
                }
            }
            let form = MultiPoly::from_terms(
                &f,
                &vars,
                monomials.iter().cloned().zip(coeffs.iter().cloned()),
            );
            if !form.is_zero() {
                return form;
            }
        }
    };
    let (q0, q1) = loop {
        let a = draw_form(&mut rng);
        let b = draw_form(&mut rng);
        if a != b {
            break (a, b);
        }
    };
    let alpha = case_splitting(&case).unwrap().alpha;
    assert_eq!(alpha, -2);
    let forms = vec![
        ModelForm {
            poly: q0,
            bidegree: (1, 2),
            role: FormRole::Quadratic {
                group: 0,
                tag: FormTag::Plain,
            },
        },
        ModelForm {
            poly: q1,
            bidegree: (1, 2),
            role: FormRole::Quadratic {
                group: 1,
                tag: FormTag::Plain,
            },
        },
    ];
    let model = FibrationModel::from_parts(case, &f, 33, forms, alpha).unwrap();

    let candidate = SectionCandidate {
        polys: sigma.clone(),
        degree_bound: 3,
    };
    assert!(verify_section(&model, &candidate));
    // height by the formula: alpha + max degree = -2 + 3
    assert_eq!(section_height(&model, &candidate).unwrap(), 1);

    // independent pullback-degree route: a generic hyperplane of the second
    // factor pulls back to a degree-3 divisor on the base, and the first
    // factor contributes alpha
    let mut max_pullback = 0usize;
    for _ in 0..5 {
        let mut acc = UniPoly::zero(&f, "t");
        for p in &sigma {
            let lambda = f.from_int((rng.next_u64() % 101) as i64);
            acc = &acc + &p.scale(&lambda);
        }
        max_pullback = max_pullback.max(acc.degree().unwrap_or(0));
    }
    assert_eq!(max_pullback, 3);
    assert_eq!(alpha + max_pullback as i64, 1);

    // the model is an honest fibration around the section: a sample fiber
    // contains the section's value there
    let tau = f.from_int(17);
    let fiber = fiber_at(&model, &tau, &f.one()).unwrap();
    let point: Vec<FieldElement> = sigma.iter().map(|p| p.eval(&tau)).collect();
    assert!(fiber.is_point_on_surface(&point));
}
