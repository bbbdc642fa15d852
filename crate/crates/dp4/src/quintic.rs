//! Classical invariants of binary quintics and weighted moduli points.
//!
//! Transvectants are computed by the differential-operator sum without the
//! factorial prefactor, so every coefficient stays integral:
//! `(f, g)_r = sum_i (-1)^i binom(r, i) (d^(r-i)_s d^i_t f)(d^i_s d^(r-i)_t g)`.
//! The generating invariants are pinned as
//!   `i = (f,f)_4`, `j = (f,i)_2`, `k = (j,j)_2`,
//!   `I4 = (i,i)_2`, `I8 = (k,i)_2`, `I12 = (k,k)_2`
//! of degrees 4, 8, 12 in the coefficients, scaling by `det^10`, `det^20`,
//! `det^30` under substitutions.  Normalizations differ across sources, so
//! published values are never compared directly; the contracts are the
//! covariance weights, vanishing behavior, and separation.

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::algebra::poly::BinaryForm;
use crate::error::{Error, Result};
use crate::pencil::{determinantal_quintic, QuadricPencil};

/// The mixed derivative `d^a_s d^b_t` of a binary form.
fn mixed_derivative(f: &BinaryForm, a: usize, b: usize) -> BinaryForm {
    let mut out = f.clone();
    for _ in 0..a {
        out = out.derivative_s();
    }
    for _ in 0..b {
        out = out.derivative_t();
    }
    out
}

fn binom(n: usize, k: usize) -> i64 {
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// The `r`-th transvectant by the operator sum (no factorial prefactor).
pub fn transvectant(f: &BinaryForm, g: &BinaryForm, r: usize) -> Result<BinaryForm> {
    if f.spec() != g.spec() {
        return Err(Error::MixedFields);
    }
    let max = f.degree().min(g.degree());
    if r > max {
        return Err(Error::TransvectantOrder { order: r, max });
    }
    let spec = f.spec().clone();
    let degree = f.degree() + g.degree() - 2 * r;
    let mut acc = BinaryForm::zero(&spec, degree);
    for i in 0..=r {
        let df = mixed_derivative(f, r - i, i);
        let dg = mixed_derivative(g, i, r - i);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let c = spec.from_int(sign * binom(r, i));
        acc = acc.add(&df.mul(&dg).scale(&c));
    }
    Ok(acc)
}

/// Values of the degree-4, 8, 12 generating invariants of a binary quintic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantVector {
    pub i4: FieldElement,
    pub i8: FieldElement,
    pub i12: FieldElement,
}

impl InvariantVector {
    pub fn is_zero(&self) -> bool {
        self.i4.is_zero() && self.i8.is_zero() && self.i12.is_zero()
    }
}

/// The pinned transvectant chain evaluated on a degree-5 form.
pub fn invariants_quintic(f: &BinaryForm) -> Result<InvariantVector> {
    if f.degree() != 5 {
        return Err(Error::DegreeMismatch {
            expected: 5,
            found: f.degree(),
        });
    }
    let i = transvectant(f, f, 4)?;
    let j = transvectant(f, &i, 2)?;
    let k = transvectant(&j, &j, 2)?;
    let i4 = constant_value(&transvectant(&i, &i, 2)?);
    let i8 = constant_value(&transvectant(&k, &i, 2)?);
    let i12 = constant_value(&transvectant(&k, &k, 2)?);
    Ok(InvariantVector { i4, i8, i12 })
}

fn constant_value(f: &BinaryForm) -> FieldElement {
    debug_assert_eq!(f.degree(), 0);
    f.coeffs()[0].clone()
}

/// A point of the weighted projective plane with weights `(1, 2, 3)` in the
/// coordinates `(I4, I8, I12)`: equality is orbit equality under
/// `lambda . (a, b, c) = (lambda a, lambda^2 b, lambda^3 c)`.
#[derive(Clone, Debug)]
pub struct WeightedModuliPoint {
    spec: FieldSpec,
    pub coords: [FieldElement; 3],
}

impl WeightedModuliPoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<WeightedModuliPoint> {
        if coords.iter().all(FieldElement::is_zero) {
            return Err(Error::UnstableQuintic);
        }
        Ok(WeightedModuliPoint {
            spec: coords[0].spec().clone(),
            coords,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Canonical representative when the weight-1 coordinate is nonzero:
    /// `(1, b/a^2, c/a^3)`.  Other strata have no root-free normal form and
    /// are returned unscaled.
    pub fn normalized(&self) -> [FieldElement; 3] {
        let [a, b, c] = &self.coords;
        if a.is_zero() {
            return self.coords.clone();
        }
        let ai = a.inv().unwrap();
        let ai2 = &ai * &ai;
        let ai3 = &ai2 * &ai;
        [self.spec.one(), b * &ai2, c * &ai3]
    }
}

impl PartialEq for WeightedModuliPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.spec != other.spec {
            return false;
        }
        let [a1, b1, c1] = &self.coords;
        let [a2, b2, c2] = &other.coords;
        if a1.is_zero() != a2.is_zero()
            || b1.is_zero() != b2.is_zero()
            || c1.is_zero() != c2.is_zero()
        {
            return false;
        }
        if !a1.is_zero() {
            return self.normalized() == other.normalized();
        }
        if !b1.is_zero() {
            if !c1.is_zero() {
                // lambda = (c2 b1)/(c1 b2) is forced; it works iff the
                // weight-zero invariant c^2/b^3 agrees
                let t1 = &(c1 * c1) * &(b1 * &(b1 * b1)).inv().unwrap();
                let t2 = &(c2 * c2) * &(b2 * &(b2 * b2)).inv().unwrap();
                return t1 == t2;
            }
            // (0, b, 0): need lambda^2 = b2/b1 in the field
            return is_square(&(b2 * &b1.inv().unwrap()));
        }
        // (0, 0, c): need lambda^3 = c2/c1 in the field
        is_cube(&(c2 * &c1.inv().unwrap()))
    }
}

impl Eq for WeightedModuliPoint {}

/// Squareness in the coefficient field (nonzero input).
fn is_square(x: &FieldElement) -> bool {
    match x.spec().order() {
        Some(q) => x.pow(((q - 1) / 2) as i128).unwrap().is_one(),
        None => {
            use num_traits::Signed;
            let r = x.as_rational().unwrap();
            if r.is_negative() {
                return false;
            }
            let n = r.numer();
            let d = r.denom();
            let sn = n.sqrt();
            let sd = d.sqrt();
            &(&sn * &sn) == n && &(&sd * &sd) == d
        }
    }
}

/// Cubeness in the coefficient field (nonzero input).
fn is_cube(x: &FieldElement) -> bool {
    match x.spec().order() {
        Some(q) => {
            if (q - 1) % 3 != 0 {
                true
            } else {
                x.pow(((q - 1) / 3) as i128).unwrap().is_one()
            }
        }
        None => {
            let r = x.as_rational().unwrap();
            let n = r.numer();
            let d = r.denom();
            let cn = n.cbrt();
            let cd = d.cbrt();
            &(&cn * &cn * &cn) == n && &(&cd * &cd * &cd) == d
        }
    }
}

/// The weighted moduli point `[I4 : I8 : I12]` of a semistable quintic.
pub fn moduli_point(f: &BinaryForm) -> Result<WeightedModuliPoint> {
    let inv = invariants_quintic(f)?;
    if inv.is_zero() {
        return Err(Error::UnstableQuintic);
    }
    WeightedModuliPoint::new([inv.i4, inv.i8, inv.i12])
}

/// Moduli point of the determinantal quintic of a semistable pencil:
/// invariant under congruence and pencil basis change.
pub fn xi_of_pencil(p: &QuadricPencil) -> Result<WeightedModuliPoint> {
    let quintic = determinantal_quintic(p)?;
    moduli_point(&quintic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix::Mat;
    use crate::algebra::multipoly::MultiPoly;
    use alloc::vec::Vec;
    use rand_core::{RngCore, SeedableRng};

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn f101() -> FieldSpec {
        FieldSpec::prime_field(101).unwrap()
    }

    #[test]
    fn zeroth_transvectant_is_the_product() {
        let q = q();
        let f = BinaryForm::from_ints(&q, &[1, 2, 3]);
        let g = BinaryForm::from_ints(&q, &[4, 5]);
        assert_eq!(transvectant(&f, &g, 0).unwrap(), f.mul(&g));
    }

    #[test]
    fn odd_self_transvectant_vanishes() {
        let q = q();
        let f = BinaryForm::from_ints(&q, &[3, -1, 4, 1, -5, 9]);
        for r in [1usize, 3, 5] {
            assert!(transvectant(&f, &f, r).unwrap().is_zero());
        }
        assert_eq!(
            transvectant(&f, &f, 6),
            Err(Error::TransvectantOrder { order: 6, max: 5 })
        );
    }

    /// Independent route: the omega process on separated variables
    /// `(s1, t1, s2, t2)`, applied r times, then restricted to the diagonal.
    fn omega_oracle(f: &BinaryForm, g: &BinaryForm, r: usize) -> BinaryForm {
        let spec = f.spec().clone();
        let vars = ["s1", "t1", "s2", "t2"];
        let lift = |h: &BinaryForm, which: usize| -> MultiPoly {
            let mut acc = MultiPoly::zero(&spec, &vars);
            for (i, c) in h.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut exp = alloc::vec![0u32; 4];
                exp[2 * which] = i as u32;
                exp[2 * which + 1] = (h.degree() - i) as u32;
                acc = &acc + &MultiPoly::from_terms(&spec, &vars, [(exp, c.clone())]);
            }
            acc
        };
        let mut work = &lift(f, 0) * &lift(g, 1);
        for _ in 0..r {
            let a = work.derivative(0).derivative(3);
            let b = work.derivative(1).derivative(2);
            work = &a - &b;
        }
        let degree = f.degree() + g.degree() - 2 * r;
        let mut out = BinaryForm::zero(&spec, degree);
        for (exp, c) in work.terms() {
            let s_exp = (exp[0] + exp[2]) as usize;
            let mut coeffs = alloc::vec![spec.zero(); degree + 1];
            coeffs[s_exp] = c.clone();
            out = out.add(&BinaryForm::from_coeffs(&spec, coeffs));
        }
        out
    }

    #[test]
    fn transvectant_matches_omega_process() {
        let q = q();
        let f = BinaryForm::from_ints(&q, &[1, 0, 1]);
        let h = transvectant(&f, &f, 2).unwrap();
        assert_eq!(h.degree(), 0);
        assert!(!h.is_zero());
        assert_eq!(h, omega_oracle(&f, &f, 2));
        let a = BinaryForm::from_ints(&q, &[2, -1, 0, 3, 1, 7]);
        let b = BinaryForm::from_ints(&q, &[1, 4, -2, 5]);
        for r in 0..=3 {
            assert_eq!(
                transvectant(&a, &b, r).unwrap(),
                omega_oracle(&a, &b, r),
                "r = {r}"
            );
        }
    }

    fn random_quintic(spec: &FieldSpec, rng: &mut rand_chacha::ChaCha20Rng) -> BinaryForm {
        let qn = spec.order().unwrap();
        loop {
            let coeffs: Vec<FieldElement> = (0..6)
                .map(|_| spec.element_from_index(rng.next_u64() as u128 % qn).unwrap())
                .collect();
            if !coeffs[5].is_zero() {
                return BinaryForm::from_coeffs(spec, coeffs);
            }
        }
    }

    fn random_sl2(spec: &FieldSpec, rng: &mut rand_chacha::ChaCha20Rng) -> Mat {
        let qn = spec.order().unwrap();
        loop {
            let a = spec.element_from_index(rng.next_u64() as u128 % qn).unwrap();
            let b = spec.element_from_index(rng.next_u64() as u128 % qn).unwrap();
            let c = spec.element_from_index(rng.next_u64() as u128 % qn).unwrap();
            if a.is_zero() {
                continue;
            }
            // solve a d - b c = 1 for d
            let d = &(&spec.one() + &(&b * &c)) * &a.inv().unwrap();
            let m = Mat::from_rows(
                spec,
                &[alloc::vec![a.clone(), b.clone()], alloc::vec![c, d]],
            );
            debug_assert!(m.det().is_one());
            return m;
        }
    }

    #[test]
    fn invariants_fixed_by_unimodular_substitutions() {
        let f = f101();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(101);
        for _ in 0..100 {
            let quintic = random_quintic(&f, &mut rng);
            let base = invariants_quintic(&quintic).unwrap();
            let g = random_sl2(&f, &mut rng);
            let moved = invariants_quintic(&quintic.substitute(&g)).unwrap();
            assert_eq!(base, moved);
        }
    }

    #[test]
    fn invariants_scale_with_determinant_weights() {
        let f = f101();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(202);
        for _ in 0..100 {
            let quintic = random_quintic(&f, &mut rng);
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
    }

    #[test]
    fn generators_are_functionally_independent() {
        // rank checks certifying that I8 is not a multiple of I4^2 and that
        // I12 is not a combination of I4^3 and I4 I8
        let q = q();
        let samples = [
            BinaryForm::from_ints(&q, &[1, 0, 0, 0, 0, 1]),
            BinaryForm::from_ints(&q, &[0, 1, 0, 0, 0, 1]),
            BinaryForm::from_ints(&q, &[1, 1, 0, 0, 0, 1]),
            BinaryForm::from_ints(&q, &[2, 0, 1, 0, 3, 1]),
            BinaryForm::from_ints(&q, &[1, 2, 3, 4, 5, 6]),
            BinaryForm::from_ints(&q, &[-1, 3, 0, 2, 0, 1]),
        ];
        let vals: Vec<InvariantVector> = samples
            .iter()
            .map(|f| invariants_quintic(f).unwrap())
            .collect();
        let rows8: Vec<Vec<FieldElement>> = vals
            .iter()
            .map(|v| alloc::vec![&v.i4 * &v.i4, v.i8.clone()])
            .collect();
        assert_eq!(Mat::from_rows(&q, &rows8).rank(), 2, "I8 degenerate");
        let rows12: Vec<Vec<FieldElement>> = vals
            .iter()
            .map(|v| alloc::vec![&(&v.i4 * &v.i4) * &v.i4, &v.i4 * &v.i8, v.i12.clone()])
            .collect();
        assert_eq!(Mat::from_rows(&q, &rows12).rank(), 3, "I12 degenerate");
    }

    #[test]
    fn quintuple_root_is_unstable() {
        let q = q();
        let f = BinaryForm::from_ints(&q, &[0, 0, 0, 0, 0, 1]); // s^5
        let inv = invariants_quintic(&f).unwrap();
        assert!(inv.is_zero());
        assert_eq!(moduli_point(&f), Err(Error::UnstableQuintic));
    }

    // computed once with this implementation and frozen
    const REGRESSION_BOUNDARY: [&str; 3] =
        ["5308416", "440301256704", "-876488338465357824"];

    #[test]
    fn boundary_quintic_has_nonzero_minimal_invariant() {
        // s^2 t^2 (s - t), the two-double-root boundary shape
        let q = q();
        let s = BinaryForm::from_ints(&q, &[0, 1]);
        let t = BinaryForm::from_ints(&q, &[1, 0]);
        let f = s
            .mul(&s)
            .mul(&t)
            .mul(&t)
            .mul(&BinaryForm::from_ints(&q, &[-1, 1]));
        assert_eq!(f.degree(), 5);
        let inv = invariants_quintic(&f).unwrap();
        assert!(!inv.i4.is_zero(), "minimal-degree invariant must survive");
        assert_eq!(inv.i4.to_decimal_string(), REGRESSION_BOUNDARY[0]);
        assert_eq!(inv.i8.to_decimal_string(), REGRESSION_BOUNDARY[1]);
        assert_eq!(inv.i12.to_decimal_string(), REGRESSION_BOUNDARY[2]);
    }

    #[test]
    fn moduli_points_agree_on_equivalent_quintics() {
        let f = f101();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(303);
        for _ in 0..50 {
            let quintic = random_quintic(&f, &mut rng);
            if invariants_quintic(&quintic).unwrap().is_zero() {
                continue;
            }
            let g = loop {
                let g = Mat::from_fn(&f, 2, 2, |_, _| {
                    f.element_from_index(rng.next_u64() as u128 % 101).unwrap()
                });
                if !g.det().is_zero() {
                    break g;
                }
            };
            let p1 = moduli_point(&quintic).unwrap();
            let p2 = moduli_point(&quintic.substitute(&g)).unwrap();
            assert_eq!(p1, p2);
        }
    }

    #[test]
    fn moduli_points_separate_inequivalent_quintics() {
        // over F_7, certify inequivalence by exhausting all invertible
        // substitutions, then check that the moduli points differ
        let f7 = FieldSpec::prime_field(7).unwrap();
        let mut all_g = Vec::new();
        for a in 0..7i64 {
            for b in 0..7i64 {
                for c in 0..7i64 {
                    for d in 0..7i64 {
                        let m = Mat::from_ints(&f7, &[&[a, b], &[c, d]]);
                        if !m.det().is_zero() {
                            all_g.push(m);
                        }
                    }
                }
            }
        }
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(404);
        let mut tested = 0;
        while tested < 50 {
            let f1 = random_quintic(&f7, &mut rng);
            let f2 = random_quintic(&f7, &mut rng);
            let ok = |h: &BinaryForm| {
                h.multiplicity_profile()
                    .map(|p| p.is_squarefree())
                    .unwrap_or(false)
            };
            if !ok(&f1) || !ok(&f2) {
                continue;
            }
            let equivalent = all_g.iter().any(|g| {
                let moved = f1.substitute(g);
                let lead_pair = moved
                    .coeffs()
                    .iter()
                    .zip(f2.coeffs().iter())
                    .find(|(a, b)| !a.is_zero() || !b.is_zero());
                match lead_pair {
                    None => true,
                    Some((a, b)) => {
                        if a.is_zero() || b.is_zero() {
                            false
                        } else {
                            let lambda = b * &a.inv().unwrap();
                            moved.scale(&lambda) == f2
                        }
                    }
                }
            });
            if equivalent {
                continue;
            }
            let p1 = moduli_point(&f1).unwrap();
            let p2 = moduli_point(&f2).unwrap();
            assert!(p1 != p2, "inequivalent quintics mapped together");
            tested += 1;
        }
    }

    #[test]
    fn xi_constant_on_congruence_orbits() {
        let f = f101();
        let c: [FieldElement; 5] = core::array::from_fn(|i| f.from_int(i as i64));
        let pencil = QuadricPencil::diagonal(&f, &c);
        let base = xi_of_pencil(&pencil).unwrap();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(505);
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
            let g = loop {
                let g = Mat::from_fn(&f, 2, 2, |_, _| {
                    f.element_from_index(rng.next_u64() as u128 % 101).unwrap()
                });
                if !g.det().is_zero() {
                    break g;
                }
            };
            let moved = pencil.congruate(&m).basis_change(&g).unwrap();
            assert_eq!(xi_of_pencil(&moved).unwrap(), base);
        }
    }

    #[test]
    fn xi_defined_for_stable_and_nodal_pencils() {
        let f = f101();
        let c: [FieldElement; 5] = core::array::from_fn(|i| f.from_int(i as i64));
        let stable = QuadricPencil::diagonal(&f, &c);
        assert!(xi_of_pencil(&stable).is_ok());
        let c2: [FieldElement; 5] = [
            f.from_int(0),
            f.from_int(0),
            f.from_int(1),
            f.from_int(2),
            f.from_int(3),
        ];
        let nodal = QuadricPencil::diagonal(&f, &c2);
        assert!(xi_of_pencil(&nodal).is_ok());
    }

    #[test]
    fn moebius_moved_diagonal_pencils_share_a_point() {
        // projectively equivalent root sets give equal moduli points
        let f = f101();
        let c: [FieldElement; 5] = core::array::from_fn(|i| f.from_int(i as i64 + 1));
        let pencil = QuadricPencil::diagonal(&f, &c);
        let base = xi_of_pencil(&pencil).unwrap();
        let g = Mat::from_ints(&f, &[&[2, 3], &[1, 9]]);
        let moved = pencil.basis_change(&g).unwrap();
        assert_eq!(xi_of_pencil(&moved).unwrap(), base);
    }
}
