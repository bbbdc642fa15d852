//! A quartic del Pezzo surface presented as a pencil of quadrics in `P^4`:
//! the determinantal quintic, GIT stability, singular-point probes,
//! simultaneous diagonalization, line enumeration, and one-parameter
//! degeneration limits.
//!
//! Quadrics are symmetric 5x5 matrices (odd characteristic makes the
//! polarization bijective).

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::field::{Embedding, FieldElement, FieldSpec};
use crate::algebra::matrix::Mat;
use crate::algebra::poly::{
    det_poly_matrix, roots_in_field, splitting_degree, BinaryForm, DetStrategy, UniPoly,
};
use crate::error::{Error, Result};

/// Ordered pair of symmetric 5x5 matrices representing the surface
/// `{Q0 = Q1 = 0}` in `P^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricPencil {
    spec: FieldSpec,
    a: Mat,
    b: Mat,
}

impl QuadricPencil {
    pub fn new(a: Mat, b: Mat) -> Result<QuadricPencil> {
        if a.rows() != 5 || a.cols() != 5 || b.rows() != 5 || b.cols() != 5 {
            return Err(Error::Unsupported("pencil matrices must be 5x5".into()));
        }
        if a.spec() != b.spec() {
            return Err(Error::MixedFields);
        }
        if !a.is_symmetric() || !b.is_symmetric() {
            return Err(Error::Unsupported(
                "pencil matrices must be symmetric".into(),
            ));
        }
        if a.spec().characteristic() == Some(2) {
            return Err(Error::CharacteristicTwo);
        }
        Ok(QuadricPencil {
            spec: a.spec().clone(),
            a,
            b,
        })
    }

    pub fn from_ints(spec: &FieldSpec, a: &[&[i64]], b: &[&[i64]]) -> Result<QuadricPencil> {
        QuadricPencil::new(Mat::from_ints(spec, a), Mat::from_ints(spec, b))
    }

    /// The diagonal pencil `sum x_i^2`, `sum c_i x_i^2`.
    pub fn diagonal(spec: &FieldSpec, c: &[FieldElement; 5]) -> QuadricPencil {
        let a = Mat::identity(spec, 5);
        let mut b = Mat::zeros(spec, 5, 5);
        for (i, ci) in c.iter().enumerate() {
            b.set(i, i, ci.clone());
        }
        QuadricPencil::new(a, b).unwrap()
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    /// Congruence by an invertible matrix: `(M^T A M, M^T B M)`.
    pub fn congruate(&self, m: &Mat) -> QuadricPencil {
        QuadricPencil::new(self.a.congruence(m), self.b.congruence(m)).unwrap()
    }

    /// Pencil basis change `(A, B) -> (g00 A + g01 B, g10 A + g11 B)`.
    pub fn basis_change(&self, g: &Mat) -> Result<QuadricPencil> {
        assert!(g.rows() == 2 && g.cols() == 2);
        if g.det().is_zero() {
            return Err(Error::DegeneratePencil("basis change is singular".into()));
        }
        let a = &self.a.scale(g.at(0, 0)) + &self.b.scale(g.at(0, 1));
        let b = &self.a.scale(g.at(1, 0)) + &self.b.scale(g.at(1, 1));
        QuadricPencil::new(a, b)
    }

    pub fn map_coeffs(&self, emb: &Embedding) -> QuadricPencil {
        let lift = |m: &Mat| Mat::from_fn(emb.dst(), 5, 5, |i, j| emb.apply(m.at(i, j)));
        QuadricPencil::new(lift(&self.a), lift(&self.b)).unwrap()
    }

    /// Both quadratic forms evaluated at a point.
    pub fn values_at(&self, x: &[FieldElement]) -> (FieldElement, FieldElement) {
        (self.a.bilinear(x, x), self.b.bilinear(x, x))
    }

    pub fn is_point_on_surface(&self, x: &[FieldElement]) -> bool {
        let (qa, qb) = self.values_at(x);
        qa.is_zero() && qb.is_zero()
    }

    /// The member `s A + t B`.
    pub fn member(&self, s: &FieldElement, t: &FieldElement) -> Mat {
        &self.a.scale(s) + &self.b.scale(t)
    }

    fn members_proportional(&self) -> bool {
        let first_a = (0..25).find(|&i| !self.a.at(i / 5, i % 5).is_zero());
        let first_b = (0..25).find(|&i| !self.b.at(i / 5, i % 5).is_zero());
        let ia = match (first_a, first_b) {
            (None, _) | (_, None) => return true,
            (Some(a), Some(b)) if a == b => a,
            _ => return false,
        };
        let lambda = &self.b.at(ia / 5, ia % 5).clone() / &self.a.at(ia / 5, ia % 5).clone();
        for i in 0..5 {
            for j in 0..5 {
                if &(self.a.at(i, j) * &lambda) != self.b.at(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// `det(s A + t B)` as a degree-5 binary form.
///
/// Errors when the two members span a line rather than a pencil, or when
/// the determinant vanishes identically.
pub fn determinantal_quintic(p: &QuadricPencil) -> Result<BinaryForm> {
    if p.members_proportional() {
        return Err(Error::DegeneratePencil(
            "members are proportional: the pencil is a single quadric".into(),
        ));
    }
    // det(uA + B) in the chart t = 1, interpolated exactly
    let entries: Vec<Vec<UniPoly>> = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| {
                    UniPoly::from_coeffs(
                        &p.spec,
                        "u",
                        vec![p.b.at(i, j).clone(), p.a.at(i, j).clone()],
                    )
                })
                .collect()
        })
        .collect();
    let det_u = det_poly_matrix(&entries, DetStrategy::Auto)?;
    if det_u.is_zero() {
        return Err(Error::IdenticallySingularPencil);
    }
    Ok(BinaryForm::from_unipoly(&det_u, 5))
}

/// GIT status of a pencil.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilityStatus {
    Stable,
    StrictlySemistable,
    Unstable,
    DegeneratePencil,
}

/// A probed singular point of the base locus, over an extension field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    /// Projective coordinates, first nonzero scaled to one, over the
    /// extension of relative degree `ext_degree`.
    pub point: Vec<FieldElement>,
    /// Relative degree of the extension where the point was found.
    pub ext_degree: usize,
    /// True when the quadratic cone at the point is nondegenerate.
    pub ordinary: bool,
}

/// Stability classification with its evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub status: StabilityStatus,
    /// Root multiplicity partition of the determinantal quintic (empty when
    /// the determinant vanishes identically).
    pub partition: Vec<usize>,
    /// Detected singular points (populated over finite fields when the
    /// quintic has repeated roots).
    pub singular_points: Vec<SingularPoint>,
}

/// Stability dictionary: squarefree determinantal quintic means a smooth
/// surface (stable); repeated roots with only ordinary double points means
/// strictly semistable; anything worse is unstable.  Over the rationals the
/// singular-point probe is unavailable, so non-squarefree pencils report an
/// error there.
pub fn classify_stability(p: &QuadricPencil) -> Result<StabilityVerdict> {
    let quintic = match determinantal_quintic(p) {
        Ok(f) => f,
        Err(Error::DegeneratePencil(_)) => {
            return Ok(StabilityVerdict {
                status: StabilityStatus::DegeneratePencil,
                partition: Vec::new(),
                singular_points: Vec::new(),
            })
        }
        Err(Error::IdenticallySingularPencil) => {
            // every member singular: never semistable
            let singular_points = if p.spec.is_finite() {
                common_kernel_points(p)
            } else {
                Vec::new()
            };
            return Ok(StabilityVerdict {
                status: StabilityStatus::Unstable,
                partition: Vec::new(),
                singular_points,
            });
        }
        Err(e) => return Err(e),
    };
    let profile = quintic.multiplicity_profile()?;
    let partition = profile.partition();
    if profile.is_squarefree() {
        return Ok(StabilityVerdict {
            status: StabilityStatus::Stable,
            partition,
            singular_points: Vec::new(),
        });
    }
    if !p.spec.is_finite() {
        return Err(Error::Unsupported(
            "singular-point probe for repeated roots requires a finite field".to_string(),
        ));
    }
    let singular_points = singular_points(p, 5)?;
    let all_ordinary = !singular_points.is_empty() && singular_points.iter().all(|s| s.ordinary);
    let status = if all_ordinary && singular_points.len() <= 4 {
        StabilityStatus::StrictlySemistable
    } else {
        StabilityStatus::Unstable
    };
    Ok(StabilityVerdict {
        status,
        partition,
        singular_points,
    })
}

/// Named predicate for the fibration hypothesis: smooth, or strictly
/// semistable with exactly one ordinary node.
pub fn at_worst_one_ordinary_node(p: &QuadricPencil) -> Result<bool> {
    let v = classify_stability(p)?;
    Ok(match v.status {
        StabilityStatus::Stable => true,
        StabilityStatus::StrictlySemistable => {
            v.singular_points.len() == 1 && v.singular_points[0].ordinary
        }
        _ => false,
    })
}

fn common_kernel_points(p: &QuadricPencil) -> Vec<SingularPoint> {
    let mut stacked = Mat::zeros(&p.spec, 10, 5);
    for i in 0..5 {
        for j in 0..5 {
            stacked.set(i, j, p.a.at(i, j).clone());
            stacked.set(5 + i, j, p.b.at(i, j).clone());
        }
    }
    stacked
        .nullspace()
        .into_iter()
        .map(|v| SingularPoint {
            point: normalize_projective(&v),
            ext_degree: 1,
            ordinary: false,
        })
        .collect()
}

/// Scale a projective representative so its first nonzero coordinate is 1.
pub fn normalize_projective(v: &[FieldElement]) -> Vec<FieldElement> {
    let lead = v.iter().find(|c| !c.is_zero());
    match lead {
        None => v.to_vec(),
        Some(l) => {
            let inv = l.inv().unwrap();
            v.iter().map(|c| c * &inv).collect()
        }
    }
}

/// All singular points of the base locus over extensions of relative degree
/// up to `k_max`, with their ordinary/non-ordinary flags.
///
/// A point is singular exactly when it lies in the kernel of a singular
/// member of the pencil and on both quadrics, so the search walks the roots
/// of the determinantal quintic over each extension instead of enumerating
/// projective space.
pub fn singular_points(p: &QuadricPencil, k_max: usize) -> Result<Vec<SingularPoint>> {
    if !p.spec.is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    let quintic = match determinantal_quintic(p) {
        Ok(f) => f,
        Err(Error::IdenticallySingularPencil) => {
            return Ok(common_kernel_points(p));
        }
        Err(e) => return Err(e),
    };
    let chart = quintic.chart_t("u");
    let infinity_root = chart.degree().unwrap_or(0) < 5;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let (big, emb, roots) = if k == 1 {
            let e = Embedding::new(&p.spec, &p.spec)?;
            let roots = roots_in_field(&chart)?;
            (p.spec.clone(), e, roots)
        } else {
            crate::algebra::poly::roots_in_extension(&chart, k)?
        };
        let lifted = p.map_coeffs(&emb);
        let q = p.spec.order().unwrap();
        for root in roots {
            // keep only roots whose minimal field is exactly degree k
            if k > 1 {
                let mut minimal = true;
                for j in 1..k {
                    if k % j == 0 {
                        let frob = root.pow(q.pow(j as u32) as i128).unwrap();
                        if frob == root {
                            minimal = false;
                            break;
                        }
                    }
                }
                if !minimal {
                    continue;
                }
            }
            // chart root u0 marks the singular member u0 A + B
            let member = lifted.member(&root, &big.one());
            collect_kernel_singularities(&lifted, &member, &big.one(), k, &mut out)?;
        }
        if infinity_root && k == 1 {
            let member = lifted.member(&big.one(), &big.zero());
            collect_kernel_singularities(&lifted, &member, &big.zero(), 1, &mut out)?;
        }
    }
    out.sort_by(|a, b| {
        a.ext_degree
            .cmp(&b.ext_degree)
            .then_with(|| a.point.cmp(&b.point))
    });
    out.dedup();
    Ok(out)
}

fn collect_kernel_singularities(
    pencil: &QuadricPencil,
    member: &Mat,
    member_t: &FieldElement,
    ext_degree: usize,
    out: &mut Vec<SingularPoint>,
) -> Result<()> {
    let spec = pencil.spec();
    let kernel = member.nullspace();
    if kernel.is_empty() {
        return Ok(());
    }
    let mut candidates: Vec<Vec<FieldElement>> = Vec::new();
    if kernel.len() == 1 {
        candidates.push(kernel[0].clone());
    } else {
        // enumerate the projective kernel; bounded, only degenerate members
        let q = spec.order().unwrap();
        let dim = kernel.len();
        let total = (q.pow(dim as u32) - 1) / (q - 1);
        if total > 1 << 20 {
            return Err(Error::BudgetExceeded {
                estimate: total,
                budget: 1 << 20,
            });
        }
        for point in projective_points(spec, dim - 1)? {
            let mut v = vec![spec.zero(); 5];
            for (basis_vec, coeff) in kernel.iter().zip(point.iter()) {
                if coeff.is_zero() {
                    continue;
                }
                for (vi, bi) in v.iter_mut().zip(basis_vec.iter()) {
                    *vi = &*vi + &(bi * coeff);
                }
            }
            candidates.push(v);
        }
    }
    for x in candidates {
        if !pencil.is_point_on_surface(&x) {
            continue;
        }
        // partner member independent of the singular one
        let partner = if member_t.is_zero() {
            pencil.member(&spec.zero(), &spec.one())
        } else {
            pencil.member(&spec.one(), &spec.zero())
        };
        let ordinary = ordinary_at(&x, member, &partner, spec);
        out.push(SingularPoint {
            point: normalize_projective(&x),
            ext_degree,
            ordinary,
        });
    }
    Ok(())
}

/// Nondegeneracy of the quadratic cone: restrict the singular member to the
/// tangent hyperplane of the partner quadric, modulo the point itself, and
/// test the rank of the resulting 3x3 Gram matrix.
fn ordinary_at(x: &[FieldElement], member: &Mat, partner: &Mat, spec: &FieldSpec) -> bool {
    let grad = partner.apply(x);
    if grad.iter().all(FieldElement::is_zero) {
        return false;
    }
    let grad_row = Mat::from_rows(spec, &[grad]);
    let tangent = grad_row.nullspace();
    debug_assert_eq!(tangent.len(), 4);
    // greedily complete x to a basis of the tangent hyperplane
    let mut rows = vec![x.to_vec()];
    let mut complement: Vec<Vec<FieldElement>> = Vec::with_capacity(3);
    for v in tangent {
        if complement.len() == 3 {
            break;
        }
        let mut probe = rows.clone();
        probe.push(v.clone());
        if Mat::from_rows(spec, &probe).rank() > rows.len() {
            rows.push(v.clone());
            complement.push(v);
        }
    }
    if complement.len() < 3 {
        return false;
    }
    let mut gram = Mat::zeros(spec, 3, 3);
    for i in 0..3 {
        for j in 0..3 {
            gram.set(i, j, member.bilinear(&complement[i], &complement[j]));
        }
    }
    !gram.det().is_zero()
}

/// Result of simultaneous diagonalization.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// The multiset `c_i`, one per root of the determinantal quintic, in
    /// canonical root order (`c = -root` in the chart `t = 1`).
    pub scalars: Vec<FieldElement>,
    /// Congruence transform whose columns are the kernel vectors.
    pub transform: Mat,
    /// `M^T A M`, diagonal.
    pub a_diag: Mat,
    /// `M^T B M`, diagonal, with `b_ii = c_i a_ii`.
    pub b_diag: Mat,
}

/// Simultaneous diagonalization of a pencil whose determinantal quintic is
/// squarefree and split over the coefficient field.
pub fn diagonalize(p: &QuadricPencil) -> Result<Diagonalization> {
    let quintic = determinantal_quintic(p)?;
    let profile = quintic.multiplicity_profile()?;
    if !profile.is_squarefree() {
        return Err(Error::Diagonalize("repeated roots in the quintic".into()));
    }
    let chart = quintic.chart_t("u");
    if chart.degree() != Some(5) {
        return Err(Error::Diagonalize(
            "first member is singular (root at infinity); change the pencil basis".into(),
        ));
    }
    let roots = if p.spec.is_finite() {
        let roots = roots_in_field(&chart)?;
        if roots.len() < 5 {
            return Err(Error::NonSplit {
                splitting_degree: splitting_degree(&chart)?,
            });
        }
        roots
    } else {
        let roots = rational_roots(&chart)?;
        if roots.len() < 5 {
            return Err(Error::Diagonalize(
                "quintic does not split over the rationals".into(),
            ));
        }
        roots
    };
    let scalars: Vec<FieldElement> = roots.iter().map(|r| -r).collect();
    let mut columns = Vec::with_capacity(5);
    for c in &scalars {
        // kernel of B - c A, one-dimensional for distinct roots
        let m = &p.b - &p.a.scale(c);
        let kernel = m.nullspace();
        if kernel.len() != 1 {
            return Err(Error::Diagonalize(
                "kernel of a pencil member is not a line".into(),
            ));
        }
        columns.push(normalize_projective(&kernel[0]));
    }
    let transform = Mat::from_fn(&p.spec, 5, 5, |i, j| columns[j][i].clone());
    let a_diag = p.a.congruence(&transform);
    let b_diag = p.b.congruence(&transform);
    for i in 0..5 {
        for j in 0..5 {
            if i != j && (!a_diag.at(i, j).is_zero() || !b_diag.at(i, j).is_zero()) {
                return Err(Error::Diagonalize(
                    "congruence did not diagonalize the pencil".into(),
                ));
            }
        }
        if a_diag.at(i, i).is_zero() {
            return Err(Error::Diagonalize("isotropic kernel vector".into()));
        }
        debug_assert_eq!(
            &(a_diag.at(i, i) * &scalars[i]),
            b_diag.at(i, i),
            "eigenvalue consistency"
        );
    }
    Ok(Diagonalization {
        scalars,
        transform,
        a_diag,
        b_diag,
    })
}

/// Rational roots by divisor enumeration on the cleared-denominator
/// polynomial; coefficient sizes here are desk scale.
fn rational_roots(f: &UniPoly) -> Result<Vec<FieldElement>> {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    let spec = f.spec().clone();
    let mut denom_lcm = BigInt::one();
    for c in f.coeffs() {
        let r = c.as_rational().unwrap();
        let g = gcd_big(&denom_lcm, r.denom());
        denom_lcm = &denom_lcm / &g * r.denom();
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            r.numer() * (&denom_lcm / r.denom())
        })
        .collect();
    let a0 = ints.iter().find(|c| !c.is_zero()).unwrap().clone();
    let an = ints.last().unwrap().clone();
    let bound = BigInt::from(1_000_000_000_000i64);
    if a0.abs() > bound || an.abs() > bound {
        return Err(Error::Unsupported(
            "rational root search exceeds the coefficient budget".into(),
        ));
    }
    let mut roots = Vec::new();
    let zero = spec.zero();
    if f.eval(&zero).is_zero() {
        roots.push(zero);
    }
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let n = n.abs();
        let mut out = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                out.push(d.clone());
                out.push(&n / &d);
            }
            d += 1;
            if d > BigInt::from(1_000_000i64) {
                break;
            }
        }
        out
    };
    for p_div in divisors(&a0) {
        for q_div in divisors(&an) {
            for sign in [1i64, -1] {
                let num = &p_div * BigInt::from(sign);
                let cand_num = spec.from_bigint(&num);
                let cand_den = spec.from_bigint(&q_div);
                if cand_den.is_zero() {
                    continue;
                }
                let cand = &cand_num * &cand_den.inv()?;
                if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

fn gcd_big(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> num_bigint::BigInt {
    use num_traits::Zero;
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    if a < num_bigint::BigInt::zero() {
        -a
    } else {
        a
    }
}

/// Iterator over the points of `P^n(F_q)` in canonical order: stratified by
/// the position of the first nonzero coordinate, which is scaled to one.
pub fn projective_points(
    spec: &FieldSpec,
    n: usize,
) -> Result<impl Iterator<Item = Vec<FieldElement>> + '_> {
    let q = spec.order().ok_or(Error::RequiresFiniteField)?;
    let spec = spec.clone();
    Ok((0..=n).flat_map(move |lead| {
        let spec = spec.clone();
        let tail = n - lead;
        (0..q.pow(tail as u32)).map(move |idx| {
            let mut v = vec![spec.zero(); lead];
            v.push(spec.one());
            let mut rest = idx;
            for _ in 0..tail {
                v.push(spec.element_from_index(rest % q).unwrap());
                rest /= q;
            }
            v
        })
    }))
}

/// Points of the base locus over the coefficient field, enumerated by
/// strata: the leading coordinate is pinned to one, the next coordinate is
/// solved from the two restricted quadratics, and the remaining tail is
/// scanned.  Cost is `O(q^3)` slices instead of `O(q^4)` ambient points.
pub fn surface_points(p: &QuadricPencil) -> Result<Vec<Vec<FieldElement>>> {
    let spec = p.spec().clone();
    let q = spec.order().ok_or(Error::RequiresFiniteField)?;
    if q.pow(3) > 50_000_000 {
        return Err(Error::BudgetExceeded {
            estimate: q.pow(3),
            budget: 50_000_000,
        });
    }
    let mut out = Vec::new();
    for lead in 0..5usize {
        if lead == 4 {
            let x: Vec<FieldElement> = (0..5)
                .map(|i| if i == 4 { spec.one() } else { spec.zero() })
                .collect();
            if p.is_point_on_surface(&x) {
                out.push(x);
            }
            continue;
        }
        let solve_var = lead + 1;
        let tail: Vec<usize> = (solve_var + 1..5).collect();
        let tail_count = q.pow(tail.len() as u32);
        let two = spec.from_int(2);
        for idx in 0..tail_count {
            // assemble the point template with the solved coordinate free
            let mut x: Vec<FieldElement> = vec![spec.zero(); 5];
            x[lead] = spec.one();
            let mut rest = idx;
            for &t in &tail {
                x[t] = spec.element_from_index(rest % q).unwrap();
                rest /= q;
            }
            // Q(x + y e_s) = Q(x) + 2y (e_s^T M x) + y^2 M_ss
            let coeffs = |m: &Mat| -> [FieldElement; 3] {
                let c2 = m.at(solve_var, solve_var).clone();
                let mut lin = spec.zero();
                let mut cst = spec.zero();
                for i in 0..5 {
                    if i == solve_var || x[i].is_zero() {
                        continue;
                    }
                    lin = &lin + &(m.at(solve_var, i) * &x[i]);
                    for j in 0..5 {
                        if j == solve_var || x[j].is_zero() {
                            continue;
                        }
                        cst = &cst + &(&(m.at(i, j) * &x[i]) * &x[j]);
                    }
                }
                [cst, &two * &lin, c2]
            };
            let qa = coeffs(&p.a);
            let qb = coeffs(&p.b);
            for root in common_quadratic_roots(&spec, &qa, &qb, q) {
                let mut pt = x.clone();
                pt[solve_var] = root;
                debug_assert!(p.is_point_on_surface(&pt));
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Roots shared by two univariate polynomials of degree at most two,
/// via gcd and the quadratic formula (odd characteristic).
fn common_quadratic_roots(
    spec: &FieldSpec,
    a: &[FieldElement; 3],
    b: &[FieldElement; 3],
    q: u128,
) -> Vec<FieldElement> {
    let pa = UniPoly::from_coeffs(spec, "y", a.to_vec());
    let pb = UniPoly::from_coeffs(spec, "y", b.to_vec());
    let g = if pa.is_zero() {
        pb.clone()
    } else if pb.is_zero() {
        pa.clone()
    } else {
        pa.gcd(&pb)
    };
    match g.degree() {
        None => {
            // both identically zero: the whole line lies on both quadrics
            (0..q)
                .map(|i| spec.element_from_index(i).unwrap())
                .collect()
        }
        Some(0) => Vec::new(),
        Some(1) => {
            let root = -&(&g.coeff(0) * &g.coeff(1).inv().unwrap());
            vec![root]
        }
        _ => {
            // quadratic formula
            let a2 = g.coeff(2);
            let a1 = g.coeff(1);
            let a0 = g.coeff(0);
            let disc = &(&a1 * &a1) - &(&spec.from_int(4) * &(&a2 * &a0));
            match disc.sqrt() {
                None => Vec::new(),
                Some(r) => {
                    let inv2a = (&spec.from_int(2) * &a2).inv().unwrap();
                    let r1 = &(&(-&a1) + &r) * &inv2a;
                    let r2 = &(&(-&a1) - &r) * &inv2a;
                    if r1 == r2 {
                        vec![r1]
                    } else {
                        vec![r1, r2]
                    }
                }
            }
        }
    }
}

/// A line in `P^4` given by its canonical spanning pair (the two rows of
/// the reduced row echelon form of any spanning pair).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Line {
    pub points: [Vec<FieldElement>; 2],
}

/// All lines of `P^4(F_{q^k})` contained in the base locus, each reported
/// once.  Strategy: enumerate surface points, then pairs whose spanning
/// line lies in both quadrics; feasible while the surface has at most a
/// few thousand points.
pub fn lines_on_surface(p: &QuadricPencil, k: usize) -> Result<Vec<Line>> {
    if !p.spec.is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    let (pencil, spec) = if k == 1 {
        (p.clone(), p.spec.clone())
    } else {
        let big = FieldSpec::extension_field(
            p.spec.characteristic().unwrap(),
            p.spec.extension_degree() * k,
        )?;
        let emb = Embedding::new(&p.spec, &big)?;
        (p.map_coeffs(&emb), big)
    };
    let points = surface_points(&pencil)?;
    // precompute A x and B x for each surface point
    let ax: Vec<Vec<FieldElement>> = points.iter().map(|x| pencil.a.apply(x)).collect();
    let bx: Vec<Vec<FieldElement>> = points.iter().map(|x| pencil.b.apply(x)).collect();
    let dot = |u: &[FieldElement], v: &[FieldElement]| -> FieldElement {
        let mut acc = spec.zero();
        for (a, b) in u.iter().zip(v.iter()) {
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
        }
        acc
    };
    let mut lines: BTreeMap<Vec<FieldElement>, Line> = BTreeMap::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if !dot(&ax[i], &points[j]).is_zero() {
                continue;
            }
            if !dot(&bx[i], &points[j]).is_zero() {
                continue;
            }
            // spanning pair in echelon form as the canonical key
            let m = Mat::from_rows(&spec, &[points[i].clone(), points[j].clone()]);
            let (rref, pivots) = m.rref();
            if pivots.len() != 2 {
                continue;
            }
            let r0 = rref.row(0).to_vec();
            let r1 = rref.row(1).to_vec();
            let mut key = r0.clone();
            key.extend(r1.clone());
            lines.entry(key).or_insert(Line { points: [r0, r1] });
        }
    }
    Ok(lines.into_values().collect())
}

/// Whether a line (as a spanning pair of surface points) lies in the base
/// locus.
pub fn line_in_surface(p: &QuadricPencil, u: &[FieldElement], v: &[FieldElement]) -> bool {
    let (qa_u, qb_u) = p.values_at(u);
    let (qa_v, qb_v) = p.values_at(v);
    qa_u.is_zero()
        && qb_u.is_zero()
        && qa_v.is_zero()
        && qb_v.is_zero()
        && p.a.bilinear(u, v).is_zero()
        && p.b.bilinear(u, v).is_zero()
}

/// Coefficientwise limit of the pencil under the one-parameter substitution
/// `x_i -> t^(w_i) x_i` as `t -> 0`: each quadric keeps exactly the entries
/// of minimal total weight `w_i + w_j` over its support.
pub fn rho_limit(p: &QuadricPencil, weights: &[i64; 5]) -> Result<QuadricPencil> {
    let limit = |m: &Mat| -> Mat {
        let mut min_w: Option<i64> = None;
        for i in 0..5 {
            for j in 0..5 {
                if !m.at(i, j).is_zero() {
                    let w = weights[i] + weights[j];
                    min_w = Some(min_w.map_or(w, |mw: i64| mw.min(w)));
                }
            }
        }
        let min_w = match min_w {
            None => return m.clone(),
            Some(w) => w,
        };
        Mat::from_fn(&p.spec, 5, 5, |i, j| {
            if weights[i] + weights[j] == min_w {
                m.at(i, j).clone()
            } else {
                p.spec.zero()
            }
        })
    };
    let out = QuadricPencil::new(limit(&p.a), limit(&p.b))?;
    // the limit must still be an honest pencil
    determinantal_quintic(&out)?;
    Ok(out)
}
