//! Quartic del Pezzo fibrations over the projective line: splitting-type
//! calculus, the eight-case height table, Euler-characteristic identities,
//! Koszul cross-checks, random bihomogeneous models over finite fields,
//! fibers and discriminant profiles, and the expected-dimension counts.
//!
//! Ambient coordinates are `(t0, t1)` on the base and `x0..xN` on the
//! second factor, `N = case + 3`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};

use crate::algebra::field::{Embedding, FieldElement, FieldSpec};
use crate::algebra::matrix::Mat;
use crate::algebra::multipoly::MultiPoly;
use crate::algebra::poly::{interpolate, BinaryForm, UniPoly};
use crate::error::{Error, Result};
use crate::pencil::QuadricPencil;

// ---------------------------------------------------------------------------
// Splitting types
// ---------------------------------------------------------------------------

/// A direct sum of line bundles on the projective line, encoded by the
/// sorted multiset of twists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut twists: Vec<i64>) -> SplittingType {
        assert!(!twists.is_empty(), "rank must be positive");
        twists.sort_unstable();
        SplittingType(twists)
    }

    pub fn twists(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Symmetric square: the multiset `a_i + a_j` over `i <= j`.
    pub fn sym2(&self) -> SplittingType {
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            for j in i..self.0.len() {
                out.push(self.0[i] + self.0[j]);
            }
        }
        SplittingType::new(out)
    }

    /// Tensor by a line bundle: add `m` to each twist.
    pub fn twist(&self, m: i64) -> SplittingType {
        SplittingType::new(self.0.iter().map(|a| a + m).collect())
    }

    /// Dimension of the space of global sections: `sum max(0, a_i + 1)`.
    pub fn h0(&self) -> i64 {
        self.0.iter().map(|&a| 0.max(a + 1)).sum()
    }
}

/// Height of a fibration from the splitting type of the direct image of
/// the relative anticanonical sheaf: `-2 deg`.
pub fn height_from_splitting(s: &SplittingType) -> Result<i64> {
    if s.rank() != 5 {
        return Err(Error::DegreeMismatch {
            expected: 5,
            found: s.rank(),
        });
    }
    Ok(-2 * s.degree())
}

// ---------------------------------------------------------------------------
// Numerology
// ---------------------------------------------------------------------------

/// Derived numerical invariants of a fibration of height `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumerologyReport {
    pub height: i64,
    /// Number of singular fibers: `2h`.
    pub singular_fibers: i64,
    /// Topological Euler characteristic: `16 - 2h`.
    pub euler: i64,
    /// `chi(Omega^1) = h - 7`.
    pub chi_omega1: i64,
    /// Expected parameter count: `(3/2) h - 1`.
    pub parameters: i64,
    pub h11: i64,
    /// `h^{12} = h + h^{11} - 7`.
    pub h12: i64,
}

/// The five height identities, with `h^{11}` supplied by the caller
/// (2 for complete-intersection models).
pub fn numerology(h: i64, h11: i64) -> Result<NumerologyReport> {
    if h < 0 || h % 2 != 0 {
        return Err(Error::Unsupported(alloc::format!(
            "height must be even and nonnegative, got {h}"
        )));
    }
    Ok(NumerologyReport {
        height: h,
        singular_fibers: 2 * h,
        euler: 16 - 2 * h,
        chi_omega1: h - 7,
        parameters: 3 * h / 2 - 1,
        h11,
        h12: h + h11 - 7,
    })
}

// ---------------------------------------------------------------------------
// The case table
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// One of the five balanced splitting shapes, side of the parity split, and
/// the twist parameter `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseSpec {
    pub case: u8,
    pub parity: Parity,
    pub n: i64,
}

impl CaseSpec {
    pub fn new(case: u8, parity: Parity, n: i64) -> Result<CaseSpec> {
        if !(1..=5).contains(&case) {
            return Err(Error::InvalidCase(alloc::format!(
                "case must be 1..5, got {case}"
            )));
        }
        Ok(CaseSpec { case, parity, n })
    }

    /// Ambient projective dimension of the second factor.
    pub fn ambient_dim(&self) -> usize {
        self.case as usize + 3
    }

    /// The special height-6/12/14 instances built from weighted forms.
    pub fn is_special(&self) -> bool {
        matches!(
            (self.case, self.parity, self.n),
            (3, Parity::Odd, -1) | (4, Parity::Odd, -1) | (5, Parity::Even, -1)
        )
    }
}

/// Case data: the splitting of the pushforward of `O(1)`, the splitting and
/// degree of the pushforward of the relative anticanonical sheaf, the
/// height, and the first-factor degree `alpha` of that sheaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseTableRow {
    pub spec: CaseSpec,
    pub v: SplittingType,
    pub w: SplittingType,
    pub degree: i64,
    pub height: i64,
    /// The relative anticanonical sheaf restricts to `O(alpha, 1)`.
    pub alpha: i64,
}

/// Splitting data and height formulas for all cases.
pub fn case_splitting(c: &CaseSpec) -> Result<CaseTableRow> {
    let ones = (c.case - 1) as usize;
    let mut v = vec![1i64; ones];
    v.resize(5, 0);
    let v = SplittingType::new(v);
    let alpha = match c.parity {
        Parity::Even => -(2 * c.n + c.case as i64 - 1),
        Parity::Odd => -(2 * c.n + c.case as i64),
    };
    let w = v.twist(alpha);
    let degree = w.degree();
    let height = height_from_splitting(&w)?;
    Ok(CaseTableRow {
        spec: *c,
        v,
        w,
        degree,
        height,
        alpha,
    })
}

/// Closed-form height per case and parity: the table
/// `20n, 20n+10 | 20n+8, 20n+18 | 20n+16, 20n+26 | 20n+24, 20n+34 | 20n+32, 20n+42`.
pub fn closed_form_height(c: &CaseSpec) -> i64 {
    let even_offset = [0i64, 8, 16, 24, 32][(c.case - 1) as usize];
    match c.parity {
        Parity::Even => 20 * c.n + even_offset,
        Parity::Odd => 20 * c.n + even_offset + 10,
    }
}

// ---------------------------------------------------------------------------
// Euler characteristics on the ambient product
// ---------------------------------------------------------------------------

/// Binomial `C(x + 3, 3)` and `C(x + 4, 4)` style polynomials over the
/// integers, valid for negative arguments.
fn binom_poly(x: i64, k: u32) -> i64 {
    // C(x, k) = x (x-1) ... (x-k+1) / k!
    let mut num: i128 = 1;
    for i in 0..k as i64 {
        num *= (x - i) as i128;
    }
    let mut den: i128 = 1;
    for i in 1..=k as i128 {
        den *= i;
    }
    (num / den) as i64
}

/// `chi(O(a, b)) = (a + 1) C(b + 4, 4)` on the product of a line and P^4.
pub fn chi_op(a: i64, b: i64) -> i64 {
    (a + 1) * binom_poly(b + 4, 4)
}

/// `chi(Omega^1(a, b)) = (a - 1) C(b+4, 4) + (5 C(b+3, 4) - C(b+4, 4))(a + 1)`.
pub fn chi_omega1_p(a: i64, b: i64) -> i64 {
    (a - 1) * binom_poly(b + 4, 4) + (5 * binom_poly(b + 3, 4) - binom_poly(b + 4, 4)) * (a + 1)
}

/// Koszul-resolution route for a complete intersection of two forms of
/// bidegree `(n, 2)`: assembles the four-term alternating sums and returns
/// `(chi(Omega^1_X), chi(X), h^2(Omega^1_X))`, equal to
/// `(-7 + 20n, 16 - 40n, -5 + 20n)`.
pub fn chi_via_koszul(n: i64) -> Result<(i64, i64, i64)> {
    if n < 1 {
        return Err(Error::Unsupported("twist must be at least one".into()));
    }
    let chi_ox = |a: i64, b: i64| chi_op(a, b) - 2 * chi_op(a - n, b - 2) + chi_op(a - 2 * n, b - 4);
    let chi_o1x = |a: i64, b: i64| {
        chi_omega1_p(a, b) - 2 * chi_omega1_p(a - n, b - 2) + chi_omega1_p(a - 2 * n, b - 4)
    };
    // conormal sequence: chi(Omega^1_X) = chi(Omega^1_P|X) - 2 chi(O_X(-n,-2))
    let chi_omega1_x = chi_o1x(0, 0) - 2 * chi_ox(-n, -2);
    // Hodge bookkeeping: chi(X) = 2 - 2 chi(Omega^1_X), h^2 = chi + h^{11}
    let chi_x = 2 - 2 * chi_omega1_x;
    let h2 = chi_omega1_x + 2;
    Ok((chi_omega1_x, chi_x, h2))
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// How a quadratic form sits in the defining system: plain forms cut the
/// model directly; `TimesT0`/`TimesT1` mark the two ambient avatars
/// `t_b * F` of a weighted form `F` in the special constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormTag {
    Plain,
    TimesT0,
    TimesT1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormRole {
    /// Bidegree (1,1), eliminated fiberwise.
    Linear,
    /// Quadratic in the second factor; forms sharing a group id cut the
    /// same divisor and exactly one is used per fiber.
    Quadratic { group: usize, tag: FormTag },
}

#[derive(Clone, Debug)]
pub struct ModelForm {
    pub poly: MultiPoly,
    pub bidegree: (u32, u32),
    pub role: FormRole,
}

/// Explicit bihomogeneous forms over a finite field cutting a quartic del
/// Pezzo fibration in the product of a line and `P^N`.
#[derive(Clone, Debug)]
pub struct FibrationModel {
    spec: FieldSpec,
    case: CaseSpec,
    seed: u64,
    retries: u32,
    forms: Vec<ModelForm>,
    alpha: i64,
}

impl FibrationModel {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn case(&self) -> &CaseSpec {
        &self.case
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Rejected draws before the discriminant postcondition held.
    pub fn retries(&self) -> u32 {
        self.retries
    }

    pub fn forms(&self) -> &[ModelForm] {
        &self.forms
    }

    /// First-factor degree of the relative anticanonical sheaf.
    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn ambient_dim(&self) -> usize {
        self.case.ambient_dim()
    }

    pub fn height(&self) -> i64 {
        closed_form_height(&self.case)
    }

    pub fn vars(&self) -> Vec<String> {
        model_vars(self.ambient_dim())
    }

    /// Assemble a model from explicit forms, validating the recipe: the
    /// right number of linear forms and quadratic groups with the declared
    /// bidegrees for the case.
    pub fn from_parts(
        case: CaseSpec,
        spec: &FieldSpec,
        seed: u64,
        forms: Vec<ModelForm>,
        alpha: i64,
    ) -> Result<FibrationModel> {
        if !spec.is_finite() {
            return Err(Error::RequiresFiniteField);
        }
        let n_vars = case.ambient_dim() + 3;
        let linear_expected = (case.case - 1) as usize;
        let mut linear_seen = 0usize;
        let mut groups = alloc::collections::BTreeMap::new();
        for form in &forms {
            if form.poly.vars().len() != n_vars {
                return Err(Error::InvalidCase("form has the wrong variable count".into()));
            }
            let bd = form
                .poly
                .bidegree(2)
                .ok_or_else(|| Error::InvalidCase("form is not bihomogeneous".into()))?;
            if bd != (form.bidegree.0, form.bidegree.1) && !form.poly.is_zero() {
                return Err(Error::InvalidCase(alloc::format!(
                    "declared bidegree {:?} does not match {:?}",
                    form.bidegree,
                    bd
                )));
            }
            match form.role {
                FormRole::Linear => {
                    if form.bidegree != (1, 1) {
                        return Err(Error::InvalidCase("linear forms have bidegree (1,1)".into()));
                    }
                    linear_seen += 1;
                }
                FormRole::Quadratic { group, .. } => {
                    if form.bidegree.1 != 2 {
                        return Err(Error::InvalidCase(
                            "quadratic forms have second-factor degree 2".into(),
                        ));
                    }
                    groups.entry(group).or_insert_with(Vec::new).push(form);
                }
            }
        }
        if linear_seen != linear_expected {
            return Err(Error::InvalidCase(alloc::format!(
                "expected {linear_expected} linear forms, found {linear_seen}"
            )));
        }
        if groups.len() != 2 {
            return Err(Error::InvalidCase(alloc::format!(
                "expected 2 quadratic groups, found {}",
                groups.len()
            )));
        }
        Ok(FibrationModel {
            spec: spec.clone(),
            case,
            seed,
            retries: 0,
            forms,
            alpha,
        })
    }

    /// Base change to an extension field.
    pub fn map_coeffs(&self, emb: &Embedding) -> FibrationModel {
        FibrationModel {
            spec: emb.dst().clone(),
            case: self.case,
            seed: self.seed,
            retries: self.retries,
            forms: self
                .forms
                .iter()
                .map(|f| ModelForm {
                    poly: f.poly.map_coeffs(emb),
                    bidegree: f.bidegree,
                    role: f.role,
                })
                .collect(),
            alpha: self.alpha,
        }
    }
}

pub fn model_vars(ambient_dim: usize) -> Vec<String> {
    let mut vars = vec![String::from("t0"), String::from("t1")];
    for i in 0..=ambient_dim {
        vars.push(alloc::format!("x{i}"));
    }
    vars
}

fn random_element(spec: &FieldSpec, rng: &mut rand_chacha::ChaCha20Rng) -> FieldElement {
    let q = spec.order().unwrap();
    spec.element_from_index(rng.next_u64() as u128 % q).unwrap()
}

/// Uniformly random bihomogeneous form of the given bidegree.
fn random_form(
    spec: &FieldSpec,
    vars: &[&str],
    bidegree: (u32, u32),
    rng: &mut rand_chacha::ChaCha20Rng,
) -> MultiPoly {
    let n_x = vars.len() - 2;
    let mut terms = Vec::new();
    // enumerate monomials t0^a0 t1^a1 x^e with a0+a1 = bd.0, |e| = bd.1
    let x_monomials = homogeneous_exponents(n_x, bidegree.1);
    for a0 in 0..=bidegree.0 {
        let a1 = bidegree.0 - a0;
        for xe in &x_monomials {
            let mut exp = vec![a0, a1];
            exp.extend_from_slice(xe);
            terms.push((exp, random_element(spec, rng)));
        }
    }
    MultiPoly::from_terms(spec, vars, terms)
}

fn homogeneous_exponents(n_vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n_vars];
    fn rec(i: usize, remaining: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = remaining;
            out.push(cur.clone());
            return;
        }
        for v in 0..=remaining {
            cur[i] = v;
            rec(i + 1, remaining - v, cur, out);
        }
    }
    if n_vars == 0 {
        return out;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

const GENERATE_RETRY_BUDGET: u32 = 400;

/// Deterministic-from-seed random model with the case's bidegree recipe.
/// Draws are rejected until the discriminant profile is squarefree of
/// projective degree `2h`; the accepted draw records its retry count.
pub fn generate_model(case: &CaseSpec, spec: &FieldSpec, seed: u64) -> Result<FibrationModel> {
    if !spec.is_finite() {
        return Err(Error::RequiresFiniteField);
    }
    if !case.is_special() && case.n < 0 {
        return Err(Error::InvalidCase(
            "negative twists are only realized by the special height 6/12/14 models".into(),
        ));
    }
    if spec.characteristic() == Some(5) {
        return Err(Error::Unsupported(
            "model generation validates discriminants, unavailable in characteristic five".into(),
        ));
    }
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let mut retries = 0u32;
    loop {
        let forms = if case.is_special() {
            draw_special_forms(case, spec, &mut rng)
        } else {
            draw_generic_forms(case, spec, &mut rng)
        };
        let alpha = case_splitting(case)?.alpha;
        let mut model = FibrationModel::from_parts(*case, spec, seed, forms, alpha)?;
        model.retries = retries;
        match discriminant_profile(&model) {
            Ok(profile)
                if profile.projective_degree == 2 * model.height() && profile.squarefree =>
            {
                return Ok(model);
            }
            _ => {
                retries += 1;
                if retries >= GENERATE_RETRY_BUDGET {
                    return Err(Error::RetryBudgetExhausted { attempts: retries });
                }
            }
        }
    }
}

fn draw_generic_forms(
    case: &CaseSpec,
    spec: &FieldSpec,
    rng: &mut rand_chacha::ChaCha20Rng,
) -> Vec<ModelForm> {
    let vars_owned = model_vars(case.ambient_dim());
    let vars: Vec<&str> = vars_owned.iter().map(String::as_str).collect();
    let mut forms = Vec::new();
    for _ in 0..(case.case - 1) {
        forms.push(ModelForm {
            poly: random_form(spec, &vars, (1, 1), rng),
            bidegree: (1, 1),
            role: FormRole::Linear,
        });
    }
    let n = case.n as u32;
    let second = match case.parity {
        Parity::Even => n,
        Parity::Odd => n + 1,
    };
    for (group, deg) in [(0usize, n), (1, second)] {
        forms.push(ModelForm {
            poly: random_form(spec, &vars, (deg, 2), rng),
            bidegree: (deg, 2),
            role: FormRole::Quadratic {
                group,
                tag: FormTag::Plain,
            },
        });
    }
    forms
}

/// The special constructions: the second factor is coordinatized by blocks
/// `(x_{2i}, x_{2i+1}) = y_i (t0, t1)` for the positively twisted summands
/// plus plain coordinates for the trivial summands.  A weighted form
/// `F = sum c_ij(t) y_i y_j + sum d_ik y_i y_k` (no terms among the trivial
/// block except against a twisted one for heights 6/14; none at all on the
/// last coordinate for height 12) enters the ambient system through its two
/// avatars `t0 F`, `t1 F`, which are honest bidegree (0,2) forms.
fn draw_special_forms(
    case: &CaseSpec,
    spec: &FieldSpec,
    rng: &mut rand_chacha::ChaCha20Rng,
) -> Vec<ModelForm> {
    let blocks = (case.case - 1) as usize; // twisted summands
    let singles = 5 - blocks; // trivial summands
    let vars_owned = model_vars(case.ambient_dim());
    let vars: Vec<&str> = vars_owned.iter().map(String::as_str).collect();
    let n_vars = vars.len();
    let mut forms = Vec::new();
    // linear forms x_{2i} t1 - x_{2i+1} t0
    for i in 0..blocks {
        let mut terms = Vec::new();
        let mut e1 = vec![0u32; n_vars];
        e1[1] = 1;
        e1[2 + 2 * i] = 1;
        terms.push((e1, spec.one()));
        let mut e2 = vec![0u32; n_vars];
        e2[0] = 1;
        e2[2 + 2 * i + 1] = 1;
        terms.push((e2, -&spec.one()));
        forms.push(ModelForm {
            poly: MultiPoly::from_terms(spec, &vars, terms),
            bidegree: (1, 1),
            role: FormRole::Linear,
        });
    }
    // weighted quadratic data
    let weighted_count = if case.case == 5 { 2 } else { 1 };
    for w in 0..weighted_count {
        let mut avatar0 = Vec::new(); // terms of t0 * F
        let mut avatar1 = Vec::new(); // terms of t1 * F
        // c_ij(t) y_i y_j with c linear in t
        for i in 0..blocks {
            for j in i..blocks {
                let c0 = random_element(spec, rng);
                let c1 = random_element(spec, rng);
                // t_b * (c0 t0 + c1 t1) y_i y_j expands on the basis
                // y_i y_j t0^2 -> x_{2i} x_{2j}, t0 t1 -> x_{2i} x_{2j+1},
                // t1^2 -> x_{2i+1} x_{2j+1}
                let pair = |a: usize, b: usize| -> Vec<u32> {
                    let mut e = vec![0u32; n_vars];
                    e[2 + a] += 1;
                    e[2 + b] += 1;
                    e
                };
                avatar0.push((pair(2 * i, 2 * j), c0.clone()));
                avatar0.push((pair(2 * i, 2 * j + 1), c1.clone()));
                avatar1.push((pair(2 * i, 2 * j + 1), c0.clone()));
                avatar1.push((pair(2 * i + 1, 2 * j + 1), c1.clone()));
            }
        }
        // d_ik y_i y_k with constant d, k running over trivial summands
        for i in 0..blocks {
            for k in 0..singles {
                if case.case == 5 && k + 1 == singles && false {
                    continue;
                }
                let d = random_element(spec, rng);
                let kx = 2 * blocks + k;
                let pair = |a: usize, b: usize| -> Vec<u32> {
                    let mut e = vec![0u32; n_vars];
                    e[2 + a] += 1;
                    e[2 + b] += 1;
                    e
                };
                avatar0.push((pair(2 * i, kx), d.clone()));
                avatar1.push((pair(2 * i + 1, kx), d.clone()));
            }
        }
        // no terms among the trivial summands: such monomials would need a
        // negative twist
        forms.push(ModelForm {
            poly: MultiPoly::from_terms(spec, &vars, avatar0),
            bidegree: (0, 2),
            role: FormRole::Quadratic {
                group: w,
                tag: FormTag::TimesT0,
            },
        });
        forms.push(ModelForm {
            poly: MultiPoly::from_terms(spec, &vars, avatar1),
            bidegree: (0, 2),
            role: FormRole::Quadratic {
                group: w,
                tag: FormTag::TimesT1,
            },
        });
    }
    // heights 6 and 14 add one plain quadric pulled back from the second
    // factor
    if weighted_count == 1 {
        forms.push(ModelForm {
            poly: random_form(spec, &vars, (0, 2), rng),
            bidegree: (0, 2),
            role: FormRole::Quadratic {
                group: 1,
                tag: FormTag::Plain,
            },
        });
    }
    forms
}

// ---------------------------------------------------------------------------
// Fibers
// ---------------------------------------------------------------------------

/// Fiber of the model at a point `[t0 : t1]` of the base: substitutes the
/// point, eliminates the ambient down to `P^4` along the linear forms
/// (pivoting on the lexicographically first maximal minor via row
/// reduction), and returns the induced pencil of quadrics.
pub fn fiber_at(
    model: &FibrationModel,
    t0: &FieldElement,
    t1: &FieldElement,
) -> Result<QuadricPencil> {
    let spec = model.spec().clone();
    let n1 = model.ambient_dim() + 1;
    // linear system at the point
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for form in &model.forms {
        if form.role == FormRole::Linear {
            let at_t = form.poly.substitute(0, t0).substitute(1, t1);
            rows.push(at_t.linear_coeffs(2)?);
        }
    }
    let kernel = if rows.is_empty() {
        (0..n1)
            .map(|i| {
                (0..n1)
                    .map(|j| if i == j { spec.one() } else { spec.zero() })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    } else {
        let m = Mat::from_rows(&spec, &rows);
        if m.rank() != rows.len() {
            return Err(Error::DependentLinearForms);
        }
        m.nullspace()
    };
    if kernel.len() != 5 {
        return Err(Error::DependentLinearForms);
    }
    // kernel columns as the P^4 parametrization
    let k_mat = Mat::from_fn(&spec, n1, 5, |i, j| kernel[j][i].clone());
    let mut members: Vec<Mat> = Vec::new();
    let mut group_ids: Vec<usize> = model
        .forms
        .iter()
        .filter_map(|f| match f.role {
            FormRole::Quadratic { group, .. } => Some(group),
            FormRole::Linear => None,
        })
        .collect();
    group_ids.sort_unstable();
    group_ids.dedup();
    for gid in group_ids {
        let mut chosen: Option<Mat> = None;
        for form in &model.forms {
            let FormRole::Quadratic { group, .. } = form.role else {
                continue;
            };
            if group != gid {
                continue;
            }
            let at_t = form.poly.substitute(0, t0).substitute(1, t1);
            if at_t.is_zero() {
                continue;
            }
            let big = at_t.quadratic_matrix(2)?;
            chosen = Some(big.congruence(&k_mat));
            break;
        }
        match chosen {
            Some(m) => members.push(m),
            None => {
                return Err(Error::DegeneratePencil(
                    "a quadratic group vanishes at the fiber".into(),
                ))
            }
        }
    }
    if members.len() != 2 {
        return Err(Error::DegeneratePencil(
            "fiber does not carry two quadrics".into(),
        ));
    }
    let b = members.pop().unwrap();
    let a = members.pop().unwrap();
    QuadricPencil::new(a, b)
}

// ---------------------------------------------------------------------------
// Discriminant profiles
// ---------------------------------------------------------------------------

/// Fiberwise discriminant of the model, as the chart polynomial at
/// `t1 = 1` plus the vanishing order at infinity.
#[derive(Clone, Debug)]
pub struct DiscriminantProfile {
    /// `Delta(t)` in the chart `t1 = 1`, up to a nonzero constant, with
    /// elimination artifacts stripped.
    pub poly: UniPoly,
    /// Vanishing order at the point at infinity, from the reversed chart.
    pub ord_infinity: usize,
    /// Chart degree plus the order at infinity.
    pub projective_degree: i64,
    /// No repeated roots anywhere on the base, infinity included.
    pub squarefree: bool,
}

/// Symmetric matrix of a quadratic group member with coefficients in the
/// chart polynomial ring: entry `(i, j)` is half (off-diagonal) the
/// coefficient of `x_i x_j`, a polynomial in the chart variable.
fn chart_quadric_matrix(
    form: &MultiPoly,
    spec: &FieldSpec,
    n1: usize,
    swap_chart: bool,
) -> Result<Vec<Vec<UniPoly>>> {
    let half = spec
        .from_ratio(1, 2)
        .map_err(|_| Error::CharacteristicTwo)?;
    let mut out = vec![vec![UniPoly::zero(spec, "t"); n1]; n1];
    for (exp, c) in form.terms() {
        let (e0, e1) = (exp[0] as usize, exp[1] as usize);
        let tdeg = if swap_chart { e1 } else { e0 };
        let support: Vec<usize> = (0..n1).filter(|&i| exp[2 + i] != 0).collect();
        let mono = |coeff: &FieldElement| {
            let mut cs = vec![spec.zero(); tdeg + 1];
            cs[tdeg] = coeff.clone();
            UniPoly::from_coeffs(spec, "t", cs)
        };
        match support.as_slice() {
            [i] if exp[2 + i] == 2 => {
                out[*i][*i] = &out[*i][*i] + &mono(c);
            }
            [i, j] if exp[2 + i] == 1 && exp[2 + j] == 1 => {
                let m = mono(&(&half * c));
                out[*i][*j] = &out[*i][*j] + &m;
                out[*j][*i] = &out[*j][*i] + &m;
            }
            _ => {
                return Err(Error::Unsupported(
                    "form is not quadratic in the second factor".into(),
                ))
            }
        }
    }
    Ok(out)
}

/// The linear forms in the chart, as a matrix of chart polynomials.
fn chart_linear_matrix(
    model: &FibrationModel,
    spec: &FieldSpec,
    swap_chart: bool,
) -> Result<Vec<Vec<UniPoly>>> {
    let n1 = model.ambient_dim() + 1;
    let mut rows = Vec::new();
    for form in &model.forms {
        if form.role != FormRole::Linear {
            continue;
        }
        let mut row = vec![UniPoly::zero(spec, "t"); n1];
        for (exp, c) in form.poly.terms() {
            let tdeg = if swap_chart { exp[1] } else { exp[0] } as usize;
            let xi = (0..n1).find(|&i| exp[2 + i] == 1).unwrap();
            let mut cs = vec![spec.zero(); tdeg + 1];
            cs[tdeg] = c.clone();
            row[xi] = &row[xi] + &UniPoly::from_coeffs(spec, "t", cs);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Polynomial kernel basis of the chart linear system by Cramer's rule on
/// the lexicographically first maximal minor, together with that minor.
fn polynomial_kernel(
    rows: &[Vec<UniPoly>],
    spec: &FieldSpec,
    n1: usize,
) -> Result<(Vec<Vec<UniPoly>>, UniPoly)> {
    use crate::algebra::poly::{det_poly_matrix, DetStrategy};
    let r = rows.len();
    if r == 0 {
        let mut basis = Vec::new();
        for j in 0..n1 {
            let mut v = vec![UniPoly::zero(spec, "t"); n1];
            v[j] = UniPoly::from_ints(spec, "t", &[1]);
            basis.push(v);
        }
        return Ok((basis, UniPoly::from_ints(spec, "t", &[1])));
    }
    // first r-subset of columns with nonzero minor, in lexicographic order
    let col_sets = column_subsets(n1, r);
    let mut pivot: Option<(Vec<usize>, UniPoly)> = None;
    for cols in col_sets {
        let sub: Vec<Vec<UniPoly>> = rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let d = det_poly_matrix(&sub, DetStrategy::Auto)?;
        if !d.is_zero() {
            pivot = Some((cols, d));
            break;
        }
    }
    let (cols, minor) = pivot.ok_or(Error::DependentLinearForms)?;
    let free: Vec<usize> = (0..n1).filter(|c| !cols.contains(c)).collect();
    // Cramer solve: for each free column j, the kernel vector has the minor
    // at position j and, at pivot column cols[i], minus the determinant of
    // the pivot block with its i-th column replaced by column j.
    let mut basis = Vec::new();
    for &j in &free {
        let mut v = vec![UniPoly::zero(spec, "t"); n1];
        v[j] = minor.clone();
        for (i, &ci) in cols.iter().enumerate() {
            let sub: Vec<Vec<UniPoly>> = rows
                .iter()
                .map(|row| {
                    cols.iter()
                        .enumerate()
                        .map(|(k, &c)| if k == i { row[j].clone() } else { row[c].clone() })
                        .collect()
                })
                .collect();
            let d = det_poly_matrix(&sub, DetStrategy::Auto)?;
            v[ci] = -&d;
        }
        basis.push(v);
    }
    Ok((basis, minor))
}

fn column_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Discriminant of a binary quintic with polynomial coefficients, computed
/// by evaluation and interpolation in a large enough field.
fn interpolated_chart_discriminant(
    model: &FibrationModel,
    swap_chart: bool,
) -> Result<UniPoly> {
    let spec = model.spec().clone();
    let n1 = model.ambient_dim() + 1;
    let lin_rows = chart_linear_matrix(model, &spec, swap_chart)?;
    let (kernel, minor) = polynomial_kernel(&lin_rows, &spec, n1)?;
    // pencil members over the chart polynomial ring
    let mut members: Vec<Vec<Vec<UniPoly>>> = Vec::new();
    let mut seen_groups = alloc::collections::BTreeSet::new();
    for form in &model.forms {
        let FormRole::Quadratic { group, tag } = form.role else {
            continue;
        };
        if seen_groups.contains(&group) {
            continue;
        }
        // in the chart t1 = 1 use the avatar carrying t1 (a unit there);
        // in the swapped chart use the t0 avatar
        let usable = match tag {
            FormTag::Plain => true,
            FormTag::TimesT1 => !swap_chart,
            FormTag::TimesT0 => swap_chart,
        };
        if !usable {
            continue;
        }
        seen_groups.insert(group);
        let big = chart_quadric_matrix(&form.poly, &spec, n1, swap_chart)?;
        // restrict: K^T M K
        let mut small = vec![vec![UniPoly::zero(&spec, "t"); 5]; 5];
        for (i, ki) in kernel.iter().enumerate() {
            for (j, kj) in kernel.iter().enumerate().skip(i) {
                let mut acc = UniPoly::zero(&spec, "t");
                for (a, ka) in ki.iter().enumerate() {
                    if ka.is_zero() {
                        continue;
                    }
                    for (b, kb) in kj.iter().enumerate() {
                        if big[a][b].is_zero() || kb.is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(ka * &big[a][b]) * kb);
                    }
                }
                small[i][j] = acc.clone();
                small[j][i] = acc;
            }
        }
        members.push(small);
    }
    if members.len() != 2 {
        return Err(Error::DegeneratePencil(
            "chart does not carry two quadratic members".into(),
        ));
    }
    let a = &members[0];
    let b = &members[1];
    // degree bound for the discriminant of det(s0 A(t) + s1 B(t))
    let entry_deg = |m: &Vec<Vec<UniPoly>>| -> usize {
        m.iter()
            .flat_map(|row| row.iter().filter_map(UniPoly::degree))
            .max()
            .unwrap_or(0)
    };
    let da = entry_deg(a);
    let db = entry_deg(b);
    let bound = 20 * (da + db);
    let needed = bound + 1;
    // evaluate in a field with enough points
    let (eval_spec, emb) = if spec.order().unwrap() >= needed as u128 {
        (spec.clone(), None)
    } else {
        let p = spec.characteristic().unwrap();
        let mut rel = 2usize;
        while spec.order().unwrap().pow(rel as u32) < needed as u128 {
            rel += 1;
        }
        let big = FieldSpec::extension_field(p, spec.extension_degree() * rel)?;
        let e = Embedding::new(&spec, &big)?;
        (big, Some(e))
    };
    let lift_poly = |p: &UniPoly| -> UniPoly {
        match &emb {
            None => p.clone(),
            Some(e) => p.map_coeffs(e),
        }
    };
    let mut points = Vec::with_capacity(needed);
    for idx in 0..needed as u128 {
        let tau = eval_spec.element_from_index(idx)?;
        let eval_member = |m: &Vec<Vec<UniPoly>>| -> Mat {
            Mat::from_fn(&eval_spec, 5, 5, |i, j| lift_poly(&m[i][j]).eval(&tau))
        };
        let ma = eval_member(a);
        let mb = eval_member(b);
        // quintic det(u A + B) and its discriminant
        let quintic = {
            let entries: Vec<Vec<UniPoly>> = (0..5)
                .map(|i| {
                    (0..5)
                        .map(|j| {
                            UniPoly::from_coeffs(
                                &eval_spec,
                                "u",
                                vec![mb.at(i, j).clone(), ma.at(i, j).clone()],
                            )
                        })
                        .collect()
                })
                .collect();
            crate::algebra::poly::det_poly_matrix(
                &entries,
                crate::algebra::poly::DetStrategy::Auto,
            )?
        };
        // polynomial discriminant surrogate: the resultant of the two
        // partials is a constant multiple of the discriminant and, unlike
        // the unit-normalized version, stays polynomial in the base point
        let form = BinaryForm::from_unipoly(&quintic, 5);
        let disc = if form.is_zero() {
            eval_spec.zero()
        } else {
            let fs = form.derivative_s();
            let ft = form.derivative_t();
            crate::algebra::poly::resultant_with_degrees(
                &eval_spec,
                fs.coeffs(),
                4,
                ft.coeffs(),
                4,
            )?
        };
        points.push((tau, disc));
    }
    let delta_big = interpolate(&eval_spec, "t", &points);
    let mut delta = match &emb {
        None => delta_big,
        Some(e) => delta_big
            .retract_coeffs(e)
            .ok_or_else(|| Error::Unsupported("discriminant did not descend".into()))?,
    };
    // strip elimination artifacts: remove every irreducible factor shared
    // with the pivot minor
    if minor.degree().unwrap_or(0) > 0 && !delta.is_zero() {
        loop {
            let g = delta.gcd(&minor);
            if g.degree().unwrap_or(0) == 0 {
                break;
            }
            delta = delta.div_exact(&g)?;
        }
    }
    Ok(delta)
}

/// The discriminant profile of a model: chart polynomial, order at
/// infinity, projective degree, and squarefreeness over the whole base.
///
/// Characteristic five is rejected: there both partials of a binary
/// quintic share a common cubic factor (`f_s = t h`, `f_t = -s h`), so the
/// resultant surrogate vanishes identically and no profile exists by this
/// route.
pub fn discriminant_profile(model: &FibrationModel) -> Result<DiscriminantProfile> {
    if model.spec().characteristic() == Some(5) {
        return Err(Error::Unsupported(
            "discriminant profiles of quintic families are unavailable in characteristic five"
                .into(),
        ));
    }
    let delta = interpolated_chart_discriminant(model, false)?;
    let delta_rev = interpolated_chart_discriminant(model, true)?;
    if delta.is_zero() || delta_rev.is_zero() {
        return Err(Error::IdenticallySingularPencil);
    }
    let x = UniPoly::x(model.spec(), "t");
    let mut ord_infinity = 0usize;
    let mut rev = delta_rev.clone();
    while rev.coeff(0).is_zero() && !rev.is_zero() {
        ord_infinity += 1;
        rev = rev.div_exact(&x)?;
    }
    let chart_degree = delta.degree().unwrap_or(0);
    let squarefree_chart = match crate::algebra::poly::squarefree_profile(&delta) {
        Ok(p) => p.is_squarefree(),
        Err(Error::Inseparable) => false,
        Err(e) => return Err(e),
    };
    Ok(DiscriminantProfile {
        poly: delta,
        ord_infinity,
        projective_degree: chart_degree as i64 + ord_infinity as i64,
        squarefree: squarefree_chart && ord_infinity <= 1,
    })
}

// ---------------------------------------------------------------------------
// Distinguished sections of the special models
// ---------------------------------------------------------------------------

/// A constant section verified against every defining form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedConstantSection {
    /// Projective point of the second factor, constant in the base.
    pub point: Vec<FieldElement>,
    /// Relative degree of the extension where the point lives.
    pub ext_degree: usize,
}

#[derive(Clone, Debug)]
pub struct DistinguishedSections {
    pub sections: Vec<VerifiedConstantSection>,
    pub description: String,
}

/// Verify by exact substitution the distinguished constant subfamilies of
/// the special models: every reported point satisfies all defining forms
/// identically in the base coordinates.
pub fn distinguished_sections(model: &FibrationModel) -> Result<DistinguishedSections> {
    let case = model.case();
    if !case.is_special() {
        return Err(Error::InvalidCase(
            "distinguished sections exist for the special height 6/12/14 models".into(),
        ));
    }
    let spec = model.spec().clone();
    let n1 = model.ambient_dim() + 1;
    let blocks = (case.case - 1) as usize;
    let verify = |model: &FibrationModel, point: &[FieldElement]| -> bool {
        for form in model.forms() {
            let mut sub = form.poly.clone();
            for (i, v) in point.iter().enumerate() {
                sub = sub.substitute(2 + i, v);
            }
            if !sub.is_zero() {
                return false;
            }
        }
        true
    };
    match (case.case, case.parity) {
        (5, Parity::Even) => {
            // the canonical section: the trivial-summand coordinate point
            let mut point = vec![spec.zero(); n1];
            point[n1 - 1] = spec.one();
            if !verify(model, &point) {
                return Err(Error::Unsupported(
                    "canonical section fails to satisfy the forms".into(),
                ));
            }
            Ok(DistinguishedSections {
                sections: vec![VerifiedConstantSection {
                    point,
                    ext_degree: 1,
                }],
                description: "canonical section through the trivial summand".into(),
            })
        }
        (4, Parity::Odd) => {
            // the two points of the distinguished line cut by the plain
            // quadric, possibly conjugate over the ground field
            let plain = model
                .forms()
                .iter()
                .find(|f| {
                    matches!(
                        f.role,
                        FormRole::Quadratic {
                            tag: FormTag::Plain,
                            ..
                        }
                    )
                })
                .ok_or_else(|| Error::InvalidCase("height 14 model lacks its quadric".into()))?;
            // restrict to the line x0 = .. = x5 = 0
            let mut restricted = plain.poly.clone();
            for i in 0..2 * blocks {
                restricted = restricted.substitute(2 + i, &spec.zero());
            }
            // binary quadratic in the last two coordinates
            let u = 2 * blocks;
            let v = 2 * blocks + 1;
            let coeff = |eu: u32, ev: u32| {
                let mut exp = vec![0u32; n1 + 2];
                exp[2 + u] = eu;
                exp[2 + v] = ev;
                restricted.coeff(&exp)
            };
            let quad = BinaryForm::from_coeffs(&spec, vec![coeff(0, 2), coeff(1, 1), coeff(2, 0)]);
            let chart = quad.chart_t("y");
            let mut sections = Vec::new();
            fn record(
                sections: &mut Vec<VerifiedConstantSection>,
                verify: &dyn Fn(&FibrationModel, &[FieldElement]) -> bool,
                root: &FieldElement,
                one: &FieldElement,
                ext: usize,
                model: &FibrationModel,
                n1: usize,
                u: usize,
                v: usize,
            ) {
                let zspec = root.spec().clone();
                let mut point = vec![zspec.zero(); n1];
                point[u] = root.clone();
                point[v] = one.clone();
                if verify(model, &point) {
                    sections.push(VerifiedConstantSection {
                        point,
                        ext_degree: ext,
                    });
                }
            }
            let base_roots = crate::algebra::poly::roots_in_field(&chart)?;
            for r in &base_roots {
                record(&mut sections, &verify, r, &spec.one(), 1, model, n1, u, v);
            }
            // root at infinity: [1 : 0]
            if quad.coeffs()[2].is_zero() {
                let mut point = vec![spec.zero(); n1];
                point[u] = spec.one();
                if verify(model, &point) {
                    sections.push(VerifiedConstantSection {
                        point,
                        ext_degree: 1,
                    });
                }
            }
            if sections.len() < 2 {
                // conjugate pair: pass to the quadratic extension
                let (_, emb, roots) = crate::algebra::poly::roots_in_extension(&chart, 2)?;
                let lifted = model.map_coeffs(&emb);
                let one = emb.dst().one();
                sections.clear();
                for r in &roots {
                    record(&mut sections, &verify, r, &one, 2, &lifted, n1, u, v);
                }
            }
            Ok(DistinguishedSections {
                sections,
                description: "the two points of the distinguished line on the quadric".into(),
            })
        }
        (3, Parity::Odd) => {
            // every rational point of the conic (plane cap quadric) gives a
            // constant section
            let plain = model
                .forms()
                .iter()
                .find(|f| {
                    matches!(
                        f.role,
                        FormRole::Quadratic {
                            tag: FormTag::Plain,
                            ..
                        }
                    )
                })
                .ok_or_else(|| Error::InvalidCase("height 6 model lacks its quadric".into()))?;
            let mut restricted = plain.poly.clone();
            for i in 0..2 * blocks {
                restricted = restricted.substitute(2 + i, &spec.zero());
            }
            let mut sections = Vec::new();
            for pt in crate::pencil::projective_points(&spec, 2)? {
                let mut point = vec![spec.zero(); n1];
                point[2 * blocks] = pt[0].clone();
                point[2 * blocks + 1] = pt[1].clone();
                point[2 * blocks + 2] = pt[2].clone();
                let mut sub = restricted.clone();
                for (i, val) in point.iter().enumerate() {
                    sub = sub.substitute(2 + i, val);
                }
                if sub.is_zero() && verify(model, &point) {
                    sections.push(VerifiedConstantSection {
                        point,
                        ext_degree: 1,
                    });
                }
            }
            Ok(DistinguishedSections {
                sections,
                description: "rational points of the distinguished conic".into(),
            })
        }
        _ => Err(Error::InvalidCase("not a special model".into())),
    }
}

// ---------------------------------------------------------------------------
// Counting formulas
// ---------------------------------------------------------------------------

/// Expected dimension of the space of degree-`ambient_poly_deg` surfaces in
/// three-space through a curve of the given degree and genus:
/// `C(d + 3, 3) - (d deg + 1 - genus)`.
pub fn rr_quartic_count(deg: i64, genus: i64, ambient_poly_deg: i64) -> i64 {
    binom_poly(ambient_poly_deg + 3, 3) - (ambient_poly_deg * deg + 1 - genus)
}

/// Secancy and parameter count for degree-`d` sections of the height-10
/// blowup model: `(2d - 1, d + 1)`, with no secancy constraint at `d = 0`.
pub fn section_count_table(d: i64) -> (Option<i64>, i64) {
    if d == 0 {
        (None, 1)
    } else {
        (Some(2 * d - 1), d + 1)
    }
}

/// One row of the high-height comparison: the anticanonical image is a
/// Fano threefold with `2^(m+1)` nodes, against the `(3/2)h - 1` parameter
/// count of the fibrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighHeightRow {
    pub height: i64,
    pub contracted_sections: i64,
    /// Dimension of the family of nodal images, when a count is available.
    pub variety_dim: Option<i64>,
    /// `(3/2) h - 1`.
    pub fibration_dim: i64,
}

/// The heights 14 to 20: contracted-section counts and the
/// expected-dimension comparison, including the height-20 discrepancy
/// (30 against 29).
pub fn expected_dims_high_height() -> Vec<HighHeightRow> {
    let mut rows = Vec::new();
    for m in 0..=3i64 {
        let h = 14 + 2 * m;
        let variety_dim = match h {
            16 => {
                // triples of quadrics in P^6 modulo projectivities, minus
                // one condition per node
                let gr = 3 * (binom_poly(8, 2) - 3); // dim Gr(3, 28)
                Some(gr - 48 - 4)
            }
            18 => {
                // quadric and cubic in P^5 modulo projectivities, cubic
                // taken modulo multiples of the quadric, minus 8 nodes
                let quadrics = binom_poly(7, 5) - 1;
                let cubics = binom_poly(8, 5) - binom_poly(6, 5) - 1;
                Some(quadrics + cubics - 35 - 8)
            }
            20 => {
                // quartic threefolds in P^4 modulo projectivities; the 16
                // nodes impose only 15 independent conditions
                Some((binom_poly(8, 4) - 1) - 24 - 15)
            }
            _ => None,
        };
        rows.push(HighHeightRow {
            height: h,
            contracted_sections: 1 << (m + 1),
            variety_dim,
            fibration_dim: 3 * h / 2 - 1,
        });
    }
    rows
}

/// Parameter counts of the height-two construction: the space of forms
/// singular along the distinguished section (dimension 10, so 9 parameters)
/// and the space of forms through it (dimension 24, minus one for scaling
/// and two for the stabilizer: 21).
pub fn height_two_parameter_pieces() -> (i64, i64) {
    let v = SplittingType::new(vec![1, 1, 1, 1, 0]);
    let d_parameters = v.sym2().twist(-2).h0() - 1;
    let dprime_parameters = v.sym2().twist(-1).h0() - 1 - 2;
    (d_parameters, dprime_parameters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_calculus_examples() {
        let v3 = SplittingType::new(vec![1, 1, 0, 0, 0]);
        assert_eq!(v3.sym2().twist(-1).h0(), 12);
        let v4 = SplittingType::new(vec![1, 1, 1, 0, 0]);
        assert_eq!(v4.sym2().twist(-1).h0(), 18);
        let v5 = SplittingType::new(vec![1, 1, 1, 1, 0]);
        assert_eq!(v5.sym2().twist(-1).h0(), 24);
        assert_eq!(v5.sym2().twist(-2).h0(), 10);
        assert_eq!(height_two_parameter_pieces(), (9, 21));
    }

    #[test]
    fn height_from_splitting_examples() {
        assert_eq!(
            height_from_splitting(&SplittingType::new(vec![-2; 5])).unwrap(),
            20
        );
        assert_eq!(
            height_from_splitting(&SplittingType::new(vec![0; 5])).unwrap(),
            0
        );
        assert_eq!(
            height_from_splitting(&SplittingType::new(vec![-1; 5])).unwrap(),
            10
        );
        assert!(height_from_splitting(&SplittingType::new(vec![1, 2])).is_err());
    }

    #[test]
    fn numerology_identities() {
        let r = numerology(20, 2).unwrap();
        assert_eq!(r.singular_fibers, 40);
        assert_eq!(r.euler, -24);
        assert_eq!(r.chi_omega1, 13);
        assert_eq!(r.parameters, 29);
        assert_eq!(r.h12, 15);
        let r0 = numerology(0, 2).unwrap();
        assert_eq!(r0.singular_fibers, 0);
        assert_eq!(r0.euler, 16);
        assert_eq!(r0.parameters, -1);
        let r12 = numerology(12, 2).unwrap();
        assert_eq!(r12.singular_fibers, 24);
        assert_eq!(r12.euler, -8);
        assert_eq!(r12.h12, 7);
        assert!(numerology(13, 2).is_err());
        assert!(numerology(-2, 2).is_err());
    }

    #[test]
    fn case_table_matches_closed_forms() {
        // (case, parity) -> (V twists, degree at n, height at n)
        let checks: [(u8, Parity, [i64; 5], i64, i64); 3] = [
            (3, Parity::Even, [0, 0, 0, 1, 1], -8, 16),
            (5, Parity::Even, [0, 1, 1, 1, 1], -16, 32),
            (4, Parity::Odd, [0, 0, 1, 1, 1], -17, 34),
        ];
        for (case, parity, v, deg0, h0) in checks {
            for n in 0..4i64 {
                let c = CaseSpec::new(case, parity, n).unwrap();
                let row = case_splitting(&c).unwrap();
                assert_eq!(row.v, SplittingType::new(v.to_vec()));
                assert_eq!(row.degree, deg0 - 10 * n);
                assert_eq!(row.height, h0 + 20 * n);
                assert_eq!(row.height, closed_form_height(&c));
                assert_eq!(row.height, -2 * row.degree);
            }
        }
        // all eight pairs, heights in [0, 60], against the closed forms and
        // the numerology identities
        for case in 1..=5u8 {
            for parity in [Parity::Even, Parity::Odd] {
                for n in -2..=3i64 {
                    let c = CaseSpec { case, parity, n };
                    let h = closed_form_height(&c);
                    if !(0..=60).contains(&h) {
                        continue;
                    }
                    let row = case_splitting(&c).unwrap();
                    assert_eq!(row.height, h);
                    assert_eq!(height_from_splitting(&row.w).unwrap(), h);
                    let rep = numerology(h, 2).unwrap();
                    assert_eq!(rep.singular_fibers, 2 * h);
                    assert_eq!(rep.euler, 16 - 2 * h);
                    assert_eq!(rep.chi_omega1, h - 7);
                    assert_eq!(rep.parameters, 3 * h / 2 - 1);
                    assert_eq!(rep.h12, h + rep.h11 - 7);
                }
            }
        }
    }

    #[test]
    fn chi_formulas_and_bott_kunneth_oracle() {
        assert_eq!(chi_op(0, 0), 1);
        assert_eq!(chi_op(1, 2), 30);
        // independent route: Bott-style cohomology of each factor assembled
        // over the product
        let chi_p1 = |x: i64| -> i64 {
            let h0 = 0.max(x + 1);
            let h1 = 0.max(-x - 1);
            h0 - h1
        };
        let chi_p4 = |y: i64| -> i64 {
            if y >= 0 {
                binom_poly(y + 4, 4)
            } else if y <= -5 {
                binom_poly(-y - 1, 4)
            } else {
                0
            }
        };
        let chi_omega1_p4 = |y: i64| 5 * chi_p4(y - 1) - chi_p4(y);
        let oracle_op = |a: i64, b: i64| chi_p1(a) * chi_p4(b);
        let oracle_omega = |a: i64, b: i64| chi_p1(a - 2) * chi_p4(b) + chi_p1(a) * chi_omega1_p4(b);
        use rand_core::RngCore;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(8);
        for _ in 0..20 {
            let a = (rng.next_u64() % 13) as i64 - 6;
            let b = (rng.next_u64() % 13) as i64 - 6;
            assert_eq!(chi_op(a, b), oracle_op(a, b), "chi(O({a},{b}))");
            assert_eq!(chi_omega1_p(a, b), oracle_omega(a, b), "chi(Omega^1({a},{b}))");
        }
    }

    #[test]
    fn koszul_route_matches_closed_forms() {
        for n in 1..=5i64 {
            let (chi_omega1, chi_x, h2) = chi_via_koszul(n).unwrap();
            assert_eq!(chi_omega1, -7 + 20 * n);
            assert_eq!(chi_x, 16 - 40 * n);
            assert_eq!(h2, -5 + 20 * n);
            let rep = numerology(20 * n, 2).unwrap();
            assert_eq!(chi_omega1, rep.chi_omega1);
            assert_eq!(chi_x, rep.euler);
            assert_eq!(h2, rep.chi_omega1 + 2);
        }
        assert_eq!(chi_via_koszul(2).unwrap(), (33, -64, 35));
    }

    #[test]
    fn rr_and_section_count_formulas() {
        assert_eq!(rr_quartic_count(12, 15, 4), 1);
        assert_eq!(rr_quartic_count(13, 20, 4), 2);
        assert_eq!(rr_quartic_count(12, 17, 4), 3);
        assert_eq!(rr_quartic_count(14, 23, 4), 35 - 34);
        assert_eq!(rr_quartic_count(6, 0, 3), 1);
        assert_eq!(section_count_table(1), (Some(1), 2));
        assert_eq!(section_count_table(4), (Some(7), 5));
        assert_eq!(section_count_table(0), (None, 1));
        assert_eq!(section_count_table(10), (Some(19), 11));
    }

    #[test]
    fn high_height_dimension_table() {
        let rows = expected_dims_high_height();
        assert_eq!(rows.len(), 4);
        assert_eq!(
            rows.iter().map(|r| r.contracted_sections).collect::<Vec<_>>(),
            vec![2, 4, 8, 16]
        );
        let by_height = |h: i64| rows.iter().find(|r| r.height == h).unwrap();
        assert_eq!(by_height(16).variety_dim, Some(23));
        assert_eq!(by_height(16).fibration_dim, 23);
        assert_eq!(by_height(18).variety_dim, Some(26));
        assert_eq!(by_height(18).fibration_dim, 26);
        assert_eq!(by_height(20).variety_dim, Some(30));
        assert_eq!(by_height(20).fibration_dim, 29);
        assert_eq!(by_height(14).fibration_dim, 20);
    }

    #[test]
    fn generated_model_is_deterministic_and_shaped() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Even, 1).unwrap();
        let m1 = generate_model(&c, &f, 7).unwrap();
        let m2 = generate_model(&c, &f, 7).unwrap();
        assert_eq!(m1.forms().len(), 2);
        for (a, b) in m1.forms().iter().zip(m2.forms().iter()) {
            assert_eq!(a.poly, b.poly);
            assert_eq!(a.bidegree, (1, 2));
        }
        assert_eq!(m1.alpha(), -2);
        // a case-3 model carries two linear forms
        let c3 = CaseSpec::new(3, Parity::Even, 0).unwrap();
        let m3 = generate_model(&c3, &f, 11).unwrap();
        assert_eq!(
            m3.forms()
                .iter()
                .filter(|f| f.role == FormRole::Linear)
                .count(),
            2
        );
    }

    #[test]
    fn fiber_of_case_one_is_direct_substitution() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Even, 1).unwrap();
        let m = generate_model(&c, &f, 7).unwrap();
        let fiber = fiber_at(&m, &f.from_int(3), &f.one()).unwrap();
        // fiber forms agree with substituting the point into the forms
        for (form, mat) in m.forms().iter().zip([fiber.a(), fiber.b()]) {
            let sub = form
                .poly
                .substitute(0, &f.from_int(3))
                .substitute(1, &f.one());
            assert_eq!(&sub.quadratic_matrix(2).unwrap(), mat);
        }
    }

    #[test]
    fn discriminant_degree_forty_for_height_twenty_models() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Even, 1).unwrap();
        let m = generate_model(&c, &f, 7).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 40);
        assert!(prof.squarefree);
    }

    #[test]
    fn constant_family_has_constant_discriminant() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Even, 0).unwrap();
        let m = generate_model(&c, &f, 5).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 0);
        assert_eq!(prof.poly.degree(), Some(0));
        // identical fibers everywhere
        let f0 = fiber_at(&m, &f.zero(), &f.one()).unwrap();
        let f1 = fiber_at(&m, &f.from_int(9), &f.one()).unwrap();
        assert_eq!(f0, f1);
    }

    #[test]
    fn height_ten_models_have_degree_twenty_discriminant() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Odd, 0).unwrap();
        let m = generate_model(&c, &f, 3).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 20);
        assert!(prof.squarefree);
    }

    #[test]
    fn eliminated_case_discriminant_matches_height() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(2, Parity::Even, 0).unwrap();
        let m = generate_model(&c, &f, 1).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        assert_eq!(prof.projective_degree, 16);
        assert!(prof.squarefree);
        // generic fiber is a smooth quartic del Pezzo surface
        let fiber = fiber_at(&m, &f.from_int(4), &f.one()).unwrap();
        let verdict = crate::pencil::classify_stability(&fiber).unwrap();
        assert_eq!(verdict.status, crate::pencil::StabilityStatus::Stable);
    }

    #[test]
    fn nodal_fiber_at_discriminant_root() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c = CaseSpec::new(1, Parity::Even, 1).unwrap();
        let m = generate_model(&c, &f, 7).unwrap();
        let prof = discriminant_profile(&m).unwrap();
        let roots = crate::algebra::poly::roots_in_field(&prof.poly).unwrap();
        let mut checked = 0;
        for r in roots.iter().take(3) {
            let fiber = fiber_at(&m, r, &f.one()).unwrap();
            assert!(crate::pencil::at_worst_one_ordinary_node(&fiber).unwrap());
            let pts = crate::pencil::singular_points(&fiber, 3).unwrap();
            assert_eq!(pts.len(), 1, "exactly one node at a simple root");
            assert!(pts[0].ordinary);
            checked += 1;
        }
        // generic fibers are smooth
        let mut tau = f.from_int(1);
        while roots.contains(&tau) {
            tau = &tau + &f.one();
        }
        let fiber = fiber_at(&m, &tau, &f.one()).unwrap();
        assert!(crate::pencil::singular_points(&fiber, 2).unwrap().is_empty());
        assert!(checked > 0 || roots.is_empty());
    }

    #[test]
    fn special_models_have_distinguished_sections() {
        let f = FieldSpec::prime_field(11).unwrap();
        // height 12: the canonical section
        let c5 = CaseSpec::new(5, Parity::Even, -1).unwrap();
        let m5 = generate_model(&c5, &f, 2).unwrap();
        assert_eq!(m5.height(), 12);
        let d5 = distinguished_sections(&m5).unwrap();
        assert_eq!(d5.sections.len(), 1);
        let point = &d5.sections[0].point;
        assert!(point[..8].iter().all(FieldElement::is_zero));
        assert!(point[8].is_one());

        // height 14: both points of the line on the quadric
        let c4 = CaseSpec::new(4, Parity::Odd, -1).unwrap();
        let m4 = generate_model(&c4, &f, 2).unwrap();
        assert_eq!(m4.height(), 14);
        let d4 = distinguished_sections(&m4).unwrap();
        assert_eq!(d4.sections.len(), 2);

        // height 6: all rational points of the distinguished conic
        let c3 = CaseSpec::new(3, Parity::Odd, -1).unwrap();
        let m3 = generate_model(&c3, &f, 2).unwrap();
        assert_eq!(m3.height(), 6);
        let d3 = distinguished_sections(&m3).unwrap();
        assert!(!d3.sections.is_empty());
        for s in &d3.sections {
            assert!(s.point[..4].iter().all(FieldElement::is_zero));
        }
    }

    #[test]
    fn quadratic_forms_of_height_twelve_model_vanish_on_the_section() {
        let f = FieldSpec::prime_field(101).unwrap();
        let c5 = CaseSpec::new(5, Parity::Even, -1).unwrap();
        let m5 = generate_model(&c5, &f, 9).unwrap();
        // substituting the distinguished point kills every quadratic form
        for form in m5.forms() {
            if form.role == FormRole::Linear {
                continue;
            }
            let mut sub = form.poly.clone();
            for i in 0..8 {
                sub = sub.substitute(2 + i, &f.zero());
            }
            sub = sub.substitute(2 + 8, &f.one());
            assert!(sub.is_zero());
        }
    }

}
