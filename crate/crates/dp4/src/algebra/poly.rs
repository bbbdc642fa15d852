//! Univariate polynomials and binary forms over a [`FieldSpec`]:
//! resultants, discriminants, squarefree multiplicity profiles, root
//! finding over the field and its extensions, interpolation, and exact
//! determinants of polynomial matrices.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::hash::{Hash, Hasher};
use core::ops::{Add, Mul, Neg, Sub};

use crate::algebra::field::{Embedding, FieldElement, FieldSpec};
use crate::algebra::matrix::Mat;
use crate::error::{Error, Result};

/// Dense univariate polynomial.  The coefficient vector never has a zero
/// leading entry; the zero polynomial is the empty vector.  The variable
/// name is display metadata only: equality is coefficientwise.
#[derive(Clone)]
pub struct UniPoly {
    spec: FieldSpec,
    var: String,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for UniPoly {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.coeffs == other.coeffs
    }
}

impl Eq for UniPoly {}

impl Hash for UniPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then coefficients from the top down.
impl Ord for UniPoly {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c:?}")?,
                1 => write!(f, "{c:?}*{}", self.var)?,
                _ => write!(f, "{c:?}*{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}

impl UniPoly {
    pub fn zero(spec: &FieldSpec, var: &str) -> UniPoly {
        UniPoly {
            spec: spec.clone(),
            var: var.into(),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(spec: &FieldSpec, var: &str, c: FieldElement) -> UniPoly {
        UniPoly::from_coeffs(spec, var, vec![c])
    }

    /// The variable itself.
    pub fn x(spec: &FieldSpec, var: &str) -> UniPoly {
        UniPoly::from_coeffs(spec, var, vec![spec.zero(), spec.one()])
    }

    pub fn from_coeffs(spec: &FieldSpec, var: &str, mut coeffs: Vec<FieldElement>) -> UniPoly {
        for c in &coeffs {
            assert!(c.spec() == spec, "coefficient from a different field");
        }
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            spec: spec.clone(),
            var: var.into(),
            coeffs,
        }
    }

    pub fn from_ints(spec: &FieldSpec, var: &str, coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(
            spec,
            var,
            coeffs.iter().map(|&c| spec.from_int(c)).collect(),
        )
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.spec.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero(&self.spec, &self.var);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &self.spec.from_int(i as i64) * c)
            .collect();
        UniPoly::from_coeffs(&self.spec, &self.var, coeffs)
    }

    pub fn scale(&self, c: &FieldElement) -> UniPoly {
        UniPoly::from_coeffs(
            &self.spec,
            &self.var,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Quotient and remainder; error on zero divisor.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        assert!(self.spec == d.spec, "mixed fields");
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return Ok((UniPoly::zero(&self.spec, &self.var), self.clone()));
        }
        let mut quot = vec![self.spec.zero(); rem.len() - dd];
        while rem.len() >= dd + 1 {
            let c = rem.last().unwrap() * &lead_inv;
            let shift = rem.len() - 1 - dd;
            if !c.is_zero() {
                quot[shift] = c.clone();
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[shift + i] = &rem[shift + i] - &(&c * dc);
                }
            }
            rem.pop();
            while rem.last().is_some_and(FieldElement::is_zero) {
                rem.pop();
            }
            if rem.len() < dd + 1 {
                break;
            }
        }
        Ok((
            UniPoly::from_coeffs(&self.spec, &self.var, quot),
            UniPoly::from_coeffs(&self.spec, &self.var, rem),
        ))
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, d: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Unsupported("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut acc = UniPoly::constant(&self.spec, &self.var, self.spec.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `self(other)`.
    pub fn compose(&self, other: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(&self.spec, &other.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &UniPoly::constant(&self.spec, &other.var, c.clone());
        }
        acc
    }

    /// Coefficient reversal at a declared degree: `x^d * p(1/x)`.
    pub fn reverse(&self, declared_degree: usize) -> UniPoly {
        let mut coeffs = vec![self.spec.zero(); declared_degree + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= declared_degree, "declared degree too small");
            coeffs[declared_degree - i] = c.clone();
        }
        UniPoly::from_coeffs(&self.spec, &self.var, coeffs)
    }

    /// Map coefficients through a field embedding.
    pub fn map_coeffs(&self, emb: &Embedding) -> UniPoly {
        UniPoly::from_coeffs(
            emb.dst(),
            &self.var,
            self.coeffs.iter().map(|c| emb.apply(c)).collect(),
        )
    }

    /// Retract coefficients along an embedding, if all of them descend.
    pub fn retract_coeffs(&self, emb: &Embedding) -> Option<UniPoly> {
        let coeffs: Option<Vec<_>> = self.coeffs.iter().map(|c| emb.retract(c)).collect();
        Some(UniPoly::from_coeffs(emb.src(), &self.var, coeffs?))
    }

    fn mulmod(&self, other: &UniPoly, m: &UniPoly) -> UniPoly {
        let (_, r) = (self * other).divrem(m).unwrap();
        r
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::constant(&self.spec, &self.var, self.spec.one());
        let (_, mut base) = self.divrem(m).unwrap();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        acc
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        assert!(self.spec == rhs.spec, "mixed fields");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(&self.spec, &self.var, coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        assert!(self.spec == rhs.spec, "mixed fields");
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(&self.spec, &self.var, coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        assert!(self.spec == rhs.spec, "mixed fields");
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.spec, &self.var);
        }
        let mut coeffs = vec![self.spec.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(&self.spec, &self.var, coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(
            &self.spec,
            &self.var,
            self.coeffs.iter().map(|c| -c).collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Resultants and multiplicity profiles
// ---------------------------------------------------------------------------

/// Sylvester-matrix resultant.  Zero when either polynomial is zero (shared
/// root by convention); error when both are.
pub fn resultant(f: &UniPoly, g: &UniPoly) -> Result<FieldElement> {
    if f.spec() != g.spec() {
        return Err(Error::MixedFields);
    }
    if f.is_zero() && g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_zero() || g.is_zero() {
        return Ok(f.spec().zero());
    }
    resultant_with_degrees(
        f.spec(),
        f.coeffs(),
        f.degree().unwrap(),
        g.coeffs(),
        g.degree().unwrap(),
    )
}

/// Resultant with declared degrees: the Sylvester determinant built as if
/// `f` had degree `m` and `g` degree `n` (vanishing top coefficients encode
/// roots at infinity for binary forms).
pub fn resultant_with_degrees(
    spec: &FieldSpec,
    f: &[FieldElement],
    m: usize,
    g: &[FieldElement],
    n: usize,
) -> Result<FieldElement> {
    let coeff = |v: &[FieldElement], i: usize| -> FieldElement {
        v.get(i).cloned().unwrap_or_else(|| spec.zero())
    };
    if m == 0 && n == 0 {
        return Ok(spec.one());
    }
    if m == 0 {
        return coeff(f, 0).pow(n as i128);
    }
    if n == 0 {
        return coeff(g, 0).pow(m as i128);
    }
    let size = m + n;
    let mut mat = Mat::zeros(spec, size, size);
    for row in 0..n {
        for i in 0..=m {
            mat.set(row, row + i, coeff(f, m - i));
        }
    }
    for row in 0..m {
        for i in 0..=n {
            mat.set(n + row, row + i, coeff(g, n - i));
        }
    }
    Ok(mat.det())
}

/// Squarefree multiplicity profile: for each multiplicity `m`, the degree of
/// the (squarefree) product of irreducible factors occurring exactly `m`
/// times.  Entries are sorted by multiplicity, largest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub factors: Vec<(usize, usize)>,
}

impl MultiplicityProfile {
    /// Root multiplicities over the algebraic closure, largest first.
    pub fn partition(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &(deg, mult) in &self.factors {
            for _ in 0..deg {
                out.push(mult);
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    pub fn max_multiplicity(&self) -> usize {
        self.factors.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|&(d, m)| d * m).sum()
    }
}

/// Multiplicity profile via repeated gcd with the derivative.
///
/// Errors with [`Error::Inseparable`] when an inseparable (p-th power) part
/// is detected, which cannot happen for degree <= 5 when p > 5.
pub fn squarefree_profile(f: &UniPoly) -> Result<MultiplicityProfile> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(MultiplicityProfile {
            factors: Vec::new(),
        });
    }
    let fm = f.monic();
    let deriv = fm.derivative();
    if deriv.is_zero() {
        return Err(Error::Inseparable);
    }
    let mut cof = fm.gcd(&deriv);
    if cof.degree() == fm.degree() {
        return Err(Error::Inseparable);
    }
    let mut window = fm.div_exact(&cof)?;
    let mut factors = Vec::new();
    let mut mult = 1usize;
    while window.degree().unwrap_or(0) > 0 {
        let deeper = window.gcd(&cof);
        let exactly = window.div_exact(&deeper)?;
        if exactly.degree().unwrap_or(0) > 0 {
            factors.push((exactly.degree().unwrap(), mult));
        }
        cof = cof.div_exact(&deeper)?;
        window = deeper;
        mult += 1;
    }
    if cof.degree().unwrap_or(0) > 0 {
        return Err(Error::Inseparable);
    }
    factors.sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
    Ok(MultiplicityProfile { factors })
}

// ---------------------------------------------------------------------------
// Root finding over finite fields and their extensions
// ---------------------------------------------------------------------------

const ROOT_SCAN_LIMIT: u128 = 1 << 13;

/// All roots of `f` in its (finite) coefficient field, canonically sorted.
pub fn roots_in_field(f: &UniPoly) -> Result<Vec<FieldElement>> {
    let spec = f.spec().clone();
    let q = spec.order().ok_or(Error::RequiresFiniteField)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == Some(0) {
        return Ok(Vec::new());
    }
    // product of the distinct linear factors: gcd(f, x^q - x)
    let x = UniPoly::x(&spec, f.var());
    let xq = x.pow_mod(q, f);
    let lin = f.gcd(&(&xq - &x));
    let deg = match lin.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let mut roots = Vec::with_capacity(deg);
    if q <= ROOT_SCAN_LIMIT {
        for e in spec.elements()? {
            if lin.eval(&e).is_zero() {
                roots.push(e);
            }
        }
    } else {
        split_equal_degree_one(&lin, &mut roots);
    }
    roots.sort();
    Ok(roots)
}

/// Cantor-Zassenhaus splitting of a product of distinct linear factors,
/// derandomized by walking shifts in canonical element order.
fn split_equal_degree_one(h: &UniPoly, out: &mut Vec<FieldElement>) {
    let spec = h.spec().clone();
    match h.degree() {
        None | Some(0) => return,
        Some(1) => {
            let root = -&(&h.coeff(0) * &h.coeff(1).inv().unwrap());
            out.push(root);
            return;
        }
        _ => {}
    }
    let q = spec.order().unwrap();
    let exp = (q - 1) / 2;
    let x = UniPoly::x(&spec, h.var());
    for idx in 0..q {
        let delta = spec.element_from_index(idx).unwrap();
        let shifted = &x + &UniPoly::constant(&spec, h.var(), delta);
        let w = shifted.pow_mod(exp, h);
        let w1 = &w - &UniPoly::constant(&spec, h.var(), spec.one());
        let g = h.gcd(&w1);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < h.degree().unwrap() {
            let rest = h.div_exact(&g).unwrap();
            split_equal_degree_one(&g, out);
            split_equal_degree_one(&rest, out);
            return;
        }
    }
    unreachable!("splitting shift must exist for a split squarefree product");
}

/// Degrees of the irreducible factors (distinct-degree factorization of the
/// radical): returns (degree, how many factors of that degree).
pub fn irreducible_factor_degrees(f: &UniPoly) -> Result<Vec<(usize, usize)>> {
    let spec = f.spec().clone();
    let q = spec.order().ok_or(Error::RequiresFiniteField)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let deriv = f.derivative();
    let mut rad = if deriv.is_zero() {
        f.monic()
    } else {
        f.div_exact(&f.gcd(&deriv))?.monic()
    };
    let x = UniPoly::x(&spec, f.var());
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0usize;
    while rad.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > rad.degree().unwrap() {
            out.push((rad.degree().unwrap(), 1));
            break;
        }
        h = h.pow_mod(q, &rad);
        let g = rad.gcd(&(&h - &x));
        let dg = g.degree().unwrap_or(0);
        if dg > 0 {
            out.push((d, dg / d));
            rad = rad.div_exact(&g)?;
            let (_, hr) = h.divrem(&rad)?;
            h = hr;
        }
    }
    Ok(out)
}

/// Least common multiple of the irreducible factor degrees: the degree of
/// the smallest extension over which `f` splits completely.
pub fn splitting_degree(f: &UniPoly) -> Result<usize> {
    let degs = irreducible_factor_degrees(f)?;
    let mut l = 1usize;
    for (d, _) in degs {
        l = lcm(l, d);
    }
    Ok(l)
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd_usize(a, b) * b
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// Roots of `f` over the degree-`rel_k` extension of its coefficient field.
/// Returns the extension, the embedding, and the sorted roots up there.
pub fn roots_in_extension(
    f: &UniPoly,
    rel_k: usize,
) -> Result<(FieldSpec, Embedding, Vec<FieldElement>)> {
    let spec = f.spec();
    let p = spec.characteristic().ok_or(Error::RequiresFiniteField)?;
    let big = FieldSpec::extension_field(p, spec.extension_degree() * rel_k)?;
    let emb = Embedding::new(spec, &big)?;
    let lifted = f.map_coeffs(&emb);
    let roots = roots_in_field(&lifted)?;
    Ok((big, emb, roots))
}

/// Smallest root (canonical order) in `dst` of a polynomial given by
/// integer coefficients mod p; used to build field embeddings.
pub fn smallest_root_of_fp_poly(coeffs: &[u64], dst: &FieldSpec) -> Result<FieldElement> {
    let poly = UniPoly::from_coeffs(
        dst,
        "x",
        coeffs.iter().map(|&c| dst.from_int(c as i64)).collect(),
    );
    let roots = roots_in_field(&poly)?;
    roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::Unsupported("polynomial has no root in target field".into()))
}

// ---------------------------------------------------------------------------
// Interpolation and polynomial-matrix determinants
// ---------------------------------------------------------------------------

/// Newton interpolation through distinct nodes.
pub fn interpolate(
    spec: &FieldSpec,
    var: &str,
    points: &[(FieldElement, FieldElement)],
) -> UniPoly {
    let n = points.len();
    // divided differences
    let mut table: Vec<FieldElement> = points.iter().map(|(_, y)| y.clone()).collect();
    let mut coeffs = Vec::with_capacity(n);
    if n == 0 {
        return UniPoly::zero(spec, var);
    }
    coeffs.push(table[0].clone());
    for level in 1..n {
        for i in (level..n).rev() {
            let dx = &points[i].0 - &points[i - level].0;
            table[i] = &(&table[i] - &table[i - 1]) * &dx.inv().expect("distinct nodes");
        }
        coeffs.push(table[level].clone());
    }
    // expand the Newton form
    let mut acc = UniPoly::zero(spec, var);
    for i in (0..n).rev() {
        let lin = UniPoly::from_coeffs(spec, var, vec![-&points[i].0, spec.one()]);
        acc = if i + 1 == n {
            UniPoly::constant(spec, var, coeffs[i].clone())
        } else {
            &(&acc * &lin) + &UniPoly::constant(spec, var, coeffs[i].clone())
        };
    }
    acc
}

/// Strategy for [`det_poly_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetStrategy {
    /// Interpolate, moving to an extension when the base field is too
    /// small, falling back to expansion over the rationals.
    Auto,
    /// Interpolate using only points of the coefficient field.
    InterpolateInField,
    /// Cofactor expansion in the polynomial ring.
    Expand,
}

/// Exact determinant of a square matrix of univariate polynomials.
pub fn det_poly_matrix(entries: &[Vec<UniPoly>], strategy: DetStrategy) -> Result<UniPoly> {
    let n = entries.len();
    assert!(n > 0 && entries.iter().all(|r| r.len() == n), "square matrix");
    let spec = entries[0][0].spec().clone();
    let var = entries[0][0].var().to_string();
    // degree bound: sum over rows of the max entry degree
    let mut bound = 0usize;
    for row in entries {
        let row_max = row.iter().filter_map(UniPoly::degree).max();
        match row_max {
            Some(d) => bound += d,
            None => return Ok(UniPoly::zero(&spec, &var)),
        }
    }
    let needed = bound + 1;
    match strategy {
        DetStrategy::Expand => Ok(det_expand(entries, &spec, &var)),
        DetStrategy::InterpolateInField => {
            let avail = spec.order().unwrap_or(u128::MAX);
            if avail < needed as u128 {
                return Err(Error::InsufficientPoints {
                    needed,
                    available: avail,
                });
            }
            det_interpolate_in(entries, &spec, &var, needed)
        }
        DetStrategy::Auto => {
            match spec.order() {
                None => det_interpolate_in(entries, &spec, &var, needed),
                Some(q) if q >= needed as u128 => det_interpolate_in(entries, &spec, &var, needed),
                Some(q) => {
                    // lift to the smallest extension with enough points
                    let mut rel = 2usize;
                    let mut size = q * q;
                    while size < needed as u128 {
                        rel += 1;
                        size *= q;
                    }
                    let p = spec.characteristic().unwrap();
                    let big = FieldSpec::extension_field(p, spec.extension_degree() * rel)?;
                    let emb = Embedding::new(&spec, &big)?;
                    let lifted: Vec<Vec<UniPoly>> = entries
                        .iter()
                        .map(|row| row.iter().map(|e| e.map_coeffs(&emb)).collect())
                        .collect();
                    let det = det_interpolate_in(&lifted, &big, &var, needed)?;
                    det.retract_coeffs(&emb)
                        .ok_or_else(|| Error::Unsupported("determinant did not descend".into()))
                }
            }
        }
    }
}

fn det_interpolate_in(
    entries: &[Vec<UniPoly>],
    spec: &FieldSpec,
    var: &str,
    needed: usize,
) -> Result<UniPoly> {
    let n = entries.len();
    let mut points = Vec::with_capacity(needed);
    for idx in 0..needed as u128 {
        let x = match spec.order() {
            Some(_) => spec.element_from_index(idx)?,
            None => spec.from_int(idx as i64),
        };
        let m = Mat::from_fn(spec, n, n, |i, j| entries[i][j].eval(&x));
        points.push((x, m.det()));
    }
    Ok(interpolate(spec, var, &points))
}

fn det_expand(entries: &[Vec<UniPoly>], spec: &FieldSpec, var: &str) -> UniPoly {
    let n = entries.len();
    if n == 1 {
        return entries[0][0].clone();
    }
    let mut acc = UniPoly::zero(spec, var);
    for (j, e) in entries[0].iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let minor: Vec<Vec<UniPoly>> = entries[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let sub = det_expand(&minor, spec, var);
        let term = e * &sub;
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

// ---------------------------------------------------------------------------
// Binary forms
// ---------------------------------------------------------------------------

/// Homogeneous binary form of pinned degree `d` in `(s, t)`; `coeffs[i]` is
/// the coefficient of `s^i t^(d-i)`.  Leading coefficients may vanish (the
/// form then has roots at `[1:0]`), but the degree stays declared.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    spec: FieldSpec,
    degree: usize,
    coeffs: Vec<FieldElement>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*s^{i}t^{}", self.degree - i)?;
        }
        if first {
            write!(f, "0 (degree {})", self.degree)?;
        }
        Ok(())
    }
}

impl BinaryForm {
    pub fn zero(spec: &FieldSpec, degree: usize) -> BinaryForm {
        BinaryForm {
            spec: spec.clone(),
            degree,
            coeffs: vec![spec.zero(); degree + 1],
        }
    }

    /// `coeffs[i]` multiplies `s^i t^(d-i)`; length must be `d + 1`.
    pub fn from_coeffs(spec: &FieldSpec, coeffs: Vec<FieldElement>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "degree must be >= 0");
        for c in &coeffs {
            assert!(c.spec() == spec, "coefficient from a different field");
        }
        BinaryForm {
            spec: spec.clone(),
            degree: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_ints(spec: &FieldSpec, coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_coeffs(spec, coeffs.iter().map(|&c| spec.from_int(c)).collect())
    }

    /// Homogenize a univariate polynomial (in `s`) to the declared degree.
    pub fn from_unipoly(p: &UniPoly, degree: usize) -> BinaryForm {
        let mut coeffs = vec![p.spec().zero(); degree + 1];
        for (i, c) in p.coeffs().iter().enumerate() {
            assert!(i <= degree, "polynomial degree exceeds declared degree");
            coeffs[i] = c.clone();
        }
        BinaryForm::from_coeffs(p.spec(), coeffs)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn eval(&self, s: &FieldElement, t: &FieldElement) -> FieldElement {
        let mut acc = self.spec.zero();
        let mut spow = self.spec.one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            terms.push(&spow * c);
            spow = &spow * s;
        }
        let mut tpow = self.spec.one();
        for term in terms.into_iter().rev() {
            acc = &acc + &(&term * &tpow);
            tpow = &tpow * t;
        }
        acc
    }

    pub fn derivative_s(&self) -> BinaryForm {
        assert!(self.degree >= 1);
        let coeffs = (1..=self.degree)
            .map(|i| &self.spec.from_int(i as i64) * &self.coeffs[i])
            .collect();
        BinaryForm::from_coeffs(&self.spec, coeffs)
    }

    pub fn derivative_t(&self) -> BinaryForm {
        assert!(self.degree >= 1);
        let coeffs = (0..self.degree)
            .map(|i| &self.spec.from_int((self.degree - i) as i64) * &self.coeffs[i])
            .collect();
        BinaryForm::from_coeffs(&self.spec, coeffs)
    }

    /// Dehomogenize at `t = 1`: the roots of the result are the finite
    /// roots `[s:1]`; the drop in degree counts the root at `[1:0]`.
    pub fn chart_t(&self, var: &str) -> UniPoly {
        UniPoly::from_coeffs(&self.spec, var, self.coeffs.clone())
    }

    /// Dehomogenize at `s = 1`.
    pub fn chart_s(&self, var: &str) -> UniPoly {
        UniPoly::from_coeffs(&self.spec, var, self.coeffs.iter().rev().cloned().collect())
    }

    pub fn scale(&self, c: &FieldElement) -> BinaryForm {
        BinaryForm::from_coeffs(&self.spec, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        assert!(self.spec == other.spec, "mixed fields");
        let d = self.degree + other.degree;
        let mut coeffs = vec![self.spec.zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        BinaryForm::from_coeffs(&self.spec, coeffs)
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert!(self.degree == other.degree, "degree mismatch");
        BinaryForm::from_coeffs(
            &self.spec,
            self.coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &BinaryForm) -> BinaryForm {
        assert!(self.degree == other.degree, "degree mismatch");
        BinaryForm::from_coeffs(
            &self.spec,
            self.coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Substitution by a 2x2 matrix: `(s, t) -> (a s + b t, c s + d t)`.
    pub fn substitute(&self, g: &Mat) -> BinaryForm {
        assert!(g.rows() == 2 && g.cols() == 2);
        let spec = &self.spec;
        let s_new = [g.at(0, 0).clone(), g.at(0, 1).clone()];
        let t_new = [g.at(1, 0).clone(), g.at(1, 1).clone()];
        let mut acc = BinaryForm::zero(spec, self.degree);
        // powers of the two linear forms
        let lin = |l: &[FieldElement; 2]| {
            BinaryForm::from_coeffs(spec, vec![l[1].clone(), l[0].clone()])
        };
        let ls = lin(&s_new);
        let lt = lin(&t_new);
        let mut s_pows = vec![BinaryForm::from_coeffs(spec, vec![spec.one()])];
        let mut t_pows = s_pows.clone();
        for i in 1..=self.degree {
            s_pows.push(s_pows[i - 1].mul(&ls));
            t_pows.push(t_pows[i - 1].mul(&lt));
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = s_pows[i].mul(&t_pows[self.degree - i]).scale(c);
            acc = acc.add(&term);
        }
        acc
    }

    /// Multiplicity profile of the roots on the projective line, combining
    /// the finite chart with the root at infinity.
    pub fn multiplicity_profile(&self) -> Result<MultiplicityProfile> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let finite = self.chart_t("s");
        let at_infinity = self.degree - finite.degree().unwrap_or(0);
        let mut profile = if finite.degree().unwrap_or(0) > 0 {
            squarefree_profile(&finite)?
        } else {
            MultiplicityProfile {
                factors: Vec::new(),
            }
        };
        if at_infinity > 0 {
            profile.factors.push((1, at_infinity));
        }
        profile
            .factors
            .sort_by(|a, b| b.1.cmp(&a.1).then(b.0.cmp(&a.0)));
        Ok(profile)
    }

    pub fn map_coeffs(&self, emb: &Embedding) -> BinaryForm {
        BinaryForm::from_coeffs(emb.dst(), self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }
}

/// Discriminant of a binary form, pinned as
/// `(-1)^(d(d-1)/2) * Res(df/ds, df/dt) / lc` where `lc` is the coefficient
/// of `s^d` when nonzero (no division otherwise).  Only the vanishing locus
/// is contractual: it cuts out the forms with a repeated root on the
/// projective line, valid whenever the characteristic does not divide `d`.
pub fn discriminant_binary(f: &BinaryForm) -> Result<FieldElement> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.degree();
    if d < 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: d,
        });
    }
    let fs = f.derivative_s();
    let ft = f.derivative_t();
    let res = resultant_with_degrees(f.spec(), fs.coeffs(), d - 1, ft.coeffs(), d - 1)?;
    let sign = if (d * (d - 1) / 2) % 2 == 1 {
        -&res
    } else {
        res
    };
    let lc = &f.coeffs()[d];
    if lc.is_zero() {
        Ok(sign)
    } else {
        Ok(&sign * &lc.inv()?)
    }
}
