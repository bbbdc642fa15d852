//! Exact scalars: the rationals and finite fields `F_{p^k}` of odd
//! characteristic.
//!
//! Extension fields use the canonical modulus: the lexicographically
//! smallest monic irreducible of degree `k` over `F_p`, coefficients
//! compared from the constant term upward as integers `0..p-1`.  This makes
//! field towers reproducible across implementations.
//!
//! Elements are canonical by construction (reduced fractions over `Q`,
//! reduced coefficient vectors otherwise), so equality is plain structural
//! equality.  Arithmetic operators panic on mixed fields; fallible
//! operations return [`Result`].

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// ---------------------------------------------------------------------------
// dense F_p[x] helpers, used for modulus search and extension arithmetic
// ---------------------------------------------------------------------------

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(*m.last().unwrap() == 1, "modulus must be monic");
    let mut r: Vec<u64> = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for i in 0..dm {
                let sub = mul_mod(lead, m[i], p);
                let idx = shift + i;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    fp_rem(&fp_mul(a, b, p), m, p)
}

fn fp_powmod(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mulmod(&acc, &b, m, p);
        }
        b = fp_mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        // make b monic so fp_rem applies
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = pow_mod(lead, p - 2, p);
            for c in b.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Extended Euclid: returns (g, u) with u*a = g mod m, g = gcd(a, m) monic.
fn fp_half_xgcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    let mut u0: Vec<u64> = Vec::new();
    let mut u1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // divide r0 by r1
        let lead = *r1.last().unwrap();
        let inv = pow_mod(lead, p - 2, p);
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while rem.len() >= r1.len() && !rem.is_empty() {
            let c = mul_mod(*rem.last().unwrap(), inv, p);
            let shift = rem.len() - r1.len();
            if c != 0 {
                q[shift] = c;
                for (i, &mi) in r1.iter().enumerate() {
                    let sub = mul_mod(c, mi, p);
                    rem[shift + i] = (rem[shift + i] + p - sub) % p;
                }
            }
            rem.pop();
            fp_trim(&mut rem);
        }
        fp_trim(&mut q);
        let qu1 = fp_mul(&q, &u1, p);
        let mut u2 = u0.clone();
        u2.resize(u2.len().max(qu1.len()), 0);
        for (i, &c) in qu1.iter().enumerate() {
            u2[i] = (u2[i] + p - c) % p;
        }
        fp_trim(&mut u2);
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = u2;
    }
    // normalize gcd monic
    if let Some(&lead) = r0.last() {
        if lead != 1 {
            let inv = pow_mod(lead, p - 2, p);
            for c in r0.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
            for c in u0.iter_mut() {
                *c = mul_mod(*c, inv, p);
            }
        }
    }
    (r0, u0)
}

/// Irreducibility over F_p of a monic polynomial, by the Frobenius criterion:
/// x^(p^k) = x mod f, and gcd(x^(p^(k/q)) - x, f) = 1 for every prime q | k.
fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    if f[0] == 0 {
        // divisible by x
        return false;
    }
    let x = vec![0u64, 1];
    let order = |e: usize| -> u128 { (p as u128).pow(e as u32) };
    let xq = fp_powmod(&x, order(k), f, p);
    if xq != fp_rem(&x, f, p) {
        return false;
    }
    let mut rem = k;
    let mut q = 2usize;
    let mut prime_divisors = Vec::new();
    while q * q <= rem {
        if rem % q == 0 {
            prime_divisors.push(q);
            while rem % q == 0 {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        prime_divisors.push(rem);
    }
    for q in prime_divisors {
        let e = k / q;
        let mut h = fp_powmod(&x, order(e), f, p);
        // h - x
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        fp_trim(&mut h);
        let g = fp_gcd(&h, f, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The canonical modulus: lexicographically smallest monic irreducible of
/// degree `k`, coefficients compared constant-term first.  For `k >= 2`
/// every candidate with zero constant term is divisible by `x`, so the scan
/// starts at constant term one.
fn canonical_modulus(p: u64, k: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; k];
    if k >= 2 {
        coeffs[0] = 1;
    }
    loop {
        let mut f: Vec<u64> = coeffs.clone();
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return f;
        }
        // lexicographic increment, last coefficient fastest
        let mut i = k;
        loop {
            debug_assert!(i > 0, "no irreducible of degree {k} found");
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// FieldSpec
// ---------------------------------------------------------------------------

#[derive(Debug, PartialEq, Eq, Hash)]
enum SpecInner {
    Rationals,
    /// `F_{p^k}` as `F_p[x]/(modulus)`; modulus has length k+1, monic.
    Finite { p: u64, k: usize, modulus: Vec<u64> },
}

/// A field: `Q` or `F_{p^k}` with `p` an odd prime.
///
/// Cheap to clone (shared internals).  Two specs are equal iff they denote
/// the same field with the same canonical modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    inner: Arc<SpecInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.inner {
            SpecInner::Rationals => write!(f, "Q"),
            SpecInner::Finite { p, k, .. } => {
                if *k == 1 {
                    write!(f, "F_{p}")
                } else {
                    write!(f, "F_{{{p}^{k}}}")
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec {
            inner: Arc::new(SpecInner::Rationals),
        }
    }

    /// `F_p`, rejecting `p = 2` and composite `p`.
    pub fn prime_field(p: u64) -> Result<Self> {
        Self::extension_field(p, 1)
    }

    /// `F_{p^k}` with the canonical modulus.
    pub fn extension_field(p: u64, k: usize) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(Error::CompositeCharacteristic(p));
        }
        if k == 0 {
            return Err(Error::InvalidExtensionDegree);
        }
        let modulus = canonical_modulus(p, k);
        Ok(FieldSpec {
            inner: Arc::new(SpecInner::Finite { p, k, modulus }),
        })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(&*self.inner, SpecInner::Rationals)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_rationals()
    }

    /// Characteristic `p`, or `None` over the rationals.
    pub fn characteristic(&self) -> Option<u64> {
        match &*self.inner {
            SpecInner::Rationals => None,
            SpecInner::Finite { p, .. } => Some(*p),
        }
    }

    /// Extension degree over the prime field; 1 for `Q` by convention.
    pub fn extension_degree(&self) -> usize {
        match &*self.inner {
            SpecInner::Rationals => 1,
            SpecInner::Finite { k, .. } => *k,
        }
    }

    /// Number of elements, or `None` over the rationals.
    pub fn order(&self) -> Option<u128> {
        match &*self.inner {
            SpecInner::Rationals => None,
            SpecInner::Finite { p, k, .. } => Some((*p as u128).pow(*k as u32)),
        }
    }

    /// Coefficients of the canonical modulus (length k+1), `None` over `Q`.
    pub fn modulus_coeffs(&self) -> Option<&[u64]> {
        match &*self.inner {
            SpecInner::Rationals => None,
            SpecInner::Finite { modulus, .. } => Some(modulus),
        }
    }

    pub fn zero(&self) -> FieldElement {
        match &*self.inner {
            SpecInner::Rationals => FieldElement {
                spec: self.clone(),
                repr: Repr::Rat(BigRational::zero()),
            },
            SpecInner::Finite { k, .. } => FieldElement {
                spec: self.clone(),
                repr: Repr::Fin(vec![0; *k]),
            },
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        match &*self.inner {
            SpecInner::Rationals => FieldElement {
                spec: self.clone(),
                repr: Repr::Rat(BigRational::from(BigInt::from(n))),
            },
            SpecInner::Finite { p, k, .. } => {
                let mut v = vec![0u64; *k];
                v[0] = n.rem_euclid(*p as i64) as u64;
                FieldElement {
                    spec: self.clone(),
                    repr: Repr::Fin(v),
                }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match &*self.inner {
            SpecInner::Rationals => FieldElement {
                spec: self.clone(),
                repr: Repr::Rat(BigRational::from(n.clone())),
            },
            SpecInner::Finite { p, k, .. } => {
                let m = BigInt::from(*p);
                let r = ((n % &m) + &m) % &m;
                let mut v = vec![0u64; *k];
                v[0] = r.to_u64_digits().1.first().copied().unwrap_or(0);
                FieldElement {
                    spec: self.clone(),
                    repr: Repr::Fin(v),
                }
            }
        }
    }

    /// `n/d` as an element; errors if `d` maps to zero.
    pub fn from_ratio(&self, n: i64, d: i64) -> Result<FieldElement> {
        let den = self.from_int(d);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.from_int(n) * &den.inv()?)
    }

    /// Element from a coefficient vector in the power basis (finite fields).
    /// Entries are reduced mod p; the vector is padded or must fit in k.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        match &*self.inner {
            SpecInner::Rationals => Err(Error::RequiresFiniteField),
            SpecInner::Finite { p, k, .. } => {
                if coeffs.len() > *k && coeffs[*k..].iter().any(|&c| c % p != 0) {
                    return Err(Error::DegreeMismatch {
                        expected: *k,
                        found: coeffs.len(),
                    });
                }
                let mut v = vec![0u64; *k];
                for (i, &c) in coeffs.iter().take(*k).enumerate() {
                    v[i] = c % p;
                }
                Ok(FieldElement {
                    spec: self.clone(),
                    repr: Repr::Fin(v),
                })
            }
        }
    }

    /// Rational from a decimal string "a" or "a/b"; finite-field element
    /// from the decimal of its canonical index.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        match &*self.inner {
            SpecInner::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((a, b)) => (a.trim(), b.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = num
                    .parse()
                    .map_err(|_| Error::Unsupported(alloc::format!("bad rational '{s}'")))?;
                let d: BigInt = den
                    .parse()
                    .map_err(|_| Error::Unsupported(alloc::format!("bad rational '{s}'")))?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement {
                    spec: self.clone(),
                    repr: Repr::Rat(BigRational::new(n, d)),
                })
            }
            SpecInner::Finite { .. } => {
                if let Some(stripped) = s.strip_prefix('-') {
                    let idx: u128 = stripped
                        .parse()
                        .map_err(|_| Error::Unsupported(alloc::format!("bad element '{s}'")))?;
                    let v = self.element_from_index(idx % self.order().unwrap())?;
                    return Ok(-&v);
                }
                let idx: u128 = s
                    .parse()
                    .map_err(|_| Error::Unsupported(alloc::format!("bad element '{s}'")))?;
                self.element_from_index(idx)
            }
        }
    }

    /// The class of `x` in `F_p[x]/(modulus)`; zero when `k = 1`.
    pub fn generator(&self) -> Result<FieldElement> {
        match &*self.inner {
            SpecInner::Rationals => Err(Error::RequiresFiniteField),
            SpecInner::Finite { k, .. } => {
                let mut v = vec![0u64; *k];
                if *k > 1 {
                    v[1] = 1;
                }
                Ok(FieldElement {
                    spec: self.clone(),
                    repr: Repr::Fin(v),
                })
            }
        }
    }

    /// Element with canonical index `idx`: base-p digits of `idx`, least
    /// significant digit = constant coefficient.
    pub fn element_from_index(&self, idx: u128) -> Result<FieldElement> {
        match &*self.inner {
            SpecInner::Rationals => Err(Error::RequiresFiniteField),
            SpecInner::Finite { p, k, .. } => {
                let order = (*p as u128).pow(*k as u32);
                if idx >= order {
                    return Err(Error::Unsupported(alloc::format!(
                        "index {idx} out of range for field of order {order}"
                    )));
                }
                let mut v = vec![0u64; *k];
                let mut rest = idx;
                for c in v.iter_mut() {
                    *c = (rest % *p as u128) as u64;
                    rest /= *p as u128;
                }
                Ok(FieldElement {
                    spec: self.clone(),
                    repr: Repr::Fin(v),
                })
            }
        }
    }

    /// All elements in canonical index order (finite fields only).
    pub fn elements(&self) -> Result<impl Iterator<Item = FieldElement> + '_> {
        let order = self.order().ok_or(Error::RequiresFiniteField)?;
        let spec = self.clone();
        Ok((0..order).map(move |i| spec.element_from_index(i).unwrap()))
    }
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    /// Coefficient vector of length k in the power basis, entries in 0..p.
    Fin(Vec<u64>),
}

/// An element of a [`FieldSpec`], stored in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    repr: Repr,
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Fin(v) => v.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Fin(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            Repr::Fin(_) => None,
        }
    }

    pub fn coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Rat(_) => None,
            Repr::Fin(v) => Some(v),
        }
    }

    /// Canonical enumeration index (finite fields).
    pub fn index(&self) -> Option<u128> {
        match &self.repr {
            Repr::Rat(_) => None,
            Repr::Fin(v) => {
                let p = self.spec.characteristic().unwrap() as u128;
                let mut idx = 0u128;
                for &c in v.iter().rev() {
                    idx = idx * p + c as u128;
                }
                Some(idx)
            }
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.repr {
            Repr::Rat(r) => Ok(FieldElement {
                spec: self.spec.clone(),
                repr: Repr::Rat(r.recip()),
            }),
            Repr::Fin(v) => {
                let (p, modulus) = match &*self.spec.inner {
                    SpecInner::Finite { p, modulus, .. } => (*p, modulus),
                    SpecInner::Rationals => unreachable!(),
                };
                let (g, u) = fp_half_xgcd(v, modulus, p);
                debug_assert_eq!(g, vec![1], "modulus not irreducible?");
                let mut out = u;
                out.resize(v.len(), 0);
                Ok(FieldElement {
                    spec: self.spec.clone(),
                    repr: Repr::Fin(out),
                })
            }
        }
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, e: i128) -> Result<FieldElement> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = self.spec.one();
        let mut base = self.clone();
        let mut e = e as u128;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Frobenius `x -> x^p` (identity over `Q` by convention).
    pub fn frobenius(&self) -> FieldElement {
        match self.spec.characteristic() {
            None => self.clone(),
            Some(p) => self.pow(p as i128).unwrap(),
        }
    }

    /// Square root if one exists in the field (finite fields only, p odd).
    /// Returns the root with the smaller canonical index.
    pub fn sqrt(&self) -> Option<FieldElement> {
        let q = self.spec.order()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        // Euler criterion, then a deterministic scan is avoided via
        // Tonelli-Shanks over the multiplicative group.
        if !self.pow(((q - 1) / 2) as i128).ok()?.is_one() {
            return None;
        }
        // q odd so q = 2^s * t + 1 with t odd.
        let mut t = q - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        // find a non-residue deterministically, in index order
        let mut nr = None;
        for i in 1..q {
            let c = self.spec.element_from_index(i).unwrap();
            if !c.pow(((q - 1) / 2) as i128).unwrap().is_one() {
                nr = Some(c);
                break;
            }
        }
        let mut c = nr?.pow(t as i128).unwrap();
        let mut r = self.pow(((t + 1) / 2) as i128).unwrap();
        let mut x = self.pow(t as i128).unwrap();
        let mut m = s;
        while !x.is_one() {
            let mut i = 0u32;
            let mut probe = x.clone();
            while !probe.is_one() {
                probe = &probe * &probe;
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = &b * &b;
            }
            r = &r * &b;
            c = &b * &b;
            x = &x * &c;
            m = i;
        }
        let neg = -&r;
        Some(if r.index() <= neg.index() { r } else { neg })
    }

    /// Decimal string used by the JSON formats: "a/b" (or "a") over `Q`,
    /// the canonical index otherwise.
    pub fn to_decimal_string(&self) -> String {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    alloc::format!("{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fin(_) => self.index().unwrap().to_string(),
        }
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert!(
            self.spec == other.spec,
            "operands belong to different fields: {:?} vs {:?}",
            self.spec,
            other.spec
        );
    }
}

/// Canonical order: by index over finite fields, numeric over `Q`.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Fin(a), Repr::Fin(b)) => a.iter().rev().cmp(b.iter().rev()),
            (Repr::Rat(_), Repr::Fin(_)) => Ordering::Less,
            (Repr::Fin(_), Repr::Rat(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{r}"),
            Repr::Fin(v) => {
                if v.len() == 1 {
                    write!(f, "{}", v[0])
                } else {
                    write!(f, "[")?;
                    for (i, c) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{c}")?;
                    }
                    write!(f, "]")
                }
            }
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Fin(a), Repr::Fin(b)) => {
                let p = self.spec.characteristic().unwrap();
                Repr::Fin(
                    a.iter()
                        .zip(b.iter())
                        .map(|(&x, &y)| (x + y) % p)
                        .collect(),
                )
            }
            _ => unreachable!(),
        };
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a - b),
            (Repr::Fin(a), Repr::Fin(b)) => {
                let p = self.spec.characteristic().unwrap();
                Repr::Fin(
                    a.iter()
                        .zip(b.iter())
                        .map(|(&x, &y)| (x + p - y) % p)
                        .collect(),
                )
            }
            _ => unreachable!(),
        };
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.assert_same_field(rhs);
        let repr = match (&self.repr, &rhs.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Fin(a), Repr::Fin(b)) => {
                let (p, modulus, k) = match &*self.spec.inner {
                    SpecInner::Finite { p, modulus, k } => (*p, modulus, *k),
                    SpecInner::Rationals => unreachable!(),
                };
                let mut v = fp_mulmod(a, b, modulus, p);
                v.resize(k, 0);
                Repr::Fin(v)
            }
            _ => unreachable!(),
        };
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Fin(a) => {
                let p = self.spec.characteristic().unwrap();
                Repr::Fin(a.iter().map(|&x| (p - x) % p).collect())
            }
        };
        FieldElement {
            spec: self.spec.clone(),
            repr,
        }
    }
}

/// Panics on division by zero; use [`FieldElement::inv`] to handle it.
impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Conversion of a rational number into a finite field (denominator must be
/// invertible), or identity over `Q`.  Used when reducing models mod p.
pub fn reduce_rational(spec: &FieldSpec, r: &BigRational) -> Result<FieldElement> {
    if spec.is_rationals() {
        return Ok(FieldElement {
            spec: spec.clone(),
            repr: Repr::Rat(r.clone()),
        });
    }
    let num = spec.from_bigint(r.numer());
    let den = spec.from_bigint(r.denom());
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(&num * &den.inv()?)
}

/// Signed representative helper for pretty-printing small prime fields.
pub fn balanced_residue(e: &FieldElement) -> Option<i64> {
    let p = e.spec().characteristic()?;
    if e.spec().extension_degree() != 1 || p > i64::MAX as u64 {
        return None;
    }
    let c = e.coeffs()?[0] as i64;
    let p = p as i64;
    Some(if c > p / 2 { c - p } else { c })
}

/// Embedding of `F_{p^j}` into `F_{p^{jk}}`, sending the generator to the
/// smallest root (canonical element order) of the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    src: FieldSpec,
    dst: FieldSpec,
    gen_image: FieldElement,
}

impl Embedding {
    pub fn new(src: &FieldSpec, dst: &FieldSpec) -> Result<Embedding> {
        let (p_src, p_dst) = match (src.characteristic(), dst.characteristic()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::RequiresFiniteField),
        };
        if p_src != p_dst || dst.extension_degree() % src.extension_degree() != 0 {
            return Err(Error::Unsupported(
                "no embedding between these fields".into(),
            ));
        }
        if src == dst {
            return Ok(Embedding {
                src: src.clone(),
                dst: dst.clone(),
                gen_image: dst.generator().unwrap_or_else(|_| dst.zero()),
            });
        }
        // Find the smallest root of the source modulus inside dst by direct
        // scan when the field is small, else by gcd-based root extraction in
        // the polynomial module (kept here as a scan; callers embed into
        // fields they intend to enumerate anyway).
        let modulus = src.modulus_coeffs().unwrap().to_vec();
        let order = dst.order().unwrap();
        if order <= 1 << 22 {
            for i in 0..order {
                let x = dst.element_from_index(i).unwrap();
                if eval_fp_poly(&modulus, &x).is_zero() {
                    return Ok(Embedding {
                        src: src.clone(),
                        dst: dst.clone(),
                        gen_image: x,
                    });
                }
            }
            Err(Error::Unsupported("modulus has no root in target".into()))
        } else {
            let root = crate::algebra::poly::smallest_root_of_fp_poly(&modulus, dst)?;
            Ok(Embedding {
                src: src.clone(),
                dst: dst.clone(),
                gen_image: root,
            })
        }
    }

    pub fn src(&self) -> &FieldSpec {
        &self.src
    }

    pub fn dst(&self) -> &FieldSpec {
        &self.dst
    }

    pub fn apply(&self, e: &FieldElement) -> FieldElement {
        assert!(e.spec() == &self.src, "element not in the source field");
        if self.src == self.dst {
            return e.clone();
        }
        let coeffs = e.coeffs().expect("finite field element");
        let mut acc = self.dst.zero();
        for &c in coeffs.iter().rev() {
            acc = &(&acc * &self.gen_image) + &self.dst.from_int(c as i64);
        }
        acc
    }

    /// Preimage if the element lies in the source subfield.
    pub fn retract(&self, e: &FieldElement) -> Option<FieldElement> {
        if self.src == self.dst {
            return Some(e.clone());
        }
        // Scan the (small) source field; embeddings are used at desk scale.
        let order = self.src.order()?;
        for i in 0..order {
            let cand = self.src.element_from_index(i).unwrap();
            if &self.apply(&cand) == e {
                return Some(cand);
            }
        }
        None
    }
}

fn eval_fp_poly(coeffs: &[u64], x: &FieldElement) -> FieldElement {
    let spec = x.spec();
    let mut acc = spec.zero();
    for &c in coeffs.iter().rev() {
        acc = &(&acc * x) + &spec.from_int(c as i64);
    }
    acc
}
