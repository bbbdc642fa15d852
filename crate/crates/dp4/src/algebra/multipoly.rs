//! Sparse multivariate polynomials, used for the bihomogeneous forms that
//! cut out fibration models in `P^1 x P^N`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! (and everything derived from it) is deterministic.  No zero coefficient
//! is ever stored.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::algebra::field::{Embedding, FieldElement, FieldSpec};
use crate::algebra::matrix::Mat;
use crate::algebra::poly::UniPoly;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    spec: FieldSpec,
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}")?;
            for (v, &e) in self.vars.iter().zip(exp.iter()) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl MultiPoly {
    pub fn zero(spec: &FieldSpec, vars: &[&str]) -> MultiPoly {
        MultiPoly {
            spec: spec.clone(),
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &FieldSpec, vars: &[&str], c: FieldElement) -> MultiPoly {
        let mut p = MultiPoly::zero(spec, vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    /// The `i`-th variable.
    pub fn var(spec: &FieldSpec, vars: &[&str], i: usize) -> MultiPoly {
        let mut p = MultiPoly::zero(spec, vars);
        let mut exp = vec![0u32; p.vars.len()];
        exp[i] = 1;
        p.terms.insert(exp, spec.one());
        p
    }

    pub fn from_terms(
        spec: &FieldSpec,
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<u32>, FieldElement)>,
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(spec, vars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), p.vars.len(), "exponent vector length");
            p.add_term(exp, c);
        }
        p
    }

    fn add_term(&mut self, exp: Vec<u32>, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> FieldElement {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.spec.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in the block of variables `[lo, hi)`.
    pub fn block_degree(&self, lo: usize, hi: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[lo..hi].iter().sum()).max()
    }

    /// Bidegree with respect to the split `vars[0..split] | vars[split..]`,
    /// or `None` when not bihomogeneous.  The zero polynomial has every
    /// bidegree; it reports `Some((0, 0))`.
    pub fn bidegree(&self, split: usize) -> Option<(u32, u32)> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some((0, 0)),
            Some(e) => e,
        };
        let a: u32 = first[..split].iter().sum();
        let b: u32 = first[split..].iter().sum();
        for e in it {
            if e[..split].iter().sum::<u32>() != a || e[split..].iter().sum::<u32>() != b {
                return None;
            }
        }
        Some((a, b))
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly {
                spec: self.spec.clone(),
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        MultiPoly {
            spec: self.spec.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = self.spec.zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(exp.iter()) {
                if e > 0 {
                    term = &term * &x.pow(e as i128).unwrap();
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Partial evaluation: substitute a field element for one variable.
    /// The variable stays in the list with exponent zero.
    pub fn substitute(&self, var: usize, value: &FieldElement) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.spec, &self.vars.iter().map(String::as_str).collect::<Vec<_>>());
        for (exp, c) in &self.terms {
            let e = exp[var];
            let mut new_exp = exp.clone();
            new_exp[var] = 0;
            let factor = if e > 0 {
                value.pow(e as i128).unwrap()
            } else {
                self.spec.one()
            };
            out.add_term(new_exp, &factor * c);
        }
        out
    }

    /// Full composition: each variable is replaced by a univariate
    /// polynomial in a common variable; returns that univariate result.
    pub fn compose_unipolys(&self, images: &[UniPoly], var: &str) -> UniPoly {
        assert_eq!(images.len(), self.vars.len());
        let mut acc = UniPoly::zero(&self.spec, var);
        for (exp, c) in &self.terms {
            let mut term = UniPoly::constant(&self.spec, var, c.clone());
            for (img, &e) in images.iter().zip(exp.iter()) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(
            &self.spec,
            &self.vars.iter().map(String::as_str).collect::<Vec<_>>(),
        );
        for (exp, c) in &self.terms {
            let e = exp[var];
            if e == 0 {
                continue;
            }
            let mut new_exp = exp.clone();
            new_exp[var] = e - 1;
            out.add_term(new_exp, &self.spec.from_int(e as i64) * c);
        }
        out
    }

    pub fn map_coeffs(&self, emb: &Embedding) -> MultiPoly {
        MultiPoly {
            spec: emb.dst().clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), emb.apply(c)))
                .collect(),
        }
    }

    /// Gram matrix of a quadratic form in the variables `[offset..]` (all
    /// other exponents must be zero): `M[i][j]` with off-diagonal entries
    /// halved, so `x^T M x` reproduces the form (odd characteristic).
    pub fn quadratic_matrix(&self, offset: usize) -> Result<Mat> {
        let n = self.vars.len() - offset;
        let half = self.spec.from_ratio(1, 2).map_err(|_| Error::CharacteristicTwo)?;
        let mut m = Mat::zeros(&self.spec, n, n);
        for (exp, c) in &self.terms {
            if exp[..offset].iter().any(|&e| e != 0) {
                return Err(Error::Unsupported(
                    "form still involves eliminated variables".into(),
                ));
            }
            let support: Vec<usize> = (0..n).filter(|&i| exp[offset + i] != 0).collect();
            match support.as_slice() {
                [i] if exp[offset + i] == 2 => {
                    m.set(*i, *i, &m.at(*i, *i).clone() + c);
                }
                [i, j] if exp[offset + i] == 1 && exp[offset + j] == 1 => {
                    let hc = &half * c;
                    m.set(*i, *j, &m.at(*i, *j).clone() + &hc);
                    m.set(*j, *i, &m.at(*j, *i).clone() + &hc);
                }
                _ => {
                    return Err(Error::Unsupported(
                        "polynomial is not a quadratic form".into(),
                    ))
                }
            }
        }
        Ok(m)
    }

    /// Coefficient vector of a linear form in the variables `[offset..]`.
    pub fn linear_coeffs(&self, offset: usize) -> Result<Vec<FieldElement>> {
        let n = self.vars.len() - offset;
        let mut v = vec![self.spec.zero(); n];
        for (exp, c) in &self.terms {
            if exp[..offset].iter().any(|&e| e != 0) {
                return Err(Error::Unsupported(
                    "form still involves eliminated variables".into(),
                ));
            }
            let support: Vec<usize> = (0..n).filter(|&i| exp[offset + i] != 0).collect();
            match support.as_slice() {
                [i] if exp[offset + i] == 1 => {
                    v[*i] = &v[*i] + c;
                }
                _ => return Err(Error::Unsupported("polynomial is not linear".into())),
            }
        }
        Ok(v)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.spec == rhs.spec && self.vars == rhs.vars, "mixed rings");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            spec: self.spec.clone(),
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert!(self.spec == rhs.spec && self.vars == rhs.vars, "mixed rings");
        let mut out = MultiPoly::zero(
            &self.spec,
            &self.vars.iter().map(String::as_str).collect::<Vec<_>>(),
        );
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca * cb);
            }
        }
        out
    }
}
