//! Dense matrices over a [`FieldSpec`], sized for 5x5 pencils and small
//! Sylvester blocks.  Elimination always pivots on the first nonzero entry
//! in column order, so results are deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

use crate::algebra::field::{FieldElement, FieldSpec};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    spec: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?} [", self.rows, self.cols, self.spec)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> Mat {
        Mat {
            spec: spec.clone(),
            rows,
            cols,
            data: vec![spec.zero(); rows * cols],
        }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(spec: &FieldSpec, rows: &[Vec<FieldElement>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for e in row {
                assert!(e.spec() == spec, "entry from a different field");
                data.push(e.clone());
            }
        }
        Mat {
            spec: spec.clone(),
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(
        spec: &FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Mat {
        let mut m = Mat::zeros(spec, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Integer matrix over the given field.
    pub fn from_ints(spec: &FieldSpec, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(spec, r, c, |i, j| spec.from_int(rows[i][j]))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.spec, self.cols, self.rows, |i, j| {
            self.at(j, i).clone()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn scale(&self, c: &FieldElement) -> Mat {
        Mat::from_fn(&self.spec, self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.spec.zero();
                for j in 0..self.cols {
                    if !v[j].is_zero() {
                        acc = &acc + &(self.at(i, j) * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// v^T M w, the associated bilinear form.
    pub fn bilinear(&self, v: &[FieldElement], w: &[FieldElement]) -> FieldElement {
        let mw = self.apply(w);
        let mut acc = self.spec.zero();
        for (vi, mi) in v.iter().zip(mw.iter()) {
            acc = &acc + &(vi * mi);
        }
        acc
    }

    /// M^T A M for the congruence action on quadratic forms.
    pub fn congruence(&self, m: &Mat) -> Mat {
        &(&m.transpose() * self) * m
    }

    /// Gaussian elimination determinant (square matrices).
    pub fn det(&self) -> FieldElement {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.spec.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let pivot = match pivot {
                Some(r) => r,
                None => return self.spec.zero(),
            };
            if pivot != col {
                for j in 0..n {
                    let a = m.at(pivot, j).clone();
                    let b = m.at(col, j).clone();
                    m.set(pivot, j, b);
                    m.set(col, j, a);
                }
                det = -&det;
            }
            let inv = m.at(col, col).inv().unwrap();
            det = &det * m.at(col, col);
            for r in (col + 1)..n {
                if m.at(r, col).is_zero() {
                    continue;
                }
                let factor = &(m.at(r, col) * &inv);
                for j in col..n {
                    let v = &(m.at(r, j) - &(factor * m.at(col, j)));
                    m.set(r, j, v.clone());
                }
            }
        }
        det
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let pivot = (row..m.rows).find(|&r| !m.at(r, col).is_zero());
            let pr = match pivot {
                Some(r) => r,
                None => continue,
            };
            if pr != row {
                for j in 0..m.cols {
                    let a = m.at(pr, j).clone();
                    let b = m.at(row, j).clone();
                    m.set(pr, j, b);
                    m.set(row, j, a);
                }
            }
            let inv = m.at(row, col).inv().unwrap();
            for j in 0..m.cols {
                let v = m.at(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for j in 0..m.cols {
                        let v = &(m.at(r, j) - &(&factor * m.at(row, j)));
                        m.set(r, j, v.clone());
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right null space, one vector per free column in
    /// ascending column order, free coordinate set to one.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().enumerate().collect::<Vec<_>>();
        piv_iter.sort_by_key(|&(_, c)| c);
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![self.spec.zero(); self.cols];
            v[free] = self.spec.one();
            for &(prow, pcol) in &piv_iter {
                v[pcol] = -&r.at(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(&self.spec, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, n + i, self.spec.one());
        }
        let (r, pivots) = aug.rref();
        if pivots != (0..n).collect::<Vec<_>>() {
            return Err(Error::SingularGram);
        }
        Ok(Mat::from_fn(&self.spec, n, n, |i, j| {
            r.at(i, n + j).clone()
        }))
    }

    /// Solve M x = b; error if inconsistent, minimal free coordinates set to
    /// zero if underdetermined.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(&self.spec, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(Error::Unsupported("inconsistent linear system".into()));
        }
        let mut x = vec![self.spec.zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r.at(row, self.cols).clone();
        }
        Ok(x)
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(&self.spec, self.rows, self.cols, |i, j| {
            self.at(i, j) + rhs.at(i, j)
        })
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat::from_fn(&self.spec, self.rows, self.cols, |i, j| {
            self.at(i, j) - rhs.at(i, j)
        })
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Mat::from_fn(&self.spec, self.rows, rhs.cols, |i, j| {
            let mut acc = self.spec.zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc = &acc + &(a * rhs.at(k, j));
                }
            }
            acc
        })
    }
}
