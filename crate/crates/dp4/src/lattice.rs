//! The rank-6 Picard lattice of a quartic del Pezzo surface, the primitive
//! sublattice orthogonal to the canonical class with its D5 structure, the
//! Weyl group of signed permutations, and exact Gram-matrix arithmetic for
//! labeled class tables.
//!
//! Conventions, pinned once:
//! * [`PicClass`] stores coefficients in the ordered basis `(L, E1..E5)`,
//!   so the class is `d L + c_1 E_1 + ... + c_5 E_5` and the intersection
//!   form is `diag(+1, -1, -1, -1, -1, -1)`.  The canonical class is
//!   `K = -3L + E1 + ... + E5 = (-3, 1, 1, 1, 1, 1)`.
//! * Primitive vectors (elements of `K`-perp) are carried in ambient D5
//!   coordinates `x_i = d + c_i`; the lattice is the even-sum sublattice of
//!   `Z^5` with form `-(x . y)`, and the Weyl group acts there by signed
//!   permutation.  The conversion to the Gram basis
//!   `{E1-E2, E2-E3, E3-E4, E4-E5, L-E1-E2-E3}` is the matrix
//!   [`lambda_basis_ambient`].

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A divisor class `d L + c_1 E_1 + ... + c_5 E_5`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PicClass(pub [i64; 6]);

impl fmt::Debug for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({};{},{},{},{},{})",
            self.0[0], self.0[1], self.0[2], self.0[3], self.0[4], self.0[5]
        )
    }
}

impl PicClass {
    pub fn new(d: i64, c: [i64; 5]) -> PicClass {
        PicClass([d, c[0], c[1], c[2], c[3], c[4]])
    }

    /// The canonical class `-3L + E1 + ... + E5`.
    pub fn canonical() -> PicClass {
        PicClass([-3, 1, 1, 1, 1, 1])
    }

    /// Anticanonical degree `-C . K`.
    pub fn anticanonical_degree(&self) -> i64 {
        -pic_pairing(self, &PicClass::canonical())
    }

    /// Ambient D5 coordinates `x_i = d + c_i` for primitive classes; `None`
    /// when the class pairs nontrivially with `K`.
    pub fn lambda_coords(&self) -> Option<[i64; 5]> {
        if pic_pairing(self, &PicClass::canonical()) != 0 {
            return None;
        }
        let d = self.0[0];
        Some([
            d + self.0[1],
            d + self.0[2],
            d + self.0[3],
            d + self.0[4],
            d + self.0[5],
        ])
    }

    /// Primitive class from ambient coordinates (the coordinate sum must be
    /// even, which characterizes the image of the lattice).
    pub fn from_lambda_coords(x: [i64; 5]) -> Result<PicClass> {
        let sum: i64 = x.iter().sum();
        if sum % 2 != 0 {
            return Err(Error::Unsupported(
                "ambient coordinates with odd sum are not in the lattice".into(),
            ));
        }
        let d = sum / 2;
        Ok(PicClass([
            d,
            x[0] - d,
            x[1] - d,
            x[2] - d,
            x[3] - d,
            x[4] - d,
        ]))
    }

    /// Doubled ambient coordinates of the `K`-perp component together with
    /// the pairing against `K`: `y_i = 2(d + c_i) + kappa`.  Always integral,
    /// and the Weyl group acts on `y` by signed permutation.
    fn doubled_coords(&self) -> ([i64; 5], i64) {
        let kappa = pic_pairing(self, &PicClass::canonical());
        let d = self.0[0];
        let mut y = [0i64; 5];
        for i in 0..5 {
            y[i] = 2 * (d + self.0[i + 1]) + kappa;
        }
        (y, kappa)
    }

    fn from_doubled_coords(y: [i64; 5], kappa: i64) -> PicClass {
        let sum: i64 = y.iter().sum();
        debug_assert_eq!((sum - 3 * kappa).rem_euclid(4), 0);
        let d = (sum - 3 * kappa) / 4;
        let mut c = [0i64; 5];
        for i in 0..5 {
            debug_assert_eq!((y[i] - kappa).rem_euclid(2), 0);
            c[i] = (y[i] - kappa) / 2 - d;
        }
        PicClass::new(d, c)
    }
}

/// Intersection pairing `d_a d_b - sum c_(a,i) c_(b,i)`.
pub fn pic_pairing(a: &PicClass, b: &PicClass) -> i64 {
    let mut acc = a.0[0] * b.0[0];
    for i in 1..6 {
        acc -= a.0[i] * b.0[i];
    }
    acc
}

/// The sixteen (-1)-classes `C` with `C.C = C.K = -1`, in increasing
/// lexicographic order of their coefficient vectors: the five `E_i`, the
/// ten `L - E_i - E_j`, and `2L - E_1 - ... - E_5`.
pub fn exceptional_classes() -> Vec<PicClass> {
    exceptional_classes_box_search(3, 2)
}

/// Brute-force box search `|d| <= d_box`, `|c_i| <= c_box` for classes with
/// `C.C = C.K = -1`.  The default box contains the full classical list.
pub fn exceptional_classes_box_search(d_box: i64, c_box: i64) -> Vec<PicClass> {
    let k = PicClass::canonical();
    let mut out = Vec::new();
    for d in -d_box..=d_box {
        let mut c = [0i64; 5];
        search_rec(0, d, &mut c, c_box, &k, &mut out);
    }
    out.sort();
    out
}

fn search_rec(
    i: usize,
    d: i64,
    c: &mut [i64; 5],
    c_box: i64,
    k: &PicClass,
    out: &mut Vec<PicClass>,
) {
    if i == 5 {
        let cand = PicClass::new(d, *c);
        if pic_pairing(&cand, &cand) == -1 && pic_pairing(&cand, k) == -1 {
            out.push(cand);
        }
        return;
    }
    for v in -c_box..=c_box {
        c[i] = v;
        search_rec(i + 1, d, c, c_box, k, out);
    }
}

/// Gram matrix of the primitive lattice in the basis
/// `{E1-E2, E2-E3, E3-E4, E4-E5, L-E1-E2-E3}`.
pub const LAMBDA_GRAM: [[i64; 5]; 5] = [
    [-2, 1, 0, 0, 0],
    [1, -2, 1, 0, 0],
    [0, 1, -2, 1, 1],
    [0, 0, 1, -2, 0],
    [0, 0, 1, 0, -2],
];

/// Ambient D5 coordinates of the five Gram-basis vectors, as columns.
pub fn lambda_basis_ambient() -> [[i64; 5]; 5] {
    let rows = [
        [1, -1, 0, 0, 0],
        [0, 1, -1, 0, 0],
        [0, 0, 1, -1, 0],
        [0, 0, 0, 1, -1],
        [0, 0, 0, 1, 1],
    ];
    // the arrays above are the basis vectors; transpose into columns
    let mut out = [[0i64; 5]; 5];
    for (j, row) in rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            out[i][j] = v;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Weyl group
// ---------------------------------------------------------------------------

/// A signed permutation: column `j` of the matrix carries `signs[j]` in row
/// `perm[j]`, so acting on a vector gives `(w x)[perm[j]] = signs[j] x[j]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SignedPerm {
    pub perm: [usize; 5],
    pub signs: [i8; 5],
}

impl SignedPerm {
    pub fn identity() -> SignedPerm {
        SignedPerm {
            perm: [0, 1, 2, 3, 4],
            signs: [1; 5],
        }
    }

    /// Determinant of the signed permutation matrix.
    pub fn det(&self) -> i64 {
        let mut sign = permutation_sign(&self.perm);
        for &s in &self.signs {
            sign *= s as i64;
        }
        sign
    }

    /// Membership: determinant equals the permutation sign, i.e. an even
    /// number of sign flips.
    pub fn in_weyl_group(&self) -> bool {
        is_permutation(&self.perm)
            && self.signs.iter().all(|&s| s == 1 || s == -1)
            && self.signs.iter().filter(|&&s| s == -1).count() % 2 == 0
    }

    pub fn apply(&self, x: &[i64; 5]) -> [i64; 5] {
        let mut out = [0i64; 5];
        for j in 0..5 {
            out[self.perm[j]] = self.signs[j] as i64 * x[j];
        }
        out
    }

    /// `(self . inner)(x) = self(inner(x))`.
    pub fn compose(&self, inner: &SignedPerm) -> SignedPerm {
        let mut perm = [0usize; 5];
        let mut signs = [1i8; 5];
        for j in 0..5 {
            perm[j] = self.perm[inner.perm[j]];
            signs[j] = inner.signs[j] * self.signs[inner.perm[j]];
        }
        SignedPerm { perm, signs }
    }

    /// Matrix of the action in the Gram basis: `B^-1 (signed perm) B`,
    /// integral because both bases span the same lattice.
    pub fn gram_basis_matrix(&self) -> [[i64; 5]; 5] {
        let b = lambda_basis_ambient();
        let mut images = [[0i64; 5]; 5];
        for j in 0..5 {
            let col = [b[0][j], b[1][j], b[2][j], b[3][j], b[4][j]];
            let img = self.apply(&col);
            for i in 0..5 {
                images[i][j] = img[i];
            }
        }
        solve_integer_5x5(&b, &images)
    }
}

fn is_permutation(p: &[usize; 5]) -> bool {
    let mut seen = [false; 5];
    for &v in p {
        if v >= 5 || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn permutation_sign(p: &[usize; 5]) -> i64 {
    let mut sign = 1i64;
    for i in 0..5 {
        for j in (i + 1)..5 {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Exact solve of `B M = Y` over the rationals, asserting an integral
/// result (change of basis between two bases of the same lattice).
fn solve_integer_5x5(b: &[[i64; 5]; 5], y: &[[i64; 5]; 5]) -> [[i64; 5]; 5] {
    let mut aug = [[(0i128, 1i128); 10]; 5];
    for i in 0..5 {
        for j in 0..5 {
            aug[i][j] = (b[i][j] as i128, 1);
            aug[i][j + 5] = (y[i][j] as i128, 1);
        }
    }
    fn norm(a: (i128, i128)) -> (i128, i128) {
        let g = gcd_i128(a.0.abs(), a.1.abs()).max(1);
        let s = if a.1 < 0 { -1 } else { 1 };
        (s * a.0 / g, s * a.1 / g)
    }
    let sub = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.1 - b.0 * a.1, a.1 * b.1));
    let mul = |a: (i128, i128), b: (i128, i128)| norm((a.0 * b.0, a.1 * b.1));
    let div = |a: (i128, i128), b: (i128, i128)| {
        assert!(b.0 != 0);
        norm((a.0 * b.1, a.1 * b.0))
    };
    for col in 0..5 {
        let pivot = (col..5).find(|&r| aug[r][col].0 != 0).expect("singular");
        aug.swap(col, pivot);
        let pv = aug[col][col];
        for j in 0..10 {
            aug[col][j] = div(aug[col][j], pv);
        }
        for r in 0..5 {
            if r != col && aug[r][col].0 != 0 {
                let f = aug[r][col];
                for j in 0..10 {
                    aug[r][j] = sub(aug[r][j], mul(f, aug[col][j]));
                }
            }
        }
    }
    let mut out = [[0i64; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            let (n, d) = aug[i][j + 5];
            assert!(d == 1, "non-integral change of basis");
            out[i][j] = n as i64;
        }
    }
    out
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd_i128(b, a % b)
    }
}

/// The full Weyl group: all 1920 signed permutations with an even number of
/// sign flips, in a fixed deterministic order.
pub fn weyl_group() -> Vec<SignedPerm> {
    let mut perms = Vec::with_capacity(120);
    let mut idx = [0usize, 1, 2, 3, 4];
    heap_permutations(&mut idx, 5, &mut perms);
    perms.sort_unstable();
    let mut out = Vec::with_capacity(1920);
    for perm in perms {
        for mask in 0u32..32 {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let mut signs = [1i8; 5];
            for (j, s) in signs.iter_mut().enumerate() {
                if mask & (1 << j) != 0 {
                    *s = -1;
                }
            }
            out.push(SignedPerm { perm, signs });
        }
    }
    out
}

fn heap_permutations(arr: &mut [usize; 5], k: usize, out: &mut Vec<[usize; 5]>) {
    if k == 1 {
        out.push(*arr);
        return;
    }
    for i in 0..k {
        heap_permutations(arr, k - 1, out);
        if k % 2 == 0 {
            arr.swap(i, k - 1);
        } else {
            arr.swap(0, k - 1);
        }
    }
}

/// Action on a primitive vector in ambient D5 coordinates.
pub fn weyl_act_lambda(w: &SignedPerm, x: &[i64; 5]) -> Result<[i64; 5]> {
    if !w.in_weyl_group() {
        return Err(Error::NotInWeylGroup);
    }
    Ok(w.apply(x))
}

/// Action on a full divisor class, fixing the canonical class.
pub fn weyl_act_pic(w: &SignedPerm, v: &PicClass) -> Result<PicClass> {
    if !w.in_weyl_group() {
        return Err(Error::NotInWeylGroup);
    }
    let (y, kappa) = v.doubled_coords();
    Ok(PicClass::from_doubled_coords(w.apply(&y), kappa))
}

/// Orbit of a class under the full Weyl group, sorted.
pub fn weyl_orbit(v: &PicClass) -> Vec<PicClass> {
    let group = weyl_group();
    let mut orbit = BTreeSet::new();
    for w in &group {
        orbit.insert(weyl_act_pic(w, v).unwrap());
    }
    orbit.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Smith normal form and discriminant groups
// ---------------------------------------------------------------------------

/// Smith normal form diagonal of an integer matrix: nonnegative entries,
/// each dividing the next, padded with zeros up to `min(rows, cols)`.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let n = rows.min(cols);
    let mut diag = Vec::with_capacity(n);
    let mut top = 0usize;
    while top < n {
        let mut best: Option<(usize, usize)> = None;
        for i in top..rows {
            for j in top..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let (pi, pj) = match best {
            None => break,
            Some(b) => b,
        };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(top, pj);
        }
        loop {
            let pivot = a[top][top];
            let mut clean = true;
            for i in (top + 1)..rows {
                let q = a[i][top].div_euclid(pivot);
                if q != 0 {
                    for j in top..cols {
                        a[i][j] -= q * a[top][j];
                    }
                }
                if a[i][top] != 0 {
                    a.swap(top, i);
                    clean = false;
                    break;
                }
            }
            if !clean {
                continue;
            }
            for j in (top + 1)..cols {
                let q = a[top][j].div_euclid(pivot);
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[top];
                    }
                }
                if a[top][j] != 0 {
                    for row in a.iter_mut() {
                        row.swap(top, j);
                    }
                    clean = false;
                    break;
                }
            }
            if clean {
                break;
            }
        }
        let pivot = a[top][top];
        let mut offender = None;
        'scan: for i in (top + 1)..rows {
            for j in (top + 1)..cols {
                if a[i][j] % pivot != 0 {
                    offender = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offender {
            for j in top..cols {
                let v = a[i][j];
                a[top][j] += v;
            }
            continue;
        }
        diag.push(pivot.abs());
        top += 1;
    }
    while diag.len() < n {
        diag.push(0);
    }
    diag
}

/// Invariant factors (> 1) of the cokernel of a nondegenerate integer Gram
/// matrix: the discriminant group.
pub fn discriminant_group(gram: &[Vec<i64>]) -> Result<Vec<i128>> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(Error::Unsupported("Gram matrix must be square".into()));
    }
    let diag = smith_normal_form(gram);
    if diag.iter().any(|&d| d == 0) {
        return Err(Error::SingularGram);
    }
    Ok(diag.into_iter().filter(|&d| d > 1).collect())
}

// ---------------------------------------------------------------------------
// Labeled Gram tables and class arithmetic
// ---------------------------------------------------------------------------

/// A symmetric pairing table for labeled divisor classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramTable {
    labels: Vec<String>,
    gram: Vec<Vec<i64>>,
}

impl GramTable {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<i64>>) -> Result<GramTable> {
        let n = labels.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::Unsupported("Gram matrix shape mismatch".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Unsupported("Gram matrix not symmetric".into()));
                }
            }
        }
        Ok(GramTable { labels, gram })
    }

    pub fn from_strs(labels: &[&str], gram: &[&[i64]]) -> Result<GramTable> {
        GramTable::new(
            labels.iter().map(|s| s.to_string()).collect(),
            gram.iter().map(|r| r.to_vec()).collect(),
        )
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let n = self.labels.len();
        let mut acc = 0;
        for i in 0..n {
            for j in 0..n {
                acc += a[i] * self.gram[i][j] * b[j];
            }
        }
        acc
    }

    /// Parse an integer combination such as `2h - C + R'` into coefficients
    /// over the table labels.
    pub fn parse_expr(&self, expr: &str) -> Result<Vec<i64>> {
        let mut coeffs = vec![0i64; self.labels.len()];
        let mut chars = expr.chars().peekable();
        let mut sign = 1i64;
        let mut saw_any = false;
        loop {
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
            match chars.peek() {
                None => break,
                Some('+') => {
                    chars.next();
                    sign = 1;
                    continue;
                }
                Some('-') => {
                    chars.next();
                    sign = -1;
                    continue;
                }
                _ => {}
            }
            while chars.peek().is_some_and(|c| c.is_whitespace()) {
                chars.next();
            }
            let mut num = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                num.push(chars.next().unwrap());
            }
            let coeff: i64 = if num.is_empty() {
                1
            } else {
                num.parse()
                    .map_err(|_| Error::ExpressionParse(expr.to_string()))?
            };
            while chars.peek().is_some_and(|c| c.is_whitespace() || *c == '*') {
                chars.next();
            }
            let mut label = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_alphanumeric() || *c == '\'' || *c == '_')
            {
                label.push(chars.next().unwrap());
            }
            if label.is_empty() {
                return Err(Error::ExpressionParse(expr.to_string()));
            }
            let idx = self
                .labels
                .iter()
                .position(|l| l == &label)
                .ok_or(Error::UnknownLabel(label))?;
            coeffs[idx] += sign * coeff;
            sign = 1;
            saw_any = true;
        }
        if !saw_any {
            return Err(Error::ExpressionParse(expr.to_string()));
        }
        Ok(coeffs)
    }
}

/// Result of evaluating an integer combination in a Gram table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassArithmetic {
    pub coeffs: Vec<i64>,
    pub self_intersection: i64,
    /// Pairing with each generator, in table label order.
    pub pairings: Vec<i64>,
    /// `1 + D^2/2` when the self-intersection is even.
    pub genus: Option<i64>,
}

/// Exact lattice arithmetic of a labeled integer combination.
pub fn k3_class_arith(table: &GramTable, expr: &str) -> Result<ClassArithmetic> {
    let coeffs = table.parse_expr(expr)?;
    let n = table.labels().len();
    let self_intersection = table.pairing(&coeffs, &coeffs);
    let mut pairings = Vec::with_capacity(n);
    for i in 0..n {
        let mut unit = vec![0i64; n];
        unit[i] = 1;
        pairings.push(table.pairing(&coeffs, &unit));
    }
    let genus = if self_intersection % 2 == 0 {
        Some(1 + self_intersection / 2)
    } else {
        None
    };
    Ok(ClassArithmetic {
        coeffs,
        self_intersection,
        pairings,
        genus,
    })
}
