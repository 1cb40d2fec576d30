//! Exact integer linear algebra: lattice vectors, integer matrices, Hermite
//! normal form, determinants, integer kernels and sublattice coordinates.
//!
//! All arithmetic is checked; overflow surfaces as [`Error::Overflow`].

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector(Vec<i64>);

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticeVector {
    fn from(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }
}

impl From<&[i64]> for LatticeVector {
    fn from(coords: &[i64]) -> Self {
        LatticeVector(coords.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for LatticeVector {
    fn from(coords: [i64; N]) -> Self {
        LatticeVector(coords.to_vec())
    }
}

pub(crate) fn to_i64(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| Error::Overflow)
}

impl LatticeVector {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVector(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        LatticeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn max_norm(&self) -> u64 {
        self.0.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    fn check_rank(&self, other: &LatticeVector) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch { expected: self.rank(), got: other.rank() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &LatticeVector) -> Result<LatticeVector> {
        self.check_rank(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticeVector)
    }

    pub fn checked_sub(&self, other: &LatticeVector) -> Result<LatticeVector> {
        self.check_rank(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticeVector)
    }

    pub fn checked_scale(&self, k: i64) -> Result<LatticeVector> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(LatticeVector)
    }

    pub fn neg(&self) -> Result<LatticeVector> {
        self.checked_scale(-1)
    }

    pub fn dot(&self, other: &LatticeVector) -> Result<i64> {
        self.check_rank(other)?;
        let mut acc: i128 = 0;
        for (a, b) in self.0.iter().zip(&other.0) {
            acc = acc.checked_add(*a as i128 * *b as i128).ok_or(Error::Overflow)?;
        }
        to_i64(acc)
    }

    /// Greatest common divisor of the coordinates (0 for the zero vector).
    pub fn content(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &c| g.gcd(&c.unsigned_abs()))
    }

    /// Divides by the gcd of the coordinates.
    pub fn primitive(&self) -> Result<LatticeVector> {
        let g = self.content();
        if g == 0 {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector(self.0.iter().map(|&c| c / g as i64).collect()))
    }

    /// Sum of a nonempty or empty list of vectors of the given rank.
    pub fn sum<'a>(rank: usize, vs: impl IntoIterator<Item = &'a LatticeVector>) -> Result<LatticeVector> {
        let mut acc = LatticeVector::zero(rank);
        for v in vs {
            acc = acc.checked_add(v)?;
        }
        Ok(acc)
    }
}

pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    v.primitive()
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadMatrix(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntegerMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::BadMatrix(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            entries.extend_from_slice(r);
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, entries })
    }

    pub fn from_vectors(rows: &[LatticeVector], cols: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> = rows.iter().map(|v| v.coords().to_vec()).collect();
        Self::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<LatticeVector> {
        (0..self.rows).map(|r| LatticeVector::from(self.row(r))).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntegerMatrix {
        let mut t = IntegerMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == i64::from(r == c)))
    }

    pub fn checked_mul(&self, other: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc = acc
                        .checked_add(self.get(r, k) as i128 * other.get(k, c) as i128)
                        .ok_or(Error::Overflow)?;
                }
                out.set(r, c, to_i64(acc)?);
            }
        }
        Ok(out)
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.rank() != self.cols {
            return Err(Error::RankMismatch { expected: self.cols, got: v.rank() });
        }
        (0..self.rows)
            .map(|r| LatticeVector::from(self.row(r)).dot(v))
            .collect::<Result<Vec<_>>>()
            .map(LatticeVector::new)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// row[target] = p*row[a] + q*row[b], row[other] = r*row[a] + s*row[b]
    fn combine_rows(&mut self, a: usize, b: usize, p: i64, q: i64, r: i64, s: i64) -> Result<()> {
        for c in 0..self.cols {
            let x = self.get(a, c) as i128;
            let y = self.get(b, c) as i128;
            let na = to_i64(p as i128 * x + q as i128 * y)?;
            let nb = to_i64(r as i128 * x + s as i128 * y)?;
            self.set(a, c, na);
            self.set(b, c, nb);
        }
        Ok(())
    }

    fn sub_row_multiple(&mut self, target: usize, src: usize, k: i64) -> Result<()> {
        for c in 0..self.cols {
            let v = self.get(target, c) as i128 - k as i128 * self.get(src, c) as i128;
            self.set(target, c, to_i64(v)?);
        }
        Ok(())
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row Hermite normal form: returns `(H, U)` with `H = U * M`, `U` unimodular,
/// `H` in row echelon form with positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, and zero rows at the bottom.
pub fn hermite_normal_form(m: &IntegerMatrix) -> Result<(IntegerMatrix, IntegerMatrix)> {
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        // move a nonzero entry into the pivot position
        if h.get(pivot_row, col) == 0 {
            if let Some(r) = (pivot_row + 1..m.rows).find(|&r| h.get(r, col) != 0) {
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
            } else {
                continue;
            }
        }
        for r in pivot_row + 1..m.rows {
            let b = h.get(r, col);
            if b == 0 {
                continue;
            }
            let a = h.get(pivot_row, col);
            let (g, x, y) = ext_gcd(a, b);
            let (bg, ag) = (b / g, a / g);
            h.combine_rows(pivot_row, r, x, y, -bg, ag)?;
            u.combine_rows(pivot_row, r, x, y, -bg, ag)?;
        }
        if h.get(pivot_row, col) < 0 {
            for c in 0..h.cols {
                h.set(pivot_row, c, h.get(pivot_row, c).checked_neg().ok_or(Error::Overflow)?);
            }
            for c in 0..u.cols {
                u.set(pivot_row, c, u.get(pivot_row, c).checked_neg().ok_or(Error::Overflow)?);
            }
        }
        let p = h.get(pivot_row, col);
        for r in 0..pivot_row {
            let q = Integer::div_floor(&h.get(r, col), &p);
            if q != 0 {
                h.sub_row_multiple(r, pivot_row, q)?;
                u.sub_row_multiple(r, pivot_row, q)?;
            }
        }
        pivot_row += 1;
    }
    Ok((h, u))
}

/// Pivot column of each nonzero row of a matrix in row echelon form.
pub(crate) fn pivot_columns(h: &IntegerMatrix) -> Vec<usize> {
    (0..h.rows()).filter_map(|r| (0..h.cols()).find(|&c| h.get(r, c) != 0)).collect()
}

pub fn rank(vectors: &[LatticeVector], n: usize) -> Result<usize> {
    if vectors.is_empty() {
        return Ok(0);
    }
    let (h, _) = hermite_normal_form(&IntegerMatrix::from_vectors(vectors, n)?)?;
    Ok(pivot_columns(&h).len())
}

pub(crate) fn det_i128(m: &[Vec<i128>]) -> Result<i128> {
    let n = m.len();
    if n == 0 {
        return Ok(1);
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Error::Overflow)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

pub fn abs_determinant(m: &IntegerMatrix) -> Result<u64> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let rows: Vec<Vec<i128>> = (0..m.rows()).map(|r| m.row(r).iter().map(|&x| x as i128).collect()).collect();
    u64::try_from(det_i128(&rows)?.unsigned_abs()).map_err(|_| Error::Overflow)
}

/// Basis (in HNF) of the integer vectors orthogonal to every vector in `rows`.
pub fn kernel_basis(rows: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    if rows.is_empty() {
        return Ok((0..n).map(|i| LatticeVector::unit(n, i)).collect());
    }
    let a = IntegerMatrix::from_vectors(rows, n)?;
    let (h, u) = hermite_normal_form(&a.transpose())?;
    let kernel: Vec<LatticeVector> = (0..h.rows())
        .filter(|&r| h.row(r).iter().all(|&x| x == 0))
        .map(|r| LatticeVector::from(u.row(r)))
        .collect();
    canonical_basis(&kernel, n)
}

/// HNF rows of the lattice generated by `vectors`, zero rows dropped.
pub fn canonical_basis(vectors: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let (h, _) = hermite_normal_form(&IntegerMatrix::from_vectors(vectors, n)?)?;
    Ok(h.row_vectors().into_iter().filter(|v| !v.is_zero()).collect())
}

/// Basis of the saturated lattice `span(vectors) ∩ Z^n`, in HNF.
pub fn saturated_span_basis(vectors: &[LatticeVector], n: usize) -> Result<Vec<LatticeVector>> {
    let nonzero: Vec<LatticeVector> = vectors.iter().filter(|v| !v.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let orth = kernel_basis(&nonzero, n)?;
    if orth.is_empty() {
        return Ok((0..n).map(|i| LatticeVector::unit(n, i)).collect());
    }
    kernel_basis(&orth, n)
}

/// Coordinates with respect to a fixed list of linearly independent vectors.
///
/// `coords(v)` returns numerators over a shared positive denominator, so the
/// expansion is exact even when the vectors generate a proper sublattice.
#[derive(Clone, Debug)]
pub struct LinearChart {
    vectors: Vec<LatticeVector>,
    ambient: usize,
    pivots: Vec<usize>,
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl LinearChart {
    pub fn new(vectors: &[LatticeVector], ambient: usize) -> Result<Self> {
        let k = vectors.len();
        let pivots = if k == 0 {
            Vec::new()
        } else {
            let (h, _) = hermite_normal_form(&IntegerMatrix::from_vectors(vectors, ambient)?)?;
            pivot_columns(&h)
        };
        if pivots.len() != k {
            return Err(Error::BadMatrix("chart vectors are linearly dependent".into()));
        }
        let square: Vec<Vec<i128>> =
            vectors.iter().map(|v| pivots.iter().map(|&c| v.coords()[c] as i128).collect()).collect();
        let mut det = det_i128(&square)?;
        // adj[j][i] = cofactor(i, j)
        let mut adj = vec![vec![0i128; k]; k];
        for i in 0..k {
            for j in 0..k {
                let minor: Vec<Vec<i128>> = (0..k)
                    .filter(|&r| r != i)
                    .map(|r| (0..k).filter(|&c| c != j).map(|c| square[r][c]).collect())
                    .collect();
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj[j][i] = sign * det_i128(&minor)?;
            }
        }
        if det < 0 {
            det = -det;
            for row in adj.iter_mut() {
                for x in row.iter_mut() {
                    *x = -*x;
                }
            }
        }
        Ok(LinearChart { vectors: vectors.to_vec(), ambient, pivots, adj, det })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    /// |det| of the pivot minor; the shared denominator of `coords`.
    pub fn denominator(&self) -> i128 {
        self.det
    }

    /// `Some((num, den))` with `den * v = Σ num_i g_i`, or `None` if `v` is
    /// not in the span.
    pub fn coords(&self, v: &LatticeVector) -> Result<Option<(Vec<i128>, i128)>> {
        if v.rank() != self.ambient {
            return Err(Error::RankMismatch { expected: self.ambient, got: v.rank() });
        }
        let k = self.dim();
        let mut num = vec![0i128; k];
        for (i, n) in num.iter_mut().enumerate() {
            let mut acc = 0i128;
            for j in 0..k {
                acc = acc
                    .checked_add((v.coords()[self.pivots[j]] as i128).checked_mul(self.adj[j][i]).ok_or(Error::Overflow)?)
                    .ok_or(Error::Overflow)?;
            }
            *n = acc;
        }
        for c in 0..self.ambient {
            let mut acc = 0i128;
            for (i, g) in self.vectors.iter().enumerate() {
                acc = acc.checked_add(num[i].checked_mul(g.coords()[c] as i128).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
            if acc != self.det.checked_mul(v.coords()[c] as i128).ok_or(Error::Overflow)? {
                return Ok(None);
            }
        }
        Ok(Some((num, self.det)))
    }

    pub fn rational_coords(&self, v: &LatticeVector) -> Result<Option<Vec<Rational>>> {
        Ok(self.coords(v)?.map(|(num, den)| num.into_iter().map(|n| Rational::new(n, den)).collect()))
    }

    /// Integer coordinates, `None` if `v` is outside the span or the
    /// coordinates are fractional.
    pub fn integer_coords(&self, v: &LatticeVector) -> Result<Option<Vec<i64>>> {
        match self.coords(v)? {
            None => Ok(None),
            Some((num, den)) => {
                if num.iter().any(|n| n % den != 0) {
                    return Ok(None);
                }
                num.into_iter().map(|n| to_i64(n / den)).collect::<Result<Vec<_>>>().map(Some)
            }
        }
    }

    /// Σ c_i g_i
    pub fn combine(&self, c: &[i64]) -> Result<LatticeVector> {
        let mut acc = LatticeVector::zero(self.ambient);
        for (g, &k) in self.vectors.iter().zip(c) {
            acc = acc.checked_add(&g.checked_scale(k)?)?;
        }
        Ok(acc)
    }
}

/// Solves `A x = b` over the rationals; returns one solution (free variables
/// set to zero) or `None` if the system is inconsistent.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Rational], unknowns: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = Rational::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..=unknowns {
                    let d = m[row][c] * f;
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][unknowns];
    }
    Some(x)
}
