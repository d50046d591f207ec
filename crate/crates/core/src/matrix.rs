//! Dense complex matrices, row-major.

use std::fmt::{self, Write as _};
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par;

pub type C64 = Complex64;

/// Default tolerance for unitarity and equality checks.
pub const TOL_EQUALITY: f64 = 1e-9;
/// Default relative tolerance for rank decisions.
pub const TOL_RANK: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m.data[i * n + i] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Matrix product.
    pub fn multiply(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![C64::new(0.0, 0.0); n * p];
        for i in 0..n {
            let out_row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * p..(k + 1) * p];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { rows: n, cols: p, data: out }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> ComplexMatrix {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).map(|i| self.data[i * self.cols + i]).sum())
    }

    /// Kronecker product; `self`'s indices are the major ones.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (ar, ac, br, bc) = (self.rows, self.cols, other.rows, other.cols);
        let cols = ac * bc;
        let mut data = vec![C64::new(0.0, 0.0); ar * br * cols];
        for i in 0..ar {
            for j in 0..ac {
                let a = self.data[i * ac + j];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..br {
                    let row = i * br + k;
                    let dst = &mut data[row * cols + j * bc..row * cols + (j + 1) * bc];
                    for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                        *d = a * b;
                    }
                }
            }
        }
        ComplexMatrix { rows: ar * br, cols, data }
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance; infinite when shapes differ.
    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert-Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &ComplexMatrix) -> C64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// `‖a a† − I‖_F ≤ tol`; false for non-square input.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect().is_some_and(|d| d <= tol)
    }

    /// `‖a a† − I‖_F`, or `None` for non-square input.
    pub fn unitarity_defect(&self) -> Option<f64> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s: C64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b.conj()).sum();
                if i == j {
                    s -= 1.0;
                }
                acc += s.norm_sqr();
            }
        }
        Some(acc.sqrt())
    }

    pub fn pow(&self, exponent: u64) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut result = ComplexMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(result)
    }

    /// Row-major flattening into a column vector.
    pub fn vec(&self) -> ComplexMatrix {
        ComplexMatrix { rows: self.data.len(), cols: 1, data: self.data.clone() }
    }

    /// Inverse of [`ComplexMatrix::vec`] for square targets.
    pub fn unvec(v: &ComplexMatrix) -> Result<ComplexMatrix> {
        if v.cols != 1 && v.rows != 1 {
            return Err(Error::DimensionMismatch("unvec expects a vector".into()));
        }
        let len = v.data.len();
        let n = (len as f64).sqrt().round() as usize;
        if n * n != len {
            return Err(Error::DimensionMismatch(format!("length {len} is not a perfect square")));
        }
        Ok(ComplexMatrix { rows: n, cols: n, data: v.data.clone() })
    }

    /// `max |a_ij − conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        Ok(worst)
    }

    /// Ascending eigenvalues of the Hermitian part `(A + A†)/2`.
    ///
    /// Cyclic Jacobi on the real symmetric embedding `[[Re, −Im], [Im, Re]]`,
    /// whose spectrum is that of `A` with every eigenvalue doubled.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let m = 2 * n;
        let mut a = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                a[i * m + j] = z.re;
                a[(i + n) * m + j + n] = z.re;
                a[(i + n) * m + j] = z.im;
                a[i * m + j + n] = -z.im;
            }
        }
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for _sweep in 0..100 {
            let off: f64 = (0..m)
                .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i * m + j].powi(2))
                .sum::<f64>()
                .sqrt();
            if off <= 1e-15 * scale.max(f64::MIN_POSITIVE) {
                break;
            }
            for p in 0..m {
                for q in p + 1..m {
                    let apq = a[p * m + q];
                    if apq.abs() <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..m {
                        let akp = a[k * m + p];
                        let akq = a[k * m + q];
                        a[k * m + p] = c * akp - s * akq;
                        a[k * m + q] = s * akp + c * akq;
                    }
                    for k in 0..m {
                        let apk = a[p * m + k];
                        let aqk = a[q * m + k];
                        a[p * m + k] = c * apk - s * aqk;
                        a[q * m + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..m).map(|i| a[i * m + i]).collect();
        eig.sort_by(f64::total_cmp);
        // each eigenvalue appears twice; keep one of each pair
        Ok(eig.into_iter().step_by(2).collect())
    }

    /// Dimension of the kernel at relative tolerance `tol`.
    ///
    /// Householder QR with column pivoting; a diagonal entry of `R` counts
    /// toward the rank when it exceeds `tol` times the first (largest) one.
    pub fn nullspace_dimension(&self, tol: f64) -> usize {
        self.cols - self.rank(tol)
    }

    pub fn rank(&self, tol: f64) -> usize {
        let (m, n) = (self.rows, self.cols);
        if m == 0 || n == 0 {
            return 0;
        }
        // column-major working copy
        let mut work = vec![C64::new(0.0, 0.0); m * n];
        for i in 0..m {
            for j in 0..n {
                work[j * m + i] = self.data[i * n + j];
            }
        }
        let mut norms: Vec<f64> = work.chunks(m).map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect();
        let steps = m.min(n);
        let mut first = 0.0;
        for k in 0..steps {
            let (pivot, &best) = norms[k..]
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, v)| (i + k, v))
                .expect("nonempty");
            let col_norm = best.sqrt();
            if k == 0 {
                first = col_norm;
                if first == 0.0 {
                    return 0;
                }
            }
            if col_norm <= tol * first {
                return k;
            }
            if pivot != k {
                let (left, right) = work.split_at_mut(pivot * m);
                left[k * m..(k + 1) * m].swap_with_slice(&mut right[..m]);
                norms.swap(k, pivot);
            }
            // exact norm of the pivot column tail
            let x = &work[k * m + k..(k + 1) * m];
            let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if xnorm <= tol * first {
                return k;
            }
            let x0 = x[0];
            let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
            let alpha = -phase * xnorm;
            let mut v: Vec<C64> = x.to_vec();
            v[0] -= alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 > 0.0 && k + 1 < n {
                let tail = &mut work[(k + 1) * m..];
                par::for_each_chunk_mut(tail, m, |_, col| {
                    let c = &mut col[k..];
                    let dot: C64 = v.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                    let s = dot * (2.0 / vnorm2);
                    for (ci, vi) in c.iter_mut().zip(&v) {
                        *ci -= vi * s;
                    }
                });
                let fresh = par::map_range(n - k - 1, |j| {
                    let col = &work[(k + 1 + j) * m..(k + 2 + j) * m];
                    col[k + 1..].iter().map(|z| z.norm_sqr()).sum::<f64>()
                });
                norms[k + 1..].copy_from_slice(&fresh);
            }
        }
        steps
    }

    /// Text dump: `rows cols` header, then one line per row of `re+imj`
    /// entries at 17 significant digits.
    pub fn to_dump(&self) -> String {
        let mut out = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|&z| format_entry(z)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse one matrix from the front of `lines`, leaving the rest unread.
    pub fn parse_dump_prefix<'a, I>(lines: &mut I) -> Result<ComplexMatrix>
    where
        I: Iterator<Item = &'a str>,
    {
        let header = loop {
            match lines.next() {
                Some(l) if l.trim().is_empty() => continue,
                Some(l) => break l,
                None => return Err(Error::Parse("missing dump header".into())),
            }
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header must be `rows cols`, got {header:?}")));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let line = lines.next().ok_or_else(|| Error::Parse(format!("missing row {r}")))?;
            let entries: Vec<C64> = line.split_whitespace().map(parse_entry).collect::<Result<_>>()?;
            if entries.len() != cols {
                return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", entries.len())));
            }
            data.extend(entries);
        }
        ComplexMatrix::from_vec(rows, cols, data)
    }

    pub fn from_dump(text: &str) -> Result<ComplexMatrix> {
        let mut lines = text.lines();
        let m = Self::parse_dump_prefix(&mut lines)?;
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::Parse("trailing content after matrix".into()));
        }
        Ok(m)
    }
}

pub fn format_entry(z: C64) -> String {
    let mut s = String::new();
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    let _ = write!(s, "{:.16e}{}{:.16e}j", z.re, sign, z.im.abs());
    s
}

pub fn parse_entry(token: &str) -> Result<C64> {
    let bad = || Error::Parse(format!("bad complex entry {token:?}"));
    let body = token.strip_suffix('j').ok_or_else(bad)?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re: f64 = body[..split].parse().map_err(|_| bad())?;
    let im: f64 = body[split..].parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on a shape mismatch; use [`ComplexMatrix::multiply`] for checked products.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dump())
    }
}

/// Pauli matrices X, Y, Z.
pub fn pauli_x() -> ComplexMatrix {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    ComplexMatrix { rows: 2, cols: 2, data: vec![o, l, l, o] }
}

pub fn pauli_y() -> ComplexMatrix {
    let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    ComplexMatrix { rows: 2, cols: 2, data: vec![o, -i, i, o] }
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)])
}

/// The swap operator on `C^d ⊗ C^d`.
pub fn swap(d: usize) -> ComplexMatrix {
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for a in 0..d {
        for b in 0..d {
            m[(a * d + b, b * d + a)] = C64::new(1.0, 0.0);
        }
    }
    m
}
