//! Small dense complex matrices and Hermitian eigensolvers.
//!
//! General Hermitian matrices are reduced to real symmetric tridiagonal form
//! by complex Householder reflections followed by a diagonal phase change,
//! then diagonalised by the implicit QL algorithm. Tridiagonal input (the
//! common case for the channel states here) skips the reduction entirely.

use crate::error::{Error, Result};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
#[allow(unused_imports)] // float methods are inherent when std is linked
use num_traits::Float;
use num_traits::Zero;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::zero() {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense real matrix stored column-major, used for eigenvector sets.
#[derive(Debug, Clone, PartialEq)]
pub struct RealColumns {
    n_rows: usize,
    data: Vec<f64>,
}

impl RealColumns {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n_rows: n, data }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        if self.n_rows == 0 {
            0
        } else {
            self.data.len() / self.n_rows
        }
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    fn two_cols_mut(&mut self, j: usize) -> (&mut [f64], &mut [f64]) {
        let n = self.n_rows;
        let (a, b) = self.data[j * n..(j + 2) * n].split_at_mut(n);
        (a, b)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n_rows + i]
    }

    pub fn from_columns(n_rows: usize, data: Vec<f64>) -> Self {
        debug_assert!(n_rows == 0 || data.len() % n_rows == 0);
        Self { n_rows, data }
    }
}

/// Eigenvalues and orthonormal eigenvectors of a real symmetric tridiagonal
/// matrix with diagonal `d` and sub-diagonal `e` (`e.len() == d.len() − 1`).
///
/// Returns eigenvalues in the order produced by QL (unsorted) and, when
/// requested, the eigenvectors as columns.
pub fn tridiagonal_eigen(d: &[f64], e: &[f64], vectors: bool) -> Result<(Vec<f64>, Option<RealColumns>)> {
    let n = d.len();
    if n == 0 {
        return Ok((Vec::new(), vectors.then(|| RealColumns::identity(0))));
    }
    if e.len() + 1 != n {
        return Err(Error::DimensionMismatch(e.len() + 1, n));
    }
    if !vectors {
        return Ok((tridiagonal_eigenvalues(d, e)?, None));
    }
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(core::iter::once(0.0)).collect();
    let mut z = vectors.then(|| RealColumns::identity(n));
    tql(&mut d, &mut e, z.as_mut())?;
    Ok((d, z))
}

/// Eigenvalues (unsorted) of a real symmetric tridiagonal matrix by the
/// root-free rational QL iteration on squared off-diagonals.
///
/// Deflation uses an absolute threshold relative to the largest `|d| + |e|`
/// seen, so every eigenvalue carries an absolute error of order
/// `ε·‖T‖`; this is what spectral sums such as entropies need, and avoids a
/// square root per rotation.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    if n > 0 && e.len() + 1 != n {
        return Err(Error::DimensionMismatch(e.len() + 1, n));
    }
    // QL converges fastest with the large entries at the bottom; eigenvalues
    // are unchanged by reversing the order
    let (mut d, mut e2): (Vec<f64>, Vec<f64>) = if n > 1 && d[0].abs() > d[n - 1].abs() {
        (d.iter().rev().copied().collect(), e.iter().rev().map(|x| x * x).chain(core::iter::once(0.0)).collect())
    } else {
        (d.to_vec(), e.iter().map(|x| x * x).chain(core::iter::once(0.0)).collect())
    };
    let (mut f, mut t, mut b, mut c) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    for l in 0..n {
        let h = d[l].abs() + e2[l].sqrt();
        if t < h {
            t = h;
            b = f64::EPSILON * t;
            c = b * b;
        }
        // e2[n-1] is zero, so the search always stops
        let mut m = l;
        while e2[m] > c {
            m += 1;
        }
        let mut iter = 0;
        while m != l {
            iter += 1;
            if iter > 200 {
                return Err(Error::NotConverged { value: d[l] + f, terms: iter });
            }
            let s = e2[l].sqrt();
            let g = d[l];
            let p = (d[l + 1] - g) / (2.0 * s);
            let r = p.hypot(1.0);
            d[l] = s / (p + if p >= 0.0 { r } else { -r });
            let h = g - d[l];
            for x in &mut d[l + 1..] {
                *x -= h;
            }
            f += h;
            let mut g = if d[m] == 0.0 { b } else { d[m] };
            let mut h = g;
            let mut s = 0.0;
            for i in (l..m).rev() {
                let p = g * h;
                let r = p + e2[i];
                e2[i + 1] = s * r;
                s = e2[i] / r;
                d[i + 1] = h + s * (h + d[i]);
                g = d[i] - e2[i] / g;
                if g == 0.0 {
                    g = b;
                }
                h = g * p / r;
            }
            e2[l] = s * g;
            d[l] = h;
            if h == 0.0 || e2[l].abs() <= (c / h).abs() {
                break;
            }
            e2[l] *= h;
            if e2[l] == 0.0 {
                break;
            }
        }
        d[l] += f;
    }
    Ok(d)
}

/// Implicit QL with Wilkinson-type shifts on `(d, e)`, `e[i]` coupling `i` and `i+1`.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut RealColumns>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                return Err(Error::NotConverged { value: d[l], terms: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let (zi, zi1) = z.two_cols_mut(i);
                    for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                        let f = *b;
                        *b = s * *a + c * f;
                        *a = c * *a - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix,
}

/// Tolerance on `|A − A†|` (relative to the largest entry, floor 1) accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) fn check_hermitian(a: &Matrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(a.rows(), a.cols()));
    }
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    Ok(())
}

/// Eigenvalues (descending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &Matrix) -> Result<HermitianEigen> {
    check_hermitian(a)?;
    let n = a.rows();
    let (d, e, q) = householder_tridiagonal(a, true);
    let (d, e_abs, phase) = phase_fix(&d, &e);
    let (vals, z) = tridiagonal_eigen(&d, &e_abs, true)?;
    let z = z.expect("vectors requested");
    let q = q.expect("reflectors requested");
    // V = Q · diag(phase) · Z
    let mut qd = q;
    for i in 0..n {
        for k in 0..n {
            qd[(i, k)] *= phase[k];
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    let mut vectors = Matrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let zc = z.col(src);
        for i in 0..n {
            let row = qd.row(i);
            let mut acc = C64::zero();
            for (k, &zk) in zc.iter().enumerate() {
                if zk != 0.0 {
                    acc += row[k] * zk;
                }
            }
            vectors[(i, col)] = acc;
        }
    }
    let values = order.iter().map(|&i| vals[i]).collect();
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only (descending) of a Hermitian matrix.
pub fn hermitian_eigenvalues(a: &Matrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    let (d, e, _) = householder_tridiagonal(a, false);
    let (d, e_abs, _) = phase_fix(&d, &e);
    let (mut vals, _) = tridiagonal_eigen(&d, &e_abs, false)?;
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}

/// Map a Hermitian tridiagonal `(d, e)` with complex sub-diagonal onto a real
/// one with the same spectrum: `T = D · T_real · D†` with `D = diag(phase)`.
pub fn phase_fix(d: &[f64], e: &[C64]) -> (Vec<f64>, Vec<f64>, Vec<C64>) {
    let n = d.len();
    let mut phase = Vec::with_capacity(n);
    if n > 0 {
        phase.push(C64::new(1.0, 0.0));
    }
    let mut e_abs = Vec::with_capacity(e.len());
    for (k, &ek) in e.iter().enumerate() {
        let m = ek.norm();
        let next = if m > 0.0 { phase[k] * (ek / m) } else { phase[k] };
        phase.push(next);
        e_abs.push(m);
    }
    (d.to_vec(), e_abs, phase)
}

/// Householder reduction `Q† A Q = T` of a Hermitian matrix. Returns the real
/// diagonal, the complex sub-diagonal `T[k+1,k]`, and optionally `Q`.
fn householder_tridiagonal(a: &Matrix, want_q: bool) -> (Vec<f64>, Vec<C64>, Option<Matrix>) {
    let n = a.rows();
    let mut a = a.clone();
    let mut q = want_q.then(|| Matrix::identity(n));
    let mut v = vec![C64::zero(); n];
    let mut p = vec![C64::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let norm_x = (lo..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        let tail_norm = (lo + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>();
        if tail_norm == 0.0 {
            continue;
        }
        let x0 = a[(lo, k)];
        let ph = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -ph * norm_x;
        for i in 0..n {
            v[i] = if i < lo { C64::zero() } else { a[(i, k)] };
        }
        v[lo] -= alpha;
        let vnorm = (lo..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in v[lo..].iter_mut() {
            *vi /= vnorm;
        }
        // p = A v over the active block (rows k..n)
        for i in k..n {
            let row = a.row(i);
            let mut acc = C64::zero();
            for j in lo..n {
                acc += row[j] * v[j];
            }
            p[i] = acc;
        }
        let kk: C64 = (lo..n).map(|i| v[i].conj() * p[i]).sum();
        // w = p − K v ; A ← A − 2(v w† + w v†)
        for i in k..n {
            p[i] -= kk * v[i];
        }
        for i in k..n {
            for j in k..n {
                let delta = v[i] * p[j].conj() + p[i] * v[j].conj();
                if delta != C64::zero() {
                    a[(i, j)] -= delta * 2.0;
                }
            }
        }
        if let Some(q) = q.as_mut() {
            // Q ← Q (I − 2 v v†)
            for i in 0..n {
                let row = q.row(i);
                let mut acc = C64::zero();
                for j in lo..n {
                    acc += row[j] * v[j];
                }
                let acc2 = acc * 2.0;
                for j in lo..n {
                    q[(i, j)] -= acc2 * v[j].conj();
                }
            }
        }
    }
    let d = (0..n).map(|i| a[(i, i)].re).collect();
    let e = (0..n.saturating_sub(1)).map(|i| a[(i + 1, i)]).collect();
    (d, e, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(n: usize, seed: u64) -> Matrix {
        // small LCG keeps the test self-contained and deterministic
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(next(), 0.0);
            for j in i + 1..n {
                let v = C64::new(next(), next());
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        m
    }

    fn reconstruct(e: &HermitianEigen) -> Matrix {
        let lam = Matrix::from_diag(&e.values);
        e.vectors.matmul(&lam).unwrap().matmul(&e.vectors.adjoint()).unwrap()
    }

    #[test]
    fn diagonal_sorted() {
        let m = Matrix::from_diag(&[0.1, 0.7, 0.2]);
        let e = hermitian_eigen(&m).unwrap();
        assert_eq!(e.values, vec![0.7, 0.2, 0.1]);
    }

    #[test]
    fn pure_projector() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let psi = [C64::new(s, 0.0), C64::new(0.0, s)];
        let m = Matrix::from_fn(2, 2, |i, j| psi[i] * psi[j].conj());
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15);
        assert!(e.values[1].abs() < 1e-15);
    }

    #[test]
    fn random_six_by_six_trace_identities() {
        let m = random_hermitian(6, 7);
        let e = hermitian_eigen(&m).unwrap();
        let tr = m.trace().re;
        let tr2 = m.matmul(&m).unwrap().trace().re;
        assert!((e.values.iter().sum::<f64>() - tr).abs() < 1e-12);
        assert!((e.values.iter().map(|v| v * v).sum::<f64>() - tr2).abs() < 1e-12);
        assert!(reconstruct(&e).sub(&m).unwrap().max_abs() < 1e-12);
        let vv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
        assert!(vv.sub(&Matrix::identity(6)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Matrix::identity(3);
        m[(0, 1)] = C64::new(0.5, 0.0);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let d = [1.0, 2.0, 0.5, -0.3];
        let e = [0.3, -0.2, 0.9];
        let (mut v, z) = tridiagonal_eigen(&d, &e, true).unwrap();
        let z = z.unwrap();
        // check T z_j = λ_j z_j
        for j in 0..4 {
            let zj = z.col(j);
            for i in 0..4 {
                let mut tz = d[i] * zj[i];
                if i > 0 {
                    tz += e[i - 1] * zj[i - 1];
                }
                if i < 3 {
                    tz += e[i] * zj[i + 1];
                }
                assert!((tz - v[j] * zj[i]).abs() < 1e-13);
            }
        }
        let m = Matrix::from_fn(4, 4, |i, j| {
            C64::new(
                if i == j {
                    d[i]
                } else if i == j + 1 {
                    e[j]
                } else if j == i + 1 {
                    e[i]
                } else {
                    0.0
                },
                0.0,
            )
        });
        v.sort_by(|a, b| b.total_cmp(a));
        let dense = hermitian_eigenvalues(&m).unwrap();
        for (a, b) in v.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    proptest! {
        #[test]
        fn reconstruction_and_unitarity(n in 1usize..12, seed in any::<u64>()) {
            let m = random_hermitian(n, seed);
            let e = hermitian_eigen(&m).unwrap();
            prop_assert!(reconstruct(&e).sub(&m).unwrap().max_abs() < 1e-10);
            let vv = e.vectors.adjoint().matmul(&e.vectors).unwrap();
            prop_assert!(vv.sub(&Matrix::identity(n)).unwrap().max_abs() < 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
            let only = hermitian_eigenvalues(&m).unwrap();
            for (a, b) in only.iter().zip(&e.values) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn rational_ql_matches_ql_with_vectors(
            d in proptest::collection::vec(-2.0f64..2.0, 1..40),
            e_raw in proptest::collection::vec(-1.0f64..1.0, 40),
        ) {
            let e = &e_raw[..d.len() - 1];
            let mut fast = tridiagonal_eigenvalues(&d, e).unwrap();
            let (mut slow, _) = tridiagonal_eigen(&d, e, true).unwrap();
            fast.sort_by(|a, b| a.total_cmp(b));
            slow.sort_by(|a, b| a.total_cmp(b));
            for (a, b) in fast.iter().zip(&slow) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rational_ql_on_graded_chain() {
        // thermal-like graded chain: small eigenvalues keep absolute accuracy
        let n = 300;
        let t2: f64 = 0.9;
        let d: Vec<f64> = (0..n).map(|k| t2.powi(k as i32) * (1.0 + 0.1 * k as f64)).collect();
        let e: Vec<f64> = (0..n - 1).map(|k| 0.3 * t2.powf(k as f64 + 0.5)).collect();
        let mut fast = tridiagonal_eigenvalues(&d, &e).unwrap();
        let (mut slow, _) = tridiagonal_eigen(&d, &e, true).unwrap();
        fast.sort_by(|a, b| a.total_cmp(b));
        slow.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((fast.iter().sum::<f64>() - d.iter().sum::<f64>()).abs() < 1e-12);
    }
}
