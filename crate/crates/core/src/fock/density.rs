use super::blocks::JointBlocks;
use super::layout::{Layout, ModeLabel, ModeName};
use crate::error::{Error, Result};
use crate::linalg::{HermitianEigen, Matrix, HERMITIAN_TOL};
use crate::C64;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

/// Hermitian operator over a truncated multi-mode Fock space, stored as
/// sorted, duplicate-free `(row, col, value)` triplets.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: Layout,
    entries: Vec<(usize, usize, C64)>,
}

/// Anything from which reduced states over a subset of modes can be taken.
pub trait Marginals {
    /// Mode names, in layout order.
    fn mode_names(&self) -> Vec<ModeName>;
    /// Reduced state on `keep` (in this state's layout order).
    fn marginal(&self, keep: &[ModeName]) -> Result<DensityMatrix>;
}

impl DensityMatrix {
    /// Build from unsorted triplets; duplicates are summed in insertion order
    /// and exact zeros dropped.
    pub fn from_triplets(modes: Vec<ModeLabel>, triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        Self::from_triplets_in(Layout::new(modes)?, triplets)
    }

    pub(crate) fn from_triplets_in(layout: Layout, mut triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        let dim = layout.dim();
        if let Some(&(r, c, _)) = triplets.iter().find(|&&(r, c, _)| r >= dim || c >= dim) {
            return Err(Error::DimensionMismatch(r.max(c), dim));
        }
        // stable sort keeps duplicate summation order deterministic
        triplets.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut entries: Vec<(usize, usize, C64)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match entries.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => entries.push((r, c, v)),
            }
        }
        entries.retain(|e| e.2 != C64::zero());
        Ok(Self { layout, entries })
    }

    /// Build from a dense matrix; dimension must match the layout.
    pub fn from_dense(modes: Vec<ModeLabel>, m: &Matrix) -> Result<Self> {
        let layout = Layout::new(modes)?;
        if !m.is_square() || m.rows() != layout.dim() {
            return Err(Error::DimensionMismatch(m.rows(), layout.dim()));
        }
        let mut triplets = Vec::new();
        for i in 0..m.rows() {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != C64::zero() {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets_in(layout, triplets)
    }

    /// Diagonal state with the given real weights.
    pub fn from_diagonal(modes: Vec<ModeLabel>, diag: &[(usize, f64)]) -> Result<Self> {
        let t = diag.iter().map(|&(i, v)| (i, i, C64::new(v, 0.0))).collect();
        Self::from_triplets(modes, t)
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.layout.dim();
        let mut m = Matrix::zeros(n, n);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn modes(&self) -> &[ModeLabel] {
        self.layout.modes()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn entries(&self) -> &[(usize, usize, C64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        match self.entries.binary_search_by(|e| (e.0, e.1).cmp(&(r, c))) {
            Ok(p) => self.entries[p].2,
            Err(_) => C64::zero(),
        }
    }

    pub fn trace(&self) -> f64 {
        self.entries.iter().filter(|e| e.0 == e.1).map(|e| e.2.re).sum()
    }

    /// True when every stored entry lies on the diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|e| e.0 == e.1)
    }

    /// Largest `|ρ_ij − conj(ρ_ji)|` over the stored pattern.
    pub fn hermitian_deviation(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, &(r, c, v)| m.max((v - self.get(c, r).conj()).norm()))
    }

    /// Largest stored modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, e| m.max(e.2.norm()))
    }

    /// Error unless Hermitian to the library tolerance.
    pub fn check_hermitian(&self) -> Result<()> {
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            e.2 *= s;
        }
        out.entries.retain(|e| e.2 != C64::zero());
        out
    }

    /// Entry-wise sum of two operators on the same layout.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_layout(other)?;
        let mut t = self.entries.clone();
        t.extend_from_slice(&other.entries);
        Self::from_triplets_in(self.layout.clone(), t)
    }

    /// `Σ_k w_k ρ_k` over operators sharing one layout.
    pub fn linear_combination(terms: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?.1;
        let mut t = Vec::new();
        for &(w, m) in terms {
            first.same_layout(m)?;
            t.extend(m.entries.iter().map(|&(r, c, v)| (r, c, v * w)));
        }
        Self::from_triplets_in(first.layout.clone(), t)
    }

    pub(crate) fn same_layout(&self, other: &Self) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    /// Divide by the trace.
    pub fn renormalized(&self) -> Result<Self> {
        let t = self.trace();
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("cannot renormalise operator with trace {t}")));
        }
        Ok(self.scaled(1.0 / t))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        tensor_product(self, other)
    }

    /// Trace out the listed modes.
    pub fn partial_trace(&self, discard: &[ModeName]) -> Result<Self> {
        let split = self.layout.split(discard)?;
        let mut t = Vec::new();
        for &(r, c, v) in &self.entries {
            let (kr, dr) = split.project(r);
            let (kc, dc) = split.project(c);
            if dr == dc {
                t.push((kr, kc, v));
            }
        }
        Self::from_triplets_in(split.kept, t)
    }

    /// Eigenvalues of the populated part of the operator, descending. Basis
    /// states that never appear in the stored pattern contribute exact zeros,
    /// which are not listed.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        let mut vals = if self.is_diagonal() {
            self.entries.iter().map(|e| e.2.re).collect()
        } else {
            let jb = JointBlocks::new(&[self])?;
            let mut v = Vec::new();
            for b in 0..jb.len() {
                v.extend(jb.eigen(b, 0, false)?.values);
            }
            v
        };
        vals.sort_by(|a: &f64, b| b.total_cmp(a));
        Ok(vals)
    }
}

impl Marginals for DensityMatrix {
    fn mode_names(&self) -> Vec<ModeName> {
        self.layout.names()
    }

    fn marginal(&self, keep: &[ModeName]) -> Result<DensityMatrix> {
        for &k in keep {
            if self.layout.position(k).is_none() {
                return Err(Error::UnknownMode(k));
            }
        }
        let discard: Vec<ModeName> = self.layout.names().into_iter().filter(|n| !keep.contains(n)).collect();
        self.partial_trace(&discard)
    }
}

/// Kronecker product of two states on disjoint modes.
pub fn tensor_product(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let mut modes = a.modes().to_vec();
    modes.extend_from_slice(b.modes());
    let layout = Layout::new(modes)?;
    let db = b.dim();
    let mut t = Vec::with_capacity(a.nnz() * b.nnz());
    for &(r1, c1, v1) in &a.entries {
        for &(r2, c2, v2) in &b.entries {
            t.push((r1 * db + r2, c1 * db + c2, v1 * v2));
        }
    }
    DensityMatrix::from_triplets_in(layout, t)
}

/// Trace out `discard` from `rho`.
pub fn partial_trace(rho: &DensityMatrix, discard: &[ModeName]) -> Result<DensityMatrix> {
    rho.partial_trace(discard)
}

/// Full dense eigendecomposition (descending eigenvalues, unitary columns).
/// Intended for small dimensions; assembled block by block.
pub fn hermitian_eigendecomposition(rho: &DensityMatrix) -> Result<HermitianEigen> {
    rho.check_hermitian()?;
    let n = rho.dim();
    let mut pairs: Vec<(f64, Vec<(usize, C64)>)> = Vec::with_capacity(n);
    let jb = JointBlocks::new(&[rho])?;
    let mut covered = alloc::vec![false; n];
    for b in 0..jb.len() {
        let idx = jb.indices(b);
        for &i in idx {
            covered[i] = true;
        }
        let e = jb.eigen(b, 0, true)?;
        for (k, &lam) in e.values.iter().enumerate() {
            let col = e.vector(k);
            pairs.push((lam, idx.iter().copied().zip(col).collect()));
        }
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            pairs.push((0.0, alloc::vec![(i, C64::new(1.0, 0.0))]));
        }
    }
    // descending; ties by first support index for determinism
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1[0].0.cmp(&b.1[0].0)));
    let mut vectors = Matrix::zeros(n, n);
    for (col, (_, v)) in pairs.iter().enumerate() {
        for &(i, z) in v {
            vectors[(i, col)] = z;
        }
    }
    Ok(HermitianEigen { values: pairs.iter().map(|p| p.0).collect(), vectors })
}
