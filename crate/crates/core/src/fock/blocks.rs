use super::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, phase_fix, tridiagonal_eigen, Matrix, RealColumns};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

/// Connected components of the union sparsity pattern of several operators
/// sharing one layout, with each operator's entries re-indexed per block.
///
/// Blocks are ordered by their smallest basis index and list their indices in
/// increasing order, so everything derived from them is deterministic.
#[derive(Debug, Clone)]
pub struct JointBlocks {
    blocks: Vec<Vec<usize>>,
    /// `local[m][b]`: entries of operator `m` inside block `b`, in local coordinates.
    local: Vec<Vec<Vec<(usize, usize, C64)>>>,
}

/// Eigenvectors of one block.
#[derive(Debug, Clone)]
pub enum BlockVectors {
    /// Block was tridiagonal: eigenvectors are `diag(phase) · z`.
    Tridiagonal { phase: Vec<C64>, z: RealColumns },
    /// General block: eigenvectors as dense columns.
    Dense(Matrix),
}

/// Eigen-decomposition of one block, eigenvalues in solver order.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    pub values: Vec<f64>,
    pub vectors: Option<BlockVectors>,
}

impl BlockEigen {
    /// Column `k` of the eigenvector set in local coordinates.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        match self.vectors.as_ref().expect("eigenvectors were not requested") {
            BlockVectors::Tridiagonal { phase, z } => phase.iter().zip(z.col(k)).map(|(&p, &x)| p * x).collect(),
            BlockVectors::Dense(m) => (0..m.rows()).map(|i| m[(i, k)]).collect(),
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl JointBlocks {
    pub fn new(mats: &[&DensityMatrix]) -> Result<Self> {
        let first = mats.first().ok_or_else(|| Error::InvalidParameter("no operators given".into()))?;
        for m in mats {
            first.same_layout(m)?;
        }
        let mut nodes: Vec<usize> = mats.iter().flat_map(|m| m.entries().iter().flat_map(|e| [e.0, e.1])).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let pos = |i: usize| nodes.binary_search(&i).expect("index collected above");
        let mut parent: Vec<usize> = (0..nodes.len()).collect();
        let mut size = vec![1usize; nodes.len()];
        for m in mats {
            for &(r, c, _) in m.entries() {
                if r == c {
                    continue;
                }
                let (a, b) = (find(&mut parent, pos(r)), find(&mut parent, pos(c)));
                if a != b {
                    let (big, small) = if size[a] >= size[b] { (a, b) } else { (b, a) };
                    parent[small] = big;
                    size[big] += size[small];
                }
            }
        }
        let mut block_of_root = vec![usize::MAX; nodes.len()];
        let mut block_of = vec![0usize; nodes.len()];
        let mut local_pos = vec![0usize; nodes.len()];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (p, &idx) in nodes.iter().enumerate() {
            let root = find(&mut parent, p);
            if block_of_root[root] == usize::MAX {
                block_of_root[root] = blocks.len();
                blocks.push(Vec::new());
            }
            let b = block_of_root[root];
            block_of[p] = b;
            local_pos[p] = blocks[b].len();
            blocks[b].push(idx);
        }
        let local = mats
            .iter()
            .map(|m| {
                let mut per_block: Vec<Vec<(usize, usize, C64)>> = vec![Vec::new(); blocks.len()];
                for &(r, c, v) in m.entries() {
                    let (pr, pc) = (pos(r), pos(c));
                    per_block[block_of[pr]].push((local_pos[pr], local_pos[pc], v));
                }
                per_block
            })
            .collect();
        Ok(Self { blocks, local })
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Global basis indices of block `b`, increasing.
    pub fn indices(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    /// Entries of operator `m` in block `b`, local coordinates.
    pub fn entries(&self, b: usize, m: usize) -> &[(usize, usize, C64)] {
        &self.local[m][b]
    }

    /// Operator `m` restricted to block `b`, dense.
    pub fn dense(&self, b: usize, m: usize) -> Matrix {
        let n = self.blocks[b].len();
        let mut out = Matrix::zeros(n, n);
        for &(r, c, v) in &self.local[m][b] {
            out[(r, c)] = v;
        }
        out
    }

    /// Whether operator `m` is tridiagonal inside block `b` (in index order).
    pub fn is_tridiagonal(&self, b: usize, m: usize) -> bool {
        self.local[m][b].iter().all(|&(r, c, _)| r.abs_diff(c) <= 1)
    }

    /// Diagonal and complex sub-diagonal of a tridiagonal block.
    pub fn tridiagonal(&self, b: usize, m: usize) -> (Vec<f64>, Vec<C64>) {
        let n = self.blocks[b].len();
        let mut d = vec![0.0; n];
        let mut e = vec![C64::zero(); n.saturating_sub(1)];
        for &(r, c, v) in &self.local[m][b] {
            if r == c {
                d[r] = v.re;
            } else if r == c + 1 {
                e[c] = v;
            } else if c == r + 1 && e[r] == C64::zero() {
                e[r] = v.conj();
            }
        }
        (d, e)
    }

    /// Eigen-decomposition of operator `m` on block `b`.
    pub fn eigen(&self, b: usize, m: usize, vectors: bool) -> Result<BlockEigen> {
        let n = self.blocks[b].len();
        if n == 1 {
            let v = self.local[m][b].first().map_or(0.0, |e| e.2.re);
            return Ok(BlockEigen {
                values: vec![v],
                vectors: vectors
                    .then(|| BlockVectors::Tridiagonal { phase: vec![C64::new(1.0, 0.0)], z: RealColumns::identity(1) }),
            });
        }
        if self.is_tridiagonal(b, m) {
            let (d, e) = self.tridiagonal(b, m);
            let (d, e_abs, phase) = phase_fix(&d, &e);
            let (values, z) = tridiagonal_eigen(&d, &e_abs, vectors)?;
            return Ok(BlockEigen { values, vectors: z.map(|z| BlockVectors::Tridiagonal { phase, z }) });
        }
        let dense = self.dense(b, m);
        if vectors {
            let e = hermitian_eigen(&dense)?;
            Ok(BlockEigen { values: e.values, vectors: Some(BlockVectors::Dense(e.vectors)) })
        } else {
            Ok(BlockEigen { values: hermitian_eigenvalues(&dense)?, vectors: None })
        }
    }
}
