use super::density::{DensityMatrix, Marginals};
use super::layout::{Layout, ModeLabel, ModeName};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::C64;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Zero;

/// Sparse state vector over a truncated multi-mode Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: Layout,
    amps: Vec<(usize, C64)>,
}

impl PureState {
    /// Build from `(flat index, amplitude)` pairs; duplicates are summed.
    pub fn from_amplitudes(modes: Vec<ModeLabel>, amps: Vec<(usize, C64)>) -> Result<Self> {
        Self::from_amplitudes_in(Layout::new(modes)?, amps)
    }

    pub(crate) fn from_amplitudes_in(layout: Layout, mut amps: Vec<(usize, C64)>) -> Result<Self> {
        if let Some(&(i, _)) = amps.iter().find(|a| a.0 >= layout.dim()) {
            return Err(Error::DimensionMismatch(i, layout.dim()));
        }
        amps.sort_by_key(|a| a.0);
        let mut out: Vec<(usize, C64)> = Vec::with_capacity(amps.len());
        for (i, v) in amps {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|a| a.1 != C64::zero());
        Ok(Self { layout, amps: out })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[(usize, C64)] {
        &self.amps
    }

    pub fn amplitude(&self, idx: usize) -> C64 {
        match self.amps.binary_search_by_key(&idx, |a| a.0) {
            Ok(p) => self.amps[p].1,
            Err(_) => C64::zero(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.1.norm_sqr()).sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        BranchSum::single(self.clone()).reduce(&[]).expect("no modes discarded")
    }

    /// Same state with the mode order permuted to `order` (all modes, each once).
    pub fn permuted(&self, order: &[ModeName]) -> Result<Self> {
        if order.len() != self.layout.modes().len() {
            return Err(Error::PartitionMismatch(format!("{} names for {} modes", order.len(), self.layout.modes().len())));
        }
        let mut pos = Vec::with_capacity(order.len());
        for &n in order {
            pos.push(self.layout.position(n).ok_or(Error::UnknownMode(n))?);
        }
        let layout = Layout::new(pos.iter().map(|&p| self.layout.modes()[p]).collect())?;
        let amps = self
            .amps
            .iter()
            .map(|&(i, v)| {
                let occ: Vec<usize> = pos.iter().map(|&p| self.layout.digit(i, p)).collect();
                (layout.index(&occ).expect("same cutoffs"), v)
            })
            .collect();
        Self::from_amplitudes_in(layout, amps)
    }
}

/// Operator `Σ_ij w_ij |ψ_i⟩⟨ψ_j|` over a few branch states sharing a layout.
///
/// Channel outputs are linear in the sender's input operator, so mixtures,
/// coherent superpositions and θ-derivatives all share this form with
/// different weight matrices. Marginals are computed branch pair by branch
/// pair, without ever forming the full operator.
#[derive(Debug, Clone)]
pub struct BranchSum {
    layout: Layout,
    branches: Vec<PureState>,
    weights: Matrix,
}

impl BranchSum {
    pub fn new(branches: Vec<PureState>, weights: Matrix) -> Result<Self> {
        let first = branches.first().ok_or_else(|| Error::InvalidParameter("no branches given".into()))?;
        let layout = first.layout.clone();
        if branches.iter().any(|b| b.layout != layout) {
            return Err(Error::InvalidParameter("branches have different layouts".into()));
        }
        if weights.rows() != branches.len() || weights.cols() != branches.len() {
            return Err(Error::DimensionMismatch(weights.rows(), branches.len()));
        }
        Ok(Self { layout, branches, weights })
    }

    /// `|ψ⟩⟨ψ|` as a branch sum.
    pub fn single(psi: PureState) -> Self {
        Self { layout: psi.layout.clone(), branches: alloc::vec![psi], weights: Matrix::identity(1) }
    }

    /// Same branches, different weights.
    pub fn with_weights(&self, weights: Matrix) -> Result<Self> {
        Self::new(self.branches.clone(), weights)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn branches(&self) -> &[PureState] {
        &self.branches
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    /// Trace of the represented operator.
    pub fn trace(&self) -> f64 {
        let mut t = C64::zero();
        for i in 0..self.branches.len() {
            for j in 0..self.branches.len() {
                let w = self.weights[(i, j)];
                if w == C64::zero() {
                    continue;
                }
                let bi = &self.branches[i];
                let ov: C64 = self.branches[j].amps.iter().map(|&(k, a)| bi.amplitude(k) * a.conj()).sum();
                t += w * ov;
            }
        }
        t.re
    }

    /// Trace out `discard`, returning the operator on the remaining modes.
    pub fn reduce(&self, discard: &[ModeName]) -> Result<DensityMatrix> {
        let split = self.layout.split(discard)?;
        let keyed: Vec<Vec<(usize, usize, C64)>> = self
            .branches
            .iter()
            .map(|b| {
                let mut v: Vec<(usize, usize, C64)> = b
                    .amps
                    .iter()
                    .map(|&(i, a)| {
                        let (k, d) = split.project(i);
                        (d, k, a)
                    })
                    .collect();
                v.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
                v
            })
            .collect();
        let mut triplets = Vec::new();
        for (i, ki) in keyed.iter().enumerate() {
            for (j, kj) in keyed.iter().enumerate() {
                let w = self.weights[(i, j)];
                if w == C64::zero() {
                    continue;
                }
                let (mut p, mut q) = (0, 0);
                while p < ki.len() && q < kj.len() {
                    let (dp, dq) = (ki[p].0, kj[q].0);
                    if dp < dq {
                        p += 1;
                    } else if dq < dp {
                        q += 1;
                    } else {
                        let pe = p + ki[p..].iter().take_while(|e| e.0 == dp).count();
                        let qe = q + kj[q..].iter().take_while(|e| e.0 == dq).count();
                        for &(_, kr, ar) in &ki[p..pe] {
                            let wa = w * ar;
                            for &(_, kc, ac) in &kj[q..qe] {
                                triplets.push((kr, kc, wa * ac.conj()));
                            }
                        }
                        p = pe;
                        q = qe;
                    }
                }
            }
        }
        DensityMatrix::from_triplets_in(split.kept, triplets)
    }
}

fn discard_complement(layout: &Layout, keep: &[ModeName]) -> Result<Vec<ModeName>> {
    for &k in keep {
        if layout.position(k).is_none() {
            return Err(Error::UnknownMode(k));
        }
    }
    Ok(layout.names().into_iter().filter(|n| !keep.contains(n)).collect())
}

impl Marginals for BranchSum {
    fn mode_names(&self) -> Vec<ModeName> {
        self.layout.names()
    }

    fn marginal(&self, keep: &[ModeName]) -> Result<DensityMatrix> {
        self.reduce(&discard_complement(&self.layout, keep)?)
    }
}

impl Marginals for PureState {
    fn mode_names(&self) -> Vec<ModeName> {
        self.layout.names()
    }

    fn marginal(&self, keep: &[ModeName]) -> Result<DensityMatrix> {
        BranchSum::single(self.clone()).reduce(&discard_complement(&self.layout, keep)?)
    }
}
