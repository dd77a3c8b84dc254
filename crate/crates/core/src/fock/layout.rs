use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

/// Names of the field modes and registers that appear in channel states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeName {
    /// Alice's logical register.
    A,
    /// Rob's mode (single rail).
    R,
    /// AntiRob's mode (single rail).
    Rbar,
    /// Alice's rail-0 / rail-1 modes.
    A0,
    A1,
    /// Rob's rail-0 / rail-1 modes.
    R0,
    R1,
    /// AntiRob's rail-0 / rail-1 modes.
    Rbar0,
    Rbar1,
}

impl ModeName {
    pub const ALL: [ModeName; 9] = [
        ModeName::A,
        ModeName::R,
        ModeName::Rbar,
        ModeName::A0,
        ModeName::A1,
        ModeName::R0,
        ModeName::R1,
        ModeName::Rbar0,
        ModeName::Rbar1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModeName::A => "A",
            ModeName::R => "R",
            ModeName::Rbar => "Rbar",
            ModeName::A0 => "A0",
            ModeName::A1 => "A1",
            ModeName::R0 => "R0",
            ModeName::R1 => "R1",
            ModeName::Rbar0 => "Rbar0",
            ModeName::Rbar1 => "Rbar1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.as_str() == s)
    }

    /// Modes belonging to the accelerated receiver.
    pub fn is_rob(self) -> bool {
        matches!(self, ModeName::R | ModeName::R0 | ModeName::R1)
    }

    /// Modes belonging to the receiver behind the horizon.
    pub fn is_antirob(self) -> bool {
        matches!(self, ModeName::Rbar | ModeName::Rbar0 | ModeName::Rbar1)
    }

    /// Modes held by the inertial sender.
    pub fn is_alice(self) -> bool {
        matches!(self, ModeName::A | ModeName::A0 | ModeName::A1)
    }
}

impl fmt::Display for ModeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A mode together with its Fock-space truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeLabel {
    pub name: ModeName,
    /// Local dimension: occupation numbers `0..cutoff`.
    pub cutoff: usize,
}

impl ModeLabel {
    pub fn new(name: ModeName, cutoff: usize) -> Self {
        Self { name, cutoff }
    }
}

/// Ordered list of modes with mixed-radix strides (last mode fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    modes: Vec<ModeLabel>,
    strides: Vec<usize>,
    dim: usize,
}

impl Layout {
    pub fn new(modes: Vec<ModeLabel>) -> Result<Self> {
        for (i, m) in modes.iter().enumerate() {
            if m.cutoff == 0 {
                return Err(Error::InvalidParameter(format!("mode {} has zero cutoff", m.name)));
            }
            if modes[..i].iter().any(|o| o.name == m.name) {
                return Err(Error::LabelCollision(m.name));
            }
        }
        let mut strides = alloc::vec![0usize; modes.len()];
        let mut dim = 1usize;
        for (i, m) in modes.iter().enumerate().rev() {
            strides[i] = dim;
            dim = dim
                .checked_mul(m.cutoff)
                .ok_or_else(|| Error::InvalidParameter(format!("state dimension overflows at mode {}", m.name)))?;
        }
        Ok(Self { modes, strides, dim })
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn names(&self) -> Vec<ModeName> {
        self.modes.iter().map(|m| m.name).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn position(&self, name: ModeName) -> Option<usize> {
        self.modes.iter().position(|m| m.name == name)
    }

    pub fn cutoff(&self, name: ModeName) -> Option<usize> {
        self.position(name).map(|p| self.modes[p].cutoff)
    }

    /// Flat index of the occupation tuple `occ` (one entry per mode, in order).
    /// Returns `None` if any occupation exceeds its cutoff.
    pub fn index(&self, occ: &[usize]) -> Option<usize> {
        debug_assert_eq!(occ.len(), self.modes.len());
        let mut idx = 0;
        for ((&n, m), &s) in occ.iter().zip(&self.modes).zip(&self.strides) {
            if n >= m.cutoff {
                return None;
            }
            idx += n * s;
        }
        Some(idx)
    }

    /// Occupation of the mode at `pos` in flat index `idx`.
    pub fn digit(&self, idx: usize, pos: usize) -> usize {
        (idx / self.strides[pos]) % self.modes[pos].cutoff
    }

    /// Occupation tuple of a flat index.
    pub fn occupations(&self, idx: usize) -> Vec<usize> {
        (0..self.modes.len()).map(|p| self.digit(idx, p)).collect()
    }

    /// Split into `(kept, discarded)` sub-layouts. Unknown names are an error.
    pub fn split(&self, discard: &[ModeName]) -> Result<Split> {
        for &d in discard {
            if self.position(d).is_none() {
                return Err(Error::UnknownMode(d));
            }
        }
        let keep_pos: Vec<usize> = (0..self.modes.len()).filter(|&p| !discard.contains(&self.modes[p].name)).collect();
        let disc_pos: Vec<usize> = (0..self.modes.len()).filter(|&p| discard.contains(&self.modes[p].name)).collect();
        let kept = Layout::new(keep_pos.iter().map(|&p| self.modes[p]).collect())?;
        let discarded = Layout::new(disc_pos.iter().map(|&p| self.modes[p]).collect())?;
        Ok(Split { parent: self.clone(), keep_pos, disc_pos, kept, discarded })
    }
}

/// Index arithmetic for a partition of a layout into kept and discarded modes.
#[derive(Debug, Clone)]
pub struct Split {
    parent: Layout,
    keep_pos: Vec<usize>,
    disc_pos: Vec<usize>,
    pub kept: Layout,
    pub discarded: Layout,
}

impl Split {
    /// `(kept index, discarded index)` of a parent flat index.
    pub fn project(&self, idx: usize) -> (usize, usize) {
        let mut k = 0;
        for (i, &p) in self.keep_pos.iter().enumerate() {
            k += self.parent.digit(idx, p) * self.kept.strides[i];
        }
        let mut d = 0;
        for (i, &p) in self.disc_pos.iter().enumerate() {
            d += self.parent.digit(idx, p) * self.discarded.strides[i];
        }
        (k, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn strides_and_digits() {
        let l = Layout::new(vec![ModeLabel::new(ModeName::A, 2), ModeLabel::new(ModeName::R, 5)]).unwrap();
        assert_eq!(l.dim(), 10);
        assert_eq!(l.index(&[1, 3]), Some(8));
        assert_eq!(l.index(&[1, 5]), None);
        assert_eq!(l.occupations(8), vec![1, 3]);
    }

    #[test]
    fn collisions_and_unknowns() {
        let e = Layout::new(vec![ModeLabel::new(ModeName::R, 2), ModeLabel::new(ModeName::R, 3)]);
        assert_eq!(e.unwrap_err(), Error::LabelCollision(ModeName::R));
        let l = Layout::new(vec![ModeLabel::new(ModeName::R, 2)]).unwrap();
        assert_eq!(l.split(&[ModeName::A]).unwrap_err(), Error::UnknownMode(ModeName::A));
    }

    #[test]
    fn split_projects() {
        let l =
            Layout::new(vec![ModeLabel::new(ModeName::A, 2), ModeLabel::new(ModeName::R, 3), ModeLabel::new(ModeName::Rbar, 4)])
                .unwrap();
        let s = l.split(&[ModeName::R]).unwrap();
        let idx = l.index(&[1, 2, 3]).unwrap();
        let (k, d) = s.project(idx);
        assert_eq!(s.kept.occupations(k), vec![1, 3]);
        assert_eq!(s.discarded.occupations(d), vec![2]);
    }

    #[test]
    fn names_round_trip() {
        for m in ModeName::ALL {
            assert_eq!(ModeName::parse(m.as_str()), Some(m));
        }
    }
}
