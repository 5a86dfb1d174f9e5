use serde::{Deserialize, Serialize};

use super::sparse::Operator;
use crate::error::{Error, Result};

/// JPM levels in tensor-factor order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JpmLevel {
    G = 0,
    E = 1,
    F = 2,
    /// Fictitious sink standing in for the deep-well cascade.
    S = 3,
}

pub const JPM_LEVELS: usize = 4;

/// Fock-space cutoffs. The composite space is
/// storage ⊗ buffer ⊗ JPM{g,e,f,s} ⊗ filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertSpace {
    pub storage: usize,
    pub buffer: usize,
    pub filter: usize,
}

impl Default for HilbertSpace {
    fn default() -> Self {
        HilbertSpace {
            storage: 5,
            buffer: 3,
            filter: 3,
        }
    }
}

/// Upper bound on the composite dimension.
pub const MAX_DIM: usize = 4096;

impl HilbertSpace {
    pub fn new(storage: usize, buffer: usize, filter: usize) -> Result<Self> {
        let s = HilbertSpace {
            storage,
            buffer,
            filter,
        };
        s.validate()?;
        Ok(s)
    }

    /// Smallest space that is exact for an `n`-photon storage input.
    ///
    /// `n1 + 2n2 + 2(P_e + P_f) + 2n_f` is conserved by the Hamiltonian
    /// and never raised by a jump, so it stays at or below `n`.
    pub fn exact_for_input(n: usize) -> Self {
        HilbertSpace {
            storage: (n + 1).max(3),
            buffer: (n / 2 + 1).max(2),
            filter: (n / 2 + 1).max(2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.storage < 3 || self.buffer < 2 || self.filter < 2 {
            return Err(Error::TruncationTooSmall(format!(
                "need storage ≥ 3, buffer ≥ 2, filter ≥ 2; got {}, {}, {}",
                self.storage, self.buffer, self.filter
            )));
        }
        if self.dim() > MAX_DIM {
            return Err(Error::TruncationTooSmall(format!(
                "dimension {} exceeds the budget {MAX_DIM}",
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.storage * self.buffer * JPM_LEVELS * self.filter
    }

    pub fn index(&self, n1: usize, n2: usize, level: JpmLevel, nf: usize) -> usize {
        ((n1 * self.buffer + n2) * JPM_LEVELS + level as usize) * self.filter + nf
    }

    /// Inverse of [`HilbertSpace::index`]: `(n1, n2, level index, nf)`.
    pub fn decompose(&self, i: usize) -> (usize, usize, usize, usize) {
        let nf = i % self.filter;
        let rest = i / self.filter;
        let j = rest % JPM_LEVELS;
        let rest = rest / JPM_LEVELS;
        (rest / self.buffer, rest % self.buffer, j, nf)
    }

    fn embed(
        &self,
        storage: &Operator,
        buffer: &Operator,
        jpm: &Operator,
        filter: &Operator,
    ) -> Operator {
        storage.kron(buffer).kron(jpm).kron(filter)
    }

    pub fn storage_op(&self, op: &Operator) -> Operator {
        self.embed(
            op,
            &Operator::identity(self.buffer),
            &Operator::identity(JPM_LEVELS),
            &Operator::identity(self.filter),
        )
    }

    pub fn buffer_op(&self, op: &Operator) -> Operator {
        self.embed(
            &Operator::identity(self.storage),
            op,
            &Operator::identity(JPM_LEVELS),
            &Operator::identity(self.filter),
        )
    }

    pub fn jpm_op(&self, op: &Operator) -> Operator {
        self.embed(
            &Operator::identity(self.storage),
            &Operator::identity(self.buffer),
            op,
            &Operator::identity(self.filter),
        )
    }

    pub fn filter_op(&self, op: &Operator) -> Operator {
        self.embed(
            &Operator::identity(self.storage),
            &Operator::identity(self.buffer),
            &Operator::identity(JPM_LEVELS),
            op,
        )
    }

    /// `|to⟩⟨from|` on the JPM factor.
    pub fn sigma(&self, to: JpmLevel, from: JpmLevel) -> Operator {
        self.jpm_op(&Operator::transition(
            JPM_LEVELS,
            to as usize,
            from as usize,
        ))
    }

    pub fn a1(&self) -> Operator {
        self.storage_op(&Operator::destroy(self.storage))
    }

    pub fn a2(&self) -> Operator {
        self.buffer_op(&Operator::destroy(self.buffer))
    }

    pub fn af(&self) -> Operator {
        self.filter_op(&Operator::destroy(self.filter))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let s = HilbertSpace::default();
        assert_eq!(s.dim(), 180);
        for i in 0..s.dim() {
            let (a, b, j, f) = s.decompose(i);
            let lvl = [JpmLevel::G, JpmLevel::E, JpmLevel::F, JpmLevel::S][j];
            assert_eq!(s.index(a, b, lvl, f), i);
        }
    }

    #[test]
    fn rejects_small_truncations() {
        assert!(HilbertSpace::new(2, 2, 2).is_err());
        assert!(HilbertSpace::new(3, 1, 2).is_err());
        assert_eq!(
            HilbertSpace::exact_for_input(2),
            HilbertSpace::new(3, 2, 2).unwrap()
        );
    }
}
