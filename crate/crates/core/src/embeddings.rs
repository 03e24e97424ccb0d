//! The index set of embeddings, partitioned into Frobenius orbits.
//!
//! Weight vectors are indexed by a disjoint union of cyclic orbits, one per
//! place above p, the orbit for a place of residue degree f having f
//! embeddings. Within an orbit the indexing convention is
//! `τ_i = Frob ∘ τ_{i+1}`: applying [`EmbeddingSet::frob`] to τ_i yields
//! τ_{i-1} and [`EmbeddingSet::frob_inv`] yields τ_{i+1}, indices mod f.

use crate::error::{Error, Result};

/// One embedding: orbit number plus position within the orbit.
///
/// Ordering is lexicographic (orbit, then position), which is the canonical
/// enumeration order used everywhere deterministic output is required.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tau {
    pub orbit: usize,
    pub pos: usize,
}

impl Tau {
    pub fn new(orbit: usize, pos: usize) -> Tau {
        Tau { orbit, pos }
    }
}

impl std::fmt::Display for Tau {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.orbit, self.pos)
    }
}

/// A disjoint union of Frobenius orbits, defined by their degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSet {
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

impl EmbeddingSet {
    /// Builds the embedding set for the given orbit degrees (all ≥ 1).
    pub fn new(degrees: &[usize]) -> Result<EmbeddingSet> {
        if degrees.is_empty() {
            return Err(Error::InvalidInput(
                "orbit degree list must be non-empty".into(),
            ));
        }
        if let Some(bad) = degrees.iter().position(|&f| f == 0) {
            return Err(Error::InvalidInput(format!(
                "orbit {bad} has degree 0; every orbit degree must be at least 1"
            )));
        }
        let mut offsets = Vec::with_capacity(degrees.len());
        let mut total = 0usize;
        for &f in degrees {
            offsets.push(total);
            total += f;
        }
        Ok(EmbeddingSet {
            degrees: degrees.to_vec(),
            offsets,
            total,
        })
    }

    /// Total number of embeddings (the degree d).
    pub fn degree(&self) -> usize {
        self.total
    }

    pub fn orbit_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn orbit_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn orbit_size(&self, orbit: usize) -> usize {
        self.degrees[orbit]
    }

    pub fn contains(&self, tau: Tau) -> bool {
        tau.orbit < self.degrees.len() && tau.pos < self.degrees[tau.orbit]
    }

    pub fn check(&self, tau: Tau) -> Result<()> {
        if self.contains(tau) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "embedding {tau} outside the declared orbits"
            )))
        }
    }

    /// Flat index of an embedding in the concatenated (orbit-major) order.
    pub fn flat(&self, tau: Tau) -> usize {
        debug_assert!(self.contains(tau));
        self.offsets[tau.orbit] + tau.pos
    }

    pub fn from_flat(&self, idx: usize) -> Tau {
        debug_assert!(idx < self.total);
        let orbit = match self.offsets.binary_search(&idx) {
            Ok(o) => o,
            Err(o) => o - 1,
        };
        Tau::new(orbit, idx - self.offsets[orbit])
    }

    /// All embeddings in canonical order.
    pub fn taus(&self) -> impl Iterator<Item = Tau> + '_ {
        self.degrees
            .iter()
            .enumerate()
            .flat_map(|(orbit, &f)| (0..f).map(move |pos| Tau::new(orbit, pos)))
    }

    pub fn orbit_taus(&self, orbit: usize) -> impl Iterator<Item = Tau> + '_ {
        (0..self.degrees[orbit]).map(move |pos| Tau::new(orbit, pos))
    }

    /// Frobenius action: τ_i ↦ Frob ∘ τ_i = τ_{i-1} (mod orbit degree).
    pub fn frob(&self, tau: Tau) -> Tau {
        let f = self.degrees[tau.orbit];
        Tau::new(tau.orbit, (tau.pos + f - 1) % f)
    }

    /// Inverse Frobenius: τ_i ↦ Frob⁻¹ ∘ τ_i = τ_{i+1} (mod orbit degree).
    pub fn frob_inv(&self, tau: Tau) -> Tau {
        let f = self.degrees[tau.orbit];
        Tau::new(tau.orbit, (tau.pos + 1) % f)
    }

    /// Frob^j ∘ τ for any integer j (j < 0 iterates [`Self::frob_inv`]).
    pub fn frob_pow(&self, tau: Tau, j: i64) -> Tau {
        let f = self.degrees[tau.orbit] as i64;
        let pos = (tau.pos as i64 - j).rem_euclid(f);
        Tau::new(tau.orbit, pos as usize)
    }
}
