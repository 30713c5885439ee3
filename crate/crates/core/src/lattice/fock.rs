use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{c, Operator};

/// Atoms in internal levels `a` and `b` on one site.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiteOccupation {
    pub n_a: usize,
    pub n_b: usize,
}

impl SiteOccupation {
    pub fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    /// Qubit state `|0⟩ = (n, 0)` of an `n`-atom site.
    pub fn zero(n: usize) -> Self {
        Self { n_a: n, n_b: 0 }
    }

    /// Qubit state `|1⟩ = (n − 1, 1)` of an `n`-atom site.
    pub fn one(n: usize) -> Self {
        Self { n_a: n.saturating_sub(1), n_b: 1 }
    }

    pub fn total(&self) -> usize {
        self.n_a + self.n_b
    }
}

/// Fock states `(n_a1, n_b1[, n_a2, n_b2])` at fixed total atom number.
///
/// One site holds exactly its `n` atoms; two sites share `N = n₁ + n₂`
/// atoms freely, since hopping moves atoms between them. States are listed
/// in descending lexicographic order, so `(n, 0)` comes first.
#[derive(Clone, Debug)]
pub struct FockBasis {
    totals: Vec<usize>,
    states: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn compositions(total: usize, parts: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, out, prefix);
        prefix.pop();
    }
}

pub fn build_fock_basis(totals: &[usize]) -> Result<FockBasis> {
    if totals.is_empty() || totals.len() > 2 {
        return Err(Error::InvalidParameter(format!("one or two sites supported, got {}", totals.len())));
    }
    if totals.contains(&0) {
        return Err(Error::InvalidParameter("every site needs at least one atom".into()));
    }
    let n: usize = totals.iter().sum();
    let mut states = Vec::new();
    compositions(n, 2 * totals.len(), &mut states, &mut Vec::new());
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(FockBasis { totals: totals.to_vec(), states, index })
}

impl FockBasis {
    pub fn sites(&self) -> usize {
        self.totals.len()
    }

    pub fn totals(&self) -> &[usize] {
        &self.totals
    }

    pub fn total_atoms(&self) -> usize {
        self.totals.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[usize] {
        &self.states[i]
    }

    pub fn index_of(&self, state: &[usize]) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Basis indices of the qubit states, in binary order `|0…0⟩, …, |1…1⟩`
    /// with site 1 as the most significant qubit.
    pub fn qubit_indices(&self, occupations: &[SiteOccupation]) -> Result<Vec<usize>> {
        if occupations.len() != self.sites() {
            return Err(Error::DimensionMismatch { expected: self.sites(), found: occupations.len() });
        }
        let totals: Vec<usize> = occupations.iter().map(|o| o.total()).collect();
        let sites = self.sites();
        let mut out = Vec::with_capacity(1 << sites);
        for bits in 0..(1usize << sites) {
            let mut st = Vec::with_capacity(2 * sites);
            for (k, &n) in totals.iter().enumerate() {
                let bit = (bits >> (sites - 1 - k)) & 1;
                let occ = if bit == 0 { SiteOccupation::zero(n) } else { SiteOccupation::one(n) };
                st.push(occ.n_a);
                st.push(occ.n_b);
            }
            let idx = self
                .index_of(&st)
                .ok_or_else(|| Error::StateNotInBasis(format!("{st:?}")))?;
            out.push(idx);
        }
        Ok(out)
    }
}

/// Orthogonal projector onto the product qubit subspace.
pub fn qubit_projector(basis: &FockBasis, occupations: &[SiteOccupation]) -> Result<Operator> {
    let idx = basis.qubit_indices(occupations)?;
    let mut p = Operator::zeros(basis.dim());
    for i in idx {
        p.set(i, i, c(1.0, 0.0));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn single_site_bases() {
        let b = build_fock_basis(&[1]).unwrap();
        assert_eq!(b.states(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(build_fock_basis(&[3]).unwrap().dim(), 4);
    }

    #[test]
    fn two_site_dimension_matches_brute_force_count() {
        for (n, m) in [(1, 1), (2, 1), (3, 3), (5, 5)] {
            let b = build_fock_basis(&[n, m]).unwrap();
            let total = n + m;
            let mut brute = 0;
            for a1 in 0..=total {
                for b1 in 0..=total - a1 {
                    for a2 in 0..=total - a1 - b1 {
                        let _ = a2;
                        brute += 1;
                    }
                }
            }
            assert_eq!(b.dim(), brute);
            assert_eq!(b.dim(), binomial(total + 3, 3));
        }
        assert_eq!(build_fock_basis(&[1, 1]).unwrap().dim(), 10);
    }

    #[test]
    fn enumeration_is_duplicate_free() {
        let b = build_fock_basis(&[2, 3]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for s in b.states() {
            assert_eq!(s.iter().sum::<usize>(), 5);
            assert!(seen.insert(s.clone()));
        }
    }

    #[test]
    fn empty_site_rejected() {
        assert!(build_fock_basis(&[0]).is_err());
        assert!(build_fock_basis(&[2, 0]).is_err());
        assert!(build_fock_basis(&[1, 1, 1]).is_err());
    }

    #[test]
    fn projector_ranks() {
        let b1 = build_fock_basis(&[1]).unwrap();
        let p = qubit_projector(&b1, &[SiteOccupation::zero(1)]).unwrap();
        assert!(p.max_abs_diff(&Operator::identity(2)) < 1e-15);

        let b3 = build_fock_basis(&[3]).unwrap();
        let p = qubit_projector(&b3, &[SiteOccupation::zero(3)]).unwrap();
        assert_eq!(p.trace().re, 2.0);
        assert_eq!(p.entry(0, 0).re, 1.0);
        assert_eq!(p.entry(1, 1).re, 1.0);

        let b2 = build_fock_basis(&[1, 1]).unwrap();
        let occ = [SiteOccupation::zero(1), SiteOccupation::zero(1)];
        assert_eq!(qubit_projector(&b2, &occ).unwrap().trace().re, 4.0);
    }

    #[test]
    fn inconsistent_occupation_rejected() {
        let b = build_fock_basis(&[2]).unwrap();
        assert!(matches!(
            qubit_projector(&b, &[SiteOccupation::zero(3)]),
            Err(Error::StateNotInBasis(_))
        ));
    }
}
