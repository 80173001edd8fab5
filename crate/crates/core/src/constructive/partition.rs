use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::target_space::{Seminorm, TargetElement};

use super::epsilon_net::EpsilonNet;

/// Values `ψ_j(s_i)` of a partition of unity on the sample set, indexed
/// `[sample][center]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionOfUnity<T: Scalar> {
    pub weights: Vec<Vec<T>>,
    /// `ρ(F(s_i) − v_j)`, same layout as `weights`.
    pub distances: Vec<Vec<T>>,
    pub epsilon: T,
}

impl<T: Scalar> PartitionOfUnity<T> {
    pub fn samples(&self) -> usize {
        self.weights.len()
    }

    pub fn centers(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    /// `ψ_j` across all samples.
    pub fn column(&self, j: usize) -> Vec<T> {
        self.weights.iter().map(|row| row[j]).collect()
    }

    /// Convexity bound `Σ_j ψ_j(s_i) ρ(F(s_i) − v_j)` at sample `i`.
    pub fn convexity_bound(&self, i: usize) -> T {
        self.weights[i]
            .iter()
            .zip(&self.distances[i])
            .map(|(&w, &d)| w * d)
            .sum()
    }
}

/// Normalized hat functions: `ψ̃_j = max(0, 1 − ρ(F(s) − v_j)/ε)`,
/// `ψ_j = ψ̃_j / Σ_k ψ̃_k`. `ψ_j(s) > 0` exactly when `ρ(F(s) − v_j) < ε`.
pub fn build_partition<T: Scalar>(
    values: &[TargetElement<T>],
    net: &EpsilonNet<T>,
    rho: &Seminorm<T>,
) -> Result<PartitionOfUnity<T>> {
    let eps = net.epsilon;
    let mut weights = Vec::with_capacity(values.len());
    let mut distances = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let d: Vec<T> = net
            .centers
            .iter()
            .map(|c| rho.distance(v, c))
            .collect::<Result<_>>()?;
        let raw: Vec<T> = d
            .iter()
            .map(|&dj| (T::one() - dj / eps).max(T::zero()))
            .collect();
        let total: T = raw.iter().copied().sum();
        if total <= T::zero() {
            return Err(Error::UncoveredSample { index: i });
        }
        weights.push(raw.into_iter().map(|r| r / total).collect());
        distances.push(d);
    }
    Ok(PartitionOfUnity {
        weights,
        distances,
        epsilon: eps,
    })
}

/// `G(s_i) = Σ_j ψ_j(s_i) v_j`.
pub fn finite_rank_apply<T: Scalar>(
    pou: &PartitionOfUnity<T>,
    net: &EpsilonNet<T>,
    sample_index: usize,
) -> Result<TargetElement<T>> {
    let row = pou
        .weights
        .get(sample_index)
        .ok_or(Error::IndexOutOfRange {
            index: sample_index,
            len: pou.samples(),
        })?;
    let first = net
        .centers
        .first()
        .ok_or(Error::Empty("epsilon-net centers"))?;
    let mut out = first.shape().zeros();
    for (&w, v) in row.iter().zip(&net.centers) {
        out.axpy(w, v)?;
    }
    Ok(out)
}
