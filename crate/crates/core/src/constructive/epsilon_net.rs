use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;
use crate::target_space::{Seminorm, TargetElement};

/// Finite set of centers covering a list of target values within `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonNet<T: Scalar> {
    pub centers: Vec<TargetElement<T>>,
    /// Position of each center in the value list it was built from.
    pub center_indices: Vec<usize>,
    pub epsilon: T,
}

impl<T: Scalar> EpsilonNet<T> {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }
}

/// Greedy sequential ε-net: scanning `values` in order, a value becomes a
/// center iff its ρ-distance to every existing center is at least `epsilon`.
///
/// Every value ends up strictly within `epsilon` of some center and centers
/// are pairwise at least `epsilon` apart.
pub fn build_epsilon_net<T: Scalar>(
    values: &[TargetElement<T>],
    rho: &Seminorm<T>,
    epsilon: T,
) -> Result<EpsilonNet<T>> {
    if !(epsilon > T::zero() && epsilon.is_finite()) {
        return Err(invalid(
            "epsilon",
            format!("need a finite epsilon > 0, got {epsilon}"),
        ));
    }
    let first = values.first().ok_or(Error::Empty("epsilon-net values"))?;
    for v in &values[1..] {
        first.check_compatible(v)?;
    }
    let mut centers: Vec<TargetElement<T>> = Vec::new();
    let mut center_indices = Vec::new();
    'values: for (i, v) in values.iter().enumerate() {
        for c in &centers {
            if rho.distance(v, c)? < epsilon {
                continue 'values;
            }
        }
        centers.push(v.clone());
        center_indices.push(i);
    }
    Ok(EpsilonNet {
        centers,
        center_indices,
        epsilon,
    })
}
