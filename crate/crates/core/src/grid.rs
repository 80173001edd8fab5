//! Uniform one-dimensional grids, trapezoid quadrature and finite-difference stencils.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Uniform grid of `n` nodes on `[a, b]`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GridMeta<T: Scalar> {
    pub a: T,
    pub b: T,
    pub n: usize,
}

impl<T: Scalar> GridMeta<T> {
    pub fn new(a: T, b: T, n: usize) -> Result<Self> {
        let grid = Self { a, b, n };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid on the unit interval.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(T::zero(), T::one(), n)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() || !self.b.is_finite() {
            return Err(invalid("grid", "endpoints must be finite"));
        }
        if self.b <= self.a {
            return Err(invalid(
                "grid",
                format!("need b > a, got [{}, {}]", self.a, self.b),
            ));
        }
        if self.n < 2 {
            return Err(invalid(
                "grid",
                format!("need at least 2 nodes, got {}", self.n),
            ));
        }
        Ok(())
    }

    pub fn spacing(&self) -> T {
        (self.b - self.a) / T::from_usize_lossy(self.n - 1)
    }

    pub fn node(&self, i: usize) -> T {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + T::from_usize_lossy(i) * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    /// Composite trapezoid weights; they sum to `b - a`.
    pub fn trapezoid_weights(&self) -> Vec<T> {
        let h = self.spacing();
        let half = h / T::lit(2.0);
        (0..self.n)
            .map(|i| if i == 0 || i + 1 == self.n { half } else { h })
            .collect()
    }

    /// Composite trapezoid rule applied to samples `f` at the nodes, with the
    /// spacing factored out of the sum.
    pub fn trapezoid(&self, f: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n);
        let half = T::lit(0.5);
        let last = f.len() - 1;
        let interior: T = f[1..last].iter().copied().sum();
        self.spacing() * (interior + half * (f[0] + f[last]))
    }

    /// Grid with `factor` times as many intervals on the same domain.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            a: self.a,
            b: self.b,
            n: (self.n - 1) * factor + 1,
        }
    }
}

/// Fornberg's recursion for finite-difference weights of derivative `order`
/// at `z` from the stencil `xs`.
pub fn fornberg_weights<T: Scalar>(z: T, xs: &[T], order: usize) -> Vec<T> {
    let n = xs.len();
    assert!(
        n > order,
        "stencil of {n} points cannot resolve order {order}"
    );
    let mut c = vec![vec![T::zero(); order + 1]; n];
    let mut c1 = T::one();
    let mut c4 = xs[0] - z;
    c[0][0] = T::one();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_usize_lossy(k);
                    c[i][k] = c1 * (kk * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_usize_lossy(k);
                c[j][k] = (c4 * c[j][k] - kk * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Number of stencil points used for a derivative of `order`: the smallest odd
/// count that resolves the order, so interior stencils are centred.
pub fn stencil_width(order: usize) -> usize {
    if order.is_multiple_of(2) {
        order + 1
    } else {
        order + 2
    }
}

/// Finite-difference approximation of the `order`-th derivative at every node.
///
/// Interior nodes use centred stencils; near the boundary the window is shifted
/// inside the grid (one-sided).
pub fn derivative<T: Scalar>(values: &[T], grid: &GridMeta<T>, order: usize) -> Result<Vec<T>> {
    let n = grid.n;
    if values.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{} values on a {}-node grid",
            values.len(),
            n
        )));
    }
    if order == 0 {
        return Ok(values.to_vec());
    }
    if n < order + 1 {
        return Err(Error::DerivativeOrderTooHigh {
            order,
            needed: order + 1,
            nodes: n,
        });
    }
    let p = stencil_width(order).min(n);
    let local: Vec<T> = (0..p).map(T::from_usize_lossy).collect();
    // One weight set per position of the evaluation node inside the window.
    let tables: Vec<Vec<T>> = (0..p)
        .map(|offset| fornberg_weights(T::from_usize_lossy(offset), &local, order))
        .collect();
    let scale = grid.spacing().powi(order as i32);
    let half = p / 2;
    Ok((0..n)
        .map(|i| {
            let start = i.saturating_sub(half).min(n - p);
            let w = &tables[i - start];
            let acc: T = w
                .iter()
                .zip(&values[start..start + p])
                .map(|(&wk, &vk)| wk * vk)
                .sum();
            acc / scale
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let g = GridMeta::new(-1.0_f64, 2.0, 31).unwrap();
        let s: f64 = g.trapezoid_weights().iter().sum();
        assert!((s - 3.0).abs() < 1e-14);
    }

    #[test]
    fn last_node_is_exact_endpoint() {
        let g = GridMeta::new(0.0_f64, 0.3, 7).unwrap();
        assert_eq!(g.node(6), 0.3);
        assert_eq!(g.nodes().len(), 7);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(GridMeta::new(1.0_f64, 1.0, 5).is_err());
        assert!(GridMeta::new(0.0_f64, 1.0, 1).is_err());
        assert!(GridMeta::new(f64::NAN, 1.0, 4).is_err());
    }

    #[test]
    fn fornberg_reproduces_classic_stencils() {
        let xs = [-1.0_f64, 0.0, 1.0];
        let d1 = fornberg_weights(0.0, &xs, 1);
        let d2 = fornberg_weights(0.0, &xs, 2);
        for (a, b) in d1.iter().zip([-0.5, 0.0, 0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
        for (a, b) in d2.iter().zip([1.0, -2.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
        // one-sided second-order first derivative
        let d1l = fornberg_weights(0.0_f64, &[0.0, 1.0, 2.0], 1);
        for (a, b) in d1l.iter().zip([-1.5, 2.0, -0.5]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn derivative_of_quadratic_is_exact_everywhere() {
        let g = GridMeta::unit(11).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| x * x).collect();
        let d = derivative(&f, &g, 1).unwrap();
        for (x, dx) in g.nodes().iter().zip(&d) {
            assert!((dx - 2.0 * x).abs() < 1e-12, "{x}: {dx}");
        }
    }

    #[test]
    fn derivative_order_needs_nodes() {
        let g = GridMeta::unit(3).unwrap();
        let err = derivative(&[0.0, 0.0, 0.0], &g, 3).unwrap_err();
        assert!(matches!(err, Error::DerivativeOrderTooHigh { .. }));
        // short grid still resolves the order with a narrower window
        assert!(derivative(&[0.0, 1.0, 4.0], &g, 2).is_ok());
    }
}
