//! Dense least squares by Householder QR with column pivoting, and the Thomas
//! algorithm for tridiagonal systems.

use ndarray::{s, Array2, ArrayView2};

use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Output of [`least_squares_solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<T: Scalar> {
    pub coefficients: Vec<T>,
    /// Numerical rank of the (possibly augmented) system that was factored.
    pub rank: usize,
    /// True when `lambda = 0` and the design has dependent columns.
    pub rank_deficient: bool,
}

struct PivotedQr<T: Scalar> {
    /// Upper triangle holds `R`; below is scratch.
    r: Array2<T>,
    reflectors: Vec<(Vec<T>, T)>,
    perm: Vec<usize>,
    rank: usize,
}

fn pivoted_qr<T: Scalar>(mut a: Array2<T>) -> PivotedQr<T> {
    let (m, n) = a.dim();
    let k = m.min(n);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut reflectors = Vec::with_capacity(k);
    for j in 0..k {
        // pivot: remaining column of largest norm
        let mut best = j;
        let mut best_norm = -T::one();
        for c in j..n {
            let nrm: T = a.slice(s![j.., c]).iter().map(|&v| v * v).sum();
            if nrm > best_norm {
                best_norm = nrm;
                best = c;
            }
        }
        if best != j {
            for row in 0..m {
                a.swap((row, j), (row, best));
            }
            perm.swap(j, best);
        }
        let x: Vec<T> = a.slice(s![j.., j]).to_vec();
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm == T::zero() {
            reflectors.push((vec![T::zero(); m - j], T::zero()));
            continue;
        }
        let alpha = if x[0] > T::zero() { -norm } else { norm };
        let mut v = x;
        v[0] = v[0] - alpha;
        let vtv: T = v.iter().map(|&e| e * e).sum();
        let beta = if vtv == T::zero() {
            T::zero()
        } else {
            T::lit(2.0) / vtv
        };
        a[(j, j)] = alpha;
        for row in j + 1..m {
            a[(row, j)] = T::zero();
        }
        for c in j + 1..n {
            let dot: T = (j..m).map(|row| v[row - j] * a[(row, c)]).sum();
            let f = beta * dot;
            for row in j..m {
                a[(row, c)] = a[(row, c)] - f * v[row - j];
            }
        }
        reflectors.push((v, beta));
    }
    let r00 = if k > 0 { a[(0, 0)].abs() } else { T::zero() };
    let tol = r00 * T::epsilon() * T::from_usize_lossy(m.max(n)) * T::lit(10.0);
    let rank = (0..k).take_while(|&j| a[(j, j)].abs() > tol).count();
    PivotedQr {
        r: a,
        reflectors,
        perm,
        rank,
    }
}

impl<T: Scalar> PivotedQr<T> {
    fn apply_qt(&self, b: &mut [T]) {
        for (j, (v, beta)) in self.reflectors.iter().enumerate() {
            let dot: T = v.iter().zip(&b[j..]).map(|(&vi, &bi)| vi * bi).sum();
            let f = *beta * dot;
            for (bi, &vi) in b[j..].iter_mut().zip(v) {
                *bi = *bi - f * vi;
            }
        }
    }

    fn apply_q(&self, b: &mut [T]) {
        for (j, (v, beta)) in self.reflectors.iter().enumerate().rev() {
            let dot: T = v.iter().zip(&b[j..]).map(|(&vi, &bi)| vi * bi).sum();
            let f = *beta * dot;
            for (bi, &vi) in b[j..].iter_mut().zip(v) {
                *bi = *bi - f * vi;
            }
        }
    }

    /// Basic least-squares solution: minimizes `‖Mx − b‖`, zero on the
    /// columns dropped by the rank cut.
    fn solve_basic(&self, b: &[T]) -> Vec<T> {
        let n = self.perm.len();
        let mut c = b.to_vec();
        self.apply_qt(&mut c);
        let r = self.rank;
        let mut z = vec![T::zero(); r];
        for i in (0..r).rev() {
            let acc: T = (i + 1..r).map(|k| self.r[(i, k)] * z[k]).sum();
            z[i] = (c[i] - acc) / self.r[(i, i)];
        }
        let mut x = vec![T::zero(); n];
        for (i, zi) in z.into_iter().enumerate() {
            x[self.perm[i]] = zi;
        }
        x
    }

    /// For a factorization of `Bᵀ` with `B` of full row rank, the minimum-norm
    /// solution of `B x = y`.
    fn solve_min_norm_transposed(&self, y: &[T]) -> Vec<T> {
        let rows = self.r.nrows();
        let r = self.rank;
        let yp: Vec<T> = self.perm.iter().map(|&p| y[p]).collect();
        // Rᵀ w = Πᵀ y (forward substitution on the leading r × r block)
        let mut w = vec![T::zero(); rows];
        for i in 0..r {
            let acc: T = (0..i).map(|k| self.r[(k, i)] * w[k]).sum();
            w[i] = (yp[i] - acc) / self.r[(i, i)];
        }
        self.apply_q(&mut w);
        w
    }
}

/// Minimizer of `‖A c − y‖² + λ‖c‖²`.
///
/// Tall or square designs factor `[A; √λ I]`. Wide designs with `λ > 0` use the
/// equivalent minimum-norm problem `[A, √λ I] x = y` whose leading block is the
/// ridge solution, so the work scales with the number of rows. With `λ = 0` the
/// basic pivoted-QR solution is returned; rank deficiency is flagged and logged.
pub fn least_squares_solve<T: Scalar>(
    design: ArrayView2<'_, T>,
    targets: &[T],
    lambda: T,
) -> Result<LeastSquares<T>> {
    let (m, n) = design.dim();
    if m != targets.len() {
        return Err(Error::ShapeMismatch(format!(
            "design has {m} rows, targets have {} entries",
            targets.len()
        )));
    }
    if !(lambda.is_finite() && lambda >= T::zero()) {
        return Err(invalid(
            "lambda",
            format!("need finite lambda >= 0, got {lambda}"),
        ));
    }
    if n == 0 {
        return Ok(LeastSquares {
            coefficients: Vec::new(),
            rank: 0,
            rank_deficient: false,
        });
    }
    if lambda == T::zero() {
        let qr = pivoted_qr(design.to_owned());
        let rank_deficient = qr.rank < n;
        if rank_deficient {
            log::warn!(
                "least squares: rank {} < {n} columns with lambda = 0",
                qr.rank
            );
        }
        return Ok(LeastSquares {
            coefficients: qr.solve_basic(targets),
            rank: qr.rank,
            rank_deficient,
        });
    }
    let root = lambda.sqrt();
    if m >= n {
        let mut aug = Array2::zeros((m + n, n));
        aug.slice_mut(s![..m, ..]).assign(&design);
        for i in 0..n {
            aug[(m + i, i)] = root;
        }
        let mut rhs = targets.to_vec();
        rhs.resize(m + n, T::zero());
        let qr = pivoted_qr(aug);
        Ok(LeastSquares {
            coefficients: qr.solve_basic(&rhs),
            rank: qr.rank,
            rank_deficient: false,
        })
    } else {
        // columns of the transposed augmented system [A, √λ I]ᵀ
        let mut bt = Array2::zeros((n + m, m));
        bt.slice_mut(s![..n, ..]).assign(&design.t());
        for i in 0..m {
            bt[(n + i, i)] = root;
        }
        let qr = pivoted_qr(bt);
        let mut x = qr.solve_min_norm_transposed(targets);
        x.truncate(n);
        Ok(LeastSquares {
            coefficients: x,
            rank: qr.rank,
            rank_deficient: false,
        })
    }
}

/// Regularized objective `‖A c − y‖² + λ‖c‖²`.
pub fn ridge_objective<T: Scalar>(
    design: ArrayView2<'_, T>,
    targets: &[T],
    lambda: T,
    c: &[T],
) -> T {
    let resid: T = design
        .rows()
        .into_iter()
        .zip(targets)
        .map(|(row, &y)| {
            let p: T = row.iter().zip(c).map(|(&a, &ci)| a * ci).sum();
            (p - y) * (p - y)
        })
        .sum();
    resid + lambda * c.iter().map(|&v| v * v).sum::<T>()
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
/// `sub[0]` and `sup[n-1]` are ignored.
pub fn solve_tridiagonal<T: Scalar>(sub: &[T], diag: &[T], sup: &[T], rhs: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if sub.len() != n || sup.len() != n || rhs.len() != n {
        return Err(Error::ShapeMismatch(
            "tridiagonal bands and rhs differ in length".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / denom;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] = x[i] - c[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{normal, seeded};
    use ndarray::array;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
        let mut rng = seeded(seed);
        Array2::from_shape_fn((rows, cols), |_| normal(&mut rng))
    }

    /// Normal equations by Gaussian elimination with partial pivoting.
    fn normal_equations(a: &Array2<f64>, y: &[f64], lambda: f64) -> Vec<f64> {
        let n = a.ncols();
        let mut g = a.t().dot(a);
        for i in 0..n {
            g[(i, i)] += lambda;
        }
        let mut b: Vec<f64> = (0..n)
            .map(|j| a.column(j).iter().zip(y).map(|(x, y)| x * y).sum())
            .collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| g[(i, k)].abs().total_cmp(&g[(j, k)].abs()))
                .unwrap();
            for c in 0..n {
                g.swap((k, c), (p, c));
            }
            b.swap(k, p);
            for i in k + 1..n {
                let f = g[(i, k)] / g[(k, k)];
                for c in k..n {
                    g[(i, c)] -= f * g[(k, c)];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let acc: f64 = (i + 1..n).map(|c| g[(i, c)] * x[c]).sum();
            x[i] = (b[i] - acc) / g[(i, i)];
        }
        x
    }

    #[test]
    fn identity_design() {
        let a: Array2<f64> = array![[1.0, 0.0], [0.0, 1.0]];
        let ls = least_squares_solve(a.view(), &[3.0, 4.0], 0.0).unwrap();
        assert!((ls.coefficients[0] - 3.0).abs() < 1e-15);
        assert!((ls.coefficients[1] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn column_of_ones_gives_mean() {
        let a = Array2::<f64>::from_elem((6, 1), 1.0);
        let ls = least_squares_solve(a.view(), &[5.0; 6], 0.0).unwrap();
        assert!((ls.coefficients[0] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        let a = Array2::<f64>::zeros((3, 2));
        assert!(least_squares_solve(a.view(), &[1.0, 2.0], 0.0).is_err());
        assert!(least_squares_solve(a.view(), &[1.0, 2.0, 3.0], -1.0).is_err());
    }

    #[test]
    fn beats_random_perturbations() {
        let a = random_matrix(40, 10, 1);
        let y: Vec<f64> = random_matrix(40, 1, 2).iter().cloned().collect();
        let c = least_squares_solve(a.view(), &y, 0.0).unwrap().coefficients;
        let best = ridge_objective(a.view(), &y, 0.0, &c);
        let mut rng = seeded(3);
        for _ in 0..1000 {
            let xi: Vec<f64> = (0..10).map(|_| normal(&mut rng)).collect();
            let nrm = xi.iter().map(|v: &f64| v * v).sum::<f64>().sqrt();
            let pert: Vec<f64> = c
                .iter()
                .zip(&xi)
                .map(|(ci, x)| ci + 1e-3 * x / nrm)
                .collect();
            assert!(best <= ridge_objective(a.view(), &y, 0.0, &pert));
        }
    }

    #[test]
    fn agrees_with_normal_equations_tall_and_wide() {
        for (rows, cols, lambda) in [(30, 8, 0.0), (30, 8, 0.1), (8, 30, 0.1), (12, 12, 1e-3)] {
            let a = random_matrix(rows, cols, rows as u64 * 7 + cols as u64);
            let y: Vec<f64> = random_matrix(rows, 1, 99).iter().cloned().collect();
            let qr = least_squares_solve(a.view(), &y, lambda)
                .unwrap()
                .coefficients;
            let ne = normal_equations(&a, &y, lambda);
            for (p, q) in qr.iter().zip(&ne) {
                assert!((p - q).abs() < 1e-8, "{rows}x{cols} λ={lambda}: {p} vs {q}");
            }
        }
    }

    #[test]
    fn rank_deficient_without_regularization() {
        // duplicated column
        let mut a = random_matrix(20, 3, 5);
        let col = a.column(0).to_owned();
        a.column_mut(2).assign(&col);
        let y: Vec<f64> = random_matrix(20, 1, 6).iter().cloned().collect();
        let ls = least_squares_solve(a.view(), &y, 0.0).unwrap();
        assert!(ls.rank_deficient);
        assert_eq!(ls.rank, 2);
        // residual equals the one from the full-rank two-column problem
        let a2 = a.slice(s![.., 0..2]).to_owned();
        let c2 = least_squares_solve(a2.view(), &y, 0.0)
            .unwrap()
            .coefficients;
        let r_full = ridge_objective(a.view(), &y, 0.0, &ls.coefficients);
        let r_two = ridge_objective(a2.view(), &y, 0.0, &c2);
        assert!((r_full - r_two).abs() < 1e-10);
    }

    #[test]
    fn zero_targets_give_zero_ridge_solution() {
        let a = random_matrix(10, 25, 8);
        let ls = least_squares_solve(a.view(), &[0.0; 10], 1e-10).unwrap();
        assert!(ls.coefficients.iter().all(|&c| c == 0.0));
    }

    #[test]
    fn thomas_matches_dense_solution() {
        let sub = [0.0, 1.0, -1.0, 2.0];
        let diag = [4.0, 5.0, 6.0, 7.0];
        let sup = [1.0, 2.0, 0.5, 0.0];
        let x_true = [1.0, -2.0, 3.0, 0.5];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut v = diag[i] * x_true[i];
                if i > 0 {
                    v += sub[i] * x_true[i - 1];
                }
                if i < 3 {
                    v += sup[i] * x_true[i + 1];
                }
                v
            })
            .collect();
        let x = solve_tridiagonal(&sub, &diag, &sup, &rhs).unwrap();
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
