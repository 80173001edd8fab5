//! Ground-truth operators `F : E → T` used as approximation targets.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::GridMeta;
use crate::input_space::{InputPoint, InputShape};
use crate::linalg::solve_tridiagonal;
use crate::scalar::Scalar;
use crate::target_space::{TargetElement, TargetShape};

/// Continuous kernel `K(x, s)` on the domain of the input grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "snake_case")]
pub enum Kernel<T: Scalar> {
    /// `exp(−((x − s)/length)²)`
    Gaussian {
        length: T,
    },
    Constant {
        value: T,
    },
}

impl<T: Scalar> Kernel<T> {
    pub fn eval(&self, x: T, s: T) -> T {
        match self {
            Self::Gaussian { length } => {
                let r = (x - s) / *length;
                (-r * r).exp()
            }
            Self::Constant { value } => *value,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::Gaussian { length } if !(length.is_finite() && *length > T::zero()) => {
                Err(invalid(
                    "length",
                    format!("kernel length must be positive, got {length}"),
                ))
            }
            Self::Constant { value } if !value.is_finite() => {
                Err(invalid("value", "kernel constant must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Pointwise scalar map `g` for superposition operators `f ↦ g ∘ f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointwiseMap {
    Sin,
    Square,
    /// `exp(−y)`
    ExpNeg,
}

impl PointwiseMap {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "sin" => Ok(Self::Sin),
            "square" => Ok(Self::Square),
            "exp_neg" | "exp-" => Ok(Self::ExpNeg),
            other => Err(Error::UnknownName {
                field: "pointwise map".into(),
                value: other.into(),
            }),
        }
    }

    pub fn apply<T: Scalar>(self, y: T) -> T {
        match self {
            Self::Sin => y.sin(),
            Self::Square => y * y,
            Self::ExpNeg => (-y).exp(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case")]
pub enum MatrixMap {
    /// Vector of row sums.
    RowSums,
    /// `sin(tr Z) e₁ ∈ ℝ^dim`
    SinOfTraceTimesBasis { dim: usize },
}

impl MatrixMap {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "row_sums" => Ok(Self::RowSums),
            "sin_of_trace_times_basis" | "sin_of_trace" => {
                Ok(Self::SinOfTraceTimesBasis { dim: 3 })
            }
            other => Err(Error::UnknownName {
                field: "matrix map".into(),
                value: other.into(),
            }),
        }
    }
}

/// `(Ff)(x_i) = Σ_k w_k K(x_i, s_k) f(s_k)` with trapezoid weights on the
/// input grid. Output nodes default to the input grid and must lie inside it.
pub fn integral_operator_apply<T: Scalar>(
    kernel: &Kernel<T>,
    f: &InputPoint<T>,
    out_grid: Option<&GridMeta<T>>,
) -> Result<TargetElement<T>> {
    kernel.validate()?;
    let InputPoint::Function { grid, values } = f else {
        return Err(Error::ShapeMismatch(
            "integral operator needs a function input".into(),
        ));
    };
    let out = *out_grid.unwrap_or(grid);
    out.validate()?;
    if out.a < grid.a || out.b > grid.b {
        return Err(Error::IncompatibleGrid(format!(
            "output grid [{}, {}] leaves the kernel domain [{}, {}]",
            out.a, out.b, grid.a, grid.b
        )));
    }
    let s_nodes = grid.nodes();
    let mut integrand = vec![T::zero(); grid.n];
    let vals = out
        .nodes()
        .into_iter()
        .map(|x| {
            for ((slot, &s), &fs) in integrand.iter_mut().zip(&s_nodes).zip(values) {
                *slot = kernel.eval(x, s) * fs;
            }
            grid.trapezoid(&integrand)
        })
        .collect();
    TargetElement::on_grid(out, vals)
}

/// Solves `−u'' = f`, `u(a) = u(b) = 0` with the three-point scheme.
pub fn poisson_solve_1d<T: Scalar>(f: &InputPoint<T>) -> Result<TargetElement<T>> {
    let InputPoint::Function { grid, values } = f else {
        return Err(Error::ShapeMismatch(
            "Poisson solver needs a function input".into(),
        ));
    };
    let n = grid.n;
    if n < 3 {
        return Err(invalid(
            "grid",
            format!("Poisson solver needs n >= 3 nodes, got {n}"),
        ));
    }
    let h2 = grid.spacing() * grid.spacing();
    let m = n - 2;
    let two = T::lit(2.0);
    let sub = vec![-T::one(); m];
    let diag = vec![two; m];
    let sup = vec![-T::one(); m];
    let rhs: Vec<T> = values[1..n - 1].iter().map(|&v| v * h2).collect();
    let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs)?;
    let mut u = Vec::with_capacity(n);
    u.push(T::zero());
    u.extend(interior);
    u.push(T::zero());
    TargetElement::on_grid(*grid, u)
}

/// `(g ∘ f)` nodewise; sequences map to coefficient vectors.
pub fn superposition_apply<T: Scalar>(
    map: PointwiseMap,
    f: &InputPoint<T>,
) -> Result<TargetElement<T>> {
    match f {
        InputPoint::Function { grid, values } => {
            TargetElement::on_grid(*grid, values.iter().map(|&v| map.apply(v)).collect())
        }
        InputPoint::Sequence { coeffs } => {
            TargetElement::coefficients(coeffs.iter().map(|&v| map.apply(v)).collect())
        }
        InputPoint::Matrix { .. } => Err(Error::ShapeMismatch(
            "superposition needs a function or sequence input".into(),
        )),
    }
}

pub fn matrix_map_apply<T: Scalar>(map: MatrixMap, z: &InputPoint<T>) -> Result<TargetElement<T>> {
    let InputPoint::Matrix {
        rows,
        cols,
        entries,
    } = z
    else {
        return Err(Error::ShapeMismatch(
            "matrix map needs a matrix input".into(),
        ));
    };
    match map {
        MatrixMap::RowSums => TargetElement::coefficients(
            entries
                .chunks(*cols)
                .map(|r| r.iter().copied().sum())
                .collect(),
        ),
        MatrixMap::SinOfTraceTimesBasis { dim } => {
            if dim == 0 {
                return Err(invalid("dim", "output dimension must be positive"));
            }
            let trace: T = (0..(*rows).min(*cols)).map(|i| entries[i * cols + i]).sum();
            let mut out = vec![T::zero(); dim];
            out[0] = trace.sin();
            TargetElement::coefficients(out)
        }
    }
}

/// Named benchmark operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec<T: Scalar> {
    IntegralKernel {
        kernel: Kernel<T>,
    },
    Poisson1d,
    Superposition {
        map: PointwiseMap,
    },
    MatrixMap {
        #[serde(flatten)]
        map: MatrixMap,
    },
}

impl<T: Scalar> OperatorSpec<T> {
    pub fn name(&self) -> String {
        match self {
            Self::IntegralKernel {
                kernel: Kernel::Gaussian { .. },
            } => "integral_gaussian".into(),
            Self::IntegralKernel {
                kernel: Kernel::Constant { .. },
            } => "integral_constant".into(),
            Self::Poisson1d => "poisson_1d".into(),
            Self::Superposition { map } => format!("superposition_{map:?}").to_lowercase(),
            Self::MatrixMap {
                map: MatrixMap::RowSums,
            } => "row_sums".into(),
            Self::MatrixMap {
                map: MatrixMap::SinOfTraceTimesBasis { .. },
            } => "sin_of_trace".into(),
        }
    }

    pub fn apply(&self, s: &InputPoint<T>) -> Result<TargetElement<T>> {
        match self {
            Self::IntegralKernel { kernel } => integral_operator_apply(kernel, s, None),
            Self::Poisson1d => poisson_solve_1d(s),
            Self::Superposition { map } => superposition_apply(*map, s),
            Self::MatrixMap { map } => matrix_map_apply(*map, s),
        }
    }

    /// Output shape for inputs of `input`, or an error when the operator
    /// cannot act on that shape.
    pub fn output_shape(&self, input: &InputShape<T>) -> Result<TargetShape<T>> {
        let mismatch = || {
            Err(Error::ShapeMismatch(format!(
                "operator {} cannot act on {input:?}",
                self.name()
            )))
        };
        match (self, input) {
            (Self::IntegralKernel { .. } | Self::Poisson1d, InputShape::Function { grid }) => {
                if matches!(self, Self::Poisson1d) && grid.n < 3 {
                    return mismatch();
                }
                Ok(TargetShape::on_grid(*grid))
            }
            (Self::Superposition { .. }, InputShape::Function { grid }) => {
                Ok(TargetShape::on_grid(*grid))
            }
            (Self::Superposition { .. }, InputShape::Sequence { len }) => {
                Ok(TargetShape::coefficients(*len))
            }
            (
                Self::MatrixMap {
                    map: MatrixMap::RowSums,
                },
                InputShape::Matrix { rows, .. },
            ) => Ok(TargetShape::coefficients(*rows)),
            (
                Self::MatrixMap {
                    map: MatrixMap::SinOfTraceTimesBasis { dim },
                },
                InputShape::Matrix { .. },
            ) => Ok(TargetShape::coefficients(*dim)),
            _ => mismatch(),
        }
    }
}
