//! Discretized inputs `s ∈ E ⊂ S`, continuous linear functionals on `S`, and
//! finitely sampled compact ensembles.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::GridMeta;
use crate::rng::{normal, seeded, uniform};
use crate::scalar::Scalar;

/// Shape of an input point; functionals and networks are tied to one shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "kind", rename_all = "snake_case")]
pub enum InputShape<T: Scalar> {
    Function { grid: GridMeta<T> },
    Sequence { len: usize },
    Matrix { rows: usize, cols: usize },
}

impl<T: Scalar> InputShape<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Function { grid } => grid.n,
            Self::Sequence { len } => *len,
            Self::Matrix { rows, cols } => rows * cols,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputPoint<T: Scalar> {
    /// Samples of a function on a uniform grid.
    Function { grid: GridMeta<T>, values: Vec<T> },
    /// Truncated sequence `(s_1, …, s_N)`.
    Sequence { coeffs: Vec<T> },
    /// Row-major `rows × cols` matrix.
    Matrix {
        rows: usize,
        cols: usize,
        entries: Vec<T>,
    },
}

fn check_finite<T: Scalar>(xs: &[T]) -> Result<()> {
    match xs.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

impl<T: Scalar> InputPoint<T> {
    pub fn function(grid: GridMeta<T>, values: Vec<T>) -> Result<Self> {
        grid.validate()?;
        check_finite(&values)?;
        if values.len() != grid.n {
            return Err(Error::ShapeMismatch(format!(
                "{} values on a {}-node grid",
                values.len(),
                grid.n
            )));
        }
        Ok(Self::Function { grid, values })
    }

    pub fn function_from(grid: GridMeta<T>, f: impl Fn(T) -> T) -> Result<Self> {
        Self::function(grid, grid.nodes().into_iter().map(f).collect())
    }

    pub fn sequence(coeffs: Vec<T>) -> Result<Self> {
        check_finite(&coeffs)?;
        Ok(Self::Sequence { coeffs })
    }

    pub fn matrix(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        check_finite(&entries)?;
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self::Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn shape(&self) -> InputShape<T> {
        match self {
            Self::Function { grid, .. } => InputShape::Function { grid: *grid },
            Self::Sequence { coeffs } => InputShape::Sequence { len: coeffs.len() },
            Self::Matrix { rows, cols, .. } => InputShape::Matrix {
                rows: *rows,
                cols: *cols,
            },
        }
    }

    /// Raw entries, in grid / sequence / row-major order.
    pub fn values(&self) -> &[T] {
        match self {
            Self::Function { values, .. } => values,
            Self::Sequence { coeffs } => coeffs,
            Self::Matrix { entries, .. } => entries,
        }
    }

    fn with_values(&self, values: Vec<T>) -> Self {
        match self {
            Self::Function { grid, .. } => Self::Function {
                grid: *grid,
                values,
            },
            Self::Sequence { .. } => Self::Sequence { coeffs: values },
            Self::Matrix { rows, cols, .. } => Self::Matrix {
                rows: *rows,
                cols: *cols,
                entries: values,
            },
        }
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: T, other: &Self, beta: T) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self.with_values(
            self.values()
                .iter()
                .zip(other.values())
                .map(|(&a, &b)| alpha * a + beta * b)
                .collect(),
        ))
    }

    pub fn scaled(&self, alpha: T) -> Self {
        self.with_values(self.values().iter().map(|&v| alpha * v).collect())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.values().iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// A continuous linear functional `ℓ ∈ S*`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearFunctional<T: Scalar> {
    /// `ℓ(f) = ∫ f φ` by the trapezoid rule.
    QuadraturePairing {
        grid: GridMeta<T>,
        phi: Vec<T>,
    },
    /// `ℓ(s) = Σ_{n<N} a_n s_n`; entries past `N` are paired with zero.
    SequenceDot {
        coeffs: Vec<T>,
    },
    /// `ℓ(Z) = tr(Wᵀ Z) = Σ_ij W_ij Z_ij`.
    MatrixTrace {
        rows: usize,
        cols: usize,
        weights: Vec<T>,
    },
    Zero,
}

impl<T: Scalar> LinearFunctional<T> {
    pub fn name(&self) -> &'static str {
        match self {
            Self::QuadraturePairing { .. } => "quadrature_pairing",
            Self::SequenceDot { .. } => "sequence_dot",
            Self::MatrixTrace { .. } => "matrix_trace",
            Self::Zero => "zero",
        }
    }

    /// Whether this functional can be applied to points of `shape`.
    pub fn accepts(&self, shape: &InputShape<T>) -> bool {
        match (self, shape) {
            (Self::Zero, _) => true,
            (Self::QuadraturePairing { grid, .. }, InputShape::Function { grid: g }) => grid == g,
            (Self::SequenceDot { coeffs }, InputShape::Sequence { len }) => coeffs.len() <= *len,
            (Self::MatrixTrace { rows, cols, .. }, InputShape::Matrix { rows: r, cols: c }) => {
                rows == r && cols == c
            }
            _ => false,
        }
    }

    pub fn apply(&self, s: &InputPoint<T>) -> Result<T> {
        if !self.accepts(&s.shape()) {
            return Err(Error::ShapeMismatch(format!(
                "{} functional applied to {:?} input",
                self.name(),
                s.shape()
            )));
        }
        Ok(match (self, s) {
            (Self::Zero, _) => T::zero(),
            (Self::QuadraturePairing { grid, phi }, InputPoint::Function { values, .. }) => {
                let prod: Vec<T> = phi.iter().zip(values).map(|(&a, &b)| a * b).collect();
                grid.trapezoid(&prod)
            }
            (Self::SequenceDot { coeffs }, InputPoint::Sequence { coeffs: s }) => {
                coeffs.iter().zip(s).map(|(&a, &b)| a * b).sum()
            }
            (Self::MatrixTrace { weights, .. }, InputPoint::Matrix { entries, .. }) => {
                weights.iter().zip(entries).map(|(&a, &b)| a * b).sum()
            }
            _ => unreachable!("shape checked above"),
        })
    }

    /// Coefficient vector (φ samples, a, or row-major W); empty for `Zero`.
    pub fn coefficients(&self) -> &[T] {
        match self {
            Self::QuadraturePairing { phi, .. } => phi,
            Self::SequenceDot { coeffs } => coeffs,
            Self::MatrixTrace { weights, .. } => weights,
            Self::Zero => &[],
        }
    }

    /// Trapezoid `Σ w_i |φ_i|` (or `Σ |a_n|`): with the max-abs of an input it
    /// bounds `|ℓ(s)|`.
    pub fn dual_l1_bound(&self) -> T {
        match self {
            Self::QuadraturePairing { grid, phi } => {
                let abs: Vec<T> = phi.iter().map(|v| v.abs()).collect();
                grid.trapezoid(&abs)
            }
            other => other.coefficients().iter().map(|v| v.abs()).sum(),
        }
    }
}

pub const DEFAULT_FUNCTIONAL_MODES: usize = 4;

/// Recipe for drawing random functionals compatible with one input shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FunctionalSpec<T: Scalar> {
    pub shape: InputShape<T>,
    pub scale: T,
    /// Highest trigonometric mode used for quadrature-pairing weights.
    #[serde(default = "default_modes")]
    pub modes: usize,
}

fn default_modes() -> usize {
    DEFAULT_FUNCTIONAL_MODES
}

impl<T: Scalar> FunctionalSpec<T> {
    pub fn new(shape: InputShape<T>, scale: T) -> Self {
        Self {
            shape,
            scale,
            modes: DEFAULT_FUNCTIONAL_MODES,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale >= T::zero()) {
            return Err(invalid(
                "scale",
                format!("need finite scale >= 0, got {}", self.scale),
            ));
        }
        if let InputShape::Function { grid } = &self.shape {
            grid.validate()?;
        }
        Ok(())
    }
}

/// Draws one functional from `rng`.
///
/// Quadrature weights are `scale · (g₀ + Σ_{k≤modes} g_k cos(kπu) + h_k sin(kπu))`
/// with `u` the position rescaled to `[0, 1]` and standard normal `g, h`; the
/// other variants take `scale · g` entrywise.
pub fn draw_functional<T: Scalar>(
    spec: &FunctionalSpec<T>,
    rng: &mut impl Rng,
) -> Result<LinearFunctional<T>> {
    spec.validate()?;
    if spec.scale == T::zero() {
        return Ok(LinearFunctional::Zero);
    }
    Ok(match spec.shape {
        InputShape::Function { grid } => {
            let g0: T = normal(rng);
            let modes: Vec<(T, T)> = (0..spec.modes)
                .map(|_| (normal(rng), normal(rng)))
                .collect();
            let pi = T::PI();
            let phi = grid
                .nodes()
                .into_iter()
                .map(|x| {
                    let u = (x - grid.a) / grid.length();
                    let wave: T = modes
                        .iter()
                        .enumerate()
                        .map(|(k, &(gc, gs))| {
                            let arg = T::from_usize_lossy(k + 1) * pi * u;
                            gc * arg.cos() + gs * arg.sin()
                        })
                        .sum();
                    spec.scale * (g0 + wave)
                })
                .collect();
            LinearFunctional::QuadraturePairing { grid, phi }
        }
        InputShape::Sequence { len } => LinearFunctional::SequenceDot {
            coeffs: (0..len).map(|_| spec.scale * normal::<T>(rng)).collect(),
        },
        InputShape::Matrix { rows, cols } => LinearFunctional::MatrixTrace {
            rows,
            cols,
            weights: (0..rows * cols)
                .map(|_| spec.scale * normal::<T>(rng))
                .collect(),
        },
    })
}

/// Deterministic functional for `(spec, seed)`; `scale = 0` gives `Zero`.
pub fn random_functional<T: Scalar>(
    spec: &FunctionalSpec<T>,
    seed: u64,
) -> Result<LinearFunctional<T>> {
    draw_functional(spec, &mut seeded(seed))
}

/// Parametric family whose image is a compact subset of the input space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", tag = "family", rename_all = "snake_case")]
pub enum EnsembleFamily<T: Scalar> {
    /// `f(x) = Σ_{k=1..K} c_k sin(kπ(x−a)/(b−a))` with `|c_k| ≤ radii[k−1]`.
    BandLimited { grid: GridMeta<T>, radii: Vec<T> },
    /// `|s_n| ≤ radii[n]`.
    SequenceBox { radii: Vec<T> },
    /// `‖Z‖_F ≤ radius`.
    MatrixBall { rows: usize, cols: usize, radius: T },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EnsembleSpec<T: Scalar> {
    #[serde(flatten)]
    pub family: EnsembleFamily<T>,
    pub samples: usize,
}

impl<T: Scalar> EnsembleSpec<T> {
    pub fn new(family: EnsembleFamily<T>, samples: usize) -> Self {
        Self { family, samples }
    }

    pub fn shape(&self) -> InputShape<T> {
        match &self.family {
            EnsembleFamily::BandLimited { grid, .. } => InputShape::Function { grid: *grid },
            EnsembleFamily::SequenceBox { radii } => InputShape::Sequence { len: radii.len() },
            EnsembleFamily::MatrixBall { rows, cols, .. } => InputShape::Matrix {
                rows: *rows,
                cols: *cols,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(invalid("samples", "sample count must be positive"));
        }
        let check_radii = |radii: &[T]| -> Result<()> {
            if radii.is_empty() {
                return Err(Error::Empty("ensemble parameter family"));
            }
            if radii.iter().any(|r| !(r.is_finite() && *r >= T::zero())) {
                return Err(invalid("radii", "radii must be finite and nonnegative"));
            }
            Ok(())
        };
        match &self.family {
            EnsembleFamily::BandLimited { grid, radii } => {
                grid.validate()?;
                check_radii(radii)
            }
            EnsembleFamily::SequenceBox { radii } => check_radii(radii),
            EnsembleFamily::MatrixBall { rows, cols, radius } => {
                if rows * cols == 0 {
                    return Err(Error::Empty("ensemble parameter family"));
                }
                check_radii(std::slice::from_ref(radius))
            }
        }
    }
}

/// Finite sample of a compact set `E`, with the generator that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactEnsemble<T: Scalar> {
    samples: Vec<InputPoint<T>>,
    parameters: Vec<Vec<T>>,
    generator: Option<(EnsembleSpec<T>, u64)>,
}

impl<T: Scalar> CompactEnsemble<T> {
    /// Ensemble from explicit points (no generator recorded).
    pub fn from_samples(samples: Vec<InputPoint<T>>) -> Result<Self> {
        let first = samples.first().ok_or(Error::Empty("ensemble"))?.shape();
        if let Some(bad) = samples.iter().position(|s| s.shape() != first) {
            return Err(Error::ShapeMismatch(format!(
                "sample {bad} differs in shape from sample 0"
            )));
        }
        let parameters = samples.iter().map(|s| s.values().to_vec()).collect();
        Ok(Self {
            samples,
            parameters,
            generator: None,
        })
    }

    pub fn samples(&self) -> &[InputPoint<T>] {
        &self.samples
    }

    /// Generating parameters of each sample (`c_k`, `s_n`, or matrix entries).
    pub fn parameters(&self) -> &[Vec<T>] {
        &self.parameters
    }

    pub fn generator(&self) -> Option<&(EnsembleSpec<T>, u64)> {
        self.generator.as_ref()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn shape(&self) -> InputShape<T> {
        self.samples[0].shape()
    }

    /// Sub-ensemble at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Empty("ensemble subset"));
        }
        let mut samples = Vec::with_capacity(indices.len());
        let mut parameters = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: self.len(),
                });
            }
            samples.push(self.samples[i].clone());
            parameters.push(self.parameters[i].clone());
        }
        Ok(Self {
            samples,
            parameters,
            generator: None,
        })
    }
}

/// Draws `spec.samples` points uniformly from the parameter box (or ball).
pub fn sample_ensemble<T: Scalar>(spec: &EnsembleSpec<T>, seed: u64) -> Result<CompactEnsemble<T>> {
    spec.validate()?;
    let mut rng = seeded(seed);
    let mut samples = Vec::with_capacity(spec.samples);
    let mut parameters = Vec::with_capacity(spec.samples);
    for _ in 0..spec.samples {
        let (point, params) = match &spec.family {
            EnsembleFamily::BandLimited { grid, radii } => {
                let c: Vec<T> = radii.iter().map(|&r| uniform(&mut rng, -r, r)).collect();
                (band_limited(grid, &c)?, c)
            }
            EnsembleFamily::SequenceBox { radii } => {
                let s: Vec<T> = radii.iter().map(|&r| uniform(&mut rng, -r, r)).collect();
                (InputPoint::sequence(s.clone())?, s)
            }
            EnsembleFamily::MatrixBall { rows, cols, radius } => {
                let z = frobenius_ball(&mut rng, rows * cols, *radius);
                (InputPoint::matrix(*rows, *cols, z.clone())?, z)
            }
        };
        samples.push(point);
        parameters.push(params);
    }
    Ok(CompactEnsemble {
        samples,
        parameters,
        generator: Some((spec.clone(), seed)),
    })
}

/// `Σ_k c_k sin(kπu)` on `grid`, `u = (x−a)/(b−a)`.
pub fn band_limited<T: Scalar>(grid: &GridMeta<T>, c: &[T]) -> Result<InputPoint<T>> {
    let pi = T::PI();
    InputPoint::function_from(*grid, |x| {
        let u = (x - grid.a) / grid.length();
        c.iter()
            .enumerate()
            .map(|(k, &ck)| ck * (T::from_usize_lossy(k + 1) * pi * u).sin())
            .sum()
    })
}

fn frobenius_norm<T: Scalar>(z: &[T]) -> T {
    z.iter().map(|&v| v * v).sum::<T>().sqrt()
}

fn frobenius_ball<T: Scalar>(rng: &mut impl Rng, dim: usize, radius: T) -> Vec<T> {
    if radius == T::zero() {
        return vec![T::zero(); dim];
    }
    let g: Vec<T> = loop {
        let g: Vec<T> = (0..dim).map(|_| normal(rng)).collect();
        if frobenius_norm(&g) > T::zero() {
            break g;
        }
    };
    let norm = frobenius_norm(&g);
    let u: T = uniform(rng, T::zero(), T::one());
    let r = radius * u.powf(T::from_usize_lossy(dim).recip());
    let mut z: Vec<T> = g.iter().map(|&v| v / norm * r).collect();
    // rounding can push the norm a few ulps past the radius
    while frobenius_norm(&z) > radius {
        let shrink = T::one() - T::lit(4.0) * T::epsilon();
        z.iter_mut().for_each(|v| *v = *v * shrink);
    }
    z
}
