//! The shallow vector-valued network class: finite sums
//! `s ↦ Σ_j η(ℓ_j(s) − θ_j) v_j` with scalar activation `η`, functionals
//! `ℓ_j ∈ S*`, thresholds `θ_j` and coefficients `v_j` in the target space.

mod document;

pub use document::{deserialize_network, serialize_network};

use crate::error::{Error, Result};
use crate::input_space::{InputPoint, InputShape, LinearFunctional};
use crate::scalar::Scalar;
use crate::target_space::{TargetElement, TargetShape};

/// Scalar activation function.
#[derive(Debug, Clone, PartialEq)]
pub enum Activation<T: Scalar> {
    Tanh,
    Sigmoid,
    /// Piecewise linear; admitted with a caveat, see [`Activation::meets_nonpolynomial_hypothesis`].
    Relu,
    /// `exp(−x²)`
    Gaussian,
    /// `Σ_k coeffs[k] x^k`. Negative control: polynomial activations never
    /// produce a dense class.
    Polynomial {
        coeffs: Vec<T>,
    },
}

impl<T: Scalar> Activation<T> {
    pub fn polynomial(coeffs: Vec<T>) -> Self {
        Self::Polynomial { coeffs }
    }

    /// `x²`, the degree-2 control.
    pub fn square() -> Self {
        Self::Polynomial {
            coeffs: vec![T::zero(), T::zero(), T::one()],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Tanh => "tanh",
            Self::Sigmoid => "sigmoid",
            Self::Relu => "relu",
            Self::Gaussian => "gaussian",
            Self::Polynomial { .. } => "polynomial",
        }
    }

    /// Parses a name; `params` are the polynomial coefficients and must be
    /// empty for every other activation.
    pub fn from_name(name: &str, params: &[T]) -> Result<Self> {
        let plain = |a: Self| {
            if params.is_empty() {
                Ok(a)
            } else {
                Err(Error::InconsistentDocument(format!(
                    "activation `{name}` takes no coefficients"
                )))
            }
        };
        match name {
            "tanh" => plain(Self::Tanh),
            "sigmoid" => plain(Self::Sigmoid),
            "relu" => plain(Self::Relu),
            "gaussian" => plain(Self::Gaussian),
            "polynomial" => {
                if params.is_empty() {
                    return Err(Error::InconsistentDocument(
                        "polynomial activation needs coefficients".into(),
                    ));
                }
                Ok(Self::Polynomial {
                    coeffs: params.to_vec(),
                })
            }
            other => Err(Error::UnknownName {
                field: "activation".into(),
                value: other.into(),
            }),
        }
    }

    pub fn params(&self) -> &[T] {
        match self {
            Self::Polynomial { coeffs } => coeffs,
            _ => &[],
        }
    }

    pub fn is_negative_control(&self) -> bool {
        matches!(self, Self::Polynomial { .. })
    }

    /// True for activations that are continuous and not a polynomial on any
    /// open interval. ReLU fails this (it is affine on each half-line) even
    /// though it is globally non-polynomial.
    pub fn meets_nonpolynomial_hypothesis(&self) -> bool {
        matches!(self, Self::Tanh | Self::Sigmoid | Self::Gaussian)
    }

    pub fn eval(&self, x: T) -> T {
        match self {
            Self::Tanh => x.tanh(),
            Self::Sigmoid => {
                if x >= T::zero() {
                    (T::one() + (-x).exp()).recip()
                } else {
                    let e = x.exp();
                    e / (T::one() + e)
                }
            }
            Self::Relu => x.max(T::zero()),
            Self::Gaussian => (-x * x).exp(),
            Self::Polynomial { coeffs } => {
                coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
            }
        }
    }

    /// A threshold `θ₀` with `η(−θ₀) ≠ 0`, so `η(0(s) − θ₀)` is a usable constant feature.
    pub fn bias_threshold(&self) -> T {
        [-1.0, 0.0, 1.0, -2.0, 2.0]
            .into_iter()
            .map(T::lit)
            .find(|&t| self.eval(-t) != T::zero())
            .unwrap_or_else(|| -T::one())
    }
}

/// One term `η(ℓ(s) − θ) v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Neuron<T: Scalar> {
    pub functional: LinearFunctional<T>,
    pub theta: T,
    pub coeff: TargetElement<T>,
}

impl<T: Scalar> Neuron<T> {
    pub fn new(functional: LinearFunctional<T>, theta: T, coeff: TargetElement<T>) -> Self {
        Self {
            functional,
            theta,
            coeff,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShallowVectorNetwork<T: Scalar> {
    activation: Activation<T>,
    input_shape: InputShape<T>,
    output_shape: TargetShape<T>,
    neurons: Vec<Neuron<T>>,
}

impl<T: Scalar> ShallowVectorNetwork<T> {
    /// Empty network; evaluates to the zero element of `output_shape`.
    pub fn new(
        activation: Activation<T>,
        input_shape: InputShape<T>,
        output_shape: TargetShape<T>,
    ) -> Self {
        Self {
            activation,
            input_shape,
            output_shape,
            neurons: Vec::new(),
        }
    }

    pub fn with_neurons(
        activation: Activation<T>,
        input_shape: InputShape<T>,
        output_shape: TargetShape<T>,
        neurons: Vec<Neuron<T>>,
    ) -> Result<Self> {
        let mut net = Self::new(activation, input_shape, output_shape);
        for n in neurons {
            net.push(n)?;
        }
        Ok(net)
    }

    pub fn push(&mut self, neuron: Neuron<T>) -> Result<()> {
        let index = self.neurons.len();
        if !neuron.functional.accepts(&self.input_shape) {
            return Err(Error::ShapeMismatch(format!(
                "neuron {index}: {} functional does not accept {:?}",
                neuron.functional.name(),
                self.input_shape
            )));
        }
        if neuron.coeff.shape() != self.output_shape {
            return Err(Error::ShapeMismatch(format!(
                "neuron {index}: coefficient shape {:?} differs from output shape {:?}",
                neuron.coeff.shape(),
                self.output_shape
            )));
        }
        if !neuron.theta.is_finite() {
            return Err(Error::NonFinite { index });
        }
        self.neurons.push(neuron);
        Ok(())
    }

    pub fn activation(&self) -> &Activation<T> {
        &self.activation
    }

    pub fn input_shape(&self) -> &InputShape<T> {
        &self.input_shape
    }

    pub fn output_shape(&self) -> &TargetShape<T> {
        &self.output_shape
    }

    pub fn neurons(&self) -> &[Neuron<T>] {
        &self.neurons
    }

    pub fn width(&self) -> usize {
        self.neurons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neurons.is_empty()
    }

    pub fn evaluate(&self, s: &InputPoint<T>) -> Result<TargetElement<T>> {
        if s.shape() != self.input_shape {
            return Err(Error::ShapeMismatch(format!(
                "network expects {:?}, got {:?}",
                self.input_shape,
                s.shape()
            )));
        }
        let mut out = self.output_shape.zeros();
        for n in &self.neurons {
            let a = self.activation.eval(n.functional.apply(s)? - n.theta);
            out.axpy(a, &n.coeff)?;
        }
        Ok(out)
    }

    /// Network whose evaluation is the sum of both; neuron lists are concatenated.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.activation != other.activation {
            return Err(Error::ShapeMismatch(format!(
                "activations differ: {} vs {}",
                self.activation.name(),
                other.activation.name()
            )));
        }
        if self.input_shape != other.input_shape || self.output_shape != other.output_shape {
            return Err(Error::ShapeMismatch("network shapes differ".into()));
        }
        let mut out = self.clone();
        out.neurons.extend(other.neurons.iter().cloned());
        Ok(out)
    }

    /// Multiplies every coefficient `v_j` by `lambda`.
    pub fn scale_coefficients(&self, lambda: T) -> Self {
        let mut out = self.clone();
        for n in &mut out.neurons {
            n.coeff = n.coeff.scaled(lambda);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMeta;

    #[test]
    fn activation_values() {
        assert_eq!(Activation::<f64>::Tanh.eval(0.0), 0.0);
        assert_eq!(Activation::<f64>::Relu.eval(-3.0), 0.0);
        assert_eq!(Activation::<f64>::Relu.eval(2.0), 2.0);
        assert_eq!(Activation::<f64>::Sigmoid.eval(0.0), 0.5);
        assert_eq!(Activation::<f64>::Gaussian.eval(0.0), 1.0);
        let p = Activation::polynomial(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        // no overflow in the far tails
        assert_eq!(Activation::<f64>::Sigmoid.eval(-1000.0), 0.0);
        assert_eq!(Activation::<f64>::Sigmoid.eval(1000.0), 1.0);
    }

    #[test]
    fn hypothesis_flags() {
        assert!(Activation::<f64>::Tanh.meets_nonpolynomial_hypothesis());
        assert!(!Activation::<f64>::Relu.meets_nonpolynomial_hypothesis());
        assert!(Activation::<f64>::square().is_negative_control());
        assert!(!Activation::<f64>::Gaussian.is_negative_control());
    }

    #[test]
    fn bias_threshold_gives_nonzero_constant() {
        for a in [
            Activation::<f64>::Tanh,
            Activation::Sigmoid,
            Activation::Relu,
            Activation::Gaussian,
            Activation::square(),
            Activation::polynomial(vec![0.0, 1.0]),
        ] {
            assert_ne!(a.eval(-a.bias_threshold()), 0.0, "{}", a.name());
        }
    }

    #[test]
    fn empty_network_evaluates_to_zero() {
        let g = GridMeta::unit(11).unwrap();
        let net = ShallowVectorNetwork::new(
            Activation::Tanh,
            InputShape::Sequence { len: 2 },
            TargetShape::on_grid(g),
        );
        let out = net
            .evaluate(&InputPoint::sequence(vec![1.0, 2.0]).unwrap())
            .unwrap();
        assert_eq!(out, TargetShape::on_grid(g).zeros());
    }

    #[test]
    fn single_relu_neuron_on_matrix_input() {
        let l = LinearFunctional::MatrixTrace {
            rows: 2,
            cols: 2,
            weights: vec![1.0, 0.0, 0.0, 1.0],
        };
        let v = TargetElement::coefficients(vec![1.0, 0.0]).unwrap();
        let net = ShallowVectorNetwork::with_neurons(
            Activation::Relu,
            InputShape::Matrix { rows: 2, cols: 2 },
            TargetShape::coefficients(2),
            vec![Neuron::new(l, 0.0, v)],
        )
        .unwrap();
        let out = net
            .evaluate(&InputPoint::matrix(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap())
            .unwrap();
        assert_eq!(out.values(), &[2.0, 0.0]);
    }

    #[test]
    fn zero_functional_neuron_is_a_constant() {
        let g = GridMeta::<f64>::unit(21).unwrap();
        let v = TargetElement::from_fn(g, |_| 1.0).unwrap();
        let net = ShallowVectorNetwork::with_neurons(
            Activation::Tanh,
            InputShape::Function { grid: g },
            TargetShape::on_grid(g),
            vec![Neuron::new(LinearFunctional::Zero, -1.0, v)],
        )
        .unwrap();
        let s = InputPoint::function_from(g, |x| x.sin()).unwrap();
        let out = net.evaluate(&s).unwrap();
        let expected = 1.0_f64.tanh();
        assert!((expected - 0.7615942).abs() < 1e-7);
        assert!(out.values().iter().all(|&y| y == expected));
    }

    #[test]
    fn push_rejects_inconsistent_neurons() {
        let g = GridMeta::unit(5).unwrap();
        let mut net = ShallowVectorNetwork::new(
            Activation::Tanh,
            InputShape::Sequence { len: 3 },
            TargetShape::on_grid(g),
        );
        let v = TargetShape::on_grid(g).zeros();
        let wrong_input = LinearFunctional::MatrixTrace {
            rows: 1,
            cols: 1,
            weights: vec![1.0],
        };
        assert!(net.push(Neuron::new(wrong_input, 0.0, v.clone())).is_err());
        let wrong_output = TargetElement::coefficients(vec![0.0; 5]).unwrap();
        assert!(net
            .push(Neuron::new(LinearFunctional::Zero, 0.0, wrong_output))
            .is_err());
        assert!(net
            .push(Neuron::new(LinearFunctional::Zero, 0.0, v))
            .is_ok());
    }

    #[test]
    fn sum_requires_matching_activation() {
        let shape = InputShape::Sequence { len: 1 };
        let a =
            ShallowVectorNetwork::<f64>::new(Activation::Tanh, shape, TargetShape::coefficients(1));
        let b = ShallowVectorNetwork::new(Activation::Relu, shape, TargetShape::coefficients(1));
        assert!(a.sum(&b).is_err());
        assert!(a.sum(&a).is_ok());
    }
}
