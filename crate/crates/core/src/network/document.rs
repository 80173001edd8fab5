//! JSON documents for networks.
//!
//! ```json
//! {"activation": "tanh", "input_shape": {"kind": "sequence", "len": 3},
//!  "output_grid": {"a": 0.0, "b": 1.0, "n": 11}, "output_len": 11,
//!  "neurons": [{"functional": {"variant": "sequence_dot", "coefficients": [1.0, 0.0, 2.0]},
//!               "theta": 0.5, "coeff": [ ... ]}]}
//! ```
//! Quadrature and trace functionals take their grid or matrix size from
//! `input_shape`. Numbers are written in shortest round-trip form.

use serde::{Deserialize, Serialize};

use super::{Activation, Neuron, ShallowVectorNetwork};
use crate::error::{Error, Result};
use crate::grid::GridMeta;
use crate::input_space::{InputShape, LinearFunctional};
use crate::scalar::Scalar;
use crate::target_space::{TargetElement, TargetShape};

#[derive(Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct NetworkDocument<T: Scalar> {
    activation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    activation_coefficients: Vec<T>,
    input_shape: InputShape<T>,
    output_grid: Option<GridMeta<T>>,
    output_len: usize,
    neurons: Vec<NeuronDocument<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct NeuronDocument<T: Scalar> {
    functional: FunctionalDocument<T>,
    theta: T,
    coeff: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields)]
struct FunctionalDocument<T: Scalar> {
    variant: String,
    #[serde(default)]
    coefficients: Vec<T>,
}

pub fn serialize_network<T: Scalar>(net: &ShallowVectorNetwork<T>) -> String {
    let doc = NetworkDocument {
        activation: net.activation.name().to_string(),
        activation_coefficients: net.activation.params().to_vec(),
        input_shape: net.input_shape,
        output_grid: net.output_shape.grid,
        output_len: net.output_shape.len,
        neurons: net
            .neurons
            .iter()
            .map(|n| NeuronDocument {
                functional: FunctionalDocument {
                    variant: n.functional.name().to_string(),
                    coefficients: n.functional.coefficients().to_vec(),
                },
                theta: n.theta,
                coeff: n.coeff.values().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("network documents always serialize")
}

pub fn deserialize_network<T: Scalar>(text: &str) -> Result<ShallowVectorNetwork<T>> {
    let doc: NetworkDocument<T> =
        serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let activation = Activation::from_name(&doc.activation, &doc.activation_coefficients)?;
    if let InputShape::Function { grid } = &doc.input_shape {
        grid.validate()
            .map_err(|e| Error::InconsistentDocument(format!("input_shape: {e}")))?;
    }
    let output_shape = TargetShape {
        len: doc.output_len,
        grid: doc.output_grid,
    };
    if let Some(g) = &output_shape.grid {
        g.validate()
            .map_err(|e| Error::InconsistentDocument(format!("output_grid: {e}")))?;
        if g.n != output_shape.len {
            return Err(Error::InconsistentDocument(format!(
                "output_len {} differs from output_grid.n {}",
                output_shape.len, g.n
            )));
        }
    }
    let mut net = ShallowVectorNetwork::new(activation, doc.input_shape, output_shape.clone());
    for (i, n) in doc.neurons.into_iter().enumerate() {
        let functional = functional_from_doc(i, n.functional, &doc.input_shape)?;
        let coeff = TargetElement::new(n.coeff, output_shape.grid)
            .map_err(|e| Error::InconsistentDocument(format!("neurons[{i}].coeff: {e}")))?;
        if coeff.len() != output_shape.len {
            return Err(Error::InconsistentDocument(format!(
                "neurons[{i}].coeff has {} entries, output_len is {}",
                coeff.len(),
                output_shape.len
            )));
        }
        net.push(Neuron::new(functional, n.theta, coeff))
            .map_err(|e| Error::InconsistentDocument(e.to_string()))?;
    }
    Ok(net)
}

fn functional_from_doc<T: Scalar>(
    index: usize,
    doc: FunctionalDocument<T>,
    shape: &InputShape<T>,
) -> Result<LinearFunctional<T>> {
    let inconsistent = |what: &str| {
        Error::InconsistentDocument(format!(
            "neurons[{index}].functional: {} does not fit input_shape {shape:?}",
            what
        ))
    };
    let f = match (doc.variant.as_str(), shape) {
        ("zero", _) => {
            if !doc.coefficients.is_empty() {
                return Err(inconsistent("zero functional with coefficients"));
            }
            LinearFunctional::Zero
        }
        ("quadrature_pairing", InputShape::Function { grid }) => {
            LinearFunctional::QuadraturePairing {
                grid: *grid,
                phi: doc.coefficients,
            }
        }
        ("sequence_dot", InputShape::Sequence { .. }) => LinearFunctional::SequenceDot {
            coeffs: doc.coefficients,
        },
        ("matrix_trace", InputShape::Matrix { rows, cols }) => LinearFunctional::MatrixTrace {
            rows: *rows,
            cols: *cols,
            weights: doc.coefficients,
        },
        (v @ ("quadrature_pairing" | "sequence_dot" | "matrix_trace"), _) => {
            return Err(inconsistent(v));
        }
        (other, _) => {
            return Err(Error::UnknownName {
                field: format!("neurons[{index}].functional.variant"),
                value: other.to_string(),
            })
        }
    };
    if let Some(i) = f.coefficients().iter().position(|v| !v.is_finite()) {
        return Err(Error::InconsistentDocument(format!(
            "neurons[{index}].functional.coefficients[{i}] is not finite"
        )));
    }
    let expected = match (&f, shape) {
        (LinearFunctional::QuadraturePairing { .. }, InputShape::Function { grid }) => Some(grid.n),
        (LinearFunctional::MatrixTrace { .. }, InputShape::Matrix { rows, cols }) => {
            Some(rows * cols)
        }
        _ => None,
    };
    if expected.is_some_and(|n| n != f.coefficients().len()) || !f.accepts(shape) {
        return Err(inconsistent(&format!(
            "{} coefficients",
            f.coefficients().len()
        )));
    }
    Ok(f)
}
