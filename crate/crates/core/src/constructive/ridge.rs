use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::input_space::{
    draw_functional, CompactEnsemble, FunctionalSpec, InputPoint, LinearFunctional,
};
use crate::linalg::least_squares_solve;
use crate::network::Activation;
use crate::rng::{seeded, uniform};
use crate::scalar::Scalar;

pub const DEFAULT_LAMBDA: f64 = 1e-10;

/// Random-feature settings for the scalar fits.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig<T: Scalar> {
    /// Number of random ridge features (the bias feature comes on top).
    pub width: usize,
    /// Ceiling for the doubling schedule used during assembly.
    pub max_width: usize,
    pub activation: Activation<T>,
    /// Scale of the random functionals.
    pub functional_scale: T,
    pub functional_modes: usize,
    /// Thresholds are drawn uniformly from this closed interval.
    pub threshold_range: (T, T),
    pub lambda: T,
    pub seed: u64,
}

impl<T: Scalar> Default for FitConfig<T> {
    fn default() -> Self {
        Self {
            width: 25,
            max_width: 800,
            activation: Activation::Tanh,
            functional_scale: T::lit(2.0),
            functional_modes: crate::input_space::DEFAULT_FUNCTIONAL_MODES,
            threshold_range: (T::lit(-2.0), T::lit(2.0)),
            lambda: T::lit(DEFAULT_LAMBDA),
            seed: 0,
        }
    }
}

impl<T: Scalar> FitConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.width < 1 {
            return Err(invalid("width", "width must be at least 1"));
        }
        if self.max_width < self.width {
            return Err(invalid(
                "max_width",
                format!("max_width {} below width {}", self.max_width, self.width),
            ));
        }
        let (lo, hi) = self.threshold_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(invalid(
                "threshold_range",
                format!("bad interval [{lo}, {hi}]"),
            ));
        }
        if !(self.lambda.is_finite() && self.lambda >= T::zero()) {
            return Err(invalid(
                "lambda",
                format!("need lambda >= 0, got {}", self.lambda),
            ));
        }
        if !(self.functional_scale.is_finite() && self.functional_scale >= T::zero()) {
            return Err(invalid(
                "functional_scale",
                "scale must be finite and nonnegative",
            ));
        }
        Ok(())
    }
}

/// Scalar network `s ↦ Σ_k c_k η(ℓ_k(s) − θ_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarRidgeNet<T: Scalar> {
    pub activation: Activation<T>,
    /// `(ℓ_k, θ_k)`; with [`fit_scalar_ridge`] the first entry is the bias
    /// feature `(Zero, θ₀)`.
    pub features: Vec<(LinearFunctional<T>, T)>,
    pub weights: Vec<T>,
    /// Max-abs residual on the training samples.
    pub sup_error: T,
    pub rank_deficient: bool,
}

impl<T: Scalar> ScalarRidgeNet<T> {
    pub fn evaluate(&self, s: &InputPoint<T>) -> Result<T> {
        self.features
            .iter()
            .zip(&self.weights)
            .try_fold(T::zero(), |acc, ((l, theta), &c)| {
                Ok(acc + c * self.activation.eval(l.apply(s)? - *theta))
            })
    }

    /// Number of random features, excluding a leading bias feature.
    pub fn width(&self) -> usize {
        match self.features.first() {
            Some((LinearFunctional::Zero, _)) => self.features.len() - 1,
            _ => self.features.len(),
        }
    }
}

fn design_matrix<T: Scalar>(
    samples: &[InputPoint<T>],
    activation: &Activation<T>,
    features: &[(LinearFunctional<T>, T)],
) -> Result<Array2<T>> {
    let rows: Vec<Vec<T>> = samples
        .par_iter()
        .map(|s| {
            features
                .iter()
                .map(|(l, theta)| Ok(activation.eval(l.apply(s)? - *theta)))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let cols = features.len();
    Ok(Array2::from_shape_fn((samples.len(), cols), |(i, k)| {
        rows[i][k]
    }))
}

/// Least-squares readout over fixed features: minimizes
/// `‖Ac − y‖² + λ‖c‖²` with `A[i,k] = η(ℓ_k(s_i) − θ_k)`.
pub fn fit_with_features<T: Scalar>(
    inputs: &CompactEnsemble<T>,
    targets: &[T],
    activation: Activation<T>,
    features: Vec<(LinearFunctional<T>, T)>,
    lambda: T,
) -> Result<ScalarRidgeNet<T>> {
    if targets.len() != inputs.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} targets for {} samples",
            targets.len(),
            inputs.len()
        )));
    }
    if features.is_empty() {
        return Err(invalid("width", "need at least one feature"));
    }
    let design = design_matrix(inputs.samples(), &activation, &features)?;
    let ls = least_squares_solve(design.view(), targets, lambda)?;
    let sup_error = design
        .rows()
        .into_iter()
        .zip(targets)
        .map(|(row, &y)| {
            let p: T = row.iter().zip(&ls.coefficients).map(|(&a, &c)| a * c).sum();
            (p - y).abs()
        })
        .fold(T::zero(), T::max);
    Ok(ScalarRidgeNet {
        activation,
        features,
        weights: ls.coefficients,
        sup_error,
        rank_deficient: ls.rank_deficient,
    })
}

/// Draws `width` random features from the stream seeded by `seed`. The stream
/// is consumed one feature at a time, so smaller widths are prefixes of larger ones.
pub(crate) fn draw_features<T: Scalar>(
    spec: &FunctionalSpec<T>,
    range: (T, T),
    width: usize,
    seed: u64,
) -> Result<Vec<(LinearFunctional<T>, T)>> {
    let mut rng = seeded(seed);
    (0..width)
        .map(|_| {
            let l = draw_functional(spec, &mut rng)?;
            let theta = uniform(&mut rng, range.0, range.1);
            Ok((l, theta))
        })
        .collect()
}

/// Random-feature ridge fit of scalar targets over the ensemble, with
/// `cfg.width` seeded random features plus the constant bias feature
/// `η(0 − θ₀)`.
pub fn fit_scalar_ridge<T: Scalar>(
    inputs: &CompactEnsemble<T>,
    targets: &[T],
    cfg: &FitConfig<T>,
) -> Result<ScalarRidgeNet<T>> {
    cfg.validate()?;
    let spec = FunctionalSpec {
        shape: inputs.shape(),
        scale: cfg.functional_scale,
        modes: cfg.functional_modes,
    };
    let mut features = vec![(LinearFunctional::Zero, cfg.activation.bias_threshold())];
    features.extend(draw_features(
        &spec,
        cfg.threshold_range,
        cfg.width,
        cfg.seed,
    )?);
    fit_with_features(
        inputs,
        targets,
        cfg.activation.clone(),
        features,
        cfg.lambda,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input_space::InputPoint;

    fn line(n: usize) -> CompactEnsemble<f64> {
        let samples = (0..n)
            .map(|i| InputPoint::sequence(vec![-1.0 + 2.0 * i as f64 / (n - 1) as f64]).unwrap())
            .collect();
        CompactEnsemble::from_samples(samples).unwrap()
    }

    #[test]
    fn zero_targets_give_zero_fit() {
        let e = line(15);
        let cfg = FitConfig {
            width: 10,
            ..FitConfig::default()
        };
        let fit = fit_scalar_ridge(&e, &[0.0; 15], &cfg).unwrap();
        assert!(fit.weights.iter().all(|&c| c == 0.0));
        assert_eq!(fit.sup_error, 0.0);
    }

    #[test]
    fn relu_pair_reproduces_identity() {
        let e = line(21);
        let y: Vec<f64> = e.samples().iter().map(|s| s.values()[0]).collect();
        let feats = vec![
            (LinearFunctional::SequenceDot { coeffs: vec![1.0] }, 0.0),
            (LinearFunctional::SequenceDot { coeffs: vec![-1.0] }, 0.0),
        ];
        let fit = fit_with_features(&e, &y, Activation::Relu, feats, 0.0).unwrap();
        assert!((fit.weights[0] - 1.0).abs() < 1e-12);
        assert!((fit.weights[1] + 1.0).abs() < 1e-12);
        assert!(fit.sup_error < 1e-12);
    }

    #[test]
    fn width_prefixes_are_nested() {
        let spec = FunctionalSpec::new(crate::input_space::InputShape::Sequence { len: 2 }, 1.0);
        let a = draw_features(&spec, (-1.0, 1.0), 5, 9).unwrap();
        let b = draw_features(&spec, (-1.0, 1.0), 12, 9).unwrap();
        assert_eq!(&b[..5], &a[..]);
    }

    #[test]
    fn bad_config_rejected() {
        let e = line(4);
        let cfg = FitConfig::<f64> {
            width: 0,
            ..FitConfig::default()
        };
        assert!(fit_scalar_ridge(&e, &[0.0; 4], &cfg).is_err());
        let cfg = FitConfig::<f64> {
            threshold_range: (1.0, -1.0),
            ..FitConfig::default()
        };
        assert!(fit_scalar_ridge(&e, &[0.0; 4], &cfg).is_err());
        assert!(fit_scalar_ridge(&e, &[0.0; 3], &FitConfig::default()).is_err());
    }

    #[test]
    fn evaluate_matches_training_residual() {
        let e = line(30);
        let y: Vec<f64> = e
            .samples()
            .iter()
            .map(|s| (3.0 * s.values()[0]).sin())
            .collect();
        let cfg = FitConfig {
            width: 40,
            seed: 4,
            ..FitConfig::default()
        };
        let fit = fit_scalar_ridge(&e, &y, &cfg).unwrap();
        let sup = e
            .samples()
            .iter()
            .zip(&y)
            .map(|(s, t)| (fit.evaluate(s).unwrap() - t).abs())
            .fold(0.0, f64::max);
        assert!((sup - fit.sup_error).abs() < 1e-12);
        assert_eq!(fit.width(), 40);
    }
}
