use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::input_space::{CompactEnsemble, FunctionalSpec, LinearFunctional};
use crate::network::{Neuron, ShallowVectorNetwork};
use crate::rng::derive_seed;
use crate::scalar::Scalar;
use crate::target_space::{family_sup_error, Seminorm, SeminormFamily, TargetElement};

use super::epsilon_net::{build_epsilon_net, EpsilonNet};
use super::partition::{build_partition, finite_rank_apply, PartitionOfUnity};
use super::ridge::{draw_features, fit_with_features, FitConfig, ScalarRidgeNet};
use super::STRICT_SLACK;

/// Split of the total tolerance `ε` between the finite-rank stage (`ε/2`) and
/// the scalar fits (`δ = ε/(2mC)` each).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ErrorBudget<T: Scalar> {
    pub epsilon: T,
    pub stage1: T,
    pub m: usize,
    /// `C = max_j ρ(v_j)`
    pub c_max: T,
    /// Per-coefficient tolerance; `None` on the `C = 0` branch.
    pub delta: Option<T>,
    pub degenerate: bool,
}

impl<T: Scalar> ErrorBudget<T> {
    pub fn new(epsilon: T, m: usize, c_max: T) -> Self {
        let two = T::lit(2.0);
        let degenerate = c_max == T::zero();
        Self {
            epsilon,
            stage1: epsilon / two,
            m,
            c_max,
            delta: (!degenerate).then(|| epsilon / (two * T::from_usize_lossy(m) * c_max)),
            degenerate,
        }
    }

    /// `δ·m·C ≤ ε/2` (with floating-point slack).
    pub fn is_consistent(&self) -> bool {
        match self.delta {
            None => self.degenerate,
            Some(d) => {
                d * T::from_usize_lossy(self.m) * self.c_max
                    <= self.stage1 * (T::one() + T::lit(STRICT_SLACK))
            }
        }
    }
}

/// Outcome of one scalar coefficient fit during assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CoefficientFit<T: Scalar> {
    pub index: usize,
    /// Width of the accepted (or last) attempt.
    pub width: usize,
    pub sup_error: T,
    pub met: bool,
    /// `(width, sup error)` for each attempt of the doubling schedule.
    pub attempts: Vec<(usize, T)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AssemblyReport<T: Scalar> {
    pub seminorm: String,
    pub budget: ErrorBudget<T>,
    pub centers: usize,
    /// `max_i ρ(F(s_i) − Σ_j ψ_j(s_i) v_j)`
    pub stage1_error: T,
    pub fits: Vec<CoefficientFit<T>>,
    /// Largest width used by any coefficient fit.
    pub max_width_used: usize,
    /// A posteriori bound `stage1_error + Σ_j sup_err_j ρ(v_j)`.
    pub error_bound: T,
    /// `max_i ρ(F(s_i) − G(s_i))` of the assembled network.
    pub train_error: T,
    pub converged: bool,
    pub network_width: usize,
    pub activation: String,
    /// False for activations outside the non-polynomial hypothesis (ReLU,
    /// polynomials); such runs carry no density guarantee.
    pub activation_meets_hypothesis: bool,
}

#[derive(Debug, Clone)]
pub struct Assembly<T: Scalar> {
    pub network: ShallowVectorNetwork<T>,
    pub budget: ErrorBudget<T>,
    pub report: AssemblyReport<T>,
    pub net: EpsilonNet<T>,
    pub partition: PartitionOfUnity<T>,
}

/// Builds `G = Σ_j Σ_k c_{jk} η(ℓ_{jk}(s) − θ_{jk}) v_j` approximating the
/// sampled operator values `F(s_i)` under `family[rho_index]`.
///
/// 1. ε/2-net of the values and its hat partition of unity.
/// 2. `C = max_j ρ(v_j)`; if `C = 0` the empty network already meets `ε`.
/// 3. Each `ψ_j` is fit by random features to `δ = ε/(2mC)`, doubling the width
///    from `cfg.width` up to `cfg.max_width`.
/// 4. Neuron `(ℓ, θ, c·v_j)` for every fitted feature.
///
/// When every fit meets `δ`, the training error is below `ε`. Otherwise the
/// network is still returned with `report.converged = false`.
pub fn assemble_vector_network<T: Scalar>(
    values: &[TargetElement<T>],
    ensemble: &CompactEnsemble<T>,
    family: &SeminormFamily<T>,
    rho_index: usize,
    epsilon: T,
    cfg: &FitConfig<T>,
) -> Result<Assembly<T>> {
    if values.len() != ensemble.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} operator values for {} samples",
            values.len(),
            ensemble.len()
        )));
    }
    cfg.validate()?;
    let rho = family.get(rho_index)?;
    let half = epsilon / T::lit(2.0);
    let net = build_epsilon_net(values, rho, half)?;
    let partition = build_partition(values, &net, rho)?;
    let m = net.len();

    let mut stage1_error = T::zero();
    for (i, f) in values.iter().enumerate() {
        let g = finite_rank_apply(&partition, &net, i)?;
        stage1_error = stage1_error.max(rho.distance(f, &g)?);
    }

    let center_norms: Vec<T> = net
        .centers
        .iter()
        .map(|v| rho.eval(v))
        .collect::<Result<_>>()?;
    let c_max = center_norms.iter().copied().fold(T::zero(), T::max);
    let budget = ErrorBudget::new(epsilon, m, c_max);
    let output_shape = values[0].shape();
    let mut network =
        ShallowVectorNetwork::new(cfg.activation.clone(), ensemble.shape(), output_shape);

    let report_base = |fits: Vec<CoefficientFit<T>>,
                       error_bound: T,
                       train_error: T,
                       converged: bool,
                       width: usize| {
        AssemblyReport {
            seminorm: rho.label(),
            budget: budget.clone(),
            centers: m,
            stage1_error,
            max_width_used: fits.iter().map(|f| f.width).max().unwrap_or(0),
            fits,
            error_bound,
            train_error,
            converged,
            network_width: width,
            activation: cfg.activation.name().to_string(),
            activation_meets_hypothesis: cfg.activation.meets_nonpolynomial_hypothesis(),
        }
    };

    let Some(delta) = budget.delta else {
        // Every F(s_i) is within ε/2 of a center with ρ(v_j) = 0.
        let sup_f = values
            .iter()
            .try_fold(T::zero(), |m, f| Ok::<_, Error>(m.max(rho.eval(f)?)))?;
        assert!(sup_f < half, "C = 0 branch with sup ρ(F) = {sup_f} >= ε/2");
        let report = report_base(Vec::new(), stage1_error, sup_f, true, 0);
        return Ok(Assembly {
            network,
            budget,
            report,
            net,
            partition,
        });
    };

    let spec = FunctionalSpec {
        shape: ensemble.shape(),
        scale: cfg.functional_scale,
        modes: cfg.functional_modes,
    };
    let fitted: Vec<(ScalarRidgeNet<T>, CoefficientFit<T>)> = (0..m)
        .into_par_iter()
        .map(|j| fit_coefficient(ensemble, &partition.column(j), j, delta, &spec, cfg))
        .collect::<Result<_>>()?;

    let mut error_bound = stage1_error;
    for ((ridge, _), (v, &norm)) in fitted.iter().zip(net.centers.iter().zip(&center_norms)) {
        error_bound = error_bound + ridge.sup_error * norm;
        for ((l, theta), &c) in ridge.features.iter().zip(&ridge.weights) {
            network.push(Neuron::new(l.clone(), *theta, v.scaled(c)))?;
        }
    }
    let converged = fitted.iter().all(|(_, f)| f.met);
    let train_error = uniform_error(
        values,
        &network,
        ensemble,
        &SeminormFamily::single(rho.clone()),
    )?[0];
    if converged {
        let limit = epsilon * (T::one() + T::lit(STRICT_SLACK));
        assert!(
            train_error < limit,
            "budget violated: error {train_error} >= ε = {epsilon} with every scalar fit inside δ"
        );
    }
    let width = network.width();
    let fits = fitted.into_iter().map(|(_, f)| f).collect();
    Ok(Assembly {
        network,
        budget: budget.clone(),
        report: report_base(fits, error_bound, train_error, converged, width),
        net,
        partition,
    })
}

fn fit_coefficient<T: Scalar>(
    ensemble: &CompactEnsemble<T>,
    targets: &[T],
    index: usize,
    delta: T,
    spec: &FunctionalSpec<T>,
    cfg: &FitConfig<T>,
) -> Result<(ScalarRidgeNet<T>, CoefficientFit<T>)> {
    let seed = derive_seed(cfg.seed, index as u64);
    // the widest draw; each attempt uses a prefix of it
    let pool = draw_features(spec, cfg.threshold_range, cfg.max_width, seed)?;
    let bias = (LinearFunctional::Zero, cfg.activation.bias_threshold());
    let mut width = cfg.width;
    let mut attempts = Vec::new();
    loop {
        let mut features = Vec::with_capacity(width + 1);
        features.push(bias.clone());
        features.extend_from_slice(&pool[..width]);
        let fit = fit_with_features(
            ensemble,
            targets,
            cfg.activation.clone(),
            features,
            cfg.lambda,
        )?;
        attempts.push((width, fit.sup_error));
        let met = fit.sup_error < delta;
        if met || width >= cfg.max_width {
            let record = CoefficientFit {
                index,
                width,
                sup_error: fit.sup_error,
                met,
                attempts,
            };
            return Ok((fit, record));
        }
        width = (width * 2).min(cfg.max_width);
    }
}

/// Per-seminorm `max_i ρ(F(s_i) − net(s_i))`.
pub fn uniform_error<T: Scalar>(
    values: &[TargetElement<T>],
    net: &ShallowVectorNetwork<T>,
    ensemble: &CompactEnsemble<T>,
    family: &SeminormFamily<T>,
) -> Result<Vec<T>> {
    let diffs = residuals(values, net, ensemble)?;
    family_sup_error(family, &diffs)
}

/// Per-test-functional `max_i |⟨t', F(s_i) − net(s_i)⟩|`. Every entry of
/// `duals` must be a `DualPairing` seminorm.
pub fn dual_uniform_error<T: Scalar>(
    values: &[TargetElement<T>],
    net: &ShallowVectorNetwork<T>,
    ensemble: &CompactEnsemble<T>,
    duals: &[Seminorm<T>],
) -> Result<Vec<T>> {
    if let Some(bad) = duals
        .iter()
        .find(|d| !matches!(d, Seminorm::DualPairing { .. }))
    {
        return Err(invalid(
            "duals",
            format!("{} is not a dual pairing", bad.label()),
        ));
    }
    if duals.is_empty() {
        return Ok(Vec::new());
    }
    let diffs = residuals(values, net, ensemble)?;
    let family = SeminormFamily::new("duals", duals.to_vec())?;
    family_sup_error(&family, &diffs)
}

fn residuals<T: Scalar>(
    values: &[TargetElement<T>],
    net: &ShallowVectorNetwork<T>,
    ensemble: &CompactEnsemble<T>,
) -> Result<Vec<TargetElement<T>>> {
    if values.len() != ensemble.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} operator values for {} samples",
            values.len(),
            ensemble.len()
        )));
    }
    values
        .par_iter()
        .zip(ensemble.samples().par_iter())
        .map(|(f, s)| f.sub(&net.evaluate(s)?))
        .collect()
}
