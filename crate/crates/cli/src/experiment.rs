use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vecnet::rng::derive_seed;
use vecnet::{
    assemble_vector_network, dual_uniform_error, sample_ensemble, uniform_error, AssemblyReport,
    Ensemble, Network, Seminorm, Target,
};

use crate::config::ExperimentConfig;
use crate::error::Result;

const ENSEMBLE_STREAM: u64 = 0;
const SPLIT_STREAM: u64 = 1;
const FIT_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub operator: String,
    pub family: String,
    /// Labels of the family members, in the order of every per-seminorm vector.
    pub seminorms: Vec<String>,
    pub duals: Vec<String>,
    pub train_samples: usize,
    pub heldout_samples: usize,
    /// Ordered by ε, then by targeted family index.
    pub runs: Vec<RunReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub epsilon: f64,
    pub target_index: usize,
    pub seminorm: String,
    pub m_centers: usize,
    pub c_max: f64,
    pub delta: Option<f64>,
    /// Number of neurons in the assembled network.
    pub width: usize,
    pub converged: bool,
    /// Training sup error under the targeted seminorm.
    pub train_sup_error: f64,
    pub heldout_sup_error: Option<f64>,
    pub train_errors: Vec<f64>,
    pub heldout_errors: Option<Vec<f64>>,
    pub train_dual_errors: Vec<f64>,
    pub heldout_dual_errors: Option<Vec<f64>>,
    pub assembly: AssemblyReport<f64>,
    pub wall_ms: f64,
}

impl ExperimentReport {
    /// Copy with every wall-clock field zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for r in &mut out.runs {
            r.wall_ms = 0.0;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub report: ExperimentReport,
    /// One network per run, aligned with `report.runs`.
    pub networks: Vec<Network>,
}

struct Split {
    train: Ensemble,
    train_values: Vec<Target>,
    heldout: Option<(Ensemble, Vec<Target>)>,
}

/// Deterministic train/held-out split of `n` samples; both index lists sorted.
pub fn split_indices(n: usize, heldout: usize, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| derive_seed(seed, i as u64));
    let mut held = order[..heldout].to_vec();
    let mut train = order[heldout..].to_vec();
    held.sort_unstable();
    train.sort_unstable();
    (train, held)
}

fn prepare(cfg: &ExperimentConfig) -> Result<Split> {
    let ensemble = sample_ensemble(&cfg.ensemble, derive_seed(cfg.seed, ENSEMBLE_STREAM))?;
    let values: Vec<Target> = ensemble
        .samples()
        .par_iter()
        .map(|s| cfg.operator.apply(s))
        .collect::<vecnet::Result<_>>()?;
    let (train_idx, held_idx) = split_indices(
        ensemble.len(),
        cfg.held_out_count(),
        derive_seed(cfg.seed, SPLIT_STREAM),
    );
    let pick = |idx: &[usize]| idx.iter().map(|&i| values[i].clone()).collect::<Vec<_>>();
    let heldout = if held_idx.is_empty() {
        None
    } else {
        Some((ensemble.subset(&held_idx)?, pick(&held_idx)))
    };
    Ok(Split {
        train: ensemble.subset(&train_idx)?,
        train_values: pick(&train_idx),
        heldout,
    })
}

/// Runs the pipeline for every `(ε, targeted seminorm)` pair of the sweep.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Experiment> {
    cfg.validate()?;
    let family = cfg.build_family()?;
    let out_shape = cfg.operator.output_shape(&cfg.ensemble.shape())?;
    let duals: Vec<Seminorm<f64>> = cfg
        .duals
        .iter()
        .map(|d| d.build(&out_shape))
        .collect::<Result<_>>()?;
    let fit = cfg.fit.to_fit_config(derive_seed(cfg.seed, FIT_STREAM))?;
    let split = prepare(cfg)?;

    let jobs: Vec<(f64, usize)> = cfg
        .epsilons
        .iter()
        .flat_map(|&eps| cfg.targets().into_iter().map(move |t| (eps, t)))
        .collect();
    let results: Vec<(RunReport, Network)> = jobs
        .par_iter()
        .map(|&(epsilon, target)| -> Result<(RunReport, Network)> {
            let start = Instant::now();
            let asm = assemble_vector_network(
                &split.train_values,
                &split.train,
                &family,
                target,
                epsilon,
                &fit,
            )?;
            let train_errors =
                uniform_error(&split.train_values, &asm.network, &split.train, &family)?;
            let train_dual_errors =
                dual_uniform_error(&split.train_values, &asm.network, &split.train, &duals)?;
            let (heldout_errors, heldout_dual_errors) = match &split.heldout {
                Some((e, v)) => (
                    Some(uniform_error(v, &asm.network, e, &family)?),
                    Some(dual_uniform_error(v, &asm.network, e, &duals)?),
                ),
                None => (None, None),
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            log::info!(
                "{} eps={epsilon} target={} m={} width={} converged={}",
                cfg.name,
                asm.report.seminorm,
                asm.report.centers,
                asm.network.width(),
                asm.report.converged
            );
            let run = RunReport {
                epsilon,
                target_index: target,
                seminorm: asm.report.seminorm.clone(),
                m_centers: asm.report.centers,
                c_max: asm.budget.c_max,
                delta: asm.budget.delta,
                width: asm.network.width(),
                converged: asm.report.converged,
                train_sup_error: train_errors[target],
                heldout_sup_error: heldout_errors.as_ref().map(|h| h[target]),
                train_errors,
                heldout_errors,
                train_dual_errors,
                heldout_dual_errors,
                assembly: asm.report,
                wall_ms,
            };
            Ok((run, asm.network))
        })
        .collect::<Result<_>>()?;

    let (runs, networks) = results.into_iter().unzip();
    Ok(Experiment {
        report: ExperimentReport {
            name: cfg.name.clone(),
            seed: cfg.seed,
            operator: cfg.operator.name(),
            family: family.name().to_owned(),
            seminorms: family.members().iter().map(Seminorm::label).collect(),
            duals: cfg.duals.iter().map(|d| d.label()).collect(),
            train_samples: split.train.len(),
            heldout_samples: split.heldout.as_ref().map_or(0, |(e, _)| e.len()),
            runs,
        },
        networks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::preset;

    #[test]
    fn split_is_a_partition() {
        let (train, held) = split_indices(20, 4, 3);
        assert_eq!((train.len(), held.len()), (16, 4));
        let mut all: Vec<usize> = train.iter().chain(&held).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
        assert_eq!(split_indices(20, 4, 3), (train, held));
        assert_ne!(split_indices(20, 4, 4).1, split_indices(20, 4, 3).1);
    }

    #[test]
    fn zero_operator_has_zero_errors() {
        let exp = run_experiment(&preset("zero_operator").unwrap()).unwrap();
        assert_eq!(exp.report.runs.len(), 6);
        for r in &exp.report.runs {
            assert_eq!(r.m_centers, 1);
            assert_eq!(r.width, 0);
            assert!(r
                .train_errors
                .iter()
                .chain(r.heldout_errors.as_ref().unwrap())
                .all(|&e| e == 0.0));
            assert!(r.train_dual_errors.iter().all(|&e| e == 0.0));
            assert!(r.assembly.budget.degenerate);
        }
    }

    #[test]
    fn no_heldout_when_fraction_zero() {
        let mut cfg = preset("sequence_sin").unwrap();
        cfg.held_out_fraction = 0.0;
        cfg.epsilons = vec![0.2];
        let exp = run_experiment(&cfg).unwrap();
        assert_eq!(exp.report.heldout_samples, 0);
        assert_eq!(exp.report.runs[0].heldout_sup_error, None);
    }
}
