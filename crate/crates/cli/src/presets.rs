use vecnet::{EnsembleFamily, EnsembleSpec, Grid, Kernel, MatrixMap, OperatorSpec, PointwiseMap};

use crate::config::{
    DualConfig, ExperimentConfig, FamilyConfig, FitSettings, OutputConfig, SeminormConfig,
};
use crate::error::{CliError, Result};

const PRESETS: &[(&str, &str)] = &[
    (
        "integral_gaussian",
        "Gaussian-kernel integral operator, functions to functions in L2 and L4",
    ),
    (
        "poisson_1d",
        "Dirichlet Poisson solution operator under L2, sup and sup-of-derivative",
    ),
    (
        "hilbert_poisson",
        "Poisson solution operator with the single L2 norm",
    ),
    (
        "superposition_sin",
        "pointwise sin(f), a nonlinear function-to-function map",
    ),
    (
        "sin_of_trace",
        "sin(tr Z)·e1 on a Frobenius ball of 2x2 matrices",
    ),
    ("sequence_sin", "entrywise sin on a box of finite sequences"),
    (
        "zero_operator",
        "sin(f) on the zero ensemble, so the operator vanishes",
    ),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn describe() -> &'static [(&'static str, &'static str)] {
    PRESETS
}

fn unit_grid() -> Grid {
    Grid::unit(101).expect("valid grid")
}

fn band_limited(samples: usize) -> EnsembleSpec<f64> {
    EnsembleSpec::new(
        EnsembleFamily::BandLimited {
            grid: unit_grid(),
            radii: vec![1.0, 0.5, 0.25],
        },
        samples,
    )
}

fn family(name: &str, members: Vec<SeminormConfig>) -> FamilyConfig {
    FamilyConfig {
        name: name.into(),
        members,
    }
}

fn base(
    name: &str,
    operator: OperatorSpec<f64>,
    ensemble: EnsembleSpec<f64>,
    family: FamilyConfig,
) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        operator,
        ensemble,
        held_out_fraction: 0.2,
        family,
        target_seminorm: Some(0),
        duals: Vec::new(),
        epsilons: vec![0.2, 0.1, 0.05],
        fit: FitSettings::default(),
        seed: 1,
        output: OutputConfig::default(),
    }
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let l2 = SeminormConfig::Lq { q: 2.0 };
    let sup = SeminormConfig::SupDerivative { order: 0 };
    Ok(match name {
        "integral_gaussian" => {
            let mut c = base(
                name,
                OperatorSpec::IntegralKernel {
                    kernel: Kernel::Gaussian { length: 1.0 },
                },
                band_limited(125),
                family("lq", vec![l2, SeminormConfig::Lq { q: 4.0 }]),
            );
            c.target_seminorm = None;
            c.duals = vec![
                DualConfig::SinMode { k: 1 },
                DualConfig::SinMode { k: 2 },
                DualConfig::Constant { value: 1.0 },
            ];
            c
        }
        "poisson_1d" => base(
            name,
            OperatorSpec::Poisson1d,
            band_limited(125),
            family(
                "sobolev_sup",
                vec![l2, sup, SeminormConfig::SupDerivative { order: 1 }],
            ),
        ),
        "hilbert_poisson" => base(
            name,
            OperatorSpec::Poisson1d,
            band_limited(125),
            family("hilbert", vec![l2]),
        ),
        "superposition_sin" => base(
            name,
            OperatorSpec::Superposition {
                map: PointwiseMap::Sin,
            },
            band_limited(125),
            family("l2_sup", vec![l2, sup]),
        ),
        "sin_of_trace" => base(
            name,
            OperatorSpec::MatrixMap {
                map: MatrixMap::SinOfTraceTimesBasis { dim: 3 },
            },
            EnsembleSpec::new(
                EnsembleFamily::MatrixBall {
                    rows: 2,
                    cols: 2,
                    radius: 2.0,
                },
                125,
            ),
            family("euclid_sup", vec![l2, sup]),
        ),
        "sequence_sin" => base(
            name,
            OperatorSpec::Superposition {
                map: PointwiseMap::Sin,
            },
            EnsembleSpec::new(
                EnsembleFamily::SequenceBox {
                    radii: vec![1.0, 0.5, 0.25, 0.125],
                },
                125,
            ),
            family("lq_seq", vec![l2, SeminormConfig::Lq { q: 1.0 }]),
        ),
        "zero_operator" => {
            let ensemble = EnsembleSpec::new(
                EnsembleFamily::BandLimited {
                    grid: unit_grid(),
                    radii: vec![0.0],
                },
                100,
            );
            let mut c = base(
                name,
                OperatorSpec::Superposition {
                    map: PointwiseMap::Sin,
                },
                ensemble,
                family("l2_sup", vec![l2, sup]),
            );
            c.target_seminorm = None;
            c.duals = vec![DualConfig::SinMode { k: 1 }];
            c
        }
        other => return Err(CliError::UnknownPreset(other.into())),
    })
}
