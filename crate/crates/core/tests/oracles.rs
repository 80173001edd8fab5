use std::f64::consts::PI;

use vecnet::input_space::band_limited;
use vecnet::{integral_operator_apply, poisson_solve_1d, Grid, Input, Kernel};

fn gaussian() -> Kernel<f64> {
    Kernel::Gaussian { length: 1.0 }
}

type Op = dyn Fn(&Input) -> Vec<f64>;

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Composite Simpson for `∫₀¹ exp(−(x−s)²) sin(πs) ds` on `n` (odd) nodes.
fn simpson_reference(x: f64, n: usize) -> f64 {
    let h = 1.0 / (n - 1) as f64;
    let f = |s: f64| (-(x - s) * (x - s)).exp() * (PI * s).sin();
    let mut acc = f(0.0) + f(1.0);
    for i in 1..n - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// Plain trapezoid for the same integral on `n` nodes.
fn trapezoid_reference(x: f64, n: usize) -> f64 {
    let h = 1.0 / (n - 1) as f64;
    let f = |s: f64| (-(x - s) * (x - s)).exp() * (PI * s).sin();
    let interior: f64 = (1..n - 1).map(|i| f(i as f64 * h)).sum();
    h * (interior + 0.5 * (f(0.0) + f(1.0)))
}

fn integral_on(n: usize) -> Vec<f64> {
    let g = Grid::unit(n).unwrap();
    let f = Input::function_from(g, |x| (PI * x).sin()).unwrap();
    integral_operator_apply(&gaussian(), &f, None)
        .unwrap()
        .into_values()
}

#[test]
fn integral_operator_matches_finer_quadrature() {
    let coarse = Grid::unit(101).unwrap();
    let ours = integral_on(101);
    let fine: Vec<f64> = coarse
        .nodes()
        .iter()
        .map(|&x| trapezoid_reference(x, 1001))
        .collect();
    assert!(sup_diff(&ours, &fine) < 1e-3);
}

#[test]
fn integral_operator_converges_at_second_order() {
    let errors: Vec<f64> = [26, 51, 101, 201]
        .iter()
        .map(|&n| {
            let g = Grid::unit(n).unwrap();
            let exact: Vec<f64> = g
                .nodes()
                .iter()
                .map(|&x| simpson_reference(x, 4001))
                .collect();
            sup_diff(&integral_on(n), &exact)
        })
        .collect();
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (3.0..=5.0).contains(&ratio),
            "ratio {ratio} from {errors:?}"
        );
    }
}

#[test]
fn poisson_reproduces_quadratic_solution() {
    let g = Grid::unit(101).unwrap();
    let f = Input::function_from(g, |_| 1.0).unwrap();
    let u = poisson_solve_1d(&f).unwrap();
    for (x, v) in g.nodes().iter().zip(u.values()) {
        assert!((v - x * (1.0 - x) / 2.0).abs() < 1e-13);
    }
    assert!((u.values()[50] - 0.125).abs() < 1e-14);
}

#[test]
fn poisson_sine_error_drops_fourfold() {
    let errors: Vec<f64> = [26, 51, 101, 201]
        .iter()
        .map(|&n| {
            let g = Grid::unit(n).unwrap();
            let f = Input::function_from(g, |x| (PI * x).sin()).unwrap();
            let u = poisson_solve_1d(&f).unwrap();
            let exact: Vec<f64> = g
                .nodes()
                .iter()
                .map(|&x| (PI * x).sin() / (PI * PI))
                .collect();
            sup_diff(u.values(), &exact)
        })
        .collect();
    assert!(errors[2] < 1e-3);
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (3.0..=5.0).contains(&ratio),
            "ratio {ratio} from {errors:?}"
        );
    }
}

#[test]
fn linear_operators_are_linear() {
    let g = Grid::unit(81).unwrap();
    let f = band_limited(&g, &[0.7, -0.2, 0.4]).unwrap();
    let h = Input::function_from(g, |x| (3.0 * x).cos() + x * x).unwrap();
    for (alpha, beta) in [(1.0, 1.0), (-2.5, 0.3), (1e-3, 7.0)] {
        let combo = f.lin_comb(alpha, &h, beta).unwrap();
        let ops: [&Op; 2] = [
            &|s| {
                integral_operator_apply(&gaussian(), s, None)
                    .unwrap()
                    .into_values()
            },
            &|s| poisson_solve_1d(s).unwrap().into_values(),
        ];
        for op in ops {
            let (of, oh, oc) = (op(&f), op(&h), op(&combo));
            for ((a, b), c) in of.iter().zip(&oh).zip(&oc) {
                let expected = alpha * a + beta * b;
                let scale = 1.0 + (alpha * a).abs() + (beta * b).abs();
                assert!((c - expected).abs() <= 1e-12 * scale);
            }
        }
    }
}
