//! Discretized elements of the locally convex target space and the seminorms
//! that generate its topology.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{derivative, GridMeta};
use crate::scalar::Scalar;

/// Length and optional grid of a target element. Two elements combine only when
/// their shapes are identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct TargetShape<T: Scalar> {
    pub len: usize,
    pub grid: Option<GridMeta<T>>,
}

impl<T: Scalar> TargetShape<T> {
    pub fn on_grid(grid: GridMeta<T>) -> Self {
        Self {
            len: grid.n,
            grid: Some(grid),
        }
    }

    pub fn coefficients(len: usize) -> Self {
        Self { len, grid: None }
    }

    pub fn zeros(&self) -> TargetElement<T> {
        TargetElement {
            values: vec![T::zero(); self.len],
            grid: self.grid,
        }
    }
}

/// A point of the target space: grid samples of a function, or a plain
/// coefficient vector when `grid` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetElement<T: Scalar> {
    values: Vec<T>,
    grid: Option<GridMeta<T>>,
}

impl<T: Scalar> TargetElement<T> {
    pub fn new(values: Vec<T>, grid: Option<GridMeta<T>>) -> Result<Self> {
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if let Some(g) = &grid {
            g.validate()?;
            if g.n != values.len() {
                return Err(Error::ShapeMismatch(format!(
                    "{} values on a {}-node grid",
                    values.len(),
                    g.n
                )));
            }
        }
        Ok(Self { values, grid })
    }

    pub fn coefficients(values: Vec<T>) -> Result<Self> {
        Self::new(values, None)
    }

    pub fn on_grid(grid: GridMeta<T>, values: Vec<T>) -> Result<Self> {
        Self::new(values, Some(grid))
    }

    /// Samples `f` at the grid nodes.
    pub fn from_fn(grid: GridMeta<T>, f: impl Fn(T) -> T) -> Result<Self> {
        Self::new(grid.nodes().into_iter().map(f).collect(), Some(grid))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn grid(&self) -> Option<&GridMeta<T>> {
        self.grid.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn shape(&self) -> TargetShape<T> {
        TargetShape {
            len: self.values.len(),
            grid: self.grid,
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrid(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        if self.values.len() != other.values.len() {
            return Err(Error::ShapeMismatch(format!(
                "lengths {} and {}",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scaled(&self, lambda: T) -> Self {
        Self {
            values: self.values.iter().map(|&v| lambda * v).collect(),
            grid: self.grid,
        }
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: T, x: &Self) -> Result<()> {
        self.check_compatible(x)?;
        for (s, &v) in self.values.iter_mut().zip(&x.values) {
            *s = *s + alpha * v;
        }
        Ok(())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            grid: self.grid,
        }
    }

    /// Integral of pointwise samples `f` aligned with this element: trapezoid
    /// rule on a grid, plain sum (counting measure) otherwise.
    pub(crate) fn integrate(&self, f: &[T]) -> T {
        match &self.grid {
            Some(g) => g.trapezoid(f),
            None => f.iter().copied().sum(),
        }
    }
}

pub const DEFAULT_SCHWARTZ_RADIUS: f64 = 8.0;

/// A continuous seminorm on the discretized target space.
#[derive(Debug, Clone, PartialEq)]
pub enum Seminorm<T: Scalar> {
    /// `(Σ w_i |t_i|^q)^{1/q}` with trapezoid weights, or unit weights on
    /// grid-free coefficient vectors.
    LqQuadrature { q: T },
    /// `max_i |D^order t (x_i)|` from finite differences.
    SupDerivative { order: usize },
    /// `max_{|x_i| ≤ radius} |x_i^alpha (D^beta t)(x_i)|`, the truncated Schwartz seminorm.
    SchwartzWeighted { alpha: u32, beta: usize, radius: T },
    /// `|⟨test, t⟩|` under the same weights as `LqQuadrature`.
    DualPairing { test: Vec<T> },
}

impl<T: Scalar> Seminorm<T> {
    pub fn lq(q: T) -> Result<Self> {
        if !(q.is_finite() && q >= T::one()) {
            return Err(invalid("q", format!("need finite q >= 1, got {q}")));
        }
        Ok(Self::LqQuadrature { q })
    }

    pub fn l2() -> Self {
        Self::LqQuadrature { q: T::lit(2.0) }
    }

    pub fn sup_derivative(order: usize) -> Self {
        Self::SupDerivative { order }
    }

    pub fn schwartz(alpha: u32, beta: usize, radius: Option<T>) -> Result<Self> {
        let radius = radius.unwrap_or_else(|| T::lit(DEFAULT_SCHWARTZ_RADIUS));
        if !(radius.is_finite() && radius > T::zero()) {
            return Err(invalid(
                "radius",
                format!("need finite radius > 0, got {radius}"),
            ));
        }
        Ok(Self::SchwartzWeighted {
            alpha,
            beta,
            radius,
        })
    }

    pub fn dual(test: Vec<T>) -> Result<Self> {
        if let Some(index) = test.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self::DualPairing { test })
    }

    /// Short human-readable tag used in reports.
    pub fn label(&self) -> String {
        match self {
            Self::LqQuadrature { q } => format!("L{q}"),
            Self::SupDerivative { order } => format!("sup|D^{order}|"),
            Self::SchwartzWeighted {
                alpha,
                beta,
                radius,
            } => {
                format!("schwartz(x^{alpha} D^{beta}, R={radius})")
            }
            Self::DualPairing { test } => format!("dual[{}]", test.len()),
        }
    }

    pub fn eval(&self, t: &TargetElement<T>) -> Result<T> {
        match self {
            Self::LqQuadrature { q } => {
                if *q < T::one() {
                    return Err(invalid("q", format!("need q >= 1, got {q}")));
                }
                Ok(lq_norm(t, *q))
            }
            Self::SupDerivative { order } => {
                if *order == 0 {
                    return Ok(t.max_abs());
                }
                let grid = t.grid().ok_or_else(|| {
                    Error::IncompatibleGrid("derivative seminorm needs a grid".into())
                })?;
                let d = derivative(t.values(), grid, *order)?;
                Ok(d.iter().fold(T::zero(), |m, v| m.max(v.abs())))
            }
            Self::SchwartzWeighted {
                alpha,
                beta,
                radius,
            } => {
                let grid = t.grid().ok_or_else(|| {
                    Error::IncompatibleGrid("Schwartz seminorm needs a grid".into())
                })?;
                let d = derivative(t.values(), grid, *beta)?;
                Ok(grid
                    .nodes()
                    .iter()
                    .zip(&d)
                    .filter(|(x, _)| x.abs() <= *radius)
                    .fold(T::zero(), |m, (x, dv)| {
                        m.max((x.powi(*alpha as i32) * *dv).abs())
                    }))
            }
            Self::DualPairing { test } => {
                if test.len() != t.len() {
                    return Err(Error::ShapeMismatch(format!(
                        "dual test vector of length {} against element of length {}",
                        test.len(),
                        t.len()
                    )));
                }
                let prod: Vec<T> = test.iter().zip(t.values()).map(|(&a, &b)| a * b).collect();
                Ok(t.integrate(&prod).abs())
            }
        }
    }

    /// `ρ(a − b)`.
    pub fn distance(&self, a: &TargetElement<T>, b: &TargetElement<T>) -> Result<T> {
        self.eval(&a.sub(b)?)
    }
}

fn lq_norm<T: Scalar>(t: &TargetElement<T>, q: T) -> T {
    // factor out the largest entry so |t|^q cannot overflow
    let scale = t.max_abs();
    if scale == T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let powered: Vec<T> = t
        .values()
        .iter()
        .map(|&v| {
            let r = (v / scale).abs();
            if q == T::one() {
                r
            } else if q == two {
                r * r
            } else {
                r.powf(q)
            }
        })
        .collect();
    let sum = t.integrate(&powered);
    let root = if q == T::one() {
        sum
    } else if q == two {
        sum.sqrt()
    } else {
        sum.powf(q.recip())
    };
    scale * root
}

/// Ordered, nonempty collection of seminorms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormFamily<T: Scalar> {
    name: String,
    members: Vec<Seminorm<T>>,
}

impl<T: Scalar> SeminormFamily<T> {
    pub fn new(name: impl Into<String>, members: Vec<Seminorm<T>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Empty("seminorm family"));
        }
        Ok(Self {
            name: name.into(),
            members,
        })
    }

    pub fn single(rho: Seminorm<T>) -> Self {
        Self {
            name: rho.label(),
            members: vec![rho],
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[Seminorm<T>] {
        &self.members
    }

    pub fn get(&self, index: usize) -> Result<&Seminorm<T>> {
        self.members.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.members.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-seminorm maximum of `ρ(d)` over `diffs`; zeros for an empty list.
pub fn family_sup_error<T: Scalar>(
    family: &SeminormFamily<T>,
    diffs: &[TargetElement<T>],
) -> Result<Vec<T>> {
    if let Some(first) = diffs.first() {
        for d in &diffs[1..] {
            first.check_compatible(d)?;
        }
    }
    family
        .members()
        .iter()
        .map(|rho| {
            diffs
                .iter()
                .try_fold(T::zero(), |m, d| Ok(m.max(rho.eval(d)?)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(n: usize) -> GridMeta<f64> {
        GridMeta::unit(n).unwrap()
    }

    #[test]
    fn l2_of_constant_one_is_one() {
        let t = TargetElement::from_fn(unit(101), |_| 1.0).unwrap();
        assert_eq!(Seminorm::l2().eval(&t).unwrap(), 1.0);
    }

    #[test]
    fn l2_of_identity_matches_analytic_integral() {
        let t = TargetElement::from_fn(unit(101), |x| x).unwrap();
        let v = Seminorm::l2().eval(&t).unwrap();
        assert!((v - (1.0_f64 / 3.0).sqrt()).abs() <= 1e-3);
    }

    #[test]
    fn sup_of_identity_is_one() {
        let t = TargetElement::from_fn(unit(101), |x| x).unwrap();
        assert_eq!(Seminorm::sup_derivative(0).eval(&t).unwrap(), 1.0);
    }

    #[test]
    fn dual_pairing_of_zero_is_zero() {
        let z = TargetShape::on_grid(unit(11)).zeros();
        let rho = Seminorm::dual(vec![1.0; 11]).unwrap();
        assert_eq!(rho.eval(&z).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_parameters_and_shapes() {
        assert!(Seminorm::<f64>::lq(0.5).is_err());
        assert!(Seminorm::<f64>::schwartz(1, 1, Some(-1.0)).is_err());
        let coeffs = TargetElement::coefficients(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            Seminorm::sup_derivative(1).eval(&coeffs),
            Err(Error::IncompatibleGrid(_))
        ));
        let short = TargetElement::from_fn(unit(3), |x| x).unwrap();
        assert!(matches!(
            Seminorm::sup_derivative(3).eval(&short),
            Err(Error::DerivativeOrderTooHigh { .. })
        ));
        let q_bad = Seminorm::LqQuadrature { q: 0.5 };
        assert!(q_bad.eval(&short).is_err());
        assert!(TargetElement::coefficients(vec![f64::NAN]).is_err());
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let a = TargetElement::from_fn(unit(11), |x| x).unwrap();
        let b = TargetElement::from_fn(unit(12), |x| x).unwrap();
        assert!(a.sub(&b).is_err());
        assert!(family_sup_error(&SeminormFamily::single(Seminorm::l2()), &[a, b]).is_err());
    }

    #[test]
    fn family_sup_error_examples() {
        let fam = SeminormFamily::new(
            "l1+sup",
            vec![Seminorm::lq(1.0).unwrap(), Seminorm::sup_derivative(0)],
        )
        .unwrap();
        assert_eq!(family_sup_error(&fam, &[]).unwrap(), vec![0.0, 0.0]);
        let zero = TargetShape::on_grid(unit(11)).zeros();
        assert_eq!(family_sup_error(&fam, &[zero]).unwrap(), vec![0.0, 0.0]);
        let one = TargetElement::from_fn(unit(11), |_| 1.0).unwrap();
        let two = TargetElement::from_fn(unit(11), |_| 2.0).unwrap();
        let e = family_sup_error(&fam, &[one, two]).unwrap();
        assert!((e[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn lq_converges_at_second_order_on_cubics() {
        // ∫_0^1 (1 + x - 2x² + x³)² dx computed symbolically: 247/210
        let p = |x: f64| 1.0 + x - 2.0 * x * x + x * x * x;
        let exact = (247.0_f64 / 210.0).sqrt();
        let err = |n| {
            let t = TargetElement::from_fn(unit(n), p).unwrap();
            (Seminorm::l2().eval(&t).unwrap() - exact).abs()
        };
        let (coarse, fine) = (err(51), err(101));
        let ratio = coarse / fine;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn sup_derivative_of_monomials() {
        let g = unit(201);
        for order in 1..=3usize {
            let fact: f64 = (1..=order).map(|k| k as f64).product();
            let top = TargetElement::from_fn(g, |x| x.powi(order as i32)).unwrap();
            let v = Seminorm::sup_derivative(order).eval(&top).unwrap();
            assert!((v - fact).abs() < 1e-6, "order {order}: {v}");
            for k in 0..order {
                let low = TargetElement::from_fn(g, |x| x.powi(k as i32)).unwrap();
                let v = Seminorm::sup_derivative(order).eval(&low).unwrap();
                assert!(v < 1e-6, "order {order} of x^{k}: {v}");
            }
        }
    }

    #[test]
    fn schwartz_truncates_to_radius() {
        let g = GridMeta::new(-10.0_f64, 10.0, 2001).unwrap();
        let gauss = TargetElement::from_fn(g, |x| (-x * x).exp()).unwrap();
        // sup |x e^{-x²}| = e^{-1/2}/√2 at x = 1/√2
        let v = Seminorm::schwartz(1, 0, None)
            .unwrap()
            .eval(&gauss)
            .unwrap();
        assert!((v - (-0.5_f64).exp() / 2.0_f64.sqrt()).abs() < 1e-4);
        // x² grows outside the radius; only |x| ≤ 1 counts here
        let sq = TargetElement::from_fn(g, |x| x * x).unwrap();
        let r1 = Seminorm::schwartz(0, 0, Some(1.0))
            .unwrap()
            .eval(&sq)
            .unwrap();
        assert!((r1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_vectors_use_counting_measure() {
        let t = TargetElement::coefficients(vec![3.0_f64, 4.0]).unwrap();
        assert!((Seminorm::l2().eval(&t).unwrap() - 5.0).abs() < 1e-15);
        let d = Seminorm::dual(vec![1.0, -1.0]).unwrap();
        assert!((d.eval(&t).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let g = GridMeta::<f32>::unit(101).unwrap();
        let t = TargetElement::from_fn(g, |_| 1.0f32).unwrap();
        assert!((Seminorm::<f32>::l2().eval(&t).unwrap() - 1.0).abs() < 1e-6);
    }

    fn seminorms() -> Vec<Seminorm<f64>> {
        let g = GridMeta::<f64>::new(-2.0, 2.0, 41).unwrap();
        vec![
            Seminorm::lq(1.0).unwrap(),
            Seminorm::l2(),
            Seminorm::lq(3.5).unwrap(),
            Seminorm::sup_derivative(0),
            Seminorm::sup_derivative(1),
            Seminorm::sup_derivative(2),
            Seminorm::schwartz(2, 1, Some(1.5)).unwrap(),
            Seminorm::dual(g.nodes().iter().map(|x| x.sin()).collect()).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn seminorm_axioms(
            t in prop::collection::vec(-5.0f64..5.0, 41),
            u in prop::collection::vec(-5.0f64..5.0, 41),
            lambda in -10.0f64..10.0,
        ) {
            let g = GridMeta::new(-2.0, 2.0, 41).unwrap();
            let t = TargetElement::on_grid(g, t).unwrap();
            let u = TargetElement::on_grid(g, u).unwrap();
            for rho in seminorms() {
                let rt = rho.eval(&t).unwrap();
                prop_assert!(rt >= 0.0);
                prop_assert_eq!(rho.eval(&TargetShape::on_grid(g).zeros()).unwrap(), 0.0);
                let rl = rho.eval(&t.scaled(lambda)).unwrap();
                prop_assert!((rl - lambda.abs() * rt).abs() <= 1e-9 * (1.0 + lambda.abs() * rt));
                let rs = rho.eval(&t.add(&u).unwrap()).unwrap();
                prop_assert!(rs <= rt + rho.eval(&u).unwrap() + 1e-9);
            }
        }
    }
}
