use serde::Serialize;

use crate::mathkit::beta_function;
use crate::{Error, Result};

/// Shape of an importance prior `W(F)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PriorShape {
    /// `F^{α−1}(1 − F)^{β−1}/B(α, β)`.
    Beta { alpha: f64, beta: f64 },
    /// Uniform on `[F_t, 1]`.
    Step { threshold: f64 },
    /// Piecewise linear through `(knots[i], values[i])`, normalized.
    Tabulated { knots: Vec<f64>, values: Vec<f64> },
}

/// A normalized importance prior over fidelities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportancePrior {
    shape: PriorShape,
    norm: f64,
}

impl ImportancePrior {
    pub fn beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::domain("alpha", alpha, "alpha > 0"));
        }
        if !(beta > 0.0) {
            return Err(Error::domain("beta", beta, "beta > 0"));
        }
        Ok(ImportancePrior {
            shape: PriorShape::Beta { alpha, beta },
            norm: 1.0 / beta_function(alpha, beta)?,
        })
    }

    pub fn step(threshold: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&threshold) {
            return Err(Error::domain("threshold", threshold, "0 <= F_t < 1"));
        }
        Ok(ImportancePrior {
            shape: PriorShape::Step { threshold },
            norm: 1.0 / (1.0 - threshold),
        })
    }

    /// Knots must start at 0, end at 1 and increase; values must be non-negative
    /// with positive area. The table is rescaled to unit area.
    pub fn tabulated(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::Invalid(
                "a table needs at least two (knot, value) pairs".into(),
            ));
        }
        if knots[0] != 0.0
            || knots[knots.len() - 1] != 1.0
            || knots.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Invalid("knots must increase from 0 to 1".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain("W", *v, "finite W >= 0"));
        }
        let area: f64 = knots
            .windows(2)
            .zip(values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum();
        if !(area > 0.0) {
            return Err(Error::Invalid("tabulated prior has zero area".into()));
        }
        Ok(ImportancePrior {
            shape: PriorShape::Tabulated { knots, values },
            norm: 1.0 / area,
        })
    }

    pub fn shape(&self) -> &PriorShape {
        &self.shape
    }

    /// Compact identifier such as `beta(2,1)` or `step(0.7)`.
    pub fn label(&self) -> String {
        match &self.shape {
            PriorShape::Beta { alpha, beta } => format!("beta({alpha},{beta})"),
            PriorShape::Step { threshold } => format!("step({threshold})"),
            PriorShape::Tabulated { knots, .. } => format!("tabulated({})", knots.len()),
        }
    }

    /// `W(F)`; `+∞` where a Beta prior diverges at an end point.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain("F", x, "0 <= F <= 1"));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> f64 {
        match &self.shape {
            PriorShape::Beta { alpha, beta } => {
                let a = if *alpha == 1.0 {
                    1.0
                } else {
                    x.powf(alpha - 1.0)
                };
                let b = if *beta == 1.0 {
                    1.0
                } else {
                    (1.0 - x).powf(beta - 1.0)
                };
                self.norm * a * b
            }
            PriorShape::Step { threshold } => {
                if x >= *threshold {
                    self.norm
                } else {
                    0.0
                }
            }
            PriorShape::Tabulated { knots, values } => {
                let i = knots.partition_point(|k| *k <= x).clamp(1, knots.len() - 1);
                let (x0, x1) = (knots[i - 1], knots[i]);
                let s = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
                self.norm * (values[i - 1] + s * (values[i] - values[i - 1]))
            }
        }
    }

    /// Points where `W` is not smooth.
    pub fn knots(&self) -> Vec<f64> {
        match &self.shape {
            PriorShape::Beta { .. } => Vec::new(),
            PriorShape::Step { threshold } => vec![*threshold],
            PriorShape::Tabulated { knots, .. } => knots.clone(),
        }
    }

    /// `∫ W(F)·2F dF`, the value reached by the optimal classical protocol.
    pub fn baseline(&self) -> f64 {
        match &self.shape {
            PriorShape::Beta { alpha, beta } => 2.0 * alpha / (alpha + beta),
            PriorShape::Step { threshold } => 1.0 + threshold,
            PriorShape::Tabulated { knots, .. } => knots
                .windows(2)
                .map(|x| {
                    // W·2F is quadratic on each segment, so Simpson is exact.
                    let f = |t: f64| self.eval_unchecked(t) * 2.0 * t;
                    let mid = 0.5 * (x[0] + x[1]);
                    (x[1] - x[0]) / 6.0 * (f(x[0]) + 4.0 * f(mid) + f(x[1]))
                })
                .sum(),
        }
    }
}
