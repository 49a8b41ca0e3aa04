use serde::Serialize;

/// Outcome of evaluating one inequality `lhs <= rhs` on one input.
///
/// `scale` is the homogeneity normalizer of the input (for example the
/// Sobolev norm of `u`, raised to the degree of the inequality), so that
/// `pass` compares margins as if the input had unit norm:
/// `pass = lhs <= rhs + tolerance * scale`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub constant: f64,
    pub margin: f64,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// JSON document reproducing the input, filled in for failures.
    pub witness: Option<String>,
}

impl InequalityReport {
    pub fn evaluate(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        constant: f64,
        scale: f64,
        tolerance: f64,
    ) -> Self {
        let scale = if scale.is_finite() && scale > 0.0 {
            scale
        } else {
            1.0
        };
        InequalityReport {
            name: name.into(),
            trial: 0,
            lhs,
            rhs,
            constant,
            margin: rhs - lhs,
            scale,
            tolerance,
            pass: lhs <= rhs + tolerance * scale,
            witness: None,
        }
    }

    /// Margin measured in units of the input's normalizer.
    pub fn normalized_margin(&self) -> f64 {
        self.margin / self.scale
    }

    /// Re-evaluates `pass` under a different tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.lhs <= self.rhs + tolerance * self.scale;
        self
    }

    pub fn with_trial(mut self, trial: u64) -> Self {
        self.trial = trial;
        self
    }
}
