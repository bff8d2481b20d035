use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Step size for the projected-gradient drivers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepSizeRule {
    Fixed(f64),
    /// Half the reciprocal of the gradient's Lipschitz constant.
    InverseLipschitz,
}

/// Tolerances and iteration caps shared by every iterative routine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub step_size_rule: StepSizeRule,
    /// Monotone Nesterov momentum in the deconvolution driver.
    pub momentum: bool,
    /// Outer iterations of the deconvolution driver.
    pub max_iter: usize,
    pub objective_tol: f64,
    pub feasibility_tol: f64,
    /// Dykstra cycle cap per projection.
    pub max_cycles: usize,
    /// Random starts for multi-start heuristics.
    pub restarts: usize,
    /// Ascent iterations for generation and hypothesis testing.
    pub ascent_iter: usize,
    /// Ascent step as a fraction of `1 / ‖M‖_F`.
    pub ascent_step: f64,
    pub admm_max_iter: usize,
    pub admm_tol: f64,
    pub admm_rho0: f64,
    /// Whether random functionals draw the diagonal too.
    pub gaussian_diagonal: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            step_size_rule: StepSizeRule::InverseLipschitz,
            momentum: true,
            max_iter: 5000,
            objective_tol: 1e-9,
            feasibility_tol: 1e-7,
            max_cycles: 2000,
            restarts: 50,
            ascent_iter: 2000,
            ascent_step: 0.1,
            admm_max_iter: 20000,
            admm_tol: 1e-8,
            admm_rho0: 1.0,
            gaussian_diagonal: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("objective_tol", self.objective_tol),
            ("feasibility_tol", self.feasibility_tol),
            ("ascent_step", self.ascent_step),
            ("admm_tol", self.admm_tol),
            ("admm_rho0", self.admm_rho0),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if let StepSizeRule::Fixed(eta) = self.step_size_rule {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::invalid(format!(
                    "fixed step must be positive, got {eta}"
                )));
            }
        }
        if self.max_iter == 0 || self.max_cycles == 0 || self.admm_max_iter == 0 {
            return Err(Error::invalid("iteration caps must be at least 1"));
        }
        Ok(())
    }

    /// Step for a gradient with Lipschitz constant `lipschitz`.
    pub fn step(&self, lipschitz: f64) -> f64 {
        match self.step_size_rule {
            StepSizeRule::Fixed(eta) => eta,
            StepSizeRule::InverseLipschitz => 0.5 / lipschitz,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = SolverConfig::default();
        c.validate().unwrap();
        assert_eq!(c.step(2.0), 0.25);
    }

    #[test]
    fn rejects_nonpositive_tolerances() {
        let c = SolverConfig {
            feasibility_tol: 0.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let c: SolverConfig = serde_json::from_str(r#"{"max_iter": 7}"#).unwrap();
        assert_eq!(c.max_iter, 7);
        assert_eq!(c.max_cycles, 2000);
    }
}
