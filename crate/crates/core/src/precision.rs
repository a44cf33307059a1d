use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::is_positive;

/// Working-precision knobs shared by every numerical routine.
///
/// `abs_tol` drives boundary classification (cone membership, pole
/// collision detection, fixed-point tests); `rel_tol` drives convergence
/// acceptance of iterative schemes. `working_digits` is the number of
/// decimal digits carried through serialization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    pub working_digits: u32,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            working_digits: 17,
            abs_tol: 1e-12,
            rel_tol: 1e-12,
        }
    }
}

impl PrecisionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.working_digits < 15 {
            return Err(Error::precondition(format!(
                "working_digits must be at least 15, got {}",
                self.working_digits
            )));
        }
        if !is_positive(self.abs_tol) || !is_positive(self.rel_tol) {
            return Err(Error::precondition(
                "abs_tol and rel_tol must be strictly positive",
            ));
        }
        Ok(())
    }
}
