//! Shared tolerance configuration and residual bookkeeping.
//!
//! All algebraic property checks in this crate return residual norms rather
//! than booleans; pass/fail decisions happen against a [`Tolerances`] value
//! so thresholds live in one place.

use serde::{Deserialize, Serialize};

/// Absolute and relative thresholds used by the verification suites.
///
/// The identities checked here are exact, so double precision leaves a wide
/// margin: defaults are `abs = 1e-12` and `rel = 1e-10`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { abs: 1e-12, rel: 1e-10 }
    }
}

/// A residual norm together with the scale of the operands it came from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Residual {
    /// Max-norm of the difference.
    pub abs: f64,
    /// Max-norm of the larger operand; used to form the relative residual.
    pub scale: f64,
}

impl Residual {
    pub fn new(abs: f64, scale: f64) -> Self {
        Residual { abs, scale }
    }

    /// Residual relative to the operand scale (floored at 1 so identically
    /// zero operands do not divide by zero).
    pub fn rel(&self) -> f64 {
        self.abs / self.scale.max(1.0)
    }

    pub fn within(&self, tol: &Tolerances) -> bool {
        self.abs <= tol.abs || self.rel() <= tol.rel
    }

    /// Pointwise maximum of two residual records.
    pub fn max(self, other: Residual) -> Residual {
        Residual {
            abs: self.abs.max(other.abs),
            scale: self.scale.max(other.scale),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let t = Tolerances::default();
        assert_eq!(t.abs, 1e-12);
        assert_eq!(t.rel, 1e-10);
    }

    #[test]
    fn relative_residual_floors_scale() {
        let r = Residual::new(1e-13, 0.0);
        assert!(r.rel() <= 1e-13);
        assert!(r.within(&Tolerances::default()));
    }

    #[test]
    fn large_scale_relaxes_relative() {
        let r = Residual::new(1e-6, 1e6);
        assert!(r.rel() <= 1e-10 * 100.0);
        assert!(!Residual::new(1e-2, 1.0).within(&Tolerances::default()));
    }
}
