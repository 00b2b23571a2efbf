//! Uniqueness of factor measures for a fixed disintegration on finite sets.

use num_traits::{Signed, Zero};

use super::Weight;
use crate::error::{structural, Error, Result};

/// A map `p: X → Y`, fiber measures `η_y` on `p⁻¹(y)` (stored pointwise,
/// `eta[x] = η_{p(x)}(x)`) and two candidate factor measures on `Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisintegrationInstance {
    pub y_size: usize,
    pub p: Vec<usize>,
    pub eta: Vec<Weight>,
    pub mu: Vec<Weight>,
    pub mu_prime: Vec<Weight>,
}

impl DisintegrationInstance {
    fn validate(&self) -> Result<()> {
        if self.eta.len() != self.p.len() {
            return Err(structural("one fiber weight per point of X is required"));
        }
        if self.mu.len() != self.y_size || self.mu_prime.len() != self.y_size {
            return Err(structural("factor measures must have one weight per point of Y"));
        }
        if self.p.iter().any(|&y| y >= self.y_size) {
            return Err(structural("p maps outside Y"));
        }
        if self.eta.iter().chain(&self.mu).chain(&self.mu_prime).any(Signed::is_negative) {
            return Err(Error::Precondition("weights must be nonnegative".into()));
        }
        let mut positive = vec![false; self.y_size];
        for (x, &y) in self.p.iter().enumerate() {
            positive[y] |= !self.eta[x].is_zero();
        }
        if let Some(y) = positive.iter().position(|&b| !b) {
            return Err(Error::Precondition(format!("the fiber measure over {y} is zero")));
        }
        Ok(())
    }

    /// `λ = Σ_y μ(y) η_y`, pointwise on `X`.
    pub fn integrate(&self, mu: &[Weight]) -> Vec<Weight> {
        self.p.iter().zip(&self.eta).map(|(&y, e)| e * &mu[y]).collect()
    }
}

/// Whether `(λ = λ′) ⟺ (μ = μ′)` held on this instance. Always true for
/// valid inputs; a false return means the arithmetic is broken.
pub fn disintegration_uniqueness_check(inst: &DisintegrationInstance) -> Result<bool> {
    inst.validate()?;
    let same_lambda = inst.integrate(&inst.mu) == inst.integrate(&inst.mu_prime);
    Ok(same_lambda == (inst.mu == inst.mu_prime))
}
