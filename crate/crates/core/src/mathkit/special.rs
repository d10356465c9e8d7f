use crate::{Error, Result};

/// Euler Beta function `B(α, β) = Γ(α)Γ(β)/Γ(α+β)`.
pub fn beta_function(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("alpha", alpha, "alpha > 0"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::domain("beta", beta, "beta > 0"));
    }
    Ok(statrs::function::beta::beta(alpha, beta))
}
