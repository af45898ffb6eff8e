//! Analytic convergence tests for the closed-form function families.

use crate::measure::{FunctionSpec, MeasureSpace};
use crate::young::YoungFunction;
use crate::Result;

fn infinite_support(space: &MeasureSpace) -> bool {
    !matches!(space, MeasureSpace::CountingFinite(_))
}

/// Whether `∫ Φ(|f|/λ) dμ = ∞` follows from the asymptotics of `Φ` and `f`.
/// `false` means no divergence was detected, not that the integral is finite.
pub fn modular_diverges(
    phi: &YoungFunction,
    f: &FunctionSpec,
    lambda: f64,
    space: &MeasureSpace,
) -> Result<bool> {
    if let Some(cap) = phi.domain_cap {
        if f.distribution(space, lambda * cap)? > 0.0 {
            return Ok(true);
        }
    }
    Ok(diverges_at_every_scale(phi, f, space))
}

/// Divergence from the asymptotics alone, which holds for every `λ > 0`.
pub(crate) fn diverges_at_every_scale(phi: &YoungFunction, f: &FunctionSpec, space: &MeasureSpace) -> bool {
    match f {
        FunctionSpec::PowerLogDecay { p, r } if infinite_support(space) => {
            let sigma = phi.index_at_zero();
            if sigma == 0.0 {
                true
            } else if sigma.is_infinite() {
                false
            } else {
                let a = sigma / p;
                a < 1.0 || (a == 1.0 && sigma / r <= 1.0)
            }
        }
        FunctionSpec::RadialPower { gamma, .. } => {
            *gamma > 0.0 && gamma * phi.growth_index_at_infinity() >= 1.0
        }
        _ => false,
    }
}

/// Whether `‖f‖_{p,q} = ∞` for finite `q`, by the same asymptotic analysis.
pub fn lorentz_diverges(p: f64, q: f64, f: &FunctionSpec, space: &MeasureSpace) -> Result<bool> {
    Ok(match f {
        FunctionSpec::PowerLogDecay { p: pf, r } if infinite_support(space) => {
            *pf > p || (*pf == p && q / r <= 1.0)
        }
        FunctionSpec::RadialPower { gamma, .. } => *gamma > 0.0 && gamma * p >= 1.0,
        _ => false,
    })
}

/// Whether `sup_t t·μ_f(t)^{1/p} = ∞` for the closed-form families.
pub fn weak_lorentz_infinite(p: f64, f: &FunctionSpec, space: &MeasureSpace) -> Result<bool> {
    Ok(match f {
        FunctionSpec::PowerLogDecay { p: pf, .. } if infinite_support(space) => *pf > p,
        FunctionSpec::RadialPower { gamma, .. } => gamma * p > 1.0,
        _ => false,
    })
}
