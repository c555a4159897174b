//! Worked examples with closed-form solutions, plus the system and bath
//! definitions needed to feed them through the numeric pipeline.

mod dot;
mod entangler;
mod two_mode;

pub use dot::{
    dot_engine_steady, dot_lead, dot_operators, dot_relaxation, reversible_level, DotEngineParams, DotEngineSteady,
    DotRelaxation,
};
pub use entangler::{
    entangler_concurrence_analytic, entangler_kappa, entangler_steady, lowering_ops as entangler_lowering_ops,
    EntanglerParams,
};
pub use two_mode::{
    two_mode_engine_currents, two_mode_engine_populations, two_mode_engine_steady, TwoModeEngineParams,
    TwoModeEngineSteady, CONVERGENCE_TOL, DEFAULT_FOCK_CUTOFF,
};

use crate::error::Result;
use crate::linalg::ops::{qubit_hamiltonian, sigma_minus};
use crate::meq::{build_secular, BathSpec, BuildOptions, Coupling, GeneratorBundle};
use crate::statmech::ThermalContext;

/// Qubit with splitting `eps_s` exchanging quanta with a bosonic bath at
/// temperature `t` (`μ = 0`). Returns the bundle and the bath.
pub fn qubit_boson_generator(eps_s: f64, kappa: f64, t: f64) -> Result<(GeneratorBundle, BathSpec)> {
    let bath = BathSpec::bosonic(
        "B",
        ThermalContext::from_temperature(t, 0.0)?,
        kappa,
        vec![Coupling::lowering(sigma_minus()).at_frequency(eps_s)],
    )?;
    let bundle = build_secular(&qubit_hamiltonian(eps_s), std::slice::from_ref(&bath), BuildOptions::default())?;
    Ok((bundle, bath))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::steady_state;
    use crate::meq::dissipator;
    use crate::statmech::bose_einstein;
    use crate::Superoperator;
    use approx::assert_abs_diff_eq;

    #[test]
    fn qubit_decays_at_zero_temperature() {
        let (bundle, _) = qubit_boson_generator(1.0, 0.3, 0.0).unwrap();
        let ss = steady_state(&bundle.total).unwrap();
        assert_abs_diff_eq!(ss.populations()[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn qubit_detailed_balance() {
        let (eps, t) = (1.3, 0.9);
        let (bundle, _) = qubit_boson_generator(eps, 0.3, t).unwrap();
        let p = steady_state(&bundle.total).unwrap().populations();
        assert_abs_diff_eq!(p[1] / p[0], (-eps / t).exp(), epsilon = 1e-12);
    }

    #[test]
    fn qubit_generator_has_dot_structure() {
        let (eps, kappa, t) = (0.8, 0.25, 0.6);
        let (bundle, bath) = qubit_boson_generator(eps, kappa, t).unwrap();
        let nb = bose_einstein(eps, &bath.ctx).unwrap();
        let mut oracle = Superoperator::hamiltonian(&qubit_hamiltonian(eps));
        oracle += &dissipator(&sigma_minus()).scale(kappa * (1.0 + nb));
        oracle += &dissipator(&sigma_minus().adjoint()).scale(kappa * nb);
        assert!((&bundle.total - &oracle).max_abs() < 1e-15);
    }
}
