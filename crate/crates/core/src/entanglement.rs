//! Two-qubit concurrence.

use crate::error::{Error, Result};
use crate::linalg::ops::pauli_y;
use crate::linalg::{tensor, DensityMatrix};
use crate::statmech::ENTROPY_CUTOFF;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Square roots of the spectrum of `ρ ρ̃`, largest first.
    pub lambdas: [f64; 4],
    pub entangled: bool,
}

/// Wootters concurrence of a two-qubit state, with the spin flip taken in
/// the product computational basis.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let yy = tensor(&pauli_y(), &pauli_y());
    // rounding-level eigenvalues would otherwise leak in at the square-root scale
    let sqrt_rho = rho
        .op()
        .hermitian_function(|p| if p > ENTROPY_CUTOFF { p.sqrt() } else { 0.0 });
    let sqrt_flipped = &(&yy * &sqrt_rho.conj()) * &yy;
    // the λ's are the singular values of √ρ √ρ̃, which keeps small ones accurate
    let mut sv: Vec<f64> = (&sqrt_rho * &sqrt_flipped)
        .matrix()
        .singular_values()
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let mut lambdas = [0.0; 4];
    lambdas.copy_from_slice(&sv);
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult {
        value,
        lambdas,
        entangled: value > 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CVector, C64};
    use approx::assert_abs_diff_eq;

    fn ket(amps: [f64; 4]) -> DensityMatrix {
        DensityMatrix::pure(&CVector::from_iterator(4, amps.iter().map(|&a| C64::new(a, 0.0)))).unwrap()
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let r = 0.5_f64.sqrt();
        let c = concurrence(&ket([0.0, r, r, 0.0])).unwrap();
        assert_abs_diff_eq!(c.value, 1.0, epsilon = 1e-12);
        assert!(c.entangled);
        let c = concurrence(&ket([r, 0.0, 0.0, -r])).unwrap();
        assert_abs_diff_eq!(c.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_and_mixed_states_are_separable() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let prod = DensityMatrix::new(tensor(a.op(), b.op())).unwrap();
        assert_eq!(concurrence(&prod).unwrap().value, 0.0);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed(4)).unwrap().value, 0.0);
    }

    #[test]
    fn partially_entangled_pure_state() {
        let (a, b) = (0.6_f64, 0.8_f64);
        let c = concurrence(&ket([0.0, a, b, 0.0])).unwrap();
        assert_abs_diff_eq!(c.value, 2.0 * a * b, epsilon = 1e-12);
    }

    #[test]
    fn wrong_dimension() {
        assert!(concurrence(&DensityMatrix::maximally_mixed(2)).is_err());
    }
}
