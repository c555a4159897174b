//! Standard single-site operators.
//!
//! Two-level systems use the basis `|0⟩, |1⟩` with `|1⟩` the excited (or
//! occupied) state, so `σ⁻ = |0⟩⟨1|` lowers the energy. The Pauli matrices
//! are the textbook ones; in this basis the excitation energy operator is
//! `σ⁺σ⁻ - σ⁻σ⁺ = -σ_z`, see [`qubit_hamiltonian`].

use super::{CMatrix, CVector, QOperator, C64, ONE, ZERO};

pub fn basis_ket(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn pauli_x() -> QOperator {
    QOperator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn pauli_y() -> QOperator {
    QOperator::from_square(CMatrix::from_row_slice(
        2,
        2,
        &[ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO],
    ))
}

pub fn pauli_z() -> QOperator {
    QOperator::from_real_diagonal(&[1.0, -1.0])
}

/// `|0⟩⟨1|`
pub fn sigma_minus() -> QOperator {
    QOperator::from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]).unwrap()
}

/// `|1⟩⟨0|`
pub fn sigma_plus() -> QOperator {
    QOperator::from_real_rows(2, &[0.0, 0.0, 1.0, 0.0]).unwrap()
}

/// `(ε/2)(|1⟩⟨1| - |0⟩⟨0|)`: a qubit with splitting `eps` and `|1⟩` excited.
pub fn qubit_hamiltonian(eps: f64) -> QOperator {
    QOperator::from_real_diagonal(&[-0.5 * eps, 0.5 * eps])
}

/// Bosonic annihilation operator truncated to `levels` Fock states.
pub fn annihilation(levels: usize) -> QOperator {
    let mut m = CMatrix::zeros(levels, levels);
    for n in 1..levels {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    QOperator::from_square(m)
}

/// `diag(0, 1, …, levels - 1)`
pub fn number(levels: usize) -> QOperator {
    let diag: Vec<f64> = (0..levels).map(|n| n as f64).collect();
    QOperator::from_real_diagonal(&diag)
}

/// Fermionic annihilator of a single level, `|empty⟩⟨occupied|`.
pub fn fermion_annihilation() -> QOperator {
    sigma_minus()
}
