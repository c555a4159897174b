use crate::error::{Error, Result};
use crate::linalg::{CMatrix, QOperator, HERMITIAN_TOL};

/// Matrix elements smaller than this fraction of the largest are ignored.
const NEGLIGIBLE_ELEMENT: f64 = 1e-14;

/// Default gap merging tolerance, `max(1e-9 ‖H‖, 1e-12)`.
pub fn default_gap_tol(h: &QOperator) -> f64 {
    (1e-9 * h.hermitian_norm()).max(1e-12)
}

/// Components `S_j` of a coupling operator, each lowering the system energy
/// by a distinct Bohr frequency `ω_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapDecomposition {
    pub entries: Vec<(f64, QOperator)>,
}

impl GapDecomposition {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.entries.iter().map(|(w, _)| *w).collect()
    }

    /// `Σ_j S_j`
    pub fn reconstruct(&self, dim: usize) -> QOperator {
        self.entries
            .iter()
            .fold(QOperator::zeros(dim), |acc, (_, s)| &acc + s)
    }
}

/// Splits `s` into `Σ_j S_j` with `S_j = Σ |a⟩⟨a|S|b⟩⟨b|` over eigenpairs of
/// `h` with `E_b - E_a = ω_j`. Frequencies closer than `gap_tol` (chained)
/// are merged; entries come out sorted by `ω`.
pub fn gap_decompose(h: &QOperator, s: &QOperator, gap_tol: f64) -> Result<GapDecomposition> {
    if h.dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: s.dim(),
        });
    }
    let herr = h.hermiticity_error();
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    let d = h.dim();
    let (energies, v) = h.hermitian_eigen();
    let s_eig = v.adjoint() * s.matrix() * &v;
    let floor = NEGLIGIBLE_ELEMENT * s_eig.iter().fold(0.0_f64, |m, z| m.max(z.norm()));

    let mut transitions: Vec<(f64, usize, usize)> = Vec::new();
    for a in 0..d {
        for b in 0..d {
            if s_eig[(a, b)].norm() > floor {
                transitions.push((energies[b] - energies[a], a, b));
            }
        }
    }
    transitions.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut clusters: Vec<Vec<(f64, usize, usize)>> = Vec::new();
    for t in transitions {
        match clusters.last_mut() {
            Some(c) if t.0 - c.last().unwrap().0 <= gap_tol => c.push(t),
            _ => clusters.push(vec![t]),
        }
    }

    let entries = clusters
        .into_iter()
        .map(|cluster| {
            let omega = cluster.iter().map(|t| t.0).sum::<f64>() / cluster.len() as f64;
            let mut block = CMatrix::zeros(d, d);
            for &(_, a, b) in &cluster {
                block[(a, b)] = s_eig[(a, b)];
            }
            (omega, QOperator::from_square(&v * block * v.adjoint()))
        })
        .collect();
    Ok(GapDecomposition { entries })
}
