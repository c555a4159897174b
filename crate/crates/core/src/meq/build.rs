use std::collections::HashSet;
use std::fmt;

use nalgebra::DMatrix;

use super::bath::{lamb_shift, rate_pair, BathSpec};
use super::gaps::{default_gap_tol, gap_decompose, GapDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{QOperator, Superoperator, HERMITIAN_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Secular,
    Local,
    Perlind,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Secular, Scheme::Local, Scheme::Perlind];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Secular => "secular",
            Scheme::Local => "local",
            Scheme::Perlind => "perlind",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Options shared by the three builders.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BuildOptions {
    /// Gap merging tolerance; `None` uses [`default_gap_tol`].
    pub gap_tol: Option<f64>,
    pub lamb_shift: bool,
}

/// A GKLS generator split into its unitary part and one dissipator per bath.
#[derive(Debug, Clone)]
pub struct GeneratorBundle {
    /// `-i[H + H_shift, ·]`
    pub hamiltonian_part: Superoperator,
    /// Dissipative part of each bath, in the order the baths were given.
    pub per_bath: Vec<(String, Superoperator)>,
    pub total: Superoperator,
    pub scheme: Scheme,
    pub lamb_shift_included: bool,
    /// The effective system Hamiltonian including any level shift.
    pub hamiltonian: QOperator,
}

impl GeneratorBundle {
    pub(crate) fn assemble(
        h_eff: QOperator,
        per_bath: Vec<(String, Superoperator)>,
        scheme: Scheme,
        lamb_shift_included: bool,
    ) -> Self {
        let hamiltonian_part = Superoperator::hamiltonian(&h_eff);
        let mut total = hamiltonian_part.clone();
        for (_, l) in &per_bath {
            total += l;
        }
        GeneratorBundle {
            hamiltonian_part,
            per_bath,
            total,
            scheme,
            lamb_shift_included,
            hamiltonian: h_eff,
        }
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }

    pub fn bath(&self, name: &str) -> Option<&Superoperator> {
        self.per_bath.iter().find(|(n, _)| n == name).map(|(_, l)| l)
    }

    pub fn bath_names(&self) -> impl Iterator<Item = &str> {
        self.per_bath.iter().map(|(n, _)| n.as_str())
    }
}

/// `ρ ↦ AρA† - ½{A†A, ρ}`
pub fn dissipator(a: &QOperator) -> Superoperator {
    Superoperator::dissipator(a)
}

fn validate(h: &QOperator, baths: &[BathSpec]) -> Result<()> {
    let herr = h.hermiticity_error();
    if herr > HERMITIAN_TOL {
        return Err(Error::NotHermitian(herr));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut seen = HashSet::new();
    for bath in baths {
        if !seen.insert(bath.name.as_str()) {
            return Err(Error::InvalidParameter(format!("duplicate bath name `{}`", bath.name)));
        }
        for c in &bath.couplings {
            if c.op.dim() != h.dim() {
                return Err(Error::DimensionMismatch {
                    expected: h.dim(),
                    found: c.op.dim(),
                });
            }
        }
    }
    Ok(())
}

fn shift_band(bath: &BathSpec) -> Result<f64> {
    bath.band_half_width.ok_or_else(|| {
        Error::InvalidParameter(format!("bath `{}` needs a band half-width for level shifts", bath.name))
    })
}

fn decompose_all(h: &QOperator, bath: &BathSpec, gap_tol: f64) -> Result<Vec<GapDecomposition>> {
    bath.couplings
        .iter()
        .map(|c| gap_decompose(h, &c.lowering_op(), gap_tol))
        .collect()
}

/// Secular generator: each Bohr-frequency component of each coupling gets
/// its own pair of emission and absorption dissipators.
pub fn build_secular(h: &QOperator, baths: &[BathSpec], opts: BuildOptions) -> Result<GeneratorBundle> {
    validate(h, baths)?;
    let gap_tol = opts.gap_tol.unwrap_or_else(|| default_gap_tol(h));
    let d = h.dim();
    let mut h_eff = h.clone();
    let mut per_bath = Vec::with_capacity(baths.len());
    for bath in baths {
        let mut l = Superoperator::zeros(d);
        for dec in decompose_all(h, bath, gap_tol)? {
            for (omega, s) in &dec.entries {
                let (down, up) = rate_pair(bath, *omega)?;
                l += &dissipator(s).scale(down);
                l += &dissipator(&s.adjoint()).scale(up);
                if opts.lamb_shift {
                    let shift = lamb_shift(bath, *omega, shift_band(bath)?)?;
                    h_eff = &h_eff + &(&s.adjoint() * s).scale(shift);
                }
            }
        }
        per_bath.push((bath.name.clone(), l));
    }
    Ok(GeneratorBundle::assemble(h_eff, per_bath, Scheme::Secular, opts.lamb_shift))
}

/// Local generator: bare coupling operators with rates taken at each
/// coupling's reference frequency, alongside the full Hamiltonian.
pub fn build_local(h: &QOperator, baths: &[BathSpec], opts: BuildOptions) -> Result<GeneratorBundle> {
    validate(h, baths)?;
    let d = h.dim();
    let mut h_eff = h.clone();
    let mut per_bath = Vec::with_capacity(baths.len());
    for bath in baths {
        let mut l = Superoperator::zeros(d);
        for (index, c) in bath.couplings.iter().enumerate() {
            let omega = c.reference_frequency.ok_or_else(|| Error::MissingReferenceFrequency {
                bath: bath.name.clone(),
                index,
            })?;
            let s = c.lowering_op();
            let (down, up) = rate_pair(bath, omega)?;
            l += &dissipator(&s).scale(down);
            l += &dissipator(&s.adjoint()).scale(up);
            if opts.lamb_shift {
                let shift = lamb_shift(bath, omega, shift_band(bath)?)?;
                h_eff = &h_eff + &(&s.adjoint() * &s).scale(shift);
            }
        }
        per_bath.push((bath.name.clone(), l));
    }
    Ok(GeneratorBundle::assemble(h_eff, per_bath, Scheme::Local, opts.lamb_shift))
}

/// Rates entering the PERLind construction for one coupling operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PerlindRates {
    pub omegas: Vec<f64>,
    /// `√(γ↓(ω_j) γ↓(ω_j'))`
    pub down: DMatrix<f64>,
    /// `√(γ↑(ω_j) γ↑(ω_j'))`
    pub up: DMatrix<f64>,
}

/// Geometric-mean rate between two gaps.
pub fn perlind_cross_rate(gamma_j: f64, gamma_jp: f64) -> f64 {
    debug_assert!(gamma_j >= 0.0 && gamma_jp >= 0.0, "rates are non-negative");
    (gamma_j * gamma_jp).sqrt()
}

/// Rate matrices of coupling `index` of `bath` over the gaps of `h`.
pub fn perlind_rate_matrix(h: &QOperator, bath: &BathSpec, index: usize, gap_tol: Option<f64>) -> Result<PerlindRates> {
    let c = bath
        .couplings
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("bath `{}` has no coupling {index}", bath.name)))?;
    let gap_tol = gap_tol.unwrap_or_else(|| default_gap_tol(h));
    let dec = gap_decompose(h, &c.lowering_op(), gap_tol)?;
    let omegas = dec.omegas();
    let rates = omegas
        .iter()
        .map(|&w| rate_pair(bath, w))
        .collect::<Result<Vec<_>>>()?;
    let n = omegas.len();
    Ok(PerlindRates {
        down: DMatrix::from_fn(n, n, |j, k| perlind_cross_rate(rates[j].0, rates[k].0)),
        up: DMatrix::from_fn(n, n, |j, k| perlind_cross_rate(rates[j].1, rates[k].1)),
        omegas,
    })
}

/// PERLind generator: the geometric-mean rates factor, so each coupling
/// contributes `D[Σ_j √γ↓(ω_j) S_j] + D[Σ_j √γ↑(ω_j) S_j†]`.
pub fn build_perlind(h: &QOperator, baths: &[BathSpec], opts: BuildOptions) -> Result<GeneratorBundle> {
    validate(h, baths)?;
    let gap_tol = opts.gap_tol.unwrap_or_else(|| default_gap_tol(h));
    let d = h.dim();
    let mut h_eff = h.clone();
    let mut per_bath = Vec::with_capacity(baths.len());
    for bath in baths {
        let mut l = Superoperator::zeros(d);
        for dec in decompose_all(h, bath, gap_tol)? {
            let mut lower = QOperator::zeros(d);
            let mut raise = QOperator::zeros(d);
            let mut shifts = Vec::with_capacity(dec.len());
            for (omega, s) in &dec.entries {
                let (down, up) = rate_pair(bath, *omega)?;
                lower = &lower + &s.scale(down.sqrt());
                raise = &raise + &s.adjoint().scale(up.sqrt());
                if opts.lamb_shift {
                    shifts.push(lamb_shift(bath, *omega, shift_band(bath)?)?);
                }
            }
            l += &dissipator(&lower);
            l += &dissipator(&raise);
            if opts.lamb_shift {
                for (j, (_, sj)) in dec.entries.iter().enumerate() {
                    for (k, (_, sk)) in dec.entries.iter().enumerate() {
                        let mean = 0.5 * (shifts[j] + shifts[k]);
                        h_eff = &h_eff + &(&sk.adjoint() * sj).scale(mean);
                    }
                }
            }
        }
        per_bath.push((bath.name.clone(), l));
    }
    // the shift is Hermitian by symmetry of the arithmetic mean; clean rounding
    let h_eff = if opts.lamb_shift { h_eff.hermitized() } else { h_eff };
    Ok(GeneratorBundle::assemble(h_eff, per_bath, Scheme::Perlind, opts.lamb_shift))
}

/// Dispatch on `scheme`.
pub fn build(scheme: Scheme, h: &QOperator, baths: &[BathSpec], opts: BuildOptions) -> Result<GeneratorBundle> {
    match scheme {
        Scheme::Secular => build_secular(h, baths, opts),
        Scheme::Local => build_local(h, baths, opts),
        Scheme::Perlind => build_perlind(h, baths, opts),
    }
}
