//! Two bosonic modes exchanging quanta through a modulated coupling that
//! injects or extracts work.
//!
//! In the frame rotating with `Ω_C n_C + Ω_H n_H` the Hamiltonian becomes the
//! time-independent hopping `g(a_C† a_H + a_H† a_C)`, which conserves the total
//! excitation number. Jumps change that number by one, so the stationary
//! state is block diagonal in excitation sectors and the stationarity
//! condition is block tridiagonal. It is solved sector by sector, never
//! forming the full Liouvillian.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::ops::annihilation;
use crate::linalg::{embed, CMatrix, QOperator, C64};
use crate::meq::{build_local, BathSpec, BuildOptions, Coupling, GeneratorBundle};
use crate::statmech::{bose_einstein, ThermalContext};
use crate::thermo::{classify, Performance};

/// Relative change in either current tolerated when doubling the cutoff.
pub const CONVERGENCE_TOL: f64 = 1e-8;
pub const DEFAULT_FOCK_CUTOFF: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeEngineParams {
    pub omega_c: f64,
    pub omega_h: f64,
    pub g: f64,
    pub kappa_c: f64,
    pub kappa_h: f64,
    pub t_c: f64,
    pub t_h: f64,
    /// Fock levels kept per mode.
    pub fock_cutoff: usize,
}

impl TwoModeEngineParams {
    pub fn validate(&self) -> Result<()> {
        if self.fock_cutoff < 2 {
            return Err(Error::InvalidParameter(format!("fock cutoff {} < 2", self.fock_cutoff)));
        }
        if !(self.omega_c > 0.0 && self.omega_h > 0.0) {
            return Err(Error::InvalidParameter("mode frequencies must be positive".into()));
        }
        if !(self.kappa_c > 0.0 && self.kappa_h > 0.0) {
            return Err(Error::InvalidParameter("bath rates must be positive".into()));
        }
        if !(self.t_c >= 0.0 && self.t_h >= self.t_c) || !self.t_h.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= T_C <= T_H, got {} and {}",
                self.t_c, self.t_h
            )));
        }
        if !self.g.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(())
    }

    /// `(γ↓, γ↑)` for the cold and hot mode.
    fn rates(&self) -> Result<[(f64, f64); 2]> {
        let pair = |kappa: f64, omega: f64, t: f64| -> Result<(f64, f64)> {
            let n = bose_einstein(omega, &ThermalContext::from_temperature(t, 0.0)?)?;
            Ok((kappa * (1.0 + n), kappa * n))
        };
        Ok([
            pair(self.kappa_c, self.omega_c, self.t_c)?,
            pair(self.kappa_h, self.omega_h, self.t_h)?,
        ])
    }

    /// Dense rotating-frame generator on the full truncated space, built with
    /// the local scheme. Only practical for small cutoffs.
    pub fn dense_generator(&self) -> Result<(GeneratorBundle, Vec<BathSpec>)> {
        self.validate()?;
        let dims = [self.fock_cutoff, self.fock_cutoff];
        let a = annihilation(self.fock_cutoff);
        let ac = embed(&a, 0, &dims)?;
        let ah = embed(&a, 1, &dims)?;
        let h = (&(&ac.adjoint() * &ah) + &(&ah.adjoint() * &ac)).scale(self.g);
        let baths = vec![
            BathSpec::bosonic(
                "C",
                ThermalContext::from_temperature(self.t_c, 0.0)?,
                self.kappa_c,
                vec![Coupling::lowering(ac).at_frequency(self.omega_c)],
            )?,
            BathSpec::bosonic(
                "H",
                ThermalContext::from_temperature(self.t_h, 0.0)?,
                self.kappa_h,
                vec![Coupling::lowering(ah).at_frequency(self.omega_h)],
            )?,
        ];
        let bundle = build_local(&h, &baths, BuildOptions::default())?;
        Ok((bundle, baths))
    }

    /// Lab-frame energy `Ω_C n_C + Ω_H n_H` and the mode number operators.
    pub fn energy_operators(&self) -> Result<(QOperator, QOperator, QOperator)> {
        let dims = [self.fock_cutoff, self.fock_cutoff];
        let n = crate::linalg::ops::number(self.fock_cutoff);
        let nc = embed(&n, 0, &dims)?;
        let nh = embed(&n, 1, &dims)?;
        let h0 = &nc.scale(self.omega_c) + &nh.scale(self.omega_h);
        Ok((h0, nc, nh))
    }
}

/// Basis of one excitation sector: `(n_C, n_H)` pairs with fixed sum.
struct Sector {
    states: Vec<(usize, usize)>,
}

impl Sector {
    fn new(total: usize, levels: usize) -> Self {
        let lo = total.saturating_sub(levels - 1);
        let hi = total.min(levels - 1);
        Sector {
            states: (lo..=hi).map(|nc| (nc, total - nc)).collect(),
        }
    }

    fn len(&self) -> usize {
        self.states.len()
    }

    fn index(&self, state: (usize, usize)) -> Option<usize> {
        self.states.iter().position(|&s| s == state)
    }
}

/// Matrix of `a_mode` from `upper` (N+1) to `lower` (N).
fn lowering_block(lower: &Sector, upper: &Sector, mode: usize) -> CMatrix {
    let mut m = CMatrix::zeros(lower.len(), upper.len());
    for (j, &(nc, nh)) in upper.states.iter().enumerate() {
        let (n, target) = if mode == 0 {
            (nc, (nc.wrapping_sub(1), nh))
        } else {
            (nh, (nc, nh.wrapping_sub(1)))
        };
        if n == 0 {
            continue;
        }
        if let Some(i) = lower.index(target) {
            m[(i, j)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    m
}

fn hopping_block(sector: &Sector, g: f64) -> CMatrix {
    let mut m = CMatrix::zeros(sector.len(), sector.len());
    for (j, &(nc, nh)) in sector.states.iter().enumerate() {
        // a_C† a_H moves a quantum from H to C
        if nh > 0 {
            if let Some(i) = sector.index((nc + 1, nh - 1)) {
                m[(i, j)] += C64::new(g * (((nc + 1) * nh) as f64).sqrt(), 0.0);
            }
        }
        if nc > 0 {
            if let Some(i) = sector.index((nc - 1, nh + 1)) {
                m[(i, j)] += C64::new(g * ((nc * (nh + 1)) as f64).sqrt(), 0.0);
            }
        }
    }
    m
}

/// `vec(X ρ Y) = (Yᵀ ⊗ X) vec(ρ)`
fn sandwich(x: &CMatrix, y: &CMatrix) -> CMatrix {
    y.transpose().kronecker(x)
}

fn unvec(v: &CMatrix, dim: usize) -> CMatrix {
    CMatrix::from_column_slice(dim, dim, v.as_slice())
}

struct SectorModel {
    sectors: Vec<Sector>,
    hopping: Vec<CMatrix>,
    /// `lower[N][mode]`: `a_mode` from sector N+1 to N.
    lower: Vec<[CMatrix; 2]>,
    rates: [(f64, f64); 2],
}

impl SectorModel {
    fn new(p: &TwoModeEngineParams) -> Result<Self> {
        let levels = p.fock_cutoff;
        let top = 2 * (levels - 1);
        let sectors: Vec<Sector> = (0..=top).map(|n| Sector::new(n, levels)).collect();
        let hopping = sectors.iter().map(|s| hopping_block(s, p.g)).collect();
        let lower = (0..top)
            .map(|n| {
                [
                    lowering_block(&sectors[n], &sectors[n + 1], 0),
                    lowering_block(&sectors[n], &sectors[n + 1], 1),
                ]
            })
            .collect();
        Ok(SectorModel {
            sectors,
            hopping,
            lower,
            rates: p.rates()?,
        })
    }

    fn top(&self) -> usize {
        self.sectors.len() - 1
    }

    /// `a†a` and `a a†` of `mode` restricted to sector `n`.
    fn number_blocks(&self, n: usize, mode: usize) -> (CMatrix, CMatrix) {
        let m = self.sectors[n].len();
        let down = if n > 0 {
            let a = &self.lower[n - 1][mode];
            a.adjoint() * a
        } else {
            CMatrix::zeros(m, m)
        };
        let up = if n < self.top() {
            let a = &self.lower[n][mode];
            a * a.adjoint()
        } else {
            CMatrix::zeros(m, m)
        };
        (down, up)
    }

    /// Same-sector part of the generator.
    fn diagonal_block(&self, n: usize) -> CMatrix {
        let m = self.sectors[n].len();
        let id = CMatrix::identity(m, m);
        let h = &self.hopping[n];
        let mut k = CMatrix::zeros(m, m);
        for mode in 0..2 {
            let (down, up) = self.number_blocks(n, mode);
            let (gd, gu) = self.rates[mode];
            k += down * C64::new(0.5 * gd, 0.0) + up * C64::new(0.5 * gu, 0.0);
        }
        // -i(Hρ - ρH) - (Kρ + ρK)
        let i = C64::new(0.0, 1.0);
        (sandwich(h, &id) - sandwich(&id, h)) * -i - sandwich(&k, &id) - sandwich(&id, &k)
    }

    /// Emission into sector `n` from sector `n + 1`.
    fn from_above(&self, n: usize) -> CMatrix {
        let mut b = CMatrix::zeros(self.sectors[n].len().pow(2), self.sectors[n + 1].len().pow(2));
        for mode in 0..2 {
            let a = &self.lower[n][mode];
            b += sandwich(a, &a.adjoint()) * C64::new(self.rates[mode].0, 0.0);
        }
        b
    }

    /// Absorption into sector `n` from sector `n - 1`.
    fn from_below(&self, n: usize) -> CMatrix {
        let mut c = CMatrix::zeros(self.sectors[n].len().pow(2), self.sectors[n - 1].len().pow(2));
        for mode in 0..2 {
            let a = &self.lower[n - 1][mode];
            c += sandwich(&a.adjoint(), a) * C64::new(self.rates[mode].1, 0.0);
        }
        c
    }

    /// Stationary blocks `ρ_N`, trace-normalized.
    fn steady_blocks(&self) -> Result<Vec<CMatrix>> {
        let top = self.top();
        let solve = |m: CMatrix, rhs: &CMatrix, n: usize| -> Result<CMatrix> {
            m.lu()
                .solve(rhs)
                .ok_or_else(|| Error::Singular(format!("excitation sector {n}")))
        };
        // x_N = R_N x_{N-1}
        let mut transfer: Vec<CMatrix> = vec![CMatrix::zeros(0, 0); top + 1];
        transfer[top] = -solve(self.diagonal_block(top), &self.from_below(top), top)?;
        for n in (1..top).rev() {
            let m = self.diagonal_block(n) + self.from_above(n) * &transfer[n + 1];
            transfer[n] = -solve(m, &self.from_below(n), n)?;
        }
        let mut x = vec![CMatrix::from_element(1, 1, C64::new(1.0, 0.0))];
        for n in 1..=top {
            let next = &transfer[n] * &x[n - 1];
            x.push(next);
        }
        let blocks: Vec<CMatrix> = x
            .iter()
            .zip(&self.sectors)
            .map(|(v, s)| unvec(v, s.len()))
            .collect();
        let trace: C64 = blocks.iter().map(|b| b.trace()).sum();
        if !(trace.norm() > 0.0) || !trace.re.is_finite() {
            return Err(Error::TracelessKernel);
        }
        Ok(blocks
            .into_iter()
            .map(|b| {
                let b = b / trace;
                (&b + b.adjoint()) * C64::new(0.5, 0.0)
            })
            .collect())
    }

    /// `Tr{n_mode L_mode ρ}`: net quanta absorbed by the mode from its bath.
    fn quanta_from_bath(&self, blocks: &[CMatrix], mode: usize) -> f64 {
        let (gd, gu) = self.rates[mode];
        let mut total = 0.0;
        for n in 0..blocks.len() {
            let (down, up) = self.number_blocks(n, mode);
            let rho = &blocks[n];
            let mut l = -(&down * rho + rho * &down) * C64::new(0.5 * gd, 0.0)
                - (&up * rho + rho * &up) * C64::new(0.5 * gu, 0.0);
            if n + 1 < blocks.len() {
                let a = &self.lower[n][mode];
                l += a * &blocks[n + 1] * a.adjoint() * C64::new(gd, 0.0);
            }
            if n > 0 {
                let a = &self.lower[n - 1][mode];
                l += a.adjoint() * &blocks[n - 1] * a * C64::new(gu, 0.0);
            }
            total += (&down * l).trace().re;
        }
        total
    }
}

/// Heat currents at a fixed cutoff, with no convergence check.
pub fn two_mode_engine_currents(p: &TwoModeEngineParams) -> Result<(f64, f64)> {
    p.validate()?;
    let model = SectorModel::new(p)?;
    let blocks = model.steady_blocks()?;
    let heat_c = -p.omega_c * model.quanta_from_bath(&blocks, 0);
    let heat_h = -p.omega_h * model.quanta_from_bath(&blocks, 1);
    Ok((heat_c, heat_h))
}

/// Stationary populations `P(n_C, n_H)` as a dense `levels × levels` matrix.
pub fn two_mode_engine_populations(p: &TwoModeEngineParams) -> Result<DMatrix<f64>> {
    p.validate()?;
    let model = SectorModel::new(p)?;
    let blocks = model.steady_blocks()?;
    let mut pops = DMatrix::zeros(p.fock_cutoff, p.fock_cutoff);
    for (block, sector) in blocks.iter().zip(&model.sectors) {
        for (k, &(nc, nh)) in sector.states.iter().enumerate() {
            pops[(nc, nh)] = block[(k, k)].re;
        }
    }
    Ok(pops)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeEngineSteady {
    pub heat_cold: f64,
    pub heat_hot: f64,
    /// Work delivered to the drive, `-(J_C + J_H)`.
    pub extracted_power: f64,
    pub performance: Performance,
    /// Cutoff at which the reported currents were computed.
    pub fock_cutoff: usize,
}

/// Steady-state currents, checked against a run at twice the cutoff. The
/// reported values come from the larger cutoff.
pub fn two_mode_engine_steady(p: &TwoModeEngineParams) -> Result<TwoModeEngineSteady> {
    let (jc, jh) = two_mode_engine_currents(p)?;
    let doubled = TwoModeEngineParams {
        fock_cutoff: 2 * p.fock_cutoff,
        ..*p
    };
    let (jc2, jh2) = two_mode_engine_currents(&doubled)?;
    let rel = |a: f64, b: f64| {
        let diff = (a - b).abs();
        if diff <= 1e-15 {
            0.0
        } else {
            diff / b.abs().max(f64::MIN_POSITIVE)
        }
    };
    let rel_change = rel(jc, jc2).max(rel(jh, jh2));
    if rel_change > CONVERGENCE_TOL {
        return Err(Error::NotConverged {
            cutoff: p.fock_cutoff,
            doubled: doubled.fock_cutoff,
            rel_change,
        });
    }
    let extracted_power = -(jc2 + jh2);
    let performance = classify(jc2, jh2, extracted_power, p.t_c, p.t_h)?;
    Ok(TwoModeEngineSteady {
        heat_cold: jc2,
        heat_hot: jh2,
        extracted_power,
        performance,
        fock_cutoff: doubled.fock_cutoff,
    })
}
