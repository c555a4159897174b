//! GKLS generators for a system weakly coupled to thermal reservoirs.
//!
//! Each bath couples through operators `S` (lowering form) as
//! `S ⊗ B† + S† ⊗ B`, with rates specified in the frequency domain. Distinct
//! coupling operators of one bath are treated as independent channels; a
//! correlated coupling is expressed by passing the combined operator.

mod bath;
mod build;
mod gaps;

pub use bath::{lamb_shift, rate_pair, BathSpec, Coupling, CouplingKind, SpectralProfile, Statistics};
pub use build::{
    build, build_local, build_perlind, build_secular, dissipator, perlind_cross_rate, perlind_rate_matrix,
    BuildOptions, GeneratorBundle, PerlindRates, Scheme,
};
pub use gaps::{default_gap_tol, gap_decompose, GapDecomposition};
