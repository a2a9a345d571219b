//! Simulator for charged-Majorana wavepacket dynamics in binary photonic
//! waveguide lattices.
//!
//! The conjugation-coupled 1+1D evolution i∂ζψ = σx p̂ ψ − i μ σy ψ* has no
//! Hamiltonian form, but ψ splits into two conjugation-invariant fields
//! that obey ordinary Dirac equations with masses ±μ. This crate implements
//! that decomposition three ways and cross-validates them:
//!
//! * spectral spinor propagation ([`relativistic`]), including a direct
//!   real-system integrator of the conjugation-coupled equation that serves
//!   as the in-repo oracle;
//! * coupled-mode dynamics of binary waveguide arrays ([`lattice`]) whose
//!   broad-beam limit realizes the Dirac pair optically;
//! * an end-to-end model of the two-plane chip ([`device`]): splitter,
//!   segmentation phases, parallel evolution, vertical-coupler
//!   recombination.
//!
//! Observables ([`observables`]), experiment presets ([`config`]), file
//! output ([`output`]) and run orchestration ([`run`]) back the `sim`
//! command-line tool.

pub mod config;
pub mod device;
pub mod error;
pub mod fields;
pub mod lattice;
pub mod observables;
pub mod output;
pub mod parallel;
pub mod relativistic;
pub mod run;
mod spectral;
pub mod validate;

pub use error::{Result, SimError};
pub use fields::{
    gaussian_lattice, gaussian_spinor, Boundary, GridSpec, LatticeField, SpinorField,
};
pub use relativistic::{
    charge_conjugate, compose_majoranon, decompose_majoranon, dirac_evolve, dispersion,
    majorana_evolve_composed, majorana_evolve_reference, DimensionlessParams, MassSign,
};
