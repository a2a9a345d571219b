//! End-to-end model of the two-plane photonic chip: front-end splitter,
//! segmentation phase encoding, parallel evolution in two opposite-mass
//! lattices, fan-out effective length and vertical-coupler recombination.
//!
//! Both planes are encoded with the same formal gradient sign; the
//! intra-cell spinor structure of ψ₊ ∝ (1,−1)ᵀ versus ψ₋ ∝ (i,i)ᵀ then
//! makes the physically imprinted phase profiles run in opposite
//! directions (−π/2 versus +π/2 per site), which is how the fabricated
//! segmentation masks differ between the planes. Encoding the lower plane
//! with the opposite *formal* gradient would instead twist ψ₋ by σz and
//! break the recombination identity out = (ψ₊ + iψ₋)/√2.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::fields::{LatticeField, SpinorField};
use crate::lattice::{
    decode_lattice_intensity, encode_spinor_to_lattice, lattice_evolve, BinaryLattice,
    GradientSign, LatticeMethod, SublatticeOrdering,
};
use crate::observables::{
    centroid, pseudo_energy_of_intensities, rms_width, ObservableSeries, SeriesSample,
};
use crate::relativistic::decompose_majoranon;

/// Phase delay of the segmented section index j ∈ {0,1,2,3}: j·π/2.
pub fn segmentation_phase(j: u8) -> Result<f64> {
    if j > 3 {
        return Err(SimError::InvalidParameter(format!(
            "segmentation index must be 0..=3, got {j}"
        )));
    }
    Ok(j as f64 * std::f64::consts::FRAC_PI_2)
}

/// Effective evolution length L_e + extra, with the fan-out residual folded
/// into the additive term.
pub fn effective_length(l_e_mm: f64, l_eff_extra_mm: f64) -> Result<f64> {
    if l_e_mm < 0.0 || l_eff_extra_mm < 0.0 || !l_e_mm.is_finite() || !l_eff_extra_mm.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "lengths must be >= 0, got {l_e_mm} and {l_eff_extra_mm}"
        )));
    }
    Ok(l_e_mm + l_eff_extra_mm)
}

/// Balanced front-end coupler: upper = in/√2, lower = i·in/√2.
pub fn front_splitter(input: &LatticeField) -> (LatticeField, LatticeField) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let upper = input.amps().iter().map(|a| a * r).collect();
    let lower = input
        .amps()
        .iter()
        .map(|a| a * Complex64::new(0.0, r))
        .collect();
    (
        LatticeField::new(upper).expect("scaled valid field"),
        LatticeField::new(lower).expect("scaled valid field"),
    )
}

/// Vertical directional coupler applied per waveguide pair:
/// (out_up, out_low) = (cosθ·up + i·sinθ·low, i·sinθ·up + cosθ·low).
/// θ = π/4 performs the balanced recombination (up + i·low)/√2.
pub fn recombine(
    upper: &LatticeField,
    lower: &LatticeField,
    theta: f64,
) -> Result<(LatticeField, LatticeField)> {
    if upper.n_sites() != lower.n_sites() {
        return Err(SimError::ShapeMismatch(format!(
            "planes have {} and {} sites",
            upper.n_sites(),
            lower.n_sites()
        )));
    }
    if !theta.is_finite() {
        return Err(SimError::InvalidParameter(
            "coupler angle must be finite".into(),
        ));
    }
    let c = theta.cos();
    let is = Complex64::new(0.0, theta.sin());
    let mut out_up = Vec::with_capacity(upper.n_sites());
    let mut out_low = Vec::with_capacity(upper.n_sites());
    for (u, l) in upper.amps().iter().zip(lower.amps()) {
        out_up.push(c * u + is * l);
        out_low.push(is * u + c * l);
    }
    Ok((
        LatticeField::new(out_up).expect("unitary image"),
        LatticeField::new(out_low).expect("unitary image"),
    ))
}

/// Full two-plane chip description.
#[derive(Debug, Clone)]
pub struct DeviceSpec {
    pub lattice_upper: BinaryLattice,
    pub lattice_lower: BinaryLattice,
    pub evolution_length_mm: f64,
    pub fanout_extra_mm: f64,
    /// κ_c·L_c of the recombination couplers; π/4 is balanced.
    pub coupler_theta: f64,
    /// Segmentation unit length s (metadata; phases are applied ideally).
    pub segmentation_step_mm: f64,
    pub input_waist_cells: f64,
}

impl DeviceSpec {
    pub fn new(
        lattice_upper: BinaryLattice,
        lattice_lower: BinaryLattice,
        evolution_length_mm: f64,
        fanout_extra_mm: f64,
        coupler_theta: f64,
        segmentation_step_mm: f64,
        input_waist_cells: f64,
    ) -> Result<Self> {
        if lattice_upper.ordering() != SublatticeOrdering::Ab
            || lattice_lower.ordering() != SublatticeOrdering::Ba
        {
            return Err(SimError::InvalidParameter(
                "upper plane must use ordering AB, lower plane BA".into(),
            ));
        }
        if lattice_upper.n_sites() != lattice_lower.n_sites()
            || lattice_upper.kappa_per_mm() != lattice_lower.kappa_per_mm()
            || lattice_upper.beta_per_mm() != lattice_lower.beta_per_mm()
        {
            return Err(SimError::InvalidParameter(
                "planes must share site count, coupling and detuning".into(),
            ));
        }
        if !lattice_upper.n_sites().is_multiple_of(2) {
            return Err(SimError::InvalidParameter(
                "device lattices need an even site count".into(),
            ));
        }
        let l_eff = effective_length(evolution_length_mm, fanout_extra_mm)?;
        if l_eff <= 0.0 {
            return Err(SimError::InvalidParameter(
                "effective evolution length must be positive".into(),
            ));
        }
        if input_waist_cells <= 0.0 || !input_waist_cells.is_finite() {
            return Err(SimError::InvalidParameter(
                "input waist must be positive".into(),
            ));
        }
        if !coupler_theta.is_finite()
            || segmentation_step_mm < 0.0
            || !segmentation_step_mm.is_finite()
        {
            return Err(SimError::InvalidParameter(
                "coupler angle and segmentation step must be finite".into(),
            ));
        }
        Ok(Self {
            lattice_upper,
            lattice_lower,
            evolution_length_mm,
            fanout_extra_mm,
            coupler_theta,
            segmentation_step_mm,
            input_waist_cells,
        })
    }

    pub fn effective_length_mm(&self) -> f64 {
        self.evolution_length_mm + self.fanout_extra_mm
    }

    pub fn n_cells(&self) -> usize {
        self.lattice_upper.n_sites() / 2
    }

    pub fn kappa_per_mm(&self) -> f64 {
        self.lattice_upper.kappa_per_mm()
    }
}

/// Everything read off the output facet of the chip.
#[derive(Debug, Clone)]
pub struct DeviceOutput {
    /// |amplitude|² per site at the upper output ports.
    pub upper_site_intensities: Vec<f64>,
    /// |amplitude|² per site at the lower output ports.
    pub lower_site_intensities: Vec<f64>,
    /// Upper-port intensities decoded per cell: (|ψ₁,ₙ|², |ψ₂,ₙ|²)-type.
    pub decoded_comp1: Vec<f64>,
    pub decoded_comp2: Vec<f64>,
    /// ⟨σz⟩ of the decoded upper-port intensities.
    pub pseudo_energy: f64,
    /// The measurement record at the chip length: pseudo-energy, centroid,
    /// rms width and the upper-port intensity row.
    pub observables: ObservableSeries,
    /// Encoded plane inputs, before evolution (splitter + segmentation).
    pub plane_input_upper: LatticeField,
    pub plane_input_lower: LatticeField,
}

/// Run the full pipeline: decompose ψ₀, encode each part into its plane,
/// evolve both lattices over the effective length, recombine through the
/// vertical couplers and read out the upper ports.
pub fn simulate_device(spec: &DeviceSpec, psi0: &SpinorField) -> Result<DeviceOutput> {
    if psi0.n_cells() != spec.n_cells() {
        return Err(SimError::ShapeMismatch(format!(
            "initial spinor has {} cells, device has {}",
            psi0.n_cells(),
            spec.n_cells()
        )));
    }
    let total = psi0.total_intensity();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SimError::ContractViolation(format!(
            "device input must be normalized, got total intensity {total}"
        )));
    }

    let (psi_plus, psi_minus) = decompose_majoranon(psi0);
    let upper_in = encode_spinor_to_lattice(&psi_plus, GradientSign::Plus);
    let lower_in = encode_spinor_to_lattice(&psi_minus, GradientSign::Plus);

    let z = spec.effective_length_mm();
    let upper_out = lattice_evolve(&spec.lattice_upper, &upper_in, z, LatticeMethod::Eigen)?;
    let lower_out = lattice_evolve(&spec.lattice_lower, &lower_in, z, LatticeMethod::Eigen)?;

    let (out_up, out_low) = recombine(&upper_out, &lower_out, spec.coupler_theta)?;
    let (decoded_comp1, decoded_comp2) = decode_lattice_intensity(&out_up)?;
    let pseudo_energy = pseudo_energy_of_intensities(&decoded_comp1, &decoded_comp2);

    let mut observables = ObservableSeries::new();
    observables.push(SeriesSample {
        zeta: z * spec.kappa_per_mm(),
        z_mm: z,
        pseudo_energy: Some(pseudo_energy),
        centroid: Some(centroid(&out_up)?),
        rms_width: Some(rms_width(&out_up)?),
        intensity_row: Some(out_up.site_intensities()),
    })?;

    Ok(DeviceOutput {
        upper_site_intensities: out_up.site_intensities(),
        lower_site_intensities: out_low.site_intensities(),
        decoded_comp1,
        decoded_comp2,
        pseudo_energy,
        observables,
        plane_input_upper: upper_in,
        plane_input_lower: lower_in,
    })
}
