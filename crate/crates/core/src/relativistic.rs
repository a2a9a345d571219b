//! Spinor-level dynamics: charge conjugation, the decomposition of a charged
//! Majorana wavepacket into two charge-conjugation-invariant parts, spectral
//! Dirac propagation, and a direct reference integrator for the full
//! conjugation-coupled equation of motion.
//!
//! The evolution equation i∂ζψ = σx p̂ ψ − i μ σy ψ* contains ψ*, so it has
//! no Hamiltonian form. It is handled two ways, which must agree:
//! [`majorana_evolve_composed`] splits ψ = ψ₊ + iψ₋ into conjugation
//! eigenfields and propagates each under an ordinary Dirac equation with
//! mass ±μ, while [`majorana_evolve_reference`] integrates the equation
//! directly as a real linear system.

use num_complex::Complex64;

use crate::error::{Result, SimError};
use crate::fields::{Boundary, GridSpec, SpinorField};
use crate::spectral::SpectralGrid;

/// Dimensionless evolution inputs: mass μ = β/κ and coordinate ζ = Z·κ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub mu: f64,
    pub zeta: f64,
}

impl DimensionlessParams {
    pub fn new(mu: f64, zeta: f64) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(SimError::InvalidParameter(format!(
                "dimensionless mass must be finite and >= 0, got {mu}"
            )));
        }
        if !zeta.is_finite() || zeta < 0.0 {
            return Err(SimError::InvalidParameter(format!(
                "evolution coordinate must be finite and >= 0, got {zeta}"
            )));
        }
        Ok(Self { mu, zeta })
    }

    /// Physical propagation distance for a coupling κ in mm⁻¹.
    pub fn z_mm(&self, kappa_per_mm: f64) -> f64 {
        self.zeta / kappa_per_mm
    }
}

/// Which sign the mass term carries in the Dirac pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MassSign {
    Plus,
    Minus,
}

impl MassSign {
    pub fn signum(self) -> f64 {
        match self {
            MassSign::Plus => 1.0,
            MassSign::Minus => -1.0,
        }
    }
}

/// Charge conjugation ψ ↦ −iσzσy ψ*, which works out to
/// (ψ₁, ψ₂) ↦ (−ψ₂*, −ψ₁*) cell-wise.
pub fn charge_conjugate(psi: &SpinorField) -> SpinorField {
    let comp1 = psi.comp2().iter().map(|a| -a.conj()).collect();
    let comp2 = psi.comp1().iter().map(|a| -a.conj()).collect();
    SpinorField::new(comp1, comp2).expect("conjugate of a valid field is valid")
}

/// Split ψ into its conjugation-invariant parts: ψ₊ = (ψ + ψ_c)/2 and
/// ψ₋ = (ψ − ψ_c)/(2i), so that ψ = ψ₊ + iψ₋ and C(ψ±) = ψ±.
pub fn decompose_majoranon(psi: &SpinorField) -> (SpinorField, SpinorField) {
    let psi_c = charge_conjugate(psi);
    let half = Complex64::new(0.5, 0.0);
    let half_over_i = Complex64::new(0.0, -0.5); // 1/(2i)
    let plus = SpinorField::new(
        psi.comp1()
            .iter()
            .zip(psi_c.comp1())
            .map(|(a, b)| (a + b) * half)
            .collect(),
        psi.comp2()
            .iter()
            .zip(psi_c.comp2())
            .map(|(a, b)| (a + b) * half)
            .collect(),
    )
    .expect("valid");
    let minus = SpinorField::new(
        psi.comp1()
            .iter()
            .zip(psi_c.comp1())
            .map(|(a, b)| (a - b) * half_over_i)
            .collect(),
        psi.comp2()
            .iter()
            .zip(psi_c.comp2())
            .map(|(a, b)| (a - b) * half_over_i)
            .collect(),
    )
    .expect("valid");
    (plus, minus)
}

/// Cell-wise ψ₊ + i·ψ₋; exact inverse of [`decompose_majoranon`].
pub fn compose_majoranon(psi_plus: &SpinorField, psi_minus: &SpinorField) -> Result<SpinorField> {
    if psi_plus.n_cells() != psi_minus.n_cells() {
        return Err(SimError::ShapeMismatch(format!(
            "cannot compose fields of {} and {} cells",
            psi_plus.n_cells(),
            psi_minus.n_cells()
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    SpinorField::new(
        psi_plus
            .comp1()
            .iter()
            .zip(psi_minus.comp1())
            .map(|(a, b)| a + i * b)
            .collect(),
        psi_plus
            .comp2()
            .iter()
            .zip(psi_minus.comp2())
            .map(|(a, b)| a + i * b)
            .collect(),
    )
}

/// Eigenvalues ±√(q² + μ²) of the single-mode operator σx·q + μ·σz.
pub fn dispersion(mu: f64, q: f64) -> (f64, f64) {
    let e = (q * q + mu * mu).sqrt();
    (e, -e)
}

fn require_periodic(grid: GridSpec, psi: &SpinorField) -> Result<()> {
    if grid.boundary != Boundary::Periodic {
        return Err(SimError::UnsupportedBoundary(
            "spectral propagation needs a periodic grid".into(),
        ));
    }
    if psi.n_cells() != grid.n_cells {
        return Err(SimError::ShapeMismatch(format!(
            "field has {} cells but grid has {}",
            psi.n_cells(),
            grid.n_cells
        )));
    }
    Ok(())
}

/// Evolve i∂ζψ = σx q̂ ψ ± μ σz ψ exactly, mode by mode: each plane wave
/// exp(i·q·n) is advanced by the 2×2 propagator exp(−i(σx q + s·μ σz)ζ).
pub fn dirac_evolve(
    psi: &SpinorField,
    mass_sign: MassSign,
    params: DimensionlessParams,
    grid: GridSpec,
) -> Result<SpinorField> {
    require_periodic(grid, psi)?;
    let spectral = SpectralGrid::new(grid.n_cells);
    let mut f1 = psi.comp1().to_vec();
    let mut f2 = psi.comp2().to_vec();
    spectral.forward(&mut f1);
    spectral.forward(&mut f2);
    apply_mode_propagators(&mut f1, &mut f2, &spectral.q, mass_sign.signum(), params);
    spectral.inverse(&mut f1);
    spectral.inverse(&mut f2);
    SpinorField::new(f1, f2)
}

fn apply_mode_propagators(
    f1: &mut [Complex64],
    f2: &mut [Complex64],
    q: &[f64],
    sign: f64,
    params: DimensionlessParams,
) {
    let m = sign * params.mu;
    for ((a, b), &qj) in f1.iter_mut().zip(f2.iter_mut()).zip(q) {
        let e = (qj * qj + m * m).sqrt();
        // exp(−iHζ) = cos(Eζ)·I − i sin(Eζ)/E · H with H = q σx + m σz
        let (s_over_e, c) = if e == 0.0 {
            (params.zeta, 1.0)
        } else {
            ((e * params.zeta).sin() / e, (e * params.zeta).cos())
        };
        let u11 = Complex64::new(c, -s_over_e * m);
        let u22 = Complex64::new(c, s_over_e * m);
        let u12 = Complex64::new(0.0, -s_over_e * qj);
        let (x, y) = (*a, *b);
        *a = u11 * x + u12 * y;
        *b = u12 * x + u22 * y;
    }
}

/// Default step bound for the reference integrator.
pub const REFERENCE_STEP: f64 = 1e-3;

/// Direct integration of i∂ζψ = σx p̂ ψ − i μ σy ψ*.
///
/// The conjugation makes the right-hand side only real-linear, so every
/// amplitude is split into real and imaginary parts, giving a real linear
/// system of dimension 4N which a classical fixed-step 4th-order
/// Runge-Kutta scheme integrates with step ≤ `step`. This is the in-repo
/// oracle for [`majorana_evolve_composed`].
pub fn majorana_evolve_reference(
    psi: &SpinorField,
    params: DimensionlessParams,
    grid: GridSpec,
    step: f64,
) -> Result<SpinorField> {
    if step <= 0.0 || !step.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "integration step must be positive, got {step}"
        )));
    }
    require_periodic(grid, psi)?;
    let n = grid.n_cells;
    if params.zeta == 0.0 {
        return Ok(psi.clone());
    }
    let spectral = SpectralGrid::new(n);
    let n_steps = (params.zeta / step).ceil() as usize;
    let h = params.zeta / n_steps as f64;

    // State layout: [u1 | v1 | u2 | v2], each block of length N.
    let mut y = vec![0.0f64; 4 * n];
    for i in 0..n {
        y[i] = psi.comp1()[i].re;
        y[n + i] = psi.comp1()[i].im;
        y[2 * n + i] = psi.comp2()[i].re;
        y[3 * n + i] = psi.comp2()[i].im;
    }

    let mu = params.mu;
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let mut rhs = |y: &[f64], dy: &mut [f64]| {
        // dψ₁ = −i p̂ψ₂ + iμ ψ₂*,  dψ₂ = −i p̂ψ₁ − iμ ψ₁*
        for i in 0..n {
            scratch[i] = Complex64::new(y[2 * n + i], y[3 * n + i]);
        }
        spectral.apply_momentum(&mut scratch);
        for i in 0..n {
            dy[i] = scratch[i].im + mu * y[3 * n + i];
            dy[n + i] = -scratch[i].re + mu * y[2 * n + i];
        }
        for i in 0..n {
            scratch[i] = Complex64::new(y[i], y[n + i]);
        }
        spectral.apply_momentum(&mut scratch);
        for i in 0..n {
            dy[2 * n + i] = scratch[i].im - mu * y[n + i];
            dy[3 * n + i] = -scratch[i].re - mu * y[i];
        }
    };

    let dim = 4 * n;
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut tmp = vec![0.0; dim];
    for _ in 0..n_steps {
        rhs(&y, &mut k1);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        rhs(&tmp, &mut k2);
        for i in 0..dim {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        rhs(&tmp, &mut k3);
        for i in 0..dim {
            tmp[i] = y[i] + h * k3[i];
        }
        rhs(&tmp, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    let comp1 = (0..n).map(|i| Complex64::new(y[i], y[n + i])).collect();
    let comp2 = (0..n)
        .map(|i| Complex64::new(y[2 * n + i], y[3 * n + i]))
        .collect();
    SpinorField::new(comp1, comp2)
}

/// Evolve the charged-Majorana wavepacket by decomposition: split off ψ₊ and
/// ψ₋, advance them under the +μ and −μ Dirac equations, and recombine.
/// Exact per mode up to floating-point error; Σ(|ψ₊|² + |ψ₋|²) is the
/// conserved norm (the composed field's own intensity is not conserved).
pub fn majorana_evolve_composed(
    psi: &SpinorField,
    params: DimensionlessParams,
    grid: GridSpec,
) -> Result<SpinorField> {
    let (plus, minus) = decompose_majoranon(psi);
    let plus_z = dirac_evolve(&plus, MassSign::Plus, params, grid)?;
    let minus_z = dirac_evolve(&minus, MassSign::Minus, params, grid)?;
    compose_majoranon(&plus_z, &minus_z)
}

/// Conserved norm of the decomposed evolution: Σ(|ψ₊|² + |ψ₋|²).
pub fn decomposed_norm(psi: &SpinorField) -> f64 {
    let (plus, minus) = decompose_majoranon(psi);
    plus.total_intensity() + minus.total_intensity()
}
