//! Discrete complex field containers and initial-state construction.
//!
//! Two containers are used throughout: [`SpinorField`] holds a two-component
//! spinor sampled on `N` unit cells, [`LatticeField`] holds one amplitude per
//! waveguide site. Cells and sites are indexed 1-based; positions are the
//! indices themselves (unit spacing).

use num_complex::Complex64;

use crate::error::{Result, SimError};

/// Boundary handling of the transverse grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Required by the spectral spinor propagators.
    Periodic,
    /// Hard-wall truncation, as in the physical waveguide array.
    Open,
}

/// Transverse discretisation: `n_cells` unit cells with unit spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_cells: usize,
    pub boundary: Boundary,
}

impl GridSpec {
    /// Cell spacing in dimensionless units; fixed at one unit cell.
    pub const UNIT_SPACING: f64 = 1.0;

    pub fn new(n_cells: usize, boundary: Boundary) -> Result<Self> {
        if n_cells < 2 {
            return Err(SimError::InvalidParameter(format!(
                "grid needs at least 2 cells, got {n_cells}"
            )));
        }
        Ok(Self { n_cells, boundary })
    }

    pub fn periodic(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, Boundary::Periodic)
    }

    pub fn open(n_cells: usize) -> Result<Self> {
        Self::new(n_cells, Boundary::Open)
    }
}

fn all_finite(amps: &[Complex64]) -> bool {
    amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
}

/// Two-component spinor ψ = (ψ₁, ψ₂) on a discrete transverse grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    comp1: Vec<Complex64>,
    comp2: Vec<Complex64>,
}

impl SpinorField {
    pub fn new(comp1: Vec<Complex64>, comp2: Vec<Complex64>) -> Result<Self> {
        if comp1.is_empty() || comp1.len() != comp2.len() {
            return Err(SimError::ShapeMismatch(format!(
                "spinor components must be equal-length and non-empty, got {} and {}",
                comp1.len(),
                comp2.len()
            )));
        }
        if !all_finite(&comp1) || !all_finite(&comp2) {
            return Err(SimError::InvalidParameter(
                "spinor amplitudes must be finite".into(),
            ));
        }
        Ok(Self { comp1, comp2 })
    }

    pub fn zeros(n_cells: usize) -> Self {
        Self {
            comp1: vec![Complex64::new(0.0, 0.0); n_cells],
            comp2: vec![Complex64::new(0.0, 0.0); n_cells],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.comp1.len()
    }

    pub fn comp1(&self) -> &[Complex64] {
        &self.comp1
    }

    pub fn comp2(&self) -> &[Complex64] {
        &self.comp2
    }

    pub fn comp1_mut(&mut self) -> &mut [Complex64] {
        &mut self.comp1
    }

    pub fn comp2_mut(&mut self) -> &mut [Complex64] {
        &mut self.comp2
    }

    /// Σₙ (|ψ₁,ₙ|² + |ψ₂,ₙ|²)
    pub fn total_intensity(&self) -> f64 {
        self.comp1
            .iter()
            .zip(&self.comp2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    /// Per-cell intensities (|ψ₁,ₙ|², |ψ₂,ₙ|²).
    pub fn component_intensities(&self) -> (Vec<f64>, Vec<f64>) {
        (
            self.comp1.iter().map(|a| a.norm_sqr()).collect(),
            self.comp2.iter().map(|a| a.norm_sqr()).collect(),
        )
    }

    /// Per-cell total intensity |ψ₁,ₙ|² + |ψ₂,ₙ|².
    pub fn cell_intensities(&self) -> Vec<f64> {
        self.comp1
            .iter()
            .zip(&self.comp2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }

    /// Rescale to unit total intensity. Directions of all amplitudes are
    /// unchanged; a zero field is rejected.
    pub fn normalize(&self) -> Result<Self> {
        let scale = normalization_scale(self.total_intensity())?;
        Ok(Self {
            comp1: self.comp1.iter().map(|a| a * scale).collect(),
            comp2: self.comp2.iter().map(|a| a * scale).collect(),
        })
    }
}

/// One complex amplitude per waveguide site.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeField {
    amps: Vec<Complex64>,
}

impl LatticeField {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(SimError::ShapeMismatch("lattice field is empty".into()));
        }
        if !all_finite(&amps) {
            return Err(SimError::InvalidParameter(
                "lattice amplitudes must be finite".into(),
            ));
        }
        Ok(Self { amps })
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self {
            amps: vec![Complex64::new(0.0, 0.0); n_sites],
        }
    }

    /// Single-site excitation at 1-based site `k0` with unit amplitude.
    pub fn single_site(n_sites: usize, k0: usize) -> Result<Self> {
        if k0 == 0 || k0 > n_sites {
            return Err(SimError::InvalidParameter(format!(
                "site index {k0} outside 1..={n_sites}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_sites];
        amps[k0 - 1] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn n_sites(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn total_intensity(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn site_intensities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalize(&self) -> Result<Self> {
        let scale = normalization_scale(self.total_intensity())?;
        Ok(Self {
            amps: self.amps.iter().map(|a| a * scale).collect(),
        })
    }
}

fn normalization_scale(total: f64) -> Result<f64> {
    if total <= 0.0 {
        return Err(SimError::DegenerateInput(
            "cannot normalize a zero field".into(),
        ));
    }
    Ok(1.0 / total.sqrt())
}

/// Gaussian spinor wavepacket ψ_c,n = w_c · exp(−(n−n0)²/2σ²) · exp(i·p0·n),
/// normalized to unit total intensity.
///
/// `n0` is in cell units (grid points are n = 1..N); `p0` uses the
/// exp(+i·p0·n) phase convention shared with the spectral propagators.
pub fn gaussian_spinor(
    grid: GridSpec,
    n0: f64,
    sigma: f64,
    p0: f64,
    weight1: Complex64,
    weight2: Complex64,
) -> Result<SpinorField> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "gaussian width must be positive and finite, got {sigma}"
        )));
    }
    if weight1.norm_sqr() == 0.0 && weight2.norm_sqr() == 0.0 {
        return Err(SimError::InvalidParameter(
            "spinor weights must not both be zero".into(),
        ));
    }
    if !n0.is_finite() || !p0.is_finite() {
        return Err(SimError::InvalidParameter(
            "packet center and momentum must be finite".into(),
        ));
    }
    let n_cells = grid.n_cells;
    let mut comp1 = Vec::with_capacity(n_cells);
    let mut comp2 = Vec::with_capacity(n_cells);
    for i in 0..n_cells {
        let n = (i + 1) as f64;
        let d = n - n0;
        let env = (-d * d / (2.0 * sigma * sigma)).exp();
        let phase = Complex64::from_polar(1.0, p0 * n);
        comp1.push(weight1 * env * phase);
        comp2.push(weight2 * env * phase);
    }
    SpinorField::new(comp1, comp2)?.normalize()
}

/// Gaussian beam sampled per site with a uniform phase step between adjacent
/// sites, normalized to unit intensity. `sigma_sites` is the 1/e-intensity
/// radius in site units; `phase_step` is the per-site phase increment in
/// radians (π/2 for the Dirac-point gradient).
pub fn gaussian_lattice(
    n_sites: usize,
    k0: f64,
    sigma_sites: f64,
    phase_step: f64,
) -> Result<LatticeField> {
    if sigma_sites <= 0.0 || !sigma_sites.is_finite() {
        return Err(SimError::InvalidParameter(format!(
            "beam width must be positive and finite, got {sigma_sites}"
        )));
    }
    let mut amps = Vec::with_capacity(n_sites);
    for i in 0..n_sites {
        let k = (i + 1) as f64;
        let d = k - k0;
        let env = (-d * d / (2.0 * sigma_sites * sigma_sites)).exp();
        amps.push(Complex64::from_polar(env, phase_step * k));
    }
    LatticeField::new(amps)?.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gaussian_spinor_component_weights() {
        let grid = GridSpec::periodic(13).unwrap();
        let psi = gaussian_spinor(grid, 7.0, 1.1, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        // ψ₂ ≡ 0, ψ₁ real positive, peak at n=7.
        assert!(psi.comp2().iter().all(|a| a.norm() == 0.0));
        assert!(psi.comp1().iter().all(|a| a.re > 0.0 && a.im == 0.0));
        let peak = psi
            .comp1()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap()
            .0;
        assert_eq!(peak + 1, 7);
        assert_abs_diff_eq!(psi.total_intensity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_spinor_flat_limit() {
        // At sigma = 1e3 the exact site-to-site spread on this grid is
        // 1.41e-6 (envelope ratio exp(-16/2e6)); it drops below 1e-6 from
        // sigma ~ 2e3 on.
        let grid = GridSpec::periodic(8).unwrap();
        for (sigma, tol) in [(1e3, 2e-6), (2e3, 1e-6), (1e4, 1e-6)] {
            let psi = gaussian_spinor(grid, 4.0, sigma, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
            let first = psi.comp1()[0].norm();
            for a in psi.comp1() {
                assert_abs_diff_eq!(a.norm(), first, epsilon = tol);
            }
        }
    }

    #[test]
    fn gaussian_spinor_normalized() {
        let grid = GridSpec::periodic(15).unwrap();
        let psi = gaussian_spinor(grid, 8.0, 1.3, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(psi.total_intensity(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_spinor_symmetry_about_center() {
        let grid = GridSpec::periodic(13).unwrap();
        let psi = gaussian_spinor(grid, 7.0, 1.7, 0.0, c(0.3, 0.4), c(0.5, -0.1)).unwrap();
        for d in 1..6 {
            let left = psi.comp1()[6 - d].norm();
            let right = psi.comp1()[6 + d].norm();
            assert_abs_diff_eq!(left, right, epsilon = 1e-14);
        }
    }

    #[test]
    fn gaussian_spinor_rejects_bad_parameters() {
        let grid = GridSpec::periodic(8).unwrap();
        assert!(matches!(
            gaussian_spinor(grid, 4.0, -1.0, 0.0, c(1.0, 0.0), c(0.0, 0.0)),
            Err(SimError::InvalidParameter(_))
        ));
        assert!(matches!(
            gaussian_spinor(grid, 4.0, 1.0, 0.0, c(0.0, 0.0), c(0.0, 0.0)),
            Err(SimError::InvalidParameter(_))
        ));
    }

    #[test]
    fn total_intensity_examples() {
        let f = SpinorField::new(vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(f.total_intensity(), 1.0);
        let f = SpinorField::new(vec![c(0.6, 0.0)], vec![c(0.0, 0.8)]).unwrap();
        assert_abs_diff_eq!(f.total_intensity(), 1.0, epsilon = 1e-15);
        let f = SpinorField::zeros(3);
        assert_eq!(f.total_intensity(), 0.0);
    }

    #[test]
    fn normalize_examples() {
        let f = SpinorField::new(vec![c(2.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        let n = f.normalize().unwrap();
        assert_abs_diff_eq!(n.comp1()[0].re, 1.0, epsilon = 1e-15);

        let f = SpinorField::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0)]).unwrap();
        let n = f.normalize().unwrap();
        assert_abs_diff_eq!(n.comp1()[0].re, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(n.comp2()[0].re, 1.0 / 2.0_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn normalize_rejects_zero_field() {
        assert!(matches!(
            LatticeField::zeros(4).normalize(),
            Err(SimError::DegenerateInput(_))
        ));
    }

    #[test]
    fn grid_rejects_tiny() {
        assert!(GridSpec::periodic(1).is_err());
    }

    #[test]
    fn rejects_non_finite_amplitudes() {
        assert!(SpinorField::new(vec![c(f64::NAN, 0.0)], vec![c(0.0, 0.0)]).is_err());
        assert!(LatticeField::new(vec![c(f64::INFINITY, 0.0)]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_field(n: usize) -> impl Strategy<Value = SpinorField> {
            (
                proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n),
                proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n),
            )
                .prop_filter_map("nonzero field", |(v1, v2)| {
                    let comp1: Vec<_> = v1.iter().map(|&(r, i)| c(r, i)).collect();
                    let comp2: Vec<_> = v2.iter().map(|&(r, i)| c(r, i)).collect();
                    let f = SpinorField::new(comp1, comp2).unwrap();
                    (f.total_intensity() > 1e-6).then_some(f)
                })
        }

        proptest! {
            #[test]
            fn normalize_is_idempotent(f in arb_field(16)) {
                let once = f.normalize().unwrap();
                let twice = once.normalize().unwrap();
                for (a, b) in once.comp1().iter().zip(twice.comp1()) {
                    prop_assert!((a - b).norm() <= 1e-15);
                }
                for (a, b) in once.comp2().iter().zip(twice.comp2()) {
                    prop_assert!((a - b).norm() <= 1e-15);
                }
            }

            #[test]
            fn gaussian_is_normalized(
                n0 in 2.0..15.0f64,
                sigma in 0.5..6.0f64,
                p0 in -1.5..1.5f64,
            ) {
                let grid = GridSpec::periodic(16).unwrap();
                let psi = gaussian_spinor(grid, n0, sigma, p0, c(0.8, 0.1), c(-0.3, 0.2)).unwrap();
                prop_assert!((psi.total_intensity() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
