//! Measured quantities: pseudo-energy ⟨σz⟩, per-component intensities,
//! centroid/width traces and dense intensity evolution maps.

use crate::error::{Result, SimError};
use crate::fields::{GridSpec, LatticeField, SpinorField};
use crate::lattice::{
    build_binary_lattice, decode_lattice_intensity, encode_spinor_to_lattice, lattice_evolve_many,
    GradientSign, LatticeMethod, SublatticeOrdering,
};
use crate::parallel;
use crate::relativistic::{
    dirac_evolve, majorana_evolve_composed, majorana_evolve_reference, DimensionlessParams,
    MassSign,
};

/// Anything with a 1D intensity profile over 1-based positions.
pub trait IntensityProfile {
    fn intensity_profile(&self) -> Vec<f64>;
}

impl IntensityProfile for SpinorField {
    fn intensity_profile(&self) -> Vec<f64> {
        self.cell_intensities()
    }
}

impl IntensityProfile for LatticeField {
    fn intensity_profile(&self) -> Vec<f64> {
        self.site_intensities()
    }
}

/// ⟨σz⟩ = Σₙ (|ψ₁,ₙ|² − |ψ₂,ₙ|²) for a unit-intensity field.
///
/// The input must already be normalized (within 1e−9); this keeps the
/// operation the plain sum it is and surfaces normalization bugs upstream.
pub fn pseudo_energy(psi: &SpinorField) -> Result<f64> {
    let total = psi.total_intensity();
    if (total - 1.0).abs() > 1e-9 {
        return Err(SimError::ContractViolation(format!(
            "pseudo-energy needs a unit-intensity field, got total intensity {total}"
        )));
    }
    let (i1, i2) = psi.component_intensities();
    Ok(i1.iter().sum::<f64>() - i2.iter().sum::<f64>())
}

/// Pseudo-energy from decoded intensity profiles, normalized by the total.
pub fn pseudo_energy_of_intensities(i1: &[f64], i2: &[f64]) -> f64 {
    let s1: f64 = i1.iter().sum();
    let s2: f64 = i2.iter().sum();
    (s1 - s2) / (s1 + s2)
}

/// Intensity-weighted mean position (1-based index units).
pub fn centroid<F: IntensityProfile>(f: &F) -> Result<f64> {
    let w = f.intensity_profile();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(SimError::DegenerateInput(
            "centroid of a zero field is undefined".into(),
        ));
    }
    Ok(w.iter()
        .enumerate()
        .map(|(i, wi)| (i + 1) as f64 * wi)
        .sum::<f64>()
        / total)
}

/// Intensity-weighted standard deviation of position.
pub fn rms_width<F: IntensityProfile>(f: &F) -> Result<f64> {
    let w = f.intensity_profile();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return Err(SimError::DegenerateInput(
            "width of a zero field is undefined".into(),
        ));
    }
    let mean = w
        .iter()
        .enumerate()
        .map(|(i, wi)| (i + 1) as f64 * wi)
        .sum::<f64>()
        / total;
    let var = w
        .iter()
        .enumerate()
        .map(|(i, wi)| {
            let d = (i + 1) as f64 - mean;
            d * d * wi
        })
        .sum::<f64>()
        / total;
    Ok(var.sqrt())
}

/// One sampled point of an evolution observable record.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSample {
    pub zeta: f64,
    pub z_mm: f64,
    pub pseudo_energy: Option<f64>,
    pub centroid: Option<f64>,
    pub rms_width: Option<f64>,
    pub intensity_row: Option<Vec<f64>>,
}

/// Observable records over a strictly increasing evolution coordinate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ObservableSeries {
    samples: Vec<SeriesSample>,
}

impl ObservableSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sample: SeriesSample) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if sample.zeta <= last.zeta {
                return Err(SimError::InvalidParameter(format!(
                    "series coordinate must be strictly increasing: {} after {}",
                    sample.zeta, last.zeta
                )));
            }
        }
        if let Some(pe) = sample.pseudo_energy {
            if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&pe) {
                return Err(SimError::ContractViolation(format!(
                    "pseudo-energy {pe} outside [-1, 1]"
                )));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn samples(&self) -> &[SeriesSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn pseudo_energies(&self) -> Vec<f64> {
        self.samples
            .iter()
            .filter_map(|s| s.pseudo_energy)
            .collect()
    }
}

/// Which propagation backend generates a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evolver {
    Dirac(MassSign),
    MajoranaComposed,
    /// Direct integration of the conjugation-coupled equation.
    MajoranaReference,
    /// Binary-lattice evolution of the encoded spinor, read out per cell.
    LatticeDecode {
        ordering: SublatticeOrdering,
        gradient: GradientSign,
    },
}

/// Shared physics inputs for series generation.
#[derive(Debug, Clone, Copy)]
pub struct EvolverParams {
    pub mu: f64,
    pub kappa_per_mm: f64,
    /// Step bound for the reference integrator.
    pub reference_step: f64,
}

impl EvolverParams {
    pub fn new(mu: f64, kappa_per_mm: f64) -> Self {
        Self {
            mu,
            kappa_per_mm,
            reference_step: crate::relativistic::REFERENCE_STEP,
        }
    }
}

fn validate_zetas(zetas: &[f64]) -> Result<()> {
    if zetas.is_empty() {
        return Err(SimError::InvalidParameter(
            "need at least one evolution coordinate".into(),
        ));
    }
    for pair in zetas.windows(2) {
        if pair[1] <= pair[0] {
            return Err(SimError::InvalidParameter(format!(
                "coordinates must be strictly increasing: {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    if zetas[0] < 0.0 {
        return Err(SimError::InvalidParameter(format!(
            "coordinates must be >= 0, got {}",
            zetas[0]
        )));
    }
    Ok(())
}

/// Per-component intensities (i1, i2) of the evolved state at each ζ.
pub fn evolve_component_intensities(
    evolver: Evolver,
    params: EvolverParams,
    psi0: &SpinorField,
    grid: GridSpec,
    zetas: &[f64],
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    validate_zetas(zetas)?;
    match evolver {
        Evolver::Dirac(sign) => parallel::try_map(zetas, |&zeta| {
            let p = DimensionlessParams::new(params.mu, zeta)?;
            Ok(dirac_evolve(psi0, sign, p, grid)?.component_intensities())
        }),
        Evolver::MajoranaComposed => parallel::try_map(zetas, |&zeta| {
            let p = DimensionlessParams::new(params.mu, zeta)?;
            Ok(majorana_evolve_composed(psi0, p, grid)?.component_intensities())
        }),
        Evolver::MajoranaReference => {
            // Cumulative integration: advance segment by segment.
            let mut out = Vec::with_capacity(zetas.len());
            let mut state = psi0.clone();
            let mut reached = 0.0;
            for &zeta in zetas {
                let seg = DimensionlessParams::new(params.mu, zeta - reached)?;
                state = majorana_evolve_reference(&state, seg, grid, params.reference_step)?;
                reached = zeta;
                out.push(state.component_intensities());
            }
            Ok(out)
        }
        Evolver::LatticeDecode { ordering, gradient } => {
            let lat = build_binary_lattice(
                2 * psi0.n_cells(),
                params.kappa_per_mm,
                params.mu * params.kappa_per_mm,
                ordering,
            )?;
            let encoded = encode_spinor_to_lattice(psi0, gradient);
            let z_mm: Vec<f64> = zetas.iter().map(|z| z / params.kappa_per_mm).collect();
            let fields = lattice_evolve_many(&lat, &encoded, &z_mm, LatticeMethod::Eigen)?;
            fields.iter().map(decode_lattice_intensity).collect()
        }
    }
}

/// Pseudo-energy (plus centroid and rms width) of the evolved state at each
/// ζ. Evolved fields are renormalized before the ⟨σz⟩ sum; for the composed
/// Majoranon the field's own intensity is not conserved, only the ψ±
/// content is.
pub fn pseudo_energy_series(
    evolver: Evolver,
    params: EvolverParams,
    psi0: &SpinorField,
    grid: GridSpec,
    zetas: &[f64],
) -> Result<ObservableSeries> {
    let intensities = evolve_component_intensities(evolver, params, psi0, grid, zetas)?;
    let mut series = ObservableSeries::new();
    for (&zeta, (i1, i2)) in zetas.iter().zip(&intensities) {
        let total: Vec<f64> = i1.iter().zip(i2).map(|(a, b)| a + b).collect();
        let cell_field = pseudo_profile(&total);
        series.push(SeriesSample {
            zeta,
            z_mm: zeta / params.kappa_per_mm,
            pseudo_energy: Some(pseudo_energy_of_intensities(i1, i2)),
            centroid: Some(centroid(&cell_field)?),
            rms_width: Some(rms_width(&cell_field)?),
            intensity_row: None,
        })?;
    }
    Ok(series)
}

struct PlainProfile(Vec<f64>);

impl IntensityProfile for PlainProfile {
    fn intensity_profile(&self) -> Vec<f64> {
        self.0.clone()
    }
}

fn pseudo_profile(total: &[f64]) -> PlainProfile {
    PlainProfile(total.to_vec())
}

/// Intensity evolution matrix: one row per ζ sample, one column per cell
/// or site.
pub type IntensityMap = Vec<Vec<f64>>;

/// Dense total-intensity evolution map: one row per ζ, one column per cell,
/// each row normalized to unit sum.
pub fn intensity_map(
    evolver: Evolver,
    params: EvolverParams,
    psi0: &SpinorField,
    grid: GridSpec,
    zetas: &[f64],
) -> Result<IntensityMap> {
    let (m1, m2) = component_intensity_maps(evolver, params, psi0, grid, zetas)?;
    Ok(m1
        .into_iter()
        .zip(m2)
        .map(|(r1, r2)| r1.iter().zip(&r2).map(|(a, b)| a + b).collect())
        .collect())
}

/// Component-resolved evolution maps (ψ₁ and ψ₂ panels). Rows are jointly
/// normalized: row₁ + row₂ sums to one at every ζ.
pub fn component_intensity_maps(
    evolver: Evolver,
    params: EvolverParams,
    psi0: &SpinorField,
    grid: GridSpec,
    zetas: &[f64],
) -> Result<(IntensityMap, IntensityMap)> {
    let intensities = evolve_component_intensities(evolver, params, psi0, grid, zetas)?;
    let mut m1 = Vec::with_capacity(zetas.len());
    let mut m2 = Vec::with_capacity(zetas.len());
    for (i1, i2) in intensities {
        let total: f64 = i1.iter().sum::<f64>() + i2.iter().sum::<f64>();
        if total <= 0.0 {
            return Err(SimError::DegenerateInput(
                "evolved state has zero intensity".into(),
            ));
        }
        m1.push(i1.iter().map(|v| v / total).collect());
        m2.push(i2.iter().map(|v| v / total).collect());
    }
    Ok((m1, m2))
}

/// Total-variation distance between two intensity distributions; both are
/// normalized to unit sum first.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "distributions must have equal length");
    let sp: f64 = p.iter().sum();
    let sq: f64 = q.iter().sum();
    assert!(
        sp > 0.0 && sq > 0.0,
        "distributions must have positive mass"
    );
    0.5 * p
        .iter()
        .zip(q)
        .map(|(a, b)| (a / sp - b / sq).abs())
        .sum::<f64>()
}

/// Max − min of a sampled observable.
pub fn oscillation_amplitude(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    max - min
}

/// Location of the first local minimum of a densely sampled series, refined
/// by a parabolic fit through the bracketing samples.
pub fn first_minimum(zetas: &[f64], values: &[f64]) -> Option<f64> {
    assert_eq!(zetas.len(), values.len());
    for i in 1..values.len().saturating_sub(1) {
        if values[i] < values[i - 1] && values[i] <= values[i + 1] {
            let denom = values[i - 1] - 2.0 * values[i] + values[i + 1];
            let h = 0.5 * (zetas[i + 1] - zetas[i - 1]);
            if denom > 0.0 {
                let shift = 0.5 * (values[i - 1] - values[i + 1]) / denom;
                return Some(zetas[i] + shift * h);
            }
            return Some(zetas[i]);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uniform_rest_state(n: usize) -> SpinorField {
        let amp = 1.0 / (n as f64).sqrt();
        SpinorField::new(vec![c(amp, 0.0); n], vec![c(0.0, 0.0); n]).unwrap()
    }

    #[test]
    fn pseudo_energy_examples() {
        let psi = uniform_rest_state(8);
        assert_abs_diff_eq!(pseudo_energy(&psi).unwrap(), 1.0, epsilon = 1e-12);

        let r = 0.5f64;
        let even = SpinorField::new(vec![c(r, 0.0); 2], vec![c(0.0, r); 2]).unwrap();
        assert_abs_diff_eq!(pseudo_energy(&even).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn pseudo_energy_rejects_unnormalized() {
        let psi = SpinorField::new(vec![c(2.0, 0.0)], vec![c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            pseudo_energy(&psi),
            Err(SimError::ContractViolation(_))
        ));
    }

    #[test]
    fn rest_majoranon_reaches_minus_one() {
        let n = 8;
        let psi = uniform_rest_state(n);
        let grid = GridSpec::periodic(n).unwrap();
        let mu = 0.65;
        let zeta = std::f64::consts::PI / (2.0 * mu);
        let p = DimensionlessParams::new(mu, zeta).unwrap();
        let out = majorana_evolve_composed(&psi, p, grid)
            .unwrap()
            .normalize()
            .unwrap();
        assert_abs_diff_eq!(pseudo_energy(&out).unwrap(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn centroid_examples() {
        let f = LatticeField::single_site(9, 5).unwrap();
        assert_abs_diff_eq!(centroid(&f).unwrap(), 5.0, epsilon = 1e-15);

        let mut two = LatticeField::zeros(8);
        two.amps_mut()[2] = c(0.7, 0.0);
        two.amps_mut()[6] = c(0.7, 0.0);
        assert_abs_diff_eq!(centroid(&two).unwrap(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rms_width(&two).unwrap(), 2.0, epsilon = 1e-15);

        let sym = crate::fields::gaussian_spinor(
            GridSpec::periodic(13).unwrap(),
            7.0,
            1.3,
            0.0,
            c(0.6, 0.0),
            c(0.0, 0.8),
        )
        .unwrap();
        assert_abs_diff_eq!(centroid(&sym).unwrap(), 7.0, epsilon = 1e-12);
    }

    #[test]
    fn width_examples() {
        let f = LatticeField::single_site(9, 4).unwrap();
        assert_abs_diff_eq!(rms_width(&f).unwrap(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            centroid(&LatticeField::zeros(4)),
            Err(SimError::DegenerateInput(_))
        ));
        assert!(matches!(
            rms_width(&SpinorField::zeros(4)),
            Err(SimError::DegenerateInput(_))
        ));
    }

    #[test]
    fn series_enforces_monotone_coordinate() {
        let mut s = ObservableSeries::new();
        let sample = |zeta| SeriesSample {
            zeta,
            z_mm: zeta,
            pseudo_energy: Some(0.0),
            centroid: None,
            rms_width: None,
            intensity_row: None,
        };
        s.push(sample(0.0)).unwrap();
        s.push(sample(1.0)).unwrap();
        assert!(s.push(sample(1.0)).is_err());
    }

    #[test]
    fn dirac_series_is_constant_for_rest_state() {
        let psi = uniform_rest_state(8);
        let grid = GridSpec::periodic(8).unwrap();
        let zetas: Vec<f64> = (0..=20).map(|i| i as f64 * 0.25).collect();
        let series = pseudo_energy_series(
            Evolver::Dirac(MassSign::Plus),
            EvolverParams::new(0.65, 0.064),
            &psi,
            grid,
            &zetas,
        )
        .unwrap();
        for pe in series.pseudo_energies() {
            assert_abs_diff_eq!(pe, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn majoranon_series_follows_cosine() {
        let psi = uniform_rest_state(8);
        let grid = GridSpec::periodic(8).unwrap();
        let mu = 0.65;
        let zetas: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let series = pseudo_energy_series(
            Evolver::MajoranaComposed,
            EvolverParams::new(mu, 0.064),
            &psi,
            grid,
            &zetas,
        )
        .unwrap();
        for (s, pe) in series.samples().iter().zip(series.pseudo_energies()) {
            assert_abs_diff_eq!(pe, (2.0 * mu * s.zeta).cos(), epsilon = 1e-9);
        }
    }

    #[test]
    fn map_rows_are_normalized_and_start_at_initial_profile() {
        let grid = GridSpec::periodic(13).unwrap();
        let psi =
            crate::fields::gaussian_spinor(grid, 7.0, 1.1, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let zetas: Vec<f64> = (0..=40).map(|i| i as f64 * 0.11).collect();
        let map = intensity_map(
            Evolver::MajoranaComposed,
            EvolverParams::new(0.65, 0.064),
            &psi,
            grid,
            &zetas,
        )
        .unwrap();
        for row in &map {
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        }
        for (a, b) in map[0].iter().zip(psi.cell_intensities()) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn component_maps_show_population_exchange() {
        let grid = GridSpec::periodic(13).unwrap();
        let psi =
            crate::fields::gaussian_spinor(grid, 7.0, 1.1, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let mu = 0.65;
        let first_min_zeta = std::f64::consts::PI / (2.0 * mu);
        let zetas = [0.0, first_min_zeta];
        let (m1, m2) = component_intensity_maps(
            Evolver::MajoranaComposed,
            EvolverParams::new(mu, 0.064),
            &psi,
            grid,
            &zetas,
        )
        .unwrap();
        let pop1_start: f64 = m1[0].iter().sum();
        let pop2_start: f64 = m2[0].iter().sum();
        let pop1_later: f64 = m1[1].iter().sum();
        let pop2_later: f64 = m2[1].iter().sum();
        assert!(pop1_start > 0.99 && pop2_start < 0.01);
        assert!(pop2_later > pop1_later, "intensity must migrate to ψ₂");
    }

    #[test]
    fn lattice_decode_evolver_matches_direct_decode() {
        let grid = GridSpec::periodic(16).unwrap();
        let psi =
            crate::fields::gaussian_spinor(grid, 8.0, 2.0, 0.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let params = EvolverParams::new(0.65, 0.064);
        let series = pseudo_energy_series(
            Evolver::LatticeDecode {
                ordering: SublatticeOrdering::Ab,
                gradient: GradientSign::Plus,
            },
            params,
            &psi,
            grid,
            &[0.55],
        )
        .unwrap();
        let lat = build_binary_lattice(32, 0.064, 0.65 * 0.064, SublatticeOrdering::Ab).unwrap();
        let enc = encode_spinor_to_lattice(&psi, GradientSign::Plus);
        let out =
            crate::lattice::lattice_evolve(&lat, &enc, 0.55 / 0.064, LatticeMethod::Eigen).unwrap();
        let (i1, i2) = decode_lattice_intensity(&out).unwrap();
        assert_abs_diff_eq!(
            series.pseudo_energies()[0],
            pseudo_energy_of_intensities(&i1, &i2),
            epsilon = 1e-14
        );
    }

    #[test]
    fn total_variation_basics() {
        assert_abs_diff_eq!(
            total_variation(&[1.0, 0.0], &[0.0, 1.0]),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            total_variation(&[0.5, 0.5], &[1.0, 1.0]),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn first_minimum_parabolic_refinement() {
        let zetas: Vec<f64> = (0..=200).map(|i| i as f64 * 0.01).collect();
        let truth = 0.735;
        let values: Vec<f64> = zetas.iter().map(|z| (z - truth).powi(2)).collect();
        let found = first_minimum(&zetas, &values).unwrap();
        assert!((found - truth).abs() < 0.02, "found {found}");
    }

    #[test]
    fn series_rejects_empty_or_unsorted_zetas() {
        let psi = uniform_rest_state(8);
        let grid = GridSpec::periodic(8).unwrap();
        let params = EvolverParams::new(0.5, 0.064);
        assert!(pseudo_energy_series(Evolver::MajoranaComposed, params, &psi, grid, &[]).is_err());
        assert!(
            pseudo_energy_series(Evolver::MajoranaComposed, params, &psi, grid, &[1.0, 0.5])
                .is_err()
        );
    }
}
