//! Run orchestration: turn a resolved [`ExperimentConfig`] into CSV files,
//! heatmaps and a scalar summary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, Model, OutputKind};
use crate::error::Result;
use crate::fields::{LatticeField, SpinorField};
use crate::lattice::{
    build_binary_lattice, decode_lattice_intensity, encode_spinor_to_lattice, lattice_evolve_many,
    GradientSign, LatticeMethod, SublatticeOrdering,
};
use crate::observables::{
    centroid, evolve_component_intensities, first_minimum, oscillation_amplitude,
    pseudo_energy_of_intensities, rms_width, IntensityProfile, ObservableSeries, SeriesSample,
};
use crate::output::{
    format_value, render_heatmap, write_map_csv, write_series_csv, Colormap, SeriesColumn,
};
use crate::parallel;
use crate::relativistic::MassSign;

/// Files written plus the headline observables of a run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub scalars: Vec<(String, f64)>,
}

struct Profile(Vec<f64>);

impl IntensityProfile for Profile {
    fn intensity_profile(&self) -> Vec<f64> {
        self.0.clone()
    }
}

/// Component intensities per sampled ζ, with site-resolved rows where the
/// model has a physical lattice.
struct BackendOutput {
    cells: Vec<(Vec<f64>, Vec<f64>)>,
    sites: Option<Vec<Vec<f64>>>,
}

fn compute(cfg: &ExperimentConfig, zetas: &[f64]) -> Result<BackendOutput> {
    let psi0 = cfg.initial_state()?;
    let grid = cfg.grid()?;
    match cfg.model {
        Model::Spinor => {
            let params = crate::observables::EvolverParams::new(cfg.mu, cfg.kappa_per_mm);
            let cells = evolve_component_intensities(
                cfg.evolver.spinor_evolver(),
                params,
                &psi0,
                grid,
                zetas,
            )?;
            Ok(BackendOutput { cells, sites: None })
        }
        Model::Lattice => {
            let mass = cfg
                .evolver
                .mass_sign()
                .expect("config validation admits only dirac evolvers");
            let ordering = match mass {
                MassSign::Plus => SublatticeOrdering::Ab,
                MassSign::Minus => SublatticeOrdering::Ba,
            };
            let lat = build_binary_lattice(
                2 * cfg.n_cells,
                cfg.kappa_per_mm,
                cfg.mu * cfg.kappa_per_mm,
                ordering,
            )?;
            let encoded = encode_spinor_to_lattice(&psi0, GradientSign::Plus);
            let z_mm: Vec<f64> = zetas.iter().map(|z| z / cfg.kappa_per_mm).collect();
            let fields = lattice_evolve_many(&lat, &encoded, &z_mm, LatticeMethod::Eigen)?;
            let cells = fields
                .iter()
                .map(decode_lattice_intensity)
                .collect::<Result<Vec<_>>>()?;
            let sites = fields.iter().map(LatticeField::site_intensities).collect();
            Ok(BackendOutput {
                cells,
                sites: Some(sites),
            })
        }
        Model::Device => device_series(cfg, &psi0, zetas),
    }
}

fn device_series(
    cfg: &ExperimentConfig,
    psi0: &SpinorField,
    zetas: &[f64],
) -> Result<BackendOutput> {
    let kappa = cfg.kappa_per_mm;
    let beta = cfg.mu * kappa;
    let upper_lat = build_binary_lattice(2 * cfg.n_cells, kappa, beta, SublatticeOrdering::Ab)?;
    let lower_lat = build_binary_lattice(2 * cfg.n_cells, kappa, beta, SublatticeOrdering::Ba)?;
    let (psi_plus, psi_minus) = crate::relativistic::decompose_majoranon(psi0);
    let upper_in = encode_spinor_to_lattice(&psi_plus, GradientSign::Plus);
    let lower_in = encode_spinor_to_lattice(&psi_minus, GradientSign::Plus);
    let z_mm: Vec<f64> = zetas.iter().map(|z| z / kappa).collect();
    let upper = lattice_evolve_many(&upper_lat, &upper_in, &z_mm, LatticeMethod::Eigen)?;
    let lower = lattice_evolve_many(&lower_lat, &lower_in, &z_mm, LatticeMethod::Eigen)?;
    let theta = std::f64::consts::FRAC_PI_4;
    let mut cells = Vec::with_capacity(zetas.len());
    let mut sites = Vec::with_capacity(zetas.len());
    for (up, low) in upper.iter().zip(&lower) {
        let (out_up, _) = crate::device::recombine(up, low, theta)?;
        cells.push(decode_lattice_intensity(&out_up)?);
        sites.push(out_up.site_intensities());
    }
    Ok(BackendOutput {
        cells,
        sites: Some(sites),
    })
}

fn build_series(
    cfg: &ExperimentConfig,
    zetas: &[f64],
    backend: &BackendOutput,
) -> Result<ObservableSeries> {
    let mut series = ObservableSeries::new();
    for (i, &zeta) in zetas.iter().enumerate() {
        let (i1, i2) = &backend.cells[i];
        // Centroid and width are measured on the physical carrier: sites
        // where a lattice exists, cells for the spectral models.
        let profile = Profile(match &backend.sites {
            Some(rows) => rows[i].clone(),
            None => i1.iter().zip(i2).map(|(a, b)| a + b).collect(),
        });
        series.push(SeriesSample {
            zeta,
            z_mm: zeta / cfg.kappa_per_mm,
            pseudo_energy: Some(pseudo_energy_of_intensities(i1, i2)),
            centroid: Some(centroid(&profile)?),
            rms_width: Some(rms_width(&profile)?),
            intensity_row: None,
        })?;
    }
    Ok(series)
}

fn normalized_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|row| {
            let total: f64 = row.iter().sum();
            row.iter().map(|v| v / total).collect()
        })
        .collect()
}

fn component_maps(backend: &BackendOutput) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let mut m1 = Vec::with_capacity(backend.cells.len());
    let mut m2 = Vec::with_capacity(backend.cells.len());
    for (i1, i2) in &backend.cells {
        let total: f64 = i1.iter().sum::<f64>() + i2.iter().sum::<f64>();
        m1.push(i1.iter().map(|v| v / total).collect());
        m2.push(i2.iter().map(|v| v / total).collect());
    }
    (m1, m2)
}

/// Execute a configured run, writing the requested outputs into `out_dir`.
/// Identical configs produce bit-identical files, independent of
/// `SIM_THREADS`.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)?;
    let zetas = cfg.zeta_samples();
    let meas = &cfg.measurement_zetas;

    let dense = compute(cfg, &zetas)?;
    let at_meas = compute(cfg, meas)?;

    let mut files = Vec::new();
    let mut write = |name: &str, action: &mut dyn FnMut(&Path) -> Result<()>| -> Result<()> {
        let path = out_dir.join(name);
        action(&path)?;
        files.push(path);
        Ok(())
    };

    let series = build_series(cfg, &zetas, &dense)?;

    for output in &cfg.outputs {
        match output {
            OutputKind::PseudoEnergy => {
                write("pseudo_energy.csv", &mut |p| {
                    write_series_csv(&series, &[SeriesColumn::PseudoEnergy], p)
                })?;
            }
            OutputKind::CentroidWidth => {
                write("centroid_width.csv", &mut |p| {
                    write_series_csv(
                        &series,
                        &[SeriesColumn::Centroid, SeriesColumn::RmsWidth],
                        p,
                    )
                })?;
            }
            OutputKind::Intensities => match cfg.model {
                Model::Lattice => {
                    let rows = at_meas.sites.as_ref().expect("lattice model has sites");
                    write("intensity_sites.csv", &mut |p| write_map_csv(meas, rows, p))?;
                }
                _ => {
                    let (m1, m2): (Vec<_>, Vec<_>) = at_meas
                        .cells
                        .iter()
                        .map(|(a, b)| (a.clone(), b.clone()))
                        .unzip();
                    write("intensity_psi1.csv", &mut |p| write_map_csv(meas, &m1, p))?;
                    write("intensity_psi2.csv", &mut |p| write_map_csv(meas, &m2, p))?;
                    if let Some(rows) = &at_meas.sites {
                        write("intensity_sites_upper.csv", &mut |p| {
                            write_map_csv(meas, rows, p)
                        })?;
                    }
                }
            },
            OutputKind::Map => match cfg.model {
                Model::Lattice => {
                    let rows = normalized_rows(dense.sites.as_ref().expect("lattice sites"));
                    write("map_sites.csv", &mut |p| write_map_csv(&zetas, &rows, p))?;
                    write("map_sites.ppm", &mut |p| {
                        render_heatmap(&rows, p, Colormap::Viridis)
                    })?;
                }
                _ => {
                    let (m1, m2) = component_maps(&dense);
                    write("map_psi1.csv", &mut |p| write_map_csv(&zetas, &m1, p))?;
                    write("map_psi1.ppm", &mut |p| {
                        render_heatmap(&m1, p, Colormap::Viridis)
                    })?;
                    write("map_psi2.csv", &mut |p| write_map_csv(&zetas, &m2, p))?;
                    write("map_psi2.ppm", &mut |p| {
                        render_heatmap(&m2, p, Colormap::Viridis)
                    })?;
                }
            },
        }
    }

    let mut scalars = Vec::new();
    for (&zeta, (i1, i2)) in meas.iter().zip(&at_meas.cells) {
        scalars.push((
            format!("pseudo_energy[zeta={zeta}]"),
            pseudo_energy_of_intensities(i1, i2),
        ));
    }
    if let Some(last) = series.samples().last() {
        scalars.push(("final_rms_width".into(), last.rms_width.unwrap_or(f64::NAN)));
    }
    Ok(RunSummary { files, scalars })
}

/// Pseudo-energy of the configured run at each coordinate, without touching
/// the filesystem. Backed by the same model dispatch as [`run_experiment`].
pub fn pseudo_energies_at(cfg: &ExperimentConfig, zetas: &[f64]) -> Result<Vec<f64>> {
    let backend = compute(cfg, zetas)?;
    Ok(backend
        .cells
        .iter()
        .map(|(i1, i2)| pseudo_energy_of_intensities(i1, i2))
        .collect())
}

/// Coordinate grid of the mass-comparison curves (dense, for amplitude and
/// minimum extraction).
fn comparison_zetas() -> Vec<f64> {
    (0..=500).map(|i| i as f64 * 0.01).collect()
}

/// Emit the Majoranon-versus-Dirac pseudo-energy comparison for a preset
/// packet: one CSV with both theory curves.
pub fn run_compare(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    std::fs::create_dir_all(out_dir)?;
    let grid = cfg.grid()?;
    let psi0 = crate::fields::gaussian_spinor(
        grid,
        cfg.n0,
        cfg.sigma,
        cfg.p0,
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(0.0, 0.0),
    )?;
    let zetas = comparison_zetas();
    let params = crate::observables::EvolverParams::new(cfg.mu, cfg.kappa_per_mm);

    let curves = parallel::try_map(&[true, false], |&majoranon| {
        let evolver = if majoranon {
            crate::observables::Evolver::MajoranaComposed
        } else {
            crate::observables::Evolver::Dirac(MassSign::Plus)
        };
        let intensities = evolve_component_intensities(evolver, params, &psi0, grid, &zetas)?;
        Ok(intensities
            .iter()
            .map(|(i1, i2)| pseudo_energy_of_intensities(i1, i2))
            .collect::<Vec<f64>>())
    })?;
    let (majoranon, dirac) = (&curves[0], &curves[1]);

    let mut text = String::from("zeta,Z_mm,majoranon,dirac\n");
    for (i, &zeta) in zetas.iter().enumerate() {
        writeln!(
            text,
            "{},{},{},{}",
            format_value(zeta),
            format_value(zeta / cfg.kappa_per_mm),
            format_value(majoranon[i]),
            format_value(dirac[i])
        )
        .expect("string write");
    }
    let path = out_dir.join("compare_pseudo_energy.csv");
    std::fs::write(&path, text)?;

    let scalars = vec![
        (
            "majoranon_amplitude".to_string(),
            oscillation_amplitude(majoranon),
        ),
        ("dirac_amplitude".to_string(), oscillation_amplitude(dirac)),
        (
            "majoranon_first_minimum_zeta".to_string(),
            first_minimum(&zetas, majoranon).unwrap_or(f64::NAN),
        ),
    ];
    Ok(RunSummary {
        files: vec![path],
        scalars,
    })
}
