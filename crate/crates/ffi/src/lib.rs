//! C ABI for the simulator: opaque config handles, status codes and a small
//! set of entry points (experiment runs, pseudo-energy series, direct spinor
//! evolution) so other languages can bind without touching Rust types.
//!
//! Conventions: every function returns a [`MajsimStatus`]; `0` is success.
//! On failure a thread-local message is retrievable via
//! [`majsim_last_error_message`] until the next failing call on the same
//! thread. Pointers must be valid for the documented lengths; null pointers
//! are rejected with [`MajsimStatus::NullPointer`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use majsim::config::{resolve_config, ConfigPair, ExperimentConfig};
use majsim::error::SimError;
use majsim::fields::{GridSpec, SpinorField};
use majsim::relativistic::{
    dirac_evolve, majorana_evolve_composed, majorana_evolve_reference, DimensionlessParams,
    MassSign, REFERENCE_STEP,
};
use num_complex::Complex64;

/// Result code of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajsimStatus {
    Ok = 0,
    InvalidParameter = 1,
    DegenerateInput = 2,
    ShapeMismatch = 3,
    UnsupportedBoundary = 4,
    ContractViolation = 5,
    ConfigError = 6,
    IoError = 7,
    NullPointer = 8,
    InvalidUtf8 = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let cstring = CString::new(message)
        .unwrap_or_else(|_| CString::new("error message contained NUL").expect("static"));
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(cstring));
}

fn status_of(err: &SimError) -> MajsimStatus {
    match err {
        SimError::InvalidParameter(_) => MajsimStatus::InvalidParameter,
        SimError::DegenerateInput(_) => MajsimStatus::DegenerateInput,
        SimError::ShapeMismatch(_) => MajsimStatus::ShapeMismatch,
        SimError::UnsupportedBoundary(_) => MajsimStatus::UnsupportedBoundary,
        SimError::ContractViolation(_) => MajsimStatus::ContractViolation,
        SimError::Config(_) => MajsimStatus::ConfigError,
        SimError::Io(_) => MajsimStatus::IoError,
    }
}

fn fail(err: SimError) -> MajsimStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn fail_with(status: MajsimStatus, message: &str) -> MajsimStatus {
    set_error(message.to_string());
    status
}

/// Message of the most recent failure on this thread, or null if no call
/// has failed yet. The pointer stays valid until the next failing call on
/// the same thread.
#[no_mangle]
pub extern "C" fn majsim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn majsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque experiment configuration: an ordered list of key = value
/// assignments resolved against the preset defaults when a run is started.
pub struct MajsimConfig {
    pairs: Vec<ConfigPair>,
}

impl MajsimConfig {
    fn resolve(&self) -> Result<ExperimentConfig, SimError> {
        resolve_config(&self.pairs).map(|(cfg, _notices)| cfg)
    }
}

unsafe fn utf8_arg(ptr: *const c_char, what: &str) -> Result<String, MajsimStatus> {
    if ptr.is_null() {
        return Err(fail_with(
            MajsimStatus::NullPointer,
            &format!("{what} must not be null"),
        ));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| fail_with(MajsimStatus::InvalidUtf8, &format!("{what} must be UTF-8")))
}

/// Create a config seeded from a preset name (`lowmass`, `highmass` or
/// `custom`). Returns null on error.
///
/// # Safety
/// `preset` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn majsim_config_new(preset: *const c_char) -> *mut MajsimConfig {
    let Ok(preset) = utf8_arg(preset, "preset") else {
        return std::ptr::null_mut();
    };
    let config = MajsimConfig {
        pairs: vec![ConfigPair::flag("preset", &preset)],
    };
    // `custom` is allowed to be incomplete until run time; named presets
    // must resolve immediately so typos fail fast.
    if preset != "custom" {
        if let Err(e) = config.resolve() {
            fail(e);
            return std::ptr::null_mut();
        }
    }
    Box::into_raw(Box::new(config))
}

/// Append one key = value assignment (same keys as the CLI flags).
///
/// # Safety
/// `config` must come from [`majsim_config_new`] and not have been freed;
/// `key` and `value` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn majsim_config_set(
    config: *mut MajsimConfig,
    key: *const c_char,
    value: *const c_char,
) -> MajsimStatus {
    let Some(config) = config.as_mut() else {
        return fail_with(MajsimStatus::NullPointer, "config must not be null");
    };
    let key = match utf8_arg(key, "key") {
        Ok(k) => k,
        Err(status) => return status,
    };
    let value = match utf8_arg(value, "value") {
        Ok(v) => v,
        Err(status) => return status,
    };
    config.pairs.push(ConfigPair::flag(&key, &value));
    MajsimStatus::Ok
}

/// Release a config handle. Null is ignored.
///
/// # Safety
/// `config` must come from [`majsim_config_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn majsim_config_free(config: *mut MajsimConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Resolve the config and run the experiment, writing CSV and heatmap files
/// into `out_dir` exactly like `sim run`.
///
/// # Safety
/// `config` must be a live handle; `out_dir` a NUL-terminated path string.
#[no_mangle]
pub unsafe extern "C" fn majsim_run_experiment(
    config: *const MajsimConfig,
    out_dir: *const c_char,
) -> MajsimStatus {
    let Some(config) = config.as_ref() else {
        return fail_with(MajsimStatus::NullPointer, "config must not be null");
    };
    let out_dir = match utf8_arg(out_dir, "out_dir") {
        Ok(d) => PathBuf::from(d),
        Err(status) => return status,
    };
    let cfg = match config.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    match majsim::run::run_experiment(&cfg, &out_dir) {
        Ok(_) => MajsimStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Resolve the config and emit the Majoranon-vs-Dirac comparison CSV, like
/// `sim compare`.
///
/// # Safety
/// Same contract as [`majsim_run_experiment`].
#[no_mangle]
pub unsafe extern "C" fn majsim_compare(
    config: *const MajsimConfig,
    out_dir: *const c_char,
) -> MajsimStatus {
    let Some(config) = config.as_ref() else {
        return fail_with(MajsimStatus::NullPointer, "config must not be null");
    };
    let out_dir = match utf8_arg(out_dir, "out_dir") {
        Ok(d) => PathBuf::from(d),
        Err(status) => return status,
    };
    let cfg = match config.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    match majsim::run::run_compare(&cfg, &out_dir) {
        Ok(_) => MajsimStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Pseudo-energy of the configured run at `n_zetas` strictly increasing
/// coordinates; `out` must hold `n_zetas` doubles.
///
/// # Safety
/// `config` must be a live handle; `zetas` and `out` must point to arrays
/// of `n_zetas` doubles.
#[no_mangle]
pub unsafe extern "C" fn majsim_pseudo_energy_series(
    config: *const MajsimConfig,
    zetas: *const f64,
    n_zetas: usize,
    out: *mut f64,
) -> MajsimStatus {
    let Some(config) = config.as_ref() else {
        return fail_with(MajsimStatus::NullPointer, "config must not be null");
    };
    if zetas.is_null() || out.is_null() {
        return fail_with(MajsimStatus::NullPointer, "zetas and out must not be null");
    }
    let zetas = std::slice::from_raw_parts(zetas, n_zetas);
    let cfg = match config.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    match majsim::run::pseudo_energies_at(&cfg, zetas) {
        Ok(values) => {
            std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
            MajsimStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Evolution backend selector for [`majsim_evolve_spinor`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MajsimEvolver {
    DiracPlus = 0,
    DiracMinus = 1,
    MajoranaComposed = 2,
    MajoranaReference = 3,
}

/// Evolve a two-component spinor over a periodic grid of `n_cells` cells.
///
/// `psi_in` and `psi_out` hold `4 * n_cells` doubles laid out as
/// `[re ψ₁, im ψ₁] × n_cells` followed by `[re ψ₂, im ψ₂] × n_cells`.
///
/// # Safety
/// Both arrays must hold `4 * n_cells` doubles.
#[no_mangle]
pub unsafe extern "C" fn majsim_evolve_spinor(
    evolver: MajsimEvolver,
    n_cells: usize,
    mu: f64,
    zeta: f64,
    psi_in: *const f64,
    psi_out: *mut f64,
) -> MajsimStatus {
    if psi_in.is_null() || psi_out.is_null() {
        return fail_with(MajsimStatus::NullPointer, "spinor buffers must not be null");
    }
    let raw_in = std::slice::from_raw_parts(psi_in, 4 * n_cells);
    let comp = |offset: usize| -> Vec<Complex64> {
        (0..n_cells)
            .map(|i| Complex64::new(raw_in[offset + 2 * i], raw_in[offset + 2 * i + 1]))
            .collect()
    };
    let psi = match SpinorField::new(comp(0), comp(2 * n_cells)) {
        Ok(psi) => psi,
        Err(e) => return fail(e),
    };
    let result = (|| {
        let grid = GridSpec::periodic(n_cells)?;
        let params = DimensionlessParams::new(mu, zeta)?;
        match evolver {
            MajsimEvolver::DiracPlus => dirac_evolve(&psi, MassSign::Plus, params, grid),
            MajsimEvolver::DiracMinus => dirac_evolve(&psi, MassSign::Minus, params, grid),
            MajsimEvolver::MajoranaComposed => majorana_evolve_composed(&psi, params, grid),
            MajsimEvolver::MajoranaReference => {
                majorana_evolve_reference(&psi, params, grid, REFERENCE_STEP)
            }
        }
    })();
    match result {
        Ok(evolved) => {
            let raw_out = std::slice::from_raw_parts_mut(psi_out, 4 * n_cells);
            for (i, a) in evolved.comp1().iter().enumerate() {
                raw_out[2 * i] = a.re;
                raw_out[2 * i + 1] = a.im;
            }
            for (i, a) in evolved.comp2().iter().enumerate() {
                raw_out[2 * n_cells + 2 * i] = a.re;
                raw_out[2 * n_cells + 2 * i + 1] = a.im;
            }
            MajsimStatus::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn config_lifecycle_and_run() {
        unsafe {
            let config = majsim_config_new(cstr("lowmass").as_ptr());
            assert!(!config.is_null());
            assert_eq!(
                majsim_config_set(
                    config,
                    cstr("outputs").as_ptr(),
                    cstr("pseudo_energy").as_ptr()
                ),
                MajsimStatus::Ok
            );
            let dir = std::env::temp_dir().join("majsim-ffi-test-run");
            let _ = std::fs::remove_dir_all(&dir);
            let out = cstr(dir.to_str().unwrap());
            assert_eq!(
                majsim_run_experiment(config, out.as_ptr()),
                MajsimStatus::Ok
            );
            assert!(dir.join("pseudo_energy.csv").is_file());
            majsim_config_free(config);
        }
    }

    #[test]
    fn bad_preset_reports_error() {
        unsafe {
            let config = majsim_config_new(cstr("nosuch").as_ptr());
            assert!(config.is_null());
            let msg = majsim_last_error_message();
            assert!(!msg.is_null());
            let text = CStr::from_ptr(msg).to_str().unwrap();
            assert!(text.contains("preset"), "{text}");
        }
    }

    #[test]
    fn bad_config_value_surfaces_as_config_error() {
        unsafe {
            let config = majsim_config_new(cstr("lowmass").as_ptr());
            majsim_config_set(config, cstr("sigma").as_ptr(), cstr("-2").as_ptr());
            let dir = std::env::temp_dir().join("majsim-ffi-test-bad");
            let out = cstr(dir.to_str().unwrap());
            assert_eq!(
                majsim_run_experiment(config, out.as_ptr()),
                MajsimStatus::ConfigError
            );
            majsim_config_free(config);
        }
    }

    #[test]
    fn series_matches_the_low_mass_run() {
        unsafe {
            let config = majsim_config_new(cstr("lowmass").as_ptr());
            let zetas = [0.55, 4.4];
            let mut out = [0.0f64; 2];
            assert_eq!(
                majsim_pseudo_energy_series(config, zetas.as_ptr(), 2, out.as_mut_ptr()),
                MajsimStatus::Ok
            );
            majsim_config_free(config);
            assert!(out[0] > 0.0 && out[1] > 0.0);
            assert!((out[0] - 0.553).abs() < 0.01, "got {}", out[0]);
        }
    }

    #[test]
    fn evolve_spinor_follows_rest_state_law() {
        let n = 8;
        let mut raw = vec![0.0f64; 4 * n];
        let amp = 1.0 / (n as f64).sqrt();
        for i in 0..n {
            raw[2 * i] = amp;
        }
        let mut out = vec![0.0f64; 4 * n];
        let mu = 0.65;
        let zeta = 1.3;
        let status = unsafe {
            majsim_evolve_spinor(
                MajsimEvolver::MajoranaComposed,
                n,
                mu,
                zeta,
                raw.as_ptr(),
                out.as_mut_ptr(),
            )
        };
        assert_eq!(status, MajsimStatus::Ok);
        // rest-state law: ψ = (cos(μζ), −i sin(μζ)) per cell
        for i in 0..n {
            assert!((out[2 * i] - amp * (mu * zeta).cos()).abs() < 1e-12);
            assert!((out[2 * n + 2 * i + 1] + amp * (mu * zeta).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn null_pointers_are_rejected() {
        unsafe {
            assert_eq!(
                majsim_config_set(std::ptr::null_mut(), cstr("a").as_ptr(), cstr("b").as_ptr()),
                MajsimStatus::NullPointer
            );
            assert_eq!(
                majsim_evolve_spinor(
                    MajsimEvolver::DiracPlus,
                    4,
                    0.0,
                    0.0,
                    std::ptr::null(),
                    std::ptr::null_mut()
                ),
                MajsimStatus::NullPointer
            );
            majsim_config_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn version_is_a_c_string() {
        unsafe {
            let v = CStr::from_ptr(majsim_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
