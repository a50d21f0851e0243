//! C ABI for the evomaze library.
//!
//! All functions use opaque handles plus integer status codes. On any
//! `EVOMAZE_ERR_*` return, `evomaze_last_error_message` yields a thread-local
//! description of what went wrong. Handles must be released with the matching
//! `_free` function; every `_free` accepts NULL.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::path::PathBuf;
use std::ptr;

use evomaze::evo::Algorithm;
use evomaze::harness::{run_trial, TrialRecord, TrialSettings};
use evomaze::maze::RewardMode;

/// Status codes returned by fallible functions.
pub const EVOMAZE_OK: c_int = 0;
/// A pointer argument was NULL or a string was not valid UTF-8.
pub const EVOMAZE_ERR_ARGUMENT: c_int = 1;
/// A settings value was out of range or inconsistent.
pub const EVOMAZE_ERR_CONFIG: c_int = 2;
/// The trial itself failed (I/O, evaluation error).
pub const EVOMAZE_ERR_RUN: c_int = 3;
/// An index was out of bounds for the result.
pub const EVOMAZE_ERR_INDEX: c_int = 4;

/// Algorithm selector for `evomaze_settings_new`.
pub const EVOMAZE_ALGORITHM_GA: c_int = 0;
pub const EVOMAZE_ALGORITHM_NS: c_int = 1;
pub const EVOMAZE_ALGORITHM_EYAL: c_int = 2;
pub const EVOMAZE_ALGORITHM_RS: c_int = 3;

/// Environment selector for `evomaze_settings_new`.
pub const EVOMAZE_ENV_SPARSE: c_int = 0;
pub const EVOMAZE_ENV_DECEPTIVE: c_int = 1;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl std::fmt::Display) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
}

/// Trial configuration handle. Opaque; create with `evomaze_settings_new`.
pub struct EvomazeSettings {
    inner: TrialSettings,
}

/// Finished-trial handle. Opaque; produced by `evomaze_trial_run`.
pub struct EvomazeResult {
    inner: TrialRecord,
}

/// Message describing the most recent error on this thread, or an empty
/// string. Valid until the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn evomaze_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Create settings for one trial with library defaults (population 51,
/// 5e7-step budget, 256x256 hidden layers). Returns NULL on invalid selector.
#[no_mangle]
pub extern "C" fn evomaze_settings_new(
    algorithm: c_int,
    environment: c_int,
    trial_seed: u64,
) -> *mut EvomazeSettings {
    let algorithm = match algorithm {
        EVOMAZE_ALGORITHM_GA => Algorithm::Ga,
        EVOMAZE_ALGORITHM_NS => Algorithm::Ns,
        EVOMAZE_ALGORITHM_EYAL => Algorithm::Eyal,
        EVOMAZE_ALGORITHM_RS => Algorithm::Rs,
        other => {
            set_error(format!("unknown algorithm selector {other}"));
            return ptr::null_mut();
        }
    };
    let env = match environment {
        EVOMAZE_ENV_SPARSE => RewardMode::Sparse,
        EVOMAZE_ENV_DECEPTIVE => RewardMode::Deceptive,
        other => {
            set_error(format!("unknown environment selector {other}"));
            return ptr::null_mut();
        }
    };
    let inner = TrialSettings::new(algorithm, env, trial_seed);
    Box::into_raw(Box::new(EvomazeSettings { inner }))
}

/// Release a settings handle.
#[no_mangle]
pub extern "C" fn evomaze_settings_free(settings: *mut EvomazeSettings) {
    if !settings.is_null() {
        drop(unsafe { Box::from_raw(settings) });
    }
}

unsafe fn settings_mut<'a>(ptr: *mut EvomazeSettings) -> Option<&'a mut TrialSettings> {
    if ptr.is_null() {
        set_error("settings handle is NULL");
        None
    } else {
        Some(&mut (*ptr).inner)
    }
}

/// Set the training-step budget.
#[no_mangle]
pub extern "C" fn evomaze_settings_set_max_steps(
    settings: *mut EvomazeSettings,
    max_steps: u64,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if max_steps == 0 {
        set_error("max_steps must be positive");
        return EVOMAZE_ERR_CONFIG;
    }
    s.evo.max_training_steps = max_steps;
    EVOMAZE_OK
}

/// Set the initial exploration rate and its adaptation rates
/// (gamma in [0,1]; alpha and beta >= 0).
#[no_mangle]
pub extern "C" fn evomaze_settings_set_gamma(
    settings: *mut EvomazeSettings,
    gamma0: f64,
    alpha: f64,
    beta: f64,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if !(0.0..=1.0).contains(&gamma0) || alpha < 0.0 || beta < 0.0 {
        set_error("need gamma0 in [0,1] and alpha, beta >= 0");
        return EVOMAZE_ERR_CONFIG;
    }
    s.evo.gamma0 = gamma0;
    s.evo.alpha = alpha;
    s.evo.beta = beta;
    EVOMAZE_OK
}

/// Set the per-component mutation noise variance.
#[no_mangle]
pub extern "C" fn evomaze_settings_set_sigma2(
    settings: *mut EvomazeSettings,
    sigma2: f64,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if !(sigma2 >= 0.0) {
        set_error("sigma2 must be >= 0");
        return EVOMAZE_ERR_CONFIG;
    }
    s.evo.mutation_power = sigma2;
    EVOMAZE_OK
}

/// Set population size M and truncation size T (1 <= T <= M).
#[no_mangle]
pub extern "C" fn evomaze_settings_set_selection(
    settings: *mut EvomazeSettings,
    popsize: usize,
    truncation: usize,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if popsize == 0 || truncation == 0 || truncation > popsize {
        set_error("need 1 <= truncation <= popsize");
        return EVOMAZE_ERR_CONFIG;
    }
    s.evo.popsize = popsize;
    s.evo.truncation = truncation;
    if s.evo.elite_candidates > popsize {
        s.evo.elite_candidates = popsize;
    }
    EVOMAZE_OK
}

/// Set the hidden-layer widths from an array of `count` sizes.
#[no_mangle]
pub extern "C" fn evomaze_settings_set_hidden_dims(
    settings: *mut EvomazeSettings,
    dims: *const usize,
    count: usize,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if dims.is_null() && count > 0 {
        set_error("dims is NULL with nonzero count");
        return EVOMAZE_ERR_ARGUMENT;
    }
    let slice = if count == 0 {
        &[]
    } else {
        unsafe { std::slice::from_raw_parts(dims, count) }
    };
    if slice.contains(&0) {
        set_error("hidden layer widths must be positive");
        return EVOMAZE_ERR_CONFIG;
    }
    s.hidden_dims = slice.to_vec();
    EVOMAZE_OK
}

/// Set the number of validation episodes per generation.
#[no_mangle]
pub extern "C" fn evomaze_settings_set_validation_episodes(
    settings: *mut EvomazeSettings,
    episodes: usize,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if episodes == 0 {
        set_error("validation episodes must be positive");
        return EVOMAZE_ERR_CONFIG;
    }
    s.validation_episodes = episodes;
    EVOMAZE_OK
}

/// Stream the trial log to a CSV file at `path` (UTF-8, NUL-terminated)
/// as the trial runs. Pass NULL to disable.
#[no_mangle]
pub extern "C" fn evomaze_settings_set_output_csv(
    settings: *mut EvomazeSettings,
    path: *const c_char,
) -> c_int {
    let Some(s) = (unsafe { settings_mut(settings) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if path.is_null() {
        s.out_path = None;
        return EVOMAZE_OK;
    }
    match unsafe { CStr::from_ptr(path) }.to_str() {
        Ok(p) => {
            s.out_path = Some(PathBuf::from(p));
            EVOMAZE_OK
        }
        Err(_) => {
            set_error("output path is not valid UTF-8");
            EVOMAZE_ERR_ARGUMENT
        }
    }
}

/// Run one full trial. On success writes a result handle to `*result`
/// (release with `evomaze_result_free`) and returns `EVOMAZE_OK`.
#[no_mangle]
pub extern "C" fn evomaze_trial_run(
    settings: *const EvomazeSettings,
    result: *mut *mut EvomazeResult,
) -> c_int {
    if settings.is_null() || result.is_null() {
        set_error("settings or result pointer is NULL");
        return EVOMAZE_ERR_ARGUMENT;
    }
    let settings = unsafe { &(*settings).inner };
    match run_trial(settings) {
        Ok(record) => {
            let handle = Box::into_raw(Box::new(EvomazeResult { inner: record }));
            unsafe { *result = handle };
            EVOMAZE_OK
        }
        Err(e) => {
            set_error(&e);
            unsafe { *result = ptr::null_mut() };
            match e {
                evomaze::Error::InvalidConfig(_) | evomaze::Error::DimensionMismatch { .. } => {
                    EVOMAZE_ERR_CONFIG
                }
                _ => EVOMAZE_ERR_RUN,
            }
        }
    }
}

/// Release a result handle.
#[no_mangle]
pub extern "C" fn evomaze_result_free(result: *mut EvomazeResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}

unsafe fn result_ref<'a>(ptr: *const EvomazeResult) -> Option<&'a TrialRecord> {
    if ptr.is_null() {
        set_error("result handle is NULL");
        None
    } else {
        Some(&(*ptr).inner)
    }
}

/// Number of generations the trial ran. Returns 0 on a NULL handle.
#[no_mangle]
pub extern "C" fn evomaze_result_generations(result: *const EvomazeResult) -> usize {
    unsafe { result_ref(result) }.map_or(0, |r| r.reports.len())
}

/// Best validation score across all generations.
#[no_mangle]
pub extern "C" fn evomaze_result_trial_score(
    result: *const EvomazeResult,
    score: *mut f64,
) -> c_int {
    let Some(r) = (unsafe { result_ref(result) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if score.is_null() {
        set_error("score pointer is NULL");
        return EVOMAZE_ERR_ARGUMENT;
    }
    unsafe { *score = r.trial_score };
    EVOMAZE_OK
}

/// Total training steps consumed by the trial.
#[no_mangle]
pub extern "C" fn evomaze_result_training_steps(
    result: *const EvomazeResult,
    steps: *mut u64,
) -> c_int {
    let Some(r) = (unsafe { result_ref(result) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    if steps.is_null() {
        set_error("steps pointer is NULL");
        return EVOMAZE_ERR_ARGUMENT;
    }
    unsafe { *steps = r.reports.last().map_or(0, |g| g.training_steps_used) };
    EVOMAZE_OK
}

/// Per-generation scalars for generation index `gen` (0-based). Any of the
/// output pointers may be NULL to skip that field.
#[no_mangle]
pub extern "C" fn evomaze_result_generation_stats(
    result: *const EvomazeResult,
    gen: usize,
    elite_fitness: *mut f64,
    gamma: *mut f64,
    validation_score: *mut f64,
    training_steps_used: *mut u64,
) -> c_int {
    let Some(r) = (unsafe { result_ref(result) }) else {
        return EVOMAZE_ERR_ARGUMENT;
    };
    let Some(report) = r.reports.get(gen) else {
        set_error(format!(
            "generation {gen} out of range (trial ran {})",
            r.reports.len()
        ));
        return EVOMAZE_ERR_INDEX;
    };
    unsafe {
        if !elite_fitness.is_null() {
            *elite_fitness = report.elite_fitness;
        }
        if !gamma.is_null() {
            *gamma = report.gamma;
        }
        if !validation_score.is_null() {
            *validation_score = r.validation_scores[gen];
        }
        if !training_steps_used.is_null() {
            *training_steps_used = report.training_steps_used;
        }
    }
    EVOMAZE_OK
}
