//! C ABI for the fockwalk protocol simulator.
//!
//! All functions follow the same conventions: handles are opaque pointers
//! created and destroyed by this library, every fallible call returns an
//! `FwStatus`, and outputs are written through caller-provided pointers.
//! A thread-local message slot holds detail for the most recent error on
//! the calling thread.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::ptr;

use fockwalk::protocol::{run_protocol, stabilization_step, ProtocolParams, StepRecord};

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwStatus {
    /// Success.
    FwOk = 0,
    /// A required pointer argument was null.
    FwNullArgument = 1,
    /// Parameters failed validation, or an index was out of range.
    FwInvalidParameter = 2,
    /// The run tripped the Fock-ladder truncation fault.
    FwTruncation = 3,
    /// The simulation failed for another reason; see fw_last_error.
    FwRunFailure = 4,
}

/// Opaque protocol parameter set.
pub struct FwParams(ProtocolParams);

/// Opaque result of a protocol run: one record per step, step 0 included.
pub struct FwRun(Vec<StepRecord>);

/// Create a parameter set with the library defaults (target n=6 trapping
/// protocol). Free with fw_params_free.
#[no_mangle]
pub extern "C" fn fw_params_new() -> *mut FwParams {
    Box::into_raw(Box::new(FwParams(ProtocolParams::default())))
}

/// Destroy a parameter set. Null is ignored.
///
/// # Safety
/// `p` must be null or a pointer returned by fw_params_new that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn fw_params_free(p: *mut FwParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

macro_rules! setter {
    ($(#[$doc:meta])* $name:ident, $field:ident, $ty:ty) => {
        $(#[$doc])*
        ///
        /// # Safety
        /// `p` must be a valid pointer from fw_params_new.
        #[no_mangle]
        pub unsafe extern "C" fn $name(p: *mut FwParams, value: $ty) -> FwStatus {
            let Some(p) = p.as_mut() else {
                set_error("null params pointer");
                return FwStatus::FwNullArgument;
            };
            p.0.$field = value as _;
            FwStatus::FwOk
        }
    };
}

setter!(
    /// JC coupling rate g, in units of the bare coin decay rate.
    fw_params_set_g, g, f64);
setter!(
    /// Coupling-off detuning, in units of the bare coin decay rate.
    fw_params_set_delta_g, delta_g, f64);
setter!(
    /// Cavity decay rate, in units of the bare coin decay rate.
    fw_params_set_gamma_c, gamma_c, f64);
setter!(
    /// Enhanced coin reset rate, in units of the bare coin decay rate.
    fw_params_set_gamma_sted, gamma_sted, f64);
setter!(
    /// Relative timing-noise standard deviation (0.01 = 1%).
    fw_params_set_sigma_n, sigma_n, f64);
setter!(
    /// Trapping multiple k in g*tau*sqrt(n_T+1) = k*pi.
    fw_params_set_k, k, u32);
setter!(
    /// Fock-ladder truncation (highest represented photon number).
    fw_params_set_n_max, n_max, usize);
setter!(
    /// Number of protocol steps to iterate.
    fw_params_set_steps, steps, usize);
setter!(
    /// Ensemble size; forced to 1 internally when sigma_n is 0.
    fw_params_set_trajectories, trajectories, usize);
setter!(
    /// Master RNG seed; runs are bitwise reproducible for a fixed seed.
    fw_params_set_seed, seed, u64);

/// Set the target Fock number; the truncation is re-derived as n+10.
///
/// # Safety
/// `p` must be a valid pointer from fw_params_new.
#[no_mangle]
pub unsafe extern "C" fn fw_params_set_target(p: *mut FwParams, n_target: usize) -> FwStatus {
    let Some(p) = p.as_mut() else {
        set_error("null params pointer");
        return FwStatus::FwNullArgument;
    };
    p.0.n_target = n_target;
    p.0.n_max = n_target + 10;
    FwStatus::FwOk
}

/// Set the decay-phase duration in units of 1/gamma. Values <= 0 restore
/// the default 5/gamma_sted.
///
/// # Safety
/// `p` must be a valid pointer from fw_params_new.
#[no_mangle]
pub unsafe extern "C" fn fw_params_set_tau_gamma(p: *mut FwParams, tau: f64) -> FwStatus {
    let Some(p) = p.as_mut() else {
        set_error("null params pointer");
        return FwStatus::FwNullArgument;
    };
    p.0.tau_gamma = if tau > 0.0 { Some(tau) } else { None };
    FwStatus::FwOk
}

/// Run the protocol. On success writes a run handle to `out`; free it with
/// fw_run_free.
///
/// # Safety
/// `p` must be a valid pointer from fw_params_new and `out` a valid
/// location for one pointer.
#[no_mangle]
pub unsafe extern "C" fn fw_run(p: *const FwParams, out: *mut *mut FwRun) -> FwStatus {
    if out.is_null() {
        set_error("null output pointer");
        return FwStatus::FwNullArgument;
    }
    *out = ptr::null_mut();
    let Some(p) = p.as_ref() else {
        set_error("null params pointer");
        return FwStatus::FwNullArgument;
    };
    match run_protocol(&p.0) {
        Ok(records) => {
            *out = Box::into_raw(Box::new(FwRun(records)));
            FwStatus::FwOk
        }
        Err(e) => {
            set_error(e.to_string());
            match e {
                fockwalk::Error::Truncation { .. } => FwStatus::FwTruncation,
                fockwalk::Error::InvalidParameter(_) => FwStatus::FwInvalidParameter,
                _ => FwStatus::FwRunFailure,
            }
        }
    }
}

/// Destroy a run handle. Null is ignored.
///
/// # Safety
/// `r` must be null or a pointer produced by fw_run that has not been
/// freed already.
#[no_mangle]
pub unsafe extern "C" fn fw_run_free(r: *mut FwRun) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of records in the run (steps + 1; step 0 is the initial state).
///
/// # Safety
/// `r` must be a valid pointer from fw_run; null returns 0.
#[no_mangle]
pub unsafe extern "C" fn fw_run_len(r: *const FwRun) -> usize {
    r.as_ref().map_or(0, |r| r.0.len())
}

unsafe fn record_scalar(
    r: *const FwRun,
    step: usize,
    out: *mut f64,
    pick: impl Fn(&StepRecord) -> f64,
) -> FwStatus {
    if out.is_null() {
        set_error("null output pointer");
        return FwStatus::FwNullArgument;
    }
    let Some(r) = r.as_ref() else {
        set_error("null run pointer");
        return FwStatus::FwNullArgument;
    };
    let Some(rec) = r.0.get(step) else {
        set_error(format!("step {step} out of range ({} records)", r.0.len()));
        return FwStatus::FwInvalidParameter;
    };
    *out = pick(rec);
    FwStatus::FwOk
}

/// Fidelity to the target Fock state at the given step.
///
/// # Safety
/// `r` from fw_run; `out` a valid location for one double.
#[no_mangle]
pub unsafe extern "C" fn fw_run_fidelity(r: *const FwRun, step: usize, out: *mut f64) -> FwStatus {
    record_scalar(r, step, out, |rec| rec.fidelity)
}

/// Ensemble standard deviation of the per-trajectory fidelity.
///
/// # Safety
/// `r` from fw_run; `out` a valid location for one double.
#[no_mangle]
pub unsafe extern "C" fn fw_run_fidelity_std(
    r: *const FwRun,
    step: usize,
    out: *mut f64,
) -> FwStatus {
    record_scalar(r, step, out, |rec| rec.fidelity_std)
}

/// Population above the target Fock number (broken-trapping signature).
///
/// # Safety
/// `r` from fw_run; `out` a valid location for one double.
#[no_mangle]
pub unsafe extern "C" fn fw_run_leak(r: *const FwRun, step: usize, out: *mut f64) -> FwStatus {
    record_scalar(r, step, out, |rec| rec.leak)
}

/// Total excited-coin population at the given step.
///
/// # Safety
/// `r` from fw_run; `out` a valid location for one double.
#[no_mangle]
pub unsafe extern "C" fn fw_run_coin_excited(
    r: *const FwRun,
    step: usize,
    out: *mut f64,
) -> FwStatus {
    record_scalar(r, step, out, |rec| rec.coin_excited)
}

/// Copy the walker's photon-number distribution at `step` into `buf`
/// (capacity `len` doubles) and write the number of populated entries to
/// `written`. The distribution has n_max + 1 entries; larger buffers are
/// left untouched past the end.
///
/// # Safety
/// `r` from fw_run; `buf` valid for `len` doubles; `written` a valid
/// location for one usize.
#[no_mangle]
pub unsafe extern "C" fn fw_run_populations(
    r: *const FwRun,
    step: usize,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> FwStatus {
    if buf.is_null() || written.is_null() {
        set_error("null output pointer");
        return FwStatus::FwNullArgument;
    }
    let Some(r) = r.as_ref() else {
        set_error("null run pointer");
        return FwStatus::FwNullArgument;
    };
    let Some(rec) = r.0.get(step) else {
        set_error(format!("step {step} out of range ({} records)", r.0.len()));
        return FwStatus::FwInvalidParameter;
    };
    let n = rec.populations.len().min(len);
    ptr::copy_nonoverlapping(rec.populations.as_ptr(), buf, n);
    *written = n;
    FwStatus::FwOk
}

/// First step where the fidelity spread over an 11-step window drops below
/// 0.005, or -1 if the run never stabilizes.
///
/// # Safety
/// `r` must be a valid pointer from fw_run; null returns -1.
#[no_mangle]
pub unsafe extern "C" fn fw_run_stabilization_step(r: *const FwRun) -> i64 {
    r.as_ref()
        .and_then(|r| stabilization_step(&r.0))
        .map_or(-1, |s| s as i64)
}

/// Copy the most recent error message on this thread into `buf` (capacity
/// `len` bytes, always NUL-terminated when len > 0). Returns the full
/// message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be valid for `len` bytes, or null (then only the length is
/// returned).
#[no_mangle]
pub unsafe extern "C" fn fw_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_run() {
        unsafe {
            let p = fw_params_new();
            assert_eq!(fw_params_set_target(p, 3), FwStatus::FwOk);
            assert_eq!(fw_params_set_steps(p, 8), FwStatus::FwOk);
            assert_eq!(fw_params_set_gamma_c(p, 0.0), FwStatus::FwOk);

            let mut run: *mut FwRun = ptr::null_mut();
            assert_eq!(fw_run(p, &mut run), FwStatus::FwOk);
            assert_eq!(fw_run_len(run), 9);

            let mut fid = -1.0;
            assert_eq!(fw_run_fidelity(run, 0, &mut fid), FwStatus::FwOk);
            assert_eq!(fid, 0.0);
            assert_eq!(fw_run_fidelity(run, 8, &mut fid), FwStatus::FwOk);
            assert!(fid > 0.5 && fid <= 1.0);

            let mut buf = vec![0.0f64; 32];
            let mut written = 0usize;
            assert_eq!(
                fw_run_populations(run, 8, buf.as_mut_ptr(), buf.len(), &mut written),
                FwStatus::FwOk
            );
            assert_eq!(written, 14);
            let total: f64 = buf[..written].iter().sum();
            assert!((total - 1.0).abs() < 1e-8);

            fw_run_free(run);
            fw_params_free(p);
        }
    }

    #[test]
    fn error_paths() {
        unsafe {
            let mut run: *mut FwRun = ptr::null_mut();
            assert_eq!(fw_run(ptr::null(), &mut run), FwStatus::FwNullArgument);
            assert!(run.is_null());

            // n_max too close to the target fails validation
            let p = fw_params_new();
            fw_params_set_target(p, 6);
            assert_eq!(fw_params_set_n_max(p, 7), FwStatus::FwOk);
            assert_eq!(fw_run(p, &mut run), FwStatus::FwInvalidParameter);
            let mut msg = vec![0i8; 128];
            let n = fw_last_error(msg.as_mut_ptr() as *mut c_char, msg.len());
            assert!(n > 0);
            fw_params_free(p);

            let mut fid = 0.0;
            assert_eq!(
                fw_run_fidelity(ptr::null(), 0, &mut fid),
                FwStatus::FwNullArgument
            );
        }
    }

    #[test]
    fn seeded_runs_bitwise_equal_via_ffi() {
        unsafe {
            let p = fw_params_new();
            fw_params_set_target(p, 3);
            fw_params_set_steps(p, 6);
            fw_params_set_sigma_n(p, 0.01);
            fw_params_set_trajectories(p, 4);
            fw_params_set_n_max(p, 13);

            let collect = |p: *const FwParams| -> Vec<f64> {
                let mut run: *mut FwRun = ptr::null_mut();
                assert_eq!(fw_run(p, &mut run), FwStatus::FwOk);
                let mut out = Vec::new();
                for s in 0..fw_run_len(run) {
                    let mut v = 0.0;
                    fw_run_fidelity(run, s, &mut v);
                    out.push(v);
                    fw_run_leak(run, s, &mut v);
                    out.push(v);
                }
                fw_run_free(run);
                out
            };
            let a = collect(p);
            let b = collect(p);
            assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
            fw_params_free(p);
        }
    }
}
