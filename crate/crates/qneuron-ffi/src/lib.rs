//! C ABI for the qneuron toolkit.
//!
//! Conventions: every function returns a [`QnStatus`] code and writes results
//! through out-pointers; handles are opaque and must be released with their
//! matching `*_free` function. Passing a null pointer where a value is
//! expected yields `QN_STATUS_NULL_POINTER`, never undefined behavior. The
//! generated header lives in `include/qneuron.h`.

use std::ffi::{c_char, CStr};

use qneuron::ansatz::{parse_structure, AnsatzSpec, Entangler};
use qneuron::encoding::{build_uw_circuit, expand_to_decomposed, BinaryPattern};
use qneuron::error::Error;
use qneuron::neuron::{
    ancilla_activation, circuit_activation_probability, classical_activation_probability,
    NeuronConfig,
};
use qneuron::training::{
    best_result, train_restarts, CostEstimator, NelderMeadOptions, OptimizerConfig, SpsaOptions,
    TrainingResult,
};

/// Result code of every API call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    DomainError = 4,
    IndexError = 5,
    ConfigError = 6,
    ParseError = 7,
    BufferTooSmall = 8,
    InvalidUtf8 = 9,
    InternalError = 10,
}

/// Training scheme selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QnMode {
    Global = 0,
    Local = 1,
}

/// Entangling cycle selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QnEntangler {
    AllToAll = 0,
    NearestNeighbour = 1,
}

/// Optimizer selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QnOptimizer {
    NelderMead = 0,
    Spsa = 1,
}

/// Opaque handle to a ±1 pattern.
pub struct QnPattern(BinaryPattern);

/// Opaque handle to a finished training run.
pub struct QnTrainingResult(TrainingResult);

fn status_of(err: &Error) -> QnStatus {
    match err {
        Error::Size(_) | Error::Argument(_) => QnStatus::InvalidArgument,
        Error::Index(_) => QnStatus::IndexError,
        Error::Dimension(_) => QnStatus::DimensionMismatch,
        Error::Domain(_) => QnStatus::DomainError,
        Error::Config(_) => QnStatus::ConfigError,
        Error::Parse(_) => QnStatus::ParseError,
        Error::Io(_) | Error::Json(_) => QnStatus::InternalError,
    }
}

impl From<QnEntangler> for Entangler {
    fn from(value: QnEntangler) -> Entangler {
        match value {
            QnEntangler::AllToAll => Entangler::AllToAll,
            QnEntangler::NearestNeighbour => Entangler::NearestNeighbour,
        }
    }
}

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => return QnStatus::NullPointer,
        }
    };
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => return status_of(&e),
        }
    };
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a pattern of length `m` from its integer label.
///
/// # Safety
/// `out` must be a valid pointer to a `QnPattern*`.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_from_label(
    label: u64,
    m: usize,
    out: *mut *mut QnPattern,
) -> QnStatus {
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    let pattern = try_ffi!(BinaryPattern::from_label(label, m));
    unsafe { *out = Box::into_raw(Box::new(QnPattern(pattern))) };
    QnStatus::Ok
}

/// Parses a pattern from a NUL-terminated string: `k:<int>` or a ±-string of
/// length `m`.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_parse(
    text: *const c_char,
    m: usize,
    out: *mut *mut QnPattern,
) -> QnStatus {
    if text.is_null() || out.is_null() {
        return QnStatus::NullPointer;
    }
    let Ok(text) = unsafe { CStr::from_ptr(text) }.to_str() else {
        return QnStatus::InvalidUtf8;
    };
    let pattern = try_ffi!(BinaryPattern::parse(text, m));
    unsafe { *out = Box::into_raw(Box::new(QnPattern(pattern))) };
    QnStatus::Ok
}

/// Number of entries of the pattern.
///
/// # Safety
/// `pattern` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_len(pattern: *const QnPattern, out: *mut usize) -> QnStatus {
    let pattern = nonnull!(pattern);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = pattern.0.len() };
    QnStatus::Ok
}

/// Integer label of the pattern.
///
/// # Safety
/// `pattern` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_label(pattern: *const QnPattern, out: *mut u64) -> QnStatus {
    let pattern = nonnull!(pattern);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = try_ffi!(pattern.0.label()) };
    QnStatus::Ok
}

/// Copies the ±1 entries into `buf` (capacity `buf_len` entries).
///
/// # Safety
/// `buf` must point to at least `buf_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_entries(
    pattern: *const QnPattern,
    buf: *mut i8,
    buf_len: usize,
) -> QnStatus {
    let pattern = nonnull!(pattern);
    if buf.is_null() {
        return QnStatus::NullPointer;
    }
    if buf_len < pattern.0.len() {
        return QnStatus::BufferTooSmall;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, pattern.0.len()) };
    slice.copy_from_slice(pattern.0.entries());
    QnStatus::Ok
}

/// Releases a pattern handle; accepts null.
///
/// # Safety
/// `pattern` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qn_pattern_free(pattern: *mut QnPattern) {
    if !pattern.is_null() {
        drop(unsafe { Box::from_raw(pattern) });
    }
}

/// Copies the real amplitudes of the encoded pattern state (entry_j / √m)
/// into `buf` (capacity `buf_len` doubles).
///
/// # Safety
/// `buf` must point to at least `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qn_encode_amplitudes(
    pattern: *const QnPattern,
    buf: *mut f64,
    buf_len: usize,
) -> QnStatus {
    let pattern = nonnull!(pattern);
    if buf.is_null() {
        return QnStatus::NullPointer;
    }
    if buf_len < pattern.0.len() {
        return QnStatus::BufferTooSmall;
    }
    let state = pattern.0.encode();
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, pattern.0.len()) };
    for (dst, amp) in slice.iter_mut().zip(state.amplitudes()) {
        *dst = amp.re;
    }
    QnStatus::Ok
}

/// Exact activation probability (i⃗·w⃗ / m)².
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_classical_activation(
    input: *const QnPattern,
    weights: *const QnPattern,
    out: *mut f64,
) -> QnStatus {
    let input = nonnull!(input);
    let weights = nonnull!(weights);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = try_ffi!(classical_activation_probability(&input.0, &weights.0)) };
    QnStatus::Ok
}

/// Activation probability through the exact hypergraph circuit.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_exact_activation(
    input: *const QnPattern,
    weights: *const QnPattern,
    out: *mut f64,
) -> QnStatus {
    let input = nonnull!(input);
    let weights = nonnull!(weights);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    let cfg = NeuronConfig::exact(weights.0.clone());
    unsafe { *out = try_ffi!(circuit_activation_probability(&input.0, &cfg)) };
    QnStatus::Ok
}

/// Activation estimated from `shots` seeded measurements of the ancilla
/// synapse.
///
/// # Safety
/// Both handles must be live and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_ancilla_activation(
    input: *const QnPattern,
    weights: *const QnPattern,
    shots: u64,
    seed: u64,
    out: *mut f64,
) -> QnStatus {
    let input = nonnull!(input);
    let weights = nonnull!(weights);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    let cfg = NeuronConfig::exact(weights.0.clone()).with_ancilla();
    unsafe { *out = try_ffi!(ancilla_activation(&input.0, &cfg, shots, seed)) };
    QnStatus::Ok
}

/// Depth of the exact weight unitary, optionally after decomposing every
/// multi-controlled gate into CNOTs and single-qubit rotations.
///
/// # Safety
/// `weights` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_exact_uw_depth(
    weights: *const QnPattern,
    decomposed: bool,
    out: *mut usize,
) -> QnStatus {
    let weights = nonnull!(weights);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    let circuit = build_uw_circuit(&weights.0);
    let depth = if decomposed {
        try_ffi!(expand_to_decomposed(&circuit)).depth()
    } else {
        circuit.depth()
    };
    unsafe { *out = depth };
    QnStatus::Ok
}

/// Trains a variational weight unitary and returns the best of `restarts`
/// runs. `cycles` configures the global mode; `structure` (e.g. "321") the
/// local mode and may be null otherwise. `shots` = 0 selects the exact cost
/// estimator. `max_iter` = 0 keeps the optimizer default.
///
/// # Safety
/// `weights` must be a live handle, `structure` null or NUL-terminated, and
/// `out` a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn qn_train(
    weights: *const QnPattern,
    mode: QnMode,
    entangler: QnEntangler,
    cycles: usize,
    structure: *const c_char,
    optimizer: QnOptimizer,
    shots: u64,
    max_iter: usize,
    seed: u64,
    restarts: usize,
    out: *mut *mut QnTrainingResult,
) -> QnStatus {
    let weights = nonnull!(weights);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    let n = weights.0.n_qubits();
    let spec = match mode {
        QnMode::Global => AnsatzSpec::Global {
            n_qubits: n,
            entangler: entangler.into(),
            cycles,
        },
        QnMode::Local => {
            if structure.is_null() {
                return QnStatus::NullPointer;
            }
            let Ok(text) = unsafe { CStr::from_ptr(structure) }.to_str() else {
                return QnStatus::InvalidUtf8;
            };
            AnsatzSpec::Local {
                n_qubits: n,
                entangler: entangler.into(),
                structure: try_ffi!(parse_structure(text)),
            }
        }
    };
    let estimator = if shots == 0 {
        CostEstimator::Exact
    } else {
        CostEstimator::Shots { shots, seed: 0 }
    };
    let optimizer = match optimizer {
        QnOptimizer::NelderMead => OptimizerConfig::NelderMead {
            options: NelderMeadOptions {
                max_iter: if max_iter == 0 {
                    NelderMeadOptions::default().max_iter
                } else {
                    max_iter
                },
                ..NelderMeadOptions::default()
            },
            polish_rounds: 2,
        },
        QnOptimizer::Spsa => OptimizerConfig::Spsa(SpsaOptions {
            max_iter: if max_iter == 0 {
                SpsaOptions::default().max_iter
            } else {
                max_iter
            },
            ..SpsaOptions::default()
        }),
    };
    let runs = try_ffi!(train_restarts(
        &spec,
        &weights.0.encode(),
        &optimizer,
        &estimator,
        seed,
        restarts
    ));
    let best = best_result(&runs).clone();
    unsafe { *out = Box::into_raw(Box::new(QnTrainingResult(best))) };
    QnStatus::Ok
}

/// Exact fidelity of the trained circuit.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_fidelity(
    result: *const QnTrainingResult,
    out: *mut f64,
) -> QnStatus {
    let result = nonnull!(result);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = result.0.final_fidelity };
    QnStatus::Ok
}

/// Total optimizer iterations of the run.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_iterations(
    result: *const QnTrainingResult,
    out: *mut usize,
) -> QnStatus {
    let result = nonnull!(result);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = result.0.iterations };
    QnStatus::Ok
}

/// Whether the optimizer met its convergence test within the budget.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_converged(
    result: *const QnTrainingResult,
    out: *mut bool,
) -> QnStatus {
    let result = nonnull!(result);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = result.0.converged };
    QnStatus::Ok
}

/// Length of the per-iteration cost trace.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qn_result_trace_len(
    result: *const QnTrainingResult,
    out: *mut usize,
) -> QnStatus {
    let result = nonnull!(result);
    if out.is_null() {
        return QnStatus::NullPointer;
    }
    unsafe { *out = result.0.cost_trace.len() };
    QnStatus::Ok
}

/// Copies the cost trace into `buf` (capacity `buf_len` doubles).
///
/// # Safety
/// `buf` must point to at least `buf_len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qn_result_trace(
    result: *const QnTrainingResult,
    buf: *mut f64,
    buf_len: usize,
) -> QnStatus {
    let result = nonnull!(result);
    if buf.is_null() {
        return QnStatus::NullPointer;
    }
    if buf_len < result.0.cost_trace.len() {
        return QnStatus::BufferTooSmall;
    }
    let slice = unsafe { std::slice::from_raw_parts_mut(buf, result.0.cost_trace.len()) };
    slice.copy_from_slice(&result.0.cost_trace);
    QnStatus::Ok
}

/// Releases a training-result handle; accepts null.
///
/// # Safety
/// `result` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qn_result_free(result: *mut QnTrainingResult) {
    if !result.is_null() {
        drop(unsafe { Box::from_raw(result) });
    }
}
