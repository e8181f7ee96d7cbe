//! C ABI for `qdt`.
//!
//! Objects cross the boundary as opaque handles created by a `*_new`,
//! `*_parse`, `*_generate` or similar call and released with the matching
//! `*_free`. Every fallible call returns a [`QdtStatus`]; on failure
//! [`qdt_last_error_message`] describes the problem. Strings returned through
//! `char **` out-parameters are owned by the caller and released with
//! [`qdt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdt::cat_environment::{generate_history, CatHistory, EnvConfig};
use qdt::decision_tree::{
    decide, enumerate_strategies, parse, strategy_count, value_operator_of, Action, QdtExpr,
    Strategy,
};
use qdt::experiments::{
    read_history_csv, simulate_decisions, write_decisions_csv, write_generations_csv,
    write_history_csv, HistoryCsvError,
};
use qdt::gate_algebra::{gate_matrix, value_operator, Complex, Gate, Mat2};
use qdt::genetic_program::{evolve, fitness, Evolution, FitnessMode, GpConfig};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    Overflow = 4,
    InvalidArgument = 5,
    Io = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdtGate {
    H = 0,
    X = 1,
    Y = 2,
    Z = 3,
    S = 4,
    D = 5,
    T = 6,
    I = 7,
}

impl From<QdtGate> for Gate {
    fn from(g: QdtGate) -> Gate {
        match g {
            QdtGate::H => Gate::H,
            QdtGate::X => Gate::X,
            QdtGate::Y => Gate::Y,
            QdtGate::Z => Gate::Z,
            QdtGate::S => Gate::S,
            QdtGate::D => Gate::D,
            QdtGate::T => Gate::T,
            QdtGate::I => Gate::I,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdtAction {
    BelieveAlive = 1,
    BelieveDead = 2,
}

impl From<Action> for QdtAction {
    fn from(a: Action) -> Self {
        match a {
            Action::A1BelieveAlive => QdtAction::BelieveAlive,
            Action::A2BelieveDead => QdtAction::BelieveDead,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QdtFitnessMode {
    Expected = 0,
    Sampled = 1,
}

impl From<QdtFitnessMode> for FitnessMode {
    fn from(m: QdtFitnessMode) -> Self {
        match m {
            QdtFitnessMode::Expected => FitnessMode::Expected,
            QdtFitnessMode::Sampled => FitnessMode::Sampled,
        }
    }
}

/// A parsed decision tree.
pub struct QdtTree(QdtExpr);

/// A measurement history.
pub struct QdtHistory(CatHistory);

/// A seeded ChaCha8 random stream.
pub struct QdtRng(ChaCha8Rng);

/// Enumerated strategies of a tree.
pub struct QdtStrategyList(Vec<(Strategy, f64, f64)>);

/// Result of a genetic programming run.
pub struct QdtEvolution(Evolution);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QdtStrategyInfo {
    pub id: u64,
    pub weight: f64,
    pub p1: f64,
    pub p2: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QdtDecision {
    pub action: QdtAction,
    /// Probability of the chosen action.
    pub belief: f64,
    pub strategy_id: u64,
    pub p1: f64,
    pub p2: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QdtRecord {
    pub k: u64,
    /// 1 when the atom decayed (cat dead).
    pub decayed: u8,
    pub x: i64,
    pub v: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QdtGpConfig {
    pub population_size: usize,
    pub generations: usize,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub min_depth: usize,
    pub max_depth: usize,
    pub elitism: usize,
    pub strategy_cap: usize,
    pub fitness_mode: QdtFitnessMode,
    /// Nonzero weights records by empirical state frequency.
    pub use_omega: u8,
    pub seed: u64,
}

impl From<&QdtGpConfig> for GpConfig {
    fn from(c: &QdtGpConfig) -> Self {
        GpConfig {
            population_size: c.population_size,
            generations: c.generations,
            crossover_probability: c.crossover_probability,
            mutation_probability: c.mutation_probability,
            min_depth: c.min_depth,
            max_depth: c.max_depth,
            elitism: c.elitism,
            strategy_cap: c.strategy_cap,
            fitness_mode: c.fitness_mode.into(),
            use_omega: c.use_omega != 0,
            seed: c.seed,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QdtGenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QdtRunReport {
    pub n: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub total_value: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct FfiError {
    status: QdtStatus,
    message: String,
}

impl FfiError {
    fn new(status: QdtStatus, message: impl Into<String>) -> Self {
        FfiError {
            status,
            message: message.into(),
        }
    }

    fn null(what: &str) -> Self {
        FfiError::new(QdtStatus::NullPointer, format!("{what} is null"))
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), FfiError>) -> QdtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            QdtStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.message);
            e.status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            QdtStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, FfiError> {
    p.as_ref().ok_or_else(|| FfiError::null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, FfiError> {
    p.as_mut().ok_or_else(|| FfiError::null(what))
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FfiError> {
    if p.is_null() {
        return Err(FfiError::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| FfiError::new(QdtStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), FfiError> {
    if out.is_null() {
        return Err(FfiError::null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: &str) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

fn io_error(path: &str, e: impl std::fmt::Display) -> FfiError {
    FfiError::new(QdtStatus::Io, format!("{path}: {e}"))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next `qdt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qdt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn qdt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes the gate's matrix as eight doubles: re/im pairs of m11, m12, m21, m22.
///
/// # Safety
/// `out` must point to 8 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn qdt_gate_matrix(gate: QdtGate, out: *mut f64) -> QdtStatus {
    guard(|| {
        if out.is_null() {
            return Err(FfiError::null("out"));
        }
        let m = gate_matrix(gate.into());
        let out = std::slice::from_raw_parts_mut(out, 8);
        for (i, z) in m.entries().iter().enumerate() {
            out[2 * i] = z.re;
            out[2 * i + 1] = z.im;
        }
        Ok(())
    })
}

/// Beliefs `(p1, p2)` of an arbitrary matrix given as eight doubles in the
/// layout of [`qdt_gate_matrix`].
///
/// # Safety
/// `m` must point to 8 readable doubles; `p1`, `p2` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_matrix_beliefs(
    m: *const f64,
    p1: *mut f64,
    p2: *mut f64,
) -> QdtStatus {
    guard(|| {
        if m.is_null() {
            return Err(FfiError::null("m"));
        }
        let m = std::slice::from_raw_parts(m, 8);
        let z = |i: usize| Complex::new(m[2 * i], m[2 * i + 1]);
        let vo = value_operator(&Mat2::new(z(0), z(1), z(2), z(3)));
        put(p1, vo.p1, "p1")?;
        put(p2, vo.p2, "p2")
    })
}

/// Parses tree text. On a parse error the message names the position.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_parse(text: *const c_char, out: *mut *mut QdtTree) -> QdtStatus {
    guard(|| {
        let s = c_str(text, "text")?;
        let e = parse(s).map_err(|e| FfiError::new(QdtStatus::ParseError, e.to_string()))?;
        put(out, Box::into_raw(Box::new(QdtTree(e))), "out")
    })
}

/// # Safety
/// `tree` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_free(tree: *mut QdtTree) {
    if !tree.is_null() {
        drop(Box::from_raw(tree));
    }
}

/// Canonical fully parenthesized text. Free with [`qdt_string_free`].
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_to_text(
    tree: *const QdtTree,
    out: *mut *mut c_char,
) -> QdtStatus {
    guard(|| {
        let t = borrow(tree, "tree")?;
        put(out, owned_string(&t.0.to_text()), "out")
    })
}

/// Depth of the tree, 0 for a null handle.
///
/// # Safety
/// `tree` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_depth(tree: *const QdtTree) -> usize {
    tree.as_ref().map_or(0, |t| t.0.depth())
}

/// Number of strategies, saturating at `UINT64_MAX`; 0 for a null handle.
///
/// # Safety
/// `tree` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_strategy_count(tree: *const QdtTree) -> u64 {
    tree.as_ref().map_or(0, |t| strategy_count(&t.0))
}

/// Enumerates strategies, failing with `Overflow` when there are more than `cap`.
///
/// # Safety
/// `tree` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_tree_enumerate(
    tree: *const QdtTree,
    cap: usize,
    out: *mut *mut QdtStrategyList,
) -> QdtStatus {
    guard(|| {
        let t = borrow(tree, "tree")?;
        if cap == 0 {
            return Err(FfiError::new(
                QdtStatus::InvalidArgument,
                "cap must be at least 1",
            ));
        }
        let list = enumerate_strategies(&t.0, cap)
            .map_err(|e| FfiError::new(QdtStatus::Overflow, e.to_string()))?
            .into_iter()
            .map(|s| {
                let vo = value_operator_of(&s);
                (s, vo.p1, vo.p2)
            })
            .collect();
        put(out, Box::into_raw(Box::new(QdtStrategyList(list))), "out")
    })
}

/// # Safety
/// `list` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_strategy_list_len(list: *const QdtStrategyList) -> usize {
    list.as_ref().map_or(0, |l| l.0.len())
}

/// # Safety
/// `list` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_strategy_list_get(
    list: *const QdtStrategyList,
    index: usize,
    out: *mut QdtStrategyInfo,
) -> QdtStatus {
    guard(|| {
        let l = borrow(list, "list")?;
        let (s, p1, p2) = l.0.get(index).ok_or_else(|| {
            FfiError::new(
                QdtStatus::OutOfRange,
                format!("index {index} of {}", l.0.len()),
            )
        })?;
        put(
            out,
            QdtStrategyInfo {
                id: s.id,
                weight: s.weight,
                p1: *p1,
                p2: *p2,
            },
            "out",
        )
    })
}

/// Text of strategy `index`. Free with [`qdt_string_free`].
///
/// # Safety
/// `list` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_strategy_list_text(
    list: *const QdtStrategyList,
    index: usize,
    out: *mut *mut c_char,
) -> QdtStatus {
    guard(|| {
        let l = borrow(list, "list")?;
        let (s, _, _) = l.0.get(index).ok_or_else(|| {
            FfiError::new(
                QdtStatus::OutOfRange,
                format!("index {index} of {}", l.0.len()),
            )
        })?;
        put(out, owned_string(&s.expr.to_text()), "out")
    })
}

/// # Safety
/// `list` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdt_strategy_list_free(list: *mut QdtStrategyList) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

#[no_mangle]
pub extern "C" fn qdt_rng_new(seed: u64) -> *mut QdtRng {
    Box::into_raw(Box::new(QdtRng(ChaCha8Rng::seed_from_u64(seed))))
}

/// # Safety
/// `rng` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdt_rng_free(rng: *mut QdtRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// Samples a strategy and an action from it.
///
/// # Safety
/// `tree` and `rng` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_decide(
    tree: *const QdtTree,
    rng: *mut QdtRng,
    out: *mut QdtDecision,
) -> QdtStatus {
    guard(|| {
        let t = borrow(tree, "tree")?;
        let r = borrow_mut(rng, "rng")?;
        let d = decide(&t.0, &mut r.0);
        put(
            out,
            QdtDecision {
                action: d.action.into(),
                belief: d.belief,
                strategy_id: d.strategy_id,
                p1: d.value_operator.p1,
                p2: d.value_operator.p2,
            },
            "out",
        )
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_generate(
    n: usize,
    decay_probability: f64,
    seed: u64,
    out: *mut *mut QdtHistory,
) -> QdtStatus {
    guard(|| {
        let h = generate_history(&EnvConfig {
            n,
            decay_probability,
            seed,
        })
        .map_err(|e| FfiError::new(QdtStatus::InvalidArgument, e.to_string()))?;
        put(out, Box::into_raw(Box::new(QdtHistory(h))), "out")
    })
}

/// Builds a history from `n` decay flags (nonzero = decayed).
///
/// # Safety
/// `decays` must point to `n` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_from_decays(
    decays: *const u8,
    n: usize,
    out: *mut *mut QdtHistory,
) -> QdtStatus {
    guard(|| {
        if decays.is_null() {
            return Err(FfiError::null("decays"));
        }
        if n == 0 {
            return Err(FfiError::new(
                QdtStatus::InvalidArgument,
                "n must be at least 1",
            ));
        }
        let flags: Vec<bool> = std::slice::from_raw_parts(decays, n)
            .iter()
            .map(|&b| b != 0)
            .collect();
        put(
            out,
            Box::into_raw(Box::new(QdtHistory(CatHistory::from_decays(&flags)))),
            "out",
        )
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_read_csv(
    path: *const c_char,
    out: *mut *mut QdtHistory,
) -> QdtStatus {
    guard(|| {
        let p = c_str(path, "path")?;
        let f = File::open(p).map_err(|e| io_error(p, e))?;
        let h = read_history_csv(BufReader::new(f)).map_err(|e| match e {
            HistoryCsvError::Io(e) => io_error(p, e),
            other => FfiError::new(QdtStatus::ParseError, format!("{p}: {other}")),
        })?;
        put(out, Box::into_raw(Box::new(QdtHistory(h))), "out")
    })
}

/// # Safety
/// `history` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_write_csv(
    history: *const QdtHistory,
    path: *const c_char,
) -> QdtStatus {
    guard(|| {
        let h = borrow(history, "history")?;
        let p = c_str(path, "path")?;
        let mut w = BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?);
        write_history_csv(&h.0, &mut w).map_err(|e| io_error(p, e))?;
        w.flush().map_err(|e| io_error(p, e))
    })
}

/// # Safety
/// `history` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_len(history: *const QdtHistory) -> usize {
    history.as_ref().map_or(0, |h| h.0.len())
}

/// # Safety
/// `history` must be a live handle; `omega1`, `omega2` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_frequencies(
    history: *const QdtHistory,
    omega1: *mut f64,
    omega2: *mut f64,
) -> QdtStatus {
    guard(|| {
        let (o1, o2) = borrow(history, "history")?.0.frequencies();
        put(omega1, o1, "omega1")?;
        put(omega2, o2, "omega2")
    })
}

/// Record `index` (0-based).
///
/// # Safety
/// `history` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_record(
    history: *const QdtHistory,
    index: usize,
    out: *mut QdtRecord,
) -> QdtStatus {
    guard(|| {
        let h = &borrow(history, "history")?.0;
        let r = h.records().get(index).ok_or_else(|| {
            FfiError::new(
                QdtStatus::OutOfRange,
                format!("index {index} of {}", h.len()),
            )
        })?;
        put(
            out,
            QdtRecord {
                k: r.k as u64,
                decayed: (!r.state.is_alive()) as u8,
                x: r.x,
                v: r.v,
            },
            "out",
        )
    })
}

/// # Safety
/// `history` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdt_history_free(history: *mut QdtHistory) {
    if !history.is_null() {
        drop(Box::from_raw(history));
    }
}

/// Fitness of `tree` on `history`, weighting records by state frequency.
/// `rng` is only drawn from in sampled mode or when enumeration overflows.
///
/// # Safety
/// `tree`, `history`, `rng` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_fitness(
    tree: *const QdtTree,
    history: *const QdtHistory,
    mode: QdtFitnessMode,
    cap: usize,
    rng: *mut QdtRng,
    out: *mut f64,
) -> QdtStatus {
    guard(|| {
        let t = borrow(tree, "tree")?;
        let h = borrow(history, "history")?;
        let r = borrow_mut(rng, "rng")?;
        if cap == 0 {
            return Err(FfiError::new(
                QdtStatus::InvalidArgument,
                "cap must be at least 1",
            ));
        }
        if h.0.is_empty() {
            return Err(FfiError::new(
                QdtStatus::InvalidArgument,
                "history is empty",
            ));
        }
        put(out, fitness(&t.0, &h.0, mode.into(), cap, &mut r.0), "out")
    })
}

#[no_mangle]
pub extern "C" fn qdt_gp_config_default() -> QdtGpConfig {
    let d = GpConfig::default();
    QdtGpConfig {
        population_size: d.population_size,
        generations: d.generations,
        crossover_probability: d.crossover_probability,
        mutation_probability: d.mutation_probability,
        min_depth: d.min_depth,
        max_depth: d.max_depth,
        elitism: d.elitism,
        strategy_cap: d.strategy_cap,
        fitness_mode: QdtFitnessMode::Expected,
        use_omega: d.use_omega as u8,
        seed: d.seed,
    }
}

/// # Safety
/// `config` and `history` must be valid; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolve(
    config: *const QdtGpConfig,
    history: *const QdtHistory,
    out: *mut *mut QdtEvolution,
) -> QdtStatus {
    guard(|| {
        let cfg = GpConfig::from(borrow(config, "config")?);
        let h = borrow(history, "history")?;
        let run = evolve(&cfg, &h.0)
            .map_err(|e| FfiError::new(QdtStatus::InvalidArgument, e.to_string()))?;
        put(out, Box::into_raw(Box::new(QdtEvolution(run))), "out")
    })
}

/// # Safety
/// `evolution` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_best_fitness(evolution: *const QdtEvolution) -> f64 {
    evolution.as_ref().map_or(f64::NAN, |e| e.0.best.fitness)
}

/// Copy of the best tree as a new handle.
///
/// # Safety
/// `evolution` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_best_tree(
    evolution: *const QdtEvolution,
    out: *mut *mut QdtTree,
) -> QdtStatus {
    guard(|| {
        let e = borrow(evolution, "evolution")?;
        put(
            out,
            Box::into_raw(Box::new(QdtTree(e.0.best.expr.clone()))),
            "out",
        )
    })
}

/// # Safety
/// `evolution` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_generations(evolution: *const QdtEvolution) -> usize {
    evolution.as_ref().map_or(0, |e| e.0.stats.len())
}

/// # Safety
/// `evolution` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_stats(
    evolution: *const QdtEvolution,
    index: usize,
    out: *mut QdtGenerationStats,
) -> QdtStatus {
    guard(|| {
        let e = borrow(evolution, "evolution")?;
        let s = e.0.stats.get(index).ok_or_else(|| {
            FfiError::new(
                QdtStatus::OutOfRange,
                format!("index {index} of {}", e.0.stats.len()),
            )
        })?;
        put(
            out,
            QdtGenerationStats {
                generation: s.generation,
                best_fitness: s.best_fitness,
                mean_fitness: s.mean_fitness,
            },
            "out",
        )
    })
}

/// Writes the generations CSV.
///
/// # Safety
/// `evolution` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_write_csv(
    evolution: *const QdtEvolution,
    path: *const c_char,
) -> QdtStatus {
    guard(|| {
        let e = borrow(evolution, "evolution")?;
        let p = c_str(path, "path")?;
        let mut w = BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?);
        write_generations_csv(&e.0.stats, &mut w).map_err(|e| io_error(p, e))?;
        w.flush().map_err(|e| io_error(p, e))
    })
}

/// # Safety
/// `evolution` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn qdt_evolution_free(evolution: *mut QdtEvolution) {
    if !evolution.is_null() {
        drop(Box::from_raw(evolution));
    }
}

/// One decision per record with draws from ChaCha8 seeded by `seed`.
/// `decisions_path` may be null; otherwise the decisions CSV is written there.
///
/// # Safety
/// `tree`, `history` must be live handles; `decisions_path` null or a
/// NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn qdt_simulate(
    tree: *const QdtTree,
    history: *const QdtHistory,
    seed: u64,
    decisions_path: *const c_char,
    out: *mut QdtRunReport,
) -> QdtStatus {
    guard(|| {
        let t = borrow(tree, "tree")?;
        let h = borrow(history, "history")?;
        if h.0.is_empty() {
            return Err(FfiError::new(
                QdtStatus::InvalidArgument,
                "history is empty",
            ));
        }
        let (rows, report) = simulate_decisions(&t.0, &h.0, seed);
        if !decisions_path.is_null() {
            let p = c_str(decisions_path, "decisions_path")?;
            let mut w = BufWriter::new(File::create(p).map_err(|e| io_error(p, e))?);
            write_decisions_csv(&rows, &mut w).map_err(|e| io_error(p, e))?;
            w.flush().map_err(|e| io_error(p, e))?;
        }
        put(
            out,
            QdtRunReport {
                n: report.n,
                successes: report.successes,
                success_rate: report.success_rate,
                total_value: report.total_value,
            },
            "out",
        )
    })
}
