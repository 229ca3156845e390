//! C ABI for the coverage-from-structured-samples library.
//!
//! Conventions:
//! - Graphs and sample logs are opaque handles created and freed here.
//! - Every fallible call returns an [`OpssStatus`]; `OPSS_OK` is zero and the
//!   nonzero codes mirror the CLI exit codes. The thread-local message for
//!   the most recent failure is available via [`opss_last_error`].
//! - Node index buffers are caller-allocated; calls report the required
//!   length and fail with `OPSS_ERR_BUFFER_TOO_SMALL` when the capacity is
//!   insufficient.
//!
//! The generated header lives at `include/opss.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use opss::dist::{check_negative_correlation, DistributionSpec};
use opss::error::Error;
use opss::graph::{BipartiteGraph, NodeSet, Side};
use opss::harness::required_samples_general;
use opss::opss::{algorithm_general, algorithm_large_sample, algorithm_uniform_k};
use opss::prob::coverage_probability_exact;
use opss::sample::SampleLog;
use opss::solver::{MaxCoverSolver, SolverKind};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpssStatus {
    Ok = 0,
    IoError = 1,
    ValidationError = 2,
    CapacityError = 3,
    NullArgument = 4,
    Utf8Error = 5,
    BufferTooSmall = 6,
}

/// Max-coverage solver selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpssSolver {
    Greedy = 0,
    Lazy = 1,
    Exact = 2,
}

/// Sample-based algorithm selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpssAlgorithm {
    General = 0,
    UniformK = 1,
    LargeSample = 2,
}

/// Opaque bipartite graph handle.
pub struct OpssGraph(BipartiteGraph);

/// Opaque sample-log handle.
pub struct OpssSampleLog(SampleLog);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn fail(e: Error) -> OpssStatus {
    let status = match &e {
        Error::Io(_) => OpssStatus::IoError,
        Error::Validation(_) | Error::Format(_) => OpssStatus::ValidationError,
        Error::Capacity(_) => OpssStatus::CapacityError,
    };
    set_error(e.to_string());
    status
}

fn null_arg(which: &str) -> OpssStatus {
    set_error(format!("null argument: {}", which));
    OpssStatus::NullArgument
}

/// Copy the most recent error message for this thread into `buf` (NUL
/// terminated, truncated to `capacity`). Returns the full message length in
/// bytes excluding the terminator, or 0 when no error is recorded.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes, or be null (length query).
#[no_mangle]
pub unsafe extern "C" fn opss_last_error(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let borrow = slot.borrow();
        let Some(msg) = borrow.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

unsafe fn path_from(ptr: *const c_char) -> Result<PathBuf, OpssStatus> {
    if ptr.is_null() {
        return Err(null_arg("path"));
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(PathBuf::from(s)),
        Err(_) => {
            set_error("path is not valid UTF-8".to_string());
            Err(OpssStatus::Utf8Error)
        }
    }
}

unsafe fn str_from<'a>(ptr: *const c_char, which: &str) -> Result<&'a str, OpssStatus> {
    if ptr.is_null() {
        return Err(null_arg(which));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(format!("{} is not valid UTF-8", which));
        OpssStatus::Utf8Error
    })
}

fn solver_kind(solver: OpssSolver) -> SolverKind {
    match solver {
        OpssSolver::Greedy => SolverKind::Greedy,
        OpssSolver::Lazy => SolverKind::Lazy,
        OpssSolver::Exact => SolverKind::Exact,
    }
}

unsafe fn write_indices(
    set: &NodeSet,
    out_indices: *mut usize,
    capacity: usize,
    out_len: *mut usize,
) -> OpssStatus {
    if out_len.is_null() {
        return null_arg("out_len");
    }
    let needed = set.len();
    *out_len = needed;
    if needed == 0 {
        return OpssStatus::Ok;
    }
    if out_indices.is_null() {
        return null_arg("out_indices");
    }
    if capacity < needed {
        set_error(format!(
            "index buffer holds {} entries, {} required",
            capacity, needed
        ));
        return OpssStatus::BufferTooSmall;
    }
    for (i, u) in set.iter().enumerate() {
        *out_indices.add(i) = u;
    }
    OpssStatus::Ok
}

/// Build a graph from a flat edge list (`edges_left[i]` covers
/// `edges_right[i]`). Duplicate edges are allowed.
///
/// # Safety
/// The edge arrays must hold `n_edges` entries each; `out` must be a valid
/// pointer to receive the handle.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_new(
    n_left: usize,
    n_right: usize,
    edges_left: *const usize,
    edges_right: *const usize,
    n_edges: usize,
    out: *mut *mut OpssGraph,
) -> OpssStatus {
    if out.is_null() {
        return null_arg("out");
    }
    if n_edges > 0 && (edges_left.is_null() || edges_right.is_null()) {
        return null_arg("edges");
    }
    let mut adjacency = vec![Vec::new(); n_left];
    for i in 0..n_edges {
        let u = *edges_left.add(i);
        let v = *edges_right.add(i);
        if u >= n_left {
            set_error(format!(
                "edge {} has left index {} >= n_left {}",
                i, u, n_left
            ));
            return OpssStatus::ValidationError;
        }
        adjacency[u].push(v);
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    match BipartiteGraph::from_adjacency(n_left, n_right, adjacency) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(OpssGraph(g)));
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Read a graph from the text format.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_read(
    path: *const c_char,
    out: *mut *mut OpssGraph,
) -> OpssStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match BipartiteGraph::read_file(path) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(OpssGraph(g)));
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Write a graph in the canonical text format.
///
/// # Safety
/// `graph` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_write(
    graph: *const OpssGraph,
    path: *const c_char,
) -> OpssStatus {
    let Some(g) = graph.as_ref() else {
        return null_arg("graph");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match g.0.write_file(path) {
        Ok(()) => OpssStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Release a graph handle. Null is a no-op.
///
/// # Safety
/// `graph` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_free(graph: *mut OpssGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of left nodes, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_n_left(graph: *const OpssGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n_left())
}

/// Number of right nodes, or 0 for a null handle.
///
/// # Safety
/// `graph` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_n_right(graph: *const OpssGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n_right())
}

/// Coverage value of a left node set.
///
/// # Safety
/// `members` must hold `n_members` entries; `out_value` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_graph_coverage_value(
    graph: *const OpssGraph,
    members: *const usize,
    n_members: usize,
    out_value: *mut usize,
) -> OpssStatus {
    let Some(g) = graph.as_ref() else {
        return null_arg("graph");
    };
    if out_value.is_null() {
        return null_arg("out_value");
    }
    if n_members > 0 && members.is_null() {
        return null_arg("members");
    }
    let slice = std::slice::from_raw_parts(members, n_members);
    let set = match NodeSet::from_indices(Side::Left, g.0.n_left(), slice) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match g.0.coverage_value(&set) {
        Ok(v) => {
            *out_value = v;
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Solve maximum coverage at the given budget. The chosen indices are
/// written to `out_indices` (sorted ascending) and the coverage value to
/// `out_value`.
///
/// # Safety
/// Buffers must match their stated capacities; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_solve(
    graph: *const OpssGraph,
    budget: usize,
    solver: OpssSolver,
    out_indices: *mut usize,
    capacity: usize,
    out_len: *mut usize,
    out_value: *mut usize,
) -> OpssStatus {
    let Some(g) = graph.as_ref() else {
        return null_arg("graph");
    };
    if out_value.is_null() {
        return null_arg("out_value");
    }
    let result = match solver_kind(solver).solve(&g.0, budget) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    *out_value = result.value;
    write_indices(&result.chosen, out_indices, capacity, out_len)
}

/// Draw `t` structured samples from a distribution spec (for example
/// `"uniform-exact-k n=20 k=5"`) against the graph.
///
/// # Safety
/// `dist` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_generate(
    graph: *const OpssGraph,
    dist: *const c_char,
    k: usize,
    t: usize,
    seed: u64,
    out: *mut *mut OpssSampleLog,
) -> OpssStatus {
    let Some(g) = graph.as_ref() else {
        return null_arg("graph");
    };
    if out.is_null() {
        return null_arg("out");
    }
    let spec_str = match str_from(dist, "dist") {
        Ok(s) => s,
        Err(s) => return s,
    };
    let spec: DistributionSpec = match spec_str.parse() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match SampleLog::generate(&g.0, &spec, k, t, seed) {
        Ok(log) => {
            *out = Box::into_raw(Box::new(OpssSampleLog(log)));
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Read a sample log file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_read(
    path: *const c_char,
    out: *mut *mut OpssSampleLog,
) -> OpssStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match SampleLog::read_file(path) {
        Ok(log) => {
            *out = Box::into_raw(Box::new(OpssSampleLog(log)));
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Write a sample log file.
///
/// # Safety
/// `log` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_write(
    log: *const OpssSampleLog,
    path: *const c_char,
) -> OpssStatus {
    let Some(l) = log.as_ref() else {
        return null_arg("log");
    };
    let path = match path_from(path) {
        Ok(p) => p,
        Err(s) => return s,
    };
    match l.0.write_file(path) {
        Ok(()) => OpssStatus::Ok,
        Err(e) => fail(e),
    }
}

/// Number of samples in the log, or 0 for a null handle.
///
/// # Safety
/// `log` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_len(log: *const OpssSampleLog) -> usize {
    log.as_ref().map_or(0, |l| l.0.len())
}

/// The constraint `k` recorded in the log header, or 0 for a null handle.
///
/// # Safety
/// `log` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_k(log: *const OpssSampleLog) -> usize {
    log.as_ref().map_or(0, |l| l.0.k)
}

/// Release a sample-log handle. Null is a no-op.
///
/// # Safety
/// `log` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn opss_sample_log_free(log: *mut OpssSampleLog) {
    if !log.is_null() {
        drop(Box::from_raw(log));
    }
}

/// Run a sample-based algorithm on a log. `eps` is only read for the
/// uniform-k algorithm. The returned feasible set is written to
/// `out_indices`.
///
/// # Safety
/// Buffers must match their stated capacities; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_run(
    log: *const OpssSampleLog,
    algorithm: OpssAlgorithm,
    k: usize,
    eps: f64,
    solver: OpssSolver,
    seed: u64,
    out_indices: *mut usize,
    capacity: usize,
    out_len: *mut usize,
) -> OpssStatus {
    let Some(l) = log.as_ref() else {
        return null_arg("log");
    };
    let kind = solver_kind(solver);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match algorithm {
        OpssAlgorithm::General => algorithm_general(&l.0, k, &kind, &mut rng),
        OpssAlgorithm::UniformK => algorithm_uniform_k(&l.0, k, eps, &kind, &mut rng),
        OpssAlgorithm::LargeSample => algorithm_large_sample(&l.0, k, &kind, &mut rng),
    };
    match outcome {
        Ok(o) => write_indices(&o.returned, out_indices, capacity, out_len),
        Err(e) => fail(e),
    }
}

/// Exhaustively check the negative-correlation inequality for a distribution
/// spec. Writes whether it holds everywhere, the worst signed violation, and
/// the number of pairs tested.
///
/// # Safety
/// `dist` must be a NUL-terminated string; out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_check_negative_correlation(
    dist: *const c_char,
    out_holds: *mut bool,
    out_worst_violation: *mut f64,
    out_pairs_tested: *mut u64,
) -> OpssStatus {
    let spec_str = match str_from(dist, "dist") {
        Ok(s) => s,
        Err(s) => return s,
    };
    if out_holds.is_null() || out_worst_violation.is_null() || out_pairs_tested.is_null() {
        return null_arg("out");
    }
    let spec: DistributionSpec = match spec_str.parse() {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match check_negative_correlation(&spec) {
        Ok(report) => {
            *out_holds = report.holds_everywhere;
            *out_worst_violation = report.worst_violation;
            *out_pairs_tested = report.pairs_tested;
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Probability that a degree-`d` right node is covered by a uniform size-`k`
/// subset of `n` left nodes.
///
/// # Safety
/// `out_probability` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_coverage_probability_exact(
    n: usize,
    k: usize,
    d: usize,
    out_probability: *mut f64,
) -> OpssStatus {
    if out_probability.is_null() {
        return null_arg("out_probability");
    }
    match coverage_probability_exact(n, k, d) {
        Ok(p) => {
            *out_probability = p;
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Sample count required by the general guarantee for inclusion exponent `c`
/// and failure probability `delta`.
///
/// # Safety
/// `out_samples` must be valid.
#[no_mangle]
pub unsafe extern "C" fn opss_required_samples_general(
    n: usize,
    m: usize,
    c: f64,
    delta: f64,
    out_samples: *mut u64,
) -> OpssStatus {
    if out_samples.is_null() {
        return null_arg("out_samples");
    }
    match required_samples_general(n, m, c, delta) {
        Ok(t) => {
            *out_samples = t;
            OpssStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Static library version string.
#[no_mangle]
pub extern "C" fn opss_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn graph_round_trip_through_handles() {
        let dir = tempfile::tempdir().unwrap();
        let path = cstr(dir.path().join("g.txt").to_str().unwrap());

        let edges_u = [0usize, 0, 1, 1, 2];
        let edges_v = [0usize, 1, 1, 2, 3];
        let mut g: *mut OpssGraph = ptr::null_mut();
        unsafe {
            assert_eq!(
                opss_graph_new(3, 4, edges_u.as_ptr(), edges_v.as_ptr(), 5, &mut g),
                OpssStatus::Ok
            );
            assert_eq!(opss_graph_n_left(g), 3);
            assert_eq!(opss_graph_n_right(g), 4);
            assert_eq!(opss_graph_write(g, path.as_ptr()), OpssStatus::Ok);

            let mut g2: *mut OpssGraph = ptr::null_mut();
            assert_eq!(opss_graph_read(path.as_ptr(), &mut g2), OpssStatus::Ok);
            let members = [0usize, 1];
            let mut value = 0usize;
            assert_eq!(
                opss_graph_coverage_value(g2, members.as_ptr(), 2, &mut value),
                OpssStatus::Ok
            );
            assert_eq!(value, 3);
            opss_graph_free(g2);
            opss_graph_free(g);
        }
    }

    #[test]
    fn solve_reports_chosen_set_and_value() {
        let edges_u = [0usize, 0, 1, 1, 2];
        let edges_v = [0usize, 1, 1, 2, 3];
        let mut g: *mut OpssGraph = ptr::null_mut();
        unsafe {
            opss_graph_new(3, 4, edges_u.as_ptr(), edges_v.as_ptr(), 5, &mut g);
            let mut indices = [0usize; 8];
            let mut len = 0usize;
            let mut value = 0usize;
            assert_eq!(
                opss_solve(
                    g,
                    2,
                    OpssSolver::Exact,
                    indices.as_mut_ptr(),
                    indices.len(),
                    &mut len,
                    &mut value
                ),
                OpssStatus::Ok
            );
            assert_eq!(value, 3);
            assert_eq!(&indices[..len], &[0, 1]);

            // undersized buffer reports the required length
            let mut small = [0usize; 1];
            assert_eq!(
                opss_solve(
                    g,
                    2,
                    OpssSolver::Greedy,
                    small.as_mut_ptr(),
                    1,
                    &mut len,
                    &mut value
                ),
                OpssStatus::BufferTooSmall
            );
            assert_eq!(len, 2);
            opss_graph_free(g);
        }
    }

    #[test]
    fn sampling_and_running_through_the_abi() {
        let dir = tempfile::tempdir().unwrap();
        let log_path = cstr(dir.path().join("s.log").to_str().unwrap());
        let edges_u = [0usize, 0, 1, 1, 2, 3];
        let edges_v = [0usize, 1, 1, 2, 3, 0];
        let mut g: *mut OpssGraph = ptr::null_mut();
        unsafe {
            opss_graph_new(4, 4, edges_u.as_ptr(), edges_v.as_ptr(), 6, &mut g);
            let mut log: *mut OpssSampleLog = ptr::null_mut();
            let dist = cstr("uniform-exact-k n=4 k=2");
            assert_eq!(
                opss_sample_log_generate(g, dist.as_ptr(), 2, 30, 7, &mut log),
                OpssStatus::Ok
            );
            assert_eq!(opss_sample_log_len(log), 30);
            assert_eq!(opss_sample_log_k(log), 2);
            assert_eq!(
                opss_sample_log_write(log, log_path.as_ptr()),
                OpssStatus::Ok
            );

            let mut log2: *mut OpssSampleLog = ptr::null_mut();
            assert_eq!(
                opss_sample_log_read(log_path.as_ptr(), &mut log2),
                OpssStatus::Ok
            );
            let mut indices = [0usize; 8];
            let mut len = 0usize;
            assert_eq!(
                opss_run(
                    log2,
                    OpssAlgorithm::General,
                    2,
                    0.0,
                    OpssSolver::Greedy,
                    1,
                    indices.as_mut_ptr(),
                    indices.len(),
                    &mut len
                ),
                OpssStatus::Ok
            );
            assert!(len <= 2);
            // identical seeds give identical outputs
            let mut again = [0usize; 8];
            let mut len2 = 0usize;
            opss_run(
                log2,
                OpssAlgorithm::General,
                2,
                0.0,
                OpssSolver::Greedy,
                1,
                again.as_mut_ptr(),
                again.len(),
                &mut len2,
            );
            assert_eq!(&indices[..len], &again[..len2]);
            opss_sample_log_free(log);
            opss_sample_log_free(log2);
            opss_graph_free(g);
        }
    }

    #[test]
    fn error_paths_set_status_and_message() {
        unsafe {
            let mut g: *mut OpssGraph = ptr::null_mut();
            let missing = cstr("/nonexistent/graph.txt");
            assert_eq!(
                opss_graph_read(missing.as_ptr(), &mut g),
                OpssStatus::IoError
            );
            let mut buf = [0u8; 256];
            let n = opss_last_error(buf.as_mut_ptr() as *mut c_char, buf.len());
            assert!(n > 0);

            let bad = cstr("not-a-family n=4");
            let mut holds = false;
            let mut worst = 0.0f64;
            let mut pairs = 0u64;
            assert_eq!(
                opss_check_negative_correlation(bad.as_ptr(), &mut holds, &mut worst, &mut pairs),
                OpssStatus::ValidationError
            );
            let big = cstr("uniform-exact-k n=30 k=2");
            assert_eq!(
                opss_check_negative_correlation(big.as_ptr(), &mut holds, &mut worst, &mut pairs),
                OpssStatus::CapacityError
            );
            let block = cstr("block-partition n=4 k=2");
            assert_eq!(
                opss_check_negative_correlation(
                    block.as_ptr(),
                    &mut holds,
                    &mut worst,
                    &mut pairs
                ),
                OpssStatus::Ok
            );
            assert!(!holds);
            assert!((worst - 0.25).abs() < 1e-12);
            assert_eq!(pairs, 25);

            assert_eq!(
                opss_graph_coverage_value(ptr::null(), ptr::null(), 0, ptr::null_mut()),
                OpssStatus::NullArgument
            );
        }
    }

    #[test]
    fn scalar_helpers() {
        unsafe {
            let mut p = 0.0f64;
            assert_eq!(
                opss_coverage_probability_exact(4, 2, 1, &mut p),
                OpssStatus::Ok
            );
            assert_eq!(p, 0.5);
            assert_eq!(
                opss_coverage_probability_exact(4, 0, 1, &mut p),
                OpssStatus::ValidationError
            );
            let mut t = 0u64;
            assert_eq!(
                opss_required_samples_general(20, 10, 1.0, 0.1, &mut t),
                OpssStatus::Ok
            );
            assert_eq!(t, 71_898);
            assert!(!opss_version().is_null());
        }
    }
}
