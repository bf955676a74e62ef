//! C ABI over `spx`.
//!
//! Graphs and run results cross the boundary as opaque handles owned by the
//! caller and released with their `*_free` function. Every fallible call
//! returns an [`SpxStatus`]; on failure a message for the calling thread is
//! available from [`spx_last_error_message`]. Layout coordinates are passed
//! as interleaved `x0, y0, x1, y1, ...` arrays of `2 * n` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spx::graph::{all_pairs_shortest_paths, generate_binary_tree, generate_community_graph, generate_random_dag};
use spx::io::{parse_graph, render_svg, write_graph, SvgOptions};
use spx::metrics::report;
use spx::optimizer::{self, GdKind, GdVariant, InitMethod, RunConfig, RunResult};
use spx::penalties::{AngleGradient, PenaltyMode};
use spx::{DistanceMatrix, Graph, Layout, SpxError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    Disconnected = 4,
    NotADag = 5,
    Parse = 6,
    Numerical = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpxVariant {
    Vanilla = 0,
    Momentum = 1,
    Nesterov = 2,
    Adagrad = 3,
    RmsProp = 4,
    Adam = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpxMode {
    Crossing = 0,
    Angle = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpxInit {
    Stress = 0,
    Force = 1,
    Random = 2,
}

/// Run configuration. Obtain defaults from [`spx_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SpxConfig {
    pub k: f64,
    pub variant: SpxVariant,
    /// Zero or negative selects the variant's default for the graph.
    pub learning_rate: f64,
    pub mode: SpxMode,
    pub init: SpxInit,
    pub seed: u64,
    pub outer_iters: usize,
    pub inner_steps: usize,
    pub upward: bool,
    pub upward_eps: f64,
    pub upward_mu: f64,
    pub frozen_angle: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SpxSummary {
    pub final_cost: f64,
    pub final_stress: f64,
    pub final_crossings: usize,
    pub final_min_angle_deg: f64,
    pub valid: bool,
    pub lp_fallbacks: usize,
    pub jitters: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SpxTraceRecord {
    pub iter: usize,
    pub crossings: usize,
    pub stress: f64,
    pub min_angle_deg: f64,
    pub cost: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SpxMetrics {
    pub stress: f64,
    pub crossings: usize,
    pub min_crossing_angle_deg: f64,
    pub avg_crossing_angle_deg: f64,
    pub neighborhood_preservation: f64,
    pub drawing_width: f64,
    pub drawing_height: f64,
    pub drawing_area: f64,
    pub upward_fraction: f64,
}

/// Opaque graph handle with its cached distance matrix.
pub struct SpxGraph {
    graph: Graph,
    dm: DistanceMatrix,
}

/// Opaque handle to a finished run.
pub struct SpxRunResult {
    result: RunResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SpxStatus, String);

impl From<SpxError> for Failure {
    fn from(err: SpxError) -> Self {
        let status = match err {
            SpxError::InvalidGraph(_) => SpxStatus::InvalidGraph,
            SpxError::DisconnectedGraph(..) => SpxStatus::Disconnected,
            SpxError::NotADag => SpxStatus::NotADag,
            SpxError::Parse { .. } => SpxStatus::Parse,
            SpxError::InvalidArgument(_) | SpxError::GenerationFailed { .. } | SpxError::Io(_) => {
                SpxStatus::InvalidArgument
            }
            SpxError::DegenerateSegment
            | SpxError::CoincidentVertices(..)
            | SpxError::SingularSystem
            | SpxError::LpFailure(_)
            | SpxError::NonFiniteUpdate(_) => SpxStatus::Numerical,
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SpxStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SpxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SpxStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const SpxGraph) -> Result<&'a SpxGraph, Failure> {
    g.as_ref().ok_or_else(|| null("graph"))
}

unsafe fn result_ref<'a>(r: *const SpxRunResult) -> Result<&'a SpxRunResult, Failure> {
    r.as_ref().ok_or_else(|| null("result"))
}

unsafe fn out_ref<'a, T>(out: *mut T) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or_else(|| null("output pointer"))
}

unsafe fn read_coords(g: &Graph, coords: *const f64, len: usize) -> Result<Layout, Failure> {
    if coords.is_null() {
        return Err(null("coords"));
    }
    if len != 2 * g.n() {
        return Err(Failure(
            SpxStatus::InvalidArgument,
            format!("expected {} coordinates, got {len}", 2 * g.n()),
        ));
    }
    let flat = std::slice::from_raw_parts(coords, len);
    Ok(Layout::new(flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect())?)
}

fn wrap_graph(graph: Graph, out: *mut *mut SpxGraph) -> Result<(), Failure> {
    let out = unsafe { out_ref(out)? };
    let dm = all_pairs_shortest_paths(&graph)?;
    *out = Box::into_raw(Box::new(SpxGraph { graph, dm }));
    Ok(())
}

fn into_c_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let out = unsafe { out_ref(out)? };
    let c = CString::new(s).map_err(|e| Failure(SpxStatus::InvalidArgument, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message describing the last failure on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn spx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spx_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parse a graph in the text edge-list format. The graph must be connected.
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_parse(text: *const c_char, out: *mut *mut SpxGraph) -> SpxStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(SpxStatus::Parse, format!("graph text is not UTF-8: {e}")))?;
        wrap_graph(parse_graph(text)?, out)
    })
}

/// Complete binary tree with edges directed from parent to child.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_binary_tree(depth: u32, out: *mut *mut SpxGraph) -> SpxStatus {
    guard(|| wrap_graph(generate_binary_tree(depth)?, out))
}

/// Connected random DAG with `round(density * n)` edges.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_random_dag(
    n: usize,
    density: f64,
    seed: u64,
    out: *mut *mut SpxGraph,
) -> SpxStatus {
    guard(|| wrap_graph(generate_random_dag(n, density, seed)?, out))
}

/// Connected planted-partition graph.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_community(
    n: usize,
    communities: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
    out: *mut *mut SpxGraph,
) -> SpxStatus {
    guard(|| wrap_graph(generate_community_graph(n, communities, p_in, p_out, seed)?, out))
}

/// # Safety
/// `graph` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_free(graph: *mut SpxGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_vertex_count(graph: *const SpxGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_edge_count(graph: *const SpxGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.m())
}

/// Normalized text form of the graph. Free with [`spx_string_free`].
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_graph_to_text(graph: *const SpxGraph, out: *mut *mut c_char) -> SpxStatus {
    guard(|| into_c_string(write_graph(&graph_ref(graph)?.graph), out))
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn to_core_config(c: &SpxConfig, dm: &DistanceMatrix) -> RunConfig {
    let kind = match c.variant {
        SpxVariant::Vanilla => GdKind::Vanilla,
        SpxVariant::Momentum => GdKind::Momentum,
        SpxVariant::Nesterov => GdKind::Nesterov,
        SpxVariant::Adagrad => GdKind::Adagrad,
        SpxVariant::RmsProp => GdKind::RmsProp,
        SpxVariant::Adam => GdKind::Adam,
    };
    let mut variant = GdVariant::with_defaults(kind, dm.diameter());
    if c.learning_rate > 0.0 {
        variant = variant.with_learning_rate(c.learning_rate);
    }
    RunConfig {
        k: c.k,
        variant,
        mode: match c.mode {
            SpxMode::Crossing => PenaltyMode::CrossingOnly,
            SpxMode::Angle => PenaltyMode::CrossingAngle,
        },
        init: match c.init {
            SpxInit::Stress => InitMethod::StressMajorization,
            SpxInit::Force => InitMethod::ForceDirected,
            SpxInit::Random => InitMethod::Random,
        },
        seed: c.seed,
        outer_iters: c.outer_iters,
        inner_steps: c.inner_steps,
        upward: c.upward,
        upward_eps: c.upward_eps,
        upward_mu: c.upward_mu,
        angle_gradient: if c.frozen_angle {
            AngleGradient::Frozen
        } else {
            AngleGradient::Full
        },
        ..RunConfig::for_graph(dm)
    }
}

/// Fill `out` with the library defaults for `graph`.
///
/// # Safety
/// `graph` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_config_default(graph: *const SpxGraph, out: *mut SpxConfig) -> SpxStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let out = out_ref(out)?;
        let d = RunConfig::for_graph(&g.dm);
        *out = SpxConfig {
            k: d.k,
            variant: SpxVariant::Adam,
            learning_rate: d.variant.learning_rate(),
            mode: SpxMode::Crossing,
            init: SpxInit::Stress,
            seed: d.seed,
            outer_iters: d.outer_iters,
            inner_steps: d.inner_steps,
            upward: d.upward,
            upward_eps: d.upward_eps,
            upward_mu: d.upward_mu,
            frozen_angle: false,
        };
        Ok(())
    })
}

fn finish_run(result: RunResult, out: &mut *mut SpxRunResult) {
    *out = Box::into_raw(Box::new(SpxRunResult { result }));
}

/// One optimization run from the configured initializer. An aborted run
/// still yields a result; check `valid` in [`spx_result_summary`].
///
/// # Safety
/// `graph` must be a live handle; `config` and `out` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn spx_optimize(
    graph: *const SpxGraph,
    config: *const SpxConfig,
    out: *mut *mut SpxRunResult,
) -> SpxStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let out = out_ref(out)?;
        let result = optimizer::spx_optimize(&g.graph, &g.dm, &to_core_config(c, &g.dm))?;
        finish_run(result, out);
        Ok(())
    })
}

/// Like [`spx_optimize`] but starting from `2 * n` caller coordinates.
///
/// # Safety
/// `coords` must point to `len` readable doubles; other pointers as for
/// [`spx_optimize`].
#[no_mangle]
pub unsafe extern "C" fn spx_optimize_from(
    graph: *const SpxGraph,
    config: *const SpxConfig,
    coords: *const f64,
    len: usize,
    out: *mut *mut SpxRunResult,
) -> SpxStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let c = config.as_ref().ok_or_else(|| null("config"))?;
        let out = out_ref(out)?;
        let init = read_coords(&g.graph, coords, len)?;
        let result = optimizer::spx_optimize_from(&g.graph, &g.dm, &to_core_config(c, &g.dm), init)?;
        finish_run(result, out);
        Ok(())
    })
}

/// # Safety
/// `result` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spx_result_free(result: *mut SpxRunResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Number of vertices in the result layout, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spx_result_vertex_count(result: *const SpxRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.layout.n())
}

/// Copy the final coordinates into `buf` (`len >= 2 * n`).
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn spx_result_coords(result: *const SpxRunResult, buf: *mut f64, len: usize) -> SpxStatus {
    guard(|| {
        let r = result_ref(result)?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let coords = &r.result.layout.coords;
        if len < 2 * coords.len() {
            return Err(Failure(
                SpxStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", 2 * coords.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, 2 * coords.len());
        for (d, c) in dst.chunks_exact_mut(2).zip(coords) {
            d.copy_from_slice(c);
        }
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spx_result_summary(result: *const SpxRunResult, out: *mut SpxSummary) -> SpxStatus {
    guard(|| {
        let r = &result_ref(result)?.result;
        *out_ref(out)? = SpxSummary {
            final_cost: r.final_cost,
            final_stress: r.final_stress,
            final_crossings: r.final_crossings,
            final_min_angle_deg: r.final_min_angle,
            valid: r.is_valid(),
            lp_fallbacks: r.diagnostics.lp_fallbacks,
            jitters: r.diagnostics.jitters,
        };
        Ok(())
    })
}

/// Number of trace records, or 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spx_result_trace_len(result: *const SpxRunResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.trace.len())
}

/// Copy the per-iteration trace into `buf` (`len >= trace length`).
///
/// # Safety
/// `buf` must point to `len` writable records.
#[no_mangle]
pub unsafe extern "C" fn spx_result_trace(
    result: *const SpxRunResult,
    buf: *mut SpxTraceRecord,
    len: usize,
) -> SpxStatus {
    guard(|| {
        let trace = &result_ref(result)?.result.trace;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < trace.len() {
            return Err(Failure(
                SpxStatus::BufferTooSmall,
                format!("need {} records, got {len}", trace.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, trace.len());
        for (d, t) in dst.iter_mut().zip(trace) {
            *d = SpxTraceRecord {
                iter: t.iter,
                crossings: t.crossings,
                stress: t.stress,
                min_angle_deg: t.min_angle,
                cost: t.cost,
            };
        }
        Ok(())
    })
}

/// Readability metrics of `2 * n` coordinates drawn with `graph`.
///
/// # Safety
/// `coords` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spx_metrics(
    graph: *const SpxGraph,
    coords: *const f64,
    len: usize,
    out: *mut SpxMetrics,
) -> SpxStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let layout = read_coords(&g.graph, coords, len)?;
        let m = report(&layout, &g.graph, &g.dm);
        *out_ref(out)? = SpxMetrics {
            stress: m.stress,
            crossings: m.crossings,
            min_crossing_angle_deg: m.min_crossing_angle_deg,
            avg_crossing_angle_deg: m.avg_crossing_angle_deg,
            neighborhood_preservation: m.neighborhood_preservation,
            drawing_width: m.drawing_width,
            drawing_height: m.drawing_height,
            drawing_area: m.drawing_area,
            upward_fraction: m.upward_fraction,
        };
        Ok(())
    })
}

/// SVG drawing with default styling. Free with [`spx_string_free`].
///
/// # Safety
/// `coords` must point to `len` readable doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spx_render_svg(
    graph: *const SpxGraph,
    coords: *const f64,
    len: usize,
    out: *mut *mut c_char,
) -> SpxStatus {
    guard(|| {
        let g = graph_ref(graph)?;
        let layout = read_coords(&g.graph, coords, len)?;
        into_c_string(render_svg(&layout, &g.graph, &SvgOptions::default()), out)
    })
}
