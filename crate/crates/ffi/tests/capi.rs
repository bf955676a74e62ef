use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use spx_ffi::*;

fn last_error() -> String {
    let p = spx_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> *mut SpxGraph {
    let c = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { spx_graph_parse(c.as_ptr(), &mut g) }, SpxStatus::Ok);
    g
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(spx_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn parse_round_trip_and_counts() {
    let g = parse("n 4\n0 1\n1 2\n2 3\n3 0\n");
    unsafe {
        assert_eq!(spx_graph_vertex_count(g), 4);
        assert_eq!(spx_graph_edge_count(g), 4);
        let mut text = ptr::null_mut();
        assert_eq!(spx_graph_to_text(g, &mut text), SpxStatus::Ok);
        let s = CStr::from_ptr(text).to_str().unwrap().to_owned();
        spx_string_free(text);
        let g2 = parse(&s);
        assert_eq!(spx_graph_edge_count(g2), 4);
        spx_graph_free(g2);
        spx_graph_free(g);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut g = ptr::null_mut();
    unsafe {
        let bad = CString::new("n 3\n0 1\n0 7\n").unwrap();
        assert_eq!(spx_graph_parse(bad.as_ptr(), &mut g), SpxStatus::Parse);
        assert!(g.is_null());
        assert!(last_error().contains("line 3"));

        let split = CString::new("n 4\n0 1\n2 3\n").unwrap();
        assert_eq!(spx_graph_parse(split.as_ptr(), &mut g), SpxStatus::Disconnected);

        assert_eq!(spx_graph_parse(ptr::null(), &mut g), SpxStatus::NullPointer);
        assert_eq!(spx_graph_binary_tree(0, &mut g), SpxStatus::InvalidArgument);
        assert_eq!(spx_graph_binary_tree(2, ptr::null_mut()), SpxStatus::NullPointer);

        let cyc = parse("n 3\n0 > 1\n1 > 2\n2 > 0\n");
        let mut cfg = std::mem::zeroed::<SpxConfig>();
        assert_eq!(spx_config_default(cyc, &mut cfg), SpxStatus::Ok);
        cfg.upward = true;
        let mut r = ptr::null_mut();
        assert_eq!(spx_optimize(cyc, &cfg, &mut r), SpxStatus::NotADag);
        assert!(r.is_null());
        spx_graph_free(cyc);
    }
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        spx_graph_free(ptr::null_mut());
        spx_result_free(ptr::null_mut());
        spx_string_free(ptr::null_mut());
        assert_eq!(spx_graph_vertex_count(ptr::null()), 0);
        assert_eq!(spx_result_trace_len(ptr::null()), 0);
    }
}

#[test]
fn upward_tree_run_through_the_c_api() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(spx_graph_binary_tree(3, &mut g), SpxStatus::Ok);
        let n = spx_graph_vertex_count(g);
        assert_eq!(n, 15);

        let mut cfg = std::mem::zeroed::<SpxConfig>();
        assert_eq!(spx_config_default(g, &mut cfg), SpxStatus::Ok);
        assert_eq!(cfg.outer_iters, 100);
        assert_eq!(cfg.variant, SpxVariant::Adam);
        cfg.upward = true;
        cfg.outer_iters = 40;

        let mut r = ptr::null_mut();
        assert_eq!(spx_optimize(g, &cfg, &mut r), SpxStatus::Ok);
        let mut summary = SpxSummary::default();
        assert_eq!(spx_result_summary(r, &mut summary), SpxStatus::Ok);
        assert!(summary.valid);
        assert!(summary.final_cost.is_finite());

        let mut coords = vec![0.0; 2 * n];
        assert_eq!(spx_result_coords(r, coords.as_mut_ptr(), coords.len() - 1), SpxStatus::BufferTooSmall);
        assert_eq!(spx_result_coords(r, coords.as_mut_ptr(), coords.len()), SpxStatus::Ok);

        let mut metrics = SpxMetrics::default();
        assert_eq!(spx_metrics(g, coords.as_ptr(), coords.len(), &mut metrics), SpxStatus::Ok);
        assert_eq!(metrics.upward_fraction, 1.0);
        assert_eq!(metrics.crossings, summary.final_crossings);
        assert_eq!(metrics.stress, summary.final_stress);

        let len = spx_result_trace_len(r);
        assert_eq!(len, 40);
        let mut trace = vec![SpxTraceRecord::default(); len];
        assert_eq!(spx_result_trace(r, trace.as_mut_ptr(), len), SpxStatus::Ok);
        assert!(trace.iter().enumerate().all(|(i, t)| t.iter == i));

        let mut svg = ptr::null_mut();
        assert_eq!(spx_render_svg(g, coords.as_ptr(), coords.len(), &mut svg), SpxStatus::Ok);
        assert!(CStr::from_ptr(svg).to_str().unwrap().starts_with("<svg"));
        spx_string_free(svg);

        spx_result_free(r);
        spx_graph_free(g);
    }
}

#[test]
fn optimize_from_is_deterministic_and_checks_length() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(spx_graph_community(20, 2, 0.4, 0.05, 3, &mut g), SpxStatus::Ok);
        let n = spx_graph_vertex_count(g);
        let mut cfg = std::mem::zeroed::<SpxConfig>();
        spx_config_default(g, &mut cfg);
        cfg.outer_iters = 15;
        cfg.variant = SpxVariant::Vanilla;
        cfg.learning_rate = 0.0;
        let start: Vec<f64> = (0..2 * n).map(|i| ((i * 37) % 11) as f64 * 0.7).collect();

        let mut r = ptr::null_mut();
        assert_eq!(spx_optimize_from(g, &cfg, start.as_ptr(), start.len() - 2, &mut r), SpxStatus::InvalidArgument);

        let run = || {
            let mut r = ptr::null_mut();
            assert_eq!(spx_optimize_from(g, &cfg, start.as_ptr(), start.len(), &mut r), SpxStatus::Ok);
            let mut out = vec![0.0; 2 * n];
            spx_result_coords(r, out.as_mut_ptr(), out.len());
            spx_result_free(r);
            out
        };
        let a = run();
        let b = run();
        assert_eq!(a.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), b.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        assert_ne!(a, start);
        spx_graph_free(g);
    }
}

#[test]
fn generated_header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/spx.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "spx_graph_parse",
        "spx_graph_free",
        "spx_config_default",
        "spx_optimize",
        "spx_optimize_from",
        "spx_result_coords",
        "spx_result_free",
        "spx_metrics",
        "spx_last_error_message",
        "typedef struct SpxGraph SpxGraph",
        "SPX_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }

}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps.join("libspx_ffi.a"), deps.parent().unwrap().join("libspx_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library not built");
    let bin = deps.join(format!("spx-c-smoke-{}", std::process::id()));
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_file(&bin);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.starts_with("n=4 valid=1"), "{stdout}");
}
