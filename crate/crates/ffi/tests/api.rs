use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use cvc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cvc_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn graph(n: usize, edges: &[u32]) -> *mut CvcGraph {
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { cvc_graph_new(n, edges.as_ptr(), edges.len() / 2, &mut g) },
        CvcStatus::Ok
    );
    g
}

fn take(s: *mut CvcVertexSet) -> Vec<u32> {
    let v = unsafe { std::slice::from_raw_parts(cvc_vertex_set_data(s), cvc_vertex_set_len(s)) }
        .to_vec();
    unsafe { cvc_vertex_set_free(s) };
    v
}

// two triangles {0,1,2} and {4,5,6} joined through 3
const BOWTIE: [u32; 16] = [0, 1, 1, 2, 0, 2, 2, 3, 3, 4, 4, 5, 5, 6, 4, 6];

#[test]
fn solve_every_kind() {
    let g = graph(7, &BOWTIE);
    let cases: [(CvcKind, &[u32]); 6] = [
        (CvcKind::Split, &[1, 2, 4]),
        (CvcKind::Clique, &[0, 1, 2, 3]),
        (CvcKind::Cluster, &[3]),
        (CvcKind::Degree1, &[2, 3, 4]),
        (CvcKind::Chordal, &[]),
        (CvcKind::CliqueCover, &[]),
    ];
    for (kind, s) in cases {
        let mut out = ptr::null_mut();
        let st = unsafe { cvc_solve(g, kind, s.as_ptr(), s.len(), -1, &mut out) };
        assert_eq!(st, CvcStatus::Ok, "{kind:?}: {}", last_error());
        let cover = take(out);
        assert_eq!(cover.len(), 5, "{kind:?}");
        assert_eq!(
            unsafe { cvc_is_connected_vertex_cover(g, cover.as_ptr(), cover.len()) },
            1
        );
    }
    unsafe { cvc_graph_free(g) };
}

#[test]
fn error_codes() {
    let g = graph(7, &BOWTIE);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            cvc_solve(g, CvcKind::Cluster, [3u32].as_ptr(), 1, 4, &mut out),
            CvcStatus::Infeasible
        );
        assert!(out.is_null());
        assert_eq!(
            cvc_solve(g, CvcKind::Clique, [3u32].as_ptr(), 1, -1, &mut out),
            CvcStatus::KindMismatch
        );
        assert!(last_error().contains("kind_mismatch"));
        assert_eq!(
            cvc_solve(g, CvcKind::Cluster, [9u32].as_ptr(), 1, -1, &mut out),
            CvcStatus::VertexOutOfRange
        );
        assert_eq!(
            cvc_solve(ptr::null(), CvcKind::Cluster, ptr::null(), 0, -1, &mut out),
            CvcStatus::NullPointer
        );
        assert_eq!(
            cvc_solve(g, CvcKind::Cluster, ptr::null(), 1, -1, &mut out),
            CvcStatus::NullPointer
        );
        assert_eq!(
            cvc_is_connected_vertex_cover(g, [7u32].as_ptr(), 1),
            CvcStatus::VertexOutOfRange as i32
        );

        let mut k = ptr::null_mut();
        assert_eq!(
            cvc_kernelize(g, CvcKind::Cluster, [3u32].as_ptr(), 1, -1, 1, 1, &mut k),
            CvcStatus::InvalidParameter
        );
        assert_eq!(
            cvc_kernelize(g, CvcKind::Cluster, [3u32].as_ptr(), 1, -1, 2, 0, &mut k),
            CvcStatus::InvalidParameter
        );
        assert_eq!(
            cvc_kernelize(g, CvcKind::Chordal, ptr::null(), 0, -1, 2, 1, &mut k),
            CvcStatus::NotApplicable
        );

        let mut h = ptr::null_mut();
        assert_eq!(
            cvc_graph_new(2, [0u32, 0].as_ptr(), 1, &mut h),
            CvcStatus::VertexOutOfRange
        );
        let bad = CString::new("p edge 2 1\ne 1 x\n").unwrap();
        assert_eq!(
            cvc_graph_from_dimacs(bad.as_ptr(), &mut h),
            CvcStatus::Parse
        );
        assert!(!last_error().is_empty());

        // null handles are tolerated by the infallible accessors
        assert_eq!(cvc_graph_vertex_count(ptr::null()), 0);
        cvc_graph_free(ptr::null_mut());
        cvc_vertex_set_free(ptr::null_mut());
        cvc_kernel_free(ptr::null_mut());
        cvc_graph_free(g);
    }
}

#[test]
fn kernel_round_trip() {
    // a 6-clique hanging off a path, with S = the path
    let mut edges = vec![];
    for u in 0..6u32 {
        for v in u + 1..6 {
            edges.extend([u, v]);
        }
    }
    edges.extend([5, 6, 6, 7, 7, 8]);
    let g = graph(9, &edges);
    let s = [6u32, 7, 8];
    unsafe {
        let mut full = ptr::null_mut();
        assert_eq!(
            cvc_solve(g, CvcKind::Clique, s.as_ptr(), 3, -1, &mut full),
            CvcStatus::Ok
        );
        let opt = take(full).len();

        let mut k = ptr::null_mut();
        assert_eq!(
            cvc_kernelize(g, CvcKind::Clique, s.as_ptr(), 3, -1, 3, 2, &mut k),
            CvcStatus::Ok,
            "{}",
            last_error()
        );
        let mut r = ptr::null_mut();
        assert_eq!(cvc_kernel_graph(k, &mut r), CvcStatus::Ok);
        let mut rs = ptr::null_mut();
        assert_eq!(cvc_kernel_modulator(k, &mut rs), CvcStatus::Ok);
        let rs = take(rs);
        assert!((cvc_graph_vertex_count(r) as u64) <= cvc_kernel_size_bound(k));
        assert!(cvc_graph_vertex_count(r) < 9);

        let mut reduced = ptr::null_mut();
        assert_eq!(
            cvc_solve(r, CvcKind::Clique, rs.as_ptr(), rs.len(), -1, &mut reduced),
            CvcStatus::Ok
        );
        let reduced = take(reduced);
        let mut lifted = ptr::null_mut();
        assert_eq!(
            cvc_kernel_lift(k, reduced.as_ptr(), reduced.len(), &mut lifted),
            CvcStatus::Ok
        );
        let lifted = take(lifted);
        assert_eq!(
            cvc_is_connected_vertex_cover(g, lifted.as_ptr(), lifted.len()),
            1
        );
        assert!(2 * lifted.len() <= 3 * opt, "{} vs {opt}", lifted.len());

        // a set that is not a solution of the reduced graph is refused
        let mut none = ptr::null_mut();
        assert_eq!(
            cvc_kernel_lift(k, ptr::null(), 0, &mut none),
            CvcStatus::InvalidParameter
        );

        cvc_graph_free(r);
        cvc_kernel_free(k);
        cvc_graph_free(g);
    }
}

#[test]
fn dimacs_input() {
    let text = CString::new("c path\np edge 3 2\ne 1 2\ne 2 3\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cvc_graph_from_dimacs(text.as_ptr(), &mut g), CvcStatus::Ok);
        assert_eq!((cvc_graph_vertex_count(g), cvc_graph_edge_count(g)), (3, 2));
        let mut c = ptr::null_mut();
        assert_eq!(
            cvc_solve(g, CvcKind::Degree1, [1u32].as_ptr(), 1, -1, &mut c),
            CvcStatus::Ok
        );
        assert_eq!(take(c), vec![1]);
        cvc_graph_free(g);
    }
}

#[test]
fn c_program_links_against_staticlib() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/cvc.h");
    assert!(header.exists(), "header not generated");
    // target/<profile>/deps/api-xxxx -> target/<profile>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libcvc_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("cc not found; skipping C link check");
        return;
    }
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cvc_smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
