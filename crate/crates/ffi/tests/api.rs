use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use unitlab_ffi::*;

fn last_error() -> String {
    let p = ul_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn exact_opt_over_the_boundary() {
    // diagonal pairs with n = 2: (1,0) (0,1) (3/2,1/2) (1/2,3/2)
    let pts = [2, 0, 0, 2, 3, 1, 1, 3];
    let mut opt = 0usize;
    assert_eq!(unsafe { ul_exact_opt(pts.as_ptr(), 4, 2, 2, &mut opt) }, UL_OK);
    assert_eq!(opt, 2);
    assert!(ul_last_error().is_null());
    assert_eq!(unsafe { ul_exact_opt(ptr::null(), 0, 2, 1, &mut opt) }, UL_OK);
    assert_eq!(opt, 0);
}

#[test]
fn bad_arguments_set_codes_and_messages() {
    let pts = [0i64, 0];
    let mut opt = 0usize;
    assert_eq!(unsafe { ul_exact_opt(pts.as_ptr(), 1, 2, 0, &mut opt) }, UL_ERR_INVALID);
    assert!(last_error().contains("denominator"));
    assert_eq!(unsafe { ul_exact_opt(ptr::null(), 1, 2, 1, &mut opt) }, UL_ERR_NULL);
    assert_eq!(
        unsafe { ul_exact_opt(pts.as_ptr(), 1, 2, 1, ptr::null_mut()) },
        UL_ERR_NULL
    );
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ul_clusterer_new(99, 2, &mut h) }, UL_ERR_INVALID);
    assert!(h.is_null());
    assert_eq!(
        unsafe { ul_clusterer_insert(ptr::null_mut(), pts.as_ptr(), 1, ptr::null_mut(), ptr::null_mut()) },
        UL_ERR_NULL
    );
    assert_eq!(unsafe { ul_clusterer_count(ptr::null()) }, 0);
    unsafe { ul_clusterer_free(ptr::null_mut()) };
}

#[test]
fn oracle_limit_has_its_own_code() {
    let pts: Vec<i64> = (0..9).flat_map(|x| (0..9).flat_map(move |y| [x, y])).collect();
    let mut opt = 0usize;
    assert_eq!(
        unsafe { ul_exact_opt(pts.as_ptr(), 81, 2, 2, &mut opt) },
        UL_ERR_ORACLE_LIMIT
    );
    assert!(last_error().contains("oracle limit"));
}

#[test]
fn greedy_clusterer_on_diagonal_pairs() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ul_clusterer_new(UL_ALG_GREEDY, 2, &mut h) }, UL_OK);
    let n = 5i64;
    let mut opened_count = 0;
    for i in 0..n {
        for p in [[n + i, i], [i, n + i]] {
            let (mut c, mut o) = (0usize, false);
            assert_eq!(unsafe { ul_clusterer_insert(h, p.as_ptr(), n, &mut c, &mut o) }, UL_OK);
            opened_count += usize::from(o);
        }
    }
    assert_eq!(unsafe { ul_clusterer_count(h) }, 5);
    assert_eq!(opened_count, 5);
    unsafe { ul_clusterer_free(h) };
}

#[test]
fn coverer_reports_corners() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ul_coverer_new(UL_ALG_FIRSTFIT, 2, &mut h) }, UL_OK);
    let mut lo = [0i64; 2];
    let (mut cube, mut opened) = (9usize, false);
    assert_eq!(
        unsafe { ul_coverer_cover(h, [1, 3].as_ptr(), 4, &mut cube, &mut opened, lo.as_mut_ptr()) },
        UL_OK
    );
    assert_eq!((cube, opened, lo), (0, true, [1, 3]));
    assert_eq!(
        unsafe { ul_coverer_cover(h, [4, 4].as_ptr(), 4, &mut cube, &mut opened, lo.as_mut_ptr()) },
        UL_OK
    );
    assert_eq!((cube, opened, lo), (0, false, [1, 3]));
    assert_eq!(unsafe { ul_coverer_count(h) }, 1);
    unsafe { ul_coverer_free(h) };

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ul_coverer_new(UL_ALG_GREEDY, 2, &mut h) }, UL_ERR_INVALID);
}

#[test]
fn reweigh_handle_is_deterministic() {
    let run = |seed: u64| {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { ul_reweigh_new(2, seed, &mut h) }, UL_OK);
        let mut trace = Vec::new();
        for x in 0..4i64 {
            for y in 0..4i64 {
                let (mut b, mut o, mut lo) = (0u8, false, [0i64; 2]);
                assert_eq!(
                    unsafe { ul_reweigh_insert(h, [x, y].as_ptr(), &mut b, &mut o, lo.as_mut_ptr()) },
                    UL_OK
                );
                assert!((1..=4).contains(&b));
                assert!(lo[0] <= x && x <= lo[0] + 1 && lo[1] <= y && y <= lo[1] + 1);
                trace.push((b, o, lo));
            }
        }
        let count = unsafe { ul_reweigh_cube_count(h) };
        unsafe { ul_reweigh_free(h) };
        (trace, count)
    };
    assert_eq!(run(3), run(3));
    assert!(run(3).1 >= 4);
}

#[test]
fn covering_duels() {
    let mut r = UlDuelResult::default();
    for d in 1..=3 {
        assert_eq!(unsafe { ul_covering_duel(UL_ALG_GRID, d, 0, &mut r) }, UL_OK);
        assert_eq!((r.alg_count, r.opt, r.failed_checks), (1 << d, 1, 0));
    }
    // invariant failures are data here, not an error status
    assert_eq!(unsafe { ul_covering_duel(UL_ALG_FIRSTFIT, 2, 0, &mut r) }, UL_OK);
    assert_eq!((r.alg_count, r.failed_checks), (2, 3));
    assert_eq!(unsafe { ul_covering_duel(UL_ALG_GREEDY, 2, 0, &mut r) }, UL_ERR_INVALID);
}

#[test]
fn errors_are_per_thread() {
    let mut opt = 0usize;
    assert_eq!(unsafe { ul_exact_opt(ptr::null(), 1, 1, 1, &mut opt) }, UL_ERR_NULL);
    std::thread::spawn(|| assert!(ul_last_error().is_null()))
        .join()
        .unwrap();
    assert!(last_error().contains("null"));
}

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/api-<hash>
    std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(manifest.join("include/unitlab.h")).unwrap();
    for name in [
        "ul_last_error",
        "ul_exact_opt",
        "ul_clusterer_new",
        "ul_clusterer_insert",
        "ul_clusterer_free",
        "ul_coverer_cover",
        "ul_reweigh_insert",
        "ul_covering_duel",
        "typedef struct UlClusterer UlClusterer;",
        "#define UL_ERR_ORACLE_LIMIT 7",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libunitlab_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc runs");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
