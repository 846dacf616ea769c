//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers, status codes, and caller-provided buffers.

use std::ffi::{CStr, CString};
use std::ptr;

use specrad_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0i8; 256];
    unsafe {
        sr_last_error(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

#[test]
fn dist_json_round_trip_and_moment() {
    unsafe {
        let json = CString::new(r#"{"kind":"pareto_symmetric","alpha":2.2}"#).unwrap();
        let mut dist = ptr::null_mut();
        assert_eq!(sr_dist_from_json(json.as_ptr(), &mut dist), SrStatus::Ok);

        let mut m2 = 0.0f64;
        assert_eq!(sr_dist_moment(dist, 2.0, &mut m2), SrStatus::Ok);
        assert!((m2 - 11.0).abs() < 1e-12);
        let mut m3 = 0.0f64;
        assert_eq!(sr_dist_moment(dist, 3.0, &mut m3), SrStatus::Ok);
        assert!(m3.is_infinite());

        let mut out = ptr::null_mut();
        assert_eq!(sr_dist_to_json(dist, &mut out), SrStatus::Ok);
        let round = CStr::from_ptr(out).to_str().unwrap().to_owned();
        assert_eq!(round, r#"{"kind":"pareto_symmetric","alpha":2.2}"#);
        sr_string_free(out);

        let mut scale = 0.0f64;
        let mut normalized = ptr::null_mut();
        assert_eq!(
            sr_dist_normalize(dist, &mut scale, &mut normalized),
            SrStatus::Ok
        );
        assert!((scale - 1.0 / 11.0f64.sqrt()).abs() < 1e-15);
        let mut unit = 0.0f64;
        assert_eq!(sr_dist_moment(normalized, 2.0, &mut unit), SrStatus::Ok);
        assert!((unit - 1.0).abs() < 1e-12);

        sr_dist_free(normalized);
        sr_dist_free(dist);
    }
}

#[test]
fn bad_descriptor_reports_error() {
    unsafe {
        let json = CString::new(r#"{"kind":"pareto_symmetric","alpha":-1}"#).unwrap();
        let mut dist = ptr::null_mut();
        let st = sr_dist_from_json(json.as_ptr(), &mut dist);
        assert_eq!(st, SrStatus::Config);
        assert!(last_error().contains("alpha"));

        assert_eq!(
            sr_dist_from_json(ptr::null(), &mut dist),
            SrStatus::NullArgument
        );
    }
}

#[test]
fn matrix_sample_spectrum_and_bounds() {
    unsafe {
        let json = CString::new(r#"{"kind":"rademacher"}"#).unwrap();
        let mut dist = ptr::null_mut();
        assert_eq!(sr_dist_from_json(json.as_ptr(), &mut dist), SrStatus::Ok);

        let n = 40usize;
        let mut matrix = ptr::null_mut();
        assert_eq!(
            sr_matrix_sample(dist, n, 7, 0, &mut matrix),
            SrStatus::Ok
        );
        assert_eq!(sr_matrix_n(matrix), n);

        let mut event_b = 0i32;
        assert_eq!(sr_matrix_event_b(matrix, &mut event_b), SrStatus::Ok);
        assert_eq!(event_b, 1);

        let (mut re, mut im) = (0.0f64, 0.0f64);
        assert_eq!(sr_matrix_entry(matrix, 0, 0, &mut re, &mut im), SrStatus::Ok);
        assert!((re.abs() - 1.0).abs() < 1e-15 && im == 0.0);

        let mut rho = 0.0f64;
        assert_eq!(sr_spectral_radius(matrix, &mut rho), SrStatus::Ok);
        assert!(rho > 0.0);

        let mut eig_re = vec![0.0f64; n];
        let mut eig_im = vec![0.0f64; n];
        let mut written = 0usize;
        assert_eq!(
            sr_eigenvalues(
                matrix,
                eig_re.as_mut_ptr(),
                eig_im.as_mut_ptr(),
                n,
                &mut written
            ),
            SrStatus::Ok
        );
        assert_eq!(written, n);
        let max_mod = eig_re
            .iter()
            .zip(&eig_im)
            .map(|(a, b)| (a * a + b * b).sqrt())
            .fold(0.0f64, f64::max);
        assert!((max_mod - rho).abs() < 1e-10);

        // buffer too small is a capacity error
        let mut tiny = [0.0f64; 1];
        let st = sr_eigenvalues(matrix, tiny.as_mut_ptr(), tiny.as_mut_ptr(), 1, &mut written);
        assert_eq!(st, SrStatus::Capacity);

        // bounds dominate the radius
        let mut trace = 0.0f64;
        assert_eq!(sr_trace_moment_bound(matrix, 4, &mut trace), SrStatus::Ok);
        assert!(trace >= rho * (1.0 - 1e-9));
        let mut power = 0.0f64;
        assert_eq!(sr_power_norm_bound(matrix, 4, &mut power), SrStatus::Ok);
        assert!(power >= rho * (1.0 - 1e-9));

        sr_matrix_free(matrix);
        sr_dist_free(dist);
    }
}

#[test]
fn matrix_file_round_trip() {
    unsafe {
        let json = CString::new(r#"{"kind":"gaussian_complex"}"#).unwrap();
        let mut dist = ptr::null_mut();
        assert_eq!(sr_dist_from_json(json.as_ptr(), &mut dist), SrStatus::Ok);
        let mut matrix = ptr::null_mut();
        assert_eq!(sr_matrix_sample(dist, 5, 99, 0, &mut matrix), SrStatus::Ok);

        let dir = std::env::temp_dir().join(format!("specrad-ffi-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = CString::new(dir.join("m.bin").to_str().unwrap()).unwrap();
        assert_eq!(sr_matrix_save(matrix, path.as_ptr()), SrStatus::Ok);

        let mut loaded = ptr::null_mut();
        assert_eq!(sr_matrix_load(path.as_ptr(), &mut loaded), SrStatus::Ok);
        assert_eq!(sr_matrix_n(loaded), 5);
        for i in 0..5 {
            for j in 0..5 {
                let (mut ar, mut ai, mut br, mut bi) = (0.0, 0.0, 0.0, 0.0);
                assert_eq!(sr_matrix_entry(matrix, i, j, &mut ar, &mut ai), SrStatus::Ok);
                assert_eq!(sr_matrix_entry(loaded, i, j, &mut br, &mut bi), SrStatus::Ok);
                assert_eq!((ar, ai), (br, bi));
            }
        }
        sr_matrix_free(loaded);
        sr_matrix_free(matrix);
        sr_dist_free(dist);

        // loading garbage is a parse error
        let bad = dir.join("bad.bin");
        std::fs::write(&bad, b"not a matrix").unwrap();
        let bad_c = CString::new(bad.to_str().unwrap()).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(sr_matrix_load(bad_c.as_ptr(), &mut out), SrStatus::Parse);
    }
}

#[test]
fn sparse_storage_rules() {
    unsafe {
        let json = CString::new(r#"{"kind":"sparse_toy","q":0.2,"eps":0.5}"#).unwrap();
        let mut dist = ptr::null_mut();
        assert_eq!(sr_dist_from_json(json.as_ptr(), &mut dist), SrStatus::Ok);
        let mut sparse = ptr::null_mut();
        assert_eq!(sr_matrix_sample(dist, 20, 3, 1, &mut sparse), SrStatus::Ok);
        let mut dense = ptr::null_mut();
        assert_eq!(sr_matrix_sample(dist, 20, 3, 0, &mut dense), SrStatus::Ok);
        for i in 0..20 {
            for j in 0..20 {
                let (mut ar, mut ai, mut br, mut bi) = (0.0, 0.0, 0.0, 0.0);
                sr_matrix_entry(sparse, i, j, &mut ar, &mut ai);
                sr_matrix_entry(dense, i, j, &mut br, &mut bi);
                assert_eq!((ar, ai), (br, bi));
            }
        }
        sr_matrix_free(sparse);
        sr_matrix_free(dense);
        sr_dist_free(dist);

        // sparse storage needs an atom at zero
        let json = CString::new(r#"{"kind":"rademacher"}"#).unwrap();
        let mut rad = ptr::null_mut();
        assert_eq!(sr_dist_from_json(json.as_ptr(), &mut rad), SrStatus::Ok);
        let mut m = ptr::null_mut();
        assert_eq!(sr_matrix_sample(rad, 4, 0, 1, &mut m), SrStatus::Unsupported);
        sr_dist_free(rad);
    }
}

#[test]
fn tail_bound_and_census() {
    unsafe {
        let mut v = 0.0f64;
        assert_eq!(
            sr_markov_tail_bound_ln(2, 10, 1.0, 100.0f64.ln(), &mut v),
            SrStatus::Ok
        );
        assert!((v - 2.5).abs() < 1e-12);

        let (mut labeled, mut classes, mut bound, mut ok) = (0u64, 0u64, 0.0f64, 0i32);
        assert_eq!(
            sr_even_digraph_census(5, 1, 1, &mut labeled, &mut classes, &mut bound, &mut ok),
            SrStatus::Ok
        );
        assert_eq!(labeled, 5);
        assert_eq!(classes, 1);
        assert_eq!(bound, 5.0);
        assert_eq!(ok, 1);
    }
}
