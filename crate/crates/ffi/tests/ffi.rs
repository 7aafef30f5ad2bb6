use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use isodeg_ffi::*;

fn last_error() -> String {
    let p = isodeg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn degree_report_roundtrip() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(isodeg_degrees(23, 0, &mut r), IsodegStatus::Ok);
        assert_eq!(isodeg_degree_report_d_lower(r), 8);
        assert_eq!(isodeg_degree_report_epsilon(r), 5);
        assert_eq!(isodeg_degree_report_image_count(r), 3);
        let mut mins = vec![];
        for i in 0..3 {
            let mut m = 0;
            assert_eq!(isodeg_degree_report_min_orbit(r, i, &mut m), IsodegStatus::Ok);
            mins.push(m);
        }
        assert_eq!(mins, vec![24, 24, 8]);
        let mut m = 0;
        assert_eq!(isodeg_degree_report_min_orbit(r, 3, &mut m), IsodegStatus::InvalidInput);

        let mut s = ptr::null_mut();
        assert_eq!(isodeg_degree_report_json(r, &mut s), IsodegStatus::Ok);
        let v: serde_json::Value = serde_json::from_slice(CStr::from_ptr(s).to_bytes()).unwrap();
        assert_eq!(v["d_lower"], 8);
        isodeg_string_free(s);
        isodeg_degree_report_free(r);
    }
}

#[test]
fn degree_errors() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(isodeg_degrees(13, 0, &mut r), IsodegStatus::DomainRefusal);
        assert!(last_error().contains("13 ∈ I_Q(1)"));
        assert_eq!(isodeg_degrees(21, 0, &mut r), IsodegStatus::InvalidInput);
        assert_eq!(isodeg_degrees(23, 4, &mut r), IsodegStatus::InvalidInput);
        assert_eq!(isodeg_degrees(23, 0, ptr::null_mut()), IsodegStatus::NullPointer);
        assert!(r.is_null());
        assert_eq!(isodeg_degree_report_d_lower(ptr::null()), 0);
        isodeg_degree_report_free(ptr::null_mut());
    }
}

#[test]
fn prime_sets() {
    let mut s = ptr::null_mut();
    unsafe {
        assert_eq!(isodeg_iq(7, false, &mut s), IsodegStatus::Ok);
        let primes: Vec<u64> = (0..isodeg_prime_set_len(s)).map(|i| isodeg_prime_set_get(s, i)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 37]);
        assert_eq!(isodeg_prime_set_get(s, 8), 0);
        isodeg_prime_set_free(s);

        assert_eq!(isodeg_iq(20, true, &mut s), IsodegStatus::Ok);
        assert!(isodeg_prime_set_contains(s, 19));
        let mut j = ptr::null_mut();
        assert_eq!(isodeg_prime_set_json(s, &mut j), IsodegStatus::Ok);
        let v: serde_json::Value = serde_json::from_slice(CStr::from_ptr(j).to_bytes()).unwrap();
        assert_eq!(v["rule"], "conditional-exact");
        isodeg_string_free(j);
        isodeg_prime_set_free(s);

        assert_eq!(isodeg_iq(0, true, &mut s), IsodegStatus::InvalidInput);
    }
}

#[test]
fn min_orbits() {
    let mut m = 0;
    unsafe {
        assert_eq!(
            isodeg_min_orbit_size(23, IsodegGroup::CnsPlusPower, 3, IsodegSpace::Lines, 0, &mut m),
            IsodegStatus::Ok
        );
        assert_eq!(m, 8);
        assert_eq!(isodeg_min_orbit_size(19, IsodegGroup::CnsPlus, 1, IsodegSpace::Lines, 0, &mut m), IsodegStatus::Ok);
        assert_eq!(m, 20);
        assert_eq!(
            isodeg_min_orbit_size(31, IsodegGroup::CnsPower, 6, IsodegSpace::Vectors, 0, &mut m),
            IsodegStatus::Ok
        );
        assert_eq!(m, 960 / 6);
        assert_eq!(isodeg_min_orbit_size(7, IsodegGroup::Borel, 0, IsodegSpace::Lines, 3, &mut m), IsodegStatus::Ok);
        assert_eq!(m, 1);
        assert_eq!(
            isodeg_min_orbit_size(23, IsodegGroup::CnsPower, 0, IsodegSpace::Lines, 0, &mut m),
            IsodegStatus::InvalidInput
        );
        assert_eq!(isodeg_min_orbit_size(23, IsodegGroup::Gl2, 1, IsodegSpace::Lines, 7, &mut m), IsodegStatus::Ok);
        assert_eq!(m, 24);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/isodeg.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for sym in [
        "typedef struct IsodegDegreeReport IsodegDegreeReport",
        "typedef struct IsodegPrimeSet IsodegPrimeSet",
        "ISODEG_STATUS_DOMAIN_REFUSAL = 3",
        "isodeg_degrees(",
        "isodeg_degree_report_free(",
        "isodeg_degree_report_json(",
        "isodeg_iq(",
        "isodeg_prime_set_get(",
        "isodeg_min_orbit_size(",
        "isodeg_string_free(",
        "isodeg_last_error(",
    ] {
        assert!(h.contains(sym), "header is missing {sym}");
    }
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include "isodeg.h"

int main(void) {
    IsodegDegreeReport *r = NULL;
    if (isodeg_degrees(23, 0, &r) != ISODEG_STATUS_OK) return 10;
    if (isodeg_degree_report_d_lower(r) != 8) return 11;
    isodeg_degree_report_free(r);
    if (isodeg_degrees(13, 0, &r) != ISODEG_STATUS_DOMAIN_REFUSAL) return 12;
    IsodegPrimeSet *s = NULL;
    if (isodeg_iq(8, false, &s) != ISODEG_STATUS_OK) return 13;
    if (!isodeg_prime_set_contains(s, 23)) return 14;
    isodeg_prime_set_free(s);
    uint64_t m = 0;
    if (isodeg_min_orbit_size(23, ISODEG_GROUP_CNS_PLUS_POWER, 3, ISODEG_SPACE_LINES, 0, &m) != ISODEG_STATUS_OK) return 15;
    printf("%llu\n", (unsigned long long)m);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_lib() {
    // target/<profile>/deps/ffi-<hash> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libisodeg_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());

    let dir = std::env::temp_dir().join(format!("isodeg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "8");
    std::fs::remove_dir_all(&dir).ok();
}
