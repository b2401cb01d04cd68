//! Compiles and runs a C program against the generated header and static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "crsphere.h"

int main(void) {
    double p = 0.0, area = 0.0;
    if (crs_jacobi_p(5, 2.0, 3.0, 1.0, &p) != CRS_STATUS_OK || fabs(p - 21.0) > 1e-12) return 1;
    if (crs_surface_area(1, &area) != CRS_STATUS_OK || fabs(area - 2.0 * M_PI * M_PI) > 1e-12) return 2;
    if (crs_surface_area(1, NULL) != CRS_STATUS_NULL_POINTER) return 3;
    char msg[128];
    if (crs_last_error_message(msg, sizeof msg) == 0) return 4;
    CrsCoefficients *u = crs_coefficients_new(2);
    crs_coefficients_add(u, 3, 1, 1.0, 0.0);
    CrsNorms norms;
    if (crs_norms(u, 1.0, 1.0, 4.0, &norms) != CRS_STATUS_OK || !(norms.l2 > 0.0)) return 5;
    crs_coefficients_free(u);
    CrsKernelScan *scan = NULL;
    if (crs_kernel_scan(0.01, 0.3, 1, CRS_LOCALIZATION_FULL, 6, 4, &scan) != CRS_STATUS_OK) return 6;
    double sup, w, th;
    crs_kernel_scan_sup(scan, &sup, &w, &th);
    crs_kernel_scan_free(scan);
    printf("%s %.6f\n", crs_version(), sup);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Ok(exe) = std::env::current_exe() else { return };
    let profile_dir = exe.parent().and_then(|p| p.parent()).expect("target/<profile>");
    let lib = profile_dir.join("libcrsphere_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler or static library");
        return;
    }
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = std::env::temp_dir().join(format!("crsphere-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let bin = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .arg("-std=c11")
        .arg("-D_DEFAULT_SOURCE")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with(env!("CARGO_PKG_VERSION")));
    std::fs::remove_dir_all(&dir).unwrap();
}
