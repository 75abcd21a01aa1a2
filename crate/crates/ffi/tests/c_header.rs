//! Compiles and runs a small C program against the generated header and the
//! static library, when a C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "zeromode.h"

int main(void) {
    ZmBootstrap *run = NULL;
    if (zm_bootstrap_run("6", "1/2", &run) != ZM_STATUS_OK) return 10;
    uint32_t steps = 0;
    if (zm_bootstrap_steps(run, &steps) != ZM_STATUS_OK || steps != 7) return 11;
    int64_t num; uint64_t den;
    if (zm_bootstrap_epsilon(run, 7, &num, &den) != ZM_STATUS_OK || num != 4 || den != 1) return 12;
    zm_bootstrap_free(run);

    ZmField *f = NULL;
    if (zm_field_load("no-such-field", &f) != ZM_STATUS_INVALID_ARGUMENT || f != NULL) return 13;
    char msg[128];
    if (zm_last_error_message(msg, sizeof msg) == 0 || strstr(msg, "no-such-field") == NULL) return 14;
    if (zm_field_load("loss-yau", &f) != ZM_STATUS_OK) return 15;
    double x[3] = {0.0, 0.0, 0.0}, b[3];
    if (zm_field_eval(f, x, b) != ZM_STATUS_OK) return 16;
    zm_field_free(f);
    printf("%s %.1f\n", zm_version(), b[2]);
    return 0;
}
"#;

#[test]
fn c_program_links_against_static_library() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // The test binary lives in target/<profile>/deps; the archive one level up.
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().parent().unwrap().join("libzeromode_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with(env!("CARGO_PKG_VERSION")), "{text}");
}
