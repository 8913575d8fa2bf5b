//! Compile and run a C program against the generated header and static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn static_lib() -> Option<PathBuf> {
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libblocksens_ffi.a");
    lib.is_file().then_some(lib)
}

#[cfg(unix)]
#[test]
fn c_program_links_and_runs() {
    let Ok(probe) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(probe.status.success());
    let lib = static_lib().expect("static library next to the test binary");
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg("-o")
        .arg(&exe)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "compiling the C program failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
