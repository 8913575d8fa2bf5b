#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Duration;

use blocksens::search::{SearchConfig, SolverCommand, SolverConfig, REFERENCE_SOLVER, SOLVER_ENV};

/// The solver under test: `$BLOCKSENS_SOLVER` if set, otherwise the
/// workspace's reference solver (built on demand).
pub fn solver_command() -> SolverCommand {
    static CMD: OnceLock<SolverCommand> = OnceLock::new();
    CMD.get_or_init(|| {
        if let Ok(template) = std::env::var(SOLVER_ENV) {
            if !template.trim().is_empty() {
                return SolverCommand::parse(&template).expect("solver template");
            }
        }
        let path = reference_solver_path();
        if !path.is_file() {
            let status = Command::new(env!("CARGO"))
                .args(["build", "-p", REFERENCE_SOLVER])
                .current_dir(env!("CARGO_MANIFEST_DIR"))
                .status()
                .expect("run cargo");
            assert!(status.success(), "building {REFERENCE_SOLVER} failed");
        }
        SolverCommand::parse(path.to_str().unwrap()).unwrap()
    })
    .clone()
}

fn reference_solver_path() -> PathBuf {
    // target/<profile>/deps/<test-binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let name = format!("{REFERENCE_SOLVER}{}", std::env::consts::EXE_SUFFIX);
    let here = profile_dir.join(&name);
    if here.is_file() {
        return here;
    }
    // `cargo build` without a profile flag lands in target/debug
    profile_dir.parent().unwrap().join("debug").join(name)
}

pub fn solver_config(workers: usize) -> SolverConfig {
    SolverConfig::new(solver_command(), Duration::from_secs(120), workers).unwrap()
}

pub fn search_config(workers: usize) -> SearchConfig {
    SearchConfig::new(solver_config(workers))
}

/// Write an executable shell script standing in for a solver.
#[cfg(unix)]
pub fn fake_solver(dir: &std::path::Path, name: &str, body: &str) -> SolverCommand {
    use std::os::unix::fs::PermissionsExt;
    let path = dir.join(name);
    std::fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    SolverCommand::parse(path.to_str().unwrap()).unwrap()
}
