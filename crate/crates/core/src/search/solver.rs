//! External solver processes.
//!
//! The solver reads a DIMACS file named on its command line and reports in
//! SAT-competition style: an `s SATISFIABLE` / `s UNSATISFIABLE` line, `v`
//! lines carrying the model, exit code 10 / 20 as equivalent signals.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::cnf::{emit_dimacs, CnfInstance, Literal};
use crate::error::{Error, Result};

/// Environment variable consulted for the solver command when no flag is given.
pub const SOLVER_ENV: &str = "BLOCKSENS_SOLVER";
/// Stands for the instance path inside a command template.
pub const FILE_PLACEHOLDER: &str = "{}";
/// Name of the bundled reference solver binary.
pub const REFERENCE_SOLVER: &str = "blocksens-refsat";
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverCommand {
    program: PathBuf,
    args: Vec<String>,
}

impl SolverCommand {
    /// Split a whitespace-separated template. `{}` marks the instance path;
    /// without it the path is appended.
    pub fn parse(template: &str) -> Result<Self> {
        let mut words = template.split_whitespace();
        let program = words
            .next()
            .ok_or_else(|| Error::Config("empty solver command".into()))?;
        let mut args: Vec<String> = words.map(str::to_owned).collect();
        if !args.iter().any(|a| a.contains(FILE_PLACEHOLDER)) {
            args.push(FILE_PLACEHOLDER.to_owned());
        }
        Ok(Self {
            program: program.into(),
            args,
        })
    }

    pub fn program(&self) -> &Path {
        &self.program
    }

    fn command_for(&self, instance_path: &Path) -> Command {
        let path = instance_path.to_string_lossy();
        let mut cmd = Command::new(&self.program);
        cmd.args(self.args.iter().map(|a| a.replace(FILE_PLACEHOLDER, &path)));
        cmd
    }

    /// Flag first, then [`SOLVER_ENV`], then the reference solver installed
    /// next to the running executable.
    pub fn resolve(flag: Option<&str>) -> Result<Self> {
        if let Some(template) = flag {
            return Self::parse(template);
        }
        if let Ok(template) = std::env::var(SOLVER_ENV) {
            if !template.trim().is_empty() {
                return Self::parse(&template);
            }
        }
        if let Some(path) = sibling_reference_solver() {
            return Ok(Self {
                program: path,
                args: vec![FILE_PLACEHOLDER.to_owned()],
            });
        }
        Err(Error::Config(format!(
            "no solver configured: pass --solver-cmd, set {SOLVER_ENV}, or build {REFERENCE_SOLVER}"
        )))
    }
}

fn sibling_reference_solver() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let name = format!("{REFERENCE_SOLVER}{}", std::env::consts::EXE_SUFFIX);
    // test binaries live one level down, in target/<profile>/deps
    exe.ancestors()
        .skip(1)
        .take(2)
        .map(|dir| dir.join(&name))
        .find(|p| p.is_file())
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub command: SolverCommand,
    time_limit: Duration,
    workers: usize,
}

impl SolverConfig {
    pub fn new(command: SolverCommand, time_limit: Duration, workers: usize) -> Result<Self> {
        if time_limit.is_zero() {
            return Err(Error::Config("time limit must be positive".into()));
        }
        if workers == 0 {
            return Err(Error::Config("need at least one worker".into()));
        }
        Ok(Self {
            command,
            time_limit,
            workers,
        })
    }

    pub fn time_limit(&self) -> Duration {
        self.time_limit
    }

    pub fn workers(&self) -> usize {
        self.workers
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverStatus {
    Sat,
    Unsat,
    Unknown,
}

impl SolverStatus {
    pub fn is_complete(self) -> bool {
        self != SolverStatus::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverVerdict {
    pub status: SolverStatus,
    /// Present iff `status` is `Sat`.
    pub model: Option<Vec<Literal>>,
    pub elapsed: Duration,
}

/// Interpret solver stdout together with its exit code.
pub fn parse_solver_output(
    stdout: &str,
    exit_code: Option<i32>,
) -> Result<(SolverStatus, Option<Vec<Literal>>)> {
    let mut status = None;
    let mut model = Vec::new();
    let mut saw_values = false;
    for line in stdout.lines() {
        let line = line.trim_end();
        if let Some(rest) = line.strip_prefix("s ") {
            let parsed = match rest.trim() {
                "SATISFIABLE" => SolverStatus::Sat,
                "UNSATISFIABLE" => SolverStatus::Unsat,
                "UNKNOWN" | "INDETERMINATE" => SolverStatus::Unknown,
                other => return Err(Error::Protocol(format!("unrecognized status line 's {other}'"))),
            };
            if status.is_some_and(|s| s != parsed) {
                return Err(Error::Protocol("conflicting status lines".into()));
            }
            status = Some(parsed);
        } else if let Some(rest) = line.strip_prefix('v') {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                continue;
            }
            saw_values = true;
            for tok in rest.split_whitespace() {
                let lit: Literal = tok
                    .parse()
                    .map_err(|_| Error::Protocol(format!("bad value token {tok:?}")))?;
                if lit != 0 {
                    model.push(lit);
                }
            }
        }
    }
    let from_exit = match exit_code {
        Some(10) => Some(SolverStatus::Sat),
        Some(20) => Some(SolverStatus::Unsat),
        _ => None,
    };
    let status = match (status, from_exit) {
        (Some(s), Some(e)) if s != e => {
            return Err(Error::Protocol(format!(
                "status line says {s:?} but exit code says {e:?}"
            )))
        }
        (Some(s), _) => s,
        (None, Some(e)) => e,
        (None, None) => {
            return Err(Error::Protocol(format!(
                "no status line and exit code {exit_code:?} carries no verdict"
            )))
        }
    };
    match status {
        SolverStatus::Sat if !saw_values => {
            Err(Error::Protocol("satisfiable without a model".into()))
        }
        SolverStatus::Sat => Ok((status, Some(model))),
        _ => Ok((status, None)),
    }
}

pub(crate) enum RunOutcome {
    Finished(SolverVerdict),
    Cancelled,
}

/// Solve `instance` in a separate process. A run that exceeds the time limit
/// yields `Unknown`.
pub fn run_solver(instance: &CnfInstance, config: &SolverConfig) -> Result<SolverVerdict> {
    match run_solver_until(instance, config, &|| false)? {
        RunOutcome::Finished(v) => Ok(v),
        RunOutcome::Cancelled => unreachable!("never cancelled"),
    }
}

/// As [`run_solver`], but the process is killed as soon as `cancelled`
/// returns true.
pub(crate) fn run_solver_until(
    instance: &CnfInstance,
    config: &SolverConfig,
    cancelled: &dyn Fn() -> bool,
) -> Result<RunOutcome> {
    let mut file = tempfile::Builder::new()
        .prefix("blocksens-")
        .suffix(".cnf")
        .tempfile()?;
    file.write_all(emit_dimacs(instance).as_bytes())?;
    file.flush()?;

    let start = Instant::now();
    let mut command = config.command.command_for(file.path());
    #[cfg(unix)]
    {
        use std::os::unix::process::CommandExt;
        // own process group, so wrapper scripts can be stopped as a whole
        command.process_group(0);
    }
    let mut child = command
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| {
            Error::Config(format!(
                "cannot start solver {}: {e}",
                config.command.program.display()
            ))
        })?;
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = thread::spawn(move || {
        let mut buf = String::new();
        stdout.read_to_string(&mut buf).map(|_| buf)
    });

    let deadline = start + config.time_limit;
    let mut pause = Duration::from_millis(1);
    let exit = loop {
        if cancelled() || Instant::now() >= deadline {
            let was_cancelled = cancelled();
            kill_tree(&mut child);
            let _ = child.wait();
            // a surviving grandchild may still hold the pipe; leave the reader detached
            drop(reader);
            if was_cancelled {
                return Ok(RunOutcome::Cancelled);
            }
            return Ok(RunOutcome::Finished(SolverVerdict {
                status: SolverStatus::Unknown,
                model: None,
                elapsed: start.elapsed(),
            }));
        }
        if let Some(status) = child.try_wait()? {
            break status;
        }
        thread::sleep(pause);
        pause = (pause * 2).min(Duration::from_millis(20));
    };
    let elapsed = start.elapsed();
    let output = reader
        .join()
        .map_err(|_| Error::Protocol("solver output reader panicked".into()))??;
    let (status, model) = parse_solver_output(&output, exit.code())?;
    Ok(RunOutcome::Finished(SolverVerdict {
        status,
        model,
        elapsed,
    }))
}

fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    if let Ok(pid) = libc::pid_t::try_from(child.id()) {
        // SAFETY: signalling a process group we created; no memory is touched
        unsafe {
            libc::kill(-pid, libc::SIGKILL);
        }
    }
    let _ = child.kill();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn template_placeholder() {
        let c = SolverCommand::parse("kissat -q").unwrap();
        assert_eq!(c.args, vec!["-q", "{}"]);
        let c = SolverCommand::parse("sh -c 'x' --in={}").unwrap();
        assert_eq!(c.args.last().unwrap(), "--in={}");
        assert!(SolverCommand::parse("   ").is_err());
    }

    #[test]
    fn config_invariants() {
        let cmd = SolverCommand::parse("true").unwrap();
        assert!(SolverConfig::new(cmd.clone(), Duration::ZERO, 1).is_err());
        assert!(SolverConfig::new(cmd.clone(), Duration::from_secs(1), 0).is_err());
        assert!(SolverConfig::new(cmd, Duration::from_secs(1), 4).is_ok());
    }

    #[test]
    fn parses_competition_output() {
        let (s, m) = parse_solver_output("c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n", Some(10)).unwrap();
        assert_eq!(s, SolverStatus::Sat);
        assert_eq!(m.unwrap(), vec![1, -2, 3]);

        let (s, m) = parse_solver_output("s UNSATISFIABLE\n", Some(20)).unwrap();
        assert_eq!((s, m), (SolverStatus::Unsat, None));

        let (s, _) = parse_solver_output("s UNKNOWN\n", Some(0)).unwrap();
        assert_eq!(s, SolverStatus::Unknown);
    }

    #[test]
    fn exit_codes_alone_are_accepted() {
        assert_eq!(parse_solver_output("", Some(20)).unwrap().0, SolverStatus::Unsat);
        assert_eq!(parse_solver_output("v -1 0\n", Some(10)).unwrap().0, SolverStatus::Sat);
    }

    #[test]
    fn protocol_violations() {
        for (out, code) in [
            ("garbage\n", Some(0)),
            ("s SATISFIABLE\n", Some(10)),
            ("s SATISFIABLE\nv 1 0\n", Some(20)),
            ("s SATISFIABLE\ns UNSATISFIABLE\n", None),
            ("s MAYBE\n", None),
            ("s SATISFIABLE\nv 1 x 0\n", Some(10)),
        ] {
            assert!(
                matches!(parse_solver_output(out, code), Err(Error::Protocol(_))),
                "{out:?}"
            );
        }
    }

    #[test]
    fn missing_executable_is_a_config_error() {
        let cmd = SolverCommand::parse("/nonexistent/solver-binary").unwrap();
        let cfg = SolverConfig::new(cmd, Duration::from_secs(5), 1).unwrap();
        let inst = CnfInstance::from_clauses(1, vec![vec![1]]).unwrap();
        assert!(matches!(run_solver(&inst, &cfg), Err(Error::Config(_))));
    }
}
