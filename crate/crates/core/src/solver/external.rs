//! Bridge to external DIMACS solvers speaking the competition output
//! protocol (`s SATISFIABLE` / `s UNSATISFIABLE` verdict line, `v` model
//! lines closed by 0, exit codes 10/20).

use std::io::Read;
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

use tempfile::NamedTempFile;
use thiserror::Error;

use super::{SolveResult, SolveStats, Verdict};
use crate::cnf::{write_dimacs_to, CnfFormula, PartialAssignment};

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("solver executable {command:?} not found")]
    MissingExecutable { command: String },
    #[error("failed to run solver: {0}")]
    Spawn(String),
    #[error("i/o error talking to solver: {0}")]
    Io(String),
    #[error("solver violated the output protocol: {0}")]
    ProtocolViolation(String),
}

/// How to invoke the external solver.
///
/// `command` is split on whitespace; a `{input}` token is replaced by the
/// DIMACS file path, which is appended as the last argument when the token
/// is absent.
#[derive(Debug, Clone)]
pub struct ExternalSolverConfig {
    pub command: String,
    pub timeout: Option<Duration>,
}

impl ExternalSolverConfig {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSolverConfig {
            command: command.into(),
            timeout: None,
        }
    }

    fn argv(&self, input_path: &str) -> Vec<String> {
        let mut argv: Vec<String> = self
            .command
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut replaced = false;
        for arg in argv.iter_mut() {
            if arg == "{input}" {
                *arg = input_path.to_string();
                replaced = true;
            }
        }
        if !replaced {
            argv.push(input_path.to_string());
        }
        argv
    }
}

fn wait_with_deadline(
    child: &mut Child,
    timeout: Option<Duration>,
    started: Instant,
) -> Result<bool, ExternalError> {
    loop {
        match child
            .try_wait()
            .map_err(|e| ExternalError::Io(e.to_string()))?
        {
            Some(_) => return Ok(false),
            None => {
                if let Some(limit) = timeout {
                    if started.elapsed() >= limit {
                        let _ = child.kill();
                        let _ = child.wait();
                        return Ok(true);
                    }
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        }
    }
}

/// Runs the configured solver on the formula.
///
/// Verdicts are read from the `s` line; a satisfiable claim must come with a
/// model that verifies locally, anything else is a protocol violation.
/// Timeouts and unparseable output map to UNKNOWN (with captured
/// diagnostics), a missing executable is an error.
pub fn solve_external(
    f: &CnfFormula,
    config: &ExternalSolverConfig,
) -> Result<SolveResult, ExternalError> {
    let mut input = NamedTempFile::new().map_err(|e| ExternalError::Io(e.to_string()))?;
    write_dimacs_to(f, &mut input).map_err(|e| ExternalError::Io(e.to_string()))?;
    let input_path = input.path().to_string_lossy().into_owned();

    let argv = config.argv(&input_path);
    let started = Instant::now();
    let mut child = Command::new(&argv[0])
        .args(&argv[1..])
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| {
            if e.kind() == std::io::ErrorKind::NotFound {
                ExternalError::MissingExecutable {
                    command: argv[0].clone(),
                }
            } else {
                ExternalError::Spawn(e.to_string())
            }
        })?;

    // Drain the pipes on threads so a chatty solver cannot deadlock on a
    // full pipe buffer.
    let mut stdout_pipe = child.stdout.take().expect("stdout piped");
    let mut stderr_pipe = child.stderr.take().expect("stderr piped");
    let stdout_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stdout_pipe.read_to_string(&mut buf);
        buf
    });
    let stderr_thread = std::thread::spawn(move || {
        let mut buf = String::new();
        let _ = stderr_pipe.read_to_string(&mut buf);
        buf
    });

    let timed_out = wait_with_deadline(&mut child, config.timeout, started)?;
    let stdout = stdout_thread.join().unwrap_or_default();
    let stderr = stderr_thread.join().unwrap_or_default();
    let stats = SolveStats {
        wall: started.elapsed(),
        ..SolveStats::default()
    };

    if timed_out {
        let mut result = SolveResult::new(Verdict::Unknown, None, stats, "external");
        result.diagnostics = Some(format!(
            "killed after exceeding the {:?} timeout",
            config.timeout.unwrap()
        ));
        return Ok(result);
    }

    let mut verdict_line: Option<&str> = None;
    let mut model_ints: Vec<i64> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("s ") {
            verdict_line = Some(rest.trim());
        } else if let Some(rest) = line.strip_prefix("v ") {
            for token in rest.split_whitespace() {
                match token.parse::<i64>() {
                    Ok(x) => model_ints.push(x),
                    Err(_) => {
                        return Err(ExternalError::ProtocolViolation(format!(
                            "model line carries non-integer token {token:?}"
                        )))
                    }
                }
            }
        } else if line == "v" {
            // An empty values line is fine.
        }
    }

    match verdict_line {
        Some("SATISFIABLE") => {
            let mut model = PartialAssignment::new();
            for &x in &model_ints {
                if x == 0 {
                    continue;
                }
                let var = x.unsigned_abs() as u32;
                if var > f.num_vars() {
                    return Err(ExternalError::ProtocolViolation(format!(
                        "model mentions variable {var} beyond the instance's {}",
                        f.num_vars()
                    )));
                }
                model.set(var, x > 0);
            }
            if !f.is_satisfied_by(&model) {
                return Err(ExternalError::ProtocolViolation(
                    "claimed model does not satisfy the formula".to_string(),
                ));
            }
            Ok(SolveResult::new(
                Verdict::Sat,
                Some(model),
                stats,
                "external",
            ))
        }
        Some("UNSATISFIABLE") => Ok(SolveResult::new(Verdict::Unsat, None, stats, "external")),
        Some("UNKNOWN") | None => {
            let mut result = SolveResult::new(Verdict::Unknown, None, stats, "external");
            let mut diag = String::new();
            if verdict_line.is_none() {
                diag.push_str("no verdict line in solver output");
            } else {
                diag.push_str("solver reported UNKNOWN");
            }
            if !stderr.trim().is_empty() {
                diag.push_str("; stderr: ");
                diag.push_str(stderr.trim());
            }
            result.diagnostics = Some(diag);
            Ok(result)
        }
        Some(other) => Err(ExternalError::ProtocolViolation(format!(
            "unrecognized verdict line {other:?}"
        ))),
    }
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;
    use crate::cnf::Clause;
    use std::io::Write;
    use std::os::unix::fs::PermissionsExt;

    fn formula(num_vars: u32, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(
            num_vars,
            clauses
                .iter()
                .map(|ints| Clause::from_dimacs(ints).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn fake_solver(script_body: &str) -> NamedTempFile {
        let mut script = tempfile::Builder::new()
            .prefix("fake-solver")
            .suffix(".sh")
            .tempfile()
            .unwrap();
        writeln!(script, "#!/bin/sh\n{script_body}").unwrap();
        let mut perms = script.as_file().metadata().unwrap().permissions();
        perms.set_mode(0o755);
        script.as_file().set_permissions(perms).unwrap();
        script
    }

    #[test]
    fn parses_verdict_and_multi_line_model() {
        let script = fake_solver(
            "echo 'c some comment'\necho 's SATISFIABLE'\necho 'v 1 -2'\necho 'v 3 0'\nexit 10",
        );
        let config = ExternalSolverConfig::new(script.path().to_string_lossy());
        let f = formula(3, &[&[1, -2], &[3]]);
        let result = solve_external(&f, &config).unwrap();
        assert_eq!(result.verdict, Verdict::Sat);
        let model = result.model.unwrap();
        assert_eq!(model.get(1), Some(true));
        assert_eq!(model.get(2), Some(false));
        assert_eq!(model.get(3), Some(true));
    }

    #[test]
    fn parses_unsat() {
        let script = fake_solver("echo 's UNSATISFIABLE'\nexit 20");
        let config = ExternalSolverConfig::new(script.path().to_string_lossy());
        let result = solve_external(&formula(1, &[&[1], &[-1]]), &config).unwrap();
        assert_eq!(result.verdict, Verdict::Unsat);
    }

    #[test]
    fn timeout_maps_to_unknown() {
        let script = fake_solver("sleep 5\necho 's SATISFIABLE'");
        let config = ExternalSolverConfig {
            command: script.path().to_string_lossy().into_owned(),
            timeout: Some(Duration::from_millis(100)),
        };
        let result = solve_external(&formula(1, &[&[1]]), &config).unwrap();
        assert_eq!(result.verdict, Verdict::Unknown);
        assert!(result.diagnostics.unwrap().contains("timeout"));
    }

    #[test]
    fn missing_executable_is_an_error() {
        let config = ExternalSolverConfig::new("/nonexistent/solver-binary");
        let err = solve_external(&formula(1, &[&[1]]), &config).unwrap_err();
        assert!(matches!(err, ExternalError::MissingExecutable { .. }));
    }

    #[test]
    fn lying_sat_claim_is_a_protocol_violation() {
        let script = fake_solver("echo 's SATISFIABLE'\necho 'v -1 0'");
        let config = ExternalSolverConfig::new(script.path().to_string_lossy());
        let err = solve_external(&formula(1, &[&[1]]), &config).unwrap_err();
        assert!(matches!(err, ExternalError::ProtocolViolation(_)));
    }

    #[test]
    fn garbage_output_maps_to_unknown_with_diagnostics() {
        let script = fake_solver("echo 'segfault imminent' >&2\nexit 1");
        let config = ExternalSolverConfig::new(script.path().to_string_lossy());
        let result = solve_external(&formula(1, &[&[1]]), &config).unwrap();
        assert_eq!(result.verdict, Verdict::Unknown);
        assert!(result.diagnostics.unwrap().contains("segfault imminent"));
    }

    #[test]
    fn input_placeholder_is_substituted() {
        // `cat {input}` echoes the DIMACS back; no verdict line → UNKNOWN.
        let script = fake_solver("cat \"$1\"");
        let command = format!("{} {{input}}", script.path().to_string_lossy());
        let config = ExternalSolverConfig::new(command);
        let result = solve_external(&formula(1, &[&[1]]), &config).unwrap();
        assert_eq!(result.verdict, Verdict::Unknown);
    }
}
