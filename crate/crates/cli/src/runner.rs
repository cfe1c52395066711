//! Drives a config through its phases and maps failures to exit codes:
//!
//! - exit 2: the config or report could not be parsed (malformed JSON, wrong
//!   schema, shape errors, unparseable polynomials) — nothing is written;
//! - exit 3: the config parsed but failed validation (unresolved names,
//!   cycles, invalid ring/group/action/object/morphism data, or a `validate`
//!   task that found violations) — nothing is written except `validate`
//!   reports, which exist to carry the violation list;
//! - exit 1: a computation failed (no periodic tail in the window, no
//!   homotopy, …) or a certificate failed to re-verify;
//! - exit 0: success.
//!
//! Reports are written atomically (to a dot-temporary in the same directory,
//! then renamed), so a report file either does not exist or is complete.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use eqmf::error::{Error, Result};
use eqmf::report::{load_report, verify_report};
use eqmf::serialize::to_canonical_string;
use serde_json::Value;

use crate::config::{build_objects, ProblemConfig, TaskSpec};
use crate::tasks::{prepare, Overrides, PreparedTask, TaskReport};

/// How a `run`-style invocation selects and executes tasks.
pub struct RunOptions {
    /// Restrict to tasks of this operation (per-op subcommands).
    pub op_filter: Option<&'static str>,
    /// Run only the named task.
    pub task_name: Option<String>,
    pub overrides: Overrides,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Exit code for an error that happened while loading or validating.
fn load_stage_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Json(_) | Error::Io(_) => EXIT_PARSE,
        _ => EXIT_VALIDATION,
    }
}

fn fail(code: i32, msg: &str) -> i32 {
    eprintln!("error: {msg}");
    code
}

/// Write `contents` to `path` atomically: the file appears complete or not
/// at all.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = parent {
        fs::create_dir_all(dir)?;
    }
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let tmp = match parent {
        Some(dir) => dir.join(format!(".{file_name}.tmp")),
        None => PathBuf::from(format!(".{file_name}.tmp")),
    };
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn write_report(out_dir: &Path, task_name: &str, doc: &Value) -> std::io::Result<PathBuf> {
    let path = out_dir.join(format!("{task_name}.json"));
    write_atomic(&path, &to_canonical_string(doc))?;
    Ok(path)
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Select the tasks a `run`/per-op invocation executes, in name order.
/// Per-op subcommands on a config with no matching task synthesize a default
/// for the operations that need no arguments.
fn select_tasks<'c>(
    cfg: &'c ProblemConfig,
    opts: &RunOptions,
    synthesized: &'c mut BTreeMap<String, TaskSpec>,
) -> Result<BTreeMap<String, &'c TaskSpec>> {
    if let Some(name) = &opts.task_name {
        let task = cfg
            .tasks
            .get(name)
            .ok_or_else(|| Error::Validation(format!("config defines no task named `{name}`")))?;
        if let Some(op) = opts.op_filter {
            if task.op() != op {
                return Err(Error::Validation(format!(
                    "task `{name}` is a {} task, not {op}",
                    task.op()
                )));
            }
        }
        return Ok(BTreeMap::from([(name.clone(), task)]));
    }
    let mut selected: BTreeMap<String, &TaskSpec> = cfg
        .tasks
        .iter()
        .filter(|(_, t)| opts.op_filter.map_or(true, |op| t.op() == op))
        .map(|(n, t)| (n.clone(), t))
        .collect();
    if selected.is_empty() {
        if let Some(op) = opts.op_filter {
            let default = match op {
                "validate" => Some(TaskSpec::Validate { object: None }),
                "kstab" => Some(TaskSpec::Kstab { max_steps: None, degree_bound: None }),
                _ => None,
            };
            let spec = default.ok_or_else(|| {
                Error::Validation(format!("config defines no `{op}` task"))
            })?;
            synthesized.insert(op.to_string(), spec);
            selected = synthesized.iter().map(|(n, t)| (n.clone(), t)).collect();
        }
    }
    Ok(selected)
}

/// Load a config, validate everything the selected tasks touch, execute
/// them, and write one report per task. Returns the process exit code.
pub fn run_config(config_path: &Path, opts: &RunOptions) -> i32 {
    let doc = match read_json(config_path) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_PARSE, &format!("{}: {e}", config_path.display())),
    };
    let cfg = match ProblemConfig::from_json(&doc) {
        Ok(c) => c,
        Err(e) => return fail(load_stage_code(&e), &format!("{}: {e}", config_path.display())),
    };
    let mut synthesized = BTreeMap::new();
    let selected = match select_tasks(&cfg, opts, &mut synthesized) {
        Ok(s) => s,
        Err(e) => return fail(load_stage_code(&e), &e.to_string()),
    };
    if selected.is_empty() {
        println!("no tasks to run");
        return EXIT_OK;
    }
    // Validation phase: build every needed object and check every task's
    // inputs before any task computes.
    let built = match build_objects(&cfg, &selected) {
        Ok(b) => b,
        Err(e) => return fail(load_stage_code(&e), &e.to_string()),
    };
    let mut prepared: Vec<(String, PreparedTask)> = Vec::with_capacity(selected.len());
    for (name, spec) in &selected {
        match prepare(&cfg, &built, name, spec, &opts.overrides) {
            Ok(p) => prepared.push((name.clone(), p)),
            Err(e) => return fail(load_stage_code(&e), &format!("task `{name}`: {e}")),
        }
    }
    // Compute phase.
    let seed = opts.overrides.seed.unwrap_or(cfg.seed);
    let results: Vec<(String, Result<TaskReport>)> = if opts.parallel {
        std::thread::scope(|scope| {
            let handles: Vec<_> = prepared
                .iter()
                .map(|(name, task)| {
                    let name = name.clone();
                    let handle = scope.spawn(move || task.execute(&name, seed));
                    (name, handle)
                })
                .collect();
            handles
                .into_iter()
                .map(|(name, h)| {
                    let r = h
                        .join()
                        .unwrap_or_else(|_| Err(Error::Internal("task thread panicked".into())));
                    (name, r)
                })
                .collect()
        })
    } else {
        prepared
            .iter()
            .map(|(name, task)| (name.clone(), task.execute(name, seed)))
            .collect()
    };
    let mut violations_found = false;
    let mut first_error: Option<String> = None;
    for (name, result) in &results {
        match result {
            Ok(report) => {
                let path = match write_report(&opts.out_dir, name, &report.doc) {
                    Ok(p) => p,
                    Err(e) => return fail(EXIT_COMPUTE, &format!("writing report for `{name}`: {e}")),
                };
                if report.ok {
                    println!("task {name}: ok → {}", path.display());
                } else {
                    violations_found = true;
                    println!("task {name}: violations found → {}", path.display());
                }
            }
            Err(e) => {
                if first_error.is_none() {
                    first_error = Some(format!("task `{name}`: {e}"));
                }
            }
        }
    }
    if let Some(msg) = first_error {
        return fail(EXIT_COMPUTE, &msg);
    }
    if violations_found {
        EXIT_VALIDATION
    } else {
        EXIT_OK
    }
}

/// Re-check the certificates of one or more report files. Prints one line
/// per file; side-effect-free. Exit codes: 2 for files that fail to parse,
/// 1 for failed certificates or embedded data that no longer validates,
/// 0 when everything verifies.
pub fn verify_paths(paths: &[PathBuf]) -> i32 {
    let mut worst = EXIT_OK;
    for path in paths {
        match verify_one(path) {
            Ok(summary) => {
                if let Some(first) = &summary.first_failure {
                    println!("{}: FAILED — {first}", path.display());
                    worst = worst.max(EXIT_COMPUTE);
                } else {
                    println!("{}: ok ({} checks)", path.display(), summary.checks.len());
                }
            }
            Err(e) => {
                let code = match &e {
                    Error::Parse(_) | Error::Json(_) | Error::Io(_) => EXIT_PARSE,
                    _ => EXIT_COMPUTE,
                };
                println!("{}: FAILED — {e}", path.display());
                worst = worst.max(code);
            }
        }
    }
    worst
}

fn verify_one(path: &Path) -> Result<eqmf::report::VerifySummary> {
    let doc = read_json(path)?;
    let loaded = load_report(&doc)?;
    verify_report(&loaded)
}
