use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use clap::Args;

use crate::record::{read_records, write_records, RunRecord};
use crate::{EXIT_USAGE, SolverFlags};

#[derive(Args)]
pub struct BenchArgs {
    /// Directory searched (non-recursively) for `.smt2` files.
    dir: PathBuf,
    /// Comma-separated variant names.
    #[arg(long, value_delimiter = ',', default_value = "baseline")]
    variants: Vec<String>,
    /// Per-run wall-clock budget, enforced by killing the subprocess.
    #[arg(long, default_value_t = 60_000)]
    timeout_ms: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value = "results.csv")]
    out: PathBuf,
    /// Write 0 for wall_ms so that reruns are byte-identical.
    #[arg(long)]
    omit_timing: bool,
    #[arg(long)]
    max_apx_cells: Option<usize>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn instances(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "smt2"))
        .collect();
    v.sort();
    Ok(v)
}

fn run_one(exe: &Path, instance: &Path, variant: &str, args: &BenchArgs, scratch: &Path) -> RunRecord {
    let name = instance.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned());
    let stats = scratch.join(format!("{name}.{variant}.csv"));
    let mut cmd = Command::new(exe);
    cmd.arg("solve")
        .arg(instance)
        .args(["--variant", variant])
        .args(["--timeout-ms", &args.timeout_ms.to_string()])
        .args(["--seed", &args.seed.to_string()])
        .arg("--stats")
        .arg(&stats)
        .stdout(Stdio::null())
        .stderr(Stdio::null());
    if let Some(n) = args.max_apx_cells {
        cmd.args(["--max-apx-cells", &n.to_string()]);
    }
    if let Some(n) = args.max_steps {
        cmd.args(["--max-steps", &n.to_string()]);
    }
    let started = Instant::now();
    let deadline = Duration::from_millis(args.timeout_ms);
    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(_) => return RunRecord::bare(&name, variant, "error", 0),
    };
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if started.elapsed() > deadline => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(2)),
            Err(_) => break None,
        }
    };
    let elapsed = started.elapsed().as_millis() as u64;
    let Some(status) = status else {
        return RunRecord::bare(&name, variant, "timeout", elapsed.max(args.timeout_ms));
    };
    let row = match (status.code(), read_records(&stats)) {
        (Some(10 | 20 | 0), Ok(rows)) if rows.len() == 1 => {
            let mut r = rows.into_iter().next().unwrap();
            r.instance = name.clone();
            r.variant = variant.to_string();
            if r.result == "timeout" {
                r.wall_ms = r.wall_ms.max(args.timeout_ms);
            }
            r
        }
        _ => RunRecord::bare(&name, variant, "error", elapsed),
    };
    let _ = std::fs::remove_file(&stats);
    row
}

pub fn run(args: &BenchArgs) -> u8 {
    for v in &args.variants {
        let flags = SolverFlags {
            variant: v.clone(),
            max_apx_cells: None,
            dynamic_c: None,
            dynamic_d: None,
            timeout_ms: None,
            max_steps: None,
            seed: 0,
        };
        if let Err(e) = flags.config() {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    let files = match instances(&args.dir) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot list {}: {e}", args.dir.display());
            return EXIT_USAGE;
        }
    };
    let exe = match std::env::current_exe() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot locate the solver executable: {e}");
            return EXIT_USAGE;
        }
    };
    let scratch = std::env::temp_dir().join(format!("nlcell-bench-{}", std::process::id()));
    if let Err(e) = std::fs::create_dir_all(&scratch) {
        eprintln!("error: cannot create {}: {e}", scratch.display());
        return EXIT_USAGE;
    }

    let mut queue: Vec<(PathBuf, String)> = Vec::new();
    for f in &files {
        for v in &args.variants {
            queue.push((f.clone(), v.clone()));
        }
    }
    queue.reverse();
    let queue = Mutex::new(queue);
    let rows = Mutex::new(Vec::new());
    std::thread::scope(|s| {
        for _ in 0..args.jobs.max(1) {
            s.spawn(|| loop {
                let Some((f, v)) = queue.lock().unwrap().pop() else {
                    break;
                };
                let row = run_one(&exe, &f, &v, args, &scratch);
                rows.lock().unwrap().push(row);
            });
        }
    });
    let _ = std::fs::remove_dir_all(&scratch);

    let mut rows = rows.into_inner().unwrap();
    rows.sort_by(|a, b| (&a.instance, &a.variant).cmp(&(&b.instance, &b.variant)));
    if args.omit_timing {
        rows.iter_mut().for_each(|r| r.wall_ms = 0);
    }
    if let Err(e) = write_records(&args.out, &rows) {
        eprintln!("error: cannot write {}: {e}", args.out.display());
        return EXIT_USAGE;
    }
    0
}
