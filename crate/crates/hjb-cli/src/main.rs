//! Benchmark CLI: single runs, suites from a JSON config, and an audit dump
//! of the indicator matrices.

use std::path::PathBuf;
use std::process::ExitCode;

use hjb::harness::{execute_run, load_suite_file, run_suite, RunConfig};
use hjb::recon::derive_indicator_forms;

const USAGE: &str = "\
usage:
  hjb run --test {1..5} --n N --mode {cweno,cwenoz,baseline}
          [--dt-ratio R] [--final-time T] [--epsilon E] [--l L] [--d D]
          [--out DIR] [--threads K] [--seed-free] [--snapshots]
  hjb suite --config FILE [--out DIR]
  hjb forms --dump [--dim {1,2}]

run    executes one benchmark and prints its metrics; with --out it also
       writes the per-cell reconstruction counts (and the reachable-set
       table for the constrained problem)
suite  executes every run in the JSON config and writes errors.csv,
       counts_<test>_<n>.csv, reach_<test>_<n>.csv and gains.csv
forms  prints the oscillation-indicator matrices as exact rationals
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            eprintln!();
            eprint!("{USAGE}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), String> {
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("suite") => cmd_suite(&args[1..]),
        Some("forms") => cmd_forms(&args[1..]),
        Some("--help" | "-h" | "help") => {
            print!("{USAGE}");
            Ok(())
        }
        Some(other) => Err(format!("unknown subcommand '{other}'")),
        None => Err("missing subcommand".into()),
    }
}

struct Flags<'a> {
    args: &'a [String],
    used: Vec<bool>,
}

impl<'a> Flags<'a> {
    fn new(args: &'a [String]) -> Self {
        Flags {
            args,
            used: vec![false; args.len()],
        }
    }

    fn value_of(&mut self, name: &str) -> Result<Option<&'a str>, String> {
        for i in 0..self.args.len() {
            if self.args[i] == name {
                self.used[i] = true;
                let v = self
                    .args
                    .get(i + 1)
                    .ok_or(format!("{name} needs a value"))?;
                self.used[i + 1] = true;
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    fn flag(&mut self, name: &str) -> bool {
        for i in 0..self.args.len() {
            if self.args[i] == name {
                self.used[i] = true;
                return true;
            }
        }
        false
    }

    fn finish(self) -> Result<(), String> {
        for (i, used) in self.used.iter().enumerate() {
            if !used {
                return Err(format!("unrecognized argument '{}'", self.args[i]));
            }
        }
        Ok(())
    }
}

fn parse<T: std::str::FromStr>(name: &str, v: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    v.parse().map_err(|e| format!("bad value for {name}: {e}"))
}

fn cmd_run(args: &[String]) -> Result<(), String> {
    let mut flags = Flags::new(args);
    let test: u32 = parse(
        "--test",
        flags.value_of("--test")?.ok_or("--test is required")?,
    )?;
    let n: usize = parse("--n", flags.value_of("--n")?.ok_or("--n is required")?)?;
    let mode = flags
        .value_of("--mode")?
        .ok_or("--mode is required")?
        .to_string();

    let mut cfg = RunConfig::new(
        test,
        n,
        hjb::recon::ReconMode::parse(&mode).map_err(|e| e.to_string())?,
    );
    if let Some(v) = flags.value_of("--dt-ratio")? {
        cfg.dt_ratio = Some(parse("--dt-ratio", v)?);
    }
    if let Some(v) = flags.value_of("--final-time")? {
        cfg.final_time = Some(parse("--final-time", v)?);
    }
    if let Some(v) = flags.value_of("--epsilon")? {
        cfg.epsilon = Some(parse("--epsilon", v)?);
    }
    if let Some(v) = flags.value_of("--l")? {
        cfg.l = Some(parse("--l", v)?);
    }
    if let Some(v) = flags.value_of("--d")? {
        cfg.d = Some(parse("--d", v)?);
    }
    if let Some(v) = flags.value_of("--threads")? {
        cfg.threads = parse("--threads", v)?;
    }
    let out: Option<PathBuf> = flags.value_of("--out")?.map(PathBuf::from);
    cfg.seed_free = flags.flag("--seed-free");
    cfg.snapshots = flags.flag("--snapshots");
    flags.finish()?;

    if let Some(dir) = &out {
        cfg.out_dir = Some(dir.clone());
        let report = run_suite(std::slice::from_ref(&cfg), dir).map_err(|e| e.to_string())?;
        print_rows(&report.rows);
        println!("wrote {}", dir.display());
    } else {
        let (row, res) = execute_run(&cfg, None).map_err(|e| e.to_string())?;
        print_rows(std::slice::from_ref(&row));
        println!(
            "steps {}   final time {}   field range [{:.6e}, {:.6e}]",
            res.steps,
            res.final_field.time,
            res.final_field.min(),
            res.final_field.max()
        );
    }
    Ok(())
}

fn cmd_suite(args: &[String]) -> Result<(), String> {
    let mut flags = Flags::new(args);
    let config = PathBuf::from(flags.value_of("--config")?.ok_or("--config is required")?);
    let out_flag: Option<PathBuf> = flags.value_of("--out")?.map(PathBuf::from);
    flags.finish()?;

    let (runs, out_file) = load_suite_file(&config).map_err(|e| e.to_string())?;
    let out = out_flag
        .or(out_file)
        .unwrap_or_else(|| PathBuf::from("out"));
    let report = run_suite(&runs, &out).map_err(|e| e.to_string())?;
    print_rows(&report.rows);
    for g in &report.gains {
        println!(
            "gain: test {} n {} {} vs baseline: {:+.2}%",
            g.test, g.n, g.mode, g.percent_gain
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_forms(args: &[String]) -> Result<(), String> {
    let mut flags = Flags::new(args);
    let dump = flags.flag("--dump");
    let dim: Option<usize> = flags
        .value_of("--dim")?
        .map(|v| parse("--dim", v))
        .transpose()?;
    flags.finish()?;
    if !dump {
        return Err("forms only supports --dump".into());
    }
    match dim {
        Some(d @ (1 | 2)) => print!("{}", derive_indicator_forms(d).dump()),
        Some(d) => return Err(format!("bad --dim {d}")),
        None => {
            print!("{}", derive_indicator_forms(1).dump());
            print!("{}", derive_indicator_forms(2).dump());
        }
    }
    Ok(())
}

fn print_rows(rows: &[hjb::harness::MetricsRow]) {
    println!(
        "{:>4} {:>9} {:>7} {:>13} {:>7} {:>10} {:>12} {:>12} {:>12}",
        "test", "mode", "n", "l1_error", "order", "wall_s", "weights", "recon_evals", "min_evals"
    );
    for r in rows {
        println!(
            "{:>4} {:>9} {:>7} {:>13} {:>7} {:>10.3} {:>12} {:>12} {:>12}",
            r.test,
            r.mode,
            r.n,
            r.l1_error
                .map(|e| format!("{e:.6e}"))
                .unwrap_or_else(|| "-".into()),
            r.order
                .map(|o| format!("{o:.3}"))
                .unwrap_or_else(|| "-".into()),
            r.wall_seconds,
            r.weight_computations,
            r.recon_evaluations,
            r.minimizer_evaluations
        );
    }
}
