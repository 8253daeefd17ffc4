//! Run configuration, error/order metrics, and CSV emission for benchmark
//! studies.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::grid::Field;
use crate::problems::{make_test, ExactSolution};
use crate::recon::ReconMode;
use crate::solver::{run, RunOptions, RunResult};
use crate::{Error, Result};

/// One benchmark run as configured from the CLI or a JSON suite file.
/// Optional fields fall back to the benchmark's published discretization.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub test: u32,
    /// nodes along x; y follows from square cells in 2D
    pub n: usize,
    /// "cweno" | "cwenoz" | "baseline"
    pub mode: String,
    #[serde(default)]
    pub dt_ratio: Option<f64>,
    #[serde(default)]
    pub final_time: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    /// weight exponent l
    #[serde(default)]
    pub l: Option<i32>,
    /// low-order linear coefficient d
    #[serde(default)]
    pub d: Option<f64>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub snapshots: bool,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default)]
    pub seed_free: bool,
}

fn default_threads() -> usize {
    1
}

impl RunConfig {
    pub fn new(test: u32, n: usize, mode: ReconMode) -> Self {
        RunConfig {
            test,
            n,
            mode: mode.name().to_string(),
            dt_ratio: None,
            final_time: None,
            epsilon: None,
            l: None,
            d: None,
            out_dir: None,
            snapshots: false,
            threads: 1,
            seed_free: false,
        }
    }

    pub fn options(&self) -> Result<RunOptions> {
        let mut opts = RunOptions::new(self.n, ReconMode::parse(&self.mode)?);
        opts.dt_ratio = self.dt_ratio;
        opts.final_time = self.final_time;
        opts.epsilon = self.epsilon;
        opts.exponent = self.l;
        opts.d_low = self.d;
        opts.threads = self.threads.max(1);
        opts.snapshots = self.snapshots;
        opts.nm.seed_coarse = !self.seed_free;
        Ok(opts)
    }
}

/// One row of `errors.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub test: u32,
    pub mode: String,
    pub n: usize,
    /// empty for problems without an exact solution
    pub l1_error: Option<f64>,
    /// empty for the coarsest grid of a (test, mode) series
    pub order: Option<f64>,
    pub wall_seconds: f64,
    pub weight_computations: u64,
    pub recon_evaluations: u64,
    pub minimizer_evaluations: u64,
}

/// Discrete L1 norm of the nodal error against the exact solution at time `t`.
pub fn l1_error(u: &Field, exact: &ExactSolution, t: f64) -> f64 {
    let grid = &u.grid;
    let cell_measure = grid.dx.powi(grid.dim as i32);
    let mut sum = 0.0;
    for iy in 0..grid.n[1] {
        for ix in 0..grid.n[0] {
            let p = grid.node_point([ix, iy]);
            sum += (u.value([ix, iy]) - (exact.eval)(t, p)).abs();
        }
    }
    cell_measure * sum
}

/// Observed orders between consecutive grids, one entry per refinement;
/// `h = 1/(n-1)`. Zero errors report an infinite order.
pub fn convergence_order(errors: &[f64], ns: &[usize]) -> Vec<f64> {
    assert_eq!(errors.len(), ns.len());
    let mut orders = Vec::new();
    for k in 1..errors.len() {
        assert!(ns[k] > ns[k - 1], "grids must be strictly refining");
        if errors[k] == 0.0 {
            orders.push(f64::INFINITY);
            continue;
        }
        let h_prev = 1.0 / (ns[k - 1] - 1) as f64;
        let h = 1.0 / (ns[k] - 1) as f64;
        orders.push((errors[k - 1] / errors[k]).ln() / (h_prev / h).ln());
    }
    orders
}

fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

pub const ERRORS_HEADER: &str =
    "test,mode,n,l1_error,order,wall_seconds,weight_computations,recon_evaluations,minimizer_evaluations";

fn errors_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(ERRORS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.test,
            r.mode,
            r.n,
            r.l1_error.map(fmt_f64).unwrap_or_default(),
            r.order.map(fmt_f64).unwrap_or_default(),
            fmt_f64(r.wall_seconds),
            r.weight_computations,
            r.recon_evaluations,
            r.minimizer_evaluations
        );
    }
    out
}

/// Parse `errors.csv` back into rows (round-trip exact at 17 significant
/// digits).
pub fn parse_errors_csv(text: &str) -> Result<Vec<MetricsRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == ERRORS_HEADER => {}
        other => return Err(Error::Config(format!("bad errors.csv header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 9 {
            return Err(Error::Config(format!("bad errors.csv row: {line}")));
        }
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>()
                    .map(Some)
                    .map_err(|e| Error::Config(format!("bad float '{s}': {e}")))
            }
        };
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Config(format!("bad float '{s}': {e}")))
        };
        let int = |s: &str| -> Result<u64> {
            s.parse::<u64>()
                .map_err(|e| Error::Config(format!("bad int '{s}': {e}")))
        };
        rows.push(MetricsRow {
            test: int(f[0])? as u32,
            mode: f[1].to_string(),
            n: int(f[2])? as usize,
            l1_error: opt(f[3])?,
            order: opt(f[4])?,
            wall_seconds: num(f[5])?,
            weight_computations: int(f[6])?,
            recon_evaluations: int(f[7])?,
            minimizer_evaluations: int(f[8])?,
        });
    }
    Ok(rows)
}

fn counts_csv(res: &RunResult) -> String {
    let grid = res.grid;
    let cells = grid.cells();
    let mut out = String::from("cell_ix,cell_iy,x,y,recon_evaluations\n");
    for cy in 0..cells[1] {
        for cx in 0..cells[0] {
            let ci = grid.cell_index([cx, cy]);
            // cell center coordinates
            let x = grid.node(0, cx) + 0.5 * grid.dx;
            let y = if grid.dim == 2 {
                grid.node(1, cy) + 0.5 * grid.dx
            } else {
                0.0
            };
            let _ = writeln!(
                out,
                "{cx},{cy},{},{},{}",
                fmt_f64(x),
                fmt_f64(y),
                res.final_step_cell_evals[ci]
            );
        }
    }
    out
}

fn reach_csv(res: &RunResult) -> Option<String> {
    let first = res.first_inclusion.as_ref()?;
    let grid = res.grid;
    let mut out = String::from("x,y,first_step\n");
    for iy in 0..grid.n[1] {
        for ix in 0..grid.n[0] {
            let p = grid.node_point([ix, iy]);
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(p[0]),
                fmt_f64(p[1]),
                first[grid.node_index([ix, iy])]
            );
        }
    }
    Some(out)
}

/// Relative speedup of a cached-weights mode against the per-point baseline
/// on the same grid.
#[derive(Clone, Debug)]
pub struct GainRow {
    pub test: u32,
    pub n: usize,
    pub mode: String,
    pub percent_gain: f64,
}

pub struct SuiteReport {
    pub rows: Vec<MetricsRow>,
    pub gains: Vec<GainRow>,
}

/// Execute one configured run and assemble its metrics row; `prev_error`
/// feeds the order column.
pub fn execute_run(cfg: &RunConfig, prev: Option<(usize, f64)>) -> Result<(MetricsRow, RunResult)> {
    let (prob, exact) = make_test(cfg.test)?;
    let res = run(&prob, &cfg.options()?)?;
    let l1 = exact.map(|e| l1_error(&res.final_field, &e, res.final_field.time));
    let order = match (prev, l1) {
        (Some((n_prev, e_prev)), Some(e)) if n_prev < cfg.n && e_prev > 0.0 && e > 0.0 => {
            Some(convergence_order(&[e_prev, e], &[n_prev, cfg.n])[0])
        }
        (Some((n_prev, e_prev)), Some(e)) if n_prev < cfg.n && e == 0.0 && e_prev > 0.0 => {
            Some(f64::INFINITY)
        }
        _ => None,
    };
    let row = MetricsRow {
        test: cfg.test,
        mode: cfg.mode.clone(),
        n: cfg.n,
        l1_error: l1,
        order,
        wall_seconds: res.march_wall,
        weight_computations: res.weight_computations,
        recon_evaluations: res.recon_evaluations,
        minimizer_evaluations: res.minimizer_evaluations,
    };
    Ok((row, res))
}

/// Run every configuration, writing `errors.csv`, per-run
/// `counts_<test>_<n>.csv`, `reach_<test>_<n>.csv` for constrained problems,
/// and `gains.csv` comparing cached modes against the baseline per grid.
pub fn run_suite(runs: &[RunConfig], out_dir: &Path) -> Result<SuiteReport> {
    fs::create_dir_all(out_dir)?;
    let mut rows: Vec<MetricsRow> = Vec::new();
    for cfg in runs {
        let prev = rows
            .iter()
            .rev()
            .find(|r| r.test == cfg.test && r.mode == cfg.mode && r.l1_error.is_some())
            .and_then(|r| r.l1_error.map(|e| (r.n, e)));
        let (row, res) = execute_run(cfg, prev)?;
        fs::write(
            out_dir.join(format!("counts_{}_{}.csv", cfg.test, cfg.n)),
            counts_csv(&res),
        )?;
        if let Some(reach) = reach_csv(&res) {
            fs::write(
                out_dir.join(format!("reach_{}_{}.csv", cfg.test, cfg.n)),
                reach,
            )?;
        }
        rows.push(row);
    }
    fs::write(out_dir.join("errors.csv"), errors_csv(&rows))?;

    let mut gains = Vec::new();
    for r in &rows {
        if r.mode == "baseline" {
            continue;
        }
        if let Some(base) = rows
            .iter()
            .find(|b| b.mode == "baseline" && b.test == r.test && b.n == r.n)
        {
            if base.wall_seconds > 0.0 {
                gains.push(GainRow {
                    test: r.test,
                    n: r.n,
                    mode: r.mode.clone(),
                    percent_gain: 100.0 * (1.0 - r.wall_seconds / base.wall_seconds),
                });
            }
        }
    }
    if !gains.is_empty() {
        let mut out = String::from("test,n,mode,percent_gain\n");
        for g in &gains {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                g.test,
                g.n,
                g.mode,
                fmt_f64(g.percent_gain)
            );
        }
        fs::write(out_dir.join("gains.csv"), out)?;
    }
    Ok(SuiteReport { rows, gains })
}

/// JSON suite file: either a bare array of runs or
/// `{"out": "...", "runs": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
pub enum SuiteFile {
    Wrapped {
        #[serde(default)]
        out: Option<PathBuf>,
        runs: Vec<RunConfig>,
    },
    Bare(Vec<RunConfig>),
}

pub fn load_suite_file(path: &Path) -> Result<(Vec<RunConfig>, Option<PathBuf>)> {
    let text = fs::read_to_string(path)?;
    let parsed: SuiteFile = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))?;
    Ok(match parsed {
        SuiteFile::Wrapped { out, runs } => (runs, out),
        SuiteFile::Bare(runs) => (runs, None),
    })
}
