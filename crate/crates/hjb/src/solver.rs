//! Semi-Lagrangian time marching, the obstacle-constrained variant, and
//! reachable-set extraction.
//!
//! One step evaluates, for every grid node, the minimum over discrete
//! controls of "reconstruction at the traced foot plus running cost". The
//! reconstruction polynomial of each cell is built lazily once per step and
//! shared read-only (write-once, deterministic bits), except in baseline
//! mode where it is deliberately rebuilt per evaluation point. Node updates
//! are independent, so the step can run on any number of threads with
//! bitwise identical results.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::OnceLock;
use std::time::Instant;

use crate::characteristics::{cost_integral, trace_foot, ButcherTableau, QuadratureRule};
use crate::control::{minimize, Control, NMParams};
use crate::grid::{clamp_foot, locate_cell, stencil_values, BoundaryPolicy, Field, GridSpec};
use crate::problems::ProblemSpec;
use crate::recon::{
    baseline_pointwise, derive_indicator_forms, reconstruct_cell, EpsRule, IndicatorForms,
    ReconConfig, ReconMode, ReconPolynomial,
};
use crate::{Error, Result};

/// Everything one marching step needs besides the field itself.
pub struct StepContext<'a> {
    pub t_next: f64,
    pub dt: f64,
    pub tableau: &'a ButcherTableau,
    pub rule: QuadratureRule,
    pub recon: &'a ReconConfig,
    pub policy: BoundaryPolicy,
    pub forms: &'a IndicatorForms,
    pub nm: &'a NMParams,
    pub threads: usize,
}

impl StepContext<'_> {
    pub fn validate(&self) -> Result<()> {
        if !self.rule.pairs_with(self.tableau) {
            return Err(Error::Config(format!(
                "{}-node quadrature paired with {}-stage tableau",
                self.rule.stages(),
                self.tableau.stages
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("nonpositive time step {}", self.dt)));
        }
        Ok(())
    }
}

/// Instrumentation of a single step.
#[derive(Clone, Debug, Default)]
pub struct StepStats {
    /// nonlinear-weight computations (cells built in cached mode; one per
    /// evaluation in baseline mode)
    pub weight_computations: u64,
    pub recon_evaluations: u64,
    pub minimizer_evaluations: u64,
    /// reconstruction evaluations per cell within this step
    pub per_cell_evals: Vec<u64>,
    pub wall: f64,
}

/// Advance the field by one step of the scheme.
pub fn sl_step(u: &Field, prob: &ProblemSpec, ctx: &StepContext) -> Result<(Field, StepStats)> {
    ctx.validate()?;
    debug_assert!((u.time - (ctx.t_next - ctx.dt)).abs() <= 1e-9 * ctx.t_next.abs().max(1.0));
    let start = Instant::now();
    let grid = u.grid;
    let ncells = grid.cell_count();
    let nnodes = grid.node_count();

    let cache: Vec<OnceLock<ReconPolynomial>> = (0..ncells).map(|_| OnceLock::new()).collect();
    let per_cell: Vec<AtomicU64> = (0..ncells).map(|_| AtomicU64::new(0)).collect();
    let baseline_weights = AtomicU64::new(0);
    let minimizer_evals = AtomicU64::new(0);

    let worker = |first_node: usize, chunk: &mut [f64]| -> Result<()> {
        for (offset, slot) in chunk.iter_mut().enumerate() {
            let flat = first_node + offset;
            let idx = [flat % grid.n[0], flat / grid.n[0]];
            let x = grid.node_point(idx);
            let objective = |controls: &[Control]| -> Result<f64> {
                let fr = trace_foot(ctx.tableau, prob.dynamics, x, ctx.t_next, ctx.dt, controls)?;
                let (foot, _clamped) = clamp_foot(&grid, ctx.policy, fr.foot);
                let loc = locate_cell(&grid, foot)?;
                let ci = grid.cell_index(loc.cell);
                let value = match ctx.recon.mode {
                    ReconMode::BaselinePointwise => {
                        let sv = stencil_values(u, loc.cell, ctx.policy);
                        baseline_weights.fetch_add(1, Ordering::Relaxed);
                        per_cell[ci].fetch_add(1, Ordering::Relaxed);
                        baseline_pointwise(&sv, loc.frac, ctx.recon, ctx.forms, grid.dx)
                    }
                    _ => {
                        let rp = cache[ci].get_or_init(|| {
                            reconstruct_cell(
                                &stencil_values(u, loc.cell, ctx.policy),
                                ctx.recon,
                                ctx.forms,
                                grid.dx,
                            )
                        });
                        per_cell[ci].fetch_add(1, Ordering::Relaxed);
                        rp.evaluate(loc.frac)
                    }
                };
                let cost = cost_integral(ctx.rule, prob.cost, &fr, controls, ctx.t_next, ctx.dt)?;
                Ok(value + cost)
            };
            let min = minimize(objective, &prob.control_set, ctx.tableau.stages, ctx.nm)?;
            minimizer_evals.fetch_add(min.evaluations, Ordering::Relaxed);
            *slot = min.value;
        }
        Ok(())
    };

    let mut values = vec![0.0; nnodes];
    let threads = ctx.threads.max(1).min(nnodes);
    if threads == 1 {
        worker(0, &mut values)?;
    } else {
        let chunk = nnodes.div_ceil(threads);
        let results: Vec<Result<()>> = std::thread::scope(|scope| {
            let handles: Vec<_> = values
                .chunks_mut(chunk)
                .enumerate()
                .map(|(i, slice)| scope.spawn(move || worker(i * chunk, slice)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        for r in results {
            r?;
        }
    }

    let weight_computations = match ctx.recon.mode {
        ReconMode::BaselinePointwise => baseline_weights.load(Ordering::Relaxed),
        _ => cache.iter().filter(|c| c.get().is_some()).count() as u64,
    };
    let per_cell_evals: Vec<u64> = per_cell.iter().map(|c| c.load(Ordering::Relaxed)).collect();
    let stats = StepStats {
        weight_computations,
        recon_evaluations: per_cell_evals.iter().sum(),
        minimizer_evaluations: minimizer_evals.load(Ordering::Relaxed),
        per_cell_evals,
        wall: start.elapsed().as_secs_f64(),
    };
    Ok((
        Field {
            grid,
            values,
            time: ctx.t_next,
        },
        stats,
    ))
}

/// Componentwise max with the constraint function: `max(u, g)`.
pub fn apply_obstacle(u: &Field, g_values: &Field) -> Field {
    assert_eq!(
        u.values.len(),
        g_values.values.len(),
        "obstacle grid mismatch"
    );
    let values = u
        .values
        .iter()
        .zip(&g_values.values)
        .map(|(&a, &b)| a.max(b))
        .collect();
    Field {
        grid: u.grid,
        values,
        time: u.time,
    }
}

/// Running union of "value has been nonpositive at some step".
pub fn reachable_union(mask_so_far: &[bool], u: &Field) -> Vec<bool> {
    mask_so_far
        .iter()
        .zip(&u.values)
        .map(|(&m, &v)| m || v <= 0.0)
        .collect()
}

/// Solver-facing run configuration (the CLI/JSON layer wraps this).
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// nodes along x; y follows from square cells in 2D
    pub n: usize,
    pub mode: ReconMode,
    pub dt_ratio: Option<f64>,
    pub final_time: Option<f64>,
    pub epsilon: Option<f64>,
    pub exponent: Option<i32>,
    pub d_low: Option<f64>,
    pub threads: usize,
    pub snapshots: bool,
    pub nm: NMParams,
}

impl RunOptions {
    pub fn new(n: usize, mode: ReconMode) -> Self {
        RunOptions {
            n,
            mode,
            dt_ratio: None,
            final_time: None,
            epsilon: None,
            exponent: None,
            d_low: None,
            threads: 1,
            snapshots: false,
            nm: NMParams::default(),
        }
    }
}

/// Full marching history of one run.
pub struct RunResult {
    pub final_field: Field,
    pub grid: GridSpec,
    pub steps: usize,
    pub snapshots: Vec<Field>,
    /// reachable mask per step (index 0 = initial datum), constrained runs only
    pub masks: Option<Vec<Vec<bool>>>,
    /// first step at which each node entered the reachable set, -1 if never
    pub first_inclusion: Option<Vec<i64>>,
    pub weight_computations: u64,
    pub recon_evaluations: u64,
    pub minimizer_evaluations: u64,
    /// reconstruction evaluations per cell in the final step
    pub final_step_cell_evals: Vec<u64>,
    pub step_wall: Vec<f64>,
    /// wall-clock of the marching loop only
    pub march_wall: f64,
}

/// March the problem from its initial datum to the final time.
pub fn run(prob: &ProblemSpec, opts: &RunOptions) -> Result<RunResult> {
    prob.validate()?;
    opts.nm.validate()?;
    let grid = prob.grid_for(opts.n)?;
    let mut recon = ReconConfig::new(grid.dim, opts.mode);
    if let Some(e) = opts.epsilon {
        recon.eps = EpsRule::Fixed(e);
    }
    if let Some(l) = opts.exponent {
        recon.exponent = l;
    }
    if let Some(d) = opts.d_low {
        recon.d_low = d;
    }
    recon.validate()?;
    let forms = derive_indicator_forms(grid.dim);

    let dt_ratio = opts.dt_ratio.unwrap_or(prob.dt_ratio);
    if !(dt_ratio > 0.0) {
        return Err(Error::Config(format!("nonpositive dt ratio {dt_ratio}")));
    }
    let horizon = opts.final_time.unwrap_or(prob.final_time);
    if horizon < 0.0 {
        return Err(Error::Config(format!("negative final time {horizon}")));
    }
    let dt = dt_ratio * grid.dx;

    let g_field = prob.obstacle.map(|g| Field::from_fn(grid, 0.0, g));
    let mut u = Field::from_fn(grid, 0.0, prob.initial);
    if let Some(gf) = &g_field {
        u = apply_obstacle(&u, gf);
    }

    let constrained = g_field.is_some();
    let mut masks: Option<Vec<Vec<bool>>> =
        constrained.then(|| vec![u.values.iter().map(|&v| v <= 0.0).collect::<Vec<bool>>()]);
    let mut first_inclusion: Option<Vec<i64>> = constrained.then(|| {
        u.values
            .iter()
            .map(|&v| if v <= 0.0 { 0 } else { -1 })
            .collect()
    });

    // steps land exactly on the horizon: full steps of dt plus a truncated
    // final one
    let steps = if horizon > 0.0 {
        ((horizon / dt) * (1.0 - 1e-9)).ceil().max(1.0) as usize
    } else {
        0
    };

    let mut snapshots = Vec::new();
    if opts.snapshots {
        snapshots.push(u.clone());
    }
    let mut step_wall = Vec::with_capacity(steps);
    let mut weight_computations = 0u64;
    let mut recon_evaluations = 0u64;
    let mut minimizer_evaluations = 0u64;
    let mut final_step_cell_evals = vec![0u64; grid.cell_count()];
    let march_start = Instant::now();

    for step in 0..steps {
        let last = step == steps - 1;
        let t_next = if last {
            horizon
        } else {
            dt * (step + 1) as f64
        };
        let ctx = StepContext {
            t_next,
            dt: t_next - u.time,
            tableau: &prob.tableau,
            rule: prob.rule,
            recon: &recon,
            policy: prob.policy,
            forms: &forms,
            nm: &opts.nm,
            threads: opts.threads,
        };
        let (mut next, stats) = sl_step(&u, prob, &ctx)?;
        if let Some(gf) = &g_field {
            next = apply_obstacle(&next, gf);
        }
        weight_computations += stats.weight_computations;
        recon_evaluations += stats.recon_evaluations;
        minimizer_evaluations += stats.minimizer_evaluations;
        step_wall.push(stats.wall);
        if last {
            final_step_cell_evals = stats.per_cell_evals;
        }
        if let (Some(masks), Some(first)) = (masks.as_mut(), first_inclusion.as_mut()) {
            let prev = masks.last().expect("mask history seeded");
            let mask = reachable_union(prev, &next);
            for (i, (&now, was)) in mask.iter().zip(prev).enumerate() {
                if now && !was {
                    first[i] = (step + 1) as i64;
                }
            }
            masks.push(mask);
        }
        if opts.snapshots {
            snapshots.push(next.clone());
        }
        u = next;
    }

    Ok(RunResult {
        grid,
        steps,
        snapshots,
        masks,
        first_inclusion,
        weight_computations,
        recon_evaluations,
        minimizer_evaluations,
        final_step_cell_evals,
        step_wall,
        march_wall: march_start.elapsed().as_secs_f64(),
        final_field: u,
    })
}
