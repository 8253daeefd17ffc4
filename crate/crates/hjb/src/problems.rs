//! The five benchmark problems and their exact solutions.

use crate::characteristics::{ButcherTableau, QuadratureRule};
use crate::control::{Control, ControlSet};
use crate::grid::{BoundaryPolicy, GridSpec, Point};
use crate::{Error, Result};

/// A complete problem definition: dynamics, running cost, control set,
/// initial datum, optional obstacle, and the discretization the benchmark
/// uses.
#[derive(Clone, Copy)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    pub dynamics: fn(f64, Point, Control) -> Point,
    pub cost: fn(f64, Point, Control) -> f64,
    pub control_set: ControlSet,
    pub initial: fn(Point) -> f64,
    pub obstacle: Option<fn(Point) -> f64>,
    pub policy: BoundaryPolicy,
    pub tableau: ButcherTableau,
    pub rule: QuadratureRule,
    /// dt = dt_ratio * dx
    pub dt_ratio: f64,
    pub final_time: f64,
}

impl ProblemSpec {
    /// Grid with `n` nodes along x; in 2D the y node count follows from the
    /// requirement of square cells.
    pub fn grid_for(&self, n: usize) -> Result<GridSpec> {
        if self.dim == 1 {
            return GridSpec::new_1d(self.lo[0], self.hi[0], n);
        }
        let dx = (self.hi[0] - self.lo[0]) / (n - 1) as f64;
        let ny_f = (self.hi[1] - self.lo[1]) / dx;
        let ny = ny_f.round() as usize;
        if (ny_f - ny as f64).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "n = {n} does not tile the domain with square cells (ny = {ny_f})"
            )));
        }
        GridSpec::new_2d(self.lo, self.hi, [n, ny + 1])
    }

    /// Periodic boundaries require a compatible initial datum.
    pub fn validate(&self) -> Result<()> {
        self.control_set.validate()?;
        if !self.rule.pairs_with(&self.tableau) {
            return Err(Error::Config(format!(
                "{}-node quadrature paired with {}-stage tableau",
                self.rule.stages(),
                self.tableau.stages
            )));
        }
        if self.policy == BoundaryPolicy::Periodic {
            let samples = 5;
            for axis in 0..self.dim {
                let other = 1 - axis;
                for s in 0..samples {
                    let frac = s as f64 / (samples - 1) as f64;
                    let ov = if self.dim == 2 {
                        self.lo[other] + frac * (self.hi[other] - self.lo[other])
                    } else {
                        0.0
                    };
                    let mut a = [0.0; 2];
                    let mut b = [0.0; 2];
                    a[axis] = self.lo[axis];
                    b[axis] = self.hi[axis];
                    a[other] = ov;
                    b[other] = ov;
                    let (va, vb) = ((self.initial)(a), (self.initial)(b));
                    if (va - vb).abs() > 1e-12 {
                        return Err(Error::Config(format!(
                            "periodic boundary but v0({:?}) = {va} != v0({:?}) = {vb}",
                            a, b
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Exact solution evaluator with a validity note.
#[derive(Clone, Copy)]
pub struct ExactSolution {
    pub eval: fn(f64, Point) -> f64,
    pub note: &'static str,
}

// ---------------------------------------------------------------- test 1

const T1_CENTER: [f64; 2] = [0.3, 0.7];
const T1_M: f64 = 0.15;
const T1_R: f64 = 0.15;

fn t1_dynamics(_t: f64, x: Point, _a: Control) -> Point {
    [
        -2.0 * std::f64::consts::PI * (x[1] - 0.5),
        2.0 * std::f64::consts::PI * (x[0] - 0.5),
    ]
}

fn zero_cost(_t: f64, _x: Point, _a: Control) -> f64 {
    0.0
}

/// C^2 compactly supported bump of height M and radius R.
fn t1_initial(x: Point) -> f64 {
    let r = ((x[0] - T1_CENTER[0]).powi(2) + (x[1] - T1_CENTER[1]).powi(2)).sqrt();
    if r >= T1_R {
        return 0.0;
    }
    let s = (r - T1_R) / T1_R;
    let r3 = (r / T1_R).powi(3);
    T1_M * (1.0 + r3 * (-1.0 + 3.0 * s * (1.0 - 2.0 * s)))
}

fn t1_exact(t: f64, x: Point) -> f64 {
    // rigid rotation: the datum comes back along the flow
    let ang = 2.0 * std::f64::consts::PI * t;
    let (sin, cos) = ang.sin_cos();
    let dx = x[0] - 0.5;
    let dy = x[1] - 0.5;
    t1_initial([0.5 + cos * dx - sin * dy, 0.5 + sin * dx + cos * dy])
}

// ---------------------------------------------------------------- test 2

fn neg_gradient_dynamics(_t: f64, _x: Point, a: Control) -> Point {
    [-a[0], -a[1]]
}

fn half_square_cost_1d(_t: f64, _x: Point, a: Control) -> f64 {
    0.5 * a[0] * a[0]
}

fn t2_initial(x: Point) -> f64 {
    (-(std::f64::consts::FRAC_PI_2 * x[0]).cos()).min(0.0)
}

fn t2_exact(t: f64, x: Point) -> f64 {
    exact_test2(t, x[0], 1e-12).expect("fixed point of the optimal control always brackets")
}

/// Exact solution of the semi-concave 1D problem: solve the fixed point for
/// the optimal control (damped iteration with a bisection fallback), then
/// evaluate the value formula.
pub fn exact_test2(t: f64, x: f64, tol: f64) -> Result<f64> {
    assert!(t > 0.0, "exact solution needs t > 0");
    let half_pi = std::f64::consts::FRAC_PI_2;
    let g = |a: f64| -> f64 {
        let a = a.clamp(-half_pi, half_pi);
        -2.0 / (std::f64::consts::PI * t) * (2.0 * a / std::f64::consts::PI).asin() + x / t
    };
    // residual of the fixed point, monotone increasing in a
    let res = |a: f64| a - g(a);

    let mut a = (0.5 * x * x * t).clamp(-half_pi, half_pi);
    let mut converged = false;
    for _ in 0..100 {
        let r = res(a);
        if r.abs() <= tol {
            converged = true;
            break;
        }
        a = (a - 0.5 * r).clamp(-half_pi, half_pi);
    }
    if !converged {
        let (mut lo, mut hi) = (-half_pi, half_pi);
        let (rlo, rhi) = (res(lo), res(hi));
        if rlo > 0.0 || rhi < 0.0 {
            return Err(Error::Config(format!(
                "fixed point not bracketed at t={t}, x={x}: res({lo})={rlo}, res({hi})={rhi}"
            )));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if res(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if res(0.5 * (lo + hi)).abs() <= tol {
                break;
            }
        }
        a = 0.5 * (lo + hi);
    }
    Ok((0.5 * a * a + t2_initial([x - t * a, 0.0])).min(0.0))
}

// ---------------------------------------------------------------- test 3

fn t3_forcing(t: f64, x: f64) -> f64 {
    -x.sin() + (9.0 / 8.0 + 0.5 * (t * t - 3.0 * t)) * x.cos().powi(2)
}

fn t3_cost(t: f64, x: Point, a: Control) -> f64 {
    0.5 * a[0] * a[0] + t3_forcing(t, x[0])
}

fn t3_initial(x: Point) -> f64 {
    1.5 * x[0].sin()
}

fn t3_exact(t: f64, x: Point) -> f64 {
    (1.5 - t) * x[0].sin()
}

// ---------------------------------------------------------------- test 4

fn half_square_cost_2d(_t: f64, _x: Point, a: Control) -> f64 {
    0.5 * (a[0] * a[0] + a[1] * a[1])
}

fn t4_initial(x: Point) -> f64 {
    (1.0 - x[0] * x[0] - x[1] * x[1]).max(0.0)
}

fn t4_exact(t: f64, x: Point) -> f64 {
    let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
    if r <= 1.0 {
        (r - 1.0).powi(2) / (2.0 * t)
    } else {
        0.0
    }
}

// ---------------------------------------------------------------- test 5

const T5_C: f64 = 20.0;
const T5_RADIUS: f64 = 0.25;
const T5_GAMMA: f64 = 0.2;

fn t5_dynamics(_t: f64, x: Point, a: Control) -> Point {
    [2.0 - 0.5 * x[1] * x[1] + a[0], a[1]]
}

fn t5_initial(x: Point) -> f64 {
    let d = ((x[0] - 1.0).powi(2) + x[1].powi(2)).sqrt();
    T5_C * (d - T5_RADIUS).min(T5_RADIUS)
}

/// Level-set description of the constrained states: positive inside the two
/// rectangular obstacles, -gamma elsewhere.
fn t5_obstacle(x: Point) -> f64 {
    let box1 = T5_C * (T5_GAMMA - (x[0] - 0.3).abs().max((x[1] - 0.4).abs()));
    let box2 = T5_C * (T5_GAMMA - (x[0] + 1.0).abs().max((x[1] + 1.5).abs()));
    (-T5_GAMMA).max(box1).max(box2)
}

/// Build benchmark `k` (1..=5). Tests 1-4 carry exact solutions.
pub fn make_test(k: u32) -> Result<(ProblemSpec, Option<ExactSolution>)> {
    let out = match k {
        1 => (
            ProblemSpec {
                name: "rigid rotation of a bump",
                dim: 2,
                lo: [0.0, 0.0],
                hi: [1.0, 1.0],
                dynamics: t1_dynamics,
                cost: zero_cost,
                control_set: ControlSet::Empty,
                initial: t1_initial,
                obstacle: None,
                policy: BoundaryPolicy::Extrapolate,
                tableau: ButcherTableau::rk3(),
                rule: QuadratureRule::Simpson,
                dt_ratio: 3.0,
                final_time: 1.0,
            },
            Some(ExactSolution {
                eval: t1_exact,
                note: "valid for all t",
            }),
        ),
        2 => (
            ProblemSpec {
                name: "1D semi-concave data",
                dim: 1,
                lo: [-2.0, 0.0],
                hi: [2.0, 0.0],
                dynamics: neg_gradient_dynamics,
                cost: half_square_cost_1d,
                control_set: ControlSet::interval(-2.0, 2.0),
                initial: t2_initial,
                obstacle: None,
                policy: BoundaryPolicy::Extrapolate,
                tableau: ButcherTableau::euler(),
                rule: QuadratureRule::Rectangle,
                dt_ratio: 10.0,
                final_time: 1.0,
            },
            Some(ExactSolution {
                eval: t2_exact,
                note: "valid for t > 0",
            }),
        ),
        3 => (
            ProblemSpec {
                name: "1D eikonal with forcing",
                dim: 1,
                lo: [0.0, 0.0],
                hi: [2.0 * std::f64::consts::PI, 0.0],
                dynamics: neg_gradient_dynamics,
                cost: t3_cost,
                control_set: ControlSet::interval(-2.0, 2.0),
                initial: t3_initial,
                obstacle: None,
                policy: BoundaryPolicy::Periodic,
                tableau: ButcherTableau::rk3(),
                rule: QuadratureRule::Simpson,
                dt_ratio: 1.0,
                final_time: 0.5,
            },
            Some(ExactSolution {
                eval: t3_exact,
                note: "valid for all t",
            }),
        ),
        4 => (
            ProblemSpec {
                name: "2D semi-convex data",
                dim: 2,
                lo: [-2.0, -2.0],
                hi: [2.0, 2.0],
                dynamics: neg_gradient_dynamics,
                cost: half_square_cost_2d,
                control_set: ControlSet::square(-2.0, 2.0),
                initial: t4_initial,
                obstacle: None,
                policy: BoundaryPolicy::Extrapolate,
                tableau: ButcherTableau::euler(),
                rule: QuadratureRule::Rectangle,
                dt_ratio: 1.25,
                final_time: 0.5,
            },
            Some(ExactSolution {
                eval: t4_exact,
                note: "valid for t >= 1/2",
            }),
        ),
        5 => (
            ProblemSpec {
                name: "constrained Zermelo navigation",
                dim: 2,
                lo: [-3.0, -2.0],
                hi: [2.0, 2.0],
                dynamics: t5_dynamics,
                cost: zero_cost,
                control_set: ControlSet::Circle { radius: 1.0 },
                initial: t5_initial,
                obstacle: Some(t5_obstacle),
                policy: BoundaryPolicy::Extrapolate,
                tableau: ButcherTableau::rk3(),
                rule: QuadratureRule::Simpson,
                dt_ratio: 1.0,
                final_time: 3.0,
            },
            None,
        ),
        _ => return Err(Error::InvalidTest(k)),
    };
    out.0.validate()?;
    Ok(out)
}
