//! Backward tracing of characteristic feet with explicit Runge-Kutta
//! methods, and quadrature of the running cost along the discrete
//! trajectory.
//!
//! One step of the scheme looks backward from `t_next` over `dt`: the stage
//! slopes are `K_k = f_D(t_n + (1 - c_k) dt, X_k, a_k)` with `t_n = t_next -
//! dt`, and the foot is `x + dt * sum b_k K_k`. The running-cost quadrature
//! reuses the stage points as trajectory samples; its nodes coincide with
//! the tableau abscissae, which is what makes the pairing below third-order
//! accurate for the Simpson/RK3 combination.

use crate::control::Control;
use crate::grid::Point;
use crate::{Error, Result};

pub const MAX_STAGES: usize = 3;

/// Explicit Butcher tableau with up to three stages.
#[derive(Clone, Copy, Debug)]
pub struct ButcherTableau {
    pub name: &'static str,
    pub stages: usize,
    pub a: [[f64; MAX_STAGES]; MAX_STAGES],
    pub b: [f64; MAX_STAGES],
    pub c: [f64; MAX_STAGES],
}

impl ButcherTableau {
    pub fn euler() -> Self {
        ButcherTableau {
            name: "euler",
            stages: 1,
            a: [[0.0; 3]; 3],
            b: [1.0, 0.0, 0.0],
            c: [0.0; 3],
        }
    }

    pub fn heun() -> Self {
        let mut a = [[0.0; 3]; 3];
        a[1][0] = 1.0;
        ButcherTableau {
            name: "heun",
            stages: 2,
            a,
            b: [0.5, 0.5, 0.0],
            c: [0.0, 1.0, 0.0],
        }
    }

    pub fn rk3() -> Self {
        let mut a = [[0.0; 3]; 3];
        a[1][0] = 0.5;
        a[2][0] = -1.0;
        a[2][1] = 2.0;
        ButcherTableau {
            name: "rk3",
            stages: 3,
            a,
            b: [1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
            c: [0.0, 0.5, 1.0],
        }
    }
}

/// Traced foot of one characteristic with its stage points and slopes.
#[derive(Clone, Copy, Debug)]
pub struct FootResult {
    pub foot: Point,
    pub stages: [Point; MAX_STAGES],
    pub slopes: [Point; MAX_STAGES],
    pub nu: usize,
}

/// Quadrature rule paired with a tableau; the nodes coincide with the
/// tableau abscissae (Rectangle-Euler, Trapezoid-Heun, Simpson-RK3).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuadratureRule {
    Rectangle,
    Trapezoid,
    Simpson,
}

impl QuadratureRule {
    pub fn stages(self) -> usize {
        match self {
            QuadratureRule::Rectangle => 1,
            QuadratureRule::Trapezoid => 2,
            QuadratureRule::Simpson => 3,
        }
    }

    /// nodes as fractions of the step, identical to the tableau abscissae
    pub fn nodes(self) -> &'static [f64] {
        match self {
            QuadratureRule::Rectangle => &[0.0],
            QuadratureRule::Trapezoid => &[0.0, 1.0],
            QuadratureRule::Simpson => &[0.0, 0.5, 1.0],
        }
    }

    pub fn weights(self) -> &'static [f64] {
        match self {
            QuadratureRule::Rectangle => &[1.0],
            QuadratureRule::Trapezoid => &[0.5, 0.5],
            QuadratureRule::Simpson => &[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0],
        }
    }

    pub fn pairs_with(self, tab: &ButcherTableau) -> bool {
        self.stages() == tab.stages
    }
}

/// Trace the foot of a characteristic backward from `x` at `t_next` over a
/// step `dt`, one control per stage.
pub fn trace_foot<F>(
    tab: &ButcherTableau,
    f_d: F,
    x: Point,
    t_next: f64,
    dt: f64,
    controls: &[Control],
) -> Result<FootResult>
where
    F: Fn(f64, Point, Control) -> Point,
{
    debug_assert_eq!(controls.len(), tab.stages);
    let t_n = t_next - dt;
    let mut stages = [x; MAX_STAGES];
    let mut slopes = [[0.0; 2]; MAX_STAGES];
    for k in 0..tab.stages {
        let mut xk = x;
        for j in 0..k {
            xk[0] += dt * tab.a[k][j] * slopes[j][0];
            xk[1] += dt * tab.a[k][j] * slopes[j][1];
        }
        stages[k] = xk;
        let t_stage = t_n + (1.0 - tab.c[k]) * dt;
        let kk = f_d(t_stage, xk, controls[k]);
        if !kk[0].is_finite() || !kk[1].is_finite() {
            return Err(Error::DynamicsBlewUp {
                t: t_stage,
                x: xk,
                control: controls[k],
            });
        }
        slopes[k] = kk;
    }
    let mut foot = x;
    for k in 0..tab.stages {
        foot[0] += dt * tab.b[k] * slopes[k][0];
        foot[1] += dt * tab.b[k] * slopes[k][1];
    }
    Ok(FootResult {
        foot,
        stages,
        slopes,
        nu: tab.stages,
    })
}

/// Integrate the running cost over one step, sampling the trajectory at the
/// RK stage points.
pub fn cost_integral<G>(
    rule: QuadratureRule,
    f_c: G,
    fr: &FootResult,
    controls: &[Control],
    t_next: f64,
    dt: f64,
) -> Result<f64>
where
    G: Fn(f64, Point, Control) -> f64,
{
    if rule.stages() != fr.nu {
        return Err(Error::Config(format!(
            "quadrature rule with {} nodes does not pair with a {}-stage tableau",
            rule.stages(),
            fr.nu
        )));
    }
    let x = fr.stages[0];
    Ok(match rule {
        QuadratureRule::Rectangle => dt * f_c(t_next, x, controls[0]),
        QuadratureRule::Trapezoid => {
            0.5 * dt * (f_c(t_next, x, controls[0]) + f_c(t_next - dt, fr.stages[1], controls[1]))
        }
        QuadratureRule::Simpson => {
            dt / 6.0
                * (f_c(t_next, x, controls[0])
                    + 4.0 * f_c(t_next - 0.5 * dt, fr.stages[1], controls[1])
                    + f_c(t_next - dt, fr.stages[2], controls[2]))
        }
    })
}
