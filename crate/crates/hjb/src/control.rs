//! Minimization over the discrete control tuple: tabulation on a coarse
//! grid of the control set seeds a Nelder-Mead search whose vertices are
//! confined to the set.
//!
//! The search runs in a parameter space (box components, or one angle per
//! stage for circular sets) and every trial point is passed through
//! [`embed`] before evaluation, so the objective only ever sees admissible
//! controls. Everything is deterministic: fixed grid order, strict
//! improvement for tie-breaking, no randomness.

use crate::{Error, Result};

/// One control value; unused components stay zero.
pub type Control = [f64; 2];

pub const MAX_STAGES: usize = 3;
/// stages x parameters-per-stage
pub const MAX_PARAMS: usize = 6;

#[derive(Clone, Copy, Debug)]
pub enum ControlSet {
    /// no control dependence; the objective is evaluated once
    Empty,
    /// axis-aligned box with `components` active coordinates
    Box {
        lo: [f64; 2],
        hi: [f64; 2],
        components: usize,
    },
    /// circle of the given radius, parametrized by angle
    Circle { radius: f64 },
}

impl ControlSet {
    pub fn interval(lo: f64, hi: f64) -> Self {
        ControlSet::Box {
            lo: [lo, 0.0],
            hi: [hi, 0.0],
            components: 1,
        }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        ControlSet::Box {
            lo: [lo, lo],
            hi: [hi, hi],
            components: 2,
        }
    }

    /// search-space dimension per stage
    pub fn param_dim(&self) -> usize {
        match self {
            ControlSet::Empty => 0,
            ControlSet::Box { components, .. } => *components,
            ControlSet::Circle { .. } => 1,
        }
    }

    /// parameter bounds of one stage's k-th search coordinate
    fn param_bounds(&self, k: usize) -> (f64, f64) {
        match self {
            ControlSet::Empty => (0.0, 0.0),
            ControlSet::Box { lo, hi, .. } => (lo[k], hi[k]),
            ControlSet::Circle { .. } => (0.0, std::f64::consts::TAU),
        }
    }

    /// whether parameters wrap rather than clamp (circle angles)
    fn param_periodic(&self) -> bool {
        matches!(self, ControlSet::Circle { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ControlSet::Empty => Ok(()),
            ControlSet::Box { lo, hi, components } => {
                if *components == 0 || *components > 2 {
                    return Err(Error::Config("box control needs 1 or 2 components".into()));
                }
                for k in 0..*components {
                    if !(lo[k] < hi[k]) {
                        return Err(Error::Config("box control with empty side".into()));
                    }
                }
                Ok(())
            }
            ControlSet::Circle { radius } => {
                if *radius > 0.0 {
                    Ok(())
                } else {
                    Err(Error::Config("circle control needs positive radius".into()))
                }
            }
        }
    }

    fn embed_stage(&self, params: &[f64]) -> Control {
        match self {
            ControlSet::Empty => [0.0, 0.0],
            ControlSet::Box { lo, hi, components } => {
                let mut a = [0.0, 0.0];
                for k in 0..*components {
                    a[k] = params[k].clamp(lo[k], hi[k]);
                }
                a
            }
            ControlSet::Circle { radius } => {
                let (sin, cos) = params[0].sin_cos();
                [radius * cos, radius * sin]
            }
        }
    }
}

/// Map a parameter vector (ν · param_dim significant entries) into an
/// admissible control tuple, one control per stage.
pub fn embed(set: &ControlSet, params: &[f64], nu: usize) -> [Control; MAX_STAGES] {
    let pd = set.param_dim();
    let mut out = [[0.0, 0.0]; MAX_STAGES];
    for s in 0..nu {
        out[s] = set.embed_stage(&params[s * pd..(s + 1) * pd]);
    }
    out
}

/// Nelder-Mead and tabulation parameters.
#[derive(Clone, Copy, Debug)]
pub struct NMParams {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub max_iter: usize,
    /// absolute spread of simplex values at which to stop
    pub ftol: f64,
    /// companion simplex-diameter tolerance; a value spread below `ftol` on
    /// a still-wide simplex (vertices straddling the minimum) must not stop
    /// the search
    pub xtol: f64,
    /// tabulation points per search dimension
    pub coarse_pts: usize,
    /// seed the simplex from the coarse tabulation (disable with --seed-free)
    pub seed_coarse: bool,
}

impl Default for NMParams {
    fn default() -> Self {
        NMParams {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            max_iter: 200,
            ftol: 1e-9,
            xtol: 1e-6,
            coarse_pts: 9,
            seed_coarse: true,
        }
    }
}

impl NMParams {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_pts < 3 {
            return Err(Error::Config(
                "coarse tabulation needs at least 3 points".into(),
            ));
        }
        if !(self.reflection > 0.0
            && self.expansion > 1.0
            && (0.0..1.0).contains(&self.contraction)
            && (0.0..1.0).contains(&self.shrink))
        {
            return Err(Error::Config(
                "Nelder-Mead coefficients out of range".into(),
            ));
        }
        if !(self.ftol > 0.0 && self.xtol > 0.0) {
            return Err(Error::Config(
                "Nelder-Mead tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

pub struct Minimum {
    pub controls: [Control; MAX_STAGES],
    pub value: f64,
    pub evaluations: u64,
}

type Params = [f64; MAX_PARAMS];

struct Search<'a, F> {
    objective: F,
    set: &'a ControlSet,
    nu: usize,
    dims: usize,
    lo: Params,
    hi: Params,
    periodic: bool,
    evaluations: u64,
    best_value: f64,
    best_controls: [Control; MAX_STAGES],
}

impl<F> Search<'_, F>
where
    F: FnMut(&[Control]) -> Result<f64>,
{
    fn confine(&self, p: &mut Params) {
        if self.periodic {
            return; // angles wrap inside embed; no vertex can leave the set
        }
        for k in 0..self.dims {
            p[k] = p[k].clamp(self.lo[k], self.hi[k]);
        }
    }

    fn eval(&mut self, params: &Params) -> Result<f64> {
        let controls = embed(self.set, params, self.nu);
        self.evaluations += 1;
        let v = (self.objective)(&controls[..self.nu])?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective {
                control: controls[..self.nu].to_vec(),
            });
        }
        if v < self.best_value {
            self.best_value = v;
            self.best_controls = controls;
        }
        Ok(v)
    }
}

/// Minimize the objective over the control tuple space `A^ν`.
///
/// Evaluates a coarse product grid, then runs Nelder-Mead from the best grid
/// point with every vertex confined to the set. Returns the best control
/// tuple seen anywhere, so the result never exceeds the best coarse value.
pub fn minimize<F>(objective: F, set: &ControlSet, nu: usize, p: &NMParams) -> Result<Minimum>
where
    F: FnMut(&[Control]) -> Result<f64>,
{
    let pd = set.param_dim();
    let dims = nu * pd;
    debug_assert!(dims <= MAX_PARAMS && nu <= MAX_STAGES);

    let mut search = Search {
        objective,
        set,
        nu,
        dims,
        lo: [0.0; MAX_PARAMS],
        hi: [0.0; MAX_PARAMS],
        periodic: set.param_periodic(),
        evaluations: 0,
        best_value: f64::INFINITY,
        best_controls: [[0.0, 0.0]; MAX_STAGES],
    };

    if dims == 0 {
        let value = search.eval(&[0.0; MAX_PARAMS])?;
        return Ok(Minimum {
            controls: search.best_controls,
            value,
            evaluations: search.evaluations,
        });
    }

    for d in 0..dims {
        let (lo, hi) = set.param_bounds(d % pd);
        search.lo[d] = lo;
        search.hi[d] = hi;
    }

    // grid step per dimension; periodic dimensions spread points over the
    // full period without duplicating the endpoint
    let mut step = [0.0; MAX_PARAMS];
    for d in 0..dims {
        let denom = if search.periodic {
            p.coarse_pts
        } else {
            p.coarse_pts - 1
        };
        step[d] = (search.hi[d] - search.lo[d]) / denom as f64;
    }

    let mut seed = [0.0; MAX_PARAMS];
    let mut seed_value;
    if p.seed_coarse {
        seed_value = f64::INFINITY;
        let mut index = [0usize; MAX_PARAMS];
        loop {
            let mut params = [0.0; MAX_PARAMS];
            for d in 0..dims {
                params[d] = search.lo[d] + index[d] as f64 * step[d];
            }
            let v = search.eval(&params)?;
            if v < seed_value {
                seed_value = v;
                seed = params;
            }
            // odometer over the product grid, last dimension fastest
            let mut d = dims;
            loop {
                if d == 0 {
                    break;
                }
                d -= 1;
                index[d] += 1;
                if index[d] < p.coarse_pts {
                    break;
                }
                index[d] = 0;
            }
            if index[..dims].iter().all(|&i| i == 0) {
                break;
            }
        }
    } else {
        for d in 0..dims {
            seed[d] = 0.5 * (search.lo[d] + search.hi[d]);
        }
        seed_value = search.eval(&seed)?;
    }

    // initial simplex around the seed, offset by half a coarse cell per
    // dimension, flipped inward at the boundary so it stays non-degenerate
    let mut simplex: Vec<(Params, f64)> = Vec::with_capacity(dims + 1);
    simplex.push((seed, seed_value));
    for d in 0..dims {
        let mut v = seed;
        let h = 0.5 * step[d];
        if !search.periodic && v[d] + h > search.hi[d] {
            v[d] -= h;
        } else {
            v[d] += h;
        }
        search.confine(&mut v);
        let val = search.eval(&v)?;
        simplex.push((v, val));
    }

    let order = |s: &mut Vec<(Params, f64)>| {
        s.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite objective values"));
    };
    order(&mut simplex);

    for _ in 0..p.max_iter {
        if simplex[dims].1 - simplex[0].1 <= p.ftol {
            let mut diameter = 0.0f64;
            for v in simplex.iter().skip(1) {
                for d in 0..dims {
                    diameter = diameter.max((v.0[d] - simplex[0].0[d]).abs());
                }
            }
            if diameter <= p.xtol {
                break;
            }
        }
        let mut centroid = [0.0; MAX_PARAMS];
        for v in simplex.iter().take(dims) {
            for d in 0..dims {
                centroid[d] += v.0[d];
            }
        }
        for d in 0..dims {
            centroid[d] /= dims as f64;
        }
        let worst = simplex[dims];
        let towards = |coef: f64| {
            let mut v = [0.0; MAX_PARAMS];
            for d in 0..dims {
                v[d] = centroid[d] + coef * (centroid[d] - worst.0[d]);
            }
            v
        };

        let mut xr = towards(p.reflection);
        search.confine(&mut xr);
        let fr = search.eval(&xr)?;

        if fr < simplex[0].1 {
            let mut xe = towards(p.reflection * p.expansion);
            search.confine(&mut xe);
            let fe = search.eval(&xe)?;
            simplex[dims] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[dims - 1].1 {
            simplex[dims] = (xr, fr);
        } else {
            let coef = if fr < worst.1 {
                p.reflection * p.contraction // outside contraction
            } else {
                -p.contraction // inside contraction
            };
            let mut xc = towards(coef);
            search.confine(&mut xc);
            let fc = search.eval(&xc)?;
            if fc < worst.1.min(fr) {
                simplex[dims] = (xc, fc);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for d in 0..dims {
                        v.0[d] = anchor[d] + p.shrink * (v.0[d] - anchor[d]);
                    }
                    v.1 = f64::NAN;
                }
                for i in 1..=dims {
                    let mut v = simplex[i].0;
                    search.confine(&mut v);
                    let val = search.eval(&v)?;
                    simplex[i] = (v, val);
                }
            }
        }
        order(&mut simplex);
    }

    Ok(Minimum {
        controls: search.best_controls,
        value: search.best_value,
        evaluations: search.evaluations,
    })
}
