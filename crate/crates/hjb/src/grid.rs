//! Uniform Cartesian grids in 1D/2D, cell location, boundary ghost values,
//! and foot-of-characteristic clamping.
//!
//! Grids are node-centered: `n` nodes per axis span `[lo, hi]` with spacing
//! `dx = (hi - lo)/(n - 1)`, giving `n - 1` reconstruction cells per axis.
//! 2D fields are stored row-major with x fastest, matching the lexicographic
//! ordering of the data-space indicator matrices.

use crate::{Error, Result};

pub type Point = [f64; 2];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryPolicy {
    Periodic,
    Extrapolate,
}

#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub dim: usize,
    pub lo: [f64; 2],
    pub hi: [f64; 2],
    /// node count per axis; the unused axis of a 1D grid has n = 1
    pub n: [usize; 2],
    pub dx: f64,
}

impl GridSpec {
    pub fn new_1d(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::Config(format!(
                "need at least 5 nodes per axis, got {n}"
            )));
        }
        let dx = (hi - lo) / (n - 1) as f64;
        if !(dx > 0.0) {
            return Err(Error::Config(format!(
                "nonpositive spacing for [{lo}, {hi}]"
            )));
        }
        Ok(GridSpec {
            dim: 1,
            lo: [lo, 0.0],
            hi: [hi, 0.0],
            n: [n, 1],
            dx,
        })
    }

    pub fn new_2d(lo: [f64; 2], hi: [f64; 2], n: [usize; 2]) -> Result<Self> {
        for axis in 0..2 {
            if n[axis] < 5 {
                return Err(Error::Config(format!(
                    "need at least 5 nodes per axis, got {}",
                    n[axis]
                )));
            }
            if !(hi[axis] > lo[axis]) {
                return Err(Error::Config("empty domain".into()));
            }
        }
        let dx = (hi[0] - lo[0]) / (n[0] - 1) as f64;
        let dy = (hi[1] - lo[1]) / (n[1] - 1) as f64;
        if ((dx - dy) / dx).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "anisotropic grid rejected: dx={dx}, dy={dy}"
            )));
        }
        Ok(GridSpec {
            dim: 2,
            lo,
            hi,
            n,
            dx,
        })
    }

    pub fn node(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + i as f64 * self.dx
    }

    pub fn node_point(&self, idx: [usize; 2]) -> Point {
        match self.dim {
            1 => [self.node(0, idx[0]), 0.0],
            _ => [self.node(0, idx[0]), self.node(1, idx[1])],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n[0] * self.n[1]
    }

    pub fn node_index(&self, idx: [usize; 2]) -> usize {
        idx[1] * self.n[0] + idx[0]
    }

    /// cell count per axis (1 on the unused axis of a 1D grid)
    pub fn cells(&self) -> [usize; 2] {
        [self.n[0] - 1, if self.dim == 2 { self.n[1] - 1 } else { 1 }]
    }

    pub fn cell_count(&self) -> usize {
        let c = self.cells();
        c[0] * c[1]
    }

    pub fn cell_index(&self, cell: [usize; 2]) -> usize {
        cell[1] * (self.n[0] - 1) + cell[0]
    }
}

/// Node-indexed scalar field at a fixed time level.
#[derive(Clone, Debug)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn from_fn(grid: GridSpec, time: f64, f: impl Fn(Point) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.node_count());
        for iy in 0..grid.n[1] {
            for ix in 0..grid.n[0] {
                values.push(f(grid.node_point([ix, iy])));
            }
        }
        Field { grid, values, time }
    }

    pub fn value(&self, idx: [usize; 2]) -> f64 {
        self.values[self.grid.node_index(idx)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CellLocation {
    pub cell: [usize; 2],
    /// local coordinates in [0, 1] per axis
    pub frac: [f64; 2],
}

/// Find the cell containing `p` and its local coordinates.
///
/// A point exactly on an interior node belongs to the cell on its left;
/// a point at `hi` belongs to the last cell with local coordinate 1.
pub fn locate_cell(grid: &GridSpec, p: Point) -> Result<CellLocation> {
    let mut cell = [0usize; 2];
    let mut frac = [0.0f64; 2];
    for axis in 0..grid.dim {
        if p[axis] < grid.lo[axis] || p[axis] > grid.hi[axis] {
            return Err(Error::FootNotClamped { point: p });
        }
        let s = (p[axis] - grid.lo[axis]) / grid.dx;
        let c = (s.ceil() as isize - 1).clamp(0, grid.n[axis] as isize - 2) as usize;
        cell[axis] = c;
        frac[axis] = (p[axis] - grid.node(axis, c)) / grid.dx;
    }
    Ok(CellLocation { cell, frac })
}

/// Bring a traced foot back into the domain per the boundary policy.
///
/// Periodic wraps into `[lo, hi)` and never reports clamping; Extrapolate
/// projects onto the hull and reports whether any coordinate moved.
pub fn clamp_foot(grid: &GridSpec, policy: BoundaryPolicy, p: Point) -> (Point, bool) {
    let mut out = p;
    let mut clamped = false;
    for axis in 0..grid.dim {
        match policy {
            BoundaryPolicy::Periodic => {
                let len = grid.hi[axis] - grid.lo[axis];
                let mut r = (p[axis] - grid.lo[axis]).rem_euclid(len);
                if r >= len {
                    r = 0.0;
                }
                out[axis] = grid.lo[axis] + r;
            }
            BoundaryPolicy::Extrapolate => {
                let c = p[axis].clamp(grid.lo[axis], grid.hi[axis]);
                if c != p[axis] {
                    clamped = true;
                }
                out[axis] = c;
            }
        }
    }
    (out, clamped)
}

/// Stencil data for one reconstruction cell, ordered as the indicator
/// matrices expect (lexicographic, x fastest in 2D).
#[derive(Clone, Copy, Debug)]
pub enum StencilValues {
    One([f64; 4]),
    Two([f64; 16]),
}

impl StencilValues {
    pub fn as_slice(&self) -> &[f64] {
        match self {
            StencilValues::One(v) => v,
            StencilValues::Two(v) => v,
        }
    }
}

/// Gather `u` on the 4-node (1D) or 16-node (2D) stencil of `cell`.
///
/// Out-of-range indices are wrapped (Periodic, identifying node n-1 with
/// node 0) or filled by linear extrapolation of the two nearest interior
/// nodes along the offending axis (Extrapolate).
pub fn stencil_values(field: &Field, cell: [usize; 2], policy: BoundaryPolicy) -> StencilValues {
    let grid = &field.grid;
    match grid.dim {
        1 => {
            let mut v = [0.0; 4];
            for (s, q) in (-1..3).enumerate() {
                v[s] = resolve(field, policy, [cell[0] as isize + q, 0]);
            }
            StencilValues::One(v)
        }
        _ => {
            let mut v = [0.0; 16];
            let mut s = 0;
            for qy in -1..3 {
                for qx in -1..3 {
                    v[s] = resolve(
                        field,
                        policy,
                        [cell[0] as isize + qx, cell[1] as isize + qy],
                    );
                    s += 1;
                }
            }
            StencilValues::Two(v)
        }
    }
}

fn resolve(field: &Field, policy: BoundaryPolicy, q: [isize; 2]) -> f64 {
    let grid = &field.grid;
    match policy {
        BoundaryPolicy::Periodic => {
            let mut idx = [0usize; 2];
            for axis in 0..grid.dim {
                let period = grid.n[axis] as isize - 1;
                idx[axis] = q[axis].rem_euclid(period) as usize;
            }
            field.value(idx)
        }
        BoundaryPolicy::Extrapolate => {
            for axis in 0..grid.dim {
                let n = grid.n[axis] as isize;
                if q[axis] < 0 {
                    let mut a = q;
                    let mut b = q;
                    a[axis] = 0;
                    b[axis] = 1;
                    return 2.0 * resolve(field, policy, a) - resolve(field, policy, b);
                }
                if q[axis] >= n {
                    let mut a = q;
                    let mut b = q;
                    a[axis] = n - 1;
                    b[axis] = n - 2;
                    return 2.0 * resolve(field, policy, a) - resolve(field, policy, b);
                }
            }
            field.value([q[0] as usize, q[1] as usize])
        }
    }
}
