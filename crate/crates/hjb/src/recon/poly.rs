//! Candidate interpolation polynomials in local cell coordinates.
//!
//! The reconstruction cell is `[x_j, x_{j+1}]` (cross `[y_j, y_{j+1}]` in 2D)
//! and local coordinates are `x̂ = (x - x_j)/dx`, so the stencil nodes sit at
//! integer offsets -1, 0, 1, 2 and the cell itself is the unit interval or
//! square.

/// Cubic in one variable along the basis {1, x̂, x̂², x̂³}.
#[derive(Clone, Copy, Debug)]
pub struct Polynomial1D {
    pub coeffs: [f64; 4],
    pub dx: f64,
}

impl Polynomial1D {
    pub fn eval(&self, xh: f64) -> f64 {
        let z = &self.coeffs;
        z[0] + xh * (z[1] + xh * (z[2] + xh * z[3]))
    }
}

/// Bicubic in two variables; coefficients follow the graded tensor basis
/// {1, x̂, ŷ, x̂², x̂ŷ, ŷ², x̂³, x̂²ŷ, x̂ŷ², ŷ³, x̂³ŷ, x̂²ŷ², x̂ŷ³, x̂³ŷ², x̂²ŷ³, x̂³ŷ³}.
#[derive(Clone, Copy, Debug)]
pub struct Polynomial2D {
    pub coeffs: [f64; 16],
    pub dx: f64,
}

/// position of x̂^a ŷ^b in the coefficient vector, indexed [a][b]
pub const MONOMIAL_INDEX: [[usize; 4]; 4] =
    [[0, 2, 5, 9], [1, 4, 8, 12], [3, 7, 11, 14], [6, 10, 13, 15]];

/// (a, b) exponents of each coefficient slot
pub const MONOMIALS: [(usize, usize); 16] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
    (3, 1),
    (2, 2),
    (1, 3),
    (3, 2),
    (2, 3),
    (3, 3),
];

impl Polynomial2D {
    pub fn eval(&self, xh: f64, yh: f64) -> f64 {
        // Horner in x̂ inside Horner in ŷ, fixed order for determinism
        let z = &self.coeffs;
        let mut acc = 0.0;
        for b in (0..4).rev() {
            let row = z[MONOMIAL_INDEX[0][b]]
                + xh * (z[MONOMIAL_INDEX[1][b]]
                    + xh * (z[MONOMIAL_INDEX[2][b]] + xh * z[MONOMIAL_INDEX[3][b]]));
            acc = acc * yh + row;
        }
        acc
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Candidate1D {
    /// cubic through all four stencil nodes
    Cubic,
    /// parabola through nodes -1, 0, 1
    Left,
    /// parabola through nodes 0, 1, 2
    Right,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Candidate2D {
    /// bicubic through the full 4x4 stencil
    Bicubic,
    Ne,
    Nw,
    Sw,
    Se,
}

pub const DIRECTIONS: [Candidate2D; 4] = [
    Candidate2D::Ne,
    Candidate2D::Nw,
    Candidate2D::Sw,
    Candidate2D::Se,
];

// Coefficients of the interpolant as linear combinations of the node values.
// Row a gives the weight of each data point in the x̂^a coefficient.
const CUBIC: [[f64; 4]; 4] = [
    [0.0, 1.0, 0.0, 0.0],
    [-1.0 / 3.0, -0.5, 1.0, -1.0 / 6.0],
    [0.5, -1.0, 0.5, 0.0],
    [-1.0 / 6.0, 0.5, -0.5, 1.0 / 6.0],
];
// quadratic through nodes -1, 0, 1
const QUAD_L: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [-0.5, 0.0, 0.5], [0.5, -1.0, 0.5]];
// quadratic through nodes 0, 1, 2
const QUAD_R: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [-1.5, 2.0, -0.5], [0.5, -1.0, 0.5]];

/// Fit one of the 1D candidates to the stencil values
/// (u_{j-1}, u_j, u_{j+1}, u_{j+2}). Difference form, exact on affine data.
pub fn fit_poly_1d(values: &[f64; 4], which: Candidate1D, dx: f64) -> Polynomial1D {
    let [u0, u1, u2, u3] = *values;
    let z = match which {
        Candidate1D::Cubic => [
            u1,
            (-2.0 * u0 - 3.0 * u1 + 6.0 * u2 - u3) / 6.0,
            (u0 - 2.0 * u1 + u2) / 2.0,
            (-u0 + 3.0 * u1 - 3.0 * u2 + u3) / 6.0,
        ],
        Candidate1D::Left => [u1, (u2 - u0) / 2.0, (u0 - 2.0 * u1 + u2) / 2.0, 0.0],
        Candidate1D::Right => [
            u1,
            (-3.0 * u1 + 4.0 * u2 - u3) / 2.0,
            (u1 - 2.0 * u2 + u3) / 2.0,
            0.0,
        ],
    };
    Polynomial1D { coeffs: z, dx }
}

/// Fit one of the 2D candidates to the 16 lexicographically ordered stencil
/// values. The directional candidates are the tensor-product biquadratics on
/// their 3x3 substencils; they interpolate all nine values.
pub fn fit_poly_2d(values: &[f64; 16], which: Candidate2D, dx: f64) -> Polynomial2D {
    let mut z = [0.0; 16];
    let data = |k: usize, l: usize| values[l * 4 + k];
    match which {
        Candidate2D::Bicubic => {
            // e[k][b] contracts the y direction first
            let mut e = [[0.0; 4]; 4];
            for k in 0..4 {
                for b in 0..4 {
                    let mut s = 0.0;
                    for l in 0..4 {
                        s += CUBIC[b][l] * data(k, l);
                    }
                    e[k][b] = s;
                }
            }
            for a in 0..4 {
                for b in 0..4 {
                    let mut s = 0.0;
                    for k in 0..4 {
                        s += CUBIC[a][k] * e[k][b];
                    }
                    z[MONOMIAL_INDEX[a][b]] = s;
                }
            }
        }
        dir => {
            // offsets select the 3x3 block; L-type axes use nodes -1,0,1
            // (block offset 0), R-type axes use nodes 0,1,2 (block offset 1)
            let (cx, ox, cy, oy): (&[[f64; 3]; 3], usize, &[[f64; 3]; 3], usize) = match dir {
                Candidate2D::Ne => (&QUAD_R, 1, &QUAD_R, 1),
                Candidate2D::Nw => (&QUAD_L, 0, &QUAD_R, 1),
                Candidate2D::Sw => (&QUAD_L, 0, &QUAD_L, 0),
                Candidate2D::Se => (&QUAD_R, 1, &QUAD_L, 0),
                Candidate2D::Bicubic => unreachable!(),
            };
            let mut e = [[0.0; 3]; 3];
            for k in 0..3 {
                for b in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        s += cy[b][l] * data(ox + k, oy + l);
                    }
                    e[k][b] = s;
                }
            }
            for a in 0..3 {
                for b in 0..3 {
                    let mut s = 0.0;
                    for k in 0..3 {
                        s += cx[a][k] * e[k][b];
                    }
                    z[MONOMIAL_INDEX[a][b]] = s;
                }
            }
        }
    }
    Polynomial2D { coeffs: z, dx }
}
