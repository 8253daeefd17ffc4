//! Oscillation-indicator quadratic forms, derived exactly over the rationals.
//!
//! The indicator of a polynomial on the reconstruction cell integrates the
//! squares of all derivatives of order two and higher (the first derivative
//! is deliberately excluded, since solutions are at worst kinked):
//!
//!   1D:  I[P] = sum_{a>=2} dx^{2a-3} \int_cell (P^{(a)})^2 dx
//!   2D:  I[P] = sum_{|a|>=2} dx^{2|a|-4} \int_cell (D^a P)^2 dx dy
//!
//! In local coordinates both collapse to `(1/dx^2) z^T M z` with an exact
//! rational matrix `M` over the monomial basis. Pushing `M` through the
//! candidate interpolation matrices gives the data-space forms
//! `(1/dx^2) U^T A_k U`, which is what the solver evaluates per cell. All of
//! this is derived from the Vandermonde systems at startup and checked
//! against known reference tables in the test suite.

use crate::rational::{Rational, RationalMatrix};
use crate::recon::poly::MONOMIAL_INDEX;

#[derive(Clone, Debug)]
pub struct IndicatorForms {
    pub dim: usize,
    /// matrix dimension: 4 in 1D, 16 in 2D
    pub size: usize,
    /// coefficient-space form M
    pub coeff_form: RationalMatrix,
    /// data-space forms, optimal candidate first:
    /// 1D `[A_Q, A_L, A_R]`, 2D `[A_opt, A_ne, A_nw, A_sw, A_se]`
    pub data_forms: Vec<RationalMatrix>,
    coeff_f: Vec<f64>,
    data_f: Vec<Vec<f64>>,
}

fn falling(a: usize, order: usize) -> i64 {
    if a < order {
        return 0;
    }
    let mut c = 1i64;
    for k in 0..order {
        c *= (a - k) as i64;
    }
    c
}

fn coeff_form_1d() -> RationalMatrix {
    let mut m = RationalMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            let mut s = Rational::ZERO;
            for order in 2..=3 {
                let ci = falling(i, order);
                let cj = falling(j, order);
                if ci != 0 && cj != 0 {
                    let pow = (i - order) + (j - order);
                    s = s + Rational::new((ci * cj) as i128, (pow + 1) as i128);
                }
            }
            m[(i, j)] = s;
        }
    }
    m
}

fn coeff_form_2d() -> RationalMatrix {
    use crate::recon::poly::MONOMIALS;
    let mut m = RationalMatrix::zeros(16, 16);
    for (i, &(ai, bi)) in MONOMIALS.iter().enumerate() {
        for (j, &(aj, bj)) in MONOMIALS.iter().enumerate() {
            let mut s = Rational::ZERO;
            for a1 in 0..=3usize {
                for a2 in 0..=3usize {
                    if a1 + a2 < 2 {
                        continue;
                    }
                    let c = falling(ai, a1) * falling(bi, a2) * falling(aj, a1) * falling(bj, a2);
                    if c != 0 {
                        let px = (ai - a1) + (aj - a1);
                        let py = (bi - a2) + (bj - a2);
                        s = s + Rational::new(c as i128, ((px + 1) * (py + 1)) as i128);
                    }
                }
            }
            m[(i, j)] = s;
        }
    }
    m
}

/// inverse Vandermonde at the given integer nodes: coefficients from data
fn inv_vandermonde(nodes: &[i64]) -> RationalMatrix {
    let n = nodes.len();
    let mut v = RationalMatrix::zeros(n, n);
    for (r, &x) in nodes.iter().enumerate() {
        for c in 0..n {
            v[(r, c)] = Rational::from_int(x.pow(c as u32));
        }
    }
    v.inverse()
}

fn data_forms_1d(m: &RationalMatrix) -> Vec<RationalMatrix> {
    let cubic = inv_vandermonde(&[-1, 0, 1, 2]);
    let quad_l = inv_vandermonde(&[-1, 0, 1]);
    let quad_r = inv_vandermonde(&[0, 1, 2]);

    let mut g_q = RationalMatrix::zeros(4, 4);
    for a in 0..4 {
        for k in 0..4 {
            g_q[(a, k)] = cubic[(a, k)];
        }
    }
    let mut g_l = RationalMatrix::zeros(4, 4);
    let mut g_r = RationalMatrix::zeros(4, 4);
    for a in 0..3 {
        for k in 0..3 {
            g_l[(a, k)] = quad_l[(a, k)];
            g_r[(a, k + 1)] = quad_r[(a, k)];
        }
    }
    [g_q, g_l, g_r]
        .iter()
        .map(|g| g.transpose().mul(&m.mul(g)))
        .collect()
}

fn data_forms_2d(m: &RationalMatrix) -> Vec<RationalMatrix> {
    let cubic = inv_vandermonde(&[-1, 0, 1, 2]);
    let quad_l = inv_vandermonde(&[-1, 0, 1]);
    let quad_r = inv_vandermonde(&[0, 1, 2]);

    // bicubic: tensor product of the 1D cubic maps
    let mut g_opt = RationalMatrix::zeros(16, 16);
    for a in 0..4 {
        for b in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    g_opt[(MONOMIAL_INDEX[a][b], l * 4 + k)] = cubic[(a, k)] * cubic[(b, l)];
                }
            }
        }
    }

    // directional biquadratics: (x-side, y-side) with block offsets into the
    // 4x4 stencil; L uses nodes -1,0,1 (offset 0), R uses 0,1,2 (offset 1)
    let dirs: [(&RationalMatrix, usize, &RationalMatrix, usize); 4] = [
        (&quad_r, 1, &quad_r, 1), // ne
        (&quad_l, 0, &quad_r, 1), // nw
        (&quad_l, 0, &quad_l, 0), // sw
        (&quad_r, 1, &quad_l, 0), // se
    ];
    let mut out = vec![g_opt];
    for (cx, ox, cy, oy) in dirs {
        let mut g = RationalMatrix::zeros(16, 16);
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        g[(MONOMIAL_INDEX[a][b], (oy + l) * 4 + (ox + k))] =
                            cx[(a, k)] * cy[(b, l)];
                    }
                }
            }
        }
        out.push(g);
    }
    out.iter().map(|g| g.transpose().mul(&m.mul(g))).collect()
}

/// Derive the coefficient- and data-space indicator forms for the given
/// space dimension, exactly over the rationals.
pub fn derive_indicator_forms(dim: usize) -> IndicatorForms {
    assert!(dim == 1 || dim == 2, "dimension must be 1 or 2");
    let (size, coeff_form) = match dim {
        1 => (4, coeff_form_1d()),
        _ => (16, coeff_form_2d()),
    };
    let data_forms = match dim {
        1 => data_forms_1d(&coeff_form),
        _ => data_forms_2d(&coeff_form),
    };
    let coeff_f = coeff_form.to_f64();
    let data_f = data_forms.iter().map(|a| a.to_f64()).collect();
    IndicatorForms {
        dim,
        size,
        coeff_form,
        data_forms,
        coeff_f,
        data_f,
    }
}

impl IndicatorForms {
    /// Indicator of the candidate `which` (0 = optimal) straight from the
    /// stencil data: `(1/dx^2) U^T A U`.
    pub fn oscillation_from_data(&self, which: usize, u: &[f64], dx: f64) -> f64 {
        debug_assert_eq!(u.len(), self.size);
        let a = &self.data_f[which];
        let n = self.size;
        let mut s = 0.0;
        for i in 0..n {
            let ui = u[i];
            if ui == 0.0 {
                continue;
            }
            let row = &a[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j] * u[j];
            }
            s += ui * acc;
        }
        s / (dx * dx)
    }

    /// Indicator from polynomial coefficients: `(1/dx^2) z^T M z`.
    pub fn oscillation_from_coeffs(&self, z: &[f64], dx: f64) -> f64 {
        debug_assert_eq!(z.len(), self.size);
        let n = self.size;
        let mut s = 0.0;
        for i in 0..n {
            let zi = z[i];
            if zi == 0.0 {
                continue;
            }
            let row = &self.coeff_f[i * n..(i + 1) * n];
            let mut acc = 0.0;
            for j in 0..n {
                acc += row[j] * z[j];
            }
            s += zi * acc;
        }
        s / (dx * dx)
    }

    pub fn candidate_names(&self) -> &'static [&'static str] {
        match self.dim {
            1 => &["A_Q", "A_L", "A_R"],
            _ => &["A_opt", "A_ne", "A_nw", "A_sw", "A_se"],
        }
    }

    /// Rational-text dump of all matrices for audit.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let render = |out: &mut String, name: &str, m: &RationalMatrix| {
            out.push_str(&format!("{name} ({}x{}):\n", m.rows, m.cols));
            for i in 0..m.rows {
                let row: Vec<String> = (0..m.cols).map(|j| m[(i, j)].to_string()).collect();
                out.push_str("  ");
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out.push('\n');
        };
        render(&mut out, "M", &self.coeff_form);
        for (name, a) in self.candidate_names().iter().zip(&self.data_forms) {
            render(&mut out, name, a);
        }
        out
    }
}
