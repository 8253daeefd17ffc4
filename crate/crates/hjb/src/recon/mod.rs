//! CWENO / CWENOZ interpolation from point values.
//!
//! Both operators blend one high-degree candidate fitted on the full stencil
//! with directionally biased low-degree candidates. The blend happens once
//! per cell in coefficient space, after which the reconstruction polynomial
//! can be evaluated at any point of the cell for the cost of a Horner pass.
//! `BaselinePointwise` runs the identical arithmetic but is meant to be
//! re-run per evaluation point, reproducing the cost structure of
//! reconstructions whose weights depend on the evaluation point.

mod forms;
mod poly;

pub use forms::{derive_indicator_forms, IndicatorForms};
pub use poly::{
    fit_poly_1d, fit_poly_2d, Candidate1D, Candidate2D, Polynomial1D, Polynomial2D, DIRECTIONS,
    MONOMIALS, MONOMIAL_INDEX,
};

use crate::grid::StencilValues;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReconMode {
    Cweno,
    CwenoZ,
    /// same arithmetic as [`ReconMode::Cweno`], recomputed at every
    /// evaluation point (cost-model baseline)
    BaselinePointwise,
}

impl ReconMode {
    pub fn uses_tau(self) -> bool {
        matches!(self, ReconMode::CwenoZ)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cweno" => Ok(ReconMode::Cweno),
            "cwenoz" => Ok(ReconMode::CwenoZ),
            "baseline" => Ok(ReconMode::BaselinePointwise),
            _ => Err(Error::Config(format!("unknown reconstruction mode '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ReconMode::Cweno => "cweno",
            ReconMode::CwenoZ => "cwenoz",
            ReconMode::BaselinePointwise => "baseline",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum EpsRule {
    /// epsilon = dx^2
    DxSquared,
    Fixed(f64),
}

/// Linear coefficients and weight parameters of the blend.
#[derive(Clone, Copy, Debug)]
pub struct ReconConfig {
    pub dim: usize,
    pub mode: ReconMode,
    /// weight of each low-order candidate (1/8 in 1D, 1/16 in 2D)
    pub d_low: f64,
    /// exponent l in the nonlinear weights
    pub exponent: i32,
    pub eps: EpsRule,
}

impl ReconConfig {
    pub fn new(dim: usize, mode: ReconMode) -> Self {
        let d_low = if dim == 1 { 1.0 / 8.0 } else { 1.0 / 16.0 };
        ReconConfig {
            dim,
            mode,
            d_low,
            exponent: 2,
            eps: EpsRule::DxSquared,
        }
    }

    pub fn low_count(&self) -> usize {
        if self.dim == 1 {
            2
        } else {
            4
        }
    }

    pub fn d0(&self) -> f64 {
        1.0 - self.low_count() as f64 * self.d_low
    }

    pub fn epsilon(&self, dx: f64) -> f64 {
        match self.eps {
            EpsRule::DxSquared => dx * dx,
            EpsRule::Fixed(e) => e,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d_low <= 0.0 || self.d0() <= 0.0 {
            return Err(Error::Config(format!(
                "linear coefficients must be strictly positive: d_low={}, d0={}",
                self.d_low,
                self.d0()
            )));
        }
        if self.dim == 1 && self.d_low > 0.332 {
            return Err(Error::Config(format!(
                "d={} violates the 1D contraction bound d <= 0.332",
                self.d_low
            )));
        }
        if self.exponent < 1 {
            return Err(Error::Config("weight exponent l must be >= 1".into()));
        }
        if let EpsRule::Fixed(e) = self.eps {
            if !(e > 0.0) {
                return Err(Error::Config("epsilon must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Blended polynomial of one cell together with its weights and indicators
/// (optimal candidate first).
#[derive(Clone, Debug)]
pub enum ReconPolynomial {
    One {
        poly: Polynomial1D,
        weights: [f64; 3],
        indicators: [f64; 3],
        tau: Option<f64>,
    },
    Two {
        poly: Polynomial2D,
        weights: [f64; 5],
        indicators: [f64; 5],
        tau: Option<f64>,
    },
}

impl ReconPolynomial {
    /// Horner evaluation at local coordinates (each in [0,1] for interior
    /// points; clamped feet may legitimately sit on the cell boundary).
    pub fn evaluate(&self, frac: [f64; 2]) -> f64 {
        match self {
            ReconPolynomial::One { poly, .. } => poly.eval(frac[0]),
            ReconPolynomial::Two { poly, .. } => poly.eval(frac[0], frac[1]),
        }
    }

    pub fn weights(&self) -> &[f64] {
        match self {
            ReconPolynomial::One { weights, .. } => weights,
            ReconPolynomial::Two { weights, .. } => weights,
        }
    }

    pub fn indicators(&self) -> &[f64] {
        match self {
            ReconPolynomial::One { indicators, .. } => indicators,
            ReconPolynomial::Two { indicators, .. } => indicators,
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match self {
            ReconPolynomial::One { tau, .. } => *tau,
            ReconPolynomial::Two { tau, .. } => *tau,
        }
    }
}

/// Closed-form 1D indicator `(4 z2^2 + 12 z2 z3 + 48 z3^2) / dx^2`.
pub fn oscillation_1d(p: &Polynomial1D) -> f64 {
    let z2 = p.coeffs[2];
    let z3 = p.coeffs[3];
    (4.0 * z2 * z2 + 12.0 * z2 * z3 + 48.0 * z3 * z3) / (p.dx * p.dx)
}

/// 2D indicator via the coefficient-space quadratic form.
pub fn oscillation_2d(p: &Polynomial2D, forms: &IndicatorForms) -> f64 {
    forms.oscillation_from_coeffs(&p.coeffs, p.dx)
}

/// Indicator of a candidate straight from the stencil data.
pub fn oscillation_data(
    values: &StencilValues,
    which: usize,
    forms: &IndicatorForms,
    dx: f64,
) -> f64 {
    forms.oscillation_from_data(which, values.as_slice(), dx)
}

/// Global smoothness indicator in 1D; cancels all indicator terms through
/// third order on smooth data.
pub fn tau_1d(i_q: f64, i_l: f64, i_r: f64) -> f64 {
    (2.0 * i_q - i_l - i_r).abs()
}

/// Global smoothness indicator in 2D.
pub fn tau_2d(i_opt: f64, i_ne: f64, i_se: f64, i_sw: f64, i_nw: f64) -> f64 {
    (4.0 * i_opt - i_ne - i_se - i_sw - i_nw).abs()
}

fn nonlinear_weights<const K: usize>(
    d: &[f64; K],
    indicators: &[f64; K],
    tau: Option<f64>,
    eps: f64,
    l: i32,
) -> [f64; K] {
    let mut alpha = [0.0; K];
    match tau {
        None => {
            for k in 0..K {
                alpha[k] = d[k] / (indicators[k] + eps).powi(l);
            }
        }
        Some(t) => {
            for k in 0..K {
                alpha[k] = d[k] * (1.0 + (t / (indicators[k] + eps)).powi(l));
            }
        }
    }
    let sum: f64 = alpha.iter().sum();
    for a in alpha.iter_mut() {
        *a /= sum;
    }
    alpha
}

/// Blend the 1D candidates `[Q, P_L, P_R]` (optimal first) with indicators
/// computed from their coefficients.
pub fn blend_1d(cands: &[Polynomial1D; 3], cfg: &ReconConfig) -> ReconPolynomial {
    let indicators = [
        oscillation_1d(&cands[0]),
        oscillation_1d(&cands[1]),
        oscillation_1d(&cands[2]),
    ];
    blend_1d_with(cands, indicators, cfg)
}

pub(crate) fn blend_1d_with(
    cands: &[Polynomial1D; 3],
    indicators: [f64; 3],
    cfg: &ReconConfig,
) -> ReconPolynomial {
    let dx = cands[0].dx;
    let d0 = cfg.d0();
    let d = [d0, cfg.d_low, cfg.d_low];
    // P0 = (P_opt - sum d_k P_k) / d0, coefficient-wise
    let mut p0 = [0.0; 4];
    for i in 0..4 {
        p0[i] = (cands[0].coeffs[i] - cfg.d_low * (cands[1].coeffs[i] + cands[2].coeffs[i])) / d0;
    }
    let tau = cfg
        .mode
        .uses_tau()
        .then(|| tau_1d(indicators[0], indicators[1], indicators[2]));
    let w = nonlinear_weights(&d, &indicators, tau, cfg.epsilon(dx), cfg.exponent);
    let mut z = [0.0; 4];
    for i in 0..4 {
        z[i] = w[0] * p0[i] + w[1] * cands[1].coeffs[i] + w[2] * cands[2].coeffs[i];
    }
    ReconPolynomial::One {
        poly: Polynomial1D { coeffs: z, dx },
        weights: w,
        indicators,
        tau,
    }
}

/// Blend the 2D candidates `[bicubic, ne, nw, sw, se]` (optimal first).
pub fn blend_2d(
    cands: &[Polynomial2D; 5],
    cfg: &ReconConfig,
    forms: &IndicatorForms,
) -> ReconPolynomial {
    let indicators = [
        oscillation_2d(&cands[0], forms),
        oscillation_2d(&cands[1], forms),
        oscillation_2d(&cands[2], forms),
        oscillation_2d(&cands[3], forms),
        oscillation_2d(&cands[4], forms),
    ];
    blend_2d_with(cands, indicators, cfg)
}

pub(crate) fn blend_2d_with(
    cands: &[Polynomial2D; 5],
    indicators: [f64; 5],
    cfg: &ReconConfig,
) -> ReconPolynomial {
    let dx = cands[0].dx;
    let d0 = cfg.d0();
    let d = [d0, cfg.d_low, cfg.d_low, cfg.d_low, cfg.d_low];
    let mut p0 = [0.0; 16];
    for i in 0..16 {
        let low: f64 = (1..5).map(|k| cands[k].coeffs[i]).sum();
        p0[i] = (cands[0].coeffs[i] - cfg.d_low * low) / d0;
    }
    let tau = cfg.mode.uses_tau().then(|| {
        tau_2d(
            indicators[0],
            indicators[1],
            indicators[4],
            indicators[3],
            indicators[2],
        )
    });
    let w = nonlinear_weights(&d, &indicators, tau, cfg.epsilon(dx), cfg.exponent);
    let mut z = [0.0; 16];
    for i in 0..16 {
        z[i] = w[0] * p0[i];
        for k in 1..5 {
            z[i] += w[k] * cands[k].coeffs[i];
        }
    }
    ReconPolynomial::Two {
        poly: Polynomial2D { coeffs: z, dx },
        weights: w,
        indicators,
        tau,
    }
}

/// Fit all candidates on the stencil, compute the indicators from the data,
/// and blend. The result is meant to be cached per cell per time step and
/// evaluated at every foot landing in the cell.
pub fn reconstruct_cell(
    values: &StencilValues,
    cfg: &ReconConfig,
    forms: &IndicatorForms,
    dx: f64,
) -> ReconPolynomial {
    match values {
        StencilValues::One(u) => {
            let cands = [
                fit_poly_1d(u, Candidate1D::Cubic, dx),
                fit_poly_1d(u, Candidate1D::Left, dx),
                fit_poly_1d(u, Candidate1D::Right, dx),
            ];
            let indicators = [
                forms.oscillation_from_data(0, u, dx),
                forms.oscillation_from_data(1, u, dx),
                forms.oscillation_from_data(2, u, dx),
            ];
            blend_1d_with(&cands, indicators, cfg)
        }
        StencilValues::Two(u) => {
            let cands = [
                fit_poly_2d(u, Candidate2D::Bicubic, dx),
                fit_poly_2d(u, Candidate2D::Ne, dx),
                fit_poly_2d(u, Candidate2D::Nw, dx),
                fit_poly_2d(u, Candidate2D::Sw, dx),
                fit_poly_2d(u, Candidate2D::Se, dx),
            ];
            let indicators = [
                forms.oscillation_from_data(0, u, dx),
                forms.oscillation_from_data(1, u, dx),
                forms.oscillation_from_data(2, u, dx),
                forms.oscillation_from_data(3, u, dx),
                forms.oscillation_from_data(4, u, dx),
            ];
            blend_2d_with(&cands, indicators, cfg)
        }
    }
}

/// Per-point path: rebuild candidates, indicators and weights for a single
/// evaluation. Bitwise identical to `reconstruct_cell` + `evaluate`; exists
/// so that the caller can account one weight computation per point.
pub fn baseline_pointwise(
    values: &StencilValues,
    frac: [f64; 2],
    cfg: &ReconConfig,
    forms: &IndicatorForms,
    dx: f64,
) -> f64 {
    reconstruct_cell(values, cfg, forms, dx).evaluate(frac)
}
