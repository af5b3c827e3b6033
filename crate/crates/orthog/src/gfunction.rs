//! Littlewood-Paley g-functions for the three families.
//!
//! g f = (int_0^inf t |(d_t, delta) P_t f|^2 dt)^{1/2}, computed pointwise
//! through the closed-form time integral of the coefficient double series:
//! int_0^inf t e^{-t(sqrt(l_n)+sqrt(l_m))} dt = (sqrt(l_n)+sqrt(l_m))^{-2}.
//! The L2 norm collapses by Parseval to sqrt(1/2 sum_{k>=1} c_k^2), a
//! quarter from the time part and a quarter from the space part.

use crate::error::{Error, Result};
use crate::measure::{lp_norm, QuadratureRule};
use crate::orthopoly::{eigenvalue, Family, FamilyBasis};
use crate::spectral::SpectralCoefficients;

/// Tolerable numerical negativity of the squared series before it is
/// treated as a logic bug rather than rounding.
const RADICAND_CLAMP: f64 = -1e-12;

/// The closed-form kernel weights of the double series:
/// time part w(n,m) = sqrt(l_n l_m)/(sqrt(l_n)+sqrt(l_m))^2,
/// space part u(n,m) = 1/(sqrt(l_n)+sqrt(l_m))^2; w(n,n) = 1/4.
#[derive(Debug, Clone)]
pub struct ClosedFormWeight {
    sqrt_eig: Vec<f64>,
}

impl ClosedFormWeight {
    pub fn new(family: &Family, max_degree: usize) -> Self {
        let sqrt_eig = (0..=max_degree)
            .map(|k| eigenvalue(family, k).sqrt())
            .collect();
        Self { sqrt_eig }
    }

    /// Valid for n, m >= 1.
    pub fn time(&self, n: usize, m: usize) -> f64 {
        let s = self.sqrt_eig[n] + self.sqrt_eig[m];
        self.sqrt_eig[n] * self.sqrt_eig[m] / (s * s)
    }

    /// Valid for n, m >= 1.
    pub fn space(&self, n: usize, m: usize) -> f64 {
        let s = self.sqrt_eig[n] + self.sqrt_eig[m];
        1.0 / (s * s)
    }
}

/// g^2 split into its time and space parts on a set of nodes;
/// g^2 = g1 + g2 pointwise and both parts are nonnegative.
#[derive(Debug, Clone)]
pub struct GFunctionDecomposition {
    pub nodes: Vec<f64>,
    pub time_part: Vec<f64>,
    pub space_part: Vec<f64>,
}

impl GFunctionDecomposition {
    pub fn g_values(&self) -> Vec<f64> {
        self.time_part
            .iter()
            .zip(&self.space_part)
            .map(|(a, b)| (a + b).max(0.0).sqrt())
            .collect()
    }
}

/// Evaluator holding the precomputed basis and closed-form weights for one
/// family. Evaluation over a quadrature grid is embarrassingly parallel;
/// this type is Sync and node order is preserved by the callers.
#[derive(Debug, Clone)]
pub struct GFunction {
    basis: FamilyBasis,
    weights: ClosedFormWeight,
}

impl GFunction {
    pub fn new(family: Family, max_degree: usize) -> Result<Self> {
        Ok(Self {
            basis: FamilyBasis::new(family, max_degree)?,
            weights: ClosedFormWeight::new(&family, max_degree),
        })
    }

    pub fn family(&self) -> &Family {
        self.basis.family()
    }

    /// (g1(x), g2(x)): the time and space parts of g(x)^2. Values inside
    /// the rounding clamp are snapped to zero; anything more negative is a
    /// hard error.
    pub fn parts_at(&self, c: &SpectralCoefficients, x: f64) -> Result<(f64, f64)> {
        let n = c.truncation().min(self.basis.max_degree());
        let vals = self.basis.orthonormal_values(x, n);
        let dels = self.basis.delta_values(x, n);
        let coeffs = c.coeffs();

        let mut g1 = 0.0;
        let mut g2 = 0.0;
        for i in 1..=n {
            let vi = coeffs[i] * vals[i];
            let di = coeffs[i] * dels[i];
            g1 += vi * vi * self.weights.time(i, i);
            g2 += di * di * self.weights.space(i, i);
            for j in (i + 1)..=n {
                let vj = coeffs[j] * vals[j];
                let dj = coeffs[j] * dels[j];
                g1 += 2.0 * vi * vj * self.weights.time(i, j);
                g2 += 2.0 * di * dj * self.weights.space(i, j);
            }
        }
        Ok((clamp_part(g1)?, clamp_part(g2)?))
    }

    /// g(x) = sqrt(g1(x) + g2(x)).
    pub fn pointwise(&self, c: &SpectralCoefficients, x: f64) -> Result<f64> {
        let (g1, g2) = self.parts_at(c, x)?;
        Ok((g1 + g2).sqrt())
    }

    pub fn decompose_on(
        &self,
        c: &SpectralCoefficients,
        nodes: &[f64],
    ) -> Result<GFunctionDecomposition> {
        let mut time_part = Vec::with_capacity(nodes.len());
        let mut space_part = Vec::with_capacity(nodes.len());
        for &x in nodes {
            let (g1, g2) = self.parts_at(c, x)?;
            time_part.push(g1);
            space_part.push(g2);
        }
        Ok(GFunctionDecomposition {
            nodes: nodes.to_vec(),
            time_part,
            space_part,
        })
    }
}

fn clamp_part(v: f64) -> Result<f64> {
    if v < RADICAND_CLAMP {
        return Err(Error::NegativeRadicand(v));
    }
    Ok(v.max(0.0))
}

/// Convenience single-point evaluation.
pub fn g_pointwise(c: &SpectralCoefficients, x: f64) -> Result<f64> {
    GFunction::new(*c.family(), c.truncation())?.pointwise(c, x)
}

/// ||g f||_2 in closed form from the coefficients:
/// sqrt(1/2 sum_{k>=1} c_k^2).
pub fn g_l2_norm(c: &SpectralCoefficients) -> f64 {
    (0.5 * c.energy_from(1)).sqrt()
}

/// Quadrature Lp norm of the pointwise g. Sub-noise trailing coefficients
/// (below 1e-13 of the peak) are dropped first: they are pure quadrature
/// rounding, and the far nodes of Gamma/Gaussian rules amplify them past
/// everything real once p > 2.
pub fn g_lp_norm(c: &SpectralCoefficients, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "g_lp_norm requires p > 1, got {p}"
        )));
    }
    let c = c.chopped(1e-13);
    let g = GFunction::new(*c.family(), c.truncation())?;
    let values: Result<Vec<f64>> = rule.nodes().iter().map(|&x| g.pointwise(&c, x)).collect();
    let values = values?;
    let mut acc = 0.0;
    for (v, w) in values.iter().zip(rule.weights()) {
        acc += w * v.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// A named corpus entry for the ratio report.
pub type NamedFunction = (String, Box<dyn Fn(f64) -> f64 + Send + Sync>);

/// One row of the empirical ratio table.
#[derive(Debug, Clone)]
pub struct RatioRow {
    pub name: String,
    pub p: f64,
    pub g_norm: f64,
    pub f_norm: f64,
    pub ratio: f64,
}

/// Empirical ||g f||_p / ||f||_p over a corpus; the max ratio per p is a
/// lower bound witness for the boundedness constant.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub max_per_p: Vec<(f64, f64)>,
}

pub fn g_ratio_report(
    corpus: &[NamedFunction],
    family: Family,
    p_grid: &[f64],
    trunc: usize,
    rule: &QuadratureRule,
) -> Result<RatioReport> {
    if corpus.is_empty() {
        return Err(Error::Invalid("empty corpus".into()));
    }
    let mut rows = Vec::new();
    for (name, f) in corpus {
        let c = crate::spectral::expand(f, family, trunc, rule)?;
        for &p in p_grid {
            let g_norm = g_lp_norm(&c, p, rule)?;
            let f_norm = lp_norm(f, p, rule)?;
            let ratio = if f_norm > 0.0 { g_norm / f_norm } else { 0.0 };
            rows.push(RatioRow {
                name: name.clone(),
                p,
                g_norm,
                f_norm,
                ratio,
            });
        }
    }
    let max_per_p = p_grid
        .iter()
        .map(|&p| {
            let m = rows
                .iter()
                .filter(|r| r.p == p)
                .map(|r| r.ratio)
                .fold(0.0f64, f64::max);
            (p, m)
        })
        .collect();
    Ok(RatioReport { rows, max_per_p })
}
