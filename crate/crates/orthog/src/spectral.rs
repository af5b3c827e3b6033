//! Fourier expansions in each family, heat/Poisson semigroup multipliers,
//! the Jacobi heat kernel, and the Bochner subordination check.
//!
//! Coefficients use the orthonormal convention c_k = <f, phi_k> / ||phi_k||
//! throughout, so Parseval identities never double-count norms. Helpers to
//! convert to unnormalized inner products are on [`SpectralCoefficients`].

use crate::error::{Error, Result};
use crate::measure::{integrate, QuadratureRule};
use crate::orthopoly::{eigenvalue, Family, FamilyBasis};

/// Truncated orthonormal coefficient sequence of a function in one family.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    family: Family,
    coeffs: Vec<f64>,
}

impl SpectralCoefficients {
    pub fn new(family: Family, coeffs: Vec<f64>) -> Result<Self> {
        family.validate()?;
        if coeffs.is_empty() {
            return Err(Error::Invalid("empty coefficient sequence".into()));
        }
        Ok(Self { family, coeffs })
    }

    /// Single-mode sequence: coefficient 1 in slot k.
    pub fn single_mode(family: Family, k: usize, truncation: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; truncation.max(k) + 1];
        coeffs[k] = 1.0;
        Self::new(family, coeffs)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// sum of squared coefficients (Parseval energy of the truncation).
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Energy in modes k >= from.
    pub fn energy_from(&self, from: usize) -> f64 {
        self.coeffs.iter().skip(from).map(|c| c * c).sum()
    }

    /// Unnormalized inner product <f, phi_k> = c_k ||phi_k||.
    pub fn unnormalized(&self, k: usize) -> Result<f64> {
        let log_norm = 0.5 * crate::orthopoly::log_squared_norm(&self.family, k)?;
        Ok(self.coeffs[k] * log_norm.exp())
    }

    /// Copy with coefficients below rel_tol of the peak zeroed. Quadrature
    /// noise in trailing coefficients is ~1e-16 of the function scale but
    /// gets amplified without bound at the far nodes of unbounded-domain
    /// rules, so pointwise evaluation paths drop it first.
    pub fn chopped(&self, rel_tol: f64) -> Self {
        let peak = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let cut = rel_tol * peak;
        Self {
            family: self.family,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| if c.abs() < cut { 0.0 } else { c })
                .collect(),
        }
    }
}

/// Spectral multiplier family: heat e^{-t lambda_k}, Poisson e^{-t sqrt(lambda_k)}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemigroupKind {
    Heat,
    Poisson,
}

impl SemigroupKind {
    pub fn multiplier(&self, lambda_k: f64, t: f64) -> f64 {
        match self {
            SemigroupKind::Heat => (-t * lambda_k).exp(),
            SemigroupKind::Poisson => (-t * lambda_k.sqrt()).exp(),
        }
    }
}

/// Orthonormal coefficients of f by quadrature. The rule must be built for
/// the family's measure and have order at least N + 16.
pub fn expand<F: Fn(f64) -> f64>(
    f: F,
    family: Family,
    n: usize,
    rule: &QuadratureRule,
) -> Result<SpectralCoefficients> {
    if rule.measure() != family.measure() {
        return Err(Error::MeasureMismatch {
            rule: rule.measure().name(),
            family: family.name(),
        });
    }
    if rule.order() < n + 16 {
        return Err(Error::RuleOrderTooSmall {
            order: rule.order(),
            needed: n + 16,
        });
    }
    let basis = FamilyBasis::new(family, n)?;
    let mut coeffs = vec![0.0; n + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x });
        }
        let vals = basis.orthonormal_values(x, n);
        for (k, v) in vals.iter().enumerate() {
            coeffs[k] += w * fx * v;
        }
    }
    SpectralCoefficients::new(family, coeffs)
}

/// Pointwise evaluation of the truncated expansion.
pub fn reconstruct(c: &SpectralCoefficients, x: f64) -> Result<f64> {
    let basis = FamilyBasis::new(*c.family(), c.truncation())?;
    Ok(reconstruct_with(&basis, c, x))
}

/// Same, reusing a prebuilt basis (hot paths).
pub fn reconstruct_with(basis: &FamilyBasis, c: &SpectralCoefficients, x: f64) -> f64 {
    let vals = basis.orthonormal_values(x, c.truncation());
    c.coeffs().iter().zip(&vals).map(|(c, v)| c * v).sum()
}

/// c_k -> m_k(t) c_k with the kind's multiplier.
pub fn semigroup_apply(
    c: &SpectralCoefficients,
    kind: SemigroupKind,
    t: f64,
) -> Result<SpectralCoefficients> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let coeffs = c
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, ck)| ck * kind.multiplier(eigenvalue(c.family(), k), t))
        .collect();
    SpectralCoefficients::new(*c.family(), coeffs)
}

/// c_k -> -sqrt(lambda_k) e^{-t sqrt(lambda_k)} c_k, the t-derivative of the
/// Poisson semigroup on coefficients.
pub fn poisson_time_derivative(c: &SpectralCoefficients, t: f64) -> Result<SpectralCoefficients> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let coeffs = c
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, ck)| {
            let sq = eigenvalue(c.family(), k).sqrt();
            -sq * (-t * sq).exp() * ck
        })
        .collect();
    SpectralCoefficients::new(*c.family(), coeffs)
}

/// Coefficients of d/dx P_t f in the derivative-shifted family; the degree
/// index drops by one.
pub fn poisson_space_derivative(c: &SpectralCoefficients, t: f64) -> Result<SpectralCoefficients> {
    if t < 0.0 {
        return Err(Error::NegativeTime(t));
    }
    let n = c.truncation();
    let family = *c.family();
    let shift = crate::orthopoly::derivative_shift(&family, n.max(1))?;
    let target = shift.target;
    let mut out = vec![0.0; n.max(1)];
    for k in 1..=n {
        let sh = crate::orthopoly::derivative_shift(&family, k)?;
        let log_ratio = 0.5 * crate::orthopoly::log_squared_norm(&sh.target, k - 1)?
            - 0.5 * crate::orthopoly::log_squared_norm(&family, k)?;
        let sq = eigenvalue(&family, k).sqrt();
        out[k - 1] = c.coeffs()[k] * (-t * sq).exp() * sh.factor * log_ratio.exp();
    }
    SpectralCoefficients::new(target, out)
}

/// Truncated Jacobi heat kernel p(t, x, y) = sum_k e^{-lambda_k t}
/// phi-hat_k(x) phi-hat_k(y). N must put the last term below 1e-14 of the
/// running sum; otherwise the truncation budget error reports the ratio.
pub fn heat_kernel(family: &Family, t: f64, x: f64, y: f64, n: usize) -> Result<f64> {
    if !matches!(family, Family::Jacobi { .. }) {
        return Err(Error::InvalidParameter(format!(
            "heat kernel is a Jacobi-family operation, got {}",
            family.name()
        )));
    }
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "heat kernel requires t > 0, got {t}"
        )));
    }
    let basis = FamilyBasis::new(*family, n)?;
    let vx = basis.orthonormal_values(x, n);
    let vy = basis.orthonormal_values(y, n);
    let mut sum = 0.0;
    let mut last = 0.0;
    for k in 0..=n {
        // group the node product so p(t,x,y) and p(t,y,x) are bit-identical
        last = (-eigenvalue(family, k) * t).exp() * (vx[k] * vy[k]);
        sum += last;
    }
    let ratio = last.abs() / sum.abs().max(f64::MIN_POSITIVE);
    if ratio >= 1e-14 {
        return Err(Error::TruncationBudget { n, ratio });
    }
    Ok(sum)
}

/// Mass of the truncated kernel in y against the measure:
/// integral p(t, x, .) dmu, which keeps only the k = 0 term.
pub fn heat_kernel_mass(
    family: &Family,
    t: f64,
    x: f64,
    n: usize,
    rule: &QuadratureRule,
) -> Result<f64> {
    integrate(
        |y| heat_kernel(family, t, x, y, n).unwrap_or(f64::NAN),
        rule,
    )
}

/// Residual |integral - e^{-sqrt(lambda) t}| of Bochner's subordination
/// formula. The u-integral against the Gamma(-1/2) measure is evaluated
/// after the substitution u = sqrt(c) e^s (c = lambda t^2/4), which turns
/// the integrand into a double-exponentially decaying analytic function of
/// s; the trapezoid rule is then accurate to machine precision. A plain
/// Gauss rule in u stalls near 1e-6 because of the essential singularity
/// of e^{-c/u} at u = 0.
pub fn bochner_check(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "bochner_check requires lambda > 0 and t >= 0, got ({lambda}, {t})"
        )));
    }
    let c = lambda * t * t / 4.0;
    if c == 0.0 {
        // t -> 0 limit: the integrand is identically 1 and integrates to 1
        return Ok(0.0);
    }
    let sqrt_c = c.sqrt();
    let closed = (-lambda.sqrt() * t).exp();
    let h = 0.05;
    let l = (1520.0 / sqrt_c).ln().max(12.0) + 2.0;
    let steps = (2.0 * l / h).ceil() as usize;
    let mut acc = 0.0;
    for i in 0..=steps {
        let s = -l + i as f64 * h;
        acc += (0.5 * s - 2.0 * sqrt_c * s.cosh()).exp();
    }
    let integral = c.powf(0.25) / std::f64::consts::PI.sqrt() * h * acc;
    Ok((integral - closed).abs())
}
