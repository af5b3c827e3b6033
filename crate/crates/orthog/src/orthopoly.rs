//! Exact-structure evaluation of the three classical polynomial families:
//! values in Szego normalization, squared norms under the normalized
//! probability measures, eigenvalues, derivative-shift identities and
//! second-order operator application.

use crate::basis::OrthonormalBasis;
use crate::error::{Error, Result};
use crate::gammafn::{ln_binomial, ln_gamma};
use crate::measure::Measure;

/// Degrees above this are an explicit error, not silent truncation.
pub const DEGREE_CAP: usize = 256;

/// One of the classical orthogonal polynomial systems, in the Szego
/// normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Jacobi { alpha: f64, beta: f64 },
    Gegenbauer { lambda: f64 },
    Hermite,
    Laguerre { alpha: f64 },
}

impl Family {
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let f = Family::Jacobi { alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn gegenbauer(lambda: f64) -> Result<Self> {
        let f = Family::Gegenbauer { lambda };
        f.validate()?;
        Ok(f)
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        let f = Family::Laguerre { alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn hermite() -> Self {
        Family::Hermite
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Family::Jacobi { alpha, beta } => {
                if !(alpha > -1.0 && alpha.is_finite() && beta > -1.0 && beta.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Jacobi requires alpha, beta > -1, got ({alpha}, {beta})"
                    )));
                }
            }
            Family::Gegenbauer { lambda } => {
                if !(lambda > 0.0 && lambda.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Gegenbauer requires lambda > 0, got {lambda}"
                    )));
                }
            }
            Family::Hermite => {}
            Family::Laguerre { alpha } => {
                if !(alpha > -1.0 && alpha.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Laguerre requires alpha > -1, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The probability measure the family is orthogonal for. Gegenbauer
    /// shares the symmetric Jacobi measure with alpha = beta = lambda - 1/2.
    pub fn measure(&self) -> Measure {
        match *self {
            Family::Jacobi { alpha, beta } => Measure::JacobiBeta { alpha, beta },
            Family::Gegenbauer { lambda } => Measure::JacobiBeta {
                alpha: lambda - 0.5,
                beta: lambda - 0.5,
            },
            Family::Hermite => Measure::Gaussian,
            Family::Laguerre { alpha } => Measure::Gamma { alpha },
        }
    }

    pub fn natural_domain(&self) -> (f64, f64) {
        self.measure().domain()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.measure().contains(x)
    }

    pub fn name(&self) -> String {
        match self {
            Family::Jacobi { alpha, beta } => format!("jacobi({alpha},{beta})"),
            Family::Gegenbauer { lambda } => format!("gegenbauer({lambda})"),
            Family::Hermite => "hermite".into(),
            Family::Laguerre { alpha } => format!("laguerre({alpha})"),
        }
    }

    /// Sign relating the Szego-normalized polynomial to the positive-leading
    /// orthonormal polynomial of the same measure.
    pub(crate) fn sign(&self, n: usize) -> f64 {
        match self {
            Family::Laguerre { .. } => {
                if n.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }
            _ => 1.0,
        }
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > DEGREE_CAP {
        return Err(Error::DegreeCap {
            degree: n,
            cap: DEGREE_CAP,
        });
    }
    Ok(())
}

/// Eigenvalue of the family's second-order operator on the degree-k
/// eigenfunction: k(k+alpha+beta+1) for Jacobi, k(k+2 lambda) for
/// Gegenbauer, k for Hermite and Laguerre.
pub fn eigenvalue(family: &Family, k: usize) -> f64 {
    let kf = k as f64;
    match *family {
        Family::Jacobi { alpha, beta } => kf * (kf + alpha + beta + 1.0),
        Family::Gegenbauer { lambda } => kf * (kf + 2.0 * lambda),
        Family::Hermite | Family::Laguerre { .. } => kf,
    }
}

/// Value of the degree-n family member at x (Szego normalization), by the
/// classical forward three-term recurrence. Evaluation outside the natural
/// domain is permitted; use [`Family::contains`] to flag it.
pub fn eval_poly(family: &Family, n: usize, x: f64) -> Result<f64> {
    family.validate()?;
    check_degree(n)?;
    Ok(match *family {
        Family::Jacobi { alpha, beta } => eval_jacobi(alpha, beta, n, x),
        Family::Gegenbauer { lambda } => eval_gegenbauer(lambda, n, x),
        Family::Hermite => eval_hermite(n, x),
        Family::Laguerre { alpha } => eval_laguerre(alpha, n, x),
    })
}

fn eval_jacobi(alpha: f64, beta: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm = 1.0;
    let mut pc = 0.5 * (alpha + beta + 2.0) * x + 0.5 * (alpha - beta);
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + alpha + beta;
        let a1 = 2.0 * kf * (kf + alpha + beta) * (s - 2.0);
        let a2 = (s - 1.0) * (alpha * alpha - beta * beta);
        let a3 = (s - 1.0) * s * (s - 2.0);
        let a4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * s;
        let pn = ((a2 + a3 * x) * pc - a4 * pm) / a1;
        pm = pc;
        pc = pn;
    }
    pc
}

fn eval_gegenbauer(lambda: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm = 1.0;
    let mut pc = 2.0 * lambda * x;
    for k in 2..=n {
        let kf = k as f64;
        let pn = (2.0 * (kf + lambda - 1.0) * x * pc - (kf + 2.0 * lambda - 2.0) * pm) / kf;
        pm = pc;
        pc = pn;
    }
    pc
}

fn eval_hermite(n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm = 1.0;
    let mut pc = 2.0 * x;
    for k in 2..=n {
        let pn = 2.0 * x * pc - 2.0 * (k as f64 - 1.0) * pm;
        pm = pc;
        pc = pn;
    }
    pc
}

fn eval_laguerre(alpha: f64, n: usize, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut pm = 1.0;
    let mut pc = 1.0 + alpha - x;
    for k in 2..=n {
        let kf = k as f64;
        let pn = ((2.0 * kf - 1.0 + alpha - x) * pc - (kf - 1.0 + alpha) * pm) / kf;
        pm = pc;
        pc = pn;
    }
    pc
}

/// log of ||phi_n||^2 under the family's normalized probability measure.
pub fn log_squared_norm(family: &Family, n: usize) -> Result<f64> {
    family.validate()?;
    check_degree(n)?;
    let nf = n as f64;
    Ok(match *family {
        Family::Jacobi { alpha, beta } => log_jacobi_hhat(alpha, beta, n),
        Family::Gegenbauer { lambda } => {
            log_jacobi_hhat(lambda - 0.5, lambda - 0.5, n)
                - 2.0 * log_gegenbauer_conversion_factor(lambda, n)
        }
        Family::Hermite => nf * std::f64::consts::LN_2 + ln_gamma(nf + 1.0),
        Family::Laguerre { alpha } => {
            let mut acc = -ln_gamma(nf + 1.0);
            for i in 0..n {
                acc += (alpha + 1.0 + i as f64).ln();
            }
            acc
        }
    })
}

fn log_jacobi_hhat(alpha: f64, beta: f64, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    // all gamma ratios have integer offset n, so they reduce to short log
    // sums; independent ln_gamma calls would lose ~1e-11 absolute at
    // parameters of order 1e4 (the ulp of ln_gamma(2e4) already exceeds it)
    let nf = n as f64;
    let mut acc = -((2.0 * nf + alpha + beta + 1.0).ln()) - ln_gamma(nf + 1.0);
    for i in 0..n {
        let fi = i as f64;
        acc += (alpha + 1.0 + fi).ln() + (beta + 1.0 + fi).ln();
        if i + 1 < n {
            acc -= (alpha + beta + 2.0 + fi).ln();
        }
    }
    acc
}

/// ||phi_n||^2 itself. When the value overflows f64 the log value is
/// reported in the error.
pub fn squared_norm(family: &Family, n: usize) -> Result<f64> {
    let lg = log_squared_norm(family, n)?;
    let v = lg.exp();
    if !v.is_finite() {
        return Err(Error::Overflow { log_value: lg });
    }
    Ok(v)
}

/// Table of squared norms for degrees 0..=n_max.
#[derive(Debug, Clone)]
pub struct NormTable {
    family: Family,
    squared_norms: Vec<f64>,
}

impl NormTable {
    pub fn new(family: Family, n_max: usize) -> Result<Self> {
        let mut squared_norms = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let v = squared_norm(&family, n)?;
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!(
                    "norm table entry {n} not strictly positive finite: {v}"
                )));
            }
            squared_norms.push(v);
        }
        Ok(Self {
            family,
            squared_norms,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn squared_norms(&self) -> &[f64] {
        &self.squared_norms
    }
}

/// P_n^{(alpha,beta)}(1) = C(n+alpha, n), strictly positive.
pub fn value_at_one(family: &Family, n: usize) -> Result<f64> {
    check_degree(n)?;
    match *family {
        Family::Jacobi { alpha, .. } => {
            family.validate()?;
            Ok(ln_binomial(n as f64 + alpha, n as f64).exp())
        }
        _ => Err(Error::InvalidParameter(format!(
            "value_at_one is a Jacobi-family operation, got {}",
            family.name()
        ))),
    }
}

/// The exact first-derivative identity d/dx phi_n = factor * psi_{n-1},
/// with psi in the returned target family.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeShift {
    pub factor: f64,
    pub target: Family,
    pub target_degree: usize,
}

pub fn derivative_shift(family: &Family, n: usize) -> Result<DerivativeShift> {
    family.validate()?;
    check_degree(n)?;
    if n == 0 {
        return Ok(DerivativeShift {
            factor: 0.0,
            target: *family,
            target_degree: 0,
        });
    }
    let nf = n as f64;
    Ok(match *family {
        Family::Jacobi { alpha, beta } => DerivativeShift {
            factor: 0.5 * (nf + alpha + beta + 1.0),
            target: Family::Jacobi {
                alpha: alpha + 1.0,
                beta: beta + 1.0,
            },
            target_degree: n - 1,
        },
        Family::Gegenbauer { lambda } => DerivativeShift {
            factor: 2.0 * lambda,
            target: Family::Gegenbauer {
                lambda: lambda + 1.0,
            },
            target_degree: n - 1,
        },
        Family::Hermite => DerivativeShift {
            factor: 2.0 * nf,
            target: Family::Hermite,
            target_degree: n - 1,
        },
        Family::Laguerre { alpha } => DerivativeShift {
            factor: -1.0,
            target: Family::Laguerre { alpha: alpha + 1.0 },
            target_degree: n - 1,
        },
    })
}

/// log of the factor c with C_n^lambda = c^{-1} P_n^{(lambda-1/2,lambda-1/2)}.
pub fn log_gegenbauer_conversion_factor(lambda: f64, n: usize) -> f64 {
    // the gamma arguments differ by the integer n, so the log-ratio reduces
    // to a short sum of logs; this stays fully conditioned even at
    // lambda ~ 1e6 where independent ln_gamma calls would lose ~1e-12
    let mut acc = 0.0;
    for i in 0..n {
        let fi = i as f64;
        acc += (lambda + 0.5 + fi).ln() - (2.0 * lambda + fi).ln();
    }
    acc
}

/// The factor itself; overflow is reported with the log value intact.
pub fn gegenbauer_conversion_factor(lambda: f64, n: usize) -> Result<f64> {
    Family::gegenbauer(lambda)?;
    check_degree(n)?;
    let lg = log_gegenbauer_conversion_factor(lambda, n);
    let v = lg.exp();
    if !v.is_finite() {
        return Err(Error::Overflow { log_value: lg });
    }
    Ok(v)
}

/// (L phi_n)(x) for the family's second-order operator, assembled from the
/// exact derivative-shift identities applied twice; equals
/// eigenvalue * phi_n(x).
pub fn apply_operator(family: &Family, n: usize, x: f64) -> Result<f64> {
    family.validate()?;
    check_degree(n)?;
    match family {
        Family::Jacobi { .. } | Family::Gegenbauer { .. } => {
            if x.abs() >= 1.0 {
                return Err(Error::BadEvaluationPoint {
                    x,
                    reason: "operator degenerates at the interval endpoints".into(),
                });
            }
        }
        Family::Laguerre { .. } => {
            if x <= 0.0 {
                return Err(Error::BadEvaluationPoint {
                    x,
                    reason: "operator degenerates at the origin".into(),
                });
            }
        }
        Family::Hermite => {}
    }
    if n == 0 {
        return Ok(0.0);
    }
    let first = derivative_shift(family, n)?;
    let d1 = first.factor * eval_poly(&first.target, n - 1, x)?;
    let d2 = if n >= 2 {
        let second = derivative_shift(&first.target, n - 1)?;
        first.factor * second.factor * eval_poly(&second.target, n - 2, x)?
    } else {
        0.0
    };
    Ok(match *family {
        Family::Jacobi { alpha, beta } => {
            -(1.0 - x * x) * d2 - (beta - alpha - (alpha + beta + 2.0) * x) * d1
        }
        Family::Gegenbauer { lambda } => -(1.0 - x * x) * d2 + (2.0 * lambda + 1.0) * x * d1,
        Family::Hermite => -0.5 * d2 + x * d1,
        Family::Laguerre { alpha } => -x * d2 - (alpha + 1.0 - x) * d1,
    })
}

/// Family-signed orthonormal basis plus the log-norm and derivative-shift
/// scalars needed for spectral expansions and g-function series. The heavy
/// lifting is degree-independent of the family parameters because values
/// are produced by the orthonormal recurrence.
#[derive(Debug, Clone)]
pub struct FamilyBasis {
    family: Family,
    basis: OrthonormalBasis,
    shifted: OrthonormalBasis,
    log_norms: Vec<f64>,
    /// delta phi-hat_n = delta_weight(x) * sigma_n * psi-hat_{n-1}(x)
    sigma: Vec<f64>,
}

impl FamilyBasis {
    pub fn new(family: Family, max_degree: usize) -> Result<Self> {
        family.validate()?;
        check_degree(max_degree)?;
        let basis = OrthonormalBasis::new(family.measure(), max_degree)?;
        let shift0 = derivative_shift(&family, max_degree.max(1))?;
        let shifted = OrthonormalBasis::new(shift0.target.measure(), max_degree.max(1) - 1)?;
        let mut log_norms = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            log_norms.push(0.5 * log_squared_norm(&family, n)?);
        }
        let mut sigma = vec![0.0; max_degree + 1];
        for n in 1..=max_degree {
            let sh = derivative_shift(&family, n)?;
            let log_shift_norm = 0.5 * log_squared_norm(&sh.target, n - 1)?;
            // delta phi-hat_n is expressed over the positive-leading shifted
            // basis, so only the target family's sign enters here
            sigma[n] = sh.factor * (log_shift_norm - log_norms[n]).exp() * sh.target.sign(n - 1);
        }
        Ok(Self {
            family,
            basis,
            shifted,
            log_norms,
            sigma,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn max_degree(&self) -> usize {
        self.log_norms.len() - 1
    }

    /// log ||phi_n|| in Szego normalization.
    pub fn log_norm(&self, n: usize) -> f64 {
        self.log_norms[n]
    }

    pub fn eigenvalue(&self, n: usize) -> f64 {
        eigenvalue(&self.family, n)
    }

    /// Orthonormal values phi-hat_0(x) .. phi-hat_n(x) (family sign
    /// convention: phi-hat_n = phi_n / ||phi_n||).
    pub fn orthonormal_values(&self, x: f64, n: usize) -> Vec<f64> {
        let mut v = self.basis.values(x, n);
        if matches!(self.family, Family::Laguerre { .. }) {
            for (k, val) in v.iter_mut().enumerate() {
                *val *= self.family.sign(k);
            }
        }
        v
    }

    /// Multiplier in front of d/dx in the family's natural derivative
    /// delta: sqrt(1-x^2), 1/sqrt(2), sqrt(x).
    pub fn delta_weight(&self, x: f64) -> f64 {
        match self.family {
            Family::Jacobi { .. } | Family::Gegenbauer { .. } => (1.0 - x * x).sqrt(),
            Family::Hermite => std::f64::consts::FRAC_1_SQRT_2,
            Family::Laguerre { .. } => x.sqrt(),
        }
    }

    /// Values (delta phi-hat_0)(x) .. (delta phi-hat_n)(x) of the natural
    /// derivative applied to the orthonormal family; index 0 is zero.
    /// sigma_n carries the family sign products, shifted values are
    /// positive-leading.
    pub fn delta_values(&self, x: f64, n: usize) -> Vec<f64> {
        let w = self.delta_weight(x);
        if n == 0 {
            return vec![0.0];
        }
        let shifted = self.shifted.values(x, n - 1);
        let mut out = Vec::with_capacity(n + 1);
        out.push(0.0);
        for k in 1..=n {
            out.push(w * self.sigma[k] * shifted[k - 1]);
        }
        out
    }
}
