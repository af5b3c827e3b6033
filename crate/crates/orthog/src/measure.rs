//! The three normalized probability measures and Gauss quadrature against them.
//!
//! Rules are built by the symmetric-tridiagonal eigenvalue method from the
//! recurrence coefficients of the measure's monic orthogonal polynomials
//! (Golub-Welsch), weights taken from first eigenvector components, followed
//! by a Newton polish of the nodes with weights recomputed from the
//! Christoffel sums. All three weights, including Jacobi with very large
//! parameters, go through the same path.

use crate::error::{Error, Result};
use crate::gammafn::ln_gamma;

/// Hard cap on quadrature order.
pub const MAX_ORDER: usize = 512;

/// One of the three normalized probability measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measure {
    /// eta_{alpha,beta} (1-x)^alpha (1+x)^beta on (-1, 1).
    JacobiBeta { alpha: f64, beta: f64 },
    /// e^{-x^2}/sqrt(pi) on the whole line.
    Gaussian,
    /// x^alpha e^{-x} / Gamma(alpha+1) on (0, inf).
    Gamma { alpha: f64 },
}

impl Measure {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Measure::JacobiBeta { alpha, beta } => {
                if !(alpha > -1.0 && alpha.is_finite()) || !(beta > -1.0 && beta.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "JacobiBeta requires alpha, beta > -1, got ({alpha}, {beta})"
                    )));
                }
            }
            Measure::Gaussian => {}
            Measure::Gamma { alpha } => {
                if !(alpha > -1.0 && alpha.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "Gamma requires alpha > -1, got {alpha}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Log of the density normalization constant.
    pub fn log_normalization(&self) -> f64 {
        match *self {
            Measure::JacobiBeta { alpha, beta } => {
                ln_gamma(alpha + beta + 2.0)
                    - (alpha + beta + 1.0) * std::f64::consts::LN_2
                    - ln_gamma(alpha + 1.0)
                    - ln_gamma(beta + 1.0)
            }
            Measure::Gaussian => -0.5 * std::f64::consts::PI.ln(),
            Measure::Gamma { alpha } => -ln_gamma(alpha + 1.0),
        }
    }

    /// Open interval supporting the measure.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Measure::JacobiBeta { .. } => (-1.0, 1.0),
            Measure::Gaussian => (f64::NEG_INFINITY, f64::INFINITY),
            Measure::Gamma { .. } => (0.0, f64::INFINITY),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x > lo && x < hi
    }

    pub fn name(&self) -> String {
        match self {
            Measure::JacobiBeta { alpha, beta } => format!("jacobi-beta({alpha},{beta})"),
            Measure::Gaussian => "gaussian".into(),
            Measure::Gamma { alpha } => format!("gamma({alpha})"),
        }
    }

    /// Recurrence coefficients of the monic orthogonal polynomials:
    /// pi_{k+1} = (x - a_k) pi_k - b_k pi_{k-1}, with b_0 = 0.
    pub(crate) fn recurrence(&self, len: usize) -> (Vec<f64>, Vec<f64>) {
        let mut a = vec![0.0; len];
        let mut b = vec![0.0; len];
        match *self {
            Measure::JacobiBeta { alpha, beta } => {
                let (al, be) = (alpha, beta);
                a[0] = (be - al) / (al + be + 2.0);
                for k in 1..len {
                    let kf = k as f64;
                    let s = 2.0 * kf + al + be;
                    a[k] = (be * be - al * al) / (s * (s + 2.0));
                    b[k] = if k == 1 {
                        // cancellation-safe form at k = 1 (the (1+al+be) factor drops out)
                        4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + al + be).powi(2) * (3.0 + al + be))
                    } else {
                        4.0 * kf * (kf + al) * (kf + be) * (kf + al + be)
                            / (s * s * (s + 1.0) * (s - 1.0))
                    };
                }
            }
            Measure::Gaussian => {
                for (k, bk) in b.iter_mut().enumerate().skip(1) {
                    *bk = k as f64 / 2.0;
                }
            }
            Measure::Gamma { alpha } => {
                for k in 0..len {
                    let kf = k as f64;
                    a[k] = 2.0 * kf + alpha + 1.0;
                    if k > 0 {
                        b[k] = kf * (kf + alpha);
                    }
                }
            }
        }
        (a, b)
    }
}

/// A Gauss rule for one of the normalized measures. Immutable after
/// construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    measure: Measure,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn measure(&self) -> Measure {
        self.measure
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Default rule order for integrating objects of spectral degree <= n:
/// exactness margin plus rounding headroom.
pub fn default_order(n: usize) -> usize {
    64.max(n + 16)
}

/// Build the Gauss rule of the given order for a normalized measure.
pub fn gauss_rule(measure: Measure, order: usize) -> Result<QuadratureRule> {
    measure.validate()?;
    if order == 0 || order > MAX_ORDER {
        return Err(Error::OrderOutOfRange {
            order,
            max: MAX_ORDER,
        });
    }
    let (a, b) = measure.recurrence(order + 1);
    let mut d: Vec<f64> = a[..order].to_vec();
    let mut e: Vec<f64> = (0..order)
        .map(|k| if k + 1 < order { b[k + 1].sqrt() } else { 0.0 })
        .collect();
    let mut z = vec![0.0; order];
    z[0] = 1.0;

    tridiag_ql(&mut d, &mut e, &mut z).map_err(|_| Error::EigenNonConvergence { order })?;

    let mut pairs: Vec<(f64, f64)> = d.iter().copied().zip(z.iter().map(|v| v * v)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();

    polish_nodes(&measure, &a, &b, &mut nodes);
    christoffel_weights(&a, &b, &nodes, &mut weights);

    let rule = QuadratureRule {
        measure,
        nodes,
        weights,
    };
    check_rule(&rule)?;
    Ok(rule)
}

/// Sum w_i f(x_i); the measure is a probability measure so f = 1 gives 1.
pub fn integrate<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule) -> Result<f64> {
    let mut acc = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x });
        }
        acc += w * v;
    }
    Ok(acc)
}

/// (integral |f|^p dmu)^{1/p} by quadrature.
pub fn lp_norm<F: Fn(f64) -> f64>(f: F, p: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lp_norm requires p >= 1, got {p}"
        )));
    }
    let v = integrate(|x| f(x).abs().powf(p), rule)?;
    Ok(v.powf(1.0 / p))
}

fn check_rule(rule: &QuadratureRule) -> Result<()> {
    let sum: f64 = rule.weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::Invalid(format!(
            "quadrature weights sum to {sum}, expected 1 within 1e-12"
        )));
    }
    let (lo, hi) = rule.measure.domain();
    for &x in &rule.nodes {
        if !(x > lo && x < hi) {
            return Err(Error::Invalid(format!(
                "node {x} escapes open domain ({lo}, {hi})"
            )));
        }
    }
    for w in &rule.weights {
        if !(*w > 0.0) {
            return Err(Error::Invalid(format!("non-positive weight {w}")));
        }
    }
    Ok(())
}

/// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only
/// the first row of the eigenvector matrix (EISPACK imtql2 specialized to
/// the Golub-Welsch weight vector).
fn tridiag_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> std::result::Result<(), ()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(());
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Evaluate the orthonormal polynomial of degree n and its derivative at x,
/// straight from the monic recurrence coefficients.
fn orthonormal_with_derivative(a: &[f64], b: &[f64], n: usize, x: f64) -> (f64, f64) {
    let mut pm = 0.0; // p_{k-1}
    let mut pc = 1.0; // p_k
    let mut dm = 0.0;
    let mut dc = 0.0;
    for k in 0..n {
        let sb1 = b[k + 1].sqrt();
        let sb0 = if k > 0 { b[k].sqrt() } else { 0.0 };
        let pn = ((x - a[k]) * pc - sb0 * pm) / sb1;
        let dn = ((x - a[k]) * dc + pc - sb0 * dm) / sb1;
        pm = pc;
        pc = pn;
        dm = dc;
        dc = dn;
    }
    (pc, dc)
}

fn polish_nodes(measure: &Measure, a: &[f64], b: &[f64], nodes: &mut [f64]) {
    let n = nodes.len();
    let (lo, hi) = measure.domain();
    for i in 0..n {
        let gap_lo = if i > 0 {
            nodes[i] - nodes[i - 1]
        } else {
            f64::INFINITY
        };
        let gap_hi = if i + 1 < n {
            nodes[i + 1] - nodes[i]
        } else {
            f64::INFINITY
        };
        let guard = 0.45 * gap_lo.min(gap_hi);
        let mut x = nodes[i];
        for _ in 0..2 {
            let (p, dp) = orthonormal_with_derivative(a, b, n, x);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.abs() > guard {
                break;
            }
            let xn = x - step;
            if xn <= lo || xn >= hi {
                break;
            }
            x = xn;
        }
        nodes[i] = x;
    }
}

fn christoffel_weights(a: &[f64], b: &[f64], nodes: &[f64], weights: &mut [f64]) {
    let n = nodes.len();
    for (i, &x) in nodes.iter().enumerate() {
        let mut sum = 0.0;
        let mut pm = 0.0;
        let mut pc = 1.0;
        sum += pc * pc;
        for k in 0..n - 1 {
            let sb1 = b[k + 1].sqrt();
            let sb0 = if k > 0 { b[k].sqrt() } else { 0.0 };
            let pn = ((x - a[k]) * pc - sb0 * pm) / sb1;
            pm = pc;
            pc = pn;
            sum += pc * pc;
        }
        weights[i] = 1.0 / sum;
    }
}
