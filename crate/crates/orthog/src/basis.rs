//! Orthonormal evaluation engine shared by quadrature, expansions and the
//! g-function series. Works in the orthonormal normalization, where values
//! on the bulk of the measure stay O(1) even for Jacobi parameters of order
//! 10^6; Szego-normalized quantities are recovered through log-norm factors.

use crate::error::Result;
use crate::measure::Measure;

/// Precomputed recurrence data for the orthonormal polynomials of a measure
/// (positive leading coefficients).
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    measure: Measure,
    a: Vec<f64>,
    sqrt_b: Vec<f64>,
}

impl OrthonormalBasis {
    pub fn new(measure: Measure, max_degree: usize) -> Result<Self> {
        measure.validate()?;
        let (a, b) = measure.recurrence(max_degree + 1);
        let sqrt_b = b.iter().map(|v| v.sqrt()).collect();
        Ok(Self { measure, a, sqrt_b })
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn max_degree(&self) -> usize {
        self.a.len() - 1
    }

    /// Values p_0(x) .. p_n(x) of the orthonormal family.
    pub fn values(&self, x: f64, n: usize) -> Vec<f64> {
        debug_assert!(n <= self.max_degree());
        let mut out = Vec::with_capacity(n + 1);
        let mut pm = 0.0;
        let mut pc = 1.0;
        out.push(pc);
        for k in 0..n {
            let pn = ((x - self.a[k]) * pc - self.sqrt_b[k] * pm) / self.sqrt_b[k + 1];
            pm = pc;
            pc = pn;
            out.push(pc);
        }
        out
    }

    /// p_n(x) alone.
    pub fn value(&self, x: f64, n: usize) -> f64 {
        *self.values(x, n).last().unwrap()
    }

    /// (p_n(x), p_n'(x)).
    pub fn value_and_derivative(&self, x: f64, n: usize) -> (f64, f64) {
        let mut pm = 0.0;
        let mut pc = 1.0;
        let mut dm = 0.0;
        let mut dc = 0.0;
        for k in 0..n {
            let pn = ((x - self.a[k]) * pc - self.sqrt_b[k] * pm) / self.sqrt_b[k + 1];
            let dn = ((x - self.a[k]) * dc + pc - self.sqrt_b[k] * dm) / self.sqrt_b[k + 1];
            pm = pc;
            pc = pn;
            dm = dc;
            dc = dn;
        }
        (pc, dc)
    }

    /// Row-major matrix rows[i] = values at xs[i] up to degree n.
    pub fn value_matrix(&self, xs: &[f64], n: usize) -> Vec<Vec<f64>> {
        xs.iter().map(|&x| self.values(x, n)).collect()
    }
}
