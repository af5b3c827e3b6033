//! wasm-bindgen surface for the browser demo: g-function curves, heat
//! kernel slices, and transference sweeps. Every export returns a flat
//! Float64Array-compatible vector so the page needs no JSON glue. The
//! logic lives in [`demo`] with string errors; the exported wrappers only
//! translate to JsValue (which cannot be constructed on native targets).

// `!(t > 0.0)` also rejects NaN input from JS
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use wasm_bindgen::prelude::*;

pub mod demo {
    use orthog::gfunction::GFunction;
    use orthog::measure::{default_order, gauss_rule};
    use orthog::orthopoly::Family;
    use orthog::spectral::{expand, heat_kernel, SpectralCoefficients};
    use orthog::transference::{
        corpus_for, g_norm_transfer_experiment, norm_limit_experiment, Direction,
    };

    pub fn parse_family(text: &str) -> Result<Family, String> {
        let t = text.trim().to_lowercase();
        if t == "hermite" {
            return Ok(Family::Hermite);
        }
        let parse = |inner: &str| -> Result<Vec<f64>, String> {
            inner
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad number `{s}`: {e}"))
                })
                .collect()
        };
        let fam = match t.split_once('(') {
            Some(("jacobi", rest)) => {
                let v = parse(rest.trim_end_matches(')'))?;
                if v.len() != 2 {
                    return Err("jacobi takes two parameters".into());
                }
                Family::jacobi(v[0], v[1])
            }
            Some(("gegenbauer", rest)) => {
                let v = parse(rest.trim_end_matches(')'))?;
                if v.len() != 1 {
                    return Err("gegenbauer takes one parameter".into());
                }
                Family::gegenbauer(v[0])
            }
            Some(("laguerre", rest)) => {
                let v = parse(rest.trim_end_matches(')'))?;
                if v.len() != 1 {
                    return Err("laguerre takes one parameter".into());
                }
                Family::laguerre(v[0])
            }
            _ => return Err(format!("unknown family `{text}`")),
        };
        fam.map_err(|e| e.to_string())
    }

    fn plot_range(family: &Family) -> (f64, f64) {
        match family {
            Family::Jacobi { .. } | Family::Gegenbauer { .. } => (-0.99, 0.99),
            Family::Hermite => (-4.0, 4.0),
            Family::Laguerre { .. } => (0.01, 12.0),
        }
    }

    fn direction_from(direction: &str, alpha: f64) -> Result<Direction, String> {
        match direction {
            "gaussian" => Ok(Direction::Gaussian),
            "laguerre" => Ok(Direction::Laguerre { alpha }),
            _ => Err("direction must be gaussian or laguerre".into()),
        }
    }

    pub fn g_curve(family: &str, coeffs: &[f64], points: usize) -> Result<Vec<f64>, String> {
        let fam = parse_family(family)?;
        let err = |e: orthog::Error| e.to_string();
        let coeffs = if coeffs.is_empty() {
            vec![0.0, 1.0]
        } else {
            coeffs.to_vec()
        };
        let c = SpectralCoefficients::new(fam, coeffs).map_err(err)?;
        let g = GFunction::new(fam, c.truncation()).map_err(err)?;
        let (lo, hi) = plot_range(&fam);
        let n = points.clamp(2, 2048);
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            out.push(x);
            out.push(g.pointwise(&c, x).map_err(err)?);
        }
        Ok(out)
    }

    pub fn kernel_curve(
        alpha: f64,
        beta: f64,
        t: f64,
        x0: f64,
        points: usize,
    ) -> Result<Vec<f64>, String> {
        let err = |e: orthog::Error| e.to_string();
        let fam = Family::jacobi(alpha, beta).map_err(err)?;
        if !(t > 0.0) {
            return Err("t must be positive".into());
        }
        // truncation high enough for the budget check at small t
        let trunc = if t >= 0.5 {
            32
        } else {
            (40.0 / t.sqrt()) as usize
        }
        .min(200);
        let n = points.clamp(2, 2048);
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let y = -0.99 + 1.98 * i as f64 / (n - 1) as f64;
            out.push(y);
            out.push(heat_kernel(&fam, t, x0, y, trunc).map_err(err)?);
        }
        Ok(out)
    }

    pub fn transfer_sweep(
        kind: &str,
        direction: &str,
        alpha: f64,
        fname: &str,
        params: &[f64],
    ) -> Result<Vec<f64>, String> {
        let dir = direction_from(direction, alpha)?;
        let err = |e: orthog::Error| e.to_string();
        let corpus = corpus_for(dir).map_err(err)?;
        let item = corpus.iter().find(|c| c.name == fname).ok_or_else(|| {
            format!(
                "unknown function `{fname}`; available: {}",
                corpus
                    .iter()
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })?;
        let rep = match kind {
            "norm" => norm_limit_experiment(&*item.f, dir, params, 96).map_err(err)?,
            "gnorm" => g_norm_transfer_experiment(&*item.f, dir, params, 48, 96).map_err(err)?,
            _ => return Err("kind must be norm or gnorm".into()),
        };
        let mut out = Vec::with_capacity(4 * rep.points.len());
        for p in &rep.points {
            out.push(p.param);
            out.push(p.value);
            out.push(p.limit);
            out.push(p.error);
        }
        Ok(out)
    }

    pub fn corpus_names(direction: &str, alpha: f64) -> Result<Vec<String>, String> {
        let dir = direction_from(direction, alpha)?;
        let corpus = corpus_for(dir).map_err(|e| e.to_string())?;
        Ok(corpus.into_iter().map(|c| c.name).collect())
    }

    pub fn corpus_coefficients(
        direction: &str,
        alpha: f64,
        fname: &str,
        trunc: usize,
    ) -> Result<Vec<f64>, String> {
        let dir = direction_from(direction, alpha)?;
        let err = |e: orthog::Error| e.to_string();
        let corpus = corpus_for(dir).map_err(err)?;
        let item = corpus
            .iter()
            .find(|c| c.name == fname)
            .ok_or_else(|| "unknown function".to_string())?;
        let fam = match dir {
            Direction::Gaussian => Family::Hermite,
            Direction::Laguerre { alpha } => Family::laguerre(alpha).map_err(err)?,
        };
        let trunc = trunc.clamp(1, 128);
        let rule = gauss_rule(fam.measure(), default_order(trunc)).map_err(err)?;
        let c = expand(&*item.f, fam, trunc, &rule).map_err(err)?;
        Ok(c.coeffs().to_vec())
    }
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// g(x) on a plot grid for the given orthonormal coefficient sequence.
/// Returns [x0, g0, x1, g1, ...].
#[wasm_bindgen]
pub fn g_curve(family: &str, coeffs: &[f64], points: usize) -> Result<Vec<f64>, JsValue> {
    js(demo::g_curve(family, coeffs, points))
}

/// Heat-kernel slice p(t, x0, y) for the Jacobi(alpha, beta) family.
/// Returns [y0, p0, y1, p1, ...].
#[wasm_bindgen]
pub fn kernel_curve(
    alpha: f64,
    beta: f64,
    t: f64,
    x0: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    js(demo::kernel_curve(alpha, beta, t, x0, points))
}

/// Scaling-limit sweep rows [param, value, limit, error, ...] (stride 4);
/// kind is "norm" or "gnorm", direction "gaussian" or "laguerre".
#[wasm_bindgen]
pub fn transfer_sweep(
    kind: &str,
    direction: &str,
    alpha: f64,
    fname: &str,
    params: &[f64],
) -> Result<Vec<f64>, JsValue> {
    js(demo::transfer_sweep(kind, direction, alpha, fname, params))
}

/// Corpus function names available for a direction.
#[wasm_bindgen]
pub fn corpus_names(direction: &str, alpha: f64) -> Result<Vec<String>, JsValue> {
    js(demo::corpus_names(direction, alpha))
}

/// Orthonormal coefficients of a corpus function in its limit family.
#[wasm_bindgen]
pub fn corpus_coefficients(
    direction: &str,
    alpha: f64,
    fname: &str,
    trunc: usize,
) -> Result<Vec<f64>, JsValue> {
    js(demo::corpus_coefficients(direction, alpha, fname, trunc))
}
