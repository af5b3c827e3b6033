//! The six experiment kinds behind the CLI subcommands. Each consumes an
//! effective parameter set (config file merged with flag overrides), runs
//! the corresponding library routines, and produces a RunReport.

use anyhow::{anyhow, bail, Result};
use std::time::Instant;

use crate::report::{Check, RunReport, SweepTable};
use orthog::gfunction::{g_l2_norm, g_lp_norm, g_ratio_report, GFunction, NamedFunction};
use orthog::measure::{default_order, gauss_rule, integrate, Measure};
use orthog::orthopoly::{apply_operator, eigenvalue, eval_poly, Family, FamilyBasis};
use orthog::spectral::{expand, heat_kernel};
use orthog::transference::{
    corpus_for, g_norm_transfer_experiment, inner_product_limit_experiment, linearization_coeffs,
    norm_limit_closed_form, norm_limit_experiment, ConvergenceReport, Direction,
};

/// Effective parameters after merging config and flags.
#[derive(Debug, Clone)]
pub struct Params {
    pub family: Option<String>,
    pub direction: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub function: Option<String>,
    pub sweep: Option<Vec<f64>>,
    pub t_list: Option<Vec<f64>>,
    pub p_list: Option<Vec<f64>>,
    pub trunc: Option<usize>,
    pub order: Option<usize>,
    pub nmax: Option<usize>,
    pub kmax: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub grid: Option<usize>,
    pub tolerance: Option<f64>,
}

pub fn parse_family(text: &str) -> Result<Family> {
    let t = text.trim().to_lowercase();
    if t == "hermite" {
        return Ok(Family::Hermite);
    }
    let (name, args) = match t.split_once('(') {
        Some((n, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| anyhow!("unterminated family spec `{text}`"))?;
            let vals: Vec<f64> = inner
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()?;
            (n.trim(), vals)
        }
        None => (t.as_str(), vec![]),
    };
    match (name, args.as_slice()) {
        ("jacobi", [a, b]) => Ok(Family::jacobi(*a, *b)?),
        ("gegenbauer", [l]) => Ok(Family::gegenbauer(*l)?),
        ("laguerre", [a]) => Ok(Family::laguerre(*a)?),
        _ => bail!(
            "unrecognized family `{text}` (want jacobi(a,b), gegenbauer(l), hermite, laguerre(a))"
        ),
    }
}

fn push_report(
    sweeps: &mut Vec<SweepTable>,
    checks: &mut Vec<Check>,
    name: &str,
    rep: &ConvergenceReport,
    final_tol: Option<f64>,
) {
    sweeps.push(SweepTable {
        name: name.to_string(),
        rows: rep
            .points
            .iter()
            .map(|p| (p.param, p.value, p.limit, p.error))
            .collect(),
    });
    let exact = rep.points.iter().all(|p| p.error < 1e-12);
    if exact {
        checks.push(Check::flag(&format!("{name}.exact"), true, 0.0));
        return;
    }
    checks.push(Check::flag(
        &format!("{name}.errors_decreasing"),
        rep.errors_strictly_decreasing(),
        rep.final_error(),
    ));
    if let Some(d) = rep.decay {
        checks.push(Check::flag(
            &format!("{name}.decay_exponent<=-0.8"),
            d.exponent <= -0.8,
            d.exponent,
        ));
    }
    if let Some(tol) = final_tol {
        checks.push(Check::bound(
            &format!("{name}.final_error"),
            rep.final_error(),
            tol,
        ));
    }
}

pub fn run_orthocheck(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let nmax = p.nmax.unwrap_or(20);
    let order = p.order.unwrap_or(64);
    let tol = p.tolerance.unwrap_or(1e-10);
    let fams: Vec<Family> = match &p.family {
        Some(text) => vec![parse_family(text)?],
        None => vec![
            Family::jacobi(0.0, 0.0)?,
            Family::jacobi(1.0, 0.5)?,
            Family::jacobi(0.5, 0.5)?,
            Family::jacobi(9.5, 9.5)?,
            Family::Hermite,
            Family::laguerre(0.0)?,
            Family::laguerre(1.5)?,
        ],
    };
    let mut checks = Vec::new();
    for fam in &fams {
        let basis = FamilyBasis::new(*fam, nmax)?;
        let rule = gauss_rule(fam.measure(), order)?;
        let rows: Vec<Vec<f64>> = rule
            .nodes()
            .iter()
            .map(|&x| basis.orthonormal_values(x, nmax))
            .collect();
        let mut worst = 0.0f64;
        for n in 0..=nmax {
            for m in 0..=n {
                let mut acc = 0.0;
                for (row, w) in rows.iter().zip(rule.weights()) {
                    acc += w * row[n] * row[m];
                }
                let want = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).abs());
            }
        }
        checks.push(Check::bound(
            &format!("orthogonality[{}]", fam.name()),
            worst,
            tol,
        ));

        let (lo, hi) = match fam.measure() {
            Measure::JacobiBeta { .. } => (-0.98, 0.98),
            Measure::Gaussian => (-4.0, 4.0),
            Measure::Gamma { .. } => (0.05, 20.0),
        };
        let mut eig_worst = 0.0f64;
        for n in 0..=15usize.min(nmax) {
            let lam = eigenvalue(fam, n);
            for i in 0..50 {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / 50.0;
                let lhs = apply_operator(fam, n, x)?;
                let rhs = lam * eval_poly(fam, n, x)?;
                eig_worst = eig_worst.max((lhs - rhs).abs() / rhs.abs().max(lam.max(1.0)));
            }
        }
        checks.push(Check::bound(
            &format!("eigenfunction[{}]", fam.name()),
            eig_worst,
            1e-9,
        ));
    }
    Ok(RunReport {
        experiment: "orthocheck".into(),
        config_echo: vec![
            (
                "families".into(),
                fams.iter().map(|f| f.name()).collect::<Vec<_>>().join(" "),
            ),
            ("nmax".into(), nmax.to_string()),
            ("order".into(), order.to_string()),
            ("tolerance".into(), format!("{tol:e}")),
        ],
        checks,
        sweeps: vec![],
        duration_ms: start.elapsed().as_millis(),
    })
}

pub fn run_gnorm(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let fam = parse_family(p.family.as_deref().unwrap_or("hermite"))?;
    let trunc = p.trunc.unwrap_or(64);
    let order = p.order.unwrap_or(default_order(trunc));
    let tol = p.tolerance.unwrap_or(1e-8);
    let rule = gauss_rule(fam.measure(), order)?;
    let basis = FamilyBasis::new(fam, trunc)?;
    let ex2 = integrate(|x| x * x, &rule)?;
    let corpus: Vec<NamedFunction> = vec![
        ("coord".into(), Box::new(|x| x)),
        ("centered_square".into(), Box::new(move |x| x * x - ex2)),
        ("phi3".into(), {
            let b = basis.clone();
            Box::new(move |x| b.orthonormal_values(x, 3)[3])
        }),
    ];
    let g = GFunction::new(fam, trunc)?;
    let mut checks = Vec::new();
    for (name, f) in &corpus {
        let c = expand(f, fam, trunc, &rule)?;
        let closed = g_l2_norm(&c);
        let quad = g_lp_norm(&c, 2.0, &rule)?;
        checks.push(Check::against(
            &format!("g_l2_closed_vs_quadrature[{name}]"),
            quad,
            closed,
            tol.max(1e-6 * closed),
        ));
        let dec = g.decompose_on(&c, rule.nodes())?;
        let mut te = 0.0;
        let mut se = 0.0;
        for (i, w) in rule.weights().iter().enumerate() {
            te += w * dec.time_part[i];
            se += w * dec.space_part[i];
        }
        let want = 0.25 * c.energy_from(1);
        checks.push(Check::against(
            &format!("time_part_quarter_parseval[{name}]"),
            te,
            want,
            tol,
        ));
        checks.push(Check::against(
            &format!("space_part_quarter_parseval[{name}]"),
            se,
            want,
            tol,
        ));
    }
    Ok(RunReport {
        experiment: "gnorm".into(),
        config_echo: vec![
            ("family".into(), fam.name()),
            ("trunc".into(), trunc.to_string()),
            ("order".into(), order.to_string()),
            ("tolerance".into(), format!("{tol:e}")),
        ],
        checks,
        sweeps: vec![],
        duration_ms: start.elapsed().as_millis(),
    })
}

pub fn run_transfer(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let dir_text = p.direction.as_deref().unwrap_or("gaussian");
    let direction = match dir_text.to_lowercase().as_str() {
        "gaussian" => Direction::Gaussian,
        "laguerre" => Direction::Laguerre {
            alpha: p.alpha.unwrap_or(0.0),
        },
        other => bail!("unknown direction `{other}` (want gaussian or laguerre)"),
    };
    let sweep = p.sweep.clone().unwrap_or_else(|| vec![1e2, 1e3, 1e4, 1e5]);
    let trunc = p.trunc.unwrap_or(64);
    let order = p.order.unwrap_or(default_order(trunc));
    let kmax = p.kmax.unwrap_or(6);
    let tol = p.tolerance.unwrap_or(5e-3);
    let fname = p.function.as_deref().unwrap_or("coord");
    let corpus = corpus_for(direction)?;
    let item = corpus
        .iter()
        .find(|c| c.name == fname || (fname == "coord" && c.name == "centered_coord"))
        .ok_or_else(|| {
            anyhow!(
                "unknown function `{fname}`; available: {}",
                corpus
                    .iter()
                    .map(|c| c.name.clone())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })?;

    let mut checks = Vec::new();
    let mut sweeps = Vec::new();

    let rep = norm_limit_experiment(&*item.f, direction, &sweep, order)?;
    push_report(&mut sweeps, &mut checks, "norm_limit", &rep, None);
    if fname == "coord" {
        // worked closed form per sweep point
        let mut worst = 0.0f64;
        for pt in &rep.points {
            worst = worst.max((pt.value - norm_limit_closed_form(direction, pt.param)).abs());
        }
        checks.push(Check::bound("norm_limit.worked_closed_form", worst, 1e-8));
    }

    for k in 1..=kmax {
        let rep = inner_product_limit_experiment(&*item.f, k, direction, &sweep, order)?;
        push_report(
            &mut sweeps,
            &mut checks,
            &format!("inner_product_k{k}"),
            &rep,
            None,
        );
    }

    let rep = g_norm_transfer_experiment(&*item.f, direction, &sweep, trunc, order)?;
    push_report(&mut sweeps, &mut checks, "g_norm_transfer", &rep, Some(tol));

    Ok(RunReport {
        experiment: "transfer".into(),
        config_echo: vec![
            ("direction".into(), format!("{direction:?}")),
            ("function".into(), item.name.clone()),
            (
                "sweep".into(),
                sweep
                    .iter()
                    .map(|v| format!("{v:e}"))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("trunc".into(), trunc.to_string()),
            ("order".into(), order.to_string()),
            ("kmax".into(), kmax.to_string()),
            ("tolerance".into(), format!("{tol:e}")),
        ],
        checks,
        sweeps,
        duration_ms: start.elapsed().as_millis(),
    })
}

pub fn run_linearize(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let alpha = p.alpha.unwrap_or(0.0);
    let beta = p.beta.unwrap_or(0.0);
    let m = p.m.unwrap_or(1);
    let n = p.n.unwrap_or(1);
    let tol = p.tolerance.unwrap_or(1e-10);
    let row = linearization_coeffs(alpha, beta, m, n)?;
    let sym = linearization_coeffs(alpha, beta, n, m)?;
    let mut sym_dev = 0.0f64;
    for i in row.i_min..=(m + n) {
        sym_dev = sym_dev.max((row.nu_at(i) - sym.nu_at(i)).abs());
    }
    let checks = vec![
        Check::against("sum_to_one", row.sum(), 1.0, tol),
        Check::bound("symmetry", sym_dev, tol),
    ];
    let table = SweepTable {
        name: "linearization".into(),
        rows: (0..=(m + n))
            .map(|i| (i as f64, row.nu_at(i), 0.0, row.nu_at(i).abs()))
            .collect(),
    };
    Ok(RunReport {
        experiment: "linearize".into(),
        config_echo: vec![
            ("alpha".into(), alpha.to_string()),
            ("beta".into(), beta.to_string()),
            ("m".into(), m.to_string()),
            ("n".into(), n.to_string()),
            ("tolerance".into(), format!("{tol:e}")),
        ],
        checks,
        sweeps: vec![table],
        duration_ms: start.elapsed().as_millis(),
    })
}

pub fn run_kernel(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let alpha = p.alpha.unwrap_or(0.0);
    let beta = p.beta.unwrap_or(0.0);
    let fam = Family::jacobi(alpha, beta)?;
    let ts = p.t_list.clone().unwrap_or_else(|| vec![0.1, 0.5, 1.0]);
    let grid_n = p.grid.unwrap_or(32);
    let trunc = p.trunc.unwrap_or(48);
    let order = p.order.unwrap_or(64);
    let tol = p.tolerance.unwrap_or(1e-10);
    let rule = gauss_rule(fam.measure(), order)?;
    let grid: Vec<f64> = (0..grid_n)
        .map(|i| -1.0 + 2.0 * (i as f64 + 0.5) / grid_n as f64)
        .collect();
    let mut checks = Vec::new();
    let mut mass_rows = Vec::new();
    let mut min_rows = Vec::new();
    for &t in &ts {
        let mut min_kernel = f64::INFINITY;
        let mut worst_mass = 0.0f64;
        let mut sym_dev = 0.0f64;
        for &x in &grid {
            for &y in &grid {
                let v = heat_kernel(&fam, t, x, y, trunc)?;
                min_kernel = min_kernel.min(v);
                if y > x {
                    sym_dev = sym_dev.max((v - heat_kernel(&fam, t, y, x, trunc)?).abs());
                }
            }
            let mass = integrate(|y| heat_kernel(&fam, t, x, y, trunc).unwrap(), &rule)?;
            worst_mass = worst_mass.max((mass - 1.0).abs());
        }
        checks.push(Check::flag(
            &format!("positivity[t={t}]"),
            min_kernel >= -tol,
            min_kernel,
        ));
        checks.push(Check::bound(&format!("mass[t={t}]"), worst_mass, tol));
        checks.push(Check::bound(&format!("symmetry[t={t}]"), sym_dev, 0.0));
        mass_rows.push((t, worst_mass, 0.0, worst_mass));
        min_rows.push((t, min_kernel, 0.0, (-min_kernel).max(0.0)));
    }
    Ok(RunReport {
        experiment: "kernel".into(),
        config_echo: vec![
            ("family".into(), fam.name()),
            (
                "t".into(),
                ts.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("grid".into(), grid_n.to_string()),
            ("trunc".into(), trunc.to_string()),
            ("order".into(), order.to_string()),
            ("tolerance".into(), format!("{tol:e}")),
        ],
        checks,
        sweeps: vec![
            SweepTable {
                name: "kernel_mass_error".into(),
                rows: mass_rows,
            },
            SweepTable {
                name: "kernel_min_value".into(),
                rows: min_rows,
            },
        ],
        duration_ms: start.elapsed().as_millis(),
    })
}

pub fn run_ratios(p: &Params) -> Result<RunReport> {
    let start = Instant::now();
    let fam = parse_family(p.family.as_deref().unwrap_or("hermite"))?;
    let ps = p.p_list.clone().unwrap_or_else(|| vec![1.5, 2.0, 4.0]);
    let trunc = p.trunc.unwrap_or(64);
    let order = p.order.unwrap_or(80);
    let tol = p.tolerance.unwrap_or(0.01);
    let direction = match fam {
        Family::Hermite => Some(Direction::Gaussian),
        Family::Laguerre { alpha } => Some(Direction::Laguerre { alpha }),
        _ => None,
    };
    let corpus: Vec<NamedFunction> = match direction {
        Some(d) => corpus_for(d)?
            .into_iter()
            .map(|c| {
                let f = c.f.clone();
                let b: Box<dyn Fn(f64) -> f64 + Send + Sync> = Box::new(move |x: f64| f(x));
                (c.name, b)
            })
            .collect(),
        None => vec![
            ("coord".into(), Box::new(|x: f64| x)),
            ("square".into(), Box::new(|x: f64| x * x)),
            ("cubic".into(), Box::new(|x: f64| x * x * x - 0.2 * x)),
        ],
    };
    let coarse_rule = gauss_rule(fam.measure(), order)?;
    let fine_rule = gauss_rule(fam.measure(), (2 * order).min(512))?;
    let coarse = g_ratio_report(&corpus, fam, &ps, trunc, &coarse_rule)?;
    let fine = g_ratio_report(&corpus, fam, &ps, (2 * trunc).min(250), &fine_rule)?;
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for ((pv, a), (_, b)) in coarse.max_per_p.iter().zip(&fine.max_per_p) {
        let change = (a - b).abs() / a.max(1e-12);
        checks.push(Check::bound(
            &format!("ratio_stability[p={pv}]"),
            change,
            tol,
        ));
        rows.push((*pv, *a, *b, change));
    }
    Ok(RunReport {
        experiment: "ratios".into(),
        config_echo: vec![
            ("family".into(), fam.name()),
            (
                "p".into(),
                ps.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("trunc".into(), trunc.to_string()),
            ("order".into(), order.to_string()),
            ("tolerance".into(), tol.to_string()),
        ],
        checks,
        sweeps: vec![SweepTable {
            name: "max_ratio_per_p".into(),
            rows,
        }],
        duration_ms: start.elapsed().as_millis(),
    })
}
