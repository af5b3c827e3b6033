//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see them all).
//!
//! Tolerances are fixed here, not tuned: exact-identity checks run at
//! 1e-8..1e-10, convergence sweeps assert monotone decay with fitted
//! exponents, and limit distances use the stated thresholds.

use orthog::gfunction::{g_ratio_report, GFunction, NamedFunction};
use orthog::measure::{gauss_rule, integrate, Measure};
use orthog::orthopoly::{
    apply_operator, eigenvalue, eval_poly, log_squared_norm, Family, FamilyBasis,
};
use orthog::spectral::{bochner_check, expand, heat_kernel};
use orthog::transference::{
    asymptotic_check_hermite, asymptotic_check_laguerre, corpus_for, g_norm_transfer_experiment,
    inner_product_limit_experiment, linearization_coeffs, norm_limit_closed_form,
    norm_limit_experiment, polynomial_limit_report, truncated_g_split, Direction,
};

fn verdict(ok: bool, name: &str, detail: &str) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

/// The family grid shared by the structural criteria.
fn family_grid() -> Vec<Family> {
    vec![
        Family::jacobi(0.0, 0.0).unwrap(),
        Family::jacobi(1.0, 0.5).unwrap(),
        // Gegenbauer lambda = 1 and 10 via their symmetric Jacobi measures
        Family::jacobi(0.5, 0.5).unwrap(),
        Family::jacobi(9.5, 9.5).unwrap(),
        Family::Hermite,
        Family::laguerre(0.0).unwrap(),
        Family::laguerre(1.5).unwrap(),
    ]
}

#[test]
fn criterion_01_orthogonality() {
    let mut worst = 0.0f64;
    for fam in family_grid() {
        let basis = FamilyBasis::new(fam, 20).unwrap();
        let rule = gauss_rule(fam.measure(), 64).unwrap();
        let rows: Vec<Vec<f64>> = rule
            .nodes()
            .iter()
            .map(|&x| basis.orthonormal_values(x, 20))
            .collect();
        for n in 0..=20usize {
            for m in 0..=n {
                let mut acc = 0.0;
                for (row, w) in rows.iter().zip(rule.weights()) {
                    acc += w * row[n] * row[m];
                }
                let want = if n == m { 1.0 } else { 0.0 };
                worst = worst.max((acc - want).abs());
            }
        }
    }
    verdict(
        worst < 1e-10,
        "criterion 1 (orthogonality suite)",
        &format!("max |<phi_n,phi_m> - delta| = {worst:.3e} over grid, n,m <= 20 (tol 1e-10)"),
    );
}

#[test]
fn criterion_02_eigenfunction_identity() {
    let mut fams = family_grid();
    fams.push(Family::gegenbauer(1.0).unwrap());
    fams.push(Family::gegenbauer(10.0).unwrap());
    let mut worst = 0.0f64;
    for fam in fams {
        let (lo, hi) = match fam.measure() {
            Measure::JacobiBeta { .. } => (-0.98, 0.98),
            Measure::Gaussian => (-4.0, 4.0),
            Measure::Gamma { .. } => (0.05, 20.0),
        };
        for n in 0..=15usize {
            let lam = eigenvalue(&fam, n);
            for i in 0..50 {
                let x = lo + (hi - lo) * (i as f64 + 0.5) / 50.0;
                let lhs = apply_operator(&fam, n, x).unwrap();
                let rhs = lam * eval_poly(&fam, n, x).unwrap();
                let scale = rhs.abs().max(lam.max(1.0));
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
    }
    verdict(
        worst < 1e-9,
        "criterion 2 (eigenfunction suite)",
        &format!(
            "max relative |L phi_n - lambda_n phi_n| = {worst:.3e}, n <= 15, 50 nodes (tol 1e-9)"
        ),
    );
}

#[test]
fn criterion_03_weighted_norm_identities() {
    // Jacobi: ||sqrt(1-x^2) P^{(a+1,b+1)}_{k-1}||^2_{(a,b)} / ||P^{(a,b)}_k||^2
    //       = 4k/(k+a+b+1); Laguerre: ||sqrt(x) L^{a+1}_{k-1}||^2 / ||L^a_k||^2 = k
    let mut worst = 0.0f64;
    for fam in family_grid() {
        match fam {
            Family::Jacobi { alpha, beta } => {
                let rule = gauss_rule(fam.measure(), 64).unwrap();
                let up = Family::jacobi(alpha + 1.0, beta + 1.0).unwrap();
                let upb = FamilyBasis::new(up, 20).unwrap();
                for k in 1..=20usize {
                    let log_scale =
                        log_squared_norm(&up, k - 1).unwrap() - log_squared_norm(&fam, k).unwrap();
                    let lhs = integrate(
                        |x| {
                            let v = upb.orthonormal_values(x, k - 1)[k - 1];
                            (1.0 - x * x) * v * v * log_scale.exp()
                        },
                        &rule,
                    )
                    .unwrap();
                    let rhs = 4.0 * k as f64 / (k as f64 + alpha + beta + 1.0);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
            Family::Laguerre { alpha } => {
                let rule = gauss_rule(fam.measure(), 64).unwrap();
                let up = Family::laguerre(alpha + 1.0).unwrap();
                let upb = FamilyBasis::new(up, 20).unwrap();
                for k in 1..=20usize {
                    let log_scale =
                        log_squared_norm(&up, k - 1).unwrap() - log_squared_norm(&fam, k).unwrap();
                    let lhs = integrate(
                        |x| {
                            let v = upb.orthonormal_values(x, k - 1)[k - 1];
                            x * v * v * log_scale.exp()
                        },
                        &rule,
                    )
                    .unwrap();
                    let rhs = k as f64;
                    worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
                }
            }
            _ => {}
        }
    }
    verdict(
        worst < 1e-10,
        "criterion 3 (weighted-norm identities)",
        &format!("max deviation = {worst:.3e} for k <= 20 over grid (tol 1e-10)"),
    );
}

#[test]
fn criterion_04_quarter_parseval() {
    // corpus per family: coordinate, centered square, orthonormal phi_3
    let fams = [
        Family::jacobi(0.0, 0.0).unwrap(),
        Family::jacobi(1.0, 0.5).unwrap(),
        Family::Hermite,
        Family::laguerre(0.0).unwrap(),
        Family::laguerre(1.5).unwrap(),
    ];
    let mut worst = 0.0f64;
    for fam in fams {
        let rule = gauss_rule(fam.measure(), 64).unwrap();
        let basis = FamilyBasis::new(fam, 16).unwrap();
        let ex2 = integrate(|x| x * x, &rule).unwrap();
        let corpus: Vec<Box<dyn Fn(f64) -> f64>> = vec![
            Box::new(|x| x),
            Box::new(move |x| x * x - ex2),
            Box::new({
                let b = basis.clone();
                move |x| b.orthonormal_values(x, 3)[3]
            }),
        ];
        let g = GFunction::new(fam, 16).unwrap();
        for f in &corpus {
            let c = expand(f, fam, 16, &rule).unwrap();
            let dec = g.decompose_on(&c, rule.nodes()).unwrap();
            let mut te = 0.0;
            let mut se = 0.0;
            for (i, w) in rule.weights().iter().enumerate() {
                te += w * dec.time_part[i];
                se += w * dec.space_part[i];
            }
            let want = 0.25 * c.energy_from(1);
            worst = worst.max((te - want).abs()).max((se - want).abs());
        }
    }
    verdict(
        worst < 1e-8,
        "criterion 4 (1/4-Parseval identities)",
        &format!("max |part energy - sum/4| = {worst:.3e} over corpus and families (tol 1e-8)"),
    );
}

#[test]
fn criterion_05_transference_limits() {
    let sweep = [1e2, 1e3, 1e4];
    let order = 96;
    let mut ok = true;
    let mut notes = Vec::new();

    for direction in [Direction::Gaussian, Direction::Laguerre { alpha: 0.0 }] {
        let corpus = corpus_for(direction).unwrap();
        for item in corpus.iter().filter(|c| c.mean_zero || c.name == "const") {
            let rep = norm_limit_experiment(&*item.f, direction, &sweep, order).unwrap();
            let exact = rep.points.iter().all(|p| p.error < 1e-12);
            if !exact {
                if !rep.errors_strictly_decreasing() {
                    ok = false;
                    notes.push(format!("norm {:?}/{} not decreasing", direction, item.name));
                }
                match rep.decay {
                    Some(d) if d.exponent <= -0.8 => {}
                    other => {
                        ok = false;
                        notes.push(format!(
                            "norm {:?}/{} decay {:?}",
                            direction, item.name, other
                        ));
                    }
                }
            }
        }
        // Prop 1.2 shape for k <= 6 over the mean-zero corpus
        for item in corpus.iter().filter(|c| c.mean_zero) {
            for k in 1..=6usize {
                let rep =
                    inner_product_limit_experiment(&*item.f, k, direction, &sweep, order).unwrap();
                let exact = rep.points.iter().all(|p| p.error < 1e-12);
                if exact {
                    continue;
                }
                if !rep.errors_strictly_decreasing() {
                    ok = false;
                    notes.push(format!(
                        "ip {:?}/{} k={k} not decreasing",
                        direction, item.name
                    ));
                }
                match rep.decay {
                    Some(d) if d.exponent <= -0.8 => {}
                    other => {
                        ok = false;
                        notes.push(format!(
                            "ip {:?}/{} k={k} decay {:?}",
                            direction, item.name, other
                        ));
                    }
                }
            }
        }
    }

    // worked closed forms match quadrature per sweep point
    let mut worked_worst = 0.0f64;
    let rep = norm_limit_experiment(&|x| x, Direction::Gaussian, &sweep, order).unwrap();
    for p in &rep.points {
        worked_worst = worked_worst
            .max((p.value - norm_limit_closed_form(Direction::Gaussian, p.param)).abs());
    }
    for alpha in [0.0, 1.5] {
        let d = Direction::Laguerre { alpha };
        let rep = norm_limit_experiment(&|y| y, d, &sweep, order).unwrap();
        for p in &rep.points {
            worked_worst = worked_worst.max((p.value - norm_limit_closed_form(d, p.param)).abs());
        }
    }
    if worked_worst >= 1e-8 {
        ok = false;
        notes.push(format!("worked values off by {worked_worst:.3e}"));
    }

    verdict(
        ok,
        "criterion 5 (transference limits)",
        &format!(
            "norm/inner-product errors decrease with slope <= -0.8; worked closed forms within {worked_worst:.3e} (tol 1e-8){}",
            if notes.is_empty() { String::new() } else { format!("; issues: {notes:?}") }
        ),
    );
}

#[test]
fn criterion_06_g_norm_transfer() {
    let sweep = [1e2, 1e3, 1e4];
    let mut worst = 0.0f64;
    for direction in [Direction::Gaussian, Direction::Laguerre { alpha: 0.0 }] {
        let corpus = corpus_for(direction).unwrap();
        for item in corpus.iter().filter(|c| c.mean_zero) {
            let rep = g_norm_transfer_experiment(&*item.f, direction, &sweep, 64, 96).unwrap();
            worst = worst.max(rep.final_error());
        }
    }
    verdict(
        worst < 5e-3,
        "criterion 6 (g-norm transfer)",
        &format!("max |sweep - limit| at 1e4 = {worst:.3e} over mean-zero corpus, both directions (tol 5e-3)"),
    );
}

#[test]
fn criterion_07_polynomial_asymptotics() {
    let mut ok = true;
    let mut notes = Vec::new();

    let e = asymptotic_check_hermite(2, 1.0, 1e4).unwrap();
    if (e - 2e-4).abs() > 0.05 * 2e-4 {
        ok = false;
        notes.push(format!("gegenbauer->hermite point value {e:.6e} vs 2e-4"));
    }
    let e = asymptotic_check_laguerre(1, 0.0, 1.0, 1e3).unwrap();
    if (e - 2e-3).abs() > 0.05 * 2e-3 {
        ok = false;
        notes.push(format!("jacobi->laguerre point value {e:.6e} vs 2e-3"));
    }

    let sweep = [1e2, 1e3, 1e4];
    let xs: Vec<f64> = (0..9).map(|i| -2.0 + 0.5 * i as f64).collect();
    let ys: Vec<f64> = (0..9).map(|i| 0.5 * i as f64).collect();
    for n in 0..=6usize {
        let rep = polynomial_limit_report(n, Direction::Gaussian, &xs, &sweep).unwrap();
        if rep.points.iter().all(|p| p.error < 1e-11) {
            continue; // degrees reproduced exactly
        }
        match rep.decay {
            Some(d) if (d.exponent + 1.0).abs() <= 0.15 => {}
            other => {
                ok = false;
                notes.push(format!("hermite n={n} decay {other:?}"));
            }
        }
    }
    for n in 0..=6usize {
        for alpha in [0.0, 1.0] {
            let rep =
                polynomial_limit_report(n, Direction::Laguerre { alpha }, &ys, &sweep).unwrap();
            if rep.points.iter().all(|p| p.error < 1e-11) {
                continue;
            }
            match rep.decay {
                Some(d) if (d.exponent + 1.0).abs() <= 0.15 => {}
                other => {
                    ok = false;
                    notes.push(format!("laguerre n={n} a={alpha} decay {other:?}"));
                }
            }
        }
    }

    verdict(
        ok,
        "criterion 7 (polynomial asymptotics)",
        &format!(
            "worked errors 2e-4/2e-3 within 5%, fitted exponents -1 +/- 0.15 for n <= 6{}",
            if notes.is_empty() {
                String::new()
            } else {
                format!("; issues: {notes:?}")
            }
        ),
    );
}

#[test]
fn criterion_08_linearization() {
    let mut worst_sum = 0.0f64;
    let mut worst_sym = 0.0f64;
    let grid = [(0.0, 0.0), (1.0, 0.5), (0.5, 0.5), (9.5, 9.5)];
    for (alpha, beta) in grid {
        for m in 0..=8usize {
            for n in 0..=m {
                let row = linearization_coeffs(alpha, beta, m, n).unwrap();
                worst_sum = worst_sum.max((row.sum() - 1.0).abs());
                let sym = linearization_coeffs(alpha, beta, n, m).unwrap();
                for i in row.i_min..=(m + n) {
                    worst_sym = worst_sym.max((row.nu_at(i) - sym.nu_at(i)).abs());
                }
            }
        }
    }
    // Legendre worked row
    let row = linearization_coeffs(0.0, 0.0, 1, 1).unwrap();
    let legendre_ok = (row.nu_at(0) - 1.0 / 3.0).abs() < 1e-10
        && row.nu_at(1).abs() < 1e-10
        && (row.nu_at(2) - 2.0 / 3.0).abs() < 1e-10;
    // nonnegativity on the alpha >= beta grid
    let mut min_nu = f64::INFINITY;
    for (alpha, beta) in [(0.0, 0.0), (1.0, 0.5), (9.5, 9.5), (1.0, 0.0), (2.0, 0.5)] {
        for m in 0..=8usize {
            for n in 0..=8usize {
                let row = linearization_coeffs(alpha, beta, m, n).unwrap();
                for v in &row.nu {
                    min_nu = min_nu.min(*v);
                }
            }
        }
    }
    let ok = worst_sum < 1e-10 && worst_sym < 1e-10 && legendre_ok && min_nu >= -1e-12;
    verdict(
        ok,
        "criterion 8 (linearization)",
        &format!(
            "sum-to-one dev {worst_sum:.3e}, symmetry dev {worst_sym:.3e}, legendre row {}, min nu {min_nu:.3e}",
            if legendre_ok { "(1/3, 0, 2/3) ok" } else { "WRONG" }
        ),
    );
}

#[test]
fn criterion_09_truncation_remainders() {
    let mut ok = true;
    let mut notes = Vec::new();
    let corpus = corpus_for(Direction::Gaussian).unwrap();
    let mix = corpus.iter().find(|c| c.name == "mix").unwrap();
    for lambda in [1e2, 1e3] {
        let mut tails = Vec::new();
        for n_split in [4usize, 8, 16] {
            let s = truncated_g_split(&*mix.f, lambda, 3.0, n_split, 64, 49).unwrap();
            tails.push((n_split as f64, s.tail_time, s.tail_space));
        }
        for part in 0..2usize {
            let t: Vec<f64> = tails
                .iter()
                .map(|v| if part == 0 { v.1 } else { v.2 })
                .collect();
            if !(t[1] < t[0] && t[2] < t[1]) {
                ok = false;
                notes.push(format!("lambda={lambda} part{part} not monotone: {t:?}"));
                continue;
            }
            let s1 = (t[1].ln() - t[0].ln()) / (8f64.ln() - 4f64.ln());
            let s2 = (t[2].ln() - t[1].ln()) / (16f64.ln() - 8f64.ln());
            if !(s2 < s1 && s2 <= -2.0) {
                ok = false;
                notes.push(format!(
                    "lambda={lambda} part{part} slopes {s1:.2} -> {s2:.2} not super-polynomial"
                ));
            }
        }
    }
    verdict(
        ok,
        "criterion 9 (truncation remainders)",
        &format!(
            "tail L2 norms decrease monotonically over N in {{4,8,16}} with steepening log-log slope{}",
            if notes.is_empty() { String::new() } else { format!("; issues: {notes:?}") }
        ),
    );
}

#[test]
fn criterion_10_kernel_positivity_and_mass() {
    let fam = Family::jacobi(0.0, 0.0).unwrap();
    let rule = gauss_rule(fam.measure(), 64).unwrap();
    let n = 48;
    let grid: Vec<f64> = (0..32).map(|i| -0.96875 + 0.0625 * i as f64).collect();
    let mut min_kernel = f64::INFINITY;
    let mut worst_mass = 0.0f64;
    for t in [0.1, 0.5, 1.0] {
        for &x in &grid {
            for &y in &grid {
                min_kernel = min_kernel.min(heat_kernel(&fam, t, x, y, n).unwrap());
            }
            let mass = integrate(|y| heat_kernel(&fam, t, x, y, n).unwrap(), &rule).unwrap();
            worst_mass = worst_mass.max((mass - 1.0).abs());
        }
    }
    let ok = min_kernel >= -1e-10 && worst_mass < 1e-10;
    verdict(
        ok,
        "criterion 10 (kernel positivity and mass)",
        &format!(
            "min p(t,x,y) = {min_kernel:.3e} on 32x32 grid, max |mass - 1| = {worst_mass:.3e}"
        ),
    );
}

#[test]
fn criterion_11_bochner_subordination() {
    let mut worst = 0.0f64;
    for lambda in [1.0, 4.0, 25.0] {
        for t in [0.5, 1.0, 2.0] {
            worst = worst.max(bochner_check(lambda, t).unwrap());
        }
    }
    verdict(
        worst < 1e-8,
        "criterion 11 (Bochner subordination)",
        &format!("max residual {worst:.3e} over lambda in {{1,4,25}}, t in {{0.5,1,2}} (tol 1e-8)"),
    );
}

#[test]
fn criterion_12_lp_ratio_stability() {
    let p_grid = [1.5, 2.0, 4.0];
    let mut worst_change = 0.0f64;
    for fam in [
        Family::Hermite,
        Family::jacobi(1.0, 0.5).unwrap(),
        Family::laguerre(0.0).unwrap(),
    ] {
        let corpus: Vec<NamedFunction> = match fam {
            Family::Hermite => corpus_for(Direction::Gaussian)
                .unwrap()
                .into_iter()
                .map(|c| {
                    let f = c.f.clone();
                    let b: Box<dyn Fn(f64) -> f64 + Send + Sync> = Box::new(move |x: f64| f(x));
                    (c.name, b)
                })
                .collect(),
            Family::Laguerre { alpha } => corpus_for(Direction::Laguerre { alpha })
                .unwrap()
                .into_iter()
                .map(|c| {
                    let f = c.f.clone();
                    let b: Box<dyn Fn(f64) -> f64 + Send + Sync> = Box::new(move |x: f64| f(x));
                    (c.name, b)
                })
                .collect(),
            _ => vec![
                ("coord".into(), Box::new(|x: f64| x)),
                ("square".into(), Box::new(|x: f64| x * x - 1.0 / 3.0)),
                ("cubic".into(), Box::new(|x: f64| x * x * x - 0.2 * x)),
            ],
        };
        let coarse_rule = gauss_rule(fam.measure(), 80).unwrap();
        let fine_rule = gauss_rule(fam.measure(), 160).unwrap();
        let coarse = g_ratio_report(&corpus, fam, &p_grid, 64, &coarse_rule).unwrap();
        let fine = g_ratio_report(&corpus, fam, &p_grid, 128, &fine_rule).unwrap();
        for ((p, a), (_, b)) in coarse.max_per_p.iter().zip(&fine.max_per_p) {
            let change = (a - b).abs() / a.max(1e-12);
            worst_change = worst_change.max(change);
            let _ = p;
        }
    }
    verdict(
        worst_change < 0.01,
        "criterion 12 (empirical Lp ratio stability)",
        &format!(
            "max ratio change under doubling N and order: {:.4}% (tol 1%)",
            worst_change * 100.0
        ),
    );
}
