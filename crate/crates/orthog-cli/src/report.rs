//! Run reports and their on-disk form: a hierarchical key-value summary,
//! one CSV per sweep (full-precision scientific notation so downstream
//! comparisons are rounding-free), and a two-column plot-data file.

use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub computed: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn against(name: &str, computed: f64, reference: f64, tolerance: f64) -> Self {
        let error = (computed - reference).abs();
        Check {
            name: name.to_string(),
            computed,
            reference,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }

    /// A check whose "error" is a quantity that must stay below tolerance.
    pub fn bound(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            computed: value,
            reference: 0.0,
            error: value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// A qualitative check (monotone decay, fitted slope in range, ...).
    pub fn flag(name: &str, pass: bool, value: f64) -> Self {
        Check {
            name: name.to_string(),
            computed: value,
            reference: f64::NAN,
            error: f64::NAN,
            tolerance: f64::NAN,
            pass,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub name: String,
    pub rows: Vec<(f64, f64, f64, f64)>, // param, value, reference, error
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub experiment: String,
    pub config_echo: Vec<(String, String)>,
    pub checks: Vec<Check>,
    pub sweeps: Vec<SweepTable>,
    pub duration_ms: u128,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment: {}", self.experiment);
        let _ = writeln!(s, "  config:");
        for (k, v) in &self.config_echo {
            let _ = writeln!(s, "    {k}: {v}");
        }
        let _ = writeln!(s, "  checks:");
        for c in &self.checks {
            if c.reference.is_nan() {
                let _ = writeln!(
                    s,
                    "    {}: value={:.16e} {}",
                    c.name,
                    c.computed,
                    if c.pass { "pass" } else { "FAIL" }
                );
            } else {
                let _ = writeln!(
                    s,
                    "    {}: computed={:.16e} reference={:.16e} error={:.16e} tolerance={:.3e} {}",
                    c.name,
                    c.computed,
                    c.reference,
                    c.error,
                    c.tolerance,
                    if c.pass { "pass" } else { "FAIL" }
                );
            }
        }
        let _ = writeln!(s, "  sweeps: {}", self.sweeps.len());
        for t in &self.sweeps {
            let _ = writeln!(s, "    {}: {} rows", t.name, t.rows.len());
        }
        let _ = writeln!(s, "  duration_ms: {}", self.duration_ms);
        let _ = writeln!(
            s,
            "  result: {}",
            if self.passed() { "pass" } else { "FAIL" }
        );
        s
    }

    /// Write summary.txt, one `<sweep>.csv` per sweep table, and a
    /// `plot_<sweep>.dat` (param error) file.
    pub fn emit(&self, out_dir: &Path) -> Result<()> {
        std::fs::create_dir_all(out_dir)
            .with_context(|| format!("creating {}", out_dir.display()))?;
        std::fs::write(out_dir.join("summary.txt"), self.summary_text())?;
        for t in &self.sweeps {
            let mut csv = String::from("param,value,reference,error\n");
            let mut dat = String::new();
            for (p, v, r, e) in &t.rows {
                let _ = writeln!(csv, "{p:.16e},{v:.16e},{r:.16e},{e:.16e}");
                let _ = writeln!(dat, "{p:.16e} {e:.16e}");
            }
            std::fs::write(out_dir.join(format!("{}.csv", t.name)), csv)?;
            std::fs::write(out_dir.join(format!("plot_{}.dat", t.name)), dat)?;
        }
        Ok(())
    }
}
