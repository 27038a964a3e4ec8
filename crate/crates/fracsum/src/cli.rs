//! Command-line front end: grid scans, verification suites, and CSV/JSON
//! emission. All numeric work happens in the library; this module shapes
//! configurations into row tables and verdict lines.
//!
//! Output contract: identical configurations (including seed and thread
//! count) produce byte-identical output. Parallel sections compute
//! independent values and assemble them in fixed order.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::FunctionSpec;
use crate::asymptotics::{constants, error_term_with, fit_exponent, predicted_exponents};
use crate::divisor::{
    delta, delta_average, delta_average_shifted, delta_psi_form, DeltaAverageReport, DivisorTable,
};
use crate::error::{Error, Result};
use crate::expsum::{default_sweep_grid, rs_ratio_sweep};
use crate::hp::DoubleDouble;
use crate::psi::{psi, VaalerSeries};
use crate::sums::tf_exact_fast;
use crate::tolerances;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Top-level invocation: one subcommand plus shared output options.
#[derive(Parser, Debug)]
#[command(
    name = "fracsum",
    about = "Exact divisor-weighted fractional sums, their asymptotics, and bound verification"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads (default: all cores). Output does not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output format for the data table.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write the data table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug)]
pub struct GridArgs {
    /// Single evaluation point (overrides the grid).
    #[arg(long)]
    pub x: Option<f64>,

    /// Geometric grid start.
    #[arg(long)]
    pub xmin: Option<f64>,

    /// Geometric grid end.
    #[arg(long)]
    pub xmax: Option<f64>,

    /// Number of geometric grid points.
    #[arg(long)]
    pub points: Option<usize>,
}

impl GridArgs {
    /// Geometric grid, or the single point, with defaults per command.
    fn build(&self, def_min: f64, def_max: f64, def_points: usize) -> Result<Vec<f64>> {
        if let Some(x) = self.x {
            return Ok(vec![x]);
        }
        let xmin = self.xmin.unwrap_or(def_min);
        let xmax = self.xmax.unwrap_or(def_max);
        let points = self.points.unwrap_or(def_points);
        if points == 0 {
            return Ok(Vec::new());
        }
        if points == 1 {
            return Ok(vec![xmin]);
        }
        if !(xmin > 0.0 && xmax > xmin) {
            return Err(Error::domain(format!(
                "grid must satisfy 0 < xmin < xmax, got [{xmin}, {xmax}]"
            )));
        }
        let log_min = xmin.ln();
        let step = (xmax.ln() - log_min) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points)
            .map(|i| if i + 1 == points { xmax } else { (log_min + step * i as f64).exp() })
            .collect();
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain(
                "grid is not strictly increasing; reduce --points".to_string(),
            ));
        }
        Ok(grid)
    }
}

#[derive(Args, Clone, Debug)]
pub struct FunctionArgs {
    /// Function name: one, sqrt_floor, pow_floor, log_floor.
    #[arg(long = "f", default_value = "one")]
    pub f_name: String,

    /// Growth exponent for pow_floor.
    #[arg(long)]
    pub alpha: Option<f64>,
}

impl FunctionArgs {
    fn resolve(&self) -> Result<FunctionSpec> {
        FunctionSpec::by_name(&self.f_name, self.alpha)
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// T_f, main term, error term, and the theorem envelope over a grid.
    Compute {
        #[command(flatten)]
        f: FunctionArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Constant-series truncation depth.
        #[arg(long, default_value_t = 10_000_000)]
        dcut: u64,
        /// ε in the envelope exponent (4+3α)/7 + ε.
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// C1, C2, C3 midpoints and tail radii.
    Constants {
        #[command(flatten)]
        f: FunctionArgs,
        #[arg(long, default_value_t = 10_000_000)]
        dcut: u64,
    },
    /// Least-squares slope of log|E| vs log x against reference exponents.
    ExponentFit {
        #[command(flatten)]
        f: FunctionArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 10_000_000)]
        dcut: u64,
        /// Slope acceptance margin over the theorem exponent.
        #[arg(long, default_value_t = tolerances::FIT_SLOPE_MARGIN)]
        margin: f64,
        /// Fit synthetic E(x) = x^{1/2} instead of measured errors.
        #[arg(long, default_value_t = false)]
        synthetic: bool,
    },
    /// Sawtooth truncation error against the Fejér majorant.
    VaalerCheck {
        /// Seed for sample generation.
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples per truncation depth.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Triple exponential sum sweep against its budget.
    RsCheck {
        #[arg(long, default_value_t = tolerances::RS_EPSILON)]
        eps: f64,
    },
    /// Residual between Δ(x) and its sawtooth series form over a grid.
    DeltaScan {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Averaged-|Δ| sums against their power bounds, by regime.
    PropCheck {
        /// Largest scale (decades from 1e3 up to this).
        #[arg(long, default_value_t = 10_000_000.0)]
        xmax: f64,
        #[arg(long, default_value_t = tolerances::DELTA_AVERAGE_EPSILON)]
        eps: f64,
    },
}

/// Everything a subcommand produces: a rectangular table, human verdict
/// lines, and the overall pass flag.
#[derive(Debug)]
pub struct CommandOutput {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub verdicts: Vec<String>,
    pub pass: bool,
    pub meta: serde_json::Value,
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_dd(v: DoubleDouble) -> String {
    v.to_sci_string(32)
}

/// Runs a configuration and writes the table to `data_out` and verdict
/// lines to `verdict_out`. Returns the pass flag.
pub fn run_to_writers(
    cfg: &RunConfig,
    data_out: &mut dyn Write,
    verdict_out: &mut dyn Write,
) -> Result<bool> {
    let output = execute(cfg)?;
    match cfg.format {
        Format::Csv => write_csv(&output, data_out)?,
        Format::Json => write_json(&output, data_out)?,
    }
    for line in &output.verdicts {
        writeln!(verdict_out, "{line}")?;
    }
    Ok(output.pass)
}

/// Computes a command's output without touching any stream.
pub fn execute(cfg: &RunConfig) -> Result<CommandOutput> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cfg))
}

fn dispatch(cfg: &RunConfig) -> Result<CommandOutput> {
    match &cfg.command {
        Command::Compute { f, grid, dcut, eps } => cmd_compute(f, grid, *dcut, *eps),
        Command::Constants { f, dcut } => cmd_constants(f, *dcut),
        Command::ExponentFit { f, grid, dcut, margin, synthetic } => {
            cmd_exponent_fit(f, grid, *dcut, *margin, *synthetic)
        }
        Command::VaalerCheck { seed, samples } => cmd_vaaler_check(*seed, *samples),
        Command::RsCheck { eps } => cmd_rs_check(*eps),
        Command::DeltaScan { grid } => cmd_delta_scan(grid),
        Command::PropCheck { xmax, eps } => cmd_prop_check(*xmax, *eps),
    }
}

fn cmd_compute(f: &FunctionArgs, grid: &GridArgs, dcut: u64, eps: f64) -> Result<CommandOutput> {
    let f = f.resolve()?;
    let grid = grid.build(1e2, 1e6, 20)?;
    let consts = constants(&f, dcut)?;
    let envelope_exp = predicted_exponents(f.alpha(), 0.25)?.theorem + eps;
    let rows: Result<Vec<Vec<String>>> = grid
        .par_iter()
        .map(|&x| {
            let tf = tf_exact_fast(&f, x)?;
            let e = error_term_with(&f, &consts, x)?;
            let main = tf - e.value;
            Ok(vec![
                fmt_f64(x),
                fmt_dd(tf),
                fmt_dd(main),
                fmt_dd(e.value),
                fmt_f64(x.powf(envelope_exp)),
            ])
        })
        .collect();
    let rows = rows?;
    Ok(CommandOutput {
        headers: vec!["x", "tf_exact", "main_term", "error_term", "envelope"],
        rows,
        verdicts: vec![format!(
            "compute: {} rows for f = {} (envelope exponent {:.4})",
            grid.len(),
            f.name(),
            envelope_exp
        )],
        pass: true,
        meta: serde_json::json!({
            "command": "compute", "f": f.name(), "alpha": f.alpha(),
            "dcut": dcut, "eps": eps, "points": grid.len(),
        }),
    })
}

fn cmd_constants(f: &FunctionArgs, dcut: u64) -> Result<CommandOutput> {
    let f = f.resolve()?;
    let c = constants(&f, dcut)?;
    let row = |name: &str, v: &crate::asymptotics::TailBoundedValue| {
        vec![name.to_string(), fmt_dd(v.partial), fmt_f64(v.tail_radius), v.d_cut.to_string()]
    };
    Ok(CommandOutput {
        headers: vec!["constant", "midpoint", "radius", "d_cut"],
        rows: vec![row("c1", &c.c1), row("c2", &c.c2), row("c3", &c.c3)],
        verdicts: vec![format!(
            "constants: f = {}, C1 = {:.15} (±{:.2e}), C2 = {:.15} (±{:.2e}), C3 = {:.15} (±{:.2e})",
            f.name(),
            c.c1.partial.to_f64(),
            c.c1.tail_radius,
            c.c2.partial.to_f64(),
            c.c2.tail_radius,
            c.c3.partial.to_f64(),
            c.c3.tail_radius
        )],
        pass: true,
        meta: serde_json::json!({
            "command": "constants", "f": f.name(), "alpha": f.alpha(), "dcut": dcut,
        }),
    })
}

fn cmd_exponent_fit(
    f: &FunctionArgs,
    grid: &GridArgs,
    dcut: u64,
    margin: f64,
    synthetic: bool,
) -> Result<CommandOutput> {
    let f = f.resolve()?;
    let grid = grid.build(1e4, 1e8, 20)?;
    if grid.len() < 5 {
        return Err(Error::InsufficientData(format!(
            "exponent fit needs >= 5 grid points, have {}",
            grid.len()
        )));
    }
    let samples: Result<Vec<(f64, f64, bool)>> = if synthetic {
        Ok(grid.iter().map(|&x| (x, x.powf(0.5), false)).collect())
    } else {
        let consts = constants(&f, dcut)?;
        grid.par_iter()
            .map(|&x| {
                let e = error_term_with(&f, &consts, x)?;
                Ok((x, e.value.to_f64(), e.uncertain))
            })
            .collect()
    };
    let samples = samples?;
    let fit = fit_exponent(&samples.iter().map(|&(x, e, _)| (x, e)).collect::<Vec<_>>())?;
    let exps = predicted_exponents(f.alpha(), 0.25)?;
    let ceiling = exps.theorem + margin;
    let pass = fit.slope <= ceiling;
    let mut verdicts = vec![
        format!(
            "exponent-fit: f = {}, slope = {:.4}, intercept = {:.4}, residual_rms = {:.4}, points = {}",
            f.name(), fit.slope, fit.intercept, fit.residual_rms, fit.points_used
        ),
        format!(
            "  references: zhai_wu = {:.4}, conditional(1/4) = {:.4}, huxley_driven = {:.4}, theorem = {:.4}",
            exps.zhai_wu, exps.conditional, exps.huxley_driven, exps.theorem
        ),
        format!(
            "  slope <= theorem + margin ({:.4} <= {:.4}): {}",
            fit.slope, ceiling, if pass { "PASS" } else { "FAIL" }
        ),
    ];
    if samples.iter().any(|&(_, _, u)| u) {
        verdicts.push(
            "  warning: some samples carry constant-truncation uncertainty above 1% of |E|"
                .to_string(),
        );
    }
    let rows = samples
        .iter()
        .map(|&(x, e, u)| vec![fmt_f64(x), fmt_f64(e), u.to_string()])
        .collect();
    Ok(CommandOutput {
        headers: vec!["x", "error_term", "uncertain"],
        rows,
        verdicts,
        pass,
        meta: serde_json::json!({
            "command": "exponent-fit", "f": f.name(), "alpha": f.alpha(),
            "dcut": dcut, "margin": margin, "synthetic": synthetic,
            "fit": {
                "slope": fit.slope, "intercept": fit.intercept,
                "residual_rms": fit.residual_rms, "points_used": fit.points_used,
            },
            "references": {
                "zhai_wu": exps.zhai_wu, "conditional_quarter": exps.conditional,
                "huxley_driven": exps.huxley_driven, "theorem": exps.theorem,
            },
        }),
    })
}

fn cmd_vaaler_check(seed: u64, samples: usize) -> Result<CommandOutput> {
    // Samples are drawn sequentially from the seed so the set never depends
    // on thread count; only the checking parallelizes.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<f64> = (0..samples).map(|_| rng.gen::<f64>()).collect();
    let depths = [10u32, 100, 1000];
    let mut rows = Vec::new();
    let mut total_violations = 0u64;
    let mut worst_excess = f64::NEG_INFINITY;
    for &h in &depths {
        let series = VaalerSeries::new(h)?;
        let excesses: Vec<f64> = xs
            .par_iter()
            .map(|&x| {
                let err = (psi(x) - series.eval(x)).abs();
                err - series.error_bound(x)
            })
            .collect();
        let violations =
            excesses.iter().filter(|&&e| e > tolerances::VAALER_ROUNDING_SLACK).count() as u64;
        let max_excess = excesses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        total_violations += violations;
        worst_excess = worst_excess.max(max_excess);
        rows.push(vec![
            h.to_string(),
            xs.len().to_string(),
            violations.to_string(),
            fmt_f64(max_excess),
        ]);
    }
    let pass = total_violations == 0;
    Ok(CommandOutput {
        headers: vec!["h", "samples", "violations", "max_excess"],
        rows,
        verdicts: vec![format!(
            "vaaler-check: {} violations over {} samples x {:?} (max err-bound = {:.3e}): {}",
            total_violations,
            samples,
            depths,
            worst_excess,
            if pass { "PASS" } else { "FAIL" }
        )],
        pass,
        meta: serde_json::json!({
            "command": "vaaler-check", "seed": seed, "samples": samples, "depths": depths,
        }),
    })
}

fn cmd_rs_check(eps: f64) -> Result<CommandOutput> {
    let grid = default_sweep_grid();
    let rows_data = rs_ratio_sweep(&grid, eps)?;
    let max_ratio = rows_data.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
    let all_exact = rows_data.iter().all(|r| r.exact_norm);
    let pass = max_ratio <= tolerances::RS_RATIO_MAX;
    let rows = rows_data
        .iter()
        .map(|r| {
            vec![
                r.params.h.to_string(),
                r.params.n.to_string(),
                r.params.m.to_string(),
                fmt_f64(r.params.x),
                fmt_f64(r.params.a),
                fmt_f64(r.params.b),
                fmt_f64(r.params.c),
                fmt_f64(r.epsilon),
                fmt_f64(r.s),
                fmt_f64(r.bound),
                fmt_f64(r.ratio),
                r.exact_norm.to_string(),
            ]
        })
        .collect();
    Ok(CommandOutput {
        headers: vec![
            "h", "n", "m", "x", "a", "b", "c", "eps", "s", "bound", "ratio", "exact_norm",
        ],
        rows,
        verdicts: vec![format!(
            "rs-check: {} points, max ratio = {:.4} (ceiling {}), exact norms = {}: {}",
            grid.len(),
            max_ratio,
            tolerances::RS_RATIO_MAX,
            all_exact,
            if pass { "PASS" } else { "FAIL" }
        )],
        pass,
        meta: serde_json::json!({ "command": "rs-check", "eps": eps, "points": grid.len() }),
    })
}

fn cmd_delta_scan(grid: &GridArgs) -> Result<CommandOutput> {
    let grid = grid.build(10.0, 1e6, 1000)?;
    let data: Result<Vec<(f64, DoubleDouble, f64)>> = grid
        .par_iter()
        .map(|&x| {
            let d = delta(x)?;
            let p = delta_psi_form(x)?;
            Ok((x, d, p))
        })
        .collect();
    let data = data?;
    let max_residual = data
        .iter()
        .map(|(_, d, p)| (d.to_f64() - p).abs())
        .fold(0.0f64, f64::max);
    let pass = max_residual <= tolerances::PSI_FORM_RESIDUAL_MAX;
    let rows = data
        .iter()
        .map(|&(x, d, p)| {
            vec![fmt_f64(x), fmt_dd(d), fmt_f64(p), fmt_f64((d.to_f64() - p).abs())]
        })
        .collect();
    Ok(CommandOutput {
        headers: vec!["x", "delta", "psi_form", "residual"],
        rows,
        verdicts: vec![format!(
            "delta-scan: {} points, max |delta - psi_form| = {:.4} (ceiling {}): {}",
            grid.len(),
            max_residual,
            tolerances::PSI_FORM_RESIDUAL_MAX,
            if pass { "PASS" } else { "FAIL" }
        )],
        pass,
        meta: serde_json::json!({ "command": "delta-scan", "points": grid.len() }),
    })
}

fn prop_row(tag: &str, variant: &str, r: &DeltaAverageReport, regime: &str) -> Vec<String> {
    vec![
        tag.to_string(),
        variant.to_string(),
        fmt_f64(r.scale),
        r.d_range.to_string(),
        fmt_f64(r.epsilon),
        fmt_dd(r.lhs),
        fmt_f64(r.bound),
        fmt_f64(r.ratio),
        regime.to_string(),
    ]
}

fn cmd_prop_check(xmax: f64, eps: f64) -> Result<CommandOutput> {
    if !(xmax >= 1e3) {
        return Err(Error::domain("prop-check needs xmax >= 1e3".to_string()));
    }
    let mut scales = Vec::new();
    let mut s = 1e3;
    while s <= xmax {
        scales.push(s);
        s *= 10.0;
    }
    // One shared D(n) table serves every Δ lookup: arguments stay below the
    // largest scale for the monomial (alpha = -1) and shifted variants.
    let table = DivisorTable::new(xmax as u64)?;
    let mut rows = Vec::new();
    let mut max_ratio_high = 0.0f64; // regime D >= √X
    let mut max_ratio_low = 0.0f64;
    for &scale in &scales {
        let mut d = 1u64;
        while (d as f64) <= scale {
            // keep the smallest monomial argument X/2 at or above 1
            if scale >= 2.0 {
                let r = delta_average(scale, d, -1.0, eps, Some(&table))?;
                let regime = if (d as f64) >= scale.sqrt() { "high" } else { "low" };
                if regime == "high" {
                    max_ratio_high = max_ratio_high.max(r.ratio);
                } else {
                    max_ratio_low = max_ratio_low.max(r.ratio);
                }
                rows.push(prop_row("monomial", "alpha=-1", &r, regime));
            }
            for shift in [0u8, 1] {
                if scale / (2 * d + u64::from(shift)) as f64 >= 1.0 {
                    let r = delta_average_shifted(scale, d, shift, eps, Some(&table))?;
                    let regime = if (d as f64) >= scale.sqrt() { "high" } else { "low" };
                    if regime == "high" {
                        max_ratio_high = max_ratio_high.max(r.ratio);
                    } else {
                        max_ratio_low = max_ratio_low.max(r.ratio);
                    }
                    rows.push(prop_row("shifted", &format!("delta={shift}"), &r, regime));
                }
            }
            d *= 2;
        }
    }
    let max_ratio = max_ratio_high.max(max_ratio_low);
    let pass = max_ratio <= tolerances::DELTA_AVERAGE_RATIO_MAX;
    Ok(CommandOutput {
        headers: vec![
            "proposition", "variant", "scale", "d", "eps", "lhs", "bound", "ratio", "regime",
        ],
        rows,
        verdicts: vec![
            format!(
                "prop-check: max ratio = {:.4} in regime D >= sqrt(X), {:.4} below it",
                max_ratio_high, max_ratio_low
            ),
            format!(
                "prop-check: overall max ratio = {:.4} (ceiling {}): {}",
                max_ratio,
                tolerances::DELTA_AVERAGE_RATIO_MAX,
                if pass { "PASS" } else { "FAIL" }
            ),
        ],
        pass,
        meta: serde_json::json!({ "command": "prop-check", "xmax": xmax, "eps": eps }),
    })
}

fn write_csv(out: &CommandOutput, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{}", out.headers.join(","))?;
    for row in &out.rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

fn write_json(out: &CommandOutput, w: &mut dyn Write) -> Result<()> {
    let rows: Vec<serde_json::Value> = out
        .rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (h, v) in out.headers.iter().zip(row) {
                obj.insert((*h).to_string(), serde_json::Value::String(v.clone()));
            }
            serde_json::Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({
        "meta": {
            "tool": "fracsum",
            "version": env!("CARGO_PKG_VERSION"),
            "config": out.meta,
            "pass": out.pass,
        },
        "rows": rows,
    });
    let mut buf = String::new();
    write!(buf, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
        .expect("string write");
    writeln!(w, "{buf}")?;
    Ok(())
}

/// Maps an outcome onto the process exit code: 0 pass, 1 check failure,
/// 2 usage/domain error, 3 capacity error.
pub fn exit_code(result: &Result<bool>) -> i32 {
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Error::Capacity(_)) => 3,
        Err(_) => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_from(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(args).expect("valid test args")
    }

    fn run_bytes(cfg: &RunConfig) -> (Vec<u8>, Vec<u8>, bool) {
        let mut data = Vec::new();
        let mut verdicts = Vec::new();
        let pass = run_to_writers(cfg, &mut data, &mut verdicts).unwrap();
        (data, verdicts, pass)
    }

    #[test]
    fn compute_single_point_matches_delta() {
        let cfg = cfg_from(&["fracsum", "compute", "--f", "one", "--x", "10", "--dcut", "10"]);
        let (data, _, pass) = run_bytes(&cfg);
        assert!(pass);
        let text = String::from_utf8(data).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,tf_exact,main_term,error_term,envelope");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert!(row[1].starts_with("2.7000"), "T = {}", row[1]);
        // E(10) = Δ(10) = 2.4298...
        assert!(row[3].starts_with("2.4298"), "E = {}", row[3]);
    }

    #[test]
    fn compute_empty_grid_is_header_only() {
        let cfg = cfg_from(&["fracsum", "compute", "--points", "0", "--dcut", "100"]);
        let (data, _, pass) = run_bytes(&cfg);
        assert!(pass);
        assert_eq!(String::from_utf8(data).unwrap(), "x,tf_exact,main_term,error_term,envelope\n");
    }

    #[test]
    fn constants_for_one() {
        let cfg = cfg_from(&["fracsum", "constants", "--f", "one", "--dcut", "100"]);
        let (data, _, _) = run_bytes(&cfg);
        let text = String::from_utf8(data).unwrap();
        let c1_row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(c1_row[0], "c1");
        assert!(c1_row[1].starts_with("1.0000000000"), "{}", c1_row[1]);
    }

    #[test]
    fn synthetic_fit_is_deterministic_and_passes() {
        let cfg = cfg_from(&[
            "fracsum",
            "exponent-fit",
            "--f",
            "one",
            "--synthetic",
            "--xmin",
            "100",
            "--xmax",
            "1000000",
            "--points",
            "10",
            "--dcut",
            "10",
        ]);
        let (_, verdicts, pass) = run_bytes(&cfg);
        assert!(pass);
        let text = String::from_utf8(verdicts).unwrap();
        assert!(text.contains("slope = 0.5000"), "{text}");
    }

    #[test]
    fn json_output_carries_meta_and_rows() {
        let cfg = cfg_from(&[
            "fracsum", "constants", "--f", "one", "--dcut", "50", "--format", "json",
        ]);
        let (data, _, _) = run_bytes(&cfg);
        let doc: serde_json::Value = serde_json::from_slice(&data).unwrap();
        assert_eq!(doc["meta"]["tool"], "fracsum");
        assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
        assert_eq!(doc["rows"][0]["constant"], "c1");
    }

    #[test]
    fn vaaler_check_small_run_passes() {
        let cfg = cfg_from(&["fracsum", "vaaler-check", "--seed", "7", "--samples", "100"]);
        let (data, _, pass) = run_bytes(&cfg);
        assert!(pass);
        let text = String::from_utf8(data).unwrap();
        assert_eq!(text.lines().count(), 4); // header + three depths
        for line in text.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            assert_eq!(cols[2], "0", "violations in {line}");
        }
    }

    #[test]
    fn grid_errors_are_domain_errors() {
        let cfg = cfg_from(&[
            "fracsum", "compute", "--xmin", "100", "--xmax", "10", "--points", "5",
        ]);
        let result = execute(&cfg);
        assert!(matches!(result, Err(Error::Domain(_))));
        let as_run: Result<bool> = Err(result.unwrap_err());
        assert_eq!(exit_code(&as_run), 2);
    }

    #[test]
    fn unknown_function_is_rejected() {
        let cfg = cfg_from(&["fracsum", "constants", "--f", "mystery", "--dcut", "10"]);
        assert!(matches!(execute(&cfg), Err(Error::Domain(_))));
    }
}
