//! Command-line front end: parses a generating-function config, runs the
//! polynomial/rootfinding/attractor pipeline, and emits CSV/SVG/JSON
//! artifacts.
//!
//! Exit codes: 0 pass, 1 validation fail, 2 numerical non-convergence,
//! 3 I/O or config error.

mod config;
mod svg;

use anyhow::{Context, Result};
use appell_core::appell::{appell_poly, scaled_poly, AsymMode, AsymptoticContext, BigPoly};
use appell_core::attractor::{build_attractor, AttractorGeometry};
use appell_core::rootfind::aberth;
use appell_core::validate::{
    self, count_cross_check, density_arc_report, density_segment_report, dist_to_geometry,
    hausdorff, split_by_window, ValidationReport,
};
use appell_core::Error as CoreError;
use clap::{ArgAction, Parser, Subcommand};
use config::RunConfig;
use num_complex::Complex64;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "appell", version, about = "Appell polynomial zero attractors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Run configuration JSON (required)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Override the config degree
    #[arg(long, global = true)]
    degree: Option<usize>,

    /// Override the working precision (bits)
    #[arg(long, global = true)]
    precision: Option<u32>,

    /// Emit SVG artifacts (default)
    #[arg(long, global = true, overrides_with = "no_svg", action = ArgAction::SetTrue)]
    svg: bool,

    /// Suppress SVG artifacts
    #[arg(long = "no-svg", global = true, action = ArgAction::SetTrue)]
    no_svg: bool,

    /// Consume a previously written zeros CSV instead of recomputing
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    reuse: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write p_n and p_n(n·) coefficients to CSV
    Coeffs,
    /// Find the zeros of p_n(nx); writes CSV and an SVG scatter
    Zeros,
    /// Build the predicted attractor; writes CSV and SVG (overlay via --reuse)
    Attractor,
    /// Run the validation pipeline and write report.json / report.txt
    Validate,
}

fn main() {
    if let Ok(t) = std::env::var("APPELL_THREADS") {
        if let Ok(k) = t.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind::*;
            if matches!(e.kind(), DisplayHelp | DisplayVersion) {
                print!("{e}");
                std::process::exit(0);
            }
            eprintln!("{e}");
            std::process::exit(3);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(classify_exit(&e));
        }
    }
}

fn classify_exit(e: &anyhow::Error) -> i32 {
    if let Some(core) = e.downcast_ref::<CoreError>() {
        return match core {
            CoreError::NonConverged { .. }
            | CoreError::QuadratureNonConvergence { .. }
            | CoreError::ContourNonConvergence { .. }
            | CoreError::ContourNearRoot { .. } => 2,
            _ => 3,
        };
    }
    3
}

fn run(cli: Cli) -> Result<i32> {
    let config_path = cli.config.as_ref().context("--config PATH is required")?;
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(n) = cli.degree {
        cfg.degree = n;
    }
    if let Some(p) = cli.precision {
        cfg.precision = Some(p);
    }
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    let emit_svg = !cli.no_svg;
    match cli.cmd {
        Cmd::Coeffs => cmd_coeffs(&cfg, &cli.out),
        Cmd::Zeros => cmd_zeros(&cfg, &cli.out, emit_svg),
        Cmd::Attractor => cmd_attractor(&cfg, &cli.out, emit_svg, cli.reuse),
        Cmd::Validate => cmd_validate(&cfg, &cli.out, emit_svg, cli.reuse),
    }
}

fn poly_csv(p: &BigPoly) -> String {
    let mut s = String::from("k,re,im\n");
    for (k, c) in p.coeffs.iter().enumerate() {
        s.push_str(&format!("{k},{:.24e},{:.24e}\n", c.re, c.im));
    }
    s
}

fn cmd_coeffs(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let g = cfg.genfun()?;
    let n = cfg.degree;
    let prec = cfg.precision_for(n);
    let p = appell_poly(&g, n, prec)?;
    let q = scaled_poly(&p, n);
    std::fs::write(out.join("coeffs_pn.csv"), poly_csv(&p))?;
    std::fs::write(out.join("coeffs_pn_scaled.csv"), poly_csv(&q))?;
    println!(
        "wrote {} and {} (degree {n}, {prec} bits)",
        out.join("coeffs_pn.csv").display(),
        out.join("coeffs_pn_scaled.csv").display()
    );
    Ok(0)
}

fn compute_scaled(cfg: &RunConfig) -> Result<BigPoly> {
    let g = cfg.genfun()?;
    let prec = cfg.precision_for(cfg.degree);
    Ok(scaled_poly(&appell_poly(&g, cfg.degree, prec)?, cfg.degree))
}

fn cmd_zeros(cfg: &RunConfig, out: &Path, emit_svg: bool) -> Result<i32> {
    let q = compute_scaled(cfg)?;
    let prec = cfg.precision_for(cfg.degree);
    let tol_exp = -((prec / 3) as i32);
    match aberth(&q, prec, tol_exp, 400) {
        Ok(roots) => {
            std::fs::write(out.join("zeros.csv"), roots.to_csv())?;
            if emit_svg {
                std::fs::write(
                    out.join("zeros.svg"),
                    svg::scatter_svg(&roots.approx_sorted()),
                )?;
            }
            println!(
                "wrote {} ({} roots, residual {:.3e}, {} sweeps)",
                out.join("zeros.csv").display(),
                roots.roots.len(),
                roots.residual_bound,
                roots.iterations
            );
            Ok(0)
        }
        Err(CoreError::NonConverged {
            iterations,
            residual,
            partial,
        }) => {
            std::fs::write(out.join("zeros.csv"), partial.to_csv())?;
            eprintln!(
                "non-converged after {iterations} sweeps (residual {residual:.3e}); partial zeros written"
            );
            Ok(2)
        }
        Err(e) => Err(e.into()),
    }
}

fn build_geometry(cfg: &RunConfig) -> Result<(AsymptoticContext, AttractorGeometry)> {
    let g = cfg.genfun()?;
    let ctx = AsymptoticContext::new(g, cfg.rho, 320)?;
    let geo = build_attractor(&ctx.zeros, cfg.resolution, cfg.tolerances.tie)?;
    for w in &geo.warnings {
        eprintln!("warning: {w}");
    }
    Ok((ctx, geo))
}

fn read_zeros_csv(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading zeros from {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let re: f64 = it
            .next()
            .context("missing re column")?
            .trim()
            .parse()
            .with_context(|| format!("bad re on line {}", i + 1))?;
        let im: f64 = it
            .next()
            .context("missing im column")?
            .trim()
            .parse()
            .with_context(|| format!("bad im on line {}", i + 1))?;
        out.push(Complex64::new(re, im));
    }
    Ok(out)
}

fn cmd_attractor(cfg: &RunConfig, out: &Path, emit_svg: bool, reuse: bool) -> Result<i32> {
    let (_, geo) = build_geometry(cfg)?;
    let zeros = if reuse {
        Some(read_zeros_csv(&out.join("zeros.csv"))?)
    } else {
        None
    };
    std::fs::write(out.join("attractor.csv"), geo.to_csv())?;
    if emit_svg {
        std::fs::write(
            out.join("attractor.svg"),
            svg::attractor_svg(&geo, zeros.as_deref()),
        )?;
    }
    println!(
        "wrote {} ({} arcs, {} segments{})",
        out.join("attractor.csv").display(),
        geo.arcs.len(),
        geo.segments.len(),
        if zeros.is_some() {
            ", zeros overlaid"
        } else {
            ""
        }
    );
    Ok(0)
}

fn cmd_validate(cfg: &RunConfig, out: &Path, emit_svg: bool, reuse: bool) -> Result<i32> {
    let n = cfg.degree;
    let prec = cfg.precision_for(n);
    let (ctx, geo) = build_geometry(cfg)?;
    let q = compute_scaled(cfg)?;

    let zeros: Vec<Complex64> = if reuse {
        read_zeros_csv(&out.join("zeros.csv"))?
    } else {
        let tol_exp = -((prec / 3) as i32);
        match aberth(&q, prec, tol_exp, 400) {
            Ok(roots) => {
                std::fs::write(out.join("zeros.csv"), roots.to_csv())?;
                roots.approx_sorted()
            }
            Err(CoreError::NonConverged {
                iterations,
                residual,
                partial,
            }) => {
                std::fs::write(out.join("zeros.csv"), partial.to_csv())?;
                eprintln!(
                    "non-converged after {iterations} sweeps (residual {residual:.3e}); partial zeros written"
                );
                return Ok(2);
            }
            Err(e) => return Err(e.into()),
        }
    };

    let mut report = ValidationReport {
        generating_function: cfg.describe_genfun(),
        degree: n,
        ..Default::default()
    };

    // containment in the closed disk of radius 1/r0 (plus slack)
    let r0 = ctx.r0;
    let bound = 1.0 / r0 + cfg.tolerances.containment_slack;
    let max_mod = zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
    report.push_check(
        "containment",
        max_mod <= bound,
        max_mod,
        bound,
        format!("max |zero| against 1/r0 + slack, r0 = {r0:.6}"),
    );

    // distances to the attractor, both directions
    let attractor_pts: Vec<Complex64> = geo.all_points().iter().map(|(p, _)| *p).collect();
    let h = hausdorff(&zeros, &attractor_pts)?;
    let directed = zeros
        .iter()
        .map(|z| dist_to_geometry(*z, &geo))
        .fold(0.0, f64::max);
    let gate = cfg.tolerances.hausdorff_directed;
    report.push_check(
        "zeros_to_attractor_directed",
        gate.is_none_or(|g| directed <= g),
        directed,
        gate.unwrap_or(f64::MAX),
        "sup over zeros of the distance to the attractor polyline".into(),
    );
    report.push_check(
        "hausdorff_symmetric",
        true,
        h.distance,
        f64::MAX,
        format!(
            "informational; directed {:.4e} / {:.4e}",
            h.a_to_b, h.b_to_a
        ),
    );

    // outliers relative to the selection window
    let window = cfg.validate.window_factor / n as f64;
    let (_, far) = split_by_window(&zeros, &geo, window);
    report.outliers = far.iter().map(|z| [z.re, z.im]).collect();

    // density histograms
    if cfg.validate.density {
        let mut owners: Vec<usize> = geo.arcs.iter().map(|a| a.owner_idx).collect();
        owners.sort();
        owners.dedup();
        for di in owners {
            match density_arc_report(&zeros, di, &geo, window, cfg.validate.bins_arc) {
                Ok(rep) => {
                    let pass = rep.max_rel_dev <= cfg.tolerances.arc_bin_dev;
                    std::fs::write(out.join(format!("density_arc_{di}.csv")), rep.to_csv())?;
                    report.push_check(
                        &format!("density_arc_{di}"),
                        pass,
                        rep.max_rel_dev,
                        cfg.tolerances.arc_bin_dev,
                        format!("{} zeros in {} bins", rep.selected, rep.bins.len()),
                    );
                    report.density.push(rep);
                }
                Err(CoreError::InsufficientSample { selected, required }) => {
                    report.push_check(
                        &format!("density_arc_{di}"),
                        true,
                        selected as f64,
                        required as f64,
                        "skipped: insufficient sample near this arc".into(),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
        let mut pairs: Vec<(usize, usize)> = geo.segments.iter().map(|s| s.owner_idx).collect();
        pairs.sort();
        pairs.dedup();
        for pair in pairs {
            match density_segment_report(&zeros, pair, &geo, window, cfg.validate.bins_segment) {
                Ok(rep) => {
                    let pass = rep.max_rel_dev <= cfg.tolerances.segment_bin_dev;
                    std::fs::write(
                        out.join(format!("density_segment_{}_{}.csv", pair.0, pair.1)),
                        rep.to_csv(),
                    )?;
                    report.push_check(
                        &format!("density_segment_{}_{}", pair.0, pair.1),
                        pass,
                        rep.max_rel_dev,
                        cfg.tolerances.segment_bin_dev,
                        format!("{} zeros in {} bins", rep.selected, rep.bins.len()),
                    );
                    report.density.push(rep);
                }
                Err(CoreError::InsufficientSample { selected, required }) => {
                    report.push_check(
                        &format!("density_segment_{}_{}", pair.0, pair.1),
                        true,
                        selected as f64,
                        required as f64,
                        "skipped: insufficient sample near this segment".into(),
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }

    // independent count certification on seeded rectangles
    if cfg.validate.rectangles > 0 {
        let rows = count_cross_check(
            &q,
            &zeros,
            cfg.seed,
            cfg.validate.rectangles,
            cfg.validate.rect_half_extent / r0,
            cfg.validate.base_nodes,
        )?;
        let agree = rows.iter().filter(|r| r.agree).count();
        report.push_check(
            "count_certification",
            agree == rows.len(),
            agree as f64,
            rows.len() as f64,
            "argument-principle counts vs root counts on random rectangles".into(),
        );
        report.count_checks = rows;
    }

    // exact vs asymptotic error table
    if !cfg.validate.asym_n.is_empty() && !cfg.validate.asym_points.is_empty() {
        let mut pts = Vec::new();
        for p in &cfg.validate.asym_points {
            let mode = match p.mode.as_str() {
                "exterior" => AsymMode::Exterior,
                "dominant-sum" | "dominant_sum" => AsymMode::DominantSum,
                other => anyhow::bail!("config error: key 'mode': unknown value '{other}'"),
            };
            pts.push((Complex64::new(p.re, p.im), mode));
        }
        let table = validate::asym_error_table(&ctx, &cfg.validate.asym_n, &pts, &geo)?;
        report.asym = table;
    }

    report.finish();
    std::fs::write(out.join("report.json"), report.to_json()?)?;
    std::fs::write(out.join("report.txt"), report.to_text())?;
    std::fs::write(out.join("attractor.csv"), geo.to_csv())?;
    if emit_svg {
        std::fs::write(
            out.join("attractor.svg"),
            svg::attractor_svg(&geo, Some(&zeros)),
        )?;
    }
    print!("{}", report.to_text());
    Ok(if report.pass { 0 } else { 1 })
}
