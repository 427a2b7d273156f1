use appell_core::appell::{appell_poly, scaled_poly};
use appell_core::attractor::{
    build_attractor, classify_dominance, DEFAULT_IMPROPER_TOL, DEFAULT_TIE_TOL,
};
use appell_core::genfun::GeneratingFunction;
use appell_core::rootfind::{aberth, default_precision};
use appell_core::validate::{dist_to_geometry, hausdorff};
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    let g = GeneratingFunction::one_minus_t().unwrap();
    let mut zs = g.zeros_up_to(2.0, 256).unwrap();
    classify_dominance(&mut zs, DEFAULT_IMPROPER_TOL).unwrap();
    let geo = build_attractor(&zs, 2048, DEFAULT_TIE_TOL).unwrap();
    let curve_pts: Vec<Complex64> = geo.all_points().iter().map(|(p, _)| *p).collect();
    for n in [100usize, 200, 400] {
        let t0 = Instant::now();
        let prec = default_precision(n);
        let p = scaled_poly(&appell_poly(&g, n, prec).unwrap(), n);
        let t_poly = t0.elapsed().as_secs_f64();
        let t1 = Instant::now();
        let roots = aberth(&p, prec, -((prec / 3) as i32), 400).unwrap();
        let t_ab = t1.elapsed().as_secs_f64();
        let zeros = roots.approx_sorted();
        let h = hausdorff(&zeros, &curve_pts).unwrap();
        let directed_poly: f64 = zeros
            .iter()
            .map(|z| dist_to_geometry(*z, &geo))
            .fold(0.0, f64::max);
        println!(
            "n={n}: poly {t_poly:.2}s aberth {t_ab:.2}s ({} sweeps, residual {:.2e}) zeros->curve {:.4} (polyline {:.4}) curve->zeros {:.4} sym {:.4}",
            roots.iterations, roots.residual_bound, h.a_to_b, directed_poly, h.b_to_a, h.distance
        );
    }
}
