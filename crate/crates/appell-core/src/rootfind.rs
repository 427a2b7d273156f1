//! Simultaneous polynomial root finding at arbitrary precision, plus an
//! independent argument-principle zero counter used to certify root counts.
//!
//! The solver is Aberth–Ehrlich with Newton-polygon initial guesses and a
//! Jacobi-style sweep (all corrections computed from the previous iterate, so
//! per-root work parallelizes). Clustered roots are reported as index groups
//! rather than certified multiplicities.

use crate::appell::BigPoly;
use crate::bigc::Cx;
use crate::error::{Error, Result};
use rayon::prelude::*;
use rug::{Assign, Float};

/// Working precision for degree-n Appell data: coefficients of p_n(nx) span a
/// dynamic range of about e^n = 2^{1.443 n}, so 2n bits plus guard bits keep
/// Horner evaluation meaningful near the unit-modulus zeros.
pub fn default_precision(n: usize) -> u32 {
    (2 * n + 128).max(256) as u32
}

/// Converged root set for one polynomial.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Cx>,
    /// max over roots of |p(root)| / ||p||_inf
    pub residual_bound: f64,
    pub iterations: usize,
    pub prec: u32,
    /// per-root |p(root)| / ||p||_inf, same order as `roots`
    pub residuals: Vec<f64>,
    /// relative correction tolerance the iteration ran with
    pub tol_exp: i32,
}

impl RootSet {
    /// Groups of root indices whose mutual distance is below `threshold`
    /// (default: sqrt of the iteration tolerance). Singleton groups are
    /// omitted; a double root shows up as one group of two indices.
    pub fn clusters(&self, threshold: f64) -> Vec<Vec<usize>> {
        let n = self.roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.roots[i].dist(&self.roots[j]).to_f64() < threshold {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = find(&mut parent, i);
            groups[r].push(i);
        }
        groups.retain(|g| g.len() > 1);
        groups.sort();
        groups
    }

    pub fn default_cluster_threshold(&self) -> f64 {
        2f64.powi((self.tol_exp / 2).max(-500))
    }

    /// Roots projected to f64 pairs, sorted by (re, im) for deterministic output.
    pub fn approx_sorted(&self) -> Vec<num_complex::Complex64> {
        let mut v: Vec<num_complex::Complex64> = self.roots.iter().map(|r| r.to_c64()).collect();
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    /// CSV serialization: header `re,im,residual`, 25 significant digits, LF endings.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,residual\n");
        let mut order: Vec<usize> = (0..self.roots.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (&self.roots[i], &self.roots[j]);
            let re = a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal);
            re.then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        for i in order {
            let r = &self.roots[i];
            s.push_str(&format!(
                "{:.24e},{:.24e},{:.6e}\n",
                r.re, r.im, self.residuals[i]
            ));
        }
        s
    }
}

/// Horner pass for p and p′ plus the magnitude majorant p̃(|x|) = Σ|c_k||x|^k.
fn horner_with_majorant(p: &BigPoly, x: &Cx) -> (Cx, Cx, Float) {
    let prec = p.prec.max(x.prec());
    let mut value = p.coeffs.last().unwrap().with_prec(prec);
    let mut deriv = Cx::zero(prec);
    let xabs = Float::with_val(64, x.abs());
    let mut majorant = Float::with_val(64, value.abs());
    let mut t = Float::new(prec);
    for c in p.coeffs.iter().rev().skip(1) {
        // deriv = deriv*x + value
        cx_mul_into(&mut deriv, x, &mut t);
        deriv.re += &value.re;
        deriv.im += &value.im;
        // value = value*x + c
        cx_mul_into(&mut value, x, &mut t);
        value.re += &c.re;
        value.im += &c.im;
        majorant *= &xabs;
        majorant += Float::with_val(64, c.abs());
    }
    (value, deriv, majorant)
}

/// Simultaneous Horner evaluation of p and p′ at x, with a running absolute
/// error bound for the value (standard (2n+1)·u·p̃(|x|) majorant).
pub fn horner_eval(p: &BigPoly, x: &Cx) -> (Cx, Cx, Float) {
    let prec = p.prec.max(x.prec());
    let (value, deriv, majorant) = horner_with_majorant(p, x);
    let mut err = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
    err *= (2 * p.degree() + 1) as u32;
    err *= &majorant;
    (value, deriv, err)
}

/// In-place complex multiply: a *= b, using `t` as scratch.
fn cx_mul_into(a: &mut Cx, b: &Cx, t: &mut Float) {
    // (ar + i ai)(br + i bi): new_re = ar*br - ai*bi, new_im = ar*bi + ai*br
    t.assign(&a.re * &b.im);
    let mut im = Float::with_val(a.re.prec(), &a.im * &b.re);
    im += &*t;
    t.assign(&a.im * &b.im);
    a.re *= &b.re;
    a.re -= &*t;
    a.im.assign(im);
}

/// max |c_k| over the coefficients, as a low-precision float.
fn coeff_sup(p: &BigPoly) -> Float {
    let mut m = Float::new(64);
    for c in &p.coeffs {
        let a = c.abs();
        if a > m {
            m = Float::with_val(64, a);
        }
    }
    m
}

/// Newton-polygon initial guesses: radii |c_k/c_{k+j}|^{1/j} from the upper
/// convex hull of (k, log2 |c_k|), phases spread by the golden angle.
fn initial_guesses(p: &BigPoly, prec: u32) -> Vec<Cx> {
    let deg = p.degree();
    let logs: Vec<Option<f64>> = p
        .coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                None
            } else {
                Some(c.abs().ln().to_f64() / std::f64::consts::LN_2)
            }
        })
        .collect();
    // upper hull over defined points
    let pts: Vec<(f64, f64)> = logs
        .iter()
        .enumerate()
        .filter_map(|(k, l)| l.map(|v| (k as f64, v)))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep the chain concave from above
            if (y2 - y1) * (pt.0 - x1) <= (pt.1 - y1) * (x2 - x1) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let golden = 2.0 * std::f64::consts::PI * 0.618_033_988_749_894_9;
    let mut guesses = Vec::with_capacity(deg);
    let mut placed = 0usize;
    for w in hull.windows(2) {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let span = (k2 - k1) as usize;
        // |c_{k1}| r^{k1} = |c_{k2}| r^{k2}  =>  log2 r = (l1 - l2)/(k2 - k1)
        let r = 2f64.powf((l1 - l2) / (k2 - k1));
        for j in 0..span {
            let theta = golden * (placed + j) as f64 + 0.39;
            guesses.push(Cx::from_f64(prec, r * theta.cos(), r * theta.sin()));
        }
        placed += span;
    }
    // numerical hull degeneracies: pad on the unit circle
    while guesses.len() < deg {
        let theta = golden * guesses.len() as f64 + 1.17;
        guesses.push(Cx::from_f64(prec, theta.cos(), theta.sin()));
        if guesses.len() > 4 * deg {
            break;
        }
    }
    guesses.truncate(deg);
    guesses
}

/// Aberth–Ehrlich simultaneous iteration.
///
/// `tol_exp` is the relative correction tolerance as a power of two
/// (correction accepted when |w| < 2^tol_exp · |z|); iteration stops when all
/// roots converge or `max_iter` sweeps elapse. Returns a non-converged error
/// carrying the partial state if the final scaled residual exceeds
/// 2^-(prec/4).
pub fn aberth(p: &BigPoly, prec: u32, tol_exp: i32, max_iter: usize) -> Result<RootSet> {
    if p.degree() < 1 {
        return Err(Error::InvalidArgument("aberth needs degree >= 1".into()));
    }
    if p.coeffs.last().unwrap().is_zero() {
        return Err(Error::InvalidArgument(
            "leading coefficient must be nonzero".into(),
        ));
    }
    // factor out roots at the origin
    let zshift = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    let work: Vec<Cx> = p.coeffs[zshift..]
        .iter()
        .map(|c| c.with_prec(prec))
        .collect();
    let wp = BigPoly { coeffs: work, prec };
    let deg = wp.degree();
    let mut cur = initial_guesses(&wp, prec);
    let tol = Float::with_val(64, Float::i_exp(1, tol_exp));
    let mut iterations = 0usize;
    // converged roots freeze: they still repel the others but skip their own
    // update, which removes most of the late-sweep cost
    let mut frozen = vec![false; deg];
    if deg > 0 {
        for sweep in 0..max_iter {
            iterations = sweep + 1;
            let results: Vec<Option<(Cx, bool)>> = (0..deg)
                .into_par_iter()
                .map(|i| {
                    if frozen[i] {
                        None
                    } else {
                        Some(aberth_step(&wp, &cur, i, prec, &tol))
                    }
                })
                .collect();
            let mut all_done = true;
            for (i, r) in results.into_iter().enumerate() {
                if let Some((z, done)) = r {
                    cur[i] = z;
                    frozen[i] = done;
                    all_done &= done;
                }
            }
            if all_done {
                break;
            }
        }
    }
    for _ in 0..zshift {
        cur.push(Cx::zero(prec));
    }
    // residuals scaled by the coefficient sup norm
    let sup = coeff_sup(p);
    let residuals: Vec<f64> = cur
        .par_iter()
        .map(|z| {
            let (v, _, _) = horner_eval(p, z);
            let r = Float::with_val(64, v.abs());
            (r / &sup).to_f64()
        })
        .collect();
    let residual_bound = residuals.iter().cloned().fold(0.0, f64::max);
    let threshold = 2f64.powi(-((prec / 4).min(900) as i32));
    let set = RootSet {
        roots: cur,
        residual_bound,
        iterations,
        prec,
        residuals,
        tol_exp,
    };
    if residual_bound > threshold {
        return Err(Error::NonConverged {
            iterations,
            residual: residual_bound,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

/// One Jacobi-style Aberth update for root index `i`; returns the new
/// position and whether the correction cleared the tolerance.
fn aberth_step(p: &BigPoly, roots: &[Cx], i: usize, prec: u32, tol: &Float) -> (Cx, bool) {
    let z = &roots[i];
    let (pv, dv, _) = horner_eval(p, z);
    if pv.is_zero() {
        return (z.clone(), true);
    }
    // Newton ratio with a guard against vanishing derivative
    let newton = if dv.is_zero() {
        Cx::from_f64(prec, 1e-3, 1e-3)
    } else {
        &pv / &dv
    };
    // repulsion sum over the other roots
    let mut sum = Cx::zero(prec);
    let mut t = Float::new(prec);
    for (j, other) in roots.iter().enumerate() {
        if j == i {
            continue;
        }
        let mut d = z - other;
        if d.is_zero() {
            // coincident iterates: nudge instead of dividing by zero
            d = Cx::from_f64(prec, 1e-6 + j as f64 * 1e-9, 1e-6);
        }
        // sum += 1/d computed in place
        let n2 = d.norm2();
        t.assign(&d.re / &n2);
        sum.re += &t;
        t.assign(&d.im / &n2);
        sum.im -= &t;
    }
    let denom = &Cx::one(prec) - &(&newton * &sum);
    let w = if denom.is_zero() {
        newton.clone()
    } else {
        &newton / &denom
    };
    let znew = z - &w;
    let wa = w.abs();
    let za = z.abs();
    let done = wa
        <= Float::with_val(64, tol * &za)
            .max(&Float::with_val(64, Float::i_exp(1, -(2 * prec as i32))));
    (znew, done)
}

/// Count zeros of p inside an axis-aligned rectangle by the argument
/// principle: trapezoid quadrature of p′/p along the edges, node count
/// doubled until the integral sits within 0.1 of an integer.
///
/// A sampled point with |p(z)| below 2^-(prec/4) of the local magnitude
/// majorant p̃(|z|) means the contour passes too close to a root; that scale
/// (rather than the coefficient sup) matters because these polynomials take
/// values exponentially smaller than their coefficients inside the zero
/// region.
pub fn argument_principle_count(
    p: &BigPoly,
    rect: (f64, f64, f64, f64), // (x0, x1, y0, y1)
    base_nodes: usize,
) -> Result<usize> {
    let (x0, x1, y0, y1) = rect;
    if !(x0 < x1 && y0 < y1) {
        return Err(Error::InvalidArgument("degenerate rectangle".into()));
    }
    let prec = p.prec;
    let corners = [
        num_complex::Complex64::new(x0, y0),
        num_complex::Complex64::new(x1, y0),
        num_complex::Complex64::new(x1, y1),
        num_complex::Complex64::new(x0, y1),
    ];
    let quarter = Float::with_val(64, Float::i_exp(1, -((prec / 4) as i32)));
    let mut nodes = base_nodes.next_power_of_two().max(16);
    while nodes <= (1 << 16) {
        let mut total_im = 0f64;
        let mut total_re = 0f64;
        let mut too_close: Option<f64> = None;
        for e in 0..4 {
            let a = corners[e];
            let b = corners[(e + 1) % 4];
            // composite trapezoid of p'/p over the segment, in parallel
            let evals: Vec<(f64, f64, bool, f64)> = (0..=nodes)
                .into_par_iter()
                .map(|j| {
                    let s = j as f64 / nodes as f64;
                    let zt = a + (b - a) * s;
                    let z = Cx::from_f64(prec, zt.re, zt.im);
                    let (pv, dv, majorant) = horner_with_majorant(p, &z);
                    let ratio = &dv / &pv;
                    let pa = pv.abs();
                    let close = pa < Float::with_val(64, &quarter * &majorant);
                    let rel = (Float::with_val(64, &pa / &majorant)).to_f64();
                    (ratio.re.to_f64(), ratio.im.to_f64(), close, rel)
                })
                .collect();
            let dz = b - a;
            for (j, (re, im, close, rel)) in evals.iter().enumerate() {
                if *close {
                    too_close = Some(*rel);
                }
                let w = if j == 0 || j == nodes { 0.5 } else { 1.0 };
                // (re + i im) * dz, accumulated with trapezoid weight
                total_re += w * (re * dz.re - im * dz.im);
                total_im += w * (re * dz.im + im * dz.re);
            }
        }
        if let Some(rel) = too_close {
            return Err(Error::ContourNearRoot { min_abs: rel });
        }
        // every edge used the same interval count
        let integral_im = total_im / nodes as f64;
        let integral_re = total_re / nodes as f64;
        let winding = integral_im / (2.0 * std::f64::consts::PI);
        let spur = integral_re / (2.0 * std::f64::consts::PI);
        let rounded = winding.round();
        if (winding - rounded).abs() < 0.1 && spur.abs() < 0.1 && rounded >= 0.0 {
            return Ok(rounded as usize);
        }
        nodes *= 2;
    }
    Err(Error::ContourNonConvergence { nodes: 1 << 16 })
}
