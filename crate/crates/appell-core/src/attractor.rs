//! Szegő-curve geometry: dominance classification of zeros, bisector lines,
//! the Φ level function with its region decomposition, and assembly of the
//! predicted zero attractor ⋃∂D_a as sampled arcs plus bisector segments.
//!
//! Geometry runs in f64; the zeros feeding it come from the multiprecision
//! side through `ZeroInfo::approx`. Attractor tolerances sit at 1e-10..1e-12,
//! far above f64 noise on these O(1) magnitudes.

use crate::error::{Error, Result};
use crate::genfun::{Dominance, ZeroInfo};
use num_complex::Complex64;

pub const DEFAULT_IMPROPER_TOL: f64 = 1e-9;
pub const DEFAULT_TIE_TOL: f64 = 1e-9;
pub const ARC_CERT_TOL: f64 = 1e-10;

/// φ(x) = x e^{1−x}.
pub fn phi_c64(x: Complex64) -> Complex64 {
    x * (Complex64::new(1.0, 0.0) - x).exp()
}

/// |φ(x)| = |x| e^{1−Re x}.
pub fn phi_abs(x: Complex64) -> f64 {
    x.norm() * (1.0 - x.re).exp()
}

/// |φ(bx)| restricted to the bounded branch: the sub-level set {|φ(b·)| < 1}
/// has a second, unbounded component in Re(bx) > 1 that belongs to no cell
/// D_b, so membership and argmin tests treat it as +∞.
pub fn bounded_phi_abs(b: Complex64, x: Complex64) -> f64 {
    let bx = b * x;
    let m = phi_abs(bx);
    if m < 1.0 && bx.re > 1.0 {
        f64::INFINITY
    } else {
        m
    }
}

/// W(e^{−1}) for the principal Lambert branch, by Newton on w e^w = e^{−1}.
pub fn lambert_w_em1() -> f64 {
    let target = (-1.0f64).exp();
    let mut w = 0.278f64;
    for _ in 0..8 {
        let ew = w.exp();
        w -= (w * ew - target) / ((1.0 + w) * ew);
    }
    w
}

/// Sampled copy of (1/a)𝒮.
#[derive(Clone, Debug)]
pub struct SzegoCurve {
    pub owner: Complex64,
    pub samples: Vec<Complex64>,
}

/// Closed sampling of the Szegő curve for the zero a: the standard curve
/// t = ±√(e^{2(s−1)} − s²), s ∈ [−W(e^{−1}), 1], both branches joined into
/// one loop, mapped by x ↦ x/a. Starts and ends at the real-axis crossings.
///
/// Nodes are cosine-clustered in s: near s = −W(e^{−1}) the curve turns like
/// √(s+W), so a uniform s-grid leaves point gaps of order 1/√npts there;
/// clustering restores O(1/npts) spacing along the whole loop.
pub fn szego_samples(a: Complex64, npts: usize) -> Result<SzegoCurve> {
    if a.norm() == 0.0 {
        return Err(Error::InvalidArgument("szego_samples needs a != 0".into()));
    }
    if npts < 16 {
        return Err(Error::InvalidArgument("npts must be at least 16".into()));
    }
    let w = lambert_w_em1();
    let ns = npts / 2;
    let mut samples = Vec::with_capacity(2 * ns);
    let grid = |i: usize| -> f64 {
        let u = std::f64::consts::PI * i as f64 / ns as f64;
        -w + (1.0 + w) * 0.5 * (1.0 - u.cos())
    };
    let point = |s: f64, sign: f64| -> Complex64 {
        let rad = ((2.0 * (s - 1.0)).exp() - s * s).max(0.0);
        Complex64::new(s, sign * rad.sqrt()) / a
    };
    for i in 0..=ns {
        samples.push(point(grid(i), 1.0));
    }
    for i in (1..ns).rev() {
        samples.push(point(grid(i), -1.0));
    }
    Ok(SzegoCurve { owner: a, samples })
}

/// True iff x lies in the interior of the bounded component of
/// {|φ(b·)| < 1}, i.e. |φ(bx)| < 1 and Re(bx) < 1.
pub fn inside_szego(b: Complex64, x: Complex64) -> bool {
    let bx = b * x;
    phi_abs(bx) < 1.0 && bx.re < 1.0
}

/// Dominance classification in place. Zeros must arrive sorted with modulus
/// classes assigned (as `zeros_up_to` returns them). Minimal-modulus zeros
/// stay `Minimal`; others become proper/improper dominant or non-dominant.
/// Anything beyond r0/W(e^{−1}) is non-dominant without testing.
pub fn classify_dominance(zeros: &mut [ZeroInfo], tol_improper: f64) -> Result<()> {
    if zeros.is_empty() {
        return Err(Error::EmptyInput("classify_dominance needs zeros"));
    }
    let minimal: Vec<Complex64> = zeros
        .iter()
        .filter(|z| z.modulus_class == 0)
        .map(|z| z.approx())
        .collect();
    let r0 = zeros
        .iter()
        .map(|z| z.modulus())
        .fold(f64::INFINITY, f64::min);
    let cutoff = r0 / lambert_w_em1();
    for z in zeros.iter_mut() {
        if z.modulus_class == 0 {
            z.dominance = Dominance::Minimal;
            continue;
        }
        let a = z.approx();
        if a.norm() > cutoff * (1.0 + 1e-12) {
            z.dominance = Dominance::NonDominant;
            continue;
        }
        let inv_a = 1.0 / a;
        let mut strictly_inside = false;
        let mut on_boundary = false;
        for b in &minimal {
            let u = b * inv_a;
            if u.re < 1.0 {
                let m = phi_abs(u);
                if m < 1.0 - tol_improper {
                    strictly_inside = true;
                    break;
                }
                if (m - 1.0).abs() <= tol_improper {
                    on_boundary = true;
                }
            }
        }
        z.dominance = if strictly_inside {
            Dominance::NonDominant
        } else if on_boundary {
            Dominance::ImproperDominant
        } else {
            Dominance::ProperDominant
        };
    }
    Ok(())
}

/// The line |φ(ax)| = |φ(bx)|: with x = s + it and b − a = α + iβ it reads
/// α·s − β·t = ln|b/a|.
#[derive(Clone, Copy, Debug)]
pub struct BisectorLine {
    pub a: Complex64,
    pub b: Complex64,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

impl BisectorLine {
    /// Signed residual α·s − β·t − c at x = s + it.
    pub fn residual(&self, x: Complex64) -> f64 {
        self.alpha * x.re - self.beta * x.im - self.c
    }

    /// A point on the line plus the unit direction along it.
    pub fn base_and_direction(&self) -> (Complex64, Complex64) {
        let n2 = self.alpha * self.alpha + self.beta * self.beta;
        let base = Complex64::new(self.alpha * self.c / n2, -self.beta * self.c / n2);
        let len = n2.sqrt();
        let dir = Complex64::new(self.beta / len, self.alpha / len);
        (base, dir)
    }
}

pub fn bisector(a: Complex64, b: Complex64) -> Result<BisectorLine> {
    if (a - b).norm() == 0.0 {
        return Err(Error::InvalidArgument("bisector needs a != b".into()));
    }
    let d = b - a;
    Ok(BisectorLine {
        a,
        b,
        alpha: d.re,
        beta: d.im,
        c: (b.norm() / a.norm()).ln(),
    })
}

/// Intersection of two line coefficients (α s − β t = c); None for parallel.
pub fn line_line_intersection(l1: &BisectorLine, l2: &BisectorLine) -> Option<Complex64> {
    let det = l1.alpha * (-l2.beta) - (-l1.beta) * l2.alpha;
    if det.abs() < 1e-300 {
        return None;
    }
    let s = (l1.c * (-l2.beta) - (-l1.beta) * l2.c) / det;
    let t = (l1.alpha * l2.c - l1.c * l2.alpha) / det;
    Some(Complex64::new(s, t))
}

/// Intersection points of (1/a)𝒮 and (1/b)𝒮: 1-D root solving of
/// |φ(a·x(τ))| − 1 along the bisector line, bracketing sign changes on 512
/// initial samples. At most two points survive the on-curve filters.
pub fn curve_curve_intersections(a: Complex64, b: Complex64, tol: f64) -> Result<Vec<Complex64>> {
    if (a - b).norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "curve intersection needs a != b".into(),
        ));
    }
    let line = bisector(a, b)?;
    let (base, dir) = line.base_and_direction();
    let span = 1.0 / a.norm().min(b.norm()) + base.norm() + 0.5;
    let nsamp = 512usize;
    let h = |tau: f64| -> f64 {
        let x = base + dir * tau;
        phi_abs(a * x) - 1.0
    };
    let mut roots: Vec<Complex64> = Vec::new();
    let mut push_root = |tau: f64| {
        let x = base + dir * tau;
        // both curves, bounded branch only
        if (phi_abs(a * x) - 1.0).abs() <= tol
            && (phi_abs(b * x) - 1.0).abs() <= tol
            && (a * x).re <= 1.0 + tol
            && (b * x).re <= 1.0 + tol
        {
            let dup = roots
                .iter()
                .any(|r| (r - x).norm() <= 1e-9 * (1.0 + x.norm()));
            if !dup {
                roots.push(x);
            }
        }
    };
    let mut prev_tau = -span;
    let mut prev_h = h(prev_tau);
    for i in 1..=nsamp {
        let tau = -span + 2.0 * span * i as f64 / nsamp as f64;
        let cur_h = h(tau);
        if prev_h == 0.0 {
            push_root(prev_tau);
        } else if prev_h * cur_h < 0.0 {
            // bisect the bracket
            let (mut lo, mut hi) = (prev_tau, tau);
            let (mut flo, _fhi) = (prev_h, cur_h);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = h(mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if flo * fm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
                if hi - lo < 1e-16 * span {
                    break;
                }
            }
            push_root(0.5 * (lo + hi));
        }
        prev_tau = tau;
        prev_h = cur_h;
    }
    Ok(roots)
}

/// Φ(x) = max over dominant a of |φ(ax)|^{−1}.
pub fn phi_level(x: Complex64, dominants: &[Complex64]) -> Result<f64> {
    if x.norm() == 0.0 {
        return Err(Error::InvalidArgument("Phi needs x != 0".into()));
    }
    if dominants.is_empty() {
        return Err(Error::EmptyInput("Phi needs dominant zeros"));
    }
    Ok(dominants
        .iter()
        .map(|a| 1.0 / phi_abs(a * x))
        .fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Exterior,
    InteriorOf(usize),
    BoundaryArc(usize),
    BoundarySegment(usize, usize),
}

/// Classify x against the domain decomposition induced by the dominants:
/// exterior of D₀, interior of one cell D_a, on an outer arc, or on a shared
/// boundary segment. Ties are decided within `tol`.
pub fn region_of(x: Complex64, dominants: &[Complex64], tol: f64) -> Result<Region> {
    if dominants.is_empty() {
        return Err(Error::EmptyInput("region_of needs dominant zeros"));
    }
    if x.norm() == 0.0 {
        return Err(Error::InvalidArgument("region_of needs x != 0".into()));
    }
    let vals: Vec<f64> = dominants.iter().map(|a| bounded_phi_abs(*a, x)).collect();
    let m = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let argmin: Vec<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| **v <= m + tol * m.max(1.0))
        .map(|(i, _)| i)
        .collect();
    if m > 1.0 + tol {
        return Ok(Region::Exterior);
    }
    if (m - 1.0).abs() <= tol {
        if argmin.len() == 1 {
            return Ok(Region::BoundaryArc(argmin[0]));
        }
        return Ok(Region::BoundarySegment(argmin[0], argmin[1]));
    }
    if argmin.len() >= 2 {
        return Ok(Region::BoundarySegment(argmin[0], argmin[1]));
    }
    Ok(Region::InteriorOf(argmin[0]))
}

/// Disk radii δ_a for R_ρ: 0.05/|a|, halved until the disks around distinct
/// 1/a are pairwise disjoint.
pub fn default_deltas(zeros: &[ZeroInfo]) -> Vec<f64> {
    let centers: Vec<Complex64> = zeros.iter().map(|z| 1.0 / z.approx()).collect();
    let mut deltas: Vec<f64> = zeros.iter().map(|z| 0.05 / z.modulus()).collect();
    loop {
        let mut ok = true;
        for i in 0..centers.len() {
            for j in (i + 1)..centers.len() {
                let d = (centers[i] - centers[j]).norm();
                if d > 0.0 && deltas[i] + deltas[j] >= d {
                    ok = false;
                }
            }
        }
        if ok {
            return deltas;
        }
        for d in deltas.iter_mut() {
            *d *= 0.5;
        }
    }
}

/// Membership in R_ρ: Re(ax) < 1 for every minimal-modulus zero, outside
/// every excluded disk D(1/a; δ_a), and |x| > 1/ρ.
pub fn in_r_rho(x: Complex64, zeros: &[ZeroInfo], rho: f64, deltas: &[f64]) -> bool {
    if x.norm() <= 1.0 / rho {
        return false;
    }
    for (z, delta) in zeros.iter().zip(deltas.iter()) {
        let a = z.approx();
        if z.modulus_class == 0 && (a * x).re >= 1.0 {
            return false;
        }
        if a.norm() < rho && (x - 1.0 / a).norm() <= *delta {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceKind {
    Arc,
    Segment,
}

/// One kept sub-polyline of a dominant zero's curve.
#[derive(Clone, Debug)]
pub struct Arc {
    pub owner_idx: usize,
    pub owner: Complex64,
    pub points: Vec<Complex64>,
}

/// One kept run of a bisector segment between two dominant zeros.
#[derive(Clone, Debug)]
pub struct Segment {
    pub owner_idx: (usize, usize),
    pub owners: (Complex64, Complex64),
    pub endpoints: (Complex64, Complex64),
    pub points: Vec<Complex64>,
}

/// The predicted attractor: arcs ∂D_a ∩ ∂D₀ plus segments ∂D_a ∩ ∂D_b.
#[derive(Clone, Debug)]
pub struct AttractorGeometry {
    pub dominants: Vec<Complex64>,
    pub arcs: Vec<Arc>,
    pub segments: Vec<Segment>,
    pub warnings: Vec<String>,
}

impl AttractorGeometry {
    pub fn all_points(&self) -> Vec<(Complex64, PieceKind)> {
        let mut v = Vec::new();
        for arc in &self.arcs {
            for p in &arc.points {
                v.push((*p, PieceKind::Arc));
            }
        }
        for seg in &self.segments {
            for p in &seg.points {
                v.push((*p, PieceKind::Segment));
            }
        }
        v
    }

    pub fn point_count(&self) -> usize {
        self.arcs.iter().map(|a| a.points.len()).sum::<usize>()
            + self.segments.iter().map(|s| s.points.len()).sum::<usize>()
    }

    /// CSV rows re,im,kind,owner1,owner2 (owner2 empty for arcs).
    pub fn to_csv(&self) -> String {
        let fmt_owner = |z: Complex64| format!("{:+.9e}{:+.9e}i", z.re, z.im);
        let mut s = String::from("re,im,kind,owner1,owner2\n");
        for arc in &self.arcs {
            let o = fmt_owner(arc.owner);
            for p in &arc.points {
                s.push_str(&format!("{:.17e},{:.17e},arc,{},\n", p.re, p.im, o));
            }
        }
        for seg in &self.segments {
            let o1 = fmt_owner(seg.owners.0);
            let o2 = fmt_owner(seg.owners.1);
            for p in &seg.points {
                s.push_str(&format!(
                    "{:.17e},{:.17e},segment,{},{}\n",
                    p.re, p.im, o1, o2
                ));
            }
        }
        s
    }
}

/// Split a boolean keep-mask over a closed loop of samples into contiguous
/// runs, merging the wrap-around run.
fn mask_runs(mask: &[bool]) -> Vec<Vec<usize>> {
    let n = mask.len();
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    for (i, kept) in mask.iter().enumerate() {
        if *kept {
            cur.push(i);
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    if runs.len() > 1 && mask[0] && mask[n - 1] {
        let first = runs.remove(0);
        runs.last_mut().unwrap().extend(first);
    }
    runs
}

/// Build the attractor from classified zeros. Improper dominants are
/// excluded (with a warning); at least one minimal or proper dominant is
/// required. `resolution` is the per-curve sample count (>= 64); `tol` the
/// argmin tie tolerance.
pub fn build_attractor(
    zeros: &[ZeroInfo],
    resolution: usize,
    tol: f64,
) -> Result<AttractorGeometry> {
    if resolution < 64 {
        return Err(Error::InvalidArgument("resolution must be >= 64".into()));
    }
    let mut warnings = Vec::new();
    for z in zeros {
        if z.dominance == Dominance::ImproperDominant {
            warnings.push(format!(
                "improper dominant zero at {:?} excluded from the attractor",
                z.approx()
            ));
        }
        if z.dominance == Dominance::Unclassified {
            return Err(Error::InvalidArgument(
                "zeros must be classified before building the attractor".into(),
            ));
        }
    }
    let dominants: Vec<Complex64> = zeros
        .iter()
        .filter(|z| matches!(z.dominance, Dominance::Minimal | Dominance::ProperDominant))
        .map(|z| z.approx())
        .collect();
    if dominants.is_empty() {
        return Err(Error::EmptyInput(
            "build_attractor needs a proper dominant zero",
        ));
    }

    let min_phi = |x: Complex64| -> f64 {
        dominants
            .iter()
            .map(|b| bounded_phi_abs(*b, x))
            .fold(f64::INFINITY, f64::min)
    };

    let mut arcs = Vec::new();
    for (di, a) in dominants.iter().enumerate() {
        let curve = szego_samples(*a, resolution)?;
        let mask: Vec<bool> = curve
            .samples
            .iter()
            .map(|x| {
                let own = phi_abs(a * x);
                own <= min_phi(*x) + tol
            })
            .collect();
        for run in mask_runs(&mask) {
            arcs.push(Arc {
                owner_idx: di,
                owner: *a,
                points: run.iter().map(|&i| curve.samples[i]).collect(),
            });
        }
    }

    let mut segments = Vec::new();
    let seg_samples = (resolution / 4).max(64);
    for i in 0..dominants.len() {
        for j in (i + 1)..dominants.len() {
            let pts = curve_curve_intersections(dominants[i], dominants[j], 1e-10)?;
            if pts.len() > 2 {
                // convexity caps the intersection count at two; more means
                // the tolerance machinery broke down
                return Err(Error::InvalidArgument(format!(
                    "{} intersection points for the pair ({:?}, {:?})",
                    pts.len(),
                    dominants[i],
                    dominants[j]
                )));
            }
            if pts.len() != 2 {
                continue;
            }
            let (p, q) = (pts[0], pts[1]);
            let keep: Vec<(Complex64, bool)> = (0..=seg_samples)
                .map(|k| {
                    let x = p + (q - p) * (k as f64 / seg_samples as f64);
                    let m = min_phi(x);
                    let own = bounded_phi_abs(dominants[i], x);
                    (x, m <= 1.0 + tol && own <= m + tol)
                })
                .collect();
            let mask: Vec<bool> = keep.iter().map(|(_, k)| *k).collect();
            // a chord is not a loop; suppress the wrap merge by force
            let mut runs: Vec<Vec<usize>> = Vec::new();
            let mut cur: Vec<usize> = Vec::new();
            for (idx, flag) in mask.iter().enumerate() {
                if *flag {
                    cur.push(idx);
                } else if !cur.is_empty() {
                    runs.push(std::mem::take(&mut cur));
                }
            }
            if !cur.is_empty() {
                runs.push(cur);
            }
            for run in runs {
                if run.len() < 2 {
                    continue;
                }
                segments.push(Segment {
                    owner_idx: (i, j),
                    owners: (dominants[i], dominants[j]),
                    endpoints: (p, q),
                    points: run.iter().map(|&k| keep[k].0).collect(),
                });
            }
        }
    }

    Ok(AttractorGeometry {
        dominants,
        arcs,
        segments,
        warnings,
    })
}
