//! Generating functions g(t): Taylor coefficients, zeros below a cutoff, and
//! the Laurent (singular-part) data of 1/(t·g(t)) at each zero.
//!
//! Two kinds are supported: explicit polynomials given by their roots, and a
//! small catalog (Euler, Bernoulli, Bessel J0, and g(t) = 1 − t). Both supply
//! closed-form coefficients and zeros; nothing here does general-purpose
//! root finding on user functions.

use crate::bigc::{self, Cx};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

pub const MIN_PREC: u32 = 64;

/// Relative tolerance for grouping zero moduli into classes r_0 < r_1 < ...
pub const MODULUS_CLASS_TOL: f64 = 1e-9;

/// Relative margin around zero moduli within which a cutoff rho is rejected.
pub const RHO_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum Catalog {
    /// ((e^t + 1)/2)^m
    Euler { order: u32 },
    /// ((e^t − 1)/t)^m
    Bernoulli { order: u32 },
    /// Bessel J0(t)
    BesselJ0,
    /// 1 − t (Taylor sections of e^x)
    OneMinusT,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Kind {
    /// scale · Π (t − root_i)^{mult_i}
    Poly {
        roots: Vec<(Complex64, u32)>,
        scale: Complex64,
    },
    Catalog(Catalog),
}

/// A generating function g with g(0) ≠ 0, validated at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunction {
    kind: Kind,
}

/// Dominance classification of a zero (see the attractor module for the
/// geometric test; `Minimal` marks the minimal-modulus class).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominance {
    Minimal,
    ProperDominant,
    ImproperDominant,
    NonDominant,
    Unclassified,
}

/// One zero a of g with its multiplicity, modulus class, dominance tag and
/// (once filled) the Laurent coefficients b_{a,1..beta} of 1/(t·g(t)) at a.
#[derive(Clone, Debug)]
pub struct ZeroInfo {
    pub a: Cx,
    pub beta: u32,
    pub modulus_class: usize,
    pub dominance: Dominance,
    pub b_coeffs: Vec<Cx>,
}

impl ZeroInfo {
    pub fn approx(&self) -> Complex64 {
        self.a.to_c64()
    }

    pub fn modulus(&self) -> f64 {
        self.a.abs().to_f64()
    }
}

// ---------------------------------------------------------------------------
// JSON input document (the single external input format for the CLI)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootDoc {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogName {
    Euler,
    Bernoulli,
    BesselJ0,
    OneMinusT,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenFunDoc {
    Poly {
        roots: Vec<RootDoc>,
        scale: ComplexDoc,
    },
    Catalog {
        name: CatalogName,
        #[serde(default)]
        order: Option<u32>,
    },
}

impl GeneratingFunction {
    pub fn from_doc(doc: &GenFunDoc) -> Result<Self> {
        match doc {
            GenFunDoc::Poly { roots, scale } => {
                let rs = roots
                    .iter()
                    .map(|r| (Complex64::new(r.re, r.im), r.mult))
                    .collect();
                Self::poly(rs, Complex64::new(scale.re, scale.im))
            }
            GenFunDoc::Catalog { name, order } => {
                let m = order.unwrap_or(1);
                match name {
                    CatalogName::Euler => Self::euler(m),
                    CatalogName::Bernoulli => Self::bernoulli(m),
                    CatalogName::BesselJ0 | CatalogName::OneMinusT => {
                        if m != 1 {
                            return Err(Error::Config(format!(
                                "key 'order': value {m} not supported for this catalog entry"
                            )));
                        }
                        match name {
                            CatalogName::BesselJ0 => Self::bessel_j0(),
                            _ => Self::one_minus_t(),
                        }
                    }
                }
            }
        }
    }

    pub fn poly(roots: Vec<(Complex64, u32)>, scale: Complex64) -> Result<Self> {
        if scale.norm() == 0.0 {
            return Err(Error::GZeroAtOrigin);
        }
        if roots.is_empty() {
            return Err(Error::EmptyInput(
                "polynomial generating function needs at least one root",
            ));
        }
        for (r, m) in &roots {
            if r.norm() == 0.0 {
                return Err(Error::GZeroAtOrigin);
            }
            if *m == 0 {
                return Err(Error::InvalidArgument(
                    "root multiplicity must be positive".into(),
                ));
            }
        }
        Ok(GeneratingFunction {
            kind: Kind::Poly { roots, scale },
        })
    }

    pub fn euler(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("euler order must be >= 1".into()));
        }
        Ok(GeneratingFunction {
            kind: Kind::Catalog(Catalog::Euler { order }),
        })
    }

    pub fn bernoulli(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument(
                "bernoulli order must be >= 1".into(),
            ));
        }
        Ok(GeneratingFunction {
            kind: Kind::Catalog(Catalog::Bernoulli { order }),
        })
    }

    pub fn bessel_j0() -> Result<Self> {
        Ok(GeneratingFunction {
            kind: Kind::Catalog(Catalog::BesselJ0),
        })
    }

    pub fn one_minus_t() -> Result<Self> {
        Ok(GeneratingFunction {
            kind: Kind::Catalog(Catalog::OneMinusT),
        })
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// True when the Taylor coefficients of g are all real.
    pub fn has_real_coeffs(&self) -> bool {
        match &self.kind {
            Kind::Catalog(_) => true,
            Kind::Poly { roots, scale } => {
                if scale.im != 0.0 {
                    return false;
                }
                roots.iter().all(|(r, m)| {
                    r.im == 0.0
                        || roots
                            .iter()
                            .any(|(s, ms)| s.re == r.re && s.im == -r.im && ms == m)
                })
            }
        }
    }

    // -----------------------------------------------------------------------
    // Taylor coefficients
    // -----------------------------------------------------------------------

    /// First `count`+1 Taylor coefficients of g at 0.
    pub fn taylor_coeffs(&self, count: usize, prec: u32) -> Result<Vec<Cx>> {
        if prec < MIN_PREC {
            return Err(Error::PrecisionTooLow {
                prec,
                min: MIN_PREC,
            });
        }
        let n = count + 1;
        let out = match &self.kind {
            Kind::Poly { roots, scale } => {
                let mut c = vec![Cx::from_c64(prec, *scale)];
                for (r, m) in roots {
                    let rc = Cx::from_c64(prec, *r);
                    for _ in 0..*m {
                        // multiply by (t - r), truncated at degree `count`
                        let mut next = Vec::with_capacity((c.len() + 1).min(n));
                        for k in 0..(c.len() + 1).min(n) {
                            let mut v = Cx::zero(prec);
                            if k < c.len() {
                                v = &v - &(&c[k] * &rc);
                            }
                            if k >= 1 {
                                v = &v + &c[k - 1];
                            }
                            next.push(v);
                        }
                        c = next;
                    }
                }
                c.resize(n, Cx::zero(prec));
                c
            }
            Kind::Catalog(cat) => catalog_coeffs(cat, count, prec),
        };
        debug_assert!(!out[0].is_zero());
        Ok(out)
    }

    // -----------------------------------------------------------------------
    // Evaluation
    // -----------------------------------------------------------------------

    /// g(t) at working precision.
    pub fn eval(&self, t: &Cx, prec: u32) -> Cx {
        let t = t.with_prec(prec);
        match &self.kind {
            Kind::Poly { roots, scale } => {
                let mut v = Cx::from_c64(prec, *scale);
                for (r, m) in roots {
                    let f = &t - &Cx::from_c64(prec, *r);
                    v = &v * &f.powi(*m as i64);
                }
                v
            }
            Kind::Catalog(cat) => match cat {
                Catalog::OneMinusT => &Cx::one(prec) - &t,
                Catalog::Euler { order } => {
                    let e = t.exp();
                    let base = (&e + &Cx::one(prec)).scale_f64(0.5);
                    base.powi(*order as i64)
                }
                Catalog::Bernoulli { order } => bernoulli_base(&t, prec).powi(*order as i64),
                Catalog::BesselJ0 => bessel_j0_series(&t, prec),
            },
        }
    }

    /// g′(t). At a simple root of a polynomial kind this evaluates the exact
    /// surviving product term.
    pub fn eval_deriv(&self, t: &Cx, prec: u32) -> Cx {
        let t = t.with_prec(prec);
        match &self.kind {
            Kind::Poly { roots, scale } => {
                let mut sum = Cx::zero(prec);
                for (i, (_, mi)) in roots.iter().enumerate() {
                    let mut term = Cx::from_c64(prec, *scale).scale_f64(*mi as f64);
                    for (j, (rj, mj)) in roots.iter().enumerate() {
                        let f = &t - &Cx::from_c64(prec, *rj);
                        let e = if i == j { *mj as i64 - 1 } else { *mj as i64 };
                        if e > 0 {
                            term = &term * &f.powi(e);
                        }
                    }
                    sum = &sum + &term;
                }
                sum
            }
            Kind::Catalog(cat) => match cat {
                Catalog::OneMinusT => Cx::from_f64(prec, -1.0, 0.0),
                Catalog::Euler { order } => {
                    let e = t.exp();
                    let base = (&e + &Cx::one(prec)).scale_f64(0.5);
                    let d = e.scale_f64(0.5);
                    &base.powi(*order as i64 - 1).scale_f64(*order as f64) * &d
                }
                Catalog::Bernoulli { order } => {
                    let base = bernoulli_base(&t, prec);
                    let d = bernoulli_base_deriv(&t, prec);
                    &base.powi(*order as i64 - 1).scale_f64(*order as f64) * &d
                }
                Catalog::BesselJ0 => -&bessel_j1_series(&t, prec),
            },
        }
    }

    // -----------------------------------------------------------------------
    // Zeros
    // -----------------------------------------------------------------------

    /// All zeros of g with modulus < rho, sorted by modulus, with
    /// multiplicities and modulus classes assigned. Minimal-modulus zeros are
    /// tagged `Dominance::Minimal`; the rest stay `Unclassified`.
    pub fn zeros_up_to(&self, rho: f64, prec: u32) -> Result<Vec<ZeroInfo>> {
        if prec < MIN_PREC {
            return Err(Error::PrecisionTooLow {
                prec,
                min: MIN_PREC,
            });
        }
        if !rho.is_finite() || rho <= 0.0 {
            return Err(Error::InvalidArgument("rho must be positive".into()));
        }
        let mut zs: Vec<(Cx, u32)> = Vec::new();
        match &self.kind {
            Kind::Poly { roots, .. } => {
                for (r, m) in roots {
                    check_rho_margin(rho, r.norm())?;
                    if r.norm() < rho {
                        zs.push((Cx::from_c64(prec, *r), *m));
                    }
                }
            }
            Kind::Catalog(cat) => match cat {
                Catalog::OneMinusT => {
                    check_rho_margin(rho, 1.0)?;
                    if 1.0 < rho {
                        zs.push((Cx::one(prec), 1));
                    }
                }
                Catalog::Euler { order } => {
                    // e^t = -1  =>  t = i*pi*(2k+1)
                    let pi = bigc::pi(prec);
                    let mut j = 1i64;
                    loop {
                        let modulus = std::f64::consts::PI * j as f64;
                        if modulus >= rho * (1.0 + RHO_MARGIN) {
                            break;
                        }
                        check_rho_margin(rho, modulus)?;
                        if modulus < rho {
                            let im = Float::with_val(prec, &pi * j);
                            let imn = -im.clone();
                            zs.push((Cx::from_float(Float::new(prec), im), *order));
                            zs.push((Cx::from_float(Float::new(prec), imn), *order));
                        }
                        j += 2;
                    }
                }
                Catalog::Bernoulli { order } => {
                    // e^t = 1, t != 0  =>  t = 2*pi*i*k, k != 0
                    let pi = bigc::pi(prec);
                    let mut k = 1i64;
                    loop {
                        let modulus = 2.0 * std::f64::consts::PI * k as f64;
                        if modulus >= rho * (1.0 + RHO_MARGIN) {
                            break;
                        }
                        check_rho_margin(rho, modulus)?;
                        if modulus < rho {
                            let im = Float::with_val(prec, &pi * (2 * k));
                            let imn = -im.clone();
                            zs.push((Cx::from_float(Float::new(prec), im), *order));
                            zs.push((Cx::from_float(Float::new(prec), imn), *order));
                        }
                        k += 1;
                    }
                }
                Catalog::BesselJ0 => {
                    let mut k = 1u32;
                    loop {
                        let guess = bessel_j0_zero_guess(k);
                        if guess >= rho * (1.0 + RHO_MARGIN) + 1.0 {
                            break;
                        }
                        let z = bessel_j0_zero(k, prec);
                        let modulus = z.to_f64();
                        check_rho_margin(rho, modulus)?;
                        if modulus < rho {
                            let zn = -z.clone();
                            zs.push((Cx::from_float(z, Float::new(prec)), 1));
                            zs.push((Cx::from_float(zn, Float::new(prec)), 1));
                        } else {
                            break;
                        }
                        k += 1;
                    }
                }
            },
        }
        if zs.is_empty() {
            return Err(Error::NoZerosBelowRho(rho));
        }
        // sort by (modulus, arg) for a deterministic order
        zs.sort_by(|(a, _), (b, _)| {
            let (ma, mb) = (a.abs().to_f64(), b.abs().to_f64());
            ma.partial_cmp(&mb)
                .unwrap()
                .then(a.arg().to_f64().partial_cmp(&b.arg().to_f64()).unwrap())
        });
        // modulus classes with relative grouping tolerance
        let mut infos = Vec::with_capacity(zs.len());
        let mut class = 0usize;
        let mut class_rep = zs[0].0.abs().to_f64();
        for (a, beta) in zs {
            let m = a.abs().to_f64();
            if m > class_rep * (1.0 + MODULUS_CLASS_TOL) {
                class += 1;
                class_rep = m;
            }
            infos.push(ZeroInfo {
                a,
                beta,
                modulus_class: class,
                dominance: if class == 0 {
                    Dominance::Minimal
                } else {
                    Dominance::Unclassified
                },
                b_coeffs: Vec::new(),
            });
        }
        Ok(infos)
    }

    /// Distance from the zero `a` to the nearest *other* zero of g.
    fn nearest_zero_gap(&self, a: &Cx) -> f64 {
        let ac = a.to_c64();
        match &self.kind {
            Kind::Poly { roots, .. } => roots
                .iter()
                .map(|(r, _)| (r - ac).norm())
                .filter(|d| *d > 0.0)
                .fold(f64::INFINITY, f64::min),
            Kind::Catalog(cat) => match cat {
                Catalog::OneMinusT => f64::INFINITY,
                Catalog::Euler { .. } | Catalog::Bernoulli { .. } => 2.0 * std::f64::consts::PI,
                Catalog::BesselJ0 => {
                    let m = ac.norm();
                    let mut k = 1u32;
                    while bessel_j0_zero_guess(k) < m - 0.5 {
                        k += 1;
                    }
                    let jk = bessel_j0_zero_guess(k);
                    let mut gap = (bessel_j0_zero_guess(k + 1) - jk).min(2.0 * jk);
                    if k > 1 {
                        gap = gap.min(jk - bessel_j0_zero_guess(k - 1));
                    }
                    gap
                }
            },
        }
    }

    // -----------------------------------------------------------------------
    // Singular parts of 1/(t g(t))
    // -----------------------------------------------------------------------

    /// Laurent coefficients [b_{a,1}, ..., b_{a,beta}] of the principal part
    /// of 1/(t·g(t)) at the zero described by `z`. Simple zeros use the
    /// residue formula 1/(a·g′(a)); higher multiplicities fall back to
    /// contour quadrature.
    pub fn singular_part_coeffs(&self, z: &ZeroInfo, prec: u32) -> Result<Vec<Cx>> {
        if prec < MIN_PREC {
            return Err(Error::PrecisionTooLow {
                prec,
                min: MIN_PREC,
            });
        }
        if z.beta == 1 {
            let a = z.a.with_prec(prec);
            let d = self.eval_deriv(&a, prec);
            let denom = &a * &d;
            return Ok(vec![denom.recip()]);
        }
        self.singular_part_coeffs_quadrature(z, prec)
    }

    /// Quadrature route for the Laurent coefficients: trapezoid sums of
    /// (t−a)^{m-1}/(t·g(t)) on a circle around a, node count doubled until two
    /// successive levels agree to 2^{−prec/2}. Kept public as the independent
    /// oracle for the residue formula.
    pub fn singular_part_coeffs_quadrature(&self, z: &ZeroInfo, prec: u32) -> Result<Vec<Cx>> {
        let wprec = prec + 64;
        let a = z.a.with_prec(wprec);
        let gap = self.nearest_zero_gap(&z.a);
        let radius = (z.a.abs().to_f64().min(gap)) / 4.0;
        if !radius.is_finite() || radius <= 0.0 || radius < 2f64.powi(-((prec / 2).min(900) as i32))
        {
            return Err(Error::RadiusUnderflow {
                re: z.a.re.to_f64(),
                im: z.a.im.to_f64(),
            });
        }
        let beta = z.beta as usize;
        // comparisons stay in Float space: 2^-(prec/2) underflows f64 early
        let tol = Float::with_val(64, Float::i_exp(1, -((prec / 2) as i32)));
        let mut prev: Option<Vec<Cx>> = None;
        let mut nodes = 16usize;
        while nodes <= 4096 {
            let cur = laurent_trapezoid(self, &a, radius, beta, nodes, wprec);
            if let Some(p) = &prev {
                let mut scale = Float::with_val(64, Float::i_exp(1, -(prec as i32)));
                for c in &cur {
                    let m = c.abs();
                    if m > scale {
                        scale = Float::with_val(64, m);
                    }
                }
                let bound = Float::with_val(64, &tol * &scale);
                let ok = cur.iter().zip(p.iter()).all(|(c, q)| c.dist(q) <= bound);
                if ok {
                    return Ok(cur.into_iter().map(|c| c.with_prec(prec)).collect());
                }
            }
            prev = Some(cur);
            nodes *= 2;
        }
        Err(Error::QuadratureNonConvergence { nodes: 4096 })
    }

    /// Evaluate the regular part g₁(t) = 1/(t·g(t)) − Σ_{|a|<rho} s_a(t).
    ///
    /// The 1/t pole at the origin is kept (t = 0 is rejected); at the zeros of
    /// g the removable singularity is filled by a 4-point average.
    pub fn eval_g1(&self, rho: f64, t: &Cx, prec: u32) -> Result<Cx> {
        if prec < MIN_PREC {
            return Err(Error::PrecisionTooLow {
                prec,
                min: MIN_PREC,
            });
        }
        if t.is_zero() {
            return Err(Error::InvalidArgument(
                "g1 keeps the 1/t singularity of 1/(t g(t)); evaluate at t != 0".into(),
            ));
        }
        let wprec = 2 * prec;
        let mut zeros = self.zeros_up_to(rho, wprec)?;
        for z in &mut zeros {
            z.b_coeffs = self.singular_part_coeffs(z, wprec)?;
        }
        let t = t.with_prec(wprec);
        let near = zeros
            .iter()
            .map(|z| t.dist(&z.a).to_f64())
            .fold(f64::INFINITY, f64::min);
        let direct = |u: &Cx| -> Cx {
            let g = self.eval(u, wprec);
            let mut v = (u * &g).recip();
            for z in &zeros {
                v = &v - &eval_singular_part(z, u);
            }
            v
        };
        let out = if near > 2f64.powi(-((prec / 8).min(900) as i32)) {
            direct(&t)
        } else {
            // removable point: average of samples at t ± h and t ± ih kills
            // the h^2 term, leaving an O(h^4) = O(2^-prec) defect
            let mut h = Float::with_val(wprec, Float::i_exp(1, -((prec / 4) as i32)));
            h *= t.abs().to_f64().max(1.0);
            let h = Cx::from_float(h, Float::new(wprec));
            let ih = Cx::from_float(Float::new(wprec), h.re.clone());
            let mut acc = direct(&(&t + &h));
            acc = &acc + &direct(&(&t - &h));
            acc = &acc + &direct(&(&t + &ih));
            acc = &acc + &direct(&(&t - &ih));
            acc.scale_f64(0.25)
        };
        Ok(out.with_prec(prec))
    }
}

/// Σ_m b_m/(t−a)^m for one zero's stored coefficients.
pub fn eval_singular_part(z: &ZeroInfo, t: &Cx) -> Cx {
    let prec = t.prec().max(z.a.prec());
    let d = &t.with_prec(prec) - &z.a.with_prec(prec);
    let mut acc = Cx::zero(prec);
    for (m, b) in z.b_coeffs.iter().enumerate() {
        acc = &acc + &(&b.with_prec(prec) / &d.powi(m as i64 + 1));
    }
    acc
}

fn check_rho_margin(rho: f64, modulus: f64) -> Result<()> {
    if (rho - modulus).abs() <= rho * RHO_MARGIN {
        return Err(Error::RhoCollidesZeroModulus { rho, modulus });
    }
    Ok(())
}

fn laurent_trapezoid(
    gf: &GeneratingFunction,
    a: &Cx,
    radius: f64,
    beta: usize,
    nodes: usize,
    prec: u32,
) -> Vec<Cx> {
    // b_m = (1/N) Σ_j f(a + r e^{iθ_j}) (r e^{iθ_j})^m, θ_j = 2πj/N
    let r = Float::with_val(prec, radius);
    let two_pi = bigc::pi(prec) * 2u32;
    let mut sums = vec![Cx::zero(prec); beta];
    for j in 0..nodes {
        let theta = Float::with_val(prec, &two_pi * j as u32) / nodes as u32;
        let mut sin = Float::new(prec);
        let mut cos = Float::new(prec);
        (&mut sin, &mut cos).assign(theta.sin_cos_ref());
        let e = Cx::from_float(cos, sin);
        let re = e.scale(&r);
        let t = a + &re;
        let g = gf.eval(&t, prec);
        let f = (&t * &g).recip();
        let mut w = re.clone();
        for s in sums.iter_mut().take(beta) {
            *s = &*s + &(&f * &w);
            w = &w * &re;
        }
    }
    sums.into_iter()
        .map(|s| s.scale_f64(1.0 / nodes as f64))
        .collect()
}

// ---------------------------------------------------------------------------
// Catalog series kernels
// ---------------------------------------------------------------------------

fn catalog_coeffs(cat: &Catalog, count: usize, prec: u32) -> Vec<Cx> {
    let n = count + 1;
    match cat {
        Catalog::OneMinusT => {
            let mut c = vec![Cx::zero(prec); n];
            c[0] = Cx::one(prec);
            if n > 1 {
                c[1] = -&Cx::one(prec);
            }
            c
        }
        Catalog::Euler { order } => {
            // (e^t + 1)/2 = 1 + Σ_{k≥1} t^k/(2 k!)
            let mut base = Vec::with_capacity(n);
            let mut fact = Float::with_val(prec, 1);
            base.push(Cx::one(prec));
            for k in 1..n {
                fact *= k as u32;
                let mut v = Float::with_val(prec, 1);
                v /= &fact;
                v /= 2;
                base.push(Cx::real(v));
            }
            series_pow(&base, *order, n, prec)
        }
        Catalog::Bernoulli { order } => {
            // (e^t − 1)/t = Σ_{k≥0} t^k/(k+1)!
            let mut base = Vec::with_capacity(n);
            let mut fact = Float::with_val(prec, 1);
            for k in 0..n {
                fact *= (k + 1) as u32;
                let mut v = Float::with_val(prec, 1);
                v /= &fact;
                base.push(Cx::real(v));
            }
            series_pow(&base, *order, n, prec)
        }
        Catalog::BesselJ0 => {
            let mut c = vec![Cx::zero(prec); n];
            let mut term = Float::with_val(prec, 1);
            c[0] = Cx::one(prec);
            let mut k = 1usize;
            while 2 * k < n {
                // term_k = (-1)^k / (4^k (k!)^2)
                term /= 4u32;
                term /= k as u32;
                term /= k as u32;
                let mut v = term.clone();
                if k % 2 == 1 {
                    v = -v;
                }
                c[2 * k] = Cx::real(v);
                k += 1;
            }
            c
        }
    }
}

fn series_pow(base: &[Cx], m: u32, n: usize, prec: u32) -> Vec<Cx> {
    let mut acc = vec![Cx::zero(prec); n];
    acc[0] = Cx::one(prec);
    for _ in 0..m {
        acc = series_mul(&acc, base, n, prec);
    }
    acc
}

fn series_mul(a: &[Cx], b: &[Cx], n: usize, prec: u32) -> Vec<Cx> {
    let mut out = vec![Cx::zero(prec); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

/// (e^t − 1)/t with the removable singularity at 0 filled by series.
fn bernoulli_base(t: &Cx, prec: u32) -> Cx {
    if t.abs().to_f64() < 0.5 {
        // Σ t^k/(k+1)!, term bound tracked in log2 space
        let mut acc = Cx::zero(prec);
        let mut pw = Cx::one(prec);
        let mut fact = Float::with_val(prec, 1);
        let stop = -((prec as f64) + 20.0);
        let lt = t.abs().to_f64().log2();
        let mut lmag = 0f64;
        let mut k = 0usize;
        loop {
            fact *= (k + 1) as u32;
            lmag -= ((k + 1) as f64).log2();
            let term = pw.unscale(&fact);
            acc = &acc + &term;
            if lmag < stop && k > 2 {
                break;
            }
            pw = &pw * t;
            lmag += lt;
            k += 1;
            if k > 4 * prec as usize {
                break;
            }
        }
        acc
    } else {
        let num = &t.exp() - &Cx::one(prec);
        &num / t
    }
}

fn bernoulli_base_deriv(t: &Cx, prec: u32) -> Cx {
    if t.abs().to_f64() < 0.5 {
        // Σ_{k≥1} k t^{k-1}/(k+1)!
        let mut acc = Cx::zero(prec);
        let mut pw = Cx::one(prec);
        let mut fact = Float::with_val(prec, 2); // (k+1)! at k=1
        let stop = -((prec as f64) + 20.0);
        let lt = t.abs().to_f64().log2();
        let mut lmag = -1f64; // log2(1/2)
        let mut k = 1usize;
        loop {
            let term = pw.unscale(&fact).scale_f64(k as f64);
            acc = &acc + &term;
            if lmag + (k as f64).log2() < stop && k > 2 {
                break;
            }
            pw = &pw * t;
            k += 1;
            fact *= (k + 1) as u32;
            lmag += lt - ((k + 1) as f64).log2();
            if k > 4 * prec as usize {
                break;
            }
        }
        acc
    } else {
        // d/dt (e^t - 1)/t = (e^t (t - 1) + 1)/t^2
        let e = t.exp();
        let num = &(&e * &(t - &Cx::one(prec))) + &Cx::one(prec);
        &num / &(t * t)
    }
}

/// J0(t) by its Taylor series, truncated once the term bound clears 2^-(prec+20).
pub fn bessel_j0_series(t: &Cx, prec: u32) -> Cx {
    let half = t.scale_f64(0.5);
    let q = &half * &half; // (t/2)^2
    let mut acc = Cx::one(prec);
    let mut term = Cx::one(prec);
    let qabs = q.abs().to_f64();
    let lq = qabs.log2();
    let stop = -((prec as f64) + 20.0);
    let mut lmag = 0f64;
    let mut k = 1u32;
    loop {
        term = -&(&term * &q).unscale_u32(k).unscale_u32(k);
        acc = &acc + &term;
        lmag += lq - 2.0 * (k as f64).log2();
        if lmag < stop && k as f64 > qabs.sqrt() + 2.0 {
            break;
        }
        k += 1;
        if k > 8 * prec {
            break;
        }
    }
    acc
}

/// J1(t) by series: Σ (−1)^k (t/2)^{2k+1}/(k!(k+1)!).
pub fn bessel_j1_series(t: &Cx, prec: u32) -> Cx {
    let half = t.scale_f64(0.5);
    let q = &half * &half;
    let mut term = half.clone();
    let mut acc = half;
    let qabs = q.abs().to_f64();
    let lq = qabs.log2();
    let stop = -((prec as f64) + 20.0);
    let mut lmag = qabs.sqrt().log2();
    let mut k = 1u32;
    loop {
        term = -&(&term * &q).unscale_u32(k).unscale_u32(k + 1);
        acc = &acc + &term;
        lmag += lq - (k as f64 * (k as f64 + 1.0)).log2();
        if lmag < stop && k as f64 > qabs.sqrt() + 2.0 {
            break;
        }
        k += 1;
        if k > 8 * prec {
            break;
        }
    }
    acc
}

/// McMahon-expansion initial guess for the k-th positive zero of J0.
fn bessel_j0_zero_guess(k: u32) -> f64 {
    let b = (k as f64 - 0.25) * std::f64::consts::PI;
    b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b.powi(3)) + 3779.0 / (15360.0 * b.powi(5))
}

/// k-th positive zero of J0, Newton-refined to full working precision.
pub fn bessel_j0_zero(k: u32, prec: u32) -> Float {
    let mut x = Float::with_val(prec, bessel_j0_zero_guess(k));
    // Newton on J0: x <- x + J0(x)/J1(x); doubling digits per step
    let steps = (prec as f64 / 40.0).log2().ceil().max(1.0) as usize + 2;
    for _ in 0..steps {
        let xc = Cx::from_float(x.clone(), Float::new(prec));
        let j0 = bessel_j0_series(&xc, prec);
        let j1 = bessel_j1_series(&xc, prec);
        let corr = Float::with_val(prec, &j0.re / &j1.re);
        x += corr;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close_f64(a: &Cx, re: f64, im: f64, tol: f64) -> bool {
        (a.to_c64() - c64(re, im)).norm() <= tol
    }

    #[test]
    fn taylor_one_minus_t() {
        let g = GeneratingFunction::one_minus_t().unwrap();
        let c = g.taylor_coeffs(4, 128).unwrap();
        let want = [1.0, -1.0, 0.0, 0.0, 0.0];
        for (k, w) in want.iter().enumerate() {
            assert!(close_f64(&c[k], *w, 0.0, 0.0), "k={k}");
        }
    }

    #[test]
    fn taylor_euler() {
        let g = GeneratingFunction::euler(1).unwrap();
        let c = g.taylor_coeffs(2, 128).unwrap();
        assert!(close_f64(&c[0], 1.0, 0.0, 1e-30));
        assert!(close_f64(&c[1], 0.5, 0.0, 1e-30));
        assert!(close_f64(&c[2], 0.25, 0.0, 1e-30));
    }

    #[test]
    fn taylor_bessel() {
        let g = GeneratingFunction::bessel_j0().unwrap();
        let c = g.taylor_coeffs(4, 128).unwrap();
        assert!(close_f64(&c[0], 1.0, 0.0, 0.0));
        assert!(close_f64(&c[1], 0.0, 0.0, 0.0));
        assert!(close_f64(&c[2], -0.25, 0.0, 0.0));
        assert!(close_f64(&c[3], 0.0, 0.0, 0.0));
        assert!(close_f64(&c[4], 1.0 / 64.0, 0.0, 0.0));
    }

    #[test]
    fn taylor_rejects_low_precision() {
        let g = GeneratingFunction::one_minus_t().unwrap();
        assert!(matches!(
            g.taylor_coeffs(2, 32),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn poly_rejects_root_at_origin() {
        assert!(GeneratingFunction::poly(vec![(c64(0.0, 0.0), 1)], c64(1.0, 0.0)).is_err());
    }

    #[test]
    fn taylor_two_precisions_agree() {
        let g = GeneratingFunction::euler(2).unwrap();
        let lo = g.taylor_coeffs(20, 128).unwrap();
        let hi = g.taylor_coeffs(20, 256).unwrap();
        for (a, b) in lo.iter().zip(hi.iter()) {
            let d = a.dist(&b.with_prec(128)).to_f64();
            let scale = a.abs().to_f64().max(1e-30);
            assert!(d / scale < 1e-36, "d={d}");
        }
    }

    #[test]
    fn zeros_euler() {
        let g = GeneratingFunction::euler(1).unwrap();
        let zs = g.zeros_up_to(4.0, 128).unwrap();
        assert_eq!(zs.len(), 2);
        for z in &zs {
            assert_eq!(z.beta, 1);
            assert_eq!(z.modulus_class, 0);
            assert_eq!(z.dominance, Dominance::Minimal);
            assert!((z.a.abs().to_f64() - std::f64::consts::PI).abs() < 1e-30);
            assert!(z.a.re.to_f64().abs() < 1e-30);
        }
        assert!(
            (zs[0].approx() + zs[1].approx()).norm() < 1e-30,
            "conjugate pair"
        );
    }

    #[test]
    fn zeros_bessel() {
        let g = GeneratingFunction::bessel_j0().unwrap();
        let zs = g.zeros_up_to(3.0, 192).unwrap();
        assert_eq!(zs.len(), 2);
        // first J0 zero to nine digits
        for z in &zs {
            assert!((z.a.abs().to_f64() - 2.404825558).abs() < 1e-8);
        }
    }

    #[test]
    fn zeros_cubic_example() {
        // (t-1)(t^2+2): zeros 1, ±i√2, classes r0 = 1, r1 = √2
        let g = GeneratingFunction::poly(
            vec![
                (c64(1.0, 0.0), 1),
                (c64(0.0, 2f64.sqrt()), 1),
                (c64(0.0, -(2f64.sqrt())), 1),
            ],
            c64(1.0, 0.0),
        )
        .unwrap();
        let zs = g.zeros_up_to(2.0, 128).unwrap();
        assert_eq!(zs.len(), 3);
        assert_eq!(zs[0].modulus_class, 0);
        assert!((zs[0].approx() - c64(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(zs[1].modulus_class, 1);
        assert_eq!(zs[2].modulus_class, 1);
    }

    #[test]
    fn zeros_rho_collision_rejected() {
        let g = GeneratingFunction::euler(1).unwrap();
        assert!(matches!(
            g.zeros_up_to(std::f64::consts::PI * (1.0 + 1e-8), 128),
            Err(Error::RhoCollidesZeroModulus { .. })
        ));
    }

    #[test]
    fn zeros_none_below_rho() {
        let g = GeneratingFunction::one_minus_t().unwrap();
        assert!(matches!(
            g.zeros_up_to(0.5, 128),
            Err(Error::NoZerosBelowRho(_))
        ));
    }

    #[test]
    fn singular_part_one_minus_t() {
        // 1/(t(1-t)) = 1/t - 1/(t-1)  =>  b = [-1]
        let g = GeneratingFunction::one_minus_t().unwrap();
        let zs = g.zeros_up_to(2.0, 128).unwrap();
        let b = g.singular_part_coeffs(&zs[0], 128).unwrap();
        assert_eq!(b.len(), 1);
        assert!(close_f64(&b[0], -1.0, 0.0, 1e-30));
    }

    #[test]
    fn singular_part_double_root() {
        // 1/(t(t-1)^2) = 1/t - 1/(t-1) + 1/(t-1)^2  =>  b = [-1, 1]
        let g = GeneratingFunction::poly(vec![(c64(1.0, 0.0), 2)], c64(1.0, 0.0)).unwrap();
        let zs = g.zeros_up_to(2.0, 192).unwrap();
        assert_eq!(zs[0].beta, 2);
        let b = g.singular_part_coeffs(&zs[0], 192).unwrap();
        assert_eq!(b.len(), 2);
        assert!(close_f64(&b[0], -1.0, 0.0, 1e-25), "got {:?}", b[0]);
        assert!(close_f64(&b[1], 1.0, 0.0, 1e-25), "got {:?}", b[1]);
    }

    #[test]
    fn singular_part_euler_residue_vs_quadrature() {
        // residue: 1/(i*pi*g'(i*pi)) = 2i/pi
        let g = GeneratingFunction::euler(1).unwrap();
        let zs = g.zeros_up_to(4.0, 192).unwrap();
        let z = zs.iter().find(|z| z.a.im.to_f64() > 0.0).unwrap();
        let b = g.singular_part_coeffs(z, 192).unwrap();
        let want = 2.0 / std::f64::consts::PI;
        assert!(close_f64(&b[0], 0.0, want, 1e-25), "got {:?}", b[0]);
        let bq = g.singular_part_coeffs_quadrature(z, 192).unwrap();
        assert!(b[0].dist(&bq[0]).to_f64() < 1e-25, "routes disagree");
    }

    #[test]
    fn residue_law_random_cubic() {
        // dual-route invariant on a non-symmetric polynomial
        let g = GeneratingFunction::poly(
            vec![(c64(1.2, 0.7), 1), (c64(-0.9, 1.4), 1), (c64(2.0, -0.3), 1)],
            c64(0.5, 0.25),
        )
        .unwrap();
        let zs = g.zeros_up_to(3.0, 192).unwrap();
        for z in &zs {
            let res = g.singular_part_coeffs(z, 192).unwrap();
            let quad = g.singular_part_coeffs_quadrature(z, 192).unwrap();
            let rel = res[0].dist(&quad[0]).to_f64() / res[0].abs().to_f64();
            assert!(rel < 1e-25, "rel={rel}");
        }
    }

    #[test]
    fn conjugation_symmetry_of_b_coeffs() {
        let g = GeneratingFunction::euler(1).unwrap();
        let zs = g.zeros_up_to(4.0, 128).unwrap();
        let b0 = g.singular_part_coeffs(&zs[0], 128).unwrap();
        let b1 = g.singular_part_coeffs(&zs[1], 128).unwrap();
        // zeros are conjugates; coefficients must conjugate too
        assert!(b0[0].dist(&b1[0].conj()).to_f64() < 1e-30);
    }

    #[test]
    fn eval_g_one_minus_t() {
        let g = GeneratingFunction::one_minus_t().unwrap();
        let v = g.eval(&Cx::from_f64(128, 3.0, 0.0), 128);
        assert!(close_f64(&v, -2.0, 0.0, 0.0));
    }

    #[test]
    fn eval_g1_keeps_pole_at_origin_only() {
        // for g = 1-t: 1/(t(1-t)) = 1/t - 1/(t-1) and s_1(t) = -1/(t-1),
        // so g1(t) = 1/t exactly (the origin pole stays by definition)
        let g = GeneratingFunction::one_minus_t().unwrap();
        let v = g.eval_g1(2.0, &Cx::from_f64(192, 0.5, 0.0), 192).unwrap();
        assert!(close_f64(&v, 2.0, 0.0, 1e-45), "got {:?}", v);
        // right at the removable point t = 1 the filled value is 1/t = 1
        let v1 = g.eval_g1(2.0, &Cx::from_f64(192, 1.0, 0.0), 192).unwrap();
        assert!(close_f64(&v1, 1.0, 0.0, 1e-20), "got {v1:?}");
    }

    #[test]
    fn eval_g1_rejects_origin() {
        let g = GeneratingFunction::one_minus_t().unwrap();
        assert!(g.eval_g1(2.0, &Cx::zero(128), 128).is_err());
    }

    #[test]
    fn eval_g1_euler_continuous_at_zero_of_g() {
        let g = GeneratingFunction::euler(1).unwrap();
        let pi = std::f64::consts::PI;
        let at = g.eval_g1(4.0, &Cx::from_f64(256, 0.0, pi), 256).unwrap();
        let nearby = g
            .eval_g1(4.0, &Cx::from_f64(256, 0.0, pi + 1e-5), 256)
            .unwrap();
        assert!(at.is_finite());
        assert!(
            at.dist(&nearby).to_f64() < 1e-3,
            "continuity: {at:?} vs {nearby:?}"
        );
    }

    #[test]
    fn reciprocal_consistency_at_0_3() {
        // Σ g_j (0.3)^j against eval_g, truncation driven by factorial decay
        for g in [
            GeneratingFunction::euler(1).unwrap(),
            GeneratingFunction::euler(3).unwrap(),
            GeneratingFunction::bernoulli(2).unwrap(),
            GeneratingFunction::bessel_j0().unwrap(),
            GeneratingFunction::one_minus_t().unwrap(),
        ] {
            let prec = 192u32;
            let count = 220usize; // 0.3^k/k!-type tails are < 2^-prec long before this
            let c = g.taylor_coeffs(count, prec).unwrap();
            let t = Cx::from_f64(prec, 0.3, 0.0);
            let mut acc = Cx::zero(prec);
            for k in (0..=count).rev() {
                acc = &(&acc * &t) + &c[k];
            }
            let direct = g.eval(&t, prec);
            let tol = 2f64.powi(-(prec as i32) + 10);
            assert!(
                acc.dist(&direct).to_f64() <= tol,
                "{:?}: {:e}",
                g.kind(),
                acc.dist(&direct).to_f64()
            );
        }
    }

    #[test]
    fn bessel_zero_refinement_hits_known_value() {
        let z1 = bessel_j0_zero(1, 128).to_f64();
        assert!((z1 - 2.404825557695773).abs() < 1e-13);
        let z2 = bessel_j0_zero(2, 128).to_f64();
        assert!((z2 - 5.520078110286311).abs() < 1e-12);
        let z3 = bessel_j0_zero(3, 128).to_f64();
        assert!((z3 - 8.653727912911013).abs() < 1e-12);
    }

    #[test]
    fn genfun_doc_roundtrip() {
        let json = r#"{"kind":"catalog","name":"euler","order":2}"#;
        let doc: GenFunDoc = serde_json::from_str(json).unwrap();
        let g = GeneratingFunction::from_doc(&doc).unwrap();
        assert!(matches!(
            g.kind(),
            Kind::Catalog(Catalog::Euler { order: 2 })
        ));
        let json2 = r#"{"kind":"poly","roots":[{"re":1.0,"im":0.0,"mult":1}],"scale":{"re":-1.0,"im":0.0}}"#;
        let doc2: GenFunDoc = serde_json::from_str(json2).unwrap();
        let g2 = GeneratingFunction::from_doc(&doc2).unwrap();
        assert!(g2.has_real_coeffs());
    }
}
