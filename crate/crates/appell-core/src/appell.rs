//! Appell polynomial construction by truncated power-series reciprocal, the
//! linear scaling p_n(nx), and the asymptotic evaluators they are compared
//! against: partial sums S_n, the conformal factor φ, the correction
//! polynomials I and J, exterior and dominant-sum normalized forms, the
//! half-plane/outside-disk partial-sum approximations, and a contour identity
//! check.

use crate::attractor;
use crate::bigc::{self, Cx};
use crate::error::{Error, Result};
use crate::genfun::{Dominance, GeneratingFunction, ZeroInfo};
use crate::rootfind::default_precision;
use rug::Float;

/// Dense univariate polynomial with arbitrary-precision coefficients in
/// ascending degree order and a recorded working precision.
#[derive(Clone, Debug)]
pub struct BigPoly {
    pub coeffs: Vec<Cx>,
    pub prec: u32,
}

impl BigPoly {
    /// Trims trailing zero coefficients (keeping at least the constant).
    pub fn new(mut coeffs: Vec<Cx>, prec: u32) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Cx::zero(prec));
        }
        BigPoly { coeffs, prec }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Cx) -> Cx {
        let prec = self.prec.max(x.prec());
        let mut acc = self.coeffs.last().unwrap().with_prec(prec);
        for c in self.coeffs.iter().rev().skip(1) {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// Everything the dominant-sum asymptotics need: the generating function, the
/// cutoff rho, and all zeros below rho with their Laurent data and dominance
/// classification filled in.
#[derive(Clone, Debug)]
pub struct AsymptoticContext {
    pub gf: GeneratingFunction,
    pub rho: f64,
    pub zeros: Vec<ZeroInfo>,
    pub r0: f64,
}

impl AsymptoticContext {
    pub fn new(gf: GeneratingFunction, rho: f64, prec: u32) -> Result<Self> {
        let mut zeros = gf.zeros_up_to(rho, prec)?;
        for z in &mut zeros {
            z.b_coeffs = gf.singular_part_coeffs(z, prec)?;
        }
        attractor::classify_dominance(&mut zeros, attractor::DEFAULT_IMPROPER_TOL)?;
        let r0 = zeros[0].modulus();
        // Thm 5.6 hypothesis: rho larger than 1/|a| for every proper dominant
        for z in zeros
            .iter()
            .filter(|z| matches!(z.dominance, Dominance::Minimal | Dominance::ProperDominant))
        {
            if rho <= 1.0 / z.modulus() {
                return Err(Error::InvalidArgument(format!(
                    "rho = {rho} must exceed 1/|a| = {} for the dominant zero at {:?}",
                    1.0 / z.modulus(),
                    z.approx()
                )));
            }
        }
        Ok(AsymptoticContext { gf, rho, zeros, r0 })
    }

    /// Dominant zeros in the sense of the sum in the asymptotics
    /// (minimal, proper and improper alike).
    pub fn dominants(&self) -> Vec<&ZeroInfo> {
        self.zeros
            .iter()
            .filter(|z| {
                matches!(
                    z.dominance,
                    Dominance::Minimal | Dominance::ProperDominant | Dominance::ImproperDominant
                )
            })
            .collect()
    }

    /// Dominant zeros the attractor is built from (improper ones excluded).
    pub fn dominants_proper(&self) -> Vec<&ZeroInfo> {
        self.zeros
            .iter()
            .filter(|z| matches!(z.dominance, Dominance::Minimal | Dominance::ProperDominant))
            .collect()
    }
}

/// Coefficients c_0..c_n of 1/g(t) from the coefficients of g, by the
/// triangular recurrence c_k = −(1/g_0) Σ_{j=1..k} g_j c_{k−j}.
pub fn reciprocal_series(gcoeffs: &[Cx], n: usize, prec: u32) -> Result<Vec<Cx>> {
    if gcoeffs.is_empty() || gcoeffs[0].is_zero() {
        return Err(Error::GZeroAtOrigin);
    }
    let g0inv = gcoeffs[0].with_prec(prec).recip();
    let mut c = Vec::with_capacity(n + 1);
    c.push(g0inv.clone());
    for k in 1..=n {
        let mut acc = Cx::zero(prec);
        for j in 1..=k.min(gcoeffs.len() - 1) {
            if gcoeffs[j].is_zero() {
                continue;
            }
            acc = &acc + &(&gcoeffs[j].with_prec(prec) * &c[k - j]);
        }
        c.push(-&(&acc * &g0inv));
    }
    Ok(c)
}

/// p_n as a polynomial: coefficient of x^k is c_{n−k}/k!.
pub fn appell_poly(gf: &GeneratingFunction, n: usize, prec: u32) -> Result<BigPoly> {
    let g = gf.taylor_coeffs(n, prec)?;
    let c = reciprocal_series(&g, n, prec)?;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut fact = Float::with_val(prec, 1);
    for k in 0..=n {
        if k > 1 {
            fact *= k as u32;
        }
        coeffs.push(c[n - k].unscale(&fact));
    }
    Ok(BigPoly::new(coeffs, prec))
}

/// q(x) = p(n·x): multiplies coefficient k by n^k.
pub fn scaled_poly(p: &BigPoly, n: usize) -> BigPoly {
    let prec = p.prec;
    let mut npow = Float::with_val(prec, 1);
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| {
            if k > 0 {
                npow *= n as u32;
            }
            c.scale(&npow)
        })
        .collect();
    BigPoly::new(coeffs, prec)
}

/// S_n(x) = Σ_{k=0}^n x^k/k!, accumulated from k = n down to 0
/// (Horner form 1 + x(1 + x/2(1 + ...))).
pub fn partial_sum(n: usize, x: &Cx, prec: u32) -> Cx {
    let x = x.with_prec(prec);
    let mut acc = Cx::one(prec);
    for k in (1..=n).rev() {
        acc = &Cx::one(prec) + &(&acc * &x).unscale_u32(k as u32);
    }
    acc
}

/// φ(x) = x e^{1−x}.
pub fn phi(x: &Cx) -> Cx {
    let one = Cx::one(x.prec());
    x * &(&one - x).exp()
}

/// I_{m−1}(z) = Σ_{p=0}^{m−1} (−1)^p p! C(m−1,p) C(n+p−1,p) z^{−p}.
///
/// The binomial C(n+p−1,p) carries the degree dependence, so n is an explicit
/// argument here even though the usual notation for I hides it.
pub fn i_val(m_minus_1: u32, n: usize, z: &Cx) -> Result<Cx> {
    if z.is_zero() {
        return Err(Error::InvalidArgument("I_{m-1} needs z != 0".into()));
    }
    let prec = z.prec();
    let zinv = z.recip();
    let mut acc = Cx::zero(prec);
    let mut zp = Cx::one(prec);
    let mut pfact = Float::with_val(prec, 1);
    for p in 0..=m_minus_1 {
        if p > 0 {
            pfact *= p;
            zp = &zp * &zinv;
        }
        let c1 = bigc::binomial(m_minus_1 as u64, p as u64, prec);
        let c2 = bigc::binomial((n + p as usize - 1) as u64, p as u64, prec);
        let mut term = zp.scale(&pfact).scale(&c1).scale(&c2);
        if p % 2 == 1 {
            term = -&term;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// J(a;z) at z = n·x: Σ_{m=1}^{β} b_{a,m}/(m−1)! z^{m−1} I_{m−1}(a z).
pub fn j_val(z: &ZeroInfo, n: usize, x: &Cx, prec: u32) -> Result<Cx> {
    if x.is_zero() {
        return Err(Error::InvalidArgument("J(a;nx) needs x != 0".into()));
    }
    if z.b_coeffs.len() != z.beta as usize {
        return Err(Error::InvalidArgument(
            "ZeroInfo is missing its Laurent coefficients".into(),
        ));
    }
    let zz = x.with_prec(prec).scale_f64(n as f64);
    let az = &z.a.with_prec(prec) * &zz;
    let mut acc = Cx::zero(prec);
    let mut zpow = Cx::one(prec);
    let mut fact = Float::with_val(prec, 1);
    for m in 1..=z.beta {
        if m > 1 {
            fact *= m - 1;
            zpow = &zpow * &zz;
        }
        let i = i_val(m - 1, n, &az)?;
        let term = &z.b_coeffs[(m - 1) as usize].with_prec(prec) * &(&zpow * &i);
        acc = &acc + &term.unscale(&fact);
    }
    Ok(acc)
}

/// Cached evaluator for f_n(x) = √(2πn)·p_n(nx)/(ex)^n at one fixed n.
pub struct NormalizedEvaluator {
    scaled: BigPoly,
    n: usize,
    prec: u32,
}

impl NormalizedEvaluator {
    pub fn new(gf: &GeneratingFunction, n: usize, prec: u32) -> Result<Self> {
        if prec < default_precision(n) {
            return Err(Error::PrecisionTooLow {
                prec,
                min: default_precision(n),
            });
        }
        let p = appell_poly(gf, n, prec)?;
        Ok(NormalizedEvaluator {
            scaled: scaled_poly(&p, n),
            n,
            prec,
        })
    }

    pub fn scaled_poly(&self) -> &BigPoly {
        &self.scaled
    }

    pub fn eval(&self, x: &Cx) -> Result<Cx> {
        if x.is_zero() {
            return Err(Error::InvalidArgument("f_n(x) needs x != 0".into()));
        }
        let prec = self.prec;
        let x = x.with_prec(prec);
        let v = self.scaled.eval(&x);
        // (ex)^n in log form: exp(n(1 + ln x)) with the principal log
        let lnx = x.ln();
        let expo = (&Cx::one(prec) + &lnx).scale_f64(self.n as f64);
        let inv_pow = (-&expo).exp();
        let mut s = Float::with_val(prec, bigc::pi(prec));
        s *= 2 * self.n as u32;
        let s = s.sqrt();
        Ok((&v * &inv_pow).scale(&s))
    }
}

/// f_n(x) = √(2πn) p_n(nx)/(ex)^n evaluated exactly (one-shot convenience;
/// build a `NormalizedEvaluator` to amortize the polynomial construction).
pub fn exact_normalized(gf: &GeneratingFunction, n: usize, x: &Cx, prec: u32) -> Result<Cx> {
    NormalizedEvaluator::new(gf, n, prec)?.eval(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymMode {
    /// Exterior main term 1/g(1/x), valid for |x| > 1/r0.
    Exterior,
    /// 1/g(1/x) − √(2πn) Σ_dominant φ(ax)^{−n} J(a;nx).
    DominantSum,
}

/// Main-term asymptotic approximation of f_n(x); the error terms the theory
/// attaches are what validation measures, so they are never added here.
pub fn asym_normalized(
    ctx: &AsymptoticContext,
    n: usize,
    x: &Cx,
    mode: AsymMode,
    prec: u32,
) -> Result<Cx> {
    let x = x.with_prec(prec);
    if x.is_zero() {
        return Err(Error::InvalidArgument("x = 0 excluded".into()));
    }
    let xinv = x.recip();
    let g = ctx.gf.eval(&xinv, prec);
    if g.is_zero() {
        return Err(Error::InvalidArgument(
            "x = 1/a hits a zero of g; excluded from the main-term formula".into(),
        ));
    }
    let main = g.recip();
    match mode {
        AsymMode::Exterior => {
            if x.abs().to_f64() <= 1.0 / ctx.r0 {
                return Err(Error::InvalidArgument(format!(
                    "exterior mode needs |x| > 1/r0 = {}",
                    1.0 / ctx.r0
                )));
            }
            Ok(main)
        }
        AsymMode::DominantSum => {
            let mut sum = Cx::zero(prec);
            for z in ctx.dominants() {
                let ax = &z.a.with_prec(prec) * &x;
                let ph = phi(&ax);
                let j = j_val(z, n, &x, prec)?;
                sum = &sum + &(&ph.powi(-(n as i64)) * &j);
            }
            let mut s = Float::with_val(prec, bigc::pi(prec));
            s *= 2 * n as u32;
            let s = s.sqrt();
            Ok(&main - &sum.scale(&s))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SzegoRegion {
    /// Re w < 1: ratio ≈ 1 − (we^{1−w})^n/(√(2πn)(1−w)).
    Lhp,
    /// |w| > 1: ratio ≈ (we^{1−w})^n/(√(2πn)(w−1)).
    Outside,
}

/// Main-term approximation of S_{n−1}(nw)/e^{nw}.
pub fn szego_ratio_approx(n: usize, w: &Cx, region: SzegoRegion) -> Result<Cx> {
    let prec = w.prec();
    match region {
        SzegoRegion::Lhp => {
            if w.re.to_f64() >= 1.0 {
                return Err(Error::InvalidArgument("lhp mode needs Re w < 1".into()));
            }
        }
        SzegoRegion::Outside => {
            if w.abs().to_f64() <= 1.0 {
                return Err(Error::InvalidArgument("outside mode needs |w| > 1".into()));
            }
        }
    }
    let phin = phi(w).powi(n as i64);
    let mut s = Float::with_val(prec, bigc::pi(prec));
    s *= 2 * n as u32;
    let s = s.sqrt();
    let one = Cx::one(prec);
    match region {
        SzegoRegion::Lhp => {
            let denom = (&one - w).scale(&s);
            Ok(&one - &(&phin / &denom))
        }
        SzegoRegion::Outside => {
            let denom = (w - &one).scale(&s);
            Ok(&phin / &denom)
        }
    }
}

/// Both sides of the contour identity
/// (1/2πi)∮_{|t|=ε} (e^{xt}/t)^n dt/(t−w) = −w^{−n} S_{n−1}(wxn),
/// the left by trapezoid quadrature, the right by partial sum.
pub fn check_integral_identity(
    n: usize,
    w: &Cx,
    x: &Cx,
    eps: f64,
    nodes: usize,
    prec: u32,
) -> Result<(Cx, Cx)> {
    if n < 1 {
        return Err(Error::InvalidArgument("n >= 1 required".into()));
    }
    if !nodes.is_power_of_two() {
        return Err(Error::InvalidArgument(
            "nodes must be a power of two".into(),
        ));
    }
    let w = w.with_prec(prec);
    let x = x.with_prec(prec);
    if eps >= w.abs().to_f64() {
        return Err(Error::InvalidArgument("eps must satisfy eps < |w|".into()));
    }
    let two_pi = bigc::pi(prec) * 2u32;
    let mut lhs = Cx::zero(prec);
    for j in 0..nodes {
        let theta = Float::with_val(prec, &two_pi * j as u32) / nodes as u32;
        let mut sin = Float::new(prec);
        let mut cos = Float::new(prec);
        use rug::Assign;
        (&mut sin, &mut cos).assign(theta.sin_cos_ref());
        let t = Cx::from_float(cos, sin).scale_f64(eps);
        // (e^{xt}/t)^n / (t - w) · t  (the extra t comes from dt = it dθ)
        let ext = (&x * &t).scale_f64(n as f64).exp();
        let tn = t.powi(-(n as i64));
        let f = &(&ext * &tn) / &(&t - &w);
        lhs = &lhs + &(&f * &t);
    }
    let lhs = lhs.scale_f64(1.0 / nodes as f64);
    let arg = (&w * &x).scale_f64(n as f64);
    let rhs = -&(&w.powi(-(n as i64)) * &partial_sum(n - 1, &arg, prec));
    Ok((lhs, rhs))
}
