//! The two-variable Kronecker theta function Θ(z, w) = θ(z+w)/(θ(z)θ(w)):
//! exact expansion at the origin, composition with the formal logarithm,
//! p-adic denominator analysis, and numeric evaluation with identity checks.

mod numeric;

pub use numeric::{
    kronecker_numeric, kronecker_translated_numeric, torus_coefficients, verify_distribution,
    verify_generating_function, verify_kronecker_identity, CoefficientCheck, DistributionReport,
    GeneratingFunctionReport, IdentityReport, TorusCoefficients,
};

use crate::coeffring::QQ;
use crate::curvelattice::{formal_log, theta_unit, CurveData};
use crate::powerseries::{BiSeries, KroneckerExpansion, Var};
use crate::{Error, Result};
use rug::{Integer, Rational};
use serde_json::{json, Value};

/// Θ(z, w) = 1/z + 1/w + Σ c_{m,n} z^m w^n through total degree `order`.
#[derive(Clone, Debug)]
pub struct ThetaExpansion {
    pub expansion: KroneckerExpansion<QQ>,
    pub curve: CurveData,
    pub order: u32,
}

impl ThetaExpansion {
    pub fn coeff(&self, m: u32, n: u32) -> Result<Rational> {
        self.expansion.regular.get(m, n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_json(),
            "order": self.order,
            "expansion": self.expansion.to_json(),
        })
    }
}

/// V(z, w) = U(z+w)/(U(z)U(w)) through total degree `order`, where θ(z) = z·U(z).
fn unit_ratio(curve: &CurveData, order: u32) -> Result<BiSeries<QQ>> {
    let u = theta_unit(curve, order as i64)?;
    let ui = u.inv()?;
    let shifted = BiSeries::from_fn(&QQ, order, |m, n| {
        let c = u.coeff((m + n) as i64);
        if c.cmp0().is_eq() {
            return c;
        }
        c * Integer::from(Integer::binomial_u(m + n, n))
    });
    shifted.mul_uni(&ui, Var::Z)?.mul_uni(&ui, Var::W).map(|v| v.truncate(order))
}

/// Exact expansion of Θ at the origin. The regular part is
/// ((z+w)(V−1))/(zw), and the division must be exact.
pub fn kronecker_exact(curve: &CurveData, order: u32) -> Result<ThetaExpansion> {
    let n = order + 2;
    let v = unit_ratio(curve, n)?;
    let one = BiSeries::monomial(&QQ, 0, 0, n);
    let sum = BiSeries::from_terms(&QQ, n, [((1, 0), Rational::from(1)), ((0, 1), Rational::from(1))]);
    let numer = sum.mul(&v.sub(&one)).truncate(n);
    let regular = numer.exact_div(&BiSeries::monomial(&QQ, 1, 1, n))?.truncate(order);
    Ok(ThetaExpansion {
        expansion: KroneckerExpansion::new(Rational::from(1), Rational::from(1), regular),
        curve: curve.clone(),
        order,
    })
}

/// e*_{a,b}(0,0)/(a!·A^a), read off the coefficient of z^{b−1}w^a, which
/// carries the sign (−1)^{a+b−1}.
pub fn ek_from_expansion(exp: &ThetaExpansion, a: u32, b: u32) -> Result<Rational> {
    if b == 0 {
        return Err(Error::Precondition("b must be positive".into()));
    }
    if a + b - 1 > exp.order {
        return Err(Error::OrderExceeded { needed: (a + b - 1) as i64, available: exp.order as i64 });
    }
    let c = exp.coeff(b - 1, a)?;
    Ok(if (a + b - 1) % 2 == 1 { -c } else { c })
}

/// Θ̂(s, t) = Θ(λ(s), λ(t)); the starred form drops the polar part 1/s + 1/t.
#[derive(Clone, Debug)]
pub struct ComposedExpansion {
    pub expansion: KroneckerExpansion<QQ>,
    pub curve: CurveData,
    pub order: u32,
    pub starred: bool,
}

impl ComposedExpansion {
    pub fn coeff(&self, m: u32, n: u32) -> Result<Rational> {
        self.expansion.regular.get(m, n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve": self.curve.to_json(),
            "order": self.order,
            "starred": self.starred,
            "expansion": self.expansion.to_json(),
        })
    }
}

/// Substitutes z = λ(s), w = λ(t) into the expansion.
pub fn compose_formal(exp: &ThetaExpansion, order: u32, starred: bool) -> Result<ComposedExpansion> {
    if order > exp.order {
        return Err(Error::OrderExceeded { needed: order as i64, available: exp.order as i64 });
    }
    // 1/λ(s) through s^order needs λ through s^{order+2}
    let lambda = formal_log(&exp.curve, order as i64 + 2)?.lambda;
    let trunc = KroneckerExpansion::new(
        exp.expansion.polar_z.clone(),
        exp.expansion.polar_w.clone(),
        exp.expansion.regular.truncate(order),
    );
    let mut composed = trunc.compose(&lambda, &lambda)?;
    composed.regular = composed.regular.truncate(order);
    if starred {
        composed.polar_z = Rational::new();
        composed.polar_w = Rational::new();
    }
    Ok(ComposedExpansion { expansion: composed, curve: exp.curve.clone(), order, starred })
}

/// v_p(q), or `None` for q = 0.
pub fn rational_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.cmp0().is_eq() {
        return None;
    }
    let pz = Integer::from(p);
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    let vn = num.remove_factor_mut(&pz) as i64;
    let vd = den.remove_factor_mut(&pz) as i64;
    Some(vn - vd)
}

/// Least-squares line through (total degree, denominator exponent).
#[derive(Clone, Debug)]
pub struct DiagonalFit {
    /// 0 for ĉ_{m,m}; 1 for the band ĉ_{m,m+1} used when the diagonal vanishes.
    pub offset: u32,
    /// (m, total degree, denominator exponent).
    pub points: Vec<(u32, u32, u32)>,
    pub slope: f64,
    pub intercept: f64,
}

impl DiagonalFit {
    /// True when the exponents never decrease along m ≥ `m0`.
    pub fn nondecreasing_from(&self, m0: u32) -> bool {
        let tail: Vec<u32> = self.points.iter().filter(|(m, _, _)| *m >= m0).map(|(_, _, e)| *e).collect();
        tail.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn to_json(&self) -> Value {
        json!({
            "offset": self.offset,
            "slope": self.slope,
            "intercept": self.intercept,
            "points": self.points.iter().map(|(m, d, e)| json!([m, d, e])).collect::<Vec<_>>(),
        })
    }
}

/// Denominator exponents max(0, −v_p(ĉ_{m,n})) of a composed expansion.
#[derive(Clone, Debug)]
pub struct Heatmap {
    pub p: u64,
    pub order: u32,
    /// (m, n, denominator exponent) in order of total degree, then n.
    pub entries: Vec<(u32, u32, u32)>,
}

impl Heatmap {
    pub fn get(&self, m: u32, n: u32) -> Option<u32> {
        let d = m + n;
        if d > self.order {
            return None;
        }
        let idx = (d * (d + 1) / 2 + n) as usize;
        Some(self.entries[idx].2)
    }

    pub fn max_exponent(&self) -> u32 {
        self.entries.iter().map(|e| e.2).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,denom_exponent\n");
        for (m, n, e) in &self.entries {
            out.push_str(&format!("{m},{n},{e}\n"));
        }
        out
    }

    /// Slope of the denominator exponent along the diagonal against total
    /// degree, over nonzero diagonal entries with `lo ≤ 2m ≤ hi`. Falls back
    /// to the band ĉ_{m,m+1} when every diagonal coefficient is zero.
    pub fn fit_diagonal(&self, composed: &ComposedExpansion, lo: u32, hi: u32) -> Result<DiagonalFit> {
        let diag_zero = (0..=self.order / 2).all(|m| composed.coeff(m, m).map(|c| c.cmp0().is_eq()).unwrap_or(true));
        let offset = u32::from(diag_zero);
        let mut points = Vec::new();
        let mut m = lo.div_ceil(2);
        while 2 * m <= hi && 2 * m + offset <= self.order {
            let nonzero = composed.coeff(m, m + offset).map(|c| c.cmp0().is_ne()).unwrap_or(false);
            if let (true, Some(e)) = (nonzero, self.get(m, m + offset)) {
                points.push((m, 2 * m + offset, e));
            }
            m += 1;
        }
        if points.len() < 2 {
            return Err(Error::Precondition("fit window holds fewer than two diagonal entries".into()));
        }
        let n = points.len() as f64;
        let mx = points.iter().map(|p| f64::from(p.1)).sum::<f64>() / n;
        let my = points.iter().map(|p| f64::from(p.2)).sum::<f64>() / n;
        let sxy: f64 = points.iter().map(|p| (f64::from(p.1) - mx) * (f64::from(p.2) - my)).sum();
        let sxx: f64 = points.iter().map(|p| (f64::from(p.1) - mx).powi(2)).sum();
        let slope = sxy / sxx;
        Ok(DiagonalFit { offset, points, slope, intercept: my - slope * mx })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "order": self.order,
            "max_exponent": self.max_exponent(),
            "entries": self.entries.iter().map(|(m, n, e)| json!([m, n, e])).collect::<Vec<_>>(),
        })
    }
}

pub fn valuation_heatmap(composed: &ComposedExpansion, p: u64) -> Result<Heatmap> {
    let mut entries = Vec::new();
    for d in 0..=composed.order {
        for n in 0..=d {
            let c = composed.coeff(d - n, n)?;
            let e = rational_valuation(&c, p).map_or(0, |v| (-v).max(0) as u32);
            entries.push((d - n, n, e));
        }
    }
    Ok(Heatmap { p, order: composed.order, entries })
}

#[cfg(test)]
mod tests;
