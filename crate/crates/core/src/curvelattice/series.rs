use super::CurveData;
use crate::coeffring::QQ;
use crate::powerseries::UniSeries;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};

/// Coefficients c_k (k ≥ 2) of ℘(z) = z^{-2} + Σ c_k z^{2k-2}, up to `kmax`.
pub fn wp_coefficients(g2: &Rational, g3: &Rational, kmax: usize) -> Vec<Rational> {
    let mut c = vec![Rational::new(); kmax.max(3) + 1];
    c[2] = Rational::from(g2 / 20u32);
    c[3] = Rational::from(g3 / 28u32);
    for k in 4..=kmax {
        let mut s = Rational::new();
        for m in 2..=k - 2 {
            s += Rational::from(&c[m] * &c[k - m]);
        }
        c[k] = s * Rational::from((3, ((2 * k + 1) * (k - 3)) as i64));
    }
    c.truncate(kmax + 1);
    c
}

/// Laurent expansion of ℘ known through `z^order`.
pub fn wp_series(curve: &CurveData, order: i64) -> Result<UniSeries<QQ>> {
    if order < 4 {
        return Err(Error::Precondition("wp_series needs order >= 4".into()));
    }
    let (g2, g3) = curve.rational_invariants()?;
    let kmax = ((order + 2) / 2) as usize;
    let c = wp_coefficients(&g2, &g3, kmax);
    Ok(UniSeries::from_fn(&QQ, -2, order, |k| {
        if k == -2 {
            Rational::from(1)
        } else if k >= 2 && k % 2 == 0 {
            c[(k as usize + 2) / 2].clone()
        } else {
            Rational::new()
        }
    }))
}

/// σ(z) known through `z^order`, from log(σ/z)'' = −(℘ − z^{-2}).
pub fn sigma_series(curve: &CurveData, order: i64) -> Result<UniSeries<QQ>> {
    if order < 1 {
        return Err(Error::Precondition("sigma_series needs order >= 1".into()));
    }
    let wp = wp_series(curve, (order - 1).max(4))?;
    let regular = UniSeries::from_fn(&QQ, 0, order - 3, |k| wp.coeff(k));
    let log_unit = regular.integral()?.integral()?.neg();
    Ok(log_unit.exp()?.shift(1).truncate(order))
}

/// θ(z) = exp(−e2* z²/2)·σ(z) through `z^order`.
pub fn theta_series(curve: &CurveData, order: i64) -> Result<UniSeries<QQ>> {
    let e2 = curve.e2_star_rational()?;
    let sigma = sigma_series(curve, order)?;
    let half = Rational::from(-e2 / 2u32);
    let gauss = UniSeries::new(&QQ, vec![Rational::new(), Rational::new(), half], order - 1).exp()?;
    Ok(sigma.mul(&gauss).truncate(order))
}

/// U(z) = θ(z)/z as a unit power series known through `z^order`.
pub fn theta_unit(curve: &CurveData, order: i64) -> Result<UniSeries<QQ>> {
    let e2 = curve.e2_star_rational()?;
    let (g2, g3) = curve.rational_invariants()?;
    let c = wp_coefficients(&g2, &g3, (order as usize / 2 + 2).max(3));
    let log_u = UniSeries::from_fn(&QQ, 0, order, |k| {
        if k == 2 {
            -Rational::from(&e2 / 2u32)
        } else if k >= 4 && k % 2 == 0 {
            let kk = (k / 2) as usize;
            -Rational::from(&c[kk] / ((2 * kk * (2 * kk - 1)) as u32))
        } else {
            Rational::new()
        }
    });
    log_u.exp()
}

/// Formal logarithm λ(t) in the parameter t = −2x/y.
#[derive(Clone, Debug)]
pub struct FormalLog {
    pub lambda: UniSeries<QQ>,
    pub curve: CurveData,
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// λ(t) = Σ (2m+3n)!/((m+2n)! m! n!) (−g2/4)^m (−g3/4)^n t^{4m+6n+1}/(4m+6n+1).
pub fn formal_log(curve: &CurveData, order: i64) -> Result<FormalLog> {
    let (g2, g3) = curve.rational_invariants()?;
    let a = Rational::from(-g2 / 4u32);
    let b = Rational::from(-g3 / 4u32);
    let mut coeffs = vec![Rational::new(); (order.max(0) + 1) as usize];
    let mut m = 0u32;
    while (4 * m + 1) as i64 <= order {
        let mut n = 0u32;
        while (4 * m + 6 * n + 1) as i64 <= order {
            let e = 4 * m + 6 * n + 1;
            let num = factorial(2 * m + 3 * n);
            let den = factorial(m + 2 * n) * factorial(m) * factorial(n) * e;
            let mut term = Rational::from((num, den));
            if m > 0 {
                term *= Rational::from(a.clone().pow(m as i32));
            }
            if n > 0 {
                term *= Rational::from(b.clone().pow(n as i32));
            }
            coeffs[e as usize] += term;
            n += 1;
        }
        m += 1;
    }
    Ok(FormalLog { lambda: UniSeries::new(&QQ, coeffs, order), curve: curve.clone() })
}

impl FormalLog {
    pub fn order(&self) -> i64 {
        self.lambda.order()
    }

    /// The formal exponential, i.e. the compositional inverse of λ.
    pub fn exponential(&self) -> Result<UniSeries<QQ>> {
        self.lambda.reversion()
    }
}
