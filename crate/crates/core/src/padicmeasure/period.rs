use crate::coeffring::{split_root, PadicScalar, Unramified, UnramifiedCtx, QQ};
use crate::curvelattice::{formal_log, CurveData};
use crate::powerseries::UniSeries;
use crate::{Error, Result};
use rug::{Integer, Rational};
use serde_json::{json, Value};
use std::sync::Arc;

/// Largest residue degree the solver will build a context for.
pub const DEFAULT_F_CAP: usize = 200;

/// Longest formal logarithm the solver will expand.
pub const MAX_LOG_ORDER: i64 = 1 << 20;

pub(crate) fn ipow(p: u64, k: u32) -> u64 {
    p.checked_pow(k).filter(|&x| x < 1 << 62).expect("p^k fits in 62 bits")
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn invmod(a: u64, m: u64) -> Option<u64> {
    Integer::from(a).invert(&Integer::from(m)).ok().and_then(|x| x.to_u64())
}

fn vp(q: &Rational, p: u64) -> Option<i64> {
    if q.cmp0().is_eq() {
        return None;
    }
    let pz = Integer::from(p);
    let mut n = q.numer().clone();
    let mut d = q.denom().clone();
    Some(n.remove_factor_mut(&pz) as i64 - d.remove_factor_mut(&pz) as i64)
}

fn pow(x: &PadicScalar, mut e: u64) -> Result<PadicScalar> {
    let mut base = x.clone();
    let mut acc = PadicScalar::from_integer(x.ctx(), &Integer::from(1));
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.checked_mul(&base)?;
        }
        e >>= 1;
        if e > 0 {
            base = base.checked_mul(&base)?;
        }
    }
    Ok(acc)
}

/// The Frobenius automorphism of W_N(F_{p^f}) as a matrix on the basis 1, X, …, X^{f−1}.
#[derive(Clone, Debug)]
pub struct Frobenius {
    ctx: Arc<UnramifiedCtx>,
    /// column j holds the coordinates of σ(X^j) mod p^cap
    columns: Vec<Vec<u64>>,
}

impl Frobenius {
    pub fn new(ctx: &Arc<UnramifiedCtx>) -> Result<Self> {
        let f = ctx.f();
        let cap = ctx.cap() as i64;
        let m = ipow(ctx.p(), ctx.cap());
        let ring = Unramified::new(ctx.clone());
        let modulus: Vec<PadicScalar> =
            ctx.modulus().iter().map(|&c| PadicScalar::from_integer(ctx, &Integer::from(c))).collect();
        // σ(X) is the root of P congruent to X^p; refine X^p by Newton's method
        let mut y = pow(&ring.generator(), ctx.p())?;
        for _ in 0..=(cap as u32).ilog2() + 1 {
            let mut val = PadicScalar::zero(ctx, cap);
            let mut der = PadicScalar::zero(ctx, cap);
            for c in modulus.iter().rev() {
                der = der.checked_mul(&y)?.checked_add(&val)?;
                val = val.checked_mul(&y)?.checked_add(c)?;
            }
            if val.is_zero() {
                break;
            }
            y = y.checked_sub(&val.checked_div(&der)?)?;
        }
        let mut columns = Vec::with_capacity(f);
        let mut power = PadicScalar::from_integer(ctx, &Integer::from(1));
        for _ in 0..f {
            columns.push(coords_mod(&power, m));
            power = power.checked_mul(&y)?;
        }
        Ok(Frobenius { ctx: ctx.clone(), columns })
    }

    pub fn ctx(&self) -> &Arc<UnramifiedCtx> {
        &self.ctx
    }

    /// Coordinate j of σ(X^i).
    pub fn entry(&self, j: usize, i: usize) -> u64 {
        self.columns[i][j]
    }

    pub fn apply(&self, a: &PadicScalar) -> PadicScalar {
        let (val, prec, unit) = a.parts();
        if unit.is_empty() {
            return a.clone();
        }
        let m = ipow(self.ctx.p(), (prec - val) as u32);
        let f = self.ctx.f();
        let mut out = vec![0u64; f];
        for (i, &c) in unit.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &e) in out.iter_mut().zip(&self.columns[i]) {
                *slot = (*slot + mulmod(c, e % m, m)) % m;
            }
        }
        PadicScalar::from_parts(&self.ctx, val, prec, out)
    }
}

fn coords_mod(x: &PadicScalar, m: u64) -> Vec<u64> {
    let (coords, shift) = x.coords();
    assert!(shift >= 0, "integral element expected");
    let mz = Integer::from(m);
    coords.iter().map(|c| Integer::from(c.modulo_ref(&mz)).to_u64().unwrap()).collect()
}

/// Dwork-type integrality check of exp(cλ(t)) − 1: every coefficient of
/// σ(c)λ(t^p) − p·c·λ(t) up to `degree` must lie in pW.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub degree: usize,
    /// smallest valuation seen (precision bound for coefficients known to be zero)
    pub min_valuation: i64,
    /// smallest absolute precision among the checked coefficients
    pub min_precision: i64,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "min_valuation": self.min_valuation,
            "min_precision": self.min_precision,
            "passed": self.passed,
        })
    }
}

#[derive(Clone, Debug)]
pub struct PadicPeriod {
    pub p: u64,
    pub f: usize,
    pub abs_prec: u32,
    /// unit root of Frobenius, reduced mod p^N
    pub unit_root: Integer,
    pub omega_p: PadicScalar,
    /// Ω_p^{-1}, the multiplier with exp(Ω_p^{-1}λ(t)) − 1 integral
    pub inverse: PadicScalar,
    pub certificate: Certificate,
}

impl PadicPeriod {
    pub fn ctx(&self) -> &Arc<UnramifiedCtx> {
        self.omega_p.ctx()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "f": self.f,
            "abs_prec": self.abs_prec,
            "unit_root": self.unit_root.to_string(),
            "modulus": self.ctx().modulus(),
            "omega_p": self.omega_p.to_json(),
            "certificate": self.certificate.to_json(),
        })
    }
}

fn certificate_degree(p: u64, n: u32) -> usize {
    let target = u64::from(n).saturating_mul(p);
    let mut d = 1u64;
    while d < target {
        d = d.saturating_mul(p);
    }
    d.min(i64::MAX as u64) as usize
}

/// Series length needed by [`solve_period_for_log`] at precision `n`.
pub fn required_log_order(p: u64, n: u32) -> i64 {
    let pn = p.checked_pow(n).map_or(i64::MAX, |x| x.min(i64::MAX as u64) as i64);
    (certificate_degree(p, n) as i64).max(pn)
}

/// Ω_p for the formal group of `curve` at an ordinary split prime.
pub fn solve_padic_period(curve: &CurveData, p: u64, n: u32) -> Result<PadicPeriod> {
    solve_padic_period_capped(curve, p, n, DEFAULT_F_CAP)
}

pub fn solve_padic_period_capped(curve: &CurveData, p: u64, n: u32, f_cap: usize) -> Result<PadicPeriod> {
    if p < 5 {
        return Err(Error::Precondition(format!("p = {p} must be at least 5")));
    }
    if curve.d == 0 {
        return Err(Error::Precondition("curve has no CM field recorded".into()));
    }
    split_root(curve.d, p, 1)?;
    if !curve.has_good_reduction(p) {
        return Err(Error::Precondition(format!("curve has bad reduction at {p}")));
    }
    let needed = required_log_order(p, n);
    if needed > MAX_LOG_ORDER {
        return Err(Error::PeriodUnavailable(format!(
            "precision {p}^{n} needs the formal logarithm to degree {needed}, above {MAX_LOG_ORDER}"
        )));
    }
    let lambda = formal_log(curve, needed)?.lambda;
    solve_period_for_log(&lambda, p, n, f_cap)
}

/// Solves for c ∈ W_N(F_{p^f})^× with exp(cλ(t)) − 1 integral, for any
/// logarithm λ of a height-one formal group over Z_(p).
///
/// Integrality at t^{p^k} forces σ(c)/c ≡ p^kλ_{p^k}/(p^{k−1}λ_{p^{k−1}}) mod p^k,
/// so the unit root u is read off the coefficient at t^{p^N}, f is the order of
/// u mod p^N, and c spans the kernel of σ − u.
pub fn solve_period_for_log(lambda: &UniSeries<QQ>, p: u64, n: u32, f_cap: usize) -> Result<PadicPeriod> {
    if n == 0 {
        return Err(Error::Precondition("precision must be positive".into()));
    }
    let needed = required_log_order(p, n);
    if lambda.order() < needed {
        return Err(Error::OrderExceeded { needed, available: lambda.order() });
    }
    let m = ipow(p, n);
    let scaled = |k: u32| -> Rational { lambda.coeff(ipow(p, k) as i64) * Integer::from(ipow(p, k)) };
    let (lo, hi) = (scaled(n - 1), scaled(n));
    if vp(&lo, p) != Some(0) || vp(&hi, p) != Some(0) {
        return Err(Error::PeriodUnavailable(format!("formal group is not of height one at {p}")));
    }
    let ratio = Rational::from(&hi / &lo);
    let mz = Integer::from(m);
    let den = ratio.denom().clone().invert(&mz).map_err(|_| Error::NotInvertible("unit root".into()))?;
    let u = (ratio.numer().clone() * den).modulo(&mz);
    let u64v = u.to_u64().unwrap();
    let mut f = 1usize;
    let mut acc = u64v;
    while acc != 1 {
        if f >= f_cap {
            return Err(Error::PeriodUnavailable(format!(
                "unit root {u} has order above {f_cap} mod {p}^{n}; no residue degree within the cap"
            )));
        }
        acc = mulmod(acc, u64v, m);
        f += 1;
    }
    let ctx = UnramifiedCtx::new(p, f, n)?;
    let frob = Frobenius::new(&ctx)?;
    let kernel = eigenvector(&frob, u64v, m)?;
    let lambda1 = lambda.coeff(1);
    let scale = PadicScalar::from_rational(&ctx, &lambda1);
    let mut c = PadicScalar::from_coords(&ctx, &kernel.iter().map(|&x| Integer::from(x)).collect::<Vec<_>>(), 0, n as i64);
    let (coords, _) = c.checked_mul(&scale)?.coords();
    let lead = coords
        .iter()
        .find(|x| !x.is_divisible_u(p as u32))
        .ok_or_else(|| Error::PeriodUnavailable("eigenvector is not a unit".into()))?;
    c = c.checked_div(&PadicScalar::from_integer(&ctx, lead))?;
    let omega = c.checked_inv()?;
    let certificate = certify(&frob, &c, lambda, certificate_degree(p, n))?;
    Ok(PadicPeriod { p, f, abs_prec: n, unit_root: u, omega_p: omega, inverse: c, certificate })
}

/// Kernel vector of σ − u mod m with a unit coordinate equal to 1.
fn eigenvector(frob: &Frobenius, u: u64, m: u64) -> Result<Vec<u64>> {
    let p = frob.ctx.p();
    let f = frob.ctx.f();
    let mut a: Vec<Vec<u64>> = (0..f)
        .map(|i| {
            (0..f)
                .map(|j| {
                    let e = frob.entry(i, j) % m;
                    if i == j {
                        (e + m - u % m) % m
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut used = vec![false; f];
    let mut r = 0;
    while r < f {
        let found = (r..f).find_map(|i| (0..f).find(|&j| !used[j] && a[i][j] % p != 0).map(|j| (i, j)));
        let Some((i, j)) = found else { break };
        a.swap(r, i);
        let inv = invmod(a[r][j], m).expect("unit pivot");
        for x in a[r].iter_mut() {
            *x = mulmod(*x, inv, m);
        }
        let pivot_row = a[r].clone();
        for (k, row) in a.iter_mut().enumerate() {
            if k == r || row[j] == 0 {
                continue;
            }
            let factor = row[j];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + m - mulmod(factor, y, m)) % m;
            }
        }
        used[j] = true;
        pivots.push(j);
        r += 1;
    }
    if a[r..].iter().any(|row| row.iter().any(|&x| x != 0)) {
        return Err(Error::PeriodUnavailable("σ − u has no unit kernel vector at this precision".into()));
    }
    let free: Vec<usize> = (0..f).filter(|&j| !used[j]).collect();
    if free.len() != 1 {
        return Err(Error::PeriodUnavailable(format!("kernel of σ − u has rank {}", free.len())));
    }
    let mut c = vec![0u64; f];
    c[free[0]] = 1;
    for (row, &col) in pivots.iter().enumerate() {
        c[col] = (m - a[row][free[0]]) % m;
    }
    Ok(c)
}

fn certify(frob: &Frobenius, c: &PadicScalar, lambda: &UniSeries<QQ>, degree: usize) -> Result<Certificate> {
    let ctx = frob.ctx();
    let p = ctx.p() as usize;
    let sc = frob.apply(c);
    let pc = c.shift(1);
    let mut min_valuation = i64::MAX;
    let mut min_precision = i64::MAX;
    for k in 1..=degree {
        let mut term = pc.checked_mul(&PadicScalar::from_rational(ctx, &lambda.coeff(k as i64)))?.neg();
        if k % p == 0 {
            let l = PadicScalar::from_rational(ctx, &lambda.coeff((k / p) as i64));
            term = term.checked_add(&sc.checked_mul(&l)?)?;
        }
        min_valuation = min_valuation.min(term.val_or_prec());
        min_precision = min_precision.min(term.abs_prec());
    }
    Ok(Certificate { degree, min_valuation, min_precision, passed: min_valuation >= 1 && min_precision >= 1 })
}
