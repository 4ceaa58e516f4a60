use super::exact::ExactScalar;
use super::fpoly;
use super::Ring;
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::{json, Value};
use std::fmt;
use std::sync::Arc;

/// Arithmetic context for W_N(F_{p^f}) = Z_p[X]/(P(X)) truncated at p^N, where
/// P is the smallest monic irreducible of degree f over F_p lifted with the
/// same small coefficients.
#[derive(Debug)]
pub struct UnramifiedCtx {
    p: u64,
    f: usize,
    cap: u32,
    /// c_0..c_{f−1} of P = X^f + Σ c_i X^i
    modulus: Vec<u64>,
    /// nonzero (index, coefficient) pairs of the modulus, for reduction
    sparse_modulus: Vec<(usize, u64)>,
    pows: Vec<u64>,
}

impl PartialEq for UnramifiedCtx {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.f == o.f && self.modulus == o.modulus
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn vp_u64(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= 1 << 32 {
        a * b % m
    } else {
        (a as u128 * b as u128 % m as u128) as u64
    }
}

impl UnramifiedCtx {
    /// Context for residue degree `f` and precision cap `cap` (p^cap < 2^62).
    pub fn new(p: u64, f: usize, cap: u32) -> Result<Arc<Self>> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || cap == 0 {
            return Err(Error::Precondition("residue degree and precision must be positive".into()));
        }
        let full = fpoly::smallest_irreducible(p, f);
        Self::with_modulus(p, full[..f].to_vec(), cap)
    }

    /// Context with an explicit modulus `c_0..c_{f−1}` (monic, irreducible mod p).
    pub fn with_modulus(p: u64, modulus: Vec<u64>, cap: u32) -> Result<Arc<Self>> {
        let f = modulus.len();
        let mut pows = vec![1u64];
        for _ in 0..cap {
            let last = *pows.last().unwrap();
            let next = last
                .checked_mul(p)
                .filter(|&x| x < 1 << 62)
                .ok_or_else(|| Error::Precondition(format!("{p}^{cap} exceeds 62 bits")))?;
            pows.push(next);
        }
        let sparse_modulus = modulus.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        Ok(Arc::new(UnramifiedCtx { p, f, cap, modulus, sparse_modulus, pows }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Coefficients `c_0..c_{f−1}, 1` of the defining polynomial.
    pub fn modulus(&self) -> Vec<u64> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    fn pw(&self, k: i64) -> u64 {
        self.pows[k as usize]
    }

    fn mul_units(&self, a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let f = self.f;
        if f == 1 {
            return vec![mulmod(a[0], b[0], m)];
        }
        if a[1..].iter().all(|&x| x == 0) {
            return b.iter().map(|&y| mulmod(a[0], y, m)).collect();
        }
        if b[1..].iter().all(|&y| y == 0) {
            return a.iter().map(|&x| mulmod(x, b[0], m)).collect();
        }
        let big = m >= 1 << 40;
        let mut acc = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let row = &mut acc[i..i + f];
            if big {
                for (slot, &y) in row.iter_mut().zip(b) {
                    *slot += x as u128 * y as u128 % m as u128;
                }
            } else {
                for (slot, &y) in row.iter_mut().zip(b) {
                    *slot += x as u128 * y as u128;
                }
            }
        }
        let mut r: Vec<u64> = acc.iter().map(|&c| (c % m as u128) as u64).collect();
        for k in (f..2 * f - 1).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            for &(i, mi) in &self.sparse_modulus {
                let t = mulmod(c, mi, m);
                let slot = &mut r[k - f + i];
                *slot = if *slot >= t { *slot - t } else { *slot + m - t };
            }
        }
        r.truncate(f);
        r
    }

    fn inv_unit(&self, a: &[u64], rel: i64) -> Vec<u64> {
        let p = self.p;
        let m_full = self.pw(rel);
        let a0: Vec<u64> = a.iter().map(|&c| c % p).collect();
        let mut x: Vec<u64> = if self.f == 1 {
            vec![fpoly::inv_mod(a0[0], p)]
        } else {
            let mut poly = a0.clone();
            fpoly::trim(&mut poly);
            let mut inv = fpoly::inv_mod_poly(&poly, &self.modulus(), p).expect("unit has an inverse");
            inv.resize(self.f, 0);
            inv
        };
        let mut k = 1i64;
        while k < rel {
            k = (2 * k).min(rel);
            let m = self.pw(k);
            let ar: Vec<u64> = a.iter().map(|&c| c % m).collect();
            let ax = self.mul_units(&ar, &x, m);
            // x ← x(2 − a x)
            let mut two_minus: Vec<u64> = ax.iter().map(|&c| (m - c) % m).collect();
            two_minus[0] = (two_minus[0] + 2) % m;
            x = self.mul_units(&x, &two_minus, m);
        }
        x.iter().map(|&c| c % m_full).collect()
    }
}

/// Element of W_N(F_{p^f}) written p^val·u with u a unit known mod p^{prec−val}.
/// An empty unit vector encodes zero known mod p^prec.
#[derive(Clone)]
pub struct PadicScalar {
    ctx: Arc<UnramifiedCtx>,
    val: i64,
    prec: i64,
    unit: Vec<u64>,
}

/// p-adic valuation, possibly only bounded below by the precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(i64),
    AtLeast(i64),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl PadicScalar {
    pub fn zero(ctx: &Arc<UnramifiedCtx>, prec: i64) -> Self {
        PadicScalar { ctx: ctx.clone(), val: prec, prec, unit: Vec::new() }
    }

    pub fn ctx(&self) -> &Arc<UnramifiedCtx> {
        &self.ctx
    }

    pub fn abs_prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_empty()
    }

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Exact(self.val)
        }
    }

    /// Valuation, with zero reported as its precision.
    pub fn val_or_prec(&self) -> i64 {
        if self.is_zero() {
            self.prec
        } else {
            self.val
        }
    }

    fn rel(&self) -> i64 {
        self.prec - self.val
    }

    /// Builds p^val·(coords) known mod p^prec, normalizing the valuation.
    pub fn from_coords(ctx: &Arc<UnramifiedCtx>, coords: &[Integer], val: i64, prec: i64) -> Self {
        let rel = (prec - val).min(ctx.cap as i64);
        let prec = val + rel;
        if rel <= 0 {
            return Self::zero(ctx, prec.max(val));
        }
        let m = Integer::from(ctx.pw(rel));
        let mut unit: Vec<u64> = coords
            .iter()
            .map(|c| Integer::from(c.modulo_ref(&m)).to_u64().unwrap())
            .collect();
        unit.resize(ctx.f, 0);
        Self::normalized(ctx, unit, val, prec)
    }

    /// The element `n` of Z_p ⊂ W at full precision.
    pub fn from_integer(ctx: &Arc<UnramifiedCtx>, n: &Integer) -> Self {
        Self::from_rational(ctx, &Rational::from(n))
    }

    /// Embeds a rational with `v_p(den)` subtracted from the usable precision.
    pub fn from_rational(ctx: &Arc<UnramifiedCtx>, q: &Rational) -> Self {
        let cap = ctx.cap as i64;
        if q.cmp0().is_eq() {
            return Self::zero(ctx, cap);
        }
        let pz = Integer::from(ctx.p);
        let mut num = q.numer().clone();
        let mut den = q.denom().clone();
        let vn = num.remove_factor_mut(&pz) as i64;
        let vd = den.remove_factor_mut(&pz) as i64;
        let val = vn - vd;
        let prec = if val >= 0 { cap } else { cap + val };
        let rel = prec - val;
        if rel <= 0 {
            return Self::zero(ctx, prec);
        }
        let m = Integer::from(ctx.pw(rel));
        let inv = den.invert(&m).expect("p-free denominator");
        let u = (num * inv).modulo(&m);
        let mut unit = vec![0u64; ctx.f];
        unit[0] = u.to_u64().unwrap();
        PadicScalar { ctx: ctx.clone(), val, prec, unit }
    }

    fn normalized(ctx: &Arc<UnramifiedCtx>, mut unit: Vec<u64>, val: i64, prec: i64) -> Self {
        let p = ctx.p;
        let k = unit.iter().filter(|&&c| c != 0).map(|&c| vp_u64(c, p)).min();
        match k {
            None => Self::zero(ctx, prec),
            Some(0) => PadicScalar { ctx: ctx.clone(), val, prec, unit },
            Some(k) => {
                let d = ctx.pw(k as i64);
                for c in unit.iter_mut() {
                    *c /= d;
                }
                PadicScalar { ctx: ctx.clone(), val: val + k as i64, prec, unit }
            }
        }
    }

    fn same_ctx(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &o.ctx) || *self.ctx == *o.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.same_ctx(o)?;
        let ctx = &self.ctx;
        let mut prec = self.prec.min(o.prec);
        let v0 = self.val_or_prec().min(o.val_or_prec());
        if v0 >= prec {
            return Ok(Self::zero(ctx, prec));
        }
        let mut rel = prec - v0;
        if rel > ctx.cap as i64 {
            rel = ctx.cap as i64;
            prec = v0 + rel;
        }
        let m = ctx.pw(rel);
        let mut acc = vec![0u64; ctx.f];
        for x in [self, o] {
            if x.is_zero() || x.val >= prec {
                continue;
            }
            let shift = x.val - v0;
            let scale = ctx.pw(shift);
            let mm = ctx.pw(rel - shift);
            for (slot, &c) in acc.iter_mut().zip(&x.unit) {
                let t = (c % mm) * scale;
                *slot = (*slot + t) % m;
            }
        }
        Ok(Self::normalized(ctx, acc, v0, prec))
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let m = self.ctx.pw(self.rel());
        let unit = self.unit.iter().map(|&c| (m - c) % m).collect();
        PadicScalar { ctx: self.ctx.clone(), val: self.val, prec: self.prec, unit }
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.same_ctx(o)?;
        let ctx = &self.ctx;
        if self.is_zero() || o.is_zero() {
            let prec = (self.prec + o.val_or_prec()).min(o.prec + self.val_or_prec());
            return Ok(Self::zero(ctx, prec));
        }
        let rel = self.rel().min(o.rel());
        let m = ctx.pw(rel);
        let a: Vec<u64> = self.unit.iter().map(|&c| c % m).collect();
        let b: Vec<u64> = o.unit.iter().map(|&c| c % m).collect();
        let val = self.val + o.val;
        Ok(PadicScalar { ctx: ctx.clone(), val, prec: val + rel, unit: ctx.mul_units(&a, &b, m) })
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rel = self.rel();
        let unit = self.ctx.inv_unit(&self.unit, rel);
        Ok(PadicScalar { ctx: self.ctx.clone(), val: -self.val, prec: rel - self.val, unit })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.checked_inv()?)
    }

    /// Multiplies by p^k exactly.
    pub fn shift(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.prec += k;
        if !r.is_zero() {
            r.val += k;
        } else {
            r.val = r.prec;
        }
        r
    }

    /// Lowers the absolute precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        if self.is_zero() || self.val >= prec {
            return Self::zero(&self.ctx, prec);
        }
        let m = self.ctx.pw(prec - self.val);
        let unit = self.unit.iter().map(|&c| c % m).collect();
        Self::normalized(&self.ctx, unit, self.val, prec)
    }

    /// Valuation, absolute precision and unit coordinates (empty for zero).
    pub fn parts(&self) -> (i64, i64, &[u64]) {
        (self.val, self.prec, &self.unit)
    }

    /// Inverse of [`PadicScalar::parts`]; `unit` is reduced mod p^{prec−val}.
    pub fn from_parts(ctx: &Arc<UnramifiedCtx>, val: i64, prec: i64, unit: Vec<u64>) -> Self {
        let rel = (prec - val).min(ctx.cap as i64);
        if rel <= 0 || unit.is_empty() {
            return Self::zero(ctx, prec.max(val));
        }
        let m = ctx.pw(rel);
        let mut unit: Vec<u64> = unit.iter().map(|&c| c % m).collect();
        unit.resize(ctx.f, 0);
        Self::normalized(ctx, unit, val, val + rel)
    }

    /// Coordinates of the value times p^{-min(val,0)}: returns (coords, shift)
    /// with value = p^{shift}·Σ coords_i X^i, coords known mod p^{prec−shift}.
    pub fn coords(&self) -> (Vec<Integer>, i64) {
        if self.is_zero() {
            return (vec![Integer::new(); self.ctx.f], 0);
        }
        if self.val >= 0 {
            let s = Integer::from(self.ctx.p).pow(self.val as u32);
            (self.unit.iter().map(|&c| Integer::from(c) * &s).collect(), 0)
        } else {
            (self.unit.iter().map(|&c| Integer::from(c)).collect(), self.val)
        }
    }

    /// Residue class mod p for an integral element (coordinates in F_p).
    pub fn residue(&self) -> Option<Vec<u64>> {
        match self.valuation() {
            Valuation::Exact(v) if v < 0 => None,
            Valuation::Exact(0) => Some(self.unit.iter().map(|&c| c % self.ctx.p).collect()),
            _ if self.prec >= 1 => Some(vec![0; self.ctx.f]),
            _ => None,
        }
    }

    /// True when `self − o` is zero to the joint precision.
    pub fn eq_within(&self, o: &Self) -> bool {
        self.checked_sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Base-p digits of each coordinate of the unit part, least significant first.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        let p = self.ctx.p;
        let rel = if self.is_zero() { 0 } else { self.rel() };
        self.unit
            .iter()
            .map(|&c| {
                let mut x = c;
                (0..rel)
                    .map(|_| {
                        let d = x % p;
                        x /= p;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.ctx.p,
            "f": self.ctx.f,
            "val": self.val_or_prec(),
            "digits": self.digits(),
            "prec": self.prec,
        })
    }

    pub fn from_json(v: &Value, ctx: &Arc<UnramifiedCtx>) -> Result<Self> {
        let get = |k: &str| v.get(k).and_then(Value::as_i64).ok_or_else(|| Error::Parse(format!("missing {k}")));
        if get("p")? as u64 != ctx.p || get("f")? as usize != ctx.f {
            return Err(Error::ContextMismatch);
        }
        let val = get("val")?;
        let prec = get("prec")?;
        let digits = v.get("digits").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing digits".into()))?;
        if digits.is_empty() {
            return Ok(Self::zero(ctx, prec));
        }
        let mut coords = Vec::with_capacity(ctx.f);
        for coord in digits {
            let ds = coord.as_array().ok_or_else(|| Error::Parse("digits must be nested arrays".into()))?;
            let mut x = Integer::new();
            for d in ds.iter().rev() {
                x *= ctx.p;
                x += d.as_u64().ok_or_else(|| Error::Parse("bad digit".into()))?;
            }
            coords.push(x);
        }
        Ok(Self::from_coords(ctx, &coords, val, prec))
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "O({}^{})", self.ctx.p, self.prec)
        } else {
            write!(f, "{}^{}*{:?} + O({}^{})", self.ctx.p, self.val, self.unit, self.ctx.p, self.prec)
        }
    }
}

/// Valuation of a p-adic element; zero reports the precision bound.
pub fn padic_valuation(x: &PadicScalar) -> Valuation {
    x.valuation()
}

/// Smallest nonnegative root of x² + d mod p, Hensel-lifted mod p^n.
pub fn split_root(d: u32, p: u64, n: u32) -> Result<Integer> {
    if !is_prime(p) || p == 2 {
        return Err(Error::NotPrime(p));
    }
    let dd = u64::from(d) % p;
    if dd == 0 {
        return Err(Error::Ramified { p, d });
    }
    let r0 = (0..p).find(|&r| (r * r + dd) % p == 0).ok_or(Error::Inert { p, d })?;
    let m = Integer::from(p).pow(n);
    let mut r = Integer::from(r0);
    for _ in 0..n.max(1).ilog2() + 2 {
        let fx = Integer::from(&r * &r) + d;
        let dfx = Integer::from(&r * 2u32).invert(&m).expect("p odd and r a unit");
        r = (r - fx * dfx).modulo(&m);
    }
    Ok(r)
}

/// Image of an exact scalar in Q_p under the embedding sending √−d to the
/// Hensel lift of the smallest nonnegative root of x² + d mod p.
pub fn embed_padic(x: &ExactScalar, p: u64, n: u32) -> Result<PadicScalar> {
    let ctx = UnramifiedCtx::new(p, 1, n)?;
    embed_in(x, &ctx)
}

pub(crate) fn embed_in(x: &ExactScalar, ctx: &Arc<UnramifiedCtx>) -> Result<PadicScalar> {
    let a = PadicScalar::from_rational(ctx, x.re());
    if x.is_rational() {
        return Ok(a);
    }
    let r = split_root(x.d(), ctx.p, ctx.cap)?;
    let b = PadicScalar::from_rational(ctx, x.im());
    let rr = PadicScalar::from_integer(ctx, &r);
    a.checked_add(&b.checked_mul(&rr)?)
}

/// Ring structure on W_N(F_{p^f}).
#[derive(Clone, Debug)]
pub struct Unramified {
    ctx: Arc<UnramifiedCtx>,
}

impl PartialEq for Unramified {
    fn eq(&self, o: &Self) -> bool {
        *self.ctx == *o.ctx
    }
}

impl Unramified {
    pub fn new(ctx: Arc<UnramifiedCtx>) -> Self {
        Unramified { ctx }
    }

    pub fn ctx(&self) -> &Arc<UnramifiedCtx> {
        &self.ctx
    }

    /// The generator X of the residue extension.
    pub fn generator(&self) -> PadicScalar {
        let mut coords = vec![Integer::new(); self.ctx.f];
        if self.ctx.f == 1 {
            coords[0] = Integer::new();
        } else {
            coords[1] = Integer::from(1);
        }
        PadicScalar::from_coords(&self.ctx, &coords, 0, self.ctx.cap as i64)
    }

    pub fn embed(&self, x: &ExactScalar) -> Result<PadicScalar> {
        embed_in(x, &self.ctx)
    }
}

impl Ring for Unramified {
    type Elem = PadicScalar;

    fn zero(&self) -> PadicScalar {
        PadicScalar::zero(&self.ctx, self.ctx.cap as i64)
    }
    fn one(&self) -> PadicScalar {
        self.from_i64(1)
    }
    fn is_zero(&self, a: &PadicScalar) -> bool {
        a.is_zero() && a.prec >= self.ctx.cap as i64
    }
    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.checked_add(b).expect("p-adic context mismatch")
    }
    fn sub(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.checked_sub(b).expect("p-adic context mismatch")
    }
    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        a.neg()
    }
    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> PadicScalar {
        a.checked_mul(b).expect("p-adic context mismatch")
    }
    fn inv(&self, a: &PadicScalar) -> Result<PadicScalar> {
        a.checked_inv()
    }
    fn from_integer(&self, n: &Integer) -> PadicScalar {
        PadicScalar::from_integer(&self.ctx, n)
    }
    fn from_rational(&self, q: &Rational) -> Result<PadicScalar> {
        Ok(PadicScalar::from_rational(&self.ctx, q))
    }
    fn to_json(&self, a: &PadicScalar) -> Value {
        a.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::rational(Rational::from((n, d)))
    }

    #[test]
    fn third_mod_13_power_5() {
        let x = embed_padic(&q(1, 3), 13, 5).unwrap();
        assert_eq!(x.valuation(), Valuation::Exact(0));
        let m = 13u64.pow(5);
        let (c, _) = x.coords();
        let v = c[0].to_u64().unwrap();
        assert_eq!(v * 3 % m, 1);
        assert_eq!(v % 13, 9);
        assert_eq!(x.abs_prec(), 5);
    }

    #[test]
    fn sqrt_minus_one_mod_13() {
        let i = ExactScalar::sqrt_neg(1).unwrap();
        let x = embed_padic(&i, 13, 1).unwrap();
        assert_eq!(x.residue().unwrap(), vec![5]);
        let x3 = embed_padic(&i, 13, 3).unwrap();
        let sq = x3.checked_mul(&x3).unwrap();
        assert!(sq.eq_within(&embed_padic(&q(-1, 1), 13, 3).unwrap()));
    }

    #[test]
    fn zero_and_pole_valuations() {
        let z = embed_padic(&q(0, 1), 13, 5).unwrap();
        assert_eq!(z.valuation(), Valuation::AtLeast(5));
        assert_eq!(z.valuation().to_string(), ">=5");
        let s = embed_padic(&q(169, 1), 13, 5).unwrap();
        assert_eq!(s.valuation(), Valuation::Exact(2));
        let pole = embed_padic(&q(1, 13), 13, 5).unwrap();
        assert_eq!(pole.valuation(), Valuation::Exact(-1));
        assert_eq!(pole.abs_prec(), 4);
    }

    #[test]
    fn ramified_and_inert() {
        let i = ExactScalar::sqrt_neg(1).unwrap();
        assert_eq!(embed_padic(&i, 7, 3).unwrap_err(), Error::Inert { p: 7, d: 1 });
        let s3 = ExactScalar::sqrt_neg(3).unwrap();
        assert_eq!(embed_padic(&s3, 3, 3).unwrap_err(), Error::Ramified { p: 3, d: 3 });
    }

    #[test]
    fn division_loses_precision_by_valuation() {
        let ctx = UnramifiedCtx::new(13, 1, 6).unwrap();
        let a = PadicScalar::from_integer(&ctx, &Integer::from(5));
        let b = PadicScalar::from_integer(&ctx, &Integer::from(13 * 13 * 2));
        let c = a.checked_div(&b).unwrap();
        assert_eq!(c.valuation(), Valuation::Exact(-2));
        assert_eq!(c.abs_prec(), 2);
        let back = c.checked_mul(&b).unwrap();
        assert!(back.eq_within(&a));
        assert_eq!(back.abs_prec(), 4);
    }

    #[test]
    fn extension_inverse_round_trip() {
        let ctx = UnramifiedCtx::new(13, 5, 4).unwrap();
        let r = Unramified::new(ctx.clone());
        let x = r.generator();
        let y = r.add(&r.mul(&x, &x), &r.from_i64(7));
        let yi = r.inv(&y).unwrap();
        let one = r.mul(&y, &yi);
        assert!(one.eq_within(&r.one()));
        assert_eq!(one.abs_prec(), 4);
    }

    #[test]
    fn json_round_trip() {
        let ctx = UnramifiedCtx::new(13, 3, 5).unwrap();
        let r = Unramified::new(ctx.clone());
        let x = r.generator();
        let y = r.mul(&r.add(&x, &r.from_i64(3)), &r.from_rational(&Rational::from((1, 13))).unwrap());
        let back = PadicScalar::from_json(&y.to_json(), &ctx).unwrap();
        assert!(back.eq_within(&y));
        assert_eq!(back.abs_prec(), y.abs_prec());
        assert_eq!(y.to_json()["val"], -1);
    }
}
