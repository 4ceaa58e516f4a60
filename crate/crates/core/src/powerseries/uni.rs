use crate::coeffring::Ring;
use crate::{Error, Result};
use rug::Rational;
use serde_json::{json, Value};

/// Truncated Laurent series Σ_{k=start}^{order} c_k t^k + O(t^{order+1}).
#[derive(Clone, Debug)]
pub struct UniSeries<R: Ring> {
    ring: R,
    start: i64,
    coeffs: Vec<R::Elem>,
    order: i64,
}

impl<R: Ring> UniSeries<R> {
    /// Power series with the given coefficients, padded or cut to `order`.
    pub fn new(ring: &R, coeffs: Vec<R::Elem>, order: i64) -> Self {
        Self::laurent(ring, 0, coeffs, order)
    }

    /// Laurent series whose first listed coefficient sits at `t^start`.
    pub fn laurent(ring: &R, start: i64, mut coeffs: Vec<R::Elem>, order: i64) -> Self {
        let len = (order - start + 1).max(0) as usize;
        coeffs.truncate(len);
        coeffs.resize(len, ring.zero());
        UniSeries { ring: ring.clone(), start, coeffs, order }
    }

    pub fn from_fn(ring: &R, start: i64, order: i64, f: impl FnMut(i64) -> R::Elem) -> Self {
        let coeffs = (start..=order).map(f).collect();
        UniSeries { ring: ring.clone(), start, coeffs, order }
    }

    pub fn zero(ring: &R, order: i64) -> Self {
        Self::new(ring, Vec::new(), order)
    }

    pub fn one(ring: &R, order: i64) -> Self {
        Self::new(ring, vec![ring.one()], order)
    }

    /// The series `t`.
    pub fn var(ring: &R, order: i64) -> Self {
        Self::new(ring, vec![ring.zero(), ring.one()], order)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Coefficients from `t^start` up to `t^order`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// Coefficient of `t^k`. Panics when `k` lies beyond the truncation order.
    pub fn coeff(&self, k: i64) -> R::Elem {
        assert!(k <= self.order, "coefficient t^{k} requested from a series known to order {}", self.order);
        if k < self.start {
            self.ring.zero()
        } else {
            self.coeffs[(k - self.start) as usize].clone()
        }
    }

    pub fn get(&self, k: i64) -> Result<R::Elem> {
        if k > self.order {
            return Err(Error::OrderExceeded { needed: k, available: self.order });
        }
        Ok(self.coeff(k))
    }

    /// Index of the first coefficient that is not exactly zero.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !self.ring.is_zero(c)).map(|i| self.start + i as i64)
    }

    fn val_bound(&self) -> i64 {
        self.valuation().unwrap_or(self.order + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Self::laurent(&self.ring, self.start, self.coeffs.clone(), order)
    }

    fn combine(&self, o: &Self, neg: bool) -> Self {
        let start = self.start.min(o.start);
        let order = self.order.min(o.order);
        Self::from_fn(&self.ring, start, order, |k| {
            let a = if k >= self.start { self.coeff(k) } else { self.ring.zero() };
            let b = if k >= o.start { o.coeff(k) } else { self.ring.zero() };
            if neg {
                self.ring.sub(&a, &b)
            } else {
                self.ring.add(&a, &b)
            }
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        UniSeries { ring: self.ring.clone(), start: self.start, coeffs, order: self.order }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(x, c)).collect();
        UniSeries { ring: self.ring.clone(), start: self.start, coeffs, order: self.order }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        UniSeries { ring: self.ring.clone(), start: self.start + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = &self.ring;
        let order = (self.order + o.val_bound()).min(o.order + self.val_bound());
        let start = self.start + o.start;
        let len = (order - start + 1).max(0) as usize;
        let mut out = vec![r.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || r.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                r.mul_add_assign(&mut out[i + j], a, b);
            }
        }
        UniSeries { ring: r.clone(), start, coeffs: out, order }
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(&self.ring, self.order - self.val_bound().min(0));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    pub fn inv(&self) -> Result<Self> {
        let r = &self.ring;
        let v = self.valuation().ok_or(Error::DivisionByZero)?;
        let u: Vec<R::Elem> = self.coeffs[(v - self.start) as usize..].to_vec();
        let u0inv = r.inv(&u[0])?;
        let n = u.len();
        let mut w: Vec<R::Elem> = Vec::with_capacity(n);
        w.push(u0inv.clone());
        for m in 1..n {
            let mut acc = r.zero();
            for k in 1..=m {
                r.mul_add_assign(&mut acc, &u[k], &w[m - k]);
            }
            w.push(r.neg(&r.mul(&acc, &u0inv)));
        }
        Ok(UniSeries { ring: r.clone(), start: -v, coeffs: w, order: self.order - 2 * v })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Quotient of power series that must again be a power series.
    pub fn exact_div(&self, o: &Self) -> Result<Self> {
        let v = o.valuation().ok_or(Error::DivisionByZero)?;
        if let Some(k) = self.valuation() {
            if k < v {
                return Err(Error::NotDivisible(format!("numerator has valuation {k}, divisor {v}")));
            }
        }
        let q = self.div(o)?;
        let start = q.start.max(0);
        Ok(Self::from_fn(&self.ring, start, q.order, |k| q.coeff(k)))
    }

    pub fn derivative(&self) -> Self {
        let r = &self.ring;
        let start = if self.start == 0 { 0 } else { self.start - 1 };
        Self::from_fn(r, start, self.order - 1, |k| {
            let c = self.coeff(k + 1);
            r.mul(&c, &r.from_i64(k + 1))
        })
    }

    /// Antiderivative with zero constant term; needs the `t^{-1}` coefficient to vanish.
    pub fn integral(&self) -> Result<Self> {
        let r = &self.ring;
        if self.start <= -1 && -1 <= self.order && !r.is_zero(&self.coeff(-1)) {
            return Err(Error::Precondition("cannot integrate a t^-1 term".into()));
        }
        let start = self.start + 1;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for k in start..=self.order + 1 {
            if k == 0 {
                out.push(r.zero());
                continue;
            }
            let q = Rational::from((1, k));
            out.push(r.mul(&self.coeff(k - 1), &r.from_rational(&q)?));
        }
        Ok(UniSeries { ring: r.clone(), start, coeffs: out, order: self.order + 1 })
    }

    fn check_power_series(&self, what: &str) -> Result<()> {
        match self.valuation() {
            Some(v) if v < 0 => Err(Error::Precondition(format!("{what} of a series with a pole"))),
            _ => Ok(()),
        }
    }

    pub fn exp(&self) -> Result<Self> {
        self.check_power_series("exp")?;
        let r = &self.ring;
        if self.order >= 0 && !r.is_zero(&self.coeff(0)) {
            return Err(Error::Precondition("exp needs a zero constant term".into()));
        }
        let n = self.order.max(-1) + 1;
        let a: Vec<R::Elem> = (0..n).map(|k| self.coeff(k)).collect();
        let ka: Vec<R::Elem> = a.iter().enumerate().map(|(k, c)| r.mul(c, &r.from_i64(k as i64))).collect();
        let mut e: Vec<R::Elem> = Vec::with_capacity(n as usize);
        if n > 0 {
            e.push(r.one());
        }
        for m in 1..n as usize {
            let mut acc = r.zero();
            for k in 1..=m {
                if !r.is_zero(&ka[k]) {
                    r.mul_add_assign(&mut acc, &ka[k], &e[m - k]);
                }
            }
            e.push(r.mul(&acc, &r.from_rational(&Rational::from((1, m as i64)))?));
        }
        Ok(Self::new(r, e, self.order))
    }

    pub fn log(&self) -> Result<Self> {
        self.check_power_series("log")?;
        let r = &self.ring;
        let c0 = self.coeff(0);
        if !r.is_zero(&r.sub(&c0, &r.one())) {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let q = self.derivative().mul(&self.inv()?);
        let l = q.integral()?;
        Ok(Self::from_fn(r, 0, l.order, |k| l.coeff(k)))
    }

    /// Substitutes `inner` for `t`. The inner series must have zero constant
    /// term; negative powers additionally need its leading coefficient invertible.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let r = &self.ring;
        if let Some(v) = inner.valuation() {
            if v < 1 {
                return Err(Error::Precondition("inner series has a nonzero constant term".into()));
            }
        }
        let v = inner.val_bound().max(1);
        let mut bound = (self.order + 1).saturating_mul(v) - 1;
        let mut acc = Self::zero(r, bound.min(inner.order.max(0) + self.order.max(0)));
        if self.start < 0 {
            let inv = inner.inv()?;
            let mut p = inv.clone();
            for k in (self.start..0).rev() {
                bound = bound.min(p.order);
                acc = acc.add(&p.scale(&self.coeff(k)));
                if k > self.start {
                    p = p.mul(&inv);
                }
            }
        }
        if self.order >= 0 {
            acc = acc.add(&Self::one(r, acc.order).scale(&self.coeff(0)));
        }
        let mut p = inner.clone();
        for k in 1..=self.order {
            bound = bound.min(p.order);
            let c = self.coeff(k);
            if !r.is_zero(&c) {
                acc = acc.add(&p.scale(&c));
            }
            if k < self.order {
                p = p.mul(inner);
                if p.val_bound() > bound {
                    break;
                }
            }
        }
        Ok(acc.truncate(bound))
    }

    /// Compositional inverse g with self(g(t)) = t.
    pub fn reversion(&self) -> Result<Self> {
        let r = &self.ring;
        if self.valuation().map_or(true, |v| v != 1) || self.start < 0 {
            return Err(Error::Precondition("reversion needs x(0) = 0 and x'(0) invertible".into()));
        }
        let a1inv = r.inv(&self.coeff(1))?;
        let n = self.order;
        let mut g = Self::new(r, vec![r.zero(), a1inv], 1.min(n));
        let dx = self.derivative();
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let gp = Self::from_fn(r, 0, prec, |k| if k <= g.order { g.coeff(k) } else { r.zero() });
            let x = self.truncate(prec);
            let resid = x.compose(&gp)?.sub(&Self::var(r, prec));
            let d = dx.truncate(prec - 1).compose(&gp)?;
            let step = resid.mul(&d.inv()?);
            g = gp.sub(&step).truncate(prec);
        }
        Ok(g)
    }

    /// Reinterprets every coefficient in another ring.
    pub fn map<S: Ring>(&self, ring: &S, mut f: impl FnMut(&R::Elem) -> Result<S::Elem>) -> Result<UniSeries<S>> {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>>>()?;
        Ok(UniSeries { ring: ring.clone(), start: self.start, coeffs, order: self.order })
    }

    /// `{"order": N, "terms": [{"k": .., "c": ..}]}` listing nonzero terms.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .map(|(i, c)| json!({"k": self.start + i as i64, "c": self.ring.to_json(c)}))
            .collect();
        json!({"order": self.order, "terms": terms})
    }
}
