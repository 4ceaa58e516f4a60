use super::uni::UniSeries;
use crate::coeffring::Ring;
use crate::{Error, Result};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Which variable of a bivariate series an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z,
    W,
}

/// Truncated series Σ_{m+n ≤ order} c_{m,n} z^m w^n stored sparsely.
#[derive(Clone, Debug)]
pub struct BiSeries<R: Ring> {
    ring: R,
    order: u32,
    terms: BTreeMap<(u32, u32), R::Elem>,
}

#[inline]
fn tri(m: u32, n: u32) -> usize {
    let d = (m + n) as usize;
    d * (d + 1) / 2 + n as usize
}

impl<R: Ring> BiSeries<R> {
    pub fn zero(ring: &R, order: u32) -> Self {
        BiSeries { ring: ring.clone(), order, terms: BTreeMap::new() }
    }

    /// Builds a series from `(m, n, c)` triples, dropping zeros and terms past `order`.
    pub fn from_terms(ring: &R, order: u32, terms: impl IntoIterator<Item = ((u32, u32), R::Elem)>) -> Self {
        let mut s = Self::zero(ring, order);
        for ((m, n), c) in terms {
            if m + n <= order {
                s.add_term(m, n, &c);
            }
        }
        s
    }

    pub fn from_fn(ring: &R, order: u32, mut f: impl FnMut(u32, u32) -> R::Elem) -> Self {
        let mut s = Self::zero(ring, order);
        for d in 0..=order {
            for n in 0..=d {
                let c = f(d - n, n);
                s.set(d - n, n, c);
            }
        }
        s
    }

    /// `z^m w^n`
    pub fn monomial(ring: &R, m: u32, n: u32, order: u32) -> Self {
        Self::from_terms(ring, order, [((m, n), ring.one())])
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeff(&self, m: u32, n: u32) -> R::Elem {
        assert!(m + n <= self.order, "coefficient ({m},{n}) beyond order {}", self.order);
        self.terms.get(&(m, n)).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn get(&self, m: u32, n: u32) -> Result<R::Elem> {
        if m + n > self.order {
            return Err(Error::OrderExceeded { needed: (m + n) as i64, available: self.order as i64 });
        }
        Ok(self.coeff(m, n))
    }

    pub fn get_ref(&self, m: u32, n: u32) -> Option<&R::Elem> {
        self.terms.get(&(m, n))
    }

    /// Stored terms in (m, n) order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &R::Elem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn set(&mut self, m: u32, n: u32, c: R::Elem) {
        assert!(m + n <= self.order);
        if self.ring.is_zero(&c) {
            self.terms.remove(&(m, n));
        } else {
            self.terms.insert((m, n), c);
        }
    }

    pub fn add_term(&mut self, m: u32, n: u32, c: &R::Elem) {
        if m + n > self.order {
            return;
        }
        let sum = match self.terms.get(&(m, n)) {
            Some(x) => self.ring.add(x, c),
            None => c.clone(),
        };
        self.set(m, n, sum);
    }

    pub fn truncate(&self, order: u32) -> Self {
        if order >= self.order {
            return self.clone();
        }
        let terms = self.terms.iter().filter(|((m, n), _)| m + n <= order).map(|(k, v)| (*k, v.clone())).collect();
        BiSeries { ring: self.ring.clone(), order, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.truncate(o.order);
        for ((m, n), c) in o.terms.iter() {
            out.add_term(*m, *n, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (*k, self.ring.neg(c))).collect();
        BiSeries { ring: self.ring.clone(), order: self.order, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_terms(&self.ring, self.order, self.terms.iter().map(|(k, x)| (*k, self.ring.mul(x, c))))
    }

    /// Lowest total degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(m, n)| m + n).min()
    }

    fn degree_bound(&self) -> u32 {
        self.min_degree().unwrap_or(self.order + 1)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let r = &self.ring;
        let order = (self.order + o.degree_bound()).min(o.order + self.degree_bound());
        let mut rhs: Vec<(u32, u32, &R::Elem)> = o.terms.iter().map(|((m, n), c)| (*m, *n, c)).collect();
        rhs.sort_by_key(|(m, n, _)| m + n);
        let mut acc: Vec<Option<R::Elem>> = vec![None; tri(0, order + 1)];
        for ((m1, n1), a) in self.terms.iter() {
            let d1 = m1 + n1;
            if d1 > order {
                continue;
            }
            let cut = rhs.partition_point(|(m, n, _)| m + n + d1 <= order);
            for &(m2, n2, b) in &rhs[..cut] {
                let slot = &mut acc[tri(m1 + m2, n1 + n2)];
                match slot {
                    Some(x) => r.mul_add_assign(x, a, b),
                    None => *slot = Some(r.mul(a, b)),
                }
            }
        }
        let mut out = Self::zero(r, order);
        for d in 0..=order {
            for n in 0..=d {
                if let Some(c) = acc[tri(d - n, n)].take() {
                    out.set(d - n, n, c);
                }
            }
        }
        out
    }

    /// Product with a univariate series in one of the variables.
    pub fn mul_uni(&self, u: &UniSeries<R>, var: Var) -> Result<Self> {
        let r = &self.ring;
        if u.start() < 0 {
            return Err(Error::Precondition("univariate factor has a pole".into()));
        }
        let uval = u.valuation().unwrap_or(u.order() + 1).max(0) as u32;
        let order = if u.order() < 0 {
            0
        } else {
            (self.order + uval).min(u.order() as u32 + self.degree_bound())
        };
        let mut out = Self::zero(r, order);
        let ucoeffs: Vec<(u32, &R::Elem)> = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (k as u32 + u.start() as u32, c))
            .filter(|(_, c)| !r.is_zero(c))
            .collect();
        let mut acc: Vec<Option<R::Elem>> = vec![None; tri(0, order + 1)];
        for ((m, n), a) in self.terms.iter() {
            for &(k, b) in &ucoeffs {
                if m + n + k > order {
                    break;
                }
                let (mm, nn) = match var {
                    Var::Z => (m + k, *n),
                    Var::W => (*m, n + k),
                };
                let slot = &mut acc[tri(mm, nn)];
                match slot {
                    Some(x) => r.mul_add_assign(x, a, b),
                    None => *slot = Some(r.mul(a, b)),
                }
            }
        }
        for d in 0..=order {
            for n in 0..=d {
                if let Some(c) = acc[tri(d - n, n)].take() {
                    out.set(d - n, n, c);
                }
            }
        }
        Ok(out)
    }

    /// Exchanges the roles of the two variables.
    pub fn swap(&self) -> Self {
        let terms = self.terms.iter().map(|((m, n), c)| ((*n, *m), c.clone())).collect();
        BiSeries { ring: self.ring.clone(), order: self.order, terms }
    }

    /// Divides by `z^a w^b`; every stored term must be a multiple of it.
    pub fn div_monomial(&self, a: u32, b: u32) -> Result<Self> {
        if a + b > self.order {
            return Err(Error::OrderExceeded { needed: (a + b) as i64, available: self.order as i64 });
        }
        let mut out = Self::zero(&self.ring, self.order - a - b);
        for ((m, n), c) in self.terms.iter() {
            if *m < a || *n < b {
                return Err(Error::NotDivisible(format!("term z^{m} w^{n} is not divisible by z^{a} w^{b}")));
            }
            out.set(m - a, n - b, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by a divisor of the form `z^a w^b · unit`, where the
    /// lowest-degree term of the divisor is the single monomial `z^a w^b` with
    /// an invertible coefficient.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let r = &self.ring;
        let d0 = divisor.min_degree().ok_or(Error::DivisionByZero)?;
        let low: Vec<(&(u32, u32), &R::Elem)> = divisor.terms.iter().filter(|((m, n), _)| m + n == d0).collect();
        let (a, b) = *low[0].0;
        if low.len() != 1 {
            return Err(Error::NotDivisible("divisor is not a monomial times a unit".into()));
        }
        let mut unit = Self::zero(r, divisor.order - d0);
        for ((m, n), c) in divisor.terms.iter() {
            if *m < a || *n < b {
                return Err(Error::NotDivisible("divisor is not a monomial times a unit".into()));
            }
            unit.set(m - a, n - b, c.clone());
        }
        let shifted = self.div_monomial(a, b)?;
        let order = shifted.order.min(unit.order);
        Ok(shifted.mul(&unit.truncate(order).inv()?).truncate(order))
    }

    /// Inverse of a series with invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let r = &self.ring;
        let c0 = self.terms.get(&(0, 0)).ok_or(Error::NotInvertible("constant term is zero".into()))?;
        let c0inv = r.inv(c0)?;
        // 1/(c0(1 - h)) = c0^{-1} Σ h^k with h of positive degree
        let h = {
            let mut h = self.scale(&r.neg(&c0inv));
            h.terms.remove(&(0, 0));
            h
        };
        let mut acc = Self::from_terms(r, self.order, [((0, 0), r.one())]);
        let mut p = acc.clone();
        for _ in 0..self.order {
            p = p.mul(&h);
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Ok(acc.scale(&c0inv))
    }

    /// Substitutes `z = inner_z`, `w = inner_w`; both inner series need zero
    /// constant term.
    pub fn compose(&self, inner_z: &UniSeries<R>, inner_w: &UniSeries<R>) -> Result<Self> {
        let r = &self.ring;
        for u in [inner_z, inner_w] {
            if u.start() < 0 || u.valuation().is_some_and(|v| v < 1) {
                return Err(Error::Precondition("inner series has a nonzero constant term".into()));
            }
        }
        let order = (self.order as i64).min(inner_z.order()).min(inner_w.order()).max(0) as u32;
        let src = self.truncate(order);
        let powers = |u: &UniSeries<R>| -> Vec<UniSeries<R>> {
            let mut out = vec![UniSeries::one(r, order as i64)];
            for _ in 0..order {
                let next = out.last().unwrap().mul(u).truncate(order as i64);
                out.push(next);
            }
            out
        };
        let pz = powers(inner_z);
        let pw = powers(inner_w);
        // substitute z column by column, then w
        let mut stage = Self::zero(r, order);
        let mut acc: Vec<Option<R::Elem>> = vec![None; tri(0, order + 1)];
        for ((m, n), c) in src.terms.iter() {
            let p = &pz[*m as usize];
            for k in *m..=(order - n) {
                let x = p.coeff(k as i64);
                if r.is_zero(&x) {
                    continue;
                }
                let slot = &mut acc[tri(k, *n)];
                match slot {
                    Some(y) => r.mul_add_assign(y, c, &x),
                    None => *slot = Some(r.mul(c, &x)),
                }
            }
        }
        for d in 0..=order {
            for n in 0..=d {
                if let Some(c) = acc[tri(d - n, n)].take() {
                    stage.set(d - n, n, c);
                }
            }
        }
        let mut out = Self::zero(r, order);
        for ((m, n), c) in stage.terms.iter() {
            let p = &pw[*n as usize];
            for k in *n..=(order - m) {
                let x = p.coeff(k as i64);
                if r.is_zero(&x) {
                    continue;
                }
                let slot = &mut acc[tri(*m, k)];
                match slot {
                    Some(y) => r.mul_add_assign(y, c, &x),
                    None => *slot = Some(r.mul(c, &x)),
                }
            }
        }
        for d in 0..=order {
            for n in 0..=d {
                if let Some(c) = acc[tri(d - n, n)].take() {
                    out.set(d - n, n, c);
                }
            }
        }
        Ok(out)
    }

    /// The univariate series obtained by setting the other variable to zero.
    pub fn restrict_axis(&self, var: Var) -> UniSeries<R> {
        let r = &self.ring;
        UniSeries::from_fn(r, 0, self.order as i64, |k| match var {
            Var::Z => self.coeff(k as u32, 0),
            Var::W => self.coeff(0, k as u32),
        })
    }

    pub fn map<S: Ring>(&self, ring: &S, mut f: impl FnMut(&R::Elem) -> Result<S::Elem>) -> Result<BiSeries<S>> {
        let mut out = BiSeries::zero(ring, self.order);
        for ((m, n), c) in self.terms.iter() {
            out.set(*m, *n, f(c)?);
        }
        Ok(out)
    }

    /// `{"order": N, "terms": [{"m": .., "n": .., "c": ..}]}`
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((m, n), c)| json!({"m": m, "n": n, "c": self.ring.to_json(c)}))
            .collect();
        json!({"order": self.order, "terms": terms})
    }
}
