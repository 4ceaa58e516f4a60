//! Truncated power and Laurent series over any [`Ring`].
//!
//! Univariate series carry an explicit start index so that simple poles can be
//! represented; bivariate series are truncated by total degree. A
//! [`KroneckerExpansion`] is a bivariate series plus the two polar terms
//! `P_z/z` and `P_w/w`.

mod bi;
mod uni;

pub use bi::{BiSeries, Var};
pub use uni::UniSeries;

use crate::coeffring::Ring;
use crate::{Error, Result};
use rug::Integer;
use serde_json::{json, Value};

/// Operation selector for [`series_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    ExactDiv,
}

/// Bivariate arithmetic dispatch; `ExactDiv` fails unless the quotient is exact.
pub fn series_arith<R: Ring>(x: &BiSeries<R>, y: &BiSeries<R>, op: SeriesOp) -> Result<BiSeries<R>> {
    Ok(match op {
        SeriesOp::Add => x.add(y),
        SeriesOp::Sub => x.sub(y),
        SeriesOp::Mul => x.mul(y),
        SeriesOp::ExactDiv => x.exact_div(y)?,
    })
}

/// `P_z/z + P_w/w + regular(z, w)`.
#[derive(Clone, Debug)]
pub struct KroneckerExpansion<R: Ring> {
    pub polar_z: R::Elem,
    pub polar_w: R::Elem,
    pub regular: BiSeries<R>,
}

impl<R: Ring> KroneckerExpansion<R> {
    pub fn new(polar_z: R::Elem, polar_w: R::Elem, regular: BiSeries<R>) -> Self {
        KroneckerExpansion { polar_z, polar_w, regular }
    }

    pub fn ring(&self) -> &R {
        self.regular.ring()
    }

    pub fn order(&self) -> u32 {
        self.regular.order()
    }

    /// Coefficient of `z^m w^n` in the regular part.
    pub fn coeff(&self, m: u32, n: u32) -> R::Elem {
        self.regular.coeff(m, n)
    }

    /// Substitutes `z = inner_z`, `w = inner_w`. Each inner series must start
    /// with an invertible linear term so that `1/inner` is again a simple pole
    /// plus a power series.
    pub fn compose(&self, inner_z: &UniSeries<R>, inner_w: &UniSeries<R>) -> Result<Self> {
        let r = self.ring();
        let mut regular = self.regular.compose(inner_z, inner_w)?;
        let mut polars = Vec::new();
        for (p, inner, var) in [(&self.polar_z, inner_z, Var::Z), (&self.polar_w, inner_w, Var::W)] {
            if inner.valuation() != Some(1) {
                return Err(Error::Precondition("inner series must start at t^1".into()));
            }
            let inv = inner.inv()?;
            polars.push(r.mul(p, &inv.coeff(-1)));
            let order = regular.order().min(inv.order().max(0) as u32);
            let mut extra = BiSeries::zero(r, order);
            for k in 0..=order {
                let c = r.mul(p, &inv.coeff(k as i64));
                match var {
                    Var::Z => extra.set(k, 0, c),
                    Var::W => extra.set(0, k, c),
                }
            }
            regular = regular.add(&extra);
        }
        let polar_w = polars.pop().unwrap();
        let polar_z = polars.pop().unwrap();
        Ok(KroneckerExpansion { polar_z, polar_w, regular })
    }

    pub fn swap(&self) -> Self {
        KroneckerExpansion { polar_z: self.polar_w.clone(), polar_w: self.polar_z.clone(), regular: self.regular.swap() }
    }

    pub fn map<S: Ring>(&self, ring: &S, mut f: impl FnMut(&R::Elem) -> Result<S::Elem>) -> Result<KroneckerExpansion<S>> {
        Ok(KroneckerExpansion { polar_z: f(&self.polar_z)?, polar_w: f(&self.polar_w)?, regular: self.regular.map(ring, f)? })
    }

    pub fn to_json(&self) -> Value {
        let r = self.ring();
        json!({
            "polar_z": r.to_json(&self.polar_z),
            "polar_w": r.to_json(&self.polar_w),
            "regular": self.regular.to_json(),
        })
    }
}

/// Stirling numbers of the second kind S(n, k) for 0 ≤ k ≤ n ≤ max.
pub fn stirling2_table(max: usize) -> Vec<Vec<Integer>> {
    let mut t = vec![vec![Integer::new(); max + 1]; max + 1];
    t[0][0] = Integer::from(1);
    for n in 1..=max {
        for k in 1..=n {
            t[n][k] = Integer::from(&t[n - 1][k] * k as u32) + &t[n - 1][k - 1];
        }
    }
    t
}

/// `((1+S)∂_S)^m ((1+T)∂_T)^n f` at `S = T = 0`, with f in the variables (S, T).
///
/// With `x = log(1+S)` one has `S^i = i! Σ_k S(k, i) x^k / k!`, so the value is
/// `Σ_{i ≤ m, j ≤ n} c_{i,j} · i! S(m, i) · j! S(n, j)`.
pub fn log_derivative_moment<R: Ring>(f: &BiSeries<R>, m: u32, n: u32) -> Result<R::Elem> {
    let table = stirling2_table(m.max(n) as usize);
    log_derivative_moment_with(f, m, n, &table)
}

/// [`log_derivative_moment`] with a precomputed Stirling table.
pub fn log_derivative_moment_with<R: Ring>(f: &BiSeries<R>, m: u32, n: u32, s2: &[Vec<Integer>]) -> Result<R::Elem> {
    if m + n > f.order() {
        return Err(Error::OrderExceeded { needed: (m + n) as i64, available: f.order() as i64 });
    }
    let r = f.ring();
    let weight = |top: u32, i: u32| -> Integer {
        let mut fact = Integer::from(1);
        for k in 2..=i {
            fact *= k;
        }
        fact * &s2[top as usize][i as usize]
    };
    let mut acc = r.zero();
    for ((i, j), c) in f.terms() {
        if *i > m || *j > n {
            continue;
        }
        let w = weight(m, *i) * weight(n, *j);
        if w.is_zero() {
            continue;
        }
        r.mul_add_assign(&mut acc, c, &r.from_integer(&w));
    }
    Ok(acc)
}
