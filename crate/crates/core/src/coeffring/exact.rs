use super::Ring;
use crate::{Error, Result};
use rug::{Integer, Rational};
use serde_json::{json, Value};
use std::fmt;

/// Element `a + b·√−d` of Q(√−d); `d = 0` tags a plain rational (then `b = 0`).
#[derive(Clone, Debug)]
pub struct ExactScalar {
    a: Rational,
    b: Rational,
    d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn is_squarefree(d: u32) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d;
    let mut q = 2u32;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        if n % q == 0 {
            n /= q;
        }
        q += 1;
    }
    true
}

impl ExactScalar {
    pub fn rational(q: Rational) -> Self {
        ExactScalar { a: q, b: Rational::new(), d: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn zero() -> Self {
        Self::rational(Rational::new())
    }

    pub fn one() -> Self {
        Self::rational(Rational::from(1))
    }

    /// `a + b·√−d` with `d` squarefree and positive.
    pub fn quadratic(a: Rational, b: Rational, d: u32) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(ExactScalar { a, b, d })
    }

    /// `√−d`
    pub fn sqrt_neg(d: u32) -> Result<Self> {
        Self::quadratic(Rational::new(), Rational::from(1), d)
    }

    pub fn re(&self) -> &Rational {
        &self.a
    }

    pub fn im(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.cmp0().is_eq() && self.b.cmp0().is_eq()
    }

    pub fn is_rational(&self) -> bool {
        self.b.cmp0().is_eq()
    }

    /// The rational value, if `b = 0`.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// Image under the embedding with √−d ↦ i·√d.
    pub fn to_complex(&self, prec: u32) -> rug::Complex {
        let im = rug::Float::with_val(prec, self.d).sqrt() * &self.b;
        rug::Complex::with_val(prec, (rug::Float::with_val(prec, &self.a), im))
    }

    pub fn conj(&self) -> Self {
        ExactScalar { a: self.a.clone(), b: Rational::from(-&self.b), d: self.d }
    }

    pub fn norm(&self) -> Rational {
        let aa = Rational::from(&self.a * &self.a);
        let bb = Rational::from(&self.b * &self.b);
        aa + bb * self.d
    }

    fn joint_d(&self, other: &Self) -> Result<u32> {
        match (self.d, other.d) {
            (0, e) | (e, 0) => Ok(e),
            (x, y) if x == y => Ok(x),
            (x, y) => {
                if self.is_rational() {
                    Ok(y)
                } else if other.is_rational() {
                    Ok(x)
                } else {
                    Err(Error::FieldMismatch { left: x, right: y })
                }
            }
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let d = self.joint_d(o)?;
        Ok(ExactScalar {
            a: Rational::from(&self.a + &o.a),
            b: Rational::from(&self.b + &o.b),
            d,
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        let d = self.joint_d(o)?;
        Ok(ExactScalar {
            a: Rational::from(&self.a - &o.a),
            b: Rational::from(&self.b - &o.b),
            d,
        })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        let d = self.joint_d(o)?;
        let mut a = Rational::from(&self.a * &o.a);
        if !self.b.cmp0().is_eq() && !o.b.cmp0().is_eq() {
            a -= Rational::from(&self.b * &o.b) * d;
        }
        let b = Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a);
        Ok(ExactScalar { a, b, d })
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(ExactScalar {
            a: Rational::from(&self.a / &n),
            b: Rational::from(-&self.b) / n,
            d: self.d,
        })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.checked_inv()?)
    }

    pub fn neg(&self) -> Self {
        ExactScalar { a: Rational::from(-&self.a), b: Rational::from(-&self.b), d: self.d }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = ExactScalar { a: Rational::from(1), b: Rational::new(), d: self.d };
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same field");
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        if self.d == 0 {
            rational_json(&self.a)
        } else {
            json!({"a": rational_string(&self.a), "b": rational_string(&self.b), "d": self.d})
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Ok(Self::rational(parse_rational(s)?)),
            Value::Number(n) => Ok(Self::rational(parse_rational(&n.to_string())?)),
            Value::Object(m) => {
                let get = |k: &str| -> Result<Rational> {
                    match m.get(k) {
                        Some(Value::String(s)) => parse_rational(s),
                        Some(Value::Number(n)) => parse_rational(&n.to_string()),
                        _ => Err(Error::Parse(format!("missing field {k:?}"))),
                    }
                };
                let d = m
                    .get("d")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("missing field \"d\"".into()))?;
                let d = u32::try_from(d).map_err(|_| Error::Parse("d out of range".into()))?;
                if d == 0 {
                    return Ok(Self::rational(get("a")?));
                }
                Self::quadratic(get("a")?, get("b")?, d)
            }
            _ => Err(Error::Parse(format!("not an exact scalar: {v}"))),
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.cmp0().is_eq() || self.d == o.d)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if self.a.cmp0().is_eq() {
            write!(f, "{}*sqrt(-{})", self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt(-{})", self.a, self.b, self.d)
        }
    }
}

/// Checked arithmetic entry point: errors on mixed fields and division by zero.
pub fn exact_arith(x: &ExactScalar, y: &ExactScalar, op: ArithOp) -> Result<ExactScalar> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

pub(crate) fn rational_string(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(rational_string(q))
}

/// Parses `"n"`, `"n/d"` or a terminating decimal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: Integer = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let d: Integer = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::from((n, d)));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        let neg = ip.starts_with('-');
        let digits = format!("{}{}", ip.trim_start_matches(['-', '+']), fp);
        let n: Integer = digits.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let den = Integer::from(Integer::u_pow_u(10, fp.len() as u32));
        let q = Rational::from((n, den));
        return Ok(if neg { -q } else { q });
    }
    let n: Integer = t.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from(n))
}

/// The field of rationals; elements are bare [`Rational`]s for speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct QQ;

impl Ring for QQ {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::new()
    }
    fn one(&self) -> Rational {
        Rational::from(1)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.cmp0().is_eq()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a + b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a - b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        Rational::from(-a)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }
    fn inv(&self, a: &Rational) -> Result<Rational> {
        if a.cmp0().is_eq() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::from(a.recip_ref()))
    }
    fn from_integer(&self, n: &Integer) -> Rational {
        Rational::from(n)
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn to_json(&self, a: &Rational) -> Value {
        rational_json(a)
    }
    fn add_assign(&self, acc: &mut Rational, a: &Rational) {
        *acc += a;
    }
    fn mul_add_assign(&self, acc: &mut Rational, a: &Rational, b: &Rational) {
        if a.cmp0().is_eq() || b.cmp0().is_eq() {
            return;
        }
        *acc += Rational::from(a * b);
    }
}

/// The field Q(√−d) for a fixed squarefree `d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadField {
    d: u32,
}

impl QuadField {
    pub fn new(d: u32) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `a + b√−d`
    pub fn elem(&self, a: Rational, b: Rational) -> ExactScalar {
        ExactScalar { a, b, d: self.d }
    }

    fn tag(&self, mut x: ExactScalar) -> ExactScalar {
        x.d = self.d;
        x
    }
}

impl Ring for QuadField {
    type Elem = ExactScalar;

    fn zero(&self) -> ExactScalar {
        self.elem(Rational::new(), Rational::new())
    }
    fn one(&self) -> ExactScalar {
        self.elem(Rational::from(1), Rational::new())
    }
    fn is_zero(&self, a: &ExactScalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
        self.tag(a.checked_add(b).expect("element outside field"))
    }
    fn sub(&self, a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
        self.tag(a.checked_sub(b).expect("element outside field"))
    }
    fn neg(&self, a: &ExactScalar) -> ExactScalar {
        self.tag(a.neg())
    }
    fn mul(&self, a: &ExactScalar, b: &ExactScalar) -> ExactScalar {
        self.tag(a.checked_mul(b).expect("element outside field"))
    }
    fn inv(&self, a: &ExactScalar) -> Result<ExactScalar> {
        Ok(self.tag(a.checked_inv()?))
    }
    fn from_integer(&self, n: &Integer) -> ExactScalar {
        self.elem(Rational::from(n), Rational::new())
    }
    fn from_rational(&self, q: &Rational) -> Result<ExactScalar> {
        Ok(self.elem(q.clone(), Rational::new()))
    }
    fn to_json(&self, a: &ExactScalar) -> Value {
        a.to_json()
    }
}
