use super::Ring;
use crate::{Error, Result};
use rug::{Complex, Float, Integer, Rational};
use serde_json::{json, Value};

/// Arbitrary-precision complex number. Binary operations run at the larger
/// of the two operand precisions.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex(Complex);

pub(crate) fn decimal_digits(prec: u32) -> usize {
    (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize + 2
}

pub(crate) fn float_string(x: &Float) -> String {
    x.to_string_radix(10, Some(decimal_digits(x.prec())))
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex(Complex::new(prec))
    }

    pub fn from_complex(z: Complex) -> Self {
        BigComplex(z)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_rational(re: &Rational, im: &Rational, prec: u32) -> Self {
        BigComplex(Complex::with_val(prec, (re, im)))
    }

    pub fn prec_bits(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    pub fn inner(&self) -> &Complex {
        &self.0
    }

    pub fn into_inner(self) -> Complex {
        self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec_bits(), self.0.abs_ref())
    }

    pub fn conj(&self) -> Self {
        BigComplex(Complex::with_val(self.prec_bits(), self.0.conj_ref()))
    }

    fn joint(&self, o: &Self) -> u32 {
        self.prec_bits().max(o.prec_bits())
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex(Complex::with_val(self.joint(o), &self.0 + &o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex(Complex::with_val(self.joint(o), &self.0 - &o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        BigComplex(Complex::with_val(self.joint(o), &self.0 * &o.0))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigComplex(Complex::with_val(self.joint(o), &self.0 / &o.0)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "re": float_string(self.0.real()),
            "im": float_string(self.0.imag()),
            "prec_bits": self.prec_bits(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let prec = v
            .get("prec_bits")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing prec_bits".into()))? as u32;
        let part = |k: &str| -> Result<Float> {
            let s = v.get(k).and_then(Value::as_str).ok_or_else(|| Error::Parse(format!("missing {k}")))?;
            let parsed = Float::parse(s).map_err(|e| Error::Parse(format!("{k}: {e}")))?;
            Ok(Float::with_val(prec, parsed))
        };
        Ok(BigComplex(Complex::with_val(prec, (part("re")?, part("im")?))))
    }
}

/// The complex numbers at a fixed working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexField {
    pub prec: u32,
}

impl ComplexField {
    pub fn new(prec: u32) -> Self {
        ComplexField { prec }
    }
}

impl Ring for ComplexField {
    type Elem = BigComplex;

    fn zero(&self) -> BigComplex {
        BigComplex::zero(self.prec)
    }
    fn one(&self) -> BigComplex {
        BigComplex(Complex::with_val(self.prec, 1))
    }
    fn is_zero(&self, a: &BigComplex) -> bool {
        a.0.is_zero()
    }
    fn add(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        a.add(b)
    }
    fn sub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        a.sub(b)
    }
    fn neg(&self, a: &BigComplex) -> BigComplex {
        BigComplex(Complex::with_val(a.prec_bits(), -&a.0))
    }
    fn mul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        a.mul(b)
    }
    fn inv(&self, a: &BigComplex) -> Result<BigComplex> {
        self.one().div(a)
    }
    fn from_integer(&self, n: &Integer) -> BigComplex {
        BigComplex(Complex::with_val(self.prec, n))
    }
    fn from_rational(&self, q: &Rational) -> Result<BigComplex> {
        Ok(BigComplex(Complex::with_val(self.prec, q)))
    }
    fn to_json(&self, a: &BigComplex) -> Value {
        a.to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_never_drops() {
        let a = BigComplex::from_f64(1.0, 2.0, 64);
        let b = BigComplex::from_f64(3.0, -1.0, 256);
        assert_eq!(a.mul(&b).prec_bits(), 256);
        assert_eq!(a.add(&b).prec_bits(), 256);
        assert_eq!(a.div(&b).unwrap().prec_bits(), 256);
    }

    #[test]
    fn json_round_trip() {
        let third = Rational::from((1, 3));
        let z = BigComplex::from_rational(&third, &Rational::from(-2), 200);
        let back = BigComplex::from_json(&z.to_json()).unwrap();
        let diff = Float::with_val(200, back.sub(&z).inner().abs_ref());
        assert!(diff < Float::with_val(200, Float::i_exp(1, -195)));
        assert_eq!(back.prec_bits(), 200);
    }

    #[test]
    fn division_by_zero() {
        let a = BigComplex::from_f64(1.0, 0.0, 64);
        assert_eq!(a.div(&BigComplex::zero(64)), Err(Error::DivisionByZero));
    }
}
