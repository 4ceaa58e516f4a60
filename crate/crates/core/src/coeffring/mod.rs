//! Coefficient scalars and the [`Ring`] abstraction used by the series layer.

mod complex;
mod exact;
mod fpoly;
mod padic;

pub use complex::{BigComplex, ComplexField};
pub use exact::{exact_arith, parse_rational, rational_json, ArithOp, ExactScalar, QuadField, QQ};
pub use fpoly::smallest_irreducible;
pub use padic::{
    embed_padic, padic_valuation, split_root, PadicScalar, Unramified, UnramifiedCtx, Valuation,
};

use crate::Result;
use rug::{Integer, Rational};
use std::fmt::Debug;

/// A commutative coefficient ring together with whatever context its
/// elements need (field tag, precision, p-adic modulus).
pub trait Ring: Clone + Debug + PartialEq {
    type Elem: Clone + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// True when `a` is zero to the full precision of the ring.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn from_integer(&self, n: &Integer) -> Self::Elem;
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_integer(&Integer::from(n))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem) {
        *acc = self.add(acc, a);
    }

    /// `acc += a * b`
    fn mul_add_assign(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem) {
        let t = self.mul(a, b);
        self.add_assign(acc, &t);
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}
