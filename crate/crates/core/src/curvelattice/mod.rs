//! Curves y² = 4x³ − g2·x − g3 with complex multiplication, their exact
//! Weierstrass/sigma/theta expansions, and numeric period lattices.

mod catalog;
mod lattice;
mod series;

pub use catalog::{catalog, find_row, CatalogRow};
pub use lattice::{compute_periods, pairing, LatticeData};
pub use series::{
    formal_log, sigma_series, theta_series, theta_unit, wp_coefficients, wp_series, FormalLog,
};

use crate::coeffring::ExactScalar;
use crate::{Error, Result};
use rug::Rational;
use serde_json::{json, Value};

/// Weierstrass data plus optional CM information.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveData {
    pub g2: ExactScalar,
    pub g3: ExactScalar,
    /// Label of the CM order, e.g. `Z[(1+√−3)/2]`, when known.
    pub cm_order_label: Option<String>,
    /// Squarefree d with CM field Q(√−d); 0 when unknown.
    pub d: u32,
    pub e2_star: Option<ExactScalar>,
    /// Twist parameter for catalog curves.
    pub u: Option<Rational>,
}

impl CurveData {
    /// A curve from raw rational invariants.
    pub fn new(g2: Rational, g3: Rational) -> Result<Self> {
        let c = CurveData {
            g2: ExactScalar::rational(g2),
            g3: ExactScalar::rational(g3),
            cm_order_label: None,
            d: 0,
            e2_star: None,
            u: None,
        };
        c.check_discriminant()?;
        Ok(c)
    }

    pub fn with_e2_star(mut self, e2: Rational) -> Self {
        self.e2_star = Some(ExactScalar::rational(e2));
        self
    }

    pub fn with_cm(mut self, d: u32) -> Self {
        self.d = d;
        self
    }

    fn check_discriminant(&self) -> Result<()> {
        if self.discriminant()?.cmp0().is_eq() {
            return Err(Error::Precondition("singular curve: g2³ − 27·g3² = 0".into()));
        }
        Ok(())
    }

    /// g2³ − 27·g3².
    pub fn discriminant(&self) -> Result<Rational> {
        let (g2, g3) = self.rational_invariants()?;
        let a = Rational::from(&g2 * &g2) * &g2;
        let b = Rational::from(&g3 * &g3) * 27u32;
        Ok(a - b)
    }

    /// (g2, g3) as rationals; curves with irrational invariants are rejected.
    pub fn rational_invariants(&self) -> Result<(Rational, Rational)> {
        match (self.g2.as_rational(), self.g3.as_rational()) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(Error::Precondition("curve invariants must be rational".into())),
        }
    }

    pub fn e2_star_rational(&self) -> Result<Rational> {
        let e2 = self.e2_star.as_ref().ok_or(Error::UnknownE2Star)?;
        e2.as_rational().cloned().ok_or_else(|| Error::Precondition("e2* must be rational".into()))
    }

    /// True when every prime dividing the discriminant differs from `p`.
    pub fn has_good_reduction(&self, p: u64) -> bool {
        let Ok(disc) = self.discriminant() else {
            return false;
        };
        let Ok((g2, g3)) = self.rational_invariants() else {
            return false;
        };
        let pz = rug::Integer::from(p);
        let integral = |q: &Rational| !q.denom().is_divisible(&pz);
        integral(&g2) && integral(&g3) && integral(&disc) && !disc.numer().is_divisible(&pz)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.cm_order_label,
            "d": self.d,
            "u": self.u.as_ref().map(crate::coeffring::rational_json),
            "g2": self.g2.to_json(),
            "g3": self.g3.to_json(),
            "e2_star": self.e2_star.as_ref().map(ExactScalar::to_json),
        })
    }
}
