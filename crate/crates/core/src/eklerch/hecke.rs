use super::{eisenstein_kronecker_lerch, EkPoint, EkValue};
use crate::coeffring::ExactScalar;
use crate::curvelattice::LatticeData;
use crate::{Error, Result};
use rug::{Complex, Float, Integer, Rational};

const CLASS_NUMBER_ONE: [u32; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// The maximal order of Q(√−d) for a class-number-one field, with
/// Z-basis (1, ω).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticOrder {
    d: u32,
}

impl QuadraticOrder {
    pub fn new(d: u32) -> Result<Self> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::ClassGroup(d));
        }
        Ok(QuadraticOrder { d })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    fn half_integral(&self) -> bool {
        self.d % 4 == 3
    }

    pub fn omega(&self) -> ExactScalar {
        if self.half_integral() {
            ExactScalar::quadratic(Rational::from((1, 2)), Rational::from((1, 2)), self.d).unwrap()
        } else {
            ExactScalar::quadratic(Rational::new(), Rational::from(1), self.d).unwrap()
        }
    }

    /// x + y·ω.
    pub fn elem(&self, x: &Integer, y: &Integer) -> ExactScalar {
        let w = self.omega();
        let yw = w.checked_mul(&ExactScalar::rational(Rational::from(y))).unwrap();
        yw.checked_add(&ExactScalar::rational(Rational::from(x))).unwrap()
    }

    /// Coordinates in the basis (1, ω).
    pub fn coords(&self, e: &ExactScalar) -> (Rational, Rational) {
        if e.is_rational() {
            return (e.re().clone(), Rational::new());
        }
        if self.half_integral() {
            let y = Rational::from(e.im() * 2u32);
            let x = Rational::from(e.re() - Rational::from(&y / 2u32));
            (x, y)
        } else {
            (e.re().clone(), e.im().clone())
        }
    }

    pub fn is_integral(&self, e: &ExactScalar) -> bool {
        let (x, y) = self.coords(e);
        *x.denom() == 1 && *y.denom() == 1
    }

    pub fn units(&self) -> Vec<ExactScalar> {
        let one = ExactScalar::one();
        match self.d {
            1 => {
                let i = ExactScalar::sqrt_neg(1).unwrap();
                vec![one.clone(), i.clone(), one.neg(), i.neg()]
            }
            3 => {
                let z = self.omega(); // primitive sixth root of unity
                let mut out = vec![one];
                for _ in 1..6 {
                    let next = out.last().unwrap().checked_mul(&z).unwrap();
                    out.push(next);
                }
                out
            }
            _ => vec![one.clone(), one.neg()],
        }
    }

    /// Canonical representative of `r` modulo the ideal (f).
    pub fn reduce(&self, r: &ExactScalar, f: &ExactScalar) -> Result<(Integer, Integer)> {
        let q = r.checked_div(f)?;
        let (u, v) = self.coords(&q);
        let fu = u.floor();
        let fv = v.floor();
        let fq = self.elem(fu.numer(), fv.numer());
        let rem = r.checked_sub(&f.checked_mul(&fq)?)?;
        let (x, y) = self.coords(&rem);
        Ok((x.numer().clone(), y.numer().clone()))
    }
}

/// ε on (O/f)^× as an explicit table of complex values keyed by residues.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub values: Vec<((Integer, Integer), Complex)>,
}

/// Algebraic Hecke character φ((α)) = ε(α)·α^m·ᾱ^n of conductor f.
#[derive(Clone, Debug)]
pub struct HeckeCharacter {
    order: QuadraticOrder,
    conductor: ExactScalar,
    infinity_type: (u32, u32),
    table: Vec<((Integer, Integer), Complex)>,
    prec: u32,
}

fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
    Float::with_val(53, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64() <= tol
}

impl HeckeCharacter {
    /// Validates the table: it must be defined exactly on (O/f)^×, be
    /// multiplicative, and satisfy ε(u)·u^m·ū^n = 1 on units.
    pub fn new(order: QuadraticOrder, conductor: ExactScalar, infinity_type: (u32, u32), table: CharacterTable, prec: u32) -> Result<Self> {
        if !order.is_integral(&conductor) || conductor.is_zero() {
            return Err(Error::CharacterTable("conductor must be a nonzero integral element".into()));
        }
        let mut chi = HeckeCharacter { order, conductor, infinity_type, table: Vec::new(), prec };
        for (key, v) in table.values {
            let r = chi.order.elem(&key.0, &key.1);
            let k = chi.order.reduce(&r, &chi.conductor)?;
            if chi.table.iter().any(|(k2, _)| *k2 == k) {
                return Err(Error::CharacterTable(format!("residue {:?} listed twice", k)));
            }
            chi.table.push((k, Complex::with_val(prec, v)));
        }
        let units = chi.residue_units()?;
        if units.len() != chi.table.len() || units.iter().any(|u| chi.lookup(u).is_none()) {
            return Err(Error::CharacterTable(format!(
                "table has {} entries but (O/f)^x has {} elements",
                chi.table.len(),
                units.len()
            )));
        }
        let tol = 1e-20f64.max(2f64.powi(-(prec as i32) / 2));
        for a in &units {
            for b in &units {
                let ab = chi.order.reduce(&chi.order.elem(&a.0, &a.1).checked_mul(&chi.order.elem(&b.0, &b.1))?, &chi.conductor)?;
                let lhs = chi.lookup(&ab).unwrap();
                let rhs = Complex::with_val(prec, chi.lookup(a).unwrap() * chi.lookup(b).unwrap());
                if !close(&lhs, &rhs, tol) {
                    return Err(Error::CharacterTable(format!("not multiplicative at {a:?}·{b:?}")));
                }
            }
        }
        for u in chi.order.units() {
            let v = chi.eval_element(&u)?;
            if !close(&v, &Complex::with_val(prec, 1), tol) {
                return Err(Error::CharacterTable(format!(
                    "ε(u)·u^m·ū^n ≠ 1 at the unit {u}; the table is incompatible with infinity type {:?}",
                    chi.infinity_type
                )));
            }
        }
        Ok(chi)
    }

    pub fn order(&self) -> &QuadraticOrder {
        &self.order
    }

    pub fn conductor(&self) -> &ExactScalar {
        &self.conductor
    }

    pub fn infinity_type(&self) -> (u32, u32) {
        self.infinity_type
    }

    fn lookup(&self, k: &(Integer, Integer)) -> Option<Complex> {
        self.table.iter().find(|(k2, _)| k2 == k).map(|(_, v)| v.clone())
    }

    /// Residues of (O/f)^×.
    pub fn residue_units(&self) -> Result<Vec<(Integer, Integer)>> {
        let n = self.conductor.norm().numer().to_u32().ok_or_else(|| Error::Precondition("conductor too large".into()))?;
        let mut all: Vec<(Integer, Integer)> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let k = self.order.reduce(&self.order.elem(&x.into(), &y.into()), &self.conductor)?;
                if !all.contains(&k) {
                    all.push(k);
                }
            }
        }
        let one = self.order.reduce(&ExactScalar::one(), &self.conductor)?;
        let mut units = Vec::new();
        for a in &all {
            let ea = self.order.elem(&a.0, &a.1);
            let mut invertible = false;
            for b in &all {
                let prod = ea.checked_mul(&self.order.elem(&b.0, &b.1))?;
                if self.order.reduce(&prod, &self.conductor)? == one {
                    invertible = true;
                    break;
                }
            }
            if invertible {
                units.push(a.clone());
            }
        }
        Ok(units)
    }

    /// φ((α)) = ε(α)α^m ᾱ^n for α ∈ O, zero when α is not prime to f.
    pub fn eval_element(&self, alpha: &ExactScalar) -> Result<Complex> {
        let p = self.prec;
        let k = self.order.reduce(alpha, &self.conductor)?;
        let Some(eps) = self.lookup(&k) else {
            return Ok(Complex::new(p));
        };
        let a = alpha.to_complex(p);
        let (m, n) = self.infinity_type;
        let am = rug::ops::Pow::pow(a.clone(), m);
        let bn = rug::ops::Pow::pow(Complex::with_val(p, a.conj_ref()), n);
        Ok(eps * am * bn)
    }

    /// Number of roots of unity congruent to 1 modulo f.
    pub fn w_f(&self) -> Result<usize> {
        let one = self.order.reduce(&ExactScalar::one(), &self.conductor)?;
        let mut c = 0;
        for u in self.order.units() {
            if self.order.reduce(&u, &self.conductor)? == one {
                c += 1;
            }
        }
        Ok(c)
    }

    /// Representatives β of (O/f)^× modulo the image of the units.
    pub fn class_representatives(&self) -> Result<Vec<ExactScalar>> {
        let mut seen: Vec<(Integer, Integer)> = Vec::new();
        let mut reps = Vec::new();
        for k in self.residue_units()? {
            if seen.contains(&k) {
                continue;
            }
            let b = self.order.elem(&k.0, &k.1);
            for u in self.order.units() {
                seen.push(self.order.reduce(&b.checked_mul(&u)?, &self.conductor)?);
            }
            reps.push(b);
        }
        Ok(reps)
    }
}

/// L_f(φ, s) assembled from K* values over the ray classes:
/// (1/w_f) Σ_β φ((β))/Nβ^s · K*_{|n−m|}(1, 0, s − min(m,n); (β^{-1}f)^δ),
/// where δ is complex conjugation exactly when m > n.
pub fn hecke_l_partial(chi: &HeckeCharacter, s: &Complex, target_error: f64) -> Result<EkValue> {
    let (m, n) = chi.infinity_type;
    if m == n {
        return Err(Error::Precondition("infinity type (m, n) must have m ≠ n".into()));
    }
    let p = chi.prec;
    let s = Complex::with_val(p, s);
    let wf = chi.w_f()?;
    let omega = chi.order.omega().to_complex(p);
    let f = chi.conductor.to_complex(p);
    let mut total = Complex::with_val(p, 0);
    let mut terms = 0usize;
    let mut radius: (f64, f64) = (0.0, 0.0);
    let reps = chi.class_representatives()?;
    for beta in &reps {
        let bc = beta.to_complex(p);
        let g1 = Complex::with_val(p, &f / &bc);
        let g2 = Complex::with_val(p, &g1 * &omega);
        let mut lat = LatticeData::from_periods(&g1, &g2, p)?;
        let conj = m > n;
        if conj {
            lat = lat.conj()?;
        }
        let one = Complex::with_val(p, 1);
        let z0 = EkPoint::numeric(&one, &lat);
        let w0 = EkPoint::origin(&lat);
        let shift = Complex::with_val(p, &s - m.min(n));
        let k = eisenstein_kronecker_lerch(m.abs_diff(n), &z0, &w0, &shift, &lat, target_error / reps.len() as f64)?;
        let phi = chi.eval_element(beta)?;
        let nb = Float::with_val(p, beta.norm());
        let nbs = Complex::with_val(p, Complex::with_val(p, -&s) * Float::with_val(p, nb.ln_ref())).exp();
        total += phi * nbs * k.value;
        terms += k.terms;
        radius = (radius.0.max(k.radius.0), radius.1.max(k.radius.1));
    }
    Ok(EkValue { value: total / wf as u32, error_bound: target_error, radius, terms })
}
