//! Eisenstein–Kronecker–Lerch series K*_a(z0, w0, s) by the incomplete-gamma
//! integral representation, Eisenstein–Kronecker numbers, and Hecke L-values.

mod gamma;
mod hecke;

pub use hecke::{hecke_l_partial, CharacterTable, HeckeCharacter, QuadraticOrder};

use crate::curvelattice::LatticeData;
use crate::{Error, Result};
use gamma::IncompleteGamma;
use rug::{Complex, Float, Integer, Rational};
use serde_json::{json, Value};

/// A point of C together with the decision whether it lies in Γ.
#[derive(Clone, Debug)]
pub struct EkPoint {
    z: Complex,
    in_lattice: bool,
}

impl EkPoint {
    /// Membership decided numerically by distance to the nearest lattice point.
    pub fn numeric(z: &Complex, lattice: &LatticeData) -> Self {
        EkPoint { z: Complex::with_val(lattice.prec(), z), in_lattice: lattice.contains(z) }
    }

    /// x·ω1 + y·ω2 with exact membership.
    pub fn torsion(x: &Rational, y: &Rational, lattice: &LatticeData) -> Self {
        EkPoint { z: lattice.point(x, y), in_lattice: *x.denom() == 1 && *y.denom() == 1 }
    }

    pub fn origin(lattice: &LatticeData) -> Self {
        EkPoint { z: Complex::new(lattice.prec()), in_lattice: true }
    }

    pub fn z(&self) -> &Complex {
        &self.z
    }

    pub fn in_lattice(&self) -> bool {
        self.in_lattice
    }
}

/// Result of a lattice-sum evaluation.
#[derive(Clone, Debug)]
pub struct EkValue {
    pub value: Complex,
    /// Bound on the truncation error of the value.
    pub error_bound: f64,
    /// Truncation radii of the two incomplete-gamma sums.
    pub radius: (f64, f64),
    pub terms: usize,
}

impl EkValue {
    pub fn to_json(&self) -> Value {
        let v = crate::coeffring::BigComplex::from_complex(self.value.clone());
        json!({
            "value": v.to_json(),
            "error_bound": self.error_bound,
            "truncation_radius": [self.radius.0, self.radius.1],
            "terms": self.terms,
        })
    }
}

fn cabs(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

/// Smallest R with 2·Σ_{|x|>R} |x|^{a−2σ}Γ(σ, |x|²/A) ≤ target over a shifted
/// lattice with cell diameter `diam` and covolume πA.
fn tail_radius(a: u32, sigma: f64, area: f64, diam: f64, target: f64) -> Result<f64> {
    let a = f64::from(a);
    let log_term = |r: f64| std::f64::consts::LN_2 + (1.0 - sigma) * area.ln() + (a - 2.0) * r.ln() - r * r / area;
    let tail = |r0: f64| -> f64 {
        let mut total = 0.0;
        let mut k = 0.0;
        loop {
            let r = r0 + k * diam;
            let lo = (r - diam).max(0.0);
            let hi = r + 2.0 * diam;
            let count = (hi * hi - lo * lo) / area;
            let t = (log_term(r).exp()) * count;
            total += t;
            if t < 1e-40 * total || (t == 0.0 && k > 2.0) || k > 1e6 {
                break;
            }
            k += 1.0;
        }
        2.0 * total
    };
    let floor = (area * (2.0 * (sigma - 1.0)).max(1.0).max((a - 2.0) / 2.0)).sqrt();
    let mut r = floor.max(diam);
    let step = diam / 8.0;
    for _ in 0..1_000_000 {
        if tail(r) <= target {
            return Ok(r);
        }
        r += step;
    }
    Err(Error::TailBound(format!("no radius reaches {target:e}")))
}

struct SumOut {
    value: Complex,
    radius: f64,
    terms: usize,
}

/// I_a(z0, w0, s) = Σ_{x ∈ z0+Γ, x≠0} x̄^a |x|^{−2s} Γ(s, |x|²/A) ⟨x − z0, w0⟩.
fn incomplete_sum(a: u32, z0: &EkPoint, w0: &EkPoint, s: &Complex, lat: &LatticeData, prec: u32, target: f64) -> Result<SumOut> {
    let area = lat.area().to_f64();
    let w1 = lat.omega1();
    let w2 = lat.omega2();
    let diam = cabs(&Complex::with_val(53, w1 + w2)).max(cabs(&Complex::with_val(53, w1 - w2)));
    let sigma = s.real().to_f64();
    let radius = tail_radius(a, sigma, area, diam, target)?;
    let (m0, n0, base) = lat.reduce(&z0.z);
    let base = Complex::with_val(prec, base);
    let tau = lat.tau();
    let im_tau = tau.imag().to_f64();
    let re_tau = tau.real().to_f64();
    let abs_w1 = cabs(w1);
    let reach = radius + cabs(&base);
    let nmax = (reach / (abs_w1 * im_tau)).ceil() as i64 + 1;
    let area_p = Float::with_val(prec, lat.area());
    let mut gam = IncompleteGamma::new(s, prec);
    let w0c = Complex::with_val(prec, w0.z.conj_ref());
    let w1p = Complex::with_val(prec, w1);
    let w2p = Complex::with_val(prec, w2);
    let r2 = Float::with_val(prec, radius * radius);
    let mut sum = Complex::with_val(prec, 0);
    let mut terms = 0usize;
    for n in -nmax..=nmax {
        let center = -(n as f64) * re_tau;
        let half = reach / abs_w1 + 1.0;
        for m in (center - half).floor() as i64..=(center + half).ceil() as i64 {
            let g = Complex::with_val(prec, &w1p * m) + Complex::with_val(prec, &w2p * n);
            let x = Complex::with_val(prec, &base + &g);
            let nx = Float::with_val(prec, x.norm_ref());
            if nx > r2 {
                continue;
            }
            if z0.in_lattice && m == 0 && n == 0 {
                continue;
            }
            // lattice vector relative to the unreduced z0
            let gm = Integer::from(m) - &m0;
            let gn = Integer::from(n) - &n0;
            let gamma_vec = Complex::with_val(prec, &w1p * &gm) + Complex::with_val(prec, &w2p * &gn);
            let pair_arg = Complex::with_val(prec, &gamma_vec * &w0c) - Complex::with_val(prec, &w0.z * Complex::with_val(prec, gamma_vec.conj_ref()));
            let pair = Complex::with_val(prec, pair_arg / &area_p).exp();
            let y = Float::with_val(prec, &nx / &area_p);
            let inc = gam.eval(&y);
            let ln_nx = Float::with_val(prec, nx.ln_ref());
            let mag = (Complex::with_val(prec, s * ln_nx) * -1i32).exp();
            let xbar = Complex::with_val(prec, x.conj_ref());
            let xa = if a == 0 { Complex::with_val(prec, 1) } else { rug::ops::Pow::pow(xbar, a) };
            sum += xa * mag * inc * pair;
            terms += 1;
        }
    }
    Ok(SumOut { value: sum, radius, terms })
}

fn working_prec(lat: &LatticeData, target: f64) -> Result<u32> {
    if !(target > 0.0) {
        return Err(Error::Precondition("target_error must be positive".into()));
    }
    let need = (-target.log2()).max(0.0).ceil() as u32 + 8;
    if need > lat.prec() {
        return Err(Error::PrecisionExhausted(format!(
            "target {target:e} needs about {need} bits but the lattice carries {}",
            lat.prec()
        )));
    }
    Ok(lat.prec() + 64)
}

fn pairing_at(z: &Complex, w: &Complex, area: &Float, prec: u32) -> Complex {
    let a = Complex::with_val(prec, z * Complex::with_val(prec, w.conj_ref()));
    let b = Complex::with_val(prec, w * Complex::with_val(prec, z.conj_ref()));
    Complex::with_val(prec, (a - b) / area).exp()
}

fn check_poles(a: u32, z0: &EkPoint, w0: &EkPoint, s: &Complex) -> Result<()> {
    let is = |v: i64| gamma::as_integer(s).map(|n| n == v).unwrap_or(false);
    if a == 0 && is(0) && z0.in_lattice {
        return Err(Error::Pole("K*_0(z0, w0, s) at s = 0 with z0 in the lattice".into()));
    }
    if a == 0 && is(1) && w0.in_lattice {
        return Err(Error::Pole("K*_0(z0, w0, s) at s = 1 with w0 in the lattice".into()));
    }
    Ok(())
}

/// Γ(s)·K*_a(z0, w0, s), finite away from the two excluded poles.
pub fn gamma_times_k(a: u32, z0: &EkPoint, w0: &EkPoint, s: &Complex, lattice: &LatticeData, target_error: f64) -> Result<EkValue> {
    let prec = working_prec(lattice, target_error)?;
    let s = Complex::with_val(prec, s);
    check_poles(a, z0, w0, &s)?;
    let area = Float::with_val(prec, lattice.area());
    let ln_area = Float::with_val(prec, area.ln_ref());
    let dual_s = Complex::with_val(prec, Complex::with_val(prec, -&s) + (a + 1));
    let expo = Complex::with_val(prec, &dual_s - &s);
    let fac = Complex::with_val(prec, &expo * &ln_area).exp();
    let fac_abs = cabs(&fac);
    let first = incomplete_sum(a, z0, w0, &s, lattice, prec, target_error / 4.0)?;
    let second = incomplete_sum(a, w0, z0, &dual_s, lattice, prec, target_error / (4.0 * fac_abs.max(1e-300)))?;
    let pair = pairing_at(&w0.z, &z0.z, &area, prec);
    let mut total = first.value + Complex::with_val(prec, &fac * &pair) * second.value;
    if a == 0 {
        let a_pow = Complex::with_val(prec, Complex::with_val(prec, -&s) * &ln_area).exp();
        if w0.in_lattice {
            let d = Complex::with_val(prec, &s - 1u32);
            total += Complex::with_val(prec, &pair * &a_pow) / d;
        }
        if z0.in_lattice {
            total -= Complex::with_val(prec, &a_pow / &s);
        }
    }
    Ok(EkValue {
        value: total,
        error_bound: target_error / 2.0,
        radius: (first.radius, second.radius),
        terms: first.terms + second.terms,
    })
}

/// K*_a(z0, w0, s); zero at the poles s = 0, −1, … of Γ(s) away from the excluded cases.
pub fn eisenstein_kronecker_lerch(a: u32, z0: &EkPoint, w0: &EkPoint, s: &Complex, lattice: &LatticeData, target_error: f64) -> Result<EkValue> {
    let prec = working_prec(lattice, target_error)?;
    let mut g = IncompleteGamma::new(&Complex::with_val(prec, s), prec);
    let Some(gs) = g.complete() else {
        check_poles(a, z0, w0, s)?;
        return Ok(EkValue { value: Complex::new(lattice.prec()), error_bound: 0.0, radius: (0.0, 0.0), terms: 0 });
    };
    let scale = cabs(&gs).min(1.0);
    let mut v = gamma_times_k(a, z0, w0, s, lattice, target_error * scale)?;
    v.value = Complex::with_val(lattice.prec(), v.value / gs);
    v.error_bound = target_error / 2.0;
    Ok(v)
}

/// e*_{a,b}(z0, w0) = K*_{a+b}(z0, w0, b).
pub fn ek_number(a: u32, b: u32, z0: &EkPoint, w0: &EkPoint, lattice: &LatticeData, target_error: f64) -> Result<EkValue> {
    if b == 0 {
        return Err(Error::Precondition("e*_{a,b} needs b > 0".into()));
    }
    let s = Complex::with_val(lattice.prec(), b);
    eisenstein_kronecker_lerch(a + b, z0, w0, &s, lattice, target_error)
}

/// |Γ(s)K*_a(z0,w0,s) − A^{a+1−2s}Γ(a+1−s)K*_a(w0,z0,a+1−s)⟨w0,z0⟩|.
pub fn check_functional_equation(a: u32, z0: &EkPoint, w0: &EkPoint, s: &Complex, lattice: &LatticeData, target_error: f64) -> Result<f64> {
    let prec = working_prec(lattice, target_error)?;
    let lhs = gamma_times_k(a, z0, w0, s, lattice, target_error)?.value;
    let dual = Complex::with_val(prec, Complex::with_val(prec, -s) + (a + 1));
    let rhs = gamma_times_k(a, w0, z0, &dual, lattice, target_error)?.value;
    let area = Float::with_val(prec, lattice.area());
    let expo = Complex::with_val(prec, Complex::with_val(prec, &dual - s) * Float::with_val(prec, area.ln_ref()));
    let rhs = rhs * expo.exp() * pairing_at(&w0.z, &z0.z, &area, prec);
    Ok(cabs(&(lhs - rhs)))
}

#[cfg(test)]
mod tests;
