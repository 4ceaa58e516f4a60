use super::CurveData;
use crate::coeffring::BigComplex;
use crate::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

pub(crate) fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

pub(crate) fn cplx(prec: u32, re: impl Into<f64>, im: impl Into<f64>) -> Complex {
    Complex::with_val(prec, (re.into(), im.into()))
}

pub(crate) fn conj(z: &Complex) -> Complex {
    Complex::with_val(z.prec().0, z.conj_ref())
}

pub(crate) fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// A period lattice Γ = Zω1 + Zω2 with Im(ω2/ω1) > 0, reduced so that
/// τ = ω2/ω1 lies in the standard fundamental domain.
#[derive(Clone, Debug)]
pub struct LatticeData {
    omega1: Complex,
    omega2: Complex,
    area: Float,
    prec: u32,
    pub curve: Option<CurveData>,
}

fn reduce_basis(mut w1: Complex, mut w2: Complex, prec: u32) -> Result<(Complex, Complex)> {
    let tau = Complex::with_val(prec, &w2 / &w1);
    if tau.imag().is_sign_negative() || tau.imag().is_zero() {
        if tau.imag().is_zero() {
            return Err(Error::PeriodFailure("periods are linearly dependent over R".into()));
        }
        w2 = -w2;
    }
    for _ in 0..200 {
        let tau = Complex::with_val(prec, &w2 / &w1);
        let n = Float::with_val(prec, tau.real().round_ref()).to_integer().unwrap();
        if n != 0 {
            w2 -= Complex::with_val(prec, &w1 * &n);
        }
        let tau = Complex::with_val(prec, &w2 / &w1);
        let slack = Float::with_val(prec, 1) - Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
        if Float::with_val(prec, tau.norm_ref()) < slack {
            let old1 = w1.clone();
            w1 = w2;
            w2 = -old1;
        } else {
            return Ok((w1, w2));
        }
    }
    Err(Error::PeriodFailure("basis reduction did not terminate".into()))
}

impl LatticeData {
    /// Lattice spanned by two periods; the basis is reduced and oriented.
    pub fn from_periods(omega1: &Complex, omega2: &Complex, prec: u32) -> Result<Self> {
        let w1 = Complex::with_val(prec, omega1);
        let w2 = Complex::with_val(prec, omega2);
        let (w1, w2) = reduce_basis(w1, w2, prec)?;
        let cross = Complex::with_val(prec, &w2 * conj(&w1));
        let area = Float::with_val(prec, cross.imag() / pi(prec));
        Ok(LatticeData { omega1: w1, omega2: w2, area, prec, curve: None })
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn omega1(&self) -> &Complex {
        &self.omega1
    }

    pub fn omega2(&self) -> &Complex {
        &self.omega2
    }

    pub fn omega1_big(&self) -> BigComplex {
        BigComplex::from_complex(self.omega1.clone())
    }

    pub fn omega2_big(&self) -> BigComplex {
        BigComplex::from_complex(self.omega2.clone())
    }

    /// A = Im(ω2·conj(ω1))/π.
    pub fn area(&self) -> &Float {
        &self.area
    }

    pub fn area_big(&self) -> BigComplex {
        BigComplex::from_complex(Complex::with_val(self.prec, &self.area))
    }

    pub fn tau(&self) -> Complex {
        Complex::with_val(self.prec, &self.omega2 / &self.omega1)
    }

    /// x·ω1 + y·ω2 for rational period coordinates.
    pub fn point(&self, x: &Rational, y: &Rational) -> Complex {
        let a = Complex::with_val(self.prec, &self.omega1 * Float::with_val(self.prec, x));
        let b = Complex::with_val(self.prec, &self.omega2 * Float::with_val(self.prec, y));
        a + b
    }

    /// The lattice point m·ω1 + n·ω2.
    pub fn lattice_point(&self, m: &Integer, n: &Integer) -> Complex {
        let a = Complex::with_val(self.prec, &self.omega1 * m);
        let b = Complex::with_val(self.prec, &self.omega2 * n);
        a + b
    }

    /// Real coordinates (x, y) with z = x·ω1 + y·ω2.
    pub fn coords(&self, z: &Complex) -> (Float, Float) {
        let p = self.prec.max(z.prec().0);
        let den = Float::with_val(p, &self.area * pi(p));
        let y = Float::with_val(p, Complex::with_val(p, z * conj(&self.omega1)).imag() / &den);
        let x = -Float::with_val(p, Complex::with_val(p, z * conj(&self.omega2)).imag() / &den);
        (x, y)
    }

    /// Nearest lattice point (m, n) and the remainder z − (mω1 + nω2).
    pub fn reduce(&self, z: &Complex) -> (Integer, Integer, Complex) {
        let (x, y) = self.coords(z);
        let m = Float::with_val(x.prec(), x.round_ref()).to_integer().unwrap();
        let n = Float::with_val(y.prec(), y.round_ref()).to_integer().unwrap();
        let g = self.lattice_point(&m, &n);
        let r = Complex::with_val(z.prec().0.max(self.prec), z - &g);
        (m, n, r)
    }

    /// Distance from z to Γ relative to |ω1|.
    pub fn relative_distance(&self, z: &Complex) -> Float {
        let (_, _, r) = self.reduce(z);
        let mut best = cabs(&r);
        // the rounded coordinates are not always the closest point for oblique cells
        for (dm, dn) in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1), (1, 1), (-1, -1)] {
            let g = self.lattice_point(&Integer::from(dm), &Integer::from(dn));
            let d = cabs(&Complex::with_val(self.prec, &r - &g));
            if d < best {
                best = d;
            }
        }
        best / cabs(&self.omega1)
    }

    /// Membership test with tolerance 2^{−prec/4} relative to |ω1|.
    pub fn contains(&self, z: &Complex) -> bool {
        self.relative_distance(z) < Float::with_val(64, Float::i_exp(1, -(self.prec as i32) / 4))
    }

    /// ⟨z, w⟩ = exp[(z·w̄ − w·z̄)/A].
    pub fn pairing(&self, z: &Complex, w: &Complex) -> Complex {
        let p = self.prec;
        let a = Complex::with_val(p, z * conj(w));
        let b = Complex::with_val(p, w * conj(z));
        let e = Complex::with_val(p, (a - b) / &self.area);
        e.exp()
    }

    /// The lattice cΓ.
    pub fn scaled(&self, c: &Complex) -> Result<Self> {
        let w1 = Complex::with_val(self.prec, &self.omega1 * c);
        let w2 = Complex::with_val(self.prec, &self.omega2 * c);
        Self::from_periods(&w1, &w2, self.prec)
    }

    /// The complex-conjugate lattice.
    pub fn conj(&self) -> Result<Self> {
        let w1 = conj(&self.omega1);
        let w2 = conj(&self.omega2);
        Self::from_periods(&w1, &-w2, self.prec)
    }

    /// Same lattice at another working precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        LatticeData {
            omega1: Complex::with_val(prec, &self.omega1),
            omega2: Complex::with_val(prec, &self.omega2),
            area: Float::with_val(prec, &self.area),
            prec,
            curve: self.curve.clone(),
        }
    }

    /// (g2(Γ), g3(Γ)) from the Eisenstein q-expansions.
    pub fn invariants(&self) -> (Complex, Complex) {
        let p = self.prec + 32;
        let tau = Complex::with_val(p, &self.omega2 / &self.omega1);
        let two_pi_i = Complex::with_val(p, (0, Float::with_val(p, pi(p) * 2u32)));
        let q = Complex::with_val(p, &two_pi_i * &tau).exp();
        let qabs = cabs(&q).to_f64();
        let mut e4 = Complex::with_val(p, 0);
        let mut e6 = Complex::with_val(p, 0);
        let mut qn = Complex::with_val(p, 1);
        let mut n = 1u32;
        loop {
            qn *= &q;
            let (mut s3, mut s5) = (Integer::new(), Integer::new());
            for d in 1..=n {
                if n % d == 0 {
                    s3 += Integer::from(d).pow(3u32);
                    s5 += Integer::from(d).pow(5u32);
                }
            }
            e4 += Complex::with_val(p, &qn * &s3);
            e6 += Complex::with_val(p, &qn * &s5);
            if (n as f64) * qabs.ln() + 6.0 * (n as f64).ln() < -(p as f64) * std::f64::consts::LN_2 {
                break;
            }
            n += 1;
        }
        let e4 = Complex::with_val(p, e4 * 240u32) + 1u32;
        let e6 = Complex::with_val(p, 1u32) - Complex::with_val(p, e6 * 504u32);
        let scale = Complex::with_val(p, Complex::with_val(p, (Float::with_val(p, pi(p) * 2u32), 0)) / &self.omega1);
        let s4 = Complex::with_val(p, scale.clone().pow(4u32));
        let s6 = Complex::with_val(p, scale.pow(6u32));
        let g2 = Complex::with_val(self.prec, s4 * e4 / 12u32);
        let g3 = Complex::with_val(self.prec, s6 * e6 / 216u32);
        (g2, g3)
    }

    /// Reduced theta function θ(z) = exp(−e2* z²/2)σ(z), evaluated through
    /// Jacobi's θ1 after moving z into the fundamental cell.
    pub fn theta(&self, z: &Complex) -> Complex {
        let p = self.prec + 32;
        let (m, n, r) = self.reduce(z);
        let r = Complex::with_val(p, r);
        let base = self.theta_cell(&r, p);
        if m == 0 && n == 0 {
            return Complex::with_val(self.prec, base);
        }
        let g = Complex::with_val(p, self.lattice_point(&m, &n));
        let sign = if m.is_even() && n.is_even() { 1 } else { -1 };
        let lin = Complex::with_val(p, &r * conj(&g));
        let quad = Float::with_val(p, g.norm_ref()) / 2u32;
        let expo = Complex::with_val(p, (lin + quad) / &self.area);
        let out = base * expo.exp() * sign;
        Complex::with_val(self.prec, out)
    }

    fn theta_cell(&self, z: &Complex, p: u32) -> Complex {
        let pi_p = pi(p);
        let w1 = Complex::with_val(p, &self.omega1);
        let tau = Complex::with_val(p, &self.omega2 / &w1);
        let i_pi = Complex::with_val(p, (0, &pi_p));
        let q = Complex::with_val(p, &i_pi * &tau).exp();
        let v = Complex::with_val(p, z * &pi_p) / &w1;
        let log_q = Float::with_val(p, tau.imag() * &pi_p).to_f64();
        let im_v = v.imag().to_f64().abs();
        let mut th = Complex::with_val(p, 0);
        let mut dth = Complex::with_val(p, 0);
        let mut k = 0u32;
        loop {
            let e = Float::with_val(p, (Float::with_val(p, k) + 0.5f64).pow(2u32));
            let qk = Complex::with_val(p, q.clone().pow(&e));
            let odd = 2 * k + 1;
            let s = Complex::with_val(p, Complex::with_val(p, &v * odd).sin_ref());
            let term = Complex::with_val(p, &qk * s);
            let dterm = Complex::with_val(p, &qk * odd);
            if k % 2 == 0 {
                th += term;
                dth += dterm;
            } else {
                th -= term;
                dth -= dterm;
            }
            let kf = f64::from(k) + 0.5;
            if -log_q * kf * kf + (2.0 * kf) * im_v < -(p as f64) * std::f64::consts::LN_2 - 8.0 {
                break;
            }
            k += 1;
        }
        // θ1(v) = 2 Σ ..., θ1'(0) = 2 Σ ...; the factors of 2 cancel
        let gauss = Complex::with_val(p, z * z) * conj(&w1) / (Complex::with_val(p, &w1 * &self.area) * 2u32);
        let gauss = Complex::with_val(p, gauss).exp();
        Complex::with_val(p, &w1 * gauss * th / (dth * &pi_p))
    }
}

fn cubic_roots(g2: &Rational, g3: &Rational, prec: u32) -> Result<[Complex; 3]> {
    // x³ − (g2/4)x − g3/4
    let c1 = Complex::with_val(prec, Rational::from(g2 / 4u32) * -1i32);
    let c0 = Complex::with_val(prec, Rational::from(g3 / 4u32) * -1i32);
    let f = |x: &Complex| -> Complex {
        let x2 = Complex::with_val(prec, x * x);
        Complex::with_val(prec, &x2 * x) + Complex::with_val(prec, &c1 * x) + &c0
    };
    let scale = 1.0 + cabs(&c1).to_f64().max(cabs(&c0).to_f64());
    let seed = cplx(prec, 0.4, 0.9);
    let mut r: Vec<Complex> = (0..3)
        .map(|k| Complex::with_val(prec, Complex::with_val(prec, seed.clone().pow(k as u32)) * scale))
        .collect();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    for _ in 0..1000 {
        let mut delta = Float::with_val(prec, 0);
        for i in 0..3 {
            let mut den = Complex::with_val(prec, 1);
            for j in 0..3 {
                if i != j {
                    den *= Complex::with_val(prec, &r[i] - &r[j]);
                }
            }
            let step = Complex::with_val(prec, f(&r[i]) / den);
            let s = cabs(&step);
            if s > delta {
                delta = s;
            }
            r[i] -= step;
        }
        if delta < Float::with_val(prec, &tol * scale) {
            let [a, b, c] = [r[0].clone(), r[1].clone(), r[2].clone()];
            return Ok([a, b, c]);
        }
    }
    Err(Error::PeriodFailure("root finder did not converge".into()))
}

fn agm(a: &Complex, b: &Complex, prec: u32) -> Complex {
    let mut a = a.clone();
    let mut b = b.clone();
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4));
    for _ in 0..prec {
        let a1 = Complex::with_val(prec, &a + &b) / 2u32;
        let mut r = Complex::with_val(prec, &a * &b).sqrt();
        let minus = cabs(&Complex::with_val(prec, &a1 - &r));
        let plus = cabs(&Complex::with_val(prec, &a1 + &r));
        if minus > plus {
            r = -r;
        }
        a = a1;
        b = r;
        if cabs(&Complex::with_val(prec, &a - &b)) <= Float::with_val(prec, &tol * cabs(&a)) {
            break;
        }
    }
    a
}

/// Period lattice of y² = 4x³ − g2x − g3 via the complex AGM, with an
/// Eisenstein-series back-check of g2 and g3.
pub fn compute_periods(curve: &CurveData, prec_bits: u32) -> Result<LatticeData> {
    let (g2, g3) = curve.rational_invariants()?;
    let wp = prec_bits + 64;
    let [e1, e2, e3] = cubic_roots(&g2, &g3, wp)?;
    let d = |x: &Complex, y: &Complex| Complex::with_val(wp, x - y).sqrt();
    let pi_c = Complex::with_val(wp, pi(wp));
    let w1 = Complex::with_val(wp, &pi_c / agm(&d(&e1, &e3), &d(&e1, &e2), wp));
    let w2 = Complex::with_val(wp, &pi_c / agm(&d(&e2, &e3), &d(&e2, &e1), wp));
    let mut lat = LatticeData::from_periods(&w1, &w2, wp)?;
    let (c2, c3) = lat.invariants();
    let resid = cabs(&(c2 - Complex::with_val(wp, &g2))).max(&cabs(&(c3 - Complex::with_val(wp, &g3))));
    let scale = Float::with_val(wp, 1) + Float::with_val(wp, g2.clone().abs()) + Float::with_val(wp, g3.clone().abs());
    let bound = Float::with_val(wp, Float::i_exp(1, -(prec_bits as i32) / 2)) * scale;
    if resid > bound {
        return Err(Error::PeriodFailure(format!("Eisenstein back-check residual {}", resid.to_f64())));
    }
    lat = lat.with_prec(prec_bits);
    lat.curve = Some(curve.clone());
    Ok(lat)
}

/// ⟨z, w⟩_Γ as a [`BigComplex`].
pub fn pairing(z: &BigComplex, w: &BigComplex, lattice: &LatticeData) -> BigComplex {
    BigComplex::from_complex(lattice.pairing(z.inner(), w.inner()))
}
