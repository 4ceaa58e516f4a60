use rug::ops::Pow;
use rug::{Complex, Float, Integer};

fn tiny(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(prec as i32) * 2))
}

fn eps(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(prec as i32)))
}

fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

/// Integer value of `s` when it is one.
pub(crate) fn as_integer(s: &Complex) -> Option<Integer> {
    if !s.imag().is_zero() {
        return None;
    }
    if s.real().is_integer() {
        s.real().to_integer()
    } else {
        None
    }
}

/// Upper incomplete gamma Γ(s, x) for complex s and real x > 0, with Γ(s)
/// cached for the small-argument branch.
pub(crate) struct IncompleteGamma {
    s: Complex,
    prec: u32,
    kind: Kind,
}

enum Kind {
    PositiveInteger(u32),
    NonPositiveInteger(u32),
    General(Option<Complex>),
}

impl IncompleteGamma {
    pub fn new(s: &Complex, prec: u32) -> Self {
        let s = Complex::with_val(prec, s);
        let kind = match as_integer(&s).and_then(|n| n.to_i64()) {
            Some(n) if (1..=4096).contains(&n) => Kind::PositiveInteger(n as u32),
            Some(n) if (-4096..=0).contains(&n) => Kind::NonPositiveInteger((-n) as u32),
            _ => Kind::General(None),
        };
        IncompleteGamma { s, prec, kind }
    }

    /// Γ(s), or `None` at the poles s = 0, −1, −2, ….
    pub fn complete(&mut self) -> Option<Complex> {
        let p = self.prec;
        match &self.kind {
            Kind::PositiveInteger(n) => Some(Complex::with_val(p, Integer::from(Integer::factorial(n - 1)))),
            Kind::NonPositiveInteger(_) => None,
            Kind::General(Some(g)) => Some(g.clone()),
            Kind::General(None) => {
                let g = if self.s.imag().is_zero() {
                    Complex::with_val(p, self.s.real().clone().gamma())
                } else {
                    let x = Float::with_val(p, cabs(&self.s) + 24u32 + p / 16);
                    let guard = p + (x.to_f64() * 1.5) as u32 + 32;
                    let s = Complex::with_val(guard, &self.s);
                    let x = Float::with_val(guard, &x);
                    let g = continued_fraction(&s, &x, guard) + lower_series(&s, &x, guard);
                    Complex::with_val(p, g)
                };
                self.kind = Kind::General(Some(g.clone()));
                Some(g)
            }
        }
    }

    pub fn eval(&mut self, x: &Float) -> Complex {
        let p = self.prec;
        let x = Float::with_val(p, x);
        match self.kind {
            Kind::PositiveInteger(n) => {
                // (n−1)! e^{−x} Σ_{k<n} x^k/k!
                let mut term = Float::with_val(p, 1);
                let mut sum = Float::with_val(p, 1);
                for k in 1..n {
                    term *= &x;
                    term /= k;
                    sum += &term;
                }
                let ex = Float::with_val(p, (-x.clone()).exp());
                Complex::with_val(p, sum * ex * Integer::from(Integer::factorial(n - 1)))
            }
            Kind::NonPositiveInteger(n) => {
                // Γ(0, x) = E1(x), then Γ(s, x) = (Γ(s+1, x) − x^s e^{−x})/s downward
                let mut g = -Float::with_val(p, (-x.clone()).eint());
                let ex = Float::with_val(p, (-x.clone()).exp());
                for k in 1..=n {
                    let xs = Float::with_val(p, (&x).pow(-(k as i32)));
                    g = (g - xs * &ex) / -(k as i32);
                }
                Complex::with_val(p, g)
            }
            Kind::General(_) => {
                let threshold = cabs(&self.s) + 1u32;
                if x >= threshold {
                    continued_fraction(&self.s, &x, p)
                } else {
                    let g = self.complete().expect("general s is not a pole");
                    g - lower_series(&self.s, &x, p)
                }
            }
        }
    }
}

/// γ(s, x) = x^s e^{−x} Σ_k x^k/(s(s+1)…(s+k)).
fn lower_series(s: &Complex, x: &Float, prec: u32) -> Complex {
    let mut term = Complex::with_val(prec, s.clone().recip());
    let mut sum = term.clone();
    let e = eps(prec);
    let mut k = 1u32;
    loop {
        term *= x;
        term /= Complex::with_val(prec, s + k);
        sum += &term;
        if Float::with_val(prec, x - k).is_sign_negative() && cabs(&term) < Float::with_val(prec, &e * cabs(&sum)) {
            break;
        }
        k += 1;
        if k > 10_000_000 {
            break;
        }
    }
    prefactor(s, x, prec) * sum
}

fn prefactor(s: &Complex, x: &Float, prec: u32) -> Complex {
    let lx = Float::with_val(prec, x.ln_ref());
    (Complex::with_val(prec, s * lx) - x).exp()
}

/// Γ(s, x) by the Legendre continued fraction (modified Lentz).
fn continued_fraction(s: &Complex, x: &Float, prec: u32) -> Complex {
    let t = tiny(prec);
    let e = eps(prec);
    let fix = |z: Complex| -> Complex {
        if cabs(&z) < t {
            Complex::with_val(prec, &t)
        } else {
            z
        }
    };
    let mut b = Complex::with_val(prec, x + Float::with_val(prec, 1)) - s;
    let mut c = Complex::with_val(prec, t.clone().recip());
    let mut d = fix(b.clone()).recip();
    let mut h = d.clone();
    for i in 1..2_000_000u32 {
        let an = Complex::with_val(prec, Complex::with_val(prec, s - i) * i);
        b += 2u32;
        d = fix(Complex::with_val(prec, &an * &d) + &b).recip();
        c = fix(Complex::with_val(prec, &an / &c) + &b);
        let del = Complex::with_val(prec, &d * &c);
        h *= &del;
        if cabs(&(del - 1u32)) < e {
            break;
        }
    }
    prefactor(s, x, prec) * h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        let d = Float::with_val(64, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64();
        d <= tol * (1.0 + Float::with_val(64, b.abs_ref()).to_f64())
    }

    #[test]
    fn branches_agree_on_real_s() {
        let p = 200;
        for s in [0.5f64, 2.5, 3.0, 1.0] {
            let sc = Complex::with_val(p, (s, 0));
            let mut g = IncompleteGamma::new(&sc, p);
            let mut h = IncompleteGamma { s: sc.clone(), prec: p, kind: Kind::General(None) };
            for x in [0.1f64, 1.0, 3.7, 9.0] {
                let xf = Float::with_val(p, x);
                let a = g.eval(&xf);
                let b = h.eval(&xf);
                let cf = continued_fraction(&sc, &xf, p);
                assert!(close(&a, &b, 1e-50), "s={s} x={x}");
                if x > 2.0 * s + 2.0 {
                    assert!(close(&a, &cf, 1e-50));
                }
            }
        }
    }

    #[test]
    fn exponential_integral_and_recurrence() {
        let p = 128;
        let x = Float::with_val(p, 1.5);
        let g0 = IncompleteGamma::new(&Complex::with_val(p, 0), p).eval(&x);
        // E1(1.5) = 0.10001958240663...
        assert!((g0.real().to_f64() - 0.100_019_582_406_632_6).abs() < 1e-15);
        let g1 = IncompleteGamma::new(&Complex::with_val(p, -1), p).eval(&x);
        let want = (Float::with_val(p, (-x.clone()).exp()) / &x - g0.real().clone()).to_f64();
        assert!((g1.real().to_f64() - want).abs() < 1e-15);
    }

    #[test]
    fn complex_gamma_reflection() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let p = 160;
        let s = Complex::with_val(p, (0.5, 2.0));
        let g = IncompleteGamma::new(&s, p).complete().unwrap();
        let pi = Float::with_val(p, rug::float::Constant::Pi);
        let want = Float::with_val(p, &pi / Float::with_val(p, (pi.clone() * 2u32).cosh()));
        let got = Float::with_val(p, g.norm_ref());
        assert!((got - want).abs() < 1e-40);
    }

    #[test]
    fn complex_branches_agree() {
        let p = 160;
        let s = Complex::with_val(p, (1.5, -0.75));
        let mut g = IncompleteGamma::new(&s, p);
        for x in [0.3f64, 2.0, 6.0] {
            let xf = Float::with_val(p, x);
            let direct = g.eval(&xf);
            let split = g.complete().unwrap() - lower_series(&s, &xf, p);
            assert!(close(&direct, &split, 1e-35), "x={x}");
        }
    }
}
