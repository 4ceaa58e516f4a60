use crate::coeffring::ExactScalar;
use crate::curvelattice::LatticeData;
use crate::eklerch::{eisenstein_kronecker_lerch, ek_number, EkPoint, QuadraticOrder};
use crate::{Error, Result};
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde_json::{json, Value};

fn conj(z: &Complex) -> Complex {
    Complex::with_val(z.prec().0, z.conj_ref())
}

fn abs64(z: &Complex) -> f64 {
    Float::with_val(53, z.abs_ref()).to_f64()
}

fn complex_json(z: &Complex) -> Value {
    crate::coeffring::BigComplex::from_complex(z.clone()).to_json()
}

fn check_pole(lattice: &LatticeData, z: &Complex, what: &str) -> Result<()> {
    if lattice.contains(z) {
        return Err(Error::Pole(format!("{what} lies on the lattice")));
    }
    Ok(())
}

/// exp(−(z0·w̄0 + z·w̄0 + w·z̄0)/A)
fn translation_factor(lattice: &LatticeData, z0: &Complex, w0: &Complex, z: &Complex, w: &Complex) -> Complex {
    let p = lattice.prec();
    let w0b = conj(w0);
    let mut e = Complex::with_val(p, z0 * &w0b);
    e += Complex::with_val(p, z * &w0b);
    e += Complex::with_val(p, w * conj(z0));
    Complex::with_val(p, -e / lattice.area()).exp()
}

/// Θ(z, w) = θ(z+w)/(θ(z)θ(w)).
pub fn kronecker_numeric(z: &Complex, w: &Complex, lattice: &LatticeData) -> Result<Complex> {
    check_pole(lattice, z, "z")?;
    check_pole(lattice, w, "w")?;
    let p = lattice.prec();
    let s = Complex::with_val(p, z + w);
    let den = Complex::with_val(p, lattice.theta(z) * lattice.theta(w));
    Ok(Complex::with_val(p, lattice.theta(&s) / den))
}

/// Θ_{z0,w0}(z, w) = exp(−z0w̄0/A)·exp(−(zw̄0 + wz̄0)/A)·Θ(z+z0, w+w0).
pub fn kronecker_translated_numeric(z0: &Complex, w0: &Complex, z: &Complex, w: &Complex, lattice: &LatticeData) -> Result<Complex> {
    let p = lattice.prec();
    let zz = Complex::with_val(p, z + z0);
    let ww = Complex::with_val(p, w + w0);
    let theta = kronecker_numeric(&zz, &ww, lattice)?;
    Ok(translation_factor(lattice, z0, w0, z, w) * theta)
}

/// Distance from 0 to the nearest nonzero point of c + Γ.
fn nearest_pole(lattice: &LatticeData, c: &Complex) -> f64 {
    let (_, _, r) = lattice.reduce(c);
    let scale = abs64(lattice.omega1());
    let mut best = f64::INFINITY;
    for m in -2i32..=2 {
        for n in -2i32..=2 {
            let g = lattice.lattice_point(&Integer::from(m), &Integer::from(n));
            let d = abs64(&Complex::with_val(53, &r + &g));
            if d > 1e-12 * scale && d < best {
                best = d;
            }
        }
    }
    best
}

/// Laurent coefficients c_{m,n}, −1 ≤ m ≤ max_m, −1 ≤ n ≤ max_n, of
/// Θ_{z0,w0}(z, w) at the origin, from trapezoid sums on a torus
/// |z| = r_z, |w| = r_w.
#[derive(Clone, Debug)]
pub struct TorusCoefficients {
    pub max_m: u32,
    pub max_n: u32,
    pub radii: (f64, f64),
    pub points: usize,
    values: Vec<Complex>,
}

impl TorusCoefficients {
    pub fn get(&self, m: i64, n: i64) -> Option<&Complex> {
        if m < -1 || n < -1 || m > self.max_m as i64 || n > self.max_n as i64 {
            return None;
        }
        let row = self.max_n as usize + 2;
        self.values.get((m + 1) as usize * row + (n + 1) as usize)
    }

}

const RADIUS_FRACTION: f64 = 0.4;

/// Number of torus points making the aliasing (r/R)^N fall below `target`.
fn torus_points(target: f64, max_deg: u32) -> usize {
    let n = (target.ln() / RADIUS_FRACTION.ln()).ceil().max(8.0) as usize + 8;
    let n = n.max(4 * (max_deg as usize + 2));
    n.div_ceil(4) * 4
}

fn worker_count(jobs: usize) -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(jobs).max(1)
}

pub fn torus_coefficients(z0: &Complex, w0: &Complex, lattice: &LatticeData, max_m: u32, max_n: u32, target: f64) -> Result<TorusCoefficients> {
    let p = lattice.prec();
    let rz = RADIUS_FRACTION * nearest_pole(lattice, &Complex::with_val(p, -z0));
    let rw = RADIUS_FRACTION * nearest_pole(lattice, &Complex::with_val(p, -w0));
    let n_pts = torus_points(target, max_m.max(max_n));
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let roots: Vec<Complex> = (0..n_pts)
        .map(|j| {
            let t = Float::with_val(p, &two_pi * j as u32) / n_pts as u32;
            Complex::with_val(p, (Float::with_val(p, t.cos_ref()), Float::with_val(p, t.sin_ref())))
        })
        .collect();
    let zs: Vec<Complex> = roots.iter().map(|r| Complex::with_val(p, r * rz)).collect();
    let ws: Vec<Complex> = roots.iter().map(|r| Complex::with_val(p, r * rw)).collect();
    let area = lattice.area();
    // per-variable factors exp(−z w̄0/A)/θ(z+z0) and exp(−w z̄0/A)/θ(w+w0)
    let side = |pts: &[Complex], shift: &Complex, other: &Complex| -> Vec<Complex> {
        let ob = conj(other);
        pts.iter()
            .map(|x| {
                let e = Complex::with_val(p, -Complex::with_val(p, x * &ob) / area).exp();
                let t = lattice.theta(&Complex::with_val(p, x + shift));
                Complex::with_val(p, e / t)
            })
            .collect()
    };
    let fz = side(&zs, z0, w0);
    let fw = side(&ws, w0, z0);
    let c0 = Complex::with_val(p, -Complex::with_val(p, z0 * conj(w0)) / area).exp();
    let s0 = Complex::with_val(p, z0 + w0);
    let rows = max_n as usize + 2;
    // g[j][n] = Σ_k f(z_j, w_k) ζ^{−k·n}
    let workers = worker_count(n_pts);
    let chunk = n_pts.div_ceil(workers);
    let mut g: Vec<Vec<Complex>> = Vec::with_capacity(n_pts);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|t| {
                let (zs, ws, fz, fw, roots, s0) = (&zs, &ws, &fz, &fw, &roots, &s0);
                scope.spawn(move || {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(n_pts);
                    let mut out = Vec::new();
                    for j in lo..hi {
                        let mut acc = vec![Complex::new(p); rows];
                        for k in 0..n_pts {
                            let arg = Complex::with_val(p, &zs[j] + &ws[k]) + s0;
                            let f = Complex::with_val(p, lattice.theta(&arg) * &fz[j]) * &fw[k];
                            for (idx, slot) in acc.iter_mut().enumerate() {
                                // ζ^{−k·n} with n = idx − 1
                                let ex = (n_pts - (k * (idx + n_pts - 1)) % n_pts) % n_pts;
                                *slot += Complex::with_val(p, &f * &roots[ex]);
                            }
                        }
                        out.push(acc);
                    }
                    out
                })
            })
            .collect();
        for h in handles {
            g.extend(h.join().expect("torus worker panicked"));
        }
    });
    let scale = Float::with_val(p, (n_pts * n_pts) as u32);
    let mut values = Vec::with_capacity((max_m as usize + 2) * rows);
    let rz_f = Float::with_val(p, rz);
    let rw_f = Float::with_val(p, rw);
    for mi in 0..(max_m as usize + 2) {
        let m = mi as i32 - 1;
        for ni in 0..rows {
            let n = ni as i32 - 1;
            let mut acc = Complex::new(p);
            for (j, gj) in g.iter().enumerate() {
                let ex = (n_pts - (j * (mi + n_pts - 1)) % n_pts) % n_pts;
                acc += Complex::with_val(p, &gj[ni] * &roots[ex]);
            }
            let rpow = Float::with_val(p, rz_f.clone().pow(m) * Float::with_val(p, rw_f.clone().pow(n)));
            values.push(Complex::with_val(p, acc / &scale / rpow) * c0.clone());
        }
    }
    Ok(TorusCoefficients { max_m, max_n, radii: (rz, rw), points: n_pts, values })
}

/// One coefficient comparison; `expected` is `None` when no reference value
/// exists and the numeric value is only recorded.
#[derive(Clone, Debug)]
pub struct CoefficientCheck {
    pub label: String,
    pub numeric: Complex,
    pub expected: Option<Complex>,
    pub deviation: Option<f64>,
}

impl CoefficientCheck {
    fn new(label: String, numeric: &Complex, expected: Option<Complex>) -> Self {
        let deviation = expected.as_ref().map(|e| abs64(&Complex::with_val(numeric.prec().0, numeric - e)));
        CoefficientCheck { label, numeric: numeric.clone(), expected, deviation }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "numeric": complex_json(&self.numeric),
            "expected": self.expected.as_ref().map(complex_json),
            "deviation": self.deviation,
        })
    }
}

#[derive(Clone, Debug)]
pub struct GeneratingFunctionReport {
    pub polar: Vec<CoefficientCheck>,
    pub coefficients: Vec<CoefficientCheck>,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
    pub torus_points: usize,
}

impl GeneratingFunctionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "polar": self.polar.iter().map(CoefficientCheck::to_json).collect::<Vec<_>>(),
            "coefficients": self.coefficients.iter().map(CoefficientCheck::to_json).collect::<Vec<_>>(),
            "max_deviation": self.max_deviation,
            "tol": self.tol,
            "passed": self.passed,
            "torus_points": self.torus_points,
        })
    }
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Compares the Laurent coefficients of Θ_{z0,w0} at the origin with
/// ⟨w0,z0⟩δ(z0)/z + δ(w0)/w + Σ (−1)^{a+b−1} e*_{a,b}(z0,w0)/(a!A^a) z^{b−1}w^a,
/// for torsion points given in period coordinates.
pub fn verify_generating_function(
    z0: (&Rational, &Rational),
    w0: (&Rational, &Rational),
    a_max: u32,
    b_max: u32,
    lattice: &LatticeData,
    tol: f64,
) -> Result<GeneratingFunctionReport> {
    if b_max == 0 {
        return Err(Error::Precondition("b_max must be positive".into()));
    }
    let p = lattice.prec();
    let zp = EkPoint::torsion(z0.0, z0.1, lattice);
    let wp = EkPoint::torsion(w0.0, w0.1, lattice);
    let target = (tol * 1e-4).max(2f64.powi(-(p as i32) + 16));
    let coeffs = torus_coefficients(zp.z(), wp.z(), lattice, b_max - 1, a_max, target)?;
    let one = Complex::with_val(p, 1);
    let zero = Complex::new(p);
    let pair = lattice.pairing(wp.z(), zp.z());
    let polar = vec![
        CoefficientCheck::new("z^-1".into(), coeffs.get(-1, 0).unwrap(), Some(if zp.in_lattice() { pair } else { zero.clone() })),
        CoefficientCheck::new("w^-1".into(), coeffs.get(0, -1).unwrap(), Some(if wp.in_lattice() { one } else { zero })),
    ];
    let area = Float::with_val(p, lattice.area());
    let mut coefficients = Vec::new();
    for a in 0..=a_max {
        for b in 1..=b_max {
            let ek = ek_number(a, b, &zp, &wp, lattice, target)?;
            let mut den = Float::with_val(p, area.clone().pow(a)) * factorial(a);
            if (a + b - 1) % 2 == 1 {
                den = -den;
            }
            let expected = Complex::with_val(p, ek.value / den);
            let label = format!("z^{} w^{} (a={a}, b={b})", b - 1, a);
            coefficients.push(CoefficientCheck::new(label, coeffs.get((b - 1) as i64, a as i64).unwrap(), Some(expected)));
        }
    }
    let max_deviation = polar.iter().chain(coefficients.iter()).filter_map(|c| c.deviation).fold(0.0, f64::max);
    Ok(GeneratingFunctionReport { polar, coefficients, max_deviation, tol, passed: max_deviation <= tol, torus_points: coeffs.points })
}

/// Residuals of a pointwise identity at a list of sample points.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl IdentityReport {
    fn from_residuals(residuals: Vec<f64>, tol: f64) -> Self {
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        IdentityReport { residuals, max_residual, tol, passed: max_residual <= tol }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "residuals": self.residuals,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
        })
    }
}

/// |Θ(z, w) − exp(zw̄/A)·K_1(z, w, 1)| at each sample point.
pub fn verify_kronecker_identity(points: &[(Complex, Complex)], lattice: &LatticeData, tol: f64) -> Result<IdentityReport> {
    let p = lattice.prec();
    let target = (tol * 1e-3).max(2f64.powi(-(p as i32) + 16));
    let one = Complex::with_val(p, 1);
    let mut residuals = Vec::new();
    for (z, w) in points {
        let theta = kronecker_numeric(z, w, lattice)?;
        let k1 = eisenstein_kronecker_lerch(1, &EkPoint::numeric(z, lattice), &EkPoint::numeric(w, lattice), &one, lattice, target)?;
        let e = Complex::with_val(p, Complex::with_val(p, z * conj(w)) / lattice.area()).exp();
        residuals.push(abs64(&(theta - e * k1.value)));
    }
    Ok(IdentityReport::from_residuals(residuals, tol))
}

/// Residuals of the distribution relation at the sample points.
#[derive(Clone, Debug)]
pub struct DistributionReport {
    pub identity: IdentityReport,
    pub norm_a: u32,
    pub norm_b: u32,
    pub terms: usize,
}

impl DistributionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "norm_a": self.norm_a,
            "norm_b": self.norm_b,
            "terms": self.terms,
            "identity": self.identity.to_json(),
        })
    }
}

/// Representatives of c^{-1}Γ/Γ for an O-stable lattice Γ.
fn torsion_reps(c: &Complex, norm: u32, lattice: &LatticeData) -> Vec<Complex> {
    let p = lattice.prec();
    let mut reps: Vec<Complex> = Vec::new();
    for m in 0..norm {
        for n in 0..norm {
            let g = lattice.lattice_point(&Integer::from(m), &Integer::from(n));
            let x = Complex::with_val(p, &g / c);
            if !reps.iter().any(|r| lattice.contains(&Complex::with_val(p, &x - r))) {
                reps.push(x);
            }
        }
    }
    reps
}

/// Σ_{α ∈ 𝔞^{-1}Γ/Γ, β ∈ 𝔟^{-1}Γ/Γ} ⟨εα, w0⟩ Θ_{z0+εα, w0+εβ}(z, w; Γ)
/// against N(𝔞𝔟)·Θ_{N𝔞·z0, N𝔟·w0}(N𝔞·z, N𝔟·w; (𝔞𝔟)‾Γ), for principal ideals
/// 𝔞 = (a), 𝔟 = (b) and an O-stable lattice Γ.
///
/// ε must satisfy ε ≡ 1 mod 𝔞𝔟; the condition ε ≡ 0 mod 𝔟̄ is enforced
/// only when 𝔞 ≠ (1).
#[allow(clippy::too_many_arguments)]
pub fn verify_distribution(
    order: &QuadraticOrder,
    a: &ExactScalar,
    b: &ExactScalar,
    epsilon: &ExactScalar,
    z0: &Complex,
    w0: &Complex,
    lattice: &LatticeData,
    samples: &[(Complex, Complex)],
    tol: f64,
) -> Result<DistributionReport> {
    let p = lattice.prec();
    for x in [a, b, epsilon] {
        if !order.is_integral(x) || x.is_zero() {
            return Err(Error::Precondition(format!("{x} is not a nonzero element of the order")));
        }
    }
    let omega = order.omega().to_complex(p);
    for g in [lattice.omega1(), lattice.omega2()] {
        if !lattice.contains(&Complex::with_val(p, g * &omega)) {
            return Err(Error::Precondition("lattice is not stable under the order".into()));
        }
    }
    let ab = a.checked_mul(b)?;
    let em1 = epsilon.checked_sub(&ExactScalar::one())?;
    if !order.is_integral(&em1.checked_div(&ab)?) {
        return Err(Error::EpsilonCongruence(format!("{epsilon} is not 1 modulo ({ab})")));
    }
    let na = a.norm().numer().to_u32().ok_or_else(|| Error::Precondition("ideal norm too large".into()))?;
    let nb = b.norm().numer().to_u32().ok_or_else(|| Error::Precondition("ideal norm too large".into()))?;
    if na != 1 && !order.is_integral(&epsilon.checked_div(&b.conj())?) {
        return Err(Error::EpsilonCongruence(format!("{epsilon} is not 0 modulo ({})", b.conj())));
    }
    let eps = epsilon.to_complex(p);
    let alphas: Vec<Complex> = torsion_reps(&a.to_complex(p), na, lattice).into_iter().map(|x| Complex::with_val(p, x * &eps)).collect();
    let betas: Vec<Complex> = torsion_reps(&b.to_complex(p), nb, lattice).into_iter().map(|x| Complex::with_val(p, x * &eps)).collect();
    let big = if na * nb == 1 {
        lattice.clone()
    } else {
        lattice.scaled(&ab.conj().to_complex(p))?
    };
    let z0n = Complex::with_val(p, z0 * na);
    let w0n = Complex::with_val(p, w0 * nb);
    let mut residuals = Vec::new();
    for (z, w) in samples {
        let mut lhs = Complex::new(p);
        for al in &alphas {
            let za = Complex::with_val(p, z0 + al);
            let pair = lattice.pairing(al, w0);
            for be in &betas {
                let wb = Complex::with_val(p, w0 + be);
                lhs += Complex::with_val(p, &pair * kronecker_translated_numeric(&za, &wb, z, w, lattice)?);
            }
        }
        let zn = Complex::with_val(p, z * na);
        let wn = Complex::with_val(p, w * nb);
        let rhs = kronecker_translated_numeric(&z0n, &w0n, &zn, &wn, &big)? * (na * nb);
        residuals.push(abs64(&(lhs - rhs)));
    }
    Ok(DistributionReport {
        identity: IdentityReport::from_residuals(residuals, tol),
        norm_a: na,
        norm_b: nb,
        terms: alphas.len() * betas.len(),
    })
}
