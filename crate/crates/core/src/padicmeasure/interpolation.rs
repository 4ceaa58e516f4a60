use super::measure::{measure_with_period, moment, restrict_to_units, MeasureSeries};
use super::period::{solve_padic_period, PadicPeriod};
use crate::coeffring::{embed_padic, ExactScalar, PadicScalar, Unramified};
use crate::curvelattice::CurveData;
use crate::eklerch::QuadraticOrder;
use crate::kronecker::{ek_from_expansion, kronecker_exact};
use crate::{Error, Result};
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::{json, Value};

/// Generator π of the prime above p with i_p(π) ∈ pZ_p, smallest in |x|+|y|
/// (ties prefer larger x, then larger y).
pub fn prime_above(order: &QuadraticOrder, p: u64) -> Result<ExactScalar> {
    let bound = (p as f64).sqrt() as i64 + 2;
    let target = Rational::from(p);
    let mut best: Option<((i64, i64, i64), ExactScalar)> = None;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let e = order.elem(&Integer::from(x), &Integer::from(y));
            if e.norm() != target {
                continue;
            }
            let v = embed_padic(&e, p, 2)?.val_or_prec();
            if v < 1 {
                continue;
            }
            let size = (x.abs() + y.abs(), -x, -y);
            if best.as_ref().is_none_or(|(s, _)| size < *s) {
                best = Some((size, e));
            }
        }
    }
    best.map(|(_, e)| e).ok_or_else(|| Error::Precondition(format!("{p} has no principal prime factor of norm {p}")))
}

/// ε ≡ 1 mod π, ε ≡ 0 mod π̄ of smallest norm (ties broken by coordinates).
pub fn crt_epsilon(order: &QuadraticOrder, pi: &ExactScalar) -> Result<ExactScalar> {
    let p = pi.norm();
    let bound = p.to_f64() as i64 + 1;
    let bar = pi.conj();
    let one = ExactScalar::one();
    let mut best: Option<(Rational, i64, i64, ExactScalar)> = None;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let e = order.elem(&Integer::from(x), &Integer::from(y));
            if !order.is_integral(&e.checked_div(&bar)?) || !order.is_integral(&e.checked_sub(&one)?.checked_div(pi)?) {
                continue;
            }
            let key = (e.norm(), x, y);
            if best.as_ref().is_none_or(|(n, bx, by, _)| (&key.0, key.1, key.2) < (n, *bx, *by)) {
                best = Some((key.0, x, y, e));
            }
        }
    }
    best.map(|b| b.3).ok_or_else(|| Error::Precondition("no CRT representative found".into()))
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Measure order that lets the unit restriction resolve every moment
/// ∫ x^k y^l with k ≤ k_max, l ≤ l_max to at least one digit.
pub fn restriction_order(p: u64, k_max: u32, l_max: u32) -> u32 {
    let p = p as u32;
    let need = |m: u32| p * (m / p + 1) - 1;
    need(k_max) + need(l_max)
}

#[derive(Clone, Debug)]
pub struct InterpolationRow {
    pub a: u32,
    pub b: u32,
    /// (b−1)!a! times the z^{b−1}w^a coefficient of the four-term combination
    pub four_term: ExactScalar,
    pub closed_form: ExactScalar,
    pub exact_match: bool,
    pub moment: PadicScalar,
    pub expected: PadicScalar,
    pub compared_digits: i64,
    pub spec_buffer_digits: i64,
    pub padic_match: bool,
}

impl InterpolationRow {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a,
            "b": self.b,
            "four_term": self.four_term.to_json(),
            "closed_form": self.closed_form.to_json(),
            "exact_match": self.exact_match,
            "moment": self.moment.to_json(),
            "expected": self.expected.to_json(),
            "compared_digits": self.compared_digits,
            "buffer_digits": self.spec_buffer_digits,
            "padic_match": self.padic_match,
        })
    }
}

#[derive(Clone, Debug)]
pub struct InterpolationReport {
    pub p: u64,
    pub abs_prec: u32,
    pub f: usize,
    pub pi: ExactScalar,
    pub epsilon: ExactScalar,
    pub period: PadicPeriod,
    pub measure_order: u32,
    pub rows: Vec<InterpolationRow>,
    pub exact_pass: bool,
    pub padic_pass: bool,
    pub min_digits: i64,
}

impl InterpolationReport {
    pub fn passed(&self) -> bool {
        self.exact_pass && self.padic_pass
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "abs_prec": self.abs_prec,
            "f": self.f,
            "pi": self.pi.to_json(),
            "epsilon": self.epsilon.to_json(),
            "period": self.period.to_json(),
            "measure_order": self.measure_order,
            "exact_pass": self.exact_pass,
            "padic_pass": self.padic_pass,
            "min_digits": self.min_digits,
            "rows": self.rows.iter().map(InterpolationRow::to_json).collect::<Vec<_>>(),
        })
    }
}

fn log_p_ceil(x: &Integer, p: u64) -> i64 {
    let mut k = 0;
    let mut pk = Integer::from(1);
    while &pk < x {
        pk *= p;
        k += 1;
    }
    k
}

/// Unit-restricted moments of the origin measure against the four-term
/// scaled-lattice combination and the Euler-factor closed form.
pub fn verify_interpolation_origin(curve: &CurveData, p: u64, n: u32, a_max: u32, b_max: u32) -> Result<InterpolationReport> {
    if b_max == 0 {
        return Err(Error::Precondition("b_max must be positive".into()));
    }
    let order = QuadraticOrder::new(curve.d)?;
    let pi = prime_above(&order, p)?;
    let bar = pi.conj();
    let epsilon = crt_epsilon(&order, &pi)?;
    let pz = ExactScalar::from_i64(p as i64);
    let one = ExactScalar::one();
    let theta = kronecker_exact(curve, a_max + b_max - 1)?;

    let period = solve_padic_period(curve, p, n)?;
    let measure_order = restriction_order(p, b_max - 1, a_max);
    let mu = measure_with_period(curve, &period, measure_order)?;
    let res = restrict_to_units(&mu)?;

    let ctx = period.ctx().clone();
    let ring = Unramified::new(ctx.clone());
    let ip = ring.embed(&pi)?;
    let ibar_inv = ring.embed(&bar)?.checked_inv()?;
    let pow = |x: &PadicScalar, e: u32| -> Result<PadicScalar> {
        let mut acc = PadicScalar::from_integer(&ctx, &Integer::from(1));
        for _ in 0..e {
            acc = acc.checked_mul(x)?;
        }
        Ok(acc)
    };
    let unit = PadicScalar::from_integer(&ctx, &Integer::from(1));

    // (c, α, β, sign) for the terms ±Θ(αz, βw; cΓ)
    let terms = [
        (one.clone(), one.clone(), one.clone(), 1i64),
        (bar.clone(), pz.clone(), one.clone(), -1),
        (bar.clone(), one.clone(), pz.clone(), -1),
        (bar.pow(2), pz.clone(), pz.clone(), 1),
    ];
    let mut rows = Vec::new();
    for a in 0..=a_max {
        for b in 1..=b_max {
            let (m, k) = (b - 1, a);
            let c = ExactScalar::rational(theta.coeff(m, k)?);
            let weight = ExactScalar::rational(Rational::from(factorial(b - 1) * factorial(a)));
            // homogeneity: Θ(αz, βw; cΓ) = c⁻¹ Θ(αz/c, βw/c; Γ)
            let mut four = ExactScalar::zero();
            for (cc, alpha, beta, sign) in &terms {
                let s = alpha.checked_div(cc)?.pow(m).checked_mul(&beta.checked_div(cc)?.pow(k))?.checked_div(cc)?;
                let t = c.checked_mul(&s)?;
                four = if *sign > 0 { four.checked_add(&t)? } else { four.checked_sub(&t)? };
            }
            let four_term = four.checked_mul(&weight)?;

            let ek = ek_from_expansion(&theta, a, b)?;
            let sign = if (a + b - 1) % 2 == 1 { -1 } else { 1 };
            let base = Rational::from(ek * factorial(b - 1) * factorial(a) * sign);
            let pab = pi.pow(a + b);
            let e1 = one.checked_sub(&pab.checked_div(&pz.pow(a + 1))?)?;
            let e2 = one.checked_sub(&pab.checked_div(&pz.pow(b))?)?;
            let closed_form = ExactScalar::rational(base.clone()).checked_mul(&e1)?.checked_mul(&e2)?;
            let exact_match = closed_form == four_term;

            // p-adically, π^{a+b}/p^{a+1} = π^{b−1} π̄^{−(a+1)} and π^{a+b}/p^b = π^a π̄^{−b}
            let f1 = unit.checked_sub(&pow(&ip, b - 1)?.checked_mul(&pow(&ibar_inv, a + 1)?)?)?;
            let f2 = unit.checked_sub(&pow(&ip, a)?.checked_mul(&pow(&ibar_inv, b)?)?)?;
            let expected = pow(&period.omega_p, a + b - 1)?
                .checked_mul(&PadicScalar::from_rational(&ctx, &base))?
                .checked_mul(&f1)?
                .checked_mul(&f2)?;
            let mom = moment(&res, b - 1, a)?;
            let compared_digits = mom.abs_prec().min(expected.abs_prec());
            let padic_match = compared_digits >= 1 && mom.eq_within(&expected);
            let spec_buffer_digits =
                n as i64 - log_p_ceil(&(factorial(b - 1) * Integer::from(p).pow(a + 1)), p) - 2;
            rows.push(InterpolationRow {
                a,
                b,
                four_term,
                closed_form,
                exact_match,
                moment: mom,
                expected,
                compared_digits,
                spec_buffer_digits,
                padic_match,
            });
        }
    }
    let exact_pass = rows.iter().all(|r| r.exact_match);
    let padic_pass = rows.iter().all(|r| r.padic_match);
    let min_digits = rows.iter().map(|r| r.compared_digits).min().unwrap_or(0);
    Ok(InterpolationReport {
        p,
        abs_prec: n,
        f: period.f,
        pi,
        epsilon,
        measure_order,
        period,
        rows,
        exact_pass,
        padic_pass,
        min_digits,
    })
}

#[derive(Clone, Debug)]
pub struct KummerReport {
    pub p: u64,
    pub max_exponent: u32,
    pub pairs_checked: usize,
    /// pairs whose common residue mod p is nonzero
    pub nontrivial: usize,
    pub failures: Vec<((u32, u32), (u32, u32))>,
    pub min_digits: i64,
}

impl KummerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pairs_checked > 0 && self.min_digits >= 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "max_exponent": self.max_exponent,
            "pairs_checked": self.pairs_checked,
            "nontrivial": self.nontrivial,
            "failures": self.failures,
            "min_digits": self.min_digits,
            "passed": self.passed(),
        })
    }
}

/// Checks ∫ x^k y^l ≡ ∫ x^{k'} y^{l'} mod p whenever k ≡ k', l ≡ l' mod (p−1),
/// for a measure already restricted to units.
pub fn kummer_congruences(restricted: &MeasureSeries, max_exponent: u32) -> Result<KummerReport> {
    let p = restricted.p;
    let step = (p - 1) as u32;
    let e = max_exponent as usize;
    let mut moments = vec![vec![None; e + 1]; e + 1];
    for (k, row) in moments.iter_mut().enumerate() {
        for (l, slot) in row.iter_mut().enumerate() {
            *slot = Some(moment(restricted, k as u32, l as u32)?);
        }
    }
    let get = |k: u32, l: u32| moments[k as usize][l as usize].as_ref().unwrap();
    let mut pairs_checked = 0;
    let mut nontrivial = 0;
    let mut failures = Vec::new();
    let mut min_digits = i64::MAX;
    for k in 0..=max_exponent {
        for l in 0..=max_exponent {
            for k2 in (k..=max_exponent).step_by(step as usize) {
                for l2 in (l..=max_exponent).step_by(step as usize) {
                    if (k2, l2) == (k, l) {
                        continue;
                    }
                    let (x, y) = (get(k, l), get(k2, l2));
                    let digits = x.abs_prec().min(y.abs_prec()).min(1);
                    min_digits = min_digits.min(x.abs_prec().min(y.abs_prec()));
                    pairs_checked += 1;
                    if x.truncate(1).val_or_prec() == 0 {
                        nontrivial += 1;
                    }
                    if digits < 1 || x.truncate(1).checked_sub(&y.truncate(1))?.val_or_prec() < 1 {
                        failures.push(((k, l), (k2, l2)));
                    }
                }
            }
        }
    }
    let min_digits = if pairs_checked == 0 { 0 } else { min_digits };
    Ok(KummerReport { p, max_exponent, pairs_checked, nontrivial, failures, min_digits })
}

/// Kummer check for the origin measure of `curve`.
pub fn kummer_origin(curve: &CurveData, p: u64, n: u32, max_exponent: u32) -> Result<KummerReport> {
    let period = solve_padic_period(curve, p, n)?;
    let order = restriction_order(p, max_exponent, max_exponent);
    let mu = measure_with_period(curve, &period, order)?;
    kummer_congruences(&restrict_to_units(&mu)?, max_exponent)
}
