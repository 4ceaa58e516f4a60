use super::period::{ipow, PadicPeriod};
use crate::coeffring::{PadicScalar, Unramified, UnramifiedCtx, QQ};
use crate::curvelattice::{formal_log, CurveData};
use crate::kronecker::kronecker_exact;
use crate::powerseries::{BiSeries, UniSeries};
use crate::{Error, Result};
use rug::{Assign, Integer, Rational};
use serde_json::{json, Value};
use std::sync::Arc;

/// A measure on Z_p × Z_p, stored as its Amice transform in (S, T).
#[derive(Clone, Debug)]
pub struct MeasureSeries {
    pub series: BiSeries<Unramified>,
    pub p: u64,
    pub f: usize,
    pub abs_prec: u32,
    pub provenance: String,
}

fn binomial_mod(c: &Integer, k: u32, m: &Integer) -> Integer {
    // C(c, k) for integer c (possibly negative), reduced mod m
    let mut num = Integer::from(1);
    for i in 0..k {
        num *= Integer::from(c - i);
    }
    let q = num / Integer::from(Integer::factorial(k));
    q.modulo(m)
}

impl MeasureSeries {
    pub fn new(series: BiSeries<Unramified>, provenance: impl Into<String>) -> Self {
        let ctx = series.ring().ctx().clone();
        MeasureSeries { p: ctx.p(), f: ctx.f(), abs_prec: ctx.cap(), series, provenance: provenance.into() }
    }

    pub fn ctx(&self) -> &Arc<UnramifiedCtx> {
        self.series.ring().ctx()
    }

    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn coeff(&self, i: u32, j: u32) -> PadicScalar {
        self.series.coeff(i, j)
    }

    pub fn zero(ctx: &Arc<UnramifiedCtx>, order: u32) -> Self {
        Self::new(BiSeries::zero(&Unramified::new(ctx.clone()), order), "zero")
    }

    /// The Dirac measure at (c, e) ∈ Z × Z, i.e. (1+S)^c (1+T)^e.
    pub fn dirac(ctx: &Arc<UnramifiedCtx>, order: u32, c: &Integer, e: &Integer) -> Self {
        let ring = Unramified::new(ctx.clone());
        let m = Integer::from(ipow(ctx.p(), ctx.cap()));
        let bc: Vec<Integer> = (0..=order).map(|k| binomial_mod(c, k, &m)).collect();
        let be: Vec<Integer> = (0..=order).map(|k| binomial_mod(e, k, &m)).collect();
        let series = BiSeries::from_fn(&ring, order, |i, j| {
            PadicScalar::from_integer(ctx, &Integer::from(&bc[i as usize] * &be[j as usize]))
        });
        Self::new(series, format!("dirac({c},{e})"))
    }

    /// Smallest valuation over the stored coefficients (zeros report their precision).
    pub fn min_valuation(&self) -> Option<i64> {
        self.series.terms().map(|(_, c)| c.val_or_prec()).min()
    }

    /// Smallest absolute precision over all coefficients up to the order.
    pub fn min_precision(&self) -> i64 {
        let cap = self.abs_prec as i64;
        self.series.terms().map(|(_, c)| c.abs_prec()).min().unwrap_or(cap).min(cap)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .series
            .terms()
            .map(|(&(i, j), c)| json!({"s": i, "t": j, "value": c.to_json()}))
            .collect();
        json!({
            "p": self.p,
            "f": self.f,
            "abs_prec": self.abs_prec,
            "order": self.order(),
            "provenance": self.provenance,
            "min_valuation": self.min_valuation(),
            "terms": terms,
        })
    }
}

/// The Laurent tail 1/z − 1/E(z) of the formal exponential E, as a power series.
fn exponential_correction(curve: &CurveData, order: u32) -> Result<Vec<Rational>> {
    let e = formal_log(curve, order as i64 + 3)?.exponential()?;
    let inv = e.inv()?;
    if inv.order() < order as i64 {
        return Err(Error::OrderExceeded { needed: order as i64, available: inv.order() });
    }
    Ok((0..=order as i64).map(|k| -inv.coeff(k)).collect())
}

/// Rational bivariate series R_d(S,T) with the measure equal to Σ_d Ω^d R_d.
///
/// With z = Ω log(1+S) the measure is G(z, w) where G is the regular part of
/// the theta function plus the tails 1/z − 1/E(z) and 1/w − 1/E(w); grouping
/// by total z,w-degree leaves only rational coefficients.
fn degree_components(curve: &CurveData, order: u32) -> Result<Vec<Vec<Vec<Rational>>>> {
    let theta = kronecker_exact(curve, order)?;
    let reg = &theta.expansion.regular;
    let h = exponential_correction(curve, order)?;
    let o = order as usize;
    let log1p = UniSeries::from_fn(&QQ, 0, order as i64, |k| {
        if k == 0 {
            Rational::new()
        } else {
            let q = Rational::from((1, k));
            if k % 2 == 0 {
                -q
            } else {
                q
            }
        }
    });
    let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(o + 1);
    let mut cur = UniSeries::one(&QQ, order as i64);
    for _ in 0..=o {
        powers.push((0..=o as i64).map(|k| cur.coeff(k)).collect());
        cur = cur.mul(&log1p).truncate(order as i64);
    }
    let mut comps: Vec<Vec<Vec<Rational>>> =
        (0..=o).map(|_| (0..=o).map(|i| vec![Rational::new(); o + 1 - i]).collect()).collect();
    let mut tmp = Rational::new();
    for (&(m, n), c) in reg.terms() {
        let (m, n) = (m as usize, n as usize);
        let d = m + n;
        let slab = &mut comps[d];
        for i in m..=o - n {
            if powers[m][i].cmp0().is_eq() {
                continue;
            }
            let a = Rational::from(c * &powers[m][i]);
            for j in n..=o - i {
                if powers[n][j].cmp0().is_eq() {
                    continue;
                }
                tmp.assign(&a * &powers[n][j]);
                slab[i][j] += &tmp;
            }
        }
    }
    for (d, hd) in h.iter().enumerate() {
        if hd.cmp0().is_eq() {
            continue;
        }
        for i in d..=o {
            let t = Rational::from(hd * &powers[d][i]);
            comps[d][i][0] += &t;
            comps[d][0][i] += &t;
        }
    }
    Ok(comps)
}

fn rational_vp(q: &Rational, p: u64) -> Option<i64> {
    if q.cmp0().is_eq() {
        return None;
    }
    let pz = Integer::from(p);
    let mut n = q.numer().clone();
    let mut d = q.denom().clone();
    Some(n.remove_factor_mut(&pz) as i64 - d.remove_factor_mut(&pz) as i64)
}

/// Number of p-adic digits of a measure coefficient S^iT^j that a period
/// known mod p^N determines: N − ⌊log_p max(i, j)⌋.
pub fn coefficient_precision(p: u64, n: u32, i: u32, j: u32) -> i64 {
    let mut k = 0i64;
    let mut d = i.max(j).max(1) as u64;
    while d >= p {
        d /= p;
        k += 1;
    }
    n as i64 - k
}

/// Measure attached to the starred theta function at the origin.
pub fn measure_from_theta(curve: &CurveData, p: u64, n: u32, order: u32) -> Result<MeasureSeries> {
    let period = super::solve_padic_period(curve, p, n)?;
    measure_with_period(curve, &period, order)
}

/// As [`measure_from_theta`] with a precomputed period.
///
/// The coefficients are evaluated exactly for an integral lift Ω' of Ω_p in a
/// wider context; any Ω' ≡ Ω_p mod p^N yields an integral series congruent to
/// the true measure to the precision of [`coefficient_precision`].
pub fn measure_with_period(curve: &CurveData, period: &PadicPeriod, order: u32) -> Result<MeasureSeries> {
    let p = period.p;
    let n = period.abs_prec;
    if coefficient_precision(p, n, order, 0) <= 0 {
        return Err(Error::Precondition(format!("order {order} needs the period beyond {p}^{n}")));
    }
    let comps = degree_components(curve, order)?;
    let worst = comps
        .iter()
        .flatten()
        .flatten()
        .filter_map(|q| rational_vp(q, p))
        .min()
        .unwrap_or(0)
        .min(0);
    let work_cap = n + (-worst) as u32 + 1;
    if (p as f64).powi(work_cap as i32) >= 2f64.powi(62) {
        return Err(Error::PrecisionExhausted(format!("working precision {p}^{work_cap} exceeds 62 bits")));
    }
    let ctx = period.ctx();
    let wide = UnramifiedCtx::with_modulus(p, ctx.modulus()[..ctx.f()].to_vec(), work_cap)?;
    let (coords, shift) = period.omega_p.coords();
    let omega = PadicScalar::from_coords(&wide, &coords, shift, work_cap as i64);
    let mut powers = vec![PadicScalar::from_integer(&wide, &Integer::from(1))];
    for d in 1..=order as usize {
        let next = powers[d - 1].checked_mul(&omega)?;
        powers.push(next);
    }
    let ring = Unramified::new(ctx.clone());
    let mut series = BiSeries::zero(&ring, order);
    for i in 0..=order {
        for j in 0..=order - i {
            let mut acc = PadicScalar::zero(&wide, work_cap as i64);
            for (d, comp) in comps.iter().enumerate().take((i + j) as usize + 1) {
                let r = &comp[i as usize][j as usize];
                if r.cmp0().is_eq() {
                    continue;
                }
                acc = acc.checked_add(&powers[d].checked_mul(&PadicScalar::from_rational(&wide, r))?)?;
            }
            let target = coefficient_precision(p, n, i, j);
            if acc.abs_prec() < target {
                return Err(Error::PrecisionExhausted(format!("coefficient S^{i}T^{j} known only mod p^{}", acc.abs_prec())));
            }
            if acc.val_or_prec() < 0 {
                return Err(Error::Integrality(format!(
                    "coefficient S^{i}T^{j} has valuation {} (period precision too low?)",
                    acc.val_or_prec()
                )));
            }
            let (val, _, unit) = acc.parts();
            let c = PadicScalar::from_parts(ctx, val, target, unit.to_vec());
            series.set(i, j, c);
        }
    }
    let label = curve.cm_order_label.clone().unwrap_or_else(|| format!("g2={}, g3={}", curve.g2, curve.g3));
    Ok(MeasureSeries::new(series, format!("starred theta at the origin of {label}, s = iota(S), t = iota(T)")))
}

/// Unit-restriction operator for one variable, truncated at degree `degree`.
///
/// Every series is written Σ b_n e_n with e_{pk+i} = (1+T)^i ((1+T)^p − 1)^k,
/// 0 ≤ i < p; then ψf = Σ b_{pk} T^k and the restriction is f − φψf.
pub struct UnitRestrictor {
    ctx: Arc<UnramifiedCtx>,
    degree: usize,
    basis: Vec<Vec<PadicScalar>>,
    /// coefficients of ((1+T)^p − 1)^k
    ypow: Vec<Vec<PadicScalar>>,
}

fn poly_mul_trunc(a: &[Integer], b: &[Integer], len: usize, m: &Integer) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len.min(a.len() + b.len() - 1)];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= out.len() {
                break;
            }
            out[i + j] += Integer::from(x * y);
        }
    }
    out.iter().map(|c| Integer::from(c.modulo_ref(m))).collect()
}

impl UnitRestrictor {
    pub fn new(ctx: &Arc<UnramifiedCtx>, degree: usize) -> Self {
        let p = ctx.p() as usize;
        let m = Integer::from(ipow(ctx.p(), ctx.cap()));
        let len = degree + 1;
        let mut y = vec![Integer::new(); p + 1];
        for (k, slot) in y.iter_mut().enumerate().skip(1) {
            *slot = Integer::from(Integer::binomial_u(p as u32, k as u32));
        }
        let one_plus: Vec<Integer> = vec![Integer::from(1), Integer::from(1)];
        let to_padic = |v: &[Integer]| -> Vec<PadicScalar> { v.iter().map(|c| PadicScalar::from_integer(ctx, c)).collect() };
        let mut ypow_int = vec![vec![Integer::from(1)]];
        while ypow_int.len() * p <= degree + p {
            let next = poly_mul_trunc(ypow_int.last().unwrap(), &y, len, &m);
            ypow_int.push(next);
        }
        let mut basis = Vec::with_capacity(len);
        for nn in 0..len {
            let (k, i) = (nn / p, nn % p);
            let mut e = ypow_int[k].clone();
            for _ in 0..i {
                e = poly_mul_trunc(&e, &one_plus, len, &m);
            }
            basis.push(to_padic(&e));
        }
        let ypow = ypow_int.iter().map(|v| to_padic(v)).collect();
        UnitRestrictor { ctx: ctx.clone(), degree, basis, ypow }
    }

    fn p(&self) -> usize {
        self.ctx.p() as usize
    }

    /// Coordinates b_n in the basis e_n, for a series truncated at `deg` ≤ degree.
    fn decompose(&self, f: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        let deg = f.len() - 1;
        assert!(deg <= self.degree);
        let mut rem = f.to_vec();
        let mut b = vec![PadicScalar::zero(&self.ctx, self.ctx.cap() as i64); deg + 1];
        for nn in (0..=deg).rev() {
            let bn = rem[nn].clone();
            if !bn.is_zero() || bn.abs_prec() < self.ctx.cap() as i64 {
                for (j, e) in self.basis[nn].iter().enumerate().take(nn) {
                    if e.is_zero() {
                        continue;
                    }
                    rem[j] = rem[j].checked_sub(&bn.checked_mul(e)?)?;
                }
            }
            b[nn] = bn;
        }
        Ok(b)
    }

    /// Digits guaranteed despite truncation at `deg`, for output coefficient `m`.
    fn truncation_bound(&self, deg: usize, m: usize, psi: bool) -> i64 {
        let p = self.p() as i64;
        let k = ((deg + 1) / self.p()) as i64;
        if psi {
            k - m as i64
        } else {
            (p * k - m as i64 + p - 1).div_euclid(p)
        }
    }

    /// ψf, i.e. the transform of the pushforward of μ|_{pZ_p} under x ↦ x/p.
    pub fn psi(&self, f: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        let deg = f.len() - 1;
        let b = self.decompose(f)?;
        let p = self.p();
        Ok((0..=deg / p).map(|k| b[p * k].truncate(self.truncation_bound(deg, k, true))).collect())
    }

    /// f − φψf, the transform of μ restricted to Z_p^×.
    pub fn restrict(&self, f: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        let deg = f.len() - 1;
        let b = self.decompose(f)?;
        let p = self.p();
        let mut out = f.to_vec();
        for k in 0..=deg / p {
            let bk = &b[p * k];
            for (j, y) in self.ypow[k].iter().enumerate().take(deg + 1) {
                if y.is_zero() {
                    continue;
                }
                out[j] = out[j].checked_sub(&bk.checked_mul(y)?)?;
            }
        }
        Ok(out.into_iter().enumerate().map(|(m, c)| c.truncate(self.truncation_bound(deg, m, false))).collect())
    }
}

/// Restriction of μ to Z_p^× × Z_p^×, one variable at a time.
pub fn restrict_to_units(mu: &MeasureSeries) -> Result<MeasureSeries> {
    let ctx = mu.ctx();
    let order = mu.order();
    let r = UnitRestrictor::new(ctx, order as usize);
    let ring = mu.series.ring().clone();
    let mut grid: Vec<Vec<PadicScalar>> =
        (0..=order).map(|i| (0..=order - i).map(|j| mu.coeff(i, j)).collect()).collect();
    for j in 0..=order {
        let slice: Vec<PadicScalar> = (0..=order - j).map(|i| grid[i as usize][j as usize].clone()).collect();
        for (i, c) in r.restrict(&slice)?.into_iter().enumerate() {
            grid[i][j as usize] = c;
        }
    }
    for row in grid.iter_mut() {
        *row = r.restrict(row)?;
    }
    let mut series = BiSeries::zero(&ring, order);
    for (i, row) in grid.into_iter().enumerate() {
        for (j, c) in row.into_iter().enumerate() {
            series.set(i as u32, j as u32, c);
        }
    }
    Ok(MeasureSeries::new(series, format!("{} restricted to units", mu.provenance)))
}

/// k!·S(k, i), the coefficients of ((1+X)∂_X)^k in the basis ∂_X^i at X = 0.
pub(crate) fn stirling_weights(k: u32) -> Vec<Integer> {
    let k = k as usize;
    let mut s = vec![vec![Integer::new(); k + 1]; k + 1];
    s[0][0] = Integer::from(1);
    for n in 1..=k {
        for i in 1..=n {
            s[n][i] = Integer::from(&s[n - 1][i] * i as u32) + &s[n - 1][i - 1];
        }
    }
    (0..=k).map(|i| Integer::from(&s[k][i] * Integer::from(Integer::factorial(i as u32)))).collect()
}

/// ∫ x^k y^l dμ.
pub fn moment(mu: &MeasureSeries, k: u32, l: u32) -> Result<PadicScalar> {
    if k + l > mu.order() {
        return Err(Error::OrderExceeded { needed: (k + l) as i64, available: mu.order() as i64 });
    }
    let ctx = mu.ctx();
    let (wk, wl) = (stirling_weights(k), stirling_weights(l));
    let mut acc = PadicScalar::zero(ctx, ctx.cap() as i64);
    for (i, a) in wk.iter().enumerate() {
        for (j, b) in wl.iter().enumerate() {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let c = mu.coeff(i as u32, j as u32);
            let w = PadicScalar::from_integer(ctx, &Integer::from(a * b));
            acc = acc.checked_add(&c.checked_mul(&w)?)?;
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug)]
pub struct MomentEntry {
    pub a: u32,
    pub b: u32,
    /// ∫ x^{b−1} y^a dμ
    pub value: PadicScalar,
}

#[derive(Clone, Debug)]
pub struct MomentTable {
    pub p: u64,
    pub entries: Vec<MomentEntry>,
}

impl MomentTable {
    pub fn get(&self, a: u32, b: u32) -> Option<&PadicScalar> {
        self.entries.iter().find(|e| e.a == a && e.b == b).map(|e| &e.value)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|e| json!({"a": e.a, "b": e.b, "abs_prec": e.value.abs_prec(), "value": e.value.to_json()}))
            .collect();
        json!({"p": self.p, "moments": rows})
    }
}

/// Moments ∫ x^{b−1} y^a dμ for 0 ≤ a ≤ a_max, 1 ≤ b ≤ b_max.
pub fn moment_table(mu: &MeasureSeries, a_max: u32, b_max: u32) -> Result<MomentTable> {
    let mut entries = Vec::new();
    for a in 0..=a_max {
        for b in 1..=b_max {
            entries.push(MomentEntry { a, b, value: moment(mu, b - 1, a)? });
        }
    }
    Ok(MomentTable { p: mu.p, entries })
}
