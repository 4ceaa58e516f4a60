//! Dense polynomials over a prime field F_p, enough to pick the defining
//! polynomial of an unramified extension.

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut t, mut nt) = (0i128, 1i128);
    let (mut r, mut nr) = (p as i128, (a % p) as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn rem(a: &Poly, m: &Poly, p: u64) -> Poly {
    let dm = m.len() - 1;
    let mut r = a.clone();
    trim(&mut r);
    while r.len() > dm {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let x = &mut r[shift + i];
                *x = (*x + p - (c * mi) % p) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Remainder for a non-monic divisor.
fn rem_general(a: &Poly, b: &Poly, p: u64) -> Poly {
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    let monic: Poly = b.iter().map(|&c| c * lead_inv % p).collect();
    rem(a, &monic, p)
}

pub(crate) fn mul(a: &Poly, b: &Poly, p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x * y) as u128;
        }
    }
    let mut r: Poly = acc.into_iter().map(|c| (c % p as u128) as u64).collect();
    trim(&mut r);
    r
}

pub(crate) fn mulmod(a: &Poly, b: &Poly, m: &Poly, p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(a: &Poly, mut e: u64, m: &Poly, p: u64) -> Poly {
    let mut base = rem(a, m, p);
    let mut acc: Poly = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(&base, &base, m, p);
        }
    }
    acc
}

pub(crate) fn gcd(a: &Poly, b: &Poly, p: u64) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem_general(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let li = inv_mod(lead, p);
        for c in x.iter_mut() {
            *c = *c * li % p;
        }
    }
    x
}

/// Inverse of `a` in F_p[X]/(m), if it exists.
pub(crate) fn inv_mod_poly(a: &Poly, m: &Poly, p: u64) -> Option<Poly> {
    // extended Euclid tracking the coefficient of `a`
    let mut r0 = m.clone();
    let mut r1 = rem(a, m, p);
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let qt = mul(&q, &t1, p);
        let t2 = sub(&t0, &qt, p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = inv_mod(r0[0], p);
    let mut out: Poly = t0.iter().map(|&x| x * c % p).collect();
    trim(&mut out);
    Some(rem(&out, m, p))
}

fn sub(a: &Poly, b: &Poly, p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut r: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut r);
    r
}

fn divrem(a: &Poly, b: &Poly, p: u64) -> (Poly, Poly) {
    let db = b.len() - 1;
    let li = inv_mod(*b.last().unwrap(), p);
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = *r.last().unwrap() * li % p;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            let x = &mut r[shift + i];
            *x = (*x + p - c * bi % p) % p;
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn is_irreducible(m: &Poly, p: u64) -> bool {
    let f = m.len() - 1;
    if f <= 1 {
        return f == 1;
    }
    if m[0] == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let mut h = x.clone();
    for _ in 1..=f / 2 {
        h = powmod(&h, p, m, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        if gcd(&diff, m, p).len() > 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `f` over F_p, ordering
/// candidates lexicographically from the X^{f−1} coefficient down to the
/// constant term. Returns coefficients `c_0, …, c_{f−1}, 1`.
pub fn smallest_irreducible(p: u64, f: usize) -> Vec<u64> {
    assert!(f >= 1);
    if f == 1 {
        return vec![0, 1];
    }
    let mut digits = vec![0u64; f];
    loop {
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        let mut cand = digits.clone();
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
}
