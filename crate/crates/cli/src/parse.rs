use ektheta::coeffring::{parse_rational, ExactScalar};
use ektheta::curvelattice::LatticeData;
use ektheta::eklerch::QuadraticOrder;
use ektheta::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float, Integer, Rational};
use std::str::FromStr;

fn split2(s: &str) -> Result<(&str, &str)> {
    s.split_once(',').ok_or_else(|| Error::Parse(format!("expected \"x,y\", got {s:?}")))
}

pub fn parse_pair<T: FromStr>(s: &str) -> Result<(T, T)> {
    let (a, b) = split2(s)?;
    let p = |t: &str| t.trim().parse::<T>().map_err(|_| Error::Parse(format!("bad value {t:?} in {s:?}")));
    Ok((p(a)?, p(b)?))
}

/// "a/n,b/n" → (a/n, b/n), the point (a/n)·ω1 + (b/n)·ω2.
pub fn parse_torsion(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = split2(s)?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

/// "x,y" → x + y·ω in the maximal order; a bare "x" is the rational integer x.
pub fn parse_element(order: &QuadraticOrder, s: &str) -> Result<ExactScalar> {
    let (x, y) = match s.split_once(',') {
        Some(_) => parse_pair::<Integer>(s)?,
        None => (s.trim().parse::<Integer>().map_err(|_| Error::Parse(format!("bad integer {s:?}")))?, Integer::new()),
    };
    Ok(order.elem(&x, &y))
}

/// "re" or "re,im", each a rational or terminating decimal.
pub fn parse_complex(s: &str, prec: u32) -> Result<Complex> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (parse_rational(a)?, parse_rational(b)?),
        None => (parse_rational(s)?, Rational::new()),
    };
    Ok(Complex::with_val(prec, (Float::with_val(prec, &re), Float::with_val(prec, &im))))
}

/// "x,y=re,im": the character value on the residue class of x + y·ω.
pub fn parse_residue_value(s: &str, prec: u32) -> Result<((Integer, Integer), Complex)> {
    let (key, val) = s.split_once('=').ok_or_else(|| Error::Parse(format!("expected \"x,y=re,im\", got {s:?}")))?;
    Ok((parse_pair::<Integer>(key)?, parse_complex(val, prec)?))
}

/// Pairs (z, w) = (x1·ω1 + y1·ω2, x2·ω1 + y2·ω2) with coordinates drawn
/// uniformly from (0.1, 0.9), together with the coordinates as strings.
pub fn random_points(lat: &LatticeData, n: usize, seed: u64) -> Vec<([String; 4], (Complex, Complex))> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = lat.prec();
    (0..n)
        .map(|_| {
            let c: Vec<Rational> = (0..4).map(|_| Rational::from_f64(rng.gen_range(0.1..0.9)).unwrap()).collect();
            let z = Complex::with_val(p, lat.point(&c[0], &c[1]));
            let w = Complex::with_val(p, lat.point(&c[2], &c[3]));
            let names = [0, 1, 2, 3].map(|i| c[i].to_string());
            (names, (z, w))
        })
        .collect()
}
