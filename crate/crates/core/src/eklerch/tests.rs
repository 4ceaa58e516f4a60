use super::*;
use crate::curvelattice::{compute_periods, find_row, CurveData};
use rug::float::Constant;
use rug::ops::Pow;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn lattice(g2: i64, g3: i64, prec: u32) -> LatticeData {
    compute_periods(&CurveData::new(q(g2, 1), q(g3, 1)).unwrap(), prec).unwrap()
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    cabs(&Complex::with_val(a.prec().0, a - b))
}

fn re(x: f64, p: u32) -> Complex {
    Complex::with_val(p, (x, 0))
}

/// Σ over |x| ≤ r of x̄^a |x|^{−2s} ⟨γ, w0⟩ for absolutely convergent s.
fn brute(a: u32, z0: &Complex, w0: &Complex, s: &Complex, lat: &LatticeData, cells: i64, skip_zero: bool) -> Complex {
    let p = 128;
    let area = Float::with_val(p, lat.area());
    let mut acc = Complex::with_val(p, 0);
    for m in -cells..=cells {
        for n in -cells..=cells {
            let g = Complex::with_val(p, lat.lattice_point(&m.into(), &n.into()));
            let x = Complex::with_val(p, z0 + &g);
            let nx = Float::with_val(p, x.norm_ref());
            if skip_zero && nx < 1e-30 {
                continue;
            }
            let xa = Complex::with_val(p, x.conj_ref()).pow(a);
            let mag = (Complex::with_val(p, s * Float::with_val(p, nx.ln_ref())) * -1i32).exp();
            acc += xa * mag * pairing_at(&g, w0, &area, p);
        }
    }
    acc
}

#[test]
fn weight_four_eisenstein_value() {
    let lat = lattice(4, 0, 128);
    let o = EkPoint::origin(&lat);
    let v = eisenstein_kronecker_lerch(4, &o, &o, &re(4.0, 128), &lat, 1e-22).unwrap();
    assert!(dist(&v.value, &Complex::with_val(128, q(1, 15))) < 1e-20, "{}", v.value);
    let e = ek_number(0, 4, &o, &o, &lat, 1e-22).unwrap();
    assert!(dist(&e.value, &v.value) < 1e-25);
}

#[test]
fn e2_star_of_catalog_rows() {
    for (label, want) in [("Z[2i]", q(1, 1)), ("Z[√−3]", q(1, 2)), ("Z[(1+√−11)/2]", q(2, 1))] {
        let c = find_row(label).unwrap().instantiate(&q(1, 1)).unwrap();
        let lat = compute_periods(&c, 128).unwrap();
        let o = EkPoint::origin(&lat);
        let v = ek_number(0, 2, &o, &o, &lat, 1e-22).unwrap();
        assert!(dist(&v.value, &Complex::with_val(128, &want)) < 1e-20, "{label}: {}", v.value);
    }
}

#[test]
fn unit_group_kills_weights_off_four() {
    let lat = lattice(4, 0, 128);
    let o = EkPoint::origin(&lat);
    for (a, b) in [(0, 1), (1, 1), (0, 3), (2, 3), (1, 2), (0, 6)] {
        let v = ek_number(a, b, &o, &o, &lat, 1e-20).unwrap();
        assert!(cabs(&v.value) < 1e-18, "e*_{a},{b} = {}", v.value);
    }
}

#[test]
fn weight_zero_matches_catalan_closed_form() {
    // Σ' (m²+n²)^{-2} = 4ζ(2)β(2) with β(2) Catalan's constant
    let p = 128;
    let lat = lattice(4, 0, p);
    let o = EkPoint::origin(&lat);
    let v = eisenstein_kronecker_lerch(0, &o, &o, &re(2.0, p), &lat, 1e-22).unwrap();
    let pi = Float::with_val(p, Constant::Pi);
    let zeta2 = Float::with_val(p, pi.square_ref()) / 6u32;
    let cat = Float::with_val(p, Constant::Catalan);
    let w4 = Float::with_val(p, lat.omega1().norm_ref()).square();
    let want = Complex::with_val(p, zeta2 * cat * 4u32 / w4);
    assert!(dist(&v.value, &want) < 1e-20, "{} vs {}", v.value, want);
}

#[test]
fn brute_force_sums_in_the_convergent_range() {
    let p = 128;
    let lat = lattice(5, 1, p);
    let z0 = Complex::with_val(p, (0.31, -0.17));
    let w0 = Complex::with_val(p, (0.2, 0.45));
    for (a, s) in [(2u32, Complex::with_val(p, (4.0, 0.0))), (1, Complex::with_val(p, (3.5, 1.0)))] {
        let v = eisenstein_kronecker_lerch(a, &EkPoint::numeric(&z0, &lat), &EkPoint::numeric(&w0, &lat), &s, &lat, 1e-25).unwrap();
        let b = brute(a, &z0, &w0, &s, &lat, 150, false);
        assert!(dist(&v.value, &b) < 1e-7, "a={a}: {} vs {}", v.value, b);
    }
}

#[test]
fn poles_are_rejected() {
    let lat = lattice(4, 0, 128);
    let o = EkPoint::origin(&lat);
    let z = EkPoint::torsion(&q(1, 3), &q(0, 1), &lat);
    assert!(matches!(eisenstein_kronecker_lerch(0, &o, &z, &re(0.0, 128), &lat, 1e-10), Err(Error::Pole(_))));
    assert!(matches!(eisenstein_kronecker_lerch(0, &z, &o, &re(1.0, 128), &lat, 1e-10), Err(Error::Pole(_))));
    assert!(eisenstein_kronecker_lerch(0, &z, &o, &re(2.0, 128), &lat, 1e-10).is_ok());
    assert!(matches!(eisenstein_kronecker_lerch(1, &o, &o, &re(1.0, 128), &lat, 1e-60), Err(Error::PrecisionExhausted(_))));
}

#[test]
fn functional_equation_at_torsion_points() {
    let lat = lattice(5, 1, 160);
    let z0 = EkPoint::torsion(&q(1, 3), &q(2, 3), &lat);
    let w0 = EkPoint::torsion(&q(0, 1), &q(1, 3), &lat);
    for a in 0..=3u32 {
        for s in [re(2.0, 160), re(f64::from(a + 1) / 2.0, 160), Complex::with_val(160, (1.25, 0.5))] {
            let r = check_functional_equation(a, &z0, &w0, &s, &lat, 1e-25).unwrap();
            assert!(r < 1e-22, "a={a} s={s}: {r}");
        }
    }
    let o = EkPoint::origin(&lat);
    let r = check_functional_equation(2, &o, &o, &re(1.5, 160), &lat, 1e-25).unwrap();
    assert!(r < 1e-24);
}

#[test]
fn differential_equation_in_z() {
    let p = 256;
    let lat = lattice(5, 1, p);
    let z = Complex::with_val(p, (0.23, 0.41));
    let w = Complex::with_val(p, (-0.37, 0.12));
    let s = re(2.5, p);
    let h = Float::with_val(p, 1e-20);
    let k = |zz: &Complex, a: u32, s: &Complex| {
        eisenstein_kronecker_lerch(a, &EkPoint::numeric(zz, &lat), &EkPoint::numeric(&w, &lat), s, &lat, 1e-60).unwrap().value
    };
    let a = 1;
    let dx = (k(&Complex::with_val(p, &z + &h), a, &s) - k(&Complex::with_val(p, &z - &h), a, &s)) / Float::with_val(p, &h * 2u32);
    let ih = Complex::with_val(p, (0, &h));
    let dy = (k(&Complex::with_val(p, &z + &ih), a, &s) - k(&Complex::with_val(p, &z - &ih), a, &s)) / Float::with_val(p, &h * 2u32);
    let dz = Complex::with_val(p, dx - Complex::with_val(p, (0, 1)) * dy) / 2u32;
    let s1 = Complex::with_val(p, &s + 1u32);
    let want = Complex::with_val(p, k(&z, a + 1, &s1) * &s) * -1i32;
    assert!(dist(&dz, &want) < 1e-8 * cabs(&want), "{dz} vs {want}");
}

#[test]
fn conjugate_lattice_symmetry() {
    let p = 128;
    let lat = lattice(5, 1, p);
    let conj = lat.conj().unwrap();
    let z0 = Complex::with_val(p, (0.3, 0.2));
    let w0 = Complex::with_val(p, (-0.1, 0.25));
    let s = Complex::with_val(p, (2.0, 0.3));
    let v = eisenstein_kronecker_lerch(2, &EkPoint::numeric(&z0, &lat), &EkPoint::numeric(&w0, &lat), &s, &lat, 1e-22).unwrap();
    let zc = Complex::with_val(p, z0.conj_ref());
    let wc = Complex::with_val(p, w0.conj_ref());
    let sc = Complex::with_val(p, s.conj_ref());
    let u = eisenstein_kronecker_lerch(2, &EkPoint::numeric(&zc, &conj), &EkPoint::numeric(&wc, &conj), &sc, &conj, 1e-22).unwrap();
    assert!(dist(&Complex::with_val(p, v.value.conj_ref()), &u.value) < 1e-20);
}

#[test]
fn doubling_precision_is_consistent() {
    let lat = lattice(5, 1, 200);
    let z0 = EkPoint::torsion(&q(1, 3), &q(0, 1), &lat);
    let w0 = EkPoint::torsion(&q(1, 3), &q(1, 3), &lat);
    let s = re(1.0, 200);
    let coarse = eisenstein_kronecker_lerch(1, &z0, &w0, &s, &lat, 1e-15).unwrap();
    let fine = eisenstein_kronecker_lerch(1, &z0, &w0, &s, &lat, 1e-30).unwrap();
    assert!(dist(&coarse.value, &fine.value) < 1e-15);
    assert!(coarse.radius.0 < fine.radius.0);
}

fn gaussian_character(inf: (u32, u32), prec: u32) -> Result<HeckeCharacter> {
    // ε(u) = u^{n−m} on the units, which represent (Z[i]/(2+2i))^×
    let o = QuadraticOrder::new(1)?;
    let f = o.elem(&2.into(), &2.into());
    let units = [((1, 0), (1.0, 0.0)), ((0, 1), (0.0, 1.0)), ((-1, 0), (-1.0, 0.0)), ((0, -1), (0.0, -1.0))];
    let e = (inf.1 as i64 - inf.0 as i64).rem_euclid(4) as usize;
    let mut values = Vec::new();
    for (k, (key, _)) in units.iter().enumerate() {
        let v = units[(k * e) % 4].1;
        values.push(((Integer::from(key.0), Integer::from(key.1)), Complex::with_val(prec, v)));
    }
    HeckeCharacter::new(o, f, inf, CharacterTable { values }, prec)
}

/// (1/4)·Σ_{N(α) ≤ bound, N(α) odd} φ((α))/N(α)^s.
fn dirichlet_sum(chi: &HeckeCharacter, s: &Complex, bound: i64) -> Complex {
    let p = 128;
    let o = chi.order().clone();
    let mut acc = Complex::with_val(p, 0);
    let r = (bound as f64).sqrt() as i64 + 1;
    for x in -r..=r {
        for y in -r..=r {
            let n = x * x + y * y;
            if n == 0 || n > bound || n % 2 == 0 {
                continue;
            }
            let alpha = o.elem(&x.into(), &y.into());
            let phi = chi.eval_element(&alpha).unwrap();
            let ns = (Complex::with_val(p, s * Float::with_val(p, n).ln()) * -1i32).exp();
            acc += phi * ns;
        }
    }
    acc / 4u32
}

#[test]
fn hecke_l_matches_dirichlet_series() {
    let p = 128;
    for inf in [(0u32, 1u32), (1, 0), (0, 3)] {
        let chi = gaussian_character(inf, p).unwrap();
        assert_eq!(chi.w_f().unwrap(), 1);
        assert_eq!(chi.class_representatives().unwrap().len(), 1);
        let s = re(f64::from(inf.0 + inf.1) / 2.0 + 5.0, p);
        let l = hecke_l_partial(&chi, &s, 1e-20).unwrap();
        let d = dirichlet_sum(&chi, &s, 40_000);
        assert!(dist(&l.value, &d) < 1e-12, "{inf:?}: {} vs {}", l.value, d);
    }
}

#[test]
fn inconsistent_character_tables() {
    let p = 64;
    let o = QuadraticOrder::new(1).unwrap();
    // conductor (1) cannot carry a character of type (1,0): ε would be trivial but u ≠ 1
    let one = o.elem(&1.into(), &0.into());
    let t = CharacterTable { values: vec![((Integer::from(0), Integer::from(0)), Complex::with_val(p, 1))] };
    assert!(matches!(HeckeCharacter::new(o.clone(), one, (1, 0), t, p), Err(Error::CharacterTable(_))));
    let f = o.elem(&2.into(), &2.into());
    let bad = CharacterTable {
        values: vec![
            ((Integer::from(1), Integer::from(0)), Complex::with_val(p, 1)),
            ((Integer::from(0), Integer::from(1)), Complex::with_val(p, -1)),
            ((Integer::from(-1), Integer::from(0)), Complex::with_val(p, 1)),
            ((Integer::from(0), Integer::from(-1)), Complex::with_val(p, -1)),
        ],
    };
    assert!(matches!(HeckeCharacter::new(o.clone(), f.clone(), (0, 1), bad, p), Err(Error::CharacterTable(_))));
    let short = CharacterTable { values: vec![((Integer::from(1), Integer::from(0)), Complex::with_val(p, 1))] };
    assert!(matches!(HeckeCharacter::new(o, f, (0, 1), short, p), Err(Error::CharacterTable(_))));
    assert!(matches!(QuadraticOrder::new(5), Err(Error::ClassGroup(5))));
}
