use super::*;
use crate::coeffring::ExactScalar;
use crate::curvelattice::{catalog, compute_periods, find_row, LatticeData};
use crate::eklerch::QuadraticOrder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn square_curve() -> CurveData {
    find_row("Z[i]").unwrap().instantiate(&q(4, 1)).unwrap()
}

fn square_lattice(prec: u32) -> LatticeData {
    compute_periods(&square_curve(), prec).unwrap()
}

fn dist(a: &Complex, b: &Complex) -> f64 {
    Float::with_val(53, Complex::with_val(a.prec().0, a - b).abs_ref()).to_f64()
}

/// Points x·ω1 + y·ω2 with x, y uniform in (0.1, 0.9).
fn random_points(lat: &LatticeData, n: usize, seed: u64) -> Vec<(Complex, Complex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = lat.prec();
    let pt = |rng: &mut ChaCha8Rng| {
        let x = Rational::from_f64(rng.gen_range(0.1..0.9)).unwrap();
        let y = Rational::from_f64(rng.gen_range(0.1..0.9)).unwrap();
        Complex::with_val(p, lat.point(&x, &y))
    };
    (0..n).map(|_| (pt(&mut rng), pt(&mut rng))).collect()
}

#[test]
fn square_lattice_coefficients() {
    let t = kronecker_exact(&square_curve(), 12).unwrap();
    assert_eq!(t.expansion.polar_z, 1);
    assert_eq!(t.expansion.polar_w, 1);
    assert_eq!(t.coeff(3, 0).unwrap(), q(-1, 15));
    assert_eq!(t.coeff(0, 0).unwrap(), 0);
    assert_eq!(ek_from_expansion(&t, 0, 4).unwrap(), q(1, 15));
    for a in 0..=6 {
        for b in 1..=6 {
            if (a + b) % 4 != 0 {
                assert_eq!(ek_from_expansion(&t, a, b).unwrap(), 0, "a={a} b={b}");
            }
        }
    }
    assert!(matches!(ek_from_expansion(&t, 7, 7), Err(Error::OrderExceeded { .. })));
}

#[test]
fn direct_series_division() {
    // Θ·θ(z)θ(w) = θ(z+w), checked on the coefficient of z^3 by a univariate route:
    // Θ(z, w) − 1/w at w = 0 is 1/z + Σ c_{m,0} z^m, and equals θ'(z)/θ(z) in the w→0 limit
    let curve = square_curve();
    let t = kronecker_exact(&curve, 9).unwrap();
    let th = crate::curvelattice::theta_series(&curve, 12).unwrap();
    let log_der = th.derivative().div(&th).unwrap();
    for m in 0..=8 {
        assert_eq!(t.coeff(m, 0).unwrap(), log_der.coeff(m as i64), "m={m}");
    }
}

#[test]
fn catalog_expansions_are_exact_and_symmetric() {
    for row in catalog() {
        let curve = row.instantiate(&q(1, 1)).unwrap();
        let t = kronecker_exact(&curve, 10).unwrap();
        for d in 0..=10 {
            for n in 0..=d {
                assert_eq!(t.coeff(d - n, n).unwrap(), t.coeff(n, d - n).unwrap(), "{} ({},{})", row.label, d - n, n);
            }
        }
    }
}

#[test]
fn e2_star_from_expansion() {
    let curve = find_row("Z[2√−1]").unwrap().instantiate(&q(1, 1)).unwrap();
    let t = kronecker_exact(&curve, 4).unwrap();
    assert_eq!(ek_from_expansion(&t, 0, 2).unwrap(), 1);
}

#[test]
fn unit_group_vanishing() {
    let t = kronecker_exact(&square_curve(), 16).unwrap();
    let hex = find_row("Z[(1+√−3)/2]").unwrap().instantiate(&q(1, 1)).unwrap();
    let h = kronecker_exact(&hex, 16).unwrap();
    for d in 0..=16u32 {
        for n in 0..=d {
            // coefficient of z^m w^n pairs with a + b = m + n + 1
            if (d + 1) % 4 != 0 {
                assert_eq!(t.coeff(d - n, n).unwrap(), 0);
            }
            if (d + 1) % 6 != 0 {
                assert_eq!(h.coeff(d - n, n).unwrap(), 0);
            }
        }
    }
}

#[test]
fn exact_matches_numeric_taylor() {
    for (label, u) in [("Z[i]", 4), ("Z[(1+√−7)/2]", 1)] {
        let curve = find_row(label).unwrap().instantiate(&q(u, 1)).unwrap();
        let lat = compute_periods(&curve, 192).unwrap();
        let t = kronecker_exact(&curve, 10).unwrap();
        let p = lat.prec();
        let zero = Complex::new(p);
        let c = torus_coefficients(&zero, &zero, &lat, 10, 10, 1e-30).unwrap();
        assert!(dist(c.get(-1, 0).unwrap(), &Complex::with_val(p, 1)) < 1e-25);
        assert!(dist(c.get(0, -1).unwrap(), &Complex::with_val(p, 1)) < 1e-25);
        for d in 0..=10u32 {
            for n in 0..=d {
                let exact = Complex::with_val(p, t.coeff(d - n, n).unwrap());
                let got = c.get((d - n) as i64, n as i64).unwrap();
                assert!(dist(got, &exact) < 1e-15, "{label} ({},{})", d - n, n);
            }
        }
    }
}

#[test]
fn kronecker_identity_random_points() {
    let lat = square_lattice(256);
    let pts = random_points(&lat, 3, 11);
    let rep = verify_kronecker_identity(&pts, &lat, 1e-18).unwrap();
    assert!(rep.passed, "{:?}", rep.residuals);
}

#[test]
fn residue_and_poles() {
    let lat = square_lattice(160);
    let p = lat.prec();
    let w = Complex::with_val(p, (0.31, 0.17));
    let mut prev = f64::INFINITY;
    for k in 4..9 {
        let z = Complex::with_val(p, (10f64.powi(-k), 0.5 * 10f64.powi(-k)));
        let v = Complex::with_val(p, kronecker_numeric(&z, &w, &lat).unwrap() * &z);
        let d = dist(&v, &Complex::with_val(p, 1));
        assert!(d < prev);
        prev = d;
    }
    assert!(prev < 1e-7);
    let g = Complex::with_val(p, lat.omega1());
    assert!(matches!(kronecker_numeric(&g, &w, &lat), Err(Error::Pole(_))));
}

#[test]
fn homogeneity() {
    let lat = square_lattice(160);
    let p = lat.prec();
    let c = Complex::with_val(p, (0.7, -1.3));
    let big = lat.scaled(&c).unwrap();
    for (z, w) in random_points(&big, 4, 5) {
        let lhs = kronecker_numeric(&z, &w, &big).unwrap();
        let zc = Complex::with_val(p, &z / &c);
        let wc = Complex::with_val(p, &w / &c);
        let rhs = kronecker_numeric(&zc, &wc, &lat).unwrap() / &c;
        assert!(dist(&lhs, &rhs) < 1e-30);
    }
}

#[test]
fn transformation_formula() {
    let lat = square_lattice(160);
    let p = lat.prec();
    let u = lat.lattice_point(&2.into(), &(-1).into());
    let v = lat.lattice_point(&1.into(), &3.into());
    let a = lat.area();
    for (z, w) in random_points(&lat, 4, 7) {
        let zu = Complex::with_val(p, &z + &u);
        let wv = Complex::with_val(p, &w + &v);
        let lhs = kronecker_numeric(&zu, &wv, &lat).unwrap();
        let vb = Complex::with_val(p, v.conj_ref());
        let ub = Complex::with_val(p, u.conj_ref());
        let e1 = Complex::with_val(p, Complex::with_val(p, &u * &vb) / a).exp();
        let e2 = Complex::with_val(p, (Complex::with_val(p, &z * &vb) + Complex::with_val(p, &w * &ub)) / a).exp();
        let rhs = kronecker_numeric(&z, &w, &lat).unwrap() * e1 * e2;
        assert!(dist(&lhs, &rhs) < 1e-15 * (1.0 + Float::with_val(53, rhs.abs_ref()).to_f64()));
    }
}

#[test]
fn translation_operators() {
    let lat = square_lattice(160);
    let p = lat.prec();
    let zero = Complex::new(p);
    let pts = random_points(&lat, 3, 3);
    let u0 = Complex::with_val(p, (0.21, 0.05));
    let v0 = Complex::with_val(p, (-0.11, 0.3));
    let u1 = Complex::with_val(p, (0.07, -0.18));
    let v1 = Complex::with_val(p, (0.13, 0.02));
    let a = lat.area();
    // U_{(u,v)}F(z, w) = exp(−(uv̄ + zv̄ + wū)/A)·F(z+u, w+v)
    let op = |u: &Complex, v: &Complex, z: &Complex, w: &Complex| -> Complex {
        let vb = Complex::with_val(p, v.conj_ref());
        let ub = Complex::with_val(p, u.conj_ref());
        let e = Complex::with_val(p, u * &vb) + Complex::with_val(p, z * &vb) + Complex::with_val(p, w * &ub);
        Complex::with_val(p, -e / a).exp()
    };
    for (z, w) in &pts {
        let plain = kronecker_numeric(z, w, &lat).unwrap();
        let same = kronecker_translated_numeric(&zero, &zero, z, w, &lat).unwrap();
        assert!(dist(&plain, &same) < 1e-40);
        // U_{v1}∘U_{v0} = exp((u0 v̄1 − ū0 v1)/A)·U_{v0+v1}
        let z1 = Complex::with_val(p, z + &u1);
        let w1 = Complex::with_val(p, w + &v1);
        let nested = op(&u1, &v1, z, w) * kronecker_translated_numeric(&u0, &v0, &z1, &w1, &lat).unwrap();
        let su = Complex::with_val(p, &u0 + &u1);
        let sv = Complex::with_val(p, &v0 + &v1);
        let direct = kronecker_translated_numeric(&su, &sv, z, w, &lat).unwrap();
        let chi_e = Complex::with_val(p, &u0 * Complex::with_val(p, v1.conj_ref())) - Complex::with_val(p, &v1 * Complex::with_val(p, u0.conj_ref()));
        let chi = Complex::with_val(p, chi_e / a).exp();
        assert!(dist(&nested, &(chi * direct)) < 1e-15);
        // Θ_{z0+γ, w0+γ'} = ⟨w0, γ⟩·Θ_{z0,w0}
        let g = lat.lattice_point(&1.into(), &(-2).into());
        let g2 = lat.lattice_point(&3.into(), &1.into());
        let zg = Complex::with_val(p, &u0 + &g);
        let wg = Complex::with_val(p, &v0 + &g2);
        let shifted = kronecker_translated_numeric(&zg, &wg, z, w, &lat).unwrap();
        let base = kronecker_translated_numeric(&u0, &v0, z, w, &lat).unwrap();
        assert!(dist(&shifted, &(lat.pairing(&v0, &g) * base)) < 1e-15);
    }
}

#[test]
fn generating_function_at_torsion() {
    let lat = square_lattice(192);
    let half = q(1, 2);
    let zero = q(0, 1);
    let rep = verify_generating_function((&half, &zero), (&zero, &half), 4, 4, &lat, 1e-12).unwrap();
    assert!(rep.passed, "{}", rep.max_deviation);
    let third = q(1, 3);
    let rep = verify_generating_function((&third, &zero), (&zero, &zero), 2, 3, &lat, 1e-12).unwrap();
    assert!(rep.passed, "{}", rep.max_deviation);
    let one = Complex::with_val(64, 1);
    assert!(dist(&rep.polar[0].numeric, &Complex::new(64)) < 1e-20);
    assert!(dist(&rep.polar[1].numeric, &one) < 1e-20);
}

#[test]
fn distribution_relation() {
    let lat = square_lattice(160);
    let p = lat.prec();
    let order = QuadraticOrder::new(1).unwrap();
    let one = ExactScalar::one();
    let two = ExactScalar::from_i64(2);
    let one_plus_i = order.elem(&1.into(), &1.into());
    let z0 = lat.point(&q(1, 3), &q(0, 1));
    let w0 = lat.point(&q(1, 4), &q(1, 2));
    let pts = random_points(&lat, 3, 17);
    let r = verify_distribution(&order, &one, &one, &one, &z0, &w0, &lat, &pts, 0.0).unwrap();
    assert!(r.identity.passed);
    let r = verify_distribution(&order, &two, &one, &one, &Complex::new(p), &Complex::new(p), &lat, &pts, 1e-12).unwrap();
    assert!(r.identity.passed, "{:?}", r.identity.residuals);
    assert_eq!(r.terms, 4);
    let r = verify_distribution(&order, &one, &one_plus_i, &one, &z0, &w0, &lat, &pts, 1e-12).unwrap();
    assert!(r.identity.passed, "{:?}", r.identity.residuals);
    let bad = verify_distribution(&order, &two, &one, &two, &z0, &w0, &lat, &pts, 1e-12);
    assert!(matches!(bad, Err(Error::EpsilonCongruence(_))));
}

#[test]
fn composed_leading_terms() {
    let t = kronecker_exact(&square_curve(), 12).unwrap();
    let c = compose_formal(&t, 12, false).unwrap();
    assert_eq!(c.expansion.polar_z, 1);
    assert_eq!(c.expansion.polar_w, 1);
    let s = compose_formal(&t, 12, true).unwrap();
    assert_eq!(s.expansion.polar_z, 0);
    assert_eq!(s.coeff(3, 0).unwrap(), c.coeff(3, 0).unwrap());
    // λ(t) = t + O(t^5), so degrees below 3 agree with Θ
    for d in 0..3 {
        for n in 0..=d {
            assert_eq!(c.coeff(d - n, n).unwrap(), t.coeff(d - n, n).unwrap());
        }
    }
}

#[test]
fn valuations_ordinary_and_supersingular() {
    let t = kronecker_exact(&square_curve(), 30).unwrap();
    let c = compose_formal(&t, 30, true).unwrap();
    let h13 = valuation_heatmap(&c, 13).unwrap();
    assert_eq!(h13.max_exponent(), 0);
    let h7 = valuation_heatmap(&c, 7).unwrap();
    assert!(h7.max_exponent() > 0);
    let csv = h7.to_csv();
    assert!(csv.starts_with("m,n,denom_exponent\n0,0,0\n"));
    let fit = h7.fit_diagonal(&c, 10, 28).unwrap();
    assert_eq!(fit.offset, 1);
    assert!(fit.slope > 0.0);
}

#[test]
fn rational_valuations() {
    assert_eq!(rational_valuation(&q(49, 3), 7), Some(2));
    assert_eq!(rational_valuation(&q(5, 98), 7), Some(-2));
    assert_eq!(rational_valuation(&q(0, 1), 7), None);
}
