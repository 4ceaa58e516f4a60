mod args;
mod parse;

use args::{Cli, Command, CurveArgs, ExpandTarget, VerifyCommand};
use clap::Parser;
use ektheta::curvelattice::{
    catalog, compute_periods, find_row, formal_log, sigma_series, theta_series, wp_series, CurveData, LatticeData,
};
use ektheta::eklerch::{
    check_functional_equation, ek_number, eisenstein_kronecker_lerch, hecke_l_partial, CharacterTable, EkPoint,
    HeckeCharacter, QuadraticOrder,
};
use ektheta::kronecker::{
    compose_formal, kronecker_exact, valuation_heatmap, verify_distribution, verify_generating_function,
    verify_kronecker_identity,
};
use ektheta::padicmeasure::{
    kummer_origin, measure_from_theta, moment_table, restrict_to_units, verify_interpolation_origin,
};
use ektheta::Error;
use parse::{parse_complex, parse_element, parse_pair, parse_residue_value, parse_torsion, random_points};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::process::ExitCode;

enum Failure {
    Usage(String),
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 1,
            Failure::Lib(e) => match e {
                Error::Parse(_)
                | Error::UnknownCatalogRow(_)
                | Error::Precondition(_)
                | Error::NotPrime(_)
                | Error::NotSquarefree(_)
                | Error::Ramified { .. }
                | Error::Inert { .. }
                | Error::UnknownE2Star
                | Error::ClassGroup(_)
                | Error::CharacterTable(_)
                | Error::EpsilonCongruence(_)
                | Error::FieldMismatch { .. }
                | Error::OrderExceeded { .. }
                | Error::Pole(_)
                | Error::DivisionByZero => 2,
                _ => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

/// A result plus, for verification commands, whether it passed.
struct Outcome {
    result: Value,
    passed: Option<bool>,
}

impl Outcome {
    fn data(result: Value) -> Self {
        Outcome { result, passed: None }
    }

    fn check(result: Value, passed: bool) -> Self {
        Outcome { result, passed: Some(passed) }
    }
}

type Run = std::result::Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli).and_then(|o| emit(&cli, o)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(cli: &Cli, o: Outcome) -> std::result::Result<u8, Failure> {
    let mut doc = json!({
        "meta": {
            "tool": "ektheta",
            "version": env!("CARGO_PKG_VERSION"),
            "config": serde_json::to_value(cli).expect("config is serializable"),
            "seeds": {"points": cli.seed},
        },
        "result": o.result,
    });
    if let Some(p) = o.passed {
        doc["passed"] = json!(p);
    }
    let mut text = serde_json::to_string_pretty(&doc).expect("json");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(match o.passed {
        Some(false) => {
            eprintln!("verification failed");
            1
        }
        _ => 0,
    })
}

fn curve(c: &CurveArgs) -> std::result::Result<CurveData, Failure> {
    if let Some(label) = &c.catalog {
        let u = ektheta::coeffring::parse_rational(&c.u)?;
        let mut curve = find_row(label)?.instantiate(&u)?;
        if let Some(e2) = &c.e2star {
            curve = curve.with_e2_star(ektheta::coeffring::parse_rational(e2)?);
        }
        return Ok(curve);
    }
    let (Some(g2), Some(g3)) = (&c.g2, &c.g3) else {
        return Err(Failure::Usage("select a curve with --catalog LABEL or --g2 and --g3".into()));
    };
    let mut curve = CurveData::new(ektheta::coeffring::parse_rational(g2)?, ektheta::coeffring::parse_rational(g3)?)?;
    if let Some(e2) = &c.e2star {
        curve = curve.with_e2_star(ektheta::coeffring::parse_rational(e2)?);
    }
    if let Some(d) = c.cm {
        curve = curve.with_cm(d);
    }
    Ok(curve)
}

fn lattice(c: &CurveArgs, bits: u32) -> std::result::Result<(CurveData, LatticeData), Failure> {
    let curve = curve(c)?;
    let lat = compute_periods(&curve, bits)?;
    Ok((curve, lat))
}

fn run(cli: &Cli) -> Run {
    match &cli.command {
        Command::Catalog { u, .. } => {
            let u = u.as_deref().map(ektheta::coeffring::parse_rational).transpose()?;
            let rows = catalog().iter().map(|r| r.to_json(u.as_ref())).collect::<Result<Vec<_>, _>>()?;
            Ok(Outcome::data(json!({"rows": rows})))
        }
        Command::Expand { what, curve: c, order, .. } => {
            let curve = curve(c)?;
            let o = i64::from(*order);
            let v = match what {
                ExpandTarget::Kronecker => kronecker_exact(&curve, *order)?.to_json(),
                ExpandTarget::Theta => theta_series(&curve, o)?.to_json(),
                ExpandTarget::Sigma => sigma_series(&curve, o)?.to_json(),
                ExpandTarget::Wp => wp_series(&curve, o)?.to_json(),
            };
            Ok(Outcome::data(json!({"curve": curve.to_json(), "order": order, "exact": true, "series": v})))
        }
        Command::FormalLog { curve: c, order } => {
            let curve = curve(c)?;
            let log = formal_log(&curve, i64::from(*order))?;
            Ok(Outcome::data(json!({"curve": curve.to_json(), "order": order, "exact": true, "lambda": log.lambda.to_json()})))
        }
        Command::Compose { curve: c, order, starred } => {
            let curve = curve(c)?;
            let exp = kronecker_exact(&curve, *order)?;
            let comp = compose_formal(&exp, *order, *starred)?;
            Ok(Outcome::data(json!({"curve": curve.to_json(), "order": order, "exact": true, "composed": comp.to_json()})))
        }
        Command::Valuations { curve: c, prime, order, csv, fit_diagonal, fit_from } => {
            let curve = curve(c)?;
            let exp = kronecker_exact(&curve, *order)?;
            let comp = compose_formal(&exp, *order, true)?;
            let heat = valuation_heatmap(&comp, *prime)?;
            let mut v = json!({
                "curve": curve.to_json(),
                "prime": prime,
                "order": order,
                "exact": true,
                "max_exponent": heat.max_exponent(),
            });
            match csv {
                Some(path) => {
                    std::fs::write(path, heat.to_csv()).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    v["csv"] = json!(path.display().to_string());
                }
                None => v["heatmap"] = heat.to_json(),
            }
            if *fit_diagonal {
                let fit = heat.fit_diagonal(&comp, *fit_from, *order)?;
                v["fit"] = fit.to_json();
                v["fit"]["nondecreasing_from_5"] = json!(fit.nondecreasing_from(5));
            }
            Ok(Outcome::data(v))
        }
        Command::Ek { curve: c, a, b, z0, w0, s, err, prec } => {
            let (curve, lat) = lattice(c, prec.bits)?;
            let (zx, zy) = parse_torsion(z0)?;
            let (wx, wy) = parse_torsion(w0)?;
            let zp = EkPoint::torsion(&zx, &zy, &lat);
            let wp = EkPoint::torsion(&wx, &wy, &lat);
            let mut v = json!({"curve": curve.to_json(), "a": a, "z0": z0, "w0": w0, "precision_bits": prec.bits});
            match s {
                Some(s) => {
                    let s = parse_complex(s, prec.bits)?;
                    v["s"] = json!([s.real().to_f64(), s.imag().to_f64()]);
                    v["value"] = eisenstein_kronecker_lerch(*a, &zp, &wp, &s, &lat, *err)?.to_json();
                }
                None => {
                    v["b"] = json!(b);
                    v["value"] = ek_number(*a, *b, &zp, &wp, &lat, *err)?.to_json();
                }
            }
            Ok(Outcome::data(v))
        }
        Command::HeckeL { d, conductor, infinity, values, s, err, prec } => {
            let order = QuadraticOrder::new(*d)?;
            let f = parse_element(&order, conductor)?;
            let (m, n) = parse_pair::<u32>(infinity)?;
            let table = values.iter().map(|t| parse_residue_value(t, prec.bits)).collect::<Result<Vec<_>, _>>()?;
            let chi = HeckeCharacter::new(order, f, (m, n), CharacterTable { values: table }, prec.bits)?;
            let sv = parse_complex(s, prec.bits)?;
            let l = hecke_l_partial(&chi, &sv, *err)?;
            Ok(Outcome::data(json!({
                "d": d,
                "conductor": conductor,
                "infinity_type": [m, n],
                "s": s,
                "precision_bits": prec.bits,
                "value": l.to_json(),
            })))
        }
        Command::Verify { check } => verify(cli, check),
        Command::Measure { curve: c, prime, n, order, restrict, moments, json: full } => {
            let curve = curve(c)?;
            let mut mu = measure_from_theta(&curve, *prime, *n, *order)?;
            if *restrict {
                mu = restrict_to_units(&mu)?;
            }
            let mut v = json!({
                "curve": curve.to_json(),
                "p": prime,
                "abs_prec": n,
                "f": mu.f,
                "order": order,
                "restricted": restrict,
                "min_valuation": mu.min_valuation(),
                "min_precision": mu.min_precision(),
            });
            if *full {
                v["measure"] = mu.to_json();
            }
            if let Some(m) = moments {
                let (a, b) = parse_pair::<u32>(m)?;
                v["moments"] = moment_table(&mu, a, b)?.to_json();
            }
            Ok(Outcome::data(v))
        }
        Command::VerifyInterpolation { curve: c, prime, n, amax, bmax } => {
            let curve = curve(c)?;
            let rep = verify_interpolation_origin(&curve, *prime, *n, *amax, *bmax)?;
            Ok(Outcome::check(json!({"curve": curve.to_json(), "report": rep.to_json()}), rep.passed()))
        }
    }
}

fn verify(cli: &Cli, check: &VerifyCommand) -> Run {
    match check {
        VerifyCommand::Kronecker { curve: c, points, tol, prec } => {
            let (curve, lat) = lattice(c, prec.bits)?;
            let pts = random_points(&lat, *points, cli.seed);
            let reports = pts
                .par_iter()
                .map(|(coords, pair)| verify_kronecker_identity(std::slice::from_ref(pair), &lat, *tol).map(|r| (coords, r)))
                .collect::<Result<Vec<_>, _>>()?;
            let residuals: Vec<f64> = reports.iter().map(|(_, r)| r.max_residual).collect();
            let max = residuals.iter().copied().fold(0.0, f64::max);
            let samples: Vec<Value> = reports
                .iter()
                .map(|(coords, r)| json!({"z": [coords[0], coords[1]], "w": [coords[2], coords[3]], "residual": r.max_residual}))
                .collect();
            let passed = max <= *tol;
            Ok(Outcome::check(
                json!({
                    "curve": curve.to_json(),
                    "precision_bits": prec.bits,
                    "samples": samples,
                    "max_residual": max,
                    "tol": tol,
                }),
                passed,
            ))
        }
        VerifyCommand::GeneratingFunction { curve: c, z0, w0, amax, bmax, tol, prec } => {
            let (curve, lat) = lattice(c, prec.bits)?;
            let z = parse_torsion(z0)?;
            let w = parse_torsion(w0)?;
            let rep = verify_generating_function((&z.0, &z.1), (&w.0, &w.1), *amax, *bmax, &lat, *tol)?;
            Ok(Outcome::check(
                json!({"curve": curve.to_json(), "precision_bits": prec.bits, "report": rep.to_json()}),
                rep.passed,
            ))
        }
        VerifyCommand::Distribution { curve: c, a, b, epsilon, z0, w0, points, tol, prec } => {
            let (curve, lat) = lattice(c, prec.bits)?;
            if curve.d == 0 {
                return Err(Failure::Usage("the distribution relation needs a CM curve (--catalog or --cm)".into()));
            }
            let order = QuadraticOrder::new(curve.d)?;
            let (ea, eb, ee) = (parse_element(&order, a)?, parse_element(&order, b)?, parse_element(&order, epsilon)?);
            let z = parse_torsion(z0)?;
            let w = parse_torsion(w0)?;
            let pts: Vec<_> = random_points(&lat, *points, cli.seed).into_iter().map(|(_, p)| p).collect();
            let rep = verify_distribution(&order, &ea, &eb, &ee, &lat.point(&z.0, &z.1), &lat.point(&w.0, &w.1), &lat, &pts, *tol)?;
            Ok(Outcome::check(
                json!({"curve": curve.to_json(), "precision_bits": prec.bits, "report": rep.to_json()}),
                rep.identity.passed,
            ))
        }
        VerifyCommand::FunctionalEquation { curve: c, a, z0, w0, s, err, tol, prec } => {
            let (curve, lat) = lattice(c, prec.bits)?;
            let z = parse_torsion(z0)?;
            let w = parse_torsion(w0)?;
            let sv = parse_complex(s, prec.bits)?;
            let r = check_functional_equation(
                *a,
                &EkPoint::torsion(&z.0, &z.1, &lat),
                &EkPoint::torsion(&w.0, &w.1, &lat),
                &sv,
                &lat,
                *err,
            )?;
            Ok(Outcome::check(
                json!({"curve": curve.to_json(), "precision_bits": prec.bits, "a": a, "s": s, "residual": r, "tol": tol}),
                r <= *tol,
            ))
        }
        VerifyCommand::Integrality { curve: c, prime, order } => {
            let curve = curve(c)?;
            let comp = compose_formal(&kronecker_exact(&curve, *order)?, *order, true)?;
            let heat = valuation_heatmap(&comp, *prime)?;
            let max = heat.max_exponent();
            Ok(Outcome::check(
                json!({"curve": curve.to_json(), "prime": prime, "order": order, "exact": true, "max_denominator_exponent": max}),
                max == 0,
            ))
        }
        VerifyCommand::Kummer { curve: c, prime, n, max_exponent } => {
            let curve = curve(c)?;
            let rep = kummer_origin(&curve, *prime, *n, *max_exponent)?;
            Ok(Outcome::check(json!({"curve": curve.to_json(), "report": rep.to_json()}), rep.passed()))
        }
    }
}
