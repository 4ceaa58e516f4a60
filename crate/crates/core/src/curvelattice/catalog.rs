use super::CurveData;
use crate::coeffring::{rational_json, ExactScalar};
use crate::{Error, Result};
use rug::{Integer, Rational};
use serde_json::{json, Value};

/// One row of the table of CM curves over Q: each invariant is
/// `coeff · u^power` for a free nonzero rational `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogRow {
    pub label: &'static str,
    pub d: u32,
    pub g2: (Integer, u32),
    pub g3: (Integer, u32),
    pub e2_star: (Rational, u32),
}

fn row(label: &'static str, d: u32, g2: (i64, u32), g3: (i64, u32), e2: ((i64, i64), u32)) -> CatalogRow {
    CatalogRow {
        label,
        d,
        g2: (Integer::from(g2.0), g2.1),
        g3: (Integer::from(g3.0), g3.1),
        e2_star: (Rational::from(e2.0), e2.1),
    }
}

/// The 13 CM orders of class number one, one model each.
pub fn catalog() -> Vec<CatalogRow> {
    vec![
        row("Z[(1+√−3)/2]", 3, (0, 0), (1, 1), ((0, 1), 0)),
        row("Z[√−3]", 3, (15, 2), (11, 3), ((1, 2), 1)),
        row("Z[(1+3√−3)/2]", 3, (120, 2), (253, 3), ((2, 1), 1)),
        row("Z[√−1]", 1, (1, 1), (0, 0), ((0, 1), 0)),
        row("Z[2√−1]", 1, (44, 2), (56, 3), ((1, 1), 1)),
        row("Z[(1+√−7)/2]", 7, (35, 2), (49, 3), ((1, 2), 1)),
        row("Z[√−7]", 7, (5 * 7 * 17, 2), (3 * 49 * 19, 3), ((9, 2), 1)),
        row("Z[√−2]", 2, (30, 2), (28, 3), ((1, 2), 1)),
        row("Z[(1+√−11)/2]", 11, (8 * 3 * 11, 2), (7 * 121, 3), ((2, 1), 1)),
        row("Z[(1+√−19)/2]", 19, (8 * 19, 2), (361, 3), ((2, 1), 1)),
        row("Z[(1+√−43)/2]", 43, (16 * 5 * 43, 2), (3 * 7 * 43 * 43, 3), ((12, 1), 1)),
        row("Z[(1+√−67)/2]", 67, (8 * 5 * 11 * 67, 2), (7 * 31 * 67 * 67, 3), ((38, 1), 1)),
        row("Z[(1+√−163)/2]", 163, (16 * 5 * 23 * 29 * 163, 2), (7 * 11 * 19 * 127 * 163 * 163, 3), ((724, 1), 1)),
    ]
}

fn canonical_label(s: &str) -> String {
    let mut t: String = s
        .chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | '*'))
        .collect();
    t = t.replace('−', "-").replace('√', "sqrt").replace("ZZ", "Z").to_lowercase();
    t = t.replace("o_k", "z");
    if let Some(inner) = t.strip_prefix("z[").and_then(|x| x.strip_suffix(']')) {
        let inner = match inner {
            "i" => "sqrt-1".to_string(),
            "2i" => "2sqrt-1".to_string(),
            other => other.to_string(),
        };
        return format!("z[{inner}]");
    }
    t
}

/// Looks up a row by label; accepts `Z[i]`, `Z[sqrt(-2)]`, `Z[(1+√−7)/2]` and similar spellings.
pub fn find_row(label: &str) -> Result<CatalogRow> {
    let want = canonical_label(label);
    catalog()
        .into_iter()
        .find(|r| canonical_label(r.label) == want)
        .ok_or_else(|| Error::UnknownCatalogRow(label.to_string()))
}

fn symbolic(coeff: &str, power: u32) -> String {
    match (coeff, power) {
        ("0", _) => "0".into(),
        (c, 0) => c.into(),
        ("1", 1) => "u".into(),
        (c, 1) => format!("{c}u"),
        ("1", p) => format!("u^{p}"),
        (c, p) => format!("{c}u^{p}"),
    }
}

impl CatalogRow {
    /// The curve at a concrete nonzero rational `u`.
    pub fn instantiate(&self, u: &Rational) -> Result<CurveData> {
        if u.cmp0().is_eq() {
            return Err(Error::Precondition("u must be nonzero".into()));
        }
        let upow = |p: u32| -> Rational {
            let mut acc = Rational::from(1);
            for _ in 0..p {
                acc *= u;
            }
            acc
        };
        let g2 = Rational::from(&self.g2.0) * upow(self.g2.1);
        let g3 = Rational::from(&self.g3.0) * upow(self.g3.1);
        let e2 = Rational::from(&self.e2_star.0 * &upow(self.e2_star.1));
        let mut c = CurveData::new(g2, g3)?.with_e2_star(e2).with_cm(self.d);
        c.cm_order_label = Some(self.label.to_string());
        c.u = Some(u.clone());
        Ok(c)
    }

    pub fn symbolic_g2(&self) -> String {
        symbolic(&self.g2.0.to_string(), self.g2.1)
    }

    pub fn symbolic_g3(&self) -> String {
        symbolic(&self.g3.0.to_string(), self.g3.1)
    }

    pub fn symbolic_e2_star(&self) -> String {
        let (q, p) = &self.e2_star;
        if *q.denom() == 1 {
            symbolic(&q.numer().to_string(), *p)
        } else {
            format!("{}/{}", symbolic(&q.numer().to_string(), *p), q.denom())
        }
    }

    pub fn to_json(&self, u: Option<&Rational>) -> Result<Value> {
        let mut v = json!({
            "label": self.label,
            "d": self.d,
            "g2": {"coeff": self.g2.0.to_string(), "u_power": self.g2.1, "symbolic": self.symbolic_g2()},
            "g3": {"coeff": self.g3.0.to_string(), "u_power": self.g3.1, "symbolic": self.symbolic_g3()},
            "e2_star": {"coeff": rational_json(&self.e2_star.0), "u_power": self.e2_star.1, "symbolic": self.symbolic_e2_star()},
        });
        if let Some(u) = u {
            let c = self.instantiate(u)?;
            v["at_u"] = json!({
                "u": rational_json(u),
                "g2": c.g2.to_json(),
                "g3": c.g3.to_json(),
                "e2_star": c.e2_star.as_ref().map(ExactScalar::to_json),
            });
        }
        Ok(v)
    }
}
