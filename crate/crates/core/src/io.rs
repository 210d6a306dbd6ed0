//! JSON documents for invariants. Floats are written with 17 significant digits
//! so every value reads back bit-identically.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::invariants::{MomentVector, Pdd, Rdd, Sdd, SddEntry};
use crate::oriented::{Ocd, Scd, ScdEntry, SignFeature, StrengthConfig};

/// Formats a finite float with exactly 17 significant digits in positional
/// notation, falling back to scientific notation for very large or small magnitudes.
pub fn fmt_sig17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "NaN".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-7..=20).contains(&exp) {
        return sci;
    }
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let point = exp + 1;
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}.0", "0".repeat(point as usize - digits.len()))
    } else {
        let (int, frac) = digits.split_at(point as usize);
        format!("{int}.{frac}")
    };
    format!("{sign}{body}")
}

/// A float serialized through [`fmt_sig17`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F(pub f64);

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(fmt_sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        f64::deserialize(d).map(F)
    }
}

fn floats(v: &[f64]) -> Vec<F> {
    v.iter().copied().map(F).collect()
}

fn unwrap(v: &[F]) -> Vec<f64> {
    v.iter().map(|f| f.0).collect()
}

#[derive(Serialize, Deserialize)]
struct SddDoc {
    kind: String,
    h: usize,
    m: usize,
    n: usize,
    total: u64,
    entries: Vec<SddEntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct SddEntryDoc {
    weight: F,
    multiplicity: u64,
    d_part: Vec<F>,
    r_part: Vec<Vec<F>>,
}

#[derive(Serialize, Deserialize)]
struct ScdDoc {
    kind: String,
    n: usize,
    m: usize,
    total: u64,
    config: ConfigDoc,
    entries: Vec<ScdEntryDoc>,
}

#[derive(Serialize, Deserialize)]
struct ConfigDoc {
    c_n: F,
    sign_feature: String,
    precenter: bool,
}

#[derive(Serialize, Deserialize)]
struct ScdEntryDoc {
    weight: F,
    multiplicity: u64,
    d_part: Vec<F>,
    m_part: Vec<Vec<F>>,
}

fn check_kind(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::InvalidArgument(format!(
            "expected a '{expected}' document, found '{found}'"
        )));
    }
    Ok(())
}

fn check_weight(weight: f64, multiplicity: u64, total: u64) -> Result<()> {
    let expected = multiplicity as f64 / total as f64;
    if (weight - expected).abs() > 1e-12 {
        return Err(Error::InfeasibleWeights(format!(
            "weight {weight} does not match multiplicity {multiplicity} of {total}"
        )));
    }
    Ok(())
}

pub fn sdd_to_json(s: &Sdd) -> Result<String> {
    let doc = SddDoc {
        kind: "sdd".into(),
        h: s.h(),
        m: s.m(),
        n: s.n(),
        total: s.total(),
        entries: s
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| SddEntryDoc {
                weight: F(s.weight(i)),
                multiplicity: e.multiplicity,
                d_part: floats(e.rdd.d_part()),
                r_part: e.rdd.columns().map(floats).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn sdd_from_json(text: &str) -> Result<Sdd> {
    let doc: SddDoc = serde_json::from_str(text)?;
    check_kind(&doc.kind, "sdd")?;
    let entries = doc
        .entries
        .iter()
        .map(|e| {
            check_weight(e.weight.0, e.multiplicity, doc.total)?;
            let columns: Vec<f64> = e.r_part.iter().flat_map(|c| unwrap(c)).collect();
            if e.r_part.iter().any(|c| c.len() != doc.h) {
                return Err(Error::ShapeMismatch(format!("every column needs {} entries", doc.h)));
            }
            Ok(SddEntry {
                rdd: Rdd::new(doc.h, unwrap(&e.d_part), columns)?,
                multiplicity: e.multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = Sdd::new(doc.h, doc.m, doc.n, entries)?;
    if s.total() != doc.total {
        return Err(Error::InfeasibleWeights(format!(
            "total {} does not match C({}, {})",
            doc.total, doc.m, doc.h
        )));
    }
    Ok(s)
}

pub fn scd_to_json(s: &Scd) -> Result<String> {
    let doc = ScdDoc {
        kind: "scd".into(),
        n: s.n(),
        m: s.m(),
        total: s.total(),
        config: ConfigDoc {
            c_n: F(s.config().c(s.n())),
            sign_feature: s.config().sign_feature.to_string(),
            precenter: s.precentered(),
        },
        entries: s
            .entries()
            .iter()
            .enumerate()
            .map(|(i, e)| ScdEntryDoc {
                weight: F(s.weight(i)),
                multiplicity: e.multiplicity,
                d_part: floats(e.ocd.d_part()),
                m_part: e.ocd.columns().map(floats).collect(),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn scd_from_json(text: &str) -> Result<Scd> {
    let doc: ScdDoc = serde_json::from_str(text)?;
    check_kind(&doc.kind, "scd")?;
    let mut config = StrengthConfig::new(doc.config.sign_feature.parse::<SignFeature>()?);
    if doc.config.c_n.0 != config.c(doc.n) {
        config = config.with_c_n(doc.config.c_n.0)?;
    }
    let entries = doc
        .entries
        .iter()
        .map(|e| {
            check_weight(e.weight.0, e.multiplicity, doc.total)?;
            if e.m_part.iter().any(|c| c.len() != doc.n + 1) {
                return Err(Error::ShapeMismatch(format!(
                    "every column needs {} entries",
                    doc.n + 1
                )));
            }
            let columns: Vec<f64> = e.m_part.iter().flat_map(|c| unwrap(c)).collect();
            Ok(ScdEntry {
                ocd: Ocd::new(doc.n, unwrap(&e.d_part), columns)?,
                multiplicity: e.multiplicity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let s = Scd::new(doc.n, doc.m, config, doc.config.precenter, entries)?;
    if s.total() != doc.total {
        return Err(Error::InfeasibleWeights(format!(
            "total {} does not match C({}, {})",
            doc.total,
            doc.m,
            doc.n - 1
        )));
    }
    Ok(s)
}

#[derive(Serialize)]
struct VectorDoc<'a> {
    kind: &'a str,
    m: usize,
    n: usize,
    values: Vec<F>,
}

/// A plain vector invariant such as a sorted distance vector or AMD list.
pub fn vector_to_json(kind: &str, m: usize, n: usize, values: &[f64]) -> Result<String> {
    Ok(serde_json::to_string_pretty(&VectorDoc {
        kind,
        m,
        n,
        values: floats(values),
    })?)
}

#[derive(Serialize)]
struct PddDoc {
    kind: &'static str,
    m: usize,
    rows: Vec<PddRowDoc>,
}

#[derive(Serialize)]
struct PddRowDoc {
    weight: F,
    multiplicity: u64,
    values: Vec<F>,
}

pub fn pdd_to_json(p: &Pdd) -> Result<String> {
    let rows = p
        .rows()
        .iter()
        .enumerate()
        .map(|(i, (row, mult))| PddRowDoc {
            weight: F(p.weight(i)),
            multiplicity: *mult,
            values: floats(row),
        })
        .collect();
    Ok(serde_json::to_string_pretty(&PddDoc {
        kind: "pdd",
        m: p.m(),
        rows,
    })?)
}

#[derive(Serialize)]
struct MomentDoc<'a> {
    kind: &'a str,
    subset_size: usize,
    order: u32,
    values: Vec<F>,
}

pub fn moments_to_json(kind: &str, v: &MomentVector) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MomentDoc {
        kind,
        subset_size: v.subset_size(),
        order: v.order(),
        values: floats(v.values()),
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Cloud;
    use crate::invariants::sdd;
    use crate::oriented::scd;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_sig17(4.0), "4.0000000000000000");
        assert_eq!(fmt_sig17(0.0), "0.0000000000000000");
        assert_eq!(fmt_sig17(-0.0), "0.0000000000000000");
        assert_eq!(fmt_sig17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_sig17(-2.5e-3), "-0.0025000000000000001");
        assert_eq!(fmt_sig17(0.5e-20), "4.9999999999999997e-21");
        assert_eq!(fmt_sig17(123456.0), "123456.00000000000");
        for x in [2f64.sqrt(), 1e-8, 3.0e20, -7.25, f64::MIN_POSITIVE] {
            assert_eq!(fmt_sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    fn t() -> Cloud {
        Cloud::new(vec![vec![1.0, 1.0], vec![-1.0, 1.0], vec![-2.0, 0.0], vec![2.0, 0.0]]).unwrap()
    }

    #[test]
    fn sdd_round_trip() {
        let s = sdd(&t(), 2, Some(0.0)).unwrap();
        let text = sdd_to_json(&s).unwrap();
        assert!(text.contains("\"kind\": \"sdd\""));
        assert_eq!(sdd_from_json(&text).unwrap(), s);
        assert!(scd_from_json(&text).is_err());
    }

    #[test]
    fn scd_round_trip() {
        let cfg = StrengthConfig::new(SignFeature::Area).with_c_n(2.0).unwrap();
        let s = scd(&t(), cfg, true).unwrap();
        let back = scd_from_json(&scd_to_json(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        let s = scd(&t(), StrengthConfig::default(), false).unwrap();
        assert_eq!(scd_from_json(&scd_to_json(&s).unwrap()).unwrap(), s);
    }
}
