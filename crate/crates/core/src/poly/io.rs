//! Polynomial file formats.
//!
//! JSON: `{"coeffs": [[re, im], ...], "label": "optional"}`, ascending degree.
//! Text: whitespace-separated real coefficients, ascending degree.

use std::io::{Read, Write};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyFormat {
    Json,
    Text,
}

impl PolyFormat {
    /// Guess from a file name: `.json` is JSON, anything else is text.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => PolyFormat::Json,
            _ => PolyFormat::Text,
        }
    }
}

impl FromStr for PolyFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(PolyFormat::Json),
            "text" | "txt" => Ok(PolyFormat::Text),
            other => Err(Error::Parse(format!("unknown polynomial format `{other}`"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

pub fn read_polynomial<R: Read>(mut source: R, format: PolyFormat) -> Result<Polynomial> {
    let mut buf = String::new();
    source.read_to_string(&mut buf)?;
    match format {
        PolyFormat::Json => {
            let doc: PolyJson =
                serde_json::from_str(&buf).map_err(|e| Error::Parse(e.to_string()))?;
            let p = Polynomial::new(
                doc.coeffs
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect(),
            )?;
            Ok(match doc.label {
                Some(l) => p.with_label(l),
                None => p,
            })
        }
        PolyFormat::Text => {
            let coeffs = buf
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{tok}`")))
                })
                .collect::<Result<Vec<f64>>>()?;
            Polynomial::from_real(&coeffs)
        }
    }
}

pub fn write_polynomial<W: Write>(p: &Polynomial, format: PolyFormat, mut sink: W) -> Result<()> {
    match format {
        PolyFormat::Json => {
            let doc = PolyJson {
                coeffs: p.coeffs().iter().map(|c| [c.re, c.im]).collect(),
                label: p.label().map(str::to_owned),
            };
            serde_json::to_writer(&mut sink, &doc).map_err(|e| Error::Io(e.to_string()))?;
            sink.write_all(b"\n")?;
        }
        PolyFormat::Text => {
            if p.coeffs().iter().any(|c| c.im != 0.0) {
                return Err(Error::Parse(
                    "text format holds real coefficients only".into(),
                ));
            }
            let line: Vec<String> = p.coeffs().iter().map(|c| format!("{}", c.re)).collect();
            writeln!(sink, "{}", line.join(" "))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn json_one_plus_z() {
        let p = read_polynomial(r#"{"coeffs":[[1,0],[1,0]]}"#.as_bytes(), PolyFormat::Json).unwrap();
        assert_eq!(p, Polynomial::from_real(&[1.0, 1.0]).unwrap());
    }

    #[test]
    fn text_shorthand() {
        let p = read_polynomial("1 0 -1".as_bytes(), PolyFormat::Text).unwrap();
        assert_eq!(p, Polynomial::from_real(&[1.0, 0.0, -1.0]).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            read_polynomial("{\"coeffs\":[[1,0],[0,0]]}".as_bytes(), PolyFormat::Json),
            Err(Error::ZeroLeading)
        ));
        assert!(matches!(
            read_polynomial("{\"coeffs\":[[1,0],".as_bytes(), PolyFormat::Json),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            read_polynomial("1 nan".as_bytes(), PolyFormat::Text),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            read_polynomial("1 x".as_bytes(), PolyFormat::Text),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn lehmer_round_trip() {
        let p = crate::poly::make_family(&crate::poly::FamilySpec::new(
            crate::poly::FamilyKind::Lehmer,
            0,
            0,
        ))
        .unwrap();
        let mut buf = Vec::new();
        write_polynomial(&p, PolyFormat::Json, &mut buf).unwrap();
        let q = read_polynomial(buf.as_slice(), PolyFormat::Json).unwrap();
        assert_eq!(p, q);
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(
            coeffs in proptest::collection::vec((-1e300f64..1e300, -1e-300f64..1e300), 1..20)
        ) {
            let mut c: Vec<Complex64> = coeffs.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let last = c.len() - 1;
            if c[last] == Complex64::new(0.0, 0.0) { c[last] = Complex64::new(1.0, 0.0); }
            let p = Polynomial::new(c).unwrap();
            let mut buf = Vec::new();
            write_polynomial(&p, PolyFormat::Json, &mut buf).unwrap();
            let q = read_polynomial(buf.as_slice(), PolyFormat::Json).unwrap();
            for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
