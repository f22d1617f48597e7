//! The potential spec file: JSON text describing `q = g' + h + sum c_k
//! delta_{x_k}`:
//!
//! ```json
//! {
//!   "period": 1.0,
//!   "g": {"breakpoints": [0.0], "polys": [[0.5, -1.0]]},
//!   "h": null,
//!   "atoms": [[0.0, 1.0]]
//! }
//! ```
//!
//! `polys` holds ascending coefficients per piece. Aperiodic parts carry
//! one piece less than breakpoints (zero tails); periodic parts have one
//! piece per breakpoint, describing one period cell. Floats are written
//! with 17 significant digits.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::distribution::DistributionW1;
use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunction;
use crate::poly::Poly;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecesSpec {
    pub breakpoints: Vec<f64>,
    pub polys: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialSpec {
    #[serde(default)]
    pub period: Option<f64>,
    #[serde(default)]
    pub g: Option<PiecesSpec>,
    #[serde(default)]
    pub h: Option<PiecesSpec>,
    #[serde(default)]
    pub atoms: Vec<(f64, f64)>,
}

fn pieces_to_function(spec: &PiecesSpec, period: Option<f64>) -> Result<PiecewiseFunction> {
    if spec.breakpoints.is_empty() && spec.polys.is_empty() {
        return Ok(PiecewiseFunction::zero());
    }
    let polys: Vec<Poly> = spec.polys.iter().map(|c| Poly::from_coeffs(c.clone())).collect();
    match period {
        Some(t) => PiecewiseFunction::periodic(spec.breakpoints.clone(), polys, t),
        None => PiecewiseFunction::compact(spec.breakpoints.clone(), polys),
    }
}

fn function_to_pieces(f: &PiecewiseFunction) -> Result<PiecesSpec> {
    if f.is_identically_zero() {
        return Ok(PiecesSpec {
            breakpoints: Vec::new(),
            polys: Vec::new(),
        });
    }
    if f.period().is_none() && !f.has_zero_tails() {
        return Err(Error::Invalid(
            "potential files cannot express functions with nonzero tails".into(),
        ));
    }
    Ok(PiecesSpec {
        breakpoints: f.breakpoints().to_vec(),
        polys: f.pieces().iter().map(|p| p.coeffs().to_vec()).collect(),
    })
}

impl PotentialSpec {
    pub fn to_distribution(&self) -> Result<DistributionW1> {
        let g = match &self.g {
            Some(p) => pieces_to_function(p, self.period)?,
            None => PiecewiseFunction::zero(),
        };
        let h = match &self.h {
            Some(p) => pieces_to_function(p, self.period)?,
            None => PiecewiseFunction::zero(),
        };
        DistributionW1::new(g, h, self.atoms.clone(), self.period)
    }

    pub fn from_distribution(d: &DistributionW1) -> Result<PotentialSpec> {
        Ok(PotentialSpec {
            period: d.period(),
            g: Some(function_to_pieces(d.g())?),
            h: Some(function_to_pieces(d.h())?),
            atoms: d.atoms().to_vec(),
        })
    }
}

/// Parse and validate a potential file.
pub fn parse_spec(path: &Path) -> Result<DistributionW1> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let spec: PotentialSpec = serde_json::from_str(&text)?;
    spec.to_distribution()
}

/// 17-significant-digit float image, locale independent.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_floats(out: &mut String, xs: &[f64]) {
    out.push('[');
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&fmt_float(*x));
    }
    out.push(']');
}

/// Serialize with 17-significant-digit floats.
pub fn write_spec(spec: &PotentialSpec) -> String {
    let mut s = String::from("{\n");
    match spec.period {
        Some(t) => {
            s.push_str("  \"period\": ");
            s.push_str(&fmt_float(t));
            s.push_str(",\n");
        }
        None => s.push_str("  \"period\": null,\n"),
    }
    for (name, part) in [("g", &spec.g), ("h", &spec.h)] {
        s.push_str(&format!("  \"{name}\": "));
        match part {
            None => s.push_str("null"),
            Some(p) => {
                s.push_str("{\"breakpoints\": ");
                write_floats(&mut s, &p.breakpoints);
                s.push_str(", \"polys\": [");
                for (i, poly) in p.polys.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    write_floats(&mut s, poly);
                }
                s.push_str("]}");
            }
        }
        s.push_str(",\n");
    }
    s.push_str("  \"atoms\": [");
    for (i, (x, c)) in spec.atoms.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push('[');
        s.push_str(&fmt_float(*x));
        s.push_str(", ");
        s.push_str(&fmt_float(*c));
        s.push(']');
    }
    s.push_str("]\n}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_delta_comb_spec() {
        let text = r#"{"period": 1.0, "atoms": [[0.0, 1.0]]}"#;
        let spec: PotentialSpec = serde_json::from_str(text).unwrap();
        let d = spec.to_distribution().unwrap();
        assert_eq!(d.period(), Some(1.0));
        assert_eq!(d.atoms(), &[(0.0, 1.0)]);
    }

    #[test]
    fn empty_parts_give_zero_distribution() {
        let text = r#"{"period": null, "g": {"breakpoints": [], "polys": []}, "atoms": []}"#;
        let spec: PotentialSpec = serde_json::from_str(text).unwrap();
        assert!(spec.to_distribution().unwrap().is_zero());
    }

    #[test]
    fn decreasing_breakpoints_rejected() {
        let text = r#"{"g": {"breakpoints": [1.0, 0.0], "polys": [[1.0]]}, "atoms": []}"#;
        let spec: PotentialSpec = serde_json::from_str(text).unwrap();
        let err = spec.to_distribution().unwrap_err();
        assert!(err.to_string().contains("breakpoints not increasing"), "{err}");
    }

    #[test]
    fn duplicate_atoms_rejected() {
        let text = r#"{"atoms": [[0.5, 1.0], [0.5, 2.0]]}"#;
        let spec: PotentialSpec = serde_json::from_str(text).unwrap();
        let err = spec.to_distribution().unwrap_err();
        assert!(err.to_string().contains("duplicate atom"), "{err}");
    }

    #[test]
    fn round_trip_preserves_values() {
        let st = crate::decompose::decompose_periodic(
            &DistributionW1::delta_comb(0.75, 1.0).unwrap(),
            1.0,
        )
        .unwrap();
        let d = DistributionW1::from_sigma_tau(st.sigma, st.tau);
        let spec = PotentialSpec::from_distribution(&d).unwrap();
        let text = write_spec(&spec);
        let back: PotentialSpec = serde_json::from_str(&text).unwrap();
        let d2 = back.to_distribution().unwrap();
        for t in [0.1, 0.35, 0.8, 1.6] {
            assert_eq!(d.g().evaluate(t), d2.g().evaluate(t), "17 digits round-trip");
            assert_eq!(d.h().evaluate(t), d2.h().evaluate(t));
        }
    }
}
