//! JSON records for pairs and maps, and plot-ready CSV tables.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::conformal::{ConformalMap, Mat6};
use crate::conics::{ConicPair, Parametrization, Side};
use crate::error::{Error, Result};
use crate::harness::fmt_f64;
use crate::lines::RulsurfReport;
use crate::neutral::{Subspace33, Vec33};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    #[serde(rename = "V")]
    pub v: Vec<[f64; 6]>,
    #[serde(rename = "Vp")]
    pub vp: Vec<[f64; 6]>,
}

impl PairRecord {
    pub fn from_pair(pair: &ConicPair) -> Self {
        let rows = |s: &Subspace33| s.basis().iter().map(|b| b.0).collect();
        PairRecord {
            v: rows(pair.v()),
            vp: rows(pair.vp()),
        }
    }

    pub fn to_pair(&self) -> Result<ConicPair> {
        let sub = |rows: &[[f64; 6]]| Subspace33::new(rows.iter().map(|r| Vec33(*r)).collect());
        ConicPair::new(sub(&self.v)?, sub(&self.vp)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapRecord {
    pub lambda_matrix: Mat6,
    pub sign: i8,
}

impl MapRecord {
    pub fn from_map(m: &ConformalMap) -> Self {
        MapRecord {
            lambda_matrix: *m.matrix(),
            sign: m.sign(),
        }
    }

    pub fn to_map(&self) -> Result<ConformalMap> {
        let map = ConformalMap::new(self.lambda_matrix)?;
        if map.sign() != self.sign {
            return Err(Error::InvalidParameter(format!(
                "declared sign {} but the matrix has sign {}",
                self.sign,
                map.sign()
            )));
        }
        Ok(map)
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::InvalidParameter(format!("malformed JSON: {e}"))
}

pub fn parse_pair(s: &str) -> Result<ConicPair> {
    serde_json::from_str::<PairRecord>(s).map_err(parse_err)?.to_pair()
}

pub fn pair_to_json(pair: &ConicPair) -> String {
    serde_json::to_string_pretty(&PairRecord::from_pair(pair)).expect("finite floats serialize")
}

pub fn parse_map(s: &str) -> Result<ConformalMap> {
    serde_json::from_str::<MapRecord>(s).map_err(parse_err)?.to_map()
}

pub fn map_to_json(m: &ConformalMap) -> String {
    serde_json::to_string_pretty(&MapRecord::from_map(m)).expect("finite floats serialize")
}

/// `n` samples per side; points at infinity have empty coordinates.
pub fn samples_csv(pair: &ConicPair, n: usize) -> Result<String> {
    let mut s = String::from("side,theta,x1,x2,x3,x4,speed,finite\n");
    for side in [Side::S, Side::Sp] {
        let p = Parametrization::new(&pair.conic(side))?;
        for k in 0..n {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            let c = p.sample(theta);
            let coords = if c.finite {
                c.point.0.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
            } else {
                ",,,".to_string()
            };
            let _ = writeln!(s, "{},{},{},{},{}", side_name(side), fmt_f64(theta), coords, fmt_f64(c.speed), c.finite);
        }
    }
    Ok(s)
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::S => "S",
        Side::Sp => "Sp",
    }
}

/// One row per ruling: the line {(A z + B, C z + D, z)}.
pub fn lines_csv(report: &RulsurfReport) -> String {
    let mut s = String::from("side,theta,A,B,C,D\n");
    for r in &report.rulings {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            side_name(r.side),
            fmt_f64(r.theta),
            fmt_f64(r.line.a),
            fmt_f64(r.line.b),
            fmt_f64(r.line.c),
            fmt_f64(r.line.d)
        );
    }
    s
}

pub fn surface_csv(report: &RulsurfReport) -> String {
    let mut s = String::from("side,theta,z,X,Y,Z\n");
    for (side, theta, z, p) in &report.surface_points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            side_name(*side),
            fmt_f64(*theta),
            fmt_f64(*z),
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2])
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::random_map;
    use crate::conics::standard_pair;
    use crate::lines::verify_rulsurf;

    #[test]
    fn pair_roundtrip() {
        let p = standard_pair();
        let q = parse_pair(&pair_to_json(&p)).unwrap();
        assert!(q.v().distance(p.v()) < 1e-15 && q.vp().distance(p.vp()) < 1e-15);
        assert!(parse_pair("{\"V\": [[1,0,0,0,0,0]]}").is_err());
        assert!(parse_pair("not json").is_err());
    }

    #[test]
    fn map_roundtrip() {
        let m = random_map(3, 4);
        let back = parse_map(&map_to_json(&m)).unwrap();
        assert_eq!(back.sign(), m.sign());
        let bad = MapRecord {
            lambda_matrix: [[1.0; 6]; 6],
            sign: 1,
        };
        assert!(bad.to_map().is_err());
    }

    #[test]
    fn csv_tables() {
        let pair = standard_pair();
        let s = samples_csv(&pair, 4).unwrap();
        assert_eq!(s.lines().count(), 9);
        let r = verify_rulsurf(&pair, 8).unwrap();
        assert_eq!(lines_csv(&r).lines().count(), 1 + r.rulings.len());
        assert_eq!(surface_csv(&r).lines().count(), 1 + r.surface_points.len());
    }
}
