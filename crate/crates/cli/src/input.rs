//! Scheme description files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use etale_core::corering::{parse_poly, parse_scalar, Field, Polynomial};
use etale_core::groebner::Caps;
use etale_core::scheme::{check_point, validate_scheme, FpAlgebra, RationalPoint, SchemeDescription};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime {
        #[serde(rename = "Fp")]
        p: u64,
    },
}

impl FieldSpec {
    pub fn to_field(&self) -> Result<Field, CliError> {
        match self {
            FieldSpec::Named(s) if s == "Q" => Ok(Field::Rationals),
            FieldSpec::Named(s) => Err(CliError::parse(format!("unknown field `{s}`; expected \"Q\" or {{\"Fp\": p}}"))),
            FieldSpec::Prime { p } => Ok(Field::prime(*p)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub coords: Vec<String>,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub relations: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub points: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapSpec>,
}

impl SchemeFile {
    /// Compact JSON with sorted keys.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("scheme files serialize");
        serde_json::to_string(&value).expect("values serialize")
    }
}

/// A parsed and validated scheme file.
#[derive(Clone, Debug)]
pub struct SchemeInput {
    /// The file with relations, points and map coordinates reprinted in
    /// normal form.
    pub canonical: SchemeFile,
    pub algebra: FpAlgebra,
    pub points: BTreeMap<String, RationalPoint>,
    pub maps: BTreeMap<String, (Vec<Polynomial>, String)>,
    pub base_dir: Option<PathBuf>,
    pub digest: String,
}

pub fn parse_scheme(text: &str, caps: Caps) -> Result<SchemeInput, CliError> {
    let file: SchemeFile = serde_json::from_str(text)?;
    let field = file.field.to_field()?;
    let algebra = validate_scheme(
        &SchemeDescription {
            field,
            vars: file.vars.clone(),
            relations: file.relations.clone(),
        },
        caps,
    )?;
    let ring = algebra.ring().clone();
    let relations = file
        .relations
        .iter()
        .map(|r| Ok(parse_poly(r, &ring)?.to_string()))
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut points = BTreeMap::new();
    let mut canon_points = BTreeMap::new();
    for (name, coords) in &file.points {
        let coords = coords
            .iter()
            .map(|c| parse_scalar(c, field))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::parse(format!("point `{name}`: {e}")))?;
        canon_points.insert(name.clone(), coords.iter().map(ToString::to_string).collect());
        let p = check_point(&algebra, coords).map_err(|e| CliError::parse(format!("point `{name}`: {e}")))?;
        points.insert(name.clone(), p);
    }

    let mut maps = BTreeMap::new();
    let mut canon_maps = BTreeMap::new();
    for (name, spec) in &file.maps {
        let coords = spec
            .coords
            .iter()
            .map(|c| parse_poly(c, &ring))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::parse(format!("map `{name}`: {e}")))?;
        canon_maps.insert(
            name.clone(),
            MapSpec {
                coords: coords.iter().map(ToString::to_string).collect(),
                target: spec.target.clone(),
            },
        );
        maps.insert(name.clone(), (coords, spec.target.clone()));
    }

    let canonical = SchemeFile {
        field: match field {
            Field::Rationals => FieldSpec::Named("Q".into()),
            Field::Prime(p) => FieldSpec::Prime { p: p as u64 },
        },
        vars: file.vars,
        relations,
        points: canon_points,
        maps: canon_maps,
    };
    let digest = hex::encode(Sha256::digest(canonical.to_canonical_json().as_bytes()));
    Ok(SchemeInput {
        canonical,
        algebra,
        points,
        maps,
        base_dir: None,
        digest,
    })
}

pub fn load_scheme(path: &Path, caps: Caps) -> Result<SchemeInput, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut input = parse_scheme(&text, caps).map_err(|e| CliError {
        kind: e.kind,
        message: format!("{}: {}", path.display(), e.message),
    })?;
    input.base_dir = path.parent().map(Path::to_path_buf);
    Ok(input)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_canonicalizes() {
        let text = r#"{"vars": ["x", "y"], "field": {"Fp": 5},
            "relations": ["y*y - x^3 + 5*x"], "points": {"o": ["0", "10"]}}"#;
        let input = parse_scheme(text, Caps::default()).unwrap();
        assert_eq!(input.canonical.relations, vec!["4*x^3 + y^2"]);
        assert_eq!(input.canonical.points["o"], vec!["0", "0"]);
        assert_eq!(
            input.canonical.to_canonical_json(),
            r#"{"field":{"Fp":5},"points":{"o":["0","0"]},"relations":["4*x^3 + y^2"],"vars":["x","y"]}"#
        );
        assert_eq!(input.digest.len(), 64);
    }

    #[test]
    fn round_trip_is_a_fixpoint() {
        let text = r#"{"field": "Q", "vars": ["x", "y"], "relations": ["(x + y)^2 - 1", "2/4*x"],
            "points": {"p": ["0", "-1"]}, "maps": {"f": {"coords": ["x*1"], "target": "line.json"}}}"#;
        let once = parse_scheme(text, Caps::default()).unwrap();
        let twice = parse_scheme(&once.canonical.to_canonical_json(), Caps::default()).unwrap();
        assert_eq!(once.canonical, twice.canonical);
        assert_eq!(once.digest, twice.digest);
    }

    #[test]
    fn digest_ignores_formatting() {
        let a = parse_scheme(r#"{"field":"Q","vars":["x"],"relations":["x^2-1"]}"#, Caps::default()).unwrap();
        let b = parse_scheme("{ \"relations\": [\"-1 + x*x\"],\n \"vars\": [\"x\"], \"field\": \"Q\" }", Caps::default()).unwrap();
        assert_eq!(a.digest, b.digest);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            r#"{"field": "R", "vars": ["x"], "relations": []}"#,
            r#"{"field": {"Fp": 6}, "vars": ["x"], "relations": []}"#,
            r#"{"field": "Q", "vars": ["1x"], "relations": []}"#,
            r#"{"field": "Q", "vars": ["x"], "relations": ["x +"]}"#,
            r#"{"field": "Q", "vars": ["x"], "relations": ["y"]}"#,
            r#"{"field": "Q", "vars": ["x"], "relations": ["x"], "points": {"p": ["1"]}}"#,
            r#"{"field": "Q", "vars": ["x"], "relations": [], "extra": 1}"#,
            r#"{"field": "Q", "vars": ["x"]"#,
        ] {
            let e = parse_scheme(text, Caps::default()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}: {e}");
        }
    }
}
