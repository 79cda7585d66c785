//! JSON fixtures describing a four-manifold by its intersection form and
//! Seiberg-Witten basic classes, and the built-in catalog.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::error::Category;
use thiserror::Error;

use crate::lattice::{CohomologyClass, IntersectionForm};
use crate::manifold::{FourManifoldData, SpincData};
use crate::witten::{default_lambda_and_w, WittenError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attributes {
    pub simple_type: bool,
    pub abundant: bool,
    pub effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasicClassDoc {
    pub c1: Vec<i64>,
    pub sw: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<i64>,
}

/// The document exactly as it appears on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDoc {
    pub name: String,
    pub chi: i64,
    pub sigma: i64,
    pub b_plus: i64,
    pub gram: Vec<Vec<i64>>,
    pub basic_classes: Vec<BasicClassDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<i64>>,
    pub attributes: Attributes,
}

/// A validated fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub manifold: FourManifoldData,
    pub attributes: Attributes,
    pub w: Option<CohomologyClass>,
    pub lambda: Option<CohomologyClass>,
}

pub const BUILTIN_NAMES: [&str; 3] = ["k3.json", "e3.json", "e5.json"];

/// Source text of a built-in fixture, by file name with or without the
/// `.json` extension.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    match stem {
        "k3" => Some(include_str!("../fixtures/k3.json")),
        "e3" => Some(include_str!("../fixtures/e3.json")),
        "e5" => Some(include_str!("../fixtures/e5.json")),
        _ => None,
    }
}

pub fn builtin(name: &str) -> Option<Fixture> {
    builtin_source(name).map(|src| parse_fixture(src).expect("built-in fixture is valid"))
}

/// Reads a fixture from disk. A path that does not exist but names a
/// built-in (`k3.json`, `e3.json`, `e5.json`) resolves to the built-in.
pub fn load_fixture(path: impl AsRef<Path>) -> Result<Fixture, FixtureError> {
    let path = path.as_ref();
    match std::fs::read_to_string(path) {
        Ok(src) => parse_fixture(&src),
        Err(err) => {
            let builtin = path
                .file_name()
                .and_then(|n| n.to_str())
                .filter(|_| !path.exists())
                .and_then(builtin_source);
            match builtin {
                Some(src) => parse_fixture(src),
                None => Err(FixtureError::Io {
                    path: path.display().to_string(),
                    message: err.to_string(),
                }),
            }
        }
    }
}

pub fn parse_fixture(src: &str) -> Result<Fixture, FixtureError> {
    let doc: FixtureDoc = serde_json::from_str(src).map_err(|e| match e.classify() {
        Category::Data => FixtureError::Schema(e.to_string()),
        _ => FixtureError::Parse(e.to_string()),
    })?;
    validate(doc)
}

fn invariant(msg: impl Into<String>) -> FixtureError {
    FixtureError::Invariant(msg.into())
}

pub fn validate(doc: FixtureDoc) -> Result<Fixture, FixtureError> {
    let rank = doc.gram.len();
    if rank == 0 {
        return Err(invariant("gram is empty"));
    }
    if doc.gram.iter().any(|row| row.len() != rank) {
        return Err(invariant("gram is not square"));
    }
    for i in 0..rank {
        for j in 0..i {
            if doc.gram[i][j] != doc.gram[j][i] {
                return Err(invariant(format!("gram is not symmetric at ({i}, {j})")));
            }
        }
    }
    let lengths = doc
        .basic_classes
        .iter()
        .map(|c| c.c1.len())
        .chain(doc.w.iter().map(Vec::len))
        .chain(doc.lambda.iter().map(Vec::len));
    for len in lengths {
        if len != rank {
            return Err(invariant("class length ≠ form rank"));
        }
    }

    let form = IntersectionForm::from_gram(doc.gram.clone())
        .map_err(|e| invariant(format!("bad intersection form: {e}")))?;
    if doc.b_plus != form.b_plus() as i64 {
        return Err(invariant(format!(
            "b_plus = {} but the form has b2+ = {}",
            doc.b_plus,
            form.b_plus()
        )));
    }
    if doc.b_plus % 2 == 0 || doc.b_plus < 3 {
        return Err(invariant("b2+ must be odd ≥ 3"));
    }
    if doc.chi != 2 + rank as i64 {
        return Err(invariant(format!(
            "chi = {} but 2 + b2 = {}",
            doc.chi,
            2 + rank
        )));
    }
    if doc.sigma != form.signature() {
        return Err(invariant(format!(
            "sigma = {} but the form has signature {}",
            doc.sigma,
            form.signature()
        )));
    }
    if (doc.chi + doc.sigma) % 4 != 0 {
        return Err(invariant("chi + sigma is not divisible by 4"));
    }
    if !form.is_unimodular() {
        return Err(invariant("intersection form is not unimodular"));
    }

    let mut basic_classes = Vec::with_capacity(doc.basic_classes.len());
    for c in &doc.basic_classes {
        let class = CohomologyClass::new(c.c1.clone());
        if !form.is_characteristic(&class).expect("length checked") {
            return Err(invariant(format!("basic class {class} is not characteristic")));
        }
        basic_classes.push(SpincData {
            c1: class,
            sw: c.sw,
            moment: c.moment,
        });
    }
    let manifold = FourManifoldData {
        name: doc.name,
        chi: doc.chi,
        sigma: doc.sigma,
        form,
        basic_classes,
    };
    for s in &manifold.basic_classes {
        let d_s = manifold
            .dim_sw(s)
            .map_err(|e| invariant(format!("basic class {}: {e}", s.c1)))?;
        if doc.attributes.simple_type && d_s != 0 {
            return Err(invariant(format!(
                "declared simple type but basic class {} has c1^2 ≠ 2chi + 3sigma",
                s.c1
            )));
        }
    }
    Ok(Fixture {
        manifold,
        attributes: doc.attributes,
        w: doc.w.map(CohomologyClass::new),
        lambda: doc.lambda.map(CohomologyClass::new),
    })
}

impl Fixture {
    /// `Λ` and `w` from the document when given, otherwise from
    /// [`default_lambda_and_w`]. A lone `lambda` gets `w = Λ + v` as in the
    /// default; a lone `w` is paired with the default `Λ`.
    pub fn lambda_and_w(&self) -> Result<(CohomologyClass, CohomologyClass), WittenError> {
        match (&self.lambda, &self.w) {
            (Some(l), Some(w)) => Ok((l.clone(), w.clone())),
            _ => {
                let (default_l, default_w) = default_lambda_and_w(&self.manifold)?;
                let lambda = self.lambda.clone().unwrap_or(default_l.clone());
                let w = match &self.w {
                    Some(w) => w.clone(),
                    None => &lambda + &(&default_w - &default_l),
                };
                Ok((lambda, w))
            }
        }
    }
}
