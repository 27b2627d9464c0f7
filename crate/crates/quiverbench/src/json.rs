//! JSON forms of presentations, potentials, triples, representations,
//! words and group actions. Identifiers are names; rationals are strings.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::SkewGentleTriple;
use crate::error::{input, Error, Result};
use crate::field::{format_rational, parse_rational, Rational};
use crate::linalg::Matrix;
use crate::quiver::{Path, Potential, Presentation, Quiver, Relation};
use crate::rep::{ModuleElement, PointedModule, Representation};
use crate::skew::GroupAction;
use crate::words::{Dir, Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coef: String,
    pub path: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub relations: Vec<Vec<TermJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub potential: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleJson {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    #[serde(default)]
    pub relations: Vec<Vec<TermJson>>,
    #[serde(default)]
    pub special: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub dims: BTreeMap<String, usize>,
    pub mats: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub order: usize,
    #[serde(default)]
    pub vertex_map: BTreeMap<String, String>,
    #[serde(default)]
    pub arrow_map: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterJson {
    pub arrow: String,
    pub dir: Dir,
}

pub fn parse<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Input(e.to_string()))
}

fn quiver_from(vertices: &[String], arrows: &[ArrowJson]) -> Result<Quiver> {
    let arrows: Vec<(String, String, String)> =
        arrows.iter().map(|a| (a.name.clone(), a.source.clone(), a.target.clone())).collect();
    Quiver::new(vertices, &arrows)
}

fn arrows_json(q: &Quiver) -> Vec<ArrowJson> {
    q.arrows()
        .iter()
        .map(|a| ArrowJson {
            name: a.name.clone(),
            source: q.vertex_name(a.source).to_string(),
            target: q.vertex_name(a.target).to_string(),
        })
        .collect()
}

fn terms_from(q: &Quiver, terms: &[TermJson]) -> Result<Vec<(Rational, Path)>> {
    terms
        .iter()
        .map(|t| {
            let c = parse_rational(&t.coef).ok_or_else(|| Error::Input(format!("bad coefficient {}", t.coef)))?;
            if t.path.is_empty() {
                return input("relation and potential terms need at least one arrow");
            }
            let names: Vec<&str> = t.path.iter().map(String::as_str).collect();
            Ok((c, q.path(&names)?))
        })
        .collect()
}

fn terms_json(q: &Quiver, terms: &[(Rational, Path)]) -> Vec<TermJson> {
    terms.iter().map(|(c, p)| TermJson { coef: format_rational(c), path: p.names(q) }).collect()
}

pub fn presentation_from_json(j: &PresentationJson) -> Result<Presentation> {
    let q = quiver_from(&j.vertices, &j.arrows)?;
    let relations = j.relations.iter().map(|r| Relation::new(&q, terms_from(&q, r)?)).collect::<Result<Vec<_>>>()?;
    Ok(Presentation::new(q, relations))
}

pub fn presentation_to_json(p: &Presentation) -> PresentationJson {
    let q = &p.quiver;
    PresentationJson {
        vertices: q.vertex_names().to_vec(),
        arrows: arrows_json(q),
        relations: p.relations.iter().map(|r| terms_json(q, r.terms())).collect(),
    }
}

pub fn potential_from_json(j: &PotentialJson) -> Result<(Quiver, Potential)> {
    let q = quiver_from(&j.vertices, &j.arrows)?;
    let w = Potential::new(&q, terms_from(&q, &j.potential)?)?;
    Ok((q, w))
}

pub fn triple_from_json(j: &TripleJson) -> Result<SkewGentleTriple> {
    let q = quiver_from(&j.vertices, &j.arrows)?;
    let relations = j.relations.iter().map(|r| Relation::new(&q, terms_from(&q, r)?)).collect::<Result<Vec<_>>>()?;
    let special = j
        .special
        .iter()
        .map(|s| q.vertex(s).ok_or_else(|| Error::Input(format!("unknown special vertex {s}"))))
        .collect::<Result<BTreeSet<_>>>()?;
    SkewGentleTriple::new(q, special, relations)
}

pub fn triple_to_json(t: &SkewGentleTriple) -> TripleJson {
    let q = &t.quiver;
    TripleJson {
        vertices: q.vertex_names().to_vec(),
        arrows: arrows_json(q),
        relations: t.relations.iter().map(|r| terms_json(q, r.terms())).collect(),
        special: t.special.iter().map(|&v| q.vertex_name(v).to_string()).collect(),
    }
}

pub fn representation_from_json(q: &Quiver, j: &RepresentationJson) -> Result<Representation<Rational>> {
    let mut dims = vec![0; q.vertex_count()];
    for (name, &d) in &j.dims {
        let v = q.vertex(name).ok_or_else(|| Error::Input(format!("unknown vertex {name}")))?;
        dims[v] = d;
    }
    let mut mats: Vec<Matrix<Rational>> =
        q.arrows().iter().map(|a| Matrix::zeros(dims[a.source], dims[a.target])).collect();
    for (name, rows) in &j.mats {
        let a = q.arrow_id(name).ok_or_else(|| Error::Input(format!("unknown arrow {name}")))?;
        let (r, c) = (dims[q.arrow(a).source], dims[q.arrow(a).target]);
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return input(format!("matrix of {name} should be {r}×{c}"));
        }
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational {s}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        mats[a] = Matrix::from_rows(parsed, c);
    }
    Representation::new(q, dims, mats)
}

pub fn representation_to_json(q: &Quiver, m: &Representation<Rational>) -> RepresentationJson {
    let dims = (0..q.vertex_count()).map(|v| (q.vertex_name(v).to_string(), m.dims[v])).collect();
    let mats = q
        .arrows()
        .iter()
        .zip(&m.mats)
        .map(|(a, mat)| {
            let rows = (0..mat.rows()).map(|i| mat.row(i).iter().map(format_rational).collect()).collect();
            (a.name.clone(), rows)
        })
        .collect();
    RepresentationJson { dims, mats }
}

pub fn element_to_json(q: &Quiver, x: &ModuleElement<Rational>) -> BTreeMap<String, Vec<String>> {
    x.parts
        .iter()
        .enumerate()
        .map(|(v, part)| (q.vertex_name(v).to_string(), part.iter().map(format_rational).collect()))
        .collect()
}

pub fn element_from_json(q: &Quiver, dims: &[usize], j: &BTreeMap<String, Vec<String>>) -> Result<ModuleElement<Rational>> {
    let mut x = ModuleElement::zero(dims);
    for (name, vals) in j {
        let v = q.vertex(name).ok_or_else(|| Error::Input(format!("unknown vertex {name}")))?;
        if vals.len() != dims[v] {
            return input(format!("point at {name} should have {} entries", dims[v]));
        }
        for (i, s) in vals.iter().enumerate() {
            x.parts[v][i] = parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational {s}")))?;
        }
    }
    Ok(x)
}

pub fn pointed_to_json(q: &Quiver, m: &PointedModule<Rational>) -> Value {
    serde_json::json!({
        "representation": representation_to_json(q, &m.rep),
        "points": m.points.iter().map(|p| element_to_json(q, p)).collect::<Vec<_>>(),
    })
}

/// A word as a letter list, or as text such as "a1 b1^-1".
pub fn word_from_json(q: &Quiver, v: &Value) -> Result<Word> {
    if let Some(text) = v.as_str() {
        return Word::parse(q, text);
    }
    let letters: Vec<LetterJson> = parse(v)?;
    let letters = letters
        .iter()
        .map(|l| {
            let a = q.arrow_id(&l.arrow).ok_or_else(|| Error::Input(format!("unknown arrow {}", l.arrow)))?;
            Ok(Letter { arrow: a, dir: l.dir })
        })
        .collect::<Result<Vec<_>>>()?;
    if letters.is_empty() {
        return input("a word given as a list needs at least one letter");
    }
    Word::new(q, letters)
}

pub fn word_to_json(q: &Quiver, w: &Word) -> Vec<LetterJson> {
    w.letters.iter().map(|l| LetterJson { arrow: q.arrow(l.arrow).name.clone(), dir: l.dir }).collect()
}

pub fn action_from_json(q: &Quiver, j: &ActionJson) -> Result<GroupAction> {
    let v: Vec<(&str, &str)> = j.vertex_map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let a: Vec<(&str, &str)> = j.arrow_map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    GroupAction::from_names(q, j.order, &v, &a)
}

pub fn action_to_json(q: &Quiver, g: &GroupAction) -> ActionJson {
    ActionJson {
        order: g.order,
        vertex_map: g
            .vertex_map
            .iter()
            .enumerate()
            .map(|(i, &j)| (q.vertex_name(i).to_string(), q.vertex_name(j).to_string()))
            .collect(),
        arrow_map: g
            .arrow_map
            .iter()
            .enumerate()
            .map(|(i, &j)| (q.arrow(i).name.clone(), q.arrow(j).name.clone()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_round_trip() {
        let text = r#"{"vertices":["1","2"],"arrows":[{"name":"a","source":"1","target":"2"},
            {"name":"b","source":"1","target":"2"}],"relations":[]}"#;
        let j: PresentationJson = serde_json::from_str(text).unwrap();
        let p = presentation_from_json(&j).unwrap();
        assert_eq!(presentation_to_json(&p), j);
    }

    #[test]
    fn representation_round_trip_and_shape_errors() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let j: RepresentationJson =
            serde_json::from_str(r#"{"dims":{"1":1,"2":2},"mats":{"a":[["1","-2/3"]]}}"#).unwrap();
        let m = representation_from_json(&q, &j).unwrap();
        assert_eq!(representation_to_json(&q, &m), j);
        let bad: RepresentationJson = serde_json::from_str(r#"{"dims":{"1":1,"2":2},"mats":{"a":[["1"]]}}"#).unwrap();
        assert!(representation_from_json(&q, &bad).is_err());
    }
}
