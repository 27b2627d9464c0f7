//! Brauer graphs with multiplicities, their quivers and three relation
//! families, and the monomial shadow of a special biserial presentation.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::classify::classify;
use crate::error::{input, Error, Result};
use crate::field::rat;
use crate::quiver::{Path, Presentation, Quiver, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerVertex {
    pub id: String,
    pub m: usize,
    /// Edges around the vertex in cyclic order; a loop appears twice.
    pub order: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerEdge {
    pub id: String,
    pub ends: [String; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrauerGraph {
    pub vertices: Vec<BrauerVertex>,
    pub edges: Vec<BrauerEdge>,
}

impl BrauerGraph {
    /// Multiplicities are positive and each cyclic order lists exactly the
    /// edge ends at its vertex.
    pub fn validate(&self) -> Result<()> {
        let ids: HashSet<&str> = self.vertices.iter().map(|v| v.id.as_str()).collect();
        if ids.len() != self.vertices.len() {
            return input("repeated Brauer vertex id");
        }
        let edge_ids: HashSet<&str> = self.edges.iter().map(|e| e.id.as_str()).collect();
        if edge_ids.len() != self.edges.len() {
            return input("repeated Brauer edge id");
        }
        let mut ends: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.edges {
            for v in &e.ends {
                if !ids.contains(v.as_str()) {
                    return input(format!("edge {} ends at unknown vertex {v}", e.id));
                }
                ends.entry(v.as_str()).or_default().push(e.id.as_str());
            }
        }
        for v in &self.vertices {
            if v.m == 0 {
                return input(format!("vertex {} has multiplicity 0", v.id));
            }
            let mut expected = ends.remove(v.id.as_str()).unwrap_or_default();
            let mut got: Vec<&str> = v.order.iter().map(String::as_str).collect();
            expected.sort_unstable();
            got.sort_unstable();
            if expected != got {
                return input(format!("cyclic order at {} does not list its edge ends", v.id));
            }
        }
        Ok(())
    }

    pub fn valency(&self, v: usize) -> usize {
        self.vertices[v].order.len()
    }

    pub fn is_truncated(&self, v: usize) -> bool {
        self.valency(v) * self.vertices[v].m == 1
    }
}

/// The arrows around one vertex of the graph, read from a given edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCycle {
    pub vertex: String,
    pub start: String,
    pub arrows: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationType {
    I,
    II,
    III,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TaggedRelation {
    pub kind: RelationType,
    #[serde(skip)]
    pub relation: Relation,
    pub text: String,
}

/// Quiver on the edges: an arrow named "{v}{i}" from the i-th edge around v
/// to the next one, at every vertex with val·m > 1.
pub fn brauer_quiver(g: &BrauerGraph) -> Result<(Quiver, Vec<SpecialCycle>)> {
    g.validate()?;
    let vertices: Vec<&str> = g.edges.iter().map(|e| e.id.as_str()).collect();
    let mut q = Quiver::new(&vertices, &[])?;
    let mut cycles = Vec::new();
    for (vi, v) in g.vertices.iter().enumerate() {
        if g.is_truncated(vi) {
            continue;
        }
        let n = v.order.len();
        let arrows = (0..n)
            .map(|i| q.add_arrow(&format!("{}{}", v.id, i + 1), &v.order[i], &v.order[(i + 1) % n]))
            .collect::<Result<Vec<_>>>()?;
        for i in 0..n {
            cycles.push(SpecialCycle {
                vertex: v.id.clone(),
                start: v.order[i].clone(),
                arrows: (0..n).map(|k| arrows[(i + k) % n]).collect(),
            });
        }
    }
    Ok((q, cycles))
}

fn power(c: &SpecialCycle, m: usize, extra: usize) -> Vec<usize> {
    c.arrows.iter().cycle().take(c.arrows.len() * m + extra).copied().collect()
}

/// The three families: differences of powered special cycles at each edge
/// with two non-truncated ends, each powered cycle followed by its first
/// arrow, and every composable αβ that never occurs inside a special cycle.
pub fn brauer_relations(g: &BrauerGraph) -> Result<(Quiver, Vec<TaggedRelation>)> {
    let (q, cycles) = brauer_quiver(g)?;
    let mult: BTreeMap<&str, usize> = g.vertices.iter().map(|v| (v.id.as_str(), v.m)).collect();
    let mut out = Vec::new();
    let mut push = |kind, relation: Relation| {
        let text = relation.display(&q);
        out.push(TaggedRelation { kind, relation, text });
    };
    for e in &g.edges {
        let at: Vec<&SpecialCycle> = cycles.iter().filter(|c| c.start == e.id).collect();
        if let [c1, c2] = at.as_slice() {
            let p1 = Path::from_arrows(&q, power(c1, mult[c1.vertex.as_str()], 0))?;
            let p2 = Path::from_arrows(&q, power(c2, mult[c2.vertex.as_str()], 0))?;
            push(RelationType::I, Relation::new(&q, vec![(rat(1), p1), (rat(-1), p2)])?);
        }
    }
    for c in &cycles {
        let p = Path::from_arrows(&q, power(c, mult[c.vertex.as_str()], 1))?;
        push(RelationType::II, Relation::monomial(&q, p)?);
    }
    let successor: HashSet<(usize, usize)> =
        cycles.iter().map(|c| (c.arrows[0], c.arrows[1 % c.arrows.len()])).collect();
    for a in 0..q.arrow_count() {
        for b in q.out_arrows(q.arrow(a).target).collect::<Vec<_>>() {
            if !successor.contains(&(a, b)) {
                push(RelationType::III, Relation::monomial(&q, Path::from_arrows(&q, vec![a, b])?)?);
            }
        }
    }
    Ok((q, out))
}

pub fn brauer_algebra(g: &BrauerGraph) -> Result<Presentation> {
    let (q, rels) = brauer_relations(g)?;
    Ok(Presentation::new(q, rels.into_iter().map(|t| t.relation).collect()))
}

/// Same quiver, with every path occurring in a relation made a zero relation.
pub fn shadow(p: &Presentation) -> Result<Presentation> {
    let c = classify(p);
    if !c.special_biserial.holds {
        return Err(Error::Unsupported(format!(
            "shadow needs a special biserial presentation: {}",
            c.special_biserial.witness.unwrap_or_default()
        )));
    }
    let mut seen = HashSet::new();
    let mut relations = Vec::new();
    for r in &p.relations {
        for (_, path) in r.terms() {
            if seen.insert(path.clone()) {
                relations.push(Relation::monomial(&p.quiver, path.clone())?);
            }
        }
    }
    Ok(Presentation::new(p.quiver.clone(), relations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vertices: &[(&str, usize, &[&str])], edges: &[(&str, &str, &str)]) -> BrauerGraph {
        BrauerGraph {
            vertices: vertices
                .iter()
                .map(|(id, m, order)| BrauerVertex {
                    id: id.to_string(),
                    m: *m,
                    order: order.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
            edges: edges.iter().map(|(id, a, b)| BrauerEdge { id: id.to_string(), ends: [a.to_string(), b.to_string()] }).collect(),
        }
    }

    #[test]
    fn single_edge_has_no_arrows() {
        let g = graph(&[("u", 1, &["x"]), ("v", 1, &["x"])], &[("x", "u", "v")]);
        let (q, cycles) = brauer_quiver(&g).unwrap();
        assert_eq!((q.vertex_count(), q.arrow_count(), cycles.len()), (1, 0, 0));
        assert!(brauer_relations(&g).unwrap().1.is_empty());
    }

    #[test]
    fn leaf_with_multiplicity_gets_a_loop() {
        let g = graph(&[("u", 2, &["x"]), ("v", 1, &["x"])], &[("x", "u", "v")]);
        let (q, _) = brauer_quiver(&g).unwrap();
        assert_eq!(q.arrow_count(), 1);
        assert_eq!(q.arrow(0).source, q.arrow(0).target);
        let (q, rels) = brauer_relations(&g).unwrap();
        assert!(rels.iter().all(|r| r.kind == RelationType::II));
        assert_eq!(rels[0].relation.terms()[0].1.len(), 3);
        assert_eq!(q.arrow_count(), 1);
    }

    #[test]
    fn bad_cyclic_order_is_rejected() {
        let g = graph(&[("u", 1, &["x", "x"]), ("v", 1, &["x"])], &[("x", "u", "v")]);
        assert!(brauer_quiver(&g).is_err());
    }
}
