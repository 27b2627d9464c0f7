//! Quivers, paths and relations. Paths compose left to right: `ab` means
//! "a, then b", so the target of each arrow is the source of the next.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{input, Error, Result};
use crate::field::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_ix: HashMap<String, usize>,
    arrow_ix: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Quiver {
    /// Arrows are given as (name, source, target) by vertex name.
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(S, S, S)]) -> Result<Self> {
        let mut q = Quiver { vertices: vec![], arrows: vec![], vertex_ix: HashMap::new(), arrow_ix: HashMap::new() };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (n, s, t) in arrows {
            q.add_arrow(n.as_ref(), s.as_ref(), t.as_ref())?;
        }
        Ok(q)
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<usize> {
        if self.vertex_ix.contains_key(name) {
            return input(format!("duplicate vertex {name}"));
        }
        self.vertices.push(name.to_string());
        self.vertex_ix.insert(name.to_string(), self.vertices.len() - 1);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<usize> {
        if self.arrow_ix.contains_key(name) {
            return input(format!("duplicate arrow {name}"));
        }
        let s = self.vertex(source).ok_or_else(|| Error::Input(format!("arrow {name}: unknown source {source}")))?;
        let t = self.vertex(target).ok_or_else(|| Error::Input(format!("arrow {name}: unknown target {target}")))?;
        self.arrows.push(Arrow { name: name.to_string(), source: s, target: t });
        self.arrow_ix.insert(name.to_string(), self.arrows.len() - 1);
        Ok(self.arrows.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertex_ix.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrow_ix.get(name).copied()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrow(&self, a: usize) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn out_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn in_arrows(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    pub fn path(&self, names: &[&str]) -> Result<Path> {
        let ids = names
            .iter()
            .map(|n| self.arrow_id(n).ok_or_else(|| Error::Input(format!("unknown arrow {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Path::from_arrows(self, ids)
    }
}

/// A path; `start` pins the vertex of a trivial path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, arrows: vec![] }
    }

    pub fn from_arrows(q: &Quiver, arrows: Vec<usize>) -> Result<Self> {
        let Some(&first) = arrows.first() else {
            return input("a nontrivial path needs at least one arrow");
        };
        for w in arrows.windows(2) {
            if q.arrow(w[0]).target != q.arrow(w[1]).source {
                return input(format!("{} and {} do not compose", q.arrow(w[0]).name, q.arrow(w[1]).name));
            }
        }
        Ok(Path { start: q.arrow(first).source, arrows })
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> usize {
        self.start
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrow(a).target)
    }

    pub fn is_cycle(&self, q: &Quiver) -> bool {
        !self.arrows.is_empty() && self.source() == self.target(q)
    }

    /// Concatenation, or None when the endpoints do not meet.
    pub fn concat(&self, other: &Path, q: &Quiver) -> Option<Path> {
        if self.target(q) != other.start {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend(&other.arrows);
        Some(Path { start: self.start, arrows })
    }

    pub fn contains_subpath(&self, sub: &[usize]) -> bool {
        !sub.is_empty() && self.arrows.windows(sub.len()).any(|w| w == sub)
    }

    pub fn names(&self, q: &Quiver) -> Vec<String> {
        self.arrows.iter().map(|&a| q.arrow(a).name.clone()).collect()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e[{}]", q.vertex_name(self.start))
        } else {
            self.names(q).join(" ")
        }
    }
}

/// Linear combination of parallel paths, terms kept sorted and collected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    terms: Vec<(Rational, Path)>,
}

impl Relation {
    /// Builds a relation, collecting like terms. Fails on a zero combination,
    /// mixed endpoints or terms shorter than two arrows.
    pub fn new(q: &Quiver, terms: Vec<(Rational, Path)>) -> Result<Self> {
        let combined = combine(terms);
        if combined.is_empty() {
            return input("relation is zero");
        }
        let (s, t) = (combined[0].1.source(), combined[0].1.target(q));
        for (_, p) in &combined {
            if p.source() != s || p.target(q) != t {
                return input(format!("relation terms are not parallel: {}", p.display(q)));
            }
            if p.len() < 2 {
                return input(format!("relation term {} is shorter than two arrows", p.display(q)));
            }
        }
        Ok(Relation { terms: combined })
    }

    pub fn monomial(q: &Quiver, path: Path) -> Result<Self> {
        Relation::new(q, vec![(Rational::one(), path)])
    }

    pub fn terms(&self) -> &[(Rational, Path)] {
        &self.terms
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.len() == self.terms[0].1.len())
    }

    pub fn source(&self) -> usize {
        self.terms[0].1.source()
    }

    /// Same relation scaled so the first term has coefficient one.
    pub fn monic(&self) -> Relation {
        let lead = self.terms[0].0.clone();
        Relation { terms: self.terms.iter().map(|(c, p)| (c / &lead, p.clone())).collect() }
    }

    pub fn display(&self, q: &Quiver) -> String {
        let mut out = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format_rational(&mag));
                out.push(' ');
            }
            out.push_str(&p.display(q));
        }
        out
    }
}

pub(crate) fn combine(terms: Vec<(Rational, Path)>) -> Vec<(Rational, Path)> {
    let mut acc: BTreeMap<Path, Rational> = BTreeMap::new();
    for (c, p) in terms {
        let e = acc.entry(p).or_insert_with(Rational::zero);
        *e += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    pub quiver: Quiver,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn new(quiver: Quiver, relations: Vec<Relation>) -> Self {
        Presentation { quiver, relations }
    }

    pub fn is_monomial(&self) -> bool {
        self.relations.iter().all(Relation::is_monomial)
    }

    /// Relation paths when every relation is a single path.
    pub fn monomial_paths(&self) -> Result<Vec<Vec<usize>>> {
        self.relations
            .iter()
            .map(|r| {
                if r.is_monomial() {
                    Ok(r.terms[0].1.arrows.clone())
                } else {
                    Err(Error::Unsupported(format!(
                        "relation {} is not monomial",
                        r.display(&self.quiver)
                    )))
                }
            })
            .collect()
    }

    pub fn relation(&self, terms: &[(i64, &[&str])]) -> Result<Relation> {
        let ts = terms
            .iter()
            .map(|(c, names)| Ok((crate::field::rat(*c), self.quiver.path(names)?)))
            .collect::<Result<Vec<_>>>()?;
        Relation::new(&self.quiver, ts)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.quiver;
        writeln!(f, "vertices: {}", q.vertex_names().join(", "))?;
        for a in q.arrows() {
            writeln!(f, "  {}: {} -> {}", a.name, q.vertex_name(a.source), q.vertex_name(a.target))?;
        }
        for r in &self.relations {
            writeln!(f, "  rel {}", r.display(q))?;
        }
        Ok(())
    }
}

/// Concatenates relation lists, dropping scalar duplicates.
pub fn quotient_presentation(p: &Presentation, extra: &[Relation]) -> Presentation {
    let mut relations: Vec<Relation> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for r in p.relations.iter().chain(extra) {
        if seen.insert(r.monic()) {
            relations.push(r.clone());
        }
    }
    Presentation { quiver: p.quiver.clone(), relations }
}

/// Cyclic path combination with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub terms: Vec<(Rational, Path)>,
}

impl Potential {
    pub fn new(q: &Quiver, terms: Vec<(Rational, Path)>) -> Result<Self> {
        for (_, p) in &terms {
            if !p.is_cycle(q) {
                return input(format!("potential term {} is not a cycle", p.display(q)));
            }
        }
        Ok(Potential { terms })
    }
}

/// Sum over positions of `a` in each term of the rotated remainder.
pub fn cyclic_derivative(q: &Quiver, w: &Potential, a: usize) -> Vec<(Rational, Path)> {
    let mut out = Vec::new();
    for (c, p) in &w.terms {
        let n = p.len();
        for i in 0..n {
            if p.arrows[i] == a {
                let rest: Vec<usize> = (1..n).map(|k| p.arrows[(i + k) % n]).collect();
                let path = if rest.is_empty() {
                    Path::trivial(q.arrow(a).target)
                } else {
                    Path { start: q.arrow(rest[0]).source, arrows: rest }
                };
                out.push((c.clone(), path));
            }
        }
    }
    combine(out)
}

/// Relations are the nonzero cyclic derivatives, in arrow order.
pub fn jacobian_presentation(q: &Quiver, w: &Potential) -> Result<Presentation> {
    let mut relations = Vec::new();
    for a in 0..q.arrow_count() {
        let d = cyclic_derivative(q, w, a);
        if !d.is_empty() {
            relations.push(Relation::new(q, d).map_err(|e| {
                Error::Input(format!("derivative by {} is not admissible: {e}", q.arrow(a).name))
            })?);
        }
    }
    Ok(Presentation { quiver: q.clone(), relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn triangle() -> Quiver {
        Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]).unwrap()
    }

    #[test]
    fn rejects_dangling_arrow() {
        assert!(Quiver::new(&["1"], &[("a", "1", "2")]).is_err());
        assert!(Quiver::new(&["1", "1"], &[]).is_err());
    }

    #[test]
    fn relation_requires_parallel_terms() {
        let q = triangle();
        let ab = q.path(&["a", "b"]).unwrap();
        let bc = q.path(&["b", "c"]).unwrap();
        assert!(Relation::new(&q, vec![(rat(1), ab.clone()), (rat(1), bc)]).is_err());
        assert!(Relation::new(&q, vec![(rat(1), ab.clone()), (rat(-1), ab)]).is_err());
        assert!(Relation::monomial(&q, q.path(&["a"]).unwrap()).is_err());
    }

    #[test]
    fn derivative_of_triangle() {
        let q = triangle();
        let w = Potential::new(&q, vec![(rat(1), q.path(&["a", "b", "c"]).unwrap())]).unwrap();
        let d = cyclic_derivative(&q, &w, 0);
        assert_eq!(d, vec![(rat(1), q.path(&["b", "c"]).unwrap())]);
        let jac = jacobian_presentation(&q, &w).unwrap();
        assert_eq!(jac.relations.len(), 3);
    }

    #[test]
    fn quotient_deduplicates_scalar_multiples() {
        let q = triangle();
        let p = Presentation::new(q.clone(), vec![Relation::monomial(&q, q.path(&["a", "b"]).unwrap()).unwrap()]);
        let twice = Relation::new(&q, vec![(rat(2), q.path(&["a", "b"]).unwrap())]).unwrap();
        assert_eq!(quotient_presentation(&p, &[twice]).relations.len(), 1);
        assert_eq!(quotient_presentation(&p, &[]), p);
    }
}
