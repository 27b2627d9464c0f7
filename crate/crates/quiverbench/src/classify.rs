//! Special biserial, string and gentle recognition, plus the skew-gentle
//! triple check.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{input, Result};
use crate::field::Rational;
use crate::linalg::Quotient;
use crate::quiver::{Path, Presentation, Quiver, Relation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Flag {
    fn pass() -> Self {
        Flag { holds: true, witness: None }
    }

    fn fail(w: String) -> Self {
        Flag { holds: false, witness: Some(w) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Admissibility {
    /// Every path of length `nilpotency` lies in the ideal.
    Verified { nilpotency: usize },
    NotVerified { searched: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub special_biserial: Flag,
    pub string: Flag,
    pub gentle: Flag,
    pub admissible: Admissibility,
}

pub const DEFAULT_PATH_BOUND: usize = 24;

/// Membership of length-two paths in the ideal, decided in the degree-two
/// span of the relations whose terms all have length two.
struct QuadraticPart {
    index: std::collections::HashMap<(usize, usize), usize>,
    span: Quotient<Rational>,
}

impl QuadraticPart {
    fn new(p: &Presentation) -> Self {
        let q = &p.quiver;
        let mut index = std::collections::HashMap::new();
        for a in 0..q.arrow_count() {
            for b in q.out_arrows(q.arrow(a).target) {
                let n = index.len();
                index.insert((a, b), n);
            }
        }
        let rows: Vec<Vec<Rational>> = p
            .relations
            .iter()
            .filter(|r| r.terms().iter().all(|(_, t)| t.len() == 2))
            .map(|r| {
                let mut v = vec![Rational::from_integer(0.into()); index.len()];
                for (c, t) in r.terms() {
                    v[index[&(t.arrows[0], t.arrows[1])]] = c.clone();
                }
                v
            })
            .collect();
        let span = Quotient::new(index.len(), &rows);
        QuadraticPart { index, span }
    }

    fn contains(&self, a: usize, b: usize) -> bool {
        let mut v = vec![Rational::from_integer(0.into()); self.index.len()];
        v[self.index[&(a, b)]] = Rational::from_integer(1.into());
        self.span.project(&v).iter().all(|x| *x == Rational::from_integer(0.into()))
    }
}

pub fn classify(p: &Presentation) -> Classification {
    classify_with_bound(p, DEFAULT_PATH_BOUND)
}

pub fn classify_with_bound(p: &Presentation, path_bound: usize) -> Classification {
    let q = &p.quiver;
    let quad = QuadraticPart::new(p);
    let name = |a: usize| q.arrow(a).name.clone();

    let mut sb = Flag::pass();
    'sb: {
        for v in 0..q.vertex_count() {
            let out = q.out_arrows(v).count();
            let inn = q.in_arrows(v).count();
            if out > 2 {
                sb = Flag::fail(format!("vertex {} has {out} outgoing arrows", q.vertex_name(v)));
                break 'sb;
            }
            if inn > 2 {
                sb = Flag::fail(format!("vertex {} has {inn} incoming arrows", q.vertex_name(v)));
                break 'sb;
            }
        }
        for a in 0..q.arrow_count() {
            let free_after: Vec<usize> = q.out_arrows(q.arrow(a).target).filter(|&b| !quad.contains(a, b)).collect();
            if free_after.len() > 1 {
                sb = Flag::fail(format!(
                    "arrow {} is followed by {} and {} outside the ideal",
                    name(a),
                    name(free_after[0]),
                    name(free_after[1])
                ));
                break 'sb;
            }
            let free_before: Vec<usize> = q.in_arrows(q.arrow(a).source).filter(|&c| !quad.contains(c, a)).collect();
            if free_before.len() > 1 {
                sb = Flag::fail(format!(
                    "arrow {} is preceded by {} and {} outside the ideal",
                    name(a),
                    name(free_before[0]),
                    name(free_before[1])
                ));
                break 'sb;
            }
        }
    }

    let string = if !sb.holds {
        Flag::fail("not special biserial".into())
    } else if let Some(r) = p.relations.iter().find(|r| !r.is_monomial()) {
        Flag::fail(format!("relation {} is not a path", r.display(q)))
    } else {
        Flag::pass()
    };

    let mut gentle = Flag::pass();
    'g: {
        if !string.holds {
            gentle = Flag::fail("not a string algebra".into());
            break 'g;
        }
        if let Some(r) = p.relations.iter().find(|r| r.terms()[0].1.len() != 2) {
            gentle = Flag::fail(format!("relation {} does not have length two", r.display(q)));
            break 'g;
        }
        for a in 0..q.arrow_count() {
            let after: Vec<usize> = q.out_arrows(q.arrow(a).target).filter(|&b| quad.contains(a, b)).collect();
            if after.len() > 1 {
                gentle = Flag::fail(format!("both {}{} and {}{} are relations", name(a), name(after[0]), name(a), name(after[1])));
                break 'g;
            }
            let before: Vec<usize> = q.in_arrows(q.arrow(a).source).filter(|&c| quad.contains(c, a)).collect();
            if before.len() > 1 {
                gentle = Flag::fail(format!("both {}{} and {}{} are relations", name(before[0]), name(a), name(before[1]), name(a)));
                break 'g;
            }
        }
    }

    Classification { special_biserial: sb, string, gentle, admissible: admissibility(p, path_bound) }
}

/// Bounded search for a length beyond which every path contains a monomial
/// relation. Binomial relations are ignored, so a negative answer only means
/// "not verified".
pub fn admissibility(p: &Presentation, bound: usize) -> Admissibility {
    let q = &p.quiver;
    let monomials: Vec<Vec<usize>> =
        p.relations.iter().filter(|r| r.is_monomial()).map(|r| r.terms()[0].1.arrows.clone()).collect();
    let mut frontier: Vec<Vec<usize>> = (0..q.arrow_count()).map(|a| vec![a]).collect();
    let mut len = 1;
    while !frontier.is_empty() {
        if len >= bound {
            return Admissibility::NotVerified { searched: bound };
        }
        let mut next = Vec::new();
        for path in &frontier {
            let last = *path.last().expect("nonempty");
            for b in q.out_arrows(q.arrow(last).target) {
                let mut ext = path.clone();
                ext.push(b);
                let hits = monomials.iter().any(|m| m.len() <= ext.len() && ext[ext.len() - m.len()..] == m[..]);
                if !hits {
                    next.push(ext);
                }
            }
        }
        frontier = next;
        len += 1;
    }
    Admissibility::Verified { nilpotency: len }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkewGentleTriple {
    pub quiver: Quiver,
    pub special: BTreeSet<usize>,
    pub relations: Vec<Relation>,
}

impl SkewGentleTriple {
    pub fn new(quiver: Quiver, special: BTreeSet<usize>, relations: Vec<Relation>) -> Result<Self> {
        for &v in &special {
            if v >= quiver.vertex_count() {
                return input("special vertex out of range");
            }
        }
        for r in &relations {
            if !r.is_monomial() || r.terms()[0].1.len() != 2 {
                return input(format!("triple relation {} must be a path of length two", r.display(&quiver)));
            }
        }
        Ok(SkewGentleTriple { quiver, special, relations })
    }

    /// Relation paths as arrow pairs.
    pub fn relation_pairs(&self) -> HashSet<(usize, usize)> {
        self.relations.iter().map(|r| (r.terms()[0].1.arrows[0], r.terms()[0].1.arrows[1])).collect()
    }

    /// (Q^Sp, I^Sp): a loop with square zero at each special vertex.
    pub fn with_special_loops(&self) -> Presentation {
        let mut q = self.quiver.clone();
        let mut relations = self.relations.clone();
        for &v in &self.special {
            let base = format!("eps_{}", q.vertex_name(v));
            let mut name = base.clone();
            while q.arrow_id(&name).is_some() {
                name.push('\'');
            }
            let vn = q.vertex_name(v).to_string();
            let a = q.add_arrow(&name, &vn, &vn).expect("fresh loop name");
            let sq = Path { start: v, arrows: vec![a, a] };
            relations.push(Relation::monomial(&q, sq).expect("loop square is a relation"));
        }
        // earlier relations were built against the smaller quiver; arrow ids are stable
        Presentation::new(q, relations)
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::new(self.quiver.clone(), self.relations.clone())
    }
}

/// Gentleness of the presentation with special loops adjoined.
pub fn is_skew_gentle_triple(t: &SkewGentleTriple) -> Flag {
    let c = classify(&t.with_special_loops());
    // report the most specific failure
    [c.special_biserial, c.string, c.gentle].into_iter().find(|f| !f.holds).unwrap_or_else(Flag::pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_arrow_is_gentle() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let c = classify(&Presentation::new(q, vec![]));
        assert!(c.special_biserial.holds && c.string.holds && c.gentle.holds);
        assert_eq!(c.admissible, Admissibility::Verified { nilpotency: 2 });
    }

    #[test]
    fn three_arrows_out_breaks_biserial() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2")]).unwrap();
        let c = classify(&Presentation::new(q, vec![]));
        assert!(!c.special_biserial.holds);
        assert!(c.special_biserial.witness.unwrap().contains("3 outgoing"));
        assert!(!c.gentle.holds);
    }

    #[test]
    fn loop_without_relation_is_not_admissible() {
        let q = Quiver::new(&["1"], &[("x", "1", "1")]).unwrap();
        let c = classify_with_bound(&Presentation::new(q, vec![]), 10);
        assert_eq!(c.admissible, Admissibility::NotVerified { searched: 10 });
    }

    #[test]
    fn special_everywhere_on_a_busy_vertex_fails() {
        let q = Quiver::new(
            &["0", "1", "2", "3", "4"],
            &[("a", "1", "0"), ("b", "2", "0"), ("c", "0", "3"), ("d", "0", "4")],
        )
        .unwrap();
        let rels = vec![
            Relation::monomial(&q, q.path(&["a", "c"]).unwrap()).unwrap(),
            Relation::monomial(&q, q.path(&["b", "d"]).unwrap()).unwrap(),
        ];
        let plain = SkewGentleTriple::new(q.clone(), BTreeSet::new(), rels.clone()).unwrap();
        assert!(is_skew_gentle_triple(&plain).holds);
        let busy = SkewGentleTriple::new(q, BTreeSet::from([0]), rels).unwrap();
        let flag = is_skew_gentle_triple(&busy);
        assert!(!flag.holds);
        assert!(flag.witness.unwrap().contains("vertex 0"));
    }
}
