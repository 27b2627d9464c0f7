//! Graded quotients KQ/I for homogeneous relations: a path basis per degree
//! and normal forms, built one degree at a time. Degree d is spanned by
//! products b·α of a degree d-1 basis path and an arrow, modulo the span of
//! b'·r for relations r and shorter basis paths b'.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::linalg::{Matrix, Quotient};
use crate::quiver::{Path, Presentation, Quiver, Relation};
use num_traits::{One, Zero};

/// A homogeneous element: degree and coordinates in that degree's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Homogeneous {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl Homogeneous {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

struct Level {
    basis: Vec<Path>,
    /// (basis index one degree lower, arrow) → position in the product space
    pairs: HashMap<(usize, usize), usize>,
    quotient: Quotient<Rational>,
}

pub struct GradedQuotient {
    pub presentation: Presentation,
    levels: Vec<Level>,
    /// Every degree past the last level is zero.
    complete: bool,
}

impl GradedQuotient {
    /// Computes degrees up to `max_degree`, stopping early once a degree
    /// vanishes.
    pub fn new(p: &Presentation, max_degree: usize) -> Result<Self> {
        if let Some(r) = p.relations.iter().find(|r| !r.is_homogeneous()) {
            return Err(Error::Unsupported(format!("relation {} is not homogeneous", r.display(&p.quiver))));
        }
        let q = &p.quiver;
        let mut g = GradedQuotient { presentation: p.clone(), levels: Vec::new(), complete: false };
        let level0 = Level {
            basis: (0..q.vertex_count()).map(Path::trivial).collect(),
            pairs: HashMap::new(),
            quotient: Quotient::new(q.vertex_count(), &[]),
        };
        g.levels.push(level0);
        for d in 1..=max_degree {
            let prev = &g.levels[d - 1];
            let mut pairs = HashMap::new();
            let mut products = Vec::new();
            for (b, path) in prev.basis.iter().enumerate() {
                for a in q.out_arrows(path.target(q)) {
                    pairs.insert((b, a), products.len());
                    products.push((b, a));
                }
            }
            let n = products.len();
            let mut rows = Vec::new();
            for r in p.relations.iter() {
                let len = r.terms()[0].1.len();
                if len > d {
                    continue;
                }
                for (bi, b) in g.levels[d - len].basis.iter().enumerate() {
                    if b.target(q) != r.source() {
                        continue;
                    }
                    let mut row = vec![Rational::zero(); n];
                    for (c, t) in r.terms() {
                        // b·t as a combination of (degree d-1 basis, last arrow)
                        let mut head = g.unit(d - len, bi);
                        let (init, last) = t.arrows.split_at(t.arrows.len() - 1);
                        for &a in init {
                            head = g.step_into(&head, a);
                        }
                        for (k, x) in head.coords.iter().enumerate() {
                            if !x.is_zero() {
                                if let Some(&pos) = pairs.get(&(k, last[0])) {
                                    row[pos] += c * x;
                                }
                            }
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
            let quotient = Quotient::new(n, &rows);
            let basis = quotient
                .free_positions()
                .iter()
                .map(|&pos| {
                    let (b, a) = products[pos];
                    let mut arrows = prev.basis[b].arrows.clone();
                    arrows.push(a);
                    Path { start: prev.basis[b].start, arrows }
                })
                .collect::<Vec<_>>();
            let empty = basis.is_empty();
            g.levels.push(Level { basis, pairs, quotient });
            if empty {
                g.complete = true;
                break;
            }
        }
        Ok(g)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn top_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn basis(&self, d: usize) -> &[Path] {
        self.levels.get(d).map_or(&[], |l| &l.basis)
    }

    pub fn dim(&self, d: usize) -> usize {
        self.basis(d).len()
    }

    /// Sum of the computed degree dimensions.
    pub fn total_dim(&self) -> usize {
        (0..self.levels.len()).map(|d| self.dim(d)).sum()
    }

    pub fn unit(&self, d: usize, i: usize) -> Homogeneous {
        let mut coords = vec![Rational::zero(); self.dim(d)];
        coords[i] = Rational::one();
        Homogeneous { degree: d, coords }
    }

    fn step_into(&self, x: &Homogeneous, a: usize) -> Homogeneous {
        let d = x.degree + 1;
        let level = &self.levels[d];
        let mut w = vec![Rational::zero(); level.quotient.free_positions().len() + level.quotient.kernel_dim()];
        for (k, c) in x.coords.iter().enumerate() {
            if !c.is_zero() {
                if let Some(&pos) = level.pairs.get(&(k, a)) {
                    w[pos] += c;
                }
            }
        }
        Homogeneous { degree: d, coords: level.quotient.project(&w) }
    }

    /// Right multiplication by an arrow; None past the computed range.
    pub fn times_arrow(&self, x: &Homogeneous, a: usize) -> Option<Homogeneous> {
        let d = x.degree + 1;
        if d >= self.levels.len() {
            return if self.complete { Some(Homogeneous { degree: d, coords: vec![] }) } else { None };
        }
        Some(self.step_into(x, a))
    }

    /// Normal form of a path; None when it lies beyond the computed range.
    pub fn normal_form(&self, p: &Path) -> Option<Homogeneous> {
        let mut x = self.unit(0, p.start);
        for &a in &p.arrows {
            x = self.times_arrow(&x, a)?;
        }
        Some(x)
    }

    /// Product of two homogeneous elements.
    pub fn mul(&self, x: &Homogeneous, y: &Homogeneous) -> Option<Homogeneous> {
        let d = x.degree + y.degree;
        let mut out = vec![Rational::zero(); self.dim(d)];
        if d > self.top_degree() && !self.complete {
            return None;
        }
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &self.basis(x.degree)[i];
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let r = &self.basis(y.degree)[j];
                if p.target(self.quiver()) != r.source() {
                    continue;
                }
                let mut z = self.unit(x.degree, i);
                for &arr in &r.arrows {
                    z = self.times_arrow(&z, arr)?;
                }
                for (k, c) in z.coords.iter().enumerate() {
                    out[k] += a * b * c;
                }
            }
        }
        Some(Homogeneous { degree: d, coords: out })
    }

    /// Whether a homogeneous relation vanishes in the quotient.
    pub fn relation_vanishes(&self, r: &Relation) -> Option<bool> {
        let d = r.terms()[0].1.len();
        let mut acc = vec![Rational::zero(); self.dim(d)];
        for (c, p) in r.terms() {
            let x = self.normal_form(p)?;
            for (k, v) in x.coords.iter().enumerate() {
                acc[k] += c * v;
            }
        }
        Some(acc.iter().all(Zero::is_zero))
    }
}

/// All paths of length d, ordered by their arrow-name sequence.
pub fn paths_of_length(q: &Quiver, d: usize) -> Vec<Path> {
    let mut layer: Vec<Path> = (0..q.vertex_count()).map(Path::trivial).collect();
    for _ in 0..d {
        let mut next = Vec::new();
        for p in &layer {
            for a in q.out_arrows(p.target(q)) {
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                next.push(Path { start: p.start, arrows });
            }
        }
        layer = next;
    }
    layer.sort_by_key(|p| p.names(q));
    layer
}

/// Reduced row echelon basis of the degree-d part of the ideal, over the
/// paths of length d ordered by name. Arrows·I + I·arrows + new relations.
pub fn ideal_pieces(p: &Presentation, max_degree: usize) -> Vec<(Vec<Path>, Matrix<Rational>)> {
    let q = &p.quiver;
    let mut out: Vec<(Vec<Path>, Matrix<Rational>)> = Vec::new();
    for d in 0..=max_degree {
        let paths = paths_of_length(q, d);
        let index: HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = paths.len();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        if d > 0 {
            let (prev_paths, prev) = &out[d - 1];
            for i in 0..prev.rows() {
                let row = prev.row(i);
                for a in 0..q.arrow_count() {
                    let mut left = vec![Rational::zero(); n];
                    let mut right = vec![Rational::zero(); n];
                    let (mut l_any, mut r_any) = (false, false);
                    for (k, c) in row.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let pp = &prev_paths[k];
                        if q.arrow(a).target == pp.start {
                            let mut arrows = vec![a];
                            arrows.extend(&pp.arrows);
                            let np = Path { start: q.arrow(a).source, arrows };
                            left[index[&np]] += c;
                            l_any = true;
                        }
                        if pp.target(q) == q.arrow(a).source {
                            let mut arrows = pp.arrows.clone();
                            arrows.push(a);
                            let np = Path { start: pp.start, arrows };
                            right[index[&np]] += c;
                            r_any = true;
                        }
                    }
                    if l_any {
                        rows.push(left);
                    }
                    if r_any {
                        rows.push(right);
                    }
                }
            }
        }
        for r in &p.relations {
            if r.terms()[0].1.len() == d {
                let mut row = vec![Rational::zero(); n];
                for (c, path) in r.terms() {
                    row[index[path]] += c;
                }
                rows.push(row);
            }
        }
        let m = Matrix::from_rows(rows, n);
        let (red, piv) = m.rref();
        let basis = Matrix::from_rows((0..piv.len()).map(|i| red.row(i).to_vec()).collect(), n);
        out.push((paths, basis));
    }
    out
}

/// Same vertex names, same arrows by name and endpoints, and the same ideal
/// in every degree up to `max_degree`.
pub fn presentation_equivalent(a: &Presentation, b: &Presentation, max_degree: usize) -> std::result::Result<(), String> {
    let (qa, qb) = (&a.quiver, &b.quiver);
    let mut va = qa.vertex_names().to_vec();
    let mut vb = qb.vertex_names().to_vec();
    va.sort();
    vb.sort();
    if va != vb {
        return Err(format!("vertices differ: {va:?} vs {vb:?}"));
    }
    let arrows = |q: &Quiver| {
        let mut v: Vec<(String, String, String)> = q
            .arrows()
            .iter()
            .map(|x| (x.name.clone(), q.vertex_name(x.source).to_string(), q.vertex_name(x.target).to_string()))
            .collect();
        v.sort();
        v
    };
    if arrows(qa) != arrows(qb) {
        return Err("arrows differ".into());
    }
    let (pa, pb) = (ideal_pieces(a, max_degree), ideal_pieces(b, max_degree));
    for (d, ((_, ma), (_, mb))) in pa.iter().zip(&pb).enumerate() {
        if ma != mb {
            return Err(format!("ideals differ in degree {d}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutative_square_has_one_long_path() {
        let q = Quiver::new(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
        )
        .unwrap();
        let p = Presentation::new(q.clone(), vec![]);
        let r = p.relation(&[(1, &["a", "b"]), (-1, &["c", "d"])]).unwrap();
        let p = Presentation::new(q.clone(), vec![r]);
        let g = GradedQuotient::new(&p, 5).unwrap();
        assert!(g.is_complete());
        assert_eq!((g.dim(0), g.dim(1), g.dim(2)), (4, 4, 1));
        let ab = g.normal_form(&q.path(&["a", "b"]).unwrap()).unwrap();
        let cd = g.normal_form(&q.path(&["c", "d"]).unwrap()).unwrap();
        assert_eq!(ab, cd);
    }

    #[test]
    fn ideal_pieces_see_consequences() {
        let q = Quiver::new(&["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4")]).unwrap();
        let base = Presentation::new(q.clone(), vec![]);
        let r = base.relation(&[(1, &["a", "b"])]).unwrap();
        let r2 = base.relation(&[(1, &["a", "b", "c"])]).unwrap();
        let p1 = Presentation::new(q.clone(), vec![r.clone()]);
        let p2 = Presentation::new(q, vec![r, r2]);
        assert!(presentation_equivalent(&p1, &p2, 3).is_ok());
    }
}
