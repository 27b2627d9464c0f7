//! Finite cyclic actions on presentations, the two skew-gentle doublings,
//! the Z₂ skew group algebra with a presentation read off by evaluation,
//! and the induction functor ΛG ⊗_Λ - cut down by a full idempotent.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{ideal_pieces, GradedQuotient, Homogeneous};
use crate::classify::SkewGentleTriple;
use crate::error::{input, Error, Result};
use crate::field::{rat, ratio, Rational};
use crate::linalg::{ColumnBasis, Matrix};
use crate::quiver::{Path, Presentation, Quiver, Relation};
use crate::rep::{hom_dim, is_isomorphic, iso_string_modules, ModuleElement, PointedModule, Representation};
use crate::words::{Letter, Word};

/// A generator of a cyclic group acting by quiver automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub order: usize,
    pub vertex_map: Vec<usize>,
    pub arrow_map: Vec<usize>,
}

impl GroupAction {
    pub fn identity(q: &Quiver) -> Self {
        GroupAction { order: 1, vertex_map: (0..q.vertex_count()).collect(), arrow_map: (0..q.arrow_count()).collect() }
    }

    /// From name pairs; unnamed vertices and arrows are fixed. Each pair
    /// (x, y) sets g(x) = y only, so an involution lists both directions.
    pub fn from_names(q: &Quiver, order: usize, vertices: &[(&str, &str)], arrows: &[(&str, &str)]) -> Result<Self> {
        let mut vertex_map: Vec<usize> = (0..q.vertex_count()).collect();
        let mut arrow_map: Vec<usize> = (0..q.arrow_count()).collect();
        for (x, y) in vertices {
            let (Some(a), Some(b)) = (q.vertex(x), q.vertex(y)) else {
                return input(format!("unknown vertex in action pair ({x}, {y})"));
            };
            vertex_map[a] = b;
        }
        for (x, y) in arrows {
            let (Some(a), Some(b)) = (q.arrow_id(x), q.arrow_id(y)) else {
                return input(format!("unknown arrow in action pair ({x}, {y})"));
            };
            arrow_map[a] = b;
        }
        Ok(GroupAction { order, vertex_map, arrow_map })
    }

    /// Involution swapping each listed pair both ways.
    pub fn involution(q: &Quiver, vertices: &[(&str, &str)], arrows: &[(&str, &str)]) -> Result<Self> {
        let both = |pairs: &[(&str, &str)]| -> Vec<(String, String)> {
            pairs.iter().flat_map(|(a, b)| [(a.to_string(), b.to_string()), (b.to_string(), a.to_string())]).collect()
        };
        let v = both(vertices);
        let a = both(arrows);
        let vr: Vec<(&str, &str)> = v.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        let ar: Vec<(&str, &str)> = a.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
        GroupAction::from_names(q, 2, &vr, &ar)
    }

    pub fn compose(&self, other: &GroupAction) -> GroupAction {
        GroupAction {
            order: self.order,
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            arrow_map: other.arrow_map.iter().map(|&a| self.arrow_map[a]).collect(),
        }
    }

    /// g^k.
    pub fn power(&self, k: usize) -> GroupAction {
        let mut acc = GroupAction {
            order: self.order,
            vertex_map: (0..self.vertex_map.len()).collect(),
            arrow_map: (0..self.arrow_map.len()).collect(),
        };
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn inverse(&self) -> GroupAction {
        self.power(self.order.max(1) - 1)
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v) && self.arrow_map.iter().enumerate().all(|(i, &a)| i == a)
    }

    pub fn apply_path(&self, p: &Path) -> Path {
        Path { start: self.vertex_map[p.start], arrows: p.arrows.iter().map(|&a| self.arrow_map[a]).collect() }
    }

    pub fn apply_relation(&self, q: &Quiver, r: &Relation) -> Relation {
        let terms = r.terms().iter().map(|(c, p)| (c.clone(), self.apply_path(p))).collect();
        Relation::new(q, terms).expect("automorphisms map relations to relations")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub valid: bool,
    pub issues: Vec<String>,
    pub vertex_orbits: Vec<Vec<String>>,
    pub arrow_orbits: Vec<Vec<String>>,
}

fn orbits(n: usize, map: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let mut orbit = vec![i];
        seen[i] = true;
        let mut j = map(i);
        while j != i && !seen[j] {
            seen[j] = true;
            orbit.push(j);
            j = map(j);
        }
        out.push(orbit);
    }
    out
}

/// Automorphism, order and ideal-preservation checks with orbit tables.
pub fn validate_action(p: &Presentation, g: &GroupAction) -> ActionReport {
    let q = &p.quiver;
    let mut issues = Vec::new();
    if g.vertex_map.len() != q.vertex_count() || g.arrow_map.len() != q.arrow_count() {
        issues.push("maps do not cover the quiver".into());
        return ActionReport { valid: false, issues, vertex_orbits: vec![], arrow_orbits: vec![] };
    }
    let bijective = |m: &[usize]| {
        let mut s = m.to_vec();
        s.sort_unstable();
        s.iter().enumerate().all(|(i, &x)| i == x)
    };
    if !bijective(&g.vertex_map) || !bijective(&g.arrow_map) {
        issues.push("maps are not bijections".into());
    }
    for (a, arr) in q.arrows().iter().enumerate() {
        let b = q.arrow(g.arrow_map[a]);
        if g.vertex_map[arr.source] != b.source || g.vertex_map[arr.target] != b.target {
            issues.push(format!("arrow {} is sent to {} with incompatible endpoints", arr.name, b.name));
        }
    }
    if g.order == 0 || !g.power(g.order).is_identity() {
        issues.push(format!("generator does not have order dividing {}", g.order));
    }
    if issues.is_empty() {
        let max_deg = p.relations.iter().map(|r| r.terms()[0].1.len()).max().unwrap_or(0);
        let pieces = ideal_pieces(p, max_deg);
        for r in &p.relations {
            let image = g.apply_relation(q, r);
            let d = image.terms()[0].1.len();
            let (paths, basis) = &pieces[d];
            let mut v = vec![Rational::zero(); paths.len()];
            for (c, path) in image.terms() {
                let i = paths.iter().position(|x| x == path).expect("path of the right length");
                v[i] += c;
            }
            let mut rows: Vec<Vec<Rational>> = (0..basis.rows()).map(|i| basis.row(i).to_vec()).collect();
            let before = basis.rows();
            rows.push(v);
            if Matrix::from_rows(rows, paths.len()).rank() > before {
                issues.push(format!("relation {} is sent to {} outside the ideal", r.display(q), image.display(q)));
            }
        }
    }
    let names_v = |o: Vec<usize>| o.into_iter().map(|v| q.vertex_name(v).to_string()).collect();
    let names_a = |o: Vec<usize>| o.into_iter().map(|a| q.arrow(a).name.clone()).collect();
    ActionReport {
        valid: issues.is_empty(),
        issues,
        vertex_orbits: orbits(q.vertex_count(), |v| g.vertex_map[v]).into_iter().map(names_v).collect(),
        arrow_orbits: orbits(q.arrow_count(), |a| g.arrow_map[a]).into_iter().map(names_a).collect(),
    }
}

/// Letter-wise image; directions are kept.
pub fn twist_word(q: &Quiver, g: &GroupAction, w: &Word) -> Word {
    if w.is_empty() {
        return Word::empty(g.vertex_map[w.start]);
    }
    let letters = w.letters.iter().map(|l| Letter { arrow: g.arrow_map[l.arrow], dir: l.dir }).collect();
    Word::new(q, letters).expect("automorphisms preserve composability")
}

/// ^gM = M ∘ g⁻¹: (^gM)_v = M_{g⁻¹v} and (^gM)(α) = M(g⁻¹α).
pub fn twist_rep(q: &Quiver, g: &GroupAction, m: &Representation<Rational>) -> Representation<Rational> {
    let inv = g.inverse();
    let dims = (0..q.vertex_count()).map(|v| m.dims[inv.vertex_map[v]]).collect();
    let mats = (0..q.arrow_count()).map(|a| m.mats[inv.arrow_map[a]].clone()).collect();
    Representation { dims, mats }
}

/// Group powers h with ^hM ≅ M, decided by the hom oracle.
pub fn stabilizer_of_module(q: &Quiver, g: &GroupAction, m: &Representation<Rational>, seed: u64) -> Vec<usize> {
    (0..g.order).filter(|&h| is_isomorphic(q, &twist_rep(q, &g.power(h), m), m, seed)).collect()
}

/// Group powers h with ^hM(S) ≅ M(S), by the word criterion.
pub fn stabilizer_of_string(q: &Quiver, g: &GroupAction, w: &Word) -> Vec<usize> {
    (0..g.order).filter(|&h| iso_string_modules(q, &twist_word(q, &g.power(h), w), w)).collect()
}

fn refinements(t: &SkewGentleTriple, v: usize, special_doubles: bool) -> Vec<(String, i64)> {
    let name = t.quiver.vertex_name(v);
    let doubled = t.special.contains(&v) == special_doubles;
    if doubled {
        vec![(format!("{name}+"), 1), (format!("{name}-"), -1)]
    } else {
        vec![(name.to_string(), 1)]
    }
}

/// (Q^sg, I^sg): each special vertex j becomes j+ and j-, each arrow α
/// becomes one arrow "α:a:b" per pair of refinements of its endpoints, and a
/// relation αβ through m gives Σ_b λ_b (a,α,b)(b,β,c) with λ = -1 at m-.
pub fn sg_pair(t: &SkewGentleTriple) -> Presentation {
    let q0 = &t.quiver;
    let mut vertices = Vec::new();
    for v in 0..q0.vertex_count() {
        vertices.extend(refinements(t, v, true).into_iter().map(|(n, _)| n));
    }
    let mut arrows = Vec::new();
    for a in q0.arrows() {
        for (x, _) in refinements(t, a.source, true) {
            for (y, _) in refinements(t, a.target, true) {
                arrows.push((format!("{}:{x}:{y}", a.name), x.clone(), y));
            }
        }
    }
    let q = Quiver::new(&vertices, &arrows).expect("refined names are distinct");
    let mut relations = Vec::new();
    for (x, y) in sorted_pairs(t) {
        let (ax, ay) = (q0.arrow(x), q0.arrow(y));
        for (s, _) in refinements(t, ax.source, true) {
            for (e, _) in refinements(t, ay.target, true) {
                let terms = refinements(t, ax.target, true)
                    .into_iter()
                    .map(|(m, sign)| {
                        let p = q
                            .path(&[&format!("{}:{s}:{m}", ax.name), &format!("{}:{m}:{e}", ay.name)])
                            .expect("refined arrows compose");
                        (rat(sign), p)
                    })
                    .collect();
                relations.push(Relation::new(&q, terms).expect("refined relation"));
            }
        }
    }
    Presentation::new(q, relations)
}

fn sorted_pairs(t: &SkewGentleTriple) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = t.relation_pairs().into_iter().collect();
    v.sort_unstable();
    v
}

/// (Q^g, I^g) with its involution: each ordinary vertex i becomes i+ and i-,
/// special vertices stay single, each arrow α becomes α+ and α- between the
/// matching refinements, and a relation αβ through m gives α+β+ and α-β- when
/// m is ordinary, α+β- and α-β+ when m is special.
pub fn g_pair(t: &SkewGentleTriple) -> (Presentation, GroupAction) {
    let q0 = &t.quiver;
    let refined = |v: usize, sign: &str| -> String {
        let name = q0.vertex_name(v);
        if t.special.contains(&v) {
            name.to_string()
        } else {
            format!("{name}{sign}")
        }
    };
    let mut vertices = Vec::new();
    for v in 0..q0.vertex_count() {
        if t.special.contains(&v) {
            vertices.push(q0.vertex_name(v).to_string());
        } else {
            vertices.push(format!("{}+", q0.vertex_name(v)));
            vertices.push(format!("{}-", q0.vertex_name(v)));
        }
    }
    let mut arrows = Vec::new();
    for a in q0.arrows() {
        for sign in ["+", "-"] {
            arrows.push((format!("{}{sign}", a.name), refined(a.source, sign), refined(a.target, sign)));
        }
    }
    let q = Quiver::new(&vertices, &arrows).expect("doubled names are distinct");
    let mut relations = Vec::new();
    for (x, y) in sorted_pairs(t) {
        let (ax, ay) = (q0.arrow(x), q0.arrow(y));
        let flip = t.special.contains(&ax.target);
        for (s1, s2) in [("+", if flip { "-" } else { "+" }), ("-", if flip { "+" } else { "-" })] {
            let p = q.path(&[&format!("{}{s1}", ax.name), &format!("{}{s2}", ay.name)]).expect("doubled arrows compose");
            relations.push(Relation::monomial(&q, p).expect("length two"));
        }
    }
    let mut vpairs = Vec::new();
    for v in 0..q0.vertex_count() {
        if !t.special.contains(&v) {
            vpairs.push((format!("{}+", q0.vertex_name(v)), format!("{}-", q0.vertex_name(v))));
        }
    }
    let apairs: Vec<(String, String)> =
        q0.arrows().iter().map(|a| (format!("{}+", a.name), format!("{}-", a.name))).collect();
    let vp: Vec<(&str, &str)> = vpairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let ap: Vec<(&str, &str)> = apairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let g = GroupAction::involution(&q, &vp, &ap).expect("names from the doubling");
    (Presentation::new(q, relations), g)
}

/// Homogeneous element of ΛG for G = ⟨g⟩ cyclic: coordinates indexed by
/// (basis path, group power) at position b·|G| + h.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewElement {
    pub degree: usize,
    pub coords: Vec<Rational>,
}

impl SkewElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// The skew group algebra ΛG over a graded quotient Λ, with the product
/// (p h)(q k) = p·h(q)·hk.
pub struct SkewAlgebra {
    pub base: GradedQuotient,
    pub action: GroupAction,
    powers: Vec<GroupAction>,
}

impl SkewAlgebra {
    pub fn new(p: &Presentation, g: &GroupAction, max_degree: usize) -> Result<Self> {
        let report = validate_action(p, g);
        if !report.valid {
            return input(format!("action is not valid: {}", report.issues.join("; ")));
        }
        let base = GradedQuotient::new(p, max_degree)?;
        let powers = (0..g.order).map(|k| g.power(k)).collect();
        Ok(SkewAlgebra { base, action: g.clone(), powers })
    }

    pub fn order(&self) -> usize {
        self.action.order
    }

    pub fn zero(&self, degree: usize) -> SkewElement {
        SkewElement { degree, coords: vec![Rational::zero(); self.base.dim(degree) * self.order()] }
    }

    /// p·h for a path p.
    pub fn path_element(&self, p: &Path, h: usize) -> Option<SkewElement> {
        let x = self.base.normal_form(p)?;
        let mut out = self.zero(x.degree);
        for (b, c) in x.coords.iter().enumerate() {
            out.coords[b * self.order() + h] = c.clone();
        }
        Some(out)
    }

    pub fn add(&self, x: &SkewElement, y: &SkewElement, c: &Rational) -> SkewElement {
        SkewElement { degree: x.degree, coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + c * b).collect() }
    }

    pub fn mul(&self, x: &SkewElement, y: &SkewElement) -> Option<SkewElement> {
        let n = self.order();
        let d = x.degree + y.degree;
        let mut out = self.zero(d);
        if d > self.base.top_degree() {
            return if self.base.is_complete() { Some(out) } else { None };
        }
        let q = self.base.quiver();
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (pb, h) = (i / n, i % n);
            let p = &self.base.basis(x.degree)[pb];
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (qb, k) = (j / n, j % n);
                let moved = self.powers[h].apply_path(&self.base.basis(y.degree)[qb]);
                if p.target(q) != moved.source() {
                    continue;
                }
                let joined = p.concat(&moved, q).expect("endpoints checked");
                let z: Homogeneous = self.base.normal_form(&joined)?;
                let hk = (h + k) % n;
                for (m, c) in z.coords.iter().enumerate() {
                    if !c.is_zero() {
                        out.coords[m * n + hk] += a * b * c;
                    }
                }
            }
        }
        Some(out)
    }
}

/// A vertex of the skew algebra: a primitive idempotent and its name.
#[derive(Clone, Debug)]
pub struct SkewVertex {
    pub name: String,
    pub idempotent: SkewElement,
    /// Base vertex the idempotent lives over.
    pub base: usize,
}

#[derive(Clone, Debug)]
pub struct SkewPresentation {
    pub presentation: Presentation,
    pub vertices: Vec<SkewVertex>,
    pub arrow_elements: Vec<SkewElement>,
    /// Relations were searched up to this degree only.
    pub degree_bound: usize,
    pub truncated: bool,
    /// The arrows generate e ΛG e in every searched degree.
    pub generates: bool,
    /// e is the identity: every vertex is fixed.
    pub full_idempotent_is_one: bool,
}

fn stem(names: &[&str]) -> Option<String> {
    if let [a, b] = names {
        if let (Some(x), Some(y)) = (a.strip_suffix('+'), b.strip_suffix('-')) {
            if x == y {
                return Some(x.to_string());
            }
        }
        if let (Some(x), Some(y)) = (a.strip_suffix('-'), b.strip_suffix('+')) {
            if x == y {
                return Some(x.to_string());
            }
        }
    }
    None
}

/// Presentation of e ΛG e for G = Z₂, where e sums ½e_v(1 ± g) over fixed
/// vertices and e_v over one vertex of each free orbit. Arrows are a basis
/// of e_x ΛG_1 e_y per arrow orbit; relations are the kernel of evaluation
/// on paths of these arrows, found degree by degree modulo the ideal
/// generated in lower degrees.
pub fn skew_presentation(p: &Presentation, g: &GroupAction, degree_bound: usize) -> Result<SkewPresentation> {
    if g.order != 2 {
        return Err(Error::Unsupported(format!("skew presentations are built for Z₂ only, not order {}", g.order)));
    }
    let alg = SkewAlgebra::new(p, g, degree_bound)?;
    let q = &p.quiver;
    let half = ratio(1, 2);
    let mut vertices = Vec::new();
    for orbit in orbits(q.vertex_count(), |v| g.vertex_map[v]) {
        let v = orbit[0];
        let ev = alg.path_element(&Path::trivial(v), 0).expect("degree zero");
        if orbit.len() == 1 {
            let gv = alg.path_element(&Path::trivial(v), 1).expect("degree zero");
            for (suffix, sign) in [("+", rat(1)), ("-", rat(-1))] {
                let e = alg.add(&ev.clone(), &gv, &sign);
                let e = SkewElement { degree: 0, coords: e.coords.iter().map(|c| c * &half).collect() };
                vertices.push(SkewVertex { name: format!("{}{suffix}", q.vertex_name(v)), idempotent: e, base: v });
            }
        } else {
            let names: Vec<&str> = orbit.iter().map(|&w| q.vertex_name(w)).collect();
            let name = stem(&names).unwrap_or_else(|| q.vertex_name(v).to_string());
            vertices.push(SkewVertex { name, idempotent: ev, base: v });
        }
    }
    let all_fixed = vertices.len() == 2 * q.vertex_count();

    let mut arrow_specs: Vec<(String, usize, usize)> = Vec::new();
    let mut arrow_elements = Vec::new();
    for orbit in orbits(q.arrow_count(), |a| g.arrow_map[a]) {
        let names: Vec<&str> = orbit.iter().map(|&a| q.arrow(a).name.as_str()).collect();
        let stem_name = stem(&names).unwrap_or_else(|| names[0].to_string());
        for (xi, x) in vertices.iter().enumerate() {
            for (yi, y) in vertices.iter().enumerate() {
                let mut found: Vec<SkewElement> = Vec::new();
                for &a in &orbit {
                    for h in 0..2 {
                        let ah = alg.path_element(&Path { start: q.arrow(a).source, arrows: vec![a] }, h);
                        let Some(ah) = ah else { continue };
                        let Some(left) = alg.mul(&x.idempotent, &ah) else { continue };
                        let Some(elem) = alg.mul(&left, &y.idempotent) else { continue };
                        if elem.is_zero() {
                            continue;
                        }
                        let mut rows: Vec<Vec<Rational>> = found.iter().map(|f| f.coords.clone()).collect();
                        rows.push(elem.coords.clone());
                        let n = elem.coords.len();
                        if Matrix::from_rows(rows, n).rank() > found.len() {
                            let lead = elem.coords.iter().find(|c| !c.is_zero()).expect("nonzero").clone();
                            found.push(SkewElement {
                                degree: 1,
                                coords: elem.coords.iter().map(|c| c / &lead).collect(),
                            });
                        }
                    }
                }
                for (k, f) in found.into_iter().enumerate() {
                    let suffix = if k == 0 { String::new() } else { format!("#{k}") };
                    arrow_specs.push((format!("{stem_name}:{}:{}{suffix}", x.name, y.name), xi, yi));
                    arrow_elements.push(f);
                }
            }
        }
    }
    let vnames: Vec<String> = vertices.iter().map(|v| v.name.clone()).collect();
    let anames: Vec<(String, String, String)> =
        arrow_specs.iter().map(|(n, x, y)| (n.clone(), vnames[*x].clone(), vnames[*y].clone())).collect();
    let bq = Quiver::new(&vnames, &anames)?;

    // degree-by-degree kernel of evaluation on paths of the new arrows
    let mut relations: Vec<Relation> = Vec::new();
    let mut generates = true;
    let mut prev_paths: Vec<Path> = (0..bq.vertex_count()).map(Path::trivial).collect();
    let mut prev_values: Vec<SkewElement> = vertices.iter().map(|v| v.idempotent.clone()).collect();
    let mut prev_ideal: Vec<Vec<Rational>> = Vec::new();
    let mut truncated = false;
    for d in 1..=degree_bound {
        let mut paths = Vec::new();
        let mut values = Vec::new();
        for (p, val) in prev_paths.iter().zip(&prev_values) {
            for a in bq.out_arrows(p.target(&bq)) {
                let Some(v) = alg.mul(val, &arrow_elements[a]) else {
                    truncated = true;
                    continue;
                };
                let mut arrows = p.arrows.clone();
                arrows.push(a);
                paths.push(Path { start: p.start, arrows });
                values.push(v);
            }
        }
        if truncated {
            break;
        }
        let index: std::collections::HashMap<&Path, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = paths.len();
        let mut ideal: Vec<Vec<Rational>> = Vec::new();
        for row in &prev_ideal {
            for a in 0..bq.arrow_count() {
                let (mut left, mut right) = (vec![Rational::zero(); n], vec![Rational::zero(); n]);
                let (mut l_any, mut r_any) = (false, false);
                for (k, c) in row.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let pp = &prev_paths[k];
                    if bq.arrow(a).target == pp.start {
                        let mut arrows = vec![a];
                        arrows.extend(&pp.arrows);
                        left[index[&Path { start: bq.arrow(a).source, arrows }]] += c;
                        l_any = true;
                    }
                    if pp.target(&bq) == bq.arrow(a).source {
                        let mut arrows = pp.arrows.clone();
                        arrows.push(a);
                        right[index[&Path { start: pp.start, arrows }]] += c;
                        r_any = true;
                    }
                }
                if l_any {
                    ideal.push(left);
                }
                if r_any {
                    ideal.push(right);
                }
            }
        }
        let mut blocks: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, p) in paths.iter().enumerate() {
            blocks.entry((p.start, p.target(&bq))).or_default().push(i);
        }
        let mut span_rank = Matrix::from_rows(ideal.clone(), n).rank();
        for ((x, y), members) in &blocks {
            let dim_lg = values[members[0]].coords.len();
            let cols: Vec<Vec<Rational>> = members.iter().map(|&i| values[i].coords.clone()).collect();
            let eval = Matrix::from_columns(&cols, dim_lg);
            for k in eval.nullspace() {
                let mut row = vec![Rational::zero(); n];
                for (c, &i) in k.iter().zip(members) {
                    row[i] = c.clone();
                }
                let mut trial = ideal.clone();
                trial.push(row.clone());
                let r = Matrix::from_rows(trial, n).rank();
                if r > span_rank {
                    span_rank = r;
                    ideal.push(row.clone());
                    let terms = members
                        .iter()
                        .filter(|&&i| !row[i].is_zero())
                        .map(|&i| (row[i].clone(), paths[i].clone()))
                        .collect();
                    relations.push(Relation::new(&bq, terms)?);
                }
            }
            // the arrows must span e_x ΛG_d e_y
            let target_dim = idempotent_block_dim(&alg, &vertices[*x].idempotent, &vertices[*y].idempotent, d);
            if let Some(t) = target_dim {
                if eval.rank() != t {
                    generates = false;
                }
            }
        }
        let basis_rows = {
            let m = Matrix::from_rows(ideal, n);
            let (red, piv) = m.rref();
            (0..piv.len()).map(|i| red.row(i).to_vec()).collect()
        };
        prev_ideal = basis_rows;
        prev_paths = paths;
        prev_values = values;
        if alg.base.is_complete() && d > alg.base.top_degree() {
            break;
        }
        if prev_paths.is_empty() {
            break;
        }
    }
    if !alg.base.is_complete() {
        truncated = true;
    }
    Ok(SkewPresentation {
        presentation: Presentation::new(bq, relations),
        vertices,
        arrow_elements,
        degree_bound,
        truncated,
        generates,
        full_idempotent_is_one: all_fixed,
    })
}

fn idempotent_block_dim(alg: &SkewAlgebra, ex: &SkewElement, ey: &SkewElement, d: usize) -> Option<usize> {
    if d > alg.base.top_degree() {
        return Some(0);
    }
    let n = alg.order();
    let mut rows = Vec::new();
    for b in 0..alg.base.dim(d) {
        for h in 0..n {
            let mut e = alg.zero(d);
            e.coords[b * n + h] = Rational::one();
            let v = alg.mul(&alg.mul(ex, &e)?, ey)?;
            rows.push(v.coords);
        }
    }
    let width = alg.base.dim(d) * n;
    Some(Matrix::from_rows(rows, width).rank())
}

/// Linear operator of a skew element on ΛG ⊗_Λ M = ⊕_h h ⊗ M: the term
/// p·h' sends block h to block h'h through M((h'h)⁻¹ p).
fn operator(alg: &SkewAlgebra, m: &Representation<Rational>, x: &SkewElement) -> Matrix<Rational> {
    let q = alg.base.quiver();
    let n = alg.order();
    let total = m.total_dim();
    let offsets: Vec<usize> = m.dims.iter().scan(0, |acc, &d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();
    let mut op: Matrix<Rational> = Matrix::zeros(n * total, n * total);
    for (i, c) in x.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (b, hp) = (i / n, i % n);
        let path = &alg.base.basis(x.degree)[b];
        for h in 0..n {
            let k = (hp + h) % n;
            let pulled = alg.powers[(n - k) % n].apply_path(path);
            let mat = m.eval_path(q, &pulled).scale(c);
            let (s, t) = (pulled.source(), pulled.target(q));
            let (r0, c0) = (k * total + offsets[s], h * total + offsets[t]);
            for r in 0..mat.rows() {
                for cc in 0..mat.cols() {
                    let v = &mat[(r, cc)];
                    if !v.is_zero() {
                        let cur = op[(r0 + r, c0 + cc)].clone();
                        op[(r0 + r, c0 + cc)] = cur + v;
                    }
                }
            }
        }
    }
    op
}

/// e ΛG ⊗_Λ M as a representation of the skew presentation: the space at a
/// vertex x is the image of its idempotent, in reduced column echelon
/// coordinates, and an arrow acts by its element of ΛG.
pub fn pushdown(sp: &SkewPresentation, alg: &SkewAlgebra, m: &Representation<Rational>) -> (Representation<Rational>, Vec<ColumnBasis<Rational>>) {
    let spaces: Vec<ColumnBasis<Rational>> =
        sp.vertices.iter().map(|v| operator(alg, m, &v.idempotent).column_space()).collect();
    let bq = &sp.presentation.quiver;
    let mats = bq
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| {
            let op = operator(alg, m, &sp.arrow_elements[a]);
            let cols: Vec<Vec<Rational>> =
                spaces[arr.target].vectors.iter().map(|w| spaces[arr.source].coordinates(&op.apply(w))).collect();
            Matrix::from_columns(&cols, spaces[arr.source].rank())
        })
        .collect();
    let dims = spaces.iter().map(ColumnBasis::rank).collect();
    (Representation { dims, mats }, spaces)
}

/// Pushdown of a pointed module with point 1 ⊗ m. Only when every vertex
/// is fixed, so that e = 1 and the image of Λ is the skew algebra itself.
pub fn pushdown_pointed(sp: &SkewPresentation, alg: &SkewAlgebra, m: &PointedModule<Rational>) -> Result<PointedModule<Rational>> {
    if !sp.full_idempotent_is_one {
        return Err(Error::Unsupported("pointed pushdown needs every vertex fixed".into()));
    }
    let (rep, spaces) = pushdown(sp, alg, &m.rep);
    let n = alg.order();
    let total = m.rep.total_dim();
    let points = m
        .points
        .iter()
        .map(|pt| {
            let mut flat = vec![Rational::zero(); n * total];
            let mut off = 0;
            for part in &pt.parts {
                for (i, c) in part.iter().enumerate() {
                    flat[off + i] = c.clone();
                }
                off += part.len();
            }
            let parts = sp
                .vertices
                .iter()
                .zip(&spaces)
                .map(|(v, sp_x)| sp_x.coordinates(&operator(alg, &m.rep, &v.idempotent).apply(&flat)))
                .collect();
            ModuleElement { parts }
        })
        .collect();
    Ok(PointedModule { rep, points })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomDimReport {
    pub lhs: usize,
    pub rhs: usize,
    pub terms: Vec<usize>,
    pub case: String,
    pub holds: bool,
}

/// dim Hom over the skew algebra of the pushdowns against
/// Σ_h dim Hom_Λ(^hM, N), labelled by which stabilizers are full.
pub fn hom_dim_check(
    sp: &SkewPresentation,
    alg: &SkewAlgebra,
    m: &Representation<Rational>,
    n: &Representation<Rational>,
    seed: u64,
) -> HomDimReport {
    let q = alg.base.quiver();
    let (fm, _) = pushdown(sp, alg, m);
    let (fnn, _) = pushdown(sp, alg, n);
    let lhs = hom_dim(&sp.presentation.quiver, &fm, &fnn);
    let terms: Vec<usize> = (0..alg.order()).map(|h| hom_dim(q, &twist_rep(q, &alg.powers[h], m), n)).collect();
    let rhs = terms.iter().sum();
    let full = |x: &Representation<Rational>| x.total_dim() == 0 || stabilizer_of_module(q, &alg.action, x, seed).len() == alg.order();
    let case = match (full(m), full(n)) {
        (true, true) => "both stabilizers full",
        (false, false) => "both stabilizers proper",
        _ => "one stabilizer full",
    };
    HomDimReport { lhs, rhs, terms, case: case.into(), holds: lhs == rhs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn a1() -> (Presentation, GroupAction) {
        let q = Quiver::new(
            &["1", "2", "3"],
            &[("al", "1", "2"), ("be", "1", "2"), ("ga", "2", "3"), ("de", "2", "3")],
        )
        .unwrap();
        let rels = vec![
            Relation::monomial(&q, q.path(&["al", "de"]).unwrap()).unwrap(),
            Relation::monomial(&q, q.path(&["be", "ga"]).unwrap()).unwrap(),
        ];
        let g = GroupAction::involution(&q, &[], &[("al", "be"), ("ga", "de")]).unwrap();
        (Presentation::new(q, rels), g)
    }

    #[test]
    fn swap_on_two_arrows_is_valid() {
        let (p, g) = a1();
        let r = validate_action(&p, &g);
        assert!(r.valid, "{:?}", r.issues);
        let bad = GroupAction::involution(&p.quiver, &[], &[("al", "be")]).unwrap();
        assert!(!validate_action(&p, &bad).valid);
    }

    #[test]
    fn skew_of_swap_has_six_vertices_eight_arrows() {
        let (p, g) = a1();
        let sp = skew_presentation(&p, &g, 4).unwrap();
        let q = &sp.presentation.quiver;
        assert_eq!((q.vertex_count(), q.arrow_count(), sp.presentation.relations.len()), (6, 8, 4));
        assert!(sp.generates && !sp.truncated);
    }

    #[test]
    fn doubling_counts_on_a_small_triple() {
        let q = Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let r = Relation::monomial(&q, q.path(&["a", "b"]).unwrap()).unwrap();
        let t = SkewGentleTriple::new(q, BTreeSet::from([1]), vec![r]).unwrap();
        let (gp, _) = g_pair(&t);
        assert_eq!((gp.quiver.vertex_count(), gp.quiver.arrow_count(), gp.relations.len()), (5, 4, 2));
        let sg = sg_pair(&t);
        assert_eq!((sg.quiver.vertex_count(), sg.quiver.arrow_count(), sg.relations.len()), (4, 4, 1));
    }
}
