//! Words in direct and inverse letters, strings and bands over a monomial
//! presentation, the order on strings sharing a first letter, Σ(U,V)-words,
//! chains, Q-generating pairs and the bounded non-domesticity search.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};
use crate::quiver::{Presentation, Quiver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    #[serde(rename = "+")]
    Direct,
    #[serde(rename = "-")]
    Inverse,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Direct => Dir::Inverse,
            Dir::Inverse => Dir::Direct,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub arrow: usize,
    pub dir: Dir,
}

impl Letter {
    pub fn direct(arrow: usize) -> Self {
        Letter { arrow, dir: Dir::Direct }
    }

    pub fn inverse(arrow: usize) -> Self {
        Letter { arrow, dir: Dir::Inverse }
    }

    pub fn source(self, q: &Quiver) -> usize {
        match self.dir {
            Dir::Direct => q.arrow(self.arrow).source,
            Dir::Inverse => q.arrow(self.arrow).target,
        }
    }

    pub fn target(self, q: &Quiver) -> usize {
        match self.dir {
            Dir::Direct => q.arrow(self.arrow).target,
            Dir::Inverse => q.arrow(self.arrow).source,
        }
    }

    pub fn inv(self) -> Letter {
        Letter { arrow: self.arrow, dir: self.dir.flip() }
    }

    pub fn is_direct(self) -> bool {
        self.dir == Dir::Direct
    }
}

/// A walk; `start` pins the vertex of the empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub start: usize,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty(v: usize) -> Self {
        Word { start: v, letters: vec![] }
    }

    pub fn new(q: &Quiver, letters: Vec<Letter>) -> Result<Self> {
        let Some(first) = letters.first() else {
            return input("a nonempty word needs a letter; use Word::empty");
        };
        for w in letters.windows(2) {
            if w[0].target(q) != w[1].source(q) {
                return input(format!(
                    "letters {} and {} do not compose",
                    letter_text(q, w[0]),
                    letter_text(q, w[1])
                ));
            }
        }
        Ok(Word { start: first.source(q), letters })
    }

    /// Parses space-separated letters such as `a3 a1 a2^-1`.
    pub fn parse(q: &Quiver, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, dir) = match tok.strip_suffix("^-1") {
                Some(n) => (n, Dir::Inverse),
                None => (tok, Dir::Direct),
            };
            let arrow = q.arrow_id(name).ok_or_else(|| Error::Input(format!("unknown arrow {name}")))?;
            letters.push(Letter { arrow, dir });
        }
        Word::new(q, letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn source(&self) -> usize {
        self.start
    }

    pub fn target(&self, q: &Quiver) -> usize {
        self.letters.last().map_or(self.start, |l| l.target(q))
    }

    pub fn inverse(&self, q: &Quiver) -> Word {
        Word { start: self.target(q), letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    pub fn concat(&self, other: &Word, q: &Quiver) -> Result<Word> {
        if self.target(q) != other.start {
            return input(format!("{} and {} do not concatenate", self.display(q), other.display(q)));
        }
        let mut letters = self.letters.clone();
        letters.extend(&other.letters);
        Ok(Word { start: self.start, letters })
    }

    pub fn rotate(&self, q: &Quiver, k: usize) -> Word {
        let n = self.letters.len();
        if n == 0 {
            return self.clone();
        }
        let letters: Vec<Letter> = (0..n).map(|i| self.letters[(i + k) % n]).collect();
        Word { start: letters[0].source(q), letters }
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.start == prefix.start && self.letters.starts_with(&prefix.letters)
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.letters.is_empty() {
            format!("e[{}]", q.vertex_name(self.start))
        } else {
            self.letters.iter().map(|&l| letter_text(q, l)).collect::<Vec<_>>().join(" ")
        }
    }

    /// Comparison key under the fixed letter order (arrow name, then direction).
    pub fn key<'q>(&self, q: &'q Quiver) -> Vec<(&'q str, Dir)> {
        self.letters.iter().map(|l| (q.arrow(l.arrow).name.as_str(), l.dir)).collect()
    }
}

pub fn letter_text(q: &Quiver, l: Letter) -> String {
    match l.dir {
        Dir::Direct => q.arrow(l.arrow).name.clone(),
        Dir::Inverse => format!("{}^-1", q.arrow(l.arrow).name),
    }
}

/// U ≠ VX test: true when `v` begins with `u`.
pub fn is_prolongation(v: &Word, u: &Word) -> bool {
    v.starts_with(u)
}

/// A monomial presentation viewed as a string algebra.
#[derive(Clone, Debug)]
pub struct StringAlgebra {
    pub presentation: Presentation,
    relations: HashSet<Vec<usize>>,
    lengths: Vec<usize>,
}

impl StringAlgebra {
    pub fn new(p: &Presentation) -> Result<Self> {
        let paths = p.monomial_paths()?;
        let mut lengths: Vec<usize> = paths.iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths.dedup();
        Ok(StringAlgebra { presentation: p.clone(), relations: paths.into_iter().collect(), lengths })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.presentation.quiver
    }

    /// Violation among windows ending at position `end` (exclusive), 1-based
    /// index of the first offending letter.
    fn violation_ending_at(&self, letters: &[Letter], end: usize) -> Option<usize> {
        if end >= 2 {
            let (x, y) = (letters[end - 2], letters[end - 1]);
            if x.arrow == y.arrow && x.dir != y.dir {
                return Some(end - 1);
            }
        }
        for &l in &self.lengths {
            if l > end {
                break;
            }
            let w = &letters[end - l..end];
            let dir = w[0].dir;
            if w.iter().any(|x| x.dir != dir) {
                continue;
            }
            let mut arrows: Vec<usize> = w.iter().map(|x| x.arrow).collect();
            if dir == Dir::Inverse {
                arrows.reverse();
            }
            if self.relations.contains(&arrows) {
                return Some(end - l + 1);
            }
        }
        None
    }

    /// 1-based index where `w` stops being a string, if it does.
    pub fn string_violation(&self, w: &Word) -> Option<usize> {
        (1..=w.letters.len()).filter_map(|end| self.violation_ending_at(&w.letters, end)).min()
    }

    pub fn is_string(&self, w: &Word) -> bool {
        self.string_violation(w).is_none()
    }

    pub fn is_band(&self, w: &Word) -> bool {
        let q = self.quiver();
        let n = w.len();
        if n == 0 || w.source() != w.target(q) {
            return false;
        }
        let has_direct = w.letters.iter().any(|l| l.is_direct());
        let has_inverse = w.letters.iter().any(|l| !l.is_direct());
        if !(has_direct && has_inverse) {
            return false;
        }
        let mut sq = w.letters.clone();
        sq.extend(&w.letters);
        if self.string_violation(&Word { start: w.start, letters: sq }).is_some() {
            return false;
        }
        !is_proper_power(&w.letters)
    }

    /// Letters that may follow `w` keeping it a string.
    pub fn extensions(&self, w: &Word) -> Vec<Letter> {
        let q = self.quiver();
        let v = w.target(q);
        let mut out = Vec::new();
        for a in q.out_arrows(v) {
            out.push(Letter::direct(a));
        }
        for a in q.in_arrows(v) {
            out.push(Letter::inverse(a));
        }
        out.retain(|&l| {
            let mut letters = w.letters.clone();
            letters.push(l);
            let n = letters.len();
            self.violation_ending_at(&letters, n).is_none()
        });
        out
    }

    /// All strings of length 1..=max_len (both orientations).
    pub fn strings(&self, max_len: usize) -> Vec<Word> {
        let q = self.quiver();
        let mut out = Vec::new();
        let mut stack: Vec<Word> = Vec::new();
        for a in 0..q.arrow_count() {
            for l in [Letter::direct(a), Letter::inverse(a)] {
                stack.push(Word { start: l.source(q), letters: vec![l] });
            }
        }
        while let Some(w) = stack.pop() {
            if w.len() < max_len {
                for l in self.extensions(&w) {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    stack.push(Word { start: w.start, letters });
                }
            }
            out.push(w);
        }
        out.sort_by(|a, b| (a.len(), a.key(q)).cmp(&(b.len(), b.key(q))));
        out
    }

    /// Strings starting with the direct letter `a`, including `a` itself.
    pub fn strings_from(&self, a: usize, max_len: usize) -> Vec<Word> {
        self.strings(max_len).into_iter().filter(|w| w.first() == Some(Letter::direct(a))).collect()
    }

    /// Representative least among rotations of the band and its inverse.
    pub fn canonical_band(&self, w: &Word) -> Word {
        let q = self.quiver();
        let inv = w.inverse(q);
        (0..w.len())
            .flat_map(|k| [w.rotate(q, k), inv.rotate(q, k)])
            .min_by(|a, b| a.key(q).cmp(&b.key(q)))
            .expect("bands are nonempty")
    }

    /// Band classes up to rotation and inversion with length ≤ max_len.
    pub fn bands(&self, max_len: usize) -> Vec<Word> {
        let q = self.quiver();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in self.strings(max_len) {
            if w.source() == w.target(q) && self.is_band(&w) {
                let c = self.canonical_band(&w);
                if seen.insert(c.clone()) {
                    out.push(c);
                }
            }
        }
        out.sort_by(|a, b| (a.len(), a.key(q)).cmp(&(b.len(), b.key(q))));
        out
    }
}

fn is_proper_power(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| letters[i] == letters[i % d]))
}

/// Which side of the two mirror-image readings of the order is used. Under
/// `Quoted`, S < T when T continues S by an inverse letter, when S continues
/// T by a direct letter, or when after a common prefix S turns direct and T
/// inverse. `Mirrored` is the reverse order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderConvention {
    #[default]
    Quoted,
    Mirrored,
}

impl OrderConvention {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quoted" => Ok(OrderConvention::Quoted),
            "mirrored" => Ok(OrderConvention::Mirrored),
            other => input(format!("unknown order convention {other}")),
        }
    }
}

/// Comparison of two words from the same vertex; None when incomparable.
pub fn compare_strings(s: &Word, t: &Word, conv: OrderConvention) -> Option<Ordering> {
    if s.start != t.start {
        return None;
    }
    let k = s.letters.iter().zip(&t.letters).take_while(|(x, y)| x == y).count();
    let quoted = match (s.letters.get(k), t.letters.get(k)) {
        (None, None) => Ordering::Equal,
        (None, Some(l)) => {
            if l.is_direct() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
        (Some(l), None) => {
            if l.is_direct() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        (Some(x), Some(y)) => match (x.is_direct(), y.is_direct()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => return None,
        },
    };
    Some(match conv {
        OrderConvention::Quoted => quoted,
        OrderConvention::Mirrored => quoted.reverse(),
    })
}

/// S < T for strings in S(a).
pub fn order_lt(q: &Quiver, s: &Word, t: &Word, a: usize, conv: OrderConvention) -> Result<bool> {
    for w in [s, t] {
        if w.first() != Some(Letter::direct(a)) {
            return input(format!("{} does not start with {}", w.display(q), q.arrow(a).name));
        }
    }
    Ok(compare_strings(s, t, conv) == Some(Ordering::Less))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    U,
    V,
}

/// A word over the alphabet {U, V}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct SigmaWord(pub Vec<Sym>);

impl SigmaWord {
    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'U' | 'u' => Ok(Sym::U),
                'V' | 'v' => Ok(Sym::V),
                other => input(format!("Σ-word symbol {other} is neither U nor V")),
            })
            .collect::<Result<Vec<_>>>()
            .map(SigmaWord)
    }

    /// All words of length ≤ depth, shortest first.
    pub fn all_up_to(depth: usize) -> Vec<SigmaWord> {
        let mut out = vec![SigmaWord(vec![])];
        let mut layer = vec![SigmaWord(vec![])];
        for _ in 0..depth {
            let mut next = Vec::new();
            for w in &layer {
                for s in [Sym::U, Sym::V] {
                    let mut x = w.0.clone();
                    x.push(s);
                    next.push(SigmaWord(x));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn then(&self, other: &SigmaWord) -> SigmaWord {
        let mut v = self.0.clone();
        v.extend(&other.0);
        SigmaWord(v)
    }

    /// Substitution of the two bands; the empty Σ-word realizes as the
    /// empty word at the bands' common vertex.
    pub fn realize(&self, q: &Quiver, u: &Word, v: &Word) -> Result<Word> {
        let mut w = Word::empty(u.start);
        for s in &self.0 {
            w = w.concat(if *s == Sym::U { u } else { v }, q)?;
        }
        Ok(w)
    }
}

impl fmt::Display for SigmaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for s in &self.0 {
            write!(f, "{}", if *s == Sym::U { 'U' } else { 'V' })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QGeneratingReport {
    pub holds: bool,
    pub convention: OrderConvention,
    pub checks: Vec<Check>,
}

/// Distinct bands, common first direct letter, common last inverse letter,
/// U < V, and neither prolongs the other.
pub fn q_generating_pair(alg: &StringAlgebra, u: &Word, v: &Word, conv: OrderConvention) -> QGeneratingReport {
    let q = alg.quiver();
    let mut checks = Vec::new();
    let mut push = |id: &str, holds: bool, detail: String| checks.push(Check { id: id.into(), holds, detail });
    push("bands", alg.is_band(u) && alg.is_band(v), format!("U = {}, V = {}", u.display(q), v.display(q)));
    push("distinct", u != v, String::new());
    let first_ok = u.first().is_some_and(|l| l.is_direct()) && u.first() == v.first();
    push("first_letter", first_ok, u.first().map(|l| letter_text(q, l)).unwrap_or_default());
    let last_ok = u.last().is_some_and(|l| !l.is_direct()) && u.last() == v.last();
    push("last_letter", last_ok, u.last().map(|l| letter_text(q, l)).unwrap_or_default());
    let cmp = compare_strings(u, v, conv);
    push("order", cmp == Some(Ordering::Less), format!("{cmp:?}"));
    push("no_prolongation", !is_prolongation(u, v) && !is_prolongation(v, u), String::new());
    let holds = checks.iter().all(|c| c.holds);
    QGeneratingReport { holds, convention: conv, checks }
}

/// Bands U, V and the Σ-words S, T of the chain {S X T U}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    pub u: Word,
    pub v: Word,
    pub s: SigmaWord,
    pub t: SigmaWord,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainElement {
    pub x: SigmaWord,
    pub word: Word,
}

impl ChainSpec {
    pub fn element(&self, q: &Quiver, x: &SigmaWord) -> Result<Word> {
        self.s.then(x).then(&self.t).then(&SigmaWord(vec![Sym::U])).realize(q, &self.u, &self.v)
    }

    /// Elements S X T U for |X| ≤ depth, validated and sorted by the order.
    pub fn elements(&self, alg: &StringAlgebra, conv: OrderConvention) -> Result<Vec<ChainElement>> {
        self.elements_to_depth(alg, conv, self.depth)
    }

    pub fn elements_to_depth(&self, alg: &StringAlgebra, conv: OrderConvention, depth: usize) -> Result<Vec<ChainElement>> {
        let q = alg.quiver();
        let mut out = Vec::new();
        for x in SigmaWord::all_up_to(depth) {
            let word = self.element(q, &x)?;
            if let Some(i) = alg.string_violation(&word) {
                return input(format!("chain element for X = {x} fails to be a string at letter {i}"));
            }
            out.push(ChainElement { x, word });
        }
        let mut failure = None;
        out.sort_by(|a, b| {
            compare_strings(&a.word, &b.word, conv).unwrap_or_else(|| {
                failure = Some((a.x.clone(), b.x.clone()));
                Ordering::Equal
            })
        });
        if let Some((a, b)) = failure {
            return input(format!("chain elements for {a} and {b} are incomparable"));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub alpha: usize,
    pub u: Word,
    pub v: Word,
}

/// Bounded search for two bands in B(α) with a common last letter, neither
/// prolonging the other, with no interior αβ⁻¹ factor, and with UV and VU
/// both strings. Returns the first pair by total length, then by how many of
/// the two are read against their canonical orientation, then lexically.
pub fn nondomestic_witness_search(alg: &StringAlgebra, max_len: usize) -> Option<Witness> {
    let q = alg.quiver();
    let mut groups: BTreeMap<(usize, usize), Vec<(Word, bool)>> = BTreeMap::new();
    for band in alg.bands(max_len) {
        let inv = band.inverse(q);
        let mut seen = HashSet::new();
        for (w, canonical) in [(&band, true), (&inv, false)] {
            for k in 0..w.len() {
                let r = w.rotate(q, k);
                let (Some(f), Some(l)) = (r.first(), r.last()) else { continue };
                if f.is_direct() && !l.is_direct() && seen.insert(r.clone()) {
                    groups.entry((f.arrow, l.arrow)).or_default().push((r, canonical));
                }
            }
        }
    }
    // (total length, inverse starts, keys of U and V, witness); smallest wins.
    type Candidate<'a> = (usize, usize, Vec<(&'a str, Dir)>, Vec<(&'a str, Dir)>, Witness);
    let mut best: Option<Candidate> = None;
    for ((alpha, beta), members) in &groups {
        let clean = |w: &Word| {
            !w.letters.windows(2).skip(1).any(|p| p[0] == Letter::direct(*alpha) && p[1] == Letter::inverse(*beta))
        };
        for (i, (u, cu)) in members.iter().enumerate() {
            for (v, cv) in members.iter().skip(i + 1) {
                if u == v || is_prolongation(u, v) || is_prolongation(v, u) || !clean(u) || !clean(v) {
                    continue;
                }
                let (u, v) = if (u.len(), u.key(q)) <= (v.len(), v.key(q)) { (u, v) } else { (v, u) };
                let uv = u.concat(v, q).ok();
                let vu = v.concat(u, q).ok();
                if !(uv.is_some_and(|w| alg.is_string(&w)) && vu.is_some_and(|w| alg.is_string(&w))) {
                    continue;
                }
                let off = usize::from(!cu) + usize::from(!cv);
                let key = (u.len() + v.len(), off, u.key(q), v.key(q));
                if best.as_ref().is_none_or(|b| key < (b.0, b.1, b.2.clone(), b.3.clone())) {
                    best = Some((key.0, key.1, key.2, key.3, Witness { alpha: *alpha, u: u.clone(), v: v.clone() }));
                }
            }
        }
    }
    best.map(|b| b.4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Relation;

    /// Two parallel pairs of arrows with the crossing compositions killed.
    fn a1() -> StringAlgebra {
        let q = Quiver::new(
            &["1", "2", "3"],
            &[("al", "1", "2"), ("be", "1", "2"), ("ga", "2", "3"), ("de", "2", "3")],
        )
        .unwrap();
        let rels = vec![
            Relation::monomial(&q, q.path(&["al", "de"]).unwrap()).unwrap(),
            Relation::monomial(&q, q.path(&["be", "ga"]).unwrap()).unwrap(),
        ];
        StringAlgebra::new(&Presentation::new(q, rels)).unwrap()
    }

    #[test]
    fn cancellation_and_relation_violations() {
        let alg = a1();
        let q = alg.quiver();
        assert_eq!(alg.string_violation(&Word::parse(q, "al al^-1").unwrap()), Some(1));
        assert_eq!(alg.string_violation(&Word::parse(q, "al de").unwrap()), Some(1));
        assert_eq!(alg.string_violation(&Word::parse(q, "de^-1 al^-1").unwrap()), Some(1));
        assert!(alg.is_string(&Word::parse(q, "al ga de^-1 be^-1").unwrap()));
    }

    #[test]
    fn bands_and_powers() {
        let alg = a1();
        let q = alg.quiver();
        let v = Word::parse(q, "al be^-1").unwrap();
        assert!(alg.is_band(&v));
        assert!(!alg.is_band(&v.concat(&v, q).unwrap()));
        assert!(!alg.is_band(&Word::parse(q, "al").unwrap()));
    }

    #[test]
    fn quoted_order_examples() {
        let alg = a1();
        let q = alg.quiver();
        let al = q.arrow_id("al").unwrap();
        let w = |s| Word::parse(q, s).unwrap();
        let conv = OrderConvention::Quoted;
        assert!(order_lt(q, &w("al"), &w("al be^-1"), al, conv).unwrap());
        assert!(order_lt(q, &w("al ga"), &w("al"), al, conv).unwrap());
        assert!(order_lt(q, &w("al ga de^-1 be^-1"), &w("al be^-1"), al, conv).unwrap());
        assert!(!order_lt(q, &w("al be^-1"), &w("al ga de^-1 be^-1"), al, conv).unwrap());
        assert!(order_lt(q, &w("al be^-1"), &w("al ga de^-1 be^-1"), al, OrderConvention::Mirrored).unwrap());
        assert!(order_lt(q, &w("ga"), &w("al"), al, conv).is_err());
    }

    #[test]
    fn sigma_words_count() {
        assert_eq!(SigmaWord::all_up_to(3).len(), 15);
        assert_eq!(SigmaWord::parse("UVV").unwrap().to_string(), "UVV");
        assert!(SigmaWord::parse("UX").is_err());
    }
}
