//! Representations as left modules: the matrix of an arrow α has shape
//! dim s(α) × dim t(α) and a path α₁⋯α_k acts as M(α₁)⋯M(α_k). A family
//! f = (f_v) is a homomorphism when f_{s(α)} M(α) = N(α) f_{t(α)}.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::field::{Fp, Rational, Scalar};
use crate::linalg::{ColumnBasis, LinearSystem, Matrix, Quotient};
use crate::quiver::{Path, Presentation, Quiver};
use crate::words::{Dir, StringAlgebra, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct Representation<F> {
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix<F>>,
}

/// Per-vertex coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement<F> {
    pub parts: Vec<Vec<F>>,
}

/// f_v has shape dim N_v × dim M_v.
#[derive(Clone, Debug, PartialEq)]
pub struct HomMatrix<F> {
    pub maps: Vec<Matrix<F>>,
}

/// A module with one distinguished element per summand of θ: a single
/// element when θ = Λ, a tuple when θ is a sum of simples or of copies of Λ.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedModule<F> {
    pub rep: Representation<F>,
    pub points: Vec<ModuleElement<F>>,
}

impl<F: Scalar> ModuleElement<F> {
    pub fn zero(dims: &[usize]) -> Self {
        ModuleElement { parts: dims.iter().map(|&d| vec![F::zero(); d]).collect() }
    }

    pub fn unit(dims: &[usize], v: usize, i: usize) -> Self {
        let mut e = Self::zero(dims);
        e.parts[v][i] = F::one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|p| p.iter().all(|x| x.is_zero()))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        ModuleElement { parts }
    }

    pub fn neg(&self) -> Self {
        ModuleElement { parts: self.parts.iter().map(|p| p.iter().map(|x| -x.clone()).collect()).collect() }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> ModuleElement<G> {
        ModuleElement { parts: self.parts.iter().map(|p| p.iter().map(&f).collect()).collect() }
    }
}

impl<F: Scalar> Representation<F> {
    pub fn zero(q: &Quiver) -> Self {
        Representation {
            dims: vec![0; q.vertex_count()],
            mats: (0..q.arrow_count()).map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn new(q: &Quiver, dims: Vec<usize>, mats: Vec<Matrix<F>>) -> Result<Self> {
        if dims.len() != q.vertex_count() || mats.len() != q.arrow_count() {
            return input("representation does not match the quiver");
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            if m.rows() != dims[a.source] || m.cols() != dims[a.target] {
                return input(format!(
                    "matrix of {} is {}×{}, expected {}×{}",
                    a.name,
                    m.rows(),
                    m.cols(),
                    dims[a.source],
                    dims[a.target]
                ));
            }
        }
        Ok(Representation { dims, mats })
    }

    pub fn simple(q: &Quiver, v: usize) -> Self {
        let mut dims = vec![0; q.vertex_count()];
        dims[v] = 1;
        let mats = q.arrows().iter().map(|a| Matrix::zeros(dims[a.source], dims[a.target])).collect();
        Representation { dims, mats }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Matrix of a path; the trivial path at v is the identity on M_v.
    pub fn eval_path(&self, q: &Quiver, p: &Path) -> Matrix<F> {
        let mut acc = Matrix::identity(self.dims[p.start]);
        for &a in &p.arrows {
            acc = acc.mul(&self.mats[a]);
        }
        debug_assert_eq!(acc.cols(), self.dims[p.target(q)]);
        acc
    }

    /// First relation that does not vanish, if any.
    pub fn relation_residue(&self, p: &Presentation) -> Option<String> {
        let q = &p.quiver;
        for r in &p.relations {
            let (s, t) = (r.source(), r.terms()[0].1.target(q));
            let mut acc = Matrix::zeros(self.dims[s], self.dims[t]);
            for (c, path) in r.terms() {
                acc = acc.add(&self.eval_path(q, path).scale(&F::from_rational(c)));
            }
            if !acc.is_zero() {
                return Some(r.display(q));
            }
        }
        None
    }

    pub fn satisfies(&self, p: &Presentation) -> bool {
        self.relation_residue(p).is_none()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                m.set_block(0, 0, a);
                m.set_block(a.rows(), a.cols(), b);
                m
            })
            .collect();
        Representation { dims, mats }
    }

    /// α·x for x in M_{t(α)}.
    pub fn act(&self, a: usize, x: &[F]) -> Vec<F> {
        self.mats[a].apply(x)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Representation<G> {
        Representation { dims: self.dims.clone(), mats: self.mats.iter().map(|m| m.map(&f)).collect() }
    }

    /// The subrepresentation on the given subspaces, in their coordinates.
    /// Each subspace must be stable under the arrows that land in it.
    pub fn restrict(&self, q: &Quiver, spaces: &[ColumnBasis<F>]) -> Self {
        let dims = spaces.iter().map(ColumnBasis::rank).collect();
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arr)| {
                let cols: Vec<Vec<F>> = spaces[arr.target]
                    .vectors
                    .iter()
                    .map(|w| {
                        let img = self.act(a, w);
                        debug_assert!(spaces[arr.source].contains(&img), "subspace not stable");
                        spaces[arr.source].coordinates(&img)
                    })
                    .collect();
                Matrix::from_columns(&cols, spaces[arr.source].rank())
            })
            .collect();
        Representation { dims, mats }
    }
}

impl<F: Scalar> HomMatrix<F> {
    pub fn identity(m: &Representation<F>) -> Self {
        HomMatrix { maps: m.dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn apply(&self, x: &ModuleElement<F>) -> ModuleElement<F> {
        ModuleElement { parts: self.maps.iter().zip(&x.parts).map(|(f, v)| f.apply(v)).collect() }
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        HomMatrix { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        HomMatrix { maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &F) -> Self {
        HomMatrix { maps: self.maps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    pub fn is_invertible(&self) -> bool {
        self.maps.iter().all(Matrix::is_invertible)
    }

    pub fn is_hom(&self, q: &Quiver, m: &Representation<F>, n: &Representation<F>) -> bool {
        q.arrows().iter().enumerate().all(|(a, arr)| {
            self.maps[arr.source].mul(&m.mats[a]) == n.mats[a].mul(&self.maps[arr.target])
        })
    }

    fn flatten(&self) -> Vec<F> {
        self.maps.iter().flat_map(|m| (0..m.rows()).flat_map(move |i| m.row(i).to_vec())).collect()
    }
}

/// Variable layout of the intertwining system for Hom(M, N).
struct HomLayout {
    offsets: Vec<usize>,
    m_dims: Vec<usize>,
    n_dims: Vec<usize>,
    nvars: usize,
}

impl HomLayout {
    fn new<F>(m: &Representation<F>, n: &Representation<F>) -> Self {
        let mut offsets = Vec::with_capacity(m.dims.len());
        let mut nvars = 0;
        for (a, b) in m.dims.iter().zip(&n.dims) {
            offsets.push(nvars);
            nvars += a * b;
        }
        HomLayout { offsets, m_dims: m.dims.clone(), n_dims: n.dims.clone(), nvars }
    }

    fn var(&self, v: usize, i: usize, j: usize) -> usize {
        self.offsets[v] + i * self.m_dims[v] + j
    }

    fn unpack<F: Scalar>(&self, x: &[F]) -> HomMatrix<F> {
        let maps = (0..self.m_dims.len())
            .map(|v| {
                let (r, c) = (self.n_dims[v], self.m_dims[v]);
                let rows = (0..r).map(|i| (0..c).map(|j| x[self.var(v, i, j)].clone()).collect()).collect();
                Matrix::from_rows(rows, c)
            })
            .collect();
        HomMatrix { maps }
    }
}

fn intertwining_system<F: Scalar>(q: &Quiver, m: &Representation<F>, n: &Representation<F>) -> (HomLayout, LinearSystem<F>) {
    let lay = HomLayout::new(m, n);
    let mut sys = LinearSystem::new(lay.nvars);
    for (a, arr) in q.arrows().iter().enumerate() {
        let (s, t) = (arr.source, arr.target);
        let (ma, na) = (&m.mats[a], &n.mats[a]);
        for i in 0..n.dims[s] {
            for j in 0..m.dims[t] {
                let mut terms = Vec::new();
                for k in 0..m.dims[s] {
                    let c = &ma[(k, j)];
                    if !c.is_zero() {
                        terms.push((lay.var(s, i, k), c.clone()));
                    }
                }
                for k in 0..n.dims[t] {
                    let c = &na[(i, k)];
                    if !c.is_zero() {
                        terms.push((lay.var(t, k, j), -c.clone()));
                    }
                }
                if !terms.is_empty() {
                    sys.add_equation(terms, F::zero());
                }
            }
        }
    }
    (lay, sys)
}

/// Basis of Hom(M, N).
pub fn hom_space<F: Scalar>(q: &Quiver, m: &Representation<F>, n: &Representation<F>) -> Vec<HomMatrix<F>> {
    let (lay, sys) = intertwining_system(q, m, n);
    sys.kernel_basis().iter().map(|x| lay.unpack(x)).collect()
}

pub fn hom_dim<F: Scalar>(q: &Quiver, m: &Representation<F>, n: &Representation<F>) -> usize {
    let (lay, sys) = intertwining_system(q, m, n);
    lay.nvars - sys.rank()
}

/// Affine space of pointed homs as (particular solution, kernel basis).
pub fn pointed_hom_space<F: Scalar>(
    q: &Quiver,
    src: &PointedModule<F>,
    dst: &PointedModule<F>,
) -> Option<(HomMatrix<F>, Vec<HomMatrix<F>>)> {
    assert_eq!(src.points.len(), dst.points.len(), "pointed modules over different θ");
    let (lay, mut sys) = intertwining_system(q, &src.rep, &dst.rep);
    for (m, n) in src.points.iter().zip(&dst.points) {
        for v in 0..src.rep.dims.len() {
            for i in 0..dst.rep.dims[v] {
                let terms: Vec<(usize, F)> = m.parts[v]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (lay.var(v, i, j), c.clone()))
                    .collect();
                let rhs = n.parts[v][i].clone();
                if terms.is_empty() && rhs.is_zero() {
                    continue;
                }
                sys.add_equation(terms, rhs);
            }
        }
    }
    let x = sys.solution()?;
    Some((lay.unpack(&x), sys.kernel_basis().iter().map(|k| lay.unpack(k)).collect()))
}

pub fn pointed_hom_exists<F: Scalar>(q: &Quiver, src: &PointedModule<F>, dst: &PointedModule<F>) -> Option<HomMatrix<F>> {
    pointed_hom_space(q, src, dst).map(|(f, _)| f)
}

impl<F: Scalar> PointedModule<F> {
    pub fn new(rep: Representation<F>, points: Vec<ModuleElement<F>>) -> Self {
        PointedModule { rep, points }
    }

    pub fn zero(q: &Quiver, arity: usize) -> Self {
        let rep = Representation::zero(q);
        let points = (0..arity).map(|_| ModuleElement::zero(&rep.dims)).collect();
        PointedModule { rep, points }
    }

    pub fn point(&self) -> &ModuleElement<F> {
        &self.points[0]
    }
}

pub fn pointed_direct_sum<F: Scalar>(a: &PointedModule<F>, b: &PointedModule<F>) -> PointedModule<F> {
    assert_eq!(a.points.len(), b.points.len(), "pointed modules over different θ");
    PointedModule {
        rep: a.rep.direct_sum(&b.rep),
        points: a.points.iter().zip(&b.points).map(|(x, y)| x.concat(y)).collect(),
    }
}

/// Smallest family of subspaces containing the homogeneous components of the
/// generators and stable under every arrow.
pub fn generated_subrep<F: Scalar>(q: &Quiver, m: &Representation<F>, gens: &[ModuleElement<F>]) -> Vec<ColumnBasis<F>> {
    let nv = m.dims.len();
    let mut spans: Vec<Vec<Vec<F>>> = vec![Vec::new(); nv];
    let mut bases: Vec<ColumnBasis<F>> =
        (0..nv).map(|v| Matrix::<F>::zeros(m.dims[v], 0).column_space()).collect();
    let mut queue: Vec<(usize, Vec<F>)> = Vec::new();
    for g in gens {
        for (v, part) in g.parts.iter().enumerate() {
            if part.iter().any(|x| !x.is_zero()) {
                queue.push((v, part.clone()));
            }
        }
    }
    while let Some((v, x)) = queue.pop() {
        if bases[v].contains(&x) {
            continue;
        }
        spans[v].push(x.clone());
        bases[v] = Matrix::from_columns(&spans[v], m.dims[v]).column_space();
        for a in q.in_arrows(v) {
            let y = m.act(a, &x);
            if y.iter().any(|c| !c.is_zero()) {
                queue.push((q.arrow(a).source, y));
            }
        }
    }
    bases
}

/// M / W with the canonical section at the non-pivot coordinates, plus the
/// per-vertex projections.
pub fn quotient_rep<F: Scalar>(q: &Quiver, m: &Representation<F>, sub: &[ColumnBasis<F>]) -> (Representation<F>, Vec<Quotient<F>>) {
    let quots: Vec<Quotient<F>> =
        sub.iter().enumerate().map(|(v, b)| Quotient::new(m.dims[v], &b.vectors)).collect();
    let dims: Vec<usize> = quots.iter().map(Quotient::dim).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arr)| {
            let qt = &quots[arr.target];
            let cols: Vec<Vec<F>> = qt
                .free_positions()
                .iter()
                .map(|&j| {
                    let mut e = vec![F::zero(); m.dims[arr.target]];
                    e[j] = F::one();
                    quots[arr.source].project(&m.act(a, &e))
                })
                .collect();
            Matrix::from_columns(&cols, dims[arr.source])
        })
        .collect();
    (Representation { dims, mats }, quots)
}

fn project_element<F: Scalar>(quots: &[Quotient<F>], x: &ModuleElement<F>) -> ModuleElement<F> {
    ModuleElement { parts: quots.iter().zip(&x.parts).map(|(qt, p)| qt.project(p)).collect() }
}

/// M ∗ N: the quotient of M ⊕ N by the submodule generated by the
/// anti-diagonal points (m_l, -n_l); the new points are the images of (m_l, 0).
pub fn pointed_pushout_general<F: Scalar>(q: &Quiver, a: &PointedModule<F>, b: &PointedModule<F>) -> PointedModule<F> {
    let sum = a.rep.direct_sum(&b.rep);
    let gens: Vec<ModuleElement<F>> = a.points.iter().zip(&b.points).map(|(m, n)| m.concat(&n.neg())).collect();
    let sub = generated_subrep(q, &sum, &gens);
    let (rep, quots) = quotient_rep(q, &sum, &sub);
    let points = a
        .points
        .iter()
        .map(|m| project_element(&quots, &m.concat(&ModuleElement::zero(&b.rep.dims))))
        .collect();
    PointedModule { rep, points }
}

/// The string module of a word with basis z_1..z_{n+1}; z_{j+1} sits at the
/// vertex reached after j letters. A direct letter α_j gives α·z_{j+1} = z_j
/// and an inverse letter α_j⁻¹ gives α·z_j = z_{j+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct StringModule<F> {
    pub word: Word,
    pub rep: Representation<F>,
    /// (vertex, local index) of z_1, z_2, ...
    pub placement: Vec<(usize, usize)>,
}

impl<F: Scalar> StringModule<F> {
    /// z_j for 1-based j.
    pub fn element(&self, j: usize) -> ModuleElement<F> {
        let (v, i) = self.placement[j - 1];
        ModuleElement::unit(&self.rep.dims, v, i)
    }

    pub fn pointed(&self, j: usize) -> PointedModule<F> {
        PointedModule { rep: self.rep.clone(), points: vec![self.element(j)] }
    }
}

/// Builds M(w) without checking that w is a string.
pub fn word_module<F: Scalar>(q: &Quiver, w: &Word) -> StringModule<F> {
    let mut dims = vec![0; q.vertex_count()];
    let mut placement = Vec::with_capacity(w.len() + 1);
    let mut v = w.start;
    placement.push((v, 0));
    dims[v] += 1;
    for l in &w.letters {
        v = l.target(q);
        placement.push((v, dims[v]));
        dims[v] += 1;
    }
    let mut mats: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.source], dims[a.target])).collect();
    for (j, l) in w.letters.iter().enumerate() {
        // letter j+1 joins z_{j+1} and z_{j+2}
        let (from, to) = match l.dir {
            Dir::Direct => (placement[j + 1], placement[j]),
            Dir::Inverse => (placement[j], placement[j + 1]),
        };
        mats[l.arrow][(to.1, from.1)] = F::one();
    }
    StringModule { word: w.clone(), rep: Representation { dims, mats }, placement }
}

pub fn string_module<F: Scalar>(alg: &StringAlgebra, w: &Word) -> Result<StringModule<F>> {
    if let Some(i) = alg.string_violation(w) {
        return input(format!("{} is not a string (letter {i})", w.display(alg.quiver())));
    }
    Ok(word_module(alg.quiver(), w))
}

/// (M(S), z_1).
pub fn pointed_string_module<F: Scalar>(alg: &StringAlgebra, w: &Word) -> Result<PointedModule<F>> {
    Ok(string_module(alg, w)?.pointed(1))
}

/// Band module with multiplicity one: basis z_1..z_n around the cycle and
/// the closing letter carrying the scalar λ.
pub fn band_module<F: Scalar>(alg: &StringAlgebra, band: &Word, lambda: F) -> Result<Representation<F>> {
    let q = alg.quiver();
    if !alg.is_band(band) {
        return input(format!("{} is not a band", band.display(q)));
    }
    let n = band.len();
    let mut dims = vec![0; q.vertex_count()];
    let mut placement = Vec::with_capacity(n);
    let mut v = band.start;
    for l in &band.letters {
        placement.push((v, dims[v]));
        dims[v] += 1;
        v = l.target(q);
    }
    let mut mats: Vec<Matrix<F>> = q.arrows().iter().map(|a| Matrix::zeros(dims[a.source], dims[a.target])).collect();
    for (j, l) in band.letters.iter().enumerate() {
        let c = if j + 1 == n { lambda.clone() } else { F::one() };
        let (a, b) = (placement[j], placement[(j + 1) % n]);
        let (from, to) = match l.dir {
            Dir::Direct => (b, a),
            Dir::Inverse => (a, b),
        };
        mats[l.arrow][(to.1, from.1)] = c;
    }
    Ok(Representation { dims, mats })
}

/// Whether T⁻¹S glued at z_{|T|+1} is the pointed pushout of (M(S), z_1)
/// and (M(T), z_1): T⁻¹S must be a string and each of S, T must be empty or
/// begin with a direct letter, so that z_1 generates only its own line.
pub fn pushout_string_applicable(alg: &StringAlgebra, t: &Word, s: &Word) -> Result<Word> {
    let q = alg.quiver();
    if t.start != s.start {
        return Err(Error::Inapplicable(format!("{} and {} start at different vertices", t.display(q), s.display(q))));
    }
    let w = t.inverse(q).concat(s, q)?;
    if let Some(i) = alg.string_violation(&w) {
        return Err(Error::Inapplicable(format!("{} is not a string (letter {i})", w.display(q))));
    }
    for x in [s, t] {
        if x.first().is_some_and(|l| !l.is_direct()) {
            return Err(Error::Inapplicable(format!("{} begins with an inverse letter", x.display(q))));
        }
    }
    Ok(w)
}

/// (M(T⁻¹S), z_{|T|+1}).
pub fn pointed_pushout_string<F: Scalar>(alg: &StringAlgebra, t: &Word, s: &Word) -> Result<PointedModule<F>> {
    let w = pushout_string_applicable(alg, t, s)?;
    Ok(word_module(alg.quiver(), &w).pointed(t.len() + 1))
}

/// M(S1) ≅ M(S2) exactly when S1 = S2 or S1 = S2⁻¹.
pub fn iso_string_modules(q: &Quiver, s1: &Word, s2: &Word) -> bool {
    s1 == s2 || *s1 == s2.inverse(q)
}

/// (M(S1), z_k1) ≅ (M(S2), z_k2) for 1-based points. An automorphism of a
/// string module keeps a nonzero coefficient on each basis vector it fixes,
/// so the only pointed isomorphisms are the canonical ones.
pub fn pointed_iso_string_modules(q: &Quiver, s1: &Word, k1: usize, s2: &Word, k2: usize) -> bool {
    (s1 == s2 && k1 == k2) || (*s1 == s2.inverse(q) && k1 == s2.len() + 2 - k2)
}

/// Range of the integer coefficients used for random combinations. A
/// nonzero determinant of degree d vanishes at a random point with
/// probability at most d / (2R + 1) per trial.
const RANDOM_RANGE: i64 = 1000;
const RANDOM_TRIALS: usize = 8;

fn random_combination<F: Scalar>(
    rng: &mut ChaCha8Rng,
    base: Option<&HomMatrix<F>>,
    basis: &[HomMatrix<F>],
    zero: impl Fn() -> HomMatrix<F>,
) -> HomMatrix<F> {
    let mut acc = base.cloned().unwrap_or_else(zero);
    for b in basis {
        let c = rng.gen_range(-RANDOM_RANGE..=RANDOM_RANGE);
        if c != 0 {
            acc = acc.add(&b.scale(&F::from_i64(c)));
        }
    }
    acc
}

fn zero_hom<F: Scalar>(m: &Representation<F>, n: &Representation<F>) -> HomMatrix<F> {
    HomMatrix { maps: m.dims.iter().zip(&n.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect() }
}

/// Isomorphism by search for an invertible hom among seeded random
/// combinations. A positive answer is certain; a negative one fails only
/// with the small probability bounded above.
pub fn is_isomorphic<F: Scalar>(q: &Quiver, m: &Representation<F>, n: &Representation<F>, seed: u64) -> bool {
    if m.dims != n.dims {
        return false;
    }
    let basis = hom_space(q, m, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_TRIALS).any(|_| random_combination(&mut rng, None, &basis, || zero_hom(m, n)).is_invertible())
}

/// Pointed isomorphism, by the same random search over the affine space of
/// pointed homs.
pub fn pointed_isomorphic<F: Scalar>(q: &Quiver, a: &PointedModule<F>, b: &PointedModule<F>, seed: u64) -> bool {
    if a.rep.dims != b.rep.dims {
        return false;
    }
    let Some((f0, basis)) = pointed_hom_space(q, a, b) else { return false };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_TRIALS).any(|_| random_combination(&mut rng, Some(&f0), &basis, || zero_hom(&a.rep, &b.rep)).is_invertible())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Indecomposability<F> {
    Indecomposable,
    /// A complete splitting into summands each certified indecomposable.
    Decomposable { summands: Vec<Representation<F>> },
    Unknown { note: String },
}

impl<F> Indecomposability<F> {
    pub fn is_indecomposable(&self) -> bool {
        matches!(self, Indecomposability::Indecomposable)
    }

    pub fn summand_count(&self) -> Option<usize> {
        match self {
            Indecomposability::Indecomposable => Some(1),
            Indecomposability::Decomposable { summands } => Some(summands.len()),
            Indecomposability::Unknown { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Largest total dimension handled by exact endomorphism analysis.
    pub dim_bound: usize,
    pub seed: u64,
    /// Random elements tried when basis elements do not split.
    pub probes: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { dim_bound: 40, seed: 0, probes: 24 }
    }
}

/// Decides indecomposability through End(M). With rad End the radical of
/// the trace form, End/rad of dimension one means End is local. Otherwise
/// elements y of End with a rational eigenvalue λ on End/rad, whose
/// minimal polynomial there is not a power of (t - λ), give x = y - λ that
/// is neither nilpotent nor invertible, and M = ker xᴺ ⊕ im xᴺ. Above the
/// dimension bound only a dimension count of End over F_p is tried; End_p
/// of dimension one forces End of dimension one.
pub fn indecomposability(q: &Quiver, m: &Representation<Rational>, opts: OracleOptions) -> Indecomposability<Rational> {
    if m.total_dim() == 0 {
        return Indecomposability::Unknown { note: "zero module".into() };
    }
    if m.total_dim() > opts.dim_bound {
        return modular_probe(q, m);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    match split(q, m, opts, &mut rng) {
        Ok(s) if s.len() == 1 => Indecomposability::Indecomposable,
        Ok(s) => Indecomposability::Decomposable { summands: s },
        Err(note) => Indecomposability::Unknown { note },
    }
}

fn modular_probe(q: &Quiver, m: &Representation<Rational>) -> Indecomposability<Rational> {
    let p = num_bigint::BigInt::from(Fp::P);
    let reducible = m.mats.iter().all(|mat| {
        (0..mat.rows()).all(|i| mat.row(i).iter().all(|x| (x.denom() % &p) != num_bigint::BigInt::from(0)))
    });
    if !reducible {
        return Indecomposability::Unknown { note: "denominators vanish modulo p".into() };
    }
    let mp: Representation<Fp> = m.map(Fp::from_rational);
    let d = hom_dim(q, &mp, &mp);
    if d == 1 {
        Indecomposability::Indecomposable
    } else {
        Indecomposability::Unknown {
            note: format!("dimension {} above the exact bound; End over F_p has dimension {d}", m.total_dim()),
        }
    }
}

fn split(
    q: &Quiver,
    m: &Representation<Rational>,
    opts: OracleOptions,
    rng: &mut ChaCha8Rng,
) -> std::result::Result<Vec<Representation<Rational>>, String> {
    let basis = hom_space(q, m, m);
    let n = basis.len();
    let gram_rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| trace(&basis[i].compose(&basis[j]))).collect())
        .collect();
    let gram = Matrix::from_rows(gram_rows, n);
    let rad: Vec<HomMatrix<Rational>> = gram
        .nullspace()
        .iter()
        .map(|c| combination(&basis, c, m))
        .collect();
    if n - rad.len() == 1 {
        return Ok(vec![m.clone()]);
    }
    let flat_len = basis[0].flatten().len();
    let semisimple = Quotient::new(flat_len, &rad.iter().map(HomMatrix::flatten).collect::<Vec<_>>());
    let one = HomMatrix::identity(m);
    let mut candidates: Vec<HomMatrix<Rational>> = basis.clone();
    for _ in 0..opts.probes {
        let coeffs: Vec<Rational> = (0..n).map(|_| Rational::from_i64(rng.gen_range(-5..=5))).collect();
        candidates.push(combination(&basis, &coeffs, m));
    }
    for y in &candidates {
        let poly = minimal_polynomial(&semisimple, &one, y);
        if poly.len() <= 2 {
            continue;
        }
        for lambda in rational_roots(&poly) {
            if is_power_of_linear(&poly, &lambda) {
                continue;
            }
            let x = y.add(&one.scale(&-lambda.clone()));
            let mut xn = x.clone();
            for _ in 0..usize::BITS - m.total_dim().leading_zeros() {
                xn = xn.compose(&xn);
            }
            let kernels: Vec<ColumnBasis<Rational>> = xn
                .maps
                .iter()
                .zip(&m.dims)
                .map(|(f, &d)| Matrix::from_columns(&f.nullspace(), d).column_space())
                .collect();
            let images: Vec<ColumnBasis<Rational>> = xn.maps.iter().map(Matrix::column_space).collect();
            let a = m.restrict(q, &kernels);
            let b = m.restrict(q, &images);
            if a.total_dim() == 0 || b.total_dim() == 0 {
                continue;
            }
            let mut out = split(q, &a, opts, rng)?;
            out.extend(split(q, &b, opts, rng)?);
            return Ok(out);
        }
    }
    Err(format!("End/rad has dimension {} and no splitting element was found", n - rad.len()))
}

fn trace(f: &HomMatrix<Rational>) -> Rational {
    f.maps.iter().fold(Rational::from_i64(0), |acc, m| acc + m.trace())
}

fn combination(basis: &[HomMatrix<Rational>], coeffs: &[Rational], m: &Representation<Rational>) -> HomMatrix<Rational> {
    let mut acc = zero_hom(m, m);
    for (b, c) in basis.iter().zip(coeffs) {
        if !num_traits::Zero::is_zero(c) {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Coefficients c_0..c_k (monic, c_k = 1) of the minimal polynomial of y
/// modulo the radical.
fn minimal_polynomial(semisimple: &Quotient<Rational>, one: &HomMatrix<Rational>, y: &HomMatrix<Rational>) -> Vec<Rational> {
    let mut powers: Vec<Vec<Rational>> = vec![semisimple.project(&one.flatten())];
    let mut cur = one.clone();
    loop {
        cur = cur.compose(y);
        let target = semisimple.project(&cur.flatten());
        let k = powers.len();
        let mut sys = LinearSystem::new(k);
        for (row, t) in target.iter().enumerate() {
            sys.add_equation((0..k).map(|i| (i, powers[i][row].clone())), t.clone());
        }
        if let Some(c) = sys.solution() {
            let mut poly: Vec<Rational> = c.into_iter().map(|x| -x).collect();
            poly.push(Rational::from_i64(1));
            return poly;
        }
        powers.push(target);
    }
}

fn eval_poly(poly: &[Rational], x: &Rational) -> Rational {
    poly.iter().rev().fold(Rational::from_i64(0), |acc, c| acc * x + c)
}

/// Largest integer magnitude whose divisors are enumerated.
const ROOT_SEARCH_LIMIT: u64 = 1_000_000;

fn divisors(n: &num_bigint::BigInt) -> Option<Vec<u64>> {
    let n: u64 = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(n))?;
    if n > ROOT_SEARCH_LIMIT {
        return None;
    }
    Some((1..=n).filter(|d| n.is_multiple_of(*d)).collect())
}

fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    use num_integer::Integer;
    let lcm = poly.iter().fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<num_bigint::BigInt> = poly.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let zero = num_bigint::BigInt::from(0);
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| *c != zero).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::from_i64(0));
    }
    let (Some(ps), Some(qs)) = (divisors(&ints[low]), divisors(ints.last().expect("nonempty"))) else {
        return roots;
    };
    for p in &ps {
        for qd in &qs {
            for sign in [1i64, -1] {
                let r = Rational::new(num_bigint::BigInt::from(*p as i64 * sign), num_bigint::BigInt::from(*qd));
                if !roots.contains(&r) && num_traits::Zero::is_zero(&eval_poly(poly, &r)) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn is_power_of_linear(poly: &[Rational], lambda: &Rational) -> bool {
    // (t - λ)^k has all roots at λ: test by repeated synthetic division
    let mut p = poly.to_vec();
    while p.len() > 1 {
        if !num_traits::Zero::is_zero(&eval_poly(&p, lambda)) {
            return false;
        }
        let mut quotient = vec![Rational::from_i64(0); p.len() - 1];
        let mut carry = Rational::from_i64(0);
        for i in (1..p.len()).rev() {
            carry = &p[i] + carry * lambda;
            quotient[i - 1] = carry.clone();
        }
        p = quotient;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use crate::quiver::Relation;

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
    fn string_module_shape_and_relations() {
        let alg = a1();
        let q = alg.quiver();
        let w = Word::parse(q, "al ga de^-1 be^-1").unwrap();
        let m: StringModule<Rational> = string_module(&alg, &w).unwrap();
        assert_eq!(m.rep.dims, vec![2, 2, 1]);
        assert!(m.rep.satisfies(&alg.presentation));
        let al = q.arrow_id("al").unwrap();
        // α·z_2 = z_1
        assert_eq!(m.rep.act(al, &m.element(2).parts[1]), m.element(1).parts[0]);
    }

    #[test]
    fn simple_homs() {
        let alg = a1();
        let q = alg.quiver();
        let s1 = Representation::<Rational>::simple(q, 0);
        let s2 = Representation::<Rational>::simple(q, 1);
        assert_eq!(hom_dim(q, &s1, &s1), 1);
        assert_eq!(hom_dim(q, &s1, &s2), 0);
    }

    #[test]
    fn pushout_of_two_arrows_has_dimension_three() {
        let alg = a1();
        let q = alg.quiver();
        let a: PointedModule<Rational> = pointed_string_module(&alg, &Word::parse(q, "al").unwrap()).unwrap();
        let b: PointedModule<Rational> = pointed_string_module(&alg, &Word::parse(q, "be").unwrap()).unwrap();
        let p = pointed_pushout_general(q, &a, &b);
        assert_eq!(p.rep.total_dim(), 3);
        let s = pointed_pushout_string::<Rational>(&alg, &Word::parse(q, "be").unwrap(), &Word::parse(q, "al").unwrap()).unwrap();
        assert!(pointed_isomorphic(q, &p, &s, 1));
    }

    #[test]
    fn oracle_splits_a_double() {
        let alg = a1();
        let q = alg.quiver();
        let m: StringModule<Rational> = string_module(&alg, &Word::parse(q, "al be^-1").unwrap()).unwrap();
        assert!(indecomposability(q, &m.rep, OracleOptions::default()).is_indecomposable());
        let d = m.rep.direct_sum(&m.rep);
        assert_eq!(indecomposability(q, &d, OracleOptions::default()).summand_count(), Some(2));
    }

    #[test]
    fn band_module_with_parameter() {
        let alg = a1();
        let q = alg.quiver();
        let band = Word::parse(q, "al be^-1").unwrap();
        let m = band_module(&alg, &band, rat(3)).unwrap();
        assert!(m.satisfies(&alg.presentation));
        assert_eq!(m.total_dim(), 2);
        assert!(indecomposability(q, &m, OracleOptions::default()).is_indecomposable());
        let other = band_module(&alg, &band, rat(5)).unwrap();
        assert!(!is_isomorphic(q, &m, &other, 0));
    }

    #[test]
    fn root_finder() {
        // t^2 - 3t + 2
        let p = vec![rat(2), rat(-3), rat(1)];
        let mut r = rational_roots(&p);
        r.sort();
        assert_eq!(r, vec![rat(1), rat(2)]);
        assert!(is_power_of_linear(&[rat(1), rat(-2), rat(1)], &rat(1)));
        assert!(!is_power_of_linear(&p, &rat(1)));
    }
}
