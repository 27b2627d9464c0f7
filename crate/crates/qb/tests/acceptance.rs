//! Acceptance gate: ten criteria, one line each, with pinned time limits.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use quiverbench::algebra::GradedQuotient;
use quiverbench::brauer::shadow;
use quiverbench::classify::classify;
use quiverbench::lattice::{dense_chain_verify, independent_pair_verify, nonsymmetric_verify, wide_sample_verify, VerifyOptions};
use quiverbench::quiver::{cyclic_derivative, Presentation};
use quiverbench::registry::{PairInstance, Registry};
use quiverbench::rep::{
    band_module, indecomposability, pointed_hom_exists, pointed_isomorphic, pointed_pushout_general, pointed_pushout_string,
    pointed_string_module, pushout_string_applicable, string_module, OracleOptions,
};
use quiverbench::skew::{g_pair, hom_dim_check, pushdown, skew_presentation, stabilizer_of_module, stabilizer_of_string, twist_word, SkewAlgebra};
use quiverbench::words::{compare_strings, nondomestic_witness_search, q_generating_pair, Letter, OrderConvention, StringAlgebra, Word};
use quiverbench::{PointedModule, Rational};

const C1_LIMIT: Duration = Duration::from_secs(1);
const C3_LIMIT: Duration = Duration::from_secs(10);
const C5_LIMIT: Duration = Duration::from_secs(30);
const C9_LIMIT: Duration = Duration::from_secs(120);
/// Chain elements per chain at depth 3: all {U,V}-words of length ≤ 3.
const MIN_CHAIN: usize = 15;
const ORDER_LEN: usize = 8;
const HOM_LEN: usize = 6;
const PUSHOUT_LEN: usize = 8;
const PUSHDOWN_ORACLE_DIM: usize = 12;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn presentation(name: &str) -> Presentation {
    Registry::builtin().get(name).unwrap().presentation().unwrap()
}

fn algebra(name: &str) -> StringAlgebra {
    StringAlgebra::new(&presentation(name)).unwrap()
}

fn instance(name: &str) -> PairInstance {
    Registry::builtin().get(name).unwrap().pair_instance().unwrap()
}

fn flags(p: &Presentation) -> (bool, bool, bool) {
    let c = classify(p);
    (c.special_biserial.holds, c.string.holds, c.gentle.holds)
}

fn c1_classification() -> Outcome {
    for name in ["sphere5-gentle", "nz-gentle", "a1"] {
        ensure(flags(&presentation(name)).2, format!("{name} is not gentle"))?;
    }
    let bg = presentation("brauer-two-triangles");
    let (sb, st, _) = flags(&bg);
    ensure(sb && !st, format!("Brauer algebra: special biserial {sb}, string {st}"))?;
    ensure(flags(&shadow(&bg).map_err(|e| e.to_string())?).1, "shadow is not a string algebra")?;
    Ok("3 gentle, Brauer special biserial and not string, shadow string".into())
}

fn c2_derivatives() -> Outcome {
    let (q, w) = Registry::builtin().get("sphere5-potential").unwrap().potential().unwrap();
    let got: BTreeSet<String> = (0..q.arrow_count()).flat_map(|a| cyclic_derivative(&q, &w, a)).map(|(_, p)| p.display(&q)).collect();
    let want: BTreeSet<String> = [
        "c3 a2 b1 c1", "a2 b1 c1 b3", "b1 c1 b3 c3", "c1 b3 c3 a2", "b3 c3 a2 b1", "b2' c2' a3", "c2' a3 a1", "a3 a1 b2'",
        "a1 b2' c2'",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    ensure(got == want, format!("derivative paths {got:?}"))?;
    Ok(format!("{} paths", got.len()))
}

fn c3_band_search() -> Outcome {
    let alg = algebra("sphere5-gentle");
    let q = alg.quiver();
    let w = nondomestic_witness_search(&alg, 8).ok_or("no witness for the sphere algebra at 8")?;
    let beta1 = alg.canonical_band(&Word::parse(q, "a3 a1 a2^-1").unwrap());
    ensure(alg.canonical_band(&w.u) == beta1 || alg.canonical_band(&w.v) == beta1, "witness misses a3 a1 a2^-1")?;
    let commute = alg.is_string(&w.u.concat(&w.v, q).unwrap()) && alg.is_string(&w.v.concat(&w.u, q).unwrap());
    ensure(commute, "witness bands do not commute")?;
    ensure(nondomestic_witness_search(&algebra("a2"), 10).is_none(), "A2 has a witness at 10")?;
    let sh = StringAlgebra::new(&shadow(&presentation("brauer-two-triangles")).unwrap()).unwrap();
    let w2 = nondomestic_witness_search(&sh, 6).ok_or("no witness for the shadow at 6")?;
    let pair = (w2.u.display(sh.quiver()), w2.v.display(sh.quiver()));
    ensure(pair == ("a1 b1^-1".into(), "a1 a2 b2^-1 b1^-1".into()), format!("shadow witness {pair:?}"))?;
    let code = Command::new(env!("CARGO_BIN_EXE_qb"))
        .args(["witness", "registry:a2", "--max-len", "10"])
        .output()
        .map_err(|e| e.to_string())?
        .status
        .code();
    ensure(code == Some(1), format!("qb witness on A2 exited with {code:?}"))?;
    Ok(format!("sphere partner {}, A2 none, shadow exact", w.v.display(q)))
}

fn c4_q_generating() -> Outcome {
    for name in ["sphere5-gentle", "nz-gentle", "a1"] {
        let inst = instance(name);
        for c in &inst.chains {
            let r = q_generating_pair(&inst.algebra, &c.spec.u, &c.spec.v, c.convention);
            ensure(r.holds, format!("{name}: {:?}", r.checks.iter().filter(|c| !c.holds).collect::<Vec<_>>()))?;
        }
    }
    let nz = instance("nz-gentle");
    let q = nz.algebra.quiver();
    let g = nz.action.as_ref().unwrap();
    ensure(twist_word(q, g, &nz.u) == nz.u.inverse(q), "NZ: gU differs from U^-1")?;
    ensure(twist_word(q, g, &nz.v) == nz.v.inverse(q), "NZ: gV differs from V^-1")?;
    let sp = instance("sphere5-gentle");
    let q = sp.algebra.quiver();
    let g = sp.action.as_ref().unwrap();
    let first = |w: &Word| w.first().unwrap().arrow;
    let (u, v) = (&sp.u, &sp.v);
    let (gu, gv) = (twist_word(q, g, u), twist_word(q, g, v));
    let distinct = [
        (v.clone(), gv.clone()),
        (v.clone(), v.inverse(q)),
        (v.inverse(q), gu.clone()),
        (u.clone(), gu.clone()),
        (u.clone(), gu.inverse(q)),
    ];
    for (x, y) in &distinct {
        ensure(first(x) != first(y), format!("{} and {} start alike", x.display(q), y.display(q)))?;
    }
    Ok("3 pairs and inverses, NZ twists invert, 5 sphere discriminations".into())
}

fn c5_pushouts() -> Outcome {
    let mut total = 0;
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let q = alg.quiver();
        let mut words: Vec<Word> = (0..q.vertex_count()).map(Word::empty).collect();
        words.extend(alg.strings(PUSHOUT_LEN).into_iter().filter(|w| w.first().unwrap().is_direct()));
        let pairs: Vec<(&Word, &Word)> = words
            .iter()
            .flat_map(|t| words.iter().map(move |s| (t, s)))
            .filter(|(t, s)| t.len() + s.len() <= PUSHOUT_LEN && pushout_string_applicable(&alg, t, s).is_ok())
            .collect();
        let bad = pairs.par_iter().find_any(|(t, s)| {
            let fast: PointedModule = pointed_pushout_string(&alg, t, s).unwrap();
            let ms: PointedModule = pointed_string_module(&alg, s).unwrap();
            let mt: PointedModule = pointed_string_module(&alg, t).unwrap();
            !pointed_isomorphic(q, &fast, &pointed_pushout_general(q, &ms, &mt), 0)
        });
        if let Some((t, s)) = bad {
            return Err(format!("{name}: T = {}, S = {}", t.display(q), s.display(q)));
        }
        total += pairs.len();
    }
    Ok(format!("{total} compatible pairs"))
}

fn c6_pointed_homs() -> Outcome {
    let mut total = 0;
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let q = alg.quiver();
        let words: Vec<Word> = alg.strings(HOM_LEN).into_iter().filter(|w| w.first().unwrap().is_direct()).collect();
        let modules: Vec<PointedModule> = words.iter().map(|w| pointed_string_module(&alg, w).unwrap()).collect();
        let pairs: Vec<(usize, usize)> = (0..words.len())
            .flat_map(|i| (0..words.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                words[i].first() == words[j].first()
                    && compare_strings(&words[i], &words[j], OrderConvention::Quoted) == Some(Ordering::Less)
            })
            .collect();
        if let Some(&(i, j)) = pairs.par_iter().find_any(|&&(i, j)| pointed_hom_exists(q, &modules[j], &modules[i]).is_none()) {
            return Err(format!("{name}: no hom from {} to {}", words[j].display(q), words[i].display(q)));
        }
        total += pairs.len();
    }
    Ok(format!("{total} ordered pairs"))
}

fn counts(p: &Presentation) -> (usize, usize, usize) {
    (p.quiver.vertex_count(), p.quiver.arrow_count(), p.relations.len())
}

fn c7_skew() -> Outcome {
    let r = Registry::builtin();
    let (gp, _) = g_pair(&r.get("sphere5-triple").unwrap().triple().unwrap());
    ensure(counts(&gp) == (9, 18, 18), format!("doubling counts {:?}", counts(&gp)))?;
    ensure(classify(&gp).gentle.holds, "doubling is not gentle")?;
    let e = r.get("nz-gentle").unwrap();
    let p = e.presentation().unwrap();
    let g = e.action(&p.quiver).unwrap().unwrap();
    let sp = skew_presentation(&p, &g, 4).map_err(|e| e.to_string())?;
    let nz = r.get("nz-incidence").unwrap().presentation().unwrap();
    let got = counts(&sp.presentation);
    ensure(got == counts(&nz) && got == (7, 8, 2), format!("skew counts {got:?}"))?;
    ensure(sp.presentation.relations.iter().all(|r| r.terms().len() == 2), "skew relations are not binomial")?;
    let dims = |p: &Presentation| {
        let gq = GradedQuotient::new(p, 4).unwrap();
        (0..=gq.top_degree().min(4)).map(|d| gq.dim(d)).collect::<Vec<_>>()
    };
    ensure(dims(&sp.presentation) == dims(&nz), "graded dimensions differ from the incidence algebra")?;
    Ok("doubling 9/18/18 gentle; NZ skew 7 vertices, 8 arrows, 2 binomial relations as in the incidence quiver".into())
}

fn c8_pushdown() -> Outcome {
    let e = Registry::builtin();
    let e = e.get("a1").unwrap();
    let p = e.presentation().unwrap();
    let g = e.action(&p.quiver).unwrap().unwrap();
    let alg = StringAlgebra::new(&p).unwrap();
    let q = alg.quiver();
    let skew = SkewAlgebra::new(&p, &g, 4).map_err(|e| e.to_string())?;
    let sp = skew_presentation(&p, &g, 4).map_err(|e| e.to_string())?;
    let texts = ["@v1", "@v2", "al be^-1", "ga de^-1", "al ga de^-1 be^-1", "al", "ga", "al ga", "be de", "be de ga^-1"];
    let mut modules = Vec::new();
    for t in texts {
        let w = match t.strip_prefix('@') {
            Some(v) => Word::empty(q.vertex(v).unwrap()),
            None => Word::parse(q, t).unwrap(),
        };
        let m = string_module::<Rational>(&alg, &w).unwrap().rep;
        let full = stabilizer_of_string(q, &g, &w).len() == 2;
        ensure(full == (stabilizer_of_module(q, &g, &m, 0).len() == 2), format!("{t}: stabilizers disagree"))?;
        modules.push((t, m, full));
    }
    let (mut split, mut kept) = (0, 0);
    for (t, m, full) in &modules {
        let (f, _) = pushdown(&sp, &skew, m);
        ensure(f.total_dim() == 2 * m.total_dim(), format!("{t}: dimension {} not doubled", f.total_dim()))?;
        ensure(f.total_dim() <= PUSHDOWN_ORACLE_DIM, format!("{t}: pushdown above the oracle bound"))?;
        let n = indecomposability(&sp.presentation.quiver, &f, OracleOptions::default()).summand_count();
        ensure(n == Some(if *full { 2 } else { 1 }), format!("{t}: {n:?} summands"))?;
        if *full {
            split += 1;
        } else {
            kept += 1;
        }
    }
    for (t, m, _) in &modules {
        for (u, n, _) in &modules {
            let r = hom_dim_check(&sp, &skew, m, n, 0);
            ensure(r.holds, format!("Hom({t}, {u}): {} vs {} ({})", r.lhs, r.rhs, r.case))?;
        }
    }
    Ok(format!("10 modules doubled, {split} split in two, {kept} stay indecomposable, 100 hom counts match"))
}

fn c9_pipeline() -> Outcome {
    let opts = VerifyOptions::default();
    let mut checks = 0;
    for name in ["sphere5-gentle", "nz-gentle", "a1", "brauer-two-triangles"] {
        let inst = instance(name);
        let (c1, c2) = (&inst.chains[0], &inst.chains[1]);
        let mut reports = Vec::new();
        if name != "brauer-two-triangles" {
            for c in [c1, c2] {
                let n = c.spec.elements(&inst.algebra, c.convention).map_err(|e| e.to_string())?.len();
                ensure(n >= MIN_CHAIN, format!("{name}: {n} chain elements"))?;
                reports.push(dense_chain_verify(&inst.algebra, c, opts));
            }
            let g = inst.action.as_ref().ok_or(format!("{name} has no action"))?;
            reports.push(nonsymmetric_verify(&inst.algebra, c1, c2, g, opts));
        }
        reports.push(independent_pair_verify(&inst.algebra, c1, c2, opts));
        for r in &reports {
            let failed: Vec<_> = r.failures().iter().map(|c| format!("{} {:?}", c.id, c.witness)).collect();
            ensure(failed.is_empty(), format!("{name}: {failed:?}"))?;
            checks += r.checks.len();
        }
    }
    let inst = instance("a1");
    let wide = wide_sample_verify(&inst.algebra, &inst.chains[0], &inst.chains[1], 5, opts);
    ensure(wide.passed() && wide.checks.len() == 5, format!("wide: {:?}", wide.failures()))?;
    Ok(format!("{checks} checks at depth 3, 5 wide witnesses"))
}

/// S < T straight from the three defining cases.
fn defined_lt(s: &[Letter], t: &[Letter]) -> bool {
    let continues = |long: &[Letter], short: &[Letter], direct: bool| {
        long.len() > short.len() && long.starts_with(short) && long[short.len()].is_direct() == direct
    };
    continues(t, s, false)
        || continues(s, t, true)
        || (0..s.len().min(t.len())).any(|k| s[..k] == t[..k] && s[k].is_direct() && !t[k].is_direct())
}

fn qb(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qb")).args(args).output().map_err(|e| e.to_string())?;
    Ok(out.stdout)
}

fn c10_properties() -> Outcome {
    let mut violations = 0usize;
    let mut compared = 0usize;
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let strings = alg.strings(ORDER_LEN);
        for a in 0..alg.quiver().arrow_count() {
            let class: Vec<&Word> = strings.iter().filter(|w| w.first() == Some(Letter::direct(a))).collect();
            let mut sorted = class.clone();
            sorted.sort_by(|x, y| compare_strings(x, y, OrderConvention::Quoted).expect("one first letter"));
            violations += sorted
                .par_iter()
                .enumerate()
                .map(|(i, x)| {
                    sorted[i + 1..]
                        .iter()
                        .filter(|y| !defined_lt(&x.letters, &y.letters) || defined_lt(&y.letters, &x.letters))
                        .count()
                })
                .sum::<usize>();
            compared += class.len() * class.len().saturating_sub(1) / 2;
        }
    }
    ensure(violations == 0, format!("{violations} order-law violations"))?;

    let mut residues = 0;
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let p = &alg.presentation;
        let strings = alg.strings(6);
        for w in &strings {
            residues += usize::from(string_module::<Rational>(&alg, w).unwrap().rep.relation_residue(p).is_some());
            if alg.is_band(w) {
                let b = band_module(&alg, w, Rational::from_integer(2.into())).unwrap();
                residues += usize::from(b.relation_residue(p).is_some());
            }
        }
        for pair in strings.windows(2).step_by(7) {
            let a: PointedModule = pointed_string_module(&alg, &pair[0]).unwrap();
            let b: PointedModule = pointed_string_module(&alg, &pair[1]).unwrap();
            residues += usize::from(pointed_pushout_general(alg.quiver(), &a, &b).rep.relation_residue(p).is_some());
        }
    }
    ensure(residues == 0, format!("{residues} constructors with nonzero relation residue"))?;

    for args in [
        &["verify", "registry:a1", "--seed", "7", "--pushdown"][..],
        &["witness", "registry:sphere5-gentle", "--max-len", "8"][..],
        &["skew", "registry:nz-gentle", "--emit", "skew"][..],
    ] {
        let (first, second) = (qb(args)?, qb(args)?);
        ensure(!first.is_empty() && first == second, format!("qb {} is not replayable", args.join(" ")))?;
    }
    Ok(format!("{compared} comparisons, 0 violations; residues zero; 3 certificates replay byte-equal"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 10] = [
        ("classification golden set", c1_classification, Some(C1_LIMIT)),
        ("potential derivatives", c2_derivatives, None),
        ("band search", c3_band_search, Some(C3_LIMIT)),
        ("Q-generating pairs and twists", c4_q_generating, None),
        ("string pushouts against general pushouts", c5_pushouts, Some(C5_LIMIT)),
        ("pointed homs between ordered strings", c6_pointed_homs, None),
        ("skew constructions", c7_skew, None),
        ("pushdown identities", c8_pushdown, None),
        ("verifier pipeline", c9_pipeline, Some(C9_LIMIT)),
        ("property suites", c10_properties, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} {tag} [{:.2?}] {name}: {detail}", i + 1, took);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
