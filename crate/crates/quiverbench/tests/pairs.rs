use std::cmp::Ordering;

use rayon::prelude::*;

use quiverbench::lattice::{
    dense_chain_verify, independent_pair_verify, nonsymmetric_verify, wide_sample_verify, VerifyOptions,
};
use quiverbench::registry::{Chain, PairInstance, Registry};
use quiverbench::rep::{pointed_hom_exists, pointed_isomorphic, pointed_pushout_general, pointed_pushout_string, pointed_string_module, pushout_string_applicable};
use quiverbench::skew::twist_word;
use quiverbench::words::{compare_strings, q_generating_pair, ChainSpec, OrderConvention, SigmaWord, StringAlgebra, Word};
use quiverbench::{PointedModule, Rational};

fn instance(name: &str) -> PairInstance {
    Registry::builtin().get(name).unwrap().pair_instance().unwrap()
}

fn algebra(name: &str) -> StringAlgebra {
    StringAlgebra::new(&Registry::builtin().get(name).unwrap().presentation().unwrap()).unwrap()
}

#[test]
fn registry_pairs_and_their_inverses_are_q_generating() {
    for name in ["sphere5-gentle", "nz-gentle", "a1", "brauer-two-triangles"] {
        let inst = instance(name);
        let q = inst.algebra.quiver();
        for c in &inst.chains {
            let r = q_generating_pair(&inst.algebra, &c.spec.u, &c.spec.v, c.convention);
            assert!(r.holds, "{name}: {:?}", r.checks);
        }
        let (ui, vi) = (inst.u.inverse(q), inst.v.inverse(q));
        assert_eq!(inst.chains[1].spec.u, ui);
        assert_eq!(inst.chains[1].spec.v, vi);
    }
}

#[test]
fn nz_and_diamond_twists_invert_the_bands() {
    for name in ["nz-gentle", "a1"] {
        let inst = instance(name);
        let q = inst.algebra.quiver();
        let g = inst.action.as_ref().unwrap();
        assert_eq!(twist_word(q, g, &inst.u), inst.u.inverse(q), "{name}");
        assert_eq!(twist_word(q, g, &inst.v), inst.v.inverse(q), "{name}");
    }
}

#[test]
fn sphere_twists_start_with_other_arrows() {
    let inst = instance("sphere5-gentle");
    let q = inst.algebra.quiver();
    let g = inst.action.as_ref().unwrap();
    let first = |w: &Word| w.first().unwrap();
    let (u, v) = (&inst.u, &inst.v);
    let (gu, gv) = (twist_word(q, g, u), twist_word(q, g, v));
    assert_ne!(first(v), first(&gv));
    assert_ne!(first(v), first(&v.inverse(q)));
    assert_ne!(first(&v.inverse(q)), first(&gu));
    assert_ne!(first(u), first(&gu));
    assert_ne!(first(u), first(&gu.inverse(q)));
    assert_eq!(q.arrow(first(&gv).arrow).name, "a3'");
}

/// Every S < T among strings of length ≤ 6 starting with the same direct
/// letter gives a pointed hom (M(T), z1) → (M(S), z1).
#[test]
fn smaller_string_receives_a_pointed_hom() {
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let q = alg.quiver();
        let words: Vec<Word> = alg.strings(6).into_iter().filter(|w| w.first().unwrap().is_direct()).collect();
        let modules: Vec<PointedModule> = words.iter().map(|w| pointed_string_module(&alg, w).unwrap()).collect();
        let pairs: Vec<(usize, usize)> = (0..words.len())
            .flat_map(|i| (0..words.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| {
                words[i].first() == words[j].first()
                    && compare_strings(&words[i], &words[j], OrderConvention::Quoted) == Some(Ordering::Less)
            })
            .collect();
        assert!(pairs.len() > 100, "{name}: {}", pairs.len());
        let missing: Vec<_> = pairs.par_iter().filter(|&&(i, j)| pointed_hom_exists(q, &modules[j], &modules[i]).is_none()).collect();
        assert!(missing.is_empty(), "{name}: {} pairs without a hom, first {:?}", missing.len(), missing.first());
    }
}

/// The string shortcut for pushouts agrees with the quotient construction,
/// points included, whenever it applies.
#[test]
fn string_pushouts_match_general_pushouts() {
    for name in ["a1", "sphere5-gentle"] {
        let alg = algebra(name);
        let q = alg.quiver();
        let mut words: Vec<Word> = (0..q.vertex_count()).map(Word::empty).collect();
        words.extend(alg.strings(8).into_iter().filter(|w| w.first().unwrap().is_direct()));
        let pairs: Vec<(&Word, &Word)> = words
            .iter()
            .flat_map(|t| words.iter().map(move |s| (t, s)))
            .filter(|(t, s)| t.len() + s.len() <= 8 && pushout_string_applicable(&alg, t, s).is_ok())
            .collect();
        assert!(pairs.len() > 50, "{name}: {}", pairs.len());
        let bad: Vec<String> = pairs
            .par_iter()
            .filter_map(|(t, s)| {
                let fast: PointedModule = pointed_pushout_string(&alg, t, s).unwrap();
                let ms: PointedModule = pointed_string_module(&alg, s).unwrap();
                let mt: PointedModule = pointed_string_module(&alg, t).unwrap();
                let slow = pointed_pushout_general(q, &ms, &mt);
                (!pointed_isomorphic(q, &fast, &slow, 0)).then(|| format!("T = {}, S = {}", t.display(q), s.display(q)))
            })
            .collect();
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn instances_pass_every_verifier_at_depth_three() {
    let opts = VerifyOptions::default();
    for name in ["sphere5-gentle", "nz-gentle", "a1", "brauer-two-triangles"] {
        let inst = instance(name);
        let (c1, c2) = (&inst.chains[0], &inst.chains[1]);
        for c in [c1, c2] {
            assert!(c.spec.elements(&inst.algebra, c.convention).unwrap().len() >= 15);
            let r = dense_chain_verify(&inst.algebra, c, opts);
            assert!(r.passed(), "{name}: {:?}", r.failures());
        }
        let r = independent_pair_verify(&inst.algebra, c1, c2, opts);
        assert!(r.passed(), "{name}: {:?}", r.failures());
        if let Some(g) = &inst.action {
            let r = nonsymmetric_verify(&inst.algebra, c1, c2, g, opts);
            assert!(r.passed(), "{name}: {:?}", r.failures());
        }
    }
    let inst = instance("a1");
    let r = wide_sample_verify(&inst.algebra, &inst.chains[0], &inst.chains[1], 5, opts);
    assert!(r.passed(), "{:?}", r.failures());
    assert_eq!(r.checks.len(), 5);
}

#[test]
fn trivial_action_is_symmetric() {
    let inst = instance("nz-gentle");
    let g = quiverbench::skew::GroupAction::identity(inst.algebra.quiver());
    let r = nonsymmetric_verify(&inst.algebra, &inst.chains[0], &inst.chains[1], &g, VerifyOptions::default());
    assert!(!r.passed());
}

/// With T·U made only of the larger band, S·T·U sits directly above
/// S·U·T·U: every element extending the first lies below both.
#[test]
fn chain_ending_in_the_larger_band_twice_has_a_gap() {
    let inst = instance("sphere5-gentle");
    let q = inst.algebra.quiver();
    let (u, v) = (inst.u.inverse(q), inst.v.inverse(q));
    assert_eq!(compare_strings(&v, &u, OrderConvention::Quoted), Some(Ordering::Less));
    let spec = ChainSpec { u, v, s: SigmaWord::parse("V").unwrap(), t: SigmaWord::parse("U").unwrap(), depth: 3 };
    let chain = Chain { spec, convention: OrderConvention::Mirrored };
    let r = dense_chain_verify(&inst.algebra, &chain, VerifyOptions::default());
    let failed: Vec<&str> = r.failures().iter().map(|c| c.id.as_str()).collect();
    assert!(failed.contains(&"density"), "{failed:?}");
}

#[test]
fn pointed_string_modules_are_rational() {
    let alg = algebra("a1");
    let w = Word::parse(alg.quiver(), "al be^-1").unwrap();
    let m: PointedModule = pointed_string_module::<Rational>(&alg, &w).unwrap();
    assert_eq!(m.rep.total_dim(), 3);
}
