use std::cmp::Ordering;
use std::sync::OnceLock;

use proptest::prelude::*;

use quiverbench::lattice::{equiv, le, sup_inf};
use quiverbench::registry::Registry;
use quiverbench::rep::{band_module, pointed_pushout_general, pointed_string_module, string_module};
use quiverbench::words::{compare_strings, Letter, OrderConvention, StringAlgebra, Word};
use quiverbench::{PointedModule, Rational};

struct Fixture {
    alg: StringAlgebra,
    strings: Vec<Word>,
}

fn fixture(name: &str, max_len: usize) -> Fixture {
    let p = Registry::builtin().get(name).unwrap().presentation().unwrap();
    let alg = StringAlgebra::new(&p).unwrap();
    let strings = alg.strings(max_len);
    Fixture { alg, strings }
}

fn a1() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture("a1", 6))
}

fn sphere() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| fixture("sphere5-gentle", 5))
}

/// S < T read straight off the three defining cases: T continues S by an
/// inverse letter, S continues T by a direct letter, or after a common
/// prefix S turns direct while T turns inverse.
fn defined_lt(s: &[Letter], t: &[Letter]) -> bool {
    let continues = |long: &[Letter], short: &[Letter], direct: bool| {
        long.len() > short.len() && long.starts_with(short) && long[short.len()].is_direct() == direct
    };
    if continues(t, s, false) || continues(s, t, true) {
        return true;
    }
    (0..s.len().min(t.len())).any(|k| s[..k] == t[..k] && s[k].is_direct() && !t[k].is_direct())
}

fn string_pair(f: &'static Fixture) -> impl Strategy<Value = (&'static Word, &'static Word)> {
    let n = f.strings.len();
    (0..n, 0..n).prop_map(move |(i, j)| (&f.strings[i], &f.strings[j]))
}

fn pointed(f: &'static Fixture, i: usize) -> PointedModule {
    pointed_string_module(&f.alg, &f.strings[i]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn order_agrees_with_its_definition((s, t) in string_pair(a1())) {
        prop_assume!(s.start == t.start);
        let got = compare_strings(s, t, OrderConvention::Quoted);
        let lt = defined_lt(&s.letters, &t.letters);
        let gt = defined_lt(&t.letters, &s.letters);
        prop_assert!(!(lt && gt));
        match got {
            Some(Ordering::Less) => prop_assert!(lt),
            Some(Ordering::Greater) => prop_assert!(gt),
            Some(Ordering::Equal) => prop_assert_eq!(s, t),
            None => prop_assert!(!lt && !gt && s != t),
        }
        prop_assert_eq!(got.map(Ordering::reverse), compare_strings(s, t, OrderConvention::Mirrored));
    }

    #[test]
    fn constructors_satisfy_relations(i in 0usize..400, j in 0usize..400) {
        let f = sphere();
        let p = &f.alg;
        let (s, t) = (&f.strings[i % f.strings.len()], &f.strings[j % f.strings.len()]);
        let m = string_module::<Rational>(p, s).unwrap();
        let pres = &p.presentation;
        prop_assert_eq!(m.rep.relation_residue(pres), None);
        let ms = pointed_string_module::<Rational>(p, s).unwrap();
        let mt = pointed_string_module::<Rational>(p, t).unwrap();
        let (sum, push) = sup_inf(p.quiver(), &ms, &mt);
        prop_assert_eq!(sum.rep.relation_residue(pres), None);
        prop_assert_eq!(push.rep.relation_residue(pres), None);
        if p.is_band(s) {
            let b = band_module(p, s, Rational::from_integer(3.into())).unwrap();
            prop_assert_eq!(b.relation_residue(pres), None);
        }
    }

    #[test]
    fn le_is_a_preorder(i in 0usize..200, j in 0usize..200, k in 0usize..200) {
        let f = a1();
        let q = f.alg.quiver();
        let n = f.strings.len();
        let (a, b, c) = (pointed(f, i % n), pointed(f, j % n), pointed(f, k % n));
        prop_assert!(le(q, &a, &a));
        if le(q, &a, &b) && le(q, &b, &c) {
            prop_assert!(le(q, &a, &c));
        }
    }

    #[test]
    fn sup_and_inf_are_symmetric_and_bound(i in 0usize..200, j in 0usize..200) {
        let f = a1();
        let q = f.alg.quiver();
        let n = f.strings.len();
        let (a, b) = (pointed(f, i % n), pointed(f, j % n));
        let (s1, i1) = sup_inf(q, &a, &b);
        let (s2, i2) = sup_inf(q, &b, &a);
        prop_assert!(equiv(q, &s1, &s2));
        prop_assert!(equiv(q, &i1, &i2));
        prop_assert!(le(q, &i1, &a) && le(q, &i1, &b));
        prop_assert!(le(q, &a, &s1) && le(q, &b, &s1));
        prop_assert!(equiv(q, &pointed_pushout_general(q, &a, &a), &a));
    }
}
