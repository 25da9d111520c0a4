use super::*;
use crate::matrix::{scalar_equiv, EquivMode, Verdict};
use crate::phase::rat;
use crate::scalar::Scalar;
use crate::semantics::eval;
use proptest::prelude::*;

fn same(a: &Diagram, b: &Diagram) -> bool {
    let r = scalar_equiv(&eval(a).unwrap(), &eval(b).unwrap(), EquivMode::PositiveReal).unwrap();
    r.verdict == Verdict::EqualExact
}

#[test]
fn every_rule_is_sound_and_exact() {
    for report in verify_all(12, 7) {
        assert!(report.passed(), "{report:?}");
        assert!(report.exact, "{report:?}");
    }
}

#[test]
fn mutated_spider_fusion_is_caught() {
    let report = verify_instances("SZ-mutated", 10, 3, |rng| {
        let mut d = Diagram::new();
        let p = verify::random_phase(rng);
        let q = verify::random_phase(rng);
        let u = d.add_vertex(Generator::Z(p.clone()));
        let v = d.add_vertex(Generator::Z(q.clone()));
        d.connect(u, v);
        let i = d.add_input();
        d.connect(i, u);
        let o = d.add_output();
        d.connect(v, o);
        let mut wrong = Diagram::single(Generator::Z(&(&p + &q) + &Phase::t()), 1, 1);
        wrong.set_scalar(Scalar::one());
        vec![(d, wrong)]
    });
    assert!(!report.passed());
}

#[test]
fn stale_match_is_rejected() {
    let mut d = Diagram::new();
    let i = d.add_input();
    let a = d.add_vertex(Generator::Z(Phase::t()));
    let b = d.add_vertex(Generator::Z(Phase::s()));
    let o = d.add_output();
    d.connect(i, a);
    d.connect(a, b);
    d.connect(b, o);
    let m = find_matches(&d, RuleName::SZ).remove(0);
    let mut e = d.clone();
    e.set_generator(a, Generator::Z(Phase::zero()));
    assert!(matches!(apply(&e, &m), Err(Error::StaleMatch(_))));
    assert!(apply(&d, &m).is_ok());
}

#[test]
fn forward_match_must_exist() {
    let d = Diagram::single(Generator::Z(Phase::t()), 1, 1);
    let m = Match::forward(&d, RuleName::ID, 0, vec![2], Params::default());
    assert!(matches!(apply(&d, &m), Err(Error::NoMatch(_))));
}

#[test]
fn rule_names_roundtrip() {
    for r in RuleName::all() {
        assert_eq!(r.as_str().parse::<RuleName>().unwrap(), r);
    }
    let err = "XYZ".parse::<RuleName>().unwrap_err().to_string();
    assert!(err.contains("EU'"));
}

#[test]
fn euler_decomposition_scalar() {
    let d = {
        let mut d = Diagram::new();
        let i = d.add_input();
        let h = d.add_vertex(Generator::H);
        let o = d.add_output();
        d.connect(i, h);
        d.connect(h, o);
        d
    };
    let out = apply_at(&d, RuleName::EU, &[1]).unwrap();
    assert_eq!(out.scalar(), &Scalar::omega(rat(9, 4)));
    assert!(same(&d, &out));
}

#[test]
fn backward_steps_preserve_semantics() {
    let d = Diagram::single(Generator::Z(Phase::ratios((1, 3), (1, 5))), 1, 2);
    let u = 1;
    let steps = [
        Match::backward(&d, RuleName::SP, 0, vec![u], Params::default()),
        Match::backward(&d, RuleName::H, 0, vec![u], Params::default()),
        Match::backward(&d, RuleName::ID, 0, vec![0, u], Params::default()),
        Match::backward(&d, RuleName::IN, 1, vec![0, u], Params::default()),
        Match::backward(&d, RuleName::H2, 2, vec![u, 2], Params::default()),
        Match::backward(&d, RuleName::H4, 1, vec![u, 3], Params::default()),
        Match::backward(
            &d,
            RuleName::SZ,
            0,
            vec![u],
            Params { phase: Some(Phase::t()), legs: vec![2, 3], ..Params::default() },
        ),
    ];
    for m in steps {
        let out = apply(&d, &m).unwrap_or_else(|e| panic!("{:?}: {e}", m.rule));
        assert!(same(&d, &out), "{:?}", m.rule);
    }
}

#[test]
fn simplify_removes_redundancy() {
    let mut d = Diagram::new();
    let i = d.add_input();
    let h: Vec<_> = (0..4).map(|_| d.add_vertex(Generator::H)).collect();
    let z1 = d.add_vertex(Generator::Z(Phase::t()));
    let z2 = d.add_vertex(Generator::Z(Phase::tdg()));
    let id = d.add_vertex(Generator::Z(Phase::zero()));
    let o = d.add_output();
    d.connect(i, h[0]);
    d.connect(h[0], h[1]);
    d.connect(h[1], h[2]);
    d.connect(h[2], h[3]);
    d.connect(h[3], z1);
    d.connect(z1, z2);
    d.connect(z2, id);
    d.connect(id, o);
    let (s, trace) = simplify_traced(&d);
    assert!(!trace.is_empty());
    assert_eq!(s.interior_count(), 0);
    assert!(same(&d, &s));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fusion_adds_phases(a in -12i64..12, b in -12i64..12, c in -12i64..12, e in -12i64..12) {
        let p = Phase::ratios((a, 6), (b, 6));
        let q = Phase::ratios((c, 4), (e, 4));
        let mut d = Diagram::new();
        let i = d.add_input();
        let u = d.add_vertex(Generator::Z(p.clone()));
        let v = d.add_vertex(Generator::Z(q.clone()));
        let o = d.add_output();
        d.connect(i, u);
        d.connect(u, v);
        d.connect(v, o);
        let out = apply_at(&d, RuleName::SZ, &[u, v]).unwrap();
        prop_assert_eq!(out.generator(u), Some(&Generator::Z(&p + &q)));
        prop_assert!(same(&d, &out));
    }

    #[test]
    fn simplify_preserves_semantics(seed in 0u64..500) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut d = Diagram::new();
        let i = d.add_input();
        let mut prev = i;
        for _ in 0..rng.gen_range(1..7) {
            let g = match rng.gen_range(0..4) {
                0 => Generator::H,
                1 => Generator::X(Phase::zero()),
                2 => Generator::Z(verify::random_phase(&mut rng)),
                _ => Generator::Z(Phase::zero()),
            };
            let v = d.add_vertex(g);
            d.connect(prev, v);
            prev = v;
        }
        let o = d.add_output();
        d.connect(prev, o);
        let s = simplify(&d);
        prop_assert!(s.num_vertices() <= d.num_vertices());
        prop_assert!(same(&d, &s));
    }
}
