use super::*;
use crate::error::Error;

fn abu() -> ExtendedPoset {
    PosetBuilder::new(["a", "b", "u"]).less("a", "u").less("b", "u").build().unwrap()
}

fn id(p: &ExtendedPoset, s: &str) -> usize {
    p.id(s).unwrap()
}

#[test]
fn classify_examples() {
    let c = chain(3);
    assert_eq!(c.classify(0, 2).unwrap(), Relation::Lt);
    assert_eq!(c.classify(2, 0).unwrap(), Relation::Gt);
    for a in 0..3 {
        assert_eq!(c.classify(a, a).unwrap(), Relation::Eq);
    }
    let p = abu();
    assert_eq!(p.classify_labels("a", "b").unwrap(), Relation::SimU);
    assert!(matches!(p.classify(0, 7), Err(Error::UnknownElement(_))));
    assert!(matches!(p.classify_labels("a", "zz"), Err(Error::UnknownElement(_))));
}

#[test]
fn construction_rejects_bad_tables() {
    let labels = || vec!["a".to_string(), "b".to_string()];
    // swap inconsistency
    let bad = ExtendedPoset::new(labels(), |a, b| if a == b { Relation::Eq } else { Relation::Lt });
    assert!(matches!(bad, Err(Error::InvalidPoset(_))));
    // Eq off the diagonal
    assert!(ExtendedPoset::new(labels(), |_, _| Relation::Eq).is_err());
    // non-transitive <
    let l3: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let r = |a: usize, b: usize| match (a, b) {
        _ if a == b => Relation::Eq,
        (0, 1) | (1, 2) => Relation::Lt,
        (1, 0) | (2, 1) => Relation::Gt,
        _ => Relation::SimU,
    };
    assert!(ExtendedPoset::new(l3, r).is_err());
    // a and b share an upper bound but are tagged ~l
    let e = PosetBuilder::new(["a", "b", "u"]).less("a", "u").less("b", "u").sim_l("a", "b").build();
    assert!(matches!(e, Err(Error::InvalidPoset(_))));
    assert!(PosetBuilder::new(["a", "b", "u"]).less("a", "u").less("b", "u").sim_l("a", "b").build_formal().is_ok());
}

#[test]
fn strongly_connected_examples() {
    assert!(chain(3).check_strongly_connected().passed());
    assert!(abu().check_strongly_connected().passed());
    let anti = PosetBuilder::new(["a", "b"]).sim_l("a", "b").build().unwrap();
    let c = anti.check_strongly_connected();
    assert!(!c.passed());
    assert_eq!(c.violations, 1);
    assert!(c.witnesses[0].contains("(a, b)"));
}

#[test]
fn acyclic_examples() {
    assert!(chain(3).check_acyclic().passed());
    // x ~u y via u, x ~l z via l, y and z incomparable.
    let p = PosetBuilder::new(["x", "y", "z", "u", "l"])
        .less("x", "u")
        .less("y", "u")
        .less("l", "x")
        .less("l", "z")
        .sim_u("y", "z")
        .sim_l("y", "l")
        .sim_u("z", "u")
        .build_formal()
        .unwrap();
    assert_eq!(p.classify_labels("x", "y").unwrap(), Relation::SimU);
    assert_eq!(p.classify_labels("x", "z").unwrap(), Relation::SimL);
    let c = p.check_acyclic();
    assert!(!c.passed());
    assert!(c.witnesses[0].starts_with("(x, y, z)"), "{:?}", c.witnesses);
}

#[test]
fn lemma_propagation_examples() {
    assert!(chain(4).check_lemma_propagation().passed());
    let base = || PosetBuilder::new(["a", "b", "l", "z"]).less("l", "a").less("l", "b").less("b", "z");
    let good = base().build().unwrap();
    assert_eq!(good.classify_labels("a", "z").unwrap(), Relation::SimL);
    assert!(good.check_lemma_propagation().passed());
    let bad = base().sim_u("a", "z").build_formal().unwrap();
    assert!(!bad.check_lemma_propagation().passed());
}

#[test]
fn trivial_extension_examples() {
    assert!(!chain(3).is_trivial_extension());
    let anti = PosetBuilder::new(["a", "b", "c"]).sim_l("a", "b").sim_l("a", "c").sim_l("b", "c").build().unwrap();
    assert!(anti.is_trivial_extension());
    let mixed = PosetBuilder::new(["a", "b", "c"]).sim_u("a", "b").sim_l("a", "c").sim_l("b", "c").build().unwrap();
    assert!(!mixed.is_trivial_extension());
}

#[test]
fn betweenness_examples() {
    let c = chain(3);
    assert!(is_between(&c, 0, 1, 2).unwrap());
    assert!(is_between(&c, 2, 1, 0).unwrap());
    assert!(!is_between(&c, 0, 2, 1).unwrap());
    assert!(matches!(is_between(&c, 1, 0, 1), Err(Error::Domain(_))));

    let p = abu();
    assert!(!is_between(&p, id(&p, "a"), id(&p, "u"), id(&p, "b")).unwrap());

    // a < c, a ~u b, b ~l c: a < u > b, b > l < c, a < c.
    let q = PosetBuilder::new(["a", "b", "c", "u", "l"])
        .less("a", "c")
        .less("a", "u")
        .less("b", "u")
        .less("l", "b")
        .less("l", "c")
        .build()
        .unwrap();
    assert_eq!(q.classify_labels("a", "b").unwrap(), Relation::SimU);
    assert_eq!(q.classify_labels("b", "c").unwrap(), Relation::SimL);
    assert!(is_between(&q, id(&q, "a"), id(&q, "b"), id(&q, "c")).unwrap());
}

#[test]
fn between_set_examples() {
    let c = chain(4);
    let b = between_set(&c, 0, 3).unwrap();
    assert_eq!(b.members, vec![0, 1, 2, 3]);
    assert_eq!(b.class_count(), 1);
    let b = between_set(&c, 3, 0).unwrap();
    assert_eq!(b.members, vec![3, 2, 1, 0]);

    let p = abu();
    let b = between_set(&p, id(&p, "a"), id(&p, "b")).unwrap();
    assert_eq!(b.labels(&p), vec!["a", "b"]);
    assert_eq!(b.classes.len(), 2);
    assert!(between_set(&p, 0, 0).is_err());
}

#[test]
fn theorem_on_small_examples() {
    assert!(full_suite(&chain(4)).passed());
    assert!(full_suite(&abu()).passed());
}

#[test]
fn propagation_failure_is_visible_to_the_theorem_suite() {
    // A formal tagging that contradicts realized bounds; the suite reports
    // which checks fail rather than panicking.
    let bad = PosetBuilder::new(["a", "b", "l", "z"])
        .less("l", "a")
        .less("l", "b")
        .less("b", "z")
        .sim_u("a", "z")
        .build_formal()
        .unwrap();
    let r = full_suite(&bad);
    assert!(!r.passed());
    assert!(r.first_failure().is_some());
}
