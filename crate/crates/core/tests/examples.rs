//! Worked examples: the circle and the collapsed two-point diagram.

use gpdcolim::colimit::{colimit_presentation, pushout_decomposition_colim};
use gpdcolim::comparison::{comparison_delta, equivalence_report, injectivize_diagram_b2, truncation_check, Verdict};
use gpdcolim::corpus::{constant, corpus_b4, finite_targets, s0_collapse, s1, small_corpus, Block};
use gpdcolim::diagram::{load, save};
use gpdcolim::groupoid::{compose_functors, enumerate_functors, groupoid_invariants, word_equal, FiniteGroupoid, WordVerdict};
use gpdcolim::poset::{PosetView, Subset};
use gpdcolim::set_colimit::{check_maincor, check_theorem_main, condition_avu, set_colimit};
use gpdcolim::two_colimit::{descent_category, pushout_decomposition_2colim, two_colimit_presentation, DescentShape};

const FUEL: u64 = 1_000_000;

#[test]
fn circle_colimit_has_one_loop() {
    let d = s1();
    let c = colimit_presentation(&d, d.view(), true).unwrap();
    assert_eq!(c.groupoid.objects.len(), 2);
    let inv = groupoid_invariants(&c.groupoid).unwrap();
    assert_eq!(inv.component_count, 1);
    assert_eq!(inv.components[0].abelianization.free_rank, 1);
    assert!(inv.components[0].abelianization.torsion.is_empty());
}

#[test]
fn circle_two_colimit_shape() {
    let d = s1();
    let tc = two_colimit_presentation(&d, d.view()).unwrap();
    assert_eq!(tc.groupoid.objects.len(), 6);
    assert_eq!(tc.groupoid.generators.len(), 6);
    assert!(tc.groupoid.relations.is_empty());
    assert_eq!(tc.lambda.len(), 4);
    let inv = groupoid_invariants(&tc.groupoid).unwrap();
    assert_eq!(inv.components[0].abelianization.free_rank, 1);
}

#[test]
fn collapse_loses_the_loop() {
    let d = s0_collapse();
    let sc = set_colimit(&d, d.view()).unwrap();
    assert_eq!(sc.class_count, 1);
    let tc = two_colimit_presentation(&d, d.view()).unwrap();
    assert_eq!(tc.groupoid.objects.len(), 4);
    assert_eq!(tc.lambda.len(), 4);
    let report = equivalence_report(&d, FUEL, true).unwrap();
    assert!(!report.conditions.holds);
    match report.verdict {
        Verdict::Distinguished { .. } => {}
        v => panic!("expected a distinguishing invariant, got {v:?}"),
    }
}

#[test]
fn collapse_condition_witness_names_both_objects() {
    let d = s0_collapse();
    let r = condition_avu(&d, &Subset::new(2, &[1]).unwrap(), &Subset::empty(2)).unwrap();
    assert!(!r.holds);
    let w = r.witness.unwrap();
    assert_ne!(w.first, w.second);
}

#[test]
fn reduced_battery_is_smaller() {
    let d = s1();
    assert_eq!(check_maincor(&d).unwrap().reports.len(), 1);
    for e in small_corpus().into_iter().chain(corpus_b4()) {
        let full = check_theorem_main(&e.diagram).unwrap();
        let reduced = check_maincor(&e.diagram).unwrap();
        assert!(reduced.reports.len() <= full.reports.len(), "{}", e.name);
        if full.holds {
            assert!(reduced.holds, "{}", e.name);
        }
    }
}

#[test]
fn batteries_need_a_full_view() {
    let d = s1();
    let view = PosetView::rel(Subset::new(2, &[1]).unwrap(), Subset::empty(2)).unwrap();
    let restricted = gpdcolim::diagram::restrict(&d, &view).unwrap();
    assert!(check_theorem_main(&restricted).is_err());
}

#[test]
fn guaranteed_verdicts_have_agreeing_invariants() {
    for e in small_corpus() {
        let r = equivalence_report(&e.diagram, FUEL, true).unwrap();
        if let Verdict::GuaranteedEquivalent { .. } = r.verdict {
            let (a, b) = (r.colim_invariants.unwrap(), r.twocolim_invariants.unwrap());
            assert!(a.agrees_with(&b), "{}", e.name);
        }
    }
}

#[test]
fn cones_match_functors_out_of_the_colimit() {
    let targets = finite_targets();
    for e in small_corpus().iter().filter(|e| e.diagram.ground_n() == 2) {
        let c = colimit_presentation(&e.diagram, e.diagram.view(), true).unwrap();
        let shape = DescentShape::new(&e.diagram).unwrap();
        for (name, h) in targets.iter().take(3) {
            let homs = enumerate_functors(&c.groupoid, h, FUEL).unwrap().len();
            let cones = shape.enumerate_cones(h, FUEL).unwrap().len();
            assert_eq!(homs, cones, "{} into {name}", e.name);
        }
    }
}

#[test]
fn descent_data_on_the_circle() {
    // Functors from the circle groupoid into ℤ/2 up to isomorphism: one per
    // element of ℤ/2.
    let d = s1();
    let h = FiniteGroupoid::cyclic_point(2).unwrap();
    let dc = descent_category(&d, &h, FUEL).unwrap();
    assert_eq!(dc.stats.iso_classes, 2);
    let dc = descent_category(&s0_collapse(), &h, FUEL).unwrap();
    assert_eq!(dc.stats.iso_classes, 2);
}

#[test]
fn pushout_decompositions_agree() {
    for e in small_corpus() {
        assert!(pushout_decomposition_colim(&e.diagram).unwrap().invariants_agree, "{}", e.name);
        assert!(pushout_decomposition_2colim(&e.diagram).unwrap().invariants_agree, "{}", e.name);
    }
}

#[test]
fn injectivized_collapse_is_guaranteed() {
    let d = injectivize_diagram_b2(&s0_collapse()).unwrap();
    assert!(check_theorem_main(&d).unwrap().holds);
    let before = groupoid_invariants(&two_colimit_presentation(&s0_collapse(), s0_collapse().view()).unwrap().groupoid).unwrap();
    let after = groupoid_invariants(&two_colimit_presentation(&d, d.view()).unwrap().groupoid).unwrap();
    assert!(before.agrees_with(&after));
}

#[test]
fn truncation_on_constant_diagrams() {
    let targets = finite_targets();
    for block in [Block::point(&[0]), Block::z2(&[0])] {
        let d = constant(4, block).unwrap();
        let r = truncation_check(&d, &targets[..2], FUEL).unwrap();
        assert_eq!((r.n, r.k), (4, 1));
        assert!(r.holds);
    }
}

#[test]
fn json_round_trip_preserves_invariants() {
    for e in small_corpus() {
        let back = load(&save(&e.diagram)).unwrap().verified(FUEL).unwrap();
        let a = groupoid_invariants(&two_colimit_presentation(&e.diagram, e.diagram.view()).unwrap().groupoid).unwrap();
        let b = groupoid_invariants(&two_colimit_presentation(&back, back.view()).unwrap().groupoid).unwrap();
        assert_eq!(a, b, "{}", e.name);
    }
}

#[test]
fn comparison_functor_properties() {
    for e in small_corpus().into_iter().chain(corpus_b4()) {
        let d = &e.diagram;
        let delta = comparison_delta(d, d.view(), FUEL).unwrap();
        assert!(delta.warnings.is_empty(), "{}: {:?}", e.name, delta.warnings);
        let f = &delta.functor;
        let mut hit = vec![false; f.codomain.objects.len()];
        for &o in &f.object_map {
            hit[o] = true;
        }
        assert!(hit.iter().all(|&h| h), "{}: object map not surjective", e.name);
        for &id in delta.two_colimit.lambda.values() {
            assert!(f.generator_map[id].is_identity(), "{}", e.name);
        }
        for (s, l) in &delta.two_colimit.insertions {
            let composite = compose_functors(l, f).unwrap();
            let insertion = &delta.colimit.insertions[s];
            assert_eq!(composite.object_map, insertion.object_map, "{} at {s}", e.name);
            for (a, b) in composite.generator_map.iter().zip(&insertion.generator_map) {
                let v = word_equal(&f.codomain, a, b, FUEL).unwrap();
                assert!(matches!(v, WordVerdict::Equal), "{} at {s}", e.name);
            }
        }
    }
}

#[test]
fn circle_comparison_sends_lambdas_to_identities() {
    let d = s1();
    let delta = comparison_delta(&d, d.view(), FUEL).unwrap();
    let lifted: Vec<_> = delta.two_colimit.lifted.values().map(|&id| &delta.functor.generator_map[id]).collect();
    assert_eq!(lifted.len(), 2);
    assert!(lifted.iter().all(|w| w.letters.len() == 1));
    assert_eq!(delta.two_colimit.lambda.len(), 4);
}

#[test]
fn injectivize_is_idempotent_on_invariants() {
    for e in small_corpus().iter().filter(|e| e.diagram.ground_n() == 2) {
        let once = injectivize_diagram_b2(&e.diagram).unwrap();
        let twice = injectivize_diagram_b2(&once).unwrap();
        let a = groupoid_invariants(&colimit_presentation(&once, once.view(), true).unwrap().groupoid).unwrap();
        let b = groupoid_invariants(&colimit_presentation(&twice, twice.view(), true).unwrap().groupoid).unwrap();
        assert!(a.agrees_with(&b), "{}", e.name);
    }
}

#[test]
fn injectivize_refuses_larger_posets() {
    assert!(injectivize_diagram_b2(&constant(3, Block::point(&[0])).unwrap()).is_err());
}
