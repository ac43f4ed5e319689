//! Randomized invariants over generated strict diagrams on `Full(2)`.

use proptest::prelude::*;

use gpdcolim::colimit::colimit_presentation;
use gpdcolim::comparison::{equivalence_report, injectivize_diagram_b2, Verdict};
use gpdcolim::corpus::{Block, LoopKind, Model};
use gpdcolim::diagram::{load, save, Diagram};
use gpdcolim::groupoid::{
    enumerate_functors, functor_groupoid_stats, groupoid_invariants, smith_normal_form, FiniteGroupoid,
};
use gpdcolim::set_colimit::{check_theorem_main, set_colimit};
use gpdcolim::two_colimit::{descent_category, two_colimit_presentation, DescentShape};

const FUEL: u64 = 1_000_000;

/// Groups `points` into objects by `labels`, then objects into blocks by
/// `block_labels`, each block a path with the given loop kind.
fn blocks(points: usize, labels: &[usize], block_labels: &[usize], kinds: &[LoopKind]) -> Vec<Block> {
    let mut objects: Vec<Vec<usize>> = Vec::new();
    let mut object_label = Vec::new();
    for (p, &label) in labels.iter().enumerate().take(points) {
        match object_label.iter().position(|&l| l == label) {
            Some(i) => objects[i].push(p),
            None => {
                object_label.push(label);
                objects.push(vec![p]);
            }
        }
    }
    let mut out: Vec<Block> = Vec::new();
    let mut block_label = Vec::new();
    for (i, o) in objects.into_iter().enumerate() {
        let l = block_labels[i];
        match block_label.iter().position(|&b| b == l) {
            Some(j) => out[j].objects.push(o),
            None => {
                block_label.push(l);
                out.push(Block { objects: vec![o], kind: kinds[l] });
            }
        }
    }
    out
}

fn kind() -> impl Strategy<Value = LoopKind> {
    prop_oneof![Just(LoopKind::None), Just(LoopKind::Order2), Just(LoopKind::Integers)]
}

/// Bottom: one object per point, no loops. Each side merges points into
/// objects and objects into blocks at random.
fn diagram_b2() -> impl Strategy<Value = Diagram> {
    (1usize..=3).prop_flat_map(|points| {
        let side = || {
            (
                prop::collection::vec(0..points, points),
                prop::collection::vec(0..points, points),
                prop::collection::vec(kind(), points),
            )
        };
        (Just(points), side(), side()).prop_map(|(points, (l1, b1, k1), (l2, b2, k2))| {
            let bottom: Vec<Block> = (0..points).map(|p| Block::point(&[p])).collect();
            Model::new(2)
                .set(&[], bottom)
                .set(&[1], blocks(points, &l1, &b1, &k1))
                .set(&[2], blocks(points, &l2, &b2, &k2))
                .build()
                .expect("generated models are strict")
        })
    })
}

fn targets() -> Vec<FiniteGroupoid> {
    vec![FiniteGroupoid::point(), FiniteGroupoid::cyclic_point(2).unwrap(), FiniteGroupoid::discrete(2)]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn cleanup_preserves_colimit(d in diagram_b2()) {
        let raw = colimit_presentation(&d, d.view(), false).unwrap();
        let clean = colimit_presentation(&d, d.view(), true).unwrap();
        prop_assert_eq!(raw.groupoid.objects.len(), set_colimit(&d, d.view()).unwrap().class_count);
        prop_assert!(groupoid_invariants(&raw.groupoid).unwrap().agrees_with(&groupoid_invariants(&clean.groupoid).unwrap()));
    }

    #[test]
    fn cones_count_colimit_functors(d in diagram_b2()) {
        let c = colimit_presentation(&d, d.view(), true).unwrap();
        let shape = DescentShape::new(&d).unwrap();
        for h in targets() {
            let homs = enumerate_functors(&c.groupoid, &h, FUEL).unwrap().len();
            prop_assert_eq!(homs, shape.enumerate_cones(&h, FUEL).unwrap().len());
        }
    }

    #[test]
    fn descent_matches_two_colimit_functors(d in diagram_b2()) {
        let tc = two_colimit_presentation(&d, d.view()).unwrap();
        for h in targets() {
            let functors = enumerate_functors(&tc.groupoid, &h, FUEL).unwrap();
            let stats = functor_groupoid_stats(&tc.groupoid, &h, &functors);
            prop_assert_eq!(stats, descent_category(&d, &h, FUEL).unwrap().stats);
        }
    }

    #[test]
    fn guaranteed_implies_agreement(d in diagram_b2()) {
        let r = equivalence_report(&d, FUEL, true).unwrap();
        prop_assert_eq!(r.conditions.holds, matches!(r.verdict, Verdict::GuaranteedEquivalent { .. }));
        if r.conditions.holds {
            prop_assert!(r.colim_invariants.unwrap().agrees_with(&r.twocolim_invariants.unwrap()));
        }
    }

    #[test]
    fn injectivize_keeps_two_colimit(d in diagram_b2()) {
        let inj = injectivize_diagram_b2(&d).unwrap();
        prop_assert!(check_theorem_main(&inj).unwrap().holds);
        let a = groupoid_invariants(&two_colimit_presentation(&d, d.view()).unwrap().groupoid).unwrap();
        let b = groupoid_invariants(&two_colimit_presentation(&inj, inj.view()).unwrap().groupoid).unwrap();
        prop_assert!(a.agrees_with(&b));
        let c = groupoid_invariants(&colimit_presentation(&inj, inj.view(), true).unwrap().groupoid).unwrap();
        prop_assert!(b.agrees_with(&c));
    }

    #[test]
    fn json_round_trip(d in diagram_b2()) {
        let text = save(&d);
        let back = load(&text).unwrap();
        prop_assert_eq!(save(&back), text);
    }

    #[test]
    fn smith_form_divisibility(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-6i64..=6, 16)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
        let snf = smith_normal_form(&m, cols).unwrap();
        let f: Vec<i64> = snf.diagonal.iter().copied().filter(|&x| x != 0).collect();
        prop_assert!(f.iter().all(|&x| x > 0));
        for w in f.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        // left · m · right is the diagonal matrix
        let lm: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| (0..rows).map(|k| snf.left[i][k] * m[k][j]).sum()).collect()).collect();
        for (i, row) in lm.iter().enumerate() {
            for j in 0..cols {
                let v: i64 = (0..cols).map(|k| row[k] * snf.right[k][j]).sum();
                let expect = if i == j { snf.diagonal.get(i).copied().unwrap_or(0) } else { 0 };
                prop_assert_eq!(v, expect);
            }
        }
    }
}
