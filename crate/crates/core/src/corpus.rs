//! Built-in example diagrams, a test corpus of strict diagrams, and small
//! finite target groupoids.
//!
//! Corpus diagrams come from [`Model`]s: each `Φ(S)` is a set of base points
//! partitioned into objects, objects grouped into connected blocks (a path
//! of edges), and each block optionally carrying a loop with vertex group
//! `ℤ` or `ℤ/2`. Points, object identifications, block identifications and
//! loop kinds only grow along inclusions, and functors send an edge to the
//! reduced tree path between the images of its ends and a loop to the
//! target loop conjugated into place. Reduced tree paths are unique, so
//! every such diagram is strict on the nose.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::diagram::{format::load, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::{
    FiniteGroup, FiniteGroupoid, FunctorPresentation, GroupoidPresentation, Letter, ObjId, Word,
};
use crate::poset::{PosetView, Subset};

pub const S1_JSON: &str = r#"{
  "ground_n": 2,
  "view": "full",
  "groupoids": {
    "{}": {"objects": ["c", "d"]},
    "{1}": {"objects": ["a1", "b1"], "generators": [{"id": "e1", "src": "a1", "dst": "b1"}]},
    "{2}": {"objects": ["a2", "b2"], "generators": [{"id": "e2", "src": "a2", "dst": "b2"}]}
  },
  "functors": {
    "{}<{1}": {"objects": {"c": "a1", "d": "b1"}},
    "{}<{2}": {"objects": {"c": "a2", "d": "b2"}}
  }
}
"#;

pub const S0_COLLAPSE_JSON: &str = r#"{
  "ground_n": 2,
  "view": "full",
  "groupoids": {
    "{}": {"objects": ["c", "d"]},
    "{1}": {"objects": ["*"]},
    "{2}": {"objects": ["*"]}
  },
  "functors": {
    "{}<{1}": {"objects": {"c": "*", "d": "*"}},
    "{}<{2}": {"objects": {"c": "*", "d": "*"}}
  }
}
"#;

/// Names of the shipped examples.
pub const BUILTIN_NAMES: [&str; 2] = ["s1", "s0-collapse"];

/// Source text of a shipped example.
pub fn builtin_text(name: &str) -> Option<&'static str> {
    match name {
        "s1" => Some(S1_JSON),
        "s0-collapse" => Some(S0_COLLAPSE_JSON),
        _ => None,
    }
}

/// A shipped example, verified strict.
pub fn builtin(name: &str) -> Result<Diagram> {
    let text = builtin_text(name).ok_or_else(|| Error::Precondition(format!("unknown example `{name}`")))?;
    load(text)?.verified(10_000)
}

/// The circle: two points glued by two intervals.
pub fn s1() -> Diagram {
    builtin("s1").expect("shipped example is valid")
}

/// Two points, each collapsed twice.
pub fn s0_collapse() -> Diagram {
    builtin("s0-collapse").expect("shipped example is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LoopKind {
    None,
    Integers,
    Order2,
}

/// A connected block: objects (each a set of base points) joined by a path
/// of edges, with an optional loop at the first object.
#[derive(Clone, Debug)]
pub struct Block {
    pub objects: Vec<Vec<usize>>,
    pub kind: LoopKind,
}

impl Block {
    pub fn new(objects: &[&[usize]], kind: LoopKind) -> Self {
        Block { objects: objects.iter().map(|o| o.to_vec()).collect(), kind }
    }

    /// One object made of the given points.
    pub fn point(points: &[usize]) -> Self {
        Block::new(&[points], LoopKind::None)
    }

    pub fn z2(points: &[usize]) -> Self {
        Block::new(&[points], LoopKind::Order2)
    }
}

/// A diagram over `Full(n)` given levelwise by blocks.
#[derive(Clone, Debug)]
pub struct Model {
    pub n: u8,
    pub levels: BTreeMap<Subset, Vec<Block>>,
}

struct Level {
    blocks: Vec<Block>,
    /// Object of each point, with its block and position in the block.
    place: BTreeMap<usize, (ObjId, usize, usize)>,
    /// First object id of each block.
    block_start: Vec<ObjId>,
    /// Generator id of the edge into position `i ≥ 1`, and of the loop.
    edge: Vec<Vec<usize>>,
    loop_gen: Vec<Option<usize>>,
    groupoid: Arc<GroupoidPresentation>,
}

fn point_name(p: usize) -> String {
    if p < 26 {
        ((b'a' + p as u8) as char).to_string()
    } else {
        format!("p{p}")
    }
}

impl Level {
    fn build(blocks: Vec<Block>) -> Result<Level> {
        let mut g = GroupoidPresentation::new();
        let mut place = BTreeMap::new();
        let mut block_start = Vec::new();
        let mut edge = Vec::new();
        let mut loop_gen = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            if block.objects.is_empty() {
                return Err(Error::Precondition("empty block".into()));
            }
            block_start.push(g.objects.len());
            for (i, obj) in block.objects.iter().enumerate() {
                if obj.is_empty() {
                    return Err(Error::Precondition("object without points".into()));
                }
                let name: String = obj.iter().map(|&p| point_name(p)).collect();
                let id = g.add_object(name);
                for &p in obj {
                    if place.insert(p, (id, b, i)).is_some() {
                        return Err(Error::Precondition(format!("point {} used twice", point_name(p))));
                    }
                }
            }
            let start = block_start[b];
            let mut edges = vec![usize::MAX];
            for i in 1..block.objects.len() {
                let name = format!("e{}", g.objects[start + i]);
                edges.push(g.add_generator(name, start + i - 1, start + i));
            }
            edge.push(edges);
            let lp = match block.kind {
                LoopKind::None => None,
                kind => {
                    let id = g.add_generator(format!("x{}", g.objects[start]), start, start);
                    if kind == LoopKind::Order2 {
                        g.add_relation(Word::new(start, vec![Letter::fwd(id), Letter::fwd(id)]), Word::identity(start))?;
                    }
                    Some(id)
                }
            };
            loop_gen.push(lp);
        }
        Ok(Level { blocks, place, block_start, edge, loop_gen, groupoid: Arc::new(g) })
    }

    /// The reduced tree path between positions `a` and `b` of block `k`.
    fn path(&self, k: usize, a: usize, b: usize) -> Vec<Letter> {
        if a <= b {
            (a + 1..=b).map(|i| Letter::fwd(self.edge[k][i])).collect()
        } else {
            (b + 1..=a).rev().map(|i| Letter::inv(self.edge[k][i])).collect()
        }
    }

    fn position(&self, obj: ObjId) -> (usize, usize) {
        let b = self.block_start.partition_point(|&s| s <= obj) - 1;
        (b, obj - self.block_start[b])
    }
}

impl Model {
    pub fn new(n: u8) -> Self {
        Model { n, levels: BTreeMap::new() }
    }

    /// Sets `Φ(S)` for `S` given by its members.
    pub fn set(mut self, members: &[u8], blocks: Vec<Block>) -> Self {
        let s = Subset::new(self.n, members).expect("members in the ground set");
        self.levels.insert(s, blocks);
        self
    }

    /// Sets `Φ(S)` for every `S` of the given cardinality not yet set.
    pub fn level(mut self, card: usize, blocks: Vec<Block>) -> Self {
        for s in PosetView::full(self.n).expect("n ≥ 1").enumerate() {
            if s.len() == card {
                self.levels.entry(s).or_insert_with(|| blocks.clone());
            }
        }
        self
    }

    /// Builds and verifies the diagram.
    pub fn build(&self) -> Result<Diagram> {
        let view = PosetView::full(self.n)?;
        let mut levels = BTreeMap::new();
        for s in view.enumerate() {
            let blocks = self.levels.get(&s).cloned().ok_or_else(|| Error::Precondition(format!("no level at {s}")))?;
            levels.insert(s, Level::build(blocks)?);
        }
        let mut functors = BTreeMap::new();
        for c in view.covers() {
            let (lo, up) = (&levels[&c.lower], &levels[&c.upper]);
            let mut object_map = Vec::new();
            for obj in 0..lo.groupoid.objects.len() {
                let (b, i) = lo.position(obj);
                let images: BTreeSet<ObjId> = lo.blocks[b].objects[i]
                    .iter()
                    .map(|p| up.place.get(p).map(|t| t.0))
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::Precondition(format!("a point of {} is missing at {}", c.lower, c.upper)))?;
                if images.len() != 1 {
                    return Err(Error::Precondition(format!("an object of {} splits at {}", c.lower, c.upper)));
                }
                object_map.push(*images.iter().next().expect("one image"));
            }
            let mut generator_map = vec![Word::identity(0); lo.groupoid.generators.len()];
            for (b, block) in lo.blocks.iter().enumerate() {
                let start = lo.block_start[b];
                let (tb, _) = up.position(object_map[start]);
                for i in 0..block.objects.len() {
                    if up.position(object_map[start + i]).0 != tb {
                        return Err(Error::Precondition(format!("a block of {} splits at {}", c.lower, c.upper)));
                    }
                }
                for i in 1..block.objects.len() {
                    let (_, a) = up.position(object_map[start + i - 1]);
                    let (_, z) = up.position(object_map[start + i]);
                    generator_map[lo.edge[b][i]] = Word::new(object_map[start + i - 1], up.path(tb, a, z));
                }
                if let Some(x) = lo.loop_gen[b] {
                    if up.blocks[tb].kind < block.kind {
                        return Err(Error::Precondition(format!("loop kind drops from {} to {}", c.lower, c.upper)));
                    }
                    let (_, a) = up.position(object_map[start]);
                    let mut letters = up.path(tb, a, 0);
                    letters.push(Letter::fwd(up.loop_gen[tb].expect("kind checked")));
                    letters.extend(up.path(tb, 0, a));
                    generator_map[x] = Word::new(object_map[start], letters);
                }
            }
            functors.insert(c, FunctorPresentation::new(lo.groupoid.clone(), up.groupoid.clone(), object_map, generator_map));
        }
        let groupoids = levels.iter().map(|(s, l)| (*s, l.groupoid.clone())).collect();
        Diagram::new(view, groupoids, functors)?.verified(100_000)
    }
}

/// The constant diagram on `Full(n)` at one groupoid, all functors identities.
pub fn constant(n: u8, block: Block) -> Result<Diagram> {
    let mut m = Model::new(n);
    for k in 0..n as usize {
        m = m.level(k, vec![block.clone()]);
    }
    m.build()
}

/// A corpus entry.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: Diagram,
}

fn entry(name: &str, d: Result<Diagram>) -> CorpusEntry {
    CorpusEntry { name: name.to_string(), diagram: d.unwrap_or_else(|e| panic!("corpus diagram {name}: {e}")) }
}

use Block as B;
use LoopKind as K;

/// Strict diagrams over `Full(2)` and `Full(3)` with at most three objects
/// per groupoid and vertex groups trivial or `ℤ/2`.
pub fn small_corpus() -> Vec<CorpusEntry> {
    let two = |lo: Vec<Block>, one: Vec<Block>, two: Vec<Block>| Model::new(2).set(&[], lo).set(&[1], one).set(&[2], two).build();
    let p = B::point;
    vec![
        CorpusEntry { name: "s1".into(), diagram: s1() },
        CorpusEntry { name: "s0-collapse".into(), diagram: s0_collapse() },
        entry("b2-point", constant(2, p(&[0]))),
        entry("b2-z2", constant(2, B::z2(&[0]))),
        entry("b2-z2-one-side", two(vec![p(&[0])], vec![B::z2(&[0])], vec![p(&[0])])),
        entry("b2-z2-both-sides", two(vec![p(&[0])], vec![B::z2(&[0])], vec![B::z2(&[0])])),
        entry("b2-interval-and-merge", two(vec![p(&[0]), p(&[1])], vec![B::new(&[&[0], &[1]], K::None)], vec![p(&[0, 1])])),
        entry(
            "b2-z2-interval",
            two(vec![p(&[0]), p(&[1])], vec![B::new(&[&[0], &[1]], K::Order2)], vec![B::new(&[&[0], &[1]], K::None)]),
        ),
        entry("b2-discrete-and-merge", two(vec![p(&[0]), p(&[1])], vec![p(&[0]), p(&[1])], vec![p(&[0, 1])])),
        entry(
            "b2-three-points",
            two(
                vec![p(&[0]), p(&[1]), p(&[2])],
                vec![B::new(&[&[0], &[1]], K::None), p(&[2])],
                vec![p(&[0]), B::new(&[&[1], &[2]], K::None)],
            ),
        ),
        entry("b2-empty-bottom", two(vec![], vec![p(&[0])], vec![p(&[1])])),
        entry("b2-extra-point", two(vec![p(&[0])], vec![B::z2(&[0])], vec![p(&[0]), p(&[1])])),
        entry("b2-merged-z2", two(vec![p(&[0]), p(&[1])], vec![B::z2(&[0, 1])], vec![p(&[0, 1])])),
        entry(
            "b2-three-chain",
            two(vec![p(&[0]), p(&[1]), p(&[2])], vec![B::new(&[&[0], &[1], &[2]], K::None)], vec![p(&[0, 1, 2])]),
        ),
        entry("b3-point", constant(3, p(&[0]))),
        entry("b3-z2", constant(3, B::z2(&[0]))),
        entry(
            "b3-circle-interval",
            Model::new(3)
                .set(&[], vec![p(&[0]), p(&[1])])
                .set(&[1], vec![B::new(&[&[0], &[1]], K::None)])
                .level(1, vec![p(&[0, 1])])
                .level(2, vec![p(&[0, 1])])
                .build(),
        ),
        entry(
            "b3-s0-collapse",
            Model::new(3).set(&[], vec![p(&[0]), p(&[1])]).level(1, vec![p(&[0, 1])]).level(2, vec![p(&[0, 1])]).build(),
        ),
        entry("b3-empty-bottom", Model::new(3).set(&[], vec![]).level(1, vec![p(&[0])]).level(2, vec![p(&[0])]).build()),
        entry(
            "b3-z2-from-one",
            Model::new(3)
                .set(&[], vec![p(&[0])])
                .set(&[1], vec![B::z2(&[0])])
                .level(1, vec![p(&[0])])
                .set(&[1, 2], vec![B::z2(&[0])])
                .set(&[1, 3], vec![B::z2(&[0])])
                .level(2, vec![p(&[0])])
                .build(),
        ),
        entry(
            "b3-discrete-then-merge",
            Model::new(3)
                .set(&[], vec![p(&[0]), p(&[1])])
                .set(&[1], vec![p(&[0]), p(&[1])])
                .set(&[2], vec![p(&[0]), p(&[1])])
                .set(&[3], vec![p(&[0, 1])])
                .set(&[1, 2], vec![p(&[0]), p(&[1])])
                .level(2, vec![p(&[0, 1])])
                .build(),
        ),
        entry(
            "b3-three-points",
            Model::new(3)
                .set(&[], vec![p(&[0]), p(&[1]), p(&[2])])
                .set(&[1], vec![p(&[0]), B::new(&[&[1], &[2]], K::None)])
                .set(&[2], vec![B::new(&[&[0], &[1]], K::None), p(&[2])])
                .set(&[3], vec![p(&[0, 1, 2])])
                .level(2, vec![p(&[0, 1, 2])])
                .build(),
        ),
        entry(
            "b3-z2-top",
            Model::new(3).level(0, vec![p(&[0])]).level(1, vec![p(&[0])]).set(&[1, 2], vec![B::z2(&[0])]).level(2, vec![p(&[0])]).build(),
        ),
        entry(
            "b3-intervals",
            Model::new(3)
                .set(&[], vec![p(&[0]), p(&[1])])
                .level(1, vec![B::new(&[&[0], &[1]], K::None)])
                .level(2, vec![B::new(&[&[0], &[1]], K::None)])
                .build(),
        ),
    ]
}

/// Strict diagrams over `Full(4)` kept small enough for exhaustive descent
/// enumeration into `ℤ/2`.
pub fn corpus_b4() -> Vec<CorpusEntry> {
    let p = B::point;
    vec![
        entry("b4-point", constant(4, p(&[0]))),
        entry("b4-z2", constant(4, B::z2(&[0]))),
        entry(
            "b4-wild-bottom",
            Model::new(4).set(&[], vec![p(&[0]), p(&[1]), p(&[2])]).level(1, vec![p(&[0, 1, 2])]).level(2, vec![p(&[0, 1, 2])]).level(3, vec![p(&[0, 1, 2])]).build(),
        ),
        entry(
            "b4-z2-above-one",
            {
                let mut m = Model::new(4);
                for s in PosetView::full(4).expect("n = 4").enumerate() {
                    let b = if s.contains(1) { B::z2(&[0]) } else { p(&[0]) };
                    m = m.set(&s.members(), vec![b]);
                }
                m.build()
            },
        ),
        entry(
            "b4-two-points-merge",
            Model::new(4).set(&[], vec![p(&[0]), p(&[1])]).level(1, vec![p(&[0, 1])]).level(2, vec![p(&[0, 1])]).level(3, vec![p(&[0, 1])]).build(),
        ),
    ]
}

/// Finite targets with at most two objects and vertex groups trivial or
/// `ℤ/2`.
pub fn finite_targets() -> Vec<(String, FiniteGroupoid)> {
    let z2 = || FiniteGroup::cyclic(2).expect("order 2");
    let one = FiniteGroup::trivial;
    let mk = |comps: Vec<(Vec<&str>, FiniteGroup)>| {
        FiniteGroupoid::new(comps.into_iter().map(|(o, g)| (o.into_iter().map(String::from).collect(), g)).collect())
            .expect("valid target")
    };
    vec![
        ("point".into(), mk(vec![(vec!["*"], one())])),
        ("z2".into(), mk(vec![(vec!["*"], z2())])),
        ("two-points".into(), mk(vec![(vec!["p"], one()), (vec!["q"], one())])),
        ("interval".into(), mk(vec![(vec!["p", "q"], one())])),
        ("point-and-z2".into(), mk(vec![(vec!["p"], one()), (vec!["q"], z2())])),
        ("connected-z2".into(), mk(vec![(vec!["p", "q"], z2())])),
        ("two-z2".into(), mk(vec![(vec!["p"], z2()), (vec!["q"], z2())])),
    ]
}
