//! Finite groupoids given by multiplication tables, and exhaustive
//! enumeration of functors and natural transformations into them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::forest::SpanningForest;
use super::functor::FunctorPresentation;
use super::presentation::{GroupoidPresentation, Letter, ObjId, Word};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A finite group with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self::cyclic(1).expect("order 1")
    }

    /// `ℤ/m` with elements `0..m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition("cyclic group of order 0".into()));
        }
        let table = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        Self::from_table(table)
    }

    /// `table[a][b] = a·b`; element `0` must be the identity.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        let bad = |msg: &str| Err(Error::Precondition(format!("group table: {msg}")));
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("must be a square table over 0..n");
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return bad("element 0 is not the identity");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        let Some(inv) = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0)).collect() else {
            return bad("missing inverse");
        };
        Ok(FiniteGroup { mul: table, inv })
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
}

/// A morphism `src → dst`; `elem` indexes the group of the component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Morphism {
    pub src: usize,
    pub dst: usize,
    pub elem: usize,
}

/// A finite groupoid: components, each a set of objects with a finite
/// vertex group. Between two objects of one component the morphisms are
/// indexed by group elements; composition multiplies them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    pub objects: Vec<String>,
    pub component_of: Vec<usize>,
    pub groups: Vec<FiniteGroup>,
}

impl FiniteGroupoid {
    pub fn new(components: Vec<(Vec<String>, FiniteGroup)>) -> Result<Self> {
        let mut h = FiniteGroupoid { objects: Vec::new(), component_of: Vec::new(), groups: Vec::new() };
        for (c, (objs, group)) in components.into_iter().enumerate() {
            if objs.is_empty() {
                return Err(Error::Precondition("empty component".into()));
            }
            for o in objs {
                if h.objects.contains(&o) {
                    return Err(Error::Precondition(format!("duplicate object `{o}`")));
                }
                h.objects.push(o);
                h.component_of.push(c);
            }
            h.groups.push(group);
        }
        Ok(h)
    }

    /// One object with group `ℤ/m`.
    pub fn cyclic_point(m: usize) -> Result<Self> {
        Self::new(vec![(vec!["*".into()], FiniteGroup::cyclic(m)?)])
    }

    pub fn point() -> Self {
        Self::new(vec![(vec!["*".into()], FiniteGroup::trivial())]).expect("valid")
    }

    /// The discrete groupoid on `k` objects.
    pub fn discrete(k: usize) -> Self {
        Self::new((0..k).map(|i| (vec![format!("o{i}")], FiniteGroup::trivial())).collect()).expect("valid")
    }

    pub fn group_of(&self, x: usize) -> &FiniteGroup {
        &self.groups[self.component_of[x]]
    }

    pub fn identity(&self, x: usize) -> Morphism {
        Morphism { src: x, dst: x, elem: 0 }
    }

    /// `m1` followed by `m2`.
    pub fn then(&self, m1: Morphism, m2: Morphism) -> Morphism {
        debug_assert_eq!(m1.dst, m2.src, "composing non-composable morphisms");
        Morphism { src: m1.src, dst: m2.dst, elem: self.group_of(m1.src).mul(m2.elem, m1.elem) }
    }

    pub fn inverse(&self, m: Morphism) -> Morphism {
        Morphism { src: m.dst, dst: m.src, elem: self.group_of(m.src).inv(m.elem) }
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<Morphism> {
        if self.component_of[a] != self.component_of[b] {
            return Vec::new();
        }
        (0..self.group_of(a).order()).map(|elem| Morphism { src: a, dst: b, elem }).collect()
    }

    /// All morphisms with source `a`.
    pub fn out_of(&self, a: usize) -> Vec<Morphism> {
        (0..self.objects.len()).flat_map(|b| self.hom(a, b)).collect()
    }

    pub fn morphism_count(&self) -> usize {
        (0..self.objects.len()).map(|a| self.out_of(a).len()).sum()
    }

    /// A presentation of the same groupoid (tree arrows to the first object
    /// of each component plus a multiplication-table presentation of each
    /// vertex group).
    pub fn to_presentation(&self) -> GroupoidPresentation {
        let mut p = GroupoidPresentation::discrete(&self.objects);
        for (c, group) in self.groups.iter().enumerate() {
            let members: Vec<usize> = (0..self.objects.len()).filter(|&x| self.component_of[x] == c).collect();
            let base = members[0];
            for &x in &members[1..] {
                p.add_generator(format!("t{}", self.objects[x]), base, x);
            }
            let first = p.generators.len();
            for a in 1..group.order() {
                p.add_generator(format!("g{c}_{a}"), base, base);
            }
            let word = |a: usize| {
                if a == 0 {
                    Vec::new()
                } else {
                    vec![Letter::fwd(first + a - 1)]
                }
            };
            for a in 1..group.order() {
                for b in 1..group.order() {
                    // element a·b is "first b, then a" in path order
                    let mut lhs = word(b);
                    lhs.extend(word(a));
                    let rhs = word(group.mul(a, b));
                    p.add_relation(Word::new(base, lhs), Word::new(base, rhs)).expect("loops are parallel");
                }
            }
        }
        p
    }
}

/// File form of a finite groupoid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteGroupoidSpec {
    pub components: Vec<FiniteComponentSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteComponentSpec {
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

impl FiniteGroupoidSpec {
    pub fn build(&self) -> Result<FiniteGroupoid> {
        let comps = self
            .components
            .iter()
            .map(|c| {
                let group = match (&c.cyclic, &c.table) {
                    (Some(m), None) => FiniteGroup::cyclic(*m)?,
                    (None, Some(t)) => FiniteGroup::from_table(t.clone())?,
                    (None, None) => FiniteGroup::trivial(),
                    (Some(_), Some(_)) => {
                        return Err(Error::Parse("component gives both `cyclic` and `table`".into()))
                    }
                };
                Ok((c.objects.clone(), group))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteGroupoid::new(comps)
    }
}

/// A functor from a presented groupoid into a finite one, given by its
/// values on objects and generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FiniteFunctor {
    pub objects: Vec<usize>,
    pub gens: Vec<Morphism>,
}

impl FiniteFunctor {
    pub fn eval_letter(&self, h: &FiniteGroupoid, l: Letter) -> Morphism {
        let m = self.gens[l.gen];
        if l.inverse {
            h.inverse(m)
        } else {
            m
        }
    }

    pub fn eval_word(&self, h: &FiniteGroupoid, w: &Word) -> Morphism {
        w.letters
            .iter()
            .fold(h.identity(self.objects[w.start]), |acc, &l| h.then(acc, self.eval_letter(h, l)))
    }

    /// `self ∘ phi`.
    pub fn precompose(&self, h: &FiniteGroupoid, phi: &FunctorPresentation) -> FiniteFunctor {
        FiniteFunctor {
            objects: phi.object_map.iter().map(|&y| self.objects[y]).collect(),
            gens: phi.generator_map.iter().map(|w| self.eval_word(h, w)).collect(),
        }
    }

    /// Whether the assignment is a functor: endpoints match and every
    /// relation holds.
    pub fn is_valid(&self, g: &GroupoidPresentation, h: &FiniteGroupoid) -> bool {
        if self.objects.len() != g.objects.len() || self.gens.len() != g.generators.len() {
            return false;
        }
        let ends_ok = g.generators.iter().zip(&self.gens).all(|(e, m)| {
            m.src == self.objects[e.src]
                && m.dst == self.objects[e.dst]
                && h.component_of[m.src] == h.component_of[m.dst]
                && m.elem < h.group_of(m.src).order()
        });
        ends_ok && g.relations.iter().all(|r| self.eval_word(h, &r.lhs) == self.eval_word(h, &r.rhs))
    }
}

enum Step {
    Root(ObjId),
    Tree { gen: usize, parent: ObjId, child: ObjId, forward: bool },
    Free(usize),
}

/// An object assignment and/or a generator image chosen at one step.
type StepChoice = (Option<(ObjId, usize)>, Option<(usize, Morphism)>);

struct Search<'a> {
    g: &'a GroupoidPresentation,
    h: &'a FiniteGroupoid,
    steps: Vec<Step>,
    /// Relations to check once step `i` is assigned.
    checks: Vec<Vec<usize>>,
    objects: Vec<usize>,
    gens: Vec<Morphism>,
    fuel: u64,
    spent: u64,
    out: Vec<FiniteFunctor>,
}

impl Search<'_> {
    fn relations_hold(&self, step: usize) -> bool {
        let f = FiniteFunctorRef { objects: &self.objects, gens: &self.gens };
        self.checks[step].iter().all(|&r| {
            let rel = &self.g.relations[r];
            f.eval(self.h, &rel.lhs) == f.eval(self.h, &rel.rhs)
        })
    }

    fn run(&mut self, i: usize) -> Result<()> {
        self.spent += 1;
        if self.spent > self.fuel {
            return Err(Error::FuelExceeded(self.fuel));
        }
        if i == self.steps.len() {
            self.out.push(FiniteFunctor { objects: self.objects.clone(), gens: self.gens.clone() });
            return Ok(());
        }
        let h = self.h;
        let mut options: Vec<StepChoice> = Vec::new();
        match self.steps[i] {
            Step::Root(x) => {
                for o in 0..h.objects.len() {
                    options.push((Some((x, o)), None));
                }
            }
            Step::Tree { gen, parent, child, forward } => {
                let fp = self.objects[parent];
                for o in 0..h.objects.len() {
                    let ms = if forward { h.hom(fp, o) } else { h.hom(o, fp) };
                    for m in ms {
                        options.push((Some((child, o)), Some((gen, m))));
                    }
                }
            }
            Step::Free(gen) => {
                let e = &self.g.generators[gen];
                for m in h.hom(self.objects[e.src], self.objects[e.dst]) {
                    options.push((None, Some((gen, m))));
                }
            }
        }
        for (obj, gen) in options {
            if let Some((x, o)) = obj {
                self.objects[x] = o;
            }
            if let Some((e, m)) = gen {
                self.gens[e] = m;
            }
            if self.relations_hold(i) {
                self.run(i + 1)?;
            }
        }
        Ok(())
    }
}

struct FiniteFunctorRef<'a> {
    objects: &'a [usize],
    gens: &'a [Morphism],
}

impl FiniteFunctorRef<'_> {
    fn eval(&self, h: &FiniteGroupoid, w: &Word) -> Morphism {
        w.letters.iter().fold(h.identity(self.objects[w.start]), |acc, &l| {
            let m = self.gens[l.gen];
            h.then(acc, if l.inverse { h.inverse(m) } else { m })
        })
    }
}

/// All functors `g → h`, by depth-first search along a spanning forest of
/// `g`: root images, then tree arrows (which fix the remaining object
/// images), then the other generators; relations are checked as soon as
/// their generators are assigned. `fuel` bounds the number of search nodes.
pub fn enumerate_functors(g: &GroupoidPresentation, h: &FiniteGroupoid, fuel: u64) -> Result<Vec<FiniteFunctor>> {
    g.validate()?;
    let forest = SpanningForest::new(g);
    let mut steps = Vec::new();
    let mut step_of_gen = vec![0usize; g.generators.len()];
    for (c, &root) in forest.roots.iter().enumerate() {
        steps.push(Step::Root(root));
        for e in &forest.edges[c] {
            step_of_gen[e.gen] = steps.len();
            steps.push(Step::Tree { gen: e.gen, parent: e.parent, child: e.child, forward: e.forward });
        }
        for (i, gen) in g.generators.iter().enumerate() {
            if forest.component[gen.src] == c && !forest.is_tree[i] {
                step_of_gen[i] = steps.len();
                steps.push(Step::Free(i));
            }
        }
    }
    let mut checks = vec![Vec::new(); steps.len().max(1)];
    for (r, rel) in g.relations.iter().enumerate() {
        let last = rel.lhs.letters.iter().chain(&rel.rhs.letters).map(|l| step_of_gen[l.gen]).max();
        if let Some(s) = last {
            checks[s].push(r);
        }
    }
    let mut search = Search {
        g,
        h,
        steps,
        checks,
        objects: vec![0; g.objects.len()],
        gens: vec![Morphism { src: 0, dst: 0, elem: 0 }; g.generators.len()],
        fuel,
        spent: 0,
        out: Vec::new(),
    };
    search.run(0)?;
    Ok(search.out)
}

/// All natural transformations `f ⇒ k` (components `η_x: f(x) → k(x)` with
/// `η_x · k(e) = f(e) · η_y` for every generator `e: x → y`).
pub fn natural_transformations(
    g: &GroupoidPresentation,
    h: &FiniteGroupoid,
    f: &FiniteFunctor,
    k: &FiniteFunctor,
) -> Vec<Vec<Morphism>> {
    let forest = SpanningForest::new(g);
    // per component: candidate root values, each propagated along the tree
    let mut per_component: Vec<Vec<Vec<(ObjId, Morphism)>>> = Vec::new();
    for (c, &root) in forest.roots.iter().enumerate() {
        let mut good = Vec::new();
        for m in h.hom(f.objects[root], k.objects[root]) {
            let mut eta: HashMap<ObjId, Morphism> = HashMap::from([(root, m)]);
            for e in &forest.edges[c] {
                let ep = eta[&e.parent];
                let fe = f.gens[e.gen];
                let ke = k.gens[e.gen];
                let ec = if e.forward {
                    // parent → child: η_child = f(e)⁻¹ · η_parent · k(e)
                    h.then(h.then(h.inverse(fe), ep), ke)
                } else {
                    // child → parent: η_child = f(e) · η_parent · k(e)⁻¹
                    h.then(h.then(fe, ep), h.inverse(ke))
                };
                eta.insert(e.child, ec);
            }
            let natural = g.generators.iter().enumerate().all(|(i, gen)| {
                if forest.component[gen.src] != c {
                    return true;
                }
                h.then(eta[&gen.src], k.gens[i]) == h.then(f.gens[i], eta[&gen.dst])
            });
            if natural {
                let mut v: Vec<(ObjId, Morphism)> = eta.into_iter().collect();
                v.sort();
                good.push(v);
            }
        }
        per_component.push(good);
    }
    let mut out = vec![vec![Morphism { src: 0, dst: 0, elem: 0 }; g.objects.len()]];
    for options in per_component {
        let mut next = Vec::new();
        for partial in &out {
            for opt in &options {
                let mut p = partial.clone();
                for &(x, m) in opt {
                    p[x] = m;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The functor isomorphic to `f` through `η` that is `m` at `x` and the
/// identity elsewhere.
pub fn transport_functor(g: &GroupoidPresentation, h: &FiniteGroupoid, f: &FiniteFunctor, x: ObjId, m: Morphism) -> FiniteFunctor {
    let mut k = f.clone();
    k.objects[x] = m.dst;
    let eta = |y: ObjId| if y == x { m } else { h.identity(f.objects[y]) };
    for (i, e) in g.generators.iter().enumerate() {
        if e.src == x || e.dst == x {
            k.gens[i] = h.then(h.then(h.inverse(eta(e.src)), f.gens[i]), eta(e.dst));
        }
    }
    k
}

/// Isomorphism classes and morphism count of a finite groupoid given by
/// its objects and automorphism group orders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomStats {
    pub objects: usize,
    pub iso_classes: usize,
    pub morphisms: u128,
}

/// Given every object of a groupoid, a way to list the objects reachable by
/// one elementary isomorphism, and automorphism counts, computes classes
/// (union-find) and total morphisms `Σ_C |C|²·|Aut(rep C)|`.
pub fn groupoid_stats<T, N, A>(objects: &[T], neighbours: N, aut: A) -> (HomStats, Vec<usize>)
where
    T: std::hash::Hash + Eq,
    N: Fn(&T) -> Vec<T>,
    A: Fn(&T) -> usize,
{
    let index: HashMap<&T, usize> = objects.iter().enumerate().map(|(i, o)| (o, i)).collect();
    let mut uf = UnionFind::new(objects.len());
    for (i, o) in objects.iter().enumerate() {
        for n in neighbours(o) {
            let j = *index.get(&n).expect("elementary transport stays inside the enumerated set");
            uf.union(i, j);
        }
    }
    let (class, count) = uf.classes();
    let mut size = vec![0u128; count];
    let mut rep = vec![usize::MAX; count];
    for (i, &c) in class.iter().enumerate() {
        size[c] += 1;
        if rep[c] == usize::MAX {
            rep[c] = i;
        }
    }
    let morphisms = (0..count).map(|c| size[c] * size[c] * aut(&objects[rep[c]]) as u128).sum();
    (HomStats { objects: objects.len(), iso_classes: count, morphisms }, class)
}

/// Statistics of the functor groupoid `Hom(g, h)` from its enumerated
/// objects.
pub fn functor_groupoid_stats(g: &GroupoidPresentation, h: &FiniteGroupoid, functors: &[FiniteFunctor]) -> HomStats {
    groupoid_stats(
        functors,
        |f| {
            let mut out = Vec::new();
            for x in 0..g.objects.len() {
                for m in h.out_of(f.objects[x]) {
                    if m.elem != 0 || m.dst != m.src {
                        out.push(transport_functor(g, h, f, x, m));
                    }
                }
            }
            out
        },
        |f| natural_transformations(g, h, f, f).len(),
    )
    .0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_group(relator_power: usize) -> GroupoidPresentation {
        let mut g = GroupoidPresentation::discrete(&["*"]);
        g.add_generator("x", 0, 0);
        if relator_power > 0 {
            let w = Word::new(0, vec![Letter::fwd(0); relator_power]);
            g.add_relation(w, Word::identity(0)).unwrap();
        }
        g
    }

    #[test]
    fn homs_from_integers_to_z2() {
        let h = FiniteGroupoid::cyclic_point(2).unwrap();
        assert_eq!(enumerate_functors(&loop_group(0), &h, 1000).unwrap().len(), 2);
        assert_eq!(enumerate_functors(&loop_group(2), &h, 1000).unwrap().len(), 2);
        // ℤ/3 → ℤ/2: only the trivial homomorphism
        assert_eq!(enumerate_functors(&loop_group(3), &h, 1000).unwrap().len(), 1);
    }

    #[test]
    fn discrete_into_point() {
        let g = GroupoidPresentation::discrete(&["a", "b"]);
        assert_eq!(enumerate_functors(&g, &FiniteGroupoid::point(), 100).unwrap().len(), 1);
    }

    #[test]
    fn fuel_is_enforced() {
        let g = GroupoidPresentation::discrete(&["a", "b", "c", "d"]);
        let h = FiniteGroupoid::discrete(3);
        assert!(matches!(enumerate_functors(&g, &h, 10), Err(Error::FuelExceeded(10))));
    }

    #[test]
    fn functor_groupoid_of_interval_into_connected_pair() {
        // Hom(interval, h) ≃ h; h = two objects, trivial group: 4 functors,
        // one class, 16 morphisms
        let mut g = GroupoidPresentation::discrete(&["a", "b"]);
        g.add_generator("e", 0, 1);
        let h = FiniteGroupoid::new(vec![(vec!["p".into(), "q".into()], FiniteGroup::trivial())]).unwrap();
        let fs = enumerate_functors(&g, &h, 1000).unwrap();
        assert_eq!(fs.len(), 4);
        let s = functor_groupoid_stats(&g, &h, &fs);
        assert_eq!((s.iso_classes, s.morphisms), (1, 16));
    }

    #[test]
    fn conjugation_classes_in_abelian_target() {
        let h = FiniteGroupoid::cyclic_point(2).unwrap();
        let g = loop_group(0);
        let fs = enumerate_functors(&g, &h, 100).unwrap();
        let s = functor_groupoid_stats(&g, &h, &fs);
        assert_eq!((s.iso_classes, s.morphisms), (2, 4));
    }

    #[test]
    fn presentation_of_finite_groupoid_round_trips_counts() {
        let h = FiniteGroupoid::cyclic_point(3).unwrap();
        let p = h.to_presentation();
        // endomorphisms of ℤ/3 into ℤ/3
        assert_eq!(enumerate_functors(&p, &h, 10_000).unwrap().len(), 3);
    }

    #[test]
    fn group_table_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
        let s3 = [[0, 1, 2, 3, 4, 5], [1, 2, 0, 4, 5, 3], [2, 0, 1, 5, 3, 4], [3, 5, 4, 0, 2, 1], [4, 3, 5, 1, 0, 2], [5, 4, 3, 2, 1, 0]];
        let t: Vec<Vec<usize>> = s3.iter().map(|r| r.to_vec()).collect();
        assert!(FiniteGroup::from_table(t).is_ok());
    }
}
