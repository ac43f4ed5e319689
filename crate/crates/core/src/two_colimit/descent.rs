//! Descent data `(X_S, A_{S,T})` of a diagram with values in a finite
//! groupoid, their morphisms, and exhaustive enumeration.
//!
//! `X_S: Φ(S) → H` is a functor per element, and `A_{S,T}(x): X_S(x) →
//! X_T(Φ_{S,T}x)` an arrow of `H` per cover and object, natural in `x`, with
//! the two composites around every diamond equal.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::groupoid::finite::{groupoid_stats, transport_functor};
use crate::groupoid::{
    enumerate_functors, natural_transformations, FiniteFunctor, FiniteGroupoid, FunctorPresentation,
    GroupoidPresentation, HomStats, Morphism,
};
use crate::poset::{CoverRelation, Subset};

/// A descent datum; vectors are indexed like [`DescentShape::elements`] and
/// [`DescentShape::covers`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DescentObject {
    pub functors: Vec<FiniteFunctor>,
    pub transitions: Vec<Vec<Morphism>>,
}

/// Per element, one component `f_S(x): X_S(x) → Y_S(x)` per object.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DescentMorphism {
    pub components: Vec<Vec<Morphism>>,
}

#[derive(Clone, Copy, Debug)]
struct DiamondIdx {
    bottom: usize,
    bottom_left: usize,
    left_top: usize,
    bottom_right: usize,
    right_top: usize,
}

/// Index structure of a diagram's view used by all descent computations.
#[derive(Clone, Debug)]
pub struct DescentShape {
    pub elements: Vec<Subset>,
    pub covers: Vec<CoverRelation>,
    pub groupoids: Vec<Arc<GroupoidPresentation>>,
    pub cover_functors: Vec<FunctorPresentation>,
    element_index: HashMap<Subset, usize>,
    cover_lower: Vec<usize>,
    cover_upper: Vec<usize>,
    /// Covers leaving each element, by upper element in canonical order.
    uppers: Vec<Vec<usize>>,
    /// Covers entering each element.
    lowers: Vec<Vec<usize>>,
    diamonds: Vec<DiamondIdx>,
}

impl DescentShape {
    pub fn new(d: &Diagram) -> Result<Self> {
        d.ensure_usable()?;
        let elements = d.elements();
        let element_index: HashMap<Subset, usize> = elements.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let covers = d.view().covers();
        let cover_index: HashMap<CoverRelation, usize> = covers.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let cover_lower: Vec<usize> = covers.iter().map(|c| element_index[&c.lower]).collect();
        let cover_upper: Vec<usize> = covers.iter().map(|c| element_index[&c.upper]).collect();
        let mut uppers = vec![Vec::new(); elements.len()];
        let mut lowers = vec![Vec::new(); elements.len()];
        for (i, _) in covers.iter().enumerate() {
            uppers[cover_lower[i]].push(i);
            lowers[cover_upper[i]].push(i);
        }
        let diamonds = d
            .view()
            .diamonds()
            .into_iter()
            .map(|dm| DiamondIdx {
                bottom: element_index[&dm.bottom],
                bottom_left: cover_index[&CoverRelation { lower: dm.bottom, upper: dm.left }],
                left_top: cover_index[&CoverRelation { lower: dm.left, upper: dm.top }],
                bottom_right: cover_index[&CoverRelation { lower: dm.bottom, upper: dm.right }],
                right_top: cover_index[&CoverRelation { lower: dm.right, upper: dm.top }],
            })
            .collect();
        let groupoids = elements.iter().map(|s| d.groupoids()[s].clone()).collect();
        let cover_functors = covers.iter().map(|c| d.functors()[c].clone()).collect();
        Ok(DescentShape {
            elements,
            covers,
            groupoids,
            cover_functors,
            element_index,
            cover_lower,
            cover_upper,
            uppers,
            lowers,
            diamonds,
        })
    }

    pub fn element_index(&self, s: &Subset) -> Option<usize> {
        self.element_index.get(s).copied()
    }

    pub fn cover_index(&self, c: &CoverRelation) -> Option<usize> {
        self.covers.iter().position(|x| x == c)
    }

    /// Indices of the covers `S ⋖ T` leaving element `i`.
    pub fn uppers(&self, i: usize) -> &[usize] {
        &self.uppers[i]
    }

    pub fn cover_ends(&self, c: usize) -> (usize, usize) {
        (self.cover_lower[c], self.cover_upper[c])
    }

    /// Checks every condition on a descent datum.
    pub fn validate(&self, h: &FiniteGroupoid, dobj: &DescentObject) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDescent(m));
        if dobj.functors.len() != self.elements.len() || dobj.transitions.len() != self.covers.len() {
            return bad("wrong number of components".into());
        }
        for (i, f) in dobj.functors.iter().enumerate() {
            if !f.is_valid(&self.groupoids[i], h) {
                return bad(format!("X at {} is not a functor", self.elements[i]));
            }
        }
        for (c, a) in dobj.transitions.iter().enumerate() {
            let (s, t) = self.cover_ends(c);
            let phi = &self.cover_functors[c];
            if a.len() != self.groupoids[s].objects.len() {
                return bad(format!("transition at {} has the wrong length", self.covers[c]));
            }
            for (x, m) in a.iter().enumerate() {
                if m.src != dobj.functors[s].objects[x] || m.dst != dobj.functors[t].objects[phi.object_map[x]] {
                    return bad(format!("transition at {} has wrong endpoints at object {x}", self.covers[c]));
                }
            }
            for (e, gen) in self.groupoids[s].generators.iter().enumerate() {
                let lhs = h.then(a[gen.src], dobj.functors[t].eval_word(h, &phi.generator_map[e]));
                let rhs = h.then(dobj.functors[s].gens[e], a[gen.dst]);
                if lhs != rhs {
                    return bad(format!("transition at {} is not natural at `{}`", self.covers[c], gen.name));
                }
            }
        }
        for dm in &self.diamonds {
            if !cocycle_of(self, h, &dobj.transitions, dm) {
                return bad(format!("cocycle condition fails at the diamond above {}", self.elements[dm.bottom]));
            }
        }
        Ok(())
    }

    /// All descent data, searching elements from the top down. Maximal
    /// elements range over all functors; below, the transition to the first
    /// upper cover is free and determines `X_S`, the other transitions range
    /// over natural transformations, and diamonds are checked immediately.
    pub fn enumerate(&self, h: &FiniteGroupoid, fuel: u64) -> Result<Vec<DescentObject>> {
        let mut search = DescentSearch {
            shape: self,
            h,
            fuel,
            spent: 0,
            functors: vec![None; self.elements.len()],
            transitions: vec![Vec::new(); self.covers.len()],
            maximal_functors: HashMap::new(),
            out: Vec::new(),
        };
        let order: Vec<usize> = (0..self.elements.len()).rev().collect();
        search.run(&order, 0)?;
        Ok(search.out)
    }

    /// Strict cones `(F_S)` with `F_T ∘ Φ_{S,T} = F_S` on the nose.
    pub fn enumerate_cones(&self, h: &FiniteGroupoid, fuel: u64) -> Result<Vec<Vec<FiniteFunctor>>> {
        let order: Vec<usize> = (0..self.elements.len()).rev().collect();
        let mut out = Vec::new();
        let mut current: Vec<Option<FiniteFunctor>> = vec![None; self.elements.len()];
        let mut spent = 0u64;
        self.cones_rec(h, fuel, &mut spent, &order, 0, &mut current, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn cones_rec(
        &self,
        h: &FiniteGroupoid,
        fuel: u64,
        spent: &mut u64,
        order: &[usize],
        pos: usize,
        current: &mut Vec<Option<FiniteFunctor>>,
        out: &mut Vec<Vec<FiniteFunctor>>,
    ) -> Result<()> {
        *spent += 1;
        if *spent > fuel {
            return Err(Error::FuelExceeded(fuel));
        }
        if pos == order.len() {
            out.push(current.iter().map(|f| f.clone().expect("assigned")).collect());
            return Ok(());
        }
        let i = order[pos];
        let candidates = match self.uppers[i].first() {
            None => enumerate_functors(&self.groupoids[i], h, fuel)?,
            Some(&c0) => {
                let t = self.cover_upper[c0];
                vec![current[t].as_ref().expect("upper assigned").precompose(h, &self.cover_functors[c0])]
            }
        };
        for f in candidates {
            let compatible = self.uppers[i].iter().all(|&c| {
                let t = self.cover_upper[c];
                current[t].as_ref().expect("upper assigned").precompose(h, &self.cover_functors[c]) == f
            });
            if compatible {
                current[i] = Some(f);
                self.cones_rec(h, fuel, spent, order, pos + 1, current, out)?;
                current[i] = None;
            }
        }
        Ok(())
    }

    /// All descent morphisms `x → y`. Components at maximal elements range
    /// over natural transformations; below they are forced by the square
    /// with the first upper cover, and checked against everything else.
    pub fn morphisms(&self, h: &FiniteGroupoid, x: &DescentObject, y: &DescentObject) -> Vec<DescentMorphism> {
        let order: Vec<usize> = (0..self.elements.len()).rev().collect();
        let mut out = Vec::new();
        let mut comps: Vec<Vec<Morphism>> = vec![Vec::new(); self.elements.len()];
        self.morphisms_rec(h, x, y, &order, 0, &mut comps, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn morphisms_rec(
        &self,
        h: &FiniteGroupoid,
        x: &DescentObject,
        y: &DescentObject,
        order: &[usize],
        pos: usize,
        comps: &mut Vec<Vec<Morphism>>,
        out: &mut Vec<DescentMorphism>,
    ) {
        if pos == order.len() {
            out.push(DescentMorphism { components: comps.clone() });
            return;
        }
        let i = order[pos];
        let g = &self.groupoids[i];
        let candidates = match self.uppers[i].first() {
            None => natural_transformations(g, h, &x.functors[i], &y.functors[i]),
            Some(&c0) => {
                let t = self.cover_upper[c0];
                let phi = &self.cover_functors[c0];
                let forced: Vec<Morphism> = (0..g.objects.len())
                    .map(|o| {
                        let a = x.transitions[c0][o];
                        let f_t = comps[t][phi.object_map[o]];
                        let b = y.transitions[c0][o];
                        h.then(h.then(a, f_t), h.inverse(b))
                    })
                    .collect();
                let natural = g.generators.iter().enumerate().all(|(e, gen)| {
                    h.then(forced[gen.src], y.functors[i].gens[e]) == h.then(x.functors[i].gens[e], forced[gen.dst])
                });
                if natural {
                    vec![forced]
                } else {
                    Vec::new()
                }
            }
        };
        for f in candidates {
            let squares = self.uppers[i].iter().all(|&c| {
                let t = self.cover_upper[c];
                let phi = &self.cover_functors[c];
                (0..g.objects.len()).all(|o| {
                    h.then(f[o], y.transitions[c][o]) == h.then(x.transitions[c][o], comps[t][phi.object_map[o]])
                })
            });
            if squares {
                comps[i] = f;
                self.morphisms_rec(h, x, y, order, pos + 1, comps, out);
                comps[i] = Vec::new();
            }
        }
    }

    /// Whether `f` is a descent morphism `x → y`.
    pub fn is_morphism(&self, h: &FiniteGroupoid, x: &DescentObject, y: &DescentObject, f: &DescentMorphism) -> bool {
        if f.components.len() != self.elements.len() {
            return false;
        }
        for (i, g) in self.groupoids.iter().enumerate() {
            let fi = &f.components[i];
            if fi.len() != g.objects.len() {
                return false;
            }
            let ends = (0..g.objects.len())
                .all(|o| fi[o].src == x.functors[i].objects[o] && fi[o].dst == y.functors[i].objects[o]);
            let natural = g.generators.iter().enumerate().all(|(e, gen)| {
                h.then(fi[gen.src], y.functors[i].gens[e]) == h.then(x.functors[i].gens[e], fi[gen.dst])
            });
            if !ends || !natural {
                return false;
            }
        }
        (0..self.covers.len()).all(|c| {
            let (s, t) = self.cover_ends(c);
            let phi = &self.cover_functors[c];
            (0..self.groupoids[s].objects.len()).all(|o| {
                h.then(f.components[s][o], y.transitions[c][o])
                    == h.then(x.transitions[c][o], f.components[t][phi.object_map[o]])
            })
        })
    }

    /// The datum isomorphic to `x` by the morphism that is `m` at object
    /// `o` of element `i` and the identity elsewhere.
    pub fn transport(&self, h: &FiniteGroupoid, x: &DescentObject, i: usize, o: usize, m: Morphism) -> DescentObject {
        let mut y = x.clone();
        y.functors[i] = transport_functor(&self.groupoids[i], h, &x.functors[i], o, m);
        for &c in &self.uppers[i] {
            y.transitions[c][o] = h.then(h.inverse(m), x.transitions[c][o]);
        }
        for &c in &self.lowers[i] {
            let phi = &self.cover_functors[c];
            for (z, &img) in phi.object_map.iter().enumerate() {
                if img == o {
                    y.transitions[c][z] = h.then(x.transitions[c][z], m);
                }
            }
        }
        y
    }

    /// Neighbours of `x` under all non-identity elementary transports.
    pub fn elementary_moves(&self, h: &FiniteGroupoid, x: &DescentObject) -> Vec<DescentObject> {
        let mut out = Vec::new();
        for (i, g) in self.groupoids.iter().enumerate() {
            for o in 0..g.objects.len() {
                for m in h.out_of(x.functors[i].objects[o]) {
                    if m != h.identity(m.src) {
                        out.push(self.transport(h, x, i, o, m));
                    }
                }
            }
        }
        out
    }

    /// The descent datum with identity transitions of a strict cone.
    pub fn gamma_embed(&self, h: &FiniteGroupoid, cone: &[FiniteFunctor]) -> Result<DescentObject> {
        if cone.len() != self.elements.len() {
            return Err(Error::InvalidDescent("cone has the wrong number of components".into()));
        }
        let mut transitions = Vec::new();
        for c in 0..self.covers.len() {
            let (s, t) = self.cover_ends(c);
            if cone[t].precompose(h, &self.cover_functors[c]) != cone[s] {
                return Err(Error::InvalidDescent(format!("cone is not strict at {}", self.covers[c])));
            }
            transitions.push(cone[s].objects.iter().map(|&y| h.identity(y)).collect());
        }
        Ok(DescentObject { functors: cone.to_vec(), transitions })
    }
}

struct DescentSearch<'a> {
    shape: &'a DescentShape,
    h: &'a FiniteGroupoid,
    fuel: u64,
    spent: u64,
    functors: Vec<Option<FiniteFunctor>>,
    transitions: Vec<Vec<Morphism>>,
    maximal_functors: HashMap<usize, Vec<FiniteFunctor>>,
    out: Vec<DescentObject>,
}

impl DescentSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.fuel {
            return Err(Error::FuelExceeded(self.fuel));
        }
        Ok(())
    }

    fn run(&mut self, order: &[usize], pos: usize) -> Result<()> {
        self.tick()?;
        if pos == order.len() {
            self.out.push(DescentObject {
                functors: self.functors.iter().map(|f| f.clone().expect("assigned")).collect(),
                transitions: self.transitions.clone(),
            });
            return Ok(());
        }
        let i = order[pos];
        let shape = self.shape;
        let h = self.h;
        match shape.uppers[i].first() {
            None => {
                if !self.maximal_functors.contains_key(&i) {
                    let fs = enumerate_functors(&shape.groupoids[i], h, self.fuel)?;
                    self.maximal_functors.insert(i, fs);
                }
                let candidates = self.maximal_functors[&i].clone();
                for f in candidates {
                    self.functors[i] = Some(f);
                    self.run(order, pos + 1)?;
                }
                self.functors[i] = None;
            }
            Some(&c0) => {
                let t = shape.cover_upper[c0];
                let base = self.functors[t].as_ref().expect("upper assigned").precompose(h, &shape.cover_functors[c0]);
                let choices: Vec<Vec<Morphism>> = base
                    .objects
                    .iter()
                    .map(|&target| (0..h.objects.len()).flat_map(|src| h.hom(src, target)).collect())
                    .collect();
                let mut a = Vec::with_capacity(choices.len());
                self.first_transition(order, pos, c0, &base, &choices, &mut a)?;
            }
        }
        Ok(())
    }

    /// Chooses `A_{S,T0}(x)` object by object, then derives `X_S`.
    fn first_transition(
        &mut self,
        order: &[usize],
        pos: usize,
        c0: usize,
        base: &FiniteFunctor,
        choices: &[Vec<Morphism>],
        a: &mut Vec<Morphism>,
    ) -> Result<()> {
        if a.len() < choices.len() {
            for &m in &choices[a.len()] {
                a.push(m);
                self.first_transition(order, pos, c0, base, choices, a)?;
                a.pop();
            }
            return Ok(());
        }
        self.tick()?;
        let shape = self.shape;
        let h = self.h;
        let i = order[pos];
        let g = &shape.groupoids[i];
        let x = FiniteFunctor {
            objects: a.iter().map(|m| m.src).collect(),
            gens: g
                .generators
                .iter()
                .enumerate()
                .map(|(e, gen)| h.then(h.then(a[gen.src], base.gens[e]), h.inverse(a[gen.dst])))
                .collect(),
        };
        self.transitions[c0] = a.clone();
        let rest: Vec<usize> = shape.uppers[i][1..].to_vec();
        self.functors[i] = Some(x);
        self.other_transitions(order, pos, &rest, 0)?;
        self.functors[i] = None;
        Ok(())
    }

    fn other_transitions(&mut self, order: &[usize], pos: usize, rest: &[usize], k: usize) -> Result<()> {
        let shape = self.shape;
        let h = self.h;
        let i = order[pos];
        if k == rest.len() {
            return self.run(order, pos + 1);
        }
        let c = rest[k];
        let t = shape.cover_upper[c];
        let xs = self.functors[i].as_ref().expect("assigned");
        let target = self.functors[t].as_ref().expect("upper assigned").precompose(h, &shape.cover_functors[c]);
        // diamonds closed by this cover: the other bottom cover is already set
        let assigned = &shape.uppers[i][..k + 1];
        let closing: Vec<&DiamondIdx> = shape
            .diamonds
            .iter()
            .filter(|dm| {
                dm.bottom == i
                    && ((dm.bottom_left == c && assigned.contains(&dm.bottom_right))
                        || (dm.bottom_right == c && assigned.contains(&dm.bottom_left)))
            })
            .collect();
        for eta in natural_transformations(&shape.groupoids[i], h, xs, &target) {
            self.tick()?;
            self.transitions[c] = eta;
            if closing.iter().all(|dm| cocycle_of(shape, h, &self.transitions, dm)) {
                self.other_transitions(order, pos, rest, k + 1)?;
            }
        }
        Ok(())
    }
}

fn cocycle_of(shape: &DescentShape, h: &FiniteGroupoid, transitions: &[Vec<Morphism>], dm: &DiamondIdx) -> bool {
    let phi_l = &shape.cover_functors[dm.bottom_left];
    let phi_r = &shape.cover_functors[dm.bottom_right];
    (0..shape.groupoids[dm.bottom].objects.len()).all(|x| {
        h.then(transitions[dm.bottom_left][x], transitions[dm.left_top][phi_l.object_map[x]])
            == h.then(transitions[dm.bottom_right][x], transitions[dm.right_top][phi_r.object_map[x]])
    })
}

/// The groupoid of descent data, enumerated, with its isomorphism classes.
#[derive(Clone, Debug)]
pub struct DescentCategory {
    pub shape: DescentShape,
    pub objects: Vec<DescentObject>,
    /// Class of each object (classes numbered by first member).
    pub class_of: Vec<usize>,
    pub stats: HomStats,
}

impl DescentCategory {
    pub fn index_of(&self) -> HashMap<&DescentObject, usize> {
        self.objects.iter().enumerate().map(|(i, o)| (o, i)).collect()
    }
}

/// Enumerates the descent groupoid of `d` with values in `h`. Morphisms are
/// counted as `Σ_C |C|²·|Aut(rep C)|` over isomorphism classes.
pub fn descent_category(d: &Diagram, h: &FiniteGroupoid, fuel: u64) -> Result<DescentCategory> {
    let shape = DescentShape::new(d)?;
    let objects = shape.enumerate(h, fuel)?;
    let (stats, class_of) =
        groupoid_stats(&objects, |x| shape.elementary_moves(h, x), |x| shape.morphisms(h, x, x).len());
    Ok(DescentCategory { shape, objects, class_of, stats })
}
