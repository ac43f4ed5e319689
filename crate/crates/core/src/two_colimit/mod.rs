//! The 2-colimit of a diagram of groupoids, presented as its Grothendieck
//! construction, and its universal property through descent data.
//!
//! Objects are pairs `(S, x)`; arrows are generated by the lifted generators
//! of each `Φ(S)` and one arrow `λ_{S,T,x}: (S, x) → (T, Φ_{S,T}x)` per cover
//! and object. Relations are the lifted relations, naturality of `λ` along
//! every generator, and commutativity of `λ` around every diamond.

pub mod descent;
pub mod pullback;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{functor_between, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::{
    groupoid_invariants, homotopy_pushout, FiniteFunctor, FiniteGroupoid, FunctorPresentation, GenId,
    GroupoidInvariants, GroupoidPresentation, Letter, Morphism, ObjId, Word,
};
use crate::poset::{partition_b, CoverRelation, PosetView, Subset, ViewKind};

pub use descent::{descent_category, DescentCategory, DescentMorphism, DescentObject, DescentShape};
pub use pullback::{descent_pullback_gamma_delta, PullbackReport};

/// The Grothendieck presentation together with its index maps.
#[derive(Clone, Debug)]
pub struct TwoColimit {
    pub groupoid: Arc<GroupoidPresentation>,
    pub object_of: BTreeMap<(Subset, ObjId), ObjId>,
    pub lifted: BTreeMap<(Subset, GenId), GenId>,
    pub lambda: BTreeMap<(CoverRelation, ObjId), GenId>,
    /// `L_S: Φ(S) → 2colim` for every element.
    pub insertions: BTreeMap<Subset, FunctorPresentation>,
}

impl TwoColimit {
    /// The word `λ_{S,T,x}` along the increasing chain from `s` to `t`.
    pub fn lambda_chain(&self, d: &Diagram, s: &Subset, t: &Subset, x: ObjId) -> Result<Word> {
        if !s.is_subset_of(t) {
            return Err(Error::Precondition(format!("{s} is not contained in {t}")));
        }
        let start = self.object_of[&(*s, x)];
        let mut letters = Vec::new();
        let mut cur = *s;
        let mut obj = x;
        for m in s.missing_from(t) {
            let next = cur.with(m)?;
            let c = CoverRelation { lower: cur, upper: next };
            let gen = *self
                .lambda
                .get(&(c, obj))
                .ok_or_else(|| Error::Precondition(format!("cover {c} is not in the view")))?;
            letters.push(Letter::fwd(gen));
            obj = d.cover_functor(&c)?.object_map[obj];
            cur = next;
        }
        Ok(Word::new(start, letters))
    }
}

/// Builds the Grothendieck presentation over `view`.
pub fn two_colimit_presentation(d: &Diagram, view: &PosetView) -> Result<TwoColimit> {
    d.ensure_usable()?;
    if !view.is_subview_of(d.view()) {
        return Err(Error::Precondition(format!("{view} is not contained in {}", d.view())));
    }
    let elements = view.enumerate();
    let covers = view.covers();
    let mut p = GroupoidPresentation::new();
    let mut object_of = BTreeMap::new();
    for s in &elements {
        for (x, name) in d.groupoid(s)?.objects.iter().enumerate() {
            object_of.insert((*s, x), p.add_object(format!("({s}:{name})")));
        }
    }
    let mut lifted = BTreeMap::new();
    for s in &elements {
        let g = d.groupoid(s)?;
        for (e, gen) in g.generators.iter().enumerate() {
            let id = p.add_generator(format!("{s}:{}", gen.name), object_of[&(*s, gen.src)], object_of[&(*s, gen.dst)]);
            lifted.insert((*s, e), id);
        }
    }
    let mut lambda = BTreeMap::new();
    for c in &covers {
        let f = d.cover_functor(c)?;
        for (x, name) in f.domain.objects.iter().enumerate() {
            let id = p.add_generator(
                format!("l({c}):{name}"),
                object_of[&(c.lower, x)],
                object_of[&(c.upper, f.object_map[x])],
            );
            lambda.insert((*c, x), id);
        }
    }
    let lift = |s: &Subset, w: &Word| -> Word {
        Word::new(
            object_of[&(*s, w.start)],
            w.letters.iter().map(|l| Letter { gen: lifted[&(*s, l.gen)], inverse: l.inverse }).collect(),
        )
    };
    for s in &elements {
        for r in &d.groupoid(s)?.relations {
            p.add_relation(lift(s, &r.lhs), lift(s, &r.rhs))?;
        }
    }
    for c in &covers {
        let f = d.cover_functor(c)?;
        for (e, gen) in f.domain.generators.iter().enumerate() {
            let start = object_of[&(c.lower, gen.src)];
            let lhs = Word::new(start, vec![Letter::fwd(lifted[&(c.lower, e)]), Letter::fwd(lambda[&(*c, gen.dst)])]);
            let mut rhs = vec![Letter::fwd(lambda[&(*c, gen.src)])];
            rhs.extend(lift(&c.upper, &f.generator_map[e]).letters);
            p.add_relation(lhs, Word::new(start, rhs))?;
        }
    }
    for dm in view.diamonds() {
        let cl = CoverRelation { lower: dm.bottom, upper: dm.left };
        let cr = CoverRelation { lower: dm.bottom, upper: dm.right };
        let lt = CoverRelation { lower: dm.left, upper: dm.top };
        let rt = CoverRelation { lower: dm.right, upper: dm.top };
        let (fl, fr) = (d.cover_functor(&cl)?, d.cover_functor(&cr)?);
        for x in 0..d.groupoid(&dm.bottom)?.objects.len() {
            let start = object_of[&(dm.bottom, x)];
            let lhs = vec![Letter::fwd(lambda[&(cl, x)]), Letter::fwd(lambda[&(lt, fl.object_map[x])])];
            let rhs = vec![Letter::fwd(lambda[&(cr, x)]), Letter::fwd(lambda[&(rt, fr.object_map[x])])];
            p.add_relation(Word::new(start, lhs), Word::new(start, rhs))?;
        }
    }
    let p = Arc::new(p);
    let mut insertions = BTreeMap::new();
    for s in &elements {
        let g = d.groupoid(s)?;
        let object_map = (0..g.objects.len()).map(|x| object_of[&(*s, x)]).collect();
        let generator_map = g
            .generators
            .iter()
            .enumerate()
            .map(|(e, gen)| Word::new(object_of[&(*s, gen.src)], vec![Letter::fwd(lifted[&(*s, e)])]))
            .collect();
        insertions.insert(*s, FunctorPresentation::new(g.clone(), p.clone(), object_map, generator_map));
    }
    Ok(TwoColimit { groupoid: p, object_of, lifted, lambda, insertions })
}

/// `J`: the functor out of the 2-colimit determined by a descent datum.
pub fn j_functor(shape: &DescentShape, tc: &TwoColimit, dobj: &DescentObject) -> FiniteFunctor {
    let n_obj = tc.groupoid.objects.len();
    let n_gen = tc.groupoid.generators.len();
    let mut objects = vec![0; n_obj];
    let mut gens = vec![Morphism { src: 0, dst: 0, elem: 0 }; n_gen];
    for (i, s) in shape.elements.iter().enumerate() {
        let f = &dobj.functors[i];
        for (x, &y) in f.objects.iter().enumerate() {
            objects[tc.object_of[&(*s, x)]] = y;
        }
        for (e, &m) in f.gens.iter().enumerate() {
            gens[tc.lifted[&(*s, e)]] = m;
        }
    }
    for (c, cover) in shape.covers.iter().enumerate() {
        for (x, &m) in dobj.transitions[c].iter().enumerate() {
            gens[tc.lambda[&(*cover, x)]] = m;
        }
    }
    FiniteFunctor { objects, gens }
}

/// `K`: the descent datum `(θ ∘ L_S, θ(λ))` of a functor out of the
/// 2-colimit.
pub fn k_descent(shape: &DescentShape, tc: &TwoColimit, theta: &FiniteFunctor) -> DescentObject {
    let functors = shape
        .elements
        .iter()
        .enumerate()
        .map(|(i, s)| FiniteFunctor {
            objects: (0..shape.groupoids[i].objects.len()).map(|x| theta.objects[tc.object_of[&(*s, x)]]).collect(),
            gens: (0..shape.groupoids[i].generators.len()).map(|e| theta.gens[tc.lifted[&(*s, e)]]).collect(),
        })
        .collect();
    let transitions = shape
        .covers
        .iter()
        .enumerate()
        .map(|(c, cover)| {
            let (s, _) = shape.cover_ends(c);
            (0..shape.groupoids[s].objects.len()).map(|x| theta.gens[tc.lambda[&(*cover, x)]]).collect()
        })
        .collect();
    DescentObject { functors, transitions }
}

/// The composite transition `A_{S,T}(x)` along the increasing chain.
pub fn transition_between(
    shape: &DescentShape,
    h: &FiniteGroupoid,
    d: &Diagram,
    dobj: &DescentObject,
    s: &Subset,
    t: &Subset,
    x: ObjId,
) -> Result<Morphism> {
    if !s.is_subset_of(t) {
        return Err(Error::Precondition(format!("{s} is not contained in {t}")));
    }
    let si = shape.element_index(s).ok_or_else(|| Error::Precondition(format!("{s} is not in the view")))?;
    let mut acc = h.identity(dobj.functors[si].objects[x]);
    let mut cur = *s;
    let mut obj = x;
    for m in s.missing_from(t) {
        let next = cur.with(m)?;
        let c = CoverRelation { lower: cur, upper: next };
        let ci = shape.cover_index(&c).ok_or_else(|| Error::Precondition(format!("cover {c} is not in the view")))?;
        acc = h.then(acc, dobj.transitions[ci][obj]);
        obj = d.cover_functor(&c)?.object_map[obj];
        cur = next;
    }
    Ok(acc)
}

/// `J(D)` on the arrow of the Grothendieck construction given by
/// `α: Φ_{S,T}(x) → y` in `Φ(T)`: the composite `X_T(α) ∘ A_{S,T}(x)`.
#[allow(clippy::too_many_arguments)]
pub fn j_morphism(
    shape: &DescentShape,
    h: &FiniteGroupoid,
    d: &Diagram,
    dobj: &DescentObject,
    s: &Subset,
    t: &Subset,
    x: ObjId,
    alpha: &Word,
) -> Result<Morphism> {
    let phi = functor_between(d, s, t)?;
    if alpha.start != phi.object_map[x] {
        return Err(Error::Precondition("α must start at Φ_{S,T}(x)".into()));
    }
    let ti = shape.element_index(t).ok_or_else(|| Error::Precondition(format!("{t} is not in the view")))?;
    let a = transition_between(shape, h, d, dobj, s, t, x)?;
    Ok(h.then(a, dobj.functors[ti].eval_word(h, alpha)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoDecompositionReport {
    pub direct: GroupoidInvariants,
    pub decomposed: GroupoidInvariants,
    pub invariants_agree: bool,
}

/// Compares `2colim_{𝔟(n)} Φ` with the homotopy pushout of
/// `Φ({1..n−1}) ← 2colim_{𝔟(n−1)} Φ → 2colim_{𝔟′(n−1)} Φ`.
pub fn pushout_decomposition_2colim(d: &Diagram) -> Result<TwoDecompositionReport> {
    let n = d.ground_n();
    if !matches!(d.view().kind(), ViewKind::Full) || n < 2 {
        return Err(Error::Precondition("pushout decomposition needs a Full(n) view with n ≥ 2".into()));
    }
    let direct = two_colimit_presentation(d, d.view())?;
    let (lower, upper, top) = partition_b(n)?;
    let a = two_colimit_presentation(d, &lower)?;
    let c = two_colimit_presentation(d, &upper)?;
    let top_g = d.groupoid(&top)?.clone();
    let ag = &a.groupoid;
    let mut f_obj = vec![0; ag.objects.len()];
    let mut g_obj = vec![0; ag.objects.len()];
    for (&(s, x), &o) in &a.object_of {
        f_obj[o] = functor_between(d, &s, &top)?.object_map[x];
        let sp = s.with(n)?;
        g_obj[o] = c.object_of[&(sp, d.cover_functor(&CoverRelation { lower: s, upper: sp })?.object_map[x])];
    }
    let mut f_gen = vec![Word::identity(0); ag.generators.len()];
    let mut g_gen = vec![Word::identity(0); ag.generators.len()];
    for (&(s, e), &id) in &a.lifted {
        let sp = s.with(n)?;
        f_gen[id] = functor_between(d, &s, &top)?.generator_map[e].clone();
        let w = &d.cover_functor(&CoverRelation { lower: s, upper: sp })?.generator_map[e];
        g_gen[id] = c.insertions[&sp].apply_word(w);
    }
    for (&(cv, x), &id) in &a.lambda {
        f_gen[id] = Word::identity(functor_between(d, &cv.lower, &top)?.object_map[x]);
        let (lp, up) = (cv.lower.with(n)?, cv.upper.with(n)?);
        let y = d.cover_functor(&CoverRelation { lower: cv.lower, upper: lp })?.object_map[x];
        g_gen[id] = Word::new(c.object_of[&(lp, y)], vec![Letter::fwd(c.lambda[&(CoverRelation { lower: lp, upper: up }, y)])]);
    }
    let f = FunctorPresentation::new(ag.clone(), top_g, f_obj, f_gen);
    let g = FunctorPresentation::new(ag.clone(), c.groupoid.clone(), g_obj, g_gen);
    let hp = homotopy_pushout(&f, &g)?;
    let x = groupoid_invariants(&direct.groupoid)?;
    let y = groupoid_invariants(&hp.groupoid)?;
    Ok(TwoDecompositionReport { invariants_agree: x.agrees_with(&y), direct: x, decomposed: y })
}
