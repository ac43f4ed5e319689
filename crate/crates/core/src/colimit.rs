//! The colimit of a diagram of groupoids as a presentation.
//!
//! Objects are the classes of the object-set colimit; there is one generator
//! per generator of each `Φ(S)`; relations are the transported relations of
//! each `Φ(S)` together with `[e]_S = [Φ_{S,T}(e)]_T` for every cover.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::diagram::{functor_between, Diagram};
use crate::error::{Error, Result};
use crate::groupoid::constructions::pushout;
use crate::groupoid::{
    groupoid_invariants, reduce_letters, FunctorPresentation, GenId, GroupoidInvariants, GroupoidPresentation,
    Letter, Word,
};
use crate::poset::{partition_b, PosetView, Subset, ViewKind};
use crate::set_colimit::{set_colimit, SetColimit};

#[derive(Clone, Debug)]
pub struct ColimitResult {
    pub groupoid: Arc<GroupoidPresentation>,
    /// `Φ(S) → colim` for every element of the view.
    pub insertions: BTreeMap<Subset, FunctorPresentation>,
    pub objects: SetColimit,
    /// The `(S, e)` each generator comes from.
    pub generator_origin: Vec<(Subset, GenId)>,
}

/// Colimit presentation over `view`. With `cleanup`, a generator `(S, e)`
/// whose image along some cover is a single generator (or an identity) is
/// eliminated in favour of that image, larger elements first.
pub fn colimit_presentation(d: &Diagram, view: &PosetView, cleanup: bool) -> Result<ColimitResult> {
    let objects = set_colimit(d, view)?;
    let elements = view.enumerate();
    let mut p = GroupoidPresentation::new();
    for rep in &objects.representatives {
        p.add_object(format!("{}:{}", rep.0, d.groupoid(&rep.0)?.objects[rep.1]));
    }
    // raw generators, one per (S, e)
    let mut raw: Vec<(Subset, GenId)> = Vec::new();
    let mut raw_index: BTreeMap<(Subset, GenId), usize> = BTreeMap::new();
    for s in &elements {
        for e in 0..d.groupoid(s)?.generators.len() {
            raw_index.insert((*s, e), raw.len());
            raw.push((*s, e));
        }
    }
    let lift = |s: Subset, w: &Word| -> Vec<Letter> {
        w.letters.iter().map(|l| Letter { gen: raw_index[&(s, l.gen)], inverse: l.inverse }).collect()
    };
    let covers = view.covers();
    // substitution for eliminated raw generators, in raw letters
    let mut subst: Vec<Option<Vec<Letter>>> = vec![None; raw.len()];
    let resolve = |subst: &[Option<Vec<Letter>>], letters: &[Letter]| -> Vec<Letter> {
        let mut out = Vec::new();
        for &l in letters {
            match &subst[l.gen] {
                Some(w) => {
                    if l.inverse {
                        out.extend(crate::groupoid::invert_letters(w));
                    } else {
                        out.extend_from_slice(w);
                    }
                }
                None => out.push(l),
            }
        }
        reduce_letters(&out)
    };
    let class = |s: Subset, x: usize| objects.insertion(s, x).expect("in colimit");
    let mut relations: Vec<(usize, Vec<Letter>, Vec<Letter>)> = Vec::new();
    for s in &elements {
        for r in &d.groupoid(s)?.relations {
            relations.push((class(*s, r.lhs.start), lift(*s, &r.lhs), lift(*s, &r.rhs)));
        }
    }
    // identification relations, larger lower elements first when cleaning
    let mut order: Vec<_> = covers.clone();
    if cleanup {
        order.sort_by(|a, b| b.lower.cmp(&a.lower).then(a.upper.cmp(&b.upper)));
    }
    let mut identifications = Vec::new();
    for c in &order {
        let f = d.cover_functor(c)?;
        for e in 0..f.domain.generators.len() {
            let lhs = vec![Letter::fwd(raw_index[&(c.lower, e)])];
            let rhs = lift(c.upper, &f.generator_map[e]);
            if cleanup && subst[lhs[0].gen].is_none() {
                let resolved = resolve(&subst, &rhs);
                if resolved.len() <= 1 && resolved.iter().all(|l| l.gen != lhs[0].gen) {
                    subst[lhs[0].gen] = Some(resolved);
                    continue;
                }
            }
            identifications.push((class(c.lower, f.domain.generators[e].src), lhs, rhs));
        }
    }
    relations.extend(identifications);
    let survivors: Vec<usize> = (0..raw.len()).filter(|&i| subst[i].is_none()).collect();
    let mut renumber = vec![usize::MAX; raw.len()];
    for (new, &old) in survivors.iter().enumerate() {
        renumber[old] = new;
        let (s, e) = raw[old];
        let g = d.groupoid(&s)?;
        let gen = &g.generators[e];
        p.add_generator(format!("{s}:{}", gen.name), class(s, gen.src), class(s, gen.dst));
    }
    let final_letters = |letters: &[Letter]| -> Vec<Letter> {
        resolve(&subst, letters).into_iter().map(|l| Letter { gen: renumber[l.gen], inverse: l.inverse }).collect()
    };
    let mut seen_relations = std::collections::HashSet::new();
    for (start, lhs, rhs) in &relations {
        let l = final_letters(lhs);
        let r = final_letters(rhs);
        if l != r && seen_relations.insert((*start, l.clone(), r.clone())) {
            p.add_relation(Word::new(*start, l), Word::new(*start, r))?;
        }
    }
    let p = Arc::new(p);
    let mut insertions = BTreeMap::new();
    for s in &elements {
        let g = d.groupoid(s)?;
        let object_map = (0..g.objects.len()).map(|x| objects.insertion(*s, x).expect("in colimit")).collect();
        let generator_map = (0..g.generators.len())
            .map(|e| {
                let letters = final_letters(&[Letter::fwd(raw_index[&(*s, e)])]);
                Word::new(objects.insertion(*s, g.generators[e].src).expect("in colimit"), letters)
            })
            .collect();
        insertions.insert(*s, FunctorPresentation::new(g.clone(), p.clone(), object_map, generator_map));
    }
    let generator_origin = survivors.iter().map(|&i| raw[i]).collect();
    Ok(ColimitResult { groupoid: p, insertions, objects, generator_origin })
}

/// Invariants of a direct colimit and of its decomposition as a pushout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub direct: GroupoidInvariants,
    pub decomposed: GroupoidInvariants,
    pub objects_agree: bool,
    pub invariants_agree: bool,
}

/// Compares `colim_{𝔟(n)} Φ` with the pushout of
/// `Φ({1..n−1}) ← colim_{𝔟(n−1)} Φ → colim_{𝔟′(n−1)} Φ`.
pub fn pushout_decomposition_colim(d: &Diagram) -> Result<DecompositionReport> {
    let n = d.ground_n();
    if !matches!(d.view().kind(), ViewKind::Full) || n < 2 {
        return Err(Error::Precondition("pushout decomposition needs a Full(n) view with n ≥ 2".into()));
    }
    let direct = colimit_presentation(d, d.view(), true)?;
    let (lower, upper, top) = partition_b(n)?;
    let a = colimit_presentation(d, &lower, false)?;
    let c = colimit_presentation(d, &upper, false)?;
    let top_g = d.groupoid(&top)?.clone();
    // leg into Φ(N)
    let mut to_top_obj = Vec::new();
    for rep in &a.objects.representatives {
        to_top_obj.push(functor_between(d, &rep.0, &top)?.object_map[rep.1]);
    }
    let mut to_top_gen = Vec::new();
    let mut to_c_gen = Vec::new();
    for &(s, e) in &a.generator_origin {
        let f = functor_between(d, &s, &top)?;
        to_top_gen.push(f.generator_map[e].clone());
        let sp = s.with(n)?;
        let w = &d.cover_functor(&crate::poset::CoverRelation { lower: s, upper: sp })?.generator_map[e];
        to_c_gen.push(c.insertions[&sp].apply_word(w));
    }
    let mut to_c_obj = Vec::new();
    for rep in &a.objects.representatives {
        let sp = rep.0.with(n)?;
        let y = d.cover_functor(&crate::poset::CoverRelation { lower: rep.0, upper: sp })?.object_map[rep.1];
        to_c_obj.push(c.objects.insertion(sp, y).expect("in colimit"));
    }
    let f = FunctorPresentation::new(a.groupoid.clone(), top_g, to_top_obj, to_top_gen);
    let g = FunctorPresentation::new(a.groupoid.clone(), c.groupoid.clone(), to_c_obj, to_c_gen);
    let po = pushout(&f, &g)?;
    let x = groupoid_invariants(&direct.groupoid)?;
    let y = groupoid_invariants(&po.groupoid)?;
    Ok(DecompositionReport {
        objects_agree: x.object_count == y.object_count,
        invariants_agree: x.agrees_with(&y),
        direct: x,
        decomposed: y,
    })
}
