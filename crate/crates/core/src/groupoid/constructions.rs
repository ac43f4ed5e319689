//! Pushouts of presented groupoids: strict (objects glued) and homotopy
//! (double mapping cylinder).

use std::sync::Arc;

use super::functor::FunctorPresentation;
use super::presentation::{GroupoidPresentation, Letter, Word};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// A presentation together with the two functors into it.
#[derive(Clone, Debug)]
pub struct PushoutSquare {
    pub groupoid: Arc<GroupoidPresentation>,
    pub from_left: FunctorPresentation,
    pub from_right: FunctorPresentation,
}

fn check_span(f: &FunctorPresentation, g: &FunctorPresentation) -> Result<()> {
    if f.domain != g.domain {
        return Err(Error::Precondition("pushout legs must share their domain".into()));
    }
    f.check_shape()?;
    g.check_shape()
}

fn transport(w: &Word, obj: &[usize], gen_offset: usize) -> Word {
    Word::new(
        obj[w.start],
        w.letters.iter().map(|l| Letter { gen: l.gen + gen_offset, inverse: l.inverse }).collect(),
    )
}

/// `B ⊔_A C` for `f: A → B`, `g: A → C`: objects of `B ⊔ C` glued along
/// `f(a) ~ g(a)`, generators of both sides, their relations, and
/// `f(α) = g(α)` for every generator `α` of `A`.
pub fn pushout(f: &FunctorPresentation, g: &FunctorPresentation) -> Result<PushoutSquare> {
    check_span(f, g)?;
    let (b, c) = (&f.codomain, &g.codomain);
    let nb = b.objects.len();
    let mut uf = UnionFind::new(nb + c.objects.len());
    for a in 0..f.domain.objects.len() {
        uf.union(f.object_map[a], nb + g.object_map[a]);
    }
    let (class, count) = uf.classes();
    let mut p = GroupoidPresentation::new();
    let mut named = vec![false; count];
    for i in 0..nb + c.objects.len() {
        if !named[class[i]] {
            named[class[i]] = true;
            let name = if i < nb { format!("L.{}", b.objects[i]) } else { format!("R.{}", c.objects[i - nb]) };
            p.add_object(name);
        }
    }
    let left_obj: Vec<usize> = (0..nb).map(|i| class[i]).collect();
    let right_obj: Vec<usize> = (0..c.objects.len()).map(|i| class[nb + i]).collect();
    for e in &b.generators {
        p.add_generator(format!("L.{}", e.name), left_obj[e.src], left_obj[e.dst]);
    }
    let off = b.generators.len();
    for e in &c.generators {
        p.add_generator(format!("R.{}", e.name), right_obj[e.src], right_obj[e.dst]);
    }
    for r in &b.relations {
        p.add_relation(transport(&r.lhs, &left_obj, 0), transport(&r.rhs, &left_obj, 0))?;
    }
    for r in &c.relations {
        p.add_relation(transport(&r.lhs, &right_obj, off), transport(&r.rhs, &right_obj, off))?;
    }
    for (fw, gw) in f.generator_map.iter().zip(&g.generator_map) {
        p.add_relation(transport(fw, &left_obj, 0), transport(gw, &right_obj, off))?;
    }
    let p = Arc::new(p);
    let from_left = FunctorPresentation::new(
        b.clone(),
        p.clone(),
        left_obj.clone(),
        b.generators.iter().enumerate().map(|(i, e)| Word::new(left_obj[e.src], vec![Letter::fwd(i)])).collect(),
    );
    let from_right = FunctorPresentation::new(
        c.clone(),
        p.clone(),
        right_obj.clone(),
        c.generators
            .iter()
            .enumerate()
            .map(|(i, e)| Word::new(right_obj[e.src], vec![Letter::fwd(off + i)]))
            .collect(),
    );
    Ok(PushoutSquare { groupoid: p, from_left, from_right })
}

/// Homotopy pushout: objects `A ⊔ B ⊔ C`, generators of all three, and
/// arrows `p_a: a → f(a)`, `q_a: a → g(a)` made natural by the relations
/// `α · p_y = p_x · f(α)` and likewise for `q`.
pub fn homotopy_pushout(f: &FunctorPresentation, g: &FunctorPresentation) -> Result<PushoutSquare> {
    check_span(f, g)?;
    let (a, b, c) = (&f.domain, &f.codomain, &g.codomain);
    let (na, nb) = (a.objects.len(), b.objects.len());
    let mut p = GroupoidPresentation::new();
    for o in &a.objects {
        p.add_object(format!("M.{o}"));
    }
    for o in &b.objects {
        p.add_object(format!("L.{o}"));
    }
    for o in &c.objects {
        p.add_object(format!("R.{o}"));
    }
    let a_obj: Vec<usize> = (0..na).collect();
    let b_obj: Vec<usize> = (na..na + nb).collect();
    let c_obj: Vec<usize> = (na + nb..na + nb + c.objects.len()).collect();
    for e in &a.generators {
        p.add_generator(format!("M.{}", e.name), e.src, e.dst);
    }
    let b_off = a.generators.len();
    for e in &b.generators {
        p.add_generator(format!("L.{}", e.name), b_obj[e.src], b_obj[e.dst]);
    }
    let c_off = b_off + b.generators.len();
    for e in &c.generators {
        p.add_generator(format!("R.{}", e.name), c_obj[e.src], c_obj[e.dst]);
    }
    let p_off = c_off + c.generators.len();
    for (x, o) in a.objects.iter().enumerate() {
        p.add_generator(format!("p({o})"), x, b_obj[f.object_map[x]]);
    }
    let q_off = p_off + na;
    for (x, o) in a.objects.iter().enumerate() {
        p.add_generator(format!("q({o})"), x, c_obj[g.object_map[x]]);
    }
    for r in &a.relations {
        p.add_relation(transport(&r.lhs, &a_obj, 0), transport(&r.rhs, &a_obj, 0))?;
    }
    for r in &b.relations {
        p.add_relation(transport(&r.lhs, &b_obj, b_off), transport(&r.rhs, &b_obj, b_off))?;
    }
    for r in &c.relations {
        p.add_relation(transport(&r.lhs, &c_obj, c_off), transport(&r.rhs, &c_obj, c_off))?;
    }
    for (leg, objs, off, cyl) in [(f, &b_obj, b_off, p_off), (g, &c_obj, c_off, q_off)] {
        for (i, e) in a.generators.iter().enumerate() {
            let lhs = Word::new(e.src, vec![Letter::fwd(i), Letter::fwd(cyl + e.dst)]);
            let mut letters = vec![Letter::fwd(cyl + e.src)];
            letters.extend(transport(&leg.generator_map[i], objs, off).letters);
            p.add_relation(lhs, Word::new(e.src, letters))?;
        }
    }
    let p = Arc::new(p);
    let inclusion = |src: &Arc<GroupoidPresentation>, objs: &[usize], off: usize| {
        FunctorPresentation::new(
            src.clone(),
            p.clone(),
            objs.to_vec(),
            src.generators.iter().enumerate().map(|(i, e)| Word::new(objs[e.src], vec![Letter::fwd(off + i)])).collect(),
        )
    };
    let from_left = inclusion(b, &b_obj, b_off);
    let from_right = inclusion(c, &c_obj, c_off);
    Ok(PushoutSquare { groupoid: p, from_left, from_right })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::invariants::groupoid_invariants;
    use crate::groupoid::AbelianInvariant;

    fn collapse_pair() -> FunctorPresentation {
        let d = Arc::new(GroupoidPresentation::discrete(&["c", "d"]));
        let p = Arc::new(GroupoidPresentation::discrete(&["*"]));
        FunctorPresentation::from_names(d, p, &[("c", "*"), ("d", "*")], &[]).unwrap()
    }

    #[test]
    fn strict_pushout_of_collapses_is_a_point() {
        let f = collapse_pair();
        let po = pushout(&f, &f).unwrap();
        let inv = groupoid_invariants(&po.groupoid).unwrap();
        assert_eq!(inv.object_count, 1);
        assert!(inv.components[0].abelianization.is_trivial());
    }

    #[test]
    fn homotopy_pushout_of_collapses_is_a_circle() {
        let f = collapse_pair();
        let po = homotopy_pushout(&f, &f).unwrap();
        let inv = groupoid_invariants(&po.groupoid).unwrap();
        assert_eq!(inv.component_count, 1);
        assert_eq!(inv.components[0].abelianization, AbelianInvariant { free_rank: 1, torsion: vec![] });
    }
}
