//! Replacing a functor by one that is injective on objects.

use std::sync::Arc;

use super::functor::FunctorPresentation;
use super::presentation::{GroupoidPresentation, Letter, Word};
use crate::error::Result;

/// The factorisation `G → H′ → H` of a functor `f: G → H`.
#[derive(Clone, Debug)]
pub struct MappingCylinder {
    pub h_prime: Arc<GroupoidPresentation>,
    /// Injective on objects.
    pub f_prime: FunctorPresentation,
    /// `H′ → H`, an equivalence with `retraction ∘ f_prime = f`.
    pub retraction: FunctorPresentation,
    /// `H → H′`, inverse to the retraction up to the new arrows.
    pub inclusion: FunctorPresentation,
}

fn fresh(taken: &GroupoidPresentation, base: String, objects: bool) -> String {
    let exists = |s: &str| {
        if objects {
            taken.object_index(s).is_some()
        } else {
            taken.generator_index(s).is_some()
        }
    };
    let mut name = base;
    while exists(&name) {
        name.push('\'');
    }
    name
}

/// Adds a copy `x~` of every object of `G` together with an invertible
/// arrow `x~ → f(x)`, and sends `e: x → y` to the conjugate of `f(e)` by
/// those arrows.
pub fn mapping_cylinder(f: &FunctorPresentation) -> Result<MappingCylinder> {
    f.check_shape()?;
    let g = &f.domain;
    let h = &f.codomain;
    let mut hp = (**h).clone();
    let base_objects = h.objects.len();
    let base_gens = h.generators.len();
    for (x, name) in g.objects.iter().enumerate() {
        let obj = fresh(&hp, format!("{name}~"), true);
        let o = hp.add_object(obj);
        let arrow = fresh(&hp, format!("c({name})"), false);
        hp.add_generator(arrow, o, f.object_map[x]);
    }
    let hp = Arc::new(hp);
    let cyl = |x: usize| Letter::fwd(base_gens + x);
    let f_prime = FunctorPresentation::new(
        g.clone(),
        hp.clone(),
        (0..g.objects.len()).map(|x| base_objects + x).collect(),
        g.generators
            .iter()
            .zip(&f.generator_map)
            .map(|(e, img)| {
                let mut letters = vec![cyl(e.src)];
                letters.extend_from_slice(&img.letters);
                letters.push(cyl(e.dst).flipped());
                Word::new(base_objects + e.src, super::reduce_letters(&letters))
            })
            .collect(),
    );
    let mut object_map: Vec<usize> = (0..base_objects).collect();
    object_map.extend(f.object_map.iter().copied());
    let mut generator_map: Vec<Word> =
        h.generators.iter().enumerate().map(|(i, e)| Word::new(e.src, vec![Letter::fwd(i)])).collect();
    generator_map.extend(f.object_map.iter().map(|&y| Word::identity(y)));
    let retraction = FunctorPresentation::new(hp.clone(), h.clone(), object_map, generator_map);
    let inclusion = FunctorPresentation::new(
        h.clone(),
        hp.clone(),
        (0..base_objects).collect(),
        h.generators.iter().enumerate().map(|(i, e)| Word::new(e.src, vec![Letter::fwd(i)])).collect(),
    );
    Ok(MappingCylinder { h_prime: hp, f_prime, retraction, inclusion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::forest::connected_components;
    use crate::groupoid::functor::{compose_functors, is_injective_on_objects, validate_functor};

    #[test]
    fn collapse_becomes_injective() {
        let d = Arc::new(GroupoidPresentation::discrete(&["a", "b"]));
        let p = Arc::new(GroupoidPresentation::discrete(&["*"]));
        let f = FunctorPresentation::from_names(d, p, &[("a", "*"), ("b", "*")], &[]).unwrap();
        let c = mapping_cylinder(&f).unwrap();
        assert_eq!(c.h_prime.objects, vec!["*", "a~", "b~"]);
        assert_eq!(c.h_prime.generators.len(), 2);
        assert!(is_injective_on_objects(&c.f_prime));
        assert_eq!(connected_components(&c.h_prime).len(), 1);
        assert_eq!(compose_functors(&c.f_prime, &c.retraction).unwrap(), f);
        for func in [&c.f_prime, &c.retraction, &c.inclusion] {
            validate_functor(func, 100, true).unwrap();
        }
    }
}
