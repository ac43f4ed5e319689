//! Functors between presented groupoids, given on generators.

use std::fmt;
use std::sync::Arc;

use super::presentation::{invert_letters, reduce_letters, GroupoidPresentation, ObjId, Word};
use super::word_problem::{WordSolver, WordVerdict};
use crate::error::{Error, Result};

/// Object map plus one codomain word per domain generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorPresentation {
    pub domain: Arc<GroupoidPresentation>,
    pub codomain: Arc<GroupoidPresentation>,
    pub object_map: Vec<ObjId>,
    pub generator_map: Vec<Word>,
}

impl FunctorPresentation {
    pub fn new(
        domain: Arc<GroupoidPresentation>,
        codomain: Arc<GroupoidPresentation>,
        object_map: Vec<ObjId>,
        generator_map: Vec<Word>,
    ) -> Self {
        FunctorPresentation { domain, codomain, object_map, generator_map }
    }

    /// Builds a functor from object-name pairs and generator images given as
    /// signed codomain generator names; each image starts at the image of
    /// the generator's source.
    pub fn from_names(
        domain: Arc<GroupoidPresentation>,
        codomain: Arc<GroupoidPresentation>,
        objects: &[(&str, &str)],
        generators: &[(&str, &[&str])],
    ) -> Result<Self> {
        let mut object_map = vec![usize::MAX; domain.objects.len()];
        for (x, y) in objects {
            let xi = domain
                .object_index(x)
                .ok_or_else(|| Error::InvalidFunctor(format!("unknown domain object `{x}`")))?;
            let yi = codomain
                .object_index(y)
                .ok_or_else(|| Error::InvalidFunctor(format!("unknown codomain object `{y}`")))?;
            object_map[xi] = yi;
        }
        if let Some(i) = object_map.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidFunctor(format!("object `{}` has no image", domain.objects[i])));
        }
        let mut generator_map: Vec<Option<Word>> = vec![None; domain.generators.len()];
        for (e, letters) in generators {
            let ei = domain
                .generator_index(e)
                .ok_or_else(|| Error::InvalidFunctor(format!("unknown domain generator `{e}`")))?;
            let start = object_map[domain.generators[ei].src];
            let mut ls = Vec::new();
            for l in letters.iter() {
                ls.push(codomain.parse_letter(l)?);
            }
            generator_map[ei] = Some(Word::new(start, ls));
        }
        let generator_map = generator_map
            .into_iter()
            .enumerate()
            .map(|(i, w)| {
                w.ok_or_else(|| {
                    Error::InvalidFunctor(format!("generator `{}` has no image", domain.generators[i].name))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = FunctorPresentation { domain, codomain, object_map, generator_map };
        f.check_shape()?;
        Ok(f)
    }

    pub fn apply_object(&self, x: ObjId) -> ObjId {
        self.object_map[x]
    }

    /// Image of a domain word, freely reduced.
    pub fn apply_word(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for l in &w.letters {
            let img = &self.generator_map[l.gen].letters;
            if l.inverse {
                letters.extend(invert_letters(img));
            } else {
                letters.extend_from_slice(img);
            }
        }
        Word::new(self.object_map[w.start], reduce_letters(&letters))
    }

    /// Checks sizes and that every generator image runs between the images
    /// of the generator's endpoints.
    pub fn check_shape(&self) -> Result<()> {
        if self.object_map.len() != self.domain.objects.len() {
            return Err(Error::InvalidFunctor("object map has the wrong length".into()));
        }
        if self.generator_map.len() != self.domain.generators.len() {
            return Err(Error::InvalidFunctor("generator map has the wrong length".into()));
        }
        if let Some(&o) = self.object_map.iter().find(|&&o| o >= self.codomain.objects.len()) {
            return Err(Error::InvalidFunctor(format!("object image index {o} out of range")));
        }
        for (i, (gen, img)) in self.domain.generators.iter().zip(&self.generator_map).enumerate() {
            let end = self
                .codomain
                .end(img)
                .map_err(|e| Error::InvalidFunctor(format!("image of `{}`: {e}", gen.name)))?;
            if img.start != self.object_map[gen.src] || end != self.object_map[gen.dst] {
                return Err(Error::InvalidFunctor(format!(
                    "image of generator {i} (`{}`) does not connect the images of its endpoints",
                    gen.name
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for FunctorPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, &y) in self.object_map.iter().enumerate() {
            writeln!(f, "  {} |-> {}", self.domain.objects[x], self.codomain.objects[y])?;
        }
        for (gen, img) in self.domain.generators.iter().zip(&self.generator_map) {
            writeln!(f, "  {} |-> {}", gen.name, self.codomain.format_word(img))?;
        }
        Ok(())
    }
}

/// Result of functor validation: warnings for relations whose preservation
/// could not be decided within fuel.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorValidation {
    pub warnings: Vec<String>,
    pub fuel_spent: u64,
}

/// Validates both presentations, the shape of `f`, and that every domain
/// relation maps to an equal pair. A `Distinct` verdict is an error; an
/// `Unknown` verdict is a warning, or an error when `strict`.
pub fn validate_functor(f: &FunctorPresentation, fuel: u64, strict: bool) -> Result<FunctorValidation> {
    f.domain.validate()?;
    f.codomain.validate()?;
    f.check_shape()?;
    let solver = WordSolver::new(&f.codomain);
    let mut out = FunctorValidation::default();
    for (i, r) in f.domain.relations.iter().enumerate() {
        let lhs = f.apply_word(&r.lhs);
        let rhs = f.apply_word(&r.rhs);
        match solver.word_equal(&lhs, &rhs, fuel)? {
            WordVerdict::Equal => {}
            WordVerdict::Distinct { .. } => {
                return Err(Error::InvalidFunctor(format!(
                    "relation {i} maps to distinct morphisms {} and {}",
                    f.codomain.format_word(&lhs),
                    f.codomain.format_word(&rhs)
                )))
            }
            WordVerdict::Unknown { fuel_spent } => {
                out.fuel_spent += fuel_spent;
                let msg = format!(
                    "relation {i}: could not decide {} = {} within fuel",
                    f.codomain.format_word(&lhs),
                    f.codomain.format_word(&rhs)
                );
                if strict {
                    return Err(Error::InvalidFunctor(msg));
                }
                out.warnings.push(msg);
            }
        }
    }
    Ok(out)
}

pub fn identity_functor(g: Arc<GroupoidPresentation>) -> FunctorPresentation {
    let object_map = (0..g.objects.len()).collect();
    let generator_map = g.generators.iter().enumerate().map(|(i, e)| Word::new(e.src, vec![super::Letter::fwd(i)])).collect();
    FunctorPresentation { domain: g.clone(), codomain: g, object_map, generator_map }
}

/// `g ∘ f`: first `f`, then `g`.
pub fn compose_functors(f: &FunctorPresentation, g: &FunctorPresentation) -> Result<FunctorPresentation> {
    if f.codomain != g.domain {
        return Err(Error::InvalidFunctor("codomain of the first functor is not the domain of the second".into()));
    }
    let object_map = f.object_map.iter().map(|&y| g.object_map[y]).collect();
    let generator_map = f.generator_map.iter().map(|w| g.apply_word(w)).collect();
    Ok(FunctorPresentation {
        domain: f.domain.clone(),
        codomain: g.codomain.clone(),
        object_map,
        generator_map,
    })
}

/// First pair of distinct objects with the same image, if any.
pub fn injectivity_witness(f: &FunctorPresentation) -> Option<(ObjId, ObjId)> {
    let mut first = vec![None; f.codomain.objects.len()];
    for (x, &y) in f.object_map.iter().enumerate() {
        match first[y] {
            Some(prev) => return Some((prev, x)),
            None => first[y] = Some(x),
        }
    }
    None
}

pub fn is_injective_on_objects(f: &FunctorPresentation) -> bool {
    injectivity_witness(f).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> Arc<GroupoidPresentation> {
        let mut g = GroupoidPresentation::discrete(&["a", "b"]);
        g.add_generator("e", 0, 1);
        Arc::new(g)
    }

    fn point() -> Arc<GroupoidPresentation> {
        Arc::new(GroupoidPresentation::discrete(&["*"]))
    }

    #[test]
    fn identity_validates_and_is_injective() {
        let g = interval();
        let id = identity_functor(g);
        assert!(validate_functor(&id, 10, true).unwrap().warnings.is_empty());
        assert!(is_injective_on_objects(&id));
    }

    #[test]
    fn wrong_endpoints_rejected() {
        let g = interval();
        let bad = FunctorPresentation::new(g.clone(), g.clone(), vec![0, 1], vec![Word::identity(0)]);
        assert!(validate_functor(&bad, 10, false).is_err());
    }

    #[test]
    fn collapse_of_discrete_pair() {
        let d = Arc::new(GroupoidPresentation::discrete(&["a", "b"]));
        let c = FunctorPresentation::from_names(d, point(), &[("a", "*"), ("b", "*")], &[]).unwrap();
        assert!(validate_functor(&c, 10, true).is_ok());
        assert_eq!(injectivity_witness(&c), Some((0, 1)));
    }

    #[test]
    fn composition_laws() {
        let g = interval();
        let c = FunctorPresentation::from_names(g.clone(), point(), &[("a", "*"), ("b", "*")], &[("e", &[])])
            .unwrap();
        let id = identity_functor(g.clone());
        assert_eq!(compose_functors(&id, &c).unwrap(), c);
        assert_eq!(compose_functors(&c, &identity_functor(point())).unwrap(), c);
        let inc = FunctorPresentation::from_names(
            Arc::new(GroupoidPresentation::discrete(&["a", "b"])),
            g,
            &[("a", "a"), ("b", "b")],
            &[],
        )
        .unwrap();
        let k = compose_functors(&inc, &c).unwrap();
        assert_eq!(k.object_map, vec![0, 0]);
        assert!(compose_functors(&c, &inc).is_err());
    }

    #[test]
    fn relation_mapped_to_distinct_errors() {
        let mut z2 = GroupoidPresentation::discrete(&["*"]);
        z2.add_generator("x", 0, 0);
        let xx = z2.word_from_names("*", &["x", "x"]).unwrap();
        z2.add_relation(xx, Word::identity(0)).unwrap();
        let mut z = GroupoidPresentation::discrete(&["*"]);
        z.add_generator("t", 0, 0);
        let f = FunctorPresentation::from_names(Arc::new(z2), Arc::new(z), &[("*", "*")], &[("x", &["t"])])
            .unwrap();
        assert!(validate_functor(&f, 100, false).is_err());
    }
}
