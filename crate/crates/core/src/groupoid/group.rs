//! Group presentations, vertex groups of presented groupoids, and
//! abelianization via Smith normal form.

use std::fmt;

use serde::Serialize;

use super::forest::SpanningForest;
use super::presentation::{invert_letters, reduce_letters, GroupoidPresentation, Letter, ObjId};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};

/// `⟨generators | relators⟩`; relator letters index into `generators`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<Letter>>,
}

impl GroupPresentation {
    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            if let Some(l) = r.iter().find(|l| l.gen >= self.generators.len()) {
                return Err(Error::InvalidPresentation(format!(
                    "relator uses unknown generator #{}",
                    l.gen
                )));
            }
        }
        Ok(())
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.relators.iter().map(|r| exponent_sums(r, self.generators.len())).collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> = self
            .relators
            .iter()
            .map(|r| {
                if r.is_empty() {
                    return "1".to_string();
                }
                r.iter()
                    .map(|l| {
                        let n = &self.generators[l.gen];
                        if l.inverse {
                            format!("{n}^-1")
                        } else {
                            n.clone()
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "⟨{} | {}⟩", self.generators.join(", "), rel.join(", "))
    }
}

pub fn exponent_sums(letters: &[Letter], gens: usize) -> Vec<i64> {
    let mut v = vec![0i64; gens];
    for l in letters {
        v[l.gen] += if l.inverse { -1 } else { 1 };
    }
    v
}

/// Free rank plus torsion divisors `d₁ | d₂ | …`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AbelianInvariant {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariant {
    pub fn trivial() -> Self {
        AbelianInvariant { free_rank: 0, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Abelian invariants of a group presentation.
pub fn abelianization(p: &GroupPresentation) -> Result<AbelianInvariant> {
    p.validate()?;
    let m = p.exponent_matrix();
    let s = smith_normal_form(&m, p.generators.len())?;
    let rank = s.rank();
    let torsion = s.invariant_factors().into_iter().filter(|&d| d > 1).map(|d| d as u64).collect();
    Ok(AbelianInvariant { free_rank: p.generators.len() - rank, torsion })
}

/// Which objects belong to the vertex-group computation, and how groupoid
/// generators map to group generators.
#[derive(Clone, Debug)]
pub struct VertexGroup {
    pub base: ObjId,
    pub group: GroupPresentation,
    /// Group generator index for each groupoid generator; `None` for tree
    /// arrows and generators outside the component.
    pub generator_of: Vec<Option<usize>>,
}

impl VertexGroup {
    /// Rewrites a groupoid word inside the component as a group word:
    /// tree arrows collapse, other letters become group generators.
    pub fn group_word(&self, letters: &[Letter]) -> Vec<Letter> {
        let mapped: Vec<Letter> = letters
            .iter()
            .filter_map(|l| self.generator_of[l.gen].map(|g| Letter { gen: g, inverse: l.inverse }))
            .collect();
        reduce_letters(&mapped)
    }
}

/// Automorphism group of `base`, presented by collapsing a BFS spanning tree
/// of its component.
pub fn vertex_group(g: &GroupoidPresentation, base: ObjId) -> Result<GroupPresentation> {
    Ok(vertex_group_data(g, base)?.group)
}

pub fn vertex_group_data(g: &GroupoidPresentation, base: ObjId) -> Result<VertexGroup> {
    if base >= g.objects.len() {
        return Err(Error::Precondition(format!("object index {base} not in presentation")));
    }
    let forest = SpanningForest::rooted_at(g, base);
    let comp = forest.component[base];
    let mut generator_of = vec![None; g.generators.len()];
    let mut group = GroupPresentation::default();
    for (i, gen) in g.generators.iter().enumerate() {
        if forest.component[gen.src] == comp && !forest.is_tree[i] {
            generator_of[i] = Some(group.generators.len());
            group.generators.push(gen.name.clone());
        }
    }
    let mut vg = VertexGroup { base, group, generator_of };
    let mut relators = Vec::new();
    for r in &g.relations {
        if forest.component[r.lhs.start] != comp {
            continue;
        }
        let mut loop_letters = r.lhs.letters.clone();
        loop_letters.extend(invert_letters(&r.rhs.letters));
        relators.push(vg.group_word(&loop_letters));
    }
    vg.group.relators = relators;
    Ok(vg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abelianization_examples() {
        let p = GroupPresentation {
            generators: vec!["x".into()],
            relators: vec![vec![Letter::fwd(0), Letter::fwd(0)]],
        };
        assert_eq!(abelianization(&p).unwrap(), AbelianInvariant { free_rank: 0, torsion: vec![2] });
        let p = GroupPresentation { generators: vec!["x".into(), "y".into()], relators: vec![] };
        assert_eq!(abelianization(&p).unwrap(), AbelianInvariant { free_rank: 2, torsion: vec![] });
    }

    #[test]
    fn triangle_graph_has_rank_one() {
        // Euler characteristic: E - V + 1 = 3 - 3 + 1
        let mut g = GroupoidPresentation::discrete(&["a", "b", "c"]);
        g.add_generator("x", 0, 1);
        g.add_generator("y", 1, 2);
        g.add_generator("z", 2, 0);
        let p = vertex_group(&g, 0).unwrap();
        assert_eq!(p.generators.len(), 1);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn discrete_object_has_trivial_group() {
        let g = GroupoidPresentation::discrete(&["a"]);
        let p = vertex_group(&g, 0).unwrap();
        assert!(p.generators.is_empty());
        assert!(abelianization(&p).unwrap().is_trivial());
        assert!(vertex_group(&g, 1).is_err());
    }

    #[test]
    fn display_forms() {
        let a = AbelianInvariant { free_rank: 1, torsion: vec![2, 4] };
        assert_eq!(a.to_string(), "Z + Z/2 + Z/4");
        assert_eq!(AbelianInvariant::trivial().to_string(), "0");
    }
}
