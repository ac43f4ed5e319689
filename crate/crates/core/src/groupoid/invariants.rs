//! Equivalence invariants of presented groupoids: components and the
//! abelianized vertex group of each.

use serde::Serialize;

use super::forest::SpanningForest;
use super::group::{abelianization, vertex_group, AbelianInvariant};
use super::presentation::GroupoidPresentation;
use super::tietze::tietze_simplify;
use crate::error::Result;

/// Tietze moves spent per vertex group when summarising.
pub const TIETZE_FUEL: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentInvariant {
    pub base: String,
    pub objects: usize,
    pub generators: usize,
    pub relators: usize,
    /// The simplified vertex group, rendered.
    pub vertex_group: String,
    pub abelianization: AbelianInvariant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidInvariants {
    pub object_count: usize,
    pub component_count: usize,
    pub components: Vec<ComponentInvariant>,
}

impl GroupoidInvariants {
    /// Abelianizations as a sorted multiset; together with the component
    /// count this is invariant under equivalence.
    pub fn abelian_profile(&self) -> Vec<AbelianInvariant> {
        let mut v: Vec<_> = self.components.iter().map(|c| c.abelianization.clone()).collect();
        v.sort();
        v
    }

    /// Whether the equivalence-invariant parts agree.
    pub fn agrees_with(&self, other: &GroupoidInvariants) -> bool {
        self.component_count == other.component_count && self.abelian_profile() == other.abelian_profile()
    }
}

pub fn groupoid_invariants(g: &GroupoidPresentation) -> Result<GroupoidInvariants> {
    let forest = SpanningForest::new(g);
    let mut components = Vec::new();
    for (c, &root) in forest.roots.iter().enumerate() {
        let raw = vertex_group(g, root)?;
        let simple = tietze_simplify(&raw, TIETZE_FUEL);
        let ab = abelianization(&simple)?;
        components.push(ComponentInvariant {
            base: g.objects[root].clone(),
            objects: forest.members[c].len(),
            generators: simple.generators.len(),
            relators: simple.relators.len(),
            vertex_group: simple.to_string(),
            abelianization: ab,
        });
    }
    Ok(GroupoidInvariants {
        object_count: g.objects.len(),
        component_count: components.len(),
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_groupoid() {
        let mut g = GroupoidPresentation::discrete(&["a", "b"]);
        g.add_generator("e1", 0, 1);
        g.add_generator("e2", 0, 1);
        let inv = groupoid_invariants(&g).unwrap();
        assert_eq!(inv.component_count, 1);
        assert_eq!(inv.components[0].abelianization, AbelianInvariant { free_rank: 1, torsion: vec![] });
        assert_eq!(inv.components[0].generators, 1);
        assert_eq!(inv.components[0].relators, 0);
    }
}
