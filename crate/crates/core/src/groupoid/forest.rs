use std::collections::VecDeque;

use super::presentation::{GenId, GroupoidPresentation, ObjId};
use crate::union_find::UnionFind;

/// An edge of a breadth-first spanning tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub gen: GenId,
    pub parent: ObjId,
    pub child: ObjId,
    /// `true` when the generator runs parent → child.
    pub forward: bool,
}

/// Breadth-first spanning forest of the underlying graph of a presentation.
///
/// Tie-break: neighbours are visited by smallest object index, then
/// smallest generator index. Loops never enter the tree.
#[derive(Clone, Debug)]
pub struct SpanningForest {
    /// Component index of each object (components numbered by root order).
    pub component: Vec<usize>,
    pub roots: Vec<ObjId>,
    /// Objects of each component in BFS order.
    pub members: Vec<Vec<ObjId>>,
    /// Tree edges of each component in BFS discovery order.
    pub edges: Vec<Vec<TreeEdge>>,
    pub is_tree: Vec<bool>,
    /// Tree edge entering each non-root object.
    pub parent_edge: Vec<Option<TreeEdge>>,
}

fn adjacency(g: &GroupoidPresentation) -> Vec<Vec<(ObjId, GenId, bool)>> {
    let mut adj = vec![Vec::new(); g.objects.len()];
    for (i, gen) in g.generators.iter().enumerate() {
        if gen.src == gen.dst {
            continue;
        }
        adj[gen.src].push((gen.dst, i, true));
        adj[gen.dst].push((gen.src, i, false));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    adj
}

impl SpanningForest {
    /// Forest over all components, each rooted at its smallest object.
    pub fn new(g: &GroupoidPresentation) -> Self {
        Self::build(g, None)
    }

    /// Forest whose first component is rooted at `base`; other components
    /// follow rooted at their smallest objects.
    pub fn rooted_at(g: &GroupoidPresentation, base: ObjId) -> Self {
        Self::build(g, Some(base))
    }

    fn build(g: &GroupoidPresentation, base: Option<ObjId>) -> Self {
        let n = g.objects.len();
        let adj = adjacency(g);
        let mut forest = SpanningForest {
            component: vec![usize::MAX; n],
            roots: Vec::new(),
            members: Vec::new(),
            edges: Vec::new(),
            is_tree: vec![false; g.generators.len()],
            parent_edge: vec![None; n],
        };
        let order: Vec<ObjId> = base.into_iter().chain(0..n).collect();
        for root in order {
            if forest.component[root] != usize::MAX {
                continue;
            }
            let c = forest.roots.len();
            forest.roots.push(root);
            forest.component[root] = c;
            let mut members = vec![root];
            let mut edges = Vec::new();
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &(w, gen, fwd) in &adj[v] {
                    if forest.component[w] != usize::MAX {
                        continue;
                    }
                    forest.component[w] = c;
                    let e = TreeEdge { gen, parent: v, child: w, forward: fwd };
                    forest.is_tree[gen] = true;
                    forest.parent_edge[w] = Some(e);
                    edges.push(e);
                    members.push(w);
                    queue.push_back(w);
                }
            }
            forest.members.push(members);
            forest.edges.push(edges);
        }
        forest
    }

    pub fn component_count(&self) -> usize {
        self.roots.len()
    }
}

/// Partition of the objects into connected components (union-find over the
/// generating arrows). Classes are ordered by smallest object; each class is
/// sorted.
pub fn connected_components(g: &GroupoidPresentation) -> Vec<Vec<ObjId>> {
    let mut uf = UnionFind::new(g.objects.len());
    for gen in &g.generators {
        uf.union(gen.src, gen.dst);
    }
    let (ids, count) = uf.classes();
    let mut out = vec![Vec::new(); count];
    for (obj, id) in ids.into_iter().enumerate() {
        out[id].push(obj);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_examples() {
        let g = GroupoidPresentation::discrete(&["a", "b"]);
        assert_eq!(connected_components(&g).len(), 2);
        let mut g = GroupoidPresentation::discrete(&["a", "b"]);
        g.add_generator("e", 0, 1);
        assert_eq!(connected_components(&g), vec![vec![0, 1]]);
    }

    #[test]
    fn bfs_tie_break_prefers_small_objects_then_generators() {
        let mut g = GroupoidPresentation::discrete(&["a", "b", "c"]);
        g.add_generator("x", 0, 2);
        g.add_generator("y", 1, 0);
        g.add_generator("z", 0, 1);
        let f = SpanningForest::new(&g);
        // from a: neighbours (b via y), (b via z), (c via x); b first with y
        assert_eq!(f.edges[0][0].gen, 1);
        assert!(!f.edges[0][0].forward);
        assert_eq!(f.edges[0][1].gen, 0);
        assert!(!f.is_tree[2]);
        assert_eq!(f.members[0], vec![0, 1, 2]);
    }
}
