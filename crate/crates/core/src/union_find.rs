/// Disjoint-set forest with path compression and union by size.
///
/// The representative reported by [`UnionFind::min_of`] is the smallest
/// element index of a class, independent of merge order.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    min: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], min: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.min[ra] = self.min[ra].min(self.min[rb]);
        true
    }

    /// Smallest element in the class of `x`.
    pub fn min_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.min[r]
    }

    /// Dense class ids: classes numbered in order of their smallest element.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.len();
        let mut id_of_min = vec![usize::MAX; n];
        let mut next = 0;
        let mut out = vec![0; n];
        for (x, slot) in out.iter_mut().enumerate() {
            let m = self.min_of(x);
            if id_of_min[m] == usize::MAX {
                id_of_min[m] = next;
                next += 1;
            }
            *slot = id_of_min[m];
        }
        (out, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merges_and_orders_classes() {
        let mut uf = UnionFind::new(6);
        uf.union(4, 1);
        uf.union(5, 3);
        uf.union(3, 4);
        let (ids, count) = uf.classes();
        assert_eq!(count, 3);
        assert_eq!(ids, vec![0, 1, 2, 1, 1, 1]);
        assert_eq!(uf.min_of(5), 1);
        assert!(!uf.union(1, 5));
    }
}
