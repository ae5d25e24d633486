//! Containment forest of a nested-or-disjoint family of index sets.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// Directed containment forest. Vertex `i` corresponds to `vertices[i]`;
/// there is an edge `(r, s)` when `I_s` is maximal among the vertex sets
/// strictly inside `I_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    n: usize,
    vertices: Vec<IndexSet>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

/// JSON shape used by the `explain` command.
#[derive(Clone, Debug, Serialize)]
pub struct ForestDocument {
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
    pub roots: Vec<usize>,
    pub degrees: Vec<usize>,
    pub external: Vec<bool>,
}

impl Forest {
    /// Builds the forest; the collection must consist of distinct,
    /// admissible, pairwise compatible sets.
    pub fn build(n: usize, collection: &[IndexSet]) -> Result<Forest> {
        for (k, s) in collection.iter().enumerate() {
            if s.n() != n || !s.is_admissible() {
                return Err(Error::NotAdmissible(s.render()));
            }
            for t in &collection[..k] {
                if s == t {
                    return Err(Error::DuplicateVertex(s.render()));
                }
                if !s.is_compatible(t) {
                    return Err(Error::Incompatible(t.render(), s.render()));
                }
            }
        }
        Ok(Self::build_unchecked(n, collection))
    }

    /// Same as [`Forest::build`] without validation; callers guarantee a
    /// laminar family of distinct sets.
    pub fn build_unchecked(n: usize, collection: &[IndexSet]) -> Forest {
        let m = collection.len();
        let mut parent = vec![None; m];
        for s in 0..m {
            let mut best: Option<usize> = None;
            for r in 0..m {
                if r != s && collection[s].is_proper_subset(&collection[r]) {
                    match best {
                        Some(b) if collection[b].len() <= collection[r].len() => {}
                        _ => best = Some(r),
                    }
                }
            }
            parent[s] = best;
        }
        let mut children = vec![Vec::new(); m];
        for (s, p) in parent.iter().enumerate() {
            if let Some(r) = *p {
                children[r].push(s);
            }
        }
        Forest { n, vertices: collection.to_vec(), parent, children }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[IndexSet] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> IndexSet {
        self.vertices[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.len())
            .flat_map(|r| self.children[r].iter().map(move |&s| (r, s)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Number of children.
    pub fn degree(&self, i: usize) -> usize {
        self.children[i].len()
    }

    pub fn is_root(&self, i: usize) -> bool {
        self.parent[i].is_none()
    }

    /// Childless vertices are external; everything else is internal.
    pub fn is_external(&self, i: usize) -> bool {
        self.children[i].is_empty()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_root(i)).collect()
    }

    /// All vertices whose set lies inside `I_i`, including `i`.
    pub fn closure(&self, i: usize) -> Vec<usize> {
        let target = self.vertices[i];
        (0..self.len()).filter(|&r| self.vertices[r].is_subset(&target)).collect()
    }

    /// Union of the sets strictly inside `I_i`.
    pub fn inner_union(&self, i: usize) -> IndexSet {
        self.children[i]
            .iter()
            .fold(IndexSet::empty(self.n), |acc, &c| acc.union(&self.vertices[c]))
    }

    pub fn union_all(&self) -> IndexSet {
        self.vertices.iter().fold(IndexSet::empty(self.n), |acc, s| acc.union(s))
    }

    /// `|I_i| - |⋃ children| + deg(i)`. The standard exponent bound is this
    /// minus 2, the maximal exponent of the product formula this minus 1.
    pub fn slack(&self, i: usize) -> usize {
        self.vertices[i].len() - self.inner_union(i).len() + self.degree(i)
    }

    /// The set `S`: minima of the special-free roots together with the
    /// ordinary coordinates outside every vertex.
    pub fn support_s(&self) -> IndexSet {
        let n = self.n;
        let mut s = IndexSet::ordinary(n).difference(&self.union_all());
        for r in self.roots() {
            let root = self.vertices[r];
            if root.is_special_free() {
                s = s.with(root.first().expect("nonempty root"));
            }
        }
        s
    }

    /// `|⋃ I_r| + Σ deg(i)`.
    pub fn epsilon(&self) -> usize {
        self.union_all().len() + (0..self.len()).map(|i| self.degree(i)).sum::<usize>()
    }

    pub fn document(&self) -> ForestDocument {
        ForestDocument {
            vertices: self.vertices.iter().map(|s| s.elems()).collect(),
            edges: self.edges(),
            roots: self.roots(),
            degrees: (0..self.len()).map(|i| self.degree(i)).collect(),
            external: (0..self.len()).map(|i| self.is_external(i)).collect(),
        }
    }
}
