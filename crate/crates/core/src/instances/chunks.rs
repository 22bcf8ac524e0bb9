//! The family of chunk instances: (|Σ|+1) chunks of Δ^{d+1} complete Δ-ary
//! trees of height 2d, joined below one middle node u.

use super::tree::{Tree, TreeError};

const NONE: u32 = u32::MAX;

/// (b, u, C) with u an index into the middle nodes M.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ChunkChoice {
    pub b: u8,
    pub u: usize,
    pub chunk: usize,
}

/// Shape of the family for fixed (|Σ|, Δ, d).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkLayout {
    pub sigma_size: usize,
    pub delta: usize,
    pub d: usize,
}

/// Closed-form node count before identification.
pub fn chunk_node_count(sigma_size: usize, delta: usize, d: usize) -> u128 {
    let dl = delta as u128;
    (sigma_size as u128 + 1) * dl.pow(d as u32 + 1) * (dl.pow(2 * d as u32 + 1) - 1) / (dl - 1)
}

/// Closed-form size of the choice set 2|Σ|(|Σ|+1)Δ^{2d+1}.
pub fn chunk_choice_count(sigma_size: usize, delta: usize, d: usize) -> u128 {
    let s = sigma_size as u128;
    2 * s * (s + 1) * (delta as u128).pow(2 * d as u32 + 1)
}

impl ChunkLayout {
    /// Requires Δ^d > 2|Σ|.
    pub fn new(sigma_size: usize, delta: usize, d: usize) -> Result<Self, TreeError> {
        let layout = Self::new_unchecked(sigma_size, delta, d)?;
        if (delta as u128).pow(d as u32) <= 2 * sigma_size as u128 {
            return Err(TreeError::Params(format!(
                "d = {d} too small: need delta^d > 2 * sigma_size = {}",
                2 * sigma_size
            )));
        }
        Ok(layout)
    }

    /// Skips the Δ^d > 2|Σ| requirement; shapes only need Δ ≥ 2, d ≥ 1.
    pub fn new_unchecked(sigma_size: usize, delta: usize, d: usize) -> Result<Self, TreeError> {
        if delta < 2 || d < 1 || sigma_size < 1 {
            return Err(TreeError::Params(
                "need delta >= 2, d >= 1 and sigma_size >= 1".into(),
            ));
        }
        if chunk_node_count(sigma_size, delta, d) >= NONE as u128 {
            return Err(TreeError::Params("instance too large".into()));
        }
        Ok(ChunkLayout {
            sigma_size,
            delta,
            d,
        })
    }

    fn pow(&self, e: usize) -> usize {
        self.delta.pow(e as u32)
    }

    pub fn chunks(&self) -> usize {
        self.sigma_size + 1
    }

    pub fn trees_per_chunk(&self) -> usize {
        self.pow(self.d + 1)
    }

    pub fn tree_size(&self) -> usize {
        (self.pow(2 * self.d + 1) - 1) / (self.delta - 1)
    }

    /// Local BFS index of the first node at depth `depth`.
    fn level_start(&self, depth: usize) -> usize {
        (self.pow(depth) - 1) / (self.delta - 1)
    }

    pub fn middle_per_tree(&self) -> usize {
        self.pow(self.d)
    }

    pub fn middle_count(&self) -> usize {
        self.chunks() * self.trees_per_chunk() * self.middle_per_tree()
    }

    fn raw_id(&self, chunk: usize, tree: usize, local: usize) -> usize {
        (chunk * self.trees_per_chunk() + tree) * self.tree_size() + local
    }

    /// (chunk, tree, local index) of middle node `u`.
    pub fn middle(&self, u: usize) -> (usize, usize, usize) {
        let per_tree = self.middle_per_tree();
        let tree_global = u / per_tree;
        (
            tree_global / self.trees_per_chunk(),
            tree_global % self.trees_per_chunk(),
            self.level_start(self.d) + u % per_tree,
        )
    }

    pub fn choices(&self) -> Vec<ChunkChoice> {
        let mut out = Vec::new();
        for b in 0..2 {
            for u in 0..self.middle_count() {
                let (own, _, _) = self.middle(u);
                for chunk in (0..self.chunks()).filter(|&c| c != own) {
                    out.push(ChunkChoice { b, u, chunk });
                }
            }
        }
        out
    }

    pub fn validate(&self, c: ChunkChoice) -> Result<(), TreeError> {
        if c.b > 1 {
            return Err(TreeError::Params("b must be 0 or 1".into()));
        }
        if c.u >= self.middle_count() {
            return Err(TreeError::Params(format!(
                "u = {} out of range (|M| = {})",
                c.u,
                self.middle_count()
            )));
        }
        if c.chunk >= self.chunks() {
            return Err(TreeError::Params(format!("chunk {} out of range", c.chunk)));
        }
        if self.middle(c.u).0 == c.chunk {
            return Err(TreeError::Params("u lies inside the chosen chunk".into()));
        }
        Ok(())
    }

    pub fn build(&self, choice: ChunkChoice) -> Result<ChunkInstance, TreeError> {
        self.validate(choice)?;
        let raw = self.chunks() * self.trees_per_chunk() * self.tree_size();
        let size = self.tree_size();
        let mut parent = vec![NONE; raw];
        let mut chunk_of = vec![0u32; raw];
        for (tree_global, block) in parent.chunks_mut(size).enumerate() {
            for (local, p) in block.iter_mut().enumerate().skip(1) {
                *p = (tree_global * size + (local - 1) / self.delta) as u32;
            }
            let c = (tree_global / self.trees_per_chunk()) as u32;
            chunk_of[tree_global * size..(tree_global + 1) * size].fill(c);
        }

        // leaves of u, left to right
        let (uc, ut, ul) = self.middle(choice.u);
        let mut locals = vec![ul];
        for _ in 0..self.d {
            locals = locals
                .iter()
                .flat_map(|&x| (1..=self.delta).map(move |j| self.delta * x + j))
                .collect();
        }
        let leaves: Vec<usize> = locals.iter().map(|&l| self.raw_id(uc, ut, l)).collect();

        let mut merged = Vec::new();
        let mut removed = vec![false; raw];
        if choice.b == 0 {
            for (j, &leaf) in leaves.iter().enumerate() {
                let root = self.raw_id(choice.chunk, j, 0);
                // the root's children move to the leaf
                for child in 1..=self.delta {
                    parent[self.raw_id(choice.chunk, j, child)] = leaf as u32;
                }
                removed[root] = true;
                merged.push(leaf);
            }
        } else {
            for (j, &leaf) in leaves.iter().enumerate() {
                for i in 0..self.delta {
                    parent[self.raw_id(choice.chunk, j * self.delta + i, 0)] = leaf as u32;
                }
            }
        }

        let mut new_id = vec![NONE; raw];
        let mut next = 0u32;
        for v in 0..raw {
            if !removed[v] {
                new_id[v] = next;
                next += 1;
            }
        }
        let remap = |v: u32| if v == NONE { NONE } else { new_id[v as usize] };
        let keep = |v: &usize| !removed[*v];
        let parent: Vec<u32> = (0..raw).filter(keep).map(|v| remap(parent[v])).collect();
        let chunk: Vec<u32> = (0..raw).filter(keep).map(|v| chunk_of[v]).collect();
        let middle_nodes: Vec<usize> = (0..self.middle_count())
            .map(|m| {
                let (c, t, l) = self.middle(m);
                new_id[self.raw_id(c, t, l)] as usize
            })
            .collect();
        let leaves = leaves.iter().map(|&l| new_id[l] as usize).collect();
        let merged = merged.iter().map(|&l| new_id[l] as usize).collect();
        Ok(ChunkInstance {
            layout: *self,
            choice,
            parent,
            chunk,
            middle_nodes,
            u_leaves: leaves,
            merged,
            raw_count: raw,
        })
    }
}

/// A chunk instance held as a compact parent array; [`ChunkInstance::tree`]
/// materializes it.
#[derive(Clone, Debug)]
pub struct ChunkInstance {
    pub layout: ChunkLayout,
    pub choice: ChunkChoice,
    parent: Vec<u32>,
    chunk: Vec<u32>,
    /// M, chunk-major, tree-minor, BFS within a tree.
    pub middle_nodes: Vec<usize>,
    /// Leaf descendants of u, left to right.
    pub u_leaves: Vec<usize>,
    /// Nodes that were identified with a chunk-tree root (b = 0).
    pub merged: Vec<usize>,
    /// Node count before identification.
    pub raw_count: usize,
}

impl ChunkInstance {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    pub fn chunk_of(&self, v: usize) -> usize {
        self.chunk[v] as usize
    }

    pub fn tree(&self) -> Tree {
        let parents: Vec<Option<usize>> = (0..self.len()).map(|v| self.parent(v)).collect();
        let mut t = Tree::from_parents(&parents).expect("chunk instance is a forest");
        for v in 0..self.len() {
            t.ann.chunk[v] = Some(self.chunk_of(v));
        }
        for &v in &self.merged {
            t.ann.secondary_chunk[v] = Some(self.choice.chunk);
        }
        t
    }
}

pub fn build_chunk_instance(sigma_size: usize, delta: usize, d: usize, choice: ChunkChoice) -> Result<ChunkInstance, TreeError> {
    ChunkLayout::new(sigma_size, delta, d)?.build(choice)
}

pub fn build_chunk_instance_unchecked(sigma_size: usize, delta: usize, d: usize, choice: ChunkChoice) -> Result<ChunkInstance, TreeError> {
    ChunkLayout::new_unchecked(sigma_size, delta, d)?.build(choice)
}

pub fn enumerate_choices(sigma_size: usize, delta: usize, d: usize) -> Result<Vec<ChunkChoice>, TreeError> {
    Ok(ChunkLayout::new(sigma_size, delta, d)?.choices())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_example() {
        let choice = ChunkChoice { b: 0, u: 0, chunk: 1 };
        let inst = build_chunk_instance(2, 2, 3, choice).unwrap();
        assert_eq!(inst.raw_count, 6096);
        assert_eq!(inst.len(), 6096 - 8);
        assert_eq!(inst.merged.len(), 8);
        assert_eq!(enumerate_choices(2, 2, 3).unwrap().len(), 1536);
        assert_eq!(chunk_choice_count(1, 2, 2), 128);
        assert!(enumerate_choices(2, 2, 2).is_err());
    }

    #[test]
    fn attachment_shapes() {
        let layout = ChunkLayout::new_unchecked(1, 2, 1).unwrap();
        // u = first middle node of chunk 0, attach chunk 1
        for b in 0..2 {
            let inst = layout.build(ChunkChoice { b, u: 0, chunk: 1 }).unwrap();
            let t = inst.tree();
            let u = inst.middle_nodes[0];
            assert_eq!(t.depth_of(u), 1);
            for &leaf in &inst.u_leaves {
                assert_eq!(t.parent(leaf), Some(u));
                assert_eq!(t.children(leaf).len(), 2);
                assert_eq!(t.ann.chunk[t.children(leaf)[0]], Some(1));
            }
            assert_eq!(t.roots().len(), if b == 0 { 8 - 2 } else { 8 - 4 });
            assert!(t.degree_violations(2).is_empty());
        }
        assert!(layout.build(ChunkChoice { b: 0, u: 0, chunk: 0 }).is_err());
        assert!(layout.build(ChunkChoice { b: 2, u: 0, chunk: 1 }).is_err());
    }
}
