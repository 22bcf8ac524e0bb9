use super::tree::{Tree, TreeError, TreeKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompleteKind {
    /// Rooted, every internal node has Δ children.
    DeltaAry,
    /// Unrooted, root of degree Δ−1, other internal nodes of degree Δ.
    T,
    /// Unrooted, every internal node has degree Δ.
    TStar,
}

/// Complete tree of the given depth; nodes numbered in BFS order.
pub fn complete_tree(delta: usize, depth: usize, kind: CompleteKind) -> Result<Tree, TreeError> {
    let (tree_kind, root_children, inner_children) = match kind {
        CompleteKind::DeltaAry => {
            if delta < 1 {
                return Err(TreeError::Params("delta must be at least 1".into()));
            }
            (TreeKind::Rooted, delta, delta)
        }
        CompleteKind::T | CompleteKind::TStar => {
            if delta < 2 {
                return Err(TreeError::Params("delta must be at least 2".into()));
            }
            let root = if kind == CompleteKind::T { delta - 1 } else { delta };
            (TreeKind::Unrooted, root, delta - 1)
        }
    };
    let mut t = Tree::new(tree_kind);
    let root = t.add_node(None);
    grow(&mut t, root, depth, root_children, inner_children);
    Ok(t)
}

/// Hangs a complete tree of the given depth below `root` in BFS order.
pub(crate) fn grow(t: &mut Tree, root: usize, depth: usize, root_children: usize, inner: usize) -> Vec<usize> {
    let mut level = vec![root];
    let mut all = vec![root];
    for d in 0..depth {
        let width = if d == 0 { root_children } else { inner };
        let mut next = Vec::with_capacity(level.len() * width);
        for &v in &level {
            for _ in 0..width {
                next.push(t.add_node(Some(v)));
            }
        }
        all.extend_from_slice(&next);
        level = next;
    }
    all
}

/// Leaves of a tree grown by [`grow`], left to right.
pub(crate) fn leaves_below(t: &Tree, root: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let ch = t.children(v);
        if ch.is_empty() {
            out.push(v);
        } else {
            stack.extend(ch.iter().rev());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(complete_tree(3, 2, CompleteKind::T).unwrap().len(), 7);
        assert_eq!(complete_tree(3, 2, CompleteKind::TStar).unwrap().len(), 10);
        assert_eq!(complete_tree(2, 1, CompleteKind::DeltaAry).unwrap().len(), 3);
        assert_eq!(complete_tree(4, 0, CompleteKind::TStar).unwrap().len(), 1);
        assert!(complete_tree(1, 2, CompleteKind::T).is_err());
        assert!(complete_tree(0, 2, CompleteKind::DeltaAry).is_err());
    }

    #[test]
    fn t_star_is_regular() {
        let t = complete_tree(3, 3, CompleteKind::TStar).unwrap();
        assert!(t.degree_violations(3).is_empty());
        let t = complete_tree(3, 3, CompleteKind::T).unwrap();
        assert_eq!(t.degree_violations(3), vec![0]);
    }
}
