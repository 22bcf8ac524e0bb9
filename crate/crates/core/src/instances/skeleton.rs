//! Skeleton tree (repeated leaf removal) and a ruling-set decomposition of
//! its degree-≤2 part into short path segments.

use std::collections::VecDeque;

use super::tree::Tree;

/// Removes all nodes of degree ≤ 1, `tau` times. Returns the surviving
/// forest (ids ascending in the original) and ψ mapping new ids to old.
pub fn skeleton_tree(t: &Tree, tau: usize) -> (Tree, Vec<usize>) {
    let n = t.len();
    let mut degree: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut frontier: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    for _ in 0..tau {
        if frontier.is_empty() {
            break;
        }
        for &v in &frontier {
            alive[v] = false;
        }
        let mut next = Vec::new();
        for &v in &frontier {
            for w in t.neighbors(v) {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        frontier = next;
        frontier.retain(|&v| alive[v]);
    }
    let psi: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut new_id = vec![usize::MAX; n];
    for (i, &v) in psi.iter().enumerate() {
        new_id[v] = i;
    }
    let edges: Vec<[usize; 2]> = t
        .edges()
        .iter()
        .filter(|[a, b]| alive[*a] && alive[*b])
        .map(|&[a, b]| [new_id[a], new_id[b]])
        .collect();
    let skel = Tree::from_edge_forest(psi.len(), &edges).expect("subgraph of a forest");
    (skel, psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulingSet {
    pub ruling: Vec<usize>,
    /// Kept segments, each listed along its path.
    pub segments: Vec<Vec<usize>>,
    /// Segments shorter than c.
    pub discarded: Vec<Vec<usize>>,
}

/// Drops nodes of degree > 2, then on each remaining path picks ruling
/// nodes greedily from the endpoint with the smaller id: positions
/// min(c, L−1), then every c+1 further. The pieces between ruling nodes
/// are the segments; those with fewer than c nodes are discarded.
pub fn path_ruling_set(t: &Tree, c: usize) -> RulingSet {
    assert!(c >= 1, "c must be at least 1");
    let n = t.len();
    let keep: Vec<bool> = (0..n).map(|v| t.degree(v) <= 2).collect();
    let path_neighbors = |v: usize| -> Vec<usize> { t.neighbors(v).filter(|&w| keep[w]).collect() };
    let mut seen = vec![false; n];
    let mut out = RulingSet {
        ruling: Vec::new(),
        segments: Vec::new(),
        discarded: Vec::new(),
    };
    for start in 0..n {
        if !keep[start] || seen[start] {
            continue;
        }
        // collect the component, then walk it from its smaller-id endpoint
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for w in path_neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        let first = comp
            .iter()
            .copied()
            .filter(|&v| path_neighbors(v).len() <= 1)
            .min()
            .expect("a finite path has an endpoint");
        let mut path = vec![first];
        let mut prev = usize::MAX;
        let mut cur = first;
        while let Some(next) = path_neighbors(cur).into_iter().find(|&w| w != prev) {
            path.push(next);
            prev = cur;
            cur = next;
        }
        let len = path.len();
        let mut pos = c.min(len - 1);
        let mut last = 0;
        let push = |seg: &[usize], out: &mut RulingSet| {
            if seg.is_empty() {
                return;
            }
            if seg.len() >= c {
                out.segments.push(seg.to_vec());
            } else {
                out.discarded.push(seg.to_vec());
            }
        };
        while pos < len {
            out.ruling.push(path[pos]);
            push(&path[last..pos], &mut out);
            last = pos + 1;
            pos += c + 1;
        }
        push(&path[last.min(len)..], &mut out);
    }
    out.ruling.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{complete_tree, CompleteKind};

    fn path(n: usize) -> Tree {
        let edges: Vec<[usize; 2]> = (1..n).map(|i| [i - 1, i]).collect();
        Tree::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn peeling_examples() {
        let (s, psi) = skeleton_tree(&path(7), 3);
        assert_eq!(s.len(), 1);
        assert_eq!(psi, vec![3]);
        let t = complete_tree(2, 4, CompleteKind::DeltaAry).unwrap();
        // the root has degree 2, so it survives until its children go
        let (s, psi) = skeleton_tree(&t, 4);
        assert_eq!(psi, vec![0]);
        assert_eq!(s.len(), 1);
        let (s, psi) = skeleton_tree(&t, 0);
        assert_eq!(s.len(), t.len());
        assert_eq!(psi, (0..t.len()).collect::<Vec<_>>());
        assert_eq!(skeleton_tree(&path(2), 1).0.len(), 0);
    }

    #[test]
    fn ruling_on_a_path() {
        let t = path(10);
        for c in 1..=4 {
            let r = path_ruling_set(&t, c);
            for w in r.ruling.windows(2) {
                assert!(w[1] - w[0] >= c + 1);
            }
            for v in 0..10 {
                assert!(r.ruling.iter().any(|&x| x.abs_diff(v) <= c));
            }
            for s in &r.segments {
                assert!(s.len() >= c && s.len() <= 2 * c);
            }
        }
    }
}
