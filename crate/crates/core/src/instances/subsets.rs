//! Diagnostic node subsets S'_{R,i}, S'_{C,i} (rooted) and S_{R,i},
//! S_{C,i}, U_i (unrooted).

use std::collections::VecDeque;

use super::schedule::Schedule;
use super::tree::{Layer, Tree, TreeError, TreeKind};

/// Membership bitmaps; `r[i-1]` is the (R,i) set, `c[i-1]` the (C,i) set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSubsets {
    pub r: Vec<Vec<bool>>,
    pub c: Vec<Vec<bool>>,
    /// U_i membership (unrooted only).
    pub u: Vec<Vec<bool>>,
}

impl NodeSubsets {
    /// The chain (R,1), (C,1), (R,2), …, (R,k+1).
    pub fn chain(&self) -> Vec<&Vec<bool>> {
        let mut out = Vec::new();
        for i in 0..self.r.len() {
            out.push(&self.r[i]);
            if let Some(c) = self.c.get(i) {
                out.push(c);
            }
        }
        out
    }

    /// Index of the first link of the chain that is not contained in its
    /// predecessor, or of the last set when it is empty.
    pub fn chain_violation(&self) -> Option<usize> {
        let chain = self.chain();
        for i in 1..chain.len() {
            if chain[i].iter().zip(chain[i - 1]).any(|(&a, &b)| a && !b) {
                return Some(i);
            }
        }
        match chain.last() {
            Some(last) if last.iter().any(|&x| x) => None,
            _ => Some(chain.len().saturating_sub(1)),
        }
    }
}

pub fn node_subsets(g: &Tree, sched: &Schedule) -> Result<NodeSubsets, TreeError> {
    let meta = g
        .ann
        .lower_bound
        .ok_or(TreeError::Params("tree is not a lower-bound instance".into()))?;
    if sched.u_nodes.len() != meta.k {
        return Err(TreeError::Params("schedule does not have one u-node list per layer".into()));
    }
    if sched.u_nodes.iter().flatten().any(|&u| u >= g.len()) {
        return Err(TreeError::NodeOutOfRange(g.len()));
    }
    match g.kind() {
        TreeKind::Rooted => rooted(g, sched, meta.k, meta.radius),
        TreeKind::Unrooted => Ok(unrooted(g, sched, meta.k, meta.radius)),
    }
}

/// Per node, bottom-up: `f(v, values of children)`.
fn bottom_up(g: &Tree, f: impl Fn(usize, &[usize]) -> usize) -> Vec<usize> {
    let mut val = vec![0; g.len()];
    for &v in g.bfs_order().iter().rev() {
        let ch: Vec<usize> = g.children(v).iter().map(|&c| val[c]).collect();
        val[v] = f(v, &ch);
    }
    val
}

/// Distance to the nearest descendant (or self) outside `set`.
fn escape_depth(g: &Tree, set: &[bool]) -> Vec<usize> {
    bottom_up(g, |v, ch| {
        if !set[v] {
            0
        } else {
            ch.iter().min().map_or(usize::MAX, |m| m.saturating_add(1))
        }
    })
}

fn rooted(g: &Tree, sched: &Schedule, k: usize, beta: usize) -> Result<NodeSubsets, TreeError> {
    let n = g.len();
    // height of the shallowest leaf below v
    let shallow = bottom_up(g, |_, ch| ch.iter().min().map_or(0, |m| m + 1));
    let full: Vec<bool> = shallow.iter().map(|&h| h >= beta).collect();
    let mut r = vec![full.clone()];
    let mut c = Vec::new();
    for i in 1..=k {
        let rank = Layer::C(i).rank();
        let mut set: Vec<bool> = (0..n)
            .map(|v| g.ann.layer[v].is_some_and(|l| l.rank() > rank))
            .collect();
        for &u in &sched.u_nodes[i - 1] {
            let (p, pos) = g.ann.core_path[u]
                .ok_or(TreeError::Params(format!("u-node {u} is not on a core path")))?;
            let path = &g.ann.paths[p];
            if path.layer != i {
                return Err(TreeError::Params(format!("u-node {u} is not in layer C{i}")));
            }
            let range = if path.main { pos..path.nodes.len() } else { 0..pos + 1 };
            for &v in &path.nodes[range] {
                set[v] = true;
            }
        }
        let escape = escape_depth(g, &set);
        c.push(set);
        r.push((0..n).map(|v| full[v] && escape[v] > beta).collect());
    }
    Ok(NodeSubsets { r, c, u: Vec::new() })
}

/// Multi-source distance to the nearest node where `source` holds.
fn distance_to(g: &Tree, source: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.len()];
    let mut queue = VecDeque::new();
    for v in 0..g.len() {
        if source(v) {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

fn unrooted(g: &Tree, sched: &Schedule, k: usize, gamma: usize) -> NodeSubsets {
    let n = g.len();
    let delta = g.ann.lower_bound.map_or(0, |m| m.delta);
    // ball of radius γ is T*_γ: every node closer than γ has degree Δ
    let irregular = distance_to(g, |v| g.degree(v) != delta);
    let regular: Vec<bool> = irregular.iter().map(|&d| d >= gamma).collect();
    let mut r = vec![regular.clone()];
    let mut c = Vec::new();
    let mut u = Vec::new();
    for i in 1..=k {
        let mut in_u = vec![false; n];
        for &x in &sched.u_nodes[i - 1] {
            in_u[x] = true;
        }
        let total = sched.u_nodes[i - 1].len();
        let below = bottom_up(g, |v, ch| ch.iter().sum::<usize>() + in_u[v] as usize);
        // on a path between two U-nodes iff U-nodes lie in two directions
        let set: Vec<bool> = (0..n)
            .map(|v| {
                let mut dirs = g.children(v).iter().filter(|&&c| below[c] > 0).count();
                if total > below[v] {
                    dirs += 1;
                }
                in_u[v] || dirs >= 2
            })
            .collect();
        let outside = distance_to(g, |v| !set[v]);
        r.push((0..n).map(|v| set[v] && outside[v] > gamma && regular[v]).collect());
        c.push(set);
        u.push(in_u);
    }
    NodeSubsets { r, c, u }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{
        build_lb_rooted, build_lb_unrooted, sample_schedule_rooted, sample_schedule_unrooted,
    };

    #[test]
    fn rooted_chain_contains_the_center() {
        let g = build_lb_rooted(2, 1, 2, 1).unwrap();
        let s = sample_schedule_rooted(&g, 1, 3).unwrap();
        let sets = node_subsets(&g, &s).unwrap();
        assert_eq!(sets.chain_violation(), None);
        let r = g.ann.paths.iter().rfind(|p| p.main).unwrap().nodes[8 - 1];
        let center = g.children(r).iter().copied().find(|&c| g.ann.layer[c] == Some(Layer::R(3))).unwrap();
        assert!(sets.r[2][center]);
        // children of (C,i) nodes lie in (R,i)
        for i in 0..2 {
            for v in 0..g.len() {
                if sets.c[i][v] {
                    assert!(g.children(v).iter().all(|&w| sets.r[i][w]));
                }
            }
        }
    }

    #[test]
    fn unrooted_chain() {
        let g = build_lb_unrooted(3, 1, 2, 1).unwrap();
        let s = sample_schedule_unrooted(&g, 1, 3).unwrap();
        let sets = node_subsets(&g, &s).unwrap();
        assert_eq!(sets.chain_violation(), None);
        assert!(sets.r[2][0]);
    }
}
