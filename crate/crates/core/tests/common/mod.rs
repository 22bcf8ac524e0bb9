//! Random problem generators and brute-force oracles shared by the test
//! targets. Nothing here calls the library's trim, automaton or matching
//! code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lcl_core::problem::{Configuration, EdgeConfig};
use lcl_core::{RootedProblem, UnrootedProblem};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// All non-decreasing sequences of length k over 0..n.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in from..n {
            cur.push(x);
            go(n, k, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn random_rooted(rng: &mut ChaCha8Rng, max_sigma: usize, max_delta: usize) -> RootedProblem {
    let n = rng.random_range(1..=max_sigma);
    let delta = rng.random_range(1..=max_delta);
    let density: f64 = rng.random_range(0.15..0.8);
    let mut cons = Vec::new();
    for parent in 0..n {
        for m in multisets(n, delta) {
            if rng.random_bool(density) {
                cons.push((parent, Configuration::new(m)));
            }
        }
    }
    RootedProblem::new(delta, names(n), cons).unwrap()
}

pub fn random_unrooted(rng: &mut ChaCha8Rng, max_sigma: usize, max_delta: usize) -> UnrootedProblem {
    let n = rng.random_range(1..=max_sigma);
    let delta = rng.random_range(2..=max_delta);
    let density: f64 = rng.random_range(0.2..0.85);
    let nodes: Vec<Configuration> = multisets(n, delta)
        .into_iter()
        .filter(|_| rng.random_bool(density))
        .map(Configuration::new)
        .collect();
    let edges: Vec<EdgeConfig> = multisets(n, 2)
        .into_iter()
        .filter(|_| rng.random_bool(density))
        .map(|e| EdgeConfig::new(e[0], e[1]))
        .collect();
    UnrootedProblem::new(delta, names(n), nodes, edges).unwrap()
}

/// Whether the multiset can be laid onto the slots, one element per slot,
/// trying every permutation.
pub fn assignable(config: &[usize], slots: &[Vec<bool>]) -> bool {
    fn go(config: &[usize], slots: &[Vec<bool>], used: &mut Vec<bool>, j: usize) -> bool {
        if j == slots.len() {
            return true;
        }
        (0..config.len()).any(|i| {
            if used[i] || !slots[j][config[i]] {
                return false;
            }
            used[i] = true;
            let ok = go(config, slots, used, j + 1);
            used[i] = false;
            ok
        })
    }
    config.len() == slots.len() && go(config, slots, &mut vec![false; config.len()], 0)
}

/// Explicit complete tree: children lists, nodes in BFS order.
pub fn explicit_tree(root_children: usize, inner: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut level = vec![0];
    for d in 0..depth {
        let width = if d == 0 { root_children } else { inner };
        let mut next = Vec::new();
        for &v in &level {
            for _ in 0..width {
                let id = children.len();
                children.push(Vec::new());
                children[v].push(id);
                next.push(id);
            }
        }
        level = next;
    }
    children
}

/// Labels that root a correct labeling of the complete Δ-ary tree of the
/// given depth using only labels in `allowed`.
pub fn rooted_labelable(p: &RootedProblem, allowed: &[bool], depth: usize) -> Vec<bool> {
    let n = p.label_count();
    let children = explicit_tree(p.delta(), p.delta(), depth);
    let mut feas: Vec<Vec<bool>> = vec![Vec::new(); children.len()];
    for v in (0..children.len()).rev() {
        feas[v] = if children[v].is_empty() {
            allowed.to_vec()
        } else {
            let slots: Vec<Vec<bool>> = children[v].iter().map(|&c| feas[c].clone()).collect();
            (0..n)
                .map(|s| {
                    allowed[s]
                        && p.constraints().iter().any(|(parent, c)| {
                            *parent == s
                                && c.labels().iter().all(|&l| allowed[l])
                                && assignable(c.labels(), &slots)
                        })
                })
                .collect()
        };
    }
    feas.swap_remove(0)
}

/// Node configurations of `allowed` that can sit at the root of T*_depth
/// with every degree-Δ node using a configuration of `allowed`.
pub fn unrooted_root_configs(p: &UnrootedProblem, allowed: &[usize], depth: usize) -> Vec<usize> {
    let n = p.label_count();
    let delta = p.delta();
    let children = explicit_tree(delta, delta - 1, depth);
    let edge_ok = |a: usize, b: usize| p.allows_edge(a, b);
    let partner = |f: &Vec<bool>| -> Vec<bool> {
        (0..n).map(|z| (0..n).any(|w| f[w] && edge_ok(z, w))).collect()
    };
    let mut feas: Vec<Vec<bool>> = vec![Vec::new(); children.len()];
    for v in (1..children.len()).rev() {
        feas[v] = if children[v].is_empty() {
            vec![true; n]
        } else {
            let slots: Vec<Vec<bool>> = children[v].iter().map(|&c| partner(&feas[c])).collect();
            (0..n)
                .map(|x| {
                    allowed.iter().any(|&i| {
                        let c = p.node_configs()[i].labels();
                        (0..c.len()).any(|pos| {
                            if c[pos] != x {
                                return false;
                            }
                            let mut rest = c.to_vec();
                            rest.remove(pos);
                            assignable(&rest, &slots)
                        })
                    })
                })
                .collect()
        };
    }
    let slots: Vec<Vec<bool>> = children[0].iter().map(|&c| partner(&feas[c])).collect();
    allowed
        .iter()
        .copied()
        .filter(|&i| assignable(p.node_configs()[i].labels(), &slots))
        .collect()
}

/// Strongly connected components by transitive closure.
pub fn components(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let m = adj.len();
    let mut reach = adj.to_vec();
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for i in 0..m {
        if seen[i] {
            continue;
        }
        let comp: Vec<usize> = (0..m).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &comp {
            seen[j] = true;
        }
        out.push(comp);
    }
    out
}

/// Walks of every length in [K, K+m] between all pairs, K = (m+1)^2.
pub fn walk_flexible(adj: &[Vec<bool>], comp: &[usize]) -> bool {
    let m = comp.len();
    let a: Vec<Vec<bool>> = comp
        .iter()
        .map(|&i| comp.iter().map(|&j| adj[i][j]).collect())
        .collect();
    let k0 = (m + 1) * (m + 1);
    let mut power = a.clone();
    for len in 1..=k0 + m {
        if len >= k0 && !power.iter().all(|row| row.iter().all(|&x| x)) {
            return false;
        }
        let mut next = vec![vec![false; m]; m];
        for i in 0..m {
            for k in 0..m {
                if power[i][k] {
                    for j in 0..m {
                        if a[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        power = next;
    }
    true
}

pub const INF: usize = usize::MAX;

/// Longest good sequence by exhaustive search (INF for unbounded).
pub fn naive_depth_rooted(p: &RootedProblem) -> usize {
    let n = p.label_count();
    let limit = n + 2;
    let trim = |c: &[bool]| rooted_labelable(p, c, n + 1);
    let flex = |r: &[bool]| -> Vec<Vec<bool>> {
        let adj: Vec<Vec<bool>> = (0..n)
            .map(|s| {
                (0..n)
                    .map(|t| {
                        r[s] && r[t]
                            && p.constraints().iter().any(|(parent, c)| {
                                *parent == s
                                    && c.labels().iter().all(|&l| r[l])
                                    && c.labels().contains(&t)
                            })
                    })
                    .collect()
            })
            .collect();
        let states: Vec<usize> = (0..n).filter(|&s| r[s]).collect();
        let sub: Vec<Vec<bool>> = states
            .iter()
            .map(|&i| states.iter().map(|&j| adj[i][j]).collect())
            .collect();
        components(&sub)
            .into_iter()
            .filter(|c| walk_flexible(&sub, c))
            .map(|c| {
                let mut set = vec![false; n];
                for i in c {
                    set[states[i]] = true;
                }
                set
            })
            .collect()
    };
    fn explore(c: Vec<bool>, k: usize, limit: usize, trim: &dyn Fn(&[bool]) -> Vec<bool>, flex: &dyn Fn(&[bool]) -> Vec<Vec<bool>>) -> usize {
        let r = trim(&c);
        if !r.iter().any(|&x| x) {
            return k;
        }
        if k + 1 >= limit {
            return INF;
        }
        let mut best = k + 1;
        for comp in flex(&r) {
            best = best.max(explore(comp, k + 1, limit, trim, flex));
            if best == INF {
                break;
            }
        }
        best
    }
    explore(vec![true; n], 0, limit, &trim, &flex)
}

type Pair = (usize, usize);

fn pair(a: usize, b: usize) -> Pair {
    (a.min(b), a.max(b))
}

pub fn naive_depth_unrooted(p: &UnrootedProblem) -> usize {
    let n = p.label_count();
    let all_pairs: BTreeSet<Pair> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let limit = all_pairs.len() + 2;
    let sub_pairs = |i: usize| -> Vec<Pair> {
        let c = p.node_configs()[i].labels();
        let mut out = Vec::new();
        for a in 0..c.len() {
            for b in a + 1..c.len() {
                out.push(pair(c[a], c[b]));
            }
        }
        out
    };
    let restrict = |v: &[usize], d: &BTreeSet<Pair>| -> Vec<usize> {
        v.iter().copied().filter(|&i| sub_pairs(i).iter().all(|e| d.contains(e))).collect()
    };
    let trim = |v: &[usize]| unrooted_root_configs(p, v, n + 2);
    let flex = |v: &[usize]| -> Vec<BTreeSet<Pair>> {
        let mut states: BTreeSet<Pair> = BTreeSet::new();
        for &i in v {
            let c = p.node_configs()[i].labels();
            for a in 0..c.len() {
                for b in 0..c.len() {
                    if a != b {
                        states.insert((c[a], c[b]));
                    }
                }
            }
        }
        let states: Vec<Pair> = states.into_iter().collect();
        let adj: Vec<Vec<bool>> = states
            .iter()
            .map(|&(_, x2)| states.iter().map(|&(y1, _)| p.allows_edge(x2, y1)).collect())
            .collect();
        let mut out = Vec::new();
        for comp in components(&adj) {
            if !walk_flexible(&adj, &comp) {
                continue;
            }
            let d: BTreeSet<Pair> = comp.iter().map(|&i| pair(states[i].0, states[i].1)).collect();
            let lifted: Vec<usize> = (0..states.len())
                .filter(|&i| d.contains(&pair(states[i].0, states[i].1)))
                .collect();
            if lifted == comp {
                out.push(d);
            }
        }
        out
    };
    struct Ctx<'a> {
        limit: usize,
        restrict: &'a dyn Fn(&[usize], &BTreeSet<Pair>) -> Vec<usize>,
        trim: &'a dyn Fn(&[usize]) -> Vec<usize>,
        flex: &'a dyn Fn(&[usize]) -> Vec<BTreeSet<Pair>>,
    }
    fn explore(ctx: &Ctx, v: &[usize], d: &BTreeSet<Pair>, k: usize) -> usize {
        let next = (ctx.trim)(&(ctx.restrict)(v, d));
        if next.is_empty() {
            return k;
        }
        if k + 1 >= ctx.limit {
            return INF;
        }
        let mut best = k + 1;
        for comp in (ctx.flex)(&next) {
            best = best.max(explore(ctx, &next, &comp, k + 1));
            if best == INF {
                break;
            }
        }
        best
    }
    let ctx = Ctx {
        limit,
        restrict: &restrict,
        trim: &trim,
        flex: &flex,
    };
    let v0: Vec<usize> = (0..p.node_configs().len()).collect();
    explore(&ctx, &v0, &all_pairs, 0)
}

/// Rooted problems of depth 2 and 3: a flexible component whose odd cycle
/// runs through a label that needs a child from a lower component, so
/// trimming the component leaves a 2-cycle.
pub fn planted_rooted() -> Vec<RootedProblem> {
    let build = |n: usize, cons: &[(usize, [usize; 2])]| {
        RootedProblem::new(
            2,
            names(n),
            cons.iter().map(|&(p, c)| (p, Configuration::new(c.to_vec()))),
        )
        .unwrap()
    };
    let (a, b, c, d, e) = (0, 1, 2, 3, 4);
    let two = build(5, &[(a, [b, b]), (b, [a, a]), (a, [c, c]), (c, [b, d]), (d, [e, e]), (e, [d, d])]);
    let (f, g, o, q) = (5, 6, 7, 8);
    let three = build(
        9,
        &[
            (a, [b, b]),
            (b, [a, a]),
            (a, [c, c]),
            (c, [b, e]),
            (e, [f, f]),
            (f, [e, e]),
            (e, [g, g]),
            (g, [a, o]),
            (o, [q, q]),
            (q, [o, o]),
        ],
    );
    vec![two, three]
}

/// An unrooted problem of depth 2 with Δ = 3, found by local search.
pub fn planted_unrooted() -> Vec<UnrootedProblem> {
    let nodes = [[0, 0, 2], [0, 2, 3], [1, 3, 3], [2, 2, 3], [2, 3, 3], [3, 3, 3]];
    let edges = [[0, 2], [1, 1], [1, 2], [1, 3], [2, 2]];
    vec![UnrootedProblem::new(
        3,
        names(4),
        nodes.iter().map(|c| Configuration::new(c.to_vec())),
        edges.iter().map(|e| EdgeConfig::new(e[0], e[1])),
    )
    .unwrap()]
}

/// Toggles `flips` random configurations.
pub fn mutate_rooted(p: &RootedProblem, rng: &mut ChaCha8Rng, flips: usize) -> RootedProblem {
    let n = p.label_count();
    let mut cons: BTreeSet<(usize, Vec<usize>)> = p
        .constraints()
        .iter()
        .map(|(l, c)| (*l, c.labels().to_vec()))
        .collect();
    let all = multisets(n, p.delta());
    for _ in 0..flips {
        let key = (rng.random_range(0..n), all[rng.random_range(0..all.len())].clone());
        if !cons.remove(&key) {
            cons.insert(key);
        }
    }
    RootedProblem::new(
        p.delta(),
        names(n),
        cons.into_iter().map(|(l, c)| (l, Configuration::new(c))),
    )
    .unwrap()
}

pub fn mutate_unrooted(p: &UnrootedProblem, rng: &mut ChaCha8Rng, flips: usize) -> UnrootedProblem {
    let n = p.label_count();
    let mut nodes: BTreeSet<Vec<usize>> = p.node_configs().iter().map(|c| c.labels().to_vec()).collect();
    let mut edges: BTreeSet<Vec<usize>> = p.edge_configs().iter().map(|e| e.labels().to_vec()).collect();
    for _ in 0..flips {
        let (set, pool) = if rng.random_bool(0.5) {
            (&mut nodes, multisets(n, p.delta()))
        } else {
            (&mut edges, multisets(n, 2))
        };
        let key = pool[rng.random_range(0..pool.len())].clone();
        if !set.remove(&key) {
            set.insert(key);
        }
    }
    UnrootedProblem::new(
        p.delta(),
        names(n),
        nodes.into_iter().map(Configuration::new),
        edges.into_iter().map(|e| EdgeConfig::new(e[0], e[1])),
    )
    .unwrap()
}
