//! Randomized adversarial reveal orders for the lower-bound trees.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::tree::{Tree, TreeError, TreeKind};
use crate::rng::{derive, Purpose};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// Reveal order, a permutation of the nodes.
    pub order: Vec<usize>,
    /// Special nodes per layer i = 1..k, in reveal order.
    pub u_nodes: Vec<Vec<usize>>,
    /// Sampled position per special node: rooted, the distance from the
    /// path end nearest the root; unrooted, the 1-based index on the path.
    pub d_samples: Vec<Vec<usize>>,
    /// Core path id of each special node.
    pub paths: Vec<Vec<usize>>,
    pub seed: u64,
}

impl Schedule {
    /// Position of each node in the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![usize::MAX; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            if v < pos.len() {
                pos[v] = i;
            }
        }
        pos
    }

    pub fn prefix_len(&self) -> usize {
        self.u_nodes.iter().map(Vec::len).sum()
    }

    /// Plain order without special nodes.
    pub fn from_order(order: Vec<usize>, seed: u64) -> Self {
        Schedule {
            order,
            u_nodes: Vec::new(),
            d_samples: Vec::new(),
            paths: Vec::new(),
            seed,
        }
    }

    pub fn is_permutation(&self, n: usize) -> bool {
        if self.order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        self.order
            .iter()
            .all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "u_nodes": self.u_nodes,
            "d_samples": self.d_samples,
            "seed": self.seed.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Schedule, TreeError> {
        let bad = |m: &str| TreeError::Json(m.to_string());
        let list = |x: &Value| -> Option<Vec<usize>> {
            x.as_array()?
                .iter()
                .map(|e| e.as_u64().map(|e| e as usize))
                .collect()
        };
        let nested = |key: &str| -> Result<Vec<Vec<usize>>, TreeError> {
            match v.get(key) {
                None => Ok(Vec::new()),
                Some(x) => x
                    .as_array()
                    .ok_or(TreeError::Json(format!("{key} must be an array")))?
                    .iter()
                    .map(|e| list(e).ok_or(TreeError::Json(format!("bad {key} entry"))))
                    .collect(),
            }
        };
        let order = v.get("order").and_then(list).ok_or(bad("missing order"))?;
        let seed = match v.get("seed") {
            Some(Value::String(s)) => s.parse().map_err(|_| bad("seed must be a u64"))?,
            Some(Value::Number(n)) => n.as_u64().ok_or(bad("seed must be a u64"))?,
            _ => 0,
        };
        Ok(Schedule {
            order,
            u_nodes: nested("u_nodes")?,
            d_samples: nested("d_samples")?,
            paths: Vec::new(),
            seed,
        })
    }
}

fn lb_t(g: &Tree, t: usize, kind: TreeKind) -> Result<usize, TreeError> {
    let meta = g
        .ann
        .lower_bound
        .ok_or(TreeError::Params("tree is not a lower-bound instance".into()))?;
    if g.kind() != kind {
        return Err(TreeError::Params(format!("expected a {} instance", kind.as_str())));
    }
    if meta.t != t {
        return Err(TreeError::Params(format!(
            "instance was built for t = {}, not {t}",
            meta.t
        )));
    }
    Ok(meta.k)
}

fn finish(g: &Tree, mut u_nodes: Vec<Vec<usize>>, mut d: Vec<Vec<usize>>, mut paths: Vec<Vec<usize>>, rng: &mut ChaCha8Rng, seed: u64) -> Schedule {
    let mut order = Vec::with_capacity(g.len());
    let mut special = vec![false; g.len()];
    for layer in 0..u_nodes.len() {
        let mut perm: Vec<usize> = (0..u_nodes[layer].len()).collect();
        perm.shuffle(rng);
        u_nodes[layer] = perm.iter().map(|&j| u_nodes[layer][j]).collect();
        d[layer] = perm.iter().map(|&j| d[layer][j]).collect();
        paths[layer] = perm.iter().map(|&j| paths[layer][j]).collect();
        for &u in &u_nodes[layer] {
            special[u] = true;
            order.push(u);
        }
    }
    order.extend(g.bfs_order().into_iter().filter(|&v| !special[v]));
    Schedule {
        order,
        u_nodes,
        d_samples: d,
        paths,
        seed,
    }
}

pub fn sample_schedule_rooted(g: &Tree, t: usize, seed: u64) -> Result<Schedule, TreeError> {
    sample_rooted_with(g, t, &mut derive(seed, Purpose::Schedule, 0), seed)
}

pub(crate) fn sample_rooted_with(g: &Tree, t: usize, rng: &mut ChaCha8Rng, seed: u64) -> Result<Schedule, TreeError> {
    let k = lb_t(g, t, TreeKind::Rooted)?;
    let s = 4 * t + 4;
    let mut u_nodes = vec![Vec::new(); k];
    let mut d = vec![Vec::new(); k];
    let mut paths = vec![Vec::new(); k];
    for layer in 1..=k {
        let mut ids: Vec<usize> = (0..g.ann.paths.len())
            .filter(|&p| g.ann.paths[p].layer == layer)
            .collect();
        // Q_0 is the main path of the layer
        ids.sort_by_key(|&p| (!g.ann.paths[p].main, p));
        for p in ids {
            let path = &g.ann.paths[p].nodes;
            if path.len() != s {
                return Err(TreeError::Params("core path length does not match t".into()));
            }
            let dist = rng.random_range(2 * t + 1..=2 * t + 2);
            let u = path[dist];
            assert!(dist >= 2 * t + 1 && s - 1 - dist >= 2 * t + 1);
            u_nodes[layer - 1].push(u);
            d[layer - 1].push(dist);
            paths[layer - 1].push(p);
        }
    }
    Ok(finish(g, u_nodes, d, paths, rng, seed))
}

pub fn sample_schedule_unrooted(g: &Tree, t: usize, seed: u64) -> Result<Schedule, TreeError> {
    sample_unrooted_with(g, t, &mut derive(seed, Purpose::Schedule, 0), seed)
}

pub(crate) fn sample_unrooted_with(g: &Tree, t: usize, rng: &mut ChaCha8Rng, seed: u64) -> Result<Schedule, TreeError> {
    let k = lb_t(g, t, TreeKind::Unrooted)?;
    let s = 4 * t + 4;
    let mut u_nodes = vec![Vec::new(); k];
    let mut d = vec![Vec::new(); k];
    let mut paths = vec![Vec::new(); k];
    for (p, path) in g.ann.paths.iter().enumerate() {
        if path.nodes.len() != s {
            return Err(TreeError::Params("core path length does not match t".into()));
        }
        let index = rng.random_range(2 * t + 1..=2 * t + 2);
        u_nodes[path.layer - 1].push(path.nodes[index - 1]);
        d[path.layer - 1].push(index);
        paths[path.layer - 1].push(p);
    }
    Ok(finish(g, u_nodes, d, paths, rng, seed))
}

/// Dispatches on the instance kind.
pub fn sample_schedule(g: &Tree, t: usize, seed: u64) -> Result<Schedule, TreeError> {
    match g.kind() {
        TreeKind::Rooted => sample_schedule_rooted(g, t, seed),
        TreeKind::Unrooted => sample_schedule_unrooted(g, t, seed),
    }
}

pub(crate) fn sample_with(g: &Tree, t: usize, rng: &mut ChaCha8Rng, seed: u64) -> Result<Schedule, TreeError> {
    match g.kind() {
        TreeKind::Rooted => sample_rooted_with(g, t, rng, seed),
        TreeKind::Unrooted => sample_unrooted_with(g, t, rng, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_lb_rooted, build_lb_unrooted};

    #[test]
    fn rooted_prefix_and_determinism() {
        let g = build_lb_rooted(2, 1, 2, 1).unwrap();
        let a = sample_schedule_rooted(&g, 1, 9).unwrap();
        let b = sample_schedule_rooted(&g, 1, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.is_permutation(g.len()));
        assert_eq!(a.prefix_len(), g.ann.paths.len());
        let prefix: Vec<usize> = a.u_nodes.concat();
        assert_eq!(&a.order[..prefix.len()], &prefix[..]);
        assert!(sample_schedule_rooted(&g, 2, 9).is_err());
    }

    #[test]
    fn unrooted_indices() {
        let g = build_lb_unrooted(3, 1, 1, 2).unwrap();
        let s = sample_schedule_unrooted(&g, 2, 4).unwrap();
        assert_eq!(s.u_nodes[0].len(), g.ann.paths.len());
        assert!(s.d_samples[0].iter().all(|&i| i == 5 || i == 6));
        let back = Schedule::from_json(&s.to_json()).unwrap();
        assert_eq!(back.order, s.order);
        assert_eq!(back.seed, 4);
    }
}
