//! Layered lower-bound trees. Rooted: the chain of core paths P_1..P_k
//! ending in G_{R,k+1}. Unrooted: G*_{R,k+1}.

use super::complete::{grow, leaves_below};
use super::tree::{CorePath, Layer, LowerBoundMeta, Tree, TreeError, TreeKind};

struct Builder {
    tree: Tree,
    delta: usize,
    radius: usize,
    s: usize,
}

impl Builder {
    fn complete(&mut self, parent: Option<usize>, layer: usize, root_children: usize, inner: usize) -> Vec<usize> {
        let root = self.tree.add_node(parent);
        let nodes = grow(&mut self.tree, root, self.radius, root_children, inner);
        for &v in &nodes {
            self.tree.set_layer(v, Layer::R(layer));
        }
        leaves_below(&self.tree, root)
    }

    fn path(&mut self, parent: Option<usize>, layer: usize, main: bool) -> Vec<usize> {
        let id = self.tree.ann.paths.len();
        let mut nodes = Vec::with_capacity(self.s);
        let mut prev = parent;
        for pos in 0..self.s {
            let v = self.tree.add_node(prev);
            self.tree.set_layer(v, Layer::C(layer));
            self.tree.ann.core_path[v] = Some((id, pos));
            nodes.push(v);
            prev = Some(v);
        }
        self.tree.ann.paths.push(CorePath {
            layer,
            nodes: nodes.clone(),
            main,
        });
        nodes
    }

    // rooted parts

    fn rooted_r(&mut self, parent: Option<usize>, i: usize) {
        let d = self.delta;
        let leaves = self.complete(parent, i, d, d);
        if i >= 2 {
            for leaf in leaves {
                for _ in 0..d {
                    self.rooted_c(leaf, i - 1, true);
                }
            }
        }
    }

    /// G_{C,i} (with the extra copy under v_s) or G°_{C,i}.
    fn rooted_c(&mut self, parent: usize, i: usize, extra: bool) -> Vec<usize> {
        self.rooted_path(Some(parent), i, extra, false)
    }

    fn rooted_path(&mut self, parent: Option<usize>, i: usize, extra: bool, main: bool) -> Vec<usize> {
        let nodes = self.path(parent, i, main);
        for (j, &v) in nodes.iter().enumerate() {
            let copies = if j + 1 == nodes.len() && extra {
                self.delta
            } else {
                self.delta - 1
            };
            for _ in 0..copies {
                self.rooted_r(Some(v), i);
            }
        }
        nodes
    }

    // unrooted parts

    fn unrooted_r(&mut self, parent: Option<usize>, i: usize, star: bool) {
        let d = self.delta;
        let root_children = if star { d } else { d - 1 };
        let leaves = self.complete(parent, i, root_children, d - 1);
        if i >= 2 {
            for leaf in leaves {
                for _ in 0..d - 1 {
                    self.unrooted_c(leaf, i - 1);
                }
            }
        }
    }

    fn unrooted_c(&mut self, parent: usize, i: usize) {
        let nodes = self.path(Some(parent), i, false);
        for (j, &v) in nodes.iter().enumerate() {
            let copies = if j + 1 == nodes.len() {
                self.delta - 1
            } else {
                self.delta - 2
            };
            for _ in 0..copies {
                self.unrooted_r(Some(v), i, false);
            }
        }
    }
}

fn check(delta: usize, min_delta: usize, radius: usize, k: usize, t: usize) -> Result<(), TreeError> {
    if delta < min_delta {
        return Err(TreeError::Params(format!("delta must be at least {min_delta}")));
    }
    if radius < 1 || k < 1 || t < 1 {
        return Err(TreeError::Params("radius, k and t must be at least 1".into()));
    }
    Ok(())
}

/// Rooted main lower-bound graph; node 0 is v_1 of P_1.
pub fn build_lb_rooted(delta: usize, beta: usize, k: usize, t: usize) -> Result<Tree, TreeError> {
    check(delta, 2, beta, k, t)?;
    let mut b = Builder {
        tree: Tree::new(TreeKind::Rooted),
        delta,
        radius: beta,
        s: 4 * t + 4,
    };
    let mut attach = None;
    for i in 1..=k {
        let nodes = b.rooted_path(attach, i, false, true);
        attach = nodes.last().copied();
    }
    b.rooted_r(attach, k + 1);
    b.tree.ann.lower_bound = Some(LowerBoundMeta {
        delta,
        radius: beta,
        k,
        t,
    });
    Ok(b.tree)
}

/// Unrooted lower-bound graph G*_{R,k+1}; node 0 is the root of T*_γ.
pub fn build_lb_unrooted(delta: usize, gamma: usize, k: usize, t: usize) -> Result<Tree, TreeError> {
    check(delta, 3, gamma, k, t)?;
    let mut b = Builder {
        tree: Tree::new(TreeKind::Unrooted),
        delta,
        radius: gamma,
        s: 4 * t + 4,
    };
    b.unrooted_r(None, k + 1, true);
    b.tree.ann.lower_bound = Some(LowerBoundMeta {
        delta,
        radius: gamma,
        k,
        t,
    });
    Ok(b.tree)
}

fn geometric(base: u128, terms: usize) -> u128 {
    (0..terms).map(|j| base.pow(j as u32)).sum()
}

/// Node count of [`build_lb_rooted`] from the size recurrence.
pub fn lb_rooted_count(delta: usize, beta: usize, k: usize, t: usize) -> u128 {
    let d = delta as u128;
    let s = 4 * t as u128 + 4;
    let tree = geometric(d, beta + 1);
    let leaves = d.pow(beta as u32);
    let mut r = tree;
    let mut total = 0;
    for _ in 1..=k {
        total += s + s * (d - 1) * r;
        let c = s + (s * (d - 1) + 1) * r;
        r = tree + leaves * d * c;
    }
    total + r
}

/// Node count of [`build_lb_unrooted`] from the size recurrence.
pub fn lb_unrooted_count(delta: usize, gamma: usize, k: usize, t: usize) -> u128 {
    let d = delta as u128;
    let s = 4 * t as u128 + 4;
    let tree = geometric(d - 1, gamma + 1);
    let leaves = (d - 1).pow(gamma as u32);
    let star = 1 + d * geometric(d - 1, gamma);
    let star_leaves = d * (d - 1).pow(gamma as u32 - 1);
    let mut r = tree;
    let mut c = 0;
    for i in 1..=k {
        c = s + ((s - 1) * (d - 2) + (d - 1)) * r;
        if i < k {
            r = tree + leaves * (d - 1) * c;
        }
    }
    star + star_leaves * (d - 1) * c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rooted_instance() {
        let g = build_lb_rooted(2, 1, 1, 1).unwrap();
        assert_eq!(g.len(), 175);
        assert_eq!(lb_rooted_count(2, 1, 1, 1), 175);
        assert!(g.degree_violations(2).is_empty());
        assert_eq!(g.roots(), vec![0]);
        assert_eq!(g.ann.layer[0], Some(Layer::C(1)));
        // one main path plus Δ^β·Δ = 4 layer-(C,1) paths inside G_{R,2}
        assert_eq!(g.ann.paths.len(), 5);
        assert!(g.ann.paths.iter().all(|p| p.nodes.len() == 8));
    }

    #[test]
    fn small_unrooted_instance() {
        let g = build_lb_unrooted(3, 1, 1, 1).unwrap();
        assert_eq!(g.len(), 214);
        assert_eq!(lb_unrooted_count(3, 1, 1, 1), 214);
        assert!(g.degree_violations(3).is_empty());
        assert!(g.ann.layer.iter().all(Option::is_some));
    }

    #[test]
    fn parameters_are_validated() {
        assert!(build_lb_unrooted(2, 1, 1, 1).is_err());
        assert!(build_lb_rooted(2, 1, 0, 1).is_err());
        assert!(build_lb_rooted(1, 1, 1, 1).is_err());
    }
}
