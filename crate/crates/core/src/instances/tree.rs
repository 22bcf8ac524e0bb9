//! Trees and forests with layer annotations.

use std::collections::VecDeque;
use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeKind {
    Rooted,
    Unrooted,
}

impl TreeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeKind::Rooted => "rooted",
            TreeKind::Unrooted => "unrooted",
        }
    }
}

/// A layer of the lower-bound constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    R(usize),
    C(usize),
}

impl Layer {
    /// Position in the order (R,1) < (C,1) < (R,2) < …
    pub fn rank(self) -> usize {
        match self {
            Layer::R(i) => 2 * i,
            Layer::C(i) => 2 * i + 1,
        }
    }

    fn parse(s: &str) -> Option<Layer> {
        let (kind, num) = s.split_at(1);
        let i = num.parse().ok()?;
        match kind {
            "R" => Some(Layer::R(i)),
            "C" => Some(Layer::C(i)),
            _ => None,
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Layer::R(i) => write!(f, "R{i}"),
            Layer::C(i) => write!(f, "C{i}"),
        }
    }
}

/// A core path, listed from the end nearest the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorePath {
    pub layer: usize,
    pub nodes: Vec<usize>,
    /// The path P_i of the main chain (rooted) or none (unrooted).
    pub main: bool,
}

/// Construction parameters carried by lower-bound instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LowerBoundMeta {
    pub delta: usize,
    /// β for rooted instances, γ for unrooted ones.
    pub radius: usize,
    pub k: usize,
    pub t: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    pub layer: Vec<Option<Layer>>,
    /// (path id, position from the root end).
    pub core_path: Vec<Option<(usize, usize)>>,
    pub chunk: Vec<Option<usize>>,
    /// Second chunk of a node formed by identifying two nodes.
    pub secondary_chunk: Vec<Option<usize>>,
    pub paths: Vec<CorePath>,
    pub lower_bound: Option<LowerBoundMeta>,
}

impl Annotations {
    fn sized(n: usize) -> Self {
        Annotations {
            layer: vec![None; n],
            core_path: vec![None; n],
            chunk: vec![None; n],
            secondary_chunk: vec![None; n],
            paths: Vec::new(),
            lower_bound: None,
        }
    }

    fn push(&mut self) {
        self.layer.push(None);
        self.core_path.push(None);
        self.chunk.push(None);
        self.secondary_chunk.push(None);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid tree JSON: {0}")]
    Json(String),
    #[error("node {0} out of range")]
    NodeOutOfRange(usize),
    #[error("graph contains a cycle")]
    Cycle,
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid parameters: {0}")]
    Params(String),
}

/// A rooted forest or an unrooted tree. Rooted: `parent` is the real
/// parent. Unrooted: `parent` is an orientation from the construction root
/// (node 0 when read from JSON), used only for traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    kind: TreeKind,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Rooted: [parent, child]. Unrooted: endpoints in input order.
    edges: Vec<[usize; 2]>,
    /// Incident edge ids per node, in port order.
    incident: Vec<Vec<usize>>,
    pub ann: Annotations,
}

impl Tree {
    pub fn new(kind: TreeKind) -> Self {
        Tree {
            kind,
            parent: Vec::new(),
            children: Vec::new(),
            edges: Vec::new(),
            incident: Vec::new(),
            ann: Annotations::default(),
        }
    }

    /// Adds a node below `parent`; node ids follow insertion order.
    pub fn add_node(&mut self, parent: Option<usize>) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.incident.push(Vec::new());
        self.ann.push();
        if let Some(p) = parent {
            self.children[p].push(id);
            let e = self.edges.len();
            self.edges.push([p, id]);
            self.incident[p].push(e);
            self.incident[id].push(e);
        }
        id
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn is_rooted(&self) -> bool {
        self.kind == TreeKind::Rooted
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Endpoint of edge `e` other than `v`.
    pub fn other(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Neighbors in port order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&e| self.other(e, v))
    }

    /// Port of `v` leading to `w`.
    pub fn port(&self, v: usize, w: usize) -> Option<usize> {
        self.incident[v].iter().position(|&e| self.other(e, v) == w)
    }

    /// Side (0 or 1) of `v` on edge `e`.
    pub fn side(&self, e: usize, v: usize) -> usize {
        if self.edges[e][0] == v {
            0
        } else {
            1
        }
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    /// Breadth-first from each root in id order, children in stored order.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut queue = VecDeque::new();
        for r in self.roots() {
            queue.push_back(r);
            while let Some(v) = queue.pop_front() {
                out.push(v);
                queue.extend(self.children[v].iter().copied());
            }
        }
        out
    }

    /// Distance from `src` to every node (usize::MAX when unreachable).
    pub fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Nodes within distance `radius` of `src`, in BFS discovery order.
    pub fn ball(&self, src: usize, radius: usize) -> Vec<usize> {
        let mut seen = std::collections::HashMap::new();
        seen.insert(src, 0usize);
        let mut out = vec![src];
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = seen[&v];
            if d == radius {
                continue;
            }
            for w in self.neighbors(v) {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }

    pub fn depth_of(&self, mut v: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent[v] {
            v = p;
            d += 1;
        }
        d
    }

    /// Builds an unrooted tree from an edge list, orienting it from node 0.
    pub fn from_edges(n: usize, edges: &[[usize; 2]]) -> Result<Tree, TreeError> {
        if n > 0 && edges.len() >= n {
            return Err(TreeError::Cycle);
        }
        let t = Tree::from_edge_forest(n, edges)?;
        if t.roots().len() > 1 {
            return Err(TreeError::Disconnected);
        }
        Ok(t)
    }

    /// Like [`Tree::from_edges`] but allows several components, each
    /// oriented from its smallest node.
    pub fn from_edge_forest(n: usize, edges: &[[usize; 2]]) -> Result<Tree, TreeError> {
        let mut incident = vec![Vec::new(); n];
        for (e, &[a, b]) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(TreeError::NodeOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(TreeError::Cycle);
            }
            incident[a].push(e);
            incident[b].push(e);
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut components = 0;
        for root in 0..n {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &e in &incident[v] {
                    let [a, b] = edges[e];
                    let w = if a == v { b } else { a };
                    if Some(w) == parent[v] {
                        continue;
                    }
                    if seen[w] {
                        return Err(TreeError::Cycle);
                    }
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    queue.push_back(w);
                }
            }
        }
        if edges.len() + components != n {
            // parallel edges
            return Err(TreeError::Cycle);
        }
        Ok(Tree {
            kind: TreeKind::Unrooted,
            parent,
            children,
            edges: edges.to_vec(),
            incident,
            ann: Annotations::sized(n),
        })
    }

    /// Builds a rooted forest from a parent array.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Tree, TreeError> {
        let n = parents.len();
        let mut t = Tree::new(TreeKind::Rooted);
        t.parent = parents.to_vec();
        t.children = vec![Vec::new(); n];
        t.incident = vec![Vec::new(); n];
        t.ann = Annotations::sized(n);
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(TreeError::NodeOutOfRange(p));
                }
                t.children[p].push(v);
                let e = t.edges.len();
                t.edges.push([p, v]);
                t.incident[p].push(e);
                t.incident[v].push(e);
            }
        }
        if t.bfs_order().len() != n {
            return Err(TreeError::Cycle);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("kind".into(), json!(self.kind.as_str()));
        obj.insert("n".into(), json!(self.len()));
        match self.kind {
            TreeKind::Rooted => {
                let parent: Vec<i64> = self
                    .parent
                    .iter()
                    .map(|p| p.map_or(-1, |p| p as i64))
                    .collect();
                obj.insert("parent".into(), json!(parent));
            }
            TreeKind::Unrooted => {
                obj.insert("edges".into(), json!(self.edges));
            }
        }
        let mut ann = Map::new();
        if self.ann.layer.iter().any(Option::is_some) {
            let v: Vec<Value> = self
                .ann
                .layer
                .iter()
                .map(|l| l.map_or(Value::Null, |l| json!(l.to_string())))
                .collect();
            ann.insert("layer".into(), Value::Array(v));
        }
        if self.ann.core_path.iter().any(Option::is_some) {
            let v: Vec<Value> = self
                .ann
                .core_path
                .iter()
                .map(|c| c.map_or(Value::Null, |(p, i)| json!([p, i])))
                .collect();
            ann.insert("core_path".into(), Value::Array(v));
        }
        if self.ann.chunk.iter().any(Option::is_some) {
            ann.insert("chunk".into(), json!(self.ann.chunk));
        }
        if self.ann.secondary_chunk.iter().any(Option::is_some) {
            ann.insert("secondary_chunk".into(), json!(self.ann.secondary_chunk));
        }
        if !self.ann.paths.is_empty() {
            let main: Vec<usize> = (0..self.ann.paths.len())
                .filter(|&i| self.ann.paths[i].main)
                .collect();
            ann.insert("main_paths".into(), json!(main));
        }
        if let Some(lb) = self.ann.lower_bound {
            ann.insert(
                "lower_bound".into(),
                json!({"delta": lb.delta, "radius": lb.radius, "k": lb.k, "t": lb.t}),
            );
        }
        obj.insert("annotations".into(), Value::Object(ann));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Tree, TreeError> {
        let bad = |m: &str| TreeError::Json(m.to_string());
        let kind = v.get("kind").and_then(Value::as_str).ok_or(bad("missing kind"))?;
        let n = v.get("n").and_then(Value::as_u64).ok_or(bad("missing n"))? as usize;
        let mut tree = match kind {
            "rooted" => {
                let arr = v
                    .get("parent")
                    .and_then(Value::as_array)
                    .ok_or(bad("missing parent array"))?;
                if arr.len() != n {
                    return Err(bad("parent array length differs from n"));
                }
                let parents = arr
                    .iter()
                    .map(|p| {
                        let p = p.as_i64().ok_or(bad("parent entries must be integers"))?;
                        Ok((p >= 0).then_some(p as usize))
                    })
                    .collect::<Result<Vec<_>, TreeError>>()?;
                Tree::from_parents(&parents)?
            }
            "unrooted" => {
                let arr = v
                    .get("edges")
                    .and_then(Value::as_array)
                    .ok_or(bad("missing edges array"))?;
                let edges = arr
                    .iter()
                    .map(|e| {
                        let pair = e.as_array().filter(|p| p.len() == 2).ok_or(bad("edge must be a pair"))?;
                        let a = pair[0].as_u64().ok_or(bad("edge endpoints must be integers"))?;
                        let b = pair[1].as_u64().ok_or(bad("edge endpoints must be integers"))?;
                        Ok([a as usize, b as usize])
                    })
                    .collect::<Result<Vec<_>, TreeError>>()?;
                Tree::from_edges(n, &edges)?
            }
            other => return Err(TreeError::Json(format!("unknown kind `{other}`"))),
        };
        if let Some(ann) = v.get("annotations") {
            tree.read_annotations(ann)?;
        }
        Ok(tree)
    }

    fn read_annotations(&mut self, ann: &Value) -> Result<(), TreeError> {
        let n = self.len();
        let bad = |m: &str| TreeError::Json(m.to_string());
        let arr = |key: &str| -> Result<Option<&Vec<Value>>, TreeError> {
            match ann.get(key) {
                None => Ok(None),
                Some(v) => {
                    let a = v.as_array().ok_or(TreeError::Json(format!("{key} must be an array")))?;
                    if a.len() != n {
                        return Err(TreeError::Json(format!("{key} length differs from n")));
                    }
                    Ok(Some(a))
                }
            }
        };
        if let Some(a) = arr("layer")? {
            for (i, x) in a.iter().enumerate() {
                self.ann.layer[i] = match x {
                    Value::Null => None,
                    Value::String(s) => Some(Layer::parse(s).ok_or(bad("bad layer tag"))?),
                    _ => return Err(bad("bad layer tag")),
                };
            }
        }
        if let Some(a) = arr("core_path")? {
            for (i, x) in a.iter().enumerate() {
                self.ann.core_path[i] = match x {
                    Value::Null => None,
                    Value::Array(p) if p.len() == 2 => Some((
                        p[0].as_u64().ok_or(bad("bad core_path entry"))? as usize,
                        p[1].as_u64().ok_or(bad("bad core_path entry"))? as usize,
                    )),
                    _ => return Err(bad("bad core_path entry")),
                };
            }
        }
        for (key, target) in [
            ("chunk", &mut self.ann.chunk),
            ("secondary_chunk", &mut self.ann.secondary_chunk),
        ] {
            if let Some(v) = ann.get(key) {
                let a = v.as_array().ok_or(TreeError::Json(format!("{key} must be an array")))?;
                if a.len() != n {
                    return Err(TreeError::Json(format!("{key} length differs from n")));
                }
                for (i, x) in a.iter().enumerate() {
                    target[i] = x.as_u64().map(|c| c as usize);
                }
            }
        }
        // rebuild the path registry from per-node entries
        let mut paths: Vec<Vec<(usize, usize)>> = Vec::new();
        for (v, cp) in self.ann.core_path.iter().enumerate() {
            if let Some((p, i)) = *cp {
                if paths.len() <= p {
                    paths.resize(p + 1, Vec::new());
                }
                paths[p].push((i, v));
            }
        }
        let main: Vec<usize> = ann
            .get("main_paths")
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(|x| x.as_u64().map(|x| x as usize)).collect())
            .unwrap_or_default();
        self.ann.paths = paths
            .into_iter()
            .enumerate()
            .map(|(id, mut nodes)| {
                nodes.sort_unstable();
                let nodes: Vec<usize> = nodes.into_iter().map(|(_, v)| v).collect();
                let layer = nodes
                    .first()
                    .and_then(|&v| match self.ann.layer[v] {
                        Some(Layer::C(i)) => Some(i),
                        _ => None,
                    })
                    .unwrap_or(0);
                CorePath {
                    layer,
                    nodes,
                    main: main.contains(&id),
                }
            })
            .collect();
        if let Some(lb) = ann.get("lower_bound") {
            let get = |k: &str| {
                lb.get(k)
                    .and_then(Value::as_u64)
                    .map(|x| x as usize)
                    .ok_or(TreeError::Json(format!("lower_bound.{k} missing")))
            };
            self.ann.lower_bound = Some(LowerBoundMeta {
                delta: get("delta")?,
                radius: get("radius")?,
                k: get("k")?,
                t: get("t")?,
            });
        }
        Ok(())
    }

    /// Nodes whose child count (rooted) or degree (unrooted) is neither 0/1
    /// nor Δ.
    pub fn degree_violations(&self, delta: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| match self.kind {
                TreeKind::Rooted => {
                    let c = self.children[v].len();
                    c != 0 && c != delta
                }
                TreeKind::Unrooted => {
                    let d = self.degree(v);
                    d != 1 && d != delta
                }
            })
            .collect()
    }

    pub(crate) fn set_layer(&mut self, v: usize, layer: Layer) {
        self.ann.layer[v] = Some(layer);
    }
}
