//! Rooted context ontologies with optional edge weights.
//!
//! A tree is stored as parent links. Every non-root node owns exactly one
//! edge (the one to its parent), so an edge is identified by its child.
//!
//! The text form is one edge per line, `parent<TAB>child[<TAB>weight]`.
//! Lines starting with `#` are comments. A one-node tree is written as a
//! single label on its own line.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use thiserror::Error;

use crate::semantic::{self, CountSource, Degeneracy, Epsilon};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("tree document declares no nodes")]
    Empty,
    #[error("two roots: '{first}' and '{second}' never appear as a child")]
    MultipleRoots { first: String, second: String },
    #[error("no root: every node appears as a child (cycle through '{0}')")]
    NoRoot(String),
    #[error("cycle: '{0}' is not reachable from the root")]
    Cycle(String),
    #[error("node '{child}' has two parents: '{first}' and '{second}'")]
    MultipleParents {
        child: String,
        first: String,
        second: String,
    },
    #[error("edge {parent} -> {child}: weight {weight} is outside (0, 1]")]
    WeightOutOfRange {
        parent: String,
        child: String,
        weight: f64,
    },
    #[error("a lone node declaration '{0}' is only allowed in a one-node tree")]
    IsolatedNode(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("unknown node id {0}")]
    UnknownId(usize),
}

/// Index of a node inside one [`OntologyTree`]. Assigned in order of first
/// appearance in the source document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Directed tree edge, parent to child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeRef {
    pub parent: NodeId,
    pub child: NodeId,
}

/// The unique path between two nodes: up from `a` to the lowest common
/// ancestor, then down to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePath {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeRef>,
}

impl NodePath {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Nodes strictly between the endpoints.
    pub fn intermediate_count(&self) -> usize {
        self.nodes.len().saturating_sub(2)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OntologyTree {
    labels: Vec<String>,
    parent: Vec<Option<NodeId>>,
    // Weight of the edge from a node to its parent.
    weight: Vec<Option<f64>>,
    children: Vec<Vec<NodeId>>,
    depth: Vec<usize>,
    // Child ids in document order; defines edge order.
    edge_order: Vec<NodeId>,
    root: NodeId,
    index: BTreeMap<String, NodeId>,
}

impl OntologyTree {
    /// Parses and validates a tree document.
    pub fn parse(source: &str) -> Result<Self, TreeError> {
        let mut lone: Option<(usize, String)> = None;
        let mut edges = Vec::new();
        for (i, raw) in source.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let parse_err = |message: String| TreeError::Parse {
                line: line_no,
                message,
            };
            if fields.iter().any(|f| f.is_empty()) {
                return Err(parse_err("empty field".into()));
            }
            match fields.as_slice() {
                [label] => {
                    if let Some((first_line, _)) = &lone {
                        return Err(parse_err(format!(
                            "second lone node declaration (first on line {first_line})"
                        )));
                    }
                    lone = Some((line_no, label.to_string()));
                }
                [parent, child] => edges.push((parent.to_string(), child.to_string(), None)),
                [parent, child, weight] => {
                    let w: f64 = weight
                        .parse()
                        .map_err(|_| parse_err(format!("weight '{weight}' is not a number")))?;
                    edges.push((parent.to_string(), child.to_string(), Some(w)));
                }
                _ => {
                    return Err(parse_err(format!(
                        "expected 1 to 3 tab-separated fields, found {}",
                        fields.len()
                    )))
                }
            }
        }
        match lone {
            Some((_, label)) if !edges.is_empty() => Err(TreeError::IsolatedNode(label)),
            Some((_, label)) => Ok(Self::single(label)),
            None => Self::from_edges(edges),
        }
    }

    /// A tree with one node and no edges.
    pub fn single(label: impl Into<String>) -> Self {
        let label = label.into();
        let mut index = BTreeMap::new();
        index.insert(label.clone(), NodeId(0));
        OntologyTree {
            labels: vec![label],
            parent: vec![None],
            weight: vec![None],
            children: vec![Vec::new()],
            depth: vec![0],
            edge_order: Vec::new(),
            root: NodeId(0),
            index,
        }
    }

    /// Builds a tree from `(parent, child, weight)` triples in order.
    pub fn from_edges<I, S>(edges: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = (S, S, Option<f64>)>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, NodeId> = BTreeMap::new();
        let mut parent: Vec<Option<NodeId>> = Vec::new();
        let mut weight: Vec<Option<f64>> = Vec::new();
        let mut edge_order = Vec::new();

        let mut intern = |label: String,
                          labels: &mut Vec<String>,
                          parent: &mut Vec<Option<NodeId>>,
                          weight: &mut Vec<Option<f64>>| {
            if let Some(&id) = index.get(&label) {
                return id;
            }
            let id = NodeId(labels.len());
            index.insert(label.clone(), id);
            labels.push(label);
            parent.push(None);
            weight.push(None);
            id
        };

        for (p, c, w) in edges {
            let (p, c): (String, String) = (p.into(), c.into());
            if p.trim().is_empty() || c.trim().is_empty() {
                return Err(TreeError::Parse {
                    line: edge_order.len() + 1,
                    message: "empty label".into(),
                });
            }
            if let Some(w) = w {
                if !(w > 0.0 && w <= 1.0) {
                    return Err(TreeError::WeightOutOfRange {
                        parent: p,
                        child: c,
                        weight: w,
                    });
                }
            }
            let pid = intern(p, &mut labels, &mut parent, &mut weight);
            let cid = intern(c, &mut labels, &mut parent, &mut weight);
            if let Some(existing) = parent[cid.0] {
                return Err(TreeError::MultipleParents {
                    child: labels[cid.0].clone(),
                    first: labels[existing.0].clone(),
                    second: labels[pid.0].clone(),
                });
            }
            parent[cid.0] = Some(pid);
            weight[cid.0] = w;
            edge_order.push(cid);
        }

        if labels.is_empty() {
            return Err(TreeError::Empty);
        }
        let mut roots = (0..labels.len()).filter(|&i| parent[i].is_none());
        let root = match (roots.next(), roots.next()) {
            (Some(r), None) => NodeId(r),
            (Some(a), Some(b)) => {
                return Err(TreeError::MultipleRoots {
                    first: labels[a].clone(),
                    second: labels[b].clone(),
                })
            }
            (None, _) => return Err(TreeError::NoRoot(labels[0].clone())),
        };

        let mut children = vec![Vec::new(); labels.len()];
        for &c in &edge_order {
            let p = parent[c.0].expect("edge child has a parent");
            children[p.0].push(c);
        }
        // Breadth-first from the root; anything unvisited sits on a cycle.
        let mut depth = vec![usize::MAX; labels.len()];
        depth[root.0] = 0;
        let mut queue = vec![root];
        let mut head = 0;
        while head < queue.len() {
            let n = queue[head];
            head += 1;
            for &c in &children[n.0] {
                depth[c.0] = depth[n.0] + 1;
                queue.push(c);
            }
        }
        if let Some(i) = depth.iter().position(|&d| d == usize::MAX) {
            return Err(TreeError::Cycle(labels[i].clone()));
        }

        Ok(OntologyTree {
            labels,
            parent,
            weight,
            children,
            depth,
            edge_order,
            root,
            index,
        })
    }

    /// Serializes back to the tab-separated form. Weights use the shortest
    /// representation that parses back to the same value.
    pub fn to_tsv(&self) -> String {
        self.render(None)
    }

    /// Serializes with weights printed to a fixed number of decimals.
    pub fn to_tsv_with_precision(&self, decimals: usize) -> String {
        self.render(Some(decimals))
    }

    fn render(&self, decimals: Option<usize>) -> String {
        let mut out = String::new();
        if self.edge_order.is_empty() {
            out.push_str(&self.labels[self.root.0]);
            out.push('\n');
            return out;
        }
        for &c in &self.edge_order {
            let p = self.parent[c.0].expect("edge child has a parent");
            out.push_str(&self.labels[p.0]);
            out.push('\t');
            out.push_str(&self.labels[c.0]);
            if let Some(w) = self.weight[c.0] {
                match decimals {
                    Some(d) => write!(out, "\t{w:.d$}").unwrap(),
                    None => write!(out, "\t{w}").unwrap(),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.labels.len()).map(NodeId)
    }

    /// Edges in document order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.edge_order.iter().map(|&c| EdgeRef {
            parent: self.parent[c.0].expect("edge child has a parent"),
            child: c,
        })
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.0]
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id.0]
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[id.0]
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.depth[id.0]
    }

    /// Weight of the edge between `child` and its parent.
    pub fn weight(&self, child: NodeId) -> Option<f64> {
        self.weight[child.0]
    }

    pub fn is_weighted(&self) -> bool {
        self.edge_order.iter().all(|c| self.weight[c.0].is_some())
    }

    /// Exact, case-sensitive label lookup.
    pub fn id(&self, label: &str) -> Result<NodeId, TreeError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| TreeError::UnknownNode(label.to_string()))
    }

    /// Label lookup, optionally ignoring case. An exact match wins.
    pub fn find(&self, label: &str, ignore_case: bool) -> Result<NodeId, TreeError> {
        if let Ok(id) = self.id(label) {
            return Ok(id);
        }
        if ignore_case {
            let wanted = label.to_lowercase();
            if let Some(i) = self.labels.iter().position(|l| l.to_lowercase() == wanted) {
                return Ok(NodeId(i));
            }
        }
        Err(TreeError::UnknownNode(label.to_string()))
    }

    fn check(&self, id: NodeId) -> Result<(), TreeError> {
        if id.0 < self.labels.len() {
            Ok(())
        } else {
            Err(TreeError::UnknownId(id.0))
        }
    }

    /// `[a, parent(a), ..., root]`.
    pub fn root_path(&self, a: NodeId) -> Result<Vec<NodeId>, TreeError> {
        self.check(a)?;
        let mut out = vec![a];
        let mut cur = a;
        while let Some(p) = self.parent[cur.0] {
            out.push(p);
            cur = p;
        }
        Ok(out)
    }

    pub fn path_between(&self, a: NodeId, b: NodeId) -> Result<NodePath, TreeError> {
        self.check(a)?;
        self.check(b)?;
        let mut up = vec![a];
        let mut down = vec![b];
        let (mut x, mut y) = (a, b);
        while self.depth[x.0] > self.depth[y.0] {
            x = self.parent[x.0].expect("non-root has a parent");
            up.push(x);
        }
        while self.depth[y.0] > self.depth[x.0] {
            y = self.parent[y.0].expect("non-root has a parent");
            down.push(y);
        }
        while x != y {
            x = self.parent[x.0].expect("non-root has a parent");
            y = self.parent[y.0].expect("non-root has a parent");
            up.push(x);
            down.push(y);
        }
        // `down` ends with the common ancestor already in `up`.
        down.pop();
        let mut nodes = up;
        nodes.extend(down.into_iter().rev());

        let edges = nodes
            .windows(2)
            .map(|pair| {
                let (u, v) = (pair[0], pair[1]);
                if self.parent[u.0] == Some(v) {
                    EdgeRef {
                        parent: v,
                        child: u,
                    }
                } else {
                    EdgeRef {
                        parent: u,
                        child: v,
                    }
                }
            })
            .collect();
        Ok(NodePath { nodes, edges })
    }

    pub fn intermediate_count(&self, a: NodeId, b: NodeId) -> Result<usize, TreeError> {
        Ok(self.path_between(a, b)?.intermediate_count())
    }

    /// Returns a copy with the given weights; `None` entries clear a weight.
    /// Indexed by child id.
    fn with_weights(&self, weights: Vec<Option<f64>>) -> Self {
        OntologyTree {
            weight: weights,
            ..self.clone()
        }
    }

    /// Replaces every edge weight with the NSS of the edge's endpoint labels.
    ///
    /// Edges whose score hits the epsilon floor are listed in the returned
    /// annotations. The input tree is left untouched.
    pub fn weigh<S: CountSource>(
        &self,
        source: &mut S,
        epsilon: Epsilon,
    ) -> Result<Weighing, WeighError<S::Error>> {
        let mut weights = vec![None; self.len()];
        let mut annotations = Vec::new();
        for edge in self.edges().collect::<Vec<_>>() {
            let parent = self.label(edge.parent);
            let child = self.label(edge.child);
            let counts = source
                .hit_counts(parent, child)
                .map_err(|source| WeighError {
                    parent: parent.to_string(),
                    child: child.to_string(),
                    source,
                })?;
            let (w, degenerate) = semantic::nss_or_floor(&counts, epsilon);
            if let Some(reason) = degenerate {
                annotations.push(EdgeAnnotation {
                    edge,
                    parent: parent.to_string(),
                    child: child.to_string(),
                    reason,
                    weight: w,
                });
            }
            weights[edge.child.0] = Some(w);
        }
        Ok(Weighing {
            tree: self.with_weights(weights),
            annotations,
        })
    }
}

/// A count source failed for one edge.
#[derive(Debug, Error)]
#[error("edge {parent} -> {child}: {source}")]
pub struct WeighError<E> {
    pub parent: String,
    pub child: String,
    pub source: E,
}

/// An edge whose weight was set to the epsilon floor.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeAnnotation {
    pub edge: EdgeRef,
    pub parent: String,
    pub child: String,
    pub reason: Degeneracy,
    pub weight: f64,
}

impl fmt::Display for EdgeAnnotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {}: {}, weight set to {}",
            self.parent, self.child, self.reason, self.weight
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Weighing {
    pub tree: OntologyTree,
    pub annotations: Vec<EdgeAnnotation>,
}
