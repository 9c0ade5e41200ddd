//! Context-to-context similarity measures.
//!
//! Three of them read an ontology tree (weighted path, inverse
//! intermediate distance, shared root-path ratio); two compare explicit
//! context descriptions (keyword sets, task attribute vectors).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::float;
use crate::ontology::{NodeId, OntologyTree, TreeError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimilarityError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("edge {parent} -> {child} has no weight")]
    MissingWeight { parent: String, child: String },
    #[error("keyword context must contain at least one non-empty keyword")]
    EmptyKeywords,
    #[error("task context needs at least one attribute")]
    EmptyTask,
    #[error("task attribute {index} = {value} is outside [0, 1]")]
    AttributeOutOfRange { index: usize, value: f64 },
    #[error("task attribute '{0}' is not a number")]
    BadAttribute(String),
    #[error("task contexts have {left} and {right} attributes")]
    Arity { left: usize, right: usize },
    #[error("no {kind} description for context '{context}'")]
    MissingDescriptor { kind: &'static str, context: String },
    #[error("unknown measure '{0}' (expected weighted, eq1, shared, keyword or task)")]
    UnknownMeasure(String),
    #[error("unknown path mode '{0}' (expected product or reciprocal)")]
    UnknownMode(String),
}

/// How edge weights along a path combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMode {
    /// Product of the weights, in `(0, 1]`.
    #[default]
    Product,
    /// Reciprocal of the product, at least 1.
    Reciprocal,
}

impl FromStr for PathMode {
    type Err = SimilarityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "product" => Ok(PathMode::Product),
            "reciprocal" => Ok(PathMode::Reciprocal),
            _ => Err(SimilarityError::UnknownMode(s.to_string())),
        }
    }
}

impl fmt::Display for PathMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathMode::Product => "product",
            PathMode::Reciprocal => "reciprocal",
        })
    }
}

/// Similarity of two tree nodes from the weights on the path joining them.
pub fn weighted_path_similarity(
    tree: &OntologyTree,
    a: NodeId,
    b: NodeId,
    mode: PathMode,
) -> Result<f64, SimilarityError> {
    let mut path = tree.path_between(a, b)?;
    // Canonical order, so swapping the endpoints gives the same bits.
    path.edges.sort_by_key(|e| e.child.index());
    let mut product = 1.0;
    for edge in &path.edges {
        let w = tree
            .weight(edge.child)
            .ok_or_else(|| SimilarityError::MissingWeight {
                parent: tree.label(edge.parent).to_string(),
                child: tree.label(edge.child).to_string(),
            })?;
        product *= w;
    }
    Ok(match mode {
        PathMode::Product => product,
        PathMode::Reciprocal => 1.0 / product,
    })
}

/// `1 / d` where `d` counts the nodes strictly between `a` and `b`.
/// Adjacent nodes have no intermediates; `d` is floored at 1 so they
/// score 1, as does a node against itself.
pub fn inverse_distance_similarity(
    tree: &OntologyTree,
    a: NodeId,
    b: NodeId,
) -> Result<f64, SimilarityError> {
    let d = tree.intermediate_count(a, b)?;
    Ok(1.0 / d.max(1) as f64)
}

/// Shared nodes over all nodes of the two root paths.
pub fn shared_path_ratio(
    tree: &OntologyTree,
    a: NodeId,
    b: NodeId,
) -> Result<f64, SimilarityError> {
    let pa: BTreeSet<NodeId> = tree.root_path(a)?.into_iter().collect();
    let pb: BTreeSet<NodeId> = tree.root_path(b)?.into_iter().collect();
    let shared = pa.intersection(&pb).count();
    let union = pa.union(&pb).count();
    Ok(shared as f64 / union as f64)
}

/// A context described by a set of keywords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeywordContext(BTreeSet<String>);

impl KeywordContext {
    /// Keywords are trimmed and lowercased; empty ones are dropped.
    pub fn new<I, S>(keywords: I) -> Result<Self, SimilarityError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = keywords
            .into_iter()
            .map(|k| k.as_ref().trim().to_lowercase())
            .filter(|k| !k.is_empty())
            .collect();
        if set.is_empty() {
            return Err(SimilarityError::EmptyKeywords);
        }
        Ok(KeywordContext(set))
    }

    pub fn keywords(&self) -> &BTreeSet<String> {
        &self.0
    }
}

impl FromStr for KeywordContext {
    type Err = SimilarityError;

    /// Comma-separated keywords.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        KeywordContext::new(s.split(','))
    }
}

/// Jaccard index of the two keyword sets.
pub fn keyword_similarity(a: &KeywordContext, b: &KeywordContext) -> f64 {
    let shared = a.0.intersection(&b.0).count();
    let union = a.0.union(&b.0).count();
    shared as f64 / union as f64
}

/// A context described by normalized task attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskContext(Vec<f64>);

impl TaskContext {
    pub fn new(attributes: Vec<f64>) -> Result<Self, SimilarityError> {
        if attributes.is_empty() {
            return Err(SimilarityError::EmptyTask);
        }
        if let Some((index, &value)) = attributes
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(SimilarityError::AttributeOutOfRange { index, value });
        }
        Ok(TaskContext(attributes))
    }

    pub fn attributes(&self) -> &[f64] {
        &self.0
    }
}

impl FromStr for TaskContext {
    type Err = SimilarityError;

    /// Comma-separated reals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|v| {
                let v = v.trim();
                v.parse::<f64>()
                    .map_err(|_| SimilarityError::BadAttribute(v.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        TaskContext::new(values)
    }
}

/// One minus the mean absolute attribute difference.
pub fn task_similarity(a: &TaskContext, b: &TaskContext) -> Result<f64, SimilarityError> {
    if a.0.len() != b.0.len() {
        return Err(SimilarityError::Arity {
            left: a.0.len(),
            right: b.0.len(),
        });
    }
    let n = a.0.len() as f64;
    let total: f64 = a.0.iter().zip(&b.0).map(|(x, y)| float::abs(x - y)).sum();
    Ok(1.0 - total / n)
}

/// Keyword and task descriptions of tree contexts, keyed by node label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ContextDescriptors {
    pub keywords: BTreeMap<String, KeywordContext>,
    pub tasks: BTreeMap<String, TaskContext>,
}

impl ContextDescriptors {
    fn keyword(&self, context: &str) -> Result<&KeywordContext, SimilarityError> {
        self.keywords
            .get(context)
            .ok_or_else(|| SimilarityError::MissingDescriptor {
                kind: "keyword",
                context: context.to_string(),
            })
    }

    fn task(&self, context: &str) -> Result<&TaskContext, SimilarityError> {
        self.tasks
            .get(context)
            .ok_or_else(|| SimilarityError::MissingDescriptor {
                kind: "task",
                context: context.to_string(),
            })
    }
}

/// Selects one of the similarity measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Weighted(PathMode),
    InverseDistance,
    SharedPath,
    Keyword,
    Task,
}

impl Measure {
    pub fn name(&self) -> &'static str {
        match self {
            Measure::Weighted(PathMode::Product) => "weighted-product",
            Measure::Weighted(PathMode::Reciprocal) => "weighted-reciprocal",
            Measure::InverseDistance => "eq1",
            Measure::SharedPath => "shared",
            Measure::Keyword => "keyword",
            Measure::Task => "task",
        }
    }

    /// Parses a measure selector; `weighted` takes its mode from `mode`.
    pub fn parse(name: &str, mode: PathMode) -> Result<Self, SimilarityError> {
        match name.trim().to_ascii_lowercase().as_str() {
            "weighted" => Ok(Measure::Weighted(mode)),
            "weighted-product" => Ok(Measure::Weighted(PathMode::Product)),
            "weighted-reciprocal" => Ok(Measure::Weighted(PathMode::Reciprocal)),
            "eq1" | "inverse-distance" => Ok(Measure::InverseDistance),
            "shared" => Ok(Measure::SharedPath),
            "keyword" => Ok(Measure::Keyword),
            "task" => Ok(Measure::Task),
            _ => Err(SimilarityError::UnknownMeasure(name.to_string())),
        }
    }

    pub fn uses_tree(&self) -> bool {
        !matches!(self, Measure::Keyword | Measure::Task)
    }

    /// Similarity of two contexts named by label. Tree measures look the
    /// labels up in `tree`; descriptor measures in `descriptors`.
    pub fn similarity(
        &self,
        tree: &OntologyTree,
        descriptors: &ContextDescriptors,
        a: &str,
        b: &str,
    ) -> Result<f64, SimilarityError> {
        match self {
            Measure::Keyword => Ok(keyword_similarity(
                descriptors.keyword(a)?,
                descriptors.keyword(b)?,
            )),
            Measure::Task => task_similarity(descriptors.task(a)?, descriptors.task(b)?),
            tree_measure => {
                let (ia, ib) = (tree.id(a)?, tree.id(b)?);
                tree_measure.between_nodes(tree, ia, ib)
            }
        }
    }

    /// Tree measures only; descriptor measures need labels.
    pub fn between_nodes(
        &self,
        tree: &OntologyTree,
        a: NodeId,
        b: NodeId,
    ) -> Result<f64, SimilarityError> {
        match self {
            Measure::Weighted(mode) => weighted_path_similarity(tree, a, b, *mode),
            Measure::InverseDistance => inverse_distance_similarity(tree, a, b),
            Measure::SharedPath => shared_path_ratio(tree, a, b),
            Measure::Keyword | Measure::Task => {
                let label = tree.label(a).to_string();
                Err(SimilarityError::MissingDescriptor {
                    kind: if *self == Measure::Keyword {
                        "keyword"
                    } else {
                        "task"
                    },
                    context: label,
                })
            }
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
