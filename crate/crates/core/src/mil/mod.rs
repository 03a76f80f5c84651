//! Exact optimization of legibility criteria over all linearizations.

mod ahp;
mod bnb;
mod exhaustive;
mod miz;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::metrics::LinearizationMetrics;
use crate::order::TopoOrder;

pub use ahp::{solve_ahp, AhpResult};
pub use exhaustive::{
    decide, enumerate_optima, metric_distribution, solve_exact, solve_lexicographic, Distribution,
    LexResult,
};
pub use miz::{mil5_miz_polynomial, MizDecomposition};

/// A quantity to minimize over linearizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    /// Number of maximal reasoning paths; minimizing it maximizes `then` steps.
    ThenPaths,
    /// Reference arcs between different reasoning paths.
    CrossRefs,
    /// Largest premise-to-use distance.
    MaxDistance,
    /// Total premise-to-use distance.
    SumDistance,
    /// Label count under [`LabelRule::Plain`](crate::metrics::LabelRule::Plain).
    LabelsPlain,
    /// Label count under [`LabelRule::Miz`](crate::metrics::LabelRule::Miz).
    LabelsMiz,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::ThenPaths,
        Criterion::CrossRefs,
        Criterion::MaxDistance,
        Criterion::SumDistance,
        Criterion::LabelsPlain,
        Criterion::LabelsMiz,
    ];

    pub fn value(self, m: &LinearizationMetrics) -> usize {
        match self {
            Criterion::ThenPaths => m.path_count,
            Criterion::CrossRefs => m.cross_ref_count,
            Criterion::MaxDistance => m.max_distance,
            Criterion::SumDistance => m.sum_distance,
            Criterion::LabelsPlain => m.label_count_plain,
            Criterion::LabelsMiz => m.label_count_miz,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::ThenPaths => "then",
            Criterion::CrossRefs => "cross",
            Criterion::MaxDistance => "max",
            Criterion::SumDistance => "sum",
            Criterion::LabelsPlain => "labels",
            Criterion::LabelsMiz => "labels-miz",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCriterion(pub String);

impl fmt::Display for UnknownCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown criterion `{}` (expected then, cross, max, sum, labels or labels-miz)",
            self.0
        )
    }
}

impl std::error::Error for UnknownCriterion {}

impl FromStr for Criterion {
    type Err = UnknownCriterion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "then" | "paths" | "then-paths" => Criterion::ThenPaths,
            "cross" | "cross-refs" => Criterion::CrossRefs,
            "max" | "max-distance" => Criterion::MaxDistance,
            "sum" | "sum-distance" => Criterion::SumDistance,
            "labels" | "labels-plain" => Criterion::LabelsPlain,
            "labels-miz" | "miz" => Criterion::LabelsMiz,
            _ => return Err(UnknownCriterion(s.to_owned())),
        })
    }
}

/// How [`solve_exact`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SolveMode {
    /// Visit every linear extension; reports how many are optimal.
    #[default]
    Exhaustive,
    /// Memoized search over downsets for criteria whose cost depends only on
    /// the placed set and the last vertex, bounded depth-first search otherwise.
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptResult {
    pub best_value: usize,
    /// Lexicographically smallest optimal order.
    pub witness: TopoOrder,
    /// Number of optimal orders; only known after an exhaustive run.
    pub optima_count: Option<u64>,
    /// Orders (exhaustive) or search states (branch and bound) examined.
    pub explored: u64,
}
