//! Edit-cost model.
//!
//! Six non-negative costs drive every distance in this crate: substitution,
//! deletion, and insertion for vertices and for edges. Substituting a vertex
//! or edge whose label already matches is always free, regardless of the
//! configured substitution cost.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Label;

/// Absolute tolerance for comparing accumulated edit costs.
///
/// Costs are sums of finitely many configured values, so floating-point noise
/// stays far below this bound for any realistic input.
pub const COST_TOLERANCE: f64 = 1e-9;

/// `true` when two accumulated costs are equal within [`COST_TOLERANCE`].
pub fn costs_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= COST_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cost `{name}` must be finite and non-negative, got {value}")]
pub struct CostError {
    pub name: &'static str,
    pub value: f64,
}

/// Per-operation edit costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub vertex_sub: f64,
    pub vertex_del: f64,
    pub vertex_ins: f64,
    pub edge_sub: f64,
    pub edge_del: f64,
    pub edge_ins: f64,
}

impl CostModel {
    /// Validates all six costs (finite, `>= 0`) and builds the model.
    ///
    /// Argument order: vertex sub/del/ins, then edge sub/del/ins.
    pub fn new(
        vertex_sub: f64,
        vertex_del: f64,
        vertex_ins: f64,
        edge_sub: f64,
        edge_del: f64,
        edge_ins: f64,
    ) -> Result<Self, CostError> {
        let model = CostModel {
            vertex_sub,
            vertex_del,
            vertex_ins,
            edge_sub,
            edge_del,
            edge_ins,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<(), CostError> {
        let fields = [
            ("vertex_sub", self.vertex_sub),
            ("vertex_del", self.vertex_del),
            ("vertex_ins", self.vertex_ins),
            ("edge_sub", self.edge_sub),
            ("edge_del", self.edge_del),
            ("edge_ins", self.edge_ins),
        ];
        for (name, value) in fields {
            if !value.is_finite() || value < 0.0 {
                return Err(CostError { name, value });
            }
        }
        Ok(())
    }

    /// Uniform-flavoured model: every substitution costs 1, every deletion
    /// and insertion costs 2, for vertices and edges alike.
    pub fn uniform() -> Self {
        CostModel {
            vertex_sub: 1.0,
            vertex_del: 2.0,
            vertex_ins: 2.0,
            edge_sub: 1.0,
            edge_del: 2.0,
            edge_ins: 2.0,
        }
    }

    /// Model that strongly penalizes structural change: deletions and
    /// insertions are an order of magnitude pricier than substitutions.
    pub fn high_indel() -> Self {
        CostModel {
            vertex_sub: 4.0,
            vertex_del: 12.0,
            vertex_ins: 12.0,
            edge_sub: 1.0,
            edge_del: 10.0,
            edge_ins: 10.0,
        }
    }

    /// Cost of relabeling vertex `a` to `b`: free when the labels match.
    pub fn vertex_substitution(&self, a: &Label, b: &Label) -> f64 {
        if a == b {
            0.0
        } else {
            self.vertex_sub
        }
    }

    /// Cost of relabeling edge `a` to `b`: free when the labels match.
    pub fn edge_substitution(&self, a: &Label, b: &Label) -> f64 {
        if a == b {
            0.0
        } else {
            self.edge_sub
        }
    }
}

impl Default for CostModel {
    /// Defaults favour substitution over delete/insert: vertex operations
    /// cost 2/4/4, edge operations 1/2/2.
    fn default() -> Self {
        CostModel {
            vertex_sub: 2.0,
            vertex_del: 4.0,
            vertex_ins: 4.0,
            edge_sub: 1.0,
            edge_del: 2.0,
            edge_ins: 2.0,
        }
    }
}
