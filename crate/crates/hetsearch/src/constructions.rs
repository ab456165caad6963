//! Gadget tree families with engineered search behavior.
//!
//! * [`gen_tl`] and [`gen_hl`] build three-color trees whose lower bound 3
//!   is met only by strategies that recontaminate: the supplied witnesses
//!   ([`nonmonotone_tl_strategy`], [`nonmonotone_hl_strategy`]) succeed with
//!   three searchers at the cost of one recontaminated path segment per
//!   three cleaned spine vertices.
//! * [`gen_tsat`] maps a 3-CNF formula to a tree with lower bound
//!   `3n + 2m + 2`; [`sat_strategy`] converts a satisfying assignment into
//!   a monotone strategy that meets the bound exactly.
//! * [`gen_tsat_tilde`] is the variant with two extra colors per variable
//!   and valve stars inside the assignment gadgets; [`sat_strategy_tilde`]
//!   meets its lower bound `5n + 2m + 2`.

use thiserror::Error;

use crate::graph::{ColorId, LabeledGraph, VertexId};
use crate::sim::{Move, SearcherId};

mod tilde;
mod tl;
mod tsat;

pub use tilde::{gen_tsat_tilde, sat_strategy_tilde};
pub use tl::{
    gen_hl, gen_tl, hl_recontamination_units, nonmonotone_hl_strategy, nonmonotone_tl_strategy,
};
pub use tsat::{gen_tsat, sat_strategy};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("formula needs at least one variable and one clause")]
    EmptyFormula,
    #[error("assignment has {got} values, formula has {want} variables")]
    AssignmentLength { got: usize, want: usize },
    #[error("assignment leaves clause {clause} unsatisfied")]
    UnsatisfiedAssignment { clause: usize },
}

/// Incremental tree builder; vertex ids are handed out in creation order.
struct Build {
    vertex_count: usize,
    edges: Vec<(VertexId, VertexId, ColorId)>,
    labels: Vec<(String, VertexId)>,
}

impl Build {
    fn new() -> Self {
        Build {
            vertex_count: 0,
            edges: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn vertex(&mut self) -> VertexId {
        let v = self.vertex_count;
        self.vertex_count += 1;
        v
    }

    fn edge(&mut self, u: VertexId, v: VertexId, color: ColorId) {
        self.edges.push((u, v, color));
    }

    /// New leaf hanging off `v`.
    fn leaf(&mut self, v: VertexId, color: ColorId) -> VertexId {
        let w = self.vertex();
        self.edge(v, w, color);
        w
    }

    /// Monochrome path of `len` edges from `u`; returns all `len + 1`
    /// vertices starting with `u`.
    fn chain(&mut self, u: VertexId, len: usize, color: ColorId) -> Vec<VertexId> {
        let mut verts = vec![u];
        for _ in 0..len {
            let prev = *verts.last().unwrap();
            verts.push(self.leaf(prev, color));
        }
        verts
    }

    fn label(&mut self, name: impl Into<String>, v: VertexId) {
        self.labels.push((name.into(), v));
    }

    fn finish(self, color_count: usize) -> LabeledGraph {
        let mut g = LabeledGraph::new_tree(self.vertex_count, self.edges)
            .expect("construction must form a tree");
        g.set_color_count(color_count);
        for (name, v) in self.labels {
            g.add_label(name, v).expect("landmark names must be unique");
        }
        g
    }
}

/// Move list under construction.
struct Plan {
    moves: Vec<Move>,
}

impl Plan {
    fn new() -> Self {
        Plan { moves: Vec::new() }
    }

    fn place(&mut self, s: SearcherId, v: VertexId) {
        self.moves.push(Move::Place { s, v });
    }

    fn remove(&mut self, s: SearcherId, v: VertexId) {
        self.moves.push(Move::Remove { s, v });
    }

    fn slide(&mut self, s: SearcherId, from: VertexId, to: VertexId) {
        self.moves.push(Move::Slide { s, from, to });
    }

    /// Slide along consecutive chain vertices, front to back.
    fn slide_chain(&mut self, s: SearcherId, chain: &[VertexId]) {
        for pair in chain.windows(2) {
            self.slide(s, pair[0], pair[1]);
        }
    }

    /// Place at a leaf, slide into the guarded hub, withdraw.
    fn shuttle(&mut self, s: SearcherId, leaf: VertexId, hub: VertexId) {
        self.place(s, leaf);
        self.slide(s, leaf, hub);
        self.remove(s, hub);
    }
}
