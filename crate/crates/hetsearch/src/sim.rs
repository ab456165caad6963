//! Search strategies and their execution.
//!
//! A strategy fixes one color per searcher up front and then plays a move
//! list. Executing it tracks the clean edge set move by move:
//!
//! - after a place or remove, the candidate clean set is the previous one;
//!   after a slide along `{u,v}`, the slid edge joins it;
//! - an edge of the candidate set is recontaminated when some vertex of it
//!   is connected to a vertex of a contaminated edge by a path with no
//!   occupied vertex (a single shared unoccupied vertex counts);
//! - the recontaminated edges leave the clean set, and their count adds to
//!   the running unit-recontamination total.
//!
//! `simulate` resolves recontamination with one reachability pass per move;
//! `simulate_fixpoint` peels clean edges one at a time until nothing is
//! exposed. The two must agree move for move, and the test suite checks
//! that they do.

use crate::graph::{ColorId, EdgeId, LabeledGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearcherAssignment {
    /// Color per searcher id `0..k`.
    pub colors: Vec<ColorId>,
}

impl SearcherAssignment {
    pub fn new(colors: Vec<ColorId>) -> Self {
        SearcherAssignment { colors }
    }

    pub fn searcher_count(&self) -> usize {
        self.colors.len()
    }
}

pub type SearcherId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Place { s: SearcherId, v: VertexId },
    Remove { s: SearcherId, v: VertexId },
    Slide { s: SearcherId, from: VertexId, to: VertexId },
}

impl Move {
    pub fn searcher(&self) -> SearcherId {
        match *self {
            Move::Place { s, .. } | Move::Remove { s, .. } | Move::Slide { s, .. } => s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub assignment: SearcherAssignment,
    pub moves: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub move_index: usize,
    pub description: String,
}

/// Check every move for legality without touching the clean set: color
/// constraints on place and slide, presence bookkeeping for all three kinds.
pub fn validate_strategy(graph: &LabeledGraph, strategy: &Strategy) -> Vec<Violation> {
    let k = strategy.assignment.searcher_count();
    let mut at: Vec<Option<VertexId>> = vec![None; k];
    let mut out = Vec::new();
    let bad = |i: usize, d: String, out: &mut Vec<Violation>| {
        out.push(Violation {
            move_index: i,
            description: d,
        })
    };
    for (i, mv) in strategy.moves.iter().enumerate() {
        let s = mv.searcher();
        if s >= k {
            bad(i, format!("searcher {s} out of range"), &mut out);
            continue;
        }
        let color = strategy.assignment.colors[s];
        match *mv {
            Move::Place { s, v } => {
                if v >= graph.vertex_count() {
                    bad(i, format!("vertex {v} out of range"), &mut out);
                } else if at[s].is_some() {
                    bad(i, format!("searcher {s} already on the graph"), &mut out);
                } else if !graph.vertex_colors(v).contains(&color) {
                    bad(
                        i,
                        format!("place: color {color} not among the colors of vertex {v}"),
                        &mut out,
                    );
                } else {
                    at[s] = Some(v);
                }
            }
            Move::Remove { s, v } => {
                if at[s] != Some(v) {
                    bad(i, format!("remove: searcher {s} is not at vertex {v}"), &mut out);
                } else {
                    at[s] = None;
                }
            }
            Move::Slide { s, from, to } => {
                if at[s] != Some(from) {
                    bad(i, format!("slide: searcher {s} is not at vertex {from}"), &mut out);
                } else {
                    match graph.edge_between(from, to) {
                        None => bad(i, format!("slide: no edge between {from} and {to}"), &mut out),
                        Some(e) if graph.edge(e).color != color => bad(
                            i,
                            format!(
                                "slide: edge {{{from},{to}}} has color {} but searcher {s} has color {color}",
                                graph.edge(e).color
                            ),
                            &mut out,
                        ),
                        Some(_) => at[s] = Some(to),
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("illegal strategy: {} violation(s), first at move {}: {}",
            .0.len(), .0[0].move_index, .0[0].description)]
    IllegalStrategy(Vec<Violation>),
}

/// One executed move. `cleaned` is the edge a slide added to the candidate
/// clean set (even when it was already clean); `recontaminated` lists the
/// edges removed by the recontamination rule, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub clean_size: usize,
    pub cleaned: Option<EdgeId>,
    pub recontaminated: Vec<EdgeId>,
    pub searchers_on_graph: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub edge_count: usize,
    pub searcher_count: usize,
    pub steps: Vec<TraceStep>,
    pub final_clean: Vec<bool>,
    pub success: bool,
    pub unit_recontaminations: usize,
    pub max_simultaneous: usize,
}

impl Trace {
    /// Replay the per-step clean sets from the recorded diffs.
    /// `f` receives (move index, clean set after that move).
    pub fn for_each_clean_set(&self, mut f: impl FnMut(usize, &[bool])) {
        let mut clean = vec![false; self.edge_count];
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(e) = step.cleaned {
                clean[e] = true;
            }
            for &e in &step.recontaminated {
                clean[e] = false;
            }
            debug_assert_eq!(clean.iter().filter(|&&b| b).count(), step.clean_size);
            f(i, &clean);
        }
    }
}

pub fn is_monotone(trace: &Trace) -> bool {
    trace.unit_recontaminations == 0
}

/// True when after every move the clean edges induce a connected subgraph.
/// The empty set counts as connected.
pub fn is_connected_trace(graph: &LabeledGraph, trace: &Trace) -> bool {
    let mut ok = true;
    trace.for_each_clean_set(|_, clean| {
        if ok && !edge_set_connected(graph, clean) {
            ok = false;
        }
    });
    ok
}

pub(crate) fn edge_set_connected(graph: &LabeledGraph, clean: &[bool]) -> bool {
    let Some(first) = clean.iter().position(|&b| b) else {
        return true;
    };
    let total = clean.iter().filter(|&&b| b).count();
    let mut seen_edge = vec![false; graph.edge_count()];
    let mut seen_vert = vec![false; graph.vertex_count()];
    let mut stack = vec![graph.edge(first).u, graph.edge(first).v];
    seen_edge[first] = true;
    seen_vert[graph.edge(first).u] = true;
    seen_vert[graph.edge(first).v] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &(y, e) in graph.adjacency(x) {
            if clean[e] && !seen_edge[e] {
                seen_edge[e] = true;
                count += 1;
            }
            if clean[e] && !seen_vert[y] {
                seen_vert[y] = true;
                stack.push(y);
            }
        }
    }
    count == total
}

struct SimState<'g> {
    graph: &'g LabeledGraph,
    at: Vec<Option<VertexId>>,
    occupied: Vec<u32>,
    clean: Vec<bool>,
    clean_count: usize,
    on_graph: usize,
}

impl<'g> SimState<'g> {
    fn new(graph: &'g LabeledGraph, k: usize) -> Self {
        SimState {
            graph,
            at: vec![None; k],
            occupied: vec![0; graph.vertex_count()],
            clean: vec![false; graph.edge_count()],
            clean_count: 0,
            on_graph: 0,
        }
    }

    /// Apply the movement part of a move; returns the slid edge if any.
    fn apply(&mut self, mv: &Move) -> Option<EdgeId> {
        match *mv {
            Move::Place { s, v } => {
                self.at[s] = Some(v);
                self.occupied[v] += 1;
                self.on_graph += 1;
                None
            }
            Move::Remove { s, v } => {
                self.at[s] = None;
                self.occupied[v] -= 1;
                self.on_graph -= 1;
                None
            }
            Move::Slide { s, from, to } => {
                self.at[s] = Some(to);
                self.occupied[from] -= 1;
                self.occupied[to] += 1;
                let e = self.graph.edge_between(from, to).expect("validated");
                if !self.clean[e] {
                    self.clean[e] = true;
                    self.clean_count += 1;
                }
                Some(e)
            }
        }
    }
}

fn run(
    graph: &LabeledGraph,
    strategy: &Strategy,
    mut recontaminate: impl FnMut(&LabeledGraph, &mut Vec<bool>, &[u32]) -> Vec<EdgeId>,
) -> Result<Trace, SimError> {
    let violations = validate_strategy(graph, strategy);
    if !violations.is_empty() {
        return Err(SimError::IllegalStrategy(violations));
    }
    let mut st = SimState::new(graph, strategy.assignment.searcher_count());
    let mut steps = Vec::with_capacity(strategy.moves.len());
    let mut unit = 0;
    let mut max_sim = 0;
    for mv in &strategy.moves {
        let cleaned = st.apply(mv);
        let recontaminated = recontaminate(graph, &mut st.clean, &st.occupied);
        st.clean_count -= recontaminated.len();
        unit += recontaminated.len();
        max_sim = max_sim.max(st.on_graph);
        steps.push(TraceStep {
            clean_size: st.clean_count,
            cleaned,
            recontaminated,
            searchers_on_graph: st.on_graph,
        });
    }
    Ok(Trace {
        edge_count: graph.edge_count(),
        searcher_count: strategy.assignment.searcher_count(),
        steps,
        success: st.clean_count == graph.edge_count(),
        final_clean: st.clean,
        unit_recontaminations: unit,
        max_simultaneous: max_sim,
    })
}

/// Execute a strategy, resolving recontamination by one reachability pass:
/// collect every vertex reachable from a contaminated edge through
/// unoccupied vertices, then drop each clean edge touching that set.
pub fn simulate(graph: &LabeledGraph, strategy: &Strategy) -> Result<Trace, SimError> {
    run(graph, strategy, |g, clean, occupied| {
        let mut reached = vec![false; g.vertex_count()];
        let mut stack = Vec::new();
        for (e, edge) in g.edges().iter().enumerate() {
            if clean[e] {
                continue;
            }
            for v in [edge.u, edge.v] {
                if occupied[v] == 0 && !reached[v] {
                    reached[v] = true;
                    stack.push(v);
                }
            }
        }
        while let Some(x) = stack.pop() {
            for &(y, _) in g.adjacency(x) {
                if occupied[y] == 0 && !reached[y] {
                    reached[y] = true;
                    stack.push(y);
                }
            }
        }
        let mut out = Vec::new();
        for (e, edge) in g.edges().iter().enumerate() {
            if clean[e] && (reached[edge.u] || reached[edge.v]) {
                clean[e] = false;
                out.push(e);
            }
        }
        out
    })
}

/// Execute a strategy, resolving recontamination by repeatedly removing any
/// single clean edge that shares an unoccupied vertex with a contaminated
/// edge, until no such edge remains.
pub fn simulate_fixpoint(graph: &LabeledGraph, strategy: &Strategy) -> Result<Trace, SimError> {
    run(graph, strategy, |g, clean, occupied| {
        let mut out = Vec::new();
        loop {
            let mut changed = false;
            for e in 0..g.edge_count() {
                if !clean[e] {
                    continue;
                }
                let edge = g.edge(e);
                let exposed = [edge.u, edge.v].into_iter().any(|v| {
                    occupied[v] == 0
                        && g.adjacency(v).iter().any(|&(_, f)| !clean[f])
                });
                if exposed {
                    clean[e] = false;
                    out.push(e);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        out.sort_unstable();
        out
    })
}

/// The reversal of a strategy: moves in reverse order, place and remove
/// swapped, slides flipped. Reversing twice gives back the original.
pub fn reverse_strategy(strategy: &Strategy) -> Strategy {
    let moves = strategy
        .moves
        .iter()
        .rev()
        .map(|mv| match *mv {
            Move::Place { s, v } => Move::Remove { s, v },
            Move::Remove { s, v } => Move::Place { s, v },
            Move::Slide { s, from, to } => Move::Slide { s, from: to, to: from },
        })
        .collect();
    Strategy {
        assignment: strategy.assignment.clone(),
        moves,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;

    fn path3() -> LabeledGraph {
        LabeledGraph::new_tree(3, vec![(0, 1, 0), (1, 2, 0)]).unwrap()
    }

    #[test]
    fn single_edge_sweep() {
        let g = LabeledGraph::new_tree(2, vec![(0, 1, 0)]).unwrap();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0]),
            moves: vec![
                Move::Place { s: 0, v: 0 },
                Move::Slide { s: 0, from: 0, to: 1 },
            ],
        };
        let t = simulate(&g, &s).unwrap();
        assert!(t.success);
        assert_eq!(t.unit_recontaminations, 0);
        assert_eq!(t.max_simultaneous, 1);
        let t2 = simulate_fixpoint(&g, &s).unwrap();
        assert_eq!(t, t2);
    }

    #[test]
    fn remove_recontaminates_across_shared_vertex() {
        // Clean {0,1}, stand at 1, remove: edge {1,2} is contaminated and
        // vertex 1 becomes free, so {0,1} flips back.
        let g = path3();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0]),
            moves: vec![
                Move::Place { s: 0, v: 0 },
                Move::Slide { s: 0, from: 0, to: 1 },
                Move::Remove { s: 0, v: 1 },
            ],
        };
        let t = simulate(&g, &s).unwrap();
        assert!(!t.success);
        assert_eq!(t.unit_recontaminations, 1);
        assert_eq!(t.steps[2].recontaminated, vec![0]);
        assert_eq!(t.steps[2].clean_size, 0);
        assert_eq!(t, simulate_fixpoint(&g, &s).unwrap());
    }

    #[test]
    fn one_searcher_fails_on_a_three_star() {
        let g = LabeledGraph::new_tree(4, vec![(0, 1, 0), (0, 2, 0), (0, 3, 0)]).unwrap();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0]),
            moves: vec![
                Move::Place { s: 0, v: 1 },
                Move::Slide { s: 0, from: 1, to: 0 },
                Move::Slide { s: 0, from: 0, to: 2 },
                Move::Slide { s: 0, from: 2, to: 0 },
                Move::Slide { s: 0, from: 0, to: 3 },
            ],
        };
        let t = simulate(&g, &s).unwrap();
        // Leaving the center exposes both cleaned edges to the third one.
        assert!(!t.success);
        assert!(t.unit_recontaminations >= 2);
        assert_eq!(t, simulate_fixpoint(&g, &s).unwrap());
    }

    #[test]
    fn color_constraints_reported() {
        let g = LabeledGraph::new_tree(3, vec![(0, 1, 0), (1, 2, 1)]).unwrap();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0, 1]),
            moves: vec![
                // Color 0 cannot stand on vertex 2 (only color 1 there).
                Move::Place { s: 0, v: 2 },
                // Color 1 cannot slide along the color-0 edge.
                Move::Place { s: 1, v: 1 },
                Move::Slide { s: 1, from: 1, to: 0 },
                // Removing a searcher never placed.
                Move::Remove { s: 0, v: 0 },
            ],
        };
        let v = validate_strategy(&g, &s);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0].move_index, 0);
        assert_eq!(v[1].move_index, 2);
        assert_eq!(v[2].move_index, 3);
        assert!(simulate(&g, &s).is_err());
    }

    #[test]
    fn empty_strategy_fails_but_is_monotone() {
        let g = path3();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![]),
            moves: vec![],
        };
        let t = simulate(&g, &s).unwrap();
        assert!(!t.success);
        assert!(is_monotone(&t));
        assert!(is_connected_trace(&g, &t));
    }

    #[test]
    fn connectivity_of_clean_set() {
        // Path of 3 edges; clean the two end edges first: disconnected.
        let g = LabeledGraph::new_tree(4, vec![(0, 1, 0), (1, 2, 0), (2, 3, 0)]).unwrap();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0, 0]),
            moves: vec![
                Move::Place { s: 0, v: 0 },
                Move::Slide { s: 0, from: 0, to: 1 },
                Move::Place { s: 1, v: 3 },
                Move::Slide { s: 1, from: 3, to: 2 },
                Move::Slide { s: 1, from: 2, to: 1 },
            ],
        };
        let t = simulate(&g, &s).unwrap();
        assert!(t.success);
        assert!(!is_connected_trace(&g, &t));

        // End-to-end sweep keeps it connected.
        let s2 = Strategy {
            assignment: SearcherAssignment::new(vec![0]),
            moves: vec![
                Move::Place { s: 0, v: 0 },
                Move::Slide { s: 0, from: 0, to: 1 },
                Move::Slide { s: 0, from: 1, to: 2 },
                Move::Slide { s: 0, from: 2, to: 3 },
            ],
        };
        let t2 = simulate(&g, &s2).unwrap();
        assert!(t2.success);
        assert!(is_connected_trace(&g, &t2));
    }

    #[test]
    fn reversal_is_an_involution() {
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0]),
            moves: vec![
                Move::Place { s: 0, v: 0 },
                Move::Slide { s: 0, from: 0, to: 1 },
                Move::Remove { s: 0, v: 1 },
            ],
        };
        let r = reverse_strategy(&s);
        assert_eq!(
            r.moves,
            vec![
                Move::Place { s: 0, v: 1 },
                Move::Slide { s: 0, from: 1, to: 0 },
                Move::Remove { s: 0, v: 0 },
            ]
        );
        assert_eq!(reverse_strategy(&r), s);
    }

    #[test]
    fn slide_into_guarded_region_stays_clean() {
        // Two searchers: one guards the middle, the other sweeps one side;
        // removing the sweeper afterwards must not recontaminate.
        let g = path3();
        let s = Strategy {
            assignment: SearcherAssignment::new(vec![0, 0]),
            moves: vec![
                Move::Place { s: 0, v: 1 },
                Move::Place { s: 1, v: 0 },
                Move::Slide { s: 1, from: 0, to: 1 },
                Move::Remove { s: 1, v: 1 },
            ],
        };
        let t = simulate(&g, &s).unwrap();
        assert_eq!(t.unit_recontaminations, 0);
        assert_eq!(t.steps[3].clean_size, 1);
        assert_eq!(t, simulate_fixpoint(&g, &s).unwrap());
    }
}
