//! Lower bound and polynomial cleaning for trees.
//!
//! Every strategy must put at least s(H) searchers of color c(H) into an
//! area H: searchers of other colors can stand only on H's junctions,
//! which are leaves of H, so they never help inside. Summing the worst
//! area per color gives the lower bound `lb`.
//!
//! When each color forms exactly one area, the bound is achieved by a
//! recursive sweep over the BFS tree of areas: clean an area with its own
//! color while holding one guard on every junction to an uncleaned
//! neighbor area, then hand each junction over to a guard of the cleaned
//! area's color and recurse. Junctions not shared with the parent area
//! lead only to child areas (anything else would close a cycle), so the
//! guard set is always sufficient and the sweep never recontaminates.

use thiserror::Error;

use crate::classic;
use crate::graph::{decompose_areas, ColorId, LabeledGraph, VertexId};
use crate::sim::{Move, SearcherAssignment, Strategy};

/// Per-color lower bound data for a tree.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    /// Worst area search number per color; zero for unused colors.
    pub per_color: Vec<usize>,
    /// Sum of the per-color values.
    pub total: usize,
    /// Search number of each area, indexed like the decomposition.
    pub area_numbers: Vec<usize>,
}

/// Compute the area-based lower bound on the searcher count for a tree.
pub fn lower_bound(tree: &LabeledGraph) -> LowerBoundReport {
    assert!(tree.is_tree(), "lower bound is defined for trees");
    let decomp = decompose_areas(tree);
    let mut per_color = vec![0usize; tree.color_count()];
    let mut area_numbers = Vec::with_capacity(decomp.areas.len());
    for area in &decomp.areas {
        let (sub, _, _) = tree.induced_by_edges(&area.edges);
        let s = classic::tree_search_number(&sub);
        area_numbers.push(s);
        per_color[area.color] = per_color[area.color].max(s);
    }
    let total = per_color.iter().sum();
    LowerBoundReport {
        per_color,
        total,
        area_numbers,
    }
}

/// True when every color of the tree is used and forms a single area.
/// This is the precondition for `clean_strategy`; it is slightly stronger
/// than each color class being connected, because two same-colored areas
/// may meet at a junction.
pub fn colors_connected(tree: &LabeledGraph) -> bool {
    assert!(tree.is_tree());
    if tree.edge_count() == 0 {
        return true;
    }
    let decomp = decompose_areas(tree);
    let mut seen = vec![0usize; tree.color_count()];
    for area in &decomp.areas {
        seen[area.color] += 1;
    }
    seen.iter().all(|&n| n == 1)
}

#[derive(Debug, Error)]
pub enum CleanError {
    #[error("some color is missing or forms more than one area")]
    ColorsNotConnected,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CleanOptions {
    /// Emit per-area connected strategies growing from the junction to the
    /// parent area. The searcher count may then exceed the lower bound.
    pub connected: bool,
}

/// Searcher slots are tracked per color so that a color's searchers are
/// reused across the strategy; ids are assigned per color in one block at
/// the end.
struct SlotMove {
    color: ColorId,
    slot: usize,
    mv: MoveKind,
}

enum MoveKind {
    Place(VertexId),
    Remove(VertexId),
    Slide(VertexId, VertexId),
}

struct CleanCtx<'g> {
    tree: &'g LabeledGraph,
    decomp: crate::graph::AreaDecomposition,
    connected: bool,
    moves: Vec<SlotMove>,
    in_use: Vec<Vec<bool>>,
}

impl<'g> CleanCtx<'g> {
    fn alloc(&mut self, color: ColorId) -> usize {
        let used = &mut self.in_use[color];
        match used.iter().position(|&b| !b) {
            Some(i) => {
                used[i] = true;
                i
            }
            None => {
                used.push(true);
                used.len() - 1
            }
        }
    }

    fn free(&mut self, color: ColorId, slot: usize) {
        self.in_use[color][slot] = false;
    }

    fn place(&mut self, color: ColorId, v: VertexId) -> usize {
        let slot = self.alloc(color);
        self.moves.push(SlotMove {
            color,
            slot,
            mv: MoveKind::Place(v),
        });
        slot
    }

    fn remove(&mut self, color: ColorId, slot: usize, v: VertexId) {
        self.moves.push(SlotMove {
            color,
            slot,
            mv: MoveKind::Remove(v),
        });
        self.free(color, slot);
    }

    /// Clean area `ai`; `from` is the junction shared with the parent area
    /// (already guarded by the caller), absent for the root.
    fn clean_area(&mut self, ai: usize, from: Option<VertexId>) {
        let area = &self.decomp.areas[ai];
        let color = area.color;
        let (sub, vmap, _) = self.tree.induced_by_edges(&area.edges);

        // Guard every junction to a child before touching the area.
        let children = self.decomp.bfs_tree.children[ai].clone();
        let mut child_guards = Vec::with_capacity(children.len());
        for &cj in &children {
            let v = self.decomp.shared_junction[&(ai.min(cj), ai.max(cj))];
            let gcolor = self.decomp.areas[cj].color;
            let slot = self.place(gcolor, v);
            child_guards.push((cj, v, gcolor, slot));
        }

        let local = if self.connected {
            let start = match from {
                Some(v) => vmap.iter().position(|&o| o == v).unwrap(),
                None => 0,
            };
            classic::connected_tree_strategy_from(&sub, start)
        } else {
            classic::monotone_tree_strategy(&sub)
        };
        // Searcher k of the sub-strategy becomes slot k of this color; all
        // of the color's slots are free here since its one area is this one.
        let width = local.assignment.searcher_count();
        for _ in 0..width {
            let slot = self.alloc(color);
            debug_assert!(slot < width);
        }
        for mv in &local.moves {
            let (slot, kind) = match *mv {
                Move::Place { s, v } => (s, MoveKind::Place(vmap[v])),
                Move::Remove { s, v } => (s, MoveKind::Remove(vmap[v])),
                Move::Slide { s, from, to } => (s, MoveKind::Slide(vmap[from], vmap[to])),
            };
            self.moves.push(SlotMove {
                color,
                slot,
                mv: kind,
            });
        }
        for slot in 0..width {
            self.free(color, slot);
        }

        // Hand each child junction over to this area's color and recurse.
        for (cj, v, gcolor, gslot) in child_guards {
            let own = self.place(color, v);
            self.remove(gcolor, gslot, v);
            self.clean_area(cj, Some(v));
            self.remove(color, own, v);
        }
    }
}

/// Build a monotone strategy cleaning the whole tree with `lower_bound`
/// searchers (or a connected one when requested, possibly using more).
/// Requires one area per color.
pub fn clean_strategy(tree: &LabeledGraph, options: CleanOptions) -> Result<Strategy, CleanError> {
    assert!(tree.is_tree());
    if tree.edge_count() == 0 {
        return Ok(Strategy {
            assignment: SearcherAssignment::new(vec![]),
            moves: vec![],
        });
    }
    if !colors_connected(tree) {
        return Err(CleanError::ColorsNotConnected);
    }
    let decomp = decompose_areas(tree);
    let root = decomp.bfs_tree.root;
    let mut ctx = CleanCtx {
        tree,
        decomp,
        connected: options.connected,
        moves: Vec::new(),
        in_use: vec![Vec::new(); tree.color_count()],
    };
    ctx.clean_area(root, None);

    // Per-color slot counts become contiguous id blocks.
    let widths: Vec<usize> = ctx.in_use.iter().map(|v| v.len()).collect();
    let mut offset = vec![0usize; widths.len()];
    let mut colors = Vec::new();
    for (c, &w) in widths.iter().enumerate() {
        offset[c] = colors.len();
        colors.extend(std::iter::repeat(c).take(w));
    }
    let moves = ctx
        .moves
        .into_iter()
        .map(|m| {
            let s = offset[m.color] + m.slot;
            match m.mv {
                MoveKind::Place(v) => Move::Place { s, v },
                MoveKind::Remove(v) => Move::Remove { s, v },
                MoveKind::Slide(a, b) => Move::Slide { s, from: a, to: b },
            }
        })
        .collect();
    Ok(Strategy {
        assignment: SearcherAssignment::new(colors),
        moves,
    })
}
