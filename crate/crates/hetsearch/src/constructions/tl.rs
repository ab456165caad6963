//! Spine trees cleanable by three searchers only with recontamination.
//!
//! The tree has a central path `q1 - a - v0 - v - q2` (colors 2,1,1,2),
//! a spine `v0, v1, ..., v(l+1)` whose edge `x` has color `x mod 3` with
//! two pendant leaves per inner spine vertex, and a twelve-edge caterpillar
//! hanging off each of `q1`, `q2`. Every vertex of degree at least two
//! touches two colors, so all areas are single edges and the lower bound
//! is 3. The emitted three-searcher strategy walks the spine left to
//! right; every third step it must abandon the central guard, which
//! recontaminates the `v0 - v` segment.
//!
//! `gen_hl` additionally stretches each central-path edge into a chain of
//! `m` edges, so each abandonment recontaminates `m` units while the
//! vertex count stays linear in `l + m`.

use super::{Build, ConstructionError, Plan};
use crate::graph::{LabeledGraph, VertexId};
use crate::sim::{SearcherAssignment, Strategy};

/// One caterpillar: a root with three children (color-0 stems), each child
/// carrying three color-1 leaves.
struct Prime {
    root: VertexId,
    kids: [VertexId; 3],
    leaves: [[VertexId; 3]; 3],
}

struct HlLayout {
    /// Spine vertices `v0 ..= v(l+1)`.
    spine: Vec<VertexId>,
    /// Pendant leaves of `v_x`, `x = 1..=l`: colors `x mod 3`, `(x+2) mod 3`.
    pend: Vec<(VertexId, VertexId)>,
    /// Central-path chains, each `m` edges, listed away from the spine.
    q1: VertexId,
    q2: VertexId,
    a: VertexId,
    v: VertexId,
    chain_q1_a: Vec<VertexId>,
    chain_a_v0: Vec<VertexId>,
    chain_v0_v: Vec<VertexId>,
    chain_v_q2: Vec<VertexId>,
    prime: [Prime; 2],
}

fn caterpillar(b: &mut Build, root: VertexId) -> Prime {
    let mut kids = [0; 3];
    let mut leaves = [[0; 3]; 3];
    for k in 0..3 {
        kids[k] = b.leaf(root, 0);
        for t in 0..3 {
            leaves[k][t] = b.leaf(kids[k], 1);
        }
    }
    Prime { root, kids, leaves }
}

fn layout_hl(l: usize, m: usize) -> Result<(HlLayout, LabeledGraph), ConstructionError> {
    if l < 3 {
        return Err(ConstructionError::BadParameter(format!(
            "spine length {l} is below the minimum 3"
        )));
    }
    if m == 0 {
        return Err(ConstructionError::BadParameter(
            "stretch factor must be positive".into(),
        ));
    }
    let mut b = Build::new();

    let spine: Vec<VertexId> = (0..=l + 1).map(|_| b.vertex()).collect();
    for x in 0..=l {
        b.edge(spine[x], spine[x + 1], x % 3);
    }
    let mut pend = Vec::new();
    for x in 1..=l {
        pend.push((b.leaf(spine[x], x % 3), b.leaf(spine[x], (x + 2) % 3)));
    }

    let a = b.vertex();
    let v = b.vertex();
    let q1 = b.vertex();
    let q2 = b.vertex();
    let mut chain_a_v0 = b.chain(a, m - 1, 1);
    let last = *chain_a_v0.last().unwrap();
    b.edge(last, spine[0], 1);
    chain_a_v0.push(spine[0]);
    let mut chain_v0_v = b.chain(spine[0], m - 1, 1);
    let last = *chain_v0_v.last().unwrap();
    b.edge(last, v, 1);
    chain_v0_v.push(v);
    let mut chain_q1_a = b.chain(q1, m - 1, 2);
    let last = *chain_q1_a.last().unwrap();
    b.edge(last, a, 2);
    chain_q1_a.push(a);
    let mut chain_v_q2 = b.chain(v, m - 1, 2);
    let last = *chain_v_q2.last().unwrap();
    b.edge(last, q2, 2);
    chain_v_q2.push(q2);

    let prime = [caterpillar(&mut b, q1), caterpillar(&mut b, q2)];

    b.label("q1", q1);
    b.label("q2", q2);
    b.label("a", a);
    b.label("v", v);
    for (x, &s) in spine.iter().enumerate() {
        b.label(format!("v{x}"), s);
    }

    let graph = b.finish(3);
    Ok((
        HlLayout {
            spine,
            pend,
            q1,
            q2,
            a,
            v,
            chain_q1_a,
            chain_a_v0,
            chain_v0_v,
            chain_v_q2,
            prime,
        },
        graph,
    ))
}

/// Spine tree with unit central-path edges: `3l + 30` vertices.
pub fn gen_tl(l: usize) -> Result<LabeledGraph, ConstructionError> {
    gen_hl(l, 1)
}

/// Spine tree with each central-path edge stretched to `m` edges.
pub fn gen_hl(l: usize, m: usize) -> Result<LabeledGraph, ConstructionError> {
    layout_hl(l, m).map(|(_, g)| g)
}

/// Pendant leaf of `v_x` with color `c`.
fn pend_of(lay: &HlLayout, x: usize, c: usize) -> VertexId {
    let (same, prev) = lay.pend[x - 1];
    if c == x % 3 {
        same
    } else {
        debug_assert_eq!(c, (x + 2) % 3);
        prev
    }
}

/// Clean a caterpillar whose root is held by the color-2 guard.
/// Searcher 1 shuttles the leaves, searcher 0 retires through the root.
fn clean_prime(p: &mut Plan, t: &Prime) {
    for k in 0..3 {
        p.place(1, t.leaves[k][0]);
        p.slide(1, t.leaves[k][0], t.kids[k]);
        p.place(0, t.kids[k]);
        p.remove(1, t.kids[k]);
        p.shuttle(1, t.leaves[k][1], t.kids[k]);
        p.place(1, t.leaves[k][2]);
        p.slide(1, t.leaves[k][2], t.kids[k]);
        p.slide(0, t.kids[k], t.root);
        p.remove(1, t.kids[k]);
        p.remove(0, t.root);
    }
}

/// Three-searcher strategy for `gen_tl(l)`; succeeds with `floor(l/3) +
/// (1 if l = 2 mod 3)` recontaminated units.
pub fn nonmonotone_tl_strategy(l: usize) -> Result<Strategy, ConstructionError> {
    nonmonotone_hl_strategy(l, 1)
}

/// Three-searcher strategy for `gen_hl(l, m)`; recontaminates `m` units
/// per abandonment of the central guard.
pub fn nonmonotone_hl_strategy(l: usize, m: usize) -> Result<Strategy, ConstructionError> {
    let (lay, _) = layout_hl(l, m)?;
    let sp = &lay.spine;
    let mut p = Plan::new();

    // Left caterpillar, then walk the guard to v0 and open the spine.
    // Searcher ids equal their colors.
    p.place(2, lay.q1);
    clean_prime(&mut p, &lay.prime[0]);
    p.slide_chain(2, &lay.chain_q1_a);
    p.place(1, lay.a);
    p.slide_chain(1, &lay.chain_a_v0);
    p.remove(2, lay.a);
    p.place(0, sp[0]);
    p.slide(0, sp[0], sp[1]);

    // Entering step j: searcher (j-1) mod 3 fronts at v_j, searcher
    // j mod 3 guards the center (at v when j = 2 mod 3, else at v0),
    // searcher (j+1) mod 3 is off the tree.
    for j in 1..l {
        let g = j % 3;
        let f = (j + 2) % 3;
        let h = (j + 1) % 3;
        match j % 3 {
            1 => {
                p.slide_chain(g, &lay.chain_v0_v);
                p.place(h, lay.v);
                p.remove(g, lay.v);
            }
            2 => {
                p.place(h, sp[0]);
                // The guard leaves v while the right half is dirty: the
                // v0 - v chain recontaminates up to the new guard.
                p.remove(g, lay.v);
            }
            _ => {
                p.place(h, sp[0]);
                p.remove(g, sp[0]);
            }
        }
        p.place(g, pend_of(&lay, j, g));
        p.slide(g, pend_of(&lay, j, g), sp[j]);
        p.slide(g, sp[j], sp[j + 1]);
        p.slide(f, sp[j], pend_of(&lay, j, f));
        p.remove(f, pend_of(&lay, j, f));
    }

    // Tail: finish the spine tip, rebuild the guard chain to q2, and
    // sweep the right caterpillar.
    match l % 3 {
        0 => {
            p.place(1, sp[0]);
            p.remove(0, sp[0]);
            p.place(0, pend_of(&lay, l, 0));
            p.slide(0, pend_of(&lay, l, 0), sp[l]);
            p.slide(0, sp[l], sp[l + 1]);
            p.slide(2, sp[l], pend_of(&lay, l, 2));
            p.remove(2, pend_of(&lay, l, 2));
            p.remove(0, sp[l + 1]);
            p.slide_chain(1, &lay.chain_v0_v);
            p.place(2, lay.v);
            p.slide_chain(2, &lay.chain_v_q2);
            p.remove(1, lay.v);
        }
        1 => {
            p.slide_chain(1, &lay.chain_v0_v);
            p.place(2, lay.v);
            p.remove(1, lay.v);
            p.place(1, pend_of(&lay, l, 1));
            p.slide(1, pend_of(&lay, l, 1), sp[l]);
            p.slide(1, sp[l], sp[l + 1]);
            p.slide(0, sp[l], pend_of(&lay, l, 0));
            p.remove(0, pend_of(&lay, l, 0));
            p.remove(1, sp[l + 1]);
            p.slide_chain(2, &lay.chain_v_q2);
        }
        _ => {
            p.place(0, sp[0]);
            // One further abandonment: the freshly recleaned chain is
            // given up again to free the color-2 searcher for the tip.
            p.remove(2, lay.v);
            p.place(2, pend_of(&lay, l, 2));
            p.slide(2, pend_of(&lay, l, 2), sp[l]);
            p.slide(2, sp[l], sp[l + 1]);
            p.slide(1, sp[l], pend_of(&lay, l, 1));
            p.remove(1, pend_of(&lay, l, 1));
            p.remove(2, sp[l + 1]);
            p.place(1, sp[0]);
            p.remove(0, sp[0]);
            p.slide_chain(1, &lay.chain_v0_v);
            p.place(2, lay.v);
            p.slide_chain(2, &lay.chain_v_q2);
            p.remove(1, lay.v);
        }
    }
    clean_prime(&mut p, &lay.prime[1]);
    p.remove(2, lay.q2);

    Ok(Strategy {
        assignment: SearcherAssignment::new(vec![0, 1, 2]),
        moves: p.moves,
    })
}

/// Recontaminated units of the emitted strategy.
pub fn hl_recontamination_units(l: usize, m: usize) -> usize {
    m * (l / 3 + usize::from(l % 3 == 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyclean::lower_bound;
    use crate::sim::{is_monotone, simulate, simulate_fixpoint, validate_strategy};

    #[test]
    fn tl_counts() {
        let g = gen_tl(3).unwrap();
        assert_eq!(g.vertex_count(), 39);
        assert_eq!(g.edge_count(), 38);
        for l in 3..=10 {
            let g = gen_tl(l).unwrap();
            assert_eq!(g.vertex_count(), 3 * l + 30);
            assert!(g.is_tree());
        }
    }

    #[test]
    fn tl_rejects_bad_parameters() {
        assert!(gen_tl(2).is_err());
        assert!(gen_hl(5, 0).is_err());
    }

    #[test]
    fn hl_counts() {
        for m in 1..=4 {
            let g = gen_hl(4, m).unwrap();
            assert_eq!(g.vertex_count(), 3 * 4 + 30 + 4 * (m - 1));
        }
    }

    #[test]
    fn tl_lower_bound_is_three() {
        for l in 3..=10 {
            let report = lower_bound(&gen_tl(l).unwrap());
            assert_eq!(report.total, 3, "l = {l}");
            assert!(report.area_numbers.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn landmarks_present() {
        let g = gen_tl(5).unwrap();
        for name in ["q1", "q2", "a", "v", "v0", "v5", "v6"] {
            assert!(g.landmark(name).is_some(), "missing {name}");
        }
    }

    #[test]
    fn strategy_cleans_with_predicted_recontamination() {
        for l in 3..=12 {
            let g = gen_tl(l).unwrap();
            let s = nonmonotone_tl_strategy(l).unwrap();
            assert!(validate_strategy(&g, &s).is_empty(), "l = {l}");
            let trace = simulate(&g, &s).unwrap();
            assert!(trace.success, "l = {l}");
            assert!(!is_monotone(&trace), "l = {l}");
            assert_eq!(trace.max_simultaneous, 3);
            assert_eq!(
                trace.unit_recontaminations,
                hl_recontamination_units(l, 1),
                "l = {l}"
            );
        }
    }

    #[test]
    fn hl_strategy_matches_formula() {
        for l in 3..=8 {
            for m in 1..=4 {
                let g = gen_hl(l, m).unwrap();
                let s = nonmonotone_hl_strategy(l, m).unwrap();
                let trace = simulate(&g, &s).unwrap();
                assert!(trace.success, "l = {l} m = {m}");
                assert_eq!(trace.max_simultaneous, 3);
                assert_eq!(
                    trace.unit_recontaminations,
                    hl_recontamination_units(l, m),
                    "l = {l} m = {m}"
                );
            }
        }
    }

    #[test]
    fn both_simulations_agree() {
        let g = gen_tl(7).unwrap();
        let s = nonmonotone_tl_strategy(7).unwrap();
        let a = simulate(&g, &s).unwrap();
        let b = simulate_fixpoint(&g, &s).unwrap();
        assert_eq!(a, b);
    }
}
