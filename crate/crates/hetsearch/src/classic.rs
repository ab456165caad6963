//! Colorless edge search on trees.
//!
//! The search number comes from a rooted label computation. Every rooted
//! branch (stem edge plus the subtree below it) gets a strictly decreasing
//! sequence of (value, critical) entries: the first value is the branch's
//! search number, an entry is critical when no clean with that many
//! searchers can run along a path starting at the branch top, and the tail
//! after a critical entry labels what remains near the top once the heavy
//! interior is cleaned along its own internal path. Joining child labels at
//! a vertex resolves two cases, a path through the vertex entering at most
//! two heavy arms, or a path interior to one critical arm with everything
//! else packed one searcher lower. The game-state brute force cross-checks
//! the result exhaustively on small trees.
//!
//! Strategies come from avenues: a path such that every branch hanging off
//! it needs one searcher fewer. One searcher walks the avenue; at each stop
//! the remaining searchers clear the hanging branches recursively while the
//! walker guards the stop.
//!
//! Connected search is computed from the rooted recurrence
//! `g(v) = max(g1, g2 + 1)` over the two largest child values (leaves count
//! 1), minimized over the start vertex; its emitter grows the clean set
//! outward from the start, always descending into the heaviest child last
//! so that the vertex guard can be the one to leave.

use std::collections::HashMap;

use crate::graph::{EdgeId, LabeledGraph, VertexId};
use crate::sim::{Move, SearcherAssignment, SearcherId, Strategy};
use crate::solver;

/// Rooted branch label: strictly decreasing values, `true` marks a
/// critical entry. Ordering doubles as preference, smaller is easier
/// for the parent to absorb.
type Label = Vec<(usize, bool)>;

/// Searchers needed to clean the arm along a path entered from its top:
/// the arm's value, plus one when the value is critical.
fn arm_entry_cost(l: &Label) -> usize {
    l[0].0 + l[0].1 as usize
}

/// Whether k searchers clean the branch formed at one vertex by the given
/// arms plus an optional stem edge upward. Either a path runs through the
/// vertex, entering every arm of value >= k (at most two, one when the
/// stem itself must be swept with k = 1), or the path stays interior to
/// one critical arm and the rest packs with k - 1.
fn arms_feasible(arms: &[Label], k: usize, with_stem: bool) -> bool {
    let heavy: Vec<&Label> = arms.iter().filter(|l| l[0].0 >= k).collect();
    let slots = if with_stem && k == 1 { 1 } else { 2 };
    if heavy.len() <= slots && heavy.iter().all(|l| arm_entry_cost(l) <= k) {
        return true;
    }
    if k >= 2 {
        for (i, l) in arms.iter().enumerate() {
            if l[0].0 <= k && l[0].1 {
                let mut rest: Vec<Label> = arms
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, c)| c.clone())
                    .collect();
                if l.len() > 1 {
                    rest.push(l[1..].to_vec());
                }
                if arms_feasible(&rest, k - 1, with_stem) {
                    return true;
                }
            }
        }
    }
    false
}

/// Label of the branch made of a stem edge, one vertex, and the child arms.
fn join_arms(children: Vec<Label>) -> Label {
    let cap = children.iter().map(|l| l[0].0).max().unwrap_or(0) + 1;
    let s = (1..=cap)
        .find(|&k| arms_feasible(&children, k, true))
        .expect("hanging every arm is always feasible");
    let heavy: Vec<&Label> = children.iter().filter(|l| l[0].0 >= s).collect();
    let enterable = heavy.iter().all(|l| arm_entry_cost(l) <= s);
    if heavy.len() <= 1 && enterable {
        return vec![(s, false)];
    }
    let tail = if heavy.len() <= 2 && enterable {
        // The path runs through the vertex; only the stem is left above.
        vec![(1, false)]
    } else {
        let mut best: Option<Label> = None;
        for (i, l) in children.iter().enumerate() {
            if l[0].0 <= s && l[0].1 {
                let mut rest: Vec<Label> = children
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, c)| c.clone())
                    .collect();
                if l.len() > 1 {
                    rest.push(l[1..].to_vec());
                }
                if arms_feasible(&rest, s - 1, true) {
                    let cand = join_arms(rest);
                    if best.as_ref().map_or(true, |b| cand < *b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best.expect("a critical value leaves an interior core")
    };
    let mut out = vec![(s, true)];
    out.extend(tail);
    out
}

/// Memoized branch evaluation context over one underlying graph.
struct SearchCtx<'g> {
    tree: &'g LabeledGraph,
    memo: HashMap<Box<[u32]>, usize>,
}

impl<'g> SearchCtx<'g> {
    fn new(tree: &'g LabeledGraph) -> Self {
        SearchCtx {
            tree,
            memo: HashMap::new(),
        }
    }

    /// Degree of `v` counting only edges in the sorted subset.
    fn degree_in(&self, subset: &[EdgeId], v: VertexId) -> usize {
        self.tree
            .adjacency(v)
            .iter()
            .filter(|&&(_, e)| subset.binary_search(&e).is_ok())
            .count()
    }

    /// The branch at `v` through edge `e = {v,w}`: edge `e` plus everything
    /// in the subset reachable from `w` without passing `v`. Returned sorted.
    fn branch(&self, subset: &[EdgeId], v: VertexId, e: EdgeId) -> Vec<EdgeId> {
        let w = self.tree.edge(e).other(v);
        let mut out = vec![e];
        let mut seen_v = vec![v, w];
        let mut stack = vec![w];
        while let Some(x) = stack.pop() {
            for &(y, f) in self.tree.adjacency(x) {
                if f == e || y == v || subset.binary_search(&f).is_err() {
                    continue;
                }
                if !out.contains(&f) {
                    out.push(f);
                }
                if !seen_v.contains(&y) {
                    seen_v.push(y);
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn vertices_of(&self, subset: &[EdgeId]) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = subset
            .iter()
            .flat_map(|&e| [self.tree.edge(e).u, self.tree.edge(e).v])
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Search number of the subtree formed by the sorted edge subset.
    fn s_of(&mut self, subset: &[EdgeId]) -> usize {
        if subset.is_empty() {
            return 0;
        }
        let key: Box<[u32]> = subset.iter().map(|&e| e as u32).collect();
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }

        // Root the subset and list vertices parents-first.
        let root = self.tree.edge(subset[0]).u;
        let mut order: Vec<(VertexId, Option<VertexId>)> = Vec::new();
        let mut stack = vec![(root, None)];
        while let Some((v, parent)) = stack.pop() {
            order.push((v, parent));
            for &(w, e) in self.tree.adjacency(v) {
                if Some(w) != parent && subset.binary_search(&e).is_ok() {
                    stack.push((w, Some(v)));
                }
            }
        }
        debug_assert_eq!(order.len(), subset.len() + 1, "subset must be connected");

        // Labels flow leaves to root; each finished vertex hands its arm
        // label to its parent.
        let mut arms: HashMap<VertexId, Vec<Label>> = HashMap::new();
        let mut best = 0;
        for &(v, parent) in order.iter().rev() {
            let mine = arms.remove(&v).unwrap_or_default();
            match parent {
                Some(p) => arms.entry(p).or_default().push(join_arms(mine)),
                None => {
                    let cap = mine.iter().map(|l| l[0].0).max().unwrap_or(0) + 1;
                    best = (1..=cap)
                        .find(|&k| arms_feasible(&mine, k, false))
                        .expect("hanging every arm is always feasible");
                }
            }
        }

        self.memo.insert(key, best);
        best
    }

    /// A path whose hanging branches all have search number below `k`,
    /// chosen as the lexicographically smallest valid endpoint pair.
    /// Exists whenever the subset's search number is `k`.
    fn find_avenue(&mut self, subset: &[EdgeId], k: usize) -> Vec<VertexId> {
        let vs = self.vertices_of(subset);
        for &a in &vs {
            for &b in &vs {
                if b < a {
                    continue;
                }
                let path = self.path_in_subset(subset, a, b);
                if self.avenue_valid(subset, &path, k) {
                    return path;
                }
            }
        }
        panic!("no avenue found for k={k}; subset {subset:?}");
    }

    fn path_in_subset(&self, subset: &[EdgeId], a: VertexId, b: VertexId) -> Vec<VertexId> {
        // BFS within the subset.
        let mut parent: HashMap<VertexId, VertexId> = HashMap::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(a);
        parent.insert(a, a);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &(y, e) in self.tree.adjacency(x) {
                if subset.binary_search(&e).is_ok() && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while parent[&cur] != cur {
            cur = parent[&cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    fn avenue_valid(&mut self, subset: &[EdgeId], path: &[VertexId], k: usize) -> bool {
        for (i, &p) in path.iter().enumerate() {
            let inc: Vec<EdgeId> = self
                .tree
                .adjacency(p)
                .iter()
                .map(|&(_, e)| e)
                .filter(|e| subset.binary_search(e).is_ok())
                .collect();
            for e in inc {
                let w = self.tree.edge(e).other(p);
                let on_path = (i > 0 && path[i - 1] == w) || (i + 1 < path.len() && path[i + 1] == w);
                if on_path {
                    continue;
                }
                let b = self.branch(subset, p, e);
                if self.s_of(&b) >= k {
                    return false;
                }
            }
        }
        true
    }

    /// Append moves cleaning the subset with the given searcher ids. On
    /// entry no searcher of `ids` is on the graph; on exit all are off
    /// again and the subset is clean. Requires `ids.len() >= s_of(subset)`.
    fn emit_clean(&mut self, subset: &[EdgeId], ids: &[SearcherId], moves: &mut Vec<Move>) {
        if subset.is_empty() {
            return;
        }
        let vs = self.vertices_of(subset);
        if vs.iter().all(|&v| self.degree_in(subset, v) <= 2) {
            // A path: sweep it with one searcher from its smaller endpoint.
            let mut ends: Vec<VertexId> = vs
                .iter()
                .copied()
                .filter(|&v| self.degree_in(subset, v) == 1)
                .collect();
            ends.sort_unstable();
            let start = ends[0];
            let s = ids[0];
            moves.push(Move::Place { s, v: start });
            let mut cur = start;
            let mut used: Vec<EdgeId> = Vec::new();
            loop {
                let next = self
                    .tree
                    .adjacency(cur)
                    .iter()
                    .find(|&&(_, e)| subset.binary_search(&e).is_ok() && !used.contains(&e));
                match next {
                    Some(&(y, e)) => {
                        moves.push(Move::Slide { s, from: cur, to: y });
                        used.push(e);
                        cur = y;
                    }
                    None => break,
                }
            }
            moves.push(Move::Remove { s, v: cur });
            return;
        }

        let k = self.s_of(subset);
        assert!(ids.len() >= k);
        let avenue = self.find_avenue(subset, k);
        let guard = ids[0];
        moves.push(Move::Place {
            s: guard,
            v: avenue[0],
        });
        for (i, &p) in avenue.iter().enumerate() {
            if i > 0 {
                moves.push(Move::Slide {
                    s: guard,
                    from: avenue[i - 1],
                    to: p,
                });
            }
            // Clear the branches hanging at p, cheapest first.
            let mut offs: Vec<(usize, VertexId, Vec<EdgeId>)> = Vec::new();
            for &(w, e) in self.tree.adjacency(p) {
                if subset.binary_search(&e).is_err() {
                    continue;
                }
                let on_path =
                    (i > 0 && avenue[i - 1] == w) || (i + 1 < avenue.len() && avenue[i + 1] == w);
                if on_path {
                    continue;
                }
                let b = self.branch(subset, p, e);
                offs.push((self.s_of(&b), w, b));
            }
            offs.sort_by_key(|&(s, w, _)| (s, w));
            for (sb, _, b) in offs {
                self.emit_clean(&b, &ids[1..1 + sb], moves);
            }
        }
        moves.push(Move::Remove {
            s: guard,
            v: *avenue.last().unwrap(),
        });
    }
}

fn assert_colorless(tree: &LabeledGraph) -> usize {
    assert!(tree.is_tree(), "classic search expects a tree");
    let c = tree.edges().first().map(|e| e.color).unwrap_or(0);
    assert!(
        tree.edges().iter().all(|e| e.color == c),
        "classic search expects a single edge color"
    );
    c
}

/// Edge search number of a tree, colors ignored (the tree must be
/// monochromatic; recolor first if not).
pub fn tree_search_number(tree: &LabeledGraph) -> usize {
    assert!(tree.is_tree());
    if tree.edge_count() == 0 {
        return 0;
    }
    let all: Vec<EdgeId> = (0..tree.edge_count()).collect();
    SearchCtx::new(tree).s_of(&all)
}

/// A monotone strategy for a monochromatic tree using exactly
/// `tree_search_number` searchers.
pub fn monotone_tree_strategy(tree: &LabeledGraph) -> Strategy {
    let color = assert_colorless(tree);
    if tree.edge_count() == 0 {
        return Strategy {
            assignment: SearcherAssignment::new(vec![]),
            moves: vec![],
        };
    }
    let all: Vec<EdgeId> = (0..tree.edge_count()).collect();
    let mut ctx = SearchCtx::new(tree);
    let k = ctx.s_of(&all);
    let ids: Vec<SearcherId> = (0..k).collect();
    let mut moves = Vec::new();
    ctx.emit_clean(&all, &ids, &mut moves);
    Strategy {
        assignment: SearcherAssignment::new(vec![color; k]),
        moves,
    }
}

fn connected_value_from(tree: &LabeledGraph, root: VertexId) -> usize {
    // Iterative post-order over the rooted tree.
    fn g(tree: &LabeledGraph, v: VertexId, parent: Option<VertexId>) -> usize {
        let mut vals: Vec<usize> = tree
            .adjacency(v)
            .iter()
            .filter(|&&(w, _)| Some(w) != parent)
            .map(|&(w, _)| g(tree, w, Some(v)))
            .collect();
        if vals.is_empty() {
            return 1;
        }
        vals.sort_unstable_by(|a, b| b.cmp(a));
        let second = vals.get(1).copied().unwrap_or(0);
        vals[0].max(second + 1)
    }
    g(tree, root, None)
}

/// Connected search number of a tree (colors ignored).
pub fn connected_tree_search_number(tree: &LabeledGraph) -> usize {
    assert!(tree.is_tree());
    if tree.edge_count() == 0 {
        return 0;
    }
    (0..tree.vertex_count())
        .map(|r| connected_value_from(tree, r))
        .min()
        .unwrap()
}

/// Connected monotone strategy growing from the best start vertex.
pub fn connected_tree_strategy(tree: &LabeledGraph) -> Strategy {
    let root = (0..tree.vertex_count())
        .min_by_key(|&r| (connected_value_from(tree, r), r))
        .expect("nonempty tree");
    connected_tree_strategy_from(tree, root)
}

/// Connected monotone strategy growing outward from `root`, using
/// `connected_value_from(root)` searchers.
pub fn connected_tree_strategy_from(tree: &LabeledGraph, root: VertexId) -> Strategy {
    let color = assert_colorless(tree);
    if tree.edge_count() == 0 {
        return Strategy {
            assignment: SearcherAssignment::new(vec![]),
            moves: vec![],
        };
    }
    let k = connected_value_from(tree, root);
    let mut moves = Vec::new();
    moves.push(Move::Place { s: 0, v: root });
    let end = emit_connected(tree, root, None, 0, &mut moves);
    moves.push(Move::Remove { s: 0, v: end });
    Strategy {
        assignment: SearcherAssignment::new(vec![color; k]),
        moves,
    }
}

/// Clean the subtree under `v` (away from `parent`); searcher `gid` stands
/// at `v` on entry and ends at the returned vertex. Children are processed
/// cheapest-first so the guard leaves along the heaviest branch.
fn emit_connected(
    tree: &LabeledGraph,
    v: VertexId,
    parent: Option<VertexId>,
    gid: SearcherId,
    moves: &mut Vec<Move>,
) -> VertexId {
    let mut children: Vec<(usize, VertexId)> = tree
        .adjacency(v)
        .iter()
        .filter(|&&(w, _)| Some(w) != parent)
        .map(|&(w, _)| (subtree_gamma(tree, w, v), w))
        .collect();
    if children.is_empty() {
        return v;
    }
    children.sort_unstable();
    let (_, last) = *children.last().unwrap();
    for &(_, c) in &children[..children.len() - 1] {
        let w = gid + 1;
        moves.push(Move::Place { s: w, v });
        moves.push(Move::Slide { s: w, from: v, to: c });
        let end = emit_connected(tree, c, Some(v), w, moves);
        moves.push(Move::Remove { s: w, v: end });
    }
    moves.push(Move::Slide {
        s: gid,
        from: v,
        to: last,
    });
    emit_connected(tree, last, Some(v), gid, moves)
}

fn subtree_gamma(tree: &LabeledGraph, v: VertexId, parent: VertexId) -> usize {
    let mut vals: Vec<usize> = tree
        .adjacency(v)
        .iter()
        .filter(|&&(w, _)| w != parent)
        .map(|&(w, _)| subtree_gamma(tree, w, v))
        .collect();
    if vals.is_empty() {
        return 1;
    }
    vals.sort_unstable_by(|a, b| b.cmp(a));
    let second = vals.get(1).copied().unwrap_or(0);
    vals[0].max(second + 1)
}

/// Exhaustive search number for small trees; delegates to the game-state
/// solver with a single shared color.
pub fn brute_force_search_number(
    tree: &LabeledGraph,
    monotone: bool,
    connected: bool,
) -> Result<usize, solver::TooLarge> {
    solver::brute_force_search_number(tree, monotone, connected, 12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LabeledGraph;
    use crate::sim::{is_connected_trace, is_monotone, simulate};

    fn path(n: usize) -> LabeledGraph {
        LabeledGraph::new_tree(n, (0..n - 1).map(|i| (i, i + 1, 0)).collect()).unwrap()
    }

    fn star3() -> LabeledGraph {
        LabeledGraph::new_tree(4, vec![(0, 1, 0), (0, 2, 0), (0, 3, 0)]).unwrap()
    }

    /// Spider with three legs of length 2.
    fn spider() -> LabeledGraph {
        LabeledGraph::new_tree(
            7,
            vec![(0, 1, 0), (1, 2, 0), (0, 3, 0), (3, 4, 0), (0, 5, 0), (5, 6, 0)],
        )
        .unwrap()
    }

    #[test]
    fn numbers_on_small_shapes() {
        assert_eq!(tree_search_number(&path(2)), 1);
        assert_eq!(tree_search_number(&path(9)), 1);
        assert_eq!(tree_search_number(&star3()), 2);
        assert_eq!(tree_search_number(&spider()), 2);
    }

    /// Stem, then a full 3-ary tree of the given depth whose tips carry two
    /// leaves each.
    fn cascade(depth: usize) -> LabeledGraph {
        fn grow(v: usize, depth: usize, next: &mut usize, edges: &mut Vec<(usize, usize, usize)>) {
            let fan = if depth == 0 { 2 } else { 3 };
            for _ in 0..fan {
                let c = *next;
                *next += 1;
                edges.push((v, c, 0));
                if depth > 0 {
                    grow(c, depth - 1, next, edges);
                }
            }
        }
        let mut edges = vec![(0, 1, 0)];
        let mut next = 2;
        grow(1, depth, &mut next, &mut edges);
        LabeledGraph::new_tree(next, edges).unwrap()
    }

    #[test]
    fn cascade_depths() {
        // Every cascade level forces one more searcher.
        for (depth, want) in [(0, 2), (1, 3), (2, 4), (3, 5)] {
            assert_eq!(tree_search_number(&cascade(depth)), want);
        }
    }

    #[test]
    fn two_critical_arms_need_a_third_searcher() {
        // Each arm is a hub carrying two leaf stars; a two-searcher clean of
        // an arm must run star to star, so it can never begin at the root.
        // Joining two such arms costs 3 even though the root has only two
        // branches, and the hub only sees the second pair through its
        // upward branch.
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..2 {
            let hub = next;
            edges.push((0, hub, 0));
            next += 1;
            for _ in 0..2 {
                let center = next;
                edges.push((hub, center, 0));
                next += 1;
                for _ in 0..3 {
                    edges.push((center, next, 0));
                    next += 1;
                }
            }
        }
        let g = LabeledGraph::new_tree(next, edges).unwrap();
        assert_eq!(tree_search_number(&g), 3);
        let strat = monotone_tree_strategy(&g);
        let t = simulate(&g, &strat).unwrap();
        assert!(t.success && is_monotone(&t));
        assert_eq!(t.max_simultaneous, 3);
    }

    #[test]
    fn strategy_matches_number() {
        for g in [path(5), star3(), spider()] {
            let k = tree_search_number(&g);
            let s = monotone_tree_strategy(&g);
            assert_eq!(s.assignment.searcher_count(), k);
            let t = simulate(&g, &s).unwrap();
            assert!(t.success);
            assert!(is_monotone(&t));
            assert_eq!(t.max_simultaneous, k);
        }
    }

    #[test]
    fn connected_numbers() {
        assert_eq!(connected_tree_search_number(&path(6)), 1);
        assert_eq!(connected_tree_search_number(&star3()), 2);
        let cs = connected_tree_search_number(&spider());
        let s = tree_search_number(&spider());
        assert!(cs >= s);
    }

    #[test]
    fn connected_strategy_verifies() {
        for g in [path(4), star3(), spider()] {
            let k = connected_tree_search_number(&g);
            let strat = connected_tree_strategy(&g);
            assert_eq!(strat.assignment.searcher_count(), k);
            let t = simulate(&g, &strat).unwrap();
            assert!(t.success);
            assert!(is_monotone(&t));
            assert!(is_connected_trace(&g, &t));
            assert_eq!(t.max_simultaneous, k);
        }
    }

    #[test]
    fn agrees_with_brute_force_on_samples() {
        for g in [path(4), star3(), spider()] {
            assert_eq!(
                tree_search_number(&g),
                brute_force_search_number(&g, false, false).unwrap()
            );
            assert_eq!(
                connected_tree_search_number(&g),
                brute_force_search_number(&g, false, true).unwrap()
            );
        }
    }
}
