//! Tree enumeration and random instance generation.
//!
//! Free trees are enumerated by growing a leaf onto every vertex of every
//! smaller tree and deduplicating by a canonical form: the rooted shape
//! string at the tree's center (or the smaller of the two strings for
//! bicentral trees). The counts per vertex number follow the known
//! sequence 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, ...
//!
//! Random trees come from uniform Prüfer sequences. Color-connected
//! instances are generated area-first: a random subtree shape per color,
//! glued leaf-to-leaf so that every color stays a single area.

use rand::Rng;

use crate::graph::{ColorId, LabeledGraph, VertexId};
use crate::sim::{Move, SearcherAssignment, Strategy};

/// Canonical shape string of the subtree at `v` away from `parent`.
fn ahu(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut parts: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| ahu(adj, w, Some(v)))
        .collect();
    parts.sort();
    format!("({})", parts.concat())
}

/// One or two center vertices of a tree given as adjacency lists.
fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            degree[v] = 0;
            for &w in &adj[v] {
                if degree[w] > 0 {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical form of a free tree: invariant under vertex renumbering.
pub fn canonical_form(edges: &[(usize, usize)], n: usize) -> String {
    if n == 0 {
        return String::new();
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    centers(&adj)
        .into_iter()
        .map(|c| ahu(&adj, c, None))
        .min()
        .unwrap()
}

/// All free trees on `n` vertices, one representative per isomorphism
/// class, as monochromatic labeled trees.
pub fn free_trees(n: usize) -> Vec<LabeledGraph> {
    assert!(n >= 1);
    let mut shapes: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for size in 2..=n {
        let mut next: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for shape in &shapes {
            for attach in 0..size - 1 {
                let mut grown = shape.clone();
                grown.push((attach, size - 1));
                let key = canonical_form(&grown, size);
                if seen.insert(key) {
                    next.push(grown);
                }
            }
        }
        shapes = next;
    }
    shapes
        .into_iter()
        .map(|edges| {
            LabeledGraph::new_tree(n, edges.into_iter().map(|(u, v)| (u, v, 0)).collect()).unwrap()
        })
        .collect()
}

/// Uniform random labeled tree on `n_edges + 1` vertices via a Prüfer
/// sequence, all edges color 0.
pub fn random_tree<R: Rng>(rng: &mut R, n_edges: usize) -> LabeledGraph {
    let n = n_edges + 1;
    if n == 1 {
        return LabeledGraph::new_tree(1, vec![]).unwrap();
    }
    if n == 2 {
        return LabeledGraph::new_tree(2, vec![(0, 1, 0)]).unwrap();
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let std::cmp::Reverse(leaf) = leaves.pop().unwrap();
        edges.push((leaf, x, 0));
        degree[leaf] -= 1;
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(std::cmp::Reverse(x));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b, 0));
    LabeledGraph::new_tree(n, edges).unwrap()
}

/// Recolor a tree with uniformly random edge colors from `0..colors`.
pub fn random_coloring<R: Rng>(rng: &mut R, tree: &LabeledGraph, colors: usize) -> LabeledGraph {
    let edges = tree
        .edges()
        .iter()
        .map(|e| (e.u, e.v, rng.gen_range(0..colors)))
        .collect();
    let mut g = LabeledGraph::new_tree(tree.vertex_count(), edges).unwrap();
    g.set_color_count(colors);
    g
}

/// Random tree in which every color forms exactly one area: one random
/// subtree per color, glued leaf-to-leaf onto a random earlier area.
pub fn random_color_connected_tree<R: Rng>(
    rng: &mut R,
    colors: usize,
    total_edges: usize,
) -> LabeledGraph {
    assert!(colors >= 1 && total_edges >= colors);
    let mut sizes = vec![1usize; colors];
    for _ in 0..total_edges - colors {
        let i = rng.gen_range(0..colors);
        sizes[i] += 1;
    }

    // Globally numbered vertices; per area remember which global vertices
    // are leaves of its own shape (valid junction points).
    let mut edges: Vec<(VertexId, VertexId, ColorId)> = Vec::new();
    let mut vertex_count = 0usize;
    let mut area_leaves: Vec<Vec<VertexId>> = Vec::new();

    for (color, &ne) in sizes.iter().enumerate() {
        let shape = random_tree(rng, ne);
        let nv = shape.vertex_count();
        let local_leaves: Vec<usize> = (0..nv).filter(|&v| shape.degree(v) == 1).collect();
        let mut map: Vec<Option<VertexId>> = vec![None; nv];
        if color > 0 {
            let parent = rng.gen_range(0..color);
            let host = area_leaves[parent][rng.gen_range(0..area_leaves[parent].len())];
            let glue = local_leaves[rng.gen_range(0..local_leaves.len())];
            map[glue] = Some(host);
        }
        for slot in map.iter_mut() {
            if slot.is_none() {
                *slot = Some(vertex_count);
                vertex_count += 1;
            }
        }
        for e in shape.edges() {
            edges.push((map[e.u].unwrap(), map[e.v].unwrap(), color));
        }
        area_leaves.push(local_leaves.iter().map(|&v| map[v].unwrap()).collect());
    }
    let mut g = LabeledGraph::new_tree(vertex_count, edges).unwrap();
    g.set_color_count(colors);
    g
}

/// A random searcher assignment over the colors present in the graph.
pub fn random_assignment<R: Rng>(
    rng: &mut R,
    graph: &LabeledGraph,
    max_searchers: usize,
) -> SearcherAssignment {
    let k = rng.gen_range(1..=max_searchers.max(1));
    let colors: Vec<ColorId> = (0..k).map(|_| rng.gen_range(0..graph.color_count())).collect();
    SearcherAssignment::new(colors)
}

/// A random sequence of legal moves for the given assignment: at every
/// step one legal place, remove, or slide is chosen uniformly.
pub fn random_legal_strategy<R: Rng>(
    rng: &mut R,
    graph: &LabeledGraph,
    assignment: SearcherAssignment,
    move_count: usize,
) -> Strategy {
    let k = assignment.searcher_count();
    let mut at: Vec<Option<VertexId>> = vec![None; k];
    let mut moves = Vec::with_capacity(move_count);
    for _ in 0..move_count {
        let mut legal: Vec<Move> = Vec::new();
        for s in 0..k {
            let color = assignment.colors[s];
            match at[s] {
                None => {
                    for v in 0..graph.vertex_count() {
                        if graph.vertex_colors(v).contains(&color) {
                            legal.push(Move::Place { s, v });
                        }
                    }
                }
                Some(v) => {
                    legal.push(Move::Remove { s, v });
                    for &(w, e) in graph.adjacency(v) {
                        if graph.edge(e).color == color {
                            legal.push(Move::Slide { s, from: v, to: w });
                        }
                    }
                }
            }
        }
        if legal.is_empty() {
            break;
        }
        let mv = legal[rng.gen_range(0..legal.len())];
        match mv {
            Move::Place { s, v } => at[s] = Some(v),
            Move::Remove { s, .. } => at[s] = None,
            Move::Slide { s, to, .. } => at[s] = Some(to),
        }
        moves.push(mv);
    }
    Strategy { assignment, moves }
}
