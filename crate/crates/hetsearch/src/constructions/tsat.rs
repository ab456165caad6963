//! 3-SAT reduction trees and their assignment-driven monotone strategies.
//!
//! For a formula with `n` variables and `m` clauses the tree uses colors
//! `R = 0`, `V_p = p`, `T_p = n + p`, `F_p = 2n + p`, `C_d = 3n + d` and
//! has lower bound `3n + 2m + 2`: two searchers for the backbone color
//! `R`, one per variable-gadget color, two per clause color. A satisfying
//! assignment picks which Boolean guard each variable pair parks, and the
//! resulting strategy cleans the whole tree monotonically with exactly
//! that many searchers. The peak is reached in the final sweep, when one
//! guard stands in every ladder gadget on the left half of the backbone.
//!
//! With `valves` enabled the same builder emits the extended construction:
//! two extra colors `O1_p = 3n + m + p`, `O2_p = 4n + m + p` per variable,
//! a valve star between each assignment star and its variable edge, two
//! backbone bands of valve ladders, and deep probes in place of the plain
//! variable probes. Its lower bound is `5n + 2m + 2`.

use std::collections::BTreeMap;

use super::{Build, ConstructionError, Plan};
use crate::cnf::CnfFormula;
use crate::graph::{ColorId, LabeledGraph, VertexId};
use crate::sim::{SearcherAssignment, SearcherId, Strategy};

/// Ladder gadget: backbone star isolating one colored edge.
pub(super) struct Ladder {
    pub host: VertexId,
    pub color: ColorId,
    pub s: VertexId,
    pub s1: VertexId,
    pub s2: VertexId,
    pub s3: VertexId,
    pub t: VertexId,
}

/// One assignment-gadget side: star, optional valve, colored path to host.
pub(super) struct Arm {
    pub w: VertexId,
    pub w1: VertexId,
    pub w2: VertexId,
    pub w3: VertexId,
    /// Valve star `(zeta, mu, w1b)`; `w1b` carries the variable edge.
    pub valve: Option<(VertexId, VertexId, VertexId)>,
    pub y1: VertexId,
    pub y2: VertexId,
    pub y3: VertexId,
    pub bool_color: ColorId,
}

impl Arm {
    /// Vertex the variable edge leaves toward the star.
    pub fn var_anchor(&self) -> VertexId {
        match self.valve {
            Some((_, _, w1b)) => w1b,
            None => self.w1,
        }
    }
}

pub(super) struct VarGadget {
    pub host: VertexId,
    pub pos: Arm,
    pub neg: Arm,
}

/// One clause-literal subtree: `z0` with two clause-colored spokes, one
/// literal-colored spoke, two backbone leaves per spoke end.
pub(super) struct LitCopy {
    pub lit: i32,
    pub z0: VertexId,
    pub z: [VertexId; 3],
    pub leaves: [[VertexId; 2]; 3],
}

pub(super) struct ClauseGadget {
    pub host: VertexId,
    pub copies: Vec<LitCopy>,
}

/// Commitment gadget at the left junction: star of `spoke_color` edges
/// reached through one `mid_color` edge.
pub(super) struct Probe {
    pub host: VertexId,
    pub mid_color: ColorId,
    pub spoke_color: ColorId,
    pub u1: VertexId,
    pub u2: VertexId,
    pub u3: [VertexId; 3],
    pub leaves: [[VertexId; 2]; 3],
}

/// Deep probe used by the extended construction: each spoke end fans out
/// through both valve colors before reaching backbone leaves.
pub(super) struct DeepProbe {
    pub host: VertexId,
    pub var: usize,
    pub spoke_color: ColorId,
    pub u1: VertexId,
    pub u2: VertexId,
    pub u3: [VertexId; 3],
    pub w: [[VertexId; 3]; 3],
    pub y: [[[VertexId; 3]; 3]; 3],
    pub leaves: [[[[VertexId; 2]; 3]; 3]; 3],
}

pub(super) struct Layout {
    pub n: usize,
    pub m: usize,
    pub a: usize,
    pub junction: usize,
    pub b: usize,
    pub l: usize,
    /// `path[i]` is `v_{i+1}`.
    pub path: Vec<VertexId>,
    pub pend_v1: [VertexId; 2],
    pub pend_vl: [VertexId; 2],
    pub pend_vb: VertexId,
    /// Backbone ladders in host order, then the left band, then the right
    /// band when valves are present.
    pub ladders: Vec<Ladder>,
    pub vars: Vec<VarGadget>,
    pub clauses: Vec<ClauseGadget>,
    pub probes: Vec<Probe>,
    pub deep_probes: Vec<DeepProbe>,
    pub tails: Vec<Probe>,
}

impl Layout {
    pub fn v(&self, i: usize) -> VertexId {
        self.path[i - 1]
    }

    fn stretch(&self) -> usize {
        self.junction - self.a - 1
    }

    /// Ladder standing at backbone position `i`.
    fn ladder_at(&self, i: usize) -> &Ladder {
        let lad = if i > self.a {
            &self.ladders[3 * self.n + 2 * self.m + (i - self.a - 1)]
        } else {
            &self.ladders[i - 2]
        };
        debug_assert_eq!(lad.host, self.v(i));
        lad
    }
}

pub(super) fn literal_color(n: usize, lit: i32) -> ColorId {
    let p = lit.unsigned_abs() as usize;
    if lit > 0 {
        n + p
    } else {
        2 * n + p
    }
}

fn normalize_clauses(f: &CnfFormula) -> Result<Vec<Vec<i32>>, ConstructionError> {
    if f.var_count == 0 || f.clauses.is_empty() {
        return Err(ConstructionError::EmptyFormula);
    }
    let mut norm = Vec::with_capacity(f.clauses.len());
    for (idx, clause) in f.clauses.iter().enumerate() {
        for &lit in clause {
            if lit == 0 || lit.unsigned_abs() as usize > f.var_count {
                return Err(ConstructionError::BadParameter(format!(
                    "literal {lit} out of range in clause {}",
                    idx + 1
                )));
            }
        }
        let mut cl = clause.clone();
        cl.sort_unstable();
        cl.dedup();
        if cl.is_empty() {
            return Err(ConstructionError::BadParameter(format!(
                "clause {} is empty",
                idx + 1
            )));
        }
        if cl.len() > 3 {
            return Err(ConstructionError::BadParameter(format!(
                "clause {} has {} distinct literals, at most 3 allowed",
                idx + 1,
                cl.len()
            )));
        }
        norm.push(cl);
    }
    Ok(norm)
}

fn ladder(b: &mut Build, host: VertexId, color: ColorId) -> Ladder {
    let s = b.vertex();
    let s1 = b.leaf(s, 0);
    let s2 = b.leaf(s, 0);
    let s3 = b.leaf(s, 0);
    let t = b.leaf(s1, color);
    b.edge(t, host, 0);
    Ladder {
        host,
        color,
        s,
        s1,
        s2,
        s3,
        t,
    }
}

fn arm(
    b: &mut Build,
    host: VertexId,
    var: usize,
    bool_color: ColorId,
    valve: Option<(ColorId, ColorId)>,
) -> Arm {
    let w = b.vertex();
    let w1 = b.leaf(w, 0);
    let w2 = b.leaf(w, 0);
    let w3 = b.leaf(w, 0);
    let valve = valve.map(|(o1, o2)| {
        let zeta = b.leaf(w1, o1);
        let mu = b.leaf(zeta, o1);
        let w1b = b.leaf(zeta, o2);
        (zeta, mu, w1b)
    });
    let anchor = match valve {
        Some((_, _, w1b)) => w1b,
        None => w1,
    };
    let y1 = b.leaf(anchor, var);
    let y2 = b.leaf(y1, 0);
    let y3 = b.leaf(y2, bool_color);
    b.edge(y3, host, 0);
    Arm {
        w,
        w1,
        w2,
        w3,
        valve,
        y1,
        y2,
        y3,
        bool_color,
    }
}

fn lit_copy(b: &mut Build, host: VertexId, n: usize, d: usize, lit: i32) -> LitCopy {
    let z0 = b.leaf(host, 0);
    let clause_color = 3 * n + d;
    let za = b.leaf(z0, clause_color);
    let zb = b.leaf(z0, clause_color);
    let zc = b.leaf(z0, literal_color(n, lit));
    let z = [za, zb, zc];
    let mut leaves = [[0; 2]; 3];
    for (i, &zi) in z.iter().enumerate() {
        leaves[i] = [b.leaf(zi, 0), b.leaf(zi, 0)];
    }
    LitCopy {
        lit,
        z0,
        z,
        leaves,
    }
}

fn probe(b: &mut Build, host: VertexId, mid_color: ColorId, spoke_color: ColorId) -> Probe {
    let u1 = b.leaf(host, 0);
    let u2 = b.leaf(u1, mid_color);
    let mut u3 = [0; 3];
    let mut leaves = [[0; 2]; 3];
    for j in 0..3 {
        u3[j] = b.leaf(u2, spoke_color);
        leaves[j] = [b.leaf(u3[j], 0), b.leaf(u3[j], 0)];
    }
    Probe {
        host,
        mid_color,
        spoke_color,
        u1,
        u2,
        u3,
        leaves,
    }
}

fn deep_probe(
    b: &mut Build,
    host: VertexId,
    n: usize,
    m: usize,
    var: usize,
    spoke_color: ColorId,
) -> DeepProbe {
    let o1 = 3 * n + m + var;
    let o2 = 4 * n + m + var;
    let u1 = b.leaf(host, 0);
    let u2 = b.leaf(u1, var);
    let mut u3 = [0; 3];
    let mut w = [[0; 3]; 3];
    let mut y = [[[0; 3]; 3]; 3];
    let mut leaves = [[[[0; 2]; 3]; 3]; 3];
    for j in 0..3 {
        u3[j] = b.leaf(u2, spoke_color);
        for k in 0..3 {
            w[j][k] = b.leaf(u3[j], o1);
            for t in 0..3 {
                y[j][k][t] = b.leaf(w[j][k], o2);
                leaves[j][k][t] = [b.leaf(y[j][k][t], 0), b.leaf(y[j][k][t], 0)];
            }
        }
    }
    DeepProbe {
        host,
        var,
        spoke_color,
        u1,
        u2,
        u3,
        w,
        y,
        leaves,
    }
}

/// Shared builder; `valves` switches to the extended construction.
pub(super) fn build_tsat(
    f: &CnfFormula,
    valves: bool,
) -> Result<(Layout, LabeledGraph), ConstructionError> {
    let norm = normalize_clauses(f)?;
    let n = f.var_count;
    let m = norm.len();
    let stretch = if valves { 2 * n } else { 0 };
    let a = 3 * n + 2 * m + 1;
    let junction = a + stretch + 1;
    let b = 4 * n + 2 * m + 3 + 2 * stretch;
    let l = 4 * n + 3 * m + 5 + 2 * stretch;
    let color_count = if valves { 5 * n + m + 1 } else { 3 * n + m + 1 };

    let mut bld = Build::new();
    let path: Vec<VertexId> = (0..l).map(|_| bld.vertex()).collect();
    for i in 0..l - 1 {
        bld.edge(path[i], path[i + 1], 0);
    }
    let lay_v = |i: usize| path[i - 1];

    let pend_v1 = [bld.leaf(lay_v(1), 0), bld.leaf(lay_v(1), 0)];
    let pend_vl = [bld.leaf(lay_v(l), 0), bld.leaf(lay_v(l), 0)];
    let pend_vb = bld.leaf(lay_v(b), 0);

    // Ladders fill v_2 .. v_a, then both stretch bands when present:
    // ascending color, clause colors twice, valve colors once per band.
    let mut ladders = Vec::new();
    let mut host = 2;
    for z in 1..=3 * n {
        ladders.push(ladder(&mut bld, lay_v(host), z));
        host += 1;
    }
    for d in 1..=m {
        for _ in 0..2 {
            ladders.push(ladder(&mut bld, lay_v(host), 3 * n + d));
            host += 1;
        }
    }
    debug_assert_eq!(host, a + 1);
    if valves {
        for band in 0..2 {
            let mut host = a + 1 + band * (stretch + 1);
            for o in 3 * n + m + 1..=3 * n + m + 2 * n {
                ladders.push(ladder(&mut bld, lay_v(host), o));
                host += 1;
            }
        }
    }

    let mut vars = Vec::new();
    for p in 1..=n {
        let host = lay_v(junction + stretch + p);
        let valve_colors = valves.then_some((3 * n + m + p, 4 * n + m + p));
        let pos = arm(&mut bld, host, p, n + p, valve_colors);
        let neg = arm(&mut bld, host, p, 2 * n + p, valve_colors);
        vars.push(VarGadget { host, pos, neg });
    }

    let mut clauses = Vec::new();
    for (d0, clause) in norm.iter().enumerate() {
        let host = lay_v(b + d0 + 1);
        let copies = clause
            .iter()
            .map(|&lit| lit_copy(&mut bld, host, n, d0 + 1, lit))
            .collect();
        clauses.push(ClauseGadget { host, copies });
    }

    let mut probes = Vec::new();
    let mut deep_probes = Vec::new();
    let probe_host = lay_v(junction);
    if valves {
        for p in 1..=n {
            for color in [n + p, 2 * n + p] {
                for _ in 0..11 {
                    deep_probes.push(deep_probe(&mut bld, probe_host, n, m, p, color));
                }
            }
        }
    } else {
        for p in 1..=n {
            for color in [n + p, 2 * n + p] {
                for _ in 0..5 {
                    probes.push(probe(&mut bld, probe_host, p, color));
                }
            }
        }
    }
    for d in 1..=m {
        for _ in 0..5 {
            probes.push(probe(&mut bld, probe_host, 3 * n + d, 3 * n + d));
        }
    }

    let mut tails = Vec::new();
    for d in 1..=m {
        for _ in 0..5 {
            tails.push(probe(&mut bld, lay_v(l - 1), 3 * n + d, 3 * n + d));
        }
    }

    for i in 1..=l {
        bld.label(format!("v{i}"), lay_v(i));
    }
    bld.label("va", lay_v(a));
    bld.label("vb", lay_v(b));
    bld.label("junction", lay_v(junction));

    let graph = bld.finish(color_count);
    Ok((
        Layout {
            n,
            m,
            a,
            junction,
            b,
            l,
            path,
            pend_v1,
            pend_vl,
            pend_vb,
            ladders,
            vars,
            clauses,
            probes,
            deep_probes,
            tails,
        },
        graph,
    ))
}

pub fn gen_tsat(f: &CnfFormula) -> Result<LabeledGraph, ConstructionError> {
    build_tsat(f, false).map(|(_, g)| g)
}

const R1: SearcherId = 0;
const R2: SearcherId = 1;

/// Searcher roster for a reduction strategy; ids are dense, colors follow
/// the gadget order: two backbone, variable, Boolean, clause pairs, and
/// both valve ranks when present.
pub(super) struct Searchers {
    n: usize,
    m: usize,
    valves: bool,
}

impl Searchers {
    pub fn new(n: usize, m: usize, valves: bool) -> Self {
        Searchers { n, m, valves }
    }

    pub fn colors(&self) -> Vec<ColorId> {
        let (n, m) = (self.n, self.m);
        let mut c = vec![0, 0];
        c.extend(1..=3 * n);
        for d in 1..=m {
            c.push(3 * n + d);
            c.push(3 * n + d);
        }
        if self.valves {
            c.extend(3 * n + m + 1..=3 * n + m + 2 * n);
        }
        c
    }

    pub fn var(&self, p: usize) -> SearcherId {
        1 + p
    }

    pub fn clause(&self, d: usize, inst: usize) -> SearcherId {
        3 * self.n + 2 + 2 * (d - 1) + inst
    }

    pub fn literal(&self, lit: i32) -> SearcherId {
        1 + literal_color(self.n, lit)
    }

    /// The `inst`-th searcher carrying `color`; only backbone and clause
    /// colors have two.
    pub fn instance(&self, color: ColorId, inst: usize) -> SearcherId {
        let (n, m) = (self.n, self.m);
        if color <= 3 * n {
            debug_assert_eq!(inst, 0);
            1 + color
        } else if color <= 3 * n + m {
            debug_assert!(inst < 2);
            self.clause(color - 3 * n, inst)
        } else {
            debug_assert_eq!(inst, 0);
            debug_assert!(self.valves && color <= 3 * n + m + 2 * n);
            2 * m + 1 + color - m
        }
    }
}

/// Cleans the assignment star and leaves `R1` on `w1`.
fn clean_arm_star(p: &mut Plan, arm: &Arm) {
    p.place(R1, arm.w);
    p.shuttle(R2, arm.w2, arm.w);
    p.shuttle(R2, arm.w3, arm.w);
    p.slide(R1, arm.w, arm.w1);
}

/// Cleans the valve star and leaves the second valve searcher on `w1b`;
/// expects `R1` on `w1`.
fn clean_valve(p: &mut Plan, arm: &Arm, so1: SearcherId, so2: SearcherId) {
    let (zeta, mu, w1b) = arm.valve.expect("valve arm required");
    p.place(so1, arm.w1);
    p.slide(so1, arm.w1, zeta);
    p.place(so2, zeta);
    p.slide(so1, zeta, mu);
    p.remove(so1, mu);
    p.slide(so2, zeta, w1b);
}

/// Probe cleanup: `sm` guards the branch vertex while `su` sweeps the
/// spokes, then the stem is flushed into the host.
fn clean_probe(p: &mut Plan, pr: &Probe, sm: SearcherId, su: SearcherId) {
    p.place(sm, pr.u2);
    for j in 0..3 {
        p.place(su, pr.u2);
        p.slide(su, pr.u2, pr.u3[j]);
        p.shuttle(R2, pr.leaves[j][0], pr.u3[j]);
        p.shuttle(R2, pr.leaves[j][1], pr.u3[j]);
        p.remove(su, pr.u3[j]);
    }
    p.slide(sm, pr.u2, pr.u1);
    p.place(R2, pr.u1);
    p.slide(R2, pr.u1, pr.host);
    p.remove(sm, pr.u1);
    p.remove(R2, pr.host);
}

fn clean_deep_probe(
    p: &mut Plan,
    dp: &DeepProbe,
    sv: SearcherId,
    sx: SearcherId,
    so1: SearcherId,
    so2: SearcherId,
) {
    p.place(sv, dp.u2);
    for j in 0..3 {
        p.place(sx, dp.u2);
        p.slide(sx, dp.u2, dp.u3[j]);
        for k in 0..3 {
            p.place(so1, dp.u3[j]);
            p.slide(so1, dp.u3[j], dp.w[j][k]);
            for t in 0..3 {
                p.place(so2, dp.w[j][k]);
                p.slide(so2, dp.w[j][k], dp.y[j][k][t]);
                p.shuttle(R2, dp.leaves[j][k][t][0], dp.y[j][k][t]);
                p.shuttle(R2, dp.leaves[j][k][t][1], dp.y[j][k][t]);
                p.remove(so2, dp.y[j][k][t]);
            }
            p.remove(so1, dp.w[j][k]);
        }
        p.remove(sx, dp.u3[j]);
    }
    p.slide(sv, dp.u2, dp.u1);
    p.place(R2, dp.u1);
    p.slide(R2, dp.u1, dp.host);
    p.remove(sv, dp.u1);
    p.remove(R2, dp.host);
}

/// One literal branch: clean both leaves, then slide `s` down to `z0`.
fn clean_lit_branch(p: &mut Plan, copy: &LitCopy, i: usize, s: SearcherId) {
    p.place(s, copy.z[i]);
    p.shuttle(R2, copy.leaves[i][0], copy.z[i]);
    p.shuttle(R2, copy.leaves[i][1], copy.z[i]);
    p.slide(s, copy.z[i], copy.z0);
}

/// Full cleanup of one literal copy; `R1` must hold the host.
fn clean_copy_full(
    p: &mut Plan,
    copy: &LitCopy,
    host: VertexId,
    c1: SearcherId,
    c2: SearcherId,
    sx: SearcherId,
) {
    clean_lit_branch(p, copy, 0, c1);
    clean_lit_branch(p, copy, 1, c2);
    clean_lit_branch(p, copy, 2, sx);
    p.place(R2, copy.z0);
    p.slide(R2, copy.z0, host);
    p.remove(c1, copy.z0);
    p.remove(c2, copy.z0);
    p.remove(sx, copy.z0);
    p.remove(R2, host);
}

/// Ladder gadget cleanup with the guard already parked on `t`.
fn fold_ladder(p: &mut Plan, lad: &Ladder, guard: SearcherId) {
    p.slide(guard, lad.t, lad.s1);
    p.place(R1, lad.s);
    p.shuttle(R2, lad.s2, lad.s);
    p.shuttle(R2, lad.s3, lad.s);
    p.slide(R1, lad.s, lad.s1);
    p.remove(R1, lad.s1);
    p.remove(guard, lad.s1);
}

/// Ladder star cleanup before the sweep reaches it; parks `guard` on `t`.
fn preclean_ladder(p: &mut Plan, lad: &Ladder, guard: SearcherId) {
    p.place(guard, lad.s1);
    p.place(R1, lad.s);
    p.shuttle(R2, lad.s2, lad.s);
    p.shuttle(R2, lad.s3, lad.s);
    p.slide(R1, lad.s, lad.s1);
    p.remove(R1, lad.s1);
    p.slide(guard, lad.s1, lad.t);
}

/// Flush a ladder's backbone edge while `R1` holds the host.
fn pass_ladder(p: &mut Plan, lad: &Ladder) {
    p.place(R2, lad.t);
    p.slide(R2, lad.t, lad.host);
    p.remove(R2, lad.host);
}

/// Slide `R1` left along the backbone from `v_from` to `v_to`.
fn advance(p: &mut Plan, lay: &Layout, from: usize, to: usize) {
    for i in (to..from).rev() {
        p.slide(R1, lay.v(i + 1), lay.v(i));
    }
}

pub fn sat_strategy(f: &CnfFormula, assignment: &[bool]) -> Result<Strategy, ConstructionError> {
    emit_sat_strategy(f, assignment, false)
}

pub(super) fn emit_sat_strategy(
    f: &CnfFormula,
    assignment: &[bool],
    valves: bool,
) -> Result<Strategy, ConstructionError> {
    let (lay, _) = build_tsat(f, valves)?;
    if assignment.len() != f.var_count {
        return Err(ConstructionError::AssignmentLength {
            got: assignment.len(),
            want: f.var_count,
        });
    }
    let satisfied = |lit: i32| (lit > 0) == assignment[lit.unsigned_abs() as usize - 1];
    for (d0, cg) in lay.clauses.iter().enumerate() {
        if !cg.copies.iter().any(|c| satisfied(c.lit)) {
            return Err(ConstructionError::UnsatisfiedAssignment { clause: d0 + 1 });
        }
    }

    let (n, m) = (lay.n, lay.m);
    let stretch = lay.stretch();
    let s = Searchers::new(n, m, valves);
    let mut p = Plan::new();

    let sides = |q: usize| -> (&Arm, &Arm) {
        let vg = &lay.vars[q - 1];
        if assignment[q - 1] {
            (&vg.neg, &vg.pos)
        } else {
            (&vg.pos, &vg.neg)
        }
    };

    // Boolean guards park on the losing side of every variable gadget.
    for q in 1..=n {
        let (garm, _) = sides(q);
        p.place(s.instance(garm.bool_color, 0), garm.y2);
    }

    // Variable stars, valves when present, and the variable-edge handoff:
    // the guarded side is cleaned through, the other side parks its
    // variable searcher at the anchor.
    for q in 1..=n {
        let (garm, oarm) = sides(q);
        let sv = s.var(q);
        clean_arm_star(&mut p, garm);
        if valves {
            let (so1, so2) = (
                s.instance(3 * n + m + q, 0),
                s.instance(3 * n + m + n + q, 0),
            );
            let w1b = garm.var_anchor();
            clean_valve(&mut p, garm, so1, so2);
            p.remove(R1, garm.w1);
            p.place(sv, w1b);
            p.remove(so2, w1b);
            p.slide(sv, w1b, garm.y1);
        } else {
            p.place(sv, garm.w1);
            p.slide(sv, garm.w1, garm.y1);
        }
        p.place(R2, garm.y1);
        p.slide(R2, garm.y1, garm.y2);
        p.remove(R2, garm.y2);
        p.remove(sv, garm.y1);
        if !valves {
            p.remove(R1, garm.w1);
        }

        clean_arm_star(&mut p, oarm);
        if valves {
            let (so1, so2) = (
                s.instance(3 * n + m + q, 0),
                s.instance(3 * n + m + n + q, 0),
            );
            let w1b = oarm.var_anchor();
            clean_valve(&mut p, oarm, so1, so2);
            p.place(sv, w1b);
            p.remove(so2, w1b);
        } else {
            p.place(sv, oarm.w1);
        }
        p.remove(R1, oarm.w1);
    }

    // Extended construction: pre-clean the right-band ladders and park
    // each valve searcher on its own colored edge.
    if valves {
        for lad in &lay.ladders[3 * n + 2 * m + stretch..] {
            preclean_ladder(&mut p, lad, s.instance(lad.color, 0));
        }
    }

    // Right-to-left sweep: end pendants, tail probes, clause gadgets.
    p.place(R1, lay.v(lay.l));
    p.shuttle(R2, lay.pend_vl[0], lay.v(lay.l));
    p.shuttle(R2, lay.pend_vl[1], lay.v(lay.l));
    p.slide(R1, lay.v(lay.l), lay.v(lay.l - 1));
    for pr in &lay.tails {
        let d = pr.mid_color - 3 * n;
        clean_probe(&mut p, pr, s.clause(d, 0), s.clause(d, 1));
    }
    advance(&mut p, &lay, lay.l - 1, lay.b + m);
    let mut parked: Vec<(usize, usize, SearcherId)> = Vec::new();
    for d0 in (0..m).rev() {
        let d = d0 + 1;
        let cg = &lay.clauses[d0];
        for copy in cg.copies.iter().filter(|c| satisfied(c.lit)) {
            clean_copy_full(
                &mut p,
                copy,
                cg.host,
                s.clause(d, 0),
                s.clause(d, 1),
                s.literal(copy.lit),
            );
        }
        let mut inst = 0;
        for (ci, copy) in cg.copies.iter().enumerate() {
            if satisfied(copy.lit) {
                continue;
            }
            let cpark = s.clause(d, inst);
            inst += 1;
            p.place(cpark, copy.z0);
            p.place(R2, copy.z0);
            p.slide(R2, copy.z0, cg.host);
            p.remove(R2, cg.host);
            parked.push((d0, ci, cpark));
        }
        p.slide(R1, cg.host, lay.v(lay.b + d0));
    }
    p.shuttle(R2, lay.pend_vb, lay.v(lay.b));

    // Variable gadget teardown, guarded side first.
    advance(&mut p, &lay, lay.b, lay.junction + stretch + n);
    for q in (1..=n).rev() {
        let host = lay.vars[q - 1].host;
        let (garm, oarm) = sides(q);
        let sg = s.instance(garm.bool_color, 0);
        p.slide(sg, garm.y2, garm.y3);
        p.place(R2, garm.y3);
        p.slide(R2, garm.y3, host);
        p.remove(sg, garm.y3);
        p.remove(R2, host);

        let sv = s.var(q);
        let sb = s.instance(oarm.bool_color, 0);
        p.slide(sv, oarm.var_anchor(), oarm.y1);
        p.place(R2, oarm.y1);
        p.slide(R2, oarm.y1, oarm.y2);
        p.place(sb, oarm.y2);
        p.slide(sb, oarm.y2, oarm.y3);
        p.remove(R2, oarm.y2);
        p.place(R2, oarm.y3);
        p.slide(R2, oarm.y3, host);
        p.remove(sb, oarm.y3);
        p.remove(sv, oarm.y1);
        p.remove(R2, host);
        p.slide(R1, host, lay.v(lay.junction + stretch + q - 1));
    }

    // Right band teardown frees the parked valve searchers.
    if valves {
        for idx in (0..stretch).rev() {
            let lad = &lay.ladders[3 * n + 2 * m + stretch + idx];
            pass_ladder(&mut p, lad);
            p.remove(s.instance(lad.color, 0), lad.t);
            p.slide(R1, lad.host, lay.v(lay.junction + idx));
        }
    }

    // Junction work: unpark the clause copies, then the probe banks.
    parked.sort_unstable();
    for &(d0, ci, cpark) in &parked {
        let copy = &lay.clauses[d0].copies[ci];
        let sx = s.literal(copy.lit);
        clean_lit_branch(&mut p, copy, 2, sx);
        p.remove(cpark, copy.z0);
        clean_lit_branch(&mut p, copy, 0, cpark);
        p.remove(cpark, copy.z0);
        clean_lit_branch(&mut p, copy, 1, cpark);
        p.remove(cpark, copy.z0);
        p.remove(sx, copy.z0);
    }
    for dp in &lay.deep_probes {
        clean_deep_probe(
            &mut p,
            dp,
            s.var(dp.var),
            s.instance(dp.spoke_color, 0),
            s.instance(3 * n + m + dp.var, 0),
            s.instance(3 * n + m + n + dp.var, 0),
        );
    }
    for pr in &lay.probes {
        let sm = s.instance(pr.mid_color, 0);
        let su = if pr.mid_color == pr.spoke_color {
            s.instance(pr.spoke_color, 1)
        } else {
            s.instance(pr.spoke_color, 0)
        };
        clean_probe(&mut p, pr, sm, su);
    }

    // Final sweep: park a guard in every remaining ladder, clear the
    // backbone, then fold the ladders up one by one.
    let left = 3 * n + 2 * m + stretch;
    let mut seen: BTreeMap<ColorId, usize> = BTreeMap::new();
    let mut guards = Vec::with_capacity(left);
    for lad in &lay.ladders[..left] {
        let inst = seen.entry(lad.color).or_insert(0);
        let g = s.instance(lad.color, *inst);
        *inst += 1;
        guards.push(g);
        p.place(g, lad.t);
    }
    p.slide(R1, lay.v(lay.junction), lay.v(lay.junction - 1));
    for i in (2..lay.junction).rev() {
        pass_ladder(&mut p, lay.ladder_at(i));
        p.slide(R1, lay.v(i), lay.v(i - 1));
    }
    p.shuttle(R2, lay.pend_v1[0], lay.v(1));
    p.shuttle(R2, lay.pend_v1[1], lay.v(1));
    p.remove(R1, lay.v(1));
    for (lad, &g) in lay.ladders[..left].iter().zip(&guards) {
        fold_ladder(&mut p, lad, g);
    }

    Ok(Strategy {
        assignment: SearcherAssignment::new(s.colors()),
        moves: p.moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyclean;
    use crate::sim;

    fn small() -> CnfFormula {
        CnfFormula {
            var_count: 1,
            clauses: vec![vec![1]],
        }
    }

    fn mid() -> CnfFormula {
        CnfFormula {
            var_count: 3,
            clauses: vec![vec![1, -2, 3], vec![-1, 2, 3]],
        }
    }

    #[test]
    fn rejects_degenerate_formulas() {
        let no_vars = CnfFormula {
            var_count: 0,
            clauses: vec![vec![1]],
        };
        assert!(matches!(
            gen_tsat(&no_vars),
            Err(ConstructionError::EmptyFormula)
        ));
        let no_clauses = CnfFormula {
            var_count: 2,
            clauses: vec![],
        };
        assert!(matches!(
            gen_tsat(&no_clauses),
            Err(ConstructionError::EmptyFormula)
        ));
        let out_of_range = CnfFormula {
            var_count: 2,
            clauses: vec![vec![3]],
        };
        assert!(matches!(
            gen_tsat(&out_of_range),
            Err(ConstructionError::BadParameter(_))
        ));
        let wide = CnfFormula {
            var_count: 4,
            clauses: vec![vec![1, 2, 3, 4]],
        };
        assert!(matches!(
            gen_tsat(&wide),
            Err(ConstructionError::BadParameter(_))
        ));
    }

    #[test]
    fn backbone_shape() {
        let f = mid();
        let (lay, g) = build_tsat(&f, false).unwrap();
        assert_eq!((lay.a, lay.junction, lay.b, lay.l), (14, 15, 19, 23));
        assert!(g.is_tree());
        assert_eq!(g.color_count(), 3 * 3 + 2 + 1);
        assert_eq!(g.vertex_count(), 745);
        assert_eq!(g.landmark_req("va"), lay.v(14));
        assert_eq!(g.landmark_req("vb"), lay.v(19));
        assert_eq!(g.landmark_req("junction"), lay.v(15));
        assert_eq!(g.landmark_req("v1"), lay.v(1));
        assert_eq!(g.landmark_req("v23"), lay.v(23));
        for i in 2..=lay.a {
            assert_eq!(g.degree(lay.v(i)), 3, "ladder host v{i}");
        }
        assert_eq!(g.degree(lay.v(1)), 3);
        assert_eq!(g.degree(lay.v(lay.l)), 3);
        assert_eq!(g.degree(lay.v(lay.b)), 3);
    }

    #[test]
    fn lower_bound_matches_color_budget() {
        let report = polyclean::lower_bound(&gen_tsat(&small()).unwrap());
        assert_eq!(report.total, 7);

        let report = polyclean::lower_bound(&gen_tsat(&mid()).unwrap());
        assert_eq!(report.total, 15);
        assert_eq!(report.per_color[0], 2);
        for color in 1..=9 {
            assert_eq!(report.per_color[color], 1, "variable color {color}");
        }
        assert_eq!(report.per_color[10], 2);
        assert_eq!(report.per_color[11], 2);
    }

    #[test]
    fn strategy_cleans_monotone_and_tight() {
        let cases: [(CnfFormula, Vec<bool>); 3] = [
            (small(), vec![true]),
            (mid(), vec![true, false, true]),
            (mid(), vec![false, false, true]),
        ];
        for (f, asg) in cases {
            let g = gen_tsat(&f).unwrap();
            let strat = sat_strategy(&f, &asg).unwrap();
            assert!(sim::validate_strategy(&g, &strat).is_empty());
            let want = 3 * f.var_count + 2 * f.clauses.len() + 2;
            assert_eq!(strat.assignment.colors.len(), want);
            let trace = sim::simulate(&g, &strat).unwrap();
            assert!(trace.success);
            assert!(sim::is_monotone(&trace));
            assert_eq!(trace.max_simultaneous, want);
        }
    }

    #[test]
    fn rejects_wrong_assignments() {
        let f = small();
        assert!(matches!(
            sat_strategy(&f, &[]),
            Err(ConstructionError::AssignmentLength { got: 0, want: 1 })
        ));
        assert!(matches!(
            sat_strategy(&f, &[false]),
            Err(ConstructionError::UnsatisfiedAssignment { clause: 1 })
        ));
        assert!(matches!(
            sat_strategy(&mid(), &[false, true, false]),
            Err(ConstructionError::UnsatisfiedAssignment { clause: 1 })
        ));
    }

    #[test]
    fn simulations_agree() {
        let f = small();
        let g = gen_tsat(&f).unwrap();
        let strat = sat_strategy(&f, &[true]).unwrap();
        let a = sim::simulate(&g, &strat).unwrap();
        let b = sim::simulate_fixpoint(&g, &strat).unwrap();
        assert_eq!(a, b);
    }
}
