//! Extended 3-SAT reduction: the shared builder with valves enabled.
//!
//! Relative to the plain reduction this adds two colors per variable, a
//! valve star between each assignment star and its variable edge, two
//! backbone bands of valve ladders, and deep probes at the junction. All
//! searchers of a satisfying strategy except the two backbone ones end
//! the final sweep parked in ladder gadgets, so the peak `5n + 2m + 2`
//! is met exactly.

use super::tsat::{build_tsat, emit_sat_strategy};
use super::ConstructionError;
use crate::cnf::CnfFormula;
use crate::graph::LabeledGraph;
use crate::sim::Strategy;

pub fn gen_tsat_tilde(f: &CnfFormula) -> Result<LabeledGraph, ConstructionError> {
    build_tsat(f, true).map(|(_, g)| g)
}

pub fn sat_strategy_tilde(
    f: &CnfFormula,
    assignment: &[bool],
) -> Result<Strategy, ConstructionError> {
    emit_sat_strategy(f, assignment, true)
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

    fn two_var() -> CnfFormula {
        CnfFormula {
            var_count: 2,
            clauses: vec![vec![1, -2]],
        }
    }

    #[test]
    fn extended_shape() {
        let f = small();
        let (lay, g) = build_tsat(&f, true).unwrap();
        assert_eq!((lay.a, lay.junction, lay.b, lay.l), (6, 9, 13, 16));
        assert!(g.is_tree());
        assert_eq!(g.color_count(), 5 + 1 + 1);
        assert_eq!(g.vertex_count(), 2296);
        assert_eq!(lay.deep_probes.len(), 22);
        assert_eq!(lay.ladders.len(), 5 + 4);
        assert_eq!(g.degree(g.landmark_req("junction")), 22 + 5 + 2);
    }

    #[test]
    fn lower_bound_counts_valve_colors() {
        let report = polyclean::lower_bound(&gen_tsat_tilde(&small()).unwrap());
        assert_eq!(report.total, 9);
        assert_eq!(report.per_color[0], 2);
        for color in [1, 2, 3] {
            assert_eq!(report.per_color[color], 1);
        }
        assert_eq!(report.per_color[4], 2);
        assert_eq!(report.per_color[5], 1);
        assert_eq!(report.per_color[6], 1);

        let report = polyclean::lower_bound(&gen_tsat_tilde(&two_var()).unwrap());
        assert_eq!(report.total, 5 * 2 + 2 + 2);
    }

    #[test]
    fn strategy_cleans_monotone_and_tight() {
        let cases: [(CnfFormula, Vec<bool>); 3] = [
            (small(), vec![true]),
            (two_var(), vec![true, true]),
            (two_var(), vec![false, false]),
        ];
        for (f, asg) in cases {
            let g = gen_tsat_tilde(&f).unwrap();
            let strat = sat_strategy_tilde(&f, &asg).unwrap();
            assert!(sim::validate_strategy(&g, &strat).is_empty());
            let want = 5 * f.var_count + 2 * f.clauses.len() + 2;
            assert_eq!(strat.assignment.colors.len(), want);
            let trace = sim::simulate(&g, &strat).unwrap();
            assert!(trace.success);
            assert!(sim::is_monotone(&trace));
            assert_eq!(trace.max_simultaneous, want);
        }
    }

    #[test]
    fn simulations_agree() {
        let f = small();
        let g = gen_tsat_tilde(&f).unwrap();
        let strat = sat_strategy_tilde(&f, &[true]).unwrap();
        let a = sim::simulate(&g, &strat).unwrap();
        let b = sim::simulate_fixpoint(&g, &strat).unwrap();
        assert_eq!(a, b);
    }
}
