//! Cochains under joint locality, both coboundaries, cocycle verification,
//! the combinatorial FEITH, nondegenerate products and classification of
//! 1-cocycles by admissible sequence.

mod check;
mod classify;
mod cochain;
mod feith;
mod nondeg;

pub use check::{cocycle_check, prob_cocycle_check, single_support_check, CocycleWitness, PROB_TOLERANCE};
pub use classify::{classify_cocycle, coboundary_sequence, extract_sequence, Classification};
pub use cochain::{CombCochain, ProbCochain};
pub use feith::{admissible_grid, binary_entropy, comb_feith_solve, feith_residual_continuous};
pub use nondeg::{nondegenerate_witness, NondegWitness};

use serde::Serialize;

use crate::structure::{InformationStructure, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

/// Outcome of a bounded check; serializes as `{status, witness?}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict<W> {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn pass() -> Self {
        Verdict { status: Status::Pass, witness: None }
    }

    pub fn fail(witness: W) -> Self {
        Verdict { status: Status::Fail, witness: Some(witness) }
    }

    pub fn from_witness(witness: Option<W>) -> Self {
        witness.map_or_else(Verdict::pass, Verdict::fail)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Counting vectors of length `k` with magnitude in `1..=bound`, by magnitude
/// then lexicographically.
pub fn counts_up_to(k: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for m in 1..=bound {
        compositions(k, m, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn compositions(k: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() + 1 == k {
        prefix.push(remaining);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    if k == 0 {
        return;
    }
    for c in 0..=remaining {
        prefix.push(c);
        compositions(k, remaining - c, prefix, out);
        prefix.pop();
    }
}

/// All tuples `[X1|…|Xm]` whose joint variable exists, in lexicographic order of ids.
pub fn generator_tuples(s: &InformationStructure, m: usize) -> Vec<(Vec<VarId>, VarId)> {
    let ids: Vec<VarId> = s.var_ids().collect();
    let mut out = vec![(Vec::new(), s.terminal())];
    for _ in 0..m {
        let mut next = Vec::new();
        for (gens, loc) in &out {
            for &v in &ids {
                if let Some(joint) = s.meet_id(*loc, v) {
                    let mut g = gens.clone();
                    g.push(v);
                    next.push((g, joint));
                }
            }
        }
        out = next;
    }
    out
}

pub(crate) fn render_generators(s: &InformationStructure, gens: &[VarId]) -> String {
    gens.iter().map(|&g| s.name(g)).collect::<Vec<_>>().join("|")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn counts_are_ordered_and_complete() {
        let c = counts_up_to(3, 2);
        assert_eq!(c.len(), 3 + 6);
        assert_eq!(c[0], vec![0, 0, 1]);
        assert_eq!(c[3], vec![0, 0, 2]);
        assert_eq!(counts_up_to(1, 3), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn generator_tuples_need_joint() {
        let s = fixtures::two_component_example();
        let pairs = generator_tuples(&s, 2);
        let a = s.lookup("X1a").unwrap();
        let b = s.lookup("X1b").unwrap();
        assert!(!pairs.iter().any(|(g, _)| g == &vec![a, b]));
        assert!(pairs.iter().any(|(g, _)| g == &vec![a, a]));
        assert_eq!(generator_tuples(&s, 0).len(), 1);
    }
}
