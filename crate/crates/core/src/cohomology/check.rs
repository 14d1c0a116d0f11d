use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CohomologyError;
use crate::rational::format_rational;
use crate::structure::{InformationStructure, VarId};

use crate::functionals::CombFamily;

use super::{counts_up_to, generator_tuples, CombCochain, ProbCochain, Verdict};

/// Absolute tolerance for additive identities evaluated in double precision.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// First point, in generator-then-magnitude-then-lexicographic order, where a check fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleWitness {
    pub generators: Vec<String>,
    pub variable: String,
    /// Nonzero entries of the counting function or law, by outcome label.
    pub point: BTreeMap<String, String>,
    /// The offending value (`δψ ≠ 1`, `δφ ≠ 0`, or `ψ[X] ≠ 1`).
    pub value: String,
}

impl CocycleWitness {
    fn new(s: &InformationStructure, gens: &[VarId], at: VarId, point: Vec<String>, value: String) -> Self {
        let labels = s.variable(at).outcomes().labels();
        CocycleWitness {
            generators: gens.iter().map(|&g| s.name(g).to_string()).collect(),
            variable: s.name(at).to_string(),
            point: labels
                .iter()
                .cloned()
                .zip(point)
                .filter(|(_, v)| v != "0")
                .collect(),
            value,
        }
    }
}

type Found<W> = Option<Result<Option<W>, CohomologyError>>;

fn settle<W>(found: Found<W>) -> Result<Verdict<W>, CohomologyError> {
    match found {
        None | Some(Ok(None)) => Ok(Verdict::pass()),
        Some(Ok(Some(w))) => Ok(Verdict::fail(w)),
        Some(Err(e)) => Err(e),
    }
}

fn count_tables(s: &InformationStructure, tuples: &[(Vec<VarId>, VarId)], bound: u32) -> HashMap<usize, Vec<Vec<u32>>> {
    let mut tables = HashMap::new();
    for (_, loc) in tuples {
        let k = s.outcome_count(*loc);
        tables.entry(k).or_insert_with(|| counts_up_to(k, bound));
    }
    tables
}

/// `δW_D[gens](ν)` as a formal product `∏ [m]_D!^{e_m}` of D-factorials.
///
/// When every exponent vanishes the value is exactly 1 whatever `D` is;
/// otherwise the caller falls back to exact evaluation.
struct FactorialShape<'a> {
    degree: usize,
    /// `X1` and the localizations of `[X2..]` and `[..Xn]`, with arrows from `loc`.
    first: (&'a [usize], usize),
    tail: (&'a [usize], usize),
    head: (&'a [usize], usize),
}

impl<'a> FactorialShape<'a> {
    fn new(s: &'a InformationStructure, psi: &CombCochain, gens: &[VarId], loc: VarId) -> Option<Self> {
        let CombCochain::Family { degree, family } = psi else {
            return None;
        };
        if !matches!(family, CombFamily::Fw(_) | CombFamily::One) || gens.len() != degree + 1 {
            return None;
        }
        let arrow = |v: VarId| s.arrow_map(loc, v).map(|m| (m, s.outcome_count(v)));
        Some(FactorialShape {
            degree: *degree,
            first: arrow(gens[0])?,
            tail: arrow(s.meet_all(&gens[1..])?)?,
            head: arrow(s.meet_all(&gens[..*degree])?)?,
        })
    }

    fn add_w(e: &mut [i64], counts: impl Iterator<Item = u32>, sign: i64) {
        let mut n = 0;
        for c in counts {
            e[c as usize] -= sign;
            n += c as usize;
        }
        e[n] += sign;
    }

    fn pushed(map: &[usize], len: usize, counts: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; len];
        for (x, &c) in counts.iter().enumerate() {
            out[map[x]] += c;
        }
        out
    }

    fn cancels(&self, counts: &[u32], bound: u32, e: &mut Vec<i64>) -> bool {
        e.clear();
        e.resize(bound as usize + 1, 0);
        let n = self.degree;
        let (fmap, flen) = self.first;
        let (tmap, tlen) = self.tail;
        let mass = Self::pushed(fmap, flen, counts);
        for (y, &m) in mass.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let mut fiber = vec![0u32; tlen];
            for (x, &c) in counts.iter().enumerate() {
                if fmap[x] == y {
                    fiber[tmap[x]] += c;
                }
            }
            Self::add_w(e, fiber.into_iter(), 1);
        }
        // The merged tuples all localize at `loc` itself.
        let merged: i64 = (1..=n as i64).map(|k| if k % 2 == 1 { -1 } else { 1 }).sum();
        if merged != 0 {
            Self::add_w(e, counts.iter().copied(), merged);
        }
        let (hmap, hlen) = self.head;
        let sign = if (n + 1) % 2 == 1 { -1 } else { 1 };
        Self::add_w(e, Self::pushed(hmap, hlen, counts).into_iter(), sign);
        // `[0]! = [1]! = 1`.
        e.iter().skip(2).all(|&x| x == 0)
    }
}

/// Checks `δψ ≡ 1` exactly on every generator tuple of degree `n+1` and every
/// `ν` on its joint variable with `1 ≤ ‖ν‖ ≤ bound`.
///
/// Degree-0 cochains are accepted: the check is then the 0-cocycle condition.
pub fn cocycle_check(
    s: &InformationStructure,
    psi: &CombCochain,
    bound: u32,
) -> Result<Verdict<CocycleWitness>, CohomologyError> {
    let delta = psi.clone().coboundary();
    let tuples = generator_tuples(s, delta.degree());
    let tables = count_tables(s, &tuples, bound);
    let found = tuples
        .par_iter()
        .map(|(gens, loc)| {
            let fast = FactorialShape::new(s, psi, gens, *loc);
            let mut scratch = Vec::new();
            for counts in &tables[&s.outcome_count(*loc)] {
                if let Some(shape) = &fast {
                    if shape.cancels(counts, bound, &mut scratch) {
                        continue;
                    }
                }
                let v = delta.eval(s, gens, *loc, counts)?;
                if !v.is_one() {
                    let point = counts.iter().map(u32::to_string).collect();
                    return Ok(Some(CocycleWitness::new(s, gens, *loc, point, v.to_string())));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)));
    settle(found)
}

/// Rational laws on `k` outcomes with common denominator at most `bound`, each once.
pub(crate) fn law_grid(k: usize, bound: u32) -> Vec<Vec<BigRational>> {
    counts_up_to(k, bound)
        .into_iter()
        .filter(|c| c.iter().fold(0u32, |g, &x| g.gcd(&x)) == 1)
        .map(|c| {
            let total: u32 = c.iter().sum();
            c.iter()
                .map(|&x| BigRational::new(BigInt::from(x), BigInt::from(total)))
                .collect()
        })
        .collect()
}

/// Checks `|δφ| ≤ 1e-12` on every generator tuple and every rational law with
/// denominator at most `bound` on its joint variable.
pub fn prob_cocycle_check(
    s: &InformationStructure,
    phi: &ProbCochain,
    alpha: f64,
    bound: u32,
) -> Result<Verdict<CocycleWitness>, CohomologyError> {
    let delta = phi.clone().coboundary(alpha);
    let tuples = generator_tuples(s, delta.degree());
    let mut grids: HashMap<usize, Vec<Vec<BigRational>>> = HashMap::new();
    for (_, loc) in &tuples {
        let k = s.outcome_count(*loc);
        grids.entry(k).or_insert_with(|| law_grid(k, bound));
    }
    let found = tuples
        .par_iter()
        .map(|(gens, loc)| {
            for p in &grids[&s.outcome_count(*loc)] {
                let v = delta.eval(s, gens, *loc, p)?;
                if !(v.abs() <= PROB_TOLERANCE) {
                    let point = p.iter().map(format_rational).collect();
                    return Ok(Some(CocycleWitness::new(s, gens, *loc, point, format!("{v:e}"))));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)));
    settle(found)
}

/// Checks `ψ[X](n·δ_x) = 1` for every variable (the terminal included), every
/// outcome and every `1 ≤ n ≤ bound`.
pub fn single_support_check(
    s: &InformationStructure,
    psi: &CombCochain,
    bound: u32,
) -> Result<Verdict<CocycleWitness>, CohomologyError> {
    if psi.degree() != 1 {
        return Err(CohomologyError::DegreeMismatch {
            expected: 1,
            found: psi.degree(),
        });
    }
    for x in s.var_ids() {
        let k = s.outcome_count(x);
        for i in 0..k {
            for n in 1..=bound {
                let mut counts = vec![0u32; k];
                counts[i] = n;
                let v = psi.eval(s, &[x], x, &counts)?;
                if !v.is_one() {
                    let point = counts.iter().map(u32::to_string).collect();
                    return Ok(Verdict::fail(CocycleWitness::new(s, &[x], x, point, v.to_string())));
                }
            }
        }
    }
    Ok(Verdict::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::fontene_ward::AdmissibleSequence;
    use crate::value::PosValue;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn law_grid_is_deduplicated() {
        // Denominators 1..3 on two outcomes: 1/1 (2 laws), 1/2 (1), 1/3 (2).
        assert_eq!(law_grid(2, 3).len(), 5);
    }

    #[test]
    fn natural_passes_on_fixture() {
        let s = fixtures::two_variable_example();
        let v = cocycle_check(&s, &CombCochain::fw(AdmissibleSequence::natural()), 10).unwrap();
        assert!(v.passed());
        assert!(cocycle_check(&s, &CombCochain::one(1), 6).unwrap().passed());
    }

    #[test]
    fn perturbed_entry_fails() {
        let s = fixtures::two_variable_example();
        let x1 = s.lookup("X1").unwrap();
        let psi = CombCochain::fw(AdmissibleSequence::natural()).with_override(
            vec![x1],
            vec![1, 1],
            PosValue::from_u64(4),
        );
        let v = cocycle_check(&s, &psi, 10).unwrap();
        let w = v.witness.expect("perturbation is detected");
        assert!(w.generators.contains(&"X1".to_string()));
    }

    #[test]
    fn zero_cocycles() {
        let s = fixtures::two_variable_example();
        for k in [-1, 0, 1, 2] {
            assert!(cocycle_check(&s, &CombCochain::exp(rat(k)), 8).unwrap().passed());
        }
        let squares: Vec<PosValue> = (1..=8u64).map(|n| PosValue::from_u64(n * n)).collect();
        let v = cocycle_check(&s, &CombCochain::magnitude_table(&squares), 8).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn single_support() {
        let s = fixtures::two_variable_example();
        for d in [AdmissibleSequence::natural(), AdmissibleSequence::gaussian_int(2)] {
            assert!(single_support_check(&s, &CombCochain::fw(d), 8).unwrap().passed());
        }
        let x1 = s.lookup("X1").unwrap();
        let bad = CombCochain::one(1).with_override(vec![x1], vec![0, 3], PosValue::from_u64(2));
        let w = single_support_check(&s, &bad, 8).unwrap().witness.unwrap();
        assert_eq!(w.point.get("x02").map(String::as_str), Some("3"));
        let one = s.terminal();
        let exp_on_terminal = (1..=8).fold(CombCochain::one(1), |c, n| {
            c.with_override(vec![one], vec![n], PosValue::exp_of(rat(n as i64)))
        });
        let w = single_support_check(&s, &exp_on_terminal, 8).unwrap().witness.unwrap();
        assert_eq!(w.variable, "1");
        assert!(!cocycle_check(&s, &exp_on_terminal, 4).unwrap().passed());
    }

    #[test]
    fn entropy_passes_additive_check() {
        let s = fixtures::two_variable_example();
        for a in [0.5, 1.0, 2.0, 3.0] {
            assert!(prob_cocycle_check(&s, &ProbCochain::entropy(a), a, 12).unwrap().passed());
        }
        assert!(!prob_cocycle_check(&s, &ProbCochain::entropy(1.0), 2.0, 6).unwrap().passed());
        assert!(prob_cocycle_check(&s, &ProbCochain::constant(0, 2.5), 1.0, 8).unwrap().passed());
        assert!(!prob_cocycle_check(&s, &ProbCochain::constant(0, 2.5), 2.0, 8).unwrap().passed());
    }
}
