use std::sync::Arc;

use serde::Serialize;

use crate::error::CohomologyError;
use crate::fontene_ward::{same_prefix, sequence_from_terms, AdmissibleSequence, BinomialTable, FwValue};
use crate::functionals::CombFamily;
use crate::structure::{InformationStructure, VarId};
use crate::value::PosValue;

use super::{counts_up_to, nondegenerate_witness, CombCochain};

/// The admissible sequence found on one connected component.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentSequence {
    pub variables: Vec<String>,
    /// The nondegenerate product the sequence was read from.
    pub product: [String; 2],
    /// `D_1..D_bound`.
    pub terms: Vec<String>,
    #[serde(skip)]
    pub sequence: AdmissibleSequence,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub components: Vec<ComponentSequence>,
    /// Set when every component carries the same sequence `D`, so that
    /// `ψ = δΨ` with `Ψ(n) = 1/[n]_D!`.
    pub coboundary: bool,
}

fn pair_table(
    s: &InformationStructure,
    psi: &CombCochain,
    v: VarId,
    (i, j): (usize, usize),
    bound: u32,
) -> Result<BinomialTable, CohomologyError> {
    let mut t = BinomialTable::new();
    for total in 1..=bound {
        for n1 in 0..=total {
            let mut counts = vec![0u32; s.outcome_count(v)];
            counts[i] = n1;
            counts[j] = total - n1;
            t.insert(n1, total - n1, FwValue::from_pos(&psi.eval(s, &[v], v, &counts)?));
        }
    }
    Ok(t)
}

fn verify_fw(
    s: &InformationStructure,
    psi: &CombCochain,
    d: &AdmissibleSequence,
    v: VarId,
    bound: u32,
) -> Result<(), CohomologyError> {
    let w = CombFamily::Fw(Arc::new(d.clone()));
    for counts in counts_up_to(s.outcome_count(v), bound) {
        let got = psi.eval(s, &[v], v, &counts)?;
        let expected = w.eval(&counts)?;
        if !got.approx_eq(&expected) {
            return Err(CohomologyError::NotACocycle(format!(
                "ψ[{}]{counts:?} = {got}, but the sequence read from the product gives {expected}",
                s.name(v)
            )));
        }
    }
    Ok(())
}

/// Reads `D` off a degree-1 cocycle through a nondegenerate product `XY` and
/// verifies `ψ = W_D` on `X`, `Y` and `XY` for `‖ν‖ ≤ bound`.
///
/// The two-point tables of `ψ[X]` and `ψ[Y]` on the first cell of the
/// witness path are fed to the FEITH solver in both argument orders.
pub fn extract_sequence(
    s: &InformationStructure,
    psi: &CombCochain,
    x: VarId,
    y: VarId,
    bound: u32,
) -> Result<AdmissibleSequence, CohomologyError> {
    if psi.degree() != 1 {
        return Err(CohomologyError::DegreeMismatch {
            expected: 1,
            found: psi.degree(),
        });
    }
    let w = nondegenerate_witness(s, x, y)?
        .ok_or_else(|| CohomologyError::DegenerateProduct(s.name(x).to_string(), s.name(y).to_string()))?;
    let index = |v: VarId, label: &str| s.variable(v).outcomes().index_of(label).expect("witness labels");
    let (a, b) = w.path[0];
    let xs = (index(x, &w.x_order[a - 1]), index(x, &w.x_order[a]));
    let ys = (index(y, &w.y_order[b - 1]), index(y, &w.y_order[b]));
    let fx = pair_table(s, psi, x, xs, bound)?;
    let fy = pair_table(s, psi, y, ys, bound)?;
    let fx_t = pair_table(s, psi, x, (xs.1, xs.0), bound)?;
    let fy_t = pair_table(s, psi, y, (ys.1, ys.0), bound)?;
    let mut first_err = None;
    let mut d = None;
    for (f1, f2) in [(&fx, &fy), (&fy, &fx), (&fx_t, &fy_t), (&fy_t, &fx_t)] {
        match super::comb_feith_solve(f1, f2) {
            Ok(found) => {
                d = Some(found);
                break;
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let d = d.ok_or_else(|| CohomologyError::NotACocycle(first_err.expect("an attempt failed").to_string()))?;
    let xy = s.meet_id(x, y).expect("witness implies a product");
    for v in [x, y, xy] {
        verify_fw(s, psi, &d, v, bound)?;
    }
    Ok(d)
}

/// One admissible sequence per connected component, each read from the first
/// declared nondegenerate product in the component and verified on all of its
/// variables up to `bound`.
pub fn classify_cocycle(
    s: &InformationStructure,
    psi: &CombCochain,
    bound: u32,
) -> Result<Classification, CohomologyError> {
    let mut components = Vec::new();
    for comp in s.components() {
        let names: Vec<String> = comp.iter().map(|&v| s.name(v).to_string()).collect();
        let mut chosen = None;
        for (l, r, _) in s.products() {
            if comp.contains(&l) && comp.contains(&r) && nondegenerate_witness(s, l, r)?.is_some() {
                chosen = Some((l, r));
                break;
            }
        }
        let (l, r) = chosen.ok_or_else(|| CohomologyError::NoNondegenerateProduct(names.clone()))?;
        let d = extract_sequence(s, psi, l, r, bound)?;
        for &v in &comp {
            verify_fw(s, psi, &d, v, bound)?;
        }
        let terms = (1..=bound as usize)
            .map(|n| d.term(n).map(|t| t.to_string()))
            .collect::<Result<_, _>>()?;
        components.push(ComponentSequence {
            variables: names,
            product: [s.name(l).to_string(), s.name(r).to_string()],
            terms,
            sequence: d,
        });
    }
    let mut coboundary = true;
    for pair in components.windows(2) {
        coboundary &= same_prefix(&pair[0].sequence, &pair[1].sequence, bound as usize)?;
    }
    Ok(Classification { components, coboundary })
}

/// `D_n = Ψ(1) Ψ(n−1) / Ψ(n)` for a degree-0 cochain `Ψ`, with `Ψ(0) = 1`;
/// then `δΨ = W_D`.
pub fn coboundary_sequence(
    s: &InformationStructure,
    psi0: &CombCochain,
    n: usize,
) -> Result<AdmissibleSequence, CohomologyError> {
    if psi0.degree() != 0 {
        return Err(CohomologyError::DegreeMismatch {
            expected: 0,
            found: psi0.degree(),
        });
    }
    let at = |m: usize| -> Result<PosValue, CohomologyError> {
        if m == 0 {
            Ok(PosValue::one())
        } else {
            psi0.eval(s, &[], s.terminal(), &[m as u32])
        }
    };
    let one = at(1)?;
    let mut terms = Vec::with_capacity(n);
    for m in 1..=n {
        let mut d = one.mul(&at(m - 1)?);
        d.div_assign(&at(m)?);
        d.normalize();
        terms.push(FwValue::from_pos(&d));
    }
    Ok(sequence_from_terms(&terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn inverse_factorials(n: u64) -> Vec<PosValue> {
        (1..=n)
            .map(|m| PosValue::from_u64(1).div(&PosValue::from_u64((1..=m).product())))
            .collect()
    }

    #[test]
    fn extracts_generating_sequences() {
        let s = fixtures::two_variable_example();
        let (x1, x2) = (s.lookup("X1").unwrap(), s.lookup("X2").unwrap());
        for d in [
            AdmissibleSequence::natural(),
            AdmissibleSequence::gaussian_int(2),
            AdmissibleSequence::fibonacci(),
        ] {
            let got = extract_sequence(&s, &CombCochain::fw(d.clone()), x1, x2, 8).unwrap();
            assert!(same_prefix(&got, &d, 8).unwrap(), "{}", d.tag());
        }
        let got = extract_sequence(&s, &CombCochain::one(1), x1, x2, 6).unwrap();
        for n in 1..=6 {
            assert!(got.term(n).unwrap().is_one());
        }
    }

    #[test]
    fn degenerate_product_is_reported() {
        let s = fixtures::block_diagonal();
        let (x, y) = (s.lookup("X").unwrap(), s.lookup("Y").unwrap());
        let err = extract_sequence(&s, &CombCochain::one(1), x, y, 4).unwrap_err();
        assert!(matches!(err, CohomologyError::DegenerateProduct(..)));
    }

    #[test]
    fn coboundary_of_inverse_factorials_is_natural() {
        let s = fixtures::two_variable_example();
        let psi0 = CombCochain::magnitude_table(&inverse_factorials(8));
        let d = coboundary_sequence(&s, &psi0, 8).unwrap();
        assert!(same_prefix(&d, &AdmissibleSequence::natural(), 8).unwrap());
        let c = classify_cocycle(&s, &psi0.coboundary(), 8).unwrap();
        assert!(c.coboundary);
        assert_eq!(c.components[0].terms[7], "8");
    }

    #[test]
    fn two_components_with_distinct_sequences() {
        let s = fixtures::two_component_example();
        let comps = s.components();
        let parts = vec![
            (comps[0].clone(), CombFamily::Fw(Arc::new(AdmissibleSequence::natural()))),
            (comps[1].clone(), CombFamily::Fw(Arc::new(AdmissibleSequence::gaussian_int(2)))),
        ];
        let psi = CombCochain::ByComponent { degree: 1, parts };
        let c = classify_cocycle(&s, &psi, 6).unwrap();
        assert_eq!(c.components.len(), 2);
        assert!(!c.coboundary);
        assert_ne!(c.components[0].terms, c.components[1].terms);
        let c = classify_cocycle(&s, &CombCochain::one(1), 6).unwrap();
        assert!(c.coboundary);
    }
}
