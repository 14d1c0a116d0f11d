use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::CohomologyError;
use crate::fontene_ward::{fw_multinomial, sequence_from_binomials, AdmissibleSequence, BinomialTable, FwValue};
use crate::functionals::entropy_f64;
use crate::rational::format_rational;

fn product(a: &FwValue, b: &FwValue) -> FwValue {
    match (a, b) {
        (FwValue::Exact(x), FwValue::Exact(y)) => FwValue::Exact(x * y),
        _ => FwValue::Log(a.ln() + b.ln()),
    }
}

/// Solves `f1(ν0+ν2, ν1) f2(ν0, ν2) = f2(ν0+ν1, ν2) f1(ν0, ν1)` on two tables
/// over `{n1 + n2 ≤ N}` and returns `D_1..D_N` with `D_{n+1} = f(n, 1)`.
///
/// Checks run in this order: boundary values, the equation over all triples
/// (by total, then lexicographically), symmetry `f(n,1) = f(1,n)`, and finally
/// agreement of both tables with the binomials of the recovered sequence.
pub fn comb_feith_solve(f1: &BinomialTable, f2: &BinomialTable) -> Result<AdmissibleSequence, CohomologyError> {
    let n_max = f1.max_total().min(f2.max_total());
    let tables = [("f1", f1), ("f2", f2)];
    for (name, t) in tables {
        for n in 1..=n_max {
            for parts in [(n, 0), (0, n)] {
                let v = t.value(parts.0, parts.1)?;
                if !v.is_one() {
                    return Err(CohomologyError::BoundaryViolation {
                        table: name.into(),
                        parts,
                        value: v.to_string(),
                    });
                }
            }
        }
    }
    for total in 1..=n_max {
        for v0 in 0..=total {
            for v1 in 0..=total - v0 {
                let v2 = total - v0 - v1;
                let lhs = product(&f1.value(v0 + v2, v1)?, &f2.value(v0, v2)?);
                let rhs = product(&f2.value(v0 + v1, v2)?, &f1.value(v0, v1)?);
                if !lhs.approx_eq(&rhs) {
                    return Err(CohomologyError::FunctionalEquationViolation {
                        triple: (v0, v1, v2),
                        lhs: lhs.to_string(),
                        rhs: rhs.to_string(),
                    });
                }
            }
        }
    }
    for (name, t) in tables {
        for n in 1..n_max {
            let (left, right) = (t.value(n, 1)?, t.value(1, n)?);
            if !left.approx_eq(&right) {
                return Err(CohomologyError::SymmetryViolation {
                    table: name.into(),
                    n,
                    left: left.to_string(),
                    right: right.to_string(),
                });
            }
        }
    }
    let d = sequence_from_binomials(f1)?;
    for ((a, b), found) in f2.iter() {
        let expected = fw_multinomial(&d, &[a, b])?;
        if !found.approx_eq(&expected) {
            return Err(crate::error::FwError::InconsistentTable {
                parts: (a, b),
                found: found.to_string(),
                expected: expected.to_string(),
            }
            .into());
        }
    }
    Ok(d)
}

/// Points `(i/m, j/m)` with `0 ≤ i, j < m` and `i + j ≤ m`.
pub fn admissible_grid(m: u32) -> Vec<(BigRational, BigRational)> {
    let r = |i: u32| BigRational::new(BigInt::from(i), BigInt::from(m));
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i + j <= m {
                out.push((r(i), r(j)));
            }
        }
    }
    out
}

/// `s_α(x) = S_α(x, 1 − x)`.
pub fn binary_entropy(alpha: f64) -> impl Fn(f64) -> f64 {
    move |x| entropy_f64(alpha, [x, 1.0 - x])
}

/// Maximum over the grid of
/// `|u(x) + (1−x)^α u(y/(1−x)) − u(y) − (1−y)^α u(x/(1−y))|`.
pub fn feith_residual_continuous(
    u: impl Fn(f64) -> f64,
    alpha: f64,
    grid: &[(BigRational, BigRational)],
) -> Result<f64, CohomologyError> {
    let one = BigRational::one();
    let mut worst: f64 = 0.0;
    for (x, y) in grid {
        let inside = |t: &BigRational| !(t < &BigRational::zero()) && t < &one;
        if !inside(x) || !inside(y) || x + y > one {
            return Err(CohomologyError::DomainViolation(format!(
                "(x, y) = ({}, {})",
                format_rational(x),
                format_rational(y)
            )));
        }
        let ux = |t: &BigRational| u(t.to_f64().unwrap_or(f64::NAN));
        let (cx, cy) = (&one - x, &one - y);
        let lhs = ux(x) + cx.to_f64().unwrap_or(f64::NAN).powf(alpha) * ux(&(y / &cx));
        let rhs = ux(y) + cy.to_f64().unwrap_or(f64::NAN).powf(alpha) * ux(&(x / &cy));
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fontene_ward::same_prefix;

    #[test]
    fn recovers_natural_numbers() {
        let t = BinomialTable::generate(&AdmissibleSequence::natural(), 8).unwrap();
        let d = comb_feith_solve(&t, &t).unwrap();
        assert!(same_prefix(&d, &AdmissibleSequence::natural(), 8).unwrap());
    }

    #[test]
    fn constant_tables_give_unit_sequence() {
        let t = BinomialTable::from_fn(6, |_, _| FwValue::Exact(BigRational::one()));
        let d = comb_feith_solve(&t, &t).unwrap();
        for n in 1..=6 {
            assert!(d.term(n).unwrap().is_one());
        }
    }

    #[test]
    fn mixed_tables_are_rejected() {
        let a = BinomialTable::generate(&AdmissibleSequence::natural(), 8).unwrap();
        let b = BinomialTable::generate(&AdmissibleSequence::gaussian_int(2), 8).unwrap();
        let err = comb_feith_solve(&a, &b).unwrap_err();
        assert!(matches!(err, CohomologyError::FunctionalEquationViolation { triple: (0, 1, 1), .. }));
    }

    #[test]
    fn boundary_and_symmetry() {
        let mut t = BinomialTable::generate(&AdmissibleSequence::natural(), 4).unwrap();
        t.insert(0, 2, FwValue::Exact(BigRational::from_integer(2.into())));
        assert!(matches!(comb_feith_solve(&t, &t), Err(CohomologyError::BoundaryViolation { .. })));
        let asym = BinomialTable::from_fn(4, |a, b| {
            if a == 0 || b == 0 {
                FwValue::Exact(BigRational::one())
            } else {
                FwValue::Exact(BigRational::new(BigInt::from(a + 1), BigInt::from(b + 1)))
            }
        });
        assert!(comb_feith_solve(&asym, &asym).is_err());
    }

    #[test]
    fn continuous_residuals() {
        let grid = admissible_grid(13);
        assert!(grid.len() >= 100);
        for a in [0.5, 1.0, 2.0, 3.0] {
            assert!(feith_residual_continuous(binary_entropy(a), a, &grid).unwrap() < 1e-12);
        }
        assert!(feith_residual_continuous(|x| x, 3.0, &grid).unwrap() > 1e-2);
        let bad = [(BigRational::one(), BigRational::zero())];
        assert!(feith_residual_continuous(|x| x, 1.0, &bad).is_err());
    }
}
