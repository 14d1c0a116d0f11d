//! Numerical certificates for the correspondence between generalized
//! multinomial coefficients and α-entropies: `ln W_D(ν_n) / n^α → c·S_α(p)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::Status;
use crate::error::{AsymptoticsError, FunctionalError};
use crate::fontene_ward::{AdmissibleSequence, SequenceKind};
use crate::functionals::{check_law, condition_raw, entropy_rational, push_law_raw, push_raw, CountingFunction, ProbabilityLaw};
use crate::rational::format_rational;
use crate::structure::{InformationStructure, VarId};

/// Largest-remainder rounding of `n·p` to a counting vector of magnitude `n`;
/// ties go to the lower index.
pub fn largest_remainder(p: &[BigRational], n: u32) -> Vec<u32> {
    let nr = BigRational::from_integer(BigInt::from(n));
    let scaled: Vec<BigRational> = p.iter().map(|w| w * &nr).collect();
    let mut counts: Vec<u32> = scaled.iter().map(|x| x.floor().to_integer().to_u32().unwrap_or(0)).collect();
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&i, &j| scaled[j].fract().cmp(&scaled[i].fract()).then(i.cmp(&j)));
    let assigned: u32 = counts.iter().sum();
    for &i in order.iter().take(n.saturating_sub(assigned) as usize) {
        counts[i] += 1;
    }
    counts
}

fn check_sizes(ns: &[u32]) -> Result<(), AsymptoticsError> {
    if ns.is_empty() {
        return Err(AsymptoticsError::InvalidSizes("no sample sizes".into()));
    }
    if ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AsymptoticsError::InvalidSizes(format!("{ns:?} is not strictly increasing from 1")));
    }
    Ok(())
}

/// `ν_n` with `‖ν_n‖ = n` approximating `p`, for each `n`.
pub fn rational_approximation_sequence(
    s: &InformationStructure,
    p: &ProbabilityLaw,
    ns: &[u32],
) -> Result<Vec<CountingFunction>, AsymptoticsError> {
    check_sizes(ns)?;
    ns.iter()
        .map(|&n| Ok(CountingFunction::new(s, p.variable(), largest_remainder(p.weights(), n))?))
        .collect()
}

/// Powers of two from 16 up to 4096 (α ≤ 1), 1024 (1 < α < 2) or 256 (α ≥ 2).
pub fn default_sizes(alpha: f64) -> Vec<u32> {
    let cap = if alpha <= 1.0 {
        4096
    } else if alpha < 2.0 {
        1024
    } else {
        256
    };
    (4..=12).map(|e| 1u32 << e).filter(|&n| n <= cap).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateEstimate {
    pub alpha: f64,
    /// `(n, ln ψ(ν_n) / n^α)`.
    pub samples: Vec<(u32, f64)>,
    /// The last sample.
    pub limit: f64,
    /// Largest `|sample − limit|` over the final third of the samples.
    pub certificate: f64,
}

impl RateEstimate {
    fn from_samples(alpha: f64, samples: Vec<(u32, f64)>) -> Self {
        let limit = samples.last().map_or(f64::NAN, |s| s.1);
        let tail = samples.len().div_ceil(3);
        let certificate = samples[samples.len() - tail..]
            .iter()
            .map(|s| (s.1 - limit).abs())
            .fold(0.0, f64::max);
        RateEstimate {
            alpha,
            samples,
            limit,
            certificate,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for (n, v) in &self.samples {
            out.push_str(&format!("{n},{v}\n"));
        }
        out
    }
}

/// `ln W_D(ν)` in the log domain.
pub fn ln_fw(d: &AdmissibleSequence, counts: &[u32]) -> Result<f64, AsymptoticsError> {
    let n: u32 = counts.iter().sum();
    let mut acc = d.ln_factorial(n as usize)?;
    for &c in counts {
        acc -= d.ln_factorial(c as usize)?;
    }
    Ok(acc)
}

/// Samples `ln ψ(ν_n) / n^α` for a log-domain functional `ψ`.
pub fn rate_estimate_with(
    ln_psi: impl Fn(&[u32]) -> Result<f64, AsymptoticsError> + Sync,
    p: &[BigRational],
    alpha: f64,
    ns: &[u32],
) -> Result<RateEstimate, AsymptoticsError> {
    check_sizes(ns)?;
    check_law(p)?;
    let samples = ns
        .par_iter()
        .map(|&n| {
            let v = ln_psi(&largest_remainder(p, n))? / (n as f64).powf(alpha);
            if v.is_finite() {
                Ok((n, v))
            } else {
                Err(AsymptoticsError::Overflow(n as u64))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RateEstimate::from_samples(alpha, samples))
}

/// Samples `ln W_D(ν_n) / n^α`.
pub fn rate_estimate(
    d: &AdmissibleSequence,
    p: &[BigRational],
    alpha: f64,
    ns: &[u32],
) -> Result<RateEstimate, AsymptoticsError> {
    if let Some(&max) = ns.last() {
        // Fills the factorial cache once before the parallel sampling.
        d.ln_factorial(max as usize)?;
    }
    rate_estimate_with(|c| ln_fw(d, c), p, alpha, ns)
}

/// The constant `c` in `ln W_D(ν_n) / n^α → c·S_α(p)`.
pub fn limit_constant(d: &AdmissibleSequence) -> Result<f64, AsymptoticsError> {
    match d.kind() {
        SequenceKind::Natural => Ok(1.0),
        SequenceKind::Gaussian(q) if q.to_f64().is_some_and(|q| q > 1.0) => Ok(q.to_f64().unwrap_or(f64::NAN).ln() / 2.0),
        SequenceKind::Alpha { k, alpha } => Ok(k * (alpha - 1.0) / alpha),
        _ => Err(AsymptoticsError::UnsupportedFamily(d.tag())),
    }
}

/// One sampled instance of `K·L < ln[n]! < K·U` (or its reversal).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandwichSample {
    pub n: u32,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub holds: bool,
}

/// Bounds from `n^α/α < Σ i^{α−1} < (n+1)^α/α − 1/α` (reversed when
/// `α < 1`), multiplied by `K` (reversed again when `K < 0`).
pub fn sandwich_bounds(d: &AdmissibleSequence, ns: &[u32]) -> Result<Vec<SandwichSample>, AsymptoticsError> {
    let SequenceKind::Alpha { k, alpha } = *d.kind() else {
        return Err(AsymptoticsError::UnsupportedFamily(d.tag()));
    };
    ns.iter()
        .map(|&n| {
            let nf = n as f64;
            let l = k * (nf.powf(alpha) / alpha - nf);
            let u = k * ((nf + 1.0).powf(alpha) / alpha - 1.0 / alpha - nf);
            let (lower, upper) = if k.signum() * (alpha - 1.0).signum() > 0.0 { (l, u) } else { (u, l) };
            let value = d.ln_factorial(n as usize)?;
            Ok(SandwichSample {
                n,
                lower,
                value,
                upper,
                holds: lower < value && value < upper,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitReport {
    pub family: String,
    pub alpha: f64,
    pub p: Vec<String>,
    pub samples: Vec<(u32, f64)>,
    pub limit: f64,
    pub target: f64,
    pub certificate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<Vec<SandwichSample>>,
    pub verdict: Status,
}

impl LimitReport {
    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }
}

/// PASS iff the tail certificate and `|limit − c·S_α(p)|` are both below
/// `tolerance` and, for the α-family, the sandwich bounds hold at every `n`.
pub fn entropy_limit_check(
    d: &AdmissibleSequence,
    alpha: f64,
    p: &[BigRational],
    tolerance: f64,
    ns: &[u32],
) -> Result<LimitReport, AsymptoticsError> {
    if !(alpha > 0.0) {
        return Err(FunctionalError::NonPositiveOrder.into());
    }
    let target = limit_constant(d)? * entropy_rational(alpha, p);
    let est = rate_estimate(d, p, alpha, ns)?;
    let sandwich = match d.kind() {
        SequenceKind::Alpha { .. } => Some(sandwich_bounds(d, ns)?),
        _ => None,
    };
    let ok = est.certificate < tolerance
        && (est.limit - target).abs() < tolerance
        && sandwich.as_ref().is_none_or(|s| s.iter().all(|x| x.holds));
    Ok(LimitReport {
        family: d.tag(),
        alpha,
        p: p.iter().map(format_rational).collect(),
        samples: est.samples,
        limit: est.limit,
        target,
        certificate: est.certificate,
        sandwich,
        verdict: if ok { Status::Pass } else { Status::Fail },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRuleReport {
    pub family: String,
    pub alpha: f64,
    /// `(n, joint side, decomposed side)` per sample.
    pub samples: Vec<(u32, f64, f64)>,
    /// `|joint − decomposed|` at the largest `n`.
    pub residual: f64,
    /// `c·S_α(p)`, the common limit of both sides.
    pub target: f64,
    pub verdict: Status,
}

/// Compares `ln W_D[X](ν_n)/n^α` with the decomposition
/// `ln W_D[Y](Y_*ν_n)/n^α + Σ_y (Y_*p(y))^α · ln W_D(ν_n|_{Y=y}) / m_y^α`
/// where `m_y = Y_*ν_n(y)`; both converge to `c·S_α(p)`.
pub fn chain_rule_limit_check(
    s: &InformationStructure,
    d: &AdmissibleSequence,
    alpha: f64,
    y: VarId,
    p: &ProbabilityLaw,
    tolerance: f64,
    ns: &[u32],
) -> Result<ChainRuleReport, AsymptoticsError> {
    check_sizes(ns)?;
    let x = p.variable();
    let map = s.arrow_map(x, y).ok_or_else(|| FunctionalError::NotCoarser {
        coarse: s.name(y).to_string(),
        fine: s.name(x).to_string(),
    })?;
    let ny = s.outcome_count(y);
    let marginal = push_law_raw(map, ny, p.weights());
    let target = limit_constant(d)? * entropy_rational(alpha, p.weights());
    d.ln_factorial(*ns.last().expect("checked nonempty") as usize)?;
    let samples = ns
        .par_iter()
        .map(|&n| {
            let nu = largest_remainder(p.weights(), n);
            let scale = (n as f64).powf(alpha);
            let joint = ln_fw(d, &nu)? / scale;
            let pushed = push_raw(map, ny, &nu);
            let mut decomposed = ln_fw(d, &pushed)? / scale;
            for (yi, &m) in pushed.iter().enumerate() {
                if m == 0 || marginal[yi].is_zero() {
                    continue;
                }
                let fiber: Vec<u32> = nu.iter().enumerate().filter(|(i, _)| map[*i] == yi).map(|(_, &c)| c).collect();
                let weight = marginal[yi].to_f64().unwrap_or(0.0).powf(alpha);
                decomposed += weight * ln_fw(d, &fiber)? / (m as f64).powf(alpha);
            }
            Ok((n, joint, decomposed))
        })
        .collect::<Result<Vec<_>, AsymptoticsError>>()?;
    let last = samples.last().expect("checked nonempty");
    let residual = (last.1 - last.2).abs();
    Ok(ChainRuleReport {
        family: d.tag(),
        alpha,
        samples,
        residual,
        target,
        verdict: if residual < tolerance { Status::Pass } else { Status::Fail },
    })
}

/// `S_α(Y_*p) + Σ_y (Y_*p(y))^α S_α(p|_{Y=y})`, the right side of the α-chain rule.
pub fn chain_rule_expansion(map: &[usize], target_len: usize, alpha: f64, p: &[BigRational]) -> f64 {
    let marginal = push_law_raw(map, target_len, p);
    let mut acc = entropy_rational(alpha, &marginal);
    for yi in 0..target_len {
        if let Some((mass, cond)) = condition_raw(map, p, yi) {
            acc += mass.to_f64().unwrap_or(0.0).powf(alpha) * entropy_rational(alpha, &cond);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(largest_remainder(&[r(1, 2), r(1, 2)], 7), vec![4, 3]);
        assert_eq!(largest_remainder(&[r(1, 1), r(0, 1)], 13), vec![13, 0]);
        assert_eq!(largest_remainder(&[r(1, 3), r(1, 3), r(1, 3)], 9), vec![3, 3, 3]);
        assert_eq!(largest_remainder(&[r(1, 3), r(1, 3), r(1, 3)], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[r(1, 6), r(5, 6)], 4), vec![1, 3]);
    }

    #[test]
    fn approximation_sequence_is_close() {
        let s = fixtures::two_variable_example();
        let x12 = s.lookup("X1X2").unwrap();
        let p = ProbabilityLaw::new(&s, x12, vec![r(1, 2), r(1, 4), r(1, 4)]).unwrap();
        let ns = [5, 9, 100];
        for (nu, n) in rational_approximation_sequence(&s, &p, &ns).unwrap().iter().zip(ns) {
            assert_eq!(nu.magnitude(), n as u64);
        }
        assert!(rational_approximation_sequence(&s, &p, &[4, 4]).is_err());
    }

    #[test]
    fn natural_limit_is_ln2() {
        let est = rate_estimate(&AdmissibleSequence::natural(), &[r(1, 2), r(1, 2)], 1.0, &default_sizes(1.0)).unwrap();
        assert!((est.limit - std::f64::consts::LN_2).abs() < 0.01);
        assert_eq!(est.samples.last().unwrap().0, 4096);
        assert!(est.to_csv().starts_with("n,value\n16,"));
    }

    #[test]
    fn alpha_family_limits() {
        let half = [r(1, 2), r(1, 2)];
        let d = AdmissibleSequence::alpha(1.0, 2.0).unwrap();
        let rep = entropy_limit_check(&d, 2.0, &half, 0.01, &default_sizes(2.0)).unwrap();
        assert!((rep.target - 0.25).abs() < 1e-15);
        assert!(rep.passed(), "{rep:?}");
        let d = AdmissibleSequence::alpha(-1.0, 0.5).unwrap();
        let rep = entropy_limit_check(&d, 0.5, &half, 0.05, &default_sizes(0.5)).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert!(rep.sandwich.unwrap().iter().all(|s| s.holds));
    }

    #[test]
    fn wrong_order_fails() {
        let rep = entropy_limit_check(&AdmissibleSequence::natural(), 2.0, &[r(1, 2), r(1, 2)], 0.01, &default_sizes(2.0))
            .unwrap();
        assert!(!rep.passed());
        let err = entropy_limit_check(&AdmissibleSequence::fibonacci(), 1.0, &[r(1, 2), r(1, 2)], 0.01, &[16]);
        assert!(matches!(err, Err(AsymptoticsError::UnsupportedFamily(_))));
    }

    #[test]
    fn scaling_k_scales_samples() {
        let p = [r(1, 3), r(2, 3)];
        let a = rate_estimate(&AdmissibleSequence::alpha(1.0, 0.5).unwrap(), &p, 0.5, &[16, 64]).unwrap();
        let b = rate_estimate(&AdmissibleSequence::alpha(3.0, 0.5).unwrap(), &p, 0.5, &[16, 64]).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!((3.0 * x.1 - y.1).abs() < 1e-9);
        }
    }

    #[test]
    fn chain_rule_limits() {
        let s = fixtures::two_variable_example();
        let (x12, x2) = (s.lookup("X1X2").unwrap(), s.lookup("X2").unwrap());
        let p = ProbabilityLaw::new(&s, x12, vec![r(1, 2), r(1, 4), r(1, 4)]).unwrap();
        let rep = chain_rule_limit_check(&s, &AdmissibleSequence::natural(), 1.0, x2, &p, 0.01, &default_sizes(1.0)).unwrap();
        assert_eq!(rep.verdict, Status::Pass);
        assert!((rep.target - 1.5 * std::f64::consts::LN_2).abs() < 1e-12);
        let q2 = AdmissibleSequence::gaussian_int(2);
        let rep = chain_rule_limit_check(&s, &q2, 2.0, x2, &p, 0.01, &default_sizes(2.0)).unwrap();
        assert_eq!(rep.verdict, Status::Pass);
        let point = ProbabilityLaw::new(&s, x12, vec![r(0, 1), r(1, 1), r(0, 1)]).unwrap();
        let rep = chain_rule_limit_check(&s, &AdmissibleSequence::natural(), 1.0, x2, &point, 0.01, &[16, 64]).unwrap();
        assert_eq!(rep.samples.last().unwrap().1, 0.0);
        assert_eq!(rep.samples.last().unwrap().2, 0.0);
        let map = s.arrow_map(x12, x2).unwrap();
        assert!((chain_rule_expansion(map, 2, 1.0, p.weights()) - 1.5 * std::f64::consts::LN_2).abs() < 1e-12);
    }
}
