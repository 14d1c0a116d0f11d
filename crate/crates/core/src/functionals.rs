//! Counting functions, probability laws, their pushforwards and restrictions,
//! the two module actions, and the Tsallis/Shannon entropies.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FunctionalError, FwError, ParseError};
use crate::fontene_ward::AdmissibleSequence;
use crate::rational::{format_rational, parse_rational};
use crate::structure::{InformationStructure, VarId};
use crate::value::PosValue;

/// An ℕ-valued histogram on the outcomes of one variable, with positive total.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CountingFunction {
    variable: VarId,
    counts: Vec<u32>,
}

impl CountingFunction {
    pub fn new(s: &InformationStructure, variable: VarId, counts: Vec<u32>) -> Result<Self, FunctionalError> {
        if counts.len() != s.outcome_count(variable) {
            return Err(FunctionalError::InvalidCounts(format!(
                "`{}` has {} outcomes, got {} counts",
                s.name(variable),
                s.outcome_count(variable),
                counts.len()
            )));
        }
        if counts.iter().all(|&c| c == 0) {
            return Err(FunctionalError::InvalidCounts("magnitude must be positive".into()));
        }
        Ok(CountingFunction { variable, counts })
    }

    pub fn variable(&self) -> VarId {
        self.variable
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn magnitude(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Indices of outcomes with nonzero count.
    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&i| self.counts[i] != 0).collect()
    }

    pub fn to_json_value(&self, s: &InformationStructure) -> serde_json::Value {
        let labels = s.variable(self.variable).outcomes().labels();
        let values: BTreeMap<&str, u32> = labels.iter().map(String::as_str).zip(self.counts.iter().copied()).collect();
        serde_json::json!({ "variable": s.name(self.variable), "values": values })
    }

    pub fn from_json_value(s: &InformationStructure, v: serde_json::Value) -> Result<Self, ParseError> {
        let raw: RawFunctionValues<u32> = serde_json::from_value(v)?;
        let (var, counts) = raw.resolve(s, 0)?;
        CountingFunction::new(s, var, counts).map_err(|e| ParseError::Family(e.to_string()))
    }
}

/// An exact rational probability law on the outcomes of one variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbabilityLaw {
    variable: VarId,
    weights: Vec<BigRational>,
}

impl ProbabilityLaw {
    pub fn new(s: &InformationStructure, variable: VarId, weights: Vec<BigRational>) -> Result<Self, FunctionalError> {
        if weights.len() != s.outcome_count(variable) {
            return Err(FunctionalError::InvalidLaw(format!(
                "`{}` has {} outcomes, got {} weights",
                s.name(variable),
                s.outcome_count(variable),
                weights.len()
            )));
        }
        check_law(&weights)?;
        Ok(ProbabilityLaw { variable, weights })
    }

    pub fn variable(&self) -> VarId {
        self.variable
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn to_json_value(&self, s: &InformationStructure) -> serde_json::Value {
        let labels = s.variable(self.variable).outcomes().labels();
        let values: BTreeMap<&str, String> =
            labels.iter().map(String::as_str).zip(self.weights.iter().map(format_rational)).collect();
        serde_json::json!({ "variable": s.name(self.variable), "values": values })
    }

    pub fn from_json_value(s: &InformationStructure, v: serde_json::Value) -> Result<Self, ParseError> {
        let raw: RawFunctionValues<String> = serde_json::from_value(v)?;
        let (var, texts) = raw.resolve(s, "0".to_string())?;
        let weights = texts.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>, _>>()?;
        ProbabilityLaw::new(s, var, weights).map_err(|e| ParseError::Family(e.to_string()))
    }
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFunctionValues<T> {
    variable: String,
    values: BTreeMap<String, T>,
}

impl<T: Clone> RawFunctionValues<T> {
    fn resolve(self, s: &InformationStructure, zero: T) -> Result<(VarId, Vec<T>), ParseError> {
        let var = s.lookup(&self.variable).map_err(|e| ParseError::Family(e.to_string()))?;
        let outcomes = s.variable(var).outcomes();
        if let Some(unknown) = self.values.keys().find(|k| outcomes.index_of(k).is_none()) {
            return Err(ParseError::Family(format!("`{unknown}` is not an outcome of `{}`", self.variable)));
        }
        let vals = outcomes
            .labels()
            .iter()
            .map(|l| self.values.get(l).cloned().unwrap_or_else(|| zero.clone()))
            .collect();
        Ok((var, vals))
    }
}

pub(crate) fn check_law(weights: &[BigRational]) -> Result<(), FunctionalError> {
    if weights.iter().any(|w| w.is_negative()) {
        return Err(FunctionalError::InvalidLaw("negative weight".into()));
    }
    let total: BigRational = weights.iter().sum();
    if !total.is_one() {
        return Err(FunctionalError::InvalidLaw(format!("weights sum to {}", format_rational(&total))));
    }
    Ok(())
}

/// Order `α > 0` of a Tsallis entropy; `α = 1` is Shannon entropy in nats.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EntropyOrder(f64);

impl EntropyOrder {
    pub fn new(alpha: f64) -> Result<Self, FunctionalError> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(EntropyOrder(alpha))
        } else {
            Err(FunctionalError::NonPositiveOrder)
        }
    }

    pub fn shannon() -> Self {
        EntropyOrder(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

// Raw helpers over outcome-index slices; callers guarantee the map shapes.

pub(crate) fn push_raw(map: &[usize], target_len: usize, counts: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; target_len];
    for (x, &c) in counts.iter().enumerate() {
        out[map[x]] += c;
    }
    out
}

pub(crate) fn restrict_raw(map: &[usize], counts: &[u32], y: usize) -> Vec<u32> {
    counts
        .iter()
        .enumerate()
        .map(|(x, &c)| if map[x] == y { c } else { 0 })
        .collect()
}

pub(crate) fn push_law_raw(map: &[usize], target_len: usize, weights: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); target_len];
    for (x, w) in weights.iter().enumerate() {
        if !w.is_zero() {
            out[map[x]] += w;
        }
    }
    out
}

/// Conditional law on the fiber over `y`, or `None` when its mass is zero.
pub(crate) fn condition_raw(map: &[usize], weights: &[BigRational], y: usize) -> Option<(BigRational, Vec<BigRational>)> {
    let mass: BigRational = weights.iter().enumerate().filter(|(x, _)| map[*x] == y).map(|(_, w)| w).sum();
    if mass.is_zero() {
        return None;
    }
    let cond = weights
        .iter()
        .enumerate()
        .map(|(x, w)| if map[x] == y { w / &mass } else { BigRational::zero() })
        .collect();
    Some((mass, cond))
}

fn arrow<'a>(s: &'a InformationStructure, fine: VarId, coarse: VarId) -> Result<&'a [usize], FunctionalError> {
    s.arrow_map(fine, coarse).ok_or_else(|| FunctionalError::NotCoarser {
        coarse: s.name(coarse).to_string(),
        fine: s.name(fine).to_string(),
    })
}

fn expect_on(s: &InformationStructure, expected: VarId, found: VarId) -> Result<(), FunctionalError> {
    if expected == found {
        Ok(())
    } else {
        Err(FunctionalError::VariableMismatch {
            expected: s.name(expected).to_string(),
            found: s.name(found).to_string(),
        })
    }
}

fn outcome(s: &InformationStructure, v: VarId, label: &str) -> Result<usize, FunctionalError> {
    s.variable(v).outcomes().index_of(label).ok_or_else(|| FunctionalError::UnknownOutcome {
        variable: s.name(v).to_string(),
        outcome: label.to_string(),
    })
}

/// `Y_*ν(y) = Σ_{x over y} ν(x)`.
pub fn push_counts(
    s: &InformationStructure,
    (source, target): (VarId, VarId),
    nu: &CountingFunction,
) -> Result<CountingFunction, FunctionalError> {
    expect_on(s, source, nu.variable)?;
    let map = arrow(s, source, target)?;
    Ok(CountingFunction {
        variable: target,
        counts: push_raw(map, s.outcome_count(target), &nu.counts),
    })
}

/// `ν|_{Y=y}` on the source variable; `None` when the fiber carries no mass.
pub fn restrict_counts(
    s: &InformationStructure,
    (source, target): (VarId, VarId),
    nu: &CountingFunction,
    y: &str,
) -> Result<Option<CountingFunction>, FunctionalError> {
    expect_on(s, source, nu.variable)?;
    let map = arrow(s, source, target)?;
    let y = outcome(s, target, y)?;
    let counts = restrict_raw(map, &nu.counts, y);
    Ok(counts.iter().any(|&c| c > 0).then_some(CountingFunction { variable: source, counts }))
}

/// Marginalization along `source -> target`.
pub fn push_prob(
    s: &InformationStructure,
    (source, target): (VarId, VarId),
    p: &ProbabilityLaw,
) -> Result<ProbabilityLaw, FunctionalError> {
    expect_on(s, source, p.variable)?;
    let map = arrow(s, source, target)?;
    Ok(ProbabilityLaw {
        variable: target,
        weights: push_law_raw(map, s.outcome_count(target), &p.weights),
    })
}

/// `p|_{Y=y}`.
pub fn condition_prob(
    s: &InformationStructure,
    (source, target): (VarId, VarId),
    p: &ProbabilityLaw,
    y: &str,
) -> Result<ProbabilityLaw, FunctionalError> {
    expect_on(s, source, p.variable)?;
    let map = arrow(s, source, target)?;
    let yi = outcome(s, target, y)?;
    let (_, weights) = condition_raw(map, &p.weights, yi).ok_or_else(|| FunctionalError::ZeroConditioningMass {
        variable: s.name(target).to_string(),
        outcome: y.to_string(),
    })?;
    Ok(ProbabilityLaw { variable: source, weights })
}

/// Tsallis entropy of order `α` on double-precision weights (`0·ln 0 = 0`, `0^α = 0`).
pub fn entropy_f64(alpha: f64, weights: impl IntoIterator<Item = f64>) -> f64 {
    let support = weights.into_iter().filter(|&w| w > 0.0);
    if alpha == 1.0 {
        -support.map(|w| w * w.ln()).sum::<f64>()
    } else {
        (support.map(|w| w.powf(alpha)).sum::<f64>() - 1.0) / (1.0 - alpha)
    }
}

pub(crate) fn entropy_rational(alpha: f64, weights: &[BigRational]) -> f64 {
    entropy_f64(alpha, weights.iter().map(|w| w.to_f64().unwrap_or(0.0)))
}

/// `S_α(p)`.
pub fn entropy(order: EntropyOrder, p: &ProbabilityLaw) -> f64 {
    entropy_rational(order.0, &p.weights)
}

/// Closed-form functionals on counting functions.
#[derive(Clone, Debug, PartialEq)]
pub enum CombFamily {
    /// `ν ↦ 1`.
    One,
    /// `ν ↦ e^{k‖ν‖}`.
    Exp(BigRational),
    /// Fontené-Ward multinomial `W_D`.
    Fw(Arc<AdmissibleSequence>),
}

impl CombFamily {
    pub fn eval(&self, counts: &[u32]) -> Result<PosValue, FwError> {
        match self {
            CombFamily::One => Ok(PosValue::one()),
            CombFamily::Exp(k) => {
                let n: u64 = counts.iter().map(|&c| c as u64).sum();
                Ok(PosValue::exp_of(k * BigRational::from_integer(BigInt::from(n))))
            }
            CombFamily::Fw(d) => {
                let n: usize = counts.iter().map(|&c| c as usize).sum();
                let mut v = d.factorial_pos(n)?;
                for &c in counts.iter().filter(|&&c| c > 1) {
                    v.div_assign(&d.factorial_pos(c as usize)?);
                }
                Ok(v)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            CombFamily::One => "one".into(),
            CombFamily::Exp(k) => format!("exp^{}", format_rational(k)),
            CombFamily::Fw(d) => format!("W[{}]", d.tag()),
        }
    }
}

/// Closed-form functionals on probability laws.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbFamily {
    /// `p ↦ c`.
    Const(f64),
    /// `p ↦ scale · S_α(p)`.
    Entropy { alpha: f64, scale: f64 },
}

impl ProbFamily {
    pub fn entropy(alpha: f64) -> Self {
        ProbFamily::Entropy { alpha, scale: 1.0 }
    }

    pub fn eval(&self, weights: &[BigRational]) -> f64 {
        match self {
            ProbFamily::Const(c) => *c,
            ProbFamily::Entropy { alpha, scale } => scale * entropy_rational(*alpha, weights),
        }
    }
}

/// `(Y.g)(ν) = Π_{y: Y_*ν(y) ≠ 0} g(ν|_{Y=y})`, with `g` a functional on `C_X`.
pub fn act_mult<E: From<FunctionalError>>(
    s: &InformationStructure,
    y: VarId,
    g: impl Fn(&[u32]) -> Result<PosValue, E>,
    nu: &CountingFunction,
) -> Result<PosValue, E> {
    let map = arrow(s, nu.variable, y)?;
    act_mult_raw(map, s.outcome_count(y), &g, &nu.counts)
}

pub(crate) fn act_mult_raw<E>(
    map: &[usize],
    target_len: usize,
    g: &impl Fn(&[u32]) -> Result<PosValue, E>,
    counts: &[u32],
) -> Result<PosValue, E> {
    let pushed = push_raw(map, target_len, counts);
    let mut acc = PosValue::one();
    for (yi, &mass) in pushed.iter().enumerate() {
        if mass > 0 {
            acc.mul_assign(&g(&restrict_raw(map, counts, yi))?);
        }
    }
    Ok(acc)
}

/// `(Y.f)(p) = Σ_{y: Y_*p(y) ≠ 0} (Y_*p(y))^α f(p|_{Y=y})`.
pub fn act_alpha<E: From<FunctionalError>>(
    s: &InformationStructure,
    y: VarId,
    alpha: f64,
    f: impl Fn(&[BigRational]) -> Result<f64, E>,
    p: &ProbabilityLaw,
) -> Result<f64, E> {
    let map = arrow(s, p.variable, y)?;
    act_alpha_raw(map, s.outcome_count(y), alpha, &f, &p.weights)
}

pub(crate) fn act_alpha_raw<E>(
    map: &[usize],
    target_len: usize,
    alpha: f64,
    f: &impl Fn(&[BigRational]) -> Result<f64, E>,
    weights: &[BigRational],
) -> Result<f64, E> {
    let mut acc = 0.0;
    for yi in 0..target_len {
        if let Some((mass, cond)) = condition_raw(map, weights, yi) {
            acc += mass.to_f64().unwrap_or(0.0).powf(alpha) * f(&cond)?;
        }
    }
    Ok(acc)
}

/// `(Y.φ[Z])(p) − φ[YZ](YZ_*p) + φ[Y](Y_*p)` for a closed-form 1-cochain `φ`.
pub fn chain_rule_residual(
    s: &InformationStructure,
    alpha: f64,
    (y, z): (VarId, VarId),
    phi: &ProbFamily,
    p: &ProbabilityLaw,
) -> Result<f64, FunctionalError> {
    let x = p.variable;
    let yz = s
        .meet_id(y, z)
        .ok_or_else(|| FunctionalError::MissingProduct(s.name(y).to_string(), s.name(z).to_string()))?;
    let to_z = arrow(s, x, z)?;
    let to_y = arrow(s, x, y)?;
    let to_yz = arrow(s, x, yz)?;
    let nz = s.outcome_count(z);
    let on_z = |w: &[BigRational]| Ok::<f64, FunctionalError>(phi.eval(&push_law_raw(to_z, nz, w)));
    let conditional = act_alpha_raw(to_y, s.outcome_count(y), alpha, &on_z, &p.weights)?;
    let joint = phi.eval(&push_law_raw(to_yz, s.outcome_count(yz), &p.weights));
    let marginal = phi.eval(&push_law_raw(to_y, s.outcome_count(y), &p.weights));
    Ok(conditional - joint + marginal)
}
