use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Deserialize;

use crate::error::{CohomologyError, FunctionalError, ParseError};
use crate::fontene_ward::AdmissibleSequence;
use crate::functionals::{act_alpha_raw, act_mult_raw, push_law_raw, push_raw, CombFamily, ProbFamily};
use crate::rational::{format_rational, parse_rational, parse_real};
use crate::structure::{InformationStructure, VarId};
use crate::value::PosValue;

use super::{counts_up_to, generator_tuples, render_generators};

type TableKey = (Vec<VarId>, Vec<u32>);

/// A combinatorial cochain. Every variant is evaluated at the localization
/// `X1⋯Xn` of its generators, so joint locality holds by construction.
#[derive(Clone, Debug)]
pub enum CombCochain {
    Family {
        degree: usize,
        family: CombFamily,
    },
    /// One family per connected component, chosen by the localization.
    ByComponent {
        degree: usize,
        parts: Vec<(Vec<VarId>, CombFamily)>,
    },
    /// Pseudo-random positive rationals keyed by `(seed, generators, counts)`.
    Hashed {
        degree: usize,
        seed: u64,
    },
    /// Explicit values on `{ν : ‖ν‖ ≤ bound}`, optionally backed by another cochain.
    Table {
        degree: usize,
        bound: u32,
        entries: HashMap<TableKey, PosValue>,
        fallback: Option<Box<CombCochain>>,
    },
    Coboundary(Box<CombCochain>),
    /// `ψ^r`, the scalar action on the multiplicative module.
    Power(Box<CombCochain>, BigRational),
}

impl CombCochain {
    pub fn family(degree: usize, family: CombFamily) -> Self {
        CombCochain::Family { degree, family }
    }

    pub fn one(degree: usize) -> Self {
        CombCochain::family(degree, CombFamily::One)
    }

    /// The degree-0 cochain `Exp^k`.
    pub fn exp(k: BigRational) -> Self {
        CombCochain::family(0, CombFamily::Exp(k))
    }

    /// The degree-1 cochain `W_D`.
    pub fn fw(d: AdmissibleSequence) -> Self {
        CombCochain::family(1, CombFamily::Fw(Arc::new(d)))
    }

    pub fn hashed(degree: usize, seed: u64) -> Self {
        CombCochain::Hashed { degree, seed }
    }

    /// A degree-0 cochain from its values `Ψ(1), …, Ψ(bound)`.
    pub fn magnitude_table(values: &[PosValue]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .map(|(i, v)| ((Vec::new(), vec![i as u32 + 1]), v.clone()))
            .collect();
        CombCochain::Table {
            degree: 0,
            bound: values.len() as u32,
            entries,
            fallback: None,
        }
    }

    pub fn coboundary(self) -> Self {
        CombCochain::Coboundary(Box::new(self))
    }

    pub fn power(self, r: BigRational) -> Self {
        CombCochain::Power(Box::new(self), r)
    }

    /// Replaces `ψ[gens]` at one counting function on the localization.
    pub fn with_override(self, gens: Vec<VarId>, counts: Vec<u32>, value: PosValue) -> Self {
        match self {
            CombCochain::Table {
                degree,
                bound,
                mut entries,
                fallback,
            } => {
                entries.insert((gens, counts), value);
                CombCochain::Table {
                    degree,
                    bound,
                    entries,
                    fallback,
                }
            }
            base => CombCochain::Table {
                degree: base.degree(),
                bound: u32::MAX,
                entries: HashMap::from([((gens, counts), value)]),
                fallback: Some(Box::new(base)),
            },
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            CombCochain::Family { degree, .. }
            | CombCochain::ByComponent { degree, .. }
            | CombCochain::Hashed { degree, .. }
            | CombCochain::Table { degree, .. } => *degree,
            CombCochain::Coboundary(inner) => inner.degree() + 1,
            CombCochain::Power(inner, _) => inner.degree(),
        }
    }

    /// `ψ[gens](ν)` for `ν` on any variable `at` refining the localization.
    pub fn eval(
        &self,
        s: &InformationStructure,
        gens: &[VarId],
        at: VarId,
        counts: &[u32],
    ) -> Result<PosValue, CohomologyError> {
        let loc = localization(s, self.degree(), gens)?;
        if loc == at {
            return self.eval_local(s, gens, loc, counts);
        }
        let map = arrow(s, at, loc)?;
        self.eval_local(s, gens, loc, &push_raw(map, s.outcome_count(loc), counts))
    }

    fn eval_local(
        &self,
        s: &InformationStructure,
        gens: &[VarId],
        loc: VarId,
        counts: &[u32],
    ) -> Result<PosValue, CohomologyError> {
        match self {
            CombCochain::Family { family, .. } => Ok(family.eval(counts)?),
            CombCochain::ByComponent { parts, .. } => {
                let part = parts
                    .iter()
                    .find(|(vars, _)| vars.contains(&loc))
                    .or_else(|| if loc == s.terminal() { parts.first() } else { None })
                    .ok_or_else(|| CohomologyError::MissingEntry {
                        generators: render_generators(s, gens),
                        counts: counts.to_vec(),
                    })?;
                Ok(part.1.eval(counts)?)
            }
            CombCochain::Hashed { seed, .. } => Ok(hashed_positive(hash_key(*seed, gens, counts))),
            CombCochain::Table {
                bound,
                entries,
                fallback,
                ..
            } => {
                if let Some(v) = entries.get(&(gens.to_vec(), counts.to_vec())) {
                    return Ok(v.clone());
                }
                if let Some(base) = fallback {
                    return base.eval_local(s, gens, loc, counts);
                }
                let magnitude: u64 = counts.iter().map(|&c| c as u64).sum();
                if magnitude > *bound as u64 {
                    Err(CohomologyError::TableBoundExceeded {
                        generators: render_generators(s, gens),
                        magnitude,
                        bound: *bound,
                    })
                } else {
                    Err(CohomologyError::MissingEntry {
                        generators: render_generators(s, gens),
                        counts: counts.to_vec(),
                    })
                }
            }
            CombCochain::Power(inner, r) => Ok(inner.eval_local(s, gens, loc, counts)?.pow(r)),
            CombCochain::Coboundary(inner) => {
                let n = inner.degree();
                let x1 = gens[0];
                let act = |c: &[u32]| inner.eval(s, &gens[1..], loc, c);
                let mut acc = act_mult_raw(arrow(s, loc, x1)?, s.outcome_count(x1), &act, counts)?;
                for k in 1..=n {
                    let merged = merge_at(s, gens, k)?;
                    let v = inner.eval(s, &merged, loc, counts)?;
                    if k % 2 == 1 {
                        acc.div_assign(&v);
                    } else {
                        acc.mul_assign(&v);
                    }
                }
                let last = inner.eval(s, &gens[..n], loc, counts)?;
                if (n + 1) % 2 == 1 {
                    acc.div_assign(&last);
                } else {
                    acc.mul_assign(&last);
                }
                Ok(acc)
            }
        }
    }

    /// Tabulates every generator tuple and every `ν` with `‖ν‖ ≤ bound`.
    pub fn materialize(&self, s: &InformationStructure, bound: u32) -> Result<CombCochain, CohomologyError> {
        let mut entries = HashMap::new();
        for (gens, loc) in generator_tuples(s, self.degree()) {
            for counts in counts_up_to(s.outcome_count(loc), bound) {
                let v = self.eval_local(s, &gens, loc, &counts)?;
                entries.insert((gens.clone(), counts), v);
            }
        }
        Ok(CombCochain::Table {
            degree: self.degree(),
            bound,
            entries,
            fallback: None,
        })
    }

    /// Explicit table entries as a JSON array, sorted by generators then counts.
    pub fn table_to_json(&self, s: &InformationStructure) -> Option<serde_json::Value> {
        let CombCochain::Table { entries, .. } = self else {
            return None;
        };
        let mut rows: Vec<_> = entries.iter().collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let rows = rows
            .into_iter()
            .map(|((gens, counts), v)| {
                let loc = s.meet_all(gens).expect("tabulated generators have a joint");
                let labels = s.variable(loc).outcomes().labels();
                let point: BTreeMap<&str, u32> = labels
                    .iter()
                    .map(String::as_str)
                    .zip(counts.iter().copied())
                    .filter(|(_, c)| *c > 0)
                    .collect();
                let value = match v.to_rational() {
                    Some(r) => serde_json::Value::String(format_rational(&r)),
                    None => serde_json::json!({ "ln": v.ln() }),
                };
                serde_json::json!({
                    "generators": gens.iter().map(|&g| s.name(g)).collect::<Vec<_>>(),
                    "counts": point,
                    "value": value,
                })
            })
            .collect();
        Some(serde_json::Value::Array(rows))
    }

    /// Reads the cochain file format described in the README.
    pub fn from_json_value(s: &InformationStructure, v: serde_json::Value) -> Result<Self, ParseError> {
        let spec: CochainSpec = serde_json::from_value(v)?;
        spec.into_comb(s)
    }

    pub fn from_json(s: &InformationStructure, text: &str) -> Result<Self, ParseError> {
        CombCochain::from_json_value(s, serde_json::from_str(text)?)
    }
}

/// A cochain with values in the probabilistic module `F_α`.
#[derive(Clone, Debug)]
pub enum ProbCochain {
    Family { degree: usize, family: ProbFamily },
    /// Pseudo-random reals in `[-1, 1]` keyed by `(seed, generators, law)`.
    Hashed { degree: usize, seed: u64 },
    Coboundary { inner: Box<ProbCochain>, alpha: f64 },
}

impl ProbCochain {
    pub fn family(degree: usize, family: ProbFamily) -> Self {
        ProbCochain::Family { degree, family }
    }

    /// The degree-1 cochain `S_α`.
    pub fn entropy(alpha: f64) -> Self {
        ProbCochain::family(1, ProbFamily::entropy(alpha))
    }

    pub fn constant(degree: usize, c: f64) -> Self {
        ProbCochain::family(degree, ProbFamily::Const(c))
    }

    pub fn hashed(degree: usize, seed: u64) -> Self {
        ProbCochain::Hashed { degree, seed }
    }

    pub fn coboundary(self, alpha: f64) -> Self {
        ProbCochain::Coboundary {
            inner: Box::new(self),
            alpha,
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            ProbCochain::Family { degree, .. } | ProbCochain::Hashed { degree, .. } => *degree,
            ProbCochain::Coboundary { inner, .. } => inner.degree() + 1,
        }
    }

    pub fn eval(
        &self,
        s: &InformationStructure,
        gens: &[VarId],
        at: VarId,
        weights: &[BigRational],
    ) -> Result<f64, CohomologyError> {
        let loc = localization(s, self.degree(), gens)?;
        if loc == at {
            return self.eval_local(s, gens, loc, weights);
        }
        let map = arrow(s, at, loc)?;
        self.eval_local(s, gens, loc, &push_law_raw(map, s.outcome_count(loc), weights))
    }

    fn eval_local(
        &self,
        s: &InformationStructure,
        gens: &[VarId],
        loc: VarId,
        weights: &[BigRational],
    ) -> Result<f64, CohomologyError> {
        match self {
            ProbCochain::Family { family, .. } => Ok(family.eval(weights)),
            ProbCochain::Hashed { seed, .. } => {
                let mut h = hash_key(*seed, gens, &[]);
                for w in weights {
                    for d in w.numer().magnitude().to_u64_digits() {
                        h = mix(h, d);
                    }
                    for d in w.denom().magnitude().to_u64_digits() {
                        h = mix(h, d ^ 0x5555);
                    }
                    h = mix(h, 0xAAAA);
                }
                Ok((h % 2001) as f64 / 1000.0 - 1.0)
            }
            ProbCochain::Coboundary { inner, alpha } => {
                let n = inner.degree();
                let x1 = gens[0];
                let act = |w: &[BigRational]| inner.eval(s, &gens[1..], loc, w);
                let mut acc = act_alpha_raw(arrow(s, loc, x1)?, s.outcome_count(x1), *alpha, &act, weights)?;
                for k in 1..=n {
                    let v = inner.eval(s, &merge_at(s, gens, k)?, loc, weights)?;
                    acc += if k % 2 == 1 { -v } else { v };
                }
                let last = inner.eval(s, &gens[..n], loc, weights)?;
                acc += if (n + 1) % 2 == 1 { -last } else { last };
                Ok(acc)
            }
        }
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self, ParseError> {
        let spec: ProbCochainSpec = serde_json::from_value(v)?;
        spec.into_prob()
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        ProbCochain::from_json_value(serde_json::from_str(text)?)
    }
}

fn localization(s: &InformationStructure, degree: usize, gens: &[VarId]) -> Result<VarId, CohomologyError> {
    if gens.len() != degree {
        return Err(CohomologyError::DegreeMismatch {
            expected: degree,
            found: gens.len(),
        });
    }
    s.meet_all(gens).ok_or_else(|| {
        let name = |i: usize| gens.get(i).map_or("1", |&g| s.name(g)).to_string();
        FunctionalError::MissingProduct(name(0), name(1)).into()
    })
}

fn arrow(s: &InformationStructure, fine: VarId, coarse: VarId) -> Result<&[usize], CohomologyError> {
    s.arrow_map(fine, coarse).ok_or_else(|| {
        FunctionalError::NotCoarser {
            coarse: s.name(coarse).to_string(),
            fine: s.name(fine).to_string(),
        }
        .into()
    })
}

/// `[X1|…|X_{k}X_{k+1}|…]`.
fn merge_at(s: &InformationStructure, gens: &[VarId], k: usize) -> Result<Vec<VarId>, CohomologyError> {
    let joint = s.meet_id(gens[k - 1], gens[k]).ok_or_else(|| {
        CohomologyError::from(FunctionalError::MissingProduct(
            s.name(gens[k - 1]).to_string(),
            s.name(gens[k]).to_string(),
        ))
    })?;
    let mut merged = Vec::with_capacity(gens.len() - 1);
    merged.extend_from_slice(&gens[..k - 1]);
    merged.push(joint);
    merged.extend_from_slice(&gens[k + 1..]);
    Ok(merged)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(h: u64, x: u64) -> u64 {
    splitmix(h ^ splitmix(x))
}

fn hash_key(seed: u64, gens: &[VarId], counts: &[u32]) -> u64 {
    let mut h = splitmix(seed);
    h = mix(h, gens.len() as u64);
    for g in gens {
        h = mix(h, g.index() as u64);
    }
    for &c in counts {
        h = mix(h, c as u64 + 1);
    }
    h
}

fn hashed_positive(h: u64) -> PosValue {
    PosValue::from_ratio((1 + h % 16).into(), (1 + (h >> 32) % 16).into())
}

// File formats.

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainSpec {
    degree: Option<usize>,
    family: Option<String>,
    components: Option<Vec<ComponentSpec>>,
    coboundary_of: Option<Box<CochainSpec>>,
    power: Option<String>,
    bound: Option<u32>,
    #[serde(default)]
    entries: Vec<EntrySpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentSpec {
    variables: Vec<String>,
    family: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntrySpec {
    generators: Vec<String>,
    counts: BTreeMap<String, u32>,
    value: EntryValue,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum EntryValue {
    Exact(String),
    Log { ln: f64 },
}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError::Family(msg.into())
}

/// `one`, `exp:k=<r>`, `hashed:seed=<n>` or any admissible-sequence tag.
fn parse_comb_family(tag: &str) -> Result<Result<CombFamily, u64>, ParseError> {
    if tag == "one" {
        return Ok(Ok(CombFamily::One));
    }
    if let Some(k) = tag.strip_prefix("exp:k=") {
        return Ok(Ok(CombFamily::Exp(parse_rational(k)?)));
    }
    if let Some(seed) = tag.strip_prefix("hashed:seed=") {
        return seed.parse().map(Err).map_err(|_| bad(tag));
    }
    let d = AdmissibleSequence::from_str(tag)?;
    Ok(Ok(CombFamily::Fw(Arc::new(d))))
}

fn resolve_names(s: &InformationStructure, names: &[String]) -> Result<Vec<VarId>, ParseError> {
    names.iter().map(|n| s.lookup(n).map_err(|e| bad(e.to_string()))).collect()
}

impl CochainSpec {
    fn into_comb(self, s: &InformationStructure) -> Result<CombCochain, ParseError> {
        let sources = [self.family.is_some(), self.components.is_some(), self.coboundary_of.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if sources > 1 {
            return Err(bad("use at most one of `family`, `components`, `coboundary_of`"));
        }
        let base = if let Some(tag) = &self.family {
            let degree = self.degree.ok_or_else(|| bad("`degree` is required with `family`"))?;
            Some(match parse_comb_family(tag)? {
                Ok(f) => CombCochain::family(degree, f),
                Err(seed) => CombCochain::hashed(degree, seed),
            })
        } else if let Some(parts) = self.components {
            let degree = self.degree.ok_or_else(|| bad("`degree` is required with `components`"))?;
            let parts = parts
                .into_iter()
                .map(|p| {
                    let vars = resolve_names(s, &p.variables)?;
                    match parse_comb_family(&p.family)? {
                        Ok(f) => Ok((vars, f)),
                        Err(_) => Err(bad("hashed families are not allowed per component")),
                    }
                })
                .collect::<Result<_, ParseError>>()?;
            Some(CombCochain::ByComponent { degree, parts })
        } else if let Some(inner) = self.coboundary_of {
            let inner = inner.into_comb(s)?;
            if self.degree.is_some_and(|d| d != inner.degree() + 1) {
                return Err(bad("`degree` disagrees with `coboundary_of`"));
            }
            Some(inner.coboundary())
        } else {
            None
        };
        let mut cochain = match base {
            Some(b) if self.entries.is_empty() => b,
            _ => {
                let degree = match (&base, self.degree) {
                    (Some(b), _) => b.degree(),
                    (None, Some(d)) => d,
                    (None, None) => return Err(bad("`degree` is required for a table")),
                };
                let bound = match (&base, self.bound) {
                    (_, Some(b)) => b,
                    (Some(_), None) => u32::MAX,
                    (None, None) => return Err(bad("`bound` is required for a table")),
                };
                let mut entries = HashMap::new();
                for e in self.entries {
                    let gens = resolve_names(s, &e.generators)?;
                    if gens.len() != degree {
                        return Err(bad(format!("entry [{}] has the wrong degree", e.generators.join("|"))));
                    }
                    let loc = s.meet_all(&gens).ok_or_else(|| bad("entry generators have no joint"))?;
                    let outcomes = s.variable(loc).outcomes();
                    let mut counts = vec![0u32; outcomes.len()];
                    for (label, c) in e.counts {
                        let i = outcomes
                            .index_of(&label)
                            .ok_or_else(|| bad(format!("`{label}` is not an outcome of `{}`", s.name(loc))))?;
                        counts[i] = c;
                    }
                    let value = match e.value {
                        EntryValue::Exact(t) => PosValue::from_rational(&parse_rational(&t)?)
                            .ok_or_else(|| bad(format!("value `{t}` is not positive")))?,
                        EntryValue::Log { ln } => PosValue::from_ln(ln),
                    };
                    entries.insert((gens, counts), value);
                }
                CombCochain::Table {
                    degree,
                    bound,
                    entries,
                    fallback: base.map(Box::new),
                }
            }
        };
        if let Some(r) = self.power {
            cochain = cochain.power(parse_rational(&r)?);
        }
        Ok(cochain)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbCochainSpec {
    degree: Option<usize>,
    family: Option<String>,
    coboundary_of: Option<Box<ProbCochainSpec>>,
    alpha: Option<String>,
}

impl ProbCochainSpec {
    /// Families: `entropy:alpha=<a>`, `const:c=<c>`, `hashed:seed=<n>`.
    fn into_prob(self) -> Result<ProbCochain, ParseError> {
        match (self.family, self.coboundary_of) {
            (Some(tag), None) => {
                let degree = self.degree.ok_or_else(|| bad("`degree` is required with `family`"))?;
                if let Some(a) = tag.strip_prefix("entropy:alpha=") {
                    let alpha = parse_real(a)?;
                    if alpha.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                        return Err(bad(&tag));
                    }
                    Ok(ProbCochain::family(degree, ProbFamily::entropy(alpha)))
                } else if let Some(c) = tag.strip_prefix("const:c=") {
                    Ok(ProbCochain::constant(degree, parse_real(c)?))
                } else if let Some(seed) = tag.strip_prefix("hashed:seed=") {
                    Ok(ProbCochain::hashed(degree, seed.parse().map_err(|_| bad(&tag))?))
                } else {
                    Err(bad(tag))
                }
            }
            (None, Some(inner)) => {
                let alpha = parse_real(self.alpha.as_deref().ok_or_else(|| bad("`alpha` is required"))?)?;
                Ok(inner.into_prob()?.coboundary(alpha))
            }
            _ => Err(bad("give exactly one of `family`, `coboundary_of`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_coboundary_is_trivial() {
        let s = fixtures::two_variable_example();
        let d = CombCochain::exp(r(1, 1)).coboundary();
        let x12 = s.lookup("X1X2").unwrap();
        for g in s.var_ids() {
            let v = d.eval(&s, &[g], x12, &[1, 2, 3]).unwrap();
            assert!(v.is_one(), "{v}");
        }
    }

    #[test]
    fn inverse_multinomial_from_factorials() {
        let s = fixtures::two_variable_example();
        let facts: Vec<PosValue> = (1..=6u64).map(|n| PosValue::from_u64((1..=n).product())).collect();
        let psi = CombCochain::magnitude_table(&facts).coboundary();
        let x12 = s.lookup("X1X2").unwrap();
        let v = psi.eval(&s, &[x12], x12, &[1, 2, 3]).unwrap();
        assert_eq!(v.to_rational(), Some(r(1, 60)));
        let err = psi.eval(&s, &[x12], x12, &[3, 2, 3]).unwrap_err();
        assert!(matches!(err, CohomologyError::TableBoundExceeded { magnitude: 8, .. }));
    }

    #[test]
    fn fw_coboundary_is_trivial_pointwise() {
        let s = fixtures::two_variable_example();
        let psi = CombCochain::fw(AdmissibleSequence::gaussian_int(3)).coboundary();
        let [x1, x2, x12] = ["X1", "X2", "X1X2"].map(|n| s.lookup(n).unwrap());
        for gens in [[x1, x2], [x2, x1], [x12, x1], [x1, x1]] {
            assert!(psi.eval(&s, &gens, x12, &[2, 1, 3]).unwrap().is_one());
        }
        assert!(matches!(
            psi.eval(&s, &[x1], x12, &[1, 1, 1]),
            Err(CohomologyError::DegreeMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn entropy_coboundary_vanishes() {
        let s = fixtures::two_variable_example();
        let [x1, x2, x12] = ["X1", "X2", "X1X2"].map(|n| s.lookup(n).unwrap());
        let p = [r(1, 2), r(1, 3), r(1, 6)];
        for a in [0.5, 1.0, 2.0] {
            let d = ProbCochain::entropy(a).coboundary(a);
            assert!(d.eval(&s, &[x1, x2], x12, &p).unwrap().abs() < 1e-12);
        }
        let c1 = ProbCochain::constant(0, 1.5).coboundary(1.0);
        assert!(c1.eval(&s, &[x1], x12, &p).unwrap().abs() < 1e-12);
        let c2 = ProbCochain::constant(0, 1.5).coboundary(2.0);
        assert!(c2.eval(&s, &[x12], x12, &p).unwrap().abs() > 1e-3);
    }

    #[test]
    fn json_round_trip() {
        let s = fixtures::two_variable_example();
        let text = r#"{"degree": 1, "family": "natural",
            "entries": [{"generators": ["X1"], "counts": {"x1": 1, "x02": 1}, "value": "4"}]}"#;
        let psi = CombCochain::from_json(&s, text).unwrap();
        let x1 = s.lookup("X1").unwrap();
        assert_eq!(psi.eval(&s, &[x1], x1, &[1, 1]).unwrap().to_rational(), Some(r(4, 1)));
        assert_eq!(psi.eval(&s, &[x1], x1, &[2, 1]).unwrap().to_rational(), Some(r(3, 1)));
        let cob = CombCochain::from_json(&s, r#"{"coboundary_of": {"degree": 0, "family": "exp:k=2"}}"#).unwrap();
        assert_eq!(cob.degree(), 1);
        assert!(CombCochain::from_json(&s, r#"{"degree": 1}"#).is_err());
        let table = CombCochain::fw(AdmissibleSequence::natural()).materialize(&s, 2).unwrap();
        let json = table.table_to_json(&s).unwrap();
        let back = CombCochain::from_json_value(
            &s,
            serde_json::json!({"degree": 1, "bound": 2, "entries": json}),
        )
        .unwrap();
        assert_eq!(back.eval(&s, &[x1], x1, &[1, 1]).unwrap().to_rational(), Some(r(2, 1)));
        let p = ProbCochain::from_json(r#"{"coboundary_of": {"degree": 1, "family": "entropy:alpha=2"}, "alpha": "2"}"#);
        assert_eq!(p.unwrap().degree(), 2);
    }
}
