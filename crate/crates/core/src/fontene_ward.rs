//! Admissible sequences, D-factorials and Fontené-Ward multinomial coefficients.
//!
//! For a sequence `D` with `D_1 = 1`, `[n]_D! = D_n ⋯ D_1`, `[0]_D! = 1` and
//! the coefficient of parts `k_1..k_s` is `[Σk]_D! / Π [k_i]_D!`. Natural,
//! Gaussian, Fibonacci and explicit rational sequences are handled exactly;
//! the α-family `D_n = exp(K(n^{α-1} - 1))` and explicit log sequences live
//! in the log domain.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{FwError, ParseError};
use crate::rational::{format_rational, parse_rational, parse_real};
use crate::value::{ln_rational, PosValue, LOG_RELATIVE_TOLERANCE};

#[derive(Clone, Debug, PartialEq)]
pub enum SequenceKind {
    /// `D_n = n`.
    Natural,
    /// `D_n = (q^n - 1)/(q - 1)`.
    Gaussian(BigRational),
    /// `1, 1, 2, 3, 5, ...`
    Fibonacci,
    /// `D_n = exp(K (n^{α-1} - 1))`.
    Alpha { k: f64, alpha: f64 },
    /// Finite rational prefix `D_1..D_N`.
    Explicit(Vec<BigRational>),
    /// Finite prefix given by `ln D_1..ln D_N`.
    ExplicitLog(Vec<f64>),
}

/// An admissible sequence with memoized D-factorials.
pub struct AdmissibleSequence {
    kind: SequenceKind,
    exact: RwLock<Vec<BigRational>>,
    logs: RwLock<Vec<f64>>,
}

impl Clone for AdmissibleSequence {
    fn clone(&self) -> Self {
        AdmissibleSequence::from_kind_unchecked(self.kind.clone())
    }
}

impl fmt::Debug for AdmissibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdmissibleSequence({})", self.tag())
    }
}

impl PartialEq for AdmissibleSequence {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// A Fontené-Ward value: exact rational, or natural log of a positive real.
#[derive(Clone, Debug, PartialEq)]
pub enum FwValue {
    Exact(BigRational),
    Log(f64),
}

impl FwValue {
    pub fn ln(&self) -> f64 {
        match self {
            FwValue::Exact(r) => ln_rational(r),
            FwValue::Log(l) => *l,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            FwValue::Exact(r) => Some(r),
            FwValue::Log(_) => None,
        }
    }

    pub fn to_pos(&self) -> PosValue {
        match self {
            FwValue::Exact(r) => PosValue::from_rational(r).expect("FW values are positive"),
            FwValue::Log(l) => PosValue::from_ln(*l),
        }
    }

    pub fn from_pos(v: &PosValue) -> FwValue {
        match v.to_rational() {
            Some(r) => FwValue::Exact(r),
            None => FwValue::Log(v.ln()),
        }
    }

    /// Exact equality for rationals, relative log tolerance otherwise.
    pub fn approx_eq(&self, other: &FwValue) -> bool {
        match (self, other) {
            (FwValue::Exact(a), FwValue::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.ln(), other.ln());
                (a - b).abs() <= LOG_RELATIVE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
            }
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FwValue::Exact(r) => r.is_one(),
            FwValue::Log(l) => l.abs() <= LOG_RELATIVE_TOLERANCE,
        }
    }
}

impl fmt::Display for FwValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FwValue::Exact(r) => write!(f, "{}", format_rational(r)),
            FwValue::Log(l) => write!(f, "exp({l})"),
        }
    }
}

/// Result of [`pascal_residual`].
#[derive(Clone, Debug, PartialEq)]
pub enum FwDifference {
    Exact(BigRational),
    /// Difference divided by the largest magnitude involved.
    Relative(f64),
}

impl FwDifference {
    pub fn is_zero(&self) -> bool {
        match self {
            FwDifference::Exact(r) => r.is_zero(),
            FwDifference::Relative(x) => x.abs() <= LOG_RELATIVE_TOLERANCE,
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl AdmissibleSequence {
    fn from_kind_unchecked(kind: SequenceKind) -> Self {
        AdmissibleSequence {
            kind,
            exact: RwLock::new(vec![BigRational::one()]),
            logs: RwLock::new(vec![0.0]),
        }
    }

    pub fn new(kind: SequenceKind) -> Result<Self, FwError> {
        match &kind {
            SequenceKind::Gaussian(q) => {
                if !q.is_positive() || q.is_one() {
                    return Err(FwError::Inadmissible(format!(
                        "Gaussian q must be positive and different from 1, got {}",
                        format_rational(q)
                    )));
                }
            }
            SequenceKind::Alpha { k, alpha } => {
                if !k.is_finite() || !alpha.is_finite() || *alpha <= 0.0 || *alpha == 1.0 {
                    return Err(FwError::Inadmissible(format!(
                        "alpha family needs finite K and alpha > 0, alpha != 1 (K={k}, alpha={alpha})"
                    )));
                }
            }
            SequenceKind::Explicit(d) => {
                if d.first().map(|d1| !d1.is_one()).unwrap_or(true) {
                    return Err(FwError::Inadmissible("explicit sequence must start with D_1 = 1".into()));
                }
                if let Some(pos) = d.iter().position(|x| !x.is_positive()) {
                    return Err(FwError::Inadmissible(format!("D_{} is not positive", pos + 1)));
                }
            }
            SequenceKind::ExplicitLog(d) => {
                if d.first().map(|d1| *d1 != 0.0).unwrap_or(true) {
                    return Err(FwError::Inadmissible("explicit log sequence must start with ln D_1 = 0".into()));
                }
                if let Some(pos) = d.iter().position(|x| !x.is_finite()) {
                    return Err(FwError::Inadmissible(format!("ln D_{} is not finite", pos + 1)));
                }
            }
            SequenceKind::Natural | SequenceKind::Fibonacci => {}
        }
        Ok(AdmissibleSequence::from_kind_unchecked(kind))
    }

    pub fn natural() -> Self {
        AdmissibleSequence::from_kind_unchecked(SequenceKind::Natural)
    }

    pub fn fibonacci() -> Self {
        AdmissibleSequence::from_kind_unchecked(SequenceKind::Fibonacci)
    }

    pub fn gaussian(q: BigRational) -> Result<Self, FwError> {
        AdmissibleSequence::new(SequenceKind::Gaussian(q))
    }

    pub fn gaussian_int(q: i64) -> Self {
        AdmissibleSequence::gaussian(rat(q)).expect("integer q > 1")
    }

    pub fn alpha(k: f64, alpha: f64) -> Result<Self, FwError> {
        AdmissibleSequence::new(SequenceKind::Alpha { k, alpha })
    }

    pub fn explicit(terms: Vec<BigRational>) -> Result<Self, FwError> {
        AdmissibleSequence::new(SequenceKind::Explicit(terms))
    }

    pub fn explicit_log(terms: Vec<f64>) -> Result<Self, FwError> {
        AdmissibleSequence::new(SequenceKind::ExplicitLog(terms))
    }

    pub fn kind(&self) -> &SequenceKind {
        &self.kind
    }

    /// Rational-valued kinds are handled exactly.
    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, SequenceKind::Alpha { .. } | SequenceKind::ExplicitLog(_))
    }

    /// Number of available terms for finite prefixes.
    pub fn prefix_len(&self) -> Option<usize> {
        match &self.kind {
            SequenceKind::Explicit(d) => Some(d.len()),
            SequenceKind::ExplicitLog(d) => Some(d.len()),
            _ => None,
        }
    }

    fn check_index(&self, n: usize) -> Result<(), FwError> {
        if n == 0 {
            return Err(FwError::OutOfRange("sequences are indexed from 1".into()));
        }
        match self.prefix_len() {
            Some(len) if n > len => Err(FwError::BeyondPrefix { len, requested: n }),
            _ => Ok(()),
        }
    }

    /// `D_n` as an exact rational (rational kinds only).
    pub fn term_exact(&self, n: usize) -> Result<BigRational, FwError> {
        self.check_index(n)?;
        Ok(match &self.kind {
            SequenceKind::Natural => rat(n as i64),
            SequenceKind::Gaussian(q) => {
                (num_traits::pow(q.clone(), n) - BigRational::one()) / (q - BigRational::one())
            }
            SequenceKind::Fibonacci => {
                let (mut a, mut b) = (BigInt::one(), BigInt::one());
                for _ in 1..n {
                    let c = &a + &b;
                    a = b;
                    b = c;
                }
                BigRational::from_integer(a)
            }
            SequenceKind::Explicit(d) => d[n - 1].clone(),
            SequenceKind::Alpha { .. } | SequenceKind::ExplicitLog(_) => {
                return Err(FwError::OutOfRange(format!("{} has no exact terms", self.tag())))
            }
        })
    }

    /// `ln D_n` in double precision, for every kind.
    pub fn ln_term(&self, n: usize) -> Result<f64, FwError> {
        self.check_index(n)?;
        Ok(match &self.kind {
            SequenceKind::Natural => (n as f64).ln(),
            SequenceKind::Gaussian(q) => {
                let qf = q.to_f64().unwrap_or(f64::NAN);
                let nf = n as f64;
                if qf > 1.0 {
                    nf * qf.ln() + (-(qf.powf(-nf))).ln_1p() - (qf - 1.0).ln()
                } else {
                    (-(qf.powf(nf))).ln_1p() - (-qf).ln_1p()
                }
            }
            SequenceKind::Alpha { k, alpha } => k * ((n as f64).powf(alpha - 1.0) - 1.0),
            SequenceKind::ExplicitLog(d) => d[n - 1],
            SequenceKind::Fibonacci | SequenceKind::Explicit(_) => ln_rational(&self.term_exact(n)?),
        })
    }

    /// `D_n`.
    pub fn term(&self, n: usize) -> Result<FwValue, FwError> {
        if self.is_exact() {
            self.term_exact(n).map(FwValue::Exact)
        } else {
            self.ln_term(n).map(FwValue::Log)
        }
    }

    /// `[n]_D!` as an exact rational (rational kinds only).
    pub fn factorial_exact(&self, n: usize) -> Result<BigRational, FwError> {
        if !self.is_exact() {
            return Err(FwError::OutOfRange(format!("{} has no exact factorials", self.tag())));
        }
        if let Some(v) = self.exact.read().expect("cache lock").get(n) {
            return Ok(v.clone());
        }
        let mut cache = self.exact.write().expect("cache lock");
        while cache.len() <= n {
            let m = cache.len();
            let next = &cache[m - 1] * self.term_exact(m)?;
            cache.push(next);
        }
        Ok(cache[n].clone())
    }

    /// `ln [n]_D!`.
    pub fn ln_factorial(&self, n: usize) -> Result<f64, FwError> {
        if let Some(&v) = self.logs.read().expect("cache lock").get(n) {
            return Ok(v);
        }
        let mut cache = self.logs.write().expect("cache lock");
        while cache.len() <= n {
            let m = cache.len();
            let next = cache[m - 1] + self.ln_term(m)?;
            cache.push(next);
        }
        Ok(cache[n])
    }

    /// `[n]_D!` in the representation matching the kind.
    pub fn factorial(&self, n: usize) -> Result<FwValue, FwError> {
        if self.is_exact() {
            self.factorial_exact(n).map(FwValue::Exact)
        } else {
            self.ln_factorial(n).map(FwValue::Log)
        }
    }

    pub(crate) fn factorial_pos(&self, n: usize) -> Result<PosValue, FwError> {
        if self.is_exact() {
            let r = self.factorial_exact(n)?;
            Ok(PosValue::from_rational(&r).expect("factorials are positive"))
        } else {
            Ok(PosValue::from_ln(self.ln_factorial(n)?))
        }
    }

    /// Family tag as accepted by [`FromStr`].
    pub fn tag(&self) -> String {
        match &self.kind {
            SequenceKind::Natural => "natural".into(),
            SequenceKind::Gaussian(q) => format!("gaussian:q={}", format_rational(q)),
            SequenceKind::Fibonacci => "fibonacci".into(),
            SequenceKind::Alpha { k, alpha } => format!("alpha:K={k},alpha={alpha}"),
            SequenceKind::Explicit(d) => format!(
                "explicit:{}",
                d.iter().map(format_rational).collect::<Vec<_>>().join(",")
            ),
            SequenceKind::ExplicitLog(d) => format!(
                "explicit-log:{}",
                d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
        }
    }

    /// `D_1..D_n` as values.
    pub fn prefix(&self, n: usize) -> Result<Vec<FwValue>, FwError> {
        (1..=n).map(|i| self.term(i)).collect()
    }
}

impl FromStr for AdmissibleSequence {
    type Err = ParseError;

    /// `natural`, `fibonacci`, `gaussian:q=2`, `alpha:K=1,alpha=0.5`,
    /// `explicit:1,2,3/2`, `explicit-log:0,0.5`.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = |why: &str| ParseError::Family(format!("{s}: {why}"));
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let named = |params: &str| -> Result<BTreeMap<String, String>, ParseError> {
            params
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    p.split_once('=')
                        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                        .ok_or_else(|| bad("expected key=value"))
                })
                .collect()
        };
        let seq = match name.trim().to_ascii_lowercase().as_str() {
            "natural" => AdmissibleSequence::natural(),
            "fibonacci" => AdmissibleSequence::fibonacci(),
            "gaussian" => {
                let p = named(params)?;
                let q = p.get("q").ok_or_else(|| bad("missing q"))?;
                AdmissibleSequence::gaussian(parse_rational(q)?).map_err(|e| bad(&e.to_string()))?
            }
            "alpha" => {
                let p = named(params)?;
                let k = p.get("K").or_else(|| p.get("k")).ok_or_else(|| bad("missing K"))?;
                let a = p.get("alpha").ok_or_else(|| bad("missing alpha"))?;
                AdmissibleSequence::alpha(parse_real(k)?, parse_real(a)?).map_err(|e| bad(&e.to_string()))?
            }
            "explicit" => {
                let terms = params.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                AdmissibleSequence::explicit(terms).map_err(|e| bad(&e.to_string()))?
            }
            "explicit-log" => {
                let terms = params.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?;
                AdmissibleSequence::explicit_log(terms).map_err(|e| bad(&e.to_string()))?
            }
            _ => return Err(bad("unknown family")),
        };
        Ok(seq)
    }
}

/// `[n]_D!`.
pub fn d_factorial(d: &AdmissibleSequence, n: usize) -> Result<FwValue, FwError> {
    d.factorial(n)
}

/// `[Σ parts]_D! / Π [part]_D!`.
pub fn fw_multinomial(d: &AdmissibleSequence, parts: &[u32]) -> Result<FwValue, FwError> {
    let total: usize = parts.iter().map(|&p| p as usize).sum();
    if total == 0 {
        return Err(FwError::AllZeroParts);
    }
    if d.is_exact() {
        let mut v = d.factorial_exact(total)?;
        for &p in parts {
            v /= d.factorial_exact(p as usize)?;
        }
        Ok(FwValue::Exact(v))
    } else {
        let mut v = d.ln_factorial(total)?;
        for &p in parts {
            v -= d.ln_factorial(p as usize)?;
        }
        Ok(FwValue::Log(v))
    }
}

/// Binomial `C_D(n, k) = [n]! / ([k]! [n-k]!)`; `k ≤ n` required.
pub fn fw_binomial(d: &AdmissibleSequence, n: u32, k: u32) -> Result<FwValue, FwError> {
    if k > n {
        return Err(FwError::OutOfRange(format!("k = {k} > n = {n}")));
    }
    if n == 0 {
        return Ok(FwValue::Exact(BigRational::one()));
    }
    fw_multinomial(d, &[k, n - k])
}

/// `C(n,k) - C(n-1,k) - C(n-1,k-1)(D_n - D_{n-k})/D_k`, for `1 ≤ k ≤ n-1`.
pub fn pascal_residual(d: &AdmissibleSequence, n: u32, k: u32) -> Result<FwDifference, FwError> {
    if k < 1 || k + 1 > n {
        return Err(FwError::OutOfRange(format!("need 1 <= k <= n-1, got n = {n}, k = {k}")));
    }
    let (nu, ku) = (n as usize, k as usize);
    if d.is_exact() {
        let c = |a, b| fw_binomial(d, a, b).map(|v| v.as_exact().cloned().expect("exact kind"));
        let rhs = c(n - 1, k - 1)? * (d.term_exact(nu)? - d.term_exact(nu - ku)?) / d.term_exact(ku)?;
        return Ok(FwDifference::Exact(c(n, k)? - c(n - 1, k)? - rhs));
    }
    let c = |a, b| fw_binomial(d, a, b).map(|v| v.ln().exp());
    let dn = d.ln_term(nu)?.exp();
    let dnk = d.ln_term(nu - ku)?.exp();
    let dk = d.ln_term(ku)?.exp();
    let (lhs, minus, rhs) = (c(n, k)?, c(n - 1, k)?, c(n - 1, k - 1)? * (dn - dnk) / dk);
    let scale = lhs.abs().max(minus.abs()).max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(FwDifference::Relative((lhs - minus - rhs) / scale))
}

/// Ratio of the full coefficient to (coarse coefficient × within-group coefficients).
///
/// `grouping[i]` is the group of part `i`; groups must be exactly `0..m`.
pub fn grouping_identity_residual(
    d: &AdmissibleSequence,
    parts: &[u32],
    grouping: &[usize],
) -> Result<FwValue, FwError> {
    if parts.len() != grouping.len() {
        return Err(FwError::InvalidGrouping(format!(
            "{} parts but {} group labels",
            parts.len(),
            grouping.len()
        )));
    }
    let groups = grouping.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); groups];
    for (&p, &g) in parts.iter().zip(grouping) {
        members[g].push(p);
    }
    if let Some(empty) = members.iter().position(Vec::is_empty) {
        return Err(FwError::InvalidGrouping(format!("group {empty} has no parts")));
    }
    let sums: Vec<u32> = members.iter().map(|m| m.iter().sum()).collect();
    let full = fw_multinomial(d, parts)?.to_pos();
    let mut denom = fw_multinomial(d, &sums)?.to_pos();
    for m in members.iter().filter(|m| m.iter().any(|&p| p > 0)) {
        denom.mul_assign(&fw_multinomial(d, m)?.to_pos());
    }
    Ok(FwValue::from_pos(&full.div(&denom)))
}

/// Table of binomials `(n1, n2) -> C_D(n1+n2; n1, n2)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BinomialTable {
    entries: BTreeMap<(u32, u32), FwValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableEntry {
    parts: [u32; 2],
    value: TableValue,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TableValue {
    Exact(String),
    Log { ln: f64 },
}

impl BinomialTable {
    pub fn new() -> Self {
        BinomialTable::default()
    }

    /// All entries of `D` with `1 ≤ n1 + n2 ≤ max_total`.
    pub fn generate(d: &AdmissibleSequence, max_total: u32) -> Result<Self, FwError> {
        let mut t = BinomialTable::new();
        for total in 1..=max_total {
            for n1 in 0..=total {
                t.insert(n1, total - n1, fw_multinomial(d, &[n1, total - n1])?);
            }
        }
        Ok(t)
    }

    pub fn from_fn(max_total: u32, mut f: impl FnMut(u32, u32) -> FwValue) -> Self {
        let mut t = BinomialTable::new();
        for total in 1..=max_total {
            for n1 in 0..=total {
                t.insert(n1, total - n1, f(n1, total - n1));
            }
        }
        t
    }

    pub fn insert(&mut self, n1: u32, n2: u32, v: FwValue) {
        self.entries.insert((n1, n2), v);
    }

    pub fn get(&self, n1: u32, n2: u32) -> Option<&FwValue> {
        self.entries.get(&(n1, n2))
    }

    /// Value with the convention `f(0, 0) = 1`.
    pub(crate) fn value(&self, n1: u32, n2: u32) -> Result<FwValue, FwError> {
        if n1 == 0 && n2 == 0 {
            return Ok(FwValue::Exact(BigRational::one()));
        }
        self.get(n1, n2).cloned().ok_or(FwError::IncompleteTable((n1, n2)))
    }

    /// Largest `n1 + n2` present.
    pub fn max_total(&self) -> u32 {
        self.entries.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), &FwValue)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<TableEntry> = self
            .entries
            .iter()
            .map(|(&(a, b), v)| TableEntry {
                parts: [a, b],
                value: match v {
                    FwValue::Exact(r) => TableValue::Exact(format_rational(r)),
                    FwValue::Log(l) => TableValue::Log { ln: *l },
                },
            })
            .collect();
        serde_json::to_value(rows).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self, ParseError> {
        let rows: Vec<TableEntry> = serde_json::from_value(v)?;
        let mut t = BinomialTable::new();
        for row in rows {
            let value = match row.value {
                TableValue::Exact(s) => FwValue::Exact(parse_rational(&s)?),
                TableValue::Log { ln } => FwValue::Log(ln),
            };
            t.insert(row.parts[0], row.parts[1], value);
        }
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        BinomialTable::from_json_value(serde_json::from_str(text)?)
    }
}

/// Recovers `D_1..D_N` from a binomial table via `D_n = C(1, n-1)` and checks
/// every entry against the recovered sequence.
pub fn sequence_from_binomials(table: &BinomialTable) -> Result<AdmissibleSequence, FwError> {
    let n_max = table.max_total();
    if n_max == 0 {
        return Err(FwError::IncompleteTable((1, 0)));
    }
    let terms: Vec<FwValue> = (1..=n_max).map(|n| table.value(1, n - 1)).collect::<Result<_, _>>()?;
    let d = sequence_from_terms(&terms)?;
    for ((n1, n2), found) in table.iter() {
        let expected = fw_multinomial(&d, &[n1, n2])?;
        if !found.approx_eq(&expected) {
            return Err(FwError::InconsistentTable {
                parts: (n1, n2),
                found: found.to_string(),
                expected: expected.to_string(),
            });
        }
    }
    Ok(d)
}

/// Builds an explicit prefix from `D_1..D_N`, exact when every term is.
pub fn sequence_from_terms(terms: &[FwValue]) -> Result<AdmissibleSequence, FwError> {
    if terms.iter().all(|t| matches!(t, FwValue::Exact(_))) {
        AdmissibleSequence::explicit(terms.iter().map(|t| t.as_exact().cloned().expect("exact")).collect())
    } else {
        let mut logs: Vec<f64> = terms.iter().map(FwValue::ln).collect();
        if let Some(first) = logs.first_mut() {
            if first.abs() <= LOG_RELATIVE_TOLERANCE {
                *first = 0.0;
            }
        }
        AdmissibleSequence::explicit_log(logs)
    }
}

/// `true` when the two sequences agree on `D_1..D_n`.
pub fn same_prefix(a: &AdmissibleSequence, b: &AdmissibleSequence, n: usize) -> Result<bool, FwError> {
    for i in 1..=n {
        if !a.term(i)?.approx_eq(&b.term(i)?) {
            return Ok(false);
        }
    }
    Ok(true)
}
