//! Finite information structures: a poset of variables with a terminal object,
//! declared meets, and surjective fiber maps between outcome sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{ParseError, StructureError};

/// Index of a variable inside a validated structure (variables are sorted by id).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub(crate) usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeSet {
    labels: Vec<String>,
}

impl OutcomeSet {
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    id: String,
    outcomes: OutcomeSet,
}

impl Variable {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn outcomes(&self) -> &OutcomeSet {
        &self.outcomes
    }
}

/// On-disk form of a structure. Field order is alphabetical so that the
/// serialized JSON has sorted keys.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawStructure {
    pub arrows: Vec<RawArrow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub products: Vec<RawProduct>,
    pub terminal: String,
    pub variables: Vec<RawVariable>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawArrow {
    pub map: BTreeMap<String, String>,
    pub source: String,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawProduct {
    pub left: String,
    pub result: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVariable {
    pub id: String,
    pub outcomes: Vec<String>,
}

impl RawStructure {
    pub fn new(terminal: &str) -> Self {
        RawStructure {
            terminal: terminal.to_string(),
            variables: vec![RawVariable {
                id: terminal.to_string(),
                outcomes: vec!["*".to_string()],
            }],
            ..Default::default()
        }
    }

    pub fn variable(mut self, id: &str, outcomes: &[&str]) -> Self {
        self.variables.push(RawVariable {
            id: id.to_string(),
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    pub fn arrow(mut self, source: &str, target: &str, map: &[(&str, &str)]) -> Self {
        self.arrows.push(RawArrow {
            source: source.to_string(),
            target: target.to_string(),
            map: map
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        });
        self
    }

    /// Arrow to the terminal object, mapping every outcome to its single point.
    pub fn arrow_to_terminal(self, source: &str) -> Self {
        let terminal = self.terminal.clone();
        let point = self
            .variables
            .iter()
            .find(|v| v.id == terminal)
            .and_then(|v| v.outcomes.first().cloned())
            .unwrap_or_else(|| "*".to_string());
        let outcomes: Vec<String> = self
            .variables
            .iter()
            .find(|v| v.id == source)
            .map(|v| v.outcomes.clone())
            .unwrap_or_default();
        let map: Vec<(&str, &str)> = outcomes.iter().map(|o| (o.as_str(), point.as_str())).collect();
        self.arrow(source, &terminal, &map)
    }

    pub fn product(mut self, left: &str, right: &str, result: &str) -> Self {
        self.products.push(RawProduct {
            left: left.to_string(),
            right: right.to_string(),
            result: result.to_string(),
        });
        self
    }

    pub fn describe(mut self, text: &str) -> Self {
        self.description = Some(text.to_string());
        self
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Sorted variables, arrows and products; product operands ordered.
    pub fn canonical(&self) -> RawStructure {
        let mut out = self.clone();
        out.variables.sort_by(|a, b| a.id.cmp(&b.id));
        out.arrows.sort();
        for p in &mut out.products {
            if p.right < p.left {
                std::mem::swap(&mut p.left, &mut p.right);
            }
        }
        out.products.sort();
        out.products.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.canonical()).expect("serializable");
        text.push('\n');
        text
    }
}

/// One violated axiom, with the offending variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    Malformed { detail: String },
    MissingTerminal { detail: String },
    NonSurjectiveFiberMap { source: String, target: String, missed: Vec<String> },
    ProductNotInjective { left: String, right: String, result: String, collision: Vec<String> },
    PosetViolation { detail: String },
    MissingProduct { left: String, right: String, detail: String },
    ConservativityViolation { source: String, target: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Malformed { detail } => write!(f, "malformed: {detail}"),
            Violation::MissingTerminal { detail } => write!(f, "MissingTerminal: {detail}"),
            Violation::NonSurjectiveFiberMap { source, target, missed } => write!(
                f,
                "NonSurjectiveFiberMap: {source} -> {target} misses {}",
                missed.join(", ")
            ),
            Violation::ProductNotInjective { left, right, result, collision } => write!(
                f,
                "ProductNotInjective: {result} = {left}∧{right} sends {} to the same pair",
                collision.join(" and ")
            ),
            Violation::PosetViolation { detail } => write!(f, "PosetViolation: {detail}"),
            Violation::MissingProduct { left, right, detail } => {
                write!(f, "MissingProduct: {left}∧{right}: {detail}")
            }
            Violation::ConservativityViolation { source, target } => write!(
                f,
                "ConservativityViolation: {source} -> {target} is a bijection"
            ),
        }
    }
}

/// A validated finite information structure. Immutable once built.
#[derive(Clone, Debug)]
pub struct InformationStructure {
    variables: Vec<Variable>,
    index: HashMap<String, VarId>,
    terminal: VarId,
    /// Fiber maps of the transitive closure, identities included.
    maps: HashMap<(VarId, VarId), Vec<usize>>,
    products: BTreeMap<(VarId, VarId), VarId>,
    raw: RawStructure,
}

impl PartialEq for InformationStructure {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl InformationStructure {
    pub fn from_json(text: &str) -> Result<Self, StructureError> {
        let raw = RawStructure::from_json(text)?;
        validate(&raw)
    }

    pub fn to_json(&self) -> String {
        self.raw.to_json()
    }

    pub fn raw(&self) -> &RawStructure {
        &self.raw
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        (0..self.variables.len()).map(VarId)
    }

    pub fn variable(&self, v: VarId) -> &Variable {
        &self.variables[v.0]
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.variables[v.0].id
    }

    pub fn outcome_count(&self, v: VarId) -> usize {
        self.variables[v.0].outcomes.len()
    }

    pub fn lookup(&self, id: &str) -> Result<VarId, StructureError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| StructureError::UnknownVariable(id.to_string()))
    }

    pub fn terminal(&self) -> VarId {
        self.terminal
    }

    /// `true` iff there is an arrow `fine -> coarse` (identity included).
    pub fn refines(&self, fine: VarId, coarse: VarId) -> bool {
        self.maps.contains_key(&(fine, coarse))
    }

    /// Fiber map of the arrow `source -> target` as outcome indices.
    pub fn arrow_map(&self, source: VarId, target: VarId) -> Option<&[usize]> {
        self.maps.get(&(source, target)).map(Vec::as_slice)
    }

    /// Every variable `Y` with `x -> Y`, including `x` itself.
    pub fn coarser(&self, x: VarId) -> Vec<VarId> {
        self.var_ids().filter(|&y| self.refines(x, y)).collect()
    }

    /// Meet by index: equal, comparable, or declared product.
    pub fn meet_id(&self, x: VarId, y: VarId) -> Option<VarId> {
        if self.refines(x, y) {
            return Some(x);
        }
        if self.refines(y, x) {
            return Some(y);
        }
        self.products.get(&ordered(x, y)).copied()
    }

    /// Meet of a list of variables; the empty meet is the terminal object.
    pub fn meet_all(&self, vars: &[VarId]) -> Option<VarId> {
        vars.iter()
            .try_fold(self.terminal, |acc, &v| self.meet_id(acc, v))
    }

    pub fn meet(&self, x: &str, y: &str) -> Result<String, StructureError> {
        let (a, b) = (self.lookup(x)?, self.lookup(y)?);
        self.meet_id(a, b)
            .map(|m| self.name(m).to_string())
            .ok_or_else(|| StructureError::NoProduct(x.to_string(), y.to_string()))
    }

    /// Outcomes of `source` lying over `outcome` of `target`.
    pub fn fiber(&self, source: &str, target: &str, outcome: &str) -> Result<Vec<String>, StructureError> {
        let (s, t) = (self.lookup(source)?, self.lookup(target)?);
        let map = self
            .arrow_map(s, t)
            .ok_or_else(|| StructureError::UnknownArrow(source.to_string(), target.to_string()))?;
        let y = self.variables[t.0].outcomes.index_of(outcome).ok_or_else(|| {
            StructureError::UnknownOutcome {
                variable: target.to_string(),
                outcome: outcome.to_string(),
            }
        })?;
        let labels = self.variables[s.0].outcomes.labels();
        Ok(map
            .iter()
            .enumerate()
            .filter(|&(_, &img)| img == y)
            .map(|(x, _)| labels[x].clone())
            .collect())
    }

    /// Connected components of the arrow graph with the terminal removed.
    pub fn components(&self) -> Vec<Vec<VarId>> {
        let n = self.variables.len();
        let mut uf = UnionFind::<usize>::new(n);
        for &(s, t) in self.maps.keys() {
            if s != self.terminal && t != self.terminal {
                uf.union(s.0, t.0);
            }
        }
        let mut groups: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
        for v in self.var_ids().filter(|&v| v != self.terminal) {
            groups.entry(uf.find(v.0)).or_default().push(v);
        }
        let mut comps: Vec<Vec<VarId>> = groups.into_values().collect();
        comps.sort();
        comps
    }

    /// Component ids as strings, for reports.
    pub fn component_names(&self) -> Vec<Vec<String>> {
        self.components()
            .into_iter()
            .map(|c| c.into_iter().map(|v| self.name(v).to_string()).collect())
            .collect()
    }

    /// Declared products `(left, right) -> result` with `left < right`.
    pub fn products(&self) -> impl Iterator<Item = (VarId, VarId, VarId)> + '_ {
        self.products.iter().map(|(&(l, r), &m)| (l, r, m))
    }
}

fn ordered(x: VarId, y: VarId) -> (VarId, VarId) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

fn compose(first: &[usize], second: &[usize]) -> Vec<usize> {
    first.iter().map(|&i| second[i]).collect()
}

fn is_bijective(map: &[usize], target_size: usize) -> bool {
    map.len() == target_size && map.iter().collect::<BTreeSet<_>>().len() == target_size
}

/// Checks every axiom and returns the validated structure, or all violations.
pub fn validate(raw: &RawStructure) -> Result<InformationStructure, StructureError> {
    let raw = raw.canonical();
    let mut violations = Vec::new();
    let malformed = |v: &mut Vec<Violation>, detail: String| v.push(Violation::Malformed { detail });

    // Variables and outcome sets.
    let mut index = HashMap::new();
    let mut variables = Vec::new();
    for rv in &raw.variables {
        if index.contains_key(&rv.id) {
            malformed(&mut violations, format!("duplicate variable id `{}`", rv.id));
            continue;
        }
        if rv.outcomes.is_empty() {
            malformed(&mut violations, format!("variable `{}` has no outcomes", rv.id));
        }
        let distinct: BTreeSet<&String> = rv.outcomes.iter().collect();
        if distinct.len() != rv.outcomes.len() {
            malformed(&mut violations, format!("variable `{}` repeats an outcome label", rv.id));
        }
        index.insert(rv.id.clone(), VarId(variables.len()));
        variables.push(Variable {
            id: rv.id.clone(),
            outcomes: OutcomeSet {
                labels: rv.outcomes.clone(),
            },
        });
    }
    let terminal = match index.get(&raw.terminal) {
        Some(&t) => t,
        None => {
            violations.push(Violation::MissingTerminal {
                detail: format!("terminal `{}` is not a declared variable", raw.terminal),
            });
            return Err(StructureError::Invalid(violations));
        }
    };
    if variables[terminal.0].outcomes.len() != 1 {
        violations.push(Violation::MissingTerminal {
            detail: format!("terminal `{}` must have exactly one outcome", raw.terminal),
        });
    }

    // Declared arrows.
    let mut maps: HashMap<(VarId, VarId), Vec<usize>> = HashMap::new();
    for ra in &raw.arrows {
        let (Some(&s), Some(&t)) = (index.get(&ra.source), index.get(&ra.target)) else {
            malformed(
                &mut violations,
                format!("arrow {} -> {} names an unknown variable", ra.source, ra.target),
            );
            continue;
        };
        if s == t {
            violations.push(Violation::PosetViolation {
                detail: format!("explicit identity arrow on `{}`", ra.source),
            });
            continue;
        }
        if maps.contains_key(&(s, t)) {
            violations.push(Violation::PosetViolation {
                detail: format!("two arrows {} -> {}", ra.source, ra.target),
            });
            continue;
        }
        let (src, tgt) = (&variables[s.0].outcomes, &variables[t.0].outcomes);
        let mut map = Vec::with_capacity(src.len());
        let mut ok = true;
        for label in src.labels() {
            match ra.map.get(label).map(|img| (img, tgt.index_of(img))) {
                Some((_, Some(j))) => map.push(j),
                Some((img, None)) => {
                    malformed(
                        &mut violations,
                        format!("arrow {} -> {} sends `{label}` to unknown `{img}`", ra.source, ra.target),
                    );
                    ok = false;
                }
                None => {
                    malformed(
                        &mut violations,
                        format!("arrow {} -> {} has no image for `{label}`", ra.source, ra.target),
                    );
                    ok = false;
                }
            }
        }
        for key in ra.map.keys() {
            if src.index_of(key).is_none() {
                malformed(
                    &mut violations,
                    format!("arrow {} -> {} maps unknown outcome `{key}`", ra.source, ra.target),
                );
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let hit: BTreeSet<usize> = map.iter().copied().collect();
        if hit.len() != tgt.len() {
            let missed = (0..tgt.len())
                .filter(|j| !hit.contains(j))
                .map(|j| tgt.labels()[j].clone())
                .collect();
            violations.push(Violation::NonSurjectiveFiberMap {
                source: ra.source.clone(),
                target: ra.target.clone(),
                missed,
            });
        }
        maps.insert((s, t), map);
    }

    // Transitive closure, rejecting cycles.
    let n = variables.len();
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = maps.get(&(VarId(i), VarId(k))).cloned() else {
                continue;
            };
            for j in 0..n {
                let Some(kj) = maps.get(&(VarId(k), VarId(j))) else {
                    continue;
                };
                if i == j {
                    violations.push(Violation::PosetViolation {
                        detail: format!(
                            "cycle through `{}` and `{}` breaks antisymmetry",
                            variables[i].id, variables[k].id
                        ),
                    });
                    continue;
                }
                let composite = compose(&ik, kj);
                maps.entry((VarId(i), VarId(j))).or_insert(composite);
            }
        }
    }
    dedup(&mut violations);
    if violations
        .iter()
        .any(|v| matches!(v, Violation::PosetViolation { .. } | Violation::Malformed { .. }))
    {
        return Err(StructureError::Invalid(violations));
    }

    // Every composable pair must agree with the direct arrow.
    for ((i, k), ik) in &maps {
        for j in 0..n {
            let j = VarId(j);
            if let (Some(kj), Some(ij)) = (maps.get(&(*k, j)), maps.get(&(*i, j))) {
                if compose(ik, kj) != *ij {
                    violations.push(Violation::PosetViolation {
                        detail: format!(
                            "composite {} -> {} -> {} disagrees with {} -> {}",
                            variables[i.0].id, variables[k.0].id, variables[j.0].id,
                            variables[i.0].id, variables[j.0].id
                        ),
                    });
                }
            }
        }
    }
    for v in 0..n {
        maps.insert((VarId(v), VarId(v)), (0..variables[v].outcomes.len()).collect());
    }

    for v in (0..n).map(VarId).filter(|&v| v != terminal) {
        if !maps.contains_key(&(v, terminal)) {
            violations.push(Violation::MissingTerminal {
                detail: format!("no arrow from `{}` to terminal `{}`", variables[v.0].id, raw.terminal),
            });
        }
    }
    if (0..n).any(|t| t != terminal.0 && maps.contains_key(&(terminal, VarId(t)))) {
        violations.push(Violation::PosetViolation {
            detail: format!("terminal `{}` has an outgoing arrow", raw.terminal),
        });
    }

    let mut closure_arrows: Vec<_> = maps.iter().filter(|((s, t), _)| s != t).collect();
    closure_arrows.sort_by_key(|(k, _)| **k);
    for ((s, t), map) in closure_arrows {
        if is_bijective(map, variables[t.0].outcomes.len()) {
            violations.push(Violation::ConservativityViolation {
                source: variables[s.0].id.clone(),
                target: variables[t.0].id.clone(),
            });
        }
    }

    // Products.
    let mut products: BTreeMap<(VarId, VarId), VarId> = BTreeMap::new();
    for rp in &raw.products {
        let ids = [&rp.left, &rp.right, &rp.result].map(|id| index.get(id).copied());
        let [Some(l), Some(r), Some(m)] = ids else {
            malformed(
                &mut violations,
                format!("product {}∧{} = {} names an unknown variable", rp.left, rp.right, rp.result),
            );
            continue;
        };
        let key = ordered(l, r);
        if let Some(&prev) = products.get(&key) {
            if prev != m {
                violations.push(Violation::PosetViolation {
                    detail: format!("{}∧{} declared twice with different results", rp.left, rp.right),
                });
            }
            continue;
        }
        let (Some(ml), Some(mr)) = (maps.get(&(m, l)), maps.get(&(m, r))) else {
            violations.push(Violation::MissingProduct {
                left: rp.left.clone(),
                right: rp.right.clone(),
                detail: format!("`{}` does not refine both factors", rp.result),
            });
            continue;
        };
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let labels = variables[m.0].outcomes.labels();
        for z in 0..labels.len() {
            if let Some(prev) = seen.insert((ml[z], mr[z]), z) {
                violations.push(Violation::ProductNotInjective {
                    left: rp.left.clone(),
                    right: rp.right.clone(),
                    result: rp.result.clone(),
                    collision: vec![labels[prev].clone(), labels[z].clone()],
                });
                break;
            }
        }
        for w in (0..n).map(VarId) {
            if maps.contains_key(&(w, l)) && maps.contains_key(&(w, r)) && !maps.contains_key(&(w, m)) {
                violations.push(Violation::MissingProduct {
                    left: rp.left.clone(),
                    right: rp.right.clone(),
                    detail: format!(
                        "`{}` refines both factors but not `{}`, so it is not their meet",
                        variables[w.0].id, rp.result
                    ),
                });
            }
        }
        products.insert(key, m);
    }

    // Conditional cartesianness: every cospan needs a meet.
    for a in 0..n {
        for b in (a + 1)..n {
            let (x, y) = (VarId(a), VarId(b));
            if maps.contains_key(&(x, y)) || maps.contains_key(&(y, x)) || products.contains_key(&(x, y)) {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| maps.contains_key(&(VarId(z), x)) && maps.contains_key(&(VarId(z), y))) {
                violations.push(Violation::MissingProduct {
                    left: variables[a].id.clone(),
                    right: variables[b].id.clone(),
                    detail: format!("cospan through `{}` without a declared product", variables[z].id),
                });
            }
        }
    }

    dedup(&mut violations);
    if !violations.is_empty() {
        return Err(StructureError::Invalid(violations));
    }
    Ok(InformationStructure {
        variables,
        index,
        terminal,
        maps,
        products,
        raw,
    })
}

fn dedup(vs: &mut Vec<Violation>) {
    let mut seen = Vec::new();
    vs.retain(|v| {
        if seen.contains(v) {
            false
        } else {
            seen.push(v.clone());
            true
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn violations(raw: RawStructure) -> Vec<Violation> {
        match validate(&raw) {
            Err(StructureError::Invalid(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn example_structure_is_valid() {
        let s = fixtures::two_variable_example();
        assert_eq!(s.variables().len(), 4);
        assert_eq!(s.meet("X1", "X2").unwrap(), "X1X2");
    }

    #[test]
    fn missing_terminal_arrow() {
        let raw = RawStructure::new("1").variable("X", &["a", "b"]);
        let vs = violations(raw);
        assert!(matches!(vs[0], Violation::MissingTerminal { .. }), "{vs:?}");
    }

    #[test]
    fn terminal_with_two_points() {
        let mut raw = RawStructure::new("1");
        raw.variables[0].outcomes.push("**".into());
        assert!(violations(raw)
            .iter()
            .any(|v| matches!(v, Violation::MissingTerminal { .. })));
    }

    #[test]
    fn product_not_injective() {
        let raw = RawStructure::new("1")
            .variable("X", &["a", "b"])
            .variable("Y", &["c", "d"])
            .variable("XY", &["p", "q", "r", "s"])
            .arrow_to_terminal("X")
            .arrow_to_terminal("Y")
            .arrow("XY", "X", &[("p", "a"), ("q", "a"), ("r", "b"), ("s", "b")])
            .arrow("XY", "Y", &[("p", "c"), ("q", "c"), ("r", "c"), ("s", "d")])
            .product("X", "Y", "XY");
        let vs = violations(raw);
        assert!(
            vs.iter().any(|v| matches!(v, Violation::ProductNotInjective { collision, .. } if collision == &vec!["p".to_string(), "q".to_string()])),
            "{vs:?}"
        );
    }

    #[test]
    fn non_surjective_map() {
        let raw = RawStructure::new("1")
            .variable("X", &["a", "b", "c"])
            .variable("Y", &["u", "v"])
            .arrow_to_terminal("Y")
            .arrow("X", "Y", &[("a", "u"), ("b", "u"), ("c", "u")]);
        let vs = violations(raw);
        assert!(vs.iter().any(|v| matches!(v, Violation::NonSurjectiveFiberMap { missed, .. } if missed == &vec!["v".to_string()])));
    }

    #[test]
    fn cycle_is_poset_violation() {
        let raw = RawStructure::new("1")
            .variable("X", &["a", "b", "c"])
            .variable("Y", &["u", "v", "w"])
            .arrow_to_terminal("X")
            .arrow("X", "Y", &[("a", "u"), ("b", "v"), ("c", "w")])
            .arrow("Y", "X", &[("u", "a"), ("v", "b"), ("w", "c")]);
        assert!(violations(raw)
            .iter()
            .any(|v| matches!(v, Violation::PosetViolation { .. })));
    }

    #[test]
    fn inconsistent_composite() {
        let raw = RawStructure::new("1")
            .variable("X", &["a", "b", "c", "d"])
            .variable("Y", &["u", "v", "w"])
            .variable("Z", &["s", "t"])
            .arrow_to_terminal("Z")
            .arrow("X", "Y", &[("a", "u"), ("b", "v"), ("c", "w"), ("d", "w")])
            .arrow("Y", "Z", &[("u", "s"), ("v", "s"), ("w", "t")])
            .arrow("X", "Z", &[("a", "t"), ("b", "s"), ("c", "t"), ("d", "t")]);
        let vs = violations(raw);
        assert!(vs.iter().any(|v| matches!(v, Violation::PosetViolation { detail } if detail.contains("disagrees"))), "{vs:?}");
    }

    #[test]
    fn bijective_arrow_violates_conservativity() {
        let raw = RawStructure::new("1")
            .variable("X", &["a", "b"])
            .variable("Y", &["u", "v"])
            .arrow_to_terminal("Y")
            .arrow("X", "Y", &[("a", "u"), ("b", "v")]);
        assert!(violations(raw)
            .iter()
            .any(|v| matches!(v, Violation::ConservativityViolation { .. })));
    }

    #[test]
    fn cospan_without_product() {
        let mut raw = fixtures::two_variable_example().raw().clone();
        raw.products.clear();
        assert!(violations(raw)
            .iter()
            .any(|v| matches!(v, Violation::MissingProduct { .. })));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"arrows":[],"terminal":"1","variables":[{"id":"1","outcomes":["*"]}],"extra":1}"#;
        assert!(InformationStructure::from_json(text).is_err());
        let ok = r#"{"arrows":[],"terminal":"1","variables":[{"id":"1","outcomes":["*"]}]}"#;
        assert!(InformationStructure::from_json(ok).is_ok());
    }

    #[test]
    fn fiber_queries() {
        let s = fixtures::two_variable_example();
        assert_eq!(s.fiber("X1X2", "X1", "x02").unwrap(), vec!["x0", "x2"]);
        assert_eq!(s.fiber("X1X2", "1", "*").unwrap(), vec!["x0", "x1", "x2"]);
        assert_eq!(s.fiber("X1", "X1", "x1").unwrap(), vec!["x1"]);
        assert!(matches!(s.fiber("X1", "X2", "x2"), Err(StructureError::UnknownArrow(..))));
        assert!(matches!(s.fiber("X1X2", "X1", "nope"), Err(StructureError::UnknownOutcome { .. })));
    }

    #[test]
    fn meet_laws() {
        let s = fixtures::two_variable_example();
        assert_eq!(s.meet("X1", "X1").unwrap(), "X1");
        assert_eq!(s.meet("X1", "1").unwrap(), "X1");
        assert_eq!(s.meet("X2", "X1").unwrap(), "X1X2");
        let d = fixtures::two_component_example();
        assert!(matches!(d.meet("X1a", "X1b"), Err(StructureError::NoProduct(..))));
    }

    #[test]
    fn components_of_fixtures() {
        let s = fixtures::two_variable_example();
        assert_eq!(s.component_names(), vec![vec!["X1", "X1X2", "X2"]]);
        assert_eq!(fixtures::two_component_example().components().len(), 2);
        let lone = validate(&RawStructure::new("1")).unwrap();
        assert!(lone.components().is_empty());
    }

    #[test]
    fn validation_is_idempotent() {
        for s in fixtures::all() {
            let again = InformationStructure::from_json(&s.to_json()).unwrap();
            assert_eq!(again, s);
            assert_eq!(again.to_json(), s.to_json());
        }
    }
}
