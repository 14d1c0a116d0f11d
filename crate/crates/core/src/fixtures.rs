//! Standard structures used by tests, the acceptance suite and the CLI examples.

use crate::structure::{validate, InformationStructure, RawStructure};

/// Two binary variables `X1`, `X2` over a three-outcome joint variable `X1X2`.
///
/// Outcomes are indexed by subsets of `{0, 1, 2}`: `X1 = {x{1}, x{0,2}}`,
/// `X2 = {x{2}, x{0,1}}`, and `x_I` maps to `x_J` iff `I ⊂ J`. The joint
/// labels must be `x0, x1, x2` for the inclusion rule to resolve; the
/// often-quoted `{x1, x2, x3}` labelling has no consistent fiber map.
pub fn two_variable_example_raw() -> RawStructure {
    two_variable_example_named("")
        .describe("joint outcomes x0,x1,x2 (not x1,x2,x3): x_I -> x_J iff I is a subset of J")
}

fn two_variable_example_named(suffix: &str) -> RawStructure {
    let x1 = format!("X1{suffix}");
    let x2 = format!("X2{suffix}");
    let x12 = format!("X1X2{suffix}");
    RawStructure::new("1")
        .variable(&x1, &["x1", "x02"])
        .variable(&x2, &["x2", "x01"])
        .variable(&x12, &["x0", "x1", "x2"])
        .arrow_to_terminal(&x1)
        .arrow_to_terminal(&x2)
        .arrow(&x12, &x1, &[("x0", "x02"), ("x1", "x1"), ("x2", "x02")])
        .arrow(&x12, &x2, &[("x0", "x01"), ("x1", "x01"), ("x2", "x2")])
        .product(&x1, &x2, &x12)
}

pub fn two_variable_example() -> InformationStructure {
    validate(&two_variable_example_raw()).expect("example structure is valid")
}

/// Two disjoint copies of [`two_variable_example`] sharing only the terminal.
pub fn two_component_example() -> InformationStructure {
    let a = two_variable_example_named("a");
    let b = two_variable_example_named("b");
    let mut raw = a;
    raw.variables.extend(b.variables.into_iter().filter(|v| v.id != "1"));
    raw.arrows.extend(b.arrows);
    raw.products.extend(b.products);
    raw.description = Some("two disjoint copies of the two-variable example".into());
    validate(&raw).expect("disjoint union is valid")
}

/// Variables `X1..Xk` with the given outcome counts and every joint variable,
/// each joint outcome set being the full cartesian product.
pub fn full_product_raw(sizes: &[usize]) -> RawStructure {
    assert!(sizes.iter().all(|&s| (2..=10).contains(&s)), "sizes must be in 2..=10");
    let k = sizes.len();
    let subsets: Vec<u32> = (1u32..(1 << k)).collect();
    let name = |mask: u32| -> String {
        (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| format!("X{}", i + 1))
            .collect()
    };
    let outcomes = |mask: u32| -> Vec<Vec<usize>> {
        let mut acc: Vec<Vec<usize>> = vec![vec![]];
        for i in (0..k).filter(|i| mask & (1 << i) != 0) {
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    (0..sizes[i]).map(move |d| {
                        let mut p = prefix.clone();
                        p.push(d);
                        p
                    })
                })
                .collect();
        }
        acc
    };
    let label = |digits: &[usize]| digits.iter().map(|d| d.to_string()).collect::<String>();

    let mut raw = RawStructure::new("1").describe(&format!("full product of sizes {sizes:?}"));
    for &mask in &subsets {
        let labels: Vec<String> = outcomes(mask).iter().map(|d| label(d)).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        raw = raw.variable(&name(mask), &refs);
    }
    for &mask in &subsets {
        if mask.count_ones() == 1 {
            raw = raw.arrow_to_terminal(&name(mask));
            continue;
        }
        let members: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
        for (pos, &drop) in members.iter().enumerate() {
            let target = mask & !(1 << drop);
            let pairs: Vec<(String, String)> = outcomes(mask)
                .iter()
                .map(|d| {
                    let mut rest = d.clone();
                    rest.remove(pos);
                    (label(d), label(&rest))
                })
                .collect();
            let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            raw = raw.arrow(&name(mask), &name(target), &refs);
        }
    }
    for (i, &a) in subsets.iter().enumerate() {
        for &b in &subsets[i + 1..] {
            if a & b != a && a & b != b {
                raw = raw.product(&name(a), &name(b), &name(a | b));
            }
        }
    }
    raw
}

pub fn full_product(sizes: &[usize]) -> InformationStructure {
    validate(&full_product_raw(sizes)).expect("full product is valid")
}

/// A product `XY` whose joint outcomes are `(x1,y1), (x1,y2), (x2,y3), (x3,y3)`:
/// every 2x2 cell of every enumeration holds at most two of them.
pub fn block_diagonal_raw() -> RawStructure {
    RawStructure::new("1")
        .describe("block-diagonal product: at most two joint outcomes per 2x2 cell")
        .variable("X", &["x1", "x2", "x3"])
        .variable("Y", &["y1", "y2", "y3"])
        .variable("XY", &["w11", "w12", "w23", "w33"])
        .arrow_to_terminal("X")
        .arrow_to_terminal("Y")
        .arrow("XY", "X", &[("w11", "x1"), ("w12", "x1"), ("w23", "x2"), ("w33", "x3")])
        .arrow("XY", "Y", &[("w11", "y1"), ("w12", "y2"), ("w23", "y3"), ("w33", "y3")])
        .product("X", "Y", "XY")
}

pub fn block_diagonal() -> InformationStructure {
    validate(&block_diagonal_raw()).expect("block-diagonal structure is valid")
}

/// Every fixture, for sweeping tests.
pub fn all() -> Vec<InformationStructure> {
    vec![
        two_variable_example(),
        two_component_example(),
        full_product(&[2, 2]),
        full_product(&[2, 2, 2]),
        full_product(&[2, 3]),
        block_diagonal(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_product_shapes() {
        let s = full_product(&[2, 2, 2]);
        assert_eq!(s.variables().len(), 8);
        assert_eq!(s.outcome_count(s.lookup("X1X2X3").unwrap()), 8);
        assert_eq!(s.meet("X1X2", "X2X3").unwrap(), "X1X2X3");
        assert_eq!(s.meet("X1", "X2X3").unwrap(), "X1X2X3");
        assert_eq!(s.meet("X1", "X1X3").unwrap(), "X1X3");
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn block_diagonal_valid() {
        let s = block_diagonal();
        assert_eq!(s.meet("X", "Y").unwrap(), "XY");
    }
}
