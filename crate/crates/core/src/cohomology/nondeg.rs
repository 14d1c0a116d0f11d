use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CohomologyError, FunctionalError};
use crate::structure::{InformationStructure, VarId};

/// Enumerations of `E_X`, `E_Y` and a NE path of 2x2 cells.
///
/// The path point `(a, b)` (1-based) names the cell spanned by
/// `x_a, x_{a+1}` and `y_b, y_{b+1}`, so the path runs from `(1, 1)` to
/// `(|E_X| − 1, |E_Y| − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NondegWitness {
    pub x_order: Vec<String>,
    pub y_order: Vec<String>,
    pub path: Vec<(usize, usize)>,
}

struct Grid {
    present: Vec<Vec<bool>>,
}

impl Grid {
    fn has(&self, px: &[usize], py: &[usize], a: usize, b: usize) -> bool {
        self.present[px[a]][py[b]]
    }

    fn cell_ok(&self, px: &[usize], py: &[usize], a: usize, b: usize) -> bool {
        let n = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .filter(|(i, j)| self.has(px, py, a + i, b + j))
            .count();
        n >= 3
    }

    /// Every `ν` supported on `x_a..x_k` lifts into one of the two staircases.
    fn lift_east(&self, px: &[usize], py: &[usize], a: usize, b: usize) -> bool {
        let k = px.len();
        let first = self.has(px, py, a, b + 1) && (a + 1..k).all(|i| self.has(px, py, i, b));
        let second = self.has(px, py, a, b) && (a + 1..k).all(|i| self.has(px, py, i, b + 1));
        first || second
    }

    fn lift_north(&self, px: &[usize], py: &[usize], a: usize, b: usize) -> bool {
        let l = py.len();
        let first = self.has(px, py, a + 1, b) && (b + 1..l).all(|j| self.has(px, py, a, j));
        let second = self.has(px, py, a, b) && (b + 1..l).all(|j| self.has(px, py, a + 1, j));
        first || second
    }

    /// First path in east-before-north order, as 0-based cells.
    fn path(&self, px: &[usize], py: &[usize]) -> Option<Vec<(usize, usize)>> {
        let (ea, eb) = (px.len() - 2, py.len() - 2);
        let mut dead = vec![vec![false; eb + 1]; ea + 1];
        let mut path = Vec::new();
        self.walk(px, py, (0, 0), (ea, eb), &mut dead, &mut path).then_some(path)
    }

    fn walk(
        &self,
        px: &[usize],
        py: &[usize],
        (a, b): (usize, usize),
        end: (usize, usize),
        dead: &mut [Vec<bool>],
        path: &mut Vec<(usize, usize)>,
    ) -> bool {
        if dead[a][b] || !self.cell_ok(px, py, a, b) {
            return false;
        }
        path.push((a, b));
        if (a, b) == end {
            return true;
        }
        if a < end.0 && self.lift_east(px, py, a, b) && self.walk(px, py, (a + 1, b), end, dead, path) {
            return true;
        }
        if b < end.1 && self.lift_north(px, py, a, b) && self.walk(px, py, (a, b + 1), end, dead, path) {
            return true;
        }
        path.pop();
        dead[a][b] = true;
        false
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            go(rest, prefix, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Exhaustive search over enumerations of `E_X`, `E_Y` (lexicographic) and NE
/// cell paths; `None` when the product is degenerate.
pub fn nondegenerate_witness(
    s: &InformationStructure,
    x: VarId,
    y: VarId,
) -> Result<Option<NondegWitness>, CohomologyError> {
    let xy = s.meet_id(x, y).ok_or_else(|| {
        CohomologyError::from(FunctionalError::MissingProduct(s.name(x).to_string(), s.name(y).to_string()))
    })?;
    let (k, l) = (s.outcome_count(x), s.outcome_count(y));
    if k < 2 || l < 2 {
        return Ok(None);
    }
    let to_x = s.arrow_map(xy, x).expect("product refines its factors");
    let to_y = s.arrow_map(xy, y).expect("product refines its factors");
    let mut present = vec![vec![false; l]; k];
    for w in 0..s.outcome_count(xy) {
        present[to_x[w]][to_y[w]] = true;
    }
    let grid = Grid { present };
    let px_all = permutations(k);
    let py_all = permutations(l);
    let found = px_all.par_iter().find_map_first(|px| {
        py_all
            .iter()
            .find_map(|py| grid.path(px, py).map(|path| (px.clone(), py.clone(), path)))
    });
    Ok(found.map(|(px, py, path)| {
        let name = |v: VarId, order: &[usize]| -> Vec<String> {
            let labels = s.variable(v).outcomes().labels();
            order.iter().map(|&i| labels[i].clone()).collect()
        };
        NondegWitness {
            x_order: name(x, &px),
            y_order: name(y, &py),
            path: path.into_iter().map(|(a, b)| (a + 1, b + 1)).collect(),
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_is_nondegenerate() {
        let s = fixtures::two_variable_example();
        let w = nondegenerate_witness(&s, s.lookup("X1").unwrap(), s.lookup("X2").unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(w.path, vec![(1, 1)]);
        assert_eq!(w.x_order.len(), 2);
    }

    #[test]
    fn block_diagonal_is_degenerate() {
        let s = fixtures::block_diagonal();
        let got = nondegenerate_witness(&s, s.lookup("X").unwrap(), s.lookup("Y").unwrap()).unwrap();
        assert_eq!(got, None);
    }

    #[test]
    fn full_products_are_nondegenerate() {
        let s = fixtures::full_product(&[2, 2]);
        let (x1, x2) = (s.lookup("X1").unwrap(), s.lookup("X2").unwrap());
        assert!(nondegenerate_witness(&s, x1, x2).unwrap().is_some());
        let s = fixtures::full_product(&[2, 2, 2]);
        let (x12, x3) = (s.lookup("X1X2").unwrap(), s.lookup("X3").unwrap());
        let w = nondegenerate_witness(&s, x12, x3).unwrap().unwrap();
        assert_eq!(w.path, vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn missing_product_is_an_error() {
        let s = fixtures::two_component_example();
        let err = nondegenerate_witness(&s, s.lookup("X1a").unwrap(), s.lookup("X1b").unwrap());
        assert!(err.is_err());
    }

    #[test]
    fn permutation_order() {
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
        assert_eq!(permutations(4).len(), 24);
    }
}
