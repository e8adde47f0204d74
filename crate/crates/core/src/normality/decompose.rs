use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{AmbientPoint, GPresentation, PolytopeModel};

/// `k` vertex indices (with repetition, sorted) whose vertices sum to a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionWitness {
    pub vertex_indices: Vec<usize>,
}

impl DecompositionWitness {
    /// Exact check that the indexed vertices sum to `x`.
    pub fn sums_to(&self, model: &PolytopeModel, x: &AmbientPoint) -> bool {
        let n = model.order();
        let mut acc = vec![0u32; model.ambient_dim()];
        for &v in &self.vertex_indices {
            if v >= model.vertex_count() {
                return false;
            }
            for (j, &g) in model.vertex_tuple(v).iter().enumerate() {
                acc[j * n + g as usize] += 1;
            }
        }
        acc == x.coords()
    }
}

/// Result of a decomposition search together with its search-tree size.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub witness: Option<DecompositionWitness>,
    pub nodes: u64,
}

/// Writes `x` (of degree `k`) as a sum of `k` vertices, or proves that no
/// such sum exists.
pub fn decompose(model: &PolytopeModel, x: &GPresentation, k: u64) -> Result<Option<DecompositionWitness>> {
    Ok(decompose_point(model, &model.point(x)?, k)?.witness)
}

/// Exhaustive backtracking. Each step peels one vertex through the block-1
/// element of largest remaining multiplicity (ties to the smaller index);
/// failed remainders are memoized, and for tripods a transport bound prunes
/// remainders whose block marginals cannot be routed through zero-sum triples.
pub fn decompose_point(model: &PolytopeModel, x: &AmbientPoint, k: u64) -> Result<Decomposition> {
    if x.order() != model.order() || x.leaves() != model.leaves() {
        return Err(Error::Domain("point shape does not match the model".into()));
    }
    if let Some(bad) = x.block_sums().into_iter().find(|&s| s != k) {
        return Err(Error::Domain(format!("block sum {bad} differs from the degree {k}")));
    }
    let mut search = Search { model, n: model.order(), failed: FxHashSet::default(), nodes: 0, tuple: vec![0; model.leaves()] };
    let mut rest = x.coords().to_vec();
    let mut chosen = Vec::with_capacity(k as usize);
    let witness = if search.run(&mut rest, k, &mut chosen) {
        chosen.sort_unstable();
        let w = DecompositionWitness { vertex_indices: chosen };
        assert!(w.sums_to(model, x), "decomposition does not sum to its target");
        Some(w)
    } else {
        None
    };
    Ok(Decomposition { witness, nodes: search.nodes })
}

struct Search<'a> {
    model: &'a PolytopeModel,
    n: usize,
    failed: FxHashSet<Vec<u32>>,
    nodes: u64,
    tuple: Vec<u32>,
}

impl Search<'_> {
    fn run(&mut self, x: &mut Vec<u32>, k: u64, chosen: &mut Vec<usize>) -> bool {
        if k == 0 {
            return true;
        }
        self.nodes += 1;
        if self.failed.contains(x.as_slice()) {
            return false;
        }
        if self.model.leaves() == 3 && !tripod_routable(self.model, x) {
            self.failed.insert(x.clone());
            return false;
        }
        let n = self.n;
        let mut g = 0;
        for h in 1..n {
            if x[h] > x[g] {
                g = h;
            }
        }
        self.tuple[0] = g as u32;
        if self.extend(1, g as u32, x, k, chosen) {
            return true;
        }
        self.failed.insert(x.clone());
        false
    }

    /// Fills tuple positions `j..` given the running sum `acc` of earlier ones.
    fn extend(&mut self, j: usize, acc: u32, x: &mut Vec<u32>, k: u64, chosen: &mut Vec<usize>) -> bool {
        let n = self.n;
        let table = self.model.table();
        let leaves = self.model.leaves();
        if j == leaves - 1 {
            let last = table.neg(acc);
            self.tuple[j] = last;
            if x[j * n + last as usize] == 0 {
                return false;
            }
            for (b, &e) in self.tuple.iter().enumerate() {
                x[b * n + e as usize] -= 1;
            }
            let v = self.model.vertex_index(&self.tuple).expect("zero-sum tuple");
            chosen.push(v);
            let saved = self.tuple.clone();
            if self.run(x, k - 1, chosen) {
                return true;
            }
            chosen.pop();
            self.tuple = saved;
            for (b, &e) in self.tuple.iter().enumerate() {
                x[b * n + e as usize] += 1;
            }
            return false;
        }
        for h in 0..n as u32 {
            if x[j * n + h as usize] == 0 {
                continue;
            }
            self.tuple[j] = h;
            if self.extend(j + 1, table.add(acc, h), x, k, chosen) {
                return true;
            }
        }
        false
    }
}

/// Necessary condition for a tripod point to be a non-negative combination
/// of vertices: the mass on `g` in one block must fit through the pairs
/// `(h, -g-h)` available in the other two.
pub(crate) fn tripod_routable(model: &PolytopeModel, x: &[u32]) -> bool {
    let n = model.order();
    let table = model.table();
    for (p, a, b) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
        for g in 0..n {
            let need = x[p * n + g];
            if need == 0 {
                continue;
            }
            let mut cap = 0;
            for h in 0..n {
                let ah = x[a * n + h];
                if ah == 0 {
                    continue;
                }
                let c = table.neg(table.add(g as u32, h as u32)) as usize;
                cap += ah.min(x[b * n + c]);
                if cap >= need {
                    break;
                }
            }
            if cap < need {
                return false;
            }
        }
    }
    true
}
