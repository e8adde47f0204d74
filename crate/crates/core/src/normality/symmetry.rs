//! Symmetries of `P_{G,n}` and canonical orbit representatives.
//!
//! A symmetry `(pi, phi, t)` sends block `i` of a point to
//! `phi(block pi(i)) + t_i`, where `pi` permutes blocks, `phi` is a group
//! automorphism (the identity unless automorphisms are enabled) and `t` is a
//! translation vector with zero sum. Each one permutes the vertices, so it
//! preserves the lattice, every dilation and decomposability.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::polytope::{AmbientPoint, PolytopeModel};

/// Compares two blocks (count vectors of equal total) in the order of their
/// sorted element lists: more copies of a smaller element come first.
pub fn cmp_blocks(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

/// Lexicographic order of whole points, block by block.
pub fn cmp_points(a: &[u32], b: &[u32], order: usize) -> Ordering {
    for (x, y) in a.chunks(order).zip(b.chunks(order)) {
        match cmp_blocks(x, y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub perm: Vec<usize>,
    /// Index into [`SymmetryGroup::automorphisms`]; 0 is the identity.
    pub automorphism: usize,
    pub shift: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    table: GroupTable,
    leaves: usize,
    autos: Vec<Vec<u32>>,
    perms: Vec<Vec<usize>>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for j in i..cur.len() {
            cur.swap(i, j);
            rec(i + 1, cur, out);
            cur.swap(i, j);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Translates a block: `out[g + t] = c[g]`.
pub(crate) fn shift_block(table: &GroupTable, c: &[u32], t: u32, out: &mut [u32]) {
    for (g, &m) in c.iter().enumerate() {
        out[table.add(g as u32, t) as usize] = m;
    }
}

fn map_block(phi: &[u32], c: &[u32], out: &mut [u32]) {
    for (g, &m) in c.iter().enumerate() {
        out[phi[g] as usize] = m;
    }
}

impl SymmetryGroup {
    /// Translations and block permutations; with `automorphisms`, also all
    /// group automorphisms (refused if there are more than `10^5`).
    pub fn new(model: &PolytopeModel, automorphisms: bool) -> Result<Self> {
        let n = model.order();
        let autos = if automorphisms {
            let mut a = model
                .group()
                .automorphisms(100_000)
                .ok_or_else(|| Error::Domain(format!("{} has too many automorphisms", model.group())))?;
            let id: Vec<u32> = (0..n as u32).collect();
            a.retain(|p| *p != id);
            a.insert(0, id);
            a
        } else {
            vec![(0..n as u32).collect()]
        };
        Ok(SymmetryGroup { table: model.table().clone(), leaves: model.leaves(), autos, perms: permutations(model.leaves()) })
    }

    pub fn automorphisms(&self) -> &[Vec<u32>] {
        &self.autos
    }

    /// Number of group elements `n! * |Aut| * |G|^(n-1)`.
    pub fn size(&self) -> u64 {
        let n = self.table.order() as u64;
        self.perms.len() as u64 * self.autos.len() as u64 * n.pow(self.leaves as u32 - 1)
    }

    pub fn apply(&self, s: &Symmetry, x: &AmbientPoint) -> AmbientPoint {
        let n = self.table.order();
        let mut out = vec![0u32; x.coords().len()];
        let mut tmp = vec![0u32; n];
        for i in 0..self.leaves {
            map_block(&self.autos[s.automorphism], x.block(s.perm[i]), &mut tmp);
            shift_block(&self.table, &tmp, s.shift[i], &mut out[i * n..(i + 1) * n]);
        }
        AmbientPoint::from_coords(n, out).expect("same shape")
    }

    /// Image of a vertex tuple.
    pub fn apply_tuple(&self, s: &Symmetry, t: &[u32]) -> Vec<u32> {
        let phi = &self.autos[s.automorphism];
        (0..self.leaves).map(|i| self.table.add(phi[t[s.perm[i]] as usize], s.shift[i])).collect()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Symmetry {
        let n = self.table.order() as u32;
        let mut shift: Vec<u32> = (0..self.leaves - 1).map(|_| rng.gen_range(0..n)).collect();
        let s = shift.iter().fold(0, |a, &t| self.table.add(a, t));
        shift.push(self.table.neg(s));
        Symmetry {
            perm: self.perms[rng.gen_range(0..self.perms.len())].clone(),
            automorphism: rng.gen_range(0..self.autos.len()),
            shift,
        }
    }

    /// All translations of `c` that are minimal in block order, as
    /// `(minimal block, translations attaining it)`.
    fn min_translates(&self, c: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let n = self.table.order();
        let mut best = vec![0u32; n];
        let mut ties = Vec::new();
        let mut tmp = vec![0u32; n];
        for t in 0..n as u32 {
            shift_block(&self.table, c, t, &mut tmp);
            match if ties.is_empty() { Ordering::Less } else { cmp_blocks(&tmp, &best) } {
                Ordering::Less => {
                    best.copy_from_slice(&tmp);
                    ties.clear();
                    ties.push(t);
                }
                Ordering::Equal => ties.push(t),
                Ordering::Greater => {}
            }
        }
        (best, ties)
    }

    /// Block-wise canonical form of a single block: minimum over
    /// automorphisms and translations.
    pub fn canonical_block(&self, c: &[u32]) -> Vec<u32> {
        let n = self.table.order();
        let mut tmp = vec![0u32; n];
        let mut best: Option<Vec<u32>> = None;
        for phi in &self.autos {
            map_block(phi, c, &mut tmp);
            let (m, _) = self.min_translates(&tmp);
            if best.as_ref().is_none_or(|b| cmp_blocks(&m, b) == Ordering::Less) {
                best = Some(m);
            }
        }
        best.expect("at least the identity")
    }

    /// The lexicographically smallest point in the orbit of `x`.
    pub fn canonical(&self, x: &AmbientPoint) -> AmbientPoint {
        let n = self.table.order();
        let l = self.leaves;
        let mut best: Option<Vec<u32>> = None;
        let mut mapped = vec![0u32; n * l];
        let mut cand = vec![0u32; n * l];
        for phi in &self.autos {
            for j in 0..l {
                map_block(phi, x.block(j), &mut mapped[j * n..(j + 1) * n]);
            }
            let mins: Vec<(Vec<u32>, Vec<u32>)> =
                (0..l).map(|j| self.min_translates(&mapped[j * n..(j + 1) * n])).collect();
            for perm in &self.perms {
                let head = &perm[..l - 1];
                if let Some(b) = &best {
                    let mut prefix = Ordering::Equal;
                    for (i, &j) in head.iter().enumerate() {
                        prefix = cmp_blocks(&mins[j].0, &b[i * n..(i + 1) * n]);
                        if prefix != Ordering::Equal {
                            break;
                        }
                    }
                    if prefix == Ordering::Greater {
                        continue;
                    }
                }
                for (i, &j) in head.iter().enumerate() {
                    cand[i * n..(i + 1) * n].copy_from_slice(&mins[j].0);
                }
                // the last block's translation is forced by the zero-sum condition
                let last = perm[l - 1];
                let mut choice = vec![0usize; l - 1];
                loop {
                    let s = head.iter().zip(&choice).fold(0u32, |a, (&j, &c)| self.table.add(a, mins[j].1[c]));
                    shift_block(&self.table, &mapped[last * n..(last + 1) * n], self.table.neg(s), &mut cand[(l - 1) * n..]);
                    if best.as_ref().is_none_or(|b| cmp_points(&cand, b, n) == Ordering::Less) {
                        best = Some(cand.clone());
                    }
                    let mut i = 0;
                    while i < l - 1 {
                        choice[i] += 1;
                        if choice[i] < mins[head[i]].1.len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == l - 1 {
                        break;
                    }
                }
            }
        }
        AmbientPoint::from_coords(n, best.expect("nonempty group")).expect("same shape")
    }

    pub fn is_canonical(&self, x: &AmbientPoint) -> bool {
        self.canonical(x) == *x
    }

    /// The full orbit of `x`. Intended for small groups.
    pub fn orbit(&self, x: &AmbientPoint) -> BTreeSet<AmbientPoint> {
        let n = self.table.order() as u32;
        let mut out = BTreeSet::new();
        let mut shift = vec![0u32; self.leaves];
        loop {
            let s = shift[..self.leaves - 1].iter().fold(0, |a, &t| self.table.add(a, t));
            shift[self.leaves - 1] = self.table.neg(s);
            for perm in &self.perms {
                for a in 0..self.autos.len() {
                    out.insert(self.apply(&Symmetry { perm: perm.clone(), automorphism: a, shift: shift.clone() }, x));
                }
            }
            let mut i = 0;
            while i < self.leaves - 1 {
                shift[i] += 1;
                if shift[i] < n {
                    break;
                }
                shift[i] = 0;
                i += 1;
            }
            if i == self.leaves - 1 {
                break;
            }
        }
        out
    }
}
