//! Lattice points of `kP` with block sums `k`, block by block.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::decompose::{decompose_point, tripod_routable};
use super::symmetry::{cmp_blocks, SymmetryGroup};
use crate::error::Result;
use crate::polytope::{AmbientPoint, Membership, PolytopeModel};

/// All compositions of `k` into `|G|` parts, sorted in block order, with the
/// data the enumerator needs about each.
pub(crate) struct Compositions {
    order: usize,
    flat: Vec<u32>,
    weight: Vec<u32>,
    /// Position of the block's canonical form (over translations and any
    /// enabled automorphisms).
    canon: Vec<u32>,
    /// Whether the block is minimal among its own translates.
    translation_min: Vec<bool>,
    by_weight: Vec<Vec<u32>>,
}

impl Compositions {
    pub(crate) fn new(model: &PolytopeModel, sym: &SymmetryGroup, k: u64) -> Self {
        let n = model.order();
        let table = model.table();
        let mut all: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, all: &mut Vec<Vec<u32>>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                all.push(cur.clone());
                return;
            }
            for c in 0..=left {
                cur[i] = c;
                rec(i + 1, left - c, cur, all);
            }
        }
        rec(0, k as u32, &mut cur, &mut all);
        all.sort_by(|a, b| cmp_blocks(a, b));
        let index: FxHashMap<&[u32], u32> = all.iter().enumerate().map(|(i, c)| (c.as_slice(), i as u32)).collect();
        let mut weight = Vec::with_capacity(all.len());
        let mut canon = Vec::with_capacity(all.len());
        let mut translation_min = Vec::with_capacity(all.len());
        let mut by_weight = vec![Vec::new(); n];
        let mut tmp = vec![0u32; n];
        for (i, c) in all.iter().enumerate() {
            let w = c.iter().enumerate().fold(0u32, |acc, (g, &m)| table.add(acc, table.scale(m as u64, g as u32)));
            weight.push(w);
            by_weight[w as usize].push(i as u32);
            canon.push(index[sym.canonical_block(c).as_slice()]);
            let mut minimal = true;
            for t in 1..n as u32 {
                super::symmetry::shift_block(table, c, t, &mut tmp);
                if cmp_blocks(&tmp, c) == std::cmp::Ordering::Less {
                    minimal = false;
                    break;
                }
            }
            translation_min.push(minimal);
        }
        let flat = all.concat();
        Compositions { order: n, flat, weight, canon, translation_min, by_weight }
    }

    pub(crate) fn len(&self) -> usize {
        self.weight.len()
    }

    fn get(&self, i: u32) -> &[u32] {
        &self.flat[i as usize * self.order..(i as usize + 1) * self.order]
    }

    /// Number of first blocks a canonical point can start with.
    pub(crate) fn heads(&self) -> Vec<u32> {
        (0..self.len() as u32).filter(|&i| self.canon[i as usize] == i).collect()
    }
}

/// What a candidate point turned out to be.
#[derive(Clone, Debug)]
pub(crate) enum Class {
    Decomposable,
    /// In `kP` and the lattice but not a sum of `k` vertices.
    Witness(Membership),
    Outside,
}

pub(crate) fn classify(model: &PolytopeModel, x: &AmbientPoint, k: u64) -> Result<(Class, u64)> {
    let d = decompose_point(model, x, k)?;
    if d.witness.is_some() {
        return Ok((Class::Decomposable, d.nodes));
    }
    Ok(match model.in_dilation(x, k)? {
        Some(w) => (Class::Witness(w), d.nodes),
        None => (Class::Outside, d.nodes),
    })
}

/// Outcome of one shard (all canonical points with a fixed first block).
#[derive(Clone, Debug, Default)]
pub(crate) struct Shard {
    /// Canonical lattice points of `kP` visited, up to and including a witness.
    pub members: u64,
    pub nodes: u64,
    pub witness: Option<(AmbientPoint, Membership)>,
    pub points: Vec<AmbientPoint>,
    pub aborted: bool,
}

/// Scans the canonical points of degree `k`. With `stop_at_witness`, shards
/// after the first shard holding a witness are abandoned, which leaves the
/// merged result independent of scheduling.
pub(crate) fn scan(
    model: &PolytopeModel,
    sym: &SymmetryGroup,
    comps: &Compositions,
    k: u64,
    collect: bool,
    stop_at_witness: bool,
) -> Result<Vec<Shard>> {
    let heads = comps.heads();
    let first_fail = AtomicUsize::new(usize::MAX);
    let shards: Vec<Result<Shard>> = heads
        .par_iter()
        .enumerate()
        .map(|(si, &a)| {
            if stop_at_witness && si > first_fail.load(AtomicOrdering::Relaxed) {
                return Ok(Shard { aborted: true, ..Shard::default() });
            }
            let shard = scan_head(model, sym, comps, k, a, collect, stop_at_witness, || {
                stop_at_witness && si > first_fail.load(AtomicOrdering::Relaxed)
            })?;
            if shard.witness.is_some() {
                first_fail.fetch_min(si, AtomicOrdering::Relaxed);
            }
            Ok(shard)
        })
        .collect();
    shards.into_iter().collect()
}

#[allow(clippy::too_many_arguments)]
fn scan_head(
    model: &PolytopeModel,
    sym: &SymmetryGroup,
    comps: &Compositions,
    k: u64,
    a: u32,
    collect: bool,
    stop_at_witness: bool,
    cancelled: impl Fn() -> bool,
) -> Result<Shard> {
    let n = comps.order;
    let leaves = model.leaves();
    let table = model.table();
    let mut shard = Shard::default();
    let mut coords = vec![0u32; n * leaves];
    coords[..n].copy_from_slice(comps.get(a));
    // middle blocks are translation-minimal, never below the head in canonical form
    let middle: Vec<u32> = (a..comps.len() as u32)
        .filter(|&b| comps.translation_min[b as usize] && comps.canon[b as usize] >= a)
        .collect();
    let mut idx = vec![0usize; leaves.saturating_sub(2)];
    let mut counter = 0u64;
    loop {
        let mut w = comps.weight[a as usize];
        for (p, &i) in idx.iter().enumerate() {
            let b = middle[i];
            coords[(p + 1) * n..(p + 2) * n].copy_from_slice(comps.get(b));
            w = table.add(w, comps.weight[b as usize]);
        }
        for &c in &comps.by_weight[table.neg(w) as usize] {
            if comps.canon[c as usize] < a {
                continue;
            }
            counter += 1;
            if counter % 4096 == 0 && cancelled() {
                shard.aborted = true;
                return Ok(shard);
            }
            coords[(leaves - 1) * n..].copy_from_slice(comps.get(c));
            if leaves == 3 && !tripod_routable(model, &coords) {
                continue;
            }
            let x = AmbientPoint::from_coords(n, coords.clone())?;
            if !sym.is_canonical(&x) {
                continue;
            }
            let (class, nodes) = classify(model, &x, k)?;
            shard.nodes += nodes;
            match class {
                Class::Outside => continue,
                Class::Decomposable => {
                    shard.members += 1;
                    if collect {
                        shard.points.push(x);
                    }
                }
                Class::Witness(w) => {
                    shard.members += 1;
                    if collect {
                        shard.points.push(x.clone());
                    }
                    if shard.witness.is_none() {
                        shard.witness = Some((x, w));
                    }
                    if stop_at_witness {
                        return Ok(shard);
                    }
                }
            }
        }
        // odometer over the middle blocks, last position fastest
        let mut p = idx.len();
        loop {
            if p == 0 {
                return Ok(shard);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < middle.len() {
                break;
            }
            idx[p] = 0;
        }
    }
}

/// Every lattice point of `kP` with block sums `k`, without symmetry
/// reduction, in lexicographic order. Brute force over all block choices.
pub(crate) fn all_points(model: &PolytopeModel, sym: &SymmetryGroup, k: u64) -> Result<Vec<AmbientPoint>> {
    let comps = Compositions::new(model, sym, k);
    let n = comps.order;
    let leaves = model.leaves();
    let table = model.table();
    let mut out = Vec::new();
    let m = comps.len();
    let mut idx = vec![0usize; leaves - 1];
    let mut coords = vec![0u32; n * leaves];
    loop {
        let mut w = 0u32;
        for (p, &i) in idx.iter().enumerate() {
            coords[p * n..(p + 1) * n].copy_from_slice(comps.get(i as u32));
            w = table.add(w, comps.weight[i]);
        }
        for &c in &comps.by_weight[table.neg(w) as usize] {
            coords[(leaves - 1) * n..].copy_from_slice(comps.get(c));
            let x = AmbientPoint::from_coords(n, coords.clone())?;
            if !matches!(classify(model, &x, k)?.0, Class::Outside) {
                out.push(x);
            }
        }
        let mut p = idx.len();
        loop {
            if p == 0 {
                return Ok(out);
            }
            p -= 1;
            idx[p] += 1;
            if idx[p] < m {
                break;
            }
            idx[p] = 0;
        }
    }
}
