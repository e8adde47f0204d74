//! The polytope `P_{G,n}` of the `n`-leaf claw tree.
//!
//! Its vertices are the points `x({g1},...,{gn})` with `g1 + ... + gn = 0`.
//! The lattice `L_{G,n}` they generate is the set of integer vectors with
//! equal block sums and zero group-weighted sum; [`PolytopeModel`] also keeps
//! an explicit Hermite basis of it, computed from the vertex matrix, so points
//! can be moved into lattice coordinates.

mod point;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

pub use point::{AmbientPoint, GPresentation};

use crate::error::{Error, Result};
use crate::group::{GroupSpec, GroupTable};
use crate::lattice::HermiteBasis;
use crate::lp;

/// Rational weights on vertices: `(vertex index, weight)` with positive weights.
pub type Membership = Vec<(usize, BigRational)>;

#[derive(Clone, Debug)]
pub struct PolytopeModel {
    group: GroupSpec,
    table: GroupTable,
    leaves: usize,
    /// Vertex tuples, `leaves` element indices per vertex.
    tuples: Vec<u32>,
    lattice: HermiteBasis,
    dim: usize,
}

impl PolytopeModel {
    pub fn new(group: &GroupSpec, leaves: usize) -> Result<Self> {
        if leaves < 3 {
            return Err(Error::Domain(format!("claw trees need at least 3 leaves, got {leaves}")));
        }
        let n = group.order() as usize;
        let count = n
            .checked_pow(leaves as u32 - 1)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::Domain(format!("{group} with {leaves} leaves has too many vertices")))?;
        let table = group.table();
        let mut tuples = Vec::with_capacity(count * leaves);
        let mut head = vec![0u32; leaves - 1];
        for _ in 0..count {
            let s = head.iter().fold(0u32, |acc, &g| table.add(acc, g));
            tuples.extend_from_slice(&head);
            tuples.push(table.neg(s));
            for slot in head.iter_mut().rev() {
                *slot += 1;
                if (*slot as usize) < n {
                    break;
                }
                *slot = 0;
            }
        }
        let rows: Vec<Vec<i64>> = tuples
            .chunks(leaves)
            .map(|t| {
                let mut r = vec![0i64; n * leaves];
                for (j, &g) in t.iter().enumerate() {
                    r[j * n + g as usize] = 1;
                }
                r
            })
            .collect();
        let lattice = HermiteBasis::from_rows(n * leaves, &rows)?;
        let dim = lattice.rank() - 1;
        Ok(PolytopeModel { group: group.clone(), table, leaves, tuples, lattice, dim })
    }

    /// The tripod polytope `P_{G,3}`.
    pub fn tripod(group: &GroupSpec) -> Result<Self> {
        Self::new(group, 3)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    /// Affine dimension of the polytope (rank of the vertex matrix minus one).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice_basis(&self) -> &HermiteBasis {
        &self.lattice
    }

    pub fn vertex_count(&self) -> usize {
        self.tuples.len() / self.leaves
    }

    /// Element indices of vertex `i`, one per block.
    pub fn vertex_tuple(&self, i: usize) -> &[u32] {
        &self.tuples[i * self.leaves..(i + 1) * self.leaves]
    }

    /// Vertex index of a zero-sum tuple; order is lexicographic in the first
    /// `n - 1` entries.
    pub fn vertex_index(&self, tuple: &[u32]) -> Option<usize> {
        if tuple.len() != self.leaves {
            return None;
        }
        let s = tuple.iter().fold(0u32, |acc, &g| self.table.add(acc, g));
        if s != 0 {
            return None;
        }
        let n = self.order();
        Some(tuple[..self.leaves - 1].iter().fold(0usize, |acc, &g| acc * n + g as usize))
    }

    pub fn vertex(&self, i: usize) -> AmbientPoint {
        let n = self.order();
        let mut coords = vec![0u32; self.ambient_dim()];
        for (j, &g) in self.vertex_tuple(i).iter().enumerate() {
            coords[j * n + g as usize] = 1;
        }
        AmbientPoint::from_coords(n, coords).expect("well-formed vertex")
    }

    pub fn vertices(&self) -> Vec<AmbientPoint> {
        (0..self.vertex_count()).map(|i| self.vertex(i)).collect()
    }

    /// Ambient dimension `n * |G|`.
    pub fn ambient_dim(&self) -> usize {
        self.leaves * self.order()
    }

    /// Membership in `L_{G,n}`: equal block sums and zero weighted group sum.
    pub fn in_lattice(&self, x: &[i64]) -> Result<bool> {
        let n = self.order();
        if x.len() != self.ambient_dim() {
            return Err(Error::Domain(format!(
                "vector of length {} for ambient dimension {}",
                x.len(),
                self.ambient_dim()
            )));
        }
        let sums: Vec<i64> = x.chunks(n).map(|b| b.iter().sum()).collect();
        if sums.iter().any(|&s| s != sums[0]) {
            return Ok(false);
        }
        let mut total = 0u32;
        for b in x.chunks(n) {
            for (g, &c) in b.iter().enumerate() {
                let m = c.rem_euclid(n as i64) as u64;
                total = self.table.add(total, self.table.scale(m, g as u32));
            }
        }
        Ok(total == 0)
    }

    pub fn point_in_lattice(&self, x: &AmbientPoint) -> Result<bool> {
        self.in_lattice(&x.to_i64())
    }

    /// Integer coordinates of `x` in the Hermite basis of the vertex lattice.
    pub fn to_lattice_coords(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.lattice
            .coordinates(x)
            .ok_or_else(|| Error::NotInLattice("no integer solution in the vertex lattice basis".into()))
    }

    pub fn from_lattice_coords(&self, c: &[i64]) -> Result<Vec<i64>> {
        self.lattice.combine(c)
    }

    /// Vertices whose support lies inside the support of `x`.
    pub fn compatible_vertices(&self, x: &[u32]) -> Vec<usize> {
        let n = self.order();
        (0..self.vertex_count())
            .filter(|&i| {
                self.vertex_tuple(i)
                    .iter()
                    .enumerate()
                    .all(|(j, &g)| x[j * n + g as usize] > 0)
            })
            .collect()
    }

    /// Decides `x in kP` exactly: non-negative rational vertex weights summing
    /// to `k` that reproduce `x`. Returns the weights of a basic solution.
    pub fn in_dilation(&self, x: &AmbientPoint, k: u64) -> Result<Option<Membership>> {
        self.check_shape(x)?;
        if x.block_sums().iter().any(|&s| s != k) {
            return Ok(None);
        }
        if k == 0 {
            return Ok(Some(Vec::new()));
        }
        let n = self.order();
        let cols = self.compatible_vertices(x.coords());
        let rows_idx: Vec<usize> = (0..x.coords().len()).filter(|&i| x.coords()[i] > 0).collect();
        let mut a = vec![vec![0i64; cols.len()]; rows_idx.len()];
        let row_of: std::collections::HashMap<usize, usize> =
            rows_idx.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        for (c, &v) in cols.iter().enumerate() {
            for (j, &g) in self.vertex_tuple(v).iter().enumerate() {
                a[row_of[&(j * n + g as usize)]][c] = 1;
            }
        }
        let b: Vec<i64> = rows_idx.iter().map(|&i| x.coords()[i] as i64).collect();
        Ok(match lp::feasible(&a, &b) {
            lp::Feasibility::Feasible(sol) => Some(
                cols.into_iter()
                    .zip(sol)
                    .filter(|(_, w)| !w.is_zero())
                    .collect(),
            ),
            lp::Feasibility::Infeasible => None,
        })
    }

    /// Exact check that `weights` witness `x in kP`.
    pub fn check_membership(&self, x: &AmbientPoint, k: u64, weights: &[(usize, BigRational)]) -> bool {
        if self.check_shape(x).is_err() {
            return false;
        }
        let n = self.order();
        let mut acc = vec![BigRational::zero(); x.coords().len()];
        let mut total = BigRational::zero();
        for (v, w) in weights {
            if *v >= self.vertex_count() || w.is_negative() {
                return false;
            }
            total += w;
            for (j, &g) in self.vertex_tuple(*v).iter().enumerate() {
                acc[j * n + g as usize] += w;
            }
        }
        total == BigRational::from_integer(BigInt::from(k))
            && acc
                .iter()
                .zip(x.coords())
                .all(|(a, &c)| *a == BigRational::from_integer(BigInt::from(c)))
    }

    /// `x / 2` for an even lattice point over an odd-order group; the result
    /// is again a lattice point.
    pub fn halve(&self, x: &AmbientPoint) -> Result<AmbientPoint> {
        self.check_shape(x)?;
        if !self.group.is_odd() {
            return Err(Error::Precondition(format!(
                "halving needs g + g = 0 only for g = 0, which fails in {}",
                self.group
            )));
        }
        if x.coords().iter().any(|c| c % 2 != 0) {
            return Err(Error::Parity("point has an odd coordinate".into()));
        }
        if !self.point_in_lattice(x)? {
            return Err(Error::NotInLattice("only lattice points can be halved".into()));
        }
        let half = AmbientPoint::from_coords(x.order(), x.coords().iter().map(|c| c / 2).collect())?;
        debug_assert!(self.point_in_lattice(&half)?);
        Ok(half)
    }

    pub fn point(&self, p: &GPresentation) -> Result<AmbientPoint> {
        if p.leaves() != self.leaves {
            return Err(Error::Domain(format!(
                "presentation has {} blocks, model has {} leaves",
                p.leaves(),
                self.leaves
            )));
        }
        p.to_point(&self.group)
    }

    pub fn presentation(&self, x: &AmbientPoint) -> Result<GPresentation> {
        self.check_shape(x)?;
        GPresentation::from_point(&self.group, x)
    }

    fn check_shape(&self, x: &AmbientPoint) -> Result<()> {
        if x.order() != self.order() || x.leaves() != self.leaves {
            return Err(Error::Domain(format!(
                "point of shape {}x{} for a model of shape {}x{}",
                x.leaves(),
                x.order(),
                self.leaves,
                self.order()
            )));
        }
        Ok(())
    }

    /// Vertex matrix and lattice data for export.
    pub fn export(&self) -> VertexExport {
        VertexExport {
            group: self.group.clone(),
            leaves: self.leaves,
            vertex_count: self.vertex_count(),
            dim: self.dim,
            vertices: self.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            lattice_basis: self.lattice.rows().to_vec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexExport {
    pub group: GroupSpec,
    pub leaves: usize,
    pub vertex_count: usize,
    pub dim: usize,
    /// Rows are vertices in ambient coordinates.
    pub vertices: Vec<Vec<u32>>,
    pub lattice_basis: Vec<Vec<i64>>,
}

/// Vertices of `P_{G,n}` in lexicographic order of `(g1, ..., g_{n-1})`.
pub fn vertices(group: &GroupSpec, leaves: usize) -> Result<Vec<AmbientPoint>> {
    Ok(PolytopeModel::new(group, leaves)?.vertices())
}
