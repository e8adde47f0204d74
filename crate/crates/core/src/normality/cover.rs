//! Placing triangulations and the lattice points of fundamental
//! parallelepipeds.
//!
//! Every lattice point of the cone over `P` is a parallelepiped point of some
//! simplex plus a non-negative integer combination of that simplex's
//! vertices, so `P` is normal exactly when every parallelepiped point of
//! degree `k` splits into `k` vertices. Unimodular simplices contribute no
//! points at all.

use num_integer::Integer;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::lattice::{self, HermiteBasis};
use crate::polytope::{AmbientPoint, PolytopeModel};

const NONE: u32 = u32::MAX;

/// A maximal simplex given by a bitmask of vertex indices, with its
/// normalized volume (index of the sublattice spanned by its vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Simplex {
    pub mask: u128,
    pub volume: u64,
}

impl Simplex {
    pub fn vertices(&self) -> Vec<usize> {
        bits(self.mask).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    /// Number of maximal simplices.
    pub simplices: u64,
    /// Sum of normalized volumes, the normalized volume of `P`.
    pub volume: u64,
    /// Simplices of normalized volume greater than one.
    pub non_unimodular: Vec<Simplex>,
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

struct Facets {
    width: usize,
    mask: Vec<u128>,
    normal: Vec<i64>,
    /// `|det(F + q)| / (n_F . q)`, constant over `q`.
    scale: Vec<i128>,
    alive: Vec<bool>,
    free: Vec<u32>,
}

impl Facets {
    fn push(&mut self, mask: u128, normal: &[i64], scale: i128) -> u32 {
        if let Some(id) = self.free.pop() {
            let i = id as usize;
            self.mask[i] = mask;
            self.normal[i * self.width..(i + 1) * self.width].copy_from_slice(normal);
            self.scale[i] = scale;
            self.alive[i] = true;
            id
        } else {
            self.mask.push(mask);
            self.normal.extend_from_slice(normal);
            self.scale.push(scale);
            self.alive.push(true);
            (self.mask.len() - 1) as u32
        }
    }

    fn normal(&self, f: u32) -> &[i64] {
        let i = f as usize;
        &self.normal[i * self.width..(i + 1) * self.width]
    }

    fn kill(&mut self, f: u32) {
        self.alive[f as usize] = false;
        self.free.push(f);
    }
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

fn ridge_insert(map: &mut FxHashMap<u128, [u32; 2]>, ridge: u128, f: u32) {
    let e = map.entry(ridge).or_insert([NONE, NONE]);
    if e[0] == NONE {
        e[0] = f;
    } else {
        debug_assert_eq!(e[1], NONE, "ridge in more than two facets");
        e[1] = f;
    }
}

fn ridge_remove(map: &mut FxHashMap<u128, [u32; 2]>, ridge: u128, f: u32) {
    if let Some(e) = map.get_mut(&ridge) {
        if e[0] == f {
            e[0] = e[1];
        }
        e[1] = NONE;
        if e[0] == NONE {
            map.remove(&ridge);
        }
    }
}

/// Lattice coordinates of all vertices of the model.
pub fn lattice_vertices(model: &PolytopeModel) -> Result<Vec<Vec<i64>>> {
    (0..model.vertex_count())
        .map(|i| model.to_lattice_coords(&model.vertex(i).to_i64()))
        .collect()
}

/// Placing triangulation of `P`, adding vertices in index order. Only the
/// non-unimodular simplices are kept.
pub fn placing_triangulation(model: &PolytopeModel) -> Result<Triangulation> {
    place(&lattice_vertices(model)?)
}

/// Placing triangulation of the cone over points of a full-rank lattice
/// that all lie on one affine hyperplane, in the given order.
pub fn place(verts: &[Vec<i64>]) -> Result<Triangulation> {
    let m = verts.len();
    if m > 128 {
        return Err(Error::Domain(format!("{m} vertices exceed the 128-vertex mask width")));
    }
    let width = verts.first().map_or(0, |v| v.len());

    // initial simplex: greedily keep vertices that raise the rank
    let mut start: Vec<usize> = Vec::new();
    let mut basis = HermiteBasis::empty(width);
    for (i, v) in verts.iter().enumerate() {
        let mut rows: Vec<Vec<i64>> = basis.rows().to_vec();
        rows.push(v.clone());
        let next = HermiteBasis::from_rows(width, &rows)?;
        if next.rank() > basis.rank() {
            basis = next;
            start.push(i);
            if start.len() == width {
                break;
            }
        }
    }
    let start_rows: Vec<&[i64]> = start.iter().map(|&i| verts[i].as_slice()).collect();
    let det0 = lattice::determinant(&start_rows)?.unsigned_abs() as i128;

    let mut facets = Facets { width, mask: Vec::new(), normal: Vec::new(), scale: Vec::new(), alive: Vec::new(), free: Vec::new() };
    let mut ridges: FxHashMap<u128, [u32; 2]> = FxHashMap::default();
    let full: u128 = start.iter().fold(0, |a, &i| a | 1 << i);
    for &q in &start {
        let rows: Vec<&[i64]> = start.iter().filter(|&&i| i != q).map(|&i| verts[i].as_slice()).collect();
        let mut n = lattice::kernel_vector(width, &rows)?.expect("facet of a full simplex");
        let mut h = dot(&n, &verts[q]);
        if h < 0 {
            n.iter_mut().for_each(|x| *x = -*x);
            h = -h;
        }
        let f = facets.push(full & !(1 << q), &n, det0 / h);
        for r in bits(full & !(1 << q)) {
            ridge_insert(&mut ridges, full & !(1 << q) & !(1 << r), f);
        }
    }

    let mut out = Triangulation { simplices: 1, volume: det0 as u64, non_unimodular: Vec::new() };
    if det0 > 1 {
        out.non_unimodular.push(Simplex { mask: full, volume: det0 as u64 });
    }

    let mut side: Vec<i128> = Vec::new();
    let mut normal = vec![0i128; width];
    let mut narrow = vec![0i64; width];
    for p in (0..m).filter(|&i| full & (1 << i) == 0) {
        let pv = &verts[p];
        side.clear();
        side.extend((0..facets.mask.len()).map(|f| if facets.alive[f] { dot(facets.normal(f as u32), pv) } else { 0 }));
        let visible: Vec<u32> = (0..facets.mask.len() as u32)
            .filter(|&f| facets.alive[f as usize] && side[f as usize] < 0)
            .collect();
        if visible.is_empty() {
            return Err(Error::Structure(format!("vertex {p} lies inside the hull of earlier vertices")));
        }
        let mut created: Vec<(u128, u32)> = Vec::new();
        for &f in &visible {
            let fm = facets.mask[f as usize];
            let s_f = side[f as usize];
            let det = facets.scale[f as usize] * -s_f;
            out.simplices += 1;
            out.volume += det as u64;
            if det > 1 {
                out.non_unimodular.push(Simplex { mask: fm | 1 << p, volume: det as u64 });
            }
            for x in bits(fm) {
                let r = fm & !(1 << x);
                let pair = ridges[&r];
                let g = if pair[0] == f { pair[1] } else { pair[0] };
                if side[g as usize] < 0 {
                    continue;
                }
                // the pencil through the ridge contains the new facet's normal
                let s_g = side[g as usize];
                let (nf, ng) = (facets.normal(f), facets.normal(g));
                let mut gcd = 0i128;
                for j in 0..width {
                    let v = s_g
                        .checked_mul(nf[j] as i128)
                        .and_then(|a| s_f.checked_mul(ng[j] as i128).and_then(|b| a.checked_sub(b)))
                        .ok_or(Error::Overflow("facet normal"))?;
                    normal[j] = v;
                    gcd = gcd.gcd(&v);
                }
                for j in 0..width {
                    narrow[j] = i64::try_from(normal[j] / gcd).map_err(|_| Error::Overflow("facet normal"))?;
                }
                let h = dot(&narrow, &verts[x]);
                if h <= 0 || det % h != 0 {
                    return Err(Error::Structure("inconsistent facet orientation".into()));
                }
                let id = facets.push(r | 1 << p, &narrow, det / h);
                created.push((r, id));
            }
        }
        for &f in &visible {
            let fm = facets.mask[f as usize];
            for x in bits(fm) {
                ridge_remove(&mut ridges, fm & !(1 << x), f);
            }
            facets.kill(f);
        }
        for &(r, id) in &created {
            ridge_insert(&mut ridges, r, id);
            for y in bits(r) {
                ridge_insert(&mut ridges, (r & !(1 << y)) | 1 << p, id);
            }
        }
    }
    Ok(out)
}

/// Nonzero lattice points `sum mu_i v_i` with `0 <= mu_i < 1` of a simplex,
/// as ambient points. There are `volume - 1` of them.
pub fn parallelepiped_points(model: &PolytopeModel, verts: &[Vec<i64>], simplex: &Simplex) -> Result<Vec<AmbientPoint>> {
    let rows: Vec<&[i64]> = bits(simplex.mask).map(|i| verts[i].as_slice()).collect();
    let width = rows.len();
    let (d, w) = lattice::scaled_inverse(&rows)?;
    let dd = d.abs();
    let sign = d.signum();
    let hnf = HermiteBasis::from_rows(width, &rows)?;
    let diag: Vec<i64> = hnf.rows().iter().zip(hnf.pivots()).map(|(r, &p)| r[p]).collect();
    if diag.len() != width || diag.iter().map(|&h| h as i128).product::<i128>() != dd {
        return Err(Error::Structure("simplex does not have full rank".into()));
    }
    let mut out = Vec::new();
    let mut z = vec![0i64; width];
    loop {
        // advance the mixed-radix counter first, skipping z = 0
        let mut i = 0;
        while i < width {
            z[i] += 1;
            if z[i] < diag[i] {
                break;
            }
            z[i] = 0;
            i += 1;
        }
        if i == width {
            break;
        }
        let mut point = vec![0i128; width];
        for (k, row) in rows.iter().enumerate() {
            let c: i128 = (0..width).map(|j| z[j] as i128 * w[j][k]).sum::<i128>() * sign;
            let mu = c.rem_euclid(dd);
            if mu != 0 {
                for j in 0..width {
                    point[j] += mu * row[j] as i128;
                }
            }
        }
        let coords: Vec<i64> = point
            .iter()
            .map(|&v| {
                debug_assert_eq!(v % dd, 0);
                i64::try_from(v / dd).map_err(|_| Error::Overflow("parallelepiped point"))
            })
            .collect::<Result<_>>()?;
        let ambient = model.from_lattice_coords(&coords)?;
        let ambient = ambient
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| Error::Structure("parallelepiped point outside the cone".into())))
            .collect::<Result<Vec<u32>>>()?;
        out.push(AmbientPoint::from_coords(model.order(), ambient)?);
    }
    Ok(out)
}
