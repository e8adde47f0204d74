//! Integer linear algebra: row Hermite normal form, exact solves in a row
//! lattice, fraction-free determinants and kernels.
//!
//! All routines are exact. Intermediate values live in `i128` with checked
//! arithmetic; an overflow surfaces as [`Error::Overflow`] instead of a wrong
//! answer.

use num_integer::Integer;

use crate::error::{Error, Result};

/// A lattice given by a row basis in Hermite normal form: rows are in
/// echelon form, pivots are positive, and entries above each pivot are
/// reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteBasis {
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    cols: usize,
}

impl HermiteBasis {
    pub fn empty(cols: usize) -> Self {
        HermiteBasis { rows: Vec::new(), pivots: Vec::new(), cols }
    }

    /// The row HNF of the lattice spanned by `rows`.
    pub fn from_rows<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<Self> {
        let mut work: Vec<Vec<i128>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Domain(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            insert_row(&mut work, &mut pivots, r.iter().map(|&x| x as i128).collect())?;
        }
        reduce_above(&mut work, &pivots)?;
        let rows = work
            .into_iter()
            .map(|r| r.into_iter().map(narrow).collect::<Result<Vec<i64>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(HermiteBasis { rows, pivots, cols })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Integer coefficients `c` with `sum c_i * row_i = x`, if `x` is in the lattice.
    pub fn coordinates(&self, x: &[i64]) -> Option<Vec<i64>> {
        if x.len() != self.cols {
            return None;
        }
        let mut residual: Vec<i128> = x.iter().map(|&v| v as i128).collect();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        let mut next_col = 0;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if residual[next_col..p].iter().any(|&v| v != 0) {
                return None;
            }
            let piv = row[p] as i128;
            if residual[p] % piv != 0 {
                return None;
            }
            let c = residual[p] / piv;
            if c != 0 {
                for (r, &b) in residual[p..].iter_mut().zip(&row[p..]) {
                    *r -= c * b as i128;
                }
            }
            coeffs.push(i64::try_from(c).ok()?);
            next_col = p + 1;
        }
        if residual[next_col..].iter().any(|&v| v != 0) {
            return None;
        }
        Some(coeffs)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.coordinates(x).is_some()
    }

    /// `sum c_i * row_i`.
    pub fn combine(&self, coeffs: &[i64]) -> Result<Vec<i64>> {
        if coeffs.len() != self.rows.len() {
            return Err(Error::Domain(format!(
                "{} coordinates for a rank-{} lattice",
                coeffs.len(),
                self.rows.len()
            )));
        }
        let mut out = vec![0i128; self.cols];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            for (o, &b) in out.iter_mut().zip(row) {
                *o += c as i128 * b as i128;
            }
        }
        out.into_iter().map(narrow).collect()
    }
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow("hermite normal form"))
}

fn leading(v: &[i128]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

fn insert_row(rows: &mut Vec<Vec<i128>>, pivots: &mut Vec<usize>, mut v: Vec<i128>) -> Result<()> {
    let mut i = 0;
    while i < rows.len() {
        let lead = match leading(&v) {
            Some(l) => l,
            None => return Ok(()),
        };
        let p = pivots[i];
        if lead < p {
            break;
        }
        if lead == p {
            let a = rows[i][p];
            let b = v[p];
            let ext = a.extended_gcd(&b);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let (ag, bg) = (a / g, b / g);
            let mut new_row = vec![0i128; v.len()];
            let mut new_v = vec![0i128; v.len()];
            for c in p..v.len() {
                new_row[c] = checked_lin(x, rows[i][c], y, v[c])?;
                new_v[c] = checked_lin(ag, v[c], -bg, rows[i][c])?;
            }
            if new_row[p] < 0 {
                new_row.iter_mut().for_each(|e| *e = -*e);
            }
            rows[i] = new_row;
            v = new_v;
        }
        i += 1;
    }
    if let Some(lead) = leading(&v) {
        if v[lead] < 0 {
            v.iter_mut().for_each(|e| *e = -*e);
        }
        let pos = pivots.partition_point(|&p| p < lead);
        rows.insert(pos, v);
        pivots.insert(pos, lead);
    }
    Ok(())
}

fn checked_lin(a: i128, x: i128, b: i128, y: i128) -> Result<i128> {
    a.checked_mul(x)
        .and_then(|u| b.checked_mul(y).and_then(|w| u.checked_add(w)))
        .ok_or(Error::Overflow("hermite normal form"))
}

fn reduce_above(rows: &mut [Vec<i128>], pivots: &[usize]) -> Result<()> {
    for i in 0..rows.len() {
        let p = pivots[i];
        let piv = rows[i][p];
        for j in 0..i {
            let q = Integer::div_floor(&rows[j][p], &piv);
            if q != 0 {
                for c in p..rows[j].len() {
                    rows[j][c] = checked_lin(1, rows[j][c], -q, rows[i][c])?;
                }
            }
        }
    }
    Ok(())
}

/// Determinant of a square integer matrix (Bareiss elimination).
pub fn determinant<R: AsRef<[i64]>>(m: &[R]) -> Result<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.as_ref().iter().map(|&x| x as i128).collect())
        .collect();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::Domain("determinant of a non-square matrix".into()));
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return Ok(0);
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k]
                    .checked_mul(a[i][j])
                    .and_then(|u| a[i][k].checked_mul(a[k][j]).and_then(|w| u.checked_sub(w)))
                    .ok_or(Error::Overflow("determinant"))?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

/// Rank of an integer matrix.
pub fn rank<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<usize> {
    Ok(HermiteBasis::from_rows(cols, rows)?.rank())
}

/// Primitive integer generator of the kernel `{z : M z = 0}` of a matrix
/// with `cols` columns and rank `cols - 1`. Returns `None` if the kernel is
/// not one-dimensional.
pub fn kernel_vector<R: AsRef<[i64]>>(cols: usize, rows: &[R]) -> Result<Option<Vec<i64>>> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.as_ref().iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut prev = 1i128;
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][c];
        for i in 0..a.len() {
            if i == r {
                continue;
            }
            let f = a[i][c];
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let num = piv
                    .checked_mul(a[i][j])
                    .and_then(|u| f.checked_mul(a[r][j]).and_then(|w| u.checked_sub(w)))
                    .ok_or(Error::Overflow("kernel"))?;
                a[i][j] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != cols {
        return Ok(None);
    }
    // every pivot entry now equals `prev`; the reduced system is prev*z_p + a[i][f]*z_f = 0
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("one free column");
    let mut z = vec![0i128; cols];
    z[free] = prev;
    for (i, &p) in pivots.iter().enumerate() {
        z[p] = -a[i][free];
    }
    let g = z.iter().fold(0i128, |acc, &v| acc.gcd(&v));
    let out = z
        .into_iter()
        .map(|v| i64::try_from(v / g).map_err(|_| Error::Overflow("kernel")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(out))
}

/// `(d, W)` with `W = d * M^{-1}` integral and `|d| = |det M|`, by
/// fraction-free Gauss-Jordan elimination on `[M | I]`. Errors on a singular
/// matrix.
pub fn scaled_inverse<R: AsRef<[i64]>>(m: &[R]) -> Result<(i128, Vec<Vec<i128>>)> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<i128> = r.as_ref().iter().map(|&x| x as i128).collect();
            row.resize(2 * n, 0);
            row[n + i] = 1;
            row
        })
        .collect();
    if m.iter().any(|r| r.as_ref().len() != n) {
        return Err(Error::Domain("inverse of a non-square matrix".into()));
    }
    let mut prev = 1i128;
    for c in 0..n {
        let p = (c..n)
            .find(|&i| a[i][c] != 0)
            .ok_or_else(|| Error::Domain("singular matrix".into()))?;
        a.swap(p, c);
        let piv = a[c][c];
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = a[i][c];
            for j in 0..2 * n {
                if j == c {
                    continue;
                }
                let num = piv
                    .checked_mul(a[i][j])
                    .and_then(|u| f.checked_mul(a[c][j]).and_then(|w| u.checked_sub(w)))
                    .ok_or(Error::Overflow("inverse"))?;
                a[i][j] = num / prev;
            }
            a[i][c] = 0;
        }
        prev = piv;
    }
    Ok((prev, a.into_iter().map(|r| r[n..].to_vec()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_inverse_times_matrix_is_scalar() {
        let m = vec![vec![2i64, 1, 0], vec![0, 3, 1], vec![1, 0, 4]];
        let (d, w) = scaled_inverse(&m).unwrap();
        assert_eq!(d.abs(), determinant(&m).unwrap().abs());
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| m[i][k] as i128 * w[k][j]).sum();
                assert_eq!(s, if i == j { d } else { 0 });
            }
        }
    }

    #[test]
    fn hnf_of_small_matrix() {
        let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let h = HermiteBasis::from_rows(3, &rows).unwrap();
        assert_eq!(h.rank(), 3);
        // |det| is an invariant of the lattice
        let det = determinant(h.rows()).unwrap().abs();
        assert_eq!(det, determinant(&rows).unwrap().abs());
        for r in &rows {
            assert!(h.contains(r));
        }
        for (i, r) in h.rows().iter().enumerate() {
            let p = h.pivots()[i];
            assert!(r[p] > 0);
            for prior in &h.rows()[..i] {
                assert!(prior[p] >= 0 && prior[p] < r[p]);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let rows = vec![vec![1, 1, 0, 2], vec![0, 2, 2, 0], vec![1, 3, 2, 2]];
        let h = HermiteBasis::from_rows(4, &rows).unwrap();
        assert_eq!(h.rank(), 2);
        let x = vec![3, 7, 4, 6];
        let c = h.coordinates(&x).unwrap();
        assert_eq!(h.combine(&c).unwrap(), x);
        assert!(h.coordinates(&[0, 1, 0, 0]).is_none());
        assert!(h.coordinates(&[1, 2, 1, 2]).is_none(), "half of a lattice vector");
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let rows = vec![vec![1, 2, 3], vec![4, 5, 6]];
        let z = kernel_vector(3, &rows).unwrap().unwrap();
        assert_eq!(z.iter().map(|v| v.abs()).collect::<Vec<_>>(), vec![1, 2, 1]);
        for r in &rows {
            assert_eq!(r.iter().zip(&z).map(|(a, b)| a * b).sum::<i64>(), 0);
        }
        assert!(kernel_vector(3, &[vec![1, 0, 0]]).unwrap().is_none());
    }

    #[test]
    fn determinant_signs() {
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(determinant(&[vec![2, 0, 0], vec![0, 3, 0], vec![1, 1, 1]]).unwrap(), 6);
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]).unwrap(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn span_membership_matches_combination(
                rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 1..6),
                coeffs in prop::collection::vec(-4i64..5, 6),
            ) {
                let h = HermiteBasis::from_rows(5, &rows).unwrap();
                let mut x = vec![0i64; 5];
                for (r, c) in rows.iter().zip(&coeffs) {
                    for (xi, ri) in x.iter_mut().zip(r) { *xi += c * ri; }
                }
                let c = h.coordinates(&x);
                prop_assert!(c.is_some());
                prop_assert_eq!(h.combine(&c.unwrap()).unwrap(), x);
            }

            #[test]
            fn kernel_is_orthogonal(rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 4)) {
                if let Some(z) = kernel_vector(5, &rows).unwrap() {
                    for r in &rows {
                        prop_assert_eq!(r.iter().zip(&z).map(|(a, b)| a * b).sum::<i64>(), 0);
                    }
                    prop_assert!(z.iter().any(|&v| v != 0));
                }
            }
        }
    }
}
