//! Finite abelian groups presented as products of cyclic factors.
//!
//! A [`GroupSpec`] is an explicit factor list, so `Z9 x Z3` and `Z27` are
//! different specs even though nothing here classifies groups up to
//! isomorphism. Elements are residue vectors; every element also has a dense
//! index in `0..order` (lexicographic residue order, first factor most
//! significant) which the polytope code uses for its coordinates.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite abelian group `Z_{o1} x ... x Z_{or}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct GroupSpec {
    orders: Vec<u64>,
    order: u64,
}

/// An element of a [`GroupSpec`], stored as canonical residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    residues: Vec<u64>,
}

impl GroupSpec {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidSpec("group needs at least one cyclic factor".into()));
        }
        if let Some(bad) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::InvalidSpec(format!("cyclic factor of order {bad} (must be >= 2)")));
        }
        let order = orders
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .ok_or_else(|| Error::InvalidSpec("group order overflows u64".into()))?;
        Ok(GroupSpec { orders: orders.to_vec(), order })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_odd(&self) -> bool {
        self.order % 2 == 1
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.orders.len()] }
    }

    /// Builds an element, reducing each residue modulo its factor.
    pub fn element(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.orders.len() {
            return Err(Error::Domain(format!(
                "element has {} residues, group has {} factors",
                residues.len(),
                self.orders.len()
            )));
        }
        let residues = residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &o)| r.rem_euclid(o as i64) as u64)
            .collect();
        Ok(GroupElement { residues })
    }

    /// Accepts an element only if it is already in canonical form for this group.
    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if a.residues.len() != self.orders.len()
            || a.residues.iter().zip(&self.orders).any(|(&r, &o)| r >= o)
        {
            return Err(Error::Domain(format!("{a} is not an element of {self}")));
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &o)| (o - r) % o)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn scale(&self, k: i64, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &o)| {
                let m = (k as i128).rem_euclid(o as i128) as u128;
                ((m * r as u128) % o as u128) as u64
            })
            .collect();
        Ok(GroupElement { residues })
    }

    /// Multiplication by `l` is a bijection on the group iff `gcd(l, |G|) = 1`.
    pub fn is_divisible(&self, l: i64) -> bool {
        (l.unsigned_abs()).gcd(&self.order) == 1
    }

    /// The unique `h` with `l * h = a`.
    pub fn divide(&self, a: &GroupElement, l: i64) -> Result<GroupElement> {
        self.check(a)?;
        if !self.is_divisible(l) {
            return Err(Error::Divisibility(format!("{self} is not {l}-divisible")));
        }
        let residues = a
            .residues
            .iter()
            .zip(&self.orders)
            .map(|(&r, &o)| {
                let inv = mod_inverse(l, o).expect("gcd checked against the group order");
                ((inv as u128 * r as u128) % o as u128) as u64
            })
            .collect();
        Ok(GroupElement { residues })
    }

    /// All elements in lexicographic residue order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order).map(|i| self.element_at(i as usize)).collect()
    }

    /// Dense index of an element (lexicographic, first factor most significant).
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.residues
            .iter()
            .zip(&self.orders)
            .fold(0u64, |acc, (&r, &o)| acc * o + r) as usize
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut residues = vec![0u64; self.orders.len()];
        for (slot, &o) in residues.iter_mut().zip(&self.orders).rev() {
            *slot = index as u64 % o;
            index /= o as usize;
        }
        GroupElement { residues }
    }

    fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.orders)
            .map(|((&x, &y), &o)| (x + y) % o)
            .collect();
        GroupElement { residues }
    }

    /// Dense addition/negation tables over element indices.
    pub fn table(&self) -> GroupTable {
        GroupTable::new(self)
    }

    /// All automorphisms, as permutations of element indices (identity first).
    ///
    /// Returns `None` when the candidate space (images of the standard
    /// generators) exceeds `limit`.
    pub fn automorphisms(&self, limit: u64) -> Option<Vec<Vec<u32>>> {
        let n = self.order as usize;
        // admissible images of generator i: elements killed by orders[i]
        let elems = self.elements();
        let images: Vec<Vec<usize>> = self
            .orders
            .iter()
            .map(|&o| {
                (0..n)
                    .filter(|&e| self.scale(o as i64, &elems[e]).unwrap() == self.zero())
                    .collect()
            })
            .collect();
        let space = images
            .iter()
            .try_fold(1u64, |acc, v| acc.checked_mul(v.len() as u64))?;
        if space > limit {
            return None;
        }
        let mut out = Vec::new();
        let mut choice = vec![0usize; self.rank()];
        loop {
            let imgs: Vec<&GroupElement> =
                choice.iter().zip(&images).map(|(&c, v)| &elems[v[c]]).collect();
            let mut perm = vec![0u32; n];
            let mut seen = vec![false; n];
            let mut ok = true;
            for (idx, e) in elems.iter().enumerate() {
                let mut img = self.zero();
                for (r, g) in e.residues.iter().zip(&imgs) {
                    img = self.add_unchecked(&img, &self.scale(*r as i64, g).unwrap());
                }
                let j = self.index_of(&img);
                if seen[j] {
                    ok = false;
                    break;
                }
                seen[j] = true;
                perm[idx] = j as u32;
            }
            if ok {
                out.push(perm);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return Some(out);
                }
                choice[i] += 1;
                if choice[i] < images[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

impl TryFrom<Vec<u64>> for GroupSpec {
    type Error = Error;

    fn try_from(orders: Vec<u64>) -> Result<Self> {
        GroupSpec::new(&orders)
    }
}

impl From<GroupSpec> for Vec<u64> {
    fn from(g: GroupSpec) -> Self {
        g.orders
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z{o}")).collect();
        f.write_str(&parts.join("x"))
    }
}

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            write!(f, "{}", self.residues[0])
        } else {
            let parts: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// Inverse of `l` modulo `m`, if it exists.
pub fn mod_inverse(l: i64, m: u64) -> Option<u64> {
    let m = m as i128;
    let a = (l as i128).rem_euclid(m);
    let ext = a.extended_gcd(&m);
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m) as u64)
}

/// Index-level arithmetic for hot loops.
#[derive(Clone, Debug)]
pub struct GroupTable {
    n: usize,
    add: Vec<u32>,
    neg: Vec<u32>,
}

impl GroupTable {
    fn new(g: &GroupSpec) -> Self {
        let n = g.order() as usize;
        let elems = g.elements();
        let mut add = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = g.index_of(&g.add_unchecked(&elems[i], &elems[j])) as u32;
            }
        }
        let neg = elems
            .iter()
            .map(|e| g.index_of(&g.neg(e).unwrap()) as u32)
            .collect();
        GroupTable { n, add, neg }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// `k * a` by repeated doubling on indices.
    pub fn scale(&self, k: u64, a: u32) -> u32 {
        let mut acc = 0u32;
        let mut base = a;
        let mut k = k % self.n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}
