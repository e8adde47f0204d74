use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// A non-negative integer point of `Z^{n|G|}`, laid out block by block:
/// coordinate `j * |G| + g` is the multiplicity of element `g` in block `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AmbientPoint {
    order: usize,
    coords: Vec<u32>,
}

impl AmbientPoint {
    pub fn zero(order: usize, leaves: usize) -> Self {
        AmbientPoint { order, coords: vec![0; order * leaves] }
    }

    pub fn from_coords(order: usize, coords: Vec<u32>) -> Result<Self> {
        if order == 0 || coords.len() % order != 0 {
            return Err(Error::Domain(format!(
                "{} coordinates do not split into blocks of size {order}",
                coords.len()
            )));
        }
        Ok(AmbientPoint { order, coords })
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn leaves(&self) -> usize {
        self.coords.len() / self.order
    }

    pub fn block(&self, j: usize) -> &[u32] {
        &self.coords[j * self.order..(j + 1) * self.order]
    }

    pub fn blocks(&self) -> impl Iterator<Item = &[u32]> {
        self.coords.chunks(self.order)
    }

    pub fn block_sums(&self) -> Vec<u64> {
        self.blocks().map(|b| b.iter().map(|&c| c as u64).sum()).collect()
    }

    /// The common block sum, or `None` if the blocks disagree.
    pub fn degree(&self) -> Option<u64> {
        let sums = self.block_sums();
        let first = *sums.first()?;
        sums.iter().all(|&s| s == first).then_some(first)
    }

    pub fn to_i64(&self) -> Vec<i64> {
        self.coords.iter().map(|&c| c as i64).collect()
    }

    pub fn add(&self, other: &AmbientPoint) -> Result<AmbientPoint> {
        self.same_shape(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(AmbientPoint { order: self.order, coords })
    }

    /// `self - other`, if it stays non-negative.
    pub fn checked_sub(&self, other: &AmbientPoint) -> Option<AmbientPoint> {
        self.same_shape(other).ok()?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(AmbientPoint { order: self.order, coords })
    }

    pub fn scaled(&self, k: u32) -> AmbientPoint {
        AmbientPoint { order: self.order, coords: self.coords.iter().map(|c| c * k).collect() }
    }

    fn same_shape(&self, other: &AmbientPoint) -> Result<()> {
        if self.order != other.order || self.coords.len() != other.coords.len() {
            return Err(Error::Domain("points of different shapes".into()));
        }
        Ok(())
    }
}

/// An `n`-tuple of equal-size multisets of group elements. Each block is
/// kept sorted by element index, so equal presentations serialize equally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GPresentation {
    pub degree: usize,
    pub blocks: Vec<Vec<GroupElement>>,
}

impl GPresentation {
    /// Builds a presentation; blocks are sorted into canonical order.
    pub fn new(group: &GroupSpec, blocks: Vec<Vec<GroupElement>>) -> Result<Self> {
        let degree = blocks.first().map_or(0, |b| b.len());
        if blocks.iter().any(|b| b.len() != degree) {
            return Err(Error::Domain("blocks of a G-presentation must have equal size".into()));
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            for e in b.iter() {
                group.check(e)?;
            }
            b.sort_by_key(|e| group.index_of(e));
        }
        Ok(GPresentation { degree, blocks })
    }

    /// Convenience constructor for cyclic groups from plain residues.
    pub fn cyclic(group: &GroupSpec, blocks: &[&[i64]]) -> Result<Self> {
        let blocks = blocks
            .iter()
            .map(|b| b.iter().map(|&r| group.element(&[r])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, blocks)
    }

    pub fn from_point(group: &GroupSpec, x: &AmbientPoint) -> Result<Self> {
        if x.order() != group.order() as usize {
            return Err(Error::Domain("point does not match the group order".into()));
        }
        let degree = x
            .degree()
            .ok_or_else(|| Error::Domain("blocks have different sums".into()))?;
        let blocks = x
            .blocks()
            .map(|b| {
                b.iter()
                    .enumerate()
                    .flat_map(|(g, &c)| std::iter::repeat_n(group.element_at(g), c as usize))
                    .collect()
            })
            .collect();
        Ok(GPresentation { degree: degree as usize, blocks })
    }

    pub fn to_point(&self, group: &GroupSpec) -> Result<AmbientPoint> {
        let order = group.order() as usize;
        let mut x = AmbientPoint::zero(order, self.blocks.len());
        for (j, b) in self.blocks.iter().enumerate() {
            if b.len() != self.degree {
                return Err(Error::Domain("block size differs from the stated degree".into()));
            }
            for e in b {
                group.check(e)?;
                x.coords[j * order + group.index_of(e)] += 1;
            }
        }
        Ok(x)
    }

    pub fn leaves(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for GPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let items: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "x({})", blocks.join(","))
    }
}
