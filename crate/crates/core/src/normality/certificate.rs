use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::decompose::decompose_point;
use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::polytope::{AmbientPoint, GPresentation, Membership, PolytopeModel};

/// One term of the membership combination: a vertex, named by its zero-sum
/// tuple, and its weight as an exact fraction `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedVertex {
    pub vertex: Vec<GroupElement>,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// How the point was found: `enumeration`, `cover` or `explicit`.
    pub method: String,
    /// Lattice points of `kP` examined before and including this one.
    pub points_checked: u64,
    /// Size of the exhaustive decomposition search tree for this point.
    pub decompose_nodes: u64,
}

/// A degree-`k` point of `kP` in the vertex lattice that is not a sum of `k`
/// vertices, with the rational combination proving membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonNormalityCertificate {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub leaves: usize,
    pub degree: u64,
    pub point: GPresentation,
    pub membership: Vec<WeightedVertex>,
    pub attestation: String,
    pub search_stats: SearchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

impl NonNormalityCertificate {
    /// Packages a point with its membership weights. Runs the exhaustive
    /// decomposition search to fill in the statistics and refuses points that
    /// do decompose.
    pub fn new(
        model: &PolytopeModel,
        point: &AmbientPoint,
        degree: u64,
        membership: &Membership,
        method: &str,
        points_checked: u64,
    ) -> Result<Self> {
        let search = decompose_point(model, point, degree)?;
        if search.witness.is_some() {
            return Err(Error::Hypothesis("the point decomposes into vertices".into()));
        }
        let group = model.group();
        let membership = membership
            .iter()
            .map(|(v, w)| WeightedVertex {
                vertex: model.vertex_tuple(*v).iter().map(|&g| group.element_at(g as usize)).collect(),
                weight: w.to_string(),
            })
            .collect();
        Ok(NonNormalityCertificate {
            schema_version: SCHEMA_VERSION,
            group: group.clone(),
            leaves: model.leaves(),
            degree,
            point: model.presentation(point)?,
            membership,
            attestation: format!(
                "exhaustive backtracking over zero-sum {}-tuples found no {degree} vertices summing to the point",
                model.leaves()
            ),
            search_stats: SearchStats { method: method.to_string(), points_checked, decompose_nodes: search.nodes },
            config: None,
        })
    }

    /// Builds a certificate for an explicitly given point, solving the
    /// membership LP exactly.
    pub fn for_point(model: &PolytopeModel, point: &GPresentation) -> Result<Self> {
        let x = model.point(point)?;
        let k = point.degree as u64;
        if !model.point_in_lattice(&x)? {
            return Err(Error::NotInLattice(format!("{point} is not in the vertex lattice")));
        }
        let w = model
            .in_dilation(&x, k)?
            .ok_or_else(|| Error::Hypothesis(format!("{point} is not in {k}P")))?;
        Self::new(model, &x, k, &w, "explicit", 1)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))
    }

    /// Membership weights as vertex indices of `model`.
    pub fn weights(&self, model: &PolytopeModel) -> Result<Membership> {
        let group = model.group();
        self.membership
            .iter()
            .map(|t| {
                let tuple = t
                    .vertex
                    .iter()
                    .map(|e| group.check(e).map(|_| group.index_of(e) as u32))
                    .collect::<Result<Vec<u32>>>()
                    .map_err(|e| Error::Format(format!("bad vertex element: {e}")))?;
                let v = model
                    .vertex_index(&tuple)
                    .ok_or_else(|| Error::Format(format!("{:?} is not a zero-sum tuple", t.vertex)))?;
                let w = BigRational::from_str(&t.weight)
                    .map_err(|_| Error::Format(format!("bad weight {:?}", t.weight)))?;
                Ok((v, w))
            })
            .collect()
    }
}

/// Re-checks a certificate from its own data: lattice membership, exact
/// membership in `kP`, and an exhaustive decomposition search from scratch.
pub fn verify_certificate(cert: &NonNormalityCertificate) -> Result<bool> {
    let model = PolytopeModel::new(&cert.group, cert.leaves).map_err(|e| Error::Format(e.to_string()))?;
    verify_certificate_with(cert, &model)
}

pub fn verify_certificate_with(cert: &NonNormalityCertificate, model: &PolytopeModel) -> Result<bool> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported schema version {}", cert.schema_version)));
    }
    if cert.group != *model.group() || cert.leaves != model.leaves() {
        return Err(Error::Format("certificate is for a different polytope".into()));
    }
    if cert.point.degree as u64 != cert.degree || cert.point.leaves() != cert.leaves {
        return Err(Error::Format("point shape does not match the stated degree".into()));
    }
    let x = model.point(&cert.point).map_err(|e| Error::Format(e.to_string()))?;
    let weights = cert.weights(model)?;
    if !model.point_in_lattice(&x)? {
        return Ok(false);
    }
    if !model.check_membership(&x, cert.degree, &weights) {
        return Ok(false);
    }
    Ok(decompose_point(model, &x, cert.degree)?.witness.is_none())
}
