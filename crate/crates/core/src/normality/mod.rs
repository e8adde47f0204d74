//! Normality of `P_{G,n}` in the lattice spanned by its vertices.
//!
//! Two exact procedures are available. Enumeration walks the lattice points
//! of `kP` degree by degree, one representative per symmetry orbit, and asks
//! [`decompose`] for each; it finds the smallest witnesses but grows quickly
//! with `k`. The cover procedure triangulates `P` and only examines the
//! lattice points of the fundamental parallelepipeds of its simplices, which
//! settles every degree at once when the triangulation is small enough.
//!
//! A complete "normal" verdict needs every degree `2..=dim-1`: the Hilbert
//! basis of the cone over a lattice polytope of dimension `d` lives in degrees
//! at most `d - 1`.

pub mod certificate;
pub mod cover;
mod decompose;
mod enumerate;
pub mod symmetry;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use certificate::{verify_certificate, verify_certificate_with, NonNormalityCertificate, SearchStats, WeightedVertex};
pub use decompose::{decompose, decompose_point, Decomposition, DecompositionWitness};
pub use symmetry::{Symmetry, SymmetryGroup};

use crate::config::{RunConfig, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::polytope::{AmbientPoint, GPresentation, Membership, PolytopeModel};
use enumerate::{Compositions, Shard};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Enumerate while the next degree fits the budget, then try the cover.
    #[default]
    Auto,
    Enumerate,
    Cover,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOptions {
    pub strategy: Strategy,
    /// Quotient by group automorphisms as well as translations and block
    /// permutations.
    pub automorphisms: bool,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Largest estimated candidate count an enumerated degree may have under
    /// [`Strategy::Auto`].
    pub budget: u64,
    /// Under [`Strategy::Auto`], hand the remaining degrees to the cover once
    /// a degree's estimate exceeds this and the cover is allowed.
    pub cover_switch: u64,
    /// Largest polytope dimension [`Strategy::Auto`] will triangulate.
    pub cover_max_dim: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { strategy: Strategy::Auto, automorphisms: false, workers: 1, budget: 250_000_000, cover_switch: 1_000_000, cover_max_dim: 18 }
    }
}

impl CheckOptions {
    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::Domain(format!("worker pool: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeStatus {
    Verified,
    Failed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Enumeration,
    Cover,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub degree: u64,
    /// Canonical lattice points of `kP` examined at this degree.
    pub points: u64,
    pub status: DegreeStatus,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSummary {
    pub simplices: u64,
    pub normalized_volume: u64,
    pub non_unimodular_simplices: u64,
    /// Distinct canonical parallelepiped points of degree at least 2.
    pub parallelepiped_points: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Normal,
    NonNormal { certificate: Box<NonNormalityCertificate> },
    Inconclusive { verified_through: u64, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub schema_version: u32,
    pub group: GroupSpec,
    pub leaves: usize,
    pub dim: usize,
    pub max_degree: u64,
    pub automorphisms: bool,
    pub checked_degrees: Vec<DegreeCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverSummary>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
}

impl NormalityReport {
    pub fn is_normal(&self) -> bool {
        matches!(self.verdict, Verdict::Normal)
    }

    pub fn certificate(&self) -> Option<&NonNormalityCertificate> {
        match &self.verdict {
            Verdict::NonNormal { certificate } => Some(certificate),
            _ => None,
        }
    }

    /// Highest degree `d` such that every degree `2..=d` is verified.
    pub fn verified_through(&self) -> u64 {
        let mut d = 1;
        for c in &self.checked_degrees {
            if c.degree == d + 1 && c.status == DegreeStatus::Verified {
                d = c.degree;
            } else {
                break;
            }
        }
        d
    }
}

/// Outcome of [`check_degree`].
#[derive(Clone, Debug)]
pub enum DegreeOutcome {
    Verified { points: u64 },
    Failed { point: AmbientPoint, membership: Membership, points: u64 },
}

impl DegreeOutcome {
    pub fn status(&self) -> DegreeStatus {
        match self {
            DegreeOutcome::Verified { .. } => DegreeStatus::Verified,
            DegreeOutcome::Failed { .. } => DegreeStatus::Failed,
        }
    }
}

/// Degree-`k` lattice points of `kP`, ascending in the block-by-block
/// lexicographic order. With `canonical`, one point per symmetry orbit.
pub fn enumerate_degree(model: &PolytopeModel, k: u64, canonical: bool, options: &CheckOptions) -> Result<Vec<GPresentation>> {
    enumerate_points(model, k, canonical, options)?
        .iter()
        .map(|x| model.presentation(x))
        .collect()
}

pub fn enumerate_points(model: &PolytopeModel, k: u64, canonical: bool, options: &CheckOptions) -> Result<Vec<AmbientPoint>> {
    if k == 0 {
        return Err(Error::Domain("degree must be at least 1".into()));
    }
    let sym = SymmetryGroup::new(model, options.automorphisms)?;
    if !canonical {
        return enumerate::all_points(model, &sym, k);
    }
    let comps = Compositions::new(model, &sym, k);
    let shards = options.pool()?.install(|| enumerate::scan(model, &sym, &comps, k, true, false))?;
    Ok(shards.into_iter().flat_map(|s| s.points).collect())
}

/// Checks that every canonical degree-`k` point of `kP` decomposes.
/// `previous` is the status of degree `k - 1`, which must be verified.
pub fn check_degree(model: &PolytopeModel, k: u64, previous: Option<DegreeStatus>, options: &CheckOptions) -> Result<DegreeOutcome> {
    if k >= 3 && previous != Some(DegreeStatus::Verified) {
        return Err(Error::Precondition(format!("degree {} must be verified before degree {k}", k - 1)));
    }
    if k <= 1 {
        return Ok(DegreeOutcome::Verified { points: if k == 1 { model.vertex_count() as u64 } else { 0 } });
    }
    let sym = SymmetryGroup::new(model, options.automorphisms)?;
    let comps = Compositions::new(model, &sym, k);
    let shards = options.pool()?.install(|| enumerate::scan(model, &sym, &comps, k, false, true))?;
    Ok(merge(shards))
}

fn merge(shards: Vec<Shard>) -> DegreeOutcome {
    let mut points = 0;
    for s in shards {
        points += s.members;
        if let Some((point, membership)) = s.witness {
            return DegreeOutcome::Failed { point, membership, points };
        }
        debug_assert!(!s.aborted, "shards before the first witness run to completion");
    }
    DegreeOutcome::Verified { points }
}

/// Rough count of candidate tuples the enumerator walks at degree `k`.
pub fn enumeration_estimate(model: &PolytopeModel, k: u64) -> f64 {
    let n = model.order() as f64;
    let mut comps = 1f64;
    for i in 1..model.order() as u64 {
        comps = comps * (k + i) as f64 / i as f64;
    }
    (comps / n).powi(model.leaves() as i32) / 2.0
}

/// The first non-decomposable point of `kP` for `k = k_min..=k_max`, by
/// ascending degree and then canonical order.
pub fn find_witness(model: &PolytopeModel, k_min: u64, k_max: u64, options: &CheckOptions) -> Result<Option<NonNormalityCertificate>> {
    if k_min < 2 || k_min > k_max {
        return Err(Error::Domain(format!("need 2 <= k_min <= k_max, got {k_min}..{k_max}")));
    }
    let sym = SymmetryGroup::new(model, options.automorphisms)?;
    let pool = options.pool()?;
    for k in k_min..=k_max {
        let comps = Compositions::new(model, &sym, k);
        let shards = pool.install(|| enumerate::scan(model, &sym, &comps, k, false, true))?;
        if let DegreeOutcome::Failed { point, membership, points } = merge(shards) {
            return Ok(Some(NonNormalityCertificate::new(model, &point, k, &membership, "enumeration", points)?));
        }
    }
    Ok(None)
}

/// Result of the cover procedure: per-degree counts and the smallest failing
/// parallelepiped point, if any.
struct CoverOutcome {
    summary: CoverSummary,
    counts: BTreeMap<u64, u64>,
    failure: Option<(u64, AmbientPoint, Membership)>,
}

fn run_cover(model: &PolytopeModel, max_degree: u64, options: &CheckOptions) -> Result<CoverOutcome> {
    let tri = cover::placing_triangulation(model)?;
    let verts = cover::lattice_vertices(model)?;
    let sym = SymmetryGroup::new(model, options.automorphisms)?;
    let found: Vec<Vec<AmbientPoint>> = options.pool()?.install(|| {
        tri.non_unimodular
            .par_iter()
            .map(|s| {
                let pts = cover::parallelepiped_points(model, &verts, s)?;
                Ok(pts
                    .into_iter()
                    .filter(|p| p.degree().is_some_and(|d| d >= 2 && d <= max_degree))
                    .map(|p| sym.canonical(&p))
                    .collect())
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut points: Vec<(u64, AmbientPoint)> =
        found.into_iter().flatten().map(|p| (p.degree().expect("graded"), p)).collect();
    points.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| symmetry::cmp_points(a.1.coords(), b.1.coords(), model.order())));
    points.dedup();
    let mut counts = BTreeMap::new();
    for (d, _) in &points {
        *counts.entry(*d).or_insert(0) += 1;
    }
    let bad: Vec<Option<usize>> = options.pool()?.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, (d, p))| Ok(decompose_point(model, p, *d)?.witness.is_none().then_some(i)))
            .collect::<Result<Vec<_>>>()
    })?;
    let failure = match bad.into_iter().flatten().next() {
        Some(i) => {
            let (d, p) = points[i].clone();
            let w = model
                .in_dilation(&p, d)?
                .ok_or_else(|| Error::Structure("parallelepiped point outside its dilation".into()))?;
            Some((d, p, w))
        }
        None => None,
    };
    Ok(CoverOutcome {
        summary: CoverSummary {
            simplices: tri.simplices,
            normalized_volume: tri.volume,
            non_unimodular_simplices: tri.non_unimodular.len() as u64,
            parallelepiped_points: points.len() as u64,
        },
        counts,
        failure,
    })
}

/// Decides normality up to `max_degree` (a complete verdict needs
/// `max_degree >= dim - 1`).
pub fn check_normality(model: &PolytopeModel, max_degree: u64, options: &CheckOptions) -> Result<NormalityReport> {
    if max_degree < 2 {
        return Err(Error::Domain("max_degree must be at least 2".into()));
    }
    let top = (model.dim() as u64).saturating_sub(1);
    let last = max_degree.min(top);
    let mut report = NormalityReport {
        schema_version: SCHEMA_VERSION,
        group: model.group().clone(),
        leaves: model.leaves(),
        dim: model.dim(),
        max_degree,
        automorphisms: options.automorphisms,
        checked_degrees: Vec::new(),
        cover: None,
        verdict: Verdict::Normal,
        config: None,
    };
    let use_cover = match options.strategy {
        Strategy::Cover => true,
        Strategy::Enumerate => false,
        Strategy::Auto => model.dim() <= options.cover_max_dim && model.vertex_count() <= 128,
    };

    let mut previous = Some(DegreeStatus::Verified);
    let mut k = 2;
    while k <= last {
        if options.strategy == Strategy::Cover {
            break;
        }
        if options.strategy == Strategy::Auto {
            let estimate = enumeration_estimate(model, k);
            if estimate > options.budget as f64 || (use_cover && estimate > options.cover_switch as f64) {
                break;
            }
        }
        match check_degree(model, k, previous, options)? {
            DegreeOutcome::Verified { points } => {
                report.checked_degrees.push(DegreeCheck { degree: k, points, status: DegreeStatus::Verified, method: Method::Enumeration });
            }
            DegreeOutcome::Failed { point, membership, points } => {
                report.checked_degrees.push(DegreeCheck { degree: k, points, status: DegreeStatus::Failed, method: Method::Enumeration });
                let cert = NonNormalityCertificate::new(model, &point, k, &membership, "enumeration", points)?;
                report.verdict = Verdict::NonNormal { certificate: Box::new(cert) };
                return Ok(report);
            }
        }
        previous = Some(DegreeStatus::Verified);
        k += 1;
    }

    if k <= last && use_cover {
        let outcome = run_cover(model, last, options)?;
        report.cover = Some(outcome.summary);
        let fail_degree = outcome.failure.as_ref().map(|f| f.0);
        for d in k..=last {
            if fail_degree.is_some_and(|f| d > f) {
                break;
            }
            let status = if fail_degree == Some(d) { DegreeStatus::Failed } else { DegreeStatus::Verified };
            let points = outcome.counts.get(&d).copied().unwrap_or(0);
            report.checked_degrees.push(DegreeCheck { degree: d, points, status, method: Method::Cover });
        }
        if let Some((d, p, w)) = outcome.failure {
            let points = outcome.counts.range(..=d).map(|(_, c)| c).sum();
            let cert = NonNormalityCertificate::new(model, &p, d, &w, "cover", points)?;
            report.verdict = Verdict::NonNormal { certificate: Box::new(cert) };
            return Ok(report);
        }
        k = last + 1;
    }

    let done = k - 1;
    report.verdict = if done >= top {
        Verdict::Normal
    } else if done >= last {
        Verdict::Inconclusive {
            verified_through: done,
            reason: format!("degrees above {max_degree} were not requested; a complete check needs {top}"),
        }
    } else {
        Verdict::Inconclusive {
            verified_through: done,
            reason: format!("degree {} exceeds the enumeration budget and the polytope is too large to triangulate", done + 1),
        }
    };
    Ok(report)
}
