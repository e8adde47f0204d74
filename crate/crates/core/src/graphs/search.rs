use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::conditions::Condition2Plan;
use super::{
    halves, point_of, solve_raw, tetra_with, triangle_plan, truncated_tetrahedron, Color, ColoredCubicGraph,
    GoodFunction, TriangleSpec,
};
use crate::config::SearchMode;
use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};
use crate::polytope::{AmbientPoint, GPresentation};

/// Default number of random draws.
pub const RANDOM_BUDGET: u64 = 10_000;

/// An h-tuple whose good function passes the triangle conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HWitness {
    pub h: Vec<GroupElement>,
    pub triangle_index: usize,
    pub triangle: TriangleSpec,
    pub values: Vec<GroupElement>,
    /// Half of `x(f)`, a point of degree 6.
    pub point: GPresentation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub group: GroupSpec,
    pub mode: SearchMode,
    pub seed: u64,
    /// Tuples examined: the witness's position in lexicographic order, or the
    /// number of random draws up to and including it.
    pub trials: u64,
    pub witness: Option<HWitness>,
}

struct Searcher {
    graph: ColoredCubicGraph,
    plan: super::TrianglePlan,
    table: crate::group::GroupTable,
    halves: Vec<u32>,
    triangles: Vec<(TriangleSpec, Condition2Plan)>,
}

impl Searcher {
    fn new(group: &GroupSpec) -> Result<Self> {
        let graph = truncated_tetrahedron();
        let plan = triangle_plan(&graph)?;
        let table = group.table();
        let halves = halves(&table);
        let triangles = (0..4).map(|t| tetra_triangle(&graph, t)).map(|t| (t, Condition2Plan::new(&graph, &t))).collect();
        Ok(Searcher { graph, plan, table, halves, triangles })
    }

    /// Index of the first triangle the tuple works for.
    fn test(&self, h: &[u32]) -> Option<usize> {
        let v = solve_raw(&self.plan, &self.table, &self.halves, h, self.graph.edge_count());
        self.triangles.iter().position(|(_, p)| p.holds(&self.table, &v))
    }

    fn witness(&self, group: &GroupSpec, h: &[u32], t: usize) -> Result<HWitness> {
        let h: Vec<GroupElement> = h.iter().map(|&i| group.element_at(i as usize)).collect();
        let f = super::good_from_externals(&self.graph, group, &h)?;
        Ok(HWitness {
            h,
            triangle_index: t,
            triangle: self.triangles[t].0,
            values: f.values(),
            point: halved_point(&f)?,
        })
    }
}

/// `x(f)/2` as a G-presentation.
pub fn halved_point(f: &GoodFunction) -> Result<GPresentation> {
    let x = point_of(f)?;
    let half = AmbientPoint::from_coords(x.order(), x.coords().iter().map(|c| c / 2).collect())?;
    GPresentation::from_point(&f.group, &half)
}

/// Looks for external labels on [`truncated_tetrahedron`] whose good
/// function passes [`super::check_condition2`] for one of its four
/// triangles. Exhaustive mode walks `G^6` in lexicographic order of element
/// indices and returns the first success; random mode draws tuples from
/// ChaCha8 seeded with `seed`, up to `budget` draws (default
/// [`RANDOM_BUDGET`]).
pub fn search_h(
    group: &GroupSpec,
    mode: SearchMode,
    seed: u64,
    budget: Option<u64>,
    workers: usize,
) -> Result<SearchOutcome> {
    if !group.is_odd() {
        return Err(Error::Divisibility(format!("h-search needs odd order, {group} has order {}", group.order())));
    }
    let s = Searcher::new(group)?;
    let n = group.order() as usize;
    let (trials, found) = match mode {
        SearchMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let budget = budget.unwrap_or(RANDOM_BUDGET);
            let mut found = None;
            let mut trials = 0;
            let mut h = [0u32; 6];
            while trials < budget {
                trials += 1;
                for x in h.iter_mut() {
                    *x = rng.gen_range(0..n as u32);
                }
                if let Some(t) = s.test(&h) {
                    found = Some((h, t));
                    break;
                }
            }
            (trials, found)
        }
        SearchMode::Exhaustive => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Precondition(e.to_string()))?;
            let limit = budget.unwrap_or(u64::MAX);
            let best = AtomicUsize::new(usize::MAX);
            let shards: Vec<Option<(u64, [u32; 6], usize)>> = pool.install(|| {
                (0..n)
                    .into_par_iter()
                    .map(|h1| {
                        if h1 > best.load(Ordering::Relaxed) {
                            return None;
                        }
                        let hit = scan_shard(&s, n, h1 as u32, limit, &|| h1 > best.load(Ordering::Relaxed));
                        if hit.is_some() {
                            best.fetch_min(h1, Ordering::Relaxed);
                        }
                        hit
                    })
                    .collect()
            });
            match shards.into_iter().flatten().next() {
                Some((pos, h, t)) => (pos + 1, Some((h, t))),
                None => ((n as u64).pow(6).min(limit), None),
            }
        }
    };
    let witness = found.map(|(h, t)| s.witness(group, &h, t)).transpose()?;
    Ok(SearchOutcome { group: group.clone(), mode, seed, trials, witness })
}

fn scan_shard(s: &Searcher, n: usize, h1: u32, limit: u64, cancelled: &dyn Fn() -> bool) -> Option<(u64, [u32; 6], usize)> {
    let per = (n as u64).pow(5);
    let base = h1 as u64 * per;
    let mut h = [h1, 0, 0, 0, 0, 0];
    for off in 0..per {
        let pos = base + off;
        if pos >= limit || (off % 65_536 == 65_535 && cancelled()) {
            return None;
        }
        if let Some(t) = s.test(&h) {
            return Some((pos, h, t));
        }
        let mut i = 5;
        loop {
            h[i] += 1;
            if (h[i] as usize) < n || i == 1 {
                break;
            }
            h[i] = 0;
            i -= 1;
        }
    }
    None
}

/// Tricolor edge sums of the good function with integer external labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub h: Vec<i64>,
    /// Whether every triangle label is an integer. When it is not, all
    /// reported sums are doubled and `denominator` is 2.
    pub integral: bool,
    pub denominator: i64,
    pub min: i64,
    pub max: i64,
    pub sums: BTreeSet<i64>,
    /// Sums of tricolor triples that do not meet in a vertex.
    pub nonvertex_sums: BTreeSet<i64>,
    pub zero_only_at_vertices: bool,
}

impl WindowReport {
    /// Whether the reduction mod `n` has no zero tricolor triple outside the
    /// vertices, i.e. passes [`super::check_condition`] over `Z_n`.
    pub fn passes_mod(&self, n: u64) -> bool {
        self.integral && !self.nonvertex_sums.iter().any(|s| s.rem_euclid(n as i64) == 0)
    }
}

/// Solves [`truncated_tetrahedron`] over the integers and collects every
/// blue + yellow + red edge sum.
pub fn integer_window_check(h: &[i64]) -> Result<WindowReport> {
    let g = truncated_tetrahedron();
    let plan = triangle_plan(&g)?;
    if h.len() != plan.externals.len() {
        return Err(Error::Domain(format!("{} values for {} external edges", h.len(), plan.externals.len())));
    }
    let mut twice = vec![0i64; g.edge_count()];
    for (&e, &v) in plan.externals.iter().zip(h) {
        twice[e] = 2 * v;
    }
    for &(s, p, q, r) in &plan.sides {
        twice[s] = (twice[p] - twice[q] - twice[r]) / 2;
    }
    let integral = twice.iter().all(|v| v % 2 == 0);
    let denominator = if integral { 1 } else { 2 };
    let val = |e: usize| if integral { twice[e] / 2 } else { twice[e] };
    let mut cols: [Vec<usize>; 3] = Default::default();
    for (i, e) in g.edges.iter().enumerate() {
        cols[e.color.index()].push(i);
    }
    let mut sums = BTreeSet::new();
    let mut nonvertex_sums = BTreeSet::new();
    for &b in &cols[0] {
        for &y in &cols[1] {
            for &r in &cols[2] {
                let s = val(b) + val(y) + val(r);
                sums.insert(s);
                let (eb, ey, er) = (&g.edges[b], &g.edges[y], &g.edges[r]);
                let at_vertex = [eb.u, eb.v].into_iter().any(|w| ey.touches(w) && er.touches(w));
                if !at_vertex {
                    nonvertex_sums.insert(s);
                }
            }
        }
    }
    Ok(WindowReport {
        h: h.to_vec(),
        integral,
        denominator,
        min: *sums.first().unwrap(),
        max: *sums.last().unwrap(),
        zero_only_at_vertices: !nonvertex_sums.contains(&0),
        sums,
        nonvertex_sums,
    })
}

/// The four triangles of `K_4` with every vertex replaced by a triangle are
/// joined along these pairs.
pub const K4_EDGES: [(usize, usize); 6] = [(0, 1), (0, 3), (0, 2), (2, 3), (1, 2), (1, 3)];

/// Triangle `t` (sides `6 + 3t .. 9 + 3t`) of a graph built by [`tetra_with`].
pub fn tetra_triangle(g: &ColoredCubicGraph, t: usize) -> TriangleSpec {
    let sides = 6 + 3 * t..9 + 3 * t;
    let pick = |c: Color| sides.clone().find(|&e| g.edges[e].color == c).expect("one side of each color");
    TriangleSpec { t_b: pick(Color::Blue), t_y: pick(Color::Yellow), t_r: pick(Color::Red) }
}

/// A placement of `h_1..h_6` on the connecting edges, their colors, and the
/// distinguished triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    /// `labels[i]` is the position in [`K4_EDGES`] carrying `h_{i+1}`.
    pub labels: [usize; 6],
    pub colors: [Color; 6],
    pub triangle: usize,
}

impl Layout {
    /// The layout of [`truncated_tetrahedron`].
    pub fn frozen() -> Self {
        Layout { labels: [0, 1, 2, 3, 4, 5], colors: super::TETRA_H_COLORS, triangle: 0 }
    }

    pub fn graph(&self) -> ColoredCubicGraph {
        let mut corners = [[0usize; 3]; 4];
        for (t, c) in corners.iter_mut().enumerate() {
            let hs: Vec<usize> = (0..6)
                .filter(|&h| {
                    let (a, b) = K4_EDGES[self.labels[h]];
                    a == t || b == t
                })
                .collect();
            c.copy_from_slice(&hs);
        }
        tetra_with(&corners, &self.colors)
    }

    pub fn triangle_spec(&self, g: &ColoredCubicGraph) -> TriangleSpec {
        tetra_triangle(g, self.triangle)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Every layout (label placement x proper coloring x triangle) accepted by
/// `accept`, in a fixed order.
pub fn search_layouts<F>(accept: F) -> Vec<Layout>
where
    F: Fn(&ColoredCubicGraph, &TriangleSpec) -> bool + Sync,
{
    let mut k4_colorings = Vec::new();
    for perm in permutations(3) {
        // the three perfect matchings of K_4, by position in K4_EDGES
        let matchings = [[0, 3], [1, 4], [2, 5]];
        let mut c = [Color::Blue; 6];
        for (m, &ci) in matchings.iter().zip(&perm) {
            for &e in m {
                c[e] = Color::ALL[ci];
            }
        }
        k4_colorings.push(c);
    }
    let mut candidates = Vec::new();
    for p in permutations(6) {
        let labels: [usize; 6] = p.try_into().unwrap();
        for kc in &k4_colorings {
            let colors: [Color; 6] = std::array::from_fn(|h| kc[labels[h]]);
            for triangle in 0..4 {
                candidates.push(Layout { labels, colors, triangle });
            }
        }
    }
    candidates
        .into_par_iter()
        .filter(|l| {
            let g = l.graph();
            accept(&g, &l.triangle_spec(&g))
        })
        .collect()
}
