//! Edge-colored cubic graphs and good functions.
//!
//! A good function labels the edges of a properly 3-edge-colored cubic graph
//! with group elements so that the three labels at every vertex sum to zero.
//! Each vertex then names a vertex of `P_{G,3}` (blue, yellow, red label in
//! blocks 1, 2, 3), and the sum over all vertices is a point with even
//! coordinates. Under the conditions checked here its half is a lattice point
//! of `(|V|/2)P` that does not decompose.

mod conditions;
mod search;

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use conditions::{
    check_condition, check_condition2, count_conditions, Condition2Report, ConditionCounts, ConditionReport, LinearForm,
};
pub use search::{
    halved_point, integer_window_check, search_h, search_layouts, tetra_triangle, HWitness, Layout, SearchOutcome,
    WindowReport, K4_EDGES, RANDOM_BUDGET,
};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec, GroupTable};
use crate::polytope::AmbientPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Blue,
    Yellow,
    Red,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Blue, Color::Yellow, Color::Red];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Blue => "B",
            Color::Yellow => "Y",
            Color::Red => "R",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: Color,
}

impl Edge {
    pub fn touches(&self, w: usize) -> bool {
        self.u == w || self.v == w
    }

    pub fn adjacent(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

/// A cubic graph with a proper 3-edge-coloring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoredCubicGraph {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

/// Three edges of one triangle, one of each color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub t_b: usize,
    pub t_y: usize,
    pub t_r: usize,
}

impl TriangleSpec {
    pub fn edges(&self) -> [usize; 3] {
        [self.t_b, self.t_y, self.t_r]
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges().contains(&e)
    }
}

impl ColoredCubicGraph {
    /// Checks that every vertex has exactly one edge of each color.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let g = ColoredCubicGraph { vertex_count, edges };
        if !g.is_properly_colored() {
            return Err(Error::Structure("not a properly 3-edge-colored cubic graph".into()));
        }
        Ok(g)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_properly_colored(&self) -> bool {
        let mut seen = vec![[0u8; 3]; self.vertex_count];
        for e in &self.edges {
            if e.u >= self.vertex_count || e.v >= self.vertex_count || e.u == e.v {
                return false;
            }
            seen[e.u][e.color.index()] += 1;
            seen[e.v][e.color.index()] += 1;
        }
        seen.iter().all(|s| *s == [1, 1, 1])
    }

    /// The edge of color `c` at vertex `v`.
    pub fn edge_at(&self, v: usize, c: Color) -> usize {
        self.edges
            .iter()
            .position(|e| e.color == c && e.touches(v))
            .expect("properly colored")
    }

    /// `[blue, yellow, red]` edges at every vertex.
    pub fn incidence(&self) -> Vec<[usize; 3]> {
        let mut inc = vec![[usize::MAX; 3]; self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u][e.color.index()] = i;
            inc[e.v][e.color.index()] = i;
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.edges.iter().filter(|e| e.touches(v)) {
                let w = if e.u == v { e.v } else { e.u };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side: Vec<Option<bool>> = vec![None; self.vertex_count];
        for s in 0..self.vertex_count {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for e in self.edges.iter().filter(|e| e.touches(v)) {
                    let w = if e.u == v { e.v } else { e.u };
                    match side[w] {
                        None => {
                            side[w] = Some(!side[v].unwrap());
                            queue.push_back(w);
                        }
                        Some(x) if x == side[v].unwrap() => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// All 3-cycles, as triangles of edge indices.
    pub fn triangles(&self) -> Vec<TriangleSpec> {
        let mut out = Vec::new();
        let m = self.edges.len();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    let (ea, eb, ec) = (&self.edges[a], &self.edges[b], &self.edges[c]);
                    let mut vs = vec![ea.u, ea.v, eb.u, eb.v, ec.u, ec.v];
                    vs.sort_unstable();
                    vs.dedup();
                    if vs.len() == 3 && ea.adjacent(eb) && eb.adjacent(ec) && ea.adjacent(ec) {
                        let mut t = [usize::MAX; 3];
                        for &i in &[a, b, c] {
                            t[self.edges[i].color.index()] = i;
                        }
                        if t.iter().all(|&i| i != usize::MAX) {
                            out.push(TriangleSpec { t_b: t[0], t_y: t[1], t_r: t[2] });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_triangle(&self, t: &TriangleSpec) -> bool {
        self.triangles().contains(t)
    }

    /// Every proper 3-edge-coloring of the underlying graph (exhaustive
    /// backtracking over edges in order).
    pub fn all_colorings(&self) -> Vec<Vec<Color>> {
        let m = self.edges.len();
        let mut out = Vec::new();
        let mut cur: Vec<Option<Color>> = vec![None; m];
        fn rec(g: &ColoredCubicGraph, i: usize, cur: &mut Vec<Option<Color>>, out: &mut Vec<Vec<Color>>) {
            if i == cur.len() {
                out.push(cur.iter().map(|c| c.unwrap()).collect());
                return;
            }
            for c in Color::ALL {
                let clash = (0..i).any(|j| cur[j] == Some(c) && g.edges[j].adjacent(&g.edges[i]));
                if !clash {
                    cur[i] = Some(c);
                    rec(g, i + 1, cur, out);
                    cur[i] = None;
                }
            }
        }
        rec(self, 0, &mut cur, &mut out);
        out
    }

    pub fn recolored(&self, colors: &[Color]) -> Result<Self> {
        let edges = self.edges.iter().zip(colors).map(|(e, &c)| Edge { color: c, ..*e }).collect();
        ColoredCubicGraph::new(self.vertex_count, edges)
    }

    /// Edges lying in no triangle, in index order.
    pub fn external_edges(&self) -> Vec<usize> {
        let tris = self.triangles();
        (0..self.edges.len()).filter(|&e| !tris.iter().any(|t| t.contains(e))).collect()
    }
}

/// Corners of the four triangles of [`truncated_tetrahedron`], named by the
/// connecting edge `h_1..h_6` (0-based) leaving each corner.
pub const TETRA_CORNERS: [[usize; 3]; 4] = [[0, 1, 2], [0, 4, 5], [2, 3, 4], [1, 3, 5]];

/// Colors of the connecting edges `h_1..h_6`.
pub const TETRA_H_COLORS: [Color; 6] = [Color::Blue, Color::Yellow, Color::Red, Color::Blue, Color::Yellow, Color::Red];

/// The 12-vertex graph obtained from `K_4` by replacing every vertex with a
/// triangle. Edges 0..6 are the connecting edges `h_1..h_6`; edge
/// `6 + 3t + i` is the side of triangle `t` opposite its corner `i`, colored
/// like that corner's connecting edge. Vertex `3t + i` is corner `i` of
/// triangle `t`. Triangle 0 is the distinguished triangle `T` with corners on
/// `h_1, h_2, h_3`.
pub fn truncated_tetrahedron() -> ColoredCubicGraph {
    tetra_with(&TETRA_CORNERS, &TETRA_H_COLORS)
}

pub(crate) fn tetra_with(corners: &[[usize; 3]; 4], colors: &[Color; 6]) -> ColoredCubicGraph {
    let mut edges = Vec::with_capacity(18);
    for (h, &color) in colors.iter().enumerate() {
        let ends: Vec<usize> = (0..4)
            .flat_map(|t| (0..3).filter(move |&i| corners[t][i] == h).map(move |i| 3 * t + i))
            .collect();
        edges.push(Edge { u: ends[0], v: ends[1], color });
    }
    for (t, c) in corners.iter().enumerate() {
        for i in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            edges.push(Edge { u: 3 * t + a.min(b), v: 3 * t + a.max(b), color: colors[c[i]] });
        }
    }
    ColoredCubicGraph { vertex_count: 12, edges }
}

/// The distinguished triangle of [`truncated_tetrahedron`].
pub fn upper_left_triangle(g: &ColoredCubicGraph) -> TriangleSpec {
    tetra_triangle(g, 0)
}

/// An edge labeling by group elements (stored as element indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodFunction {
    pub graph: ColoredCubicGraph,
    pub group: GroupSpec,
    values: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct GoodFunctionJson {
    group: GroupSpec,
    graph: ColoredCubicGraph,
    values: Vec<GroupElement>,
}

impl Serialize for GoodFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GoodFunctionJson { group: self.group.clone(), graph: self.graph.clone(), values: self.values() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GoodFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GoodFunctionJson::deserialize(d)?;
        GoodFunction::from_values(&j.graph, &j.group, &j.values).map_err(serde::de::Error::custom)
    }
}

impl GoodFunction {
    /// Any labeling; goodness is checked separately by [`is_good`].
    pub fn from_values(graph: &ColoredCubicGraph, group: &GroupSpec, values: &[GroupElement]) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::Domain(format!("{} values for {} edges", values.len(), graph.edge_count())));
        }
        let values = values
            .iter()
            .map(|v| group.check(v).map(|_| group.index_of(v) as u32))
            .collect::<Result<Vec<_>>>()?;
        Ok(GoodFunction { graph: graph.clone(), group: group.clone(), values })
    }

    pub fn zero(graph: &ColoredCubicGraph, group: &GroupSpec) -> Self {
        GoodFunction { graph: graph.clone(), group: group.clone(), values: vec![0; graph.edge_count()] }
    }

    pub fn values(&self) -> Vec<GroupElement> {
        self.values.iter().map(|&i| self.group.element_at(i as usize)).collect()
    }

    pub fn value(&self, e: usize) -> GroupElement {
        self.group.element_at(self.values[e] as usize)
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.values
    }

    pub fn with_value(&self, e: usize, v: &GroupElement) -> Result<Self> {
        self.group.check(v)?;
        let mut out = self.clone();
        out.values[e] = self.group.index_of(v) as u32;
        Ok(out)
    }

    /// Values of the external (triangle-free) edges, in edge order.
    pub fn externals(&self) -> Vec<GroupElement> {
        self.graph.external_edges().into_iter().map(|e| self.value(e)).collect()
    }
}

/// For every triangle side: the side, the external edge at the opposite
/// corner, and the external edges at its own two corners.
pub(crate) struct TrianglePlan {
    pub externals: Vec<usize>,
    pub sides: Vec<(usize, usize, usize, usize)>,
}

pub(crate) fn triangle_plan(graph: &ColoredCubicGraph) -> Result<TrianglePlan> {
    let externals = graph.external_edges();
    let tris = graph.triangles();
    if 3 * tris.len() + externals.len() != graph.edge_count() || 3 * tris.len() != graph.vertex_count {
        return Err(Error::Structure("graph is not a set of triangles joined by external edges".into()));
    }
    let ext_at = |w: usize| {
        externals
            .iter()
            .copied()
            .find(|&x| graph.edges[x].touches(w))
            .ok_or_else(|| Error::Structure("triangle corner without an external edge".into()))
    };
    let mut sides = Vec::with_capacity(3 * tris.len());
    for t in &tris {
        let es = t.edges();
        let mut corners: Vec<usize> = es.iter().flat_map(|&e| [graph.edges[e].u, graph.edges[e].v]).collect();
        corners.sort_unstable();
        corners.dedup();
        for &s in &es {
            let e = &graph.edges[s];
            let opposite = corners.iter().copied().find(|&w| !e.touches(w)).expect("three corners");
            sides.push((s, ext_at(opposite)?, ext_at(e.u)?, ext_at(e.v)?));
        }
    }
    Ok(TrianglePlan { externals, sides })
}

/// Solves every triangle from the values on the external edges: with
/// externals `p, q, r` at its corners, the triangle's labels sum to
/// `S = -(p + q + r)/2` and the side opposite the `p` corner carries `S + p`.
pub fn good_from_externals(graph: &ColoredCubicGraph, group: &GroupSpec, h: &[GroupElement]) -> Result<GoodFunction> {
    if !group.is_odd() {
        return Err(Error::Divisibility(format!("halving needs odd order, {group} has order {}", group.order())));
    }
    let plan = triangle_plan(graph)?;
    if plan.externals.len() != h.len() {
        return Err(Error::Domain(format!("{} values for {} external edges", h.len(), plan.externals.len())));
    }
    for v in h {
        group.check(v)?;
    }
    let table = group.table();
    let h: Vec<u32> = h.iter().map(|v| group.index_of(v) as u32).collect();
    let values = solve_raw(&plan, &table, &halves(&table), &h, graph.edge_count());
    let f = GoodFunction { graph: graph.clone(), group: group.clone(), values };
    debug_assert!(is_good(&f));
    Ok(f)
}

/// `halves[2y] = y` in a group of odd order.
pub(crate) fn halves(table: &GroupTable) -> Vec<u32> {
    let mut out = vec![0u32; table.order()];
    for y in 0..table.order() as u32 {
        out[table.add(y, y) as usize] = y;
    }
    out
}

pub(crate) fn solve_raw(plan: &TrianglePlan, table: &GroupTable, halves: &[u32], h: &[u32], edges: usize) -> Vec<u32> {
    let mut values = vec![0u32; edges];
    for (&e, &v) in plan.externals.iter().zip(h) {
        values[e] = v;
    }
    for &(s, p, q, r) in &plan.sides {
        let sum = table.add(table.add(values[p], values[q]), values[r]);
        values[s] = table.add(halves[table.neg(sum) as usize], values[p]);
    }
    values
}

pub fn is_good(f: &GoodFunction) -> bool {
    let table = f.group.table();
    f.graph
        .incidence()
        .iter()
        .all(|es| es.iter().fold(0u32, |a, &e| table.add(a, f.values[e])) == 0)
}

/// `x(f)`: the sum over vertices of the vertex `x(f(e_B), f(e_Y), f(e_R))`.
pub fn point_of(f: &GoodFunction) -> Result<AmbientPoint> {
    if !is_good(f) {
        return Err(Error::Precondition("labels at some vertex do not sum to zero".into()));
    }
    let n = f.group.order() as usize;
    let mut coords = vec![0u32; 3 * n];
    for es in f.graph.incidence() {
        for (b, &e) in es.iter().enumerate() {
            coords[b * n + f.values[e] as usize] += 1;
        }
    }
    AmbientPoint::from_coords(n, coords)
}

#[cfg(test)]
mod tests;
