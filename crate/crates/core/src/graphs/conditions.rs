use serde::{Deserialize, Serialize};

use super::{is_good, triangle_plan, Color, ColoredCubicGraph, GoodFunction, TriangleSpec};
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Zero-sum blue/yellow/red triples that do not meet in a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub holds: bool,
    /// `[blue, yellow, red]` edge indices.
    pub extra_triples: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2Report {
    pub holds: bool,
    pub triangle: TriangleSpec,
    /// The labels on the triangle sum to zero.
    pub violates_i: bool,
    /// `(t, e)` with `t` in the triangle, `e != t` of the same color and equal label.
    pub violations_ii: Vec<[usize; 2]>,
    /// `(t, e1, e2)`, `t` in the triangle, `e1, e2` outside it, three colors, zero sum.
    pub violations_iii: Vec<[usize; 3]>,
    /// All zero-sum tricolor triples not meeting in a vertex, for reference.
    pub extra_triples: Vec<[usize; 3]>,
}

fn require_good(f: &GoodFunction) -> Result<()> {
    if !is_good(f) {
        return Err(Error::Precondition("labels at some vertex do not sum to zero".into()));
    }
    Ok(())
}

fn shares_vertex(g: &ColoredCubicGraph, [a, b, c]: [usize; 3]) -> bool {
    let (a, b, c) = (&g.edges[a], &g.edges[b], &g.edges[c]);
    [a.u, a.v].into_iter().any(|w| b.touches(w) && c.touches(w))
}

fn by_color(g: &ColoredCubicGraph) -> [Vec<usize>; 3] {
    let mut out: [Vec<usize>; 3] = Default::default();
    for (i, e) in g.edges.iter().enumerate() {
        out[e.color.index()].push(i);
    }
    out
}

fn extra_triples(g: &ColoredCubicGraph, table: &GroupTable, values: &[u32]) -> Vec<[usize; 3]> {
    let [bs, ys, rs] = by_color(g);
    let mut out = Vec::new();
    for &b in &bs {
        for &y in &ys {
            let need = table.neg(table.add(values[b], values[y]));
            for &r in &rs {
                if values[r] == need && !shares_vertex(g, [b, y, r]) {
                    out.push([b, y, r]);
                }
            }
        }
    }
    out
}

/// Every zero-sum tricolor triple must be the three edges at one vertex.
pub fn check_condition(f: &GoodFunction) -> Result<ConditionReport> {
    require_good(f)?;
    if f.graph.is_bipartite() {
        return Err(Error::Hypothesis("the graph is bipartite".into()));
    }
    let extra = extra_triples(&f.graph, &f.group.table(), f.raw());
    Ok(ConditionReport { holds: extra.is_empty(), extra_triples: extra })
}

fn check_triangle(g: &ColoredCubicGraph, t: &TriangleSpec) -> Result<()> {
    let colors_ok = [(t.t_b, Color::Blue), (t.t_y, Color::Yellow), (t.t_r, Color::Red)]
        .iter()
        .all(|&(e, c)| e < g.edge_count() && g.edges[e].color == c);
    if !colors_ok || !g.is_triangle(t) {
        return Err(Error::Structure(format!("{:?} is not a blue/yellow/red triangle", t.edges())));
    }
    Ok(())
}

/// Pairs and triples the second checker inspects, fixed by the graph and
/// the triangle.
pub(crate) struct Condition2Plan {
    pub triangle: [usize; 3],
    pub pairs: Vec<[usize; 2]>,
    pub triples: Vec<[usize; 3]>,
}

impl Condition2Plan {
    pub(crate) fn new(g: &ColoredCubicGraph, t: &TriangleSpec) -> Self {
        let cols = by_color(g);
        let tri = t.edges();
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for (ci, &te) in tri.iter().enumerate() {
            for &e in &cols[ci] {
                if e != te {
                    pairs.push([te, e]);
                }
            }
            let (c1, c2) = ((ci + 1) % 3, (ci + 2) % 3);
            let (c1, c2) = (c1.min(c2), c1.max(c2));
            for &e1 in cols[c1].iter().filter(|e| !t.contains(**e)) {
                for &e2 in cols[c2].iter().filter(|e| !t.contains(**e)) {
                    triples.push([te, e1, e2]);
                }
            }
        }
        Condition2Plan { triangle: tri, pairs, triples }
    }

    pub(crate) fn holds(&self, table: &GroupTable, v: &[u32]) -> bool {
        let [a, b, c] = self.triangle;
        table.add(table.add(v[a], v[b]), v[c]) != 0
            && self.pairs.iter().all(|&[t, e]| v[t] != v[e])
            && self.triples.iter().all(|&[t, e1, e2]| table.add(table.add(v[t], v[e1]), v[e2]) != 0)
    }
}

/// The three conditions on a distinguished triangle `T`.
pub fn check_condition2(f: &GoodFunction, t: &TriangleSpec) -> Result<Condition2Report> {
    require_good(f)?;
    check_triangle(&f.graph, t)?;
    let table = f.group.table();
    let v = f.raw();
    let plan = Condition2Plan::new(&f.graph, t);
    let [a, b, c] = plan.triangle;
    let violates_i = table.add(table.add(v[a], v[b]), v[c]) == 0;
    let violations_ii: Vec<[usize; 2]> = plan.pairs.iter().copied().filter(|&[t, e]| v[t] == v[e]).collect();
    let violations_iii: Vec<[usize; 3]> = plan
        .triples
        .iter()
        .copied()
        .filter(|&[t, e1, e2]| table.add(table.add(v[t], v[e1]), v[e2]) == 0)
        .collect();
    Ok(Condition2Report {
        holds: !violates_i && violations_ii.is_empty() && violations_iii.is_empty(),
        triangle: *t,
        violates_i,
        violations_ii,
        violations_iii,
        extra_triples: extra_triples(&f.graph, &table, v),
    })
}

/// One condition as a linear form in the external labels `h_1..h_m`. The
/// stored coefficients are those of twice the form, so they are integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    pub kind: String,
    pub edges: Vec<usize>,
    pub twice: Vec<i64>,
}

impl LinearForm {
    /// A coefficient of twice the form that is `±2^j`. Over a group of odd
    /// order such a coefficient is invertible, so the form vanishes on
    /// exactly `|G|^{m-1}` tuples.
    pub fn unit_coefficient(&self) -> Option<(usize, i64)> {
        self.twice
            .iter()
            .enumerate()
            .find(|(_, &c)| c != 0 && c.unsigned_abs().is_power_of_two())
            .map(|(i, &c)| (i, c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCounts {
    pub count_i: usize,
    pub count_ii: usize,
    pub count_iii: usize,
    pub total: usize,
    /// Type (iii) conditions for `t = t_B, t_Y, t_R`.
    pub iii_by_color: [usize; 3],
    pub forms: Vec<LinearForm>,
}

/// The conditions on `T` that a good function must avoid, with type (iii)
/// restricted to pairwise non-adjacent triples (the others follow from
/// type (ii) and the vertex equations).
pub fn count_conditions(g: &ColoredCubicGraph, t: &TriangleSpec) -> Result<ConditionCounts> {
    check_triangle(g, t)?;
    let plan = triangle_plan(g)?;
    let m = plan.externals.len();
    let mut lin = vec![vec![0i64; m]; g.edge_count()];
    for (i, &e) in plan.externals.iter().enumerate() {
        lin[e][i] = 2;
    }
    let pos = |e: usize| plan.externals.iter().position(|&x| x == e).expect("external");
    for &(s, p, q, r) in &plan.sides {
        lin[s][pos(p)] += 1;
        lin[s][pos(q)] -= 1;
        lin[s][pos(r)] -= 1;
    }
    let sum = |es: &[usize], signs: &[i64]| -> Vec<i64> {
        (0..m).map(|j| es.iter().zip(signs).map(|(&e, &s)| s * lin[e][j]).sum()).collect()
    };
    let c2 = Condition2Plan::new(g, t);
    let mut forms = vec![LinearForm { kind: "i".into(), edges: t.edges().to_vec(), twice: sum(&t.edges(), &[1, 1, 1]) }];
    for &[a, b] in &c2.pairs {
        forms.push(LinearForm { kind: "ii".into(), edges: vec![a, b], twice: sum(&[a, b], &[1, -1]) });
    }
    let mut iii_by_color = [0usize; 3];
    for &[a, b, c] in &c2.triples {
        let (ea, eb, ec) = (&g.edges[a], &g.edges[b], &g.edges[c]);
        if ea.adjacent(eb) || ea.adjacent(ec) || eb.adjacent(ec) {
            continue;
        }
        iii_by_color[ea.color.index()] += 1;
        forms.push(LinearForm { kind: "iii".into(), edges: vec![a, b, c], twice: sum(&[a, b, c], &[1, 1, 1]) });
    }
    let count_ii = c2.pairs.len();
    let count_iii = iii_by_color.iter().sum();
    Ok(ConditionCounts { count_i: 1, count_ii, count_iii, total: 1 + count_ii + count_iii, iii_by_color, forms })
}
