use proptest::prelude::*;

use super::*;
use crate::config::SearchMode;
use crate::normality::decompose;
use crate::polytope::PolytopeModel;

pub(crate) struct Tuple {
    pub orders: &'static [u64],
    pub h: [&'static [i64]; 6],
    /// `None`: passes the vertex condition; `Some(k)`: fails it with `k`
    /// extra triples but passes the triangle conditions on `T`.
    pub extra: Option<usize>,
}

pub(crate) const TUPLES: [Tuple; 8] = [
    Tuple { orders: &[19], h: [&[1], &[1], &[7], &[15], &[0], &[1]], extra: None },
    Tuple { orders: &[21], h: [&[3], &[3], &[1], &[9], &[0], &[3]], extra: None },
    Tuple { orders: &[5, 5], h: [&[1, 2], &[0, 1], &[1, 1], &[2, 2], &[0, 0], &[1, 4]], extra: None },
    Tuple { orders: &[9, 3], h: [&[5, 2], &[2, 2], &[3, 1], &[1, 0], &[0, 0], &[5, 2]], extra: None },
    Tuple {
        orders: &[3, 3, 3],
        h: [&[1, 1, 0], &[0, 0, 1], &[0, 2, 2], &[2, 2, 0], &[0, 0, 0], &[1, 1, 0]],
        extra: Some(1),
    },
    Tuple { orders: &[17], h: [&[3], &[2], &[2], &[6], &[0], &[3]], extra: Some(1) },
    Tuple { orders: &[15], h: [&[3], &[10], &[1], &[1], &[0], &[8]], extra: Some(2) },
    Tuple { orders: &[13], h: [&[1], &[1], &[1], &[9], &[0], &[1]], extra: Some(4) },
];

impl Tuple {
    pub fn group(&self) -> GroupSpec {
        GroupSpec::new(self.orders).unwrap()
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        let g = self.group();
        self.h.iter().map(|r| g.element(r).unwrap()).collect()
    }

    /// Whether the good function on `graph` behaves as stated, with `t` as
    /// the distinguished triangle.
    pub fn behaves(&self, graph: &ColoredCubicGraph, t: &TriangleSpec) -> bool {
        let f = good_from_externals(graph, &self.group(), &self.elements()).unwrap();
        let c = check_condition(&f).unwrap();
        match self.extra {
            None => c.holds,
            Some(k) => {
                let c2 = check_condition2(&f, t).unwrap();
                c.extra_triples.len() == k && c2.holds
            }
        }
    }
}

fn cyclic(n: u64, h: [i64; 6]) -> (GroupSpec, GoodFunction) {
    let g = GroupSpec::cyclic(n).unwrap();
    let h: Vec<GroupElement> = h.iter().map(|&x| g.element(&[x]).unwrap()).collect();
    let f = good_from_externals(&truncated_tetrahedron(), &g, &h).unwrap();
    (g, f)
}

#[test]
fn tetrahedron_shape() {
    let g = truncated_tetrahedron();
    assert_eq!(g.vertex_count, 12);
    assert_eq!(g.edge_count(), 18);
    assert_eq!(g.triangles().len(), 4);
    assert_eq!(g.external_edges(), vec![0, 1, 2, 3, 4, 5]);
    assert!(g.is_properly_colored());
    assert!(!g.is_bipartite());
    assert!(g.is_connected());
    // K_4 has six proper 3-edge-colorings and each extends uniquely
    assert_eq!(g.all_colorings().len(), 6);
}

#[test]
fn bipartite_and_improper_graphs() {
    // K_{3,3} with a proper coloring
    let edges = (0..3)
        .flat_map(|a| (0..3).map(move |b| Edge { u: a, v: 3 + b, color: Color::ALL[(a + b) % 3] }))
        .collect();
    let k33 = ColoredCubicGraph::new(6, edges).unwrap();
    assert!(k33.is_bipartite());
    assert!(k33.triangles().is_empty());
    let f = GoodFunction::zero(&k33, &GroupSpec::cyclic(3).unwrap());
    assert!(matches!(check_condition(&f), Err(Error::Hypothesis(_))));
    let mut bad = truncated_tetrahedron().edges;
    bad[0].color = Color::Red;
    assert!(matches!(ColoredCubicGraph::new(12, bad), Err(Error::Structure(_))));
    let g = GroupSpec::cyclic(3).unwrap();
    assert!(matches!(good_from_externals(&k33, &g, &[]), Err(Error::Structure(_))));
}

#[test]
fn zero_function() {
    let graph = truncated_tetrahedron();
    let g = GroupSpec::cyclic(7).unwrap();
    let zero = good_from_externals(&graph, &g, &vec![g.zero(); 6]).unwrap();
    assert_eq!(zero, GoodFunction::zero(&graph, &g));
    assert!(is_good(&zero));
    let x = point_of(&zero).unwrap();
    for b in 0..3 {
        assert_eq!(x.block(b)[0], 12);
        assert!(x.block(b)[1..].iter().all(|&c| c == 0));
    }
    assert!(!check_condition(&zero).unwrap().holds);
    let c2 = check_condition2(&zero, &upper_left_triangle(&graph)).unwrap();
    assert!(!c2.holds && c2.violates_i);
    let broken = zero.with_value(7, &g.element(&[3]).unwrap()).unwrap();
    assert!(!is_good(&broken));
    assert!(matches!(point_of(&broken), Err(Error::Precondition(_))));
    assert!(matches!(check_condition(&broken), Err(Error::Precondition(_))));
}

#[test]
fn even_order_cannot_halve() {
    let g = GroupSpec::cyclic(4).unwrap();
    let r = good_from_externals(&truncated_tetrahedron(), &g, &vec![g.zero(); 6]);
    assert!(matches!(r, Err(Error::Divisibility(_))));
    assert!(matches!(search_h(&g, SearchMode::Exhaustive, 0, None, 1), Err(Error::Divisibility(_))));
}

#[test]
fn triangle_sides_solve_the_vertex_system() {
    // at the corner with external h3 the blue and yellow sides meet, and so on
    let (g, f) = cyclic(101, [5, 17, 40, 0, 0, 0]);
    let t = upper_left_triangle(&f.graph);
    let v = |e: usize| f.value(e).residues()[0] as i64;
    let half = |x: i64| g.element(&[x * 51]).unwrap().residues()[0] as i64;
    assert_eq!(v(t.t_b), half(5 - 17 - 40));
    assert_eq!(v(t.t_y), half(17 - 5 - 40));
    assert_eq!(v(t.t_r), half(40 - 5 - 17));
    assert_ne!(v(t.t_b), half(-5 + 17 + 40));
}

#[test]
fn not_a_triangle() {
    let (_, f) = cyclic(13, [1, 1, 1, 9, 0, 1]);
    let bogus = TriangleSpec { t_b: 0, t_y: 1, t_r: 2 };
    assert!(matches!(check_condition2(&f, &bogus), Err(Error::Structure(_))));
    let t = upper_left_triangle(&f.graph);
    let swapped = TriangleSpec { t_b: t.t_y, t_y: t.t_b, t_r: t.t_r };
    assert!(matches!(check_condition2(&f, &swapped), Err(Error::Structure(_))));
}

#[test]
fn reference_tuples_behave_as_stated() {
    let graph = truncated_tetrahedron();
    let t = upper_left_triangle(&graph);
    for tuple in &TUPLES {
        assert!(tuple.behaves(&graph, &t), "{:?}", tuple.orders);
    }
}

#[test]
fn stated_extra_triples() {
    let graph = truncated_tetrahedron();
    let t = upper_left_triangle(&graph);
    let report = |i: usize| {
        let f = good_from_externals(&graph, &TUPLES[i].group(), &TUPLES[i].elements()).unwrap();
        check_condition2(&f, &t).unwrap()
    };
    // h4 + h5 + h6 over Z_3^3
    assert_eq!(report(4).extra_triples, vec![[3, 4, 5]]);
    // one internal blue side, h2, one internal red side
    let z17 = report(5).extra_triples;
    assert_eq!(z17.len(), 1);
    assert_eq!(z17[0][1], 1);
    assert!(z17[0][0] >= 6 && z17[0][2] >= 6);
    let z15 = report(6).extra_triples;
    assert_eq!(z15.len(), 2);
    assert!(z15.contains(&z17[0]));
    assert!(z15.iter().any(|tr| tr[1] == 4 && tr[2] == 2));
    for r in [report(4), report(5), report(6)] {
        assert!(r.extra_triples.iter().all(|tr| tr.iter().all(|&e| !t.contains(e))));
    }
    let z13 = report(7).extra_triples;
    assert_eq!(z13.len(), 4);
    for tr in &z13 {
        let inside = tr.iter().filter(|&&e| t.contains(e)).count();
        assert!(inside == 0 || inside == 2, "{tr:?}");
    }
}

#[test]
fn frozen_layout_is_among_valid_layouts() {
    let valid = search_layouts(|g, t| TUPLES.iter().all(|tuple| tuple.behaves(g, t)));
    assert!(valid.contains(&Layout::frozen()));
    assert_eq!(Layout::frozen().graph(), truncated_tetrahedron());
}

#[test]
fn witnesses_do_not_decompose() {
    let graph = truncated_tetrahedron();
    for tuple in TUPLES.iter().filter(|t| t.group().order() <= 21) {
        let g = tuple.group();
        let f = good_from_externals(&graph, &g, &tuple.elements()).unwrap();
        let x = point_of(&f).unwrap();
        assert!(x.coords().iter().all(|c| c % 2 == 0));
        let model = PolytopeModel::tripod(&g).unwrap();
        let half = model.halve(&x).unwrap();
        assert!(model.point_in_lattice(&half).unwrap());
        let p = halved_point(&f).unwrap();
        assert_eq!(decompose(&model, &p, 6).unwrap(), None, "{:?}", tuple.orders);
    }
}

#[test]
fn condition_counts() {
    let graph = truncated_tetrahedron();
    for t in 0..4 {
        let c = count_conditions(&graph, &tetra_triangle(&graph, t)).unwrap();
        assert_eq!((c.count_i, c.count_ii, c.count_iii, c.total), (1, 15, 27, 43), "triangle {t}");
        assert_eq!(c.iii_by_color, [9, 9, 9]);
        assert_eq!(c.forms.len(), 43);
        assert!(c.forms.iter().all(|f| f.unit_coefficient().is_some()));
    }
}

/// Brute force over Z_n^6: tuples violating some counted condition.
fn violating_tuples(n: u64) -> u64 {
    let graph = truncated_tetrahedron();
    let forms = count_conditions(&graph, &upper_left_triangle(&graph)).unwrap().forms;
    let n = n as i64;
    let mut bad = 0;
    for code in 0..n.pow(6) {
        let h: Vec<i64> = (0..6).map(|i| code / n.pow(i) % n).collect();
        if forms.iter().any(|f| f.twice.iter().zip(&h).map(|(c, x)| c * x).sum::<i64>().rem_euclid(n) == 0) {
            bad += 1;
        }
    }
    bad as u64
}

#[test]
fn counted_conditions_are_exactly_the_checker() {
    // the 43 forms cut out precisely the tuples failing the full checker
    let graph = truncated_tetrahedron();
    let t = upper_left_triangle(&graph);
    let g = GroupSpec::cyclic(7).unwrap();
    let forms = count_conditions(&graph, &t).unwrap().forms;
    let mut mismatches = 0;
    for code in 0..7i64.pow(6) {
        let h: Vec<i64> = (0..6).map(|i| code / 7i64.pow(i) % 7).collect();
        let by_forms = forms.iter().all(|f| f.twice.iter().zip(&h).map(|(c, x)| c * x).sum::<i64>().rem_euclid(7) != 0);
        let hs: Vec<GroupElement> = h.iter().map(|&x| g.element(&[x]).unwrap()).collect();
        let f = good_from_externals(&graph, &g, &hs).unwrap();
        if by_forms != check_condition2(&f, &t).unwrap().holds {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
    // union bound: at most 43 |G|^5 bad tuples
    assert!(violating_tuples(7) <= 43 * 7u64.pow(5));
}

#[test]
fn z3_has_no_witness() {
    let g = GroupSpec::cyclic(3).unwrap();
    let out = search_h(&g, SearchMode::Exhaustive, 0, None, 2).unwrap();
    assert_eq!(out.witness, None);
    assert_eq!(out.trials, 729);
}

#[test]
fn searches_find_witnesses() {
    let g = GroupSpec::cyclic(19).unwrap();
    let w = search_h(&g, SearchMode::Exhaustive, 0, None, 4).unwrap().witness.unwrap();
    let f = good_from_externals(&truncated_tetrahedron(), &g, &w.h).unwrap();
    assert!(check_condition2(&f, &w.triangle).unwrap().holds);
    assert_eq!(w.values, f.values());
    let model = PolytopeModel::tripod(&g).unwrap();
    assert_eq!(decompose(&model, &w.point, 6).unwrap(), None);
}

#[test]
fn exhaustive_search_is_deterministic_across_workers() {
    let g = GroupSpec::cyclic(13).unwrap();
    let one = search_h(&g, SearchMode::Exhaustive, 0, None, 1).unwrap();
    let four = search_h(&g, SearchMode::Exhaustive, 0, None, 4).unwrap();
    assert_eq!(one, four);
    assert!(one.witness.is_some());
    let r1 = search_h(&g, SearchMode::Random, 9, None, 1).unwrap();
    let r2 = search_h(&g, SearchMode::Random, 9, None, 3).unwrap();
    assert_eq!(r1, r2);
}

#[test]
fn z45_random_search() {
    let g = GroupSpec::cyclic(45).unwrap();
    let out = search_h(&g, SearchMode::Random, 0, Some(10_000), 1).unwrap();
    assert!(out.witness.is_some());
    assert!(out.trials <= 10_000);
}

#[test]
fn integer_window() {
    let r = integer_window_check(&[7, 7, -4, -6, 0, 7]).unwrap();
    assert!(r.integral);
    assert_eq!((r.min, r.max), (-26, 21));
    assert!(!r.sums.contains(&23) && !r.sums.contains(&25));
    assert!(r.zero_only_at_vertices);
    for n in (23..=41).step_by(2) {
        assert!(r.passes_mod(n), "{n}");
    }
    let zero = integer_window_check(&[0; 6]).unwrap();
    assert_eq!(zero.sums.iter().copied().collect::<Vec<_>>(), vec![0]);
    assert!(!zero.zero_only_at_vertices);
    let odd = integer_window_check(&[1, 0, 0, 0, 0, 0]).unwrap();
    assert!(!odd.integral);
    assert_eq!(odd.denominator, 2);
    assert!(matches!(integer_window_check(&[1, 2]), Err(Error::Domain(_))));
}

#[test]
fn window_agrees_with_modular_checker() {
    let h = [7i64, 7, -4, -6, 0, 7];
    let r = integer_window_check(&h).unwrap();
    for n in (3..=45u64).step_by(2) {
        let (_, f) = cyclic(n, h);
        assert_eq!(check_condition(&f).unwrap().holds, r.passes_mod(n), "{n}");
    }
}

#[test]
fn serialization_round_trip() {
    let (_, f) = cyclic(13, [1, 1, 1, 9, 0, 1]);
    let s = serde_json::to_string(&f).unwrap();
    let back: GoodFunction = serde_json::from_str(&s).unwrap();
    assert_eq!(back, f);
    let g: ColoredCubicGraph = serde_json::from_str(&serde_json::to_string(&f.graph).unwrap()).unwrap();
    assert_eq!(g, f.graph);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn solved_functions_are_good(h in proptest::array::uniform6(0i64..13)) {
        let (_, f) = cyclic(13, h);
        prop_assert!(is_good(&f));
        // restricting to the externals and solving again is the identity
        let again = good_from_externals(&f.graph, &f.group, &f.externals()).unwrap();
        prop_assert_eq!(again, f);
    }

    #[test]
    fn points_have_even_coordinates(h in proptest::array::uniform6(0i64..15)) {
        let (g, f) = cyclic(15, h);
        let x = point_of(&f).unwrap();
        prop_assert!(x.coords().iter().all(|c| c % 2 == 0));
        prop_assert_eq!(x.degree(), Some(12));
        // every vertex of the graph names a zero-sum triple
        let t = g.table();
        for es in f.graph.incidence() {
            prop_assert_eq!(es.iter().fold(0, |a, &e| t.add(a, f.raw()[e])), 0);
        }
    }

    #[test]
    fn condition2_witnesses_do_not_decompose(h in proptest::array::uniform6(0i64..13)) {
        let (g, f) = cyclic(13, h);
        let graph = &f.graph;
        if let Some(t) = (0..4).map(|i| tetra_triangle(graph, i)).find(|t| check_condition2(&f, t).unwrap().holds) {
            let model = PolytopeModel::tripod(&g).unwrap();
            prop_assert!(t.edges().iter().all(|&e| graph.edges[e].color == Color::ALL[t.edges().iter().position(|&x| x == e).unwrap()]));
            prop_assert_eq!(decompose(&model, &halved_point(&f).unwrap(), 6).unwrap(), None);
        }
    }
}

#[test]
fn z11_has_no_witness_on_this_graph() {
    let g = GroupSpec::cyclic(11).unwrap();
    let out = search_h(&g, SearchMode::Exhaustive, 0, None, 2).unwrap();
    assert_eq!(out.witness, None);
    assert_eq!(out.trials, 11u64.pow(6));
}
