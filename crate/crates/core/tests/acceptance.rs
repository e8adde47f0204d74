//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and fails if any criterion fails.
//!
//! cargo test --release --test acceptance

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use phylonorm::classify::{classify, VerdictKind};
use phylonorm::config::SearchMode;
use phylonorm::graphs::{
    check_condition, check_condition2, count_conditions, good_from_externals, halved_point, integer_window_check,
    point_of, search_h, truncated_tetrahedron, upper_left_triangle,
};
use phylonorm::normality::{
    check_normality, decompose, decompose_point, verify_certificate, CheckOptions, NonNormalityCertificate,
    SymmetryGroup, Verdict,
};
use phylonorm::{AmbientPoint, GPresentation, GroupSpec, PolytopeModel};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn group(orders: &[u64]) -> GroupSpec {
    GroupSpec::new(orders).unwrap()
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:.1?}, limit {limit:?}"));
    }
    Ok(())
}

/// Criterion 1: |vertices(G,3)| = |G|^2, each under a second.
fn vertex_counts() -> Outcome {
    for orders in [&[2][..], &[3], &[4], &[2, 2], &[5], &[7], &[9], &[3, 3], &[11]] {
        let g = group(orders);
        let start = Instant::now();
        let model = PolytopeModel::tripod(&g).map_err(|e| e.to_string())?;
        let verts = model.vertices();
        within(start, Duration::from_secs(1), &format!("{g}"))?;
        let n = g.order() as usize;
        ensure!(verts.len() == n * n, "{g}: {} vertices", verts.len());
        let distinct: HashSet<&[u32]> = verts.iter().map(|v| v.coords()).collect();
        ensure!(distinct.len() == n * n, "{g}: repeated vertices");
    }
    Ok("9 groups".into())
}

fn complete_check(orders: &[u64]) -> Result<(phylonorm::normality::NormalityReport, Duration), String> {
    let model = PolytopeModel::tripod(&group(orders)).map_err(|e| e.to_string())?;
    let options = CheckOptions { workers: workers(), ..CheckOptions::default() };
    let start = Instant::now();
    let r = check_normality(&model, model.dim() as u64 - 1, &options).map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

/// Criterion 2: Complete verdicts for the small groups, Z5 and Z7; certificates for Z9
/// and Z3 x Z3.
fn normality_verdicts() -> Outcome {
    let mut notes = Vec::new();
    for (orders, limit) in [(&[2][..], 600), (&[3], 600), (&[2, 2], 600), (&[4], 600), (&[5], 3600), (&[7], 3600)] {
        let (r, t) = complete_check(orders)?;
        ensure!(t <= Duration::from_secs(limit), "{orders:?} took {t:.1?}");
        ensure!(r.is_normal(), "{orders:?}: {:?}", r.verdict);
        notes.push(format!("{} normal {t:.1?}", r.group));
    }
    for orders in [&[9][..], &[3, 3]] {
        let (r, t) = complete_check(orders)?;
        ensure!(t <= Duration::from_secs(3600), "{orders:?} took {t:.1?}");
        let cert = r.certificate().ok_or_else(|| format!("{orders:?}: {:?}", r.verdict))?;
        let json = cert.to_json().map_err(|e| e.to_string())?;
        let back = NonNormalityCertificate::from_json(&json).map_err(|e| e.to_string())?;
        ensure!(matches!(verify_certificate(&back), Ok(true)), "{orders:?}: certificate does not verify");
        notes.push(format!("{} non-normal at degree {} {t:.1?}", r.group, cert.degree));
    }
    Ok(notes.join("; "))
}

/// Criterion 3: The explicit degree-8 point for Z11.
fn z11_certificate() -> Outcome {
    let start = Instant::now();
    let g = group(&[11]);
    let model = PolytopeModel::tripod(&g).map_err(|e| e.to_string())?;
    let p = GPresentation::cyclic(&g, &[&[0, 0, 1, 2, 4, 4, 5, 10], &[1, 1, 1, 3, 5, 5, 6, 8], &[0, 2, 5, 6, 6, 6, 8, 10]])
        .map_err(|e| e.to_string())?;
    let x = model.point(&p).map_err(|e| e.to_string())?;
    ensure!(matches!(model.point_in_lattice(&x), Ok(true)), "not in the lattice");
    let w = model.in_dilation(&x, 8).map_err(|e| e.to_string())?.ok_or("not in 8P")?;
    ensure!(model.check_membership(&x, 8, &w), "membership weights do not check");
    ensure!(matches!(decompose(&model, &p, 8), Ok(None)), "decomposes");
    within(start, Duration::from_secs(300), "Z11 point")?;
    Ok(format!("{} weighted vertices, {:.1?}", w.len(), start.elapsed()))
}

struct Tuple {
    orders: &'static [u64],
    h: [&'static [i64]; 6],
    extra: Option<usize>,
}

const TUPLES: [Tuple; 8] = [
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

/// Criterion 4: Each labeling passes the stated checker and gives a non-decomposable
/// degree-6 point.
fn labeling_pipeline() -> Outcome {
    let graph = truncated_tetrahedron();
    let t = upper_left_triangle(&graph);
    for tuple in &TUPLES {
        let start = Instant::now();
        let g = group(tuple.orders);
        let h: Vec<_> = tuple.h.iter().map(|r| g.element(r).unwrap()).collect();
        let f = good_from_externals(&graph, &g, &h).map_err(|e| e.to_string())?;
        let c1 = check_condition(&f).map_err(|e| e.to_string())?;
        match tuple.extra {
            None => ensure!(c1.holds, "{g}: vertex condition fails"),
            Some(k) => {
                ensure!(!c1.holds && c1.extra_triples.len() == k, "{g}: {} extra triples, expected {k}", c1.extra_triples.len());
                let c2 = check_condition2(&f, &t).map_err(|e| e.to_string())?;
                ensure!(c2.holds, "{g}: triangle conditions fail");
            }
        }
        let x = point_of(&f).map_err(|e| e.to_string())?;
        let model = PolytopeModel::tripod(&g).map_err(|e| e.to_string())?;
        let half = model.halve(&x).map_err(|e| e.to_string())?;
        let p = halved_point(&f).map_err(|e| e.to_string())?;
        ensure!(model.point(&p).ok() == Some(half), "{g}: halving mismatch");
        ensure!(matches!(decompose(&model, &p, 6), Ok(None)), "{g}: halved point decomposes");
        within(start, Duration::from_secs(60), &format!("{g}"))?;
    }
    Ok("8 labelings".into())
}

/// Criterion 5: 1 + 15 + 27 = 43 conditions, each with an invertible coefficient; a
/// random search on Z45 succeeds within 10^4 draws.
fn counting() -> Outcome {
    let graph = truncated_tetrahedron();
    let c = count_conditions(&graph, &upper_left_triangle(&graph)).map_err(|e| e.to_string())?;
    ensure!((c.count_i, c.count_ii, c.count_iii, c.total) == (1, 15, 27, 43), "counts {c:?}");
    ensure!(c.iii_by_color == [9, 9, 9], "per color {:?}", c.iii_by_color);
    ensure!(c.forms.iter().all(|f| f.unit_coefficient().is_some()), "a form without a unit coefficient");
    let g = group(&[45]);
    let out = search_h(&g, SearchMode::Random, 0, Some(10_000), 1).map_err(|e| e.to_string())?;
    let w = out.witness.ok_or("no Z45 witness in 10^4 draws")?;
    let model = PolytopeModel::tripod(&g).map_err(|e| e.to_string())?;
    let cert = NonNormalityCertificate::for_point(&model, &w.point).map_err(|e| e.to_string())?;
    ensure!(matches!(verify_certificate(&cert), Ok(true)), "Z45 certificate does not verify");
    Ok(format!("Z45 witness after {} draws", out.trials))
}

/// Criterion 6: Integer labeling (7,7,-4,-6,0,7) and its reductions mod n.
fn integer_window() -> Outcome {
    let h = [7i64, 7, -4, -6, 0, 7];
    let r = integer_window_check(&h).map_err(|e| e.to_string())?;
    ensure!(r.integral, "non-integral labels");
    ensure!((r.min, r.max) == (-26, 21), "window [{}, {}]", r.min, r.max);
    ensure!(!r.sums.contains(&23) && !r.sums.contains(&25), "23 or 25 attained");
    ensure!(r.zero_only_at_vertices, "zero away from vertices");
    let graph = truncated_tetrahedron();
    let mut failing = Vec::new();
    for n in (21..=41).step_by(2) {
        let g = group(&[n]);
        let hs: Vec<_> = h.iter().map(|&x| g.element(&[x]).unwrap()).collect();
        let f = good_from_externals(&graph, &g, &hs).map_err(|e| e.to_string())?;
        let c = check_condition(&f).map_err(|e| e.to_string())?;
        if !c.holds {
            failing.push(format!("n={n} ({} extra zero triples)", c.extra_triples.len()));
        }
    }
    ensure!(failing.is_empty(), "window [-26, 21] checks out, but the reduction fails for {}", failing.join(", "));
    Ok("n = 21..41".into())
}

fn vertex_sums(model: &PolytopeModel, k: usize) -> HashSet<Vec<u32>> {
    let verts: Vec<Vec<u32>> = model.vertices().iter().map(|v| v.coords().to_vec()).collect();
    let mut out = HashSet::new();
    let mut stack = vec![(0usize, 0usize, vec![0u32; model.ambient_dim()])];
    while let Some((start, used, acc)) = stack.pop() {
        if used == k {
            out.insert(acc);
            continue;
        }
        for (i, v) in verts.iter().enumerate().skip(start) {
            stack.push((i, used + 1, acc.iter().zip(v).map(|(a, b)| a + b).collect()));
        }
    }
    out
}

fn graded_vectors(n: usize, k: u32) -> Vec<Vec<u32>> {
    let mut comps: Vec<Vec<u32>> = vec![vec![]];
    for i in 0..n {
        comps = comps
            .into_iter()
            .flat_map(|c| {
                let used: u32 = c.iter().sum();
                let range = if i + 1 == n { (k - used)..=(k - used) } else { 0..=(k - used) };
                range.map(move |x| [c.clone(), vec![x]].concat())
            })
            .collect();
    }
    let mut out = vec![vec![]];
    for _ in 0..3 {
        out = out.into_iter().flat_map(|p: Vec<u32>| comps.iter().map(move |c| [p.clone(), c.clone()].concat())).collect();
    }
    out
}

/// Criterion 7: Property suites.
fn properties() -> Outcome {
    // completeness and soundness of decompose against brute force
    for orders in [&[2][..], &[3]] {
        let model = PolytopeModel::tripod(&group(orders)).unwrap();
        for k in 1..=4u32 {
            let sums = vertex_sums(&model, k as usize);
            for v in graded_vectors(model.order(), k) {
                let x = AmbientPoint::from_coords(model.order(), v.clone()).unwrap();
                let d = decompose_point(&model, &x, k as u64).map_err(|e| e.to_string())?;
                ensure!(d.witness.is_some() == sums.contains(&v), "{orders:?} k={k} {v:?}");
                if let Some(w) = d.witness {
                    ensure!(w.sums_to(&model, &x), "unsound decomposition of {v:?}");
                }
            }
        }
    }
    // halving: even lattice points have halves in the lattice
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for orders in [&[3][..], &[5], &[7], &[9], &[3, 3]] {
        let model = PolytopeModel::tripod(&group(orders)).unwrap();
        let n = model.order();
        for _ in 0..1000 {
            let k = rng.gen_range(1..8);
            let mut y = AmbientPoint::zero(n, 3);
            for _ in 0..k {
                y = y.add(&model.vertex(rng.gen_range(0..model.vertex_count()))).unwrap();
            }
            // move one unit inside a block: same block sums, usually off the lattice
            let mut c = y.coords().to_vec();
            if rng.gen_bool(0.5) {
                let b = rng.gen_range(0..3);
                let from = (0..n).find(|&g| c[b * n + g] > 0).unwrap();
                c[b * n + from] -= 1;
                c[b * n + rng.gen_range(0..n)] += 1;
            }
            let y = AmbientPoint::from_coords(n, c).unwrap();
            let x = y.scaled(2);
            let x_in = model.point_in_lattice(&x).unwrap();
            ensure!(x_in == model.point_in_lattice(&y).unwrap(), "{orders:?}: halving breaks lattice membership");
            if x_in {
                ensure!(model.halve(&x).ok() == Some(y), "{orders:?}: halve is not x/2");
            }
        }
    }
    // symmetries permute vertices and preserve decomposability
    let model = PolytopeModel::tripod(&group(&[6])).unwrap();
    let points = phylonorm::normality::enumerate_points(&model, 4, true, &CheckOptions::default()).unwrap();
    let sym = SymmetryGroup::new(&model, true).unwrap();
    for _ in 0..200 {
        let s = sym.random(&mut rng);
        let image: HashSet<Vec<u32>> = (0..model.vertex_count()).map(|i| sym.apply_tuple(&s, model.vertex_tuple(i))).collect();
        ensure!(image.len() == model.vertex_count(), "not a bijection");
        ensure!(image.iter().all(|t| model.vertex_index(t).is_some()), "leaves the vertex set");
        let x = &points[rng.gen_range(0..points.len())];
        let y = sym.apply(&s, x);
        let dx = decompose_point(&model, x, 4).unwrap().witness.is_some();
        let dy = decompose_point(&model, &y, 4).unwrap().witness.is_some();
        ensure!(dx == dy, "decomposability not preserved");
    }
    // certificate round trip
    let r = check_normality(&model, 5, &CheckOptions::default()).unwrap();
    let cert = r.certificate().ok_or("Z6 has no certificate")?;
    let back = NonNormalityCertificate::from_json(&cert.to_json().unwrap()).unwrap();
    ensure!(&back == cert && matches!(verify_certificate(&back), Ok(true)), "round trip");
    Ok("decompose, halving, symmetry, round trip".into())
}

/// Criterion 8: The classification table up to order 11.
fn classification() -> Outcome {
    let start = Instant::now();
    let options = CheckOptions { workers: workers(), ..CheckOptions::default() };
    let table = classify(11, &options).map_err(|e| e.to_string())?;
    ensure!(table.rows.len() == 14, "{} groups", table.rows.len());
    let normal: Vec<String> = table.normal_groups().iter().map(|g| g.to_string()).collect();
    ensure!(normal == ["Z2", "Z3", "Z2xZ2", "Z4", "Z5", "Z7"], "normal: {normal:?}");
    for row in &table.rows {
        if row.verdict == VerdictKind::NonNormal {
            let cert = row.report.certificate().unwrap();
            ensure!(matches!(verify_certificate(cert), Ok(true)), "{}: certificate fails", row.group);
        } else {
            ensure!(row.verdict == VerdictKind::Normal, "{}: {:?}", row.group, row.report.verdict);
        }
        ensure!(!matches!(row.report.verdict, Verdict::Inconclusive { .. }), "{} inconclusive", row.group);
    }
    Ok(format!("14 groups, {:.1?}", start.elapsed()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("vertex counts", vertex_counts),
        ("normality verdicts", normality_verdicts),
        ("Z11 certificate", z11_certificate),
        ("labeling pipeline", labeling_pipeline),
        ("counting argument", counting),
        ("integer window", integer_window),
        ("property suites", properties),
        ("classification table", classification),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{t:.1?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{t:.1?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
