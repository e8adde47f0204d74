//! Good functions on the 12-vertex graph built from external labels, checked
//! against both vertex and triangle conditions, and turned into certificates.
//!
//! cargo run --release --example graph_witness

use phylonorm::graphs::{
    check_condition, check_condition2, good_from_externals, halved_point, truncated_tetrahedron, upper_left_triangle,
};
use phylonorm::normality::NonNormalityCertificate;
use phylonorm::{GroupSpec, PolytopeModel};

fn main() -> anyhow::Result<()> {
    let graph = truncated_tetrahedron();
    let t = upper_left_triangle(&graph);
    let cases: [(&[u64], [&[i64]; 6]); 4] = [
        (&[19], [&[1], &[1], &[7], &[15], &[0], &[1]]),
        (&[5, 5], [&[1, 2], &[0, 1], &[1, 1], &[2, 2], &[0, 0], &[1, 4]]),
        (&[17], [&[3], &[2], &[2], &[6], &[0], &[3]]),
        (&[13], [&[1], &[1], &[1], &[9], &[0], &[1]]),
    ];
    for (orders, h) in cases {
        let group = GroupSpec::new(orders)?;
        let h = h.iter().map(|r| group.element(r)).collect::<Result<Vec<_>, _>>()?;
        let f = good_from_externals(&graph, &group, &h)?;
        let c1 = check_condition(&f)?;
        let c2 = check_condition2(&f, &t)?;
        println!(
            "{group}: vertex condition {} ({} extra zero triples), triangle conditions {}",
            c1.holds,
            c1.extra_triples.len(),
            c2.holds
        );
        let point = halved_point(&f)?;
        let model = PolytopeModel::tripod(&group)?;
        let cert = NonNormalityCertificate::for_point(&model, &point)?;
        println!("  {} is in 6P and not a sum of 6 vertices ({} search nodes)", point, cert.search_stats.decompose_nodes);
    }
    Ok(())
}
