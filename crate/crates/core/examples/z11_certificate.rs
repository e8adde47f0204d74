//! A degree-8 point of P_{Z11,3} that is not a sum of 8 vertices.
//!
//! Checks lattice membership, builds the exact rational combination showing
//! the point lies in 8P, runs the exhaustive decomposition search, and
//! writes the resulting certificate.
//!
//! cargo run --release --example z11_certificate -- [out.json]

use std::time::Instant;

use phylonorm::normality::{verify_certificate, NonNormalityCertificate};
use phylonorm::{GPresentation, GroupSpec, PolytopeModel};

fn main() -> anyhow::Result<()> {
    let out = std::env::args().nth(1);
    let group = GroupSpec::cyclic(11)?;
    let model = PolytopeModel::tripod(&group)?;
    let point = GPresentation::cyclic(
        &group,
        &[&[0, 0, 1, 2, 4, 4, 5, 10], &[1, 1, 1, 3, 5, 5, 6, 8], &[0, 2, 5, 6, 6, 6, 8, 10]],
    )?;
    let x = model.point(&point)?;
    println!("{point}");
    println!("in the vertex lattice: {}", model.point_in_lattice(&x)?);

    let start = Instant::now();
    let cert = NonNormalityCertificate::for_point(&model, &point)?;
    println!(
        "in 8P with {} weighted vertices; no decomposition ({} search nodes, {:.1?})",
        cert.membership.len(),
        cert.search_stats.decompose_nodes,
        start.elapsed()
    );
    for w in cert.membership.iter().take(4) {
        let v: Vec<String> = w.vertex.iter().map(|g| g.to_string()).collect();
        println!("  {} * x({})", w.weight, v.join(","));
    }
    println!("re-verified: {}", verify_certificate(&cert)?);
    if let Some(path) = out {
        std::fs::write(&path, cert.to_json()?)?;
        println!("wrote {path}");
    }
    Ok(())
}
