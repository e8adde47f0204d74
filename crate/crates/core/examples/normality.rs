//! Decides normality of P_{G,3} and prints the per-degree report.
//!
//! cargo run --release --example normality -- 9
//! cargo run --release --example normality -- 7 3     (stop after degree 3)

use std::time::Instant;

use phylonorm::normality::{check_normality, CheckOptions, Verdict};
use phylonorm::{GroupSpec, PolytopeModel};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let orders: Vec<u64> = match args.first() {
        Some(s) => s.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![5],
    };
    let group = GroupSpec::new(&orders)?;
    let model = PolytopeModel::tripod(&group)?;
    let max_degree = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(model.dim() as u64 - 1);
    let options = CheckOptions { workers: std::thread::available_parallelism().map_or(1, |n| n.get()), ..CheckOptions::default() };

    let start = Instant::now();
    let report = check_normality(&model, max_degree, &options)?;
    println!("{group}: dim {}, checking degrees up to {max_degree}", model.dim());
    for d in &report.checked_degrees {
        println!("  degree {:>2}: {:?} via {:?}, {} points", d.degree, d.status, d.method, d.points);
    }
    if let Some(c) = &report.cover {
        println!(
            "  triangulation: {} simplices, volume {}, {} not unimodular",
            c.simplices, c.normalized_volume, c.non_unimodular_simplices
        );
    }
    match &report.verdict {
        Verdict::Normal => println!("normal"),
        Verdict::NonNormal { certificate } => {
            println!("not normal: {} does not decompose at degree {}", certificate.point, certificate.degree)
        }
        Verdict::Inconclusive { verified_through, reason } => {
            println!("inconclusive: verified through degree {verified_through}; {reason}")
        }
    }
    println!("({:.1?})", start.elapsed());
    Ok(())
}
