//! Normality of P_{G,3} for every abelian group up to an order.
//!
//! cargo run --release --example classify -- 8

use phylonorm::classify::{classify_with, VerdictKind};
use phylonorm::normality::CheckOptions;

fn main() -> anyhow::Result<()> {
    let max_order = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(8);
    let options = CheckOptions { workers: std::thread::available_parallelism().map_or(1, |n| n.get()), ..CheckOptions::default() };
    let table = classify_with(max_order, &options, |row| {
        let detail = match row.verdict {
            VerdictKind::Normal => String::new(),
            VerdictKind::NonNormal => format!(" at degree {}", row.witness_degree.unwrap()),
            VerdictKind::Inconclusive => format!(" (verified through degree {})", row.verified_through),
        };
        println!("{:>10}  {:?}{detail}", row.group.to_string(), row.verdict);
    })?;
    let normal: Vec<String> = table.normal_groups().iter().map(|g| g.to_string()).collect();
    println!("normal: {}", normal.join(", "));
    Ok(())
}
