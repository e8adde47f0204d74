//! Searches external labels on the 12-vertex graph for a good function that
//! passes the triangle conditions.
//!
//! cargo run --release --example graph_search -- 13 exhaustive
//! cargo run --release --example graph_search -- 45 random 7

use phylonorm::config::SearchMode;
use phylonorm::graphs::search_h;
use phylonorm::GroupSpec;

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let orders: Vec<u64> = args
        .first()
        .map(|s| s.split(',').map(|x| x.parse()).collect())
        .unwrap_or(Ok(vec![13]))?;
    let mode = match args.get(1).map(String::as_str) {
        Some("random") => SearchMode::Random,
        _ => SearchMode::Exhaustive,
    };
    let seed = args.get(2).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let group = GroupSpec::new(&orders)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let out = search_h(&group, mode, seed, None, workers)?;
    match &out.witness {
        Some(w) => {
            let h: Vec<String> = w.h.iter().map(|e| e.to_string()).collect();
            println!("{group}: h = ({}) works for triangle {} after {} tuples", h.join(", "), w.triangle_index, out.trials);
            println!("point of degree 6: {}", w.point);
        }
        None => println!("{group}: no witness among {} tuples", out.trials),
    }
    Ok(())
}
