//! The conditions a random labeling must avoid, and the integer labeling
//! that works for every large odd cyclic group at once.
//!
//! cargo run --example counting

use phylonorm::graphs::{count_conditions, integer_window_check, truncated_tetrahedron, upper_left_triangle};

fn main() -> anyhow::Result<()> {
    let graph = truncated_tetrahedron();
    let counts = count_conditions(&graph, &upper_left_triangle(&graph))?;
    println!(
        "conditions: {} + {} + {} = {}",
        counts.count_i, counts.count_ii, counts.count_iii, counts.total
    );
    for f in counts.forms.iter().take(5) {
        println!("  ({}) edges {:?}: 2L = {:?}, unit coefficient {:?}", f.kind, f.edges, f.twice, f.unit_coefficient());
    }
    let all_units = counts.forms.iter().all(|f| f.unit_coefficient().is_some());
    println!("every form has a coefficient invertible modulo every odd order: {all_units}");
    println!("so at least |G|^5 (|G| - {}) labelings work when |G| is odd", counts.total);

    let window = integer_window_check(&[7, 7, -4, -6, 0, 7])?;
    println!("h = (7,7,-4,-6,0,7): tricolor sums in [{}, {}]", window.min, window.max);
    let passing: Vec<u64> = (3..=61).step_by(2).filter(|&n| window.passes_mod(n)).collect();
    println!("reductions mod n pass the vertex condition for odd n in {passing:?}");
    Ok(())
}
