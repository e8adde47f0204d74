//! Vertices, dimension and vertex lattice of P_{G,n}.
//!
//! cargo run --example vertices -- 3,3 [leaves]

use phylonorm::{GroupSpec, PolytopeModel};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let orders: Vec<u64> = match args.first() {
        Some(s) => s.split(',').map(str::parse).collect::<Result<_, _>>()?,
        None => vec![3],
    };
    let leaves = args.get(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let group = GroupSpec::new(&orders)?;
    let model = PolytopeModel::new(&group, leaves)?;
    println!("P_{{{group},{leaves}}}: {} vertices, dimension {}", model.vertex_count(), model.dim());
    for i in 0..model.vertex_count().min(6) {
        let names: Vec<String> = model.vertex_tuple(i).iter().map(|&g| group.element_at(g as usize).to_string()).collect();
        println!("  x({}) = {:?}", names.join(","), model.vertex(i).coords());
    }
    if model.vertex_count() > 6 {
        println!("  ...");
    }
    let basis = model.lattice_basis();
    println!("lattice basis (Hermite form, rank {}):", basis.rank());
    for row in basis.rows() {
        println!("  {row:?}");
    }
    // a point with equal block sums is in the lattice iff its weighted sum vanishes
    let two = model.vertex(1).add(&model.vertex(2))?;
    println!("sum of two vertices in the lattice: {}", model.point_in_lattice(&two)?);
    Ok(())
}
