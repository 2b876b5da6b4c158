//! The gauge `F_A(x) = sup{t > 0 : x/t in A}` and its behaviour near the
//! boundary of the cone.

use suppdiff::fixtures::set_fixture;
use suppdiff::gauge::{continuity_probe, gauge, gauge_bisect};
use suppdiff::vector::Vector;

fn main() -> suppdiff::error::Result<()> {
    let ex3d = set_fixture("ex3d")?;
    let x = Vector::new(vec![3.0, 4.0, 4.0])?;
    // closed form min x_i / a_i, and the bisection that backs every other set
    println!("ex3d gauge at (3,4,4): {} / bisection {:?}", gauge(&ex3d, &x)?.value, gauge_bisect(&ex3d, &x)?);

    let radii = [1e-1, 1e-2, 1e-3, 1e-4];
    for (name, x0) in [("ex3c", vec![1.0, 0.0, 1.0]), ("ex3d", vec![1.0, 2.0, 4.0]), ("d4", vec![1.0, 0.0, 0.0])] {
        let set = set_fixture(name)?;
        let osc = continuity_probe(&set, &x0, &radii, 64, 7);
        println!("{name:>5} oscillation near {x0:?}:");
        for (r, o) in radii.iter().zip(&osc) {
            println!("    r = {r:.0e}  osc = {o:.3e}");
        }
    }
    Ok(())
}
