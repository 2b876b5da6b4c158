//! Support values and maximiser sets at a few dual points.
//!
//! `cargo run --example support_and_argmax`

use suppdiff::fixtures::set_fixture;
use suppdiff::support::{argmax_set, is_differentiable_at, support_value};
use suppdiff::vector::Vector;

fn main() -> suppdiff::error::Result<()> {
    let cases = [
        ("hyperbola", vec![-1.0, -4.0]),
        ("ex3b", vec![-1.0, -1.0]),
        ("ex-adsz-L", vec![-1.0, -1.0]),
        ("d4", vec![-1.0, -1.0, -1.0]),
        ("ex2-A3", vec![-1.0, -1.0]),
    ];
    for (name, y) in cases {
        let set = set_fixture(name)?;
        let xstar = Vector::new(y)?;
        let s = support_value(&set, &xstar)?;
        let a = argmax_set(&set, &xstar)?;
        let d = is_differentiable_at(&set, &xstar)?;
        println!("{name:>10} at {:?}", xstar.as_slice());
        println!("  sigma      = {:.9}", s.value);
        let (first, last) = (&a.representatives[0], &a.representatives[a.representatives.len() - 1]);
        println!("  argmax     = {} points from {first:?} to {last:?} (diameter {:.3e})", a.representatives.len(), a.diameter);
        println!("  verdict    = {:?}, gradient {:?}", d.verdict, d.gradient);
    }
    // outside the polar cone the support is +inf
    let set = set_fixture("hyperbola")?;
    println!("hyperbola at (1,-1): {}", support_value(&set, &Vector::new(vec![1.0, -1.0])?)?.value);
    Ok(())
}
