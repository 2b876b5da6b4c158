//! Describing a new set: a membership test, a cone and one point of the set
//! are enough. Closed forms are optional and only make things faster.

use std::sync::Arc;

use suppdiff::cone::Cone;
use suppdiff::sets::{shifted_cone, HSet, MemberFn, ProductionFn};
use suppdiff::support::{is_differentiable_at, support_value};
use suppdiff::vector::Vector;
use suppdiff::{cost, gauge};

fn main() -> suppdiff::error::Result<()> {
    // sqrt(x1) + sqrt(x2) >= 2 on the orthant
    let member: MemberFn = Arc::new(|x: &[f64]| x[0] >= 0.0 && x[1] >= 0.0 && x[0].sqrt() + x[1].sqrt() >= 2.0);
    let set = HSet::new("root-sum", Cone::orthant(2)?, vec![1.0, 1.0], member)?.convex(true);
    let y = Vector::new(vec![-1.0, -3.0])?;
    println!("sigma = {}", support_value(&set, &y)?.value);
    println!("differentiable: {:?}", is_differentiable_at(&set, &y)?.verdict);
    println!("gauge at (4,1): {}", gauge::gauge(&set, &Vector::new(vec![4.0, 1.0])?)?.value);

    // a translated polyhedral cone
    let cone = Cone::polyhedral(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, -1.0]])?;
    let shifted = shifted_cone(&Vector::new(vec![1.0, 1.0, 1.0])?, &cone)?;
    println!("shifted cone gauge at (2,2,2): {}", gauge::gauge(&shifted, &Vector::new(vec![2.0, 2.0, 2.0])?)?.value);

    // production functions work the same way; the witness maps a level to a point reaching it
    let f = ProductionFn::new("sum-of-roots", 2, Arc::new(|x: &[f64]| (x[0].max(0.0).sqrt() + x[1].max(0.0).sqrt()).powi(2)), Arc::new(|g: f64| Some(vec![g / 4.0, g / 4.0])));
    println!("cost at (1,3), level 4: {}", cost::cost_value(&f, &Vector::new(vec![1.0, 3.0])?, 4.0)?);
    Ok(())
}
