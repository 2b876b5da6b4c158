// Level by level: which axioms hold, which set conditions the level set
// satisfies, and whether the cost function is differentiable on a price grid.

use suppdiff::conditions::CheckConfig;
use suppdiff::cone::Cone;
use suppdiff::cost::harness_saijo;
use suppdiff::fixtures::production_fixture;
use suppdiff::support::dual_grid;

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(200).with_grid(30);
    let grid = dual_grid(&Cone::orthant(2)?, cfg.grid);
    for (name, gammas) in [("cobb-douglas", vec![1.0]), ("ex-adsz", vec![2.5]), ("phi-g", vec![1.0, 3.0])] {
        let r = harness_saijo(&production_fixture(name)?, &gammas, &grid, &cfg)?;
        println!("{name}: {:?}", r.status);
        for s in &r.sections {
            println!("  gamma {}", s.gamma);
            for n in &s.notes {
                println!("    {n}");
            }
        }
    }
    Ok(())
}
