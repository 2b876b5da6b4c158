//! The differentiability suites on a dual grid. Each returns a status and
//! any alarm comes with a command that reproduces it.

use suppdiff::conditions::{harness_cor11, harness_fact14, harness_prop_suf, CheckConfig};
use suppdiff::fixtures::set_fixture;
use suppdiff::support::dual_grid;

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(300).with_grid(40);
    for name in ["ex3b", "ex-adsz-L", "hyperbola", "ex3a"] {
        let set = set_fixture(name)?;
        let cfg = cfg.clone().with_source(name);
        let grid = dual_grid(&set.cone, cfg.grid);
        for r in [harness_fact14(&set, &grid, &cfg)?, harness_prop_suf(&set, &grid, &cfg)?, harness_cor11(&set, &grid, &cfg)?] {
            println!("{name:>10} {:<9} {:?}", r.suite, r.status);
            for n in &r.notes {
                println!("    note: {n}");
            }
            for a in &r.alarms {
                println!("    alarm {}: {} ({})", a.id, a.message, a.replay);
            }
        }
    }
    Ok(())
}
