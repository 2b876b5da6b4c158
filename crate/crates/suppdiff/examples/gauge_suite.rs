//! Gauge properties on a set with the (H) hypothesis, and the continuity
//! dichotomy between polyhedral and round cones.

use suppdiff::conditions::CheckConfig;
use suppdiff::fixtures::set_fixture;
use suppdiff::gauge::{harness_cor_cfa, harness_prop_fa};

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(300);
    for name in ["hyperbola", "d4", "ex3d", "ex2-A3"] {
        let r = harness_prop_fa(&set_fixture(name)?, &cfg);
        println!("prop-fa {name:>10}: {:?}", r.status);
        for c in &r.conditions {
            println!("    {:<22} {:?}", c.condition_id, c.verdict);
        }
    }
    for name in ["ex3c", "ex3d", "ex3d-poly"] {
        let r = harness_cor_cfa(&set_fixture(name)?, &cfg);
        let bad = r.probes.iter().filter(|p| p.discontinuous).count();
        println!("cor-cfa {name:>10}: polyhedral {}, {bad} of {} probes discontinuous, {:?}", r.polyhedral, r.probes.len(), r.status);
    }
    Ok(())
}
