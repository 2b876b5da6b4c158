// The chain of sampled conditions, with the S and E point samples it runs on.

use suppdiff::conditions::{rem1_chain, sample_s_and_e_sets, CheckConfig};
use suppdiff::fixtures::set_fixture;
use suppdiff::support::dual_grid;

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(300).with_grid(30);
    for name in ["d4", "ex3b", "ex-adsz-L", "ex3d"] {
        let set = set_fixture(name)?;
        let se = sample_s_and_e_sets(&set, &dual_grid(&set.cone, cfg.grid), &cfg)?;
        let chain = rem1_chain(&set, &cfg)?;
        println!("{name:>10}: |S| = {}, |E| = {}, inclusions hold: {}", chain.s_count, chain.e_count, se.inclusions_hold());
        for c in &chain.conditions {
            println!("    {:<8} {:?}", c.condition_id, c.verdict);
        }
        println!("    consistent: {}", chain.consistent());
    }
    Ok(())
}
