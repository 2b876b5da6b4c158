//! Axioms of production functions checked by sampling, and the implication
//! matrix between them.

use suppdiff::conditions::CheckConfig;
use suppdiff::cost::{axiom_command, check_axiom, harness_prop3};
use suppdiff::fixtures::production_fixture;
use suppdiff::sets::Axiom;

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(300);
    let f = production_fixture("ex-adsz")?;
    for ax in [Axiom::F2, Axiom::F3c, Axiom::F4, Axiom::F4b, Axiom::F4c] {
        let r = check_axiom(&f, ax, &cfg)?;
        println!("ex-adsz {:<5} {:?}", ax.name(), r.verdict);
        if !r.holds() {
            println!("    {}", axiom_command(&f, ax, &cfg));
        }
    }
    for name in ["cobb-douglas", "leontief", "phi-g"] {
        let r = harness_prop3(&production_fixture(name)?, &cfg)?;
        println!("{name}: {:?}", r.status);
        for row in &r.implications {
            let premises: Vec<&str> = row.premises.iter().map(|a| a.name()).collect();
            println!("    ({}) {} => {:<5} {:?}", row.part, premises.join(" + "), row.conclusion.name(), row.status);
        }
    }
    Ok(())
}
