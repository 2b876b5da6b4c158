use suppdiff::conditions::{check_condition, check_convexity, replay, CheckConfig, Condition};
use suppdiff::fixtures::set_fixture;

fn main() -> suppdiff::error::Result<()> {
    let cfg = CheckConfig::default().with_samples(400);
    for (name, cond) in [
        ("d4", Condition::ChordsIntK),
        ("d4", Condition::TranslatesIntK),
        ("ex3a", Condition::TranslatesIntK),
        ("hyperbola", Condition::StrictChords),
        ("ex-adsz-L", Condition::BoundaryChordsA),
    ] {
        let set = set_fixture(name)?;
        let cfg = cfg.clone().with_source(name);
        let r = check_condition(&set, cond, &cfg)?;
        println!("{name:>10} {:<8} {:?} on {} samples", cond.id(), r.verdict, r.sample_count);
        if let Some(w) = r.witnesses.first() {
            println!("    witness {:?} lambda {:?}, replays: {}", w.points, w.lambda, replay(&set, cond, w, &cfg));
            println!("    {}", cfg.check_command(&set, cond.id()));
        }
    }
    let ex1 = set_fixture("ex1")?;
    println!("ex1 convexity: {:?}", check_convexity(&ex1, &cfg)?.verdict);
    Ok(())
}
