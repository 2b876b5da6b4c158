use suppdiff::conditions::CheckConfig;
use suppdiff::cost::{cost_value, random_prices, shephard_check, shephard_suite};
use suppdiff::fixtures::production_fixture;
use suppdiff::vector::Vector;

fn main() -> suppdiff::error::Result<()> {
    let cd = production_fixture("cobb-douglas")?;
    let p = Vector::new(vec![4.0, 1.0])?;
    // c(p, 1) = 2 sqrt(p1 p2) with demand (sqrt(p2/p1), sqrt(p1/p2))
    let r = shephard_check(&cd, &p, 1.0, None)?;
    println!("cobb-douglas c((4,1), 1) = {:.9}", cost_value(&cd, &p, 1.0)?);
    println!("  gradient {:?}  demand {:?}  lemma holds: {}", r.gradient_fd, r.demand, r.lemma_holds());

    // unit prices hit the flat edge of the level set at 5/2
    let adsz = production_fixture("ex-adsz")?;
    let r = shephard_check(&adsz, &Vector::new(vec![1.0, 1.0])?, 2.5, None)?;
    println!("ex-adsz at (1,1): cost {} differentiable {:?} diameter {:.4}", r.cost, r.differentiable, r.diameter);

    let cfg = CheckConfig::default();
    let suite = shephard_suite(&cd, 1.0, &random_prices(2, 20, cfg.seed), &cfg)?;
    println!("shephard suite on 20 prices: {:?}", suite.status);
    Ok(())
}
