//! Relation scan among the period entries of one index.
use ffmzv::motives::unit_point;
use ffmzv::relations::{independence_report, IndependenceConfig};
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::Index;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let nu = Index::new(vec![1, 5])?;
    let config = IndependenceConfig::default();
    let report = independence_report(&f, &nu, &unit_point(&f, nu.depth()), &config)?;
    println!("{}", report.label);
    println!("hypotheses met: {} {:?}", report.hypotheses.hypotheses_met, report.hypotheses.violations);
    println!("values: {}", report.value_labels.join(", "));
    println!("linear slack {}, monomial slack {}", report.linear.slack, report.monomial.slack);
    println!("stable relations: {}, discarded at N = {}: {}", report.relation_count, config.prec_check, report.unstable_count);
    Ok(())
}
