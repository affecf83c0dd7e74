//! Linear relations over F_q[theta] among computed values.
use ffmzv::relations::{find_linear_relations, Expr, RelationQuery};
use ffmzv::scalars::FieldDesc;

fn main() -> ffmzv::Result<()> {
    // Over F_2 the two pairs are related; over F_3, zeta(1) and pi are not.
    for (q, pair) in [(2, ["zeta(2)", "zeta(1)^2"]), (2, ["zeta(1)", "pi"]), (3, ["zeta(1)", "pi"])] {
        let f = FieldDesc::with_order(q)?;
        let n = 40;
        let values = pair
            .iter()
            .map(|s| s.parse::<Expr>()?.eval(&f, n))
            .collect::<ffmzv::Result<Vec<_>>>()?;
        let basis = find_linear_relations(&RelationQuery::new(values, 2))?;
        println!("q = {q}, {pair:?}: {} relation(s), slack {}", basis.relations.len(), basis.slack);
        for rel in &basis.relations {
            let terms: Vec<String> = rel.iter().zip(pair).map(|(c, v)| format!("({c})*{v}")).collect();
            println!("  {} = 0", terms.join(" + "));
        }
    }
    Ok(())
}
