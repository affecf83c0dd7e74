//! Rational reconstruction of zeta(n)/pi~^n, stable across two precisions.
use ffmzv::relations::{is_even, rational_reconstruct_stable, Expr, DEFAULT_SLACK};
use ffmzv::scalars::FieldDesc;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let (lo, hi) = (40, 60);
    for n in 1..=4u32 {
        let expr: Expr = format!("zeta({n})/pi^{n}").parse()?;
        let r = rational_reconstruct_stable(&expr.eval(&f, lo)?, &expr.eval(&f, hi)?, (lo, hi), 8, DEFAULT_SLACK)?;
        let shown = r.value.map_or("none to degree 8".to_string(), |v| v.to_string());
        println!("n = {n} ({}): {shown}", if is_even(f.q(), n) { "even" } else { "odd" });
    }
    Ok(())
}
