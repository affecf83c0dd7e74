//! Anderson-Thakur polynomials and the identity they satisfy.
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::at_poly::verify_at_identity;
use ffmzv::specials::{at_polynomial, carlitz_constants};
use ffmzv::tate::KtPoly;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let constants = carlitz_constants(&f, 6)?;
    for (n, g) in constants.gamma.iter().enumerate() {
        println!("Gamma_{n} = {g}");
    }
    // The check compares against brute-force zeta(n), so keep the precision modest.
    for n in [1, 3, 4, 7] {
        let h = at_polynomial(&f, n, 12)?;
        println!("H_{} = {h}", n - 1);
        let wrong = h.add(&KtPoly::one(&f))?;
        println!("  perturbed H passes: {}", verify_at_identity(&f, n, &wrong, 12)?);
    }
    Ok(())
}
