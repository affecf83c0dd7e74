//! The Anderson-Thakur function and the Carlitz period.
use ffmzv::tate::{carlitz_pi, omega_at_theta, omega_functional_check, omega_uniform, pi_reciprocal_check};
use ffmzv::scalars::FieldDesc;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(2)?;
    let n = 20;
    let omega = omega_uniform(&f, 4, n)?;
    for (k, c) in omega.coeffs().iter().enumerate() {
        println!("Omega[t^{k}] = {c}");
    }
    let report = omega_functional_check(&f, 8, 40, false)?;
    println!("functional equation holds: {}", report.holds);

    let pi = carlitz_pi(&f, n)?;
    println!("pi~ = {pi}");
    println!("Omega(theta) = {}", omega_at_theta(&f, n)?);
    println!("Omega(theta) * pi~ = 1: {}", pi_reciprocal_check(&f, n)?);
    Ok(())
}
