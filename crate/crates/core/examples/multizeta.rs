//! Multizeta values by three methods.
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::power_sum::default_budget;
use ffmzv::specials::{mzv_bruteforce, mzv_fast, power_sum, zeta, Index};

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let nu = Index::new(vec![1, 5])?;
    let n = 10;
    let fast = mzv_fast(&f, &nu, n)?;
    let brute = mzv_bruteforce(&f, &nu, n, default_budget())?;
    println!("zeta{nu} = {fast}");
    println!("brute force agrees: {}", fast == brute);

    let s = power_sum(&f, 2, 3, 40, default_budget())?;
    println!("S_2(3) = {s}");

    let one = zeta(&f, &Index::new(vec![1])?, n)?;
    let three = zeta(&f, &Index::new(vec![3])?, n)?;
    println!("zeta(3) = zeta(1)^3: {}", three.agrees_with(&one.pow(3)?));
    Ok(())
}
