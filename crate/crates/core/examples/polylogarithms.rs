//! Carlitz multiple polylogarithms and their t-deformations.
use ffmzv::laurent::RationalK;
use ffmzv::scalars::{FieldDesc, PolyTheta};
use ffmzv::specials::{cmpl_eval, lseries_value_at_theta, Index};
use ffmzv::tate::KtPoly;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let nu = Index::new(vec![1, 2])?;
    let z = vec![RationalK::one(&f), RationalK::new(PolyTheta::one(&f), PolyTheta::from_codes(&f, &[1, 1])?)?];
    let li = cmpl_eval(&f, &nu, &z, 20)?;
    println!("Li{nu}(1, 1/(theta+1)) = {li}");

    let u: Vec<KtPoly> = z.iter().cloned().map(KtPoly::constant).collect();
    let l = lseries_value_at_theta(&f, &nu, &u, 20)?;
    println!("L(theta) matches: {}", l.agrees_with(&li));

    let outside = vec![RationalK::theta(&f).pow(2)?];
    match cmpl_eval(&f, &Index::new(vec![1])?, &outside, 20) {
        Err(e) => println!("theta^2 is rejected: {e}"),
        Ok(_) => println!("unexpected convergence"),
    }
    Ok(())
}
