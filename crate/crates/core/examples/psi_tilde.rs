//! The bivariate matrix check against its closed form.
use ffmzv::motives::psi_tilde_check;
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::Index;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(2)?;
    for parts in [vec![1], vec![2], vec![1, 1]] {
        let nu = Index::new(parts)?;
        let report = psi_tilde_check(&f, &nu, None, 4, 20)?;
        println!("{nu}: all entries equal = {} on window {:?}", report.all_equal, report.window);
    }
    Ok(())
}
