//! Period matrices and their Frobenius difference equation.
use ffmzv::motives::{index_set, unit_point, PeriodSystem};
use ffmzv::scalars::FieldDesc;
use ffmzv::specials::Index;

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let nu = Index::new(vec![1, 2])?;
    let u = unit_point(&f, nu.depth());
    let mut system = PeriodSystem::build(&f, &nu, &u, 6, 30)?;
    println!("{0}x{0} system for {nu}", system.size());
    if let Some(phi) = &system.phi {
        for row in phi {
            println!("  {}", row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" | "));
        }
    }
    let report = system.verify_difference_equation()?;
    println!("Psi^(-1) = Phi Psi on the window: {}", report.all_zero);
    for el in index_set(nu.depth())? {
        let sub = system.submatrix(el)?;
        println!("  submatrix {el}: {}", sub.verify_difference_equation()?.all_zero);
    }
    system.inject_default_fault()?;
    println!("after a corrupted coefficient: {}", system.verify_difference_equation()?.all_zero);
    Ok(())
}
