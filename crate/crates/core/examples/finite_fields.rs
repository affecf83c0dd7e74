//! Arithmetic in F_9 and F_9[theta], plus monic enumeration.
use ffmzv::scalars::{enumerate_monics, FieldDesc, PolyTheta};

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(9)?;
    println!("F_{} = F_{}[x]/({:?}), codes lowest first", f.q(), f.p(), f.modulus());
    let g = f.element(3)?;
    println!("g = {g}, g^-1 = {}, order {}", f.inv(g)?, f.order(g)?);
    println!("Frobenius g^3 = {}", f.frobenius_p(g, 1));

    let a = PolyTheta::from_codes(&f, &[1, 0, 1])?;
    let b = PolyTheta::from_codes(&f, &[3, 1])?;
    let (quo, rem) = a.divrem(&b)?;
    println!("({a}) = ({b})({quo}) + {rem}");
    println!("gcd = {}", a.gcd(&b)?);

    let f3 = FieldDesc::prime(3)?;
    let monics: Vec<String> = enumerate_monics(&f3, 2)?.map(|m| m.to_string()).collect();
    println!("{} monic quadratics over F_3: {}", monics.len(), monics.join(", "));
    Ok(())
}
