//! Truncated Laurent series in 1/theta with tracked precision.
use ffmzv::laurent::{theta_floor, LaurentL, RationalK};
use ffmzv::scalars::{FieldDesc, PolyTheta};

fn main() -> ffmzv::Result<()> {
    let f = FieldDesc::with_order(3)?;
    let floor = theta_floor(f.q(), 8);
    let x = RationalK::new(PolyTheta::one(&f), PolyTheta::from_codes(&f, &[1, 1])?)?;
    let v = x.to_laurent(floor)?;
    println!("1/(theta+1) = {v}");
    println!("theta-valuation {:?}, floor {:?}", v.valuation_theta()?.reduced(), v.floor());

    let w = v.mul(&v)?;
    println!("square keeps floor {:?}", w.floor());
    let inv = v.inv()?;
    println!("inverse agrees with theta+1: {}", inv.agrees_with(&LaurentL::from_poly(x.den())));
    println!("twist by Frobenius: floor {:?}", v.frobenius_power(1)?.floor());
    println!("json: {}", serde_json::to_string(&v).expect("serializable"));
    Ok(())
}
