//! The completion of F_q(theta) at infinity, extended by a (q-1)-th root of
//! -theta, as truncated Laurent series in 1/s.

mod json;
mod rational;
mod series;

pub use json::{poly_codes, poly_from_codes, FieldJson, LaurentJson, RationalJson, ValuationJson};
pub use rational::RationalK;
pub use series::{LaurentL, ThetaValuation};

/// s-floor corresponding to absolute theta-precision `n` (terms through theta^-n).
pub fn theta_floor(q: u32, n: i64) -> i64 {
    -n * (q as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalars::{FieldDesc, Fq, PolyTheta};

    fn f(q: u64) -> FieldDesc {
        FieldDesc::with_order(q).unwrap()
    }

    #[test]
    fn basic_valuations() {
        let f3 = f(3);
        let th = LaurentL::theta(&f3);
        assert_eq!(th.valuation_theta().unwrap(), ThetaValuation { num: -1, den: 1 });
        let s = LaurentL::s_gen(&f3);
        assert_eq!(s.valuation_theta().unwrap(), ThetaValuation { num: -1, den: 2 });
        assert_eq!(s.pow(2).unwrap().neg(), th);
        assert!(matches!(LaurentL::zero_to(&f3, -5).valuation_s(), Err(Error::UnknownValuation { .. })));
    }

    #[test]
    fn inverse_window() {
        let f2 = f(2);
        let x = LaurentL::from_poly(&PolyTheta::from_codes(&f2, &[1, 1, 1]).unwrap()).truncate(-20).unwrap();
        let inv = x.inv().unwrap();
        assert_eq!(inv.floor(), Some(-24));
        let one = x.mul(&inv).unwrap();
        assert_eq!(one.floor(), Some(-22));
        assert!(one.agrees_with(&LaurentL::one(&f2)));
        assert_eq!(LaurentL::zero_to(&f2, -3).inv().unwrap_err(), Error::ZeroToPrecision);
    }

    #[test]
    fn product_floor_tracks_contamination() {
        let f3 = f(3);
        let a = LaurentL::monomial(&f3, Fq(1), 4).add(&LaurentL::zero_to(&f3, -10)).unwrap();
        let b = LaurentL::monomial(&f3, Fq(2), -2).add(&LaurentL::zero_to(&f3, -6)).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.floor(), Some(-2));
        assert_eq!(c.coeff(2), Some(Fq(2)));
    }

    #[test]
    fn frobenius_floor() {
        let f3 = f(3);
        let x = LaurentL::one(&f3).add(&LaurentL::zero_to(&f3, -4)).unwrap();
        let y = x.frobenius_power(2).unwrap();
        assert_eq!(y.floor(), Some(-44));
        let th = LaurentL::theta(&f3).frobenius_power(1).unwrap();
        assert_eq!(th, LaurentL::theta_power(&f3, 3));
    }

    #[test]
    fn truncate_requires_window() {
        let f2 = f(2);
        let x = LaurentL::zero_to(&f2, -5);
        assert_eq!(x.truncate(-6).unwrap_err(), Error::InsufficientPrecision { have: -5, need: -6 });
        assert_eq!(x.truncate(-3).unwrap().floor(), Some(-3));
    }

    #[test]
    fn json_roundtrip() {
        let f9 = f(9);
        let r = RationalK::new(
            PolyTheta::from_codes(&f9, &[3, 1]).unwrap(),
            PolyTheta::from_codes(&f9, &[5, 0, 1]).unwrap(),
        )
        .unwrap();
        let x = r.to_laurent(-40).unwrap();
        let txt = serde_json::to_string(&x).unwrap();
        let back: LaurentL = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, x);
        let exact = LaurentL::theta_power(&f9, -3);
        let back: LaurentL = serde_json::from_str(&serde_json::to_string(&exact).unwrap()).unwrap();
        assert_eq!(back, exact);
        let rj: RationalK = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(rj, r);
    }
}
