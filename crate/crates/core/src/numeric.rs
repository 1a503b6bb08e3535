//! Small numeric helpers shared by the exact engine and its consumers.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Convert an exact rational to `f64`, correct to ~1 ulp even when numerator
/// and denominator are far outside the `f64` range.
pub fn to_f64_lossy(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let sn = (nb - 512).max(0) as u64;
    let sd = (db - 512).max(0) as u64;
    let n = (r.numer() >> sn).to_f64().unwrap();
    let d = (r.denom() >> sd).to_f64().unwrap();
    let scale = sn as i64 - sd as i64;
    (n / d) * 2f64.powi(scale.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Pow};

    #[test]
    fn handles_huge_numerators_and_denominators() {
        let two_pow = |e: u32| BigInt::from(2).pow(e);
        let r = BigRational::new(two_pow(2000), two_pow(2000) + BigInt::one());
        assert!((to_f64_lossy(&r) - 1.0).abs() < 1e-12);
        let r = BigRational::new(two_pow(3000), two_pow(2000));
        assert_eq!(to_f64_lossy(&r), 2f64.powi(1000));
        let r = BigRational::new(two_pow(5000), two_pow(2000));
        assert_eq!(to_f64_lossy(&r), f64::INFINITY);
        let r = BigRational::new(two_pow(2000), two_pow(5000));
        assert_eq!(to_f64_lossy(&r), 0.0);
        let r = BigRational::new(-two_pow(1100) * 3, two_pow(1100));
        assert_eq!(to_f64_lossy(&r), -3.0);
        let r = BigRational::new(7.into(), 10.into());
        assert_eq!(to_f64_lossy(&r), 0.7);
    }
}
