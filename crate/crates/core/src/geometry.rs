//! Circuit geometry: local dimension, chain length, and the bipartition cut.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// Geometry of one distance computation: a chain of `two_l` qudits of local
/// dimension `q`, bipartitioned so the measured subsystem is the rightmost
/// `x` sites.
///
/// The exact engine tracks a domain wall on positions `0..=two_l`; it starts
/// at `x` and only odd `x` keeps the wall on the moving sublattice, so `new`
/// rejects even `x` outright rather than silently shifting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircuitGeometry {
    q: u32,
    two_l: u32,
    x: u32,
}

impl CircuitGeometry {
    pub fn new(q: u32, two_l: u32, x: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::Geometry(format!("local dimension q = {q} must be >= 2")));
        }
        if two_l < 4 || two_l % 2 != 0 {
            return Err(Error::Geometry(format!(
                "chain length two_l = {two_l} must be even and >= 4"
            )));
        }
        if x == 0 || x >= two_l {
            return Err(Error::Geometry(format!(
                "subsystem size x = {x} must satisfy 1 <= x <= {}",
                two_l - 1
            )));
        }
        if x % 2 == 0 {
            return Err(Error::Geometry(format!(
                "subsystem size x = {x} must be odd; the exact engine is defined on odd cuts only"
            )));
        }
        Ok(Self { q, two_l, x })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn two_l(&self) -> u32 {
        self.two_l
    }

    /// Half the chain length (number of two-site blocks).
    pub fn l(&self) -> u32 {
        self.two_l / 2
    }

    pub fn x(&self) -> u32 {
        self.x
    }

    /// Subsystem fraction r = x / two_l.
    pub fn ratio(&self) -> f64 {
        f64::from(self.x) / f64::from(self.two_l)
    }

    /// Per-move wall weight alpha = q / (q^2 + 1), exact.
    pub fn alpha(&self) -> BigRational {
        alpha(self.q)
    }

    pub fn alpha_f64(&self) -> f64 {
        let q = f64::from(self.q);
        q / (q * q + 1.0)
    }
}

/// alpha = q / (q^2 + 1) as an exact rational.
pub fn alpha(q: u32) -> BigRational {
    let q = BigInt::from(q);
    BigRational::new(q.clone(), &q * &q + 1)
}
