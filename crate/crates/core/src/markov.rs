//! Downward evolution of the boundary wall as an (L+2)-state Markov chain:
//! one chain step is one circuit layer pair, i.e. two walk rows. Includes
//! boundary dissipation, the perturbative eigenvalue analysis, and the
//! open-system memory transition.
//!
//! Index map (0-based): entry 0 is the wall absorbed at position 0, entry
//! `i` in `1..=L` is the wall at odd position `2i - 1`, entry `L + 1` is the
//! wall absorbed at position `2L`. Matrices act by columns:
//! `(A w)[to] = sum_from A[(to, from)] w[from]`.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::geometry::CircuitGeometry;
use crate::numeric::to_f64_lossy;
use crate::profiles::OverlapProfile;

/// Wall position carried by each vector entry: `0, 1, 3, ..., 2L-1, 2L`.
pub fn wall_positions(geom: &CircuitGeometry) -> Vec<u32> {
    let l = geom.l();
    let mut out = Vec::with_capacity(l as usize + 2);
    out.push(0);
    out.extend((1..=l).map(|i| 2 * i - 1));
    out.push(2 * l);
    out
}

/// Entry index of the wall starting position `x` (odd by construction).
pub fn indicator_index(geom: &CircuitGeometry) -> usize {
    ((geom.x() + 1) / 2) as usize
}

/// Exact dense matrix in column-action convention, entries rational.
#[derive(Debug, Clone)]
pub struct ExactMatrix {
    dim: usize,
    /// `cols[from][to]`
    cols: Vec<Vec<BigRational>>,
}

impl ExactMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, w: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(w.len(), self.dim, "vector length must match the matrix dimension");
        let mut out = vec![BigRational::zero(); self.dim];
        for (from, col) in self.cols.iter().enumerate() {
            if w[from].is_zero() {
                continue;
            }
            for (to, a) in col.iter().enumerate() {
                if !a.is_zero() {
                    out[to] += a * &w[from];
                }
            }
        }
        out
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |to, from| to_f64_lossy(&self.cols[from][to]))
    }
}

/// Zero-dissipation chain step: two absorbing-walk rows folded into one
/// transition. Exact rational entries.
pub fn build_a0_exact(geom: &CircuitGeometry) -> ExactMatrix {
    let l = geom.l() as usize;
    let dim = l + 2;
    let a = geom.alpha();
    let a2 = &a * &a;
    let mut cols = vec![vec![BigRational::zero(); dim]; dim];
    cols[0][0] = BigRational::one(); // absorbed stays absorbed
    cols[dim - 1][dim - 1] = BigRational::one();
    for i in 1..=l {
        let col = &mut cols[i];
        if i == 1 {
            col[0] = a.clone(); // one left move is enough to absorb
        } else {
            col[i - 1] = a2.clone();
        }
        // two-row returns: left-right and right-left where both stay inside
        let self_weight = if i == 1 || i == l { a2.clone() } else { &a2 + &a2 };
        col[i] = self_weight;
        if i == l {
            col[dim - 1] = a.clone();
        } else {
            col[i + 1] = a2.clone();
        }
    }
    ExactMatrix { dim, cols }
}

/// Zero-dissipation chain step in floating point.
pub fn build_a0(geom: &CircuitGeometry) -> DMatrix<f64> {
    build_a0_exact(geom).to_f64()
}

/// Dissipation coupling: the block that moves weight out of (and back from)
/// the far-end absorbed sector, scaled by the per-step strength p.
pub fn build_p(geom: &CircuitGeometry) -> DMatrix<f64> {
    let dim = geom.l() as usize + 2;
    let alpha = geom.alpha_f64();
    let q = f64::from(geom.q());
    let mut p = DMatrix::zeros(dim, dim);
    p[(dim - 2, dim - 2)] = alpha / q;
    p[(dim - 2, dim - 1)] = 1.0 / q;
    p[(dim - 1, dim - 2)] = -alpha;
    p[(dim - 1, dim - 1)] = -1.0;
    p
}

/// Dissipation applied at the far edge with strength `p = a (L/T)^exponent`
/// per chain step.
#[derive(Debug, Clone, Copy)]
pub struct DissipationSchedule {
    pub a: f64,
    pub exponent: f64,
    pub depth: u64,
}

impl DissipationSchedule {
    pub fn new(a: f64, exponent: f64, depth: u64) -> Result<Self> {
        if !(a >= 0.0) {
            return Err(Error::Parameter(format!("dissipation amplitude a = {a} must be >= 0")));
        }
        if !(exponent > 0.0) {
            return Err(Error::Parameter(format!(
                "schedule exponent {exponent} must be positive"
            )));
        }
        if depth == 0 {
            return Err(Error::Parameter("schedule depth T must be at least 1".into()));
        }
        Ok(Self { a, exponent, depth })
    }

    /// Per-step dissipation strength for half-chain length `l`.
    pub fn p(&self, l: u32) -> Result<f64> {
        let p = self.a * (f64::from(l) / self.depth as f64).powf(self.exponent);
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!(
                "dissipation strength p = {p} falls outside [0, 1]"
            )));
        }
        Ok(p)
    }
}

/// Full chain step with dissipation: `A0 + p P`.
pub fn build_dissipative(geom: &CircuitGeometry, sched: &DissipationSchedule) -> Result<DMatrix<f64>> {
    let p = sched.p(geom.l())?;
    Ok(build_a0(geom) + build_p(geom) * p)
}

/// Boundary weight `Q_N = q^-N (q^(2N+2) - 1) / (q^2 - 1)`, exact.
pub fn q_weight(q: u32, n: u32) -> BigRational {
    let qr = BigRational::from_integer(BigInt::from(q));
    (qr.clone().pow(n as i32 + 2) - qr.pow(-(n as i32))) / BigRational::from_integer(BigInt::from(q) * q - 1)
}

/// Left unit-eigenvector of the zero-dissipation step orthogonal to the
/// near-end absorbed state (first entry 0), normalized to second entry 1:
/// `(0, Q_0, Q_2, ..., Q_(2L-2), Q_(2L-1))`.
pub fn left_eigenvector_q(geom: &CircuitGeometry) -> Vec<BigRational> {
    let l = geom.l();
    let q = geom.q();
    let mut v = Vec::with_capacity(l as usize + 2);
    v.push(BigRational::zero());
    v.extend((1..=l).map(|i| q_weight(q, 2 * (i - 1))));
    v.push(q_weight(q, 2 * l - 1));
    v
}

/// First-order perturbative second eigenvalue under dissipation:
/// `1 - a (L/T)^exponent (1 - q^-2) / (1 - q^-2L)`.
pub fn perturbed_eigenvalue(geom: &CircuitGeometry, sched: &DissipationSchedule) -> Result<f64> {
    let p = sched.p(geom.l())?;
    let q = f64::from(geom.q());
    let num = 1.0 - q.powi(-2);
    let den = 1.0 - q.powf(-f64::from(geom.two_l()));
    Ok(1.0 - p * num / den)
}

/// Second-largest eigenvalue of a chain step, by dense eigensolve. The
/// leading pair is real; returns the real part of the runner-up by real part.
pub fn second_eigenvalue_numeric(a: &DMatrix<f64>) -> f64 {
    let mut eigs: Vec<_> = a.complex_eigenvalues().iter().cloned().collect();
    eigs.sort_by(|u, v| v.re.partial_cmp(&u.re).unwrap());
    eigs[1].re
}

/// Indicator vector of the wall at its starting cut.
pub fn indicator_exact(geom: &CircuitGeometry) -> Vec<BigRational> {
    let mut w = vec![BigRational::zero(); geom.l() as usize + 2];
    w[indicator_index(geom)] = BigRational::one();
    w
}

pub fn indicator(geom: &CircuitGeometry) -> DVector<f64> {
    let mut w = DVector::zeros(geom.l() as usize + 2);
    w[indicator_index(geom)] = 1.0;
    w
}

/// `A^steps w0` by repeated application, floating point.
pub fn evolve(a: &DMatrix<f64>, w0: &DVector<f64>, steps: u64) -> DVector<f64> {
    let mut w = w0.clone();
    for _ in 0..steps {
        w = a * &w;
    }
    w
}

/// `A^steps w0` in exact rational arithmetic.
pub fn evolve_exact(a: &ExactMatrix, w0: &[BigRational], steps: u64) -> Vec<BigRational> {
    let mut w = w0.to_vec();
    for _ in 0..steps {
        w = a.apply(&w);
    }
    w
}

/// Contract a wall vector against a profile: `sum_i w[i] g(position(i))`.
pub fn contract_wall_exact(
    geom: &CircuitGeometry,
    w: &[BigRational],
    g: &OverlapProfile,
) -> Result<BigRational> {
    let positions = wall_positions(geom);
    if w.len() != positions.len() {
        return Err(Error::DimensionMismatch(format!(
            "wall vector has {} entries, geometry needs {}",
            w.len(),
            positions.len()
        )));
    }
    let mut acc = BigRational::zero();
    for (wi, &pos) in w.iter().zip(&positions) {
        if !wi.is_zero() {
            acc += wi * g.evaluate(pos)?;
        }
    }
    Ok(acc)
}

pub fn contract_wall(geom: &CircuitGeometry, w: &DVector<f64>, g: &OverlapProfile) -> Result<f64> {
    let positions = wall_positions(geom);
    if w.len() != positions.len() {
        return Err(Error::DimensionMismatch(format!(
            "wall vector has {} entries, geometry needs {}",
            w.len(),
            positions.len()
        )));
    }
    let mut acc = 0.0;
    for (wi, &pos) in w.iter().zip(&positions) {
        if *wi != 0.0 {
            acc += wi * g.evaluate_f64(pos)?;
        }
    }
    Ok(acc)
}

/// Distance at chain depth `steps` through the Markov route: evolve the
/// indicator under `a`, contract against the three profiles, and assemble
/// `1 - 2 S(cross) / (S(self_a) + S(self_b))`.
pub fn markov_distance(
    geom: &CircuitGeometry,
    a: &DMatrix<f64>,
    steps: u64,
    cross: &OverlapProfile,
    self_a: &OverlapProfile,
    self_b: &OverlapProfile,
) -> Result<f64> {
    let w = evolve(a, &indicator(geom), steps);
    let sc = contract_wall(geom, &w, cross)?;
    let sa = contract_wall(geom, &w, self_a)?;
    let sb = contract_wall(geom, &w, self_b)?;
    let den = sa + sb;
    if den == 0.0 {
        return Err(Error::Parameter(
            "degenerate self-overlap: both purities contracted to zero".into(),
        ));
    }
    Ok(1.0 - 2.0 * sc / den)
}

/// Deep-circuit distance under linear-schedule edge dissipation:
/// `1 - (q^-x + w E q^(x-2L)) / (q^-x + E q^(x-2L))` with the suppression
/// `E = exp(-a 2L (1 - 1/q^2))`.
///
/// The exponent uses the full chain length; this is the unique reading under
/// which the 50% crossing lands on [`critical_a`] (the half-length reading
/// is off by exactly two in the crossing position).
pub fn open_longtime_distance(q: u32, two_l: u32, x: u32, a: f64, omega: f64) -> Result<f64> {
    if q < 2 || two_l < 4 || two_l % 2 != 0 {
        return Err(Error::Geometry(format!(
            "need q >= 2 and even two_l >= 4, got q = {q}, two_l = {two_l}"
        )));
    }
    if x > two_l {
        return Err(Error::Parameter(format!("x = {x} exceeds two_l = {two_l}")));
    }
    if !(a >= 0.0) {
        return Err(Error::Parameter(format!("dissipation amplitude a = {a} must be >= 0")));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Parameter(format!("omega = {omega} must lie in [0, 1]")));
    }
    let qf = f64::from(q);
    let two_lf = f64::from(two_l);
    // z = E q^(2x - 2L) in one exp, so extreme cuts saturate instead of
    // overflowing; z -> inf gives 1 - omega, z -> 0 gives 0.
    let ln_z = -a * two_lf * (1.0 - qf.powi(-2)) + (2.0 * f64::from(x) - two_lf) * qf.ln();
    let z = ln_z.exp();
    Ok((1.0 - omega) / (1.0 + z.recip()))
}

/// Dissipation amplitude at which the stationary memory of a cut at fraction
/// `r = x / 2L` is destroyed: `(2r - 1) q^2 ln q / (q^2 - 1)`.
///
/// Nonpositive for `r <= 1/2`: such cuts hold no memory even without
/// dissipation.
pub fn critical_a(q: u32, two_l: u32, x: u32) -> Result<f64> {
    if q < 2 || two_l == 0 {
        return Err(Error::Geometry(format!("need q >= 2 and two_l >= 1, got q = {q}, two_l = {two_l}")));
    }
    if x > two_l {
        return Err(Error::Parameter(format!("x = {x} exceeds two_l = {two_l}")));
    }
    let qf = f64::from(q);
    let r = f64::from(x) / f64::from(two_l);
    let q2 = qf * qf;
    Ok((2.0 * r - 1.0) * q2 * qf.ln() / (q2 - 1.0))
}

/// Smallest subsystem fraction that retains memory at dissipation `a`:
/// `1/2 + a (q^2 - 1) / (2 q^2 ln q)`.
pub fn critical_r(q: u32, a: f64) -> Result<f64> {
    if q < 2 {
        return Err(Error::Geometry(format!("need q >= 2, got q = {q}")));
    }
    if !(a >= 0.0) {
        return Err(Error::Parameter(format!("dissipation amplitude a = {a} must be >= 0")));
    }
    let qf = f64::from(q);
    let q2 = qf * qf;
    Ok(0.5 + a * (q2 - 1.0) / (2.0 * q2 * qf.ln()))
}
