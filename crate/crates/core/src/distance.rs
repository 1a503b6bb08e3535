//! The annealed averaged distance between the two reduced states, assembled
//! from walk coefficients contracted against overlap profiles, plus the
//! closed-form special regimes (stationary values, short-time windows,
//! asymptotic scaling, mixed states).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::geometry::CircuitGeometry;
use crate::numeric::to_f64_lossy;
use crate::profiles::OverlapProfile;
use crate::walk::WalkTable;

/// `S_m(g)`: the averaged overlap of the evolved boundary with profile `g`
/// after `m` rows, as an exact rational. Absorbed weight contributes at the
/// two ends, surviving weight pointwise.
pub fn t_state_contraction(
    geom: &CircuitGeometry,
    m: u64,
    g: &OverlapProfile,
) -> Result<BigRational> {
    let gtab = g.tabulate(geom.two_l())?;
    let mut table = WalkTable::new(*geom);
    table.advance_to(m);
    Ok(contract(&table, &gtab))
}

fn contract(table: &WalkTable, gtab: &[BigRational]) -> BigRational {
    let two_l = table.geometry().two_l() as usize;
    let mut interior = BigRational::zero();
    for (y, c) in table.positions() {
        if !c.is_zero() {
            interior += BigRational::from_integer(c) * &gtab[y as usize];
        }
    }
    table.absorbed_left() * &gtab[0]
        + table.absorbed_right() * &gtab[two_l]
        + table.alpha_pow() * interior
}

fn distance_from_contractions(
    s_cross: &BigRational,
    s_a: &BigRational,
    s_b: &BigRational,
) -> Result<BigRational> {
    let den = s_a + s_b;
    if den.is_zero() {
        return Err(Error::Parameter(
            "degenerate self-overlap: both purities contracted to zero".into(),
        ));
    }
    Ok(BigRational::one() - BigRational::from_integer(2.into()) * s_cross / den)
}

/// Exact annealed squared distance at integer time `t` (`m = 2t` rows):
/// `1 - 2 S_2t(cross) / (S_2t(self_a) + S_2t(self_b))`.
pub fn annealed_distance_sq_exact(
    geom: &CircuitGeometry,
    t: u64,
    cross: &OverlapProfile,
    self_a: &OverlapProfile,
    self_b: &OverlapProfile,
) -> Result<BigRational> {
    let values = distance_sweep_exact(geom, cross, self_a, self_b, &[t])?;
    Ok(values.into_iter().next().unwrap())
}

/// [`annealed_distance_sq_exact`] rounded to `f64`, with sub-1e-15 negative
/// round-off clamped to zero at this float boundary only.
pub fn annealed_distance_sq(
    geom: &CircuitGeometry,
    t: u64,
    cross: &OverlapProfile,
    self_a: &OverlapProfile,
    self_b: &OverlapProfile,
) -> Result<f64> {
    Ok(clamp_roundoff(to_f64_lossy(&annealed_distance_sq_exact(
        geom, t, cross, self_a, self_b,
    )?)))
}

fn clamp_roundoff(v: f64) -> f64 {
    if v < 0.0 && v >= -1e-15 {
        0.0
    } else {
        v
    }
}

/// Exact distance at each requested time, sharing one walk across the whole
/// sweep. Times may come in any order; each is computed once.
pub fn distance_sweep_exact(
    geom: &CircuitGeometry,
    cross: &OverlapProfile,
    self_a: &OverlapProfile,
    self_b: &OverlapProfile,
    times: &[u64],
) -> Result<Vec<BigRational>> {
    let two_l = geom.two_l();
    let g_cross = cross.tabulate(two_l)?;
    let g_a = self_a.tabulate(two_l)?;
    let g_b = self_b.tabulate(two_l)?;
    let mut wanted: Vec<u64> = times.to_vec();
    wanted.sort_unstable();
    wanted.dedup();
    let mut table = WalkTable::new(*geom);
    let mut by_time = std::collections::HashMap::with_capacity(wanted.len());
    for &t in &wanted {
        table.advance_to(2 * t);
        let sc = contract(&table, &g_cross);
        let sa = contract(&table, &g_a);
        let sb = contract(&table, &g_b);
        by_time.insert(t, distance_from_contractions(&sc, &sa, &sb)?);
    }
    Ok(times.iter().map(|t| by_time[t].clone()).collect())
}

/// A computed distance curve: the profile triple evaluated on a time grid.
#[derive(Debug, Clone)]
pub struct DistanceSeries {
    pub geometry: CircuitGeometry,
    pub cross: OverlapProfile,
    pub self_a: OverlapProfile,
    pub self_b: OverlapProfile,
    pub times: Vec<u64>,
    pub values: Vec<f64>,
}

impl DistanceSeries {
    pub fn compute(
        geom: &CircuitGeometry,
        cross: OverlapProfile,
        self_a: OverlapProfile,
        self_b: OverlapProfile,
        times: &[u64],
    ) -> Result<Self> {
        let exact = distance_sweep_exact(geom, &cross, &self_a, &self_b, times)?;
        let values = exact.iter().map(|v| clamp_roundoff(to_f64_lossy(v))).collect();
        Ok(Self {
            geometry: *geom,
            cross,
            self_a,
            self_b,
            times: times.to_vec(),
            values,
        })
    }
}

fn check_overlap_sq(overlap_sq: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&overlap_sq) {
        return Err(Error::Parameter(format!(
            "squared overlap {overlap_sq} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// The stationary formulas hold for any cut 0..=2L, even ones included, so
/// they take raw parameters instead of the odd-cut walk geometry.
fn check_cut(q: u32, two_l: u32, x: u32) -> Result<()> {
    if q < 2 || two_l < 4 || two_l % 2 != 0 {
        return Err(Error::Geometry(format!(
            "need q >= 2 and even two_l >= 4, got q = {q}, two_l = {two_l}"
        )));
    }
    if x > two_l {
        return Err(Error::Parameter(format!("x = {x} exceeds two_l = {two_l}")));
    }
    Ok(())
}

/// Stationary distance of a pure pair with squared global overlap
/// `overlap_sq`, exact: `1 - (q^-x + ov q^(x-2L)) / (q^-x + q^(x-2L))`,
/// algebraically `(1 - ov) / (q^(2L-2x) + 1)`.
pub fn infinite_time_pure_exact(
    q: u32,
    two_l: u32,
    x: u32,
    overlap_sq: &BigRational,
) -> Result<BigRational> {
    check_cut(q, two_l, x)?;
    if overlap_sq < &BigRational::zero() || overlap_sq > &BigRational::one() {
        return Err(Error::Parameter(format!(
            "squared overlap {overlap_sq} must lie in [0, 1]"
        )));
    }
    let exp = i64::from(two_l) - 2 * i64::from(x);
    let q = BigRational::from_integer(BigInt::from(q));
    let den = q.pow(exp as i32) + BigRational::one();
    Ok((BigRational::one() - overlap_sq) / den)
}

/// Stationary distance of a pure pair, floating point.
pub fn infinite_time_pure(q: u32, two_l: u32, x: u32, overlap_sq: f64) -> Result<f64> {
    check_cut(q, two_l, x)?;
    check_overlap_sq(overlap_sq)?;
    let q = f64::from(q);
    let exp = f64::from(two_l) - 2.0 * f64::from(x);
    Ok((1.0 - overlap_sq) / (q.powf(exp) + 1.0))
}

/// Thermodynamic-limit stationary distance at fixed subsystem fraction `r`:
/// 0 below one half, `1 - overlap_sq` above; undefined exactly at one half.
pub fn infinite_time_limit(r: f64, overlap_sq: f64) -> Result<f64> {
    check_overlap_sq(overlap_sq)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Parameter(format!("subsystem fraction r = {r} must lie in [0, 1]")));
    }
    if r == 0.5 {
        return Err(Error::CriticalRatio);
    }
    Ok(if r < 0.5 { 0.0 } else { 1.0 - overlap_sq })
}

/// Stationary distance for a mixed pair described by its cross purity and
/// purity exponents: `1 - (2q^-x + 2 cross q^(x-2L)) / (2q^-x + (P + P') q^(x-2L))`
/// with `P = q^(-2Ls)`, `P' = q^(-2Ls')`.
pub fn infinite_time_mixed(q: u32, two_l: u32, x: u32, mixed: &OverlapProfile) -> Result<f64> {
    check_cut(q, two_l, x)?;
    let OverlapProfile::MixedLongTime { cross, s, s_prime } = mixed else {
        return Err(Error::Parameter(
            "stationary mixed-state evaluation needs a mixed-state descriptor".into(),
        ));
    };
    let q = f64::from(q);
    let two_l = f64::from(two_l);
    let x = f64::from(x);
    let p_a = q.powf(-two_l * s);
    let p_b = q.powf(-two_l * s_prime);
    if 2.0 * cross > p_a + p_b {
        return Err(Error::Parameter(format!(
            "cross purity {cross} violates 2 tr(rho rho') <= tr(rho^2) + tr(rho'^2) = {}",
            p_a + p_b
        )));
    }
    // Scale by q^x or q^(2L-x) so neither side overflows for deep cuts.
    Ok(if 2.0 * x <= two_l {
        let z = q.powf(2.0 * x - two_l);
        1.0 - (2.0 + 2.0 * cross * z) / (2.0 + (p_a + p_b) * z)
    } else {
        let w = q.powf(two_l - 2.0 * x);
        1.0 - (2.0 * w + 2.0 * cross) / (2.0 * w + p_a + p_b)
    })
}

/// Subsystem fraction above which a mixed pair can retain memory:
/// `(1 + min(s, s')) / 2`.
pub fn mixed_memory_threshold(s: f64, s_prime: f64) -> f64 {
    (1.0 + s.min(s_prime)) / 2.0
}

fn check_window(geom: &CircuitGeometry, t: u64) -> Result<()> {
    let window = geom.x().min(geom.two_l() - geom.x());
    if 2 * t >= u64::from(window) {
        return Err(Error::OutsideWindow(format!(
            "short-time form needs 2t < min(x, 2L - x) = {window}, got t = {t}"
        )));
    }
    Ok(())
}

/// Short-time closed form for the equal-overlap product pair:
/// `1 - beta^x ((1 + beta^2) / (2 beta))^(2t)`, valid while the moving wall
/// has not reached either end. Equals the full engine exactly in its window.
pub fn short_time_pair_product(
    geom: &CircuitGeometry,
    t: u64,
    beta: &BigRational,
) -> Result<BigRational> {
    check_window(geom, t)?;
    if beta <= &BigRational::zero() || beta > &BigRational::one() {
        return Err(Error::Parameter(format!("beta = {beta} must lie in (0, 1]")));
    }
    let growth = (BigRational::one() + beta * beta)
        / (BigRational::from_integer(2.into()) * beta);
    Ok(BigRational::one() - beta.clone().pow(geom.x() as i32) * growth.pow(2 * t as i32))
}

/// Short-time closed form for the superposed-excitation pair:
/// `1 - ((2L-x)^2 + w x^2 + 2(1+w)t) / ((2L-x)^2 + x^2 + 4t)`, same window.
pub fn short_time_w(geom: &CircuitGeometry, t: u64, omega: &BigRational) -> Result<BigRational> {
    check_window(geom, t)?;
    if omega < &BigRational::zero() || omega > &BigRational::one() {
        return Err(Error::Parameter(format!("omega = {omega} must lie in [0, 1]")));
    }
    let big = |v: u64| BigRational::from_integer(BigInt::from(v));
    let x = u64::from(geom.x());
    let holes = u64::from(geom.two_l()) - x;
    let num = big(holes * holes)
        + omega * big(x * x)
        + big(2 * t) * (BigRational::one() + omega);
    let den = big(holes * holes + x * x + 4 * t);
    Ok(BigRational::one() - num / den)
}

/// Entanglement velocity `-2 ln(2 alpha) / ln q` of the wall spreading.
pub fn entanglement_velocity(q: u32) -> f64 {
    let q = f64::from(q);
    let alpha = q / (q * q + 1.0);
    -2.0 * (2.0 * alpha).ln() / q.ln()
}

/// Thermodynamic-limit scaling form of the excitation-pair distance, branch
/// depending on which side of the half cut `x` falls; undefined at `x = L`.
pub fn asymptotic_w(q: u32, two_l: u32, x: u32, t: f64, omega: f64) -> Result<f64> {
    check_cut(q, two_l, x)?;
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::Parameter(format!("omega = {omega} must lie in [0, 1]")));
    }
    if t < 0.0 {
        return Err(Error::Parameter(format!("time t = {t} must be nonnegative")));
    }
    if 2 * x == two_l {
        return Err(Error::CriticalRatio);
    }
    let ve = entanglement_velocity(q);
    let xf = f64::from(x);
    let two_lf = f64::from(two_l);
    let r = xf / two_lf;
    let qf = f64::from(q);
    let rr = r * r;
    let cc = (1.0 - r) * (1.0 - r);
    let value = if xf < two_lf / 2.0 {
        rr / (cc + rr + qf.powf(-(xf - ve * t)))
    } else {
        1.0 - cc / (cc + rr + qf.powf(xf + ve * t - two_lf))
    };
    Ok((1.0 - omega) * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{
        mixed_long_time, pair_product_profile, rational_from_decimal, uniform_one,
        w_self_profile, w_state_profile_from_omega,
    };
    use crate::walk::{absorbed_left_limit, absorbed_right_limit};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom(q: u32, two_l: u32, x: u32) -> CircuitGeometry {
        CircuitGeometry::new(q, two_l, x).unwrap()
    }

    fn rat(s: &str) -> BigRational {
        rational_from_decimal(s).unwrap()
    }

    #[test]
    fn contraction_at_zero_rows_is_the_profile_value() {
        let g = geom(2, 12, 5);
        let p = pair_product_profile(rat("0.7"), rat("0.7")).unwrap();
        assert_eq!(t_state_contraction(&g, 0, &p).unwrap(), p.evaluate(5).unwrap());
    }

    #[test]
    fn contraction_saturates_to_stationary_boundary_weights() {
        let g = geom(2, 8, 3);
        let p = pair_product_profile(rat("0.7"), rat("0.7")).unwrap();
        let m = 20 * 8;
        let s = t_state_contraction(&g, m, &p).unwrap();
        let expected = absorbed_left_limit(2, 8, 3).unwrap() * p.evaluate(0).unwrap()
            + absorbed_right_limit(2, 8, 3).unwrap() * p.evaluate(8).unwrap();
        assert!((to_f64_lossy(&s) - to_f64_lossy(&expected)).abs() < 1e-10);
    }

    #[test]
    fn identical_profiles_give_exact_zero() {
        let g = geom(2, 10, 3);
        let p = pair_product_profile(rat("0.6"), rat("0.6")).unwrap();
        for t in [0u64, 1, 3, 10, 40] {
            let v = annealed_distance_sq_exact(&g, t, &p, &p, &p).unwrap();
            assert!(v.is_zero(), "t = {t}: {v}");
        }
    }

    #[test]
    fn time_zero_values_match_profiles() {
        // product pair: 1 - beta^x
        let g = geom(2, 16, 5);
        let p = pair_product_profile(rat("0.7"), rat("0.7")).unwrap();
        let v = annealed_distance_sq_exact(&g, 0, &p, &uniform_one(), &uniform_one()).unwrap();
        assert_eq!(v, BigRational::one() - rat("0.7").pow(5));
        // excitation pair: 1 - ((2L-x)^2 + w x^2) / ((2L-x)^2 + x^2)
        let g = geom(2, 16, 5);
        let cross = w_state_profile_from_omega(rat("0.7"), 16).unwrap();
        let selfp = w_self_profile(16);
        let v = annealed_distance_sq_exact(&g, 0, &cross, &selfp, &selfp).unwrap();
        let expected = BigRational::one()
            - (rat("121") + rat("0.7") * rat("25")) / (rat("121") + rat("25"));
        assert_eq!(v, expected);
    }

    #[test]
    fn series_collects_times_in_input_order() {
        let g = geom(2, 8, 3);
        let p = pair_product_profile(rat("0.7"), rat("0.7")).unwrap();
        let series =
            DistanceSeries::compute(&g, p.clone(), uniform_one(), uniform_one(), &[4, 0, 2])
                .unwrap();
        assert_eq!(series.times, vec![4, 0, 2]);
        let direct: Vec<f64> = [4u64, 0, 2]
            .iter()
            .map(|&t| annealed_distance_sq(&g, t, &p, &uniform_one(), &uniform_one()).unwrap())
            .collect();
        assert_eq!(series.values, direct);
    }

    #[test]
    fn bounds_hold_over_randomized_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0usize;
        while checked < 10_000 {
            let q = *[2u32, 3, 5].get(rng.random_range(0..3)).unwrap();
            let two_l = 2 * rng.random_range(2..=9u32);
            let x = 2 * rng.random_range(0..two_l / 2) + 1;
            let g = geom(q, two_l, x);
            let beta = rat(&format!("0.{}", rng.random_range(1..=99)));
            let gamma = rat(&format!("0.{}", rng.random_range(1..=99)));
            let p = pair_product_profile(beta, gamma).unwrap();
            let times: Vec<u64> = (0..10).map(|_| rng.random_range(0..=30u64)).collect();
            let vals =
                distance_sweep_exact(&g, &p, &uniform_one(), &uniform_one(), &times).unwrap();
            for v in vals {
                assert!(v >= BigRational::zero() && v <= BigRational::one());
                checked += 1;
            }
        }
    }

    #[test]
    fn short_time_pair_form_equals_engine_in_window() {
        for (two_l, x) in [(16u32, 5u32), (16, 7), (12, 5)] {
            let g = geom(2, two_l, x);
            let beta = rat("0.7");
            let p = pair_product_profile(beta.clone(), beta.clone()).unwrap();
            let window = x.min(two_l - x);
            for t in 0..((window as u64).div_ceil(2)) {
                if 2 * t >= window as u64 {
                    continue;
                }
                let closed = short_time_pair_product(&g, t, &beta).unwrap();
                let engine =
                    annealed_distance_sq_exact(&g, t, &p, &uniform_one(), &uniform_one())
                        .unwrap();
                assert_eq!(closed, engine, "2L={two_l} x={x} t={t}");
            }
            assert!(matches!(
                short_time_pair_product(&g, u64::from(window), &beta),
                Err(Error::OutsideWindow(_))
            ));
        }
    }

    #[test]
    fn short_time_pair_numeric_example() {
        let g = geom(2, 16, 5);
        let v = short_time_pair_product(&g, 1, &rat("0.7")).unwrap();
        let expected = 1.0 - 0.16807 * (1.49f64 / 1.4).powi(2);
        assert!((to_f64_lossy(&v) - expected).abs() < 1e-12);
        // the quoted 5-digit value is rounded loosely; the formula above
        // evaluates to 0.8096264
        assert!((to_f64_lossy(&v) - 0.80965).abs() < 5e-5);
        // beta = 1: identical states
        assert!(short_time_pair_product(&g, 1, &rat("1")).unwrap().is_zero());
    }

    #[test]
    fn short_time_w_form_equals_engine_in_window() {
        let g = geom(2, 200, 51);
        let omega = rat("0.7");
        let cross = w_state_profile_from_omega(omega.clone(), 200).unwrap();
        let selfp = w_self_profile(200);
        for t in [0u64, 3, 10, 25] {
            let closed = short_time_w(&g, t, &omega).unwrap();
            let engine = annealed_distance_sq_exact(&g, t, &cross, &selfp, &selfp).unwrap();
            assert_eq!(closed, engine, "t={t}");
        }
        // omega = 1 at t = 0: identical states
        let g = geom(2, 12, 5);
        assert!(short_time_w(&g, 0, &rat("1")).unwrap().is_zero());
        assert!(short_time_w(&g, 3, &rat("0.5")).is_err());
        // x > L at t = 0: below the stationary plateau 1 - omega
        let g = geom(2, 12, 9);
        let v = short_time_w(&g, 0, &rat("0.3")).unwrap();
        assert!(v <= BigRational::one() - rat("0.3"));
    }

    #[test]
    fn stationary_pure_values() {
        // exact simplified form against the literal expression
        let ov = rat("0.25");
        let exact = infinite_time_pure_exact(2, 8, 3, &ov).unwrap();
        let q = rat("2");
        let literal = BigRational::one()
            - (q.clone().pow(-3) + ov.clone() * q.clone().pow(-5))
                / (q.clone().pow(-3) + q.clone().pow(-5));
        assert_eq!(exact, literal);
        assert!((infinite_time_pure(2, 8, 3, 0.25).unwrap() - to_f64_lossy(&exact)).abs() < 1e-15);
        // identical states at any cut
        assert_eq!(infinite_time_pure(2, 8, 3, 1.0).unwrap(), 0.0);
        // even cuts and the exact half cut are fine for the stationary form
        assert!(infinite_time_pure(2, 200, 60, 0.3).unwrap() < 1e-6);
        assert_eq!(infinite_time_pure(2, 8, 4, 0.3).unwrap(), 0.7 / 2.0);
        // deep cut keeps the distance near 1 - overlap
        let v = infinite_time_pure(2, 100, 75, 0.3).unwrap();
        assert!((v - 0.7).abs() < 1e-14);
        assert!(infinite_time_pure(2, 8, 9, 0.3).is_err());
    }

    #[test]
    fn stationary_limit_branches() {
        assert_eq!(infinite_time_limit(0.3, 0.9).unwrap(), 0.0);
        assert!((infinite_time_limit(0.8, 0.7).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(infinite_time_limit(0.8, 1.0).unwrap(), 0.0);
        assert!(matches!(infinite_time_limit(0.5, 0.7), Err(Error::CriticalRatio)));
    }

    #[test]
    fn stationary_mixed_values() {
        // pure limit: s = s' = 0 reduces to the pure formula
        let m = mixed_long_time(0.4, 0.0, 0.0).unwrap();
        let v = infinite_time_mixed(2, 12, 7, &m).unwrap();
        assert!((v - infinite_time_pure(2, 12, 7, 0.4).unwrap()).abs() < 1e-14);
        // identical maximally mixed states: distance zero
        let cross = 2f64.powi(-12);
        let m = mixed_long_time(cross, 1.0, 1.0).unwrap();
        assert_eq!(infinite_time_mixed(2, 12, 7, &m).unwrap(), 0.0);
        // purity bound violations are rejected
        let m = mixed_long_time(0.9, 1.0, 1.0).unwrap();
        assert!(infinite_time_mixed(2, 12, 7, &m).is_err());
        // threshold
        assert_eq!(mixed_memory_threshold(0.4, 0.6), 0.7);
        // non-mixed profile rejected
        assert!(infinite_time_mixed(2, 12, 7, &uniform_one()).is_err());
    }

    #[test]
    fn saturation_and_amplification() {
        // The stationary floor is ~q^(2x-2L), so "decays below 1e-8" needs
        // 2L - 2x comfortably above 27 bits at q = 2.
        let two_l = 40u32;
        let beta = rat("0.7");
        let p = pair_product_profile(beta.clone(), beta.clone()).unwrap();
        // global squared overlap of the pair is beta^(2L)
        let ov = beta.clone().pow(two_l as i32);
        let t_end = 4 * u64::from(two_l);
        for x in [1u32, 3, 5] {
            let g = geom(2, two_l, x);
            let times: Vec<u64> = (0..=t_end).collect();
            let vals = distance_sweep_exact(&g, &p, &uniform_one(), &uniform_one(), &times)
                .unwrap();
            for w in vals.windows(2) {
                assert!(
                    to_f64_lossy(&w[1]) <= to_f64_lossy(&w[0]) + 1e-12,
                    "monotone decay violated at x={x}"
                );
            }
            assert!(to_f64_lossy(vals.last().unwrap()) < 1e-8, "x={x}");
        }
        for x in [27u32, 35, 39] {
            let g = geom(2, two_l, x);
            let ends = distance_sweep_exact(&g, &p, &uniform_one(), &uniform_one(), &[0, t_end])
                .unwrap();
            let stationary = infinite_time_pure_exact(2, two_l, x, &ov).unwrap();
            assert!(
                (to_f64_lossy(&ends[1]) - to_f64_lossy(&stationary)).abs() < 1e-8,
                "x={x}"
            );
            assert!(ends[1] > ends[0], "distance should amplify for deep cuts, x={x}");
        }
    }

    #[test]
    fn asymptotic_scaling_form() {
        // t = 0, shallow cut, orthogonal pair
        let r: f64 = 51.0 / 200.0;
        let expected = r * r / ((1.0 - r) * (1.0 - r) + r * r + 2f64.powi(-51));
        assert!((asymptotic_w(2, 200, 51, 0.0, 0.0).unwrap() - expected).abs() < 1e-15);
        // late times on a deep cut approach 1 - omega
        let v = asymptotic_w(2, 200, 151, 1e4, 0.3).unwrap();
        assert!((v - 0.7).abs() < 1e-12);
        // undefined at the half cut
        assert!(matches!(asymptotic_w(2, 202, 101, 1.0, 0.0), Err(Error::CriticalRatio)));
    }

    #[test]
    fn asymptotic_matches_engine_before_the_wall_arrives() {
        let g = geom(2, 200, 51);
        let cross = w_state_profile_from_omega(rat("0"), 200).unwrap();
        let selfp = w_self_profile(200);
        let ve = entanglement_velocity(2);
        let t_max = (51.0 / ve).floor() as u64;
        let times: Vec<u64> = (0..=t_max).step_by(13).collect();
        let engine = distance_sweep_exact(&g, &cross, &selfp, &selfp, &times).unwrap();
        for (i, &t) in times.iter().enumerate() {
            let scaling = asymptotic_w(2, 200, 51, t as f64, 0.0).unwrap();
            let exact = to_f64_lossy(&engine[i]);
            assert!(
                (scaling - exact).abs() < 0.02,
                "t={t}: scaling={scaling} engine={exact}"
            );
        }
    }
}
