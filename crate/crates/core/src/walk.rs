//! Exact domain-wall walk combinatorics.
//!
//! The averaged folded circuit reduces to a single walker on positions
//! `0..=2L` that moves one site per row, carries a factor `alpha` per move,
//! and is absorbed at the two ends. Everything here is exact: walk counts are
//! `BigInt`, absorbed weights are `BigRational`.
//!
//! Two independent routes are kept deliberately separate:
//! * closed forms built from binomial coefficients via the image method
//!   ([`surviving_walks`], [`absorbed_weight_left`], …), and
//! * the literal absorbing recursion ([`AbsorbingWalk`]), used as an oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::geometry::CircuitGeometry;

/// Binomial coefficient with out-of-range indices mapped to zero.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Range of rightward-move counts `k` for which a walker started at `x`
/// ends after `m` moves at a position inside `[0, 2L]`.
pub fn k_bounds(geom: &CircuitGeometry, m: u64) -> (i64, i64) {
    let m = m as i64;
    let x = i64::from(geom.x());
    let two_l = i64::from(geom.two_l());
    let k_min = (m - x + 1).div_euclid(2).max(0); // ceil((m-x)/2)
    let k_max = ((m - x + two_l).div_euclid(2)).min(m); // floor((m-x+2L)/2)
    (k_min, k_max)
}

/// Image-method correction subtracted from the free-walk count: the signed
/// sum over reflected copies of the endpoint at shifts of `2nL`.
pub fn reflection_correction(geom: &CircuitGeometry, k: i64, m: u64) -> BigInt {
    reflection_correction_from(&|j| binomial(m, j), geom, k, m)
}

fn reflection_correction_from(
    binom: &dyn Fn(i64) -> BigInt,
    geom: &CircuitGeometry,
    k: i64,
    m: u64,
) -> BigInt {
    let x = i64::from(geom.x());
    let two_l = i64::from(geom.two_l());
    // All terms with larger n vanish: their binomial indices leave [0, m].
    let n_max = (m as i64 + k.max(k + x)).div_euclid(two_l) + 2;
    let mut acc = BigInt::zero();
    for n in 1..=n_max {
        let shift = n * two_l;
        acc += binom(k + x + shift) + binom(k + x - shift)
            - binom(k + shift)
            - binom(k - shift);
    }
    acc
}

/// Number of `m`-step walks from `x` with `k` rightward moves that never
/// touch either absorbing end (closed form, image method).
pub fn surviving_walks(geom: &CircuitGeometry, k: i64, m: u64) -> Result<BigInt> {
    let (k_min, k_max) = k_bounds(geom, m);
    if k < k_min || k > k_max {
        return Err(Error::Parameter(format!(
            "k = {k} outside the admissible range [{k_min}, {k_max}] at m = {m}"
        )));
    }
    let x = i64::from(geom.x());
    Ok(binomial(m, k) - binomial(m, k + x) - reflection_correction(geom, k, m))
}

/// Total weight absorbed at position 0 after `m` rows: the sum over
/// first-passage times `s = x + 2k <= m` of `alpha^s` times the number of
/// surviving walks sitting at position 1 one row earlier.
pub fn absorbed_weight_left(geom: &CircuitGeometry, m: u64) -> BigRational {
    let x = u64::from(geom.x());
    let a = geom.alpha();
    let mut acc = BigRational::zero();
    if m < x {
        return acc;
    }
    let mut weight = a.clone().pow(x as i32); // alpha^(x + 2k), k = 0 first
    let a_sq = &a * &a;
    let k_top = (m - x) / 2;
    for k in 0..=k_top {
        let rows = 2 * k + x - 1; // row at which the walker sits at position 1
        let count = surviving_walks(geom, k as i64, rows)
            .expect("first-passage k is always inside the admissible range");
        acc += &weight * BigRational::from_integer(count);
        weight *= &a_sq;
    }
    acc
}

/// Mirror of [`absorbed_weight_left`]: weight absorbed at position `2L`.
pub fn absorbed_weight_right(geom: &CircuitGeometry, m: u64) -> BigRational {
    let mirrored = CircuitGeometry::new(geom.q(), geom.two_l(), geom.two_l() - geom.x())
        .expect("mirrored cut is valid whenever the original is");
    absorbed_weight_left(&mirrored, m)
}

fn q_pow(q: u32, e: u32) -> BigInt {
    BigInt::from(q).pow(e)
}

/// Infinite-row limit of the weight absorbed at position 0, exact:
/// `q^-x - (q^x - q^-x) / (q^(4L) - 1)`. Defined for any `0 <= x <= 2L`.
pub fn absorbed_left_limit(q: u32, two_l: u32, x: u32) -> Result<BigRational> {
    if q < 2 || two_l < 4 || two_l % 2 != 0 {
        return Err(Error::Geometry(format!(
            "need q >= 2 and even two_l >= 4, got q = {q}, two_l = {two_l}"
        )));
    }
    if x > two_l {
        return Err(Error::Parameter(format!("x = {x} exceeds two_l = {two_l}")));
    }
    let qx = q_pow(q, x);
    let inv_qx = BigRational::new(BigInt::one(), qx.clone());
    let sinh2 = BigRational::from_integer(qx) - &inv_qx; // q^x - q^-x
    let den = BigRational::from_integer(q_pow(q, 2 * two_l) - 1);
    Ok(inv_qx - sinh2 / den)
}

/// Mirror of [`absorbed_left_limit`].
pub fn absorbed_right_limit(q: u32, two_l: u32, x: u32) -> Result<BigRational> {
    absorbed_left_limit(q, two_l, two_l - x)
}

/// Stationary weights for a single global Haar unitary in place of the
/// brickwork: `(q^(4L-x) - q^x, q^(2L+x) - q^(2L-x))` over `q^(4L) - 1`.
/// These coincide exactly with the brickwork infinite-row limits.
pub fn global_haar_limits(q: u32, two_l: u32, x: u32) -> Result<(BigRational, BigRational)> {
    if x > two_l {
        return Err(Error::Parameter(format!("x = {x} exceeds two_l = {two_l}")));
    }
    let den = BigRational::from_integer(q_pow(q, 2 * two_l) - 1);
    let a = BigRational::from_integer(q_pow(q, 2 * two_l - x) - q_pow(q, x)) / &den;
    let b = BigRational::from_integer(q_pow(q, two_l + x) - q_pow(q, two_l - x)) / &den;
    Ok((a, b))
}

/// Partial sum of the absorbed-weight series together with a rigorous bound
/// on everything it omits.
#[derive(Debug, Clone)]
pub struct SeriesPartial {
    pub value: BigRational,
    pub tail_bound: BigRational,
    pub terms: usize,
}

/// Series route to [`absorbed_left_limit`]: sum the first-passage series to
/// `terms` terms. The tail bound uses `binom(n, k) <= 2^n` and `2 alpha < 1`:
/// the omitted weight is at most `(2a)^(x+2K) / (2 (1 - 4a^2))` with `K` the
/// first omitted index.
pub fn absorbed_left_series(geom: &CircuitGeometry, terms: usize) -> SeriesPartial {
    let x = u64::from(geom.x());
    let a = geom.alpha();
    let a_sq = &a * &a;
    let mut value = BigRational::zero();
    let mut weight = a.clone().pow(x as i32);
    for k in 0..terms as u64 {
        let count = surviving_walks(geom, k as i64, 2 * k + x - 1)
            .expect("first-passage k is always inside the admissible range");
        value += &weight * BigRational::from_integer(count);
        weight *= &a_sq;
    }
    let two_a = BigRational::from_integer(BigInt::from(2)) * &a;
    let num = two_a.clone().pow((x + 2 * terms as u64) as i32);
    let den = (BigRational::one() - &two_a * &two_a) * BigRational::from_integer(2.into());
    SeriesPartial { value, tail_bound: num / den, terms }
}

/// Smallest term count whose tail bound is at most `target`.
pub fn series_terms_for(geom: &CircuitGeometry, target: &BigRational) -> usize {
    let x = u64::from(geom.x());
    let a = geom.alpha();
    let two_a = BigRational::from_integer(BigInt::from(2)) * &a;
    let den = (BigRational::one() - &two_a * &two_a) * BigRational::from_integer(2.into());
    let mut bound = two_a.clone().pow(x as i32) / den;
    let ratio = &two_a * &two_a;
    let mut terms = 0usize;
    while &bound > target {
        bound *= &ratio;
        terms += 1;
    }
    terms
}

/// Row-by-row view of the walk: surviving counts via the closed form with a
/// binomial row maintained incrementally, plus accumulated absorbed weights.
#[derive(Debug, Clone)]
pub struct WalkTable {
    geom: CircuitGeometry,
    m: u64,
    binom_row: Vec<BigInt>,
    alpha: BigRational,
    alpha_pow_m: BigRational,
    absorbed_left: BigRational,
    absorbed_right: BigRational,
}

impl WalkTable {
    pub fn new(geom: CircuitGeometry) -> Self {
        let alpha = geom.alpha();
        Self {
            geom,
            m: 0,
            binom_row: vec![BigInt::one()],
            alpha_pow_m: BigRational::one(),
            alpha,
            absorbed_left: BigRational::zero(),
            absorbed_right: BigRational::zero(),
        }
    }

    pub fn geometry(&self) -> &CircuitGeometry {
        &self.geom
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `alpha^m` for the current row.
    pub fn alpha_pow(&self) -> &BigRational {
        &self.alpha_pow_m
    }

    pub fn absorbed_left(&self) -> &BigRational {
        &self.absorbed_left
    }

    pub fn absorbed_right(&self) -> &BigRational {
        &self.absorbed_right
    }

    fn binom(&self, j: i64) -> BigInt {
        if j < 0 || j as usize >= self.binom_row.len() {
            BigInt::zero()
        } else {
            self.binom_row[j as usize].clone()
        }
    }

    /// Surviving-walk count at the current row, zero outside the admissible
    /// range. Same closed form as [`surviving_walks`], reading the cached row.
    pub fn coefficient(&self, k: i64) -> BigInt {
        let (k_min, k_max) = k_bounds(&self.geom, self.m);
        if k < k_min || k > k_max {
            return BigInt::zero();
        }
        let x = i64::from(self.geom.x());
        self.binom(k) - self.binom(k + x)
            - reflection_correction_from(&|j| self.binom(j), &self.geom, k, self.m)
    }

    /// Interior positions `(y, count)` with `y = x - m + 2k`, endpoints skipped.
    pub fn positions(&self) -> Vec<(u32, BigInt)> {
        let (k_min, k_max) = k_bounds(&self.geom, self.m);
        let x = i64::from(self.geom.x());
        let m = self.m as i64;
        let mut out = Vec::with_capacity((k_max - k_min + 1).max(0) as usize);
        for k in k_min..=k_max {
            let y = x - m + 2 * k;
            if y > 0 && y < i64::from(self.geom.two_l()) {
                out.push((y as u32, self.coefficient(k)));
            }
        }
        out
    }

    /// Advance one row: record the weight absorbed on this move, then update
    /// the binomial row via the Pascal rule.
    pub fn advance(&mut self) {
        let next = self.m + 1;
        let x = i64::from(self.geom.x());
        let two_l = i64::from(self.geom.two_l());
        let alpha_next = &self.alpha_pow_m * &self.alpha;
        // First passage at 0 happens at odd offsets from x; the walker must
        // sit at position 1 now, i.e. k = (next - x) / 2 rightward moves.
        let kl2 = next as i64 - x;
        if kl2 >= 0 && kl2 % 2 == 0 {
            let c = self.coefficient(kl2 / 2);
            if !c.is_zero() {
                self.absorbed_left += &alpha_next * BigRational::from_integer(c);
            }
        }
        let kr2 = next as i64 - (two_l - x);
        if kr2 >= 0 && kr2 % 2 == 0 {
            // Position 2L - 1 now: k = (m + 2L - 1 - x) / 2.
            let c = self.coefficient((self.m as i64 + two_l - 1 - x) / 2);
            if !c.is_zero() {
                self.absorbed_right += &alpha_next * BigRational::from_integer(c);
            }
        }
        let mut row = Vec::with_capacity(self.binom_row.len() + 1);
        row.push(BigInt::one());
        for j in 1..self.binom_row.len() {
            row.push(&self.binom_row[j - 1] + &self.binom_row[j]);
        }
        row.push(BigInt::one());
        self.binom_row = row;
        self.alpha_pow_m = alpha_next;
        self.m = next;
    }

    pub fn advance_to(&mut self, m: u64) {
        assert!(m >= self.m, "the table only moves forward");
        while self.m < m {
            self.advance();
        }
    }
}

/// Literal absorbing recursion: surviving weights `d(y)` evolved by
/// `d'(y) = d(y-1) + d(y+1)` with the ends held at zero, plus the count
/// absorbed at each end on every step. Independent oracle for the closed
/// forms above.
#[derive(Debug, Clone)]
pub struct AbsorbingWalk {
    geom: CircuitGeometry,
    step: u64,
    surviving: Vec<BigInt>,
    /// `absorbed_left[s]` is the count first absorbed at position 0 on step `s + 1`.
    pub absorbed_left: Vec<BigInt>,
    pub absorbed_right: Vec<BigInt>,
}

impl AbsorbingWalk {
    pub fn start(geom: CircuitGeometry) -> Self {
        let mut surviving = vec![BigInt::zero(); geom.two_l() as usize + 1];
        surviving[geom.x() as usize] = BigInt::one();
        Self { geom, step: 0, surviving, absorbed_left: Vec::new(), absorbed_right: Vec::new() }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    /// Surviving count at position `y` after the steps taken so far.
    pub fn surviving(&self, y: u32) -> &BigInt {
        &self.surviving[y as usize]
    }

    pub fn step(&mut self) {
        let two_l = self.geom.two_l() as usize;
        self.absorbed_left.push(self.surviving[1].clone());
        self.absorbed_right.push(self.surviving[two_l - 1].clone());
        let mut next = vec![BigInt::zero(); two_l + 1];
        for y in 1..two_l {
            next[y] = &self.surviving[y - 1] + &self.surviving[y + 1];
        }
        // boundary slots stay zero: absorbed weight never re-enters
        next[0] = BigInt::zero();
        next[two_l] = BigInt::zero();
        self.surviving = next;
        self.step += 1;
    }

    pub fn run(geom: CircuitGeometry, m: u64) -> Self {
        let mut w = Self::start(geom);
        for _ in 0..m {
            w.step();
        }
        w
    }

    /// `sum_s alpha^s * absorbed[s]` for each end.
    pub fn weighted_absorbed(&self) -> (BigRational, BigRational) {
        let a = self.geom.alpha();
        let mut left = BigRational::zero();
        let mut right = BigRational::zero();
        let mut w = a.clone();
        for s in 0..self.absorbed_left.len() {
            left += &w * BigRational::from_integer(self.absorbed_left[s].clone());
            right += &w * BigRational::from_integer(self.absorbed_right[s].clone());
            w *= &a;
        }
        (left, right)
    }
}
