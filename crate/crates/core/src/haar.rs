//! Brute-force Monte Carlo oracle: sample concrete Haar-random brickwork
//! circuits on explicit state vectors, evolve a pair of initial states under
//! the same realization, and measure reduced-state overlaps directly.
//!
//! Everything here is desk-scale ground truth for the exact engine: state
//! sizes are capped hard, and estimates come with standard errors and
//! per-seed reproducibility independent of the worker count.
//!
//! Site `0` is the leftmost qudit (most significant digit of the basis
//! index), so "the rightmost `x` sites" are the `x` least significant digits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::to_f64_lossy;
use crate::profiles::{
    exact_w_overlap, exact_w_self_overlap, omega_from_amplitudes, pair_product_profile,
    tabulated_from_f64, uniform_one, OverlapProfile,
};

const MAX_AMPLITUDES: u128 = 1 << 24;

/// Number of amplitudes for a chain, refusing sizes past the hard cap.
pub fn state_dim(q: u32, two_l: u32) -> Result<usize> {
    if q < 2 {
        return Err(Error::Geometry(format!("local dimension q = {q} must be at least 2")));
    }
    if two_l < 2 || two_l % 2 != 0 {
        return Err(Error::Geometry(format!("chain length {two_l} must be even and >= 2")));
    }
    let mut size: u128 = 1;
    for _ in 0..two_l {
        size *= q as u128;
        if size > MAX_AMPLITUDES {
            return Err(Error::SizeGuard { size });
        }
    }
    Ok(size as usize)
}

/// Explicit pure state of `2L` qudits with local dimension `q`.
#[derive(Debug, Clone)]
pub struct StateVector {
    q: u32,
    two_l: u32,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(q: u32, two_l: u32, amps: Vec<Complex64>) -> Result<Self> {
        let dim = state_dim(q, two_l)?;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "state needs {dim} amplitudes, got {}",
                amps.len()
            )));
        }
        Ok(Self { q, two_l, amps })
    }

    /// Product state from one normalized local vector per site.
    pub fn from_sites(q: u32, two_l: u32, sites: &[Vec<Complex64>]) -> Result<Self> {
        let dim = state_dim(q, two_l)?;
        if sites.len() != two_l as usize {
            return Err(Error::DimensionMismatch(format!(
                "need {two_l} site states, got {}",
                sites.len()
            )));
        }
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for site in sites {
            if site.len() != q as usize {
                return Err(Error::DimensionMismatch(format!(
                    "site state has {} amplitudes, local dimension is {q}",
                    site.len()
                )));
            }
            let norm: f64 = site.iter().map(|z| z.norm_sqr()).sum();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::Parameter(format!(
                    "site state norm^2 = {norm} is not 1"
                )));
            }
            let mut next = Vec::with_capacity(amps.len() * site.len());
            for a in &amps {
                for s in site {
                    next.push(a * s);
                }
            }
            amps = next;
        }
        debug_assert_eq!(amps.len(), dim);
        Ok(Self { q, two_l, amps })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn two_l(&self) -> u32 {
        self.two_l
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        for a in &mut self.amps {
            *a /= n;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Haar-distributed `d x d` unitary: complex Gaussian matrix orthonormalized
/// column by column (re-orthogonalized modified Gram-Schmidt). Keeping the
/// triangular factor's diagonal real positive is the uniqueness convention
/// under which the orthogonal factor carries the Haar measure.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    assert!(d >= 2, "gate dimension must be at least 2");
    let mut cols: Vec<Vec<Complex64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
                .collect()
        })
        .collect();
    for j in 0..d {
        for _pass in 0..2 {
            for i in 0..j {
                let mut r = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    r += cols[i][k].conj() * cols[j][k];
                }
                for k in 0..d {
                    let t = cols[i][k];
                    cols[j][k] -= r * t;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for k in 0..d {
            cols[j][k] /= norm;
        }
    }
    DMatrix::from_fn(d, d, |r, c| cols[c][r])
}

/// Apply a two-site gate to the adjacent pair `(site, site + 1)`.
fn apply_adjacent_gate(state: &mut StateVector, site: usize, gate: &DMatrix<Complex64>) {
    let q = state.q as usize;
    let d2 = q * q;
    debug_assert_eq!(gate.nrows(), d2);
    debug_assert!(site + 1 < state.two_l as usize);
    let low = q.pow(state.two_l - 2 - site as u32);
    let block = d2 * low;
    let n_blocks = state.amps.len() / block;
    let mut scratch = vec![Complex64::new(0.0, 0.0); d2];
    for b in 0..n_blocks {
        let base = b * block;
        for r in 0..low {
            for (c, s) in scratch.iter_mut().enumerate() {
                *s = state.amps[base + c * low + r];
            }
            for c_out in 0..d2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c_in, s) in scratch.iter().enumerate() {
                    acc += gate[(c_out, c_in)] * s;
                }
                state.amps[base + c_out * low + r] = acc;
            }
        }
    }
}

fn check_norm(state: &StateVector) -> Result<()> {
    let n = state.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Parameter(format!(
            "state norm drifted to {n}; gates are expected to be unitary"
        )));
    }
    Ok(())
}

/// One circuit step: the offset layer (gates on `(1,2), (3,4), ...`, `L - 1`
/// of them, outermost sites idle) followed by the aligned layer (gates on
/// `(0,1), (2,3), ...`, `L` of them). Open boundaries.
///
/// The aligned layer comes last because reduced overlaps anchor at the final
/// slice: the layer applied last is the first row of the folded contraction,
/// and it must be the one whose gates straddle odd cuts for every layer to
/// advance the averaged pairing boundary. A gate lying strictly inside the
/// kept or traced region, applied to both states of a pair, cancels from
/// their reduced overlap realization by realization.
pub fn brickwork_step(
    state: &mut StateVector,
    offset: &[DMatrix<Complex64>],
    aligned: &[DMatrix<Complex64>],
) -> Result<()> {
    let l = (state.two_l / 2) as usize;
    if aligned.len() != l || offset.len() != l.saturating_sub(1) {
        return Err(Error::DimensionMismatch(format!(
            "layer sizes ({}, {}) do not match chain halves ({}, {l})",
            offset.len(),
            aligned.len(),
            l - 1
        )));
    }
    let d2 = (state.q * state.q) as usize;
    for g in aligned.iter().chain(offset) {
        if g.nrows() != d2 || g.ncols() != d2 {
            return Err(Error::DimensionMismatch(format!(
                "gate is {}x{}, expected {d2}x{d2}",
                g.nrows(),
                g.ncols()
            )));
        }
    }
    for (i, g) in offset.iter().enumerate() {
        apply_adjacent_gate(state, 2 * i + 1, g);
    }
    check_norm(state)?;
    for (i, g) in aligned.iter().enumerate() {
        apply_adjacent_gate(state, 2 * i, g);
    }
    check_norm(state)
}

/// `tr[rho_A rho'_A]` over the rightmost `x` sites, by explicit reduction:
/// the Gram route on whichever side of the cut is smaller.
pub fn cross_purity(a: &StateVector, b: &StateVector, x: u32) -> Result<f64> {
    if a.q != b.q || a.two_l != b.two_l {
        return Err(Error::DimensionMismatch(format!(
            "states live on different chains: ({}, {}) vs ({}, {})",
            a.q, a.two_l, b.q, b.two_l
        )));
    }
    if x > a.two_l {
        return Err(Error::Parameter(format!("cut x = {x} exceeds chain length {}", a.two_l)));
    }
    if x == 0 {
        return Ok(1.0);
    }
    let dim_a = (a.q as usize).pow(x);
    let dim_b = a.amps.len() / dim_a;
    if dim_a <= dim_b {
        let g1 = gram(&a.amps, dim_a, dim_b);
        let g2 = gram(&b.amps, dim_a, dim_b);
        let mut acc = Complex64::new(0.0, 0.0);
        for (u, v) in g1.iter().zip(&g2) {
            acc += u * v.conj();
        }
        Ok(acc.re)
    } else {
        // tr[M'M N'N] = |M N'|_F^2 with M, N the (traced x kept) reshapes
        let mut acc = 0.0;
        for b1 in 0..dim_b {
            let row1 = &a.amps[b1 * dim_a..(b1 + 1) * dim_a];
            for b2 in 0..dim_b {
                let row2 = &b.amps[b2 * dim_a..(b2 + 1) * dim_a];
                let mut x12 = Complex64::new(0.0, 0.0);
                for (u, v) in row1.iter().zip(row2) {
                    x12 += u * v.conj();
                }
                acc += x12.norm_sqr();
            }
        }
        Ok(acc)
    }
}

/// `G[i][j] = sum_b conj(M[b, i]) M[b, j]` for the (traced x kept) reshape.
fn gram(amps: &[Complex64], dim_a: usize, dim_b: usize) -> Vec<Complex64> {
    let mut g = vec![Complex64::new(0.0, 0.0); dim_a * dim_a];
    for b in 0..dim_b {
        let row = &amps[b * dim_a..(b + 1) * dim_a];
        for i in 0..dim_a {
            let ci = row[i].conj();
            for j in 0..dim_a {
                g[i * dim_a + j] += ci * row[j];
            }
        }
    }
    g
}

/// Which family a concrete pair realizes, with parameters measured back from
/// the amplitudes themselves.
#[derive(Debug, Clone, Copy)]
pub enum PairDiagnostics {
    PairProduct { beta: f64, gamma: f64 },
    SuperposedExcitation { omega: f64 },
}

/// A concrete state pair together with the exact overlap profiles it
/// realizes, ready for side-by-side engine comparison.
#[derive(Debug, Clone)]
pub struct StatePair {
    pub state_a: StateVector,
    pub state_b: StateVector,
    pub cross: OverlapProfile,
    pub self_a: OverlapProfile,
    pub self_b: OverlapProfile,
    pub measured: PairDiagnostics,
}

/// Product pair with uniform site overlap `sqrt(beta)`: the first state is
/// the four-site-periodic rank-one pattern `(u, w, w, u)` repeated, the
/// second is the same pattern translated by two sites. The translation is
/// taken on the infinite pattern, which coincides with the cyclic two-site
/// shift whenever the period divides the chain. Every site then overlaps at
/// `sqrt(beta)`, so the cross profile is exactly `beta^y` and both self
/// profiles are identically one.
pub fn pair_product_pair(q: u32, two_l: u32, beta: &BigRational) -> Result<StatePair> {
    let beta_f = to_f64_lossy(beta);
    if !(0.0..=1.0).contains(&beta_f) {
        return Err(Error::Parameter(format!("beta = {beta_f} must lie in [0, 1]")));
    }
    state_dim(q, two_l)?;
    let mut u = vec![Complex64::new(0.0, 0.0); q as usize];
    u[0] = Complex64::new(1.0, 0.0);
    let mut w = vec![Complex64::new(0.0, 0.0); q as usize];
    w[0] = Complex64::new(beta_f.sqrt(), 0.0);
    w[1] = Complex64::new((1.0 - beta_f).sqrt(), 0.0);
    let pattern = |i: usize| -> &Vec<Complex64> {
        if i % 4 == 0 || i % 4 == 3 {
            &u
        } else {
            &w
        }
    };
    let sites_a: Vec<Vec<Complex64>> = (0..two_l as usize).map(|s| pattern(s).clone()).collect();
    let sites_b: Vec<Vec<Complex64>> =
        (0..two_l as usize).map(|s| pattern(s + 2).clone()).collect();
    let mut measured_beta = None;
    for (sa, sb) in sites_a.iter().zip(&sites_b) {
        let o: Complex64 = sa.iter().zip(sb).map(|(p, r)| p.conj() * r).sum();
        let o2 = o.norm_sqr();
        match measured_beta {
            None => measured_beta = Some(o2),
            Some(prev) => debug_assert!((prev - o2).abs() < 1e-12),
        }
    }
    let measured_beta = measured_beta.unwrap();
    Ok(StatePair {
        state_a: StateVector::from_sites(q, two_l, &sites_a)?,
        state_b: StateVector::from_sites(q, two_l, &sites_b)?,
        cross: pair_product_profile(beta.clone(), beta.clone())?,
        self_a: uniform_one(),
        self_b: uniform_one(),
        measured: PairDiagnostics::PairProduct { beta: measured_beta, gamma: measured_beta },
    })
}

/// Product pair from explicit normalized two-site blocks: the first state
/// alternates `(m_e, m_o, m_e, ...)` on aligned pairs, the second is the
/// two-site translate `(m_o, m_e, m_o, ...)`. The engine reference profiles
/// are tabulated from the states' own reduced contractions at depth zero.
pub fn pair_product_pair_from_blocks(
    q: u32,
    two_l: u32,
    m_e: &[Complex64],
    m_o: &[Complex64],
) -> Result<StatePair> {
    let dim = state_dim(q, two_l)?;
    let d2 = (q * q) as usize;
    for (name, block) in [("m_e", m_e), ("m_o", m_o)] {
        if block.len() != d2 {
            return Err(Error::DimensionMismatch(format!(
                "{name} has {} amplitudes, expected {d2}",
                block.len()
            )));
        }
        let norm: f64 = block.iter().map(|z| z.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Parameter(format!("{name} norm^2 = {norm} is not 1")));
        }
    }
    let l = (two_l / 2) as usize;
    let build = |first_even: bool| -> StateVector {
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for j in 0..l {
            let block = if (j % 2 == 0) == first_even { m_e } else { m_o };
            let mut next = Vec::with_capacity(amps.len() * d2);
            for a in &amps {
                for s in block {
                    next.push(a * s);
                }
            }
            amps = next;
        }
        debug_assert_eq!(amps.len(), dim);
        StateVector { q, two_l, amps }
    };
    let state_a = build(true);
    let state_b = build(false);
    let tab = |u: &StateVector, v: &StateVector| -> Result<Vec<f64>> {
        (0..=two_l).map(|y| cross_purity(u, v, y)).collect()
    };
    let cross_tab = tab(&state_a, &state_b)?;
    let beta = cross_tab[2].sqrt();
    let gamma = cross_tab[1];
    Ok(StatePair {
        cross: tabulated_from_f64(&cross_tab)?,
        self_a: tabulated_from_f64(&tab(&state_a, &state_a)?)?,
        self_b: tabulated_from_f64(&tab(&state_b, &state_b)?)?,
        state_a,
        state_b,
        measured: PairDiagnostics::PairProduct { beta, gamma },
    })
}

/// Single-excitation superposition pair on qubits: amplitudes
/// `c1 +- c2 (-1)^n` on the excitation at site `2n`, `n = 0..L`. The engine
/// reference profiles are the exact finite-size overlap tabulations.
pub fn w_pair(two_l: u32, c1: Complex64, c2: Complex64) -> Result<StatePair> {
    omega_from_amplitudes(c1, c2)?;
    let dim = state_dim(2, two_l)?;
    let l = (two_l / 2) as usize;
    let build = |sign: f64| -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for n in 0..l {
            let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
            amps[1 << (two_l as usize - 1 - 2 * n)] = c1 + c2 * sign * parity;
        }
        let mut s = StateVector { q: 2, two_l, amps };
        s.normalize();
        s
    };
    let state_a = build(1.0);
    let state_b = build(-1.0);
    let measured_omega = cross_purity(&state_a, &state_b, two_l)?;
    let tab_cross: Vec<f64> = (0..=two_l)
        .map(|y| exact_w_overlap(c1, c2, two_l, y))
        .collect::<Result<_>>()?;
    let tab_self_a: Vec<f64> = (0..=two_l)
        .map(|y| exact_w_self_overlap(c1, c2, two_l, y))
        .collect::<Result<_>>()?;
    let tab_self_b: Vec<f64> = (0..=two_l)
        .map(|y| exact_w_self_overlap(c1, -c2, two_l, y))
        .collect::<Result<_>>()?;
    Ok(StatePair {
        state_a,
        state_b,
        cross: tabulated_from_f64(&tab_cross)?,
        self_a: tabulated_from_f64(&tab_self_a)?,
        self_b: tabulated_from_f64(&tab_self_b)?,
        measured: PairDiagnostics::SuperposedExcitation { omega: measured_omega },
    })
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub realizations: u64,
    pub seed: u64,
}

/// Estimates for a whole cut/depth grid sharing one circuit ensemble:
/// `cells[xi][ti]` corresponds to `xs[xi]`, `ts[ti]`.
#[derive(Debug, Clone)]
pub struct McGrid {
    pub xs: Vec<u32>,
    pub ts: Vec<u64>,
    pub cells: Vec<Vec<McEstimate>>,
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let mid = n / 2;
            pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
        }
    }
}

/// One realization: evolve both states under the same gates, recording the
/// (cross, self_a, self_b) purity triple at every requested cut and depth.
fn realization_triples(
    pair: &StatePair,
    xs: &[u32],
    schedule: &[u64],
    seed: u64,
    realization: u64,
) -> Result<Vec<[f64; 3]>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(realization);
    let mut a = pair.state_a.clone();
    let mut b = pair.state_b.clone();
    let l = (a.two_l / 2) as usize;
    let d2 = (a.q * a.q) as usize;
    let mut out = Vec::with_capacity(xs.len() * schedule.len());
    let t_max = *schedule.last().unwrap();
    let mut next = 0usize;
    for t in 0..=t_max {
        if t > 0 {
            let offset: Vec<_> = (0..l - 1).map(|_| haar_unitary(d2, &mut rng)).collect();
            let aligned: Vec<_> = (0..l).map(|_| haar_unitary(d2, &mut rng)).collect();
            brickwork_step(&mut a, &offset, &aligned)?;
            brickwork_step(&mut b, &offset, &aligned)?;
        }
        if next < schedule.len() && schedule[next] == t {
            for &x in xs {
                out.push([
                    cross_purity(&a, &b, x)?,
                    cross_purity(&a, &a, x)?,
                    cross_purity(&b, &b, x)?,
                ]);
            }
            next += 1;
        }
    }
    Ok(out)
}

/// Assemble the distance estimate and its delta-method standard error from
/// per-realization purity triples. Centering before combining keeps the
/// identical-pair case at exactly zero error.
fn estimate_from_triples(
    triples: &[[f64; 3]],
    realizations: u64,
    seed: u64,
) -> McEstimate {
    let n = triples.len();
    let c: Vec<f64> = triples.iter().map(|t| t[0]).collect();
    let s: Vec<f64> = triples.iter().map(|t| t[1] + t[2]).collect();
    let c_mean = pairwise_sum(&c) / n as f64;
    let s_mean = pairwise_sum(&s) / n as f64;
    let mean = 1.0 - 2.0 * c_mean / s_mean;
    let ratio = c_mean / s_mean;
    let resid: Vec<f64> = c
        .iter()
        .zip(&s)
        .map(|(ci, si)| {
            let d = (ci - c_mean) - ratio * (si - s_mean);
            d * d
        })
        .collect();
    let var = pairwise_sum(&resid) / ((n - 1) as f64 * n as f64);
    let stderr = 2.0 / s_mean * var.max(0.0).sqrt();
    McEstimate { mean, stderr, realizations, seed }
}

/// Sample-mean estimate of the annealed distance over a grid of cuts and
/// depths, all cells sharing the same `n` circuit realizations. Realizations
/// use independent substreams of the seed and are reduced in a fixed
/// pairwise order, so results are byte-identical for any worker count.
pub fn mc_distance_grid(
    pair: &StatePair,
    xs: &[u32],
    ts: &[u64],
    n: u64,
    seed: u64,
) -> Result<McGrid> {
    if n < 100 {
        return Err(Error::Parameter(format!("need at least 100 realizations, got {n}")));
    }
    if xs.is_empty() || ts.is_empty() {
        return Err(Error::Parameter("empty cut or depth grid".into()));
    }
    for &x in xs {
        if x > pair.state_a.two_l {
            return Err(Error::Parameter(format!(
                "cut x = {x} exceeds chain length {}",
                pair.state_a.two_l
            )));
        }
    }
    let mut schedule: Vec<u64> = ts.to_vec();
    schedule.sort_unstable();
    schedule.dedup();
    let rows: Result<Vec<Vec<[f64; 3]>>> = (0..n)
        .into_par_iter()
        .map(|r| realization_triples(pair, xs, &schedule, seed, r))
        .collect();
    let rows = rows?;
    let mut cells = Vec::with_capacity(xs.len());
    for (xi, _) in xs.iter().enumerate() {
        let mut row = Vec::with_capacity(ts.len());
        for &t in ts {
            let ti = schedule.binary_search(&t).unwrap();
            let triples: Vec<[f64; 3]> =
                rows.iter().map(|r| r[ti * xs.len() + xi]).collect();
            row.push(estimate_from_triples(&triples, n, seed));
        }
        cells.push(row);
    }
    Ok(McGrid { xs: xs.to_vec(), ts: ts.to_vec(), cells })
}

/// Single-cell convenience wrapper around [`mc_distance_grid`].
pub fn mc_annealed_distance_sq(
    pair: &StatePair,
    x: u32,
    t: u64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    Ok(mc_distance_grid(pair, &[x], &[t], n, seed)?.cells[0][0])
}

/// Cross purity under a single global Haar unitary on the whole chain,
/// instead of a brickwork circuit: the all-to-all scrambling limit.
pub fn mc_global_cross(pair: &StatePair, x: u32, n: u64, seed: u64) -> Result<McEstimate> {
    if n < 100 {
        return Err(Error::Parameter(format!("need at least 100 realizations, got {n}")));
    }
    let dim = pair.state_a.amps.len();
    let vals: Result<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r);
            let u = haar_unitary(dim, &mut rng);
            let rotate = |s: &StateVector| -> StateVector {
                let v = nalgebra::DVector::from_column_slice(&s.amps);
                let out = &u * v;
                StateVector { q: s.q, two_l: s.two_l, amps: out.iter().cloned().collect() }
            };
            cross_purity(&rotate(&pair.state_a), &rotate(&pair.state_b), x)
        })
        .collect();
    let vals = vals?;
    let mean = pairwise_sum(&vals) / n as f64;
    let sq: Vec<f64> = vals.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / ((n - 1) as f64 * n as f64);
    Ok(McEstimate { mean, stderr: var.max(0.0).sqrt(), realizations: n, seed })
}

/// Results of the folded two-site gate averaging checks.
#[derive(Debug, Clone, Copy)]
pub struct FoldedGateReport {
    pub realizations: u64,
    pub seed: u64,
    /// `q / (q^2 + 1)`, the weight the average should put on each pairing.
    pub alpha: f64,
    /// Largest per-draw deviation of the invariant pairings (unitarity).
    pub max_identity_residual: f64,
    /// Norm of (sample mean of the folded image of the mixed pairing) minus
    /// `alpha (|id id> + |swap swap>)`.
    pub mean_residual: f64,
    pub mean_residual_stderr: f64,
    /// Component of the sample mean outside span{|id id>, |swap swap>}.
    pub off_span_residual: f64,
}

fn apply_single_copy(
    amps: &mut [Complex64],
    d: usize,
    copy: usize,
    u: &DMatrix<Complex64>,
    conjugate: bool,
) {
    let low = d.pow(3 - copy as u32);
    let block = d * low;
    let n_blocks = amps.len() / block;
    let mut scratch = vec![Complex64::new(0.0, 0.0); d];
    for b in 0..n_blocks {
        let base = b * block;
        for r in 0..low {
            for (c, s) in scratch.iter_mut().enumerate() {
                *s = amps[base + c * low + r];
            }
            for c_out in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c_in, s) in scratch.iter().enumerate() {
                    let g = u[(c_out, c_in)];
                    acc += if conjugate { g.conj() } else { g } * s;
                }
                amps[base + c_out * low + r] = acc;
            }
        }
    }
}

/// Four-copy image of a vector under one gate realization: `U` on copies 1
/// and 3, its complex conjugate on copies 2 and 4.
fn folded_image(v: &[Complex64], d: usize, u: &DMatrix<Complex64>) -> Vec<Complex64> {
    let mut out = v.to_vec();
    for copy in 0..4 {
        apply_single_copy(&mut out, d, copy, u, copy % 2 == 1);
    }
    out
}

/// Verify the averaging rules of the folded two-site gate on `q = 2` pairs:
/// both uniform pairings are fixed points of every realization, and the
/// mixed pairing averages to `alpha` times their sum.
pub fn folded_gate_check(q: u32, n: u64, seed: u64) -> Result<FoldedGateReport> {
    if n < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 realizations, got {n}")));
    }
    let qs = q as usize;
    let d = qs * qs;
    let dim = d * d * d * d;
    let idx = |m1: usize, m2: usize, m3: usize, m4: usize| ((m1 * d + m2) * d + m3) * d + m4;
    let mut id_id = vec![Complex64::new(0.0, 0.0); dim];
    let mut swap_swap = vec![Complex64::new(0.0, 0.0); dim];
    for m in 0..d {
        for nn in 0..d {
            id_id[idx(m, m, nn, nn)] += Complex64::new(1.0, 0.0);
            swap_swap[idx(m, nn, nn, m)] += Complex64::new(1.0, 0.0);
        }
    }
    // mixed pairing: first site uniform on copies (1,2)(3,4), second site on
    // (1,4)(2,3); pair index of copy k is site1 * q + site2
    let mut id_swap = vec![Complex64::new(0.0, 0.0); dim];
    for a in 0..qs {
        for b in 0..qs {
            for c in 0..qs {
                for e in 0..qs {
                    id_swap[idx(a * qs + c, a * qs + e, b * qs + e, b * qs + c)] +=
                        Complex64::new(1.0, 0.0);
                }
            }
        }
    }
    let alpha = q as f64 / (q as f64 * q as f64 + 1.0);
    let target: Vec<Complex64> =
        id_id.iter().zip(&swap_swap).map(|(u, v)| (u + v) * alpha).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_identity_residual = 0.0f64;
    let mut sum = vec![Complex64::new(0.0, 0.0); dim];
    let mut sum_sq = vec![0.0f64; 2 * dim];
    for _ in 0..n {
        let u = haar_unitary(d, &mut rng);
        for fixed in [&id_id, &swap_swap] {
            let image = folded_image(fixed, d, &u);
            let resid: f64 = image
                .iter()
                .zip(fixed.iter())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            max_identity_residual = max_identity_residual.max(resid);
        }
        let image = folded_image(&id_swap, d, &u);
        for (k, z) in image.iter().enumerate() {
            sum[k] += z;
            sum_sq[2 * k] += z.re * z.re;
            sum_sq[2 * k + 1] += z.im * z.im;
        }
    }
    let nf = n as f64;
    let mean: Vec<Complex64> = sum.iter().map(|z| z / nf).collect();
    let mean_residual: f64 = mean
        .iter()
        .zip(&target)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let mut var_total = 0.0;
    for (k, m) in mean.iter().enumerate() {
        var_total += (sum_sq[2 * k] / nf - m.re * m.re).max(0.0);
        var_total += (sum_sq[2 * k + 1] / nf - m.im * m.im).max(0.0);
    }
    let mean_residual_stderr = (var_total / nf).sqrt();
    // project the mean off span{|id id>, |swap swap>}
    let vnorm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let vdot = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    };
    let e1: Vec<Complex64> = {
        let nrm = vnorm(&id_id);
        id_id.iter().map(|z| z / nrm).collect()
    };
    let mut v2: Vec<Complex64> = swap_swap.clone();
    let p = vdot(&e1, &v2);
    for (z, e) in v2.iter_mut().zip(&e1) {
        *z -= p * e;
    }
    let nrm2 = vnorm(&v2);
    let e2: Vec<Complex64> = v2.iter().map(|z| z / nrm2).collect();
    let p1 = vdot(&e1, &mean);
    let p2 = vdot(&e2, &mean);
    let off: Vec<Complex64> = mean
        .iter()
        .zip(e1.iter().zip(&e2))
        .map(|(m, (a, b))| m - p1 * a - p2 * b)
        .collect();
    Ok(FoldedGateReport {
        realizations: n,
        seed,
        alpha,
        max_identity_residual,
        mean_residual,
        mean_residual_stderr,
        off_span_residual: vnorm(&off),
    })
}

/// First and second Haar moment checks on a fixed matrix entry, plus the
/// worst per-draw unitarity residual.
#[derive(Debug, Clone, Copy)]
pub struct HaarMomentReport {
    pub realizations: u64,
    pub seed: u64,
    pub entry_mean: Complex64,
    pub entry_stderr_re: f64,
    pub entry_stderr_im: f64,
    pub abs2_mean: f64,
    pub abs2_stderr: f64,
    pub expected_abs2: f64,
    pub max_unitarity_residual: f64,
}

pub fn haar_moment_check(d: usize, n: u64, seed: u64) -> Result<HaarMomentReport> {
    if n < 100 {
        return Err(Error::Parameter(format!("need at least 100 realizations, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut s_re, mut s_im, mut s_re2, mut s_im2) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut s_a2, mut s_a4) = (0.0f64, 0.0f64);
    let mut max_unitarity_residual = 0.0f64;
    for _ in 0..n {
        let u = haar_unitary(d, &mut rng);
        let z = u[(0, 0)];
        s_re += z.re;
        s_im += z.im;
        s_re2 += z.re * z.re;
        s_im2 += z.im * z.im;
        let a2 = z.norm_sqr();
        s_a2 += a2;
        s_a4 += a2 * a2;
        let gram = u.adjoint() * &u;
        let mut resid = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { 1.0 } else { 0.0 };
                resid = resid.max((gram[(i, j)] - Complex64::new(expect, 0.0)).norm());
            }
        }
        max_unitarity_residual = max_unitarity_residual.max(resid);
    }
    let nf = n as f64;
    let mean_re = s_re / nf;
    let mean_im = s_im / nf;
    let mean_a2 = s_a2 / nf;
    Ok(HaarMomentReport {
        realizations: n,
        seed,
        entry_mean: Complex64::new(mean_re, mean_im),
        entry_stderr_re: ((s_re2 / nf - mean_re * mean_re).max(0.0) / nf).sqrt(),
        entry_stderr_im: ((s_im2 / nf - mean_im * mean_im).max(0.0) / nf).sqrt(),
        abs2_mean: mean_a2,
        abs2_stderr: ((s_a4 / nf - mean_a2 * mean_a2).max(0.0) / nf).sqrt(),
        expected_abs2: 1.0 / d as f64,
        max_unitarity_residual,
    })
}
