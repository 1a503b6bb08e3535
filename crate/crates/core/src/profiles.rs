//! Boundary-overlap profiles g(y): the weight the initial state pair assigns
//! to a boundary configuration with `y` swap-type slots on the right.
//!
//! Every finite-time profile evaluates to exact rationals so the contraction
//! with the walk coefficients stays exact end to end. Floating-point inputs
//! (amplitudes, measured tables) are converted to the dyadic rationals they
//! already are.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parse a plain decimal string (`-12.75e-3` style) into an exact rational.
///
/// Unlike `f64` round-tripping this keeps `0.7` as exactly `7/10`.
pub fn rational_from_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parameter(format!("cannot parse '{s}' as a decimal number"));
    if s.is_empty() {
        return Err(bad());
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (mantissa, sign) = match mantissa.strip_prefix('-') {
        Some(rest) => (rest, -1),
        None => (mantissa.strip_prefix('+').unwrap_or(mantissa), 1),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let numer = BigInt::from_str(&digits).map_err(|_| bad())? * BigInt::from(sign);
    let shift = exp10 - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if shift >= 0 {
        BigRational::from_integer(numer * ten.pow(shift as u32))
    } else {
        BigRational::new(numer, ten.pow((-shift) as u32))
    })
}

fn unit_interval(name: &str, v: &BigRational) -> Result<()> {
    if v < &BigRational::zero() || v > &BigRational::one() {
        return Err(Error::Parameter(format!("{name} = {v} must lie in [0, 1]")));
    }
    Ok(())
}

/// Overlap profile of an initial state pair, evaluated on boundary
/// configurations indexed by the number of swap slots `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum OverlapProfile {
    /// Two-site translation-invariant product pair: g(y) = beta^(y-p) gamma^p
    /// with p = y mod 2.
    PairProduct { beta: BigRational, gamma: BigRational },
    /// Superposed single-excitation pair on qubits: the large-L quadratic
    /// profile g(y) = ((2L - y)^2 + omega y^2) / (2L)^2.
    WState { c1: Complex64, c2: Complex64, two_l: u32, omega: BigRational },
    /// g identically 1: the self-profile of any normalized product state.
    UniformOne,
    /// Explicit per-y values, e.g. measured overlaps or the
    /// exact finite-size excitation-pair overlaps.
    Tabulated { values: Vec<BigRational> },
    /// Mixed-state descriptor for stationary formulas only: the cross purity
    /// tr(rho rho') and the purity exponents s, s' (purity = q^(-2Ls)).
    /// Refuses pointwise evaluation away from y = 0.
    MixedLongTime { cross: f64, s: f64, s_prime: f64 },
}

/// g ≡ 1, the denominator profile for product-state pairs.
pub fn uniform_one() -> OverlapProfile {
    OverlapProfile::UniformOne
}

/// Product-pair profile from its two overlap scalars.
pub fn pair_product_profile(beta: BigRational, gamma: BigRational) -> Result<OverlapProfile> {
    unit_interval("beta", &beta)?;
    unit_interval("gamma", &gamma)?;
    if gamma.is_zero() && !beta.is_zero() {
        return Err(Error::Parameter(
            "gamma = 0 requires beta = 0 (an orthogonal odd bond forces orthogonal even bonds)"
                .into(),
        ));
    }
    Ok(OverlapProfile::PairProduct { beta, gamma })
}

/// Squared overlap of the two superposed-excitation states in the large-L
/// normalization: (|c1|^2 - |c2|^2)^2.
pub fn omega_from_amplitudes(c1: Complex64, c2: Complex64) -> Result<f64> {
    let n = c1.norm_sqr() + c2.norm_sqr();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Parameter(format!(
            "amplitudes must be normalized: |c1|^2 + |c2|^2 = {n}"
        )));
    }
    let d = c1.norm_sqr() - c2.norm_sqr();
    Ok(d * d)
}

/// Excitation-pair cross profile from explicit amplitudes.
pub fn w_state_profile(c1: Complex64, c2: Complex64, two_l: u32) -> Result<OverlapProfile> {
    let omega = omega_from_amplitudes(c1, c2)?;
    let omega = BigRational::from_f64(omega)
        .ok_or_else(|| Error::Parameter("omega is not finite".into()))?;
    Ok(OverlapProfile::WState { c1, c2, two_l, omega })
}

/// Excitation-pair cross profile from a target omega; picks the real
/// amplitude pair c1 = sqrt((1 + sqrt(omega))/2), c2 = sqrt((1 - sqrt(omega))/2).
pub fn w_state_profile_from_omega(omega: BigRational, two_l: u32) -> Result<OverlapProfile> {
    unit_interval("omega", &omega)?;
    let w = omega.to_f64().unwrap();
    let c1 = Complex64::new(((1.0 + w.sqrt()) / 2.0).sqrt(), 0.0);
    let c2 = Complex64::new(((1.0 - w.sqrt()) / 2.0).sqrt(), 0.0);
    Ok(OverlapProfile::WState { c1, c2, two_l, omega })
}

/// Self-profile of a superposed-excitation state: the quadratic profile with
/// omega pinned to 1 (the pair is the state with itself by construction).
pub fn w_self_profile(two_l: u32) -> OverlapProfile {
    OverlapProfile::WState {
        c1: Complex64::new(1.0, 0.0),
        c2: Complex64::new(0.0, 0.0),
        two_l,
        omega: BigRational::one(),
    }
}

/// Explicit per-y profile; `values[y]` is g(y) for y = 0..=2L.
pub fn tabulated(values: Vec<BigRational>) -> Result<OverlapProfile> {
    if values.len() < 2 {
        return Err(Error::Parameter("a tabulated profile needs at least two entries".into()));
    }
    let v0 = values[0].to_f64().unwrap_or(f64::NAN);
    if (v0 - 1.0).abs() > 1e-6 {
        return Err(Error::Parameter(format!(
            "tabulated profiles must be normalized: g(0) = {v0}, expected 1"
        )));
    }
    Ok(OverlapProfile::Tabulated { values })
}

/// Explicit per-y profile from floating-point samples.
pub fn tabulated_from_f64(values: &[f64]) -> Result<OverlapProfile> {
    let vals: Option<Vec<BigRational>> =
        values.iter().map(|&v| BigRational::from_f64(v)).collect();
    tabulated(vals.ok_or_else(|| Error::Parameter("table contains a non-finite value".into()))?)
}

/// Mixed-state stationary descriptor. `cross` = tr(rho rho'); `s`, `s_prime`
/// are the purity exponents of the two states.
pub fn mixed_long_time(cross: f64, s: f64, s_prime: f64) -> Result<OverlapProfile> {
    if !(0.0..=1.0).contains(&cross) {
        return Err(Error::Parameter(format!("cross purity {cross} must lie in [0, 1]")));
    }
    for (name, v) in [("s", s), ("sp", s_prime)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Parameter(format!("purity exponent {name} = {v} must lie in [0, 1]")));
        }
    }
    Ok(OverlapProfile::MixedLongTime { cross, s, s_prime })
}

impl OverlapProfile {
    /// Exact profile value g(y).
    pub fn evaluate(&self, y: u32) -> Result<BigRational> {
        match self {
            Self::PairProduct { beta, gamma } => {
                let p = y % 2;
                Ok(beta.clone().pow((y - p) as i32)
                    * if p == 1 { gamma.clone() } else { BigRational::one() })
            }
            Self::WState { two_l, omega, .. } => {
                let two_l = *two_l;
                if y > two_l {
                    return Err(Error::DimensionMismatch(format!(
                        "y = {y} exceeds the chain length {two_l}"
                    )));
                }
                let holes = BigRational::from_integer(BigInt::from(two_l - y));
                let exc = BigRational::from_integer(BigInt::from(y));
                let den = BigRational::from_integer(BigInt::from(two_l));
                Ok((&holes * &holes + omega * &exc * &exc) / (&den * &den))
            }
            Self::UniformOne => Ok(BigRational::one()),
            Self::Tabulated { values } => values.get(y as usize).cloned().ok_or_else(|| {
                Error::DimensionMismatch(format!(
                    "y = {y} outside the tabulated range 0..={}",
                    values.len() - 1
                ))
            }),
            Self::MixedLongTime { .. } => {
                if y == 0 {
                    Ok(BigRational::one())
                } else {
                    Err(Error::ProfileNotEvaluable(
                        "mixed-state descriptors only enter stationary formulas".into(),
                    ))
                }
            }
        }
    }

    pub fn evaluate_f64(&self, y: u32) -> Result<f64> {
        Ok(self.evaluate(y)?.to_f64().unwrap())
    }

    /// Chain length this profile is tied to, if any.
    pub fn two_l(&self) -> Option<u32> {
        match self {
            Self::WState { two_l, .. } => Some(*two_l),
            Self::Tabulated { values } => Some(values.len() as u32 - 1),
            _ => None,
        }
    }

    /// All values g(0..=two_l), checking chain-length consistency.
    pub fn tabulate(&self, two_l: u32) -> Result<Vec<BigRational>> {
        if let Some(own) = self.two_l() {
            if own != two_l {
                return Err(Error::DimensionMismatch(format!(
                    "profile is tied to chain length {own}, requested {two_l}"
                )));
            }
        }
        (0..=two_l).map(|y| self.evaluate(y)).collect()
    }
}

fn half(n: u32) -> u32 {
    n / 2
}

/// Exact finite-size overlap of the superposed-excitation cross pair at cut
/// `y`, by direct double summation over excitation positions (qubits only).
///
/// Keeps the finite-size parity terms the quadratic profile drops; the two
/// agree as 2L grows with y/2L fixed.
pub fn exact_w_overlap(c1: Complex64, c2: Complex64, two_l: u32, y: u32) -> Result<f64> {
    exact_w_sums(c1, c2, two_l, y, true)
}

/// Exact finite-size self overlap of a single superposed-excitation state.
/// For the partner state's self overlap, negate `c2`.
pub fn exact_w_self_overlap(c1: Complex64, c2: Complex64, two_l: u32, y: u32) -> Result<f64> {
    exact_w_sums(c1, c2, two_l, y, false)
}

fn exact_w_sums(c1: Complex64, c2: Complex64, two_l: u32, y: u32, cross: bool) -> Result<f64> {
    omega_from_amplitudes(c1, c2)?;
    if two_l < 4 || two_l % 2 != 0 {
        return Err(Error::Geometry(format!("chain length {two_l} must be even and >= 4")));
    }
    if y > two_l {
        return Err(Error::DimensionMismatch(format!("y = {y} exceeds chain length {two_l}")));
    }
    let l = half(two_l) as usize;
    // Excitation at site 2n lies left of the cut (trace-type slot) for the
    // first n_trace values of n, right of it (swap-type) otherwise.
    let n_trace = half(two_l - y + 1) as usize;
    let amp_plus: Vec<Complex64> =
        (0..l).map(|n| c1 + c2 * if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let amp_minus: Vec<Complex64> =
        (0..l).map(|n| c1 - c2 * if n % 2 == 0 { 1.0 } else { -1.0 }).collect();
    let (bra, ket): (&[Complex64], &[Complex64]) =
        if cross { (&amp_plus, &amp_minus) } else { (&amp_plus, &amp_plus) };

    // Trace-type region pairs each replica with its own conjugate: the sum
    // factorizes into |amp|^2 sums taken independently over n1 and n3.
    let mut trace_term = Complex64::new(0.0, 0.0);
    for n1 in 0..n_trace {
        for n3 in 0..n_trace {
            trace_term += bra[n1] * bra[n1].conj() * ket[n3] * ket[n3].conj();
        }
    }
    // Swap-type region pairs each replica with the conjugate of the partner.
    let mut swap_term = Complex64::new(0.0, 0.0);
    for n1 in n_trace..l {
        for n3 in n_trace..l {
            swap_term += bra[n1] * ket[n1].conj() * ket[n3] * bra[n3].conj();
        }
    }
    let norm_bra: f64 = bra.iter().map(|a| a.norm_sqr()).sum();
    let norm_ket: f64 = ket.iter().map(|a| a.norm_sqr()).sum();
    Ok((trace_term + swap_term).re / (norm_bra * norm_ket))
}

/// Parse the CLI profile mini-language:
/// `pair:beta=0.7[,gamma=0.7]`, `w:omega=0.7`, `w:c1=...,c2=...`,
/// `mixed:cross=...,s=...,sp=...`, `table:@file`.
pub fn parse_profile_spec(spec: &str, two_l: u32) -> Result<OverlapProfile> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parameter(format!("profile spec '{spec}' has no 'kind:' prefix")))?;
    let fields = |body: &str, allowed: &[&str]| -> Result<Vec<(String, String)>> {
        let mut out = Vec::new();
        for part in body.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| {
                Error::Parameter(format!("expected key=value, got '{part}' in '{spec}'"))
            })?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(Error::Parameter(format!(
                    "unknown key '{k}' in '{spec}' (allowed: {})",
                    allowed.join(", ")
                )));
            }
            out.push((k.to_string(), v.trim().to_string()));
        }
        Ok(out)
    };
    let lookup = |pairs: &[(String, String)], key: &str| -> Option<String> {
        pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    };
    let f64_of = |v: &str| -> Result<f64> {
        v.parse::<f64>()
            .map_err(|_| Error::Parameter(format!("cannot parse '{v}' as a number")))
    };
    match kind.trim() {
        "pair" => {
            let pairs = fields(body, &["beta", "gamma"])?;
            let beta = lookup(&pairs, "beta")
                .ok_or_else(|| Error::Parameter("pair profile needs beta=...".into()))?;
            let beta = rational_from_decimal(&beta)?;
            let gamma = match lookup(&pairs, "gamma") {
                Some(g) => rational_from_decimal(&g)?,
                None => beta.clone(),
            };
            pair_product_profile(beta, gamma)
        }
        "w" => {
            let pairs = fields(body, &["omega", "c1", "c2"])?;
            match (lookup(&pairs, "omega"), lookup(&pairs, "c1"), lookup(&pairs, "c2")) {
                (Some(om), None, None) => {
                    w_state_profile_from_omega(rational_from_decimal(&om)?, two_l)
                }
                (None, Some(c1), Some(c2)) => {
                    let c1 = Complex64::new(f64_of(&c1)?, 0.0);
                    let c2 = Complex64::new(f64_of(&c2)?, 0.0);
                    w_state_profile(c1, c2, two_l)
                }
                _ => Err(Error::Parameter(
                    "w profile takes either omega=... or both c1=... and c2=...".into(),
                )),
            }
        }
        "mixed" => {
            let pairs = fields(body, &["cross", "s", "sp"])?;
            let need = |key: &str| -> Result<f64> {
                f64_of(&lookup(&pairs, key).ok_or_else(|| {
                    Error::Parameter(format!("mixed profile needs {key}=..."))
                })?)
            };
            mixed_long_time(need("cross")?, need("s")?, need("sp")?)
        }
        "table" => {
            let path = body.strip_prefix('@').ok_or_else(|| {
                Error::Parameter("table profile takes @path to a file of per-y values".into())
            })?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parameter(format!("cannot read '{path}': {e}")))?;
            let mut values = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                values.push(rational_from_decimal(line)?);
            }
            if values.len() != two_l as usize + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "table '{path}' has {} values, expected two_l + 1 = {}",
                    values.len(),
                    two_l + 1
                )));
            }
            tabulated(values)
        }
        other => Err(Error::Parameter(format!(
            "unknown profile kind '{other}' (expected pair, w, mixed, or table)"
        ))),
    }
}
