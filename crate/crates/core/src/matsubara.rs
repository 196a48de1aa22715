//! Truncated Matsubara sums and products, and finite differences of free
//! energies. These are the independent oracles for the closed forms in
//! [`crate::forces`].
//!
//! Every sum runs over ω_n = 2πnT for n = 0..=n_max in ascending order with
//! compensated accumulation, so results do not depend on how callers
//! schedule work. The tail beyond n_max is the Euler–Maclaurin integral of
//! the summand's `A/ω² + B/ω³` asymptote; the reported truncation estimate
//! bounds what that asymptote leaves out.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::oscillator::{eigenfrequencies_drude_approx, eigenfrequencies_drude_exact, Eigenfrequencies};
use crate::summation::CompensatedSum;
use crate::{Error, OscillatorParams, ParametricModel, Result, Sensitivity};

/// Upper bound on the term count chosen by [`SumSpec::auto`].
pub const AUTO_N_MAX_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    None,
    IntegralEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SumSpec {
    pub n_max: u64,
    pub tail: Tail,
    /// Weight ½ on the n = 0 term (the primed sum).
    pub half_weight_n0: bool,
}

impl SumSpec {
    pub fn new(n_max: u64) -> Self {
        SumSpec { n_max: n_max.max(1), tail: Tail::IntegralEstimate, half_weight_n0: true }
    }

    pub fn without_tail(mut self) -> Self {
        self.tail = Tail::None;
        self
    }

    /// At least `base` terms, and enough that ω_{n_max} exceeds the largest
    /// oscillator scale by a factor 10⁴, capped at [`AUTO_N_MAX_CAP`].
    pub fn auto(p: &OscillatorParams, base: u64) -> Self {
        let scale = p.omega0.max(p.gamma0()).max(p.damping.omega_d().unwrap_or(0.0));
        let spacing = p.matsubara_spacing();
        let wanted = if spacing > 0.0 { (1e4 * scale / spacing).ceil() } else { f64::INFINITY };
        let n = (base as f64).max(wanted).min(AUTO_N_MAX_CAP as f64);
        SumSpec::new(n as u64)
    }
}

impl Default for SumSpec {
    fn default() -> Self {
        SumSpec::new(100_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub truncation_estimate: f64,
    pub n_used: u64,
}

/// Highest inverse power of ω kept in a summand's asymptote.
const MAX_POWER: usize = 8;

/// Large-ω behaviour `Σ_k c_k/ω^k`, k = 2..=MAX_POWER, of a summand.
#[derive(Debug, Clone, Copy, Default)]
struct Asymptote {
    coeffs: [f64; MAX_POWER - 1],
}

impl Asymptote {
    fn new(a: f64, b: f64) -> Self {
        let mut coeffs = [0.0; MAX_POWER - 1];
        coeffs[0] = a;
        coeffs[1] = b;
        Asymptote { coeffs }
    }

    fn at(&self, w: f64) -> f64 {
        let inv = 1.0 / w;
        self.coeffs.iter().rev().fold(0.0, |acc, c| (acc + c) * inv) * inv
    }

    /// Σ_{n > n_max} of the asymptote at ω = spacing·n, each power summed
    /// by the midpoint Euler–Maclaurin rule.
    fn tail(&self, spacing: f64, n_max: u64) -> f64 {
        let x = n_max as f64 + 0.5;
        let mut total = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0.0 {
                continue;
            }
            let k = (i + 2) as i32;
            let kf = k as f64;
            let power_sum = x.powi(1 - k) / (kf - 1.0) - kf * x.powi(-k - 1) / 24.0;
            total += c / spacing.powi(k) * power_sum;
        }
        total
    }
}

/// Σ′ g(ω_n), n = 0..=n_max, plus tail. `g` must behave as `asym` for large ω.
fn primed_sum(temperature: f64, spec: &SumSpec, asym: Asymptote, g: impl Fn(f64) -> f64) -> OracleResult {
    let spacing = 2.0 * PI * temperature;
    let mut acc = CompensatedSum::new();
    let mut magnitude = CompensatedSum::new();
    let g0 = g(0.0);
    let w0 = if spec.half_weight_n0 { 0.5 } else { 1.0 };
    acc.add(w0 * g0);
    magnitude.add((w0 * g0).abs());
    let mut last = 0.0;
    for n in 1..=spec.n_max {
        last = g(spacing * n as f64);
        acc.add(last);
        magnitude.add(last.abs());
    }
    let w_last = spacing * spec.n_max as f64;
    let tail = asym.tail(spacing, spec.n_max);
    let residual = (last - asym.at(w_last)).abs() * spec.n_max as f64 / 2.0;
    let rounding = f64::EPSILON * magnitude.value();
    let (value, truncation) = match spec.tail {
        Tail::IntegralEstimate => {
            acc.add(tail);
            (acc.value(), residual + rounding)
        }
        Tail::None => (acc.value(), tail.abs() + residual + rounding),
    };
    OracleResult { value, truncation_estimate: truncation, n_used: spec.n_max }
}

fn scaled(r: OracleResult, factor: f64) -> OracleResult {
    OracleResult {
        value: factor * r.value,
        truncation_estimate: factor.abs() * r.truncation_estimate,
        n_used: r.n_used,
    }
}

fn require_positive_temperature(p: &OscillatorParams) -> Result<()> {
    if p.temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition("Matsubara sums require T > 0".into()))
    }
}

/// `f = −T Σ′ [2ΩΩ′ + ω_n γ′(iω_n)] / [ω_n² + γ(iω_n)ω_n + Ω²]`.
pub fn force_sum_exact(p: &OscillatorParams, s: &Sensitivity, spec: &SumSpec) -> Result<OracleResult> {
    require_positive_temperature(p)?;
    let omega = p.omega0;
    let gamma0 = p.gamma0();
    let (asym, d_gamma): (Asymptote, Box<dyn Fn(f64) -> f64>) = match p.damping.omega_d() {
        None => {
            if s.gamma0 != 0.0 {
                return Err(Error::DivergentSum(
                    "the γ′ sum diverges logarithmically for Ohmic damping".into(),
                ));
            }
            let a = 2.0 * omega * s.omega;
            (Asymptote::new(a, -a * gamma0), Box::new(|_| 0.0))
        }
        Some(omega_d) => {
            let asym = Asymptote::new(
                2.0 * omega * s.omega + s.gamma0 * omega_d + gamma0 * s.omega_d,
                -s.gamma0 * omega_d * omega_d - 2.0 * gamma0 * s.omega_d * omega_d,
            );
            let (dg0, dwd) = (s.gamma0, s.omega_d);
            let d_gamma = move |w: f64| {
                let q = omega_d + w;
                dg0 * omega_d / q + gamma0 * dwd * w / (q * q)
            };
            (asym, Box::new(d_gamma))
        }
    };
    let damping = p.damping;
    let g = |w: f64| {
        let num = 2.0 * omega * s.omega + w * d_gamma(w);
        num / (w * w + damping.at_matsubara(w) * w + omega * omega)
    };
    Ok(scaled(primed_sum(p.temperature, spec, asym, g), -p.temperature))
}

/// [`force_sum_exact`] for a parametric model at λ.
pub fn force_sum_model(
    m: &dyn ParametricModel,
    lambda: f64,
    temperature: f64,
    spec: &SumSpec,
) -> Result<OracleResult> {
    let p = m.params_at(lambda, temperature)?;
    force_sum_exact(&p, &m.sensitivity(lambda), spec)
}

/// `F(Ω₂) − F(Ω₁) = T Σ′ ln[1 + (Ω₂² − Ω₁²)/(ω_n² + ω_nγ(iω_n) + Ω₁²)]`.
pub fn free_energy_difference(p1: &OscillatorParams, p2: &OscillatorParams, spec: &SumSpec) -> Result<OracleResult> {
    if p1.damping != p2.damping || p1.temperature != p2.temperature {
        return Err(Error::Precondition(
            "free-energy differences require a shared damping function and temperature".into(),
        ));
    }
    require_positive_temperature(p1)?;
    let delta = p2.omega0 * p2.omega0 - p1.omega0 * p1.omega0;
    if delta == 0.0 {
        return Ok(OracleResult { value: 0.0, truncation_estimate: 0.0, n_used: 0 });
    }
    let b = if p1.damping.is_ohmic() { -delta * p1.gamma0() } else { 0.0 };
    let asym = Asymptote::new(delta, b);
    let omega1_sq = p1.omega0 * p1.omega0;
    let damping = p1.damping;
    let g = |w: f64| (delta / (w * w + damping.at_matsubara(w) * w + omega1_sq)).ln_1p();
    Ok(scaled(primed_sum(p1.temperature, spec, asym, g), p1.temperature))
}

/// Drude free energy as the truncated Matsubara product, with the
/// first-order roots.
pub fn free_energy_drude(p: &OscillatorParams, spec: &SumSpec) -> Result<OracleResult> {
    let roots = eigenfrequencies_drude_approx(p)?;
    free_energy_drude_with(p, &roots, spec)
}

/// `F = T ln(Ω/T) + T Σ_{n≥1} ln[Π_k(1 + iω_k/ω_n) / (1 + ω_D/ω_n)]` for the
/// given roots. The product converges only if the roots sum to ω_D.
pub fn free_energy_drude_with(p: &OscillatorParams, roots: &Eigenfrequencies, spec: &SumSpec) -> Result<OracleResult> {
    let omega_d = p
        .damping
        .omega_d()
        .ok_or_else(|| Error::Precondition("Drude damping required".into()))?;
    require_positive_temperature(p)?;
    let s3 = roots
        .i_omega3
        .ok_or_else(|| Error::Precondition("three eigenfrequencies required".into()))?;
    let [s1, s2] = roots.i_omega;
    // real symmetric functions of the oscillator pair
    let sigma = (s1 + s2).re;
    let pi2 = (s1 * s2).re;
    if (sigma + s3 - omega_d).abs() > 1e-10 * omega_d {
        return Err(Error::DivergentSum("eigenfrequencies do not sum to ω_D".into()));
    }
    // ln(1 + s/ω) = Σ_k (−1)^(k+1) s^k/(kω^k); the k = 1 terms cancel.
    // s₃^k − ω_D^k is taken as (s₃ − ω_D)·Σ_j s₃^j ω_D^(k−1−j).
    let mut asym = Asymptote::default();
    let (mut p1, mut p2) = (s1, s2);
    let mut s3_prev = 1.0;
    let mut geometric = 1.0;
    for k in 2..=MAX_POWER {
        p1 *= s1;
        p2 *= s2;
        s3_prev *= s3;
        geometric = geometric * omega_d + s3_prev;
        let p_k = (p1 + p2).re + (s3 - omega_d) * geometric;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        asym.coeffs[k - 2] = sign * p_k / k as f64;
    }
    let g = |w: f64| {
        if w == 0.0 {
            return 0.0;
        }
        (sigma / w + pi2 / (w * w)).ln_1p() + (s3 / w).ln_1p() - (omega_d / w).ln_1p()
    };
    let t = p.temperature;
    let spec = SumSpec { half_weight_n0: false, ..*spec };
    let sum = scaled(primed_sum(t, &spec, asym, g), t);
    Ok(OracleResult { value: t * (p.omega0 / t).ln() + sum.value, ..sum })
}

/// The four Drude force pieces f_Ω, f_γ₀, f_{ω_D,1}, f_{ω_D,2} as separate
/// sums over the exact eigenfrequencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrudeSums {
    pub omega: OracleResult,
    pub gamma0: OracleResult,
    pub omega_d_1: OracleResult,
    pub omega_d_2: OracleResult,
}

impl DrudeSums {
    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for r in [self.omega, self.gamma0, self.omega_d_1, self.omega_d_2] {
            acc.add(r.value);
        }
        acc.value()
    }

    pub fn truncation_estimate(&self) -> f64 {
        self.omega.truncation_estimate
            + self.gamma0.truncation_estimate
            + self.omega_d_1.truncation_estimate
            + self.omega_d_2.truncation_estimate
    }
}

pub fn per_parameter_sums_drude(p: &OscillatorParams, s: &Sensitivity, spec: &SumSpec) -> Result<DrudeSums> {
    let roots = eigenfrequencies_drude_exact(p)?;
    per_parameter_sums_drude_with(p, s, &roots, spec)
}

pub fn per_parameter_sums_drude_with(
    p: &OscillatorParams,
    s: &Sensitivity,
    roots: &Eigenfrequencies,
    spec: &SumSpec,
) -> Result<DrudeSums> {
    let omega_d = p
        .damping
        .omega_d()
        .ok_or_else(|| Error::Precondition("Drude damping required".into()))?;
    require_positive_temperature(p)?;
    let s3 = roots
        .i_omega3
        .ok_or_else(|| Error::Precondition("three eigenfrequencies required".into()))?;
    let pair = roots.i_omega;
    let product = |w: f64| -> f64 {
        let q: Complex64 = (w + pair[0]) * (w + pair[1]);
        q.re * (w + s3)
    };
    let (omega, gamma0, t) = (p.omega0, p.gamma0(), p.temperature);
    let neg_t = -t;

    let a = 2.0 * omega * s.omega;
    let f_omega = primed_sum(t, spec, Asymptote::new(a, 0.0), |w| a * (w + omega_d) / product(w));

    let c = s.gamma0 * omega_d;
    let f_gamma0 = primed_sum(t, spec, Asymptote::new(c, -c * omega_d), |w| c * w / product(w));

    let c1 = gamma0 * s.omega_d;
    let f_wd1 = primed_sum(t, spec, Asymptote::new(c1, -c1 * omega_d), |w| c1 * w / product(w));

    let c2 = -omega_d * gamma0 * s.omega_d;
    let f_wd2 = primed_sum(t, spec, Asymptote::new(0.0, c2), |w| c2 * w / ((w + omega_d) * product(w)));

    Ok(DrudeSums {
        omega: scaled(f_omega, neg_t),
        gamma0: scaled(f_gamma0, neg_t),
        omega_d_1: scaled(f_wd1, neg_t),
        omega_d_2: scaled(f_wd2, neg_t),
    })
}

/// Default relative step for [`finite_difference_force`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// `−dF/dλ` by central differences at steps h and h/2 combined by
/// Richardson extrapolation. `h` defaults to 1e-5·|λ| (1e-5 at λ = 0).
/// The truncation estimate is the size of the Richardson correction plus
/// a rounding bound.
pub fn finite_difference_force(
    energy: impl Fn(f64) -> Result<f64>,
    lambda: f64,
    h: Option<f64>,
) -> Result<OracleResult> {
    let h = h.unwrap_or_else(|| if lambda == 0.0 { DEFAULT_FD_STEP } else { DEFAULT_FD_STEP * lambda.abs() });
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!("finite-difference step must be > 0, got {h}")));
    }
    let mut scale: f64 = 0.0;
    let mut central = |step: f64| -> Result<f64> {
        let up = energy(lambda + step)?;
        let down = energy(lambda - step)?;
        scale = scale.max(up.abs()).max(down.abs());
        Ok((up - down) / (2.0 * step))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let rounding = 4.0 * f64::EPSILON * scale / h;
    Ok(OracleResult {
        value: -extrapolated,
        truncation_estimate: (fine - coarse).abs() / 3.0 + rounding,
        n_used: 4,
    })
}

/// Finite-difference force of the Gamma-function Drude free energy along a
/// parametric model.
pub fn drude_finite_difference_force(
    m: &dyn ParametricModel,
    lambda: f64,
    temperature: f64,
    h: Option<f64>,
) -> Result<OracleResult> {
    finite_difference_force(
        |l| Ok(crate::forces::free_energy_drude_gamma(&m.params_at(l, temperature)?)?.value),
        lambda,
        h,
    )
}
