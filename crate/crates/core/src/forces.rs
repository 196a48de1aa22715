//! Closed-form forces and free energies.
//!
//! Every exact expression here is a Matsubara sum done in closed form. The
//! recurring building block is the digamma divided difference
//!
//! ```text
//! D = [ψ(1 + s₂/2πT) − ψ(1 + s₁/2πT)] / (s₂ − s₁),    s = iω
//! ```
//!
//! which equals `i/(2√(Ω²−γ²/4))·[ψ(…ω₂…) − ψ(…ω₁…)]` and is real for a
//! conjugate or a real pair. Writing the brackets as divided differences
//! gives one code path for under- and overdamped oscillators; at critical
//! damping the 0/0 limit is the trigamma at the common argument.
//!
//! The low-temperature forms replace ψ(1 + s/2πT) by ln(s), which turns D
//! into the logarithmic divided difference `(ln s₂ − ln s₁)/(s₂ − s₁)`.
//!
//! `T = 0` requests to the exact Ohmic and Drude forces are answered by the
//! low-temperature forms and labelled [`Regime::LowT`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::oscillator::{eigenfrequencies_drude_approx, oscillator_root, Eigenfrequencies};
use crate::specfun::{digamma, log_gamma, trigamma};
use crate::{Components, Error, ForceResult, OscillatorParams, Regime, Result, Sensitivity, Warning};

/// |Ω² − γ²/4| ≤ this·Ω² switches divided differences to their derivative.
pub const CRITICAL_DAMPING_WINDOW: f64 = 1e-8;

/// Thresholds behind the regime warnings of the asymptotic forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guards {
    /// Weak dissipation requires γ ≤ this·min(Ω, T).
    pub weak_dissipation: f64,
    /// High-T forms require T ≥ this·max(Ω, γ).
    pub high_t: f64,
    /// Low-T forms require T ≤ this·min(|iω₁|, |iω₂|).
    pub low_t: f64,
    /// Very-high-T and Drude high-T windows use this ratio between scales.
    pub separation: f64,
}

impl Guards {
    pub const DEFAULT: Guards = Guards { weak_dissipation: 0.01, high_t: 10.0, low_t: 0.01, separation: 10.0 };

    pub fn weak_dissipation_ok(&self, p: &OscillatorParams) -> bool {
        p.gamma0() <= self.weak_dissipation * p.omega0.min(p.temperature)
    }

    pub fn high_t_ok(&self, p: &OscillatorParams) -> bool {
        p.temperature >= self.high_t * p.omega0.max(p.gamma0())
    }

    /// The low-T scale is the smaller oscillator rate; for strong damping
    /// this is ≈ Ω²/γ.
    pub fn low_t_ok(&self, p: &OscillatorParams) -> bool {
        let pair = Pair::new(p.omega0, p.gamma0());
        p.temperature <= self.low_t * pair.s1.norm().min(pair.s2.norm())
    }
}

impl Default for Guards {
    fn default() -> Self {
        Guards::DEFAULT
    }
}

/// Free energy with the imaginary part discarded from the Gamma products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergy {
    pub value: f64,
    pub imag_residual: f64,
}

/// The oscillator pair iω₁,₂ = γ/2 ± i√(Ω² − γ²/4).
#[derive(Debug, Clone, Copy)]
struct Pair {
    s1: Complex64,
    s2: Complex64,
    near_critical: bool,
}

impl Pair {
    fn new(omega0: f64, gamma: f64) -> Self {
        let r = oscillator_root(omega0, gamma);
        let half = Complex64::new(0.5 * gamma, 0.0);
        let i = Complex64::i();
        Pair {
            s1: half + i * r,
            s2: half - i * r,
            near_critical: r.norm_sqr() <= CRITICAL_DAMPING_WINDOW * omega0 * omega0,
        }
    }

    fn mid(&self) -> Complex64 {
        0.5 * (self.s1 + self.s2)
    }
}

/// ψ(1 + s/2πT) at both roots plus their divided difference in `s`.
struct DigammaPair {
    psi1: Complex64,
    psi2: Complex64,
    divided: Complex64,
}

fn digamma_pair(pair: &Pair, temperature: f64) -> Result<DigammaPair> {
    let spacing = 2.0 * PI * temperature;
    let psi1 = digamma(1.0 + pair.s1 / spacing)?;
    let psi2 = digamma(1.0 + pair.s2 / spacing)?;
    let divided = if pair.near_critical {
        trigamma(1.0 + pair.mid() / spacing)? / spacing
    } else {
        (psi2 - psi1) / (pair.s2 - pair.s1)
    };
    Ok(DigammaPair { psi1, psi2, divided })
}

/// (ln s₂ − ln s₁)/(s₂ − s₁), the T → 0 limit of the digamma divided
/// difference.
fn log_divided(pair: &Pair) -> Complex64 {
    if pair.near_critical {
        pair.mid().inv()
    } else {
        (pair.s2.ln() - pair.s1.ln()) / (pair.s2 - pair.s1)
    }
}

fn require_ohmic(p: &OscillatorParams) -> Result<()> {
    if p.damping.is_ohmic() {
        Ok(())
    } else {
        Err(Error::Precondition("Ohmic damping required".into()))
    }
}

fn require_drude(p: &OscillatorParams) -> Result<f64> {
    p.damping
        .omega_d()
        .ok_or_else(|| Error::Precondition("Drude damping required".into()))
}

fn require_positive_temperature(p: &OscillatorParams, what: &str) -> Result<()> {
    if p.temperature > 0.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} requires T > 0")))
    }
}

fn require_omega_only(s: &Sensitivity) -> Result<()> {
    if s.gamma0 != 0.0 || s.omega_d != 0.0 {
        return Err(Error::Precondition(
            "only Ω may depend on λ here; use force_difference for λ-dependent damping".into(),
        ));
    }
    Ok(())
}

fn omega_only(value: f64) -> Components {
    Components { omega: value, ..Default::default() }
}

/// Ohmic force with only Ω depending on λ, from the digamma closed form
/// of the Matsubara sum.
pub fn force_ohmic_exact(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    require_ohmic(p)?;
    require_omega_only(s)?;
    if p.temperature == 0.0 {
        return force_ohmic_low_t(p, s);
    }
    let pair = Pair::new(p.omega0, p.gamma0());
    let dg = digamma_pair(&pair, p.temperature)?;
    let bracket = -p.omega0 * s.omega / PI * dg.divided;
    let value = -p.temperature * s.omega / p.omega0 + bracket.re;
    let mut out = ForceResult::closed_form(value, Regime::Exact).with_components(omega_only(value));
    out.imag_residual = bracket.im.abs();
    Ok(out)
}

/// First order in γ around the undamped oscillator.
pub fn force_ohmic_weak_dissipation(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    require_ohmic(p)?;
    require_omega_only(s)?;
    let (omega, gamma, t) = (p.omega0, p.gamma0(), p.temperature);
    let coefficient = if t == 0.0 {
        // coth → 1, (γ/4π²T)·Im ψ⁽¹⁾(1 + iΩ/2πT) → −γ/2πΩ
        0.5 - gamma / (2.0 * PI * omega)
    } else {
        let tri = trigamma(Complex64::new(1.0, omega / (2.0 * PI * t)))?;
        0.5 / (omega / (2.0 * t)).tanh() + gamma / (4.0 * PI * PI * t) * tri.im
    };
    let value = -coefficient * s.omega;
    Ok(ForceResult::closed_form(value, Regime::WeakDissipation)
        .with_components(omega_only(value))
        .warn_if(!Guards::DEFAULT.weak_dissipation_ok(p), Warning::WeakDissipationRegime))
}

/// −(T/Ω + Ω/12T)·∂Ω/∂λ.
pub fn force_ohmic_high_t(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    require_ohmic(p)?;
    require_omega_only(s)?;
    require_positive_temperature(p, "the high-temperature form")?;
    let (omega, t) = (p.omega0, p.temperature);
    let value = -(t / omega + omega / (12.0 * t)) * s.omega;
    Ok(ForceResult::closed_form(value, Regime::HighT)
        .with_components(omega_only(value))
        .warn_if(!Guards::DEFAULT.high_t_ok(p), Warning::HighTRegime))
}

/// T → 0 limit of [`force_ohmic_exact`]. For γ < 2Ω this is
/// `−ΩΩ′/(2√(Ω²−γ²/4))·(1 − (2/π)arctan(…))`, for γ > 2Ω the logarithmic
/// form; both come out of the same complex expression.
pub fn force_ohmic_low_t(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    force_ohmic_low_t_with(p, s, &Guards::DEFAULT)
}

pub fn force_ohmic_low_t_with(p: &OscillatorParams, s: &Sensitivity, guards: &Guards) -> Result<ForceResult> {
    require_ohmic(p)?;
    require_omega_only(s)?;
    let pair = Pair::new(p.omega0, p.gamma0());
    let term = -p.omega0 * s.omega / PI * log_divided(&pair);
    let mut out = ForceResult::closed_form(term.re, Regime::LowT)
        .with_components(omega_only(term.re))
        .warn_if(!guards.low_t_ok(p), Warning::LowTRegime);
    out.imag_residual = term.im.abs();
    Ok(out)
}

/// f̃: the part of the Ohmic force that survives in differences between two
/// values of a parameter ϰ on which only Ω depends. Here γ may depend on λ;
/// the ϰ-independent logarithmically divergent part of the γ′ sum is
/// dropped.
pub fn force_tilde(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    require_ohmic(p)?;
    require_positive_temperature(p, "the difference force")?;
    if s.omega_d != 0.0 {
        return Err(Error::Precondition("Ohmic damping has no ω_D".into()));
    }
    let (omega, gamma, t) = (p.omega0, p.gamma0(), p.temperature);
    let pair = Pair::new(omega, gamma);
    let dg = digamma_pair(&pair, t)?;
    let from_omega = -t * s.omega / omega - omega * s.omega / PI * dg.divided;
    let from_gamma = s.gamma0 / (4.0 * PI) * (dg.psi1 + dg.psi2) + gamma * s.gamma0 / (4.0 * PI) * dg.divided;
    let total = from_omega + from_gamma;
    let components = Components { omega: from_omega.re, gamma0: from_gamma.re, omega_d: 0.0 };
    let mut out = ForceResult::closed_form(total.re, Regime::Exact).with_components(components);
    out.imag_residual = total.im.abs();
    Ok(out)
}

/// f(ϰ₁) − f(ϰ₂) = f̃(ϰ₁) − f̃(ϰ₂) at fixed λ, for two oscillator states
/// that share the damping function and its λ-dependence.
pub fn force_difference(
    p1: &OscillatorParams,
    s1: &Sensitivity,
    p2: &OscillatorParams,
    s2: &Sensitivity,
) -> Result<ForceResult> {
    if p1.damping != p2.damping || s1.gamma0 != s2.gamma0 || s1.omega_d != s2.omega_d {
        return Err(Error::Precondition(
            "force differences require a damping function independent of ϰ".into(),
        ));
    }
    if p1.temperature != p2.temperature {
        return Err(Error::Precondition("force differences require equal temperatures".into()));
    }
    let a = force_tilde(p1, s1)?;
    let b = force_tilde(p2, s2)?;
    let ca = a.components.unwrap_or_default();
    let cb = b.components.unwrap_or_default();
    let mut out = ForceResult::closed_form(a.value - b.value, Regime::Exact).with_components(Components {
        omega: ca.omega - cb.omega,
        gamma0: ca.gamma0 - cb.gamma0,
        omega_d: 0.0,
    });
    out.imag_residual = a.imag_residual + b.imag_residual;
    Ok(out)
}

/// Total Drude force from the Gamma-function free energy with first-order
/// roots, split into the Ω, γ₀ and ω_D groups.
pub fn force_drude_full(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    let omega_d = require_drude(p)?;
    if p.temperature == 0.0 {
        return force_drude_low_t(p, s);
    }
    let (omega, gamma0, t) = (p.omega0, p.gamma0(), p.temperature);
    let spacing = 2.0 * PI * t;
    let pair = Pair::new(omega, gamma0);
    let dg = digamma_pair(&pair, t)?;
    let psi3 = digamma(Complex64::new(1.0 + (omega_d - gamma0) / spacing, 0.0))?.re;
    let psi_d = digamma(Complex64::new(1.0 + omega_d / spacing, 0.0))?.re;

    let f_omega = -t * s.omega / omega - omega * s.omega / PI * dg.divided;
    let f_gamma0 = s.gamma0 / (4.0 * PI) * (dg.psi1 + dg.psi2 - 2.0 * psi3) + gamma0 * s.gamma0 / (4.0 * PI) * dg.divided;
    let f_omega_d = s.omega_d / (2.0 * PI) * (psi3 - psi_d);

    let total = f_omega + f_gamma0 + f_omega_d;
    let components = Components { omega: f_omega.re, gamma0: f_gamma0.re, omega_d: f_omega_d };
    let mut out = ForceResult::closed_form(components.total(), Regime::Exact)
        .with_components(components)
        .warn_if(p.outside_drude_regime(), Warning::DrudeRegime);
    out.imag_residual = total.im.abs();
    Ok(out)
}

/// Ω, γ₀ ≪ ω_D ≪ T: −(T/Ω)Ω′ − (ω_D/24T)γ₀′ − (γ₀/24T)ω_D′.
pub fn force_drude_very_high_t(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    let omega_d = require_drude(p)?;
    require_positive_temperature(p, "the very-high-temperature form")?;
    let (omega, gamma0, t) = (p.omega0, p.gamma0(), p.temperature);
    let components = Components {
        omega: -t / omega * s.omega,
        gamma0: -omega_d / (24.0 * t) * s.gamma0,
        omega_d: -gamma0 / (24.0 * t) * s.omega_d,
    };
    let sep = Guards::DEFAULT.separation;
    let in_window = omega_d >= sep * omega.max(gamma0) && t >= sep * omega_d;
    Ok(ForceResult::closed_form(components.total(), Regime::VeryHighT)
        .with_components(components)
        .warn_if(!in_window, Warning::VeryHighTRegime))
}

/// ω_D ≫ T ≫ Ω, γ₀: −(T/Ω)Ω′ − (1/2π)γ₀′·ln(ω_D/2πT) − (γ₀/2πω_D)ω_D′.
pub fn force_drude_high_t(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    let omega_d = require_drude(p)?;
    require_positive_temperature(p, "the high-temperature form")?;
    let (omega, gamma0, t) = (p.omega0, p.gamma0(), p.temperature);
    let components = Components {
        omega: -t / omega * s.omega,
        gamma0: -s.gamma0 / (2.0 * PI) * (omega_d / (2.0 * PI * t)).ln(),
        omega_d: -gamma0 / (2.0 * PI * omega_d) * s.omega_d,
    };
    let sep = Guards::DEFAULT.separation;
    let in_window = omega_d >= sep * 2.0 * PI * t && Guards::DEFAULT.high_t_ok(p);
    Ok(ForceResult::closed_form(components.total(), Regime::HighT)
        .with_components(components)
        .warn_if(!in_window, Warning::HighTRegime)
        .warn_if(p.outside_drude_regime(), Warning::DrudeRegime))
}

/// Dominant low-temperature terms of [`force_drude_full`].
pub fn force_drude_low_t(p: &OscillatorParams, s: &Sensitivity) -> Result<ForceResult> {
    let omega_d = require_drude(p)?;
    let (omega, gamma0) = (p.omega0, p.gamma0());
    let pair = Pair::new(omega, gamma0);
    let log_dd = log_divided(&pair);
    let f_omega = -omega * s.omega / PI * log_dd;
    let bracket = (omega_d / omega).ln() / (2.0 * PI) - gamma0 / (4.0 * PI) * log_dd;
    let f_gamma0 = -bracket * s.gamma0;
    let f_omega_d = -gamma0 / (2.0 * PI * omega_d) * s.omega_d;
    let components = Components { omega: f_omega.re, gamma0: f_gamma0.re, omega_d: f_omega_d };
    let mut out = ForceResult::closed_form(components.total(), Regime::LowT)
        .with_components(components)
        .warn_if(!Guards::DEFAULT.low_t_ok(p), Warning::LowTRegime)
        .warn_if(p.outside_drude_regime(), Warning::DrudeRegime);
    out.imag_residual = (f_omega + f_gamma0).im.abs();
    Ok(out)
}

/// The coefficient multiplying −∂γ₀/∂λ in [`force_drude_low_t`].
pub fn drude_low_t_gamma0_coefficient(p: &OscillatorParams) -> Result<f64> {
    let omega_d = require_drude(p)?;
    let pair = Pair::new(p.omega0, p.gamma0());
    Ok((omega_d / p.omega0).ln() / (2.0 * PI) - p.gamma0() / (4.0 * PI) * log_divided(&pair).re)
}

/// Drude free energy from Gamma functions with first-order roots:
/// `F = −T·ln[T·Γ(1+a₁)Γ(1+a₂)Γ(1+a₃) / (Ω·Γ(1+ω_D/2πT))]`, `a_k = iω_k/2πT`.
pub fn free_energy_drude_gamma(p: &OscillatorParams) -> Result<FreeEnergy> {
    let roots = eigenfrequencies_drude_approx(p)?;
    free_energy_drude_gamma_with(p, &roots)
}

/// As [`free_energy_drude_gamma`] with caller-supplied roots.
pub fn free_energy_drude_gamma_with(p: &OscillatorParams, roots: &Eigenfrequencies) -> Result<FreeEnergy> {
    let omega_d = require_drude(p)?;
    require_positive_temperature(p, "the Drude free energy")?;
    let t = p.temperature;
    let spacing = 2.0 * PI * t;
    let mut acc = Complex64::new((t / p.omega0).ln(), 0.0);
    for s in roots.all() {
        acc += log_gamma(1.0 + s / spacing)?;
    }
    acc -= log_gamma(Complex64::new(1.0 + omega_d / spacing, 0.0))?;
    Ok(FreeEnergy { value: -t * acc.re, imag_residual: (t * acc.im).abs() })
}

/// F(Ω₂) − F(Ω₁) for a shared damping function, as a ratio of Gamma
/// functions. Ohmic damping uses the Ohmic pair; Drude damping uses the
/// exact cubic roots.
pub fn free_energy_difference_gamma(p1: &OscillatorParams, p2: &OscillatorParams) -> Result<FreeEnergy> {
    if p1.damping != p2.damping || p1.temperature != p2.temperature {
        return Err(Error::Precondition("free-energy differences require a shared damping function and T".into()));
    }
    require_positive_temperature(p1, "the free-energy difference")?;
    let roots = |p: &OscillatorParams| -> Result<Vec<Complex64>> {
        Ok(if p.damping.is_ohmic() {
            crate::oscillator::eigenfrequencies_ohmic(p).all()
        } else {
            crate::oscillator::eigenfrequencies_drude_exact(p)?.all()
        })
    };
    let t = p1.temperature;
    let spacing = 2.0 * PI * t;
    let mut acc = Complex64::new((p2.omega0 / p1.omega0).ln(), 0.0);
    for s in roots(p1)? {
        acc += log_gamma(1.0 + s / spacing)?;
    }
    for s in roots(p2)? {
        acc -= log_gamma(1.0 + s / spacing)?;
    }
    Ok(FreeEnergy { value: t * acc.re, imag_residual: (t * acc.im).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ohmic(omega: f64, gamma: f64, t: f64) -> OscillatorParams {
        OscillatorParams::ohmic(omega, gamma, t).unwrap()
    }

    fn drude(omega: f64, gamma0: f64, omega_d: f64, t: f64) -> OscillatorParams {
        OscillatorParams::drude(omega, gamma0, omega_d, t).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    const UNIT: Sensitivity = Sensitivity { omega: 1.0, gamma0: 0.0, omega_d: 0.0 };

    #[test]
    fn zero_derivative_gives_zero_force() {
        let z = Sensitivity::default();
        let p = ohmic(1.0, 0.5, 0.25);
        assert_eq!(force_ohmic_exact(&p, &z).unwrap().value, 0.0);
        assert_eq!(force_ohmic_weak_dissipation(&p, &z).unwrap().value, 0.0);
        assert_eq!(force_ohmic_high_t(&p, &z).unwrap().value, 0.0);
        assert_eq!(force_ohmic_low_t(&p, &z).unwrap().value, 0.0);
        let d = drude(1.0, 0.3, 300.0, 0.5);
        assert_eq!(force_drude_full(&d, &z).unwrap().value, 0.0);
        assert_eq!(force_drude_high_t(&d, &z).unwrap().value, 0.0);
        assert_eq!(force_drude_very_high_t(&d, &z).unwrap().value, 0.0);
        assert_eq!(force_drude_low_t(&d, &z).unwrap().value, 0.0);
    }

    #[test]
    fn undamped_exact_is_harmonic_oscillator() {
        for t in [0.05, 0.3, 2.0] {
            let f = force_ohmic_exact(&ohmic(1.0, 0.0, t), &UNIT).unwrap().value;
            let want = -0.5 / (1.0 / (2.0 * t)).tanh();
            assert!(rel(f, want) < 1e-13, "T = {t}: {f} vs {want}");
        }
    }

    #[test]
    fn zero_point_limit() {
        let f = force_ohmic_exact(&ohmic(1.0, 1e-6, 1e-4), &UNIT).unwrap().value;
        assert!(rel(f, -0.5) < 1e-3);
    }

    #[test]
    fn zero_temperature_routes_to_low_t() {
        let p = ohmic(1.0, 0.3, 0.0);
        let exact = force_ohmic_exact(&p, &UNIT).unwrap();
        assert_eq!(exact.regime, Regime::LowT);
        assert_eq!(exact.value, force_ohmic_low_t(&p, &UNIT).unwrap().value);
        let d = drude(1.0, 0.3, 100.0, 0.0);
        assert_eq!(force_drude_full(&d, &UNIT).unwrap().regime, Regime::LowT);
    }

    #[test]
    fn low_t_branch_formulas() {
        // underdamped: −ΩΩ′/(2√(Ω²−γ²/4))·(1 − (2/π)arctan((γ/2Ω)/√(1−γ²/4Ω²)))
        let (omega, gamma): (f64, f64) = (1.3, 0.9);
        let r = (omega * omega - gamma * gamma / 4.0).sqrt();
        let x = (gamma / (2.0 * omega)) / (1.0 - gamma * gamma / (4.0 * omega * omega)).sqrt();
        let want = -omega / (2.0 * r) * (1.0 - 2.0 / PI * x.atan());
        let got = force_ohmic_low_t(&ohmic(omega, gamma, 0.0), &UNIT).unwrap().value;
        assert!(rel(got, want) < 1e-14);
        // overdamped: −ΩΩ′/(π√(γ²−4Ω²))·ln[(γ+√)/(γ−√)]
        let (omega, gamma): (f64, f64) = (0.8, 5.0);
        let q = (gamma * gamma - 4.0 * omega * omega).sqrt();
        let want = -omega / (PI * q) * ((gamma + q) / (gamma - q)).ln();
        let got = force_ohmic_low_t(&ohmic(omega, gamma, 0.0), &UNIT).unwrap().value;
        assert!(rel(got, want) < 1e-14);
        // undamped
        let got = force_ohmic_low_t(&ohmic(2.0, 0.0, 0.0), &UNIT).unwrap().value;
        assert!(rel(got, -0.5) < 1e-15);
    }

    #[test]
    fn low_t_branches_meet_at_critical_damping() {
        let under = force_ohmic_low_t(&ohmic(1.0, 2.0 * (1.0 - 1e-6), 0.0), &UNIT).unwrap().value;
        let over = force_ohmic_low_t(&ohmic(1.0, 2.0 * (1.0 + 1e-6), 0.0), &UNIT).unwrap().value;
        let crit = force_ohmic_low_t(&ohmic(1.0, 2.0, 0.0), &UNIT).unwrap().value;
        assert!(rel(crit, -1.0 / PI) < 1e-15);
        assert!(rel(under, crit) < 3e-6 && rel(over, crit) < 3e-6);
    }

    #[test]
    fn strong_damping_low_t_matches_exact() {
        let low = force_ohmic_low_t(&ohmic(1.0, 10.0, 1e-5), &UNIT).unwrap();
        let exact = force_ohmic_exact(&ohmic(1.0, 10.0, 1e-5), &UNIT).unwrap();
        assert!(rel(low.value, exact.value) < 1e-3);
        assert!(low.warnings.is_empty());
    }

    #[test]
    fn high_t_value() {
        let f = force_ohmic_high_t(&ohmic(1.0, 0.0, 100.0), &UNIT).unwrap().value;
        assert!(rel(f, -(100.0 + 1.0 / 1200.0)) < 1e-15);
        let exact = force_ohmic_exact(&ohmic(1.0, 0.0, 100.0), &UNIT).unwrap().value;
        assert!(rel(f, exact) < 1e-4);
        assert!(force_ohmic_high_t(&ohmic(1.0, 0.0, 1.0), &UNIT).unwrap().warnings.contains(&Warning::HighTRegime));
        assert!(force_ohmic_high_t(&ohmic(1.0, 0.0, 0.0), &UNIT).is_err());
    }

    #[test]
    fn weak_dissipation_is_second_order_close() {
        let (omega, t) = (1.0, 0.4);
        let undamped = force_ohmic_weak_dissipation(&ohmic(omega, 0.0, t), &UNIT).unwrap().value;
        assert!(rel(undamped, -0.5 / (omega / (2.0 * t)).tanh()) < 1e-15);
        let mut errs = Vec::new();
        for gamma in [1e-3, 2e-3] {
            let w = force_ohmic_weak_dissipation(&ohmic(omega, gamma, t), &UNIT).unwrap().value;
            let e = force_ohmic_exact(&ohmic(omega, gamma, t), &UNIT).unwrap().value;
            errs.push((w - e).abs());
        }
        assert!(errs[0] < 1e-5);
        let ratio = errs[1] / errs[0];
        assert!((ratio - 4.0).abs() < 0.2, "error ratio {ratio}");
    }

    #[test]
    fn weak_dissipation_zero_temperature_limit() {
        let (omega, gamma) = (1.0, 1e-3);
        let at_zero = force_ohmic_weak_dissipation(&ohmic(omega, gamma, 0.0), &UNIT).unwrap().value;
        let near_zero = force_ohmic_weak_dissipation(&ohmic(omega, gamma, 1e-4), &UNIT).unwrap().value;
        assert!(rel(at_zero, near_zero) < 1e-6);
    }

    #[test]
    fn critical_damping_fallback_is_continuous() {
        for t in [0.01, 0.3, 5.0] {
            let f = |g: f64| force_ohmic_exact(&ohmic(1.0, g, t), &UNIT).unwrap().value;
            let crit = f(2.0);
            let inside = f(2.0 * (1.0 + 1e-9));
            let outside = f(2.0 * (1.0 + 1e-7));
            assert!(rel(inside, crit) < 1e-8, "T = {t}");
            assert!(rel(outside, crit) < 1e-6, "T = {t}");
        }
    }

    #[test]
    fn reality_of_exact_forms() {
        for (g, t) in [(0.5, 0.25), (3.0, 0.1), (0.0, 10.0)] {
            let r = force_ohmic_exact(&ohmic(1.0, g, t), &UNIT).unwrap();
            assert!(r.imag_residual <= 1e-10 * r.value.abs());
        }
    }

    #[test]
    fn tilde_reduces_to_exact_without_gamma_slope() {
        let p = ohmic(1.2, 0.7, 0.3);
        let a = force_tilde(&p, &UNIT).unwrap().value;
        let b = force_ohmic_exact(&p, &UNIT).unwrap().value;
        assert!(rel(a, b) < 1e-15);
        let s = Sensitivity { omega: 0.4, gamma0: 0.9, omega_d: 0.0 };
        let d = force_difference(&p, &s, &p, &s).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn difference_rejects_varying_damping() {
        let s = Sensitivity { omega: 1.0, gamma0: 0.5, omega_d: 0.0 };
        let s2 = Sensitivity { omega: 1.0, gamma0: 0.4, omega_d: 0.0 };
        let p1 = ohmic(1.0, 0.3, 0.2);
        let p2 = ohmic(1.5, 0.3, 0.2);
        assert!(force_difference(&p1, &s, &p2, &s2).is_err());
        assert!(force_difference(&p1, &s, &ohmic(1.5, 0.4, 0.2), &s).is_err());
    }

    #[test]
    fn ohmic_exact_rejects_gamma_slope() {
        let s = Sensitivity { omega: 1.0, gamma0: 1.0, omega_d: 0.0 };
        assert!(matches!(force_ohmic_exact(&ohmic(1.0, 0.1, 0.1), &s), Err(Error::Precondition(_))));
        assert!(force_ohmic_exact(&drude(1.0, 0.1, 50.0, 0.1), &UNIT).is_err());
    }

    #[test]
    fn drude_omega_part_equals_ohmic_exact() {
        let f = force_drude_full(&drude(1.0, 0.4, 1e6, 0.3), &UNIT).unwrap().value;
        let g = force_ohmic_exact(&ohmic(1.0, 0.4, 0.3), &UNIT).unwrap().value;
        assert!(rel(f, g) < 1e-14);
    }

    #[test]
    fn drude_components_sum_to_total() {
        let s = Sensitivity { omega: 0.7, gamma0: -0.4, omega_d: 12.0 };
        let r = force_drude_full(&drude(1.0, 0.3, 300.0, 0.5), &s).unwrap();
        let c = r.components.unwrap();
        assert!((c.total() - r.value).abs() < 1e-15);
        assert!(r.imag_residual <= 1e-10 * r.value.abs());
        assert!(r.warnings.is_empty());
        let low = force_drude_full(&drude(1.0, 0.3, 5.0, 0.5), &s).unwrap();
        assert!(low.warnings.contains(&Warning::DrudeRegime));
    }

    #[test]
    fn drude_low_t_gamma0_coefficient_positive() {
        for gamma0 in [0.0f64, 0.5, 1.9, 2.0, 4.0, 20.0] {
            for ratio in [10.0, 100.0, 1e4] {
                let omega_d = ratio * gamma0.max(1.0);
                let c = drude_low_t_gamma0_coefficient(&drude(1.0, gamma0, omega_d, 0.0)).unwrap();
                assert!(c > 0.0, "γ₀ = {gamma0}, ω_D = {omega_d}: {c}");
            }
        }
    }

    #[test]
    fn drude_low_t_omega_part_matches_ohmic_low_t() {
        let a = force_drude_low_t(&drude(1.0, 0.6, 500.0, 0.0), &UNIT).unwrap().value;
        let b = force_ohmic_low_t(&ohmic(1.0, 0.6, 0.0), &UNIT).unwrap().value;
        assert!(rel(a, b) < 1e-15);
    }

    #[test]
    fn drude_free_energy_ground_state() {
        // γ₀ → 0, T ≪ Ω: F → Ω/2
        let f = free_energy_drude_gamma(&drude(1.0, 1e-12, 1e3, 0.01)).unwrap();
        assert!(rel(f.value, 0.5) < 1e-9, "{}", f.value);
        assert!(f.imag_residual <= 1e-12 * f.value.abs());
    }

    #[test]
    fn free_energy_difference_antisymmetric_and_zero() {
        let p1 = ohmic(1.0, 0.3, 0.2);
        let p2 = ohmic(1.7, 0.3, 0.2);
        let a = free_energy_difference_gamma(&p1, &p2).unwrap().value;
        let b = free_energy_difference_gamma(&p2, &p1).unwrap().value;
        assert!((a + b).abs() < 1e-14);
        assert_eq!(free_energy_difference_gamma(&p1, &p1).unwrap().value, 0.0);
    }
}
