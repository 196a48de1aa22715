//! Oscillator parameters, their dependence on the sweep parameter λ, and
//! the complex eigenfrequencies for Ohmic and Drude damping.
//!
//! Eigenfrequencies are stored as `iω` rather than `ω`. With that
//! substitution the Drude dispersion relation
//! `ω³ + iω_Dω² − (Ω² + γ₀ω_D)ω − iΩ²ω_D = 0` becomes the real cubic
//! `s³ − ω_D s² + (Ω² + γ₀ω_D) s − Ω²ω_D = 0` in `s = iω`, whose roots are
//! real or come in conjugate pairs, all with positive real part. The
//! Matsubara products factor as `Π (ω_n + s_k)`, so the digamma and Gamma
//! arguments are `1 + s_k / 2πT` directly.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result, Warning};

/// Ratio ω_D / max(Ω, γ₀) below which the first-order Drude roots are
/// flagged.
pub const DRUDE_REGIME_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DampingModel {
    /// Frequency-independent damping γ(ω) = γ₀.
    Ohmic { gamma0: f64 },
    /// γ(ω) = γ₀ω_D / (ω_D − iω).
    Drude { gamma0: f64, omega_d: f64 },
}

impl DampingModel {
    pub fn gamma0(&self) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma0 } | DampingModel::Drude { gamma0, .. } => gamma0,
        }
    }

    pub fn omega_d(&self) -> Option<f64> {
        match *self {
            DampingModel::Ohmic { .. } => None,
            DampingModel::Drude { omega_d, .. } => Some(omega_d),
        }
    }

    pub fn is_ohmic(&self) -> bool {
        matches!(self, DampingModel::Ohmic { .. })
    }

    /// γ(iω_n), real and non-negative for ω_n ≥ 0.
    pub fn at_matsubara(&self, omega_n: f64) -> f64 {
        match *self {
            DampingModel::Ohmic { gamma0 } => gamma0,
            DampingModel::Drude { gamma0, omega_d } => gamma0 * omega_d / (omega_d + omega_n),
        }
    }

    fn validate(&self) -> Result<()> {
        let gamma0 = self.gamma0();
        if !(gamma0 >= 0.0 && gamma0.is_finite()) {
            return Err(Error::Precondition(format!("gamma0 must be finite and >= 0, got {gamma0}")));
        }
        if let Some(omega_d) = self.omega_d() {
            if !(omega_d > 0.0 && omega_d.is_finite()) {
                return Err(Error::Precondition(format!("omega_d must be finite and > 0, got {omega_d}")));
            }
        }
        Ok(())
    }
}

/// Oscillator state at one value of λ, in reduced units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega0: f64,
    pub damping: DampingModel,
    pub temperature: f64,
    /// Oscillator mass. Cancels from every force expression; kept so that
    /// circuit mappings can record L or C.
    pub mass: Option<f64>,
}

impl OscillatorParams {
    pub fn new(omega0: f64, damping: DampingModel, temperature: f64) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::Precondition(format!("omega0 must be finite and > 0, got {omega0}")));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::Precondition(format!(
                "temperature must be finite and >= 0, got {temperature}"
            )));
        }
        damping.validate()?;
        Ok(OscillatorParams { omega0, damping, temperature, mass: None })
    }

    pub fn ohmic(omega0: f64, gamma0: f64, temperature: f64) -> Result<Self> {
        Self::new(omega0, DampingModel::Ohmic { gamma0 }, temperature)
    }

    pub fn drude(omega0: f64, gamma0: f64, omega_d: f64, temperature: f64) -> Result<Self> {
        Self::new(omega0, DampingModel::Drude { gamma0, omega_d }, temperature)
    }

    pub fn with_mass(mut self, mass: f64) -> Self {
        self.mass = Some(mass);
        self
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn gamma0(&self) -> f64 {
        self.damping.gamma0()
    }

    /// Matsubara spacing 2πT.
    pub fn matsubara_spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.temperature
    }

    /// True when the Drude cutoff is too low for the first-order roots.
    pub fn outside_drude_regime(&self) -> bool {
        match self.damping.omega_d() {
            Some(omega_d) => omega_d < DRUDE_REGIME_RATIO * self.omega0.max(self.gamma0()),
            None => false,
        }
    }
}

/// γ(iω_n) for the oscillator's damping model.
pub fn damping_at_matsubara(p: &OscillatorParams, omega_n: f64) -> Result<f64> {
    if !(omega_n >= 0.0) {
        return Err(Error::Precondition(format!("Matsubara frequency must be >= 0, got {omega_n}")));
    }
    Ok(p.damping.at_matsubara(omega_n))
}

/// Derivatives ∂Ω/∂λ, ∂γ₀/∂λ, ∂ω_D/∂λ at one λ.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sensitivity {
    pub omega: f64,
    pub gamma0: f64,
    pub omega_d: f64,
}

impl Sensitivity {
    pub fn omega_only(d_omega: f64) -> Self {
        Sensitivity { omega: d_omega, ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.omega == 0.0 && self.gamma0 == 0.0 && self.omega_d == 0.0
    }
}

/// A scalar function of λ together with its analytic derivative.
pub trait Profile: fmt::Debug + Send + Sync {
    fn value(&self, lambda: f64) -> f64;
    fn slope(&self, lambda: f64) -> f64;
    /// True when the profile does not depend on λ at all.
    fn is_constant(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    Constant(f64),
    /// `value + slope·(λ − at)`
    Affine { value: f64, slope: f64, at: f64 },
    /// `value·(λ/at)^exponent`
    PowerLaw { value: f64, exponent: f64, at: f64 },
}

impl Profile for Law {
    fn value(&self, lambda: f64) -> f64 {
        match *self {
            Law::Constant(v) => v,
            Law::Affine { value, slope, at } => value + slope * (lambda - at),
            Law::PowerLaw { value, exponent, at } => value * (lambda / at).powf(exponent),
        }
    }

    fn slope(&self, lambda: f64) -> f64 {
        match *self {
            Law::Constant(_) => 0.0,
            Law::Affine { slope, .. } => slope,
            Law::PowerLaw { exponent, .. } => exponent * self.value(lambda) / lambda,
        }
    }

    fn is_constant(&self) -> bool {
        match *self {
            Law::Constant(_) => true,
            Law::Affine { slope, .. } => slope == 0.0,
            Law::PowerLaw { exponent, value, .. } => exponent == 0.0 || value == 0.0,
        }
    }
}

/// Ω(λ), γ₀(λ), ω_D(λ) with their analytic λ-derivatives.
pub trait ParametricModel: Send + Sync {
    fn omega(&self, lambda: f64) -> f64;
    fn omega_slope(&self, lambda: f64) -> f64;
    fn gamma0(&self, lambda: f64) -> f64;
    fn gamma0_slope(&self, lambda: f64) -> f64;
    /// `None` selects Ohmic damping.
    fn omega_d(&self, lambda: f64) -> Option<f64>;
    fn omega_d_slope(&self, _lambda: f64) -> f64 {
        0.0
    }

    fn damping_at(&self, lambda: f64) -> DampingModel {
        let gamma0 = self.gamma0(lambda);
        match self.omega_d(lambda) {
            Some(omega_d) => DampingModel::Drude { gamma0, omega_d },
            None => DampingModel::Ohmic { gamma0 },
        }
    }

    fn sensitivity(&self, lambda: f64) -> Sensitivity {
        Sensitivity {
            omega: self.omega_slope(lambda),
            gamma0: self.gamma0_slope(lambda),
            omega_d: if self.omega_d(lambda).is_some() { self.omega_d_slope(lambda) } else { 0.0 },
        }
    }

    fn params_at(&self, lambda: f64, temperature: f64) -> Result<OscillatorParams> {
        OscillatorParams::new(self.omega(lambda), self.damping_at(lambda), temperature)
    }
}

/// Parametric model assembled from one [`Profile`] per parameter.
#[derive(Debug, Clone)]
pub struct ProfileModel {
    pub omega: Arc<dyn Profile>,
    pub gamma0: Arc<dyn Profile>,
    pub omega_d: Option<Arc<dyn Profile>>,
}

impl ProfileModel {
    pub fn ohmic(omega: impl Profile + 'static, gamma0: impl Profile + 'static) -> Self {
        ProfileModel { omega: Arc::new(omega), gamma0: Arc::new(gamma0), omega_d: None }
    }

    pub fn drude(
        omega: impl Profile + 'static,
        gamma0: impl Profile + 'static,
        omega_d: impl Profile + 'static,
    ) -> Self {
        ProfileModel {
            omega: Arc::new(omega),
            gamma0: Arc::new(gamma0),
            omega_d: Some(Arc::new(omega_d)),
        }
    }
}

impl ParametricModel for ProfileModel {
    fn omega(&self, lambda: f64) -> f64 {
        self.omega.value(lambda)
    }
    fn omega_slope(&self, lambda: f64) -> f64 {
        self.omega.slope(lambda)
    }
    fn gamma0(&self, lambda: f64) -> f64 {
        self.gamma0.value(lambda)
    }
    fn gamma0_slope(&self, lambda: f64) -> f64 {
        self.gamma0.slope(lambda)
    }
    fn omega_d(&self, lambda: f64) -> Option<f64> {
        self.omega_d.as_ref().map(|p| p.value(lambda))
    }
    fn omega_d_slope(&self, lambda: f64) -> f64 {
        self.omega_d.as_ref().map_or(0.0, |p| p.slope(lambda))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Ohmic,
    ExactCubic,
    Approx,
}

/// Complex eigenfrequencies, stored as `iω_k`.
///
/// `i_omega[0]` and `i_omega[1]` are the oscillator pair: complex
/// conjugates with `im(iω₁) > 0` when underdamped, real with
/// `iω₁ ≤ iω₂` when overdamped. `i_omega[2]` is the real Drude mode, the
/// largest whenever ω_D exceeds the oscillator scales.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenfrequencies {
    pub i_omega: [Complex64; 2],
    pub i_omega3: Option<f64>,
    pub method: RootMethod,
    pub warnings: BTreeSet<Warning>,
}

impl Eigenfrequencies {
    /// ω_k for k = 1, 2, 3.
    pub fn omega(&self, k: usize) -> Option<Complex64> {
        self.i_omega_k(k).map(|s| Complex64::new(s.im, -s.re))
    }

    /// iω_k for k = 1, 2, 3.
    pub fn i_omega_k(&self, k: usize) -> Option<Complex64> {
        match k {
            1 => Some(self.i_omega[0]),
            2 => Some(self.i_omega[1]),
            3 => self.i_omega3.map(|s| Complex64::new(s, 0.0)),
            _ => None,
        }
    }

    /// All roots as iω_k.
    pub fn all(&self) -> Vec<Complex64> {
        (1..=3).filter_map(|k| self.i_omega_k(k)).collect()
    }

    /// Residuals of the three Vieta relations of the Drude dispersion
    /// equation, each divided by its natural scale (the sum of the moduli
    /// of the terms on its left-hand side):
    /// `Σω + iω_D`, `Σω_jω_k + (Ω² + γ₀ω_D)`, `ω₁ω₂ω₃ − iΩ²ω_D`.
    pub fn vieta_residuals(&self, p: &OscillatorParams) -> Option<[f64; 3]> {
        let omega_d = p.damping.omega_d()?;
        let w1 = self.omega(1)?;
        let w2 = self.omega(2)?;
        let w3 = self.omega(3)?;
        let i = Complex64::i();
        let e1 = w1 + w2 + w3 + i * omega_d;
        let e1_scale = w1.norm() + w2.norm() + w3.norm();
        let e2 = w1 * w2 + w1 * w3 + w2 * w3 + (p.omega0 * p.omega0 + p.gamma0() * omega_d);
        let e2_scale = (w1 * w2).norm() + (w1 * w3).norm() + (w2 * w3).norm();
        let e3 = w1 * w2 * w3 - i * p.omega0 * p.omega0 * omega_d;
        let e3_scale = w1.norm() * w2.norm() * w3.norm();
        Some([e1.norm() / e1_scale, e2.norm() / e2_scale, e3.norm() / e3_scale])
    }

    /// |P(ω_k)| of the Drude dispersion polynomial at each root, divided by
    /// the sum of the moduli of its four terms.
    pub fn dispersion_residuals(&self, p: &OscillatorParams) -> Option<[f64; 3]> {
        let omega_d = p.damping.omega_d()?;
        let i = Complex64::i();
        let e2 = p.omega0 * p.omega0 + p.gamma0() * omega_d;
        let e3 = p.omega0 * p.omega0 * omega_d;
        let relative = |w: Complex64| {
            let terms = [w * w * w, i * omega_d * w * w, -e2 * w, -i * e3];
            let value: Complex64 = terms.iter().sum();
            value.norm() / terms.iter().map(|t| t.norm()).sum::<f64>()
        };
        Some([relative(self.omega(1)?), relative(self.omega(2)?), relative(self.omega(3)?)])
    }
}

/// `√(Ω² − γ²/4)` on the principal branch, real for underdamped and
/// positive-imaginary for overdamped oscillators.
pub(crate) fn oscillator_root(omega0: f64, gamma: f64) -> Complex64 {
    let half = 0.5 * gamma;
    let disc = (omega0 - half) * (omega0 + half);
    Complex64::new(disc, 0.0).sqrt()
}

fn ohmic_pair(omega0: f64, gamma: f64) -> [Complex64; 2] {
    let r = oscillator_root(omega0, gamma);
    let i = Complex64::i();
    let half = Complex64::new(0.5 * gamma, 0.0);
    [half + i * r, half - i * r]
}

/// iω₁,₂ = γ/2 ± i√(Ω² − γ²/4), using the Ohmic γ₀ (or the static Drude
/// value) as γ.
pub fn eigenfrequencies_ohmic(p: &OscillatorParams) -> Eigenfrequencies {
    Eigenfrequencies {
        i_omega: ohmic_pair(p.omega0, p.gamma0()),
        i_omega3: None,
        method: RootMethod::Ohmic,
        warnings: BTreeSet::new(),
    }
}

/// First-order Drude roots: the Ohmic pair with γ₀ and iω₃ = ω_D − γ₀.
pub fn eigenfrequencies_drude_approx(p: &OscillatorParams) -> Result<Eigenfrequencies> {
    let omega_d = require_drude(p)?;
    let mut warnings = BTreeSet::new();
    if p.outside_drude_regime() {
        warnings.insert(Warning::DrudeRegime);
    }
    Ok(Eigenfrequencies {
        i_omega: ohmic_pair(p.omega0, p.gamma0()),
        i_omega3: Some(omega_d - p.gamma0()),
        method: RootMethod::Approx,
        warnings,
    })
}

/// The three roots of the Drude dispersion cubic, solved in `s = iω`.
pub fn eigenfrequencies_drude_exact(p: &OscillatorParams) -> Result<Eigenfrequencies> {
    let omega_d = require_drude(p)?;
    let omega2 = p.omega0 * p.omega0;
    let coeffs = [-omega_d, omega2 + p.gamma0() * omega_d, -omega2 * omega_d];
    let (pair, real) = match cubic::solve(coeffs) {
        cubic::Roots::ThreeReal(mut r) => {
            r.sort_by(f64::total_cmp);
            ([Complex64::new(r[0], 0.0), Complex64::new(r[1], 0.0)], r[2])
        }
        cubic::Roots::OneReal { real, pair } => {
            let upper = if pair.im >= 0.0 { pair } else { pair.conj() };
            ([upper, upper.conj()], real)
        }
    };
    Ok(Eigenfrequencies {
        i_omega: pair,
        i_omega3: Some(real),
        method: RootMethod::ExactCubic,
        warnings: BTreeSet::new(),
    })
}

fn require_drude(p: &OscillatorParams) -> Result<f64> {
    p.damping
        .omega_d()
        .ok_or_else(|| Error::Precondition("Drude damping required".into()))
}

/// Real-coefficient monic cubic solver.
pub(crate) mod cubic {
    use num_complex::Complex64;
    use std::f64::consts::PI;

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub enum Roots {
        ThreeReal([f64; 3]),
        OneReal { real: f64, pair: Complex64 },
    }

    fn eval(c: [f64; 3], x: f64) -> (f64, f64) {
        let value = ((x + c[0]) * x + c[1]) * x + c[2];
        let deriv = (3.0 * x + 2.0 * c[0]) * x + c[1];
        (value, deriv)
    }

    fn eval_complex(c: [f64; 3], z: Complex64) -> (Complex64, Complex64) {
        let value = ((z + c[0]) * z + c[1]) * z + c[2];
        let deriv = (3.0 * z + 2.0 * c[0]) * z + c[1];
        (value, deriv)
    }

    fn polish(c: [f64; 3], x: f64) -> f64 {
        let (v, d) = eval(c, x);
        if d == 0.0 || v == 0.0 {
            return x;
        }
        let next = x - v / d;
        if eval(c, next).0.abs() < v.abs() {
            next
        } else {
            x
        }
    }

    fn polish_complex(c: [f64; 3], z: Complex64) -> Complex64 {
        let (v, d) = eval_complex(c, z);
        if d.norm() == 0.0 || v.norm() == 0.0 {
            return z;
        }
        let next = z - v / d;
        if eval_complex(c, next).0.norm() < v.norm() {
            next
        } else {
            z
        }
    }

    /// Real roots of `x² − sum·x + product` known to be real, without
    /// cancellation in the smaller one.
    fn deflate_real(sum: f64, product: f64) -> [f64; 2] {
        let disc = (sum * sum - 4.0 * product).max(0.0);
        let q = 0.5 * (sum + sum.signum() * disc.sqrt());
        if q == 0.0 {
            [0.0, 0.0]
        } else {
            [q, product / q]
        }
    }

    /// Roots of `x³ + c[0]x² + c[1]x + c[2]`.
    ///
    /// Depressed cubic, trigonometric branch for three real roots and
    /// Cardano otherwise, then one guarded Newton step per root. The
    /// conjugate pair is recovered from the real root through Vieta so the
    /// small roots do not inherit the cancellation of the shift.
    pub fn solve(c: [f64; 3]) -> Roots {
        let [a, b, cc] = c;
        let shift = a / 3.0;
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + cc;
        let disc = q * q / 4.0 + p * p * p / 27.0;

        if disc < 0.0 {
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            let roots = [0.0, 1.0, 2.0].map(|k| m * (phi - 2.0 * PI * k / 3.0).cos() - shift);
            let big = polish(c, roots.into_iter().max_by(|x, y| x.abs().total_cmp(&y.abs())).unwrap_or(0.0));
            if big == 0.0 {
                return Roots::ThreeReal(roots.map(|x| polish(c, x)));
            }
            let [x1, x2] = deflate_real(-a - big, -cc / big);
            return Roots::ThreeReal([big, polish(c, x1), polish(c, x2)]);
        }

        let sq = disc.sqrt();
        let u = (-q / 2.0 - q.signum() * sq).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        let real = polish(c, t - shift);
        let sum = -a - real;
        let product = if real != 0.0 { -cc / real } else { b };
        let half = 0.5 * sum;
        let rad = Complex64::new(product - half * half, 0.0).sqrt();
        let z = polish_complex(c, Complex64::new(half, 0.0) + Complex64::i() * rad);
        if z.im.abs() <= f64::EPSILON * z.re.abs() {
            let mut r = [real, z.re, sum - z.re];
            r = r.map(|x| polish(c, x));
            return Roots::ThreeReal(r);
        }
        Roots::OneReal { real, pair: z }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn ohmic_undamped() {
        let p = OscillatorParams::ohmic(1.0, 0.0, 0.1).unwrap();
        let e = eigenfrequencies_ohmic(&p);
        assert!(close(e.i_omega[0], Complex64::i(), 1e-15));
        assert!(close(e.i_omega[1], -Complex64::i(), 1e-15));
        assert_eq!(e.method, RootMethod::Ohmic);
    }

    #[test]
    fn ohmic_critical_double_root() {
        let p = OscillatorParams::ohmic(1.0, 2.0, 0.1).unwrap();
        let e = eigenfrequencies_ohmic(&p);
        assert!(close(e.i_omega[0], Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(e.i_omega[1], Complex64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn ohmic_overdamped_roots_solve_quadratic() {
        let p = OscillatorParams::ohmic(1.0, 4.0, 0.1).unwrap();
        let e = eigenfrequencies_ohmic(&p);
        let s3 = 3f64.sqrt();
        assert!(close(e.i_omega[0], Complex64::new(2.0 - s3, 0.0), 1e-15));
        assert!(close(e.i_omega[1], Complex64::new(2.0 + s3, 0.0), 1e-15));
        // ω² + iγω − Ω² = 0 with ω = −i·(iω)
        for k in 1..=2 {
            let w = e.omega(k).unwrap();
            let res = w * w + Complex64::i() * 4.0 * w - 1.0;
            assert!(res.norm() < 1e-14);
        }
    }

    #[test]
    fn ohmic_continuous_across_critical_damping() {
        let at = |g: f64| eigenfrequencies_ohmic(&OscillatorParams::ohmic(1.0, g, 0.1).unwrap());
        let mid = at(2.0).omega(1).unwrap();
        for g in [2.0 * (1.0 - 1e-8), 2.0 * (1.0 + 1e-8)] {
            assert!((at(g).omega(1).unwrap() - mid).norm() <= 1e-3);
        }
    }

    #[test]
    fn drude_approx_values_and_sum_rule() {
        let p = OscillatorParams::drude(1.0, 0.5, 200.0, 0.1).unwrap();
        let e = eigenfrequencies_drude_approx(&p).unwrap();
        assert_eq!(e.i_omega3, Some(199.5));
        let sum: Complex64 = (1..=3).map(|k| e.omega(k).unwrap()).sum();
        assert!(close(sum, Complex64::new(0.0, -200.0), 1e-13));
        assert!(e.warnings.is_empty());
        let low = OscillatorParams::drude(1.0, 0.5, 5.0, 0.1).unwrap();
        assert!(eigenfrequencies_drude_approx(&low).unwrap().warnings.contains(&Warning::DrudeRegime));
    }

    #[test]
    fn drude_exact_decoupled_limit() {
        let p = OscillatorParams::drude(1.3, 0.0, 50.0, 0.1).unwrap();
        let e = eigenfrequencies_drude_exact(&p).unwrap();
        assert!(close(e.omega(1).unwrap(), Complex64::new(1.3, 0.0), 1e-13));
        assert!(close(e.omega(2).unwrap(), Complex64::new(-1.3, 0.0), 1e-13));
        assert!(close(e.omega(3).unwrap(), Complex64::new(0.0, -50.0), 1e-12));
    }

    #[test]
    fn drude_exact_close_to_approx() {
        let p = OscillatorParams::drude(1.0, 0.2, 100.0, 0.1).unwrap();
        let exact = eigenfrequencies_drude_exact(&p).unwrap();
        let approx = eigenfrequencies_drude_approx(&p).unwrap();
        let vieta = exact.vieta_residuals(&p).unwrap();
        assert!(vieta.iter().all(|r| *r < 1e-12), "{vieta:?}");
        for k in 1..=2 {
            let d = (exact.omega(k).unwrap() - approx.omega(k).unwrap()).norm();
            // first-order roots are off at O(Ω²/ω_D)
            assert!(d < 5.0 * 1e-2, "{d}");
        }
    }

    #[test]
    fn drude_exact_overdamped_orders_real_roots() {
        let p = OscillatorParams::drude(1.0, 8.0, 500.0, 0.1).unwrap();
        let e = eigenfrequencies_drude_exact(&p).unwrap();
        let s = e.all();
        assert!(s.iter().all(|z| z.im == 0.0));
        assert!(s[0].re <= s[1].re && s[1].re <= s[2].re);
    }

    #[test]
    fn exact_roots_require_drude() {
        let p = OscillatorParams::ohmic(1.0, 0.2, 0.1).unwrap();
        assert!(eigenfrequencies_drude_exact(&p).is_err());
        assert!(eigenfrequencies_drude_approx(&p).is_err());
    }

    #[test]
    fn damping_at_matsubara_values() {
        let d = OscillatorParams::drude(1.0, 0.4, 30.0, 0.1).unwrap();
        assert_eq!(damping_at_matsubara(&d, 0.0).unwrap(), 0.4);
        assert!((damping_at_matsubara(&d, 30.0).unwrap() - 0.2).abs() < 1e-16);
        let o = OscillatorParams::ohmic(1.0, 0.4, 0.1).unwrap();
        assert_eq!(damping_at_matsubara(&o, 123.0).unwrap(), 0.4);
        assert!(damping_at_matsubara(&o, -1.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(OscillatorParams::ohmic(0.0, 0.1, 1.0).is_err());
        assert!(OscillatorParams::ohmic(1.0, -0.1, 1.0).is_err());
        assert!(OscillatorParams::ohmic(1.0, 0.1, -1.0).is_err());
        assert!(OscillatorParams::drude(1.0, 0.1, 0.0, 1.0).is_err());
    }

    #[test]
    fn profile_slopes_match_finite_differences() {
        let laws = [
            Law::Affine { value: 2.0, slope: -0.7, at: 1.0 },
            Law::PowerLaw { value: 3.0, exponent: -1.5, at: 2.0 },
            Law::PowerLaw { value: 0.4, exponent: 0.5, at: 0.3 },
        ];
        for law in laws {
            for lambda in [0.5, 1.0, 3.0] {
                let h = 1e-6 * lambda;
                let fd = (law.value(lambda + h) - law.value(lambda - h)) / (2.0 * h);
                let an = law.slope(lambda);
                assert!((fd - an).abs() <= 1e-6 * an.abs(), "{law:?} at {lambda}");
            }
        }
        assert!(Law::Constant(1.0).is_constant());
    }

    #[test]
    fn profile_model_builds_params() {
        let m = ProfileModel::drude(
            Law::PowerLaw { value: 1.0, exponent: -0.5, at: 1.0 },
            Law::Constant(0.1),
            Law::Affine { value: 100.0, slope: 5.0, at: 1.0 },
        );
        let p = m.params_at(4.0, 0.3).unwrap();
        assert!((p.omega0 - 0.5).abs() < 1e-15);
        assert_eq!(p.damping, DampingModel::Drude { gamma0: 0.1, omega_d: 115.0 });
        let s = m.sensitivity(4.0);
        assert!((s.omega + 0.0625).abs() < 1e-15);
        assert_eq!(s.gamma0, 0.0);
        assert_eq!(s.omega_d, 5.0);
    }
}
