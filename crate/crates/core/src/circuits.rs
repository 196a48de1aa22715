//! Lumped-element circuits as damped oscillators.
//!
//! A series RLC loop maps to Ω = 1/√(LC), γ = R/L; a parallel one to
//! Ω = 1/√(LC), γ = 1/(RC). Either way the damping is Ohmic. A capacitor
//! or inductor whose value depends on a geometric parameter λ makes Ω
//! depend on λ and the circuit's zero-point and thermal fluctuations push
//! on the electrodes.
//!
//! All functions take a [`Constants`] table. With [`Constants::SI`] inputs
//! are in ohms, henries, farads, metres and kelvin and forces come out in
//! newtons; with [`Constants::REDUCED`] every constant is 1. Internally the
//! oscillator sees Ω in rad/s and the temperature as the frequency k_B·T/ħ,
//! and reduced forces are multiplied by ħ.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::forces;
use crate::specfun::ZETA3;
use crate::{
    Components, DampingModel, Error, ForceResult, OscillatorParams, ParametricModel, Profile, Regime, Result,
    Sensitivity, Warning,
};

/// Physical constants used to convert between reduced and SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub hbar: f64,
    pub k_b: f64,
    pub c: f64,
    pub epsilon0: f64,
}

impl Constants {
    /// CODATA 2018.
    pub const SI: Constants = Constants {
        hbar: 1.054_571_817e-34,
        k_b: 1.380_649e-23,
        c: 299_792_458.0,
        epsilon0: 8.854_187_812_8e-12,
    };

    pub const REDUCED: Constants = Constants { hbar: 1.0, k_b: 1.0, c: 1.0, epsilon0: 1.0 };

    /// k_B·T/ħ, the temperature as seen by the oscillator formulas.
    pub fn oscillator_temperature(&self, temperature: f64) -> f64 {
        self.k_b * temperature / self.hbar
    }

    pub fn temperature_from_oscillator(&self, t: f64) -> f64 {
        self.hbar * t / self.k_b
    }

    /// Reduced force (energy in units of ħ per unit λ) to this system.
    pub fn force_from_reduced(&self, f: f64) -> f64 {
        self.hbar * f
    }

    pub fn force_to_reduced(&self, f: f64) -> f64 {
        f / self.hbar
    }
}

/// ε₀εS/d with λ = d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarCapacitance {
    pub area: f64,
    pub permittivity: f64,
    pub epsilon0: f64,
}

impl Profile for PlanarCapacitance {
    fn value(&self, d: f64) -> f64 {
        self.epsilon0 * self.permittivity * self.area / d
    }
    fn slope(&self, d: f64) -> f64 {
        -self.value(d) / d
    }
}

/// 4πε₀R[1 + ½ln(1 + R/d)] with λ = d.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePlateCapacitance {
    pub radius: f64,
    pub epsilon0: f64,
}

impl Profile for SpherePlateCapacitance {
    fn value(&self, d: f64) -> f64 {
        4.0 * PI * self.epsilon0 * self.radius * sphere_plate_bracket(self.radius, d)
    }
    fn slope(&self, d: f64) -> f64 {
        let r = self.radius;
        -2.0 * PI * self.epsilon0 * r * r / (d * (d + r))
    }
}

fn sphere_plate_bracket(radius: f64, d: f64) -> f64 {
    1.0 + 0.5 * (radius / d).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarCapacitor {
    pub area: f64,
    pub gap: f64,
    /// Relative permittivity of the gap.
    pub permittivity: f64,
}

impl PlanarCapacitor {
    pub fn new(area: f64, gap: f64) -> Result<Self> {
        Self::with_permittivity(area, gap, 1.0)
    }

    pub fn with_permittivity(area: f64, gap: f64, permittivity: f64) -> Result<Self> {
        positive("area", area)?;
        positive("gap", gap)?;
        positive("permittivity", permittivity)?;
        Ok(PlanarCapacitor { area, gap, permittivity })
    }

    pub fn capacitance_profile(&self, consts: &Constants) -> PlanarCapacitance {
        PlanarCapacitance { area: self.area, permittivity: self.permittivity, epsilon0: consts.epsilon0 }
    }

    pub fn edge_effects(&self) -> bool {
        self.gap * self.gap / self.area > 0.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePlate {
    pub radius: f64,
    pub gap: f64,
}

impl SpherePlate {
    pub fn new(radius: f64, gap: f64) -> Result<Self> {
        positive("radius", radius)?;
        positive("gap", gap)?;
        Ok(SpherePlate { radius, gap })
    }

    pub fn capacitance_profile(&self, consts: &Constants) -> SpherePlateCapacitance {
        SpherePlateCapacitance { radius: self.radius, epsilon0: consts.epsilon0 }
    }

    /// The capacitance interpolation is only trusted for d ≲ R.
    pub fn beyond_interpolation(&self) -> bool {
        self.gap > self.radius
    }

    /// 1 + ½ln(1 + R/d).
    pub fn bracket(&self) -> f64 {
        sphere_plate_bracket(self.radius, self.gap)
    }
}

/// Capacitance and ∂C/∂d.
pub fn capacitance_planar(g: &PlanarCapacitor, consts: &Constants) -> (f64, f64) {
    let p = g.capacitance_profile(consts);
    (p.value(g.gap), p.slope(g.gap))
}

/// Capacitance and ∂C/∂d.
pub fn capacitance_sphere_plate(g: &SpherePlate, consts: &Constants) -> (f64, f64) {
    let p = g.capacitance_profile(consts);
    (p.value(g.gap), p.slope(g.gap))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{name} must be finite and > 0, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Series,
    Parallel,
}

/// An RLC circuit whose elements are functions of λ.
#[derive(Debug, Clone)]
pub struct Rlc {
    pub topology: Topology,
    pub resistance: Arc<dyn Profile>,
    pub inductance: Arc<dyn Profile>,
    pub capacitance: Arc<dyn Profile>,
}

impl Rlc {
    pub fn series(
        resistance: impl Profile + 'static,
        inductance: impl Profile + 'static,
        capacitance: impl Profile + 'static,
    ) -> Self {
        Rlc {
            topology: Topology::Series,
            resistance: Arc::new(resistance),
            inductance: Arc::new(inductance),
            capacitance: Arc::new(capacitance),
        }
    }

    pub fn parallel(
        resistance: impl Profile + 'static,
        inductance: impl Profile + 'static,
        capacitance: impl Profile + 'static,
    ) -> Self {
        Rlc { topology: Topology::Parallel, ..Self::series(resistance, inductance, capacitance) }
    }

    fn validate(&self, lambda: f64) -> Result<()> {
        let r = self.resistance.value(lambda);
        match self.topology {
            Topology::Series if !(r >= 0.0 && r.is_finite()) => {
                return Err(Error::Precondition(format!("resistance must be finite and >= 0, got {r}")))
            }
            Topology::Parallel if !(r > 0.0) => {
                return Err(Error::Precondition(format!("resistance must be > 0, got {r}")))
            }
            _ => {}
        }
        positive("inductance", self.inductance.value(lambda))?;
        positive("capacitance", self.capacitance.value(lambda))
    }

    /// The element the closed-form force allows to vary: C for series,
    /// L for parallel.
    fn check_single_dependence(&self) -> Result<()> {
        let ok = match self.topology {
            Topology::Series => self.resistance.is_constant() && self.inductance.is_constant(),
            Topology::Parallel => self.resistance.is_constant() && self.capacitance.is_constant(),
        };
        if ok {
            Ok(())
        } else {
            let msg = match self.topology {
                Topology::Series => "series RLC force requires R and L independent of λ; use force_difference",
                Topology::Parallel => "parallel RLC force requires R and C independent of λ; use force_difference",
            };
            Err(Error::Precondition(msg.into()))
        }
    }
}

impl ParametricModel for Rlc {
    fn omega(&self, lambda: f64) -> f64 {
        1.0 / (self.inductance.value(lambda) * self.capacitance.value(lambda)).sqrt()
    }

    fn omega_slope(&self, lambda: f64) -> f64 {
        let (l, c) = (self.inductance.value(lambda), self.capacitance.value(lambda));
        let log_slope = self.inductance.slope(lambda) / l + self.capacitance.slope(lambda) / c;
        -0.5 * self.omega(lambda) * log_slope
    }

    fn gamma0(&self, lambda: f64) -> f64 {
        let r = self.resistance.value(lambda);
        match self.topology {
            Topology::Series => r / self.inductance.value(lambda),
            Topology::Parallel => 1.0 / (r * self.capacitance.value(lambda)),
        }
    }

    fn gamma0_slope(&self, lambda: f64) -> f64 {
        let r = self.resistance.value(lambda);
        let dr = self.resistance.slope(lambda);
        let gamma = self.gamma0(lambda);
        match self.topology {
            Topology::Series => {
                let l = self.inductance.value(lambda);
                dr / l - gamma * self.inductance.slope(lambda) / l
            }
            Topology::Parallel => {
                let c = self.capacitance.value(lambda);
                -gamma * (dr / r + self.capacitance.slope(lambda) / c)
            }
        }
    }

    fn omega_d(&self, _lambda: f64) -> Option<f64> {
        None
    }
}

/// Oscillator parameters of a series circuit at λ. `temperature` is in the
/// units of `consts`.
pub fn map_series(c: &Rlc, lambda: f64, temperature: f64, consts: &Constants) -> Result<OscillatorParams> {
    if c.topology != Topology::Series {
        return Err(Error::Precondition("series circuit expected".into()));
    }
    map(c, lambda, temperature, consts)
}

pub fn map_parallel(c: &Rlc, lambda: f64, temperature: f64, consts: &Constants) -> Result<OscillatorParams> {
    if c.topology != Topology::Parallel {
        return Err(Error::Precondition("parallel circuit expected".into()));
    }
    map(c, lambda, temperature, consts)
}

fn map(c: &Rlc, lambda: f64, temperature: f64, consts: &Constants) -> Result<OscillatorParams> {
    c.validate(lambda)?;
    let t = consts.oscillator_temperature(temperature);
    let mass = match c.topology {
        Topology::Series => c.inductance.value(lambda),
        Topology::Parallel => c.capacitance.value(lambda),
    };
    Ok(OscillatorParams::new(c.omega(lambda), DampingModel::Ohmic { gamma0: c.gamma0(lambda) }, t)?.with_mass(mass))
}

fn in_units(mut r: ForceResult, consts: &Constants) -> ForceResult {
    r.value = consts.force_from_reduced(r.value);
    r.imag_residual = consts.force_from_reduced(r.imag_residual);
    r.components = r.components.map(|c| Components {
        omega: consts.force_from_reduced(c.omega),
        gamma0: consts.force_from_reduced(c.gamma0),
        omega_d: consts.force_from_reduced(c.omega_d),
    });
    r
}

/// Circuit force using the closed form selected by `regime`.
pub fn force_rlc_regime(
    c: &Rlc,
    lambda: f64,
    temperature: f64,
    regime: Regime,
    consts: &Constants,
) -> Result<ForceResult> {
    c.check_single_dependence()?;
    let p = map(c, lambda, temperature, consts)?;
    let s = Sensitivity::omega_only(c.omega_slope(lambda));
    let r = match regime {
        Regime::Exact => forces::force_ohmic_exact(&p, &s)?,
        Regime::WeakDissipation => forces::force_ohmic_weak_dissipation(&p, &s)?,
        Regime::HighT => forces::force_ohmic_high_t(&p, &s)?,
        Regime::LowT => forces::force_ohmic_low_t(&p, &s)?,
        Regime::VeryHighT => {
            return Err(Error::Precondition("the very-high-T form needs Drude damping".into()))
        }
    };
    Ok(in_units(r, consts))
}

/// Exact force of a series RLC circuit whose capacitance depends on λ.
pub fn force_series_rlc(c: &Rlc, lambda: f64, temperature: f64, consts: &Constants) -> Result<ForceResult> {
    if c.topology != Topology::Series {
        return Err(Error::Precondition("series circuit expected".into()));
    }
    force_rlc_regime(c, lambda, temperature, Regime::Exact, consts)
}

/// Exact force of a parallel RLC circuit whose inductance depends on λ.
pub fn force_parallel_rlc(c: &Rlc, lambda: f64, temperature: f64, consts: &Constants) -> Result<ForceResult> {
    if c.topology != Topology::Parallel {
        return Err(Error::Precondition("parallel circuit expected".into()));
    }
    force_rlc_regime(c, lambda, temperature, Regime::Exact, consts)
}

/// Series circuit closed by a planar capacitor, λ = d.
pub fn planar_circuit(g: &PlanarCapacitor, resistance: f64, inductance: f64, consts: &Constants) -> Rlc {
    use crate::Law::Constant;
    Rlc::series(Constant(resistance), Constant(inductance), g.capacitance_profile(consts))
}

/// Series circuit closed by a sphere-plate capacitor, λ = d.
pub fn sphere_plate_circuit(g: &SpherePlate, resistance: f64, inductance: f64, consts: &Constants) -> Rlc {
    use crate::Law::Constant;
    Rlc::series(Constant(resistance), Constant(inductance), g.capacitance_profile(consts))
}

pub fn force_planar(
    g: &PlanarCapacitor,
    resistance: f64,
    inductance: f64,
    temperature: f64,
    regime: Regime,
    consts: &Constants,
) -> Result<ForceResult> {
    let c = planar_circuit(g, resistance, inductance, consts);
    Ok(force_rlc_regime(&c, g.gap, temperature, regime, consts)?.warn_if(g.edge_effects(), Warning::EdgeEffects))
}

pub fn force_sphere_plate(
    g: &SpherePlate,
    resistance: f64,
    inductance: f64,
    temperature: f64,
    regime: Regime,
    consts: &Constants,
) -> Result<ForceResult> {
    let c = sphere_plate_circuit(g, resistance, inductance, consts);
    Ok(force_rlc_regime(&c, g.gap, temperature, regime, consts)?
        .warn_if(g.beyond_interpolation(), Warning::SpherePlateInterpolation))
}

/// Planar capacitor, weak dissipation, T → 0:
/// `−ħ/(4√(ε₀εLSd)) + ħR/(4πLd)`.
pub fn planar_force_weak_low_t(g: &PlanarCapacitor, resistance: f64, inductance: f64, consts: &Constants) -> f64 {
    let eps = consts.epsilon0 * g.permittivity;
    let d = g.gap;
    consts.hbar * (-1.0 / (4.0 * (eps * inductance * g.area * d).sqrt()) + resistance / (4.0 * PI * inductance * d))
}

/// Planar capacitor, strong dissipation, T → 0:
/// `−ħ/(2πε₀εSR)·ln(ε₀εSR²/(Ld))`.
pub fn planar_force_strong_low_t(g: &PlanarCapacitor, resistance: f64, inductance: f64, consts: &Constants) -> f64 {
    let eps = consts.epsilon0 * g.permittivity;
    let x = eps * g.area * resistance * resistance / (inductance * g.gap);
    -consts.hbar / (2.0 * PI * eps * g.area * resistance) * x.ln()
}

/// Which Casimir limit a reference force or relative weight refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirRegime {
    /// k_B T d ≪ ħc: zero-point fluctuations.
    LowT,
    /// k_B T d ≫ ħc: the classical n = 0 term.
    HighT,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    Planar(PlanarCapacitor),
    SpherePlate(SpherePlate),
}

impl Geometry {
    pub fn gap(&self) -> f64 {
        match self {
            Geometry::Planar(g) => g.gap,
            Geometry::SpherePlate(g) => g.gap,
        }
    }

    fn capacitance(&self, consts: &Constants) -> (f64, f64) {
        match self {
            Geometry::Planar(g) => capacitance_planar(g, consts),
            Geometry::SpherePlate(g) => capacitance_sphere_plate(g, consts),
        }
    }
}

/// A value with advisory warnings attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub warnings: Vec<Warning>,
}

/// True unless 0.1 ≤ k_B T d/ħc ≤ 10.
pub fn casimir_regime_clear(gap: f64, temperature: f64, consts: &Constants) -> bool {
    let x = consts.k_b * temperature * gap / (consts.hbar * consts.c);
    !(0.1..=10.0).contains(&x)
}

/// Ideal-metal Casimir force between the electrodes. Plate-plate:
/// `−π²ħcS/240d⁴` or `−ζ(3)k_BTS/8πd³`; sphere-plate in the proximity force
/// approximation: `−π³ħcR/360d³` or `−ζ(3)k_BTR/8d²`. The high-T plate
/// force is half the plasma-model value.
pub fn casimir_reference(geometry: &Geometry, temperature: f64, regime: CasimirRegime, consts: &Constants) -> Flagged {
    let (hbar_c, kt) = (consts.hbar * consts.c, consts.k_b * temperature);
    let value = match (geometry, regime) {
        (Geometry::Planar(g), CasimirRegime::LowT) => -PI * PI * hbar_c * g.area / (240.0 * g.gap.powi(4)),
        (Geometry::Planar(g), CasimirRegime::HighT) => -ZETA3 * kt * g.area / (8.0 * PI * g.gap.powi(3)),
        (Geometry::SpherePlate(g), CasimirRegime::LowT) => -PI.powi(3) * hbar_c * g.radius / (360.0 * g.gap.powi(3)),
        (Geometry::SpherePlate(g), CasimirRegime::HighT) => -ZETA3 * kt * g.radius / (8.0 * g.gap * g.gap),
    };
    let mut warnings = Vec::new();
    if !casimir_regime_clear(geometry.gap(), temperature, consts) {
        warnings.push(Warning::CasimirRegimeAmbiguous);
    }
    Flagged { value, warnings }
}

/// LC frequency 1/√(LC) for the geometry's capacitance.
pub fn lc_frequency(geometry: &Geometry, inductance: f64, consts: &Constants) -> f64 {
    1.0 / (inductance * geometry.capacitance(consts).0).sqrt()
}

/// Dissipationless circuit force divided by the Casimir reference, in
/// closed form:
///
/// - planar, T → 0: `(60/π²)(Ωd/c)(d²/S)`
/// - planar, high T: `4πd²/(ζ(3)S)`
/// - sphere-plate, T → 0: `(45/π³)(Ωd/c)/[(R/d + 1)B]`
/// - sphere-plate, high T: `(2/ζ(3))/[(R/d + 1)B]`
///
/// with `B = 1 + ½ln(1 + R/d)`. The circuit and the Casimir reference are
/// taken in the same temperature limit.
pub fn relative_weight(geometry: &Geometry, inductance: f64, regime: CasimirRegime, consts: &Constants) -> f64 {
    let omega = lc_frequency(geometry, inductance, consts);
    match (geometry, regime) {
        (Geometry::Planar(g), CasimirRegime::LowT) => {
            60.0 / (PI * PI) * (omega * g.gap / consts.c) * (g.gap * g.gap / g.area)
        }
        (Geometry::Planar(g), CasimirRegime::HighT) => 4.0 * PI * g.gap * g.gap / (ZETA3 * g.area),
        (Geometry::SpherePlate(g), CasimirRegime::LowT) => {
            45.0 / PI.powi(3) * (omega * g.gap / consts.c) / ((g.radius / g.gap + 1.0) * g.bracket())
        }
        (Geometry::SpherePlate(g), CasimirRegime::HighT) => 2.0 / ZETA3 / ((g.radius / g.gap + 1.0) * g.bracket()),
    }
}

/// The same ratio as [`relative_weight`], computed by dividing the exact
/// γ = 0 circuit force at `temperature` by [`casimir_reference`].
pub fn relative_weight_from_forces(
    geometry: &Geometry,
    inductance: f64,
    temperature: f64,
    regime: CasimirRegime,
    consts: &Constants,
) -> Result<f64> {
    let circuit = match geometry {
        Geometry::Planar(g) => force_planar(g, 0.0, inductance, temperature, Regime::Exact, consts)?,
        Geometry::SpherePlate(g) => force_sphere_plate(g, 0.0, inductance, temperature, Regime::Exact, consts)?,
    };
    Ok(circuit.value / casimir_reference(geometry, temperature, regime, consts).value)
}

/// Dissipationless sphere-plate circuit force. T → 0:
/// `−ħΩ/(8d(1 + d/R)B)`; high T: `−k_BT/(4d(1 + d/R)B)`.
pub fn sphere_plate_circuit_force(
    g: &SpherePlate,
    inductance: f64,
    temperature: f64,
    regime: CasimirRegime,
    consts: &Constants,
) -> Flagged {
    let denom = 4.0 * g.gap * (1.0 + g.gap / g.radius) * g.bracket();
    let value = match regime {
        CasimirRegime::LowT => {
            let omega = lc_frequency(&Geometry::SpherePlate(*g), inductance, consts);
            -consts.hbar * omega / (2.0 * denom)
        }
        CasimirRegime::HighT => -consts.k_b * temperature / denom,
    };
    let warnings = if g.beyond_interpolation() { vec![Warning::SpherePlateInterpolation] } else { Vec::new() };
    Flagged { value, warnings }
}

/// Lumped-element validity R/L ≪ min(ω_c, c/r₀) for an element of size
/// r₀, with ≪ read as a factor of 10.
pub fn lumped_element_valid(gamma: f64, cutoff: f64, element_size: f64, consts: &Constants) -> bool {
    gamma <= 0.1 * cutoff.min(consts.c / element_size)
}
