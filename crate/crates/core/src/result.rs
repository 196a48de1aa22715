use std::collections::BTreeSet;
use std::fmt;

/// Which expression produced a force value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Exact,
    WeakDissipation,
    HighT,
    VeryHighT,
    LowT,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::Exact => "exact",
            Regime::WeakDissipation => "weak-dissipation",
            Regime::HighT => "high-T",
            Regime::VeryHighT => "very-high-T",
            Regime::LowT => "low-T",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Regime::Exact,
            Regime::WeakDissipation,
            Regime::HighT,
            Regime::VeryHighT,
            Regime::LowT,
        ]
        .into_iter()
        .find(|r| r.label().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown regime `{s}`"))
    }
}

/// Advisory flags. None of these stop a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Warning {
    /// ω_D < 10·max(Ω, γ₀): the approximate Drude roots are outside their
    /// first-order regime.
    DrudeRegime,
    /// γ > 0.01·min(Ω, T) for the weak-dissipation expansion.
    WeakDissipationRegime,
    /// T below the high-temperature threshold of an asymptotic form.
    HighTRegime,
    /// T above the low-temperature threshold of an asymptotic form.
    LowTRegime,
    /// Very-high-T form used without Ω, γ₀ ≪ ω_D ≪ T.
    VeryHighTRegime,
    /// Planar capacitor with d²/S > 0.1.
    EdgeEffects,
    /// Sphere-plate capacitance interpolation used at d > R_sp.
    SpherePlateInterpolation,
    /// 0.1 ≤ k_B T d / ħc ≤ 10: neither Casimir limit applies cleanly.
    CasimirRegimeAmbiguous,
    /// R/L not well below min(ω_c, c/r₀) for the supplied cutoff and
    /// element size.
    LumpedElementValidity,
}

impl Warning {
    pub fn code(self) -> &'static str {
        match self {
            Warning::DrudeRegime => "drude-regime",
            Warning::WeakDissipationRegime => "weak-dissipation-regime",
            Warning::HighTRegime => "high-T-regime",
            Warning::LowTRegime => "low-T-regime",
            Warning::VeryHighTRegime => "very-high-T-regime",
            Warning::EdgeEffects => "edge-effects",
            Warning::SpherePlateInterpolation => "sphere-plate-interpolation",
            Warning::CasimirRegimeAmbiguous => "casimir-regime-ambiguous",
            Warning::LumpedElementValidity => "lumped-element-validity",
        }
    }
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

/// Force split by the parameter whose λ-dependence produces it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Components {
    pub omega: f64,
    pub gamma0: f64,
    pub omega_d: f64,
}

impl Components {
    pub fn total(&self) -> f64 {
        self.omega + self.gamma0 + self.omega_d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult {
    pub value: f64,
    pub regime: Regime,
    pub warnings: BTreeSet<Warning>,
    pub components: Option<Components>,
    /// Imaginary part left over after combining conjugate digamma terms.
    pub imag_residual: f64,
    pub provenance: Provenance,
}

impl ForceResult {
    pub(crate) fn closed_form(value: f64, regime: Regime) -> Self {
        ForceResult {
            value,
            regime,
            warnings: BTreeSet::new(),
            components: None,
            imag_residual: 0.0,
            provenance: Provenance::ClosedForm,
        }
    }

    pub(crate) fn with_components(mut self, components: Components) -> Self {
        self.components = Some(components);
        self
    }

    pub(crate) fn warn_if(mut self, condition: bool, warning: Warning) -> Self {
        if condition {
            self.warnings.insert(warning);
        }
        self
    }
}
