//! One output row per parameter point.

use std::collections::BTreeSet;

use fluctuforce::circuits::{
    self, casimir_reference, lumped_element_valid, map_parallel, map_series, CasimirRegime, Constants, Geometry,
    PlanarCapacitor, Rlc, SpherePlate,
};
use fluctuforce::forces;
use fluctuforce::matsubara::{force_sum_exact, SumSpec};
use fluctuforce::{
    Error, ForceResult, Law, OscillatorParams, ParametricModel, Regime, Sensitivity, Warning,
};
use serde::Serialize;

use crate::config::{Config, Mode, Parameters, Units};

/// Default base term count of the oracle sum.
pub const DEFAULT_N_MAX: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub lambda: f64,
    pub force: f64,
    pub f_omega: Option<f64>,
    pub f_gamma0: Option<f64>,
    #[serde(rename = "f_omegaD")]
    pub f_omega_d: Option<f64>,
    pub regime: &'static str,
    pub oracle: Option<f64>,
    pub discrepancy: Option<f64>,
    pub warnings: Vec<&'static str>,
    pub truncation: Option<f64>,
    pub casimir: Option<f64>,
    pub relative_weight: Option<f64>,
}

/// What went wrong while evaluating a point.
#[derive(Debug)]
pub enum EvalError {
    Config(String),
    Domain(Error),
}

impl From<Error> for EvalError {
    fn from(e: Error) -> Self {
        EvalError::Domain(e)
    }
}

fn need(p: &Parameters, name: &str) -> Result<f64, EvalError> {
    p.get(name).ok_or_else(|| EvalError::Config(format!("missing parameter `{name}`")))
}

fn regime(p: &Parameters) -> Result<Regime, EvalError> {
    match &p.regime {
        None => Ok(Regime::Exact),
        Some(s) => s.parse().map_err(EvalError::Config),
    }
}

fn casimir_regime(p: &Parameters) -> Result<Option<CasimirRegime>, EvalError> {
    match p.casimir_regime.as_deref() {
        None => Ok(None),
        Some(s) if s.eq_ignore_ascii_case("low-T") => Ok(Some(CasimirRegime::LowT)),
        Some(s) if s.eq_ignore_ascii_case("high-T") => Ok(Some(CasimirRegime::HighT)),
        Some(s) => Err(EvalError::Config(format!("unknown casimir_regime `{s}` (low-T | high-T)"))),
    }
}

pub fn constants(units: Units) -> Constants {
    match units {
        Units::Reduced => Constants::REDUCED,
        Units::Si => Constants::SI,
    }
}

/// The value written to the `lambda` column: the swept value when sweeping,
/// otherwise the natural position coordinate of the mode.
fn position(config: &Config, p: &Parameters) -> f64 {
    if let Some(s) = &config.sweep {
        if let Some(v) = p.get(&s.parameter) {
            return v;
        }
    }
    match config.mode {
        Mode::Planar | Mode::SpherePlate => p.gap.unwrap_or(0.0),
        _ => p.lambda.unwrap_or(0.0),
    }
}

struct Point {
    result: ForceResult,
    /// Oscillator parameters and sensitivity in reduced units for the oracle.
    reduced: (OscillatorParams, Sensitivity),
    casimir: Option<f64>,
}

fn oscillator_point(p: &Parameters, consts: &Constants) -> Result<Point, EvalError> {
    let omega = need(p, "omega")?;
    let gamma0 = p.gamma0.unwrap_or(0.0);
    let t = consts.oscillator_temperature(need(p, "temperature")?);
    let params = match p.omega_d {
        Some(omega_d) => OscillatorParams::drude(omega, gamma0, omega_d, t)?,
        None => OscillatorParams::ohmic(omega, gamma0, t)?,
    };
    let s = Sensitivity {
        omega: p.d_omega.unwrap_or(0.0),
        gamma0: p.d_gamma0.unwrap_or(0.0),
        omega_d: p.d_omega_d.unwrap_or(0.0),
    };
    let regime = regime(p)?;
    let mut r = match (params.damping.is_ohmic(), regime) {
        (true, Regime::Exact) => forces::force_ohmic_exact(&params, &s)?,
        (true, Regime::WeakDissipation) => forces::force_ohmic_weak_dissipation(&params, &s)?,
        (true, Regime::HighT) => forces::force_ohmic_high_t(&params, &s)?,
        (true, Regime::LowT) => forces::force_ohmic_low_t(&params, &s)?,
        (false, Regime::Exact) => forces::force_drude_full(&params, &s)?,
        (false, Regime::VeryHighT) => forces::force_drude_very_high_t(&params, &s)?,
        (false, Regime::HighT) => forces::force_drude_high_t(&params, &s)?,
        (false, Regime::LowT) => forces::force_drude_low_t(&params, &s)?,
        (ohmic, r) => {
            let damping = if ohmic { "Ohmic" } else { "Drude" };
            return Err(Error::Precondition(format!("no {r} form for {damping} damping")).into());
        }
    };
    r.value = consts.force_from_reduced(r.value);
    r.components = r.components.map(|c| fluctuforce::Components {
        omega: consts.force_from_reduced(c.omega),
        gamma0: consts.force_from_reduced(c.gamma0),
        omega_d: consts.force_from_reduced(c.omega_d),
    });
    Ok(Point { result: r, reduced: (params, s), casimir: None })
}

fn rlc_point(p: &Parameters, mode: Mode, consts: &Constants) -> Result<Point, EvalError> {
    let lambda = p.lambda.unwrap_or(0.0);
    let resistance = need(p, "resistance")?;
    let inductance = need(p, "inductance")?;
    let capacitance = need(p, "capacitance")?;
    let temperature = need(p, "temperature")?;
    let (rlc, params) = match mode {
        Mode::SeriesRlc => {
            let c = Law::Affine { value: capacitance, slope: p.d_capacitance.unwrap_or(0.0), at: lambda };
            let rlc = Rlc::series(Law::Constant(resistance), Law::Constant(inductance), c);
            let params = map_series(&rlc, lambda, temperature, consts)?;
            (rlc, params)
        }
        _ => {
            let l = Law::Affine { value: inductance, slope: p.d_inductance.unwrap_or(0.0), at: lambda };
            let rlc = Rlc::parallel(Law::Constant(resistance), l, Law::Constant(capacitance));
            let params = map_parallel(&rlc, lambda, temperature, consts)?;
            (rlc, params)
        }
    };
    let regime = regime(p)?;
    let result = circuits::force_rlc_regime(&rlc, lambda, temperature, regime, consts)?;
    let s = Sensitivity::omega_only(rlc.omega_slope(lambda));
    Ok(Point { result, reduced: (params, s), casimir: None })
}

fn geometry_point(p: &Parameters, mode: Mode, consts: &Constants) -> Result<Point, EvalError> {
    let gap = need(p, "gap")?;
    let resistance = p.resistance.unwrap_or(0.0);
    let inductance = need(p, "inductance")?;
    let temperature = need(p, "temperature")?;
    let regime = regime(p)?;
    let (geometry, rlc, result) = match mode {
        Mode::Planar => {
            let area = need(p, "area")?;
            let g = match p.permittivity {
                Some(eps) => PlanarCapacitor::with_permittivity(area, gap, eps)?,
                None => PlanarCapacitor::new(area, gap)?,
            };
            let result = circuits::force_planar(&g, resistance, inductance, temperature, regime, consts)?;
            (Geometry::Planar(g), circuits::planar_circuit(&g, resistance, inductance, consts), result)
        }
        _ => {
            let g = SpherePlate::new(need(p, "radius")?, gap)?;
            let result = circuits::force_sphere_plate(&g, resistance, inductance, temperature, regime, consts)?;
            (Geometry::SpherePlate(g), circuits::sphere_plate_circuit(&g, resistance, inductance, consts), result)
        }
    };
    let params = map_series(&rlc, gap, temperature, consts)?;
    let s = Sensitivity::omega_only(rlc.omega_slope(gap));
    let mut point = Point { result, reduced: (params, s), casimir: None };
    if let Some(cr) = casimir_regime(p)? {
        let reference = casimir_reference(&geometry, temperature, cr, consts);
        point.result.warnings.extend(reference.warnings);
        point.casimir = Some(reference.value);
    }
    Ok(point)
}

/// Evaluate the configuration with `parameters` in place of its own block.
pub fn evaluate(config: &Config, parameters: &Parameters) -> Result<Row, EvalError> {
    let consts = constants(config.units);
    let mode = config.mode;
    let point = match mode {
        Mode::Oscillator => oscillator_point(parameters, &consts)?,
        Mode::SeriesRlc | Mode::ParallelRlc => rlc_point(parameters, mode, &consts)?,
        Mode::Planar | Mode::SpherePlate => geometry_point(parameters, mode, &consts)?,
    };
    let Point { result, reduced: (params, s), casimir } = point;

    let mut warnings: BTreeSet<Warning> = result.warnings.clone();
    if mode != Mode::Oscillator {
        if let (Some(size), Some(cutoff)) = (parameters.element_size, parameters.cutoff) {
            if !lumped_element_valid(params.gamma0(), cutoff, size, &consts) {
                warnings.insert(Warning::LumpedElementValidity);
            }
        }
    }

    let (oracle, truncation) = if config.validation.oracle {
        let base = config.validation.n_max.unwrap_or(DEFAULT_N_MAX);
        let o = force_sum_exact(&params, &s, &SumSpec::auto(&params, base))?;
        (
            Some(consts.force_from_reduced(o.value)),
            Some(consts.force_from_reduced(o.truncation_estimate)),
        )
    } else {
        (None, None)
    };

    let components = result.components;
    Ok(Row {
        lambda: position(config, parameters),
        force: result.value,
        f_omega: components.map(|c| c.omega),
        f_gamma0: components.map(|c| c.gamma0),
        f_omega_d: components.map(|c| c.omega_d),
        regime: result.regime.label(),
        oracle,
        discrepancy: oracle.map(|o| (result.value - o).abs()),
        warnings: warnings.into_iter().map(Warning::code).collect(),
        truncation,
        casimir,
        relative_weight: casimir.map(|c| result.value / c),
    })
}

/// Parameter blocks for every point of the run, in output order.
pub fn points(config: &Config) -> Vec<Parameters> {
    match &config.sweep {
        None => vec![config.parameters.clone()],
        Some(s) => s.values().into_iter().map(|v| config.parameters.with(&s.parameter, v)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> Config {
        Config::parse(text).unwrap()
    }

    #[test]
    fn oscillator_with_oracle() {
        let c = config(
            "schema = 1\nmode = \"oscillator\"\n[parameters]\nomega = 1.0\ngamma0 = 0.3\ntemperature = 0.7\nd_omega = 1.0\n\
             [validation]\noracle = true\n",
        );
        let row = evaluate(&c, &c.parameters).unwrap();
        assert_eq!(row.regime, "exact");
        let d = row.discrepancy.unwrap();
        assert!(d <= 1e-8f64.max(2.0 * row.truncation.unwrap()), "{row:?}");
        assert_eq!(row.f_omega, Some(row.force));
    }

    #[test]
    fn drude_components_sum_to_force() {
        let c = config(
            "schema = 1\nmode = \"oscillator\"\n[parameters]\nomega = 1.0\ngamma0 = 0.2\nomega_d = 50.0\n\
             temperature = 0.3\nd_omega = 0.5\nd_gamma0 = -0.1\nd_omega_d = 2.0\n",
        );
        let row = evaluate(&c, &c.parameters).unwrap();
        let total = row.f_omega.unwrap() + row.f_gamma0.unwrap() + row.f_omega_d.unwrap();
        assert!((total - row.force).abs() <= 1e-14 * row.force.abs());
    }

    #[test]
    fn ohmic_gamma_derivative_is_a_domain_error() {
        let c = config(
            "schema = 1\nmode = \"oscillator\"\n[parameters]\nomega = 1.0\ngamma0 = 0.2\ntemperature = 0.3\nd_gamma0 = 1.0\n",
        );
        assert!(matches!(evaluate(&c, &c.parameters), Err(EvalError::Domain(_))));
    }

    #[test]
    fn lumped_element_warning() {
        let c = config(
            "schema = 1\nmode = \"series-rlc\"\n[parameters]\nresistance = 10.0\ninductance = 1.0\ncapacitance = 1.0\n\
             d_capacitance = 0.1\ntemperature = 1.0\nelement_size = 1.0\ncutoff = 5.0\n",
        );
        let row = evaluate(&c, &c.parameters).unwrap();
        assert!(row.warnings.contains(&"lumped-element-validity"));
    }

    #[test]
    fn sweep_points_in_order() {
        let c = config(
            "schema = 1\nmode = \"oscillator\"\n[parameters]\nomega = 1.0\nd_omega = 1.0\n\
             [sweep]\nparameter = \"temperature\"\nstart = 0.1\nstop = 1.0\npoints = 4\n",
        );
        let pts = points(&c);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0].temperature, Some(0.1));
        assert_eq!(pts[3].temperature, Some(1.0));
        let row = evaluate(&c, &pts[2]).unwrap();
        assert_eq!(row.lambda, pts[2].temperature.unwrap());
    }
}
