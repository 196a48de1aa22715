//! Validation batteries: closed forms checked against the Matsubara and
//! finite-difference oracles, asymptotic error slopes, circuit identities
//! and the published relative weights.
//!
//! Random grids come from fixed ChaCha seeds, so every report is
//! reproducible.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{self, CasimirRegime, Constants, Geometry, PlanarCapacitor, SpherePlate};
use crate::forces::{self, Guards};
use crate::matsubara::{self, SumSpec};
use crate::oscillator::{eigenfrequencies_drude_exact, Law, ProfileModel};
use crate::{ForceResult, OscillatorParams, ParametricModel, Result, Sensitivity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    OhmicOracle,
    DrudeFd,
    Asymptotics,
    Circuits,
    PaperNumbers,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::OhmicOracle, Suite::DrudeFd, Suite::Asymptotics, Suite::Circuits, Suite::PaperNumbers];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OhmicOracle => "ohmic-oracle",
            Suite::DrudeFd => "drude-fd",
            Suite::Asymptotics => "asymptotics",
            Suite::Circuits => "circuits",
            Suite::PaperNumbers => "paper-numbers",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One pass/fail line. `worst` and `tolerance` are in the check's own
/// metric; a check passes when `worst <= tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, cases: usize, worst: f64, tolerance: f64) -> Self {
        Check { name: name.into(), cases, worst, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({} cases): worst {:e}, tolerance {:e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.cases,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Matsubara terms for the force-sum oracle.
    pub n_max: u64,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { n_max: 100_000, seed: 20_240_901 }
    }
}

pub fn run(suite: Suite, options: &Options) -> Result<Report> {
    let checks = match suite {
        Suite::OhmicOracle => ohmic_oracle(options)?,
        Suite::DrudeFd => drude_fd(options)?,
        Suite::Asymptotics => asymptotics(options)?,
        Suite::Circuits => circuits_suite()?,
        Suite::PaperNumbers => quoted_relative_weights(),
    };
    Ok(Report { suite, checks })
}

/// Step for the Drude finite-difference check at λ = 1. Smaller steps lose
/// digits to the cancellation of the lnΓ sums in F.
pub const FD_STEP: f64 = 1e-3;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Ω ∈ [0.1, 10] and T ∈ [0.01, 100] log-uniform, γ ∈ [0, 20] uniform.
pub fn ohmic_grid(seed: u64, count: usize) -> Vec<OscillatorParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let omega = log_uniform(&mut rng, 0.1, 10.0);
            let gamma = rng.gen_range(0.0..20.0);
            let t = log_uniform(&mut rng, 0.01, 100.0);
            OscillatorParams::ohmic(omega, gamma, t).expect("grid parameters are valid")
        })
        .collect()
}

/// Drude parameters with ω_D/max(Ω, γ₀) ∈ [10, 10⁴] and a random
/// sensitivity with all three derivatives nonzero.
pub fn drude_grid(seed: u64, count: usize) -> Vec<(OscillatorParams, Sensitivity)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signed = |rng: &mut ChaCha8Rng| {
        let m = rng.gen_range(0.2..2.0);
        if rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    };
    (0..count)
        .map(|_| {
            let omega = log_uniform(&mut rng, 0.1, 10.0);
            let gamma0 = log_uniform(&mut rng, 0.01, 10.0);
            let omega_d = log_uniform(&mut rng, 10.0, 1e4) * omega.max(gamma0);
            let t = log_uniform(&mut rng, 0.01, 100.0);
            let s = Sensitivity {
                omega: signed(&mut rng) * omega,
                gamma0: signed(&mut rng) * gamma0,
                omega_d: signed(&mut rng) * omega_d,
            };
            (OscillatorParams::drude(omega, gamma0, omega_d, t).expect("grid parameters are valid"), s)
        })
        .collect()
}

/// Affine model through `p` at λ = 1 with slopes `s`.
pub fn affine_model(p: &OscillatorParams, s: &Sensitivity) -> ProfileModel {
    let at = |value, slope| Law::Affine { value, slope, at: 1.0 };
    match p.damping.omega_d() {
        Some(omega_d) => ProfileModel::drude(
            at(p.omega0, s.omega),
            at(p.gamma0(), s.gamma0),
            at(omega_d, s.omega_d),
        ),
        None => ProfileModel::ohmic(at(p.omega0, s.omega), at(p.gamma0(), s.gamma0)),
    }
}

/// Least-squares slope of ln y against ln x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (points - 1) as f64).exp())
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Sign violations: `f·Ω′ < 0` is required.
fn sign_violation(r: &ForceResult, derivative: f64) -> bool {
    !(r.value * derivative < 0.0)
}

fn ohmic_oracle(options: &Options) -> Result<Vec<Check>> {
    let grid = ohmic_grid(options.seed, 200);
    let spec = SumSpec::new(options.n_max);
    let guards = Guards::DEFAULT;
    let (mut oracle, mut reality, mut signs) = (0.0f64, 0.0f64, 0usize);
    for p in &grid {
        for d in [1.0, -1.0] {
            let s = Sensitivity::omega_only(d);
            let exact = forces::force_ohmic_exact(p, &s)?;
            let sum = matsubara::force_sum_exact(p, &s, &spec)?;
            let allowed = 1e-8f64.max(2.0 * sum.truncation_estimate);
            oracle = oracle.max((exact.value - sum.value).abs() / allowed);
            reality = reality.max(exact.imag_residual / exact.value.abs());
            let mut results = vec![exact, forces::force_tilde(p, &s)?];
            if guards.weak_dissipation_ok(p) {
                results.push(forces::force_ohmic_weak_dissipation(p, &s)?);
            }
            if guards.high_t_ok(p) {
                results.push(forces::force_ohmic_high_t(p, &s)?);
            }
            if guards.low_t_ok(p) {
                results.push(forces::force_ohmic_low_t(p, &s)?);
            }
            signs += results.iter().filter(|r| sign_violation(r, d)).count();
            if sum.value * d >= 0.0 {
                signs += 1;
            }
        }
    }
    Ok(vec![
        Check::new("oracle equivalence |exact − sum| / max(1e-8, 2·truncation)", grid.len(), oracle, 1.0),
        Check::new("imaginary residual / |f|", grid.len(), reality, 1e-10),
        Check::new("sign-law violations", grid.len(), signs as f64, 0.0),
    ])
}

fn drude_fd(options: &Options) -> Result<Vec<Check>> {
    let grid = drude_grid(options.seed ^ 0xD, 50);
    let mut fd_worst = 0.0f64;
    for (p, s) in &grid {
        let m = affine_model(p, s);
        let fd = matsubara::drude_finite_difference_force(&m, 1.0, p.temperature, Some(FD_STEP))?;
        let closed = forces::force_drude_full(p, s)?;
        fd_worst = fd_worst.max(rel(closed.value, fd.value));
    }

    let mut signs = 0usize;
    for (p, s) in &grid {
        for single in [
            Sensitivity { omega: s.omega, ..Default::default() },
            Sensitivity { gamma0: s.gamma0, ..Default::default() },
            Sensitivity { omega_d: s.omega_d, ..Default::default() },
        ] {
            let d = single.omega + single.gamma0 + single.omega_d;
            let r = forces::force_drude_full(p, &single)?;
            signs += sign_violation(&r, d) as usize;
            let sum = matsubara::force_sum_exact(p, &single, &SumSpec::auto(p, 10_000))?;
            signs += (sum.value * d >= 0.0) as usize;
        }
    }

    let product_grid = drude_grid(options.seed ^ 0x3, 20);
    let mut product_worst = 0.0f64;
    for (p, _) in &product_grid {
        let gamma = forces::free_energy_drude_gamma(p)?;
        let product = matsubara::free_energy_drude(p, &SumSpec::new(1_000_000))?;
        product_worst = product_worst.max(rel(product.value, gamma.value));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0x9);
    let (mut vieta, mut polish) = (0.0f64, 0.0f64);
    let roots_cases = 10_000;
    for _ in 0..roots_cases {
        let omega = log_uniform(&mut rng, 0.01, 100.0);
        let gamma0 = rng.gen_range(0.0..50.0);
        let omega_d = log_uniform(&mut rng, 0.1, 1e5);
        let p = OscillatorParams::drude(omega, gamma0, omega_d, 1.0)?;
        let e = eigenfrequencies_drude_exact(&p)?;
        let v = e.vieta_residuals(&p).expect("Drude roots");
        let d = e.dispersion_residuals(&p).expect("Drude roots");
        vieta = v.into_iter().chain([vieta]).fold(0.0, f64::max);
        polish = d.into_iter().chain([polish]).fold(0.0, f64::max);
    }

    Ok(vec![
        Check::new("force vs −dF/dλ (Richardson) relative", grid.len(), fd_worst, 1e-5),
        Check::new("single-parameter sign-law violations", grid.len(), signs as f64, 0.0),
        Check::new("Gamma free energy vs Matsubara product relative", product_grid.len(), product_worst, 1e-8),
        Check::new("Vieta residuals", roots_cases, vieta, 1e-12),
        Check::new("cubic root polish residuals", roots_cases, polish, 1e-10),
    ])
}

fn asymptotics(options: &Options) -> Result<Vec<Check>> {
    let unit = Sensitivity::omega_only(1.0);
    let mut checks = Vec::new();

    // high T: error ∝ T⁻²
    let ts = log_space(10.0, 1e4, 13);
    let errs = ts
        .iter()
        .map(|&t| {
            let p = OscillatorParams::ohmic(1.0, 0.5, t)?;
            Ok((forces::force_ohmic_high_t(&p, &unit)?.value - forces::force_ohmic_exact(&p, &unit)?.value).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    checks.push(Check::new("high-T error slope in T/Ω", ts.len(), loglog_slope(&ts, &errs), -1.8));

    // low T: error vanishes as T/scale → 0; slope measured in scale/T
    for gamma in [0.5, 10.0] {
        let pair = crate::oscillator::eigenfrequencies_ohmic(&OscillatorParams::ohmic(1.0, gamma, 1.0)?);
        let scale = pair.i_omega[0].norm().min(pair.i_omega[1].norm());
        let xs = log_space(1e-4, 1e-1, 13);
        let errs = xs
            .iter()
            .map(|&x| {
                let p = OscillatorParams::ohmic(1.0, gamma, x * scale)?;
                Ok((forces::force_ohmic_low_t(&p, &unit)?.value - forces::force_ohmic_exact(&p, &unit)?.value).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        let inverse: Vec<f64> = xs.iter().map(|x| 1.0 / x).collect();
        checks.push(Check::new(
            format!("low-T error slope in scale/T (γ = {gamma}Ω)"),
            xs.len(),
            loglog_slope(&inverse, &errs),
            -0.9,
        ));
    }

    // weak dissipation: error ∝ γ²
    let gammas = log_space(1e-4, 1e-2, 9);
    let errs = gammas
        .iter()
        .map(|&g| {
            let p = OscillatorParams::ohmic(1.0, g, 1.0)?;
            Ok((forces::force_ohmic_weak_dissipation(&p, &unit)?.value - forces::force_ohmic_exact(&p, &unit)?.value)
                .abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let slope = loglog_slope(&gammas, &errs);
    checks.push(Check::new("weak-dissipation error slope in γ, |slope − 2|", gammas.len(), (slope - 2.0).abs(), 0.15));

    // zero-point limit
    let mut zero_point = 0.0f64;
    for omega in [0.1, 1.0, 10.0] {
        let p = OscillatorParams::ohmic(omega, 1e-6 * omega, 1e-4 * omega)?;
        zero_point = zero_point.max(rel(forces::force_ohmic_exact(&p, &unit)?.value, -0.5));
    }
    checks.push(Check::new("zero-point limit relative", 3, zero_point, 1e-3));

    // critical damping: curvature across γ = 2Ω(1 ± 10⁻⁶)
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed ^ 0xC);
    let mut jump = 0.0f64;
    for _ in 0..20 {
        let omega = log_uniform(&mut rng, 0.1, 10.0);
        let t = log_uniform(&mut rng, 0.01, 100.0);
        let f = |g: f64| -> Result<f64> { Ok(forces::force_ohmic_exact(&OscillatorParams::ohmic(omega, g, t)?, &unit)?.value) };
        let (lo, mid, hi) = (f(2.0 * omega * (1.0 - 1e-6))?, f(2.0 * omega)?, f(2.0 * omega * (1.0 + 1e-6))?);
        jump = jump.max((hi + lo - 2.0 * mid).abs() / mid.abs());
    }
    checks.push(Check::new("critical-damping jump (second difference) relative", 20, jump, 1e-6));
    Ok(checks)
}

fn circuits_suite() -> Result<Vec<Check>> {
    let consts = Constants::REDUCED;
    let mut checks = Vec::new();

    // composition exactness
    let mut composition = 0.0f64;
    for (r, l) in [(0.1, 1.0), (3.0, 0.5), (0.0, 2.0)] {
        let g = PlanarCapacitor::new(1.0, 0.2)?;
        let c = circuits::planar_circuit(&g, r, l, &consts);
        let via = circuits::force_series_rlc(&c, g.gap, 0.3, &consts)?.value;
        let p = circuits::map_series(&c, g.gap, 0.3, &consts)?;
        let direct = forces::force_ohmic_exact(&p, &Sensitivity::omega_only(c.omega_slope(g.gap)))?.value;
        composition = composition.max(rel(via, direct));
        let pc = circuits::Rlc::parallel(Law::Constant(r + 1.0), Law::PowerLaw { value: l, exponent: 1.0, at: 1.0 }, Law::Constant(0.7));
        let via = circuits::force_parallel_rlc(&pc, 1.3, 0.3, &consts)?.value;
        let p = circuits::map_parallel(&pc, 1.3, 0.3, &consts)?;
        let direct = forces::force_ohmic_exact(&p, &Sensitivity::omega_only(pc.omega_slope(1.3)))?.value;
        composition = composition.max(rel(via, direct));
    }
    checks.push(Check::new("force_*_rlc ≡ force_ohmic_exact ∘ map", 6, composition, 1e-14));

    // planar closed forms at T far below their thresholds
    let g = PlanarCapacitor::new(1.0, 0.1)?;
    let weak = {
        let (r, l) = (1e-3, 1.0);
        let c = circuits::planar_circuit(&g, r, l, &consts);
        let t = 1e-4 * c.omega(g.gap) / (2.0 * std::f64::consts::PI);
        let exact = circuits::force_series_rlc(&c, g.gap, t, &consts)?.value;
        rel(circuits::planar_force_weak_low_t(&g, r, l, &consts), exact)
    };
    let strong = {
        let (r, l) = (300.0, 1.0);
        let c = circuits::planar_circuit(&g, r, l, &consts);
        // T ≪ d/(2πε₀SR)
        let t = 1e-4 * g.gap / (2.0 * std::f64::consts::PI * g.area * r);
        let exact = circuits::force_series_rlc(&c, g.gap, t, &consts)?.value;
        rel(circuits::planar_force_strong_low_t(&g, r, l, &consts), exact)
    };
    checks.push(Check::new("planar weak-dissipation low-T closed form", 1, weak, 1e-2));
    checks.push(Check::new("planar strong-dissipation low-T closed form", 1, strong, 1e-2));

    // relative weights: closed form vs quotient of forces
    let mut algebra = 0.0f64;
    let mut cases = 0;
    for ratio in log_space(0.01, 0.1, 5) {
        for geometry in [
            Geometry::Planar(PlanarCapacitor::new(1.0, ratio)?),
            Geometry::SpherePlate(SpherePlate::new(1.0, 5.0 * ratio)?),
        ] {
            let omega = circuits::lc_frequency(&geometry, 1.0, &consts);
            for (regime, t) in [(CasimirRegime::HighT, 100.0 * omega), (CasimirRegime::LowT, 1e-3 * omega)] {
                let closed = circuits::relative_weight(&geometry, 1.0, regime, &consts);
                let quotient = circuits::relative_weight_from_forces(&geometry, 1.0, t, regime, &consts)?;
                algebra = algebra.max(rel(quotient, closed));
                cases += 1;
            }
        }
    }
    checks.push(Check::new("relative weight closed form vs force quotient", cases, algebra, 1e-3));

    // SI round trip through the circuit layer
    let si = Constants::SI;
    let g = PlanarCapacitor::new(1e-4, 1e-6)?;
    let c_si = circuits::planar_circuit(&g, 1.0, 1e-9, &si);
    let f_si = circuits::force_series_rlc(&c_si, g.gap, 300.0, &si)?.value;
    let p = circuits::map_series(&c_si, g.gap, 300.0, &si)?;
    let f_reduced = forces::force_ohmic_exact(&p, &Sensitivity::omega_only(c_si.omega_slope(g.gap)))?.value;
    let round_trip = rel(si.force_from_reduced(si.force_to_reduced(f_si)), si.force_from_reduced(f_reduced));
    checks.push(Check::new("SI ↔ reduced round trip", 1, round_trip, 1e-12));
    Ok(checks)
}

/// r_T for both geometries at the gaps quoted in the literature. The
/// returned checks measure |r − target| against the quoted precision.
fn quoted_relative_weights() -> Vec<Check> {
    let consts = Constants::REDUCED;
    let planar = |d2_over_s: f64| Geometry::Planar(PlanarCapacitor { area: 1.0, gap: d2_over_s.sqrt(), permittivity: 1.0 });
    let sphere = |d_over_r: f64| Geometry::SpherePlate(SpherePlate { radius: 1.0, gap: d_over_r });
    [
        ("planar r_T at d²/S = 0.04 (0.42)", planar(0.04), 0.42, 0.02),
        ("planar r_T at d²/S = 2.5e-3 (0.03)", planar(2.5e-3), 0.03, 0.01),
        ("sphere-plate r_T at d/R = 0.75 (0.50)", sphere(0.75), 0.50, 0.02),
        ("sphere-plate r_T at d/R = 0.035 (0.02)", sphere(0.035), 0.02, 0.005),
    ]
    .into_iter()
    .map(|(name, g, target, tol)| {
        let r = circuits::relative_weight(&g, 1.0, CasimirRegime::HighT, &consts);
        Check::new(name, 1, (r - target).abs(), tol)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let xs = log_space(1.0, 100.0, 7);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-2.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 2.5).abs() < 1e-12);
    }

    #[test]
    fn grids_are_reproducible() {
        assert_eq!(ohmic_grid(7, 5), ohmic_grid(7, 5));
        assert_ne!(ohmic_grid(7, 5), ohmic_grid(8, 5));
    }

    #[test]
    fn quoted_relative_weights_pass() {
        let report = run(Suite::PaperNumbers, &Options::default()).unwrap();
        assert!(report.passed(), "{report}");
    }
}
