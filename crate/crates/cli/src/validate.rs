//! Quick invariant battery: normalization, closed-form moments, oracle
//! agreement and determinism on a handful of representative laws.

use telefid::certification::{gamma, ImportancePrior};
use telefid::distributions::{
    adc_mean, mc_sample_with, pdf_adc, pdf_levelset_axial, pdf_mp, pdf_phase_flip,
    pdf_quadratic_form, FidelityPdf, PhaseFlipStats,
};
use telefid::exec::Execution;
use telefid::protocols::{MeasurePrepare, StdTeleport};
use telefid::states::{amplitude_damping, apply_local_channels, Bell};
use telefid::{Result, Vec3};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn moments(law: &FidelityPdf, mean: f64) -> Result<(bool, String)> {
    let mass = law.total_mass()? - 1.0;
    let dm = law.mean()? - mean;
    Ok((
        mass.abs() < 1e-9 && dm.abs() < 1e-9,
        format!("mass-1 {mass:.1e}, mean err {dm:.1e}"),
    ))
}

fn damped_bell(pa: f64, pb: f64) -> Result<StdTeleport> {
    Ok(StdTeleport::new(apply_local_channels(
        &amplitude_damping(pa)?,
        &amplitude_damping(pb)?,
        Bell::Phi1,
    )))
}

type Check = fn(u64) -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("optimal classical law", |_| {
        moments(&pdf_mp(&MeasurePrepare::canonical_optimal()), 2.0 / 3.0)
    }),
    ("phase-flip law", |_| {
        moments(
            &pdf_phase_flip(0.3, 0.2)?,
            PhaseFlipStats::from_probabilities(0.3, 0.2)?.mean(),
        )
    }),
    ("elliptic law", |_| {
        let a = Vec3::new(0.9, 0.5, 0.2);
        moments(&pdf_quadratic_form(a)?, 0.5 * (1.0 + a.sum() / 3.0))
    }),
    ("amplitude-damping law", |_| {
        moments(&pdf_adc(0.3, 0.85)?, adc_mean(0.3, 0.85)?)
    }),
    ("amplitude-damping sample mean", |seed| {
        let s = mc_sample_with(&damped_bell(0.3, 0.85)?, 100_000, seed, Execution::Parallel)?;
        let z = (s.mean() - adc_mean(0.3, 0.85)?) / s.std_error();
        Ok((z.abs() < 5.0, format!("z = {z:.2}")))
    }),
    ("level-set oracle", |_| {
        let numeric = pdf_levelset_axial(damped_bell(0.5, 0.2)?)?;
        let closed = pdf_adc(0.5, 0.2)?;
        let (lo, hi) = closed.support();
        let diff = (1..40)
            .map(|i| lo + (hi - lo) * i as f64 / 40.0)
            .map(|x| (numeric.density(x) - closed.density(x)).abs() / closed.density(x).max(1.0))
            .fold(0.0, f64::max);
        Ok((diff < 1e-6, format!("max relative difference {diff:.1e}")))
    }),
    ("classical gamma vanishes", |_| {
        let g = gamma(
            &FidelityPdf::optimal_classical(),
            &ImportancePrior::beta(4.0, 1.0)?,
        )?;
        Ok((g.abs() < 1e-10, format!("gamma {g:.1e}")))
    }),
    ("parallel equals sequential", |seed| {
        let proto = damped_bell(0.6, 0.1)?;
        let a = mc_sample_with(&proto, 50_000, seed, Execution::Parallel)?;
        let b = mc_sample_with(&proto, 50_000, seed, Execution::Sequential)?;
        Ok((a == b, format!("{} draws", a.n)))
    }),
];

pub fn run(seed: u64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|(name, check)| {
            let (passed, detail) = match check(seed) {
                Ok(r) => r,
                Err(e) => (false, e.to_string()),
            };
            CheckResult {
                name,
                passed,
                detail,
            }
        })
        .collect()
}
