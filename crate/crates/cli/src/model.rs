//! Turns parameters into a fidelity law, a protocol to sample, and priors.

use telefid::certification::ImportancePrior;
use telefid::distributions::{
    pdf_adc, pdf_bell_diagonal, pdf_mp, pdf_phase_flip, pdf_unbiased_resource, FidelityPdf,
};
use telefid::protocols::{MeasurePrepare, ProtocolEnsemble, StdTeleport};
use telefid::states::{self, apply_local_channels, Bell, TwoQubitFano};

use crate::config::{Noise, Params, Protocol};
use crate::error::CliError;

pub struct Model {
    pub law: FidelityPdf,
    pub ensemble: Box<dyn ProtocolEnsemble>,
}

fn noise_pair(p: &Params, noise: Noise) -> Result<(f64, f64), CliError> {
    match (&p.c, noise) {
        (Some(c), Noise::PhaseFlip) => {
            if p.pa.is_some() || p.pb.is_some() {
                return Err(CliError::Invalid(
                    "give either --c or --pa/--pb, not both".into(),
                ));
            }
            match c.as_slice() {
                // c = 1 − (1 − pA)(1 − pB) with pB = 0.
                [c] => Ok((*c, 0.0)),
                _ => Err(CliError::Invalid("--c takes a single value here".into())),
            }
        }
        (Some(_), _) => Err(CliError::Invalid(
            "--c applies to phase-flip noise only".into(),
        )),
        (None, _) => Ok((p.pa.unwrap_or(0.0), p.pb.unwrap_or(0.0))),
    }
}

fn damped(
    pa: f64,
    pb: f64,
    channel: fn(f64) -> telefid::Result<states::AffineChannel>,
) -> Result<TwoQubitFano, CliError> {
    Ok(apply_local_channels(
        &channel(pa)?,
        &channel(pb)?,
        Bell::Phi1,
    ))
}

pub fn build(p: &Params) -> Result<Model, CliError> {
    match p.protocol.unwrap_or(Protocol::Sqt) {
        Protocol::MpOptimal => {
            if p.noise.is_some_and(|n| n != Noise::Ideal) {
                return Err(CliError::Invalid(
                    "--noise applies to --protocol sqt only".into(),
                ));
            }
            let povm = MeasurePrepare::canonical_optimal();
            Ok(Model {
                law: pdf_mp(&povm),
                ensemble: Box::new(povm),
            })
        }
        Protocol::Sqt => {
            let noise = p.noise.unwrap_or(Noise::Ideal);
            let (law, resource) = match noise {
                Noise::Ideal => {
                    let r = TwoQubitFano::bell(Bell::Phi1);
                    (pdf_unbiased_resource(&r)?, r)
                }
                Noise::PhaseFlip => {
                    let (pa, pb) = noise_pair(p, noise)?;
                    (pdf_phase_flip(pa, pb)?, damped(pa, pb, states::phase_flip)?)
                }
                Noise::Depolarizing => {
                    let (pa, pb) = noise_pair(p, noise)?;
                    let r = damped(pa, pb, states::depolarizing)?;
                    (pdf_unbiased_resource(&r)?, r)
                }
                Noise::Adc => {
                    let (pa, pb) = noise_pair(p, noise)?;
                    (pdf_adc(pa, pb)?, damped(pa, pb, states::amplitude_damping)?)
                }
                Noise::BellDiagonal => {
                    let (Some(w1), Some(w2), Some(w3)) = (p.w1, p.w2, p.w3) else {
                        return Err(CliError::Invalid(
                            "bell-diagonal noise needs --w1, --w2 and --w3".into(),
                        ));
                    };
                    (
                        pdf_bell_diagonal(w1, w2, w3)?,
                        states::bell_diagonal(w1, w2, w3),
                    )
                }
            };
            Ok(Model {
                law,
                ensemble: Box::new(StdTeleport::new(resource)),
            })
        }
    }
}

/// Beta(α, β) for every `--alpha`, then a step prior for every `--threshold`;
/// `default_alpha` when neither is given.
pub fn priors(p: &Params, default_alpha: &[f64]) -> Result<Vec<ImportancePrior>, CliError> {
    let beta = p.beta.unwrap_or(1.0);
    let alphas = match (&p.alpha, &p.threshold) {
        (Some(a), _) => a.clone(),
        (None, Some(_)) => Vec::new(),
        (None, None) => default_alpha.to_vec(),
    };
    let mut out = Vec::new();
    for a in alphas {
        out.push(ImportancePrior::beta(a, beta)?);
    }
    for t in p.threshold.iter().flatten() {
        out.push(ImportancePrior::step(*t)?);
    }
    Ok(out)
}
