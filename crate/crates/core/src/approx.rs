//! Closed-form approximations to the combined model, and the dispatch over all model variants.
//!
//! Both approximations keep the substructure formula and the Dirichlet means as
//! frequencies, and only transform theta using the pseudo-count total `s`:
//!
//! * theta-tilde: `theta + (1 - theta) / (s + 1)`, exact for one person.
//! * Green-Mortera: additive on `1 / phi`, i.e. `theta + (1 - theta)^2 / (s + 1 - theta)`.

use std::fmt;
use std::str::FromStr;

use crate::engine::{self, check_theta, Probability};
use crate::error::{Error, Result};
use crate::genotype::JointGenotype;
use crate::ingest::DirichletSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ApproxVariant {
    Hw,
    Uaf,
    Fst,
    ThetaTilde,
    GreenMortera,
    CombinedExact,
}

impl ApproxVariant {
    pub const ALL: [ApproxVariant; 6] = [
        ApproxVariant::Hw,
        ApproxVariant::Uaf,
        ApproxVariant::Fst,
        ApproxVariant::ThetaTilde,
        ApproxVariant::GreenMortera,
        ApproxVariant::CombinedExact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ApproxVariant::Hw => "hw",
            ApproxVariant::Uaf => "uaf",
            ApproxVariant::Fst => "fst",
            ApproxVariant::ThetaTilde => "theta-tilde",
            ApproxVariant::GreenMortera => "gm",
            ApproxVariant::CombinedExact => "exact",
        }
    }
}

impl fmt::Display for ApproxVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ApproxVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ApproxVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown variant '{s}', expected one of hw, uaf, fst, theta-tilde, gm, exact"
                ))
            })
    }
}

/// `theta + (1 - theta) / (s + 1)`; `s` may be infinite.
pub fn theta_tilde(theta: f64, s: f64) -> f64 {
    if s.is_infinite() {
        theta
    } else {
        theta + (1.0 - theta) / (s + 1.0)
    }
}

/// `theta + (1 - theta)^2 / (s + 1 - theta)`; needs finite `s`.
pub fn theta_gm(theta: f64, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::validation(
            "Green-Mortera theta needs a finite database size; with exactly known frequencies use theta itself",
        ));
    }
    Ok(theta + (1.0 - theta).powi(2) / (s + 1.0 - theta))
}

pub fn prob_model(
    g: &JointGenotype,
    spec: &DirichletSpec,
    theta: f64,
    variant: ApproxVariant,
) -> Result<Probability> {
    check_theta(theta)?;
    let means = spec.means();
    match variant {
        ApproxVariant::Hw => engine::prob_hw(g, means),
        ApproxVariant::Uaf => engine::prob_uaf(g, spec),
        ApproxVariant::Fst => engine::prob_theta(g, means, theta),
        ApproxVariant::ThetaTilde => engine::prob_theta(g, means, theta_tilde(theta, spec.total())),
        ApproxVariant::GreenMortera => engine::prob_theta(g, means, theta_gm(theta, spec.total())?),
        ApproxVariant::CombinedExact => engine::prob_combined_exact(g, spec, theta),
    }
}
