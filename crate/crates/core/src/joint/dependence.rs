//! Parametric dependence of a conditional parameter on the conditioning value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DependenceFunction {
    /// `c`
    Constant { c: f64 },
    /// `a1 + a2·x`
    Affine { a1: f64, a2: f64 },
    /// `a + b·x^c`
    Power { a: f64, b: f64, c: f64 },
    /// `a + b·exp(c·x)`
    ExpDecay { a: f64, b: f64, c: f64 },
    /// `b1 + exp(b2·x)`
    ExpOfAffine { b1: f64, b2: f64 },
    /// `a0 + Σ_j a_j cos(jx) + b_j sin(jx)`; `cos` holds `a0..a_m`, `sin` holds `b1..b_m`.
    Fourier { cos: Vec<f64>, sin: Vec<f64> },
}

impl DependenceFunction {
    pub fn validate(&self) -> Result<()> {
        let coeffs: Vec<f64> = match self {
            Self::Constant { c } => vec![*c],
            Self::Affine { a1, a2 } => vec![*a1, *a2],
            Self::Power { a, b, c } | Self::ExpDecay { a, b, c } => vec![*a, *b, *c],
            Self::ExpOfAffine { b1, b2 } => vec![*b1, *b2],
            Self::Fourier { cos, sin } => {
                if cos.is_empty() || sin.len() + 1 != cos.len() {
                    return Err(Error::Config(format!(
                        "fourier series needs m+1 cosine and m sine coefficients (got {} and {})",
                        cos.len(),
                        sin.len()
                    )));
                }
                cos.iter().chain(sin).copied().collect()
            }
        };
        match coeffs.iter().find(|c| !c.is_finite()) {
            Some(c) => Err(Error::InvalidParameter {
                name: "dependence coefficient",
                value: *c,
                reason: "must be finite",
            }),
            None => Ok(()),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Constant { c } => *c,
            Self::Affine { a1, a2 } => a1 + a2 * x,
            Self::Power { a, b, c } => a + b * x.powf(*c),
            Self::ExpDecay { a, b, c } => a + b * (c * x).exp(),
            Self::ExpOfAffine { b1, b2 } => b1 + (b2 * x).exp(),
            Self::Fourier { cos, sin } => {
                // Chebyshev-style recurrence for cos(jx), sin(jx).
                let (s1, c1) = x.sin_cos();
                let (mut cj, mut sj) = (1.0, 0.0);
                let mut acc = cos[0];
                for j in 1..cos.len() {
                    let next_c = cj * c1 - sj * s1;
                    sj = sj * c1 + cj * s1;
                    cj = next_c;
                    acc += cos[j] * cj + sin[j - 1] * sj;
                }
                acc
            }
        }
    }
}
