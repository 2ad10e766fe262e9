use serde::{Deserialize, Serialize};

use crate::error::{JumpsiftError, Result};

/// Model selection. The three named variants carry the published
/// parameterisations; `Custom` composes drift, volatility and jump parts
/// freely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    /// Constant volatility plus compound Poisson jumps with centred Gaussian
    /// sizes.
    Model1 {
        sigma: f64,
        jump_intensity: f64,
        jump_size_std: f64,
        #[serde(default)]
        drift: f64,
    },
    /// Log-price of a jumping geometric process whose log-volatility is an
    /// Ornstein-Uhlenbeck process correlated with the price noise.
    Model2 {
        mu: f64,
        jump_intensity: f64,
        jump_mean: f64,
        jump_var: f64,
        rho: f64,
        h0: f64,
        mean_reversion: f64,
        h_bar: f64,
        vol_of_vol: f64,
    },
    /// Brownian motion plus a Variance Gamma jump part `c G_t + eta W_{G_t}`.
    Model3 {
        sigma: f64,
        gamma_var: f64,
        vg_drift: f64,
        vg_vol: f64,
    },
    Custom {
        drift: DriftSpec,
        volatility: VolSpec,
        jumps: JumpSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriftSpec {
    Zero,
    Constant { mu: f64 },
    /// `mu - sigma_t^2 / 2`, the drift of a log-price.
    LogPrice { mu: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VolSpec {
    Constant {
        sigma: f64,
    },
    /// `sigma_t = exp(H_t)`, `dH = -k (H - h_bar) dt + eta dW2`,
    /// `d<W1, W2> = rho dt`.
    ExpOu {
        h0: f64,
        mean_reversion: f64,
        h_bar: f64,
        vol_of_vol: f64,
        rho: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpSpec {
    None,
    CompoundPoisson { intensity: f64, size: JumpSizeLaw },
    VarianceGamma {
        gamma_var: f64,
        drift: f64,
        vol: f64,
    },
}

/// Law of compound Poisson jump sizes in `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpSizeLaw {
    /// `N(mean, std^2)`.
    Normal { mean: f64, std: f64 },
    /// `ln(1 + Z)` with `Z ~ N(mean, std^2)`: relative jumps of a price
    /// expressed in log-price. Draws with `1 + Z <= 0` are rejected.
    LogRelative { mean: f64, std: f64 },
}

/// A model broken into the pieces the simulator drives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParts {
    pub drift: DriftSpec,
    pub volatility: VolSpec,
    pub jumps: JumpSpec,
}

impl ModelConfig {
    pub fn model1() -> Self {
        Self::Model1 {
            sigma: 0.3,
            jump_intensity: 5.0,
            jump_size_std: 0.6,
            drift: 0.0,
        }
    }

    pub fn model2() -> Self {
        Self::Model2 {
            mu: 0.0,
            jump_intensity: 4.0,
            jump_mean: 0.001,
            jump_var: 0.02,
            rho: -0.7,
            h0: 0.3_f64.ln(),
            mean_reversion: 1.0,
            h_bar: 0.25_f64.ln(),
            vol_of_vol: 0.01,
        }
    }

    pub fn model3() -> Self {
        Self::Model3 {
            sigma: 0.3,
            gamma_var: 0.23,
            vg_drift: -0.2,
            vg_vol: 0.2,
        }
    }

    /// Constant-volatility Brownian motion without jumps.
    pub fn diffusion(sigma: f64) -> Self {
        Self::Custom {
            drift: DriftSpec::Zero,
            volatility: VolSpec::Constant { sigma },
            jumps: JumpSpec::None,
        }
    }

    pub fn parts(&self) -> ModelParts {
        match *self {
            Self::Model1 {
                sigma,
                jump_intensity,
                jump_size_std,
                drift,
            } => ModelParts {
                drift: if drift == 0.0 {
                    DriftSpec::Zero
                } else {
                    DriftSpec::Constant { mu: drift }
                },
                volatility: VolSpec::Constant { sigma },
                jumps: JumpSpec::CompoundPoisson {
                    intensity: jump_intensity,
                    size: JumpSizeLaw::Normal {
                        mean: 0.0,
                        std: jump_size_std,
                    },
                },
            },
            Self::Model2 {
                mu,
                jump_intensity,
                jump_mean,
                jump_var,
                rho,
                h0,
                mean_reversion,
                h_bar,
                vol_of_vol,
            } => ModelParts {
                drift: DriftSpec::LogPrice { mu },
                volatility: VolSpec::ExpOu {
                    h0,
                    mean_reversion,
                    h_bar,
                    vol_of_vol,
                    rho,
                },
                jumps: JumpSpec::CompoundPoisson {
                    intensity: jump_intensity,
                    size: JumpSizeLaw::LogRelative {
                        mean: jump_mean,
                        std: jump_var.sqrt(),
                    },
                },
            },
            Self::Model3 {
                sigma,
                gamma_var,
                vg_drift,
                vg_vol,
            } => ModelParts {
                drift: DriftSpec::Zero,
                volatility: VolSpec::Constant { sigma },
                jumps: JumpSpec::VarianceGamma {
                    gamma_var,
                    drift: vg_drift,
                    vol: vg_vol,
                },
            },
            Self::Custom {
                drift,
                volatility,
                jumps,
            } => ModelParts {
                drift,
                volatility,
                jumps,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Model1 {
                sigma,
                jump_intensity,
                jump_size_std,
                drift,
            } => {
                positive("model.sigma", sigma)?;
                positive("model.jump_intensity", jump_intensity)?;
                positive("model.jump_size_std", jump_size_std)?;
                finite("model.drift", drift)
            }
            Self::Model2 {
                mu,
                jump_intensity,
                jump_mean,
                jump_var,
                rho,
                h0,
                mean_reversion,
                h_bar,
                vol_of_vol,
            } => {
                finite("model.mu", mu)?;
                positive("model.jump_intensity", jump_intensity)?;
                finite("model.jump_mean", jump_mean)?;
                positive("model.jump_var", jump_var)?;
                correlation("model.rho", rho)?;
                finite("model.h0", h0)?;
                positive("model.mean_reversion", mean_reversion)?;
                finite("model.h_bar", h_bar)?;
                positive("model.vol_of_vol", vol_of_vol)
            }
            Self::Model3 {
                sigma,
                gamma_var,
                vg_drift,
                vg_vol,
            } => {
                positive("model.sigma", sigma)?;
                positive("model.gamma_var", gamma_var)?;
                finite("model.vg_drift", vg_drift)?;
                positive("model.vg_vol", vg_vol)
            }
            Self::Custom {
                drift,
                volatility,
                jumps,
            } => {
                match drift {
                    DriftSpec::Zero => {}
                    DriftSpec::Constant { mu } | DriftSpec::LogPrice { mu } => {
                        finite("model.drift.mu", mu)?
                    }
                }
                match volatility {
                    VolSpec::Constant { sigma } => positive("model.volatility.sigma", sigma)?,
                    VolSpec::ExpOu {
                        h0,
                        mean_reversion,
                        h_bar,
                        vol_of_vol,
                        rho,
                    } => {
                        finite("model.volatility.h0", h0)?;
                        positive("model.volatility.mean_reversion", mean_reversion)?;
                        finite("model.volatility.h_bar", h_bar)?;
                        positive("model.volatility.vol_of_vol", vol_of_vol)?;
                        correlation("model.volatility.rho", rho)?;
                    }
                }
                match jumps {
                    JumpSpec::None => Ok(()),
                    JumpSpec::CompoundPoisson { intensity, size } => {
                        // zero intensity is allowed here: it gives a pure diffusion
                        if !(intensity >= 0.0 && intensity.is_finite()) {
                            return Err(JumpsiftError::config(
                                "model.jumps.intensity",
                                format!("must be non-negative, got {intensity}"),
                            ));
                        }
                        match size {
                            JumpSizeLaw::Normal { mean, std }
                            | JumpSizeLaw::LogRelative { mean, std } => {
                                finite("model.jumps.size.mean", mean)?;
                                positive("model.jumps.size.std", std)
                            }
                        }
                    }
                    JumpSpec::VarianceGamma {
                        gamma_var,
                        drift,
                        vol,
                    } => {
                        positive("model.jumps.gamma_var", gamma_var)?;
                        finite("model.jumps.drift", drift)?;
                        positive("model.jumps.vol", vol)
                    }
                }
            }
        }
    }

    /// The volatility when it is constant in time.
    pub fn constant_sigma(&self) -> Option<f64> {
        match self.parts().volatility {
            VolSpec::Constant { sigma } => Some(sigma),
            VolSpec::ExpOu { .. } => None,
        }
    }

    pub fn has_jumps(&self) -> bool {
        match self.parts().jumps {
            JumpSpec::None => false,
            JumpSpec::CompoundPoisson { intensity, .. } => intensity > 0.0,
            JumpSpec::VarianceGamma { .. } => true,
        }
    }

    /// True when all jumps come from a compound Poisson part.
    pub fn finite_activity(&self) -> bool {
        !matches!(self.parts().jumps, JumpSpec::VarianceGamma { .. })
    }

    /// Compound Poisson intensity, or `None` for other jump parts.
    pub fn jump_intensity(&self) -> Option<f64> {
        match self.parts().jumps {
            JumpSpec::None => Some(0.0),
            JumpSpec::CompoundPoisson { intensity, .. } => Some(intensity),
            JumpSpec::VarianceGamma { .. } => None,
        }
    }
}

fn finite(key: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(JumpsiftError::config(key, format!("must be finite, got {v}")))
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(JumpsiftError::config(
            key,
            format!("must be strictly positive, got {v}"),
        ))
    }
}

fn correlation(key: &str, v: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(JumpsiftError::config(key, format!("must lie in [-1, 1], got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_parameters() {
        assert_eq!(
            ModelConfig::model1(),
            ModelConfig::Model1 {
                sigma: 0.3,
                jump_intensity: 5.0,
                jump_size_std: 0.6,
                drift: 0.0
            }
        );
        match ModelConfig::model2() {
            ModelConfig::Model2 {
                rho,
                h0,
                h_bar,
                jump_var,
                jump_intensity,
                ..
            } => {
                assert_eq!(rho, -0.7);
                assert_eq!(h0.exp(), 0.3);
                assert!((h_bar.exp() - 0.25).abs() < 1e-15);
                assert_eq!(jump_var, 0.02);
                assert_eq!(jump_intensity, 4.0);
            }
            _ => unreachable!(),
        }
        for m in [ModelConfig::model1(), ModelConfig::model2(), ModelConfig::model3()] {
            m.validate().unwrap();
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = ModelConfig::Model1 {
            sigma: 0.0,
            jump_intensity: 5.0,
            jump_size_std: 0.6,
            drift: 0.0,
        };
        assert!(bad.validate().is_err());
        let mut m2 = ModelConfig::model2();
        if let ModelConfig::Model2 { rho, .. } = &mut m2 {
            *rho = -1.2;
        }
        let err = m2.validate().unwrap_err();
        assert!(err.to_string().contains("model.rho"));
        let m3 = ModelConfig::Model3 {
            sigma: 0.3,
            gamma_var: -0.23,
            vg_drift: -0.2,
            vg_vol: 0.2,
        };
        assert!(m3.validate().is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(ModelConfig::model1().constant_sigma(), Some(0.3));
        assert_eq!(ModelConfig::model2().constant_sigma(), None);
        assert!(ModelConfig::model1().finite_activity());
        assert!(!ModelConfig::model3().finite_activity());
        assert!(!ModelConfig::diffusion(0.3).has_jumps());
        assert!(ModelConfig::model3().has_jumps());
    }
}
