use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// Transduction scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Scheme {
    /// Beam-splitter interaction, state swapped directly.
    DirectConversion,
    /// Two-mode-squeezing interaction followed by teleportation.
    Teleportation,
}

/// Which cavity mode carries the single-mode squeezing drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SqueezeSite {
    Microwave,
    Optical,
}

/// Direction of transduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    MicrowaveToOptical,
    OpticalToMicrowave,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Self::MicrowaveToOptical => Self::OpticalToMicrowave,
            Self::OpticalToMicrowave => Self::MicrowaveToOptical,
        }
    }
}

macro_rules! short_names {
    ($ty:ty, $what:literal, $($variant:path => $name:literal),+) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($variant => $name),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    other => Err(Error::Config(format!(
                        concat!("unknown ", $what, " '{}' (expected one of: {})"),
                        other,
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }
    };
}

short_names!(Scheme, "scheme", Scheme::DirectConversion => "dc", Scheme::Teleportation => "tp");
short_names!(SqueezeSite, "squeezing site", SqueezeSite::Microwave => "ms", SqueezeSite::Optical => "os");
short_names!(
    Direction,
    "direction",
    Direction::MicrowaveToOptical => "mo",
    Direction::OpticalToMicrowave => "om"
);

/// Dimensionless device configuration.
///
/// Rates are normalised to the total cavity loss rates, so the interaction
/// and squeezing rates are `g = √C_g / 2` and `v = √C_v / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    /// Interaction cooperativity `C_g`.
    pub coop: f64,
    /// Squeezing level `C_v` of the squeezed mode.
    pub squeezing: f64,
    /// Optical extraction efficiency `ζ_o`.
    pub zeta_o: f64,
    /// Microwave extraction efficiency `ζ_m`.
    pub zeta_m: f64,
    /// Thermal occupation of the microwave intrinsic bath.
    pub n_in: f64,
    /// Squeezing phase in radians.
    pub theta: f64,
    pub squeeze_at: SqueezeSite,
    pub direction: Direction,
}

impl SystemParams {
    /// Ideal extraction, zero temperature, `θ = π/2`, microwave squeezing,
    /// microwave-to-optical.
    pub fn new(coop: f64, squeezing: f64) -> Self {
        Self {
            coop,
            squeezing,
            zeta_o: 1.0,
            zeta_m: 1.0,
            n_in: 0.0,
            theta: FRAC_PI_2,
            squeeze_at: SqueezeSite::Microwave,
            direction: Direction::MicrowaveToOptical,
        }
    }

    pub fn with_zeta(self, zeta: f64) -> Self {
        self.with_extraction(zeta, zeta)
    }

    pub fn with_extraction(mut self, zeta_o: f64, zeta_m: f64) -> Self {
        self.zeta_o = zeta_o;
        self.zeta_m = zeta_m;
        self
    }

    pub fn with_thermal(mut self, n_in: f64) -> Self {
        self.n_in = n_in;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_squeeze_at(mut self, site: SqueezeSite) -> Self {
        self.squeeze_at = site;
        self
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_squeezing(mut self, squeezing: f64) -> Self {
        self.squeezing = squeezing;
        self
    }

    pub fn with_coop(mut self, coop: f64) -> Self {
        self.coop = coop;
        self
    }

    /// Interaction rate `g` in units of the cavity loss rate.
    pub fn coupling(&self) -> f64 {
        self.coop.sqrt() / 2.0
    }

    /// Squeezing rate `v` in units of the cavity loss rate.
    pub fn squeeze_rate(&self) -> f64 {
        self.squeezing.sqrt() / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool, &'static str); 6] = [
            ("C_g", self.coop, self.coop >= 0.0 && self.coop.is_finite(), "C_g >= 0"),
            (
                "C_v",
                self.squeezing,
                self.squeezing >= 0.0 && self.squeezing.is_finite(),
                "C_v >= 0",
            ),
            ("zeta_o", self.zeta_o, (0.0..=1.0).contains(&self.zeta_o), "0 <= zeta_o <= 1"),
            ("zeta_m", self.zeta_m, (0.0..=1.0).contains(&self.zeta_m), "0 <= zeta_m <= 1"),
            ("n_in", self.n_in, self.n_in >= 0.0 && self.n_in.is_finite(), "n_in >= 0"),
            ("theta", self.theta, self.theta.is_finite(), "finite"),
        ];
        for (name, value, ok, expected) in checks {
            if !ok {
                return Err(Error::Domain {
                    name,
                    value,
                    expected,
                });
            }
        }
        Ok(())
    }
}
