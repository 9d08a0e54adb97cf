use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::params::ModelParams;

/// `η = (ω₁²/2) (1 - g'²) N^{2/3}`: positive in the normal phase, negative
/// in the super-radiant phase, zero at `g_c`.
pub fn scaling_variable(params: &ModelParams) -> f64 {
    let gp = params.g_prime();
    0.5 * params.omega1().powi(2) * (1.0 - gp * gp) * params.n().powf(2.0 / 3.0)
}

/// Observable entering the scaling analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Ground energy `E_g`.
    Energy,
    /// `⟨J_z⟩/N`.
    Jz,
    /// `⟨J_y²⟩/N²`.
    Jy2,
}

impl Quantity {
    pub const ALL: [Quantity; 3] = [Quantity::Energy, Quantity::Jz, Quantity::Jy2];

    /// Decay exponent of the singular part: `Q_sing ~ N^{-exponent}`.
    pub fn exponent(self) -> f64 {
        match self {
            Quantity::Energy | Quantity::Jy2 => 4.0 / 3.0,
            Quantity::Jz => 2.0 / 3.0,
        }
    }

    pub fn exponent_label(self) -> &'static str {
        match self {
            Quantity::Energy | Quantity::Jy2 => "4/3",
            Quantity::Jz => "2/3",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Energy => "energy",
            Quantity::Jz => "jz",
            Quantity::Jy2 => "jy2",
        }
    }

    /// Thermodynamic-limit value at `g_c`, energy in units of `ω₁`.
    pub fn critical_limit(self) -> f64 {
        match self {
            Quantity::Energy | Quantity::Jz => -0.5,
            Quantity::Jy2 => 0.0,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "energy" | "eg" | "e" => Ok(Quantity::Energy),
            "jz" => Ok(Quantity::Jz),
            "jy2" => Ok(Quantity::Jy2),
            other => Err(Error::InvalidParameter(format!(
                "unknown quantity '{other}', expected energy, jz or jy2"
            ))),
        }
    }
}

/// Regular part removed from the ground energy before rescaling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergyRegular {
    /// `-ω₁/2 - ω₁/(2N) - ω₁g²/(2N²ω²)`, consistent with the finite-size
    /// energy expansion.
    #[default]
    Constant,
    /// `-ω₁/(2N) - ω₁/(2N²)`; leaves the extensive constant in place.
    Short,
}

/// Regular (non-universal) part of a finite-N observable.
pub fn regular_part(quantity: Quantity, params: &ModelParams, variant: EnergyRegular) -> f64 {
    let (w, w1, g, n) = (params.omega(), params.omega1(), params.g(), params.n());
    match quantity {
        Quantity::Energy => match variant {
            EnergyRegular::Constant => {
                -0.5 * w1 - w1 / (2.0 * n) - w1 * g * g / (2.0 * n * n * w * w)
            }
            EnergyRegular::Short => -w1 / (2.0 * n) - w1 / (2.0 * n * n),
        },
        Quantity::Jz => -0.5,
        Quantity::Jy2 => 0.0,
    }
}

/// `N^{exponent} (Q - Q_regular)`, the quantity plotted against `η` in a
/// data collapse.
pub fn singular_part(quantity: Quantity, value: f64, params: &ModelParams) -> f64 {
    singular_part_with(quantity, value, params, EnergyRegular::Constant)
}

pub fn singular_part_with(
    quantity: Quantity,
    value: f64,
    params: &ModelParams,
    variant: EnergyRegular,
) -> f64 {
    params.n().powf(quantity.exponent()) * (value - regular_part(quantity, params, variant))
}

/// Observable minus its limit and every known regular `1/N` term, the
/// quantity whose power-law decay gives the finite-size exponent.
///
/// For `⟨J_z⟩/N` this also removes the Holstein–Primakoff zero-point term
/// `-1/(2N)` from `⟨b†b⟩ = (⟨x²⟩ + ⟨p²⟩ - 1)/2`.
pub fn fit_residual(quantity: Quantity, value: f64, params: &ModelParams) -> f64 {
    match quantity {
        Quantity::Jz => value + 0.5 + 1.0 / (2.0 * params.n()),
        _ => value - regular_part(quantity, params, EnergyRegular::Constant),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_values() {
        let p = ModelParams::new(1.0, 0.5, 0.0, 100).unwrap();
        let at_gc = p.with_g(p.g_c()).unwrap();
        assert!(scaling_variable(&at_gc).abs() < 1e-15);
        let g = p.g_c() * 0.9f64.sqrt();
        let eta = scaling_variable(&p.with_g(g).unwrap());
        assert!((eta - 0.125 * 0.1 * 100f64.powf(2.0 / 3.0)).abs() < 1e-12);
        assert!((eta - 0.2693).abs() < 1e-4);
        let one = scaling_variable(&p.with_g(g).unwrap().with_n_atoms(1).unwrap());
        let eight = scaling_variable(&p.with_g(g).unwrap().with_n_atoms(8).unwrap());
        assert!((eight / one - 4.0).abs() < 1e-12);
        let above = p.with_g(0.4).unwrap();
        assert!(scaling_variable(&above) < 0.0);
    }

    #[test]
    fn quantity_tags() {
        assert_eq!("energy".parse::<Quantity>().unwrap(), Quantity::Energy);
        assert_eq!("JZ".parse::<Quantity>().unwrap(), Quantity::Jz);
        assert_eq!(Quantity::Jy2.to_string(), "jy2");
        assert!("magnetisation".parse::<Quantity>().is_err());
    }

    #[test]
    fn singular_part_unwinds_regular_terms() {
        let p = ModelParams::new(1.0, 0.5, 0.2, 64).unwrap();
        let value = regular_part(Quantity::Energy, &p, EnergyRegular::Constant)
            + 1.5 / 64f64.powf(4.0 / 3.0);
        assert!((singular_part(Quantity::Energy, value, &p) - 1.5).abs() < 1e-9);
        assert_eq!(singular_part(Quantity::Jz, -0.5, &p), 0.0);
        assert!((singular_part(Quantity::Jy2, 0.01, &p) - 0.01 * 256.0).abs() < 1e-10);
        let short = singular_part_with(Quantity::Energy, -0.25, &p, EnergyRegular::Short);
        let expected = 64f64.powf(4.0 / 3.0) * (-0.25 + 0.5 / 128.0 + 0.5 / (2.0 * 64.0 * 64.0));
        assert!((short - expected).abs() < 1e-9);
    }
}
