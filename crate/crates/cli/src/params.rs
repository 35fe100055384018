//! Parameter coordinates in the two unit systems and their resolution into
//! dimensionless points.
//!
//! Physical: `gA`, `gB` in ħ²π/(m d₀), `k` in π/d₀, `d` in d₀.
//! Dimensionless: `omegaA`, `omegaB`, and either `phase` (= k d) or `sin2kd`.

use std::fmt;

use bounce_core::{DimensionlessPoint, ModelKind, PhysicalPoint};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    GA,
    GB,
    K,
    D,
    OmegaA,
    OmegaB,
    Phase,
    Sin2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitSystem {
    Physical,
    Dimensionless,
}

impl UnitSystem {
    pub fn description(self) -> &'static str {
        match self {
            UnitSystem::Physical => "g[hbar^2 pi/(m d0)] k[pi/d0] d[d0]",
            UnitSystem::Dimensionless => "omega=m g/(hbar^2 k) phase=k d",
        }
    }
}

impl Coord {
    pub const ALL: [Coord; 8] = [
        Coord::GA,
        Coord::GB,
        Coord::K,
        Coord::D,
        Coord::OmegaA,
        Coord::OmegaB,
        Coord::Phase,
        Coord::Sin2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coord::GA => "gA",
            Coord::GB => "gB",
            Coord::K => "k",
            Coord::D => "d",
            Coord::OmegaA => "omegaA",
            Coord::OmegaB => "omegaB",
            Coord::Phase => "phase",
            Coord::Sin2 => "sin2kd",
        }
    }

    pub fn parse(name: &str) -> Result<Coord, CliError> {
        Coord::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown parameter '{name}' (expected one of gA, gB, k, d, omegaA, omegaB, phase, sin2kd)"
                ))
            })
    }

    /// `d` belongs to the physical system but defaults to 1.
    pub fn system(self) -> UnitSystem {
        match self {
            Coord::GA | Coord::GB | Coord::K | Coord::D => UnitSystem::Physical,
            _ => UnitSystem::Dimensionless,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of coordinate values, at most one per coordinate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: Vec<(Coord, f64)>,
}

/// Couplings and, when given, the phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolved {
    pub omega_a: f64,
    pub omega_b: f64,
    pub phase: Option<f64>,
}

impl Resolved {
    pub fn point(&self, model: ModelKind) -> Result<DimensionlessPoint, CliError> {
        let phase = self
            .phase
            .ok_or_else(|| CliError::Usage("a phase (--phase, --sin2kd or --k) is required".into()))?;
        Ok(DimensionlessPoint::new(self.omega_a, self.omega_b, phase, model)?)
    }
}

impl Params {
    pub fn set(&mut self, coord: Coord, value: f64) -> Result<(), CliError> {
        if self.get(coord).is_some() {
            return Err(CliError::Usage(format!("parameter '{coord}' given twice")));
        }
        self.values.push((coord, value));
        Ok(())
    }

    pub fn get(&self, coord: Coord) -> Option<f64> {
        self.values.iter().find(|(c, _)| *c == coord).map(|(_, v)| *v)
    }

    pub fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        self.values.iter().map(|(c, _)| *c)
    }

    pub fn with(&self, coord: Coord, value: f64) -> Params {
        let mut p = self.clone();
        match p.values.iter_mut().find(|(c, _)| *c == coord) {
            Some(slot) => slot.1 = value,
            None => p.values.push((coord, value)),
        }
        p
    }

    /// The unit system in use. Mixing systems is a usage error.
    pub fn system(&self) -> Result<UnitSystem, CliError> {
        let physical = self
            .coords()
            .any(|c| c.system() == UnitSystem::Physical && c != Coord::D);
        let dimensionless = self.coords().any(|c| c.system() == UnitSystem::Dimensionless);
        match (physical, dimensionless) {
            (true, true) => Err(CliError::Usage(
                "physical (gA, gB, k, d) and dimensionless (omegaA, omegaB, phase, sin2kd) parameters are mutually exclusive".into(),
            )),
            (false, true) => {
                if self.get(Coord::D).is_some() {
                    return Err(CliError::Usage("d only applies with physical parameters".into()));
                }
                Ok(UnitSystem::Dimensionless)
            }
            _ => Ok(UnitSystem::Physical),
        }
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let require = |c: Coord| {
            self.get(c)
                .ok_or_else(|| CliError::Usage(format!("missing parameter '{c}'")))
        };
        match self.system()? {
            UnitSystem::Physical => {
                let phys = PhysicalPoint {
                    g_a: require(Coord::GA)?,
                    g_b: require(Coord::GB)?,
                    k: require(Coord::K)?,
                    d: self.get(Coord::D).unwrap_or(1.0),
                };
                // The model does not enter the unit conversion.
                let pt = phys.to_dimensionless(ModelKind::SpinExchange)?;
                Ok(Resolved {
                    omega_a: pt.omega_a(),
                    omega_b: pt.omega_b(),
                    phase: Some(pt.phase()),
                })
            }
            UnitSystem::Dimensionless => {
                let phase = match (self.get(Coord::Phase), self.get(Coord::Sin2)) {
                    (Some(_), Some(_)) => {
                        return Err(CliError::Usage("give either phase or sin2kd, not both".into()))
                    }
                    (Some(p), None) => Some(p),
                    (None, Some(s)) => {
                        if !(0.0..=1.0).contains(&s) {
                            return Err(CliError::Usage(format!("sin2kd = {s} is outside [0, 1]")));
                        }
                        Some(s.sqrt().asin())
                    }
                    (None, None) => None,
                };
                Ok(Resolved {
                    omega_a: require(Coord::OmegaA)?,
                    omega_b: require(Coord::OmegaB)?,
                    phase,
                })
            }
        }
    }

    /// `name=value` pairs in a stable order, for output metadata.
    pub fn describe(&self) -> String {
        let mut v = self.values.clone();
        v.sort_by_key(|(c, _)| *c);
        v.iter()
            .map(|(c, x)| format!("{c}={}", crate::grid::format_float(*x)))
            .collect::<Vec<_>>()
            .join(",")
    }
}
