//! Optimal phases and couplings for the spin-exchange model.
//!
//! At fixed couplings the detection probability only depends on
//! `s = sin² k d` through a Möbius map `(α + βs)/(γ + δs)`; its determinant
//! `βγ − αδ` is non-negative here, so `P` is largest on resonance (`s = 1`).
//! The ratio `a` grows monotonically with `s` between
//! `Ω_A/Ω_B` and `(Ω_A/Ω_B)(1 + 2Ω_B²)`, which fixes where `C = 1` is
//! reachable and which phase maximizes `C` elsewhere.

use std::fmt;

use crate::error::{check_coupling, Result};
use crate::observables::spin_exchange;
use crate::search::{bisect_sign, golden_section_max};

pub fn probability_at_resonance(omega_a: f64, omega_b: f64) -> Result<f64> {
    let (a, b) = couplings(omega_a, omega_b)?;
    Ok(spin_exchange::probability(a, b, 1.0))
}

/// `1/2 − P` on resonance, resolved even where `P` rounds to 1/2.
pub fn resonance_deficit(omega_a: f64, omega_b: f64) -> Result<f64> {
    let (a, b) = couplings(omega_a, omega_b)?;
    Ok(spin_exchange::probability_deficit(a, b, 1.0))
}

/// Supremum of [`probability_at_resonance`] over the quadrant. It is only
/// approached as `(Ω_A, Ω_B) → (1/√2, ∞)`, never attained.
pub const P_MAX: f64 = 0.5;

/// Why a pair of couplings cannot reach `C = 1` at any phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// `Ω_A = 0`, so the A-flipped branch is empty.
    NoFlipAtA,
    /// `Ω_A > Ω_B`: even on a node `a = Ω_A/Ω_B > 1`.
    RatioTooLarge,
    /// `Ω_A < Ω_B/(1 + 2Ω_B²)`: even on resonance `a < 1`.
    RatioTooSmall,
}

impl fmt::Display for Infeasibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Infeasibility::NoFlipAtA => "flip amplitude of A vanishes",
            Infeasibility::RatioTooLarge => "omega_a exceeds omega_b",
            Infeasibility::RatioTooSmall => "omega_a below omega_b/(1+2 omega_b^2)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitPhase {
    /// `sin² k d` giving `a = 1`.
    Feasible(f64),
    Infeasible(Infeasibility),
}

impl UnitPhase {
    pub fn sin2(self) -> Option<f64> {
        match self {
            UnitPhase::Feasible(s) => Some(s),
            UnitPhase::Infeasible(_) => None,
        }
    }
}

/// Lower edge `Ω_B/(1 + 2Ω_B²)` of the unit-concurrence region.
pub fn unit_region_lower(omega_b: f64) -> f64 {
    omega_b / (1.0 + 2.0 * omega_b * omega_b)
}

pub fn unit_concurrence_phase(omega_a: f64, omega_b: f64) -> Result<UnitPhase> {
    let (a, b) = couplings(omega_a, omega_b)?;
    if a == 0.0 {
        return Ok(UnitPhase::Infeasible(Infeasibility::NoFlipAtA));
    }
    if a > b {
        return Ok(UnitPhase::Infeasible(Infeasibility::RatioTooLarge));
    }
    if a < unit_region_lower(b) {
        return Ok(UnitPhase::Infeasible(Infeasibility::RatioTooSmall));
    }
    let (a2, b2) = (a * a, b * b);
    let s = (b2 - a2) / (4.0 * a2 * b2 * (1.0 + b2));
    // The edges evaluate to 0 and 1 up to rounding.
    Ok(UnitPhase::Feasible(s.clamp(0.0, 1.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `Ω_A < Ω_B/(1 + 2Ω_B²)`: best on resonance.
    LeftRegion,
    /// Some phase gives `C = 1`; edges belong here.
    UnitConcurrenceRegion,
    /// `Ω_A > Ω_B`: best on a node, `sin k d = 0`.
    RightRegion,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::LeftRegion => "LeftRegion",
            Regime::UnitConcurrenceRegion => "UnitConcurrenceRegion",
            Regime::RightRegion => "RightRegion",
        })
    }
}

pub fn classify(omega_a: f64, omega_b: f64) -> Result<Regime> {
    let (a, b) = couplings(omega_a, omega_b)?;
    Ok(if a == 0.0 || a < unit_region_lower(b) {
        Regime::LeftRegion
    } else if a > b {
        Regime::RightRegion
    } else {
        Regime::UnitConcurrenceRegion
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalityReport {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Chosen `sin² k d`.
    pub phase_choice: f64,
    /// Best concurrence over all phases (0 when `Ω_A = 0`).
    pub concurrence: f64,
    /// Detection probability at the chosen phase.
    pub probability: f64,
    pub regime: Regime,
}

pub fn optimal_concurrence(omega_a: f64, omega_b: f64) -> Result<OptimalityReport> {
    let (a, b) = couplings(omega_a, omega_b)?;
    let regime = classify(a, b)?;
    let phase_choice = match regime {
        Regime::LeftRegion => 1.0,
        Regime::RightRegion => 0.0,
        Regime::UnitConcurrenceRegion => unit_concurrence_phase(a, b)?
            .sin2()
            .expect("unit region is feasible"),
    };
    Ok(OptimalityReport {
        omega_a: a,
        omega_b: b,
        phase_choice,
        concurrence: spin_exchange::concurrence(a, b, phase_choice),
        probability: spin_exchange::probability(a, b, phase_choice),
        regime,
    })
}

/// Bracket for Ω_B along the resonant unit-concurrence curve.
pub const P_OPT_BRACKET: (f64, f64) = (0.1, 10.0);
/// Golden-section bracket width at which the coarse search stops.
pub const P_OPT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalOptimum {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Always 1: the optimum sits on resonance.
    pub sin2: f64,
    pub probability: f64,
    pub iterations: usize,
}

/// Largest detection probability compatible with `C = 1`.
///
/// Searches along `Ω_A = Ω_B/(1 + 2Ω_B²)`, `sin² k d = 1` by golden section,
/// then pins the stationary point by bisecting on the exact derivative.
pub fn find_global_p_opt() -> GlobalOptimum {
    let (lo, hi) = P_OPT_BRACKET;
    assert!(
        curve_slope(lo) > 0.0 && curve_slope(hi) < 0.0,
        "P_opt bracket does not contain the maximum"
    );
    let coarse = golden_section_max(curve_probability, lo, hi, P_OPT_TOLERANCE);
    // Golden section stalls at about √ε relative accuracy; widen its bracket
    // until the slope changes sign across it and bisect on the slope.
    let mut half_width = (coarse.bracket.1 - coarse.bracket.0).max(1e-9);
    let omega_b = loop {
        let a = (coarse.x - half_width).max(lo);
        let b = (coarse.x + half_width).min(hi);
        if let Some(root) = bisect_sign(curve_slope, a, b) {
            break root;
        }
        half_width *= 4.0;
    };
    GlobalOptimum {
        omega_a: unit_region_lower(omega_b),
        omega_b,
        sin2: 1.0,
        probability: curve_probability(omega_b),
        iterations: coarse.iterations,
    }
}

/// `Ω_B = √((1 + ∛(37 − 3√114) + ∛(37 + 3√114)) / 6)`, the stationary point
/// of the curve probability in closed form.
pub fn p_opt_omega_b_closed_form() -> f64 {
    let root = 114f64.sqrt();
    ((1.0 + (37.0 - 3.0 * root).cbrt() + (37.0 + 3.0 * root).cbrt()) / 6.0).sqrt()
}

/// Detection probability on resonance at `(Ω_B/(1 + 2Ω_B²), Ω_B)`.
pub fn curve_probability(omega_b: f64) -> f64 {
    curve_probability_dual(Dual::variable(omega_b)).value
}

/// `d/dΩ_B` of [`curve_probability`], exact to rounding.
pub fn curve_slope(omega_b: f64) -> f64 {
    curve_probability_dual(Dual::variable(omega_b)).slope
}

fn curve_probability_dual(omega_b: Dual) -> Dual {
    let one = Dual::constant(1.0);
    let b2 = omega_b * omega_b;
    let omega_a = omega_b / (one + Dual::constant(2.0) * b2);
    let a2 = omega_a * omega_a;
    let cross = Dual::constant(4.0) * a2 * b2;
    let num = a2 + b2 + cross * (one + b2);
    let base = one + a2 + b2;
    num / (base * base + cross * (one + a2) * (one + b2))
}

/// Forward-mode value and derivative.
#[derive(Debug, Clone, Copy)]
struct Dual {
    value: f64,
    slope: f64,
}

impl Dual {
    fn constant(value: f64) -> Self {
        Self { value, slope: 0.0 }
    }

    fn variable(value: f64) -> Self {
        Self { value, slope: 1.0 }
    }
}

impl std::ops::Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            value: self.value + o.value,
            slope: self.slope + o.slope,
        }
    }
}

impl std::ops::Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            value: self.value * o.value,
            slope: self.slope * o.value + self.value * o.slope,
        }
    }
}

impl std::ops::Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual {
            value: self.value / o.value,
            slope: (self.slope * o.value - self.value * o.slope) / (o.value * o.value),
        }
    }
}

fn couplings(omega_a: f64, omega_b: f64) -> Result<(f64, f64)> {
    Ok((
        check_coupling("omega_a", omega_a)?,
        check_coupling("omega_b", omega_b)?,
    ))
}
