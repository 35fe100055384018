//! Post-selected two-qubit states and what can be read off them.
//!
//! Detecting X in `|↑⟩` on one side leaves A and B in
//! `x |↑↓⟩ + y |↓↑⟩`, with `x` the B-flip and `y` the A-flip amplitude of
//! that side. For such a two-term pure state the concurrence reduces to
//! `2|xy| / (|x|² + |y|²) = 2a / (1 + a²)` with `a = |y/x|`.

use num_complex::Complex64;

use crate::closed_form::amplitudes;
use crate::types::{AmplitudeSet, DimensionlessPoint, ObservableSet, Side, SideObservables};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostSelectedState {
    /// Weight of `|↑↓⟩_AB` (B flipped).
    pub coeff_updown: Complex64,
    /// Weight of `|↓↑⟩_AB` (A flipped).
    pub coeff_downup: Complex64,
    pub side: Side,
}

impl PostSelectedState {
    /// Squared norm, equal to the detection probability on this side.
    pub fn norm_sqr(&self) -> f64 {
        self.coeff_updown.norm_sqr() + self.coeff_downup.norm_sqr()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coeff_updown: self.coeff_updown * factor,
            coeff_downup: self.coeff_downup * factor,
            side: self.side,
        }
    }
}

pub fn post_selected_state(amps: &AmplitudeSet, side: Side) -> PostSelectedState {
    let (coeff_updown, coeff_downup) = match side {
        Side::Transmitted => (amps.t_flipb, amps.t_flipa),
        Side::Reflected => (amps.r_flipb, amps.r_flipa),
    };
    PostSelectedState {
        coeff_updown,
        coeff_downup,
        side,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entanglement {
    pub concurrence: f64,
    pub ratio: f64,
    /// Both weights vanish: nothing is detected and the concurrence is
    /// reported as 0 only as a placeholder.
    pub undefined: bool,
}

pub fn concurrence_and_ratio(state: &PostSelectedState) -> Entanglement {
    let x = state.coeff_updown.norm();
    let y = state.coeff_downup.norm();
    if x == 0.0 && y == 0.0 {
        return Entanglement {
            concurrence: 0.0,
            ratio: 0.0,
            undefined: true,
        };
    }
    let ratio = if x == 0.0 { f64::INFINITY } else { y / x };
    // Written without squaring to stay finite when the weights are tiny.
    let (big, small) = if x >= y { (x, y) } else { (y, x) };
    let rel = small / big;
    Entanglement {
        concurrence: 2.0 * rel / (1.0 + rel * rel),
        ratio,
        undefined: false,
    }
}

pub fn probability(state: &PostSelectedState) -> f64 {
    state.norm_sqr()
}

pub fn side_observables(amps: &AmplitudeSet, side: Side) -> SideObservables {
    let state = post_selected_state(amps, side);
    let e = concurrence_and_ratio(&state);
    SideObservables {
        concurrence: e.concurrence,
        ratio: e.ratio,
        probability: probability(&state),
        undefined: e.undefined,
    }
}

pub fn observables_from_amplitudes(amps: &AmplitudeSet) -> ObservableSet {
    ObservableSet {
        transmitted: side_observables(amps, Side::Transmitted),
        reflected: side_observables(amps, Side::Reflected),
    }
}

pub fn observables_at(pt: &DimensionlessPoint) -> ObservableSet {
    observables_from_amplitudes(&amplitudes(pt))
}

/// Scalar expressions for the spin-exchange model, in terms of the couplings
/// and `s = sin² k d`. Both detection sides share these values.
pub mod spin_exchange {
    /// `a = (Ω_A/Ω_B) √(1 + 4Ω_B²(1 + Ω_B²) s)`; `+∞` when only A couples,
    /// and 0 when A is transparent.
    pub fn ratio(omega_a: f64, omega_b: f64, sin2: f64) -> f64 {
        if omega_a == 0.0 {
            return 0.0;
        }
        if omega_b == 0.0 {
            return f64::INFINITY;
        }
        let b2 = omega_b * omega_b;
        omega_a / omega_b * (1.0 + 4.0 * b2 * (1.0 + b2) * sin2).sqrt()
    }

    /// `C = 2a / (1 + a²)`, continuous at `a = ∞`.
    pub fn concurrence_from_ratio(a: f64) -> f64 {
        if a.is_infinite() {
            0.0
        } else if a <= 1.0 {
            2.0 * a / (1.0 + a * a)
        } else {
            2.0 / (a + 1.0 / a)
        }
    }

    pub fn concurrence(omega_a: f64, omega_b: f64, sin2: f64) -> f64 {
        concurrence_from_ratio(ratio(omega_a, omega_b, sin2))
    }

    /// Detection probability on either side.
    pub fn probability(omega_a: f64, omega_b: f64, sin2: f64) -> f64 {
        let a2 = omega_a * omega_a;
        let b2 = omega_b * omega_b;
        let cross = 4.0 * a2 * b2 * sin2;
        let num = a2 + b2 + cross * (1.0 + b2);
        let base = 1.0 + a2 + b2;
        num / (base * base + cross * (1.0 + a2) * (1.0 + b2))
    }

    /// `1/2 − P`, arranged without cancellation so that it stays accurate
    /// where `P` itself rounds to `1/2`.
    pub fn probability_deficit(omega_a: f64, omega_b: f64, sin2: f64) -> f64 {
        let a2 = omega_a * omega_a;
        let b2 = omega_b * omega_b;
        let off = 1.0 - sin2;
        let base = 1.0 + a2 + b2;
        let den = base * base + 4.0 * a2 * b2 * sin2 * (1.0 + a2) * (1.0 + b2);
        let linear = 2.0 * a2 * ((2.0 * a2 - 1.0) + 2.0 * (1.0 - a2) * off);
        let quadratic = (1.0 - 2.0 * a2).powi(2) + 4.0 * a2 * (1.0 - a2) * off;
        (1.0 + a2 * a2 + b2 * (linear + b2 * quadratic)) / (2.0 * den)
    }
}
