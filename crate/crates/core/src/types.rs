//! Parameter space, spin channels and result containers.
//!
//! Internally ħ = m = 1 and the incident normalization is 1. The physics of
//! both models is fixed by three dimensionless numbers: the couplings
//! `Ω = m g / ħ² k` of the two sites and the phase `φ = k d` picked up
//! between them.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{check_coupling, Error, Result};

/// Which delta-contact interaction couples the mediator X to the qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    /// `g (σ₊σ₋ + σ₋σ₊) δ(x − x₀)`: X only feels a site whose spin differs from its own.
    SpinExchange,
    /// `g σ·σ δ(x − x₀)`: X scatters off a site regardless of spin orientation.
    HeisenbergContact,
}

impl ModelKind {
    pub const ALL: [ModelKind; 2] = [ModelKind::SpinExchange, ModelKind::HeisenbergContact];

    /// Short name used on the command line and in output metadata.
    pub fn short_name(self) -> &'static str {
        match self {
            ModelKind::SpinExchange => "xy",
            ModelKind::HeisenbergContact => "heis",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// The three open spin configurations of (X; A B) reachable from `|↓; ↑↑⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `|↓; ↑↑⟩`, the incident configuration.
    NoFlip,
    /// `|↑; ↑↓⟩`, B has been flipped.
    FlipB,
    /// `|↑; ↓↑⟩`, A has been flipped.
    FlipA,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::NoFlip, Channel::FlipB, Channel::FlipA];

    pub fn index(self) -> usize {
        match self {
            Channel::NoFlip => 0,
            Channel::FlipB => 1,
            Channel::FlipA => 2,
        }
    }

    /// Spin-up flags of (X, A, B).
    pub fn spins_up(self) -> [bool; 3] {
        match self {
            Channel::NoFlip => [false, true, true],
            Channel::FlipB => [true, true, false],
            Channel::FlipA => [true, false, true],
        }
    }
}

/// Detector side: transmitted particles are caught on the right, reflected
/// ones on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Transmitted,
    Reflected,
}

/// A validated point of the dimensionless parameter space.
///
/// The phase is kept as given (so that `k d = ν π` stays expressible) and a
/// copy reduced to `[0, π)` is stored alongside it; every observable depends
/// on the phase only through `e^{2iφ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    omega_a: f64,
    omega_b: f64,
    phase: f64,
    canonical_phase: f64,
    model: ModelKind,
}

impl DimensionlessPoint {
    pub fn new(omega_a: f64, omega_b: f64, phase: f64, model: ModelKind) -> Result<Self> {
        let omega_a = check_coupling("omega_a", omega_a)?;
        let omega_b = check_coupling("omega_b", omega_b)?;
        if !phase.is_finite() {
            return Err(Error::Domain {
                field: "phase",
                value: phase,
                reason: "must be finite",
            });
        }
        Ok(Self {
            omega_a,
            omega_b,
            phase,
            canonical_phase: reduce_phase(phase),
            model,
        })
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    /// Phase `k d` exactly as supplied.
    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Phase reduced to `[0, π)`.
    pub fn canonical_phase(&self) -> f64 {
        self.canonical_phase
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    /// `sin² k d`.
    pub fn sin2_phase(&self) -> f64 {
        self.phase.sin().powi(2)
    }

    pub fn with_phase(&self, phase: f64) -> Result<Self> {
        Self::new(self.omega_a, self.omega_b, phase, self.model)
    }

    pub fn with_model(&self, model: ModelKind) -> Self {
        Self { model, ..*self }
    }
}

impl fmt::Display for DimensionlessPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(omega_a={:?}, omega_b={:?}, phase={:?}, model={})",
            self.omega_a, self.omega_b, self.phase, self.model
        )
    }
}

fn reduce_phase(phase: f64) -> f64 {
    let reduced = phase.rem_euclid(PI);
    // νπ is not exact in binary; snap residues within rounding of 0 or π to 0.
    let slack = 8.0 * f64::EPSILON * phase.abs().max(1.0);
    if reduced <= slack || PI - reduced <= slack {
        0.0
    } else {
        reduced
    }
}

/// Parameters in the figure units: couplings in `ħ²π/(m d₀)`, momentum in
/// `π/d₀`, separation in multiples of `d₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalPoint {
    pub g_a: f64,
    pub g_b: f64,
    pub k: f64,
    pub d: f64,
}

impl PhysicalPoint {
    pub fn new(g_a: f64, g_b: f64, k: f64) -> Self {
        Self { g_a, g_b, k, d: 1.0 }
    }

    pub fn to_dimensionless(&self, model: ModelKind) -> Result<DimensionlessPoint> {
        positive("k", self.k)?;
        positive("d", self.d)?;
        let g_a = check_coupling("g_a", self.g_a)?;
        let g_b = check_coupling("g_b", self.g_b)?;
        DimensionlessPoint::new(g_a / self.k, g_b / self.k, PI * self.k * self.d, model)
    }

    /// Inverse of [`PhysicalPoint::to_dimensionless`] at a given separation.
    /// Needs a positive phase, since `k = φ / (π d)`.
    pub fn from_dimensionless(pt: &DimensionlessPoint, d: f64) -> Result<Self> {
        positive("d", d)?;
        positive("phase", pt.phase())?;
        let k = pt.phase() / (PI * d);
        Ok(Self {
            g_a: pt.omega_a() * k,
            g_b: pt.omega_b() * k,
            k,
            d,
        })
    }
}

fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            field,
            value,
            reason: "must be positive and finite",
        })
    }
}

/// Two-site transmission and reflection amplitudes of the three open
/// channels, for unit incident amplitude in [`Channel::NoFlip`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub t_noflip: Complex64,
    pub r_noflip: Complex64,
    pub t_flipb: Complex64,
    pub r_flipb: Complex64,
    pub t_flipa: Complex64,
    pub r_flipa: Complex64,
}

impl AmplitudeSet {
    pub const FIELD_NAMES: [&'static str; 6] = [
        "t_noflip", "r_noflip", "t_flipb", "r_flipb", "t_flipa", "r_flipa",
    ];

    /// Amplitude of a given channel on a given side.
    pub fn get(&self, channel: Channel, side: Side) -> Complex64 {
        match (channel, side) {
            (Channel::NoFlip, Side::Transmitted) => self.t_noflip,
            (Channel::NoFlip, Side::Reflected) => self.r_noflip,
            (Channel::FlipB, Side::Transmitted) => self.t_flipb,
            (Channel::FlipB, Side::Reflected) => self.r_flipb,
            (Channel::FlipA, Side::Transmitted) => self.t_flipa,
            (Channel::FlipA, Side::Reflected) => self.r_flipa,
        }
    }

    pub fn to_array(&self) -> [Complex64; 6] {
        [
            self.t_noflip,
            self.r_noflip,
            self.t_flipb,
            self.r_flipb,
            self.t_flipa,
            self.r_flipa,
        ]
    }

    pub fn from_array(a: [Complex64; 6]) -> Self {
        Self {
            t_noflip: a[0],
            r_noflip: a[1],
            t_flipb: a[2],
            r_flipb: a[3],
            t_flipa: a[4],
            r_flipa: a[5],
        }
    }

    /// Total outgoing flux. All channels share the same momentum, so this is
    /// one for any unitary scattering.
    pub fn flux(&self) -> f64 {
        self.to_array().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest componentwise modulus of the difference.
    pub fn max_deviation(&self, other: &AmplitudeSet) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Single-site scattering coefficients.
///
/// `t`, `r`, `f` apply when X and the site have opposite spins; `t_same`,
/// `r_same` when they are aligned (identically 1 and 0 for spin exchange).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteCoefficients {
    pub t: Complex64,
    pub r: Complex64,
    pub f: Complex64,
    pub t_same: Complex64,
    pub r_same: Complex64,
}

impl SiteCoefficients {
    /// `|t|² + |r|² + 2|f|²`, one for a unitary site.
    pub fn opposite_spin_flux(&self) -> f64 {
        self.t.norm_sqr() + self.r.norm_sqr() + 2.0 * self.f.norm_sqr()
    }

    pub fn same_spin_flux(&self) -> f64 {
        self.t_same.norm_sqr() + self.r_same.norm_sqr()
    }
}

/// Concurrence, ratio `a` and detection probability seen on one side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideObservables {
    /// Zero when `undefined` is set.
    pub concurrence: f64,
    /// `|A-flip amplitude / B-flip amplitude|`; may be `+∞`.
    pub ratio: f64,
    pub probability: f64,
    /// Nothing is detected on this side (`P = 0`), so the post-selected
    /// state does not exist.
    pub undefined: bool,
}

impl SideObservables {
    pub fn defined_concurrence(&self) -> Option<f64> {
        (!self.undefined).then_some(self.concurrence)
    }

    pub fn defined_ratio(&self) -> Option<f64> {
        (!self.undefined).then_some(self.ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableSet {
    pub transmitted: SideObservables,
    pub reflected: SideObservables,
}

impl ObservableSet {
    pub fn side(&self, side: Side) -> &SideObservables {
        match side {
            Side::Transmitted => &self.transmitted,
            Side::Reflected => &self.reflected,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channels_conserve_up_spins() {
        for ch in Channel::ALL {
            assert_eq!(ch.spins_up().iter().filter(|&&up| up).count(), 2);
        }
    }

    #[test]
    fn figure_three_point_converts() {
        let pt = PhysicalPoint::new(3.0, 3.0, 3.0)
            .to_dimensionless(ModelKind::SpinExchange)
            .unwrap();
        assert_eq!(pt.omega_a(), 1.0);
        assert_eq!(pt.omega_b(), 1.0);
        assert_eq!(pt.phase(), 3.0 * PI);
        assert_eq!(pt.canonical_phase(), 0.0);
    }

    #[test]
    fn zero_coupling_converts() {
        let pt = PhysicalPoint::new(0.0, 0.0, 1.0)
            .to_dimensionless(ModelKind::HeisenbergContact)
            .unwrap();
        assert_eq!((pt.omega_a(), pt.omega_b(), pt.phase()), (0.0, 0.0, PI));
    }

    #[test]
    fn heisenberg_point_converts() {
        let pt = PhysicalPoint::new(1.5, 1.5, 2.0)
            .to_dimensionless(ModelKind::HeisenbergContact)
            .unwrap();
        assert_eq!((pt.omega_a(), pt.omega_b()), (0.75, 0.75));
        assert_eq!(pt.phase(), 2.0 * PI);
        assert_eq!(pt.model(), ModelKind::HeisenbergContact);
    }

    #[test]
    fn bad_momentum_names_field() {
        let err = PhysicalPoint::new(1.0, 1.0, 0.0)
            .to_dimensionless(ModelKind::SpinExchange)
            .unwrap_err();
        assert!(matches!(err, Error::Domain { field: "k", .. }));
        let err = PhysicalPoint { d: -1.0, ..PhysicalPoint::new(1.0, 1.0, 1.0) }
            .to_dimensionless(ModelKind::SpinExchange)
            .unwrap_err();
        assert!(matches!(err, Error::Domain { field: "d", .. }));
    }

    #[test]
    fn validation_rejects_bad_couplings() {
        let m = ModelKind::SpinExchange;
        assert!(matches!(
            DimensionlessPoint::new(-1.0, 1.0, 0.0, m),
            Err(Error::Domain { field: "omega_a", .. })
        ));
        assert!(DimensionlessPoint::new(1.0, f64::NAN, 0.0, m).is_err());
        assert!(DimensionlessPoint::new(f64::INFINITY, 1.0, 0.0, m).is_err());
        assert!(DimensionlessPoint::new(1.0, 1.0, f64::NAN, m).is_err());
    }

    #[test]
    fn canonical_points_pass_through() {
        let pt = DimensionlessPoint::new(0.5, 1.2, 2.0, ModelKind::SpinExchange).unwrap();
        assert_eq!((pt.omega_a(), pt.omega_b(), pt.phase()), (0.5, 1.2, 2.0));
        assert_eq!(pt.canonical_phase(), 2.0);
    }

    #[test]
    fn phase_reduction() {
        let pt = DimensionlessPoint::new(1.0, 1.0, -0.5, ModelKind::SpinExchange).unwrap();
        assert!((pt.canonical_phase() - (PI - 0.5)).abs() < 1e-15);
        for nu in 1..50 {
            let pt =
                DimensionlessPoint::new(1.0, 1.0, nu as f64 * PI, ModelKind::SpinExchange).unwrap();
            assert_eq!(pt.canonical_phase(), 0.0, "nu = {nu}");
        }
    }
}
