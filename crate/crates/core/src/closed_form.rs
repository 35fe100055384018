//! Closed-form single-site coefficients and two-site amplitudes.
//!
//! Plane waves are referenced to the site positions: the incident and
//! reflected waves to `x = −d/2`, the transmitted wave to `x = +d/2`. With
//! that convention every amplitude carries explicit powers of `e^{iφ}` and
//! the bounce structure of the denominators `1 − r_A r_B e^{2iφ}` is visible.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{check_coupling, Error, Result};
use crate::types::{AmplitudeSet, DimensionlessPoint, ModelKind, SiteCoefficients};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn site_coefficients(omega: f64, model: ModelKind) -> Result<SiteCoefficients> {
    let omega = check_coupling("omega", omega)?;
    Ok(site(omega, model))
}

fn site(omega: f64, model: ModelKind) -> SiteCoefficients {
    match model {
        ModelKind::SpinExchange => {
            let den = 1.0 + omega * omega;
            SiteCoefficients {
                t: Complex64::new(1.0 / den, 0.0),
                r: Complex64::new(-omega * omega / den, 0.0),
                f: Complex64::new(0.0, -omega / den),
                t_same: ONE,
                r_same: Complex64::new(0.0, 0.0),
            }
        }
        ModelKind::HeisenbergContact => {
            // Triplet and singlet see strengths +Ω and −3Ω.
            let triplet = ONE + I * omega;
            let den = triplet * (ONE - 3.0 * I * omega);
            SiteCoefficients {
                t: (ONE - I * omega) / den,
                r: I * omega * (ONE + 3.0 * I * omega) / den,
                f: -2.0 * I * omega / den,
                t_same: ONE / triplet,
                r_same: -I * omega / triplet,
            }
        }
    }
}

/// Site coefficients of model 2 renormalized by the flip-and-return loops
/// between the sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedCoefficients {
    pub t_a: Complex64,
    pub r_a: Complex64,
    pub t_b: Complex64,
    pub r_b: Complex64,
    pub sigma_a: Complex64,
    pub sigma_b: Complex64,
}

pub fn dressed_coefficients(pt: &DimensionlessPoint) -> Result<DressedCoefficients> {
    if pt.model() != ModelKind::HeisenbergContact {
        return Err(Error::UnsupportedModel {
            operation: "dressed coefficients",
            model: pt.model(),
        });
    }
    let a = site(pt.omega_a(), pt.model());
    let b = site(pt.omega_b(), pt.model());
    Ok(dress(&a, &b, Complex64::from_polar(1.0, 2.0 * pt.phase())))
}

fn dress(a: &SiteCoefficients, b: &SiteCoefficients, e2: Complex64) -> DressedCoefficients {
    // X flips at one site, bounces between that site (opposite spin) and the
    // partner (same spin), then flips back.
    let sigma_a = a.f * a.f * b.r_same * e2 / nonzero(ONE - a.r * b.r_same * e2);
    let sigma_b = b.f * b.f * a.r_same * e2 / nonzero(ONE - b.r * a.r_same * e2);
    DressedCoefficients {
        t_a: a.t + sigma_a,
        r_a: a.r + sigma_a,
        t_b: b.t + sigma_b,
        r_b: b.r + sigma_b,
        sigma_a,
        sigma_b,
    }
}

/// Resonance denominators never vanish for real phases since every
/// single-site reflection has modulus below one at finite coupling.
fn nonzero(den: Complex64) -> Complex64 {
    assert!(den.norm() > 0.0, "vanishing resonance denominator");
    den
}

pub fn amplitudes(pt: &DimensionlessPoint) -> AmplitudeSet {
    let a = site(pt.omega_a(), pt.model());
    let b = site(pt.omega_b(), pt.model());
    let e1 = Complex64::from_polar(1.0, pt.phase());
    let e2 = e1 * e1;
    match pt.model() {
        ModelKind::SpinExchange => spin_exchange_amplitudes(&a, &b, e1, e2),
        ModelKind::HeisenbergContact => heisenberg_amplitudes(&a, &b, e1, e2),
    }
}

fn spin_exchange_amplitudes(
    a: &SiteCoefficients,
    b: &SiteCoefficients,
    e1: Complex64,
    e2: Complex64,
) -> AmplitudeSet {
    let den = nonzero(ONE - a.r * b.r * e2);
    let t_flipb = a.t * b.f * e1 / den;
    let t_flipa = (ONE + a.t * b.r * e2 / den) * a.f * e1;
    AmplitudeSet {
        t_noflip: a.t * b.t * e1 / den,
        r_noflip: a.r + a.t * a.t * b.r * e2 / den,
        t_flipb,
        r_flipb: t_flipb * e1,
        t_flipa,
        r_flipa: t_flipa * e1.conj(),
    }
}

fn heisenberg_amplitudes(
    a: &SiteCoefficients,
    b: &SiteCoefficients,
    e1: Complex64,
    e2: Complex64,
) -> AmplitudeSet {
    let d = dress(a, b, e2);
    let den = nonzero(ONE - d.r_a * d.r_b * e2);
    // X↓ moving right just after A, and moving left just after reflecting off B.
    let right_at_a = d.t_a * e1 / den;
    let left_at_a = ONE + d.t_a * d.r_b * e2 / den;

    // After B flips, X↑ bounces between A (same spin) and B (opposite spin).
    let b_loop = nonzero(ONE - a.r_same * b.r * e2);
    // After A flips, X↑ bounces between A (opposite spin) and B (same spin).
    let a_loop = nonzero(ONE - a.r * b.r_same * e2);

    AmplitudeSet {
        t_noflip: d.t_a * d.t_b * e1 / den,
        r_noflip: d.r_a + d.t_a * d.t_a * d.r_b * e2 / den,
        t_flipb: right_at_a * b.f * (ONE + a.r_same * b.t * e2 / b_loop),
        r_flipb: right_at_a * b.f * a.t_same * e1 / b_loop,
        t_flipa: left_at_a * a.f * b.t_same * e1 / a_loop,
        r_flipa: left_at_a * a.f * (ONE + a.t * b.r_same * e2 / a_loop),
    }
}

/// Spin-exchange amplitudes keeping only paths with at most `bounces`
/// round trips between the sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedAmplitudeSet {
    pub amplitudes: AmplitudeSet,
    pub bounces: usize,
}

pub fn truncated_amplitudes(pt: &DimensionlessPoint, bounces: usize) -> Result<TruncatedAmplitudeSet> {
    let (a, b, e1, q) = bounce_terms(pt, "bounce truncation")?;
    let e2 = e1 * e1;
    let partial = |terms: usize| -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut power = ONE;
        for _ in 0..terms {
            sum += power;
            power *= q;
        }
        sum
    };
    let direct = partial(bounces + 1);
    let returning = partial(bounces);

    let t_flipb = a.t * e1 * b.f * direct;
    let t_flipa = a.f * e1 * (ONE + a.t * b.r * e2 * returning);
    Ok(TruncatedAmplitudeSet {
        amplitudes: AmplitudeSet {
            t_noflip: a.t * b.t * e1 * direct,
            r_noflip: a.r + a.t * a.t * b.r * e2 * returning,
            t_flipb,
            r_flipb: t_flipb * e1,
            t_flipa,
            r_flipa: t_flipa * e1.conj(),
        },
        bounces,
    })
}

/// Geometric upper bound on `|exact − truncated|` for each amplitude, in
/// [`AmplitudeSet::to_array`] order: the first omitted term divided by
/// `1 − |r_A r_B|`.
pub fn truncation_error_bound(pt: &DimensionlessPoint, bounces: usize) -> Result<[f64; 6]> {
    let (a, b, _, q) = bounce_terms(pt, "bounce truncation")?;
    let ratio = q.norm();
    let tail = |first_omitted: f64| first_omitted / (1.0 - ratio);
    let next = ratio.powi(bounces as i32 + 1);
    let returning = ratio.powi(bounces as i32);
    let t_noflip = tail(a.t.norm() * b.t.norm() * next);
    let r_noflip = tail(a.t.norm_sqr() * b.r.norm() * returning);
    let flipb = tail(a.t.norm() * b.f.norm() * next);
    let flipa = tail(a.f.norm() * a.t.norm() * b.r.norm() * returning);
    Ok([t_noflip, r_noflip, flipb, flipb, flipa, flipa])
}

fn bounce_terms(
    pt: &DimensionlessPoint,
    operation: &'static str,
) -> Result<(SiteCoefficients, SiteCoefficients, Complex64, Complex64)> {
    if pt.model() != ModelKind::SpinExchange {
        return Err(Error::UnsupportedModel {
            operation,
            model: pt.model(),
        });
    }
    let a = site(pt.omega_a(), pt.model());
    let b = site(pt.omega_b(), pt.model());
    let e1 = Complex64::from_polar(1.0, pt.phase());
    let q = a.r * b.r * e1 * e1;
    Ok((a, b, e1, q))
}

/// Single-site transmission seen as a rotation of the X–site spin pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteractionTime {
    /// `g τ`, in `[0, π/2)`.
    pub rotation_angle: f64,
    /// Probability that X is transmitted at all, `1/(1 + Ω²)`.
    pub transmit_probability: f64,
}

pub fn interaction_time_map(omega: f64) -> Result<InteractionTime> {
    let omega = check_coupling("omega", omega)?;
    let rotation_angle = omega.atan();
    debug_assert!(rotation_angle < FRAC_PI_2 || omega.is_infinite());
    Ok(InteractionTime {
        rotation_angle,
        transmit_probability: 1.0 / (1.0 + omega * omega),
    })
}
