//! Brute-force solution of the scattering problem.
//!
//! Each channel's wave function is a pair of plane waves in each of the three
//! regions. Matching value and derivative jump at both sites gives a 12×12
//! linear system, solved densely. Nothing here uses the closed forms; the
//! two routes are compared by the test suite and the `verify` command.
//!
//! With ħ = m = 1, `−½u'' + g V δ(x − x₀) u = E u` integrates to
//! `u'(x₀⁺) − u'(x₀⁻) = 2 k Ω V u(x₀)`, where `V` is the spin coupling matrix
//! of the site restricted to the open channels.

use nalgebra::{SMatrix, SVector};
use num_complex::Complex64;

use crate::error::{check_coupling, Error, Result};
use crate::types::{AmplitudeSet, Channel, DimensionlessPoint, ModelKind, SiteCoefficients};

const N: usize = 12;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Systems whose 1-norm condition number exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest acceptable `‖Mx − b‖∞` after the solve.
pub const MAX_RESIDUAL: f64 = 1e-9;

/// Which site of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Site {
    A,
    B,
}

/// Plane-wave coefficient of one channel.
///
/// Left region: `I e^{ik(x+d/2)} + R e^{−ik(x+d/2)}`; middle:
/// `A⁺ e^{ik(x+d/2)} + A⁻ e^{−ik(x+d/2)}`; right: `T e^{ik(x−d/2)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    Reflected,
    MiddleRight,
    MiddleLeft,
    Transmitted,
}

impl Unknown {
    pub const ALL: [Unknown; 4] = [
        Unknown::Reflected,
        Unknown::MiddleRight,
        Unknown::MiddleLeft,
        Unknown::Transmitted,
    ];

    /// Column of this unknown for a given channel.
    pub fn column(self, channel: Channel) -> usize {
        4 * channel.index()
            + match self {
                Unknown::Reflected => 0,
                Unknown::MiddleRight => 1,
                Unknown::MiddleLeft => 2,
                Unknown::Transmitted => 3,
            }
    }
}

/// Spin coupling matrix of a site on (NoFlip, FlipB, FlipA).
///
/// Spin exchange only connects the incident channel with the channel in
/// which that site is flipped. For `σ·σ = 2·SWAP − 1` a pair of equal spins
/// sees +1, and an opposite pair sees −1 on the diagonal and 2 off it.
pub fn coupling_matrix(model: ModelKind, site: Site) -> [[f64; 3]; 3] {
    match (model, site) {
        (ModelKind::SpinExchange, Site::A) => [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
        (ModelKind::SpinExchange, Site::B) => [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
        (ModelKind::HeisenbergContact, Site::A) => {
            [[-1.0, 0.0, 2.0], [0.0, 1.0, 0.0], [2.0, 0.0, -1.0]]
        }
        (ModelKind::HeisenbergContact, Site::B) => {
            [[-1.0, 2.0, 0.0], [2.0, -1.0, 0.0], [0.0, 0.0, 1.0]]
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSystem {
    pub point: DimensionlessPoint,
    pub matrix: SMatrix<Complex64, N, N>,
    pub rhs: SVector<Complex64, N>,
}

/// Rows per channel: value and jump at A, value and jump at B.
pub fn build_matching_system(pt: &DimensionlessPoint) -> MatchingSystem {
    let mut m = SMatrix::<Complex64, N, N>::zeros();
    let mut rhs = SVector::<Complex64, N>::zeros();
    let e = Complex64::from_polar(1.0, pt.phase());
    let e_inv = e.conj();
    let va = coupling_matrix(pt.model(), Site::A);
    let vb = coupling_matrix(pt.model(), Site::B);
    let col = |u: Unknown, c: Channel| u.column(c);

    for ch in Channel::ALL {
        let incident = if ch == Channel::NoFlip { 1.0 } else { 0.0 };
        let row = 4 * ch.index();

        // x = −d/2: A⁺ + A⁻ = I + R
        m[(row, col(Unknown::MiddleRight, ch))] += re(1.0);
        m[(row, col(Unknown::MiddleLeft, ch))] += re(1.0);
        m[(row, col(Unknown::Reflected, ch))] -= re(1.0);
        rhs[row] = re(incident);

        // i(A⁺ − A⁻) − i(I − R) = 2Ω_A Σ V_A (A⁺ + A⁻)
        let row = row + 1;
        m[(row, col(Unknown::MiddleRight, ch))] += I;
        m[(row, col(Unknown::MiddleLeft, ch))] -= I;
        m[(row, col(Unknown::Reflected, ch))] += I;
        for other in Channel::ALL {
            let g = 2.0 * pt.omega_a() * va[ch.index()][other.index()];
            m[(row, col(Unknown::MiddleRight, other))] -= re(g);
            m[(row, col(Unknown::MiddleLeft, other))] -= re(g);
        }
        rhs[row] = I * incident;

        // x = +d/2: T = A⁺ e^{iφ} + A⁻ e^{−iφ}
        let row = row + 1;
        m[(row, col(Unknown::Transmitted, ch))] += re(1.0);
        m[(row, col(Unknown::MiddleRight, ch))] -= e;
        m[(row, col(Unknown::MiddleLeft, ch))] -= e_inv;

        // iT − i(A⁺ e^{iφ} − A⁻ e^{−iφ}) = 2Ω_B Σ V_B T
        let row = row + 1;
        m[(row, col(Unknown::Transmitted, ch))] += I;
        m[(row, col(Unknown::MiddleRight, ch))] -= I * e;
        m[(row, col(Unknown::MiddleLeft, ch))] += I * e_inv;
        for other in Channel::ALL {
            let g = 2.0 * pt.omega_b() * vb[ch.index()][other.index()];
            m[(row, col(Unknown::Transmitted, other))] -= re(g);
        }
    }

    MatchingSystem {
        point: *pt,
        matrix: m,
        rhs,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchingSolution {
    pub point: DimensionlessPoint,
    pub values: SVector<Complex64, N>,
    /// 1-norm condition number of the matrix.
    pub condition: f64,
    pub residual: f64,
}

impl MatchingSystem {
    pub fn solve(&self) -> Result<MatchingSolution> {
        let fail = |condition: f64, residual: f64| Error::Numeric {
            point: self.point,
            condition,
            residual,
        };
        let lu = self.matrix.lu();
        let inverse = lu.try_inverse().ok_or_else(|| fail(f64::INFINITY, f64::NAN))?;
        let condition = norm_1(&self.matrix) * norm_1(&inverse);
        let values = lu.solve(&self.rhs).ok_or_else(|| fail(condition, f64::NAN))?;
        let residual = self.residual(&values);
        let within = |x: f64, limit: f64| x.partial_cmp(&limit).is_some_and(|o| o.is_le());
        if !within(condition, MAX_CONDITION) || !within(residual, MAX_RESIDUAL) {
            return Err(fail(condition, residual));
        }
        Ok(MatchingSolution {
            point: self.point,
            values,
            condition,
            residual,
        })
    }

    /// `‖M x − b‖∞`.
    pub fn residual(&self, x: &SVector<Complex64, N>) -> f64 {
        (self.matrix * x - self.rhs)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn norm_1(m: &SMatrix<Complex64, N, N>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl MatchingSolution {
    pub fn coefficient(&self, unknown: Unknown, channel: Channel) -> Complex64 {
        self.values[unknown.column(channel)]
    }

    pub fn amplitudes(&self) -> AmplitudeSet {
        let t = |c| self.coefficient(Unknown::Transmitted, c);
        let r = |c| self.coefficient(Unknown::Reflected, c);
        AmplitudeSet {
            t_noflip: t(Channel::NoFlip),
            r_noflip: r(Channel::NoFlip),
            t_flipb: t(Channel::FlipB),
            r_flipb: r(Channel::FlipB),
            t_flipa: t(Channel::FlipA),
            r_flipa: r(Channel::FlipA),
        }
    }

    /// Largest jump of a reconstructed wave function across either site.
    pub fn continuity_defect(&self) -> f64 {
        let e = Complex64::from_polar(1.0, self.point.phase());
        Channel::ALL
            .iter()
            .map(|&ch| {
                let incident = if ch == Channel::NoFlip { 1.0 } else { 0.0 };
                let r = self.coefficient(Unknown::Reflected, ch);
                let up = self.coefficient(Unknown::MiddleRight, ch);
                let down = self.coefficient(Unknown::MiddleLeft, ch);
                let t = self.coefficient(Unknown::Transmitted, ch);
                let at_a = (incident + r - (up + down)).norm();
                let at_b = (up * e + down * e.conj() - t).norm();
                at_a.max(at_b)
            })
            .fold(0.0, f64::max)
    }
}

pub fn solve_amplitudes_numeric(pt: &DimensionlessPoint) -> Result<AmplitudeSet> {
    Ok(build_matching_system(pt).solve()?.amplitudes())
}

/// Site coefficients from a numerical solve of one delta site in isolation.
pub fn solve_site_numeric(omega: f64, model: ModelKind) -> Result<SiteCoefficients> {
    let omega = check_coupling("omega", omega)?;
    // X and site with opposite spins: the pair (X↓ S↑, X↑ S↓), coupled
    // through the 2×2 block of the site matrix.
    let full = coupling_matrix(model, Site::A);
    let pair = [[full[0][0], full[0][2]], [full[2][0], full[2][2]]];
    let [t, f_t, r, f_r] = solve_single_delta(omega, pair);
    debug_assert!((f_t - f_r).norm() < 1e-12);
    // Aligned spins: the FlipB row of site A is such a configuration.
    let [t_same, _, r_same, _] = solve_single_delta(omega, [[full[1][1], 0.0], [0.0, 0.0]]);
    Ok(SiteCoefficients {
        t,
        r,
        f: f_t,
        t_same,
        r_same,
    })
}

/// Returns `[T₀, T₁, R₀, R₁]` for unit incidence in channel 0 on a delta at
/// the origin, waves referenced to `x = 0`.
fn solve_single_delta(omega: f64, v: [[f64; 2]; 2]) -> [Complex64; 4] {
    // Unknowns: T₀, T₁, R₀, R₁.
    let mut m = SMatrix::<Complex64, 4, 4>::zeros();
    let mut rhs = SVector::<Complex64, 4>::zeros();
    for c in 0..2 {
        let incident = if c == 0 { 1.0 } else { 0.0 };
        // T = I + R
        m[(2 * c, c)] = re(1.0);
        m[(2 * c, 2 + c)] = re(-1.0);
        rhs[2 * c] = re(incident);
        // iT − i(I − R) = 2Ω Σ V T
        m[(2 * c + 1, c)] += I;
        m[(2 * c + 1, 2 + c)] += I;
        for other in 0..2 {
            m[(2 * c + 1, other)] -= re(2.0 * omega * v[c][other]);
        }
        rhs[2 * c + 1] = I * incident;
    }
    let x = m
        .lu()
        .solve(&rhs)
        .expect("single delta system is never singular");
    [x[0], x[1], x[2], x[3]]
}

/// Dressed model-2 coefficients `(t̃_A, r̃_A, t̃_B, r̃_B, Σ_A, Σ_B)` from an
/// explicit sum of `terms` flip-and-return loops built on numerically solved
/// site coefficients.
pub fn dressed_series(pt: &DimensionlessPoint, terms: usize) -> Result<[Complex64; 6]> {
    if pt.model() != ModelKind::HeisenbergContact {
        return Err(Error::UnsupportedModel {
            operation: "dressed coefficients",
            model: pt.model(),
        });
    }
    let a = solve_site_numeric(pt.omega_a(), pt.model())?;
    let b = solve_site_numeric(pt.omega_b(), pt.model())?;
    let e2 = Complex64::from_polar(1.0, 2.0 * pt.phase());
    let loop_sum = |flip: Complex64, own_r: Complex64, partner_r_same: Complex64| {
        let gain = own_r * partner_r_same * e2;
        let mut term = flip * flip * partner_r_same * e2;
        let mut sum = Complex64::new(0.0, 0.0);
        for _ in 0..terms {
            sum += term;
            term *= gain;
        }
        sum
    };
    let sigma_a = loop_sum(a.f, a.r, b.r_same);
    let sigma_b = loop_sum(b.f, b.r, a.r_same);
    Ok([a.t + sigma_a, a.r + sigma_a, b.t + sigma_b, b.r + sigma_b, sigma_a, sigma_b])
}

/// Number of loop terms needed before the geometric tail of
/// [`dressed_series`] drops below `tol`.
pub fn dressed_series_terms(pt: &DimensionlessPoint, tol: f64) -> Result<usize> {
    let a = solve_site_numeric(pt.omega_a(), pt.model())?;
    let b = solve_site_numeric(pt.omega_b(), pt.model())?;
    let gain = (a.r.norm() * b.r_same.norm()).max(b.r.norm() * a.r_same.norm());
    if gain == 0.0 {
        return Ok(1);
    }
    let terms = ((tol * (1.0 - gain)).ln() / gain.ln()).ceil();
    Ok((terms.max(1.0) as usize).max(50))
}
