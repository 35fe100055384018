//! Seeded cross-check of the closed forms against the matching solve.

use std::f64::consts::PI;

use bounce_core::closed_form::{amplitudes, dressed_coefficients};
use bounce_core::oracle::{dressed_series, dressed_series_terms, solve_amplitudes_numeric};
use bounce_core::{AmplitudeSet, DimensionlessPoint, ModelKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::format_float;

pub const OMEGA_RANGE: (f64, f64) = (1e-3, 20.0);
/// Share of couplings drawn as exactly zero.
pub const ZERO_FRACTION: f64 = 0.05;
/// Target accuracy of the geometric tail in the dressed series.
pub const SERIES_TAIL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub models: Vec<ModelKind>,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: f64,
}

/// Largest value of one check and where it occurred.
#[derive(Debug, Clone)]
pub struct Worst {
    pub check: &'static str,
    pub value: f64,
    pub point: Option<DimensionlessPoint>,
}

#[derive(Debug, Clone)]
pub struct ModelSummary {
    pub model: ModelKind,
    pub checks: Vec<Worst>,
}

#[derive(Debug, Clone)]
pub struct VerifySummary {
    pub config: VerifyConfig,
    pub models: Vec<ModelSummary>,
}

impl VerifySummary {
    /// The single largest excess over the tolerance, if any check failed.
    pub fn worst_violation(&self) -> Option<(ModelKind, &Worst)> {
        self.models
            .iter()
            .flat_map(|m| m.checks.iter().map(move |w| (m.model, w)))
            .filter(|(_, w)| w.value.is_nan() || w.value > self.config.tolerance)
            .max_by(|a, b| a.1.value.total_cmp(&b.1.value))
    }

    pub fn passed(&self) -> bool {
        self.worst_violation().is_none()
    }

    pub fn render(&self) -> String {
        let c = &self.config;
        let mut s = format!(
            "verify samples={} seed={} tolerance={}\n",
            c.samples,
            c.seed,
            format_float(c.tolerance)
        );
        for m in &self.models {
            for w in &m.checks {
                s.push_str(&format!(
                    "{} {} max={}\n",
                    m.model.short_name(),
                    w.check,
                    format_float(w.value)
                ));
            }
        }
        match self.worst_violation() {
            None => s.push_str("result = PASS\n"),
            Some((model, w)) => {
                s.push_str("result = FAIL\n");
                s.push_str(&format!(
                    "worst: model={} check={} value={:?}",
                    model.short_name(),
                    w.check,
                    w.value
                ));
                if let Some(p) = &w.point {
                    s.push_str(&format!(
                        " omegaA={:?} omegaB={:?} phase={:?}",
                        p.omega_a(),
                        p.omega_b(),
                        p.phase()
                    ));
                }
                s.push('\n');
            }
        }
        s
    }
}

fn sample_omega(rng: &mut ChaCha8Rng) -> f64 {
    if rng.gen_bool(ZERO_FRACTION) {
        return 0.0;
    }
    let (lo, hi) = OMEGA_RANGE;
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Reproducible sample for one model: couplings log-uniform in
/// [`OMEGA_RANGE`] with occasional zeros, phase uniform in `[0, π)`.
pub fn sample_points(model: ModelKind, samples: u64, seed: u64) -> Vec<DimensionlessPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match model {
        ModelKind::SpinExchange => 0,
        ModelKind::HeisenbergContact => 1,
    });
    (0..samples)
        .map(|_| {
            let a = sample_omega(&mut rng);
            let b = sample_omega(&mut rng);
            let phase = rng.gen_range(0.0..PI);
            DimensionlessPoint::new(a, b, phase, model).expect("sampled point is valid")
        })
        .collect()
}

struct Tracker {
    worst: Worst,
}

impl Tracker {
    fn new(check: &'static str) -> Self {
        Tracker {
            worst: Worst {
                check,
                value: 0.0,
                point: None,
            },
        }
    }

    fn record(&mut self, value: f64, pt: &DimensionlessPoint) {
        // A NaN is the worst outcome and is never replaced.
        if self.worst.value.is_nan() {
            return;
        }
        if value.is_nan() || value > self.worst.value || self.worst.point.is_none() {
            self.worst.value = value;
            self.worst.point = Some(*pt);
        }
    }
}

/// Runs every check with `closed_form` standing in for the amplitude
/// formulas, so a deliberately broken implementation can be exercised.
pub fn run_with<F>(config: &VerifyConfig, closed_form: F) -> VerifySummary
where
    F: Fn(&DimensionlessPoint) -> AmplitudeSet,
{
    let models = config
        .models
        .iter()
        .map(|&model| {
            let mut deviation = Tracker::new("oracle_deviation");
            let mut cf_flux = Tracker::new("closed_form_flux_error");
            let mut or_flux = Tracker::new("oracle_flux_error");
            let mut series = Tracker::new("dressed_series_deviation");
            for pt in sample_points(model, config.samples, config.seed) {
                let closed = closed_form(&pt);
                cf_flux.record((closed.flux() - 1.0).abs(), &pt);
                match solve_amplitudes_numeric(&pt) {
                    Ok(numeric) => {
                        deviation.record(closed.max_deviation(&numeric), &pt);
                        or_flux.record((numeric.flux() - 1.0).abs(), &pt);
                    }
                    Err(_) => {
                        deviation.record(f64::INFINITY, &pt);
                        or_flux.record(f64::INFINITY, &pt);
                    }
                }
                if model == ModelKind::HeisenbergContact {
                    series.record(dressed_deviation(&pt), &pt);
                }
            }
            let mut checks = vec![deviation.worst, cf_flux.worst, or_flux.worst];
            if model == ModelKind::HeisenbergContact {
                checks.push(series.worst);
            }
            ModelSummary { model, checks }
        })
        .collect();
    VerifySummary {
        config: config.clone(),
        models,
    }
}

pub fn run(config: &VerifyConfig) -> VerifySummary {
    run_with(config, amplitudes)
}

/// Largest gap between the dressed coefficients and their explicit loop sum.
fn dressed_deviation(pt: &DimensionlessPoint) -> f64 {
    let (Ok(closed), Ok(terms)) = (dressed_coefficients(pt), dressed_series_terms(pt, SERIES_TAIL)) else {
        return f64::INFINITY;
    };
    let Ok(series) = dressed_series(pt, terms) else {
        return f64::INFINITY;
    };
    let closed = [
        closed.t_a,
        closed.r_a,
        closed.t_b,
        closed.r_b,
        closed.sigma_a,
        closed.sigma_b,
    ];
    closed
        .iter()
        .zip(series.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}
