//! `point`, `scan`, `truncate` and `optimize`.

use bounce_core::closed_form::{amplitudes, truncated_amplitudes};
use bounce_core::observables::{observables_from_amplitudes, side_observables};
use bounce_core::optimizer::{
    curve_probability, find_global_p_opt, optimal_concurrence, p_opt_omega_b_closed_form,
};
use bounce_core::{AmplitudeSet, ModelKind, Side};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::cli::{Format, SideArg};
use crate::error::CliError;
use crate::grid::{format_float, Axis, Cell, SweepGrid};
use crate::params::{Coord, Params, Resolved};

/// Ordered `name = value` report, rendered as text or a flat JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, ReportValue)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Num(Cell),
    Text(String),
}

impl Report {
    pub fn num(&mut self, key: impl Into<String>, v: f64) {
        self.entries.push((key.into(), ReportValue::Num(Cell::Value(v))));
    }

    pub fn cell(&mut self, key: impl Into<String>, c: Cell) {
        self.entries.push((key.into(), ReportValue::Num(c)));
    }

    pub fn text(&mut self, key: impl Into<String>, v: impl Into<String>) {
        self.entries.push((key.into(), ReportValue::Text(v.into())));
    }

    pub fn get(&self, key: &str) -> Option<&ReportValue> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                for (k, v) in &self.entries {
                    let v = match v {
                        ReportValue::Num(Cell::Value(x)) => format_float(*x),
                        ReportValue::Num(Cell::Undefined) => "undefined".into(),
                        ReportValue::Text(t) => t.clone(),
                    };
                    s.push_str(&format!("{k} = {v}\n"));
                }
                s
            }
            Format::Json => {
                let mut m = Map::new();
                for (k, v) in &self.entries {
                    let v = match v {
                        ReportValue::Num(Cell::Value(x)) if x.is_finite() => Value::from(*x),
                        ReportValue::Num(Cell::Value(x)) => Value::String(format_float(*x)),
                        ReportValue::Num(Cell::Undefined) => Value::Null,
                        ReportValue::Text(t) => Value::String(t.clone()),
                    };
                    m.insert(k.clone(), v);
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn side_suffix(side: Side) -> &'static str {
    match side {
        Side::Transmitted => "t",
        Side::Reflected => "r",
    }
}

pub fn point(model: ModelKind, params: &Params, side: SideArg) -> Result<Report, CliError> {
    let pt = params.resolve()?.point(model)?;
    let amps = amplitudes(&pt);
    let mut rep = Report::default();
    rep.text("model", model.short_name());
    rep.num("omegaA", pt.omega_a());
    rep.num("omegaB", pt.omega_b());
    rep.num("phase", pt.phase());
    rep.num("sin2kd", pt.sin2_phase());
    for (name, z) in AmplitudeSet::FIELD_NAMES.into_iter().zip(amps.to_array()) {
        rep.num(format!("{name}.re"), z.re);
        rep.num(format!("{name}.im"), z.im);
    }
    let sides: &[Side] = match side {
        SideArg::T => &[Side::Transmitted],
        SideArg::R => &[Side::Reflected],
        SideArg::Both => &[Side::Transmitted, Side::Reflected],
    };
    for &s in sides {
        let obs = side_observables(&amps, s);
        let sfx = side_suffix(s);
        rep.cell(format!("C_{sfx}"), Cell::from_option(obs.defined_concurrence()));
        rep.num(format!("P_{sfx}"), obs.probability);
        rep.cell(format!("a_{sfx}"), Cell::from_option(obs.defined_ratio()));
    }
    Ok(rep)
}

/// Observable columns accepted by `scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    Concurrence(Side),
    Probability(Side),
    Ratio(Side),
    OptConcurrence,
    OptProbability,
    OptSin2,
}

impl Observable {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        Ok(match name {
            "C_t" => Observable::Concurrence(Side::Transmitted),
            "P_t" => Observable::Probability(Side::Transmitted),
            "a_t" => Observable::Ratio(Side::Transmitted),
            "C_r" => Observable::Concurrence(Side::Reflected),
            "P_r" => Observable::Probability(Side::Reflected),
            "a_r" => Observable::Ratio(Side::Reflected),
            "C_opt" => Observable::OptConcurrence,
            "P_opt" => Observable::OptProbability,
            "sin2_opt" => Observable::OptSin2,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown observable '{other}' (expected C_t, P_t, a_t, C_r, P_r, a_r, C_opt, P_opt, sin2_opt)"
                )))
            }
        })
    }

    fn needs_phase(self) -> bool {
        !matches!(
            self,
            Observable::OptConcurrence | Observable::OptProbability | Observable::OptSin2
        )
    }
}

fn metadata(
    command: &str,
    model: ModelKind,
    fixed: &Params,
    sample: &Params,
    columns: &[String],
) -> Vec<(String, String)> {
    let units = match sample.system() {
        Ok(s) => s.description(),
        Err(_) => "",
    };
    vec![
        ("command".into(), command.into()),
        ("model".into(), model.short_name().into()),
        ("fixed".into(), fixed.describe()),
        ("units".into(), units.into()),
        ("columns".into(), columns.join("|")),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
    ]
}

fn check_axes(axes: &[Axis], fixed: &Params) -> Result<Vec<Coord>, CliError> {
    let mut coords = Vec::new();
    for axis in axes {
        let c = Coord::parse(&axis.name)?;
        if fixed.get(c).is_some() || coords.contains(&c) {
            return Err(CliError::Usage(format!("parameter '{c}' is both fixed and scanned")));
        }
        coords.push(c);
    }
    Ok(coords)
}

/// Every grid point in row-major order, the last axis varying fastest.
fn grid_points(axes: &[Axis], coords: &[Coord], fixed: &Params) -> Vec<(Vec<f64>, Params)> {
    let total: usize = axes.iter().map(|a| a.count).product();
    (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut idx = vec![0; axes.len()];
            for (i, axis) in axes.iter().enumerate().rev() {
                idx[i] = rem % axis.count;
                rem /= axis.count;
            }
            let mut p = fixed.clone();
            let mut values = Vec::with_capacity(axes.len());
            for ((axis, &c), &i) in axes.iter().zip(coords).zip(&idx) {
                let v = axis.value(i);
                p = p.with(c, v);
                values.push(v);
            }
            (values, p)
        })
        .collect()
}

fn evaluate<F>(points: &[(Vec<f64>, Params)], row: F) -> Result<Vec<Vec<Cell>>, CliError>
where
    F: Fn(&Resolved) -> Result<Vec<Cell>, CliError> + Sync,
{
    points
        .par_iter()
        .map(|(values, p)| {
            let mut cells: Vec<Cell> = values.iter().map(|&v| Cell::Value(v)).collect();
            cells.extend(row(&p.resolve()?)?);
            Ok(cells)
        })
        .collect()
}

pub fn scan(model: ModelKind, axes: &[Axis], observables: &[String], fixed: &Params) -> Result<SweepGrid, CliError> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(CliError::Usage("scan takes one or two --axis".into()));
    }
    let coords = check_axes(axes, fixed)?;
    let obs: Vec<Observable> = observables.iter().map(|s| Observable::parse(s)).collect::<Result<_, _>>()?;
    if obs.is_empty() {
        return Err(CliError::Usage("no observables requested".into()));
    }
    let needs_phase = obs.iter().any(|o| o.needs_phase());
    let needs_opt = obs.iter().any(|o| !o.needs_phase());
    if needs_opt && model != ModelKind::SpinExchange {
        return Err(bounce_core::Error::UnsupportedModel {
            operation: "phase optimization",
            model,
        }
        .into());
    }
    let points = grid_points(axes, &coords, fixed);
    // Validate the parameter set once so usage errors surface before work.
    if let Some((_, p)) = points.first() {
        p.system()?;
    }
    let rows = evaluate(&points, |r| {
        let observed = if needs_phase {
            Some(observables_from_amplitudes(&amplitudes(&r.point(model)?)))
        } else {
            None
        };
        let opt = if needs_opt {
            Some(optimal_concurrence(r.omega_a, r.omega_b)?)
        } else {
            None
        };
        Ok(obs
            .iter()
            .map(|o| match *o {
                Observable::Concurrence(s) => {
                    Cell::from_option(observed.as_ref().expect("phase observables").side(s).defined_concurrence())
                }
                Observable::Probability(s) => Cell::Value(observed.as_ref().expect("phase observables").side(s).probability),
                Observable::Ratio(s) => {
                    Cell::from_option(observed.as_ref().expect("phase observables").side(s).defined_ratio())
                }
                Observable::OptConcurrence => {
                    let rep = opt.expect("optimum");
                    // No A-flip: nothing entangled is ever produced.
                    Cell::from_option((rep.omega_a > 0.0).then_some(rep.concurrence))
                }
                Observable::OptProbability => Cell::Value(opt.expect("optimum").probability),
                Observable::OptSin2 => Cell::Value(opt.expect("optimum").phase_choice),
            })
            .collect())
    })?;
    let mut columns: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(observables.iter().cloned());
    Ok(SweepGrid {
        meta: metadata("scan", model, fixed, &points[0].1, &columns),
        axes: axes.to_vec(),
        columns,
        rows,
    })
}

pub fn truncate(model: ModelKind, bounces: &[usize], axis: &Axis, fixed: &Params) -> Result<SweepGrid, CliError> {
    if model != ModelKind::SpinExchange {
        return Err(bounce_core::Error::UnsupportedModel {
            operation: "bounce truncation",
            model,
        }
        .into());
    }
    if bounces.is_empty() {
        return Err(CliError::Usage("--n needs at least one bounce count".into()));
    }
    let axes = std::slice::from_ref(axis);
    let coords = check_axes(axes, fixed)?;
    let points = grid_points(axes, &coords, fixed);
    if let Some((_, p)) = points.first() {
        p.system()?;
    }
    let rows = evaluate(&points, |r| {
        let pt = r.point(model)?;
        let mut cells = Vec::with_capacity(2 * bounces.len() + 2);
        let mut push = |amps: &AmplitudeSet| {
            let o = side_observables(amps, Side::Transmitted);
            cells.push(Cell::from_option(o.defined_concurrence()));
            cells.push(Cell::Value(o.probability));
        };
        push(&amplitudes(&pt));
        for &n in bounces {
            push(&truncated_amplitudes(&pt, n)?.amplitudes);
        }
        Ok(cells)
    })?;
    let mut columns = vec![axis.name.clone(), "C_exact".to_string(), "P_exact".to_string()];
    for n in bounces {
        columns.push(format!("C_n{n}"));
        columns.push(format!("P_n{n}"));
    }
    Ok(SweepGrid {
        meta: metadata("truncate", model, fixed, &points[0].1, &columns),
        axes: axes.to_vec(),
        columns,
        rows,
    })
}

pub fn optimize_popt() -> Report {
    let opt = find_global_p_opt();
    let closed_b = p_opt_omega_b_closed_form();
    let closed_p = curve_probability(closed_b);
    let mut rep = Report::default();
    rep.num("omegaA", opt.omega_a);
    rep.num("omegaB", opt.omega_b);
    rep.num("sin2kd", opt.sin2);
    rep.num("C", 1.0);
    rep.num("P", opt.probability);
    rep.num("omegaB_closed_form", closed_b);
    rep.num("P_closed_form", closed_p);
    rep.num("delta_omegaB", opt.omega_b - closed_b);
    rep.num("delta_P", opt.probability - closed_p);
    rep.num("iterations", opt.iterations as f64);
    rep
}

pub fn optimize_report(model: ModelKind, params: &Params) -> Result<Report, CliError> {
    if model != ModelKind::SpinExchange {
        return Err(bounce_core::Error::UnsupportedModel {
            operation: "phase optimization",
            model,
        }
        .into());
    }
    let r = params.resolve()?;
    let rep = optimal_concurrence(r.omega_a, r.omega_b)?;
    let mut out = Report::default();
    out.num("omegaA", rep.omega_a);
    out.num("omegaB", rep.omega_b);
    out.text("regime", rep.regime.to_string());
    out.num("sin2kd", rep.phase_choice);
    out.cell("C", Cell::from_option((rep.omega_a > 0.0).then_some(rep.concurrence)));
    out.num("P", rep.probability);
    Ok(out)
}
