use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::state::State;
use super::stepper::{Method, System, step};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonitorKind {
    /// Largest component of `|f(y) − f(y₀)|`.
    Drift,
    /// Largest component of `|f(y)|`.
    Absolute,
}

pub type MonitorFn = Arc<dyn Fn(&State) -> Vec<f64> + Send + Sync>;

/// A named invariant evaluated at every recorded sample.
#[derive(Clone)]
pub struct Monitor {
    pub name: String,
    pub tolerance: f64,
    pub kind: MonitorKind,
    eval: MonitorFn,
}

impl std::fmt::Debug for Monitor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Monitor")
            .field("name", &self.name)
            .field("tolerance", &self.tolerance)
            .field("kind", &self.kind)
            .finish()
    }
}

impl Monitor {
    pub fn drift(
        name: &str,
        tolerance: f64,
        f: impl Fn(&State) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Monitor {
            name: name.into(),
            tolerance,
            kind: MonitorKind::Drift,
            eval: Arc::new(f),
        }
    }

    pub fn absolute(
        name: &str,
        tolerance: f64,
        f: impl Fn(&State) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Monitor {
            name: name.into(),
            tolerance,
            kind: MonitorKind::Absolute,
            eval: Arc::new(f),
        }
    }

    pub fn values(&self, y: &State) -> Vec<f64> {
        (self.eval)(y)
    }

    fn measure(&self, y: &State, reference: &[f64]) -> f64 {
        let v = (self.eval)(y);
        match self.kind {
            MonitorKind::Drift => v
                .iter()
                .zip(reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
            MonitorKind::Absolute => v.iter().map(|a| a.abs()).fold(0.0, f64::max),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StepperConfig {
    pub method: Method,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub monitors: Vec<Monitor>,
}

impl StepperConfig {
    pub fn new(method: Method, dt: f64, t_end: f64) -> Self {
        StepperConfig {
            method,
            dt,
            t_end,
            record_every: 1,
            monitors: Vec::new(),
        }
    }

    pub fn record_every(mut self, k: usize) -> Self {
        self.record_every = k;
        self
    }

    pub fn monitor(mut self, m: Monitor) -> Self {
        self.monitors.push(m);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument(
                "record_every must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonitorSummary {
    pub name: String,
    pub kind: MonitorKind,
    pub tolerance: f64,
    pub max_drift: f64,
    pub first_violation: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halt {
    pub t: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub method: Method,
    pub dt: f64,
    pub steps: usize,
    pub t_final: f64,
    pub monitors: Vec<MonitorSummary>,
    pub max_manifold_defect: f64,
    pub halt: Option<Halt>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.monitors.iter().all(|m| m.passed)
    }

    pub fn monitor(&self, name: &str) -> Option<&MonitorSummary> {
        self.monitors.iter().find(|m| m.name == name)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    /// Monitor measurements per sample, in monitor order.
    pub monitor_values: Vec<Vec<f64>>,
    pub monitor_names: Vec<String>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&State> {
        self.states.last()
    }

    /// CSV with a `t` column, the system's state columns and one column per
    /// monitor; numbers carry 17 significant digits.
    pub fn to_csv(&self, sys: &dyn System) -> String {
        let mut cols = sys.columns();
        if cols.is_empty() {
            let n = self.states.first().map(|s| s.to_vec().len()).unwrap_or(0);
            cols = (0..n).map(|i| format!("y{i}")).collect();
        }
        let mut out = String::from("t");
        for c in cols.iter().chain(&self.monitor_names) {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, (t, y)) in self.times.iter().zip(&self.states).enumerate() {
            let _ = write!(out, "{t:.16e}");
            for v in sys.row(y).iter().chain(&self.monitor_values[i]) {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

/// Integrates `sys` from `initial` at `t = 0` to `config.t_end` with fixed
/// steps, recording every `record_every` steps and the final state.
///
/// A right-hand-side error stops the run; the partial trajectory is returned
/// with the error recorded as the halt reason.
pub fn run(
    sys: &dyn System,
    initial: &State,
    config: &StepperConfig,
) -> Result<(Trajectory, InvariantReport)> {
    config.validate()?;
    let refs: Vec<Vec<f64>> = config.monitors.iter().map(|m| m.values(initial)).collect();
    let mut traj = Trajectory {
        monitor_names: config.monitors.iter().map(|m| m.name.clone()).collect(),
        ..Default::default()
    };
    let mut summaries: Vec<MonitorSummary> = config
        .monitors
        .iter()
        .map(|m| MonitorSummary {
            name: m.name.clone(),
            kind: m.kind,
            tolerance: m.tolerance,
            max_drift: 0.0,
            first_violation: None,
            passed: true,
        })
        .collect();
    let mut max_defect: f64 = 0.0;

    let record = |t: f64, y: &State, traj: &mut Trajectory, summaries: &mut Vec<MonitorSummary>| {
        let vals: Vec<f64> = config
            .monitors
            .iter()
            .zip(&refs)
            .map(|(m, r)| m.measure(y, r))
            .collect();
        for (s, v) in summaries.iter_mut().zip(&vals) {
            s.max_drift = s.max_drift.max(*v);
            if !(*v <= s.tolerance) && s.first_violation.is_none() {
                s.first_violation = Some(t);
                s.passed = false;
            }
        }
        traj.times.push(t);
        traj.states.push(y.clone());
        traj.monitor_values.push(vals);
    };

    record(0.0, initial, &mut traj, &mut summaries);
    let n_steps = if config.t_end == 0.0 {
        0
    } else {
        (config.t_end / config.dt - 1e-9).ceil() as usize
    };
    let mut y = initial.clone();
    let mut t = 0.0;
    let mut halt = None;
    let mut done = 0;
    for k in 1..=n_steps {
        let t_next = if k == n_steps {
            config.t_end
        } else {
            k as f64 * config.dt
        };
        match step(config.method, sys, t, &y, t_next - t) {
            Ok(next) => {
                y = next;
                t = t_next;
                done = k;
                max_defect = max_defect.max(y.manifold_defect());
                if k % config.record_every == 0 || k == n_steps {
                    record(t, &y, &mut traj, &mut summaries);
                }
            }
            Err(e) => {
                if traj.times.last() != Some(&t) {
                    record(t, &y, &mut traj, &mut summaries);
                }
                let at = match &e {
                    Error::Step { t, .. } => *t,
                    _ => t,
                };
                halt = Some(Halt {
                    t: at,
                    reason: e.root().to_string(),
                });
                break;
            }
        }
    }
    let report = InvariantReport {
        method: config.method,
        dt: config.dt,
        steps: done,
        t_final: t,
        monitors: summaries,
        max_manifold_defect: max_defect,
        halt,
    };
    Ok((traj, report))
}

/// Integrates without recording and returns the final state.
pub fn integrate(
    sys: &dyn System,
    initial: &State,
    method: Method,
    dt: f64,
    t_end: f64,
) -> Result<State> {
    let n = (t_end / dt - 1e-9).ceil().max(0.0) as usize;
    let mut y = initial.clone();
    let mut t = 0.0;
    for k in 1..=n {
        let t_next = if k == n { t_end } else { k as f64 * dt };
        y = step(method, sys, t, &y, t_next - t)?;
        t = t_next;
    }
    Ok(y)
}
