//! Scenario configs: system selection, initial state, stepper and monitors.
//!
//! | key | meaning |
//! |-----|---------|
//! | `system.id` | `free`, `monopole`, `spin`, `spin_monopole`, `bmt`, `wong`, `kk` |
//! | `system.params.*` | `m`, `n`, `r_min`, `mu`, `lambda`, `e`, `g`, `k` as the system needs |
//! | `system.field.*` | `kind` (`uniform`, `gradient`, `coulomb`), `b`, `b0`, `g`, `q`; `e`, `b` for `bmt` |
//! | `system.background.*` | `kind` (`hedgehog`, `abelian_uniform`, `none`), `b` |
//! | `initial.*` | `x`, `v`, `p`, `s` (quaternion `w, a, b, c`), `z`, `u`, `frame` (6 boost/rotation coefficients) |
//! | `stepper.*` | `method` (`rk4`, `liegroup`), `dt`, `t_end`, `record_every` |
//! | `monitor.<name>` | tolerance override for a named monitor |
//! | `output.csv`, `output.report` | file names inside the output directory |
//! | `seed` | recorded in reports |
//! | `reduce.charge_tol`, `reduce.divergence_tol` | hedgehog reduction tolerances |

use serde::{Deserialize, Serialize};

use super::config::Config;
use crate::dynamics::{
    AbelianUniform, BmtParams, BmtSystem, CoulombField, DEFAULT_R_MIN, EmField, GaugeBackground,
    GradientField, Hedgehog, KkCoupledSystem, KkParams, MagneticField, MonopoleParams,
    MonopoleState, MonopoleSystem, SpinMonopoleParams, SpinMonopoleSystem, SpinParams, SpinState,
    SpinSystem, TopState, UniformField, WongParams, WongState, WongSystem, hedgehog_charge,
    helicity, mass_shell_residuals, monopole_J, spin_energy, spin_monopole_J, spin_monopole_energy,
};
use crate::integrate::{
    InvariantReport, Method, Monitor, State, StepperConfig, System, Tangent, Trajectory, run,
};
use crate::liealg::lorentz_exp;
use crate::{Error, Result, Vec3, Vec4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    Free,
    Monopole,
    Spin,
    SpinMonopole,
    Bmt,
    Wong,
    Kk,
}

impl SystemId {
    pub fn parse(s: &str) -> Option<SystemId> {
        Some(match s {
            "free" => SystemId::Free,
            "monopole" => SystemId::Monopole,
            "spin" => SystemId::Spin,
            "spin_monopole" => SystemId::SpinMonopole,
            "bmt" => SystemId::Bmt,
            "wong" => SystemId::Wong,
            "kk" => SystemId::Kk,
            _ => return None,
        })
    }
}

/// Straight-line motion: flat `[x, v]`.
#[derive(Clone, Copy, Debug)]
pub struct FreeParticle;

impl System for FreeParticle {
    fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
        let mut flat = y.flat[3..6].to_vec();
        flat.extend([0.0; 3]);
        Ok(Tangent::from_flat(flat))
    }

    fn columns(&self) -> Vec<String> {
        ["x1", "x2", "x3", "v1", "v2", "v3"]
            .map(String::from)
            .to_vec()
    }
}

/// A fully validated scenario, ready to run.
pub struct Scenario {
    pub name: String,
    pub system_id: SystemId,
    pub system: Box<dyn System + Send + Sync>,
    pub initial: State,
    pub stepper: StepperConfig,
    pub seed: u64,
    pub csv_name: String,
    pub report_name: String,
    /// Set for Wong scenarios in the hedgehog background.
    pub hedgehog: Option<WongParams>,
    /// `reduce.charge_tol`, `reduce.divergence_tol`.
    pub reduce_tolerances: (f64, f64),
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario")
            .field("name", &self.name)
            .field("system_id", &self.system_id)
            .field("stepper", &self.stepper)
            .field("seed", &self.seed)
            .finish()
    }
}

fn method(c: &Config) -> Result<Method> {
    match c.str("stepper.method").unwrap_or("rk4") {
        "rk4" => Ok(Method::Rk4),
        "liegroup" | "lie_group" | "rkmk4" => Ok(Method::LieGroupRk4),
        other => Err(c.error(
            "stepper.method",
            format!("unknown method `{other}` (rk4, liegroup)"),
        )),
    }
}

fn positive(c: &Config, key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(c.error(key, format!("must be positive, got {v}")))
    }
}

fn monopole_params(c: &Config) -> Result<MonopoleParams> {
    let p = MonopoleParams {
        m: c.f64_or("system.params.m", 1.0)?,
        n: c.require_f64("system.params.n")?,
        r_min: c.f64_or("system.params.r_min", DEFAULT_R_MIN)?,
    };
    p.validate()
        .map_err(|e| c.error("system.params", e.to_string()))?;
    Ok(p)
}

fn field(c: &Config) -> Result<Box<dyn MagneticField>> {
    let kind = c.str("system.field.kind").unwrap_or("uniform");
    Ok(match kind {
        "uniform" => Box::new(UniformField(c.require_vec3("system.field.b")?)),
        "gradient" => Box::new(GradientField {
            b0: c.vec3_or("system.field.b0", Vec3::zeros())?,
            g: c.require_f64("system.field.g")?,
        }),
        "coulomb" => Box::new(CoulombField {
            q: c.require_f64("system.field.q")?,
            r_min: c.f64_or("system.params.r_min", DEFAULT_R_MIN)?,
        }),
        other => return Err(c.error("system.field.kind", format!("unknown field `{other}`"))),
    })
}

/// Type-erased magnetic field so `SpinSystem` stays concrete.
struct DynField(Box<dyn MagneticField>);

impl MagneticField for DynField {
    fn field(&self, x: &Vec3) -> Result<Vec3> {
        self.0.field(x)
    }

    fn gradient(&self, x: &Vec3) -> Result<nalgebra::Matrix3<f64>> {
        self.0.gradient(x)
    }
}

#[derive(Clone, Copy, Debug)]
enum Background {
    Hedgehog(Hedgehog),
    Abelian(AbelianUniform),
}

impl GaugeBackground for Background {
    fn potential(&self, x: &Vec3) -> Result<crate::dynamics::Potential> {
        match self {
            Background::Hedgehog(h) => h.potential(x),
            Background::Abelian(a) => a.potential(x),
        }
    }

    fn potential_gradient(&self, x: &Vec3) -> Result<[crate::dynamics::Potential; 3]> {
        match self {
            Background::Hedgehog(h) => h.potential_gradient(x),
            Background::Abelian(a) => a.potential_gradient(x),
        }
    }
}

fn background(c: &Config, e: f64) -> Result<Background> {
    match c.str("system.background.kind").unwrap_or("none") {
        "hedgehog" => Ok(Background::Hedgehog(Hedgehog {
            e,
            r_min: c.f64_or("system.params.r_min", DEFAULT_R_MIN)?,
        })),
        "abelian_uniform" => Ok(Background::Abelian(AbelianUniform {
            b: c.require_vec3("system.background.b")?,
        })),
        "none" => Ok(Background::Abelian(AbelianUniform { b: Vec3::zeros() })),
        other => Err(c.error(
            "system.background.kind",
            format!("unknown background `{other}`"),
        )),
    }
}

type Built = (
    Box<dyn System + Send + Sync>,
    State,
    Vec<Monitor>,
    Option<WongParams>,
);

fn build_free(c: &Config) -> Result<Built> {
    let m = positive(c, "system.params.m", c.f64_or("system.params.m", 1.0)?)?;
    let x = c.require_vec3("initial.x")?;
    let v = c.require_vec3("initial.v")?;
    let y = MonopoleState::new(x, v).to_state();
    let monitors = vec![Monitor::drift("momentum", 1e-12, move |y| {
        y.flat[3..6].iter().map(|v| m * v).collect()
    })];
    Ok((Box::new(FreeParticle), y, monitors, None))
}

fn build_monopole(c: &Config) -> Result<Built> {
    let p = monopole_params(c)?;
    let st = MonopoleState::new(c.require_vec3("initial.x")?, c.require_vec3("initial.v")?);
    let monitors = vec![
        Monitor::drift("J", 1e-6, move |y| {
            monopole_J(&MonopoleState::from_state(y), &p)
                .map(|j| j.iter().copied().collect())
                .unwrap_or(vec![f64::NAN])
        }),
        Monitor::absolute("helicity", 1e-12, move |y| {
            vec![
                helicity(&MonopoleState::from_state(y), &p)
                    .map(|h| h - p.n)
                    .unwrap_or(f64::NAN),
            ]
        }),
        Monitor::drift("speed", 1e-7, |y| {
            vec![MonopoleState::from_state(y).v.norm()]
        }),
    ];
    Ok((
        Box::new(MonopoleSystem { params: p }),
        st.to_state(),
        monitors,
        None,
    ))
}

fn build_spin(c: &Config) -> Result<Built> {
    let p = SpinParams {
        m: c.f64_or("system.params.m", 1.0)?,
        mu: c.require_f64("system.params.mu")?,
        lambda: c.f64_or("system.params.lambda", 0.5)?,
    };
    p.validate()
        .map_err(|e| c.error("system.params", e.to_string()))?;
    let sys = SpinSystem {
        params: p,
        field: DynField(field(c)?),
    };
    let st = SpinState {
        x: c.vec3_or("initial.x", Vec3::zeros())?,
        p: c.vec3_or("initial.p", Vec3::zeros())?,
        s: c.group_point("initial.s")?,
    };
    let energy_field = DynField(field(c)?);
    let monitors = vec![
        Monitor::drift("energy", 1e-8, move |y| {
            vec![spin_energy(&SpinState::from_state(y), &p, &energy_field).unwrap_or(f64::NAN)]
        }),
        Monitor::drift("spin_norm", 1e-12, move |y| {
            vec![SpinState::from_state(y).spin(p.lambda).norm()]
        }),
    ];
    Ok((Box::new(sys), st.to_state(), monitors, None))
}

fn build_spin_monopole(c: &Config) -> Result<Built> {
    let p = SpinMonopoleParams {
        monopole: monopole_params(c)?,
        lambda: c.f64_or("system.params.lambda", 0.5)?,
    };
    let st = SpinState {
        x: c.require_vec3("initial.x")?,
        p: c.require_vec3("initial.v")?,
        s: c.group_point("initial.s")?,
    };
    let monitors = vec![
        Monitor::drift("J", 1e-6, move |y| {
            spin_monopole_J(&SpinState::from_state(y), &p)
                .map(|j| j.iter().copied().collect())
                .unwrap_or(vec![f64::NAN])
        }),
        Monitor::drift("energy", 1e-6, move |y| {
            vec![spin_monopole_energy(&SpinState::from_state(y), &p).unwrap_or(f64::NAN)]
        }),
    ];
    Ok((
        Box::new(SpinMonopoleSystem { params: p }),
        st.to_state(),
        monitors,
        None,
    ))
}

fn build_bmt(c: &Config) -> Result<Built> {
    let p = BmtParams {
        m: c.f64_or("system.params.m", 1.0)?,
        e: c.require_f64("system.params.e")?,
        g: c.f64_or("system.params.g", 2.0)?,
        lambda: c.f64_or("system.params.lambda", 0.5)?,
        field: EmField::from_fields(
            &c.vec3_or("system.field.e", Vec3::zeros())?,
            &c.vec3_or("system.field.b", Vec3::zeros())?,
        ),
    };
    p.validate()
        .map_err(|e| c.error("system.params", e.to_string()))?;
    let st = TopState {
        z: c.vec4("initial.z")?.unwrap_or(Vec4::zeros()),
        frame: lorentz_exp(&c.coeffs6("initial.frame")?.unwrap_or([0.0; 6])),
    };
    let (m, lambda) = (p.m, p.lambda);
    let monitors = vec![
        Monitor::absolute("velocity_norm", 1e-8, |y| {
            let u = TopState::from_state(y).velocity();
            vec![crate::liealg::mdot(&u, &u) + 1.0]
        }),
        Monitor::absolute("mass_shell", 1e-8, move |y| {
            let (a, b) = mass_shell_residuals(&TopState::from_state(y), m, lambda);
            vec![a, b]
        }),
    ];
    Ok((
        Box::new(BmtSystem { params: p }),
        st.to_state(),
        monitors,
        None,
    ))
}

fn casimir_monitor(k: Vec3, isospin: impl Fn(&State) -> Vec3 + Send + Sync + 'static) -> Monitor {
    let k2 = k.norm_squared();
    Monitor::absolute("casimir", 1e-12, move |y| {
        vec![isospin(y).norm_squared() - k2]
    })
}

fn build_wong(c: &Config) -> Result<Built> {
    let p = WongParams {
        m: positive(c, "system.params.m", c.f64_or("system.params.m", 1.0)?)?,
        e: c.require_f64("system.params.e")?,
        k: c.require_vec3("system.params.k")?,
    };
    let bg = background(c, p.e)?;
    let st = WongState {
        x: c.require_vec3("initial.x")?,
        v: c.require_vec3("initial.v")?,
        s: c.group_point("initial.s")?,
    };
    let mut monitors = vec![casimir_monitor(p.k, move |y| {
        WongState::from_state(y).isospin(&p)
    })];
    let hedgehog = matches!(bg, Background::Hedgehog(_));
    if hedgehog {
        monitors.push(Monitor::drift("charge", 1e-8, move |y| {
            let w = WongState::from_state(y);
            vec![hedgehog_charge(&w.x, &w.isospin(&p)).unwrap_or(f64::NAN)]
        }));
    }
    let sys = WongSystem {
        params: p,
        background: bg,
    };
    Ok((
        Box::new(sys),
        st.to_state(),
        monitors,
        hedgehog.then_some(p),
    ))
}

fn build_kk(c: &Config) -> Result<Built> {
    let params = KkParams {
        m: c.f64_or("system.params.m", 1.0)?,
        lambda: c.require_f64("system.params.lambda")?,
    };
    params
        .validate()
        .map_err(|e| c.error("system.params", e.to_string()))?;
    let e = c.f64_or("system.params.e", 1.0)?;
    let k = c.require_vec3("system.params.k")?;
    let sys = KkCoupledSystem {
        params,
        e,
        k,
        background: background(c, e)?,
    };
    let z = c.vec4("initial.z")?.unwrap_or(Vec4::zeros());
    let u = c.require_vec3("initial.u")?;
    let y = sys
        .initial(z, u, c.group_point("initial.s")?)
        .map_err(|e| c.error("initial.u", e.to_string()))?;
    let shell = KkCoupledSystem {
        params,
        e,
        k,
        background: sys.background,
    };
    let iso = KkCoupledSystem {
        params,
        e,
        k,
        background: sys.background,
    };
    let monitors = vec![
        Monitor::absolute("shell", 1e-8, move |y| vec![shell.shell_residual(y)]),
        casimir_monitor(k, move |y| iso.isospin(y)),
    ];
    Ok((Box::new(sys), y, monitors, None))
}

impl Scenario {
    /// Reads the scenario keys; the caller runs [`Config::finish`] after
    /// reading any command-specific keys.
    pub fn from_config(c: &Config, name: &str) -> Result<Scenario> {
        let id_text = c.require_str("system.id")?;
        let system_id = SystemId::parse(id_text)
            .ok_or_else(|| c.error("system.id", format!("unknown system `{id_text}`")))?;
        let (system, initial, mut monitors, hedgehog) = match system_id {
            SystemId::Free => build_free(c)?,
            SystemId::Monopole => build_monopole(c)?,
            SystemId::Spin => build_spin(c)?,
            SystemId::SpinMonopole => build_spin_monopole(c)?,
            SystemId::Bmt => build_bmt(c)?,
            SystemId::Wong => build_wong(c)?,
            SystemId::Kk => build_kk(c)?,
        };
        for (monitor, value) in c.section("monitor") {
            let key = format!("monitor.{monitor}");
            let tol: f64 = value
                .parse()
                .map_err(|_| c.error(&key, format!("`{value}` is not a number")))?;
            let m = monitors
                .iter_mut()
                .find(|m| m.name == monitor)
                .ok_or_else(|| {
                    c.error(
                        &key,
                        format!("system `{id_text}` has no monitor `{monitor}`"),
                    )
                })?;
            m.tolerance = tol;
        }
        let dt = positive(c, "stepper.dt", c.require_f64("stepper.dt")?)?;
        let t_end = c.require_f64("stepper.t_end")?;
        let mut stepper = StepperConfig::new(method(c)?, dt, t_end)
            .record_every(c.usize_or("stepper.record_every", 1)?);
        for m in monitors {
            stepper = stepper.monitor(m);
        }
        stepper
            .validate()
            .map_err(|e| c.error("stepper", e.to_string()))?;
        let seed = c.u64("seed")?.unwrap_or(0);
        let csv_name = c
            .str("output.csv")
            .map(String::from)
            .unwrap_or(format!("{name}.csv"));
        let report_name = c
            .str("output.report")
            .map(String::from)
            .unwrap_or(format!("{name}.report.json"));
        let reduce_tolerances = if hedgehog.is_some() {
            (
                c.f64_or("reduce.charge_tol", 1e-8)?,
                c.f64_or("reduce.divergence_tol", 1e-4)?,
            )
        } else {
            (1e-8, 1e-4)
        };
        Ok(Scenario {
            name: name.to_string(),
            system_id,
            system,
            initial,
            stepper,
            seed,
            csv_name,
            report_name,
            hedgehog,
            reduce_tolerances,
        })
    }

    /// Parses a complete scenario config, rejecting unknown keys.
    pub fn parse(text: &str, name: &str) -> Result<Scenario> {
        let c = Config::parse(text)?;
        let s = Scenario::from_config(&c, name)?;
        c.finish()?;
        Ok(s)
    }

    pub fn run(&self) -> Result<(Trajectory, InvariantReport)> {
        run(self.system.as_ref(), &self.initial, &self.stepper)
    }

    pub fn csv(&self, traj: &Trajectory) -> String {
        traj.to_csv(self.system.as_ref())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub system: SystemId,
    pub seed: u64,
    pub passed: bool,
    pub exit_code: i32,
    pub invariants: InvariantReport,
}

impl ScenarioReport {
    pub fn new(s: &Scenario, invariants: InvariantReport) -> Self {
        let exit_code = if invariants.halt.is_some() {
            super::EXIT_HALT
        } else if !invariants.passed() {
            super::EXIT_VIOLATION
        } else {
            super::EXIT_OK
        };
        ScenarioReport {
            scenario: s.name.clone(),
            system: s.system_id,
            seed: s.seed,
            passed: exit_code == super::EXIT_OK,
            exit_code,
            invariants,
        }
    }
}

/// Checks that a scenario is a Wong particle in the hedgehog background.
pub fn require_hedgehog(s: &Scenario) -> Result<WongParams> {
    s.hedgehog.ok_or_else(|| Error::Config {
        line: 0,
        msg: "reduce needs system.id = wong with system.background.kind = hedgehog".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MONOPOLE: &str = "system.id = monopole\nsystem.params.n = 1\ninitial.x = 1, 0, 0\ninitial.v = 0, 1, 0.3\nstepper.dt = 1e-3\nstepper.t_end = 1\nstepper.record_every = 100\n";

    #[test]
    fn monopole_scenario_conserves() {
        let s = Scenario::parse(MONOPOLE, "mono").unwrap();
        let (traj, rep) = s.run().unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(traj.times.len(), 11);
        let csv = s.csv(&traj);
        assert!(csv.starts_with("t,x1,x2,x3,v1,v2,v3,J,helicity,speed\n"));
    }

    #[test]
    fn unknown_key_is_rejected_with_line() {
        let text = format!("{MONOPOLE}system.params.q = 2\n");
        match Scenario::parse(&text, "x") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_monitor_is_rejected() {
        let text = format!("{MONOPOLE}monitor.energy = 1e-3\n");
        assert!(matches!(
            Scenario::parse(&text, "x"),
            Err(Error::Config { line: 8, .. })
        ));
    }

    #[test]
    fn free_particle_is_straight() {
        let text = "system.id = free\ninitial.x = 0, 0, 0\ninitial.v = 1, 2, 3\nstepper.dt = 0.25\nstepper.t_end = 1\n";
        let s = Scenario::parse(text, "free").unwrap();
        let (traj, rep) = s.run().unwrap();
        assert!(rep.passed());
        let last = traj.last().unwrap();
        assert_eq!(&last.flat[..3], &[1.0, 2.0, 3.0]);
        assert_eq!(rep.monitors[0].max_drift, 0.0);
    }
}
