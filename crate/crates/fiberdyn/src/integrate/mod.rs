//! Fixed-step integrators on mixed flat/group states, with invariant monitoring.

mod run;
mod state;
mod stepper;

pub use run::{
    Halt, InvariantReport, Monitor, MonitorFn, MonitorKind, MonitorSummary, StepperConfig,
    Trajectory, integrate, run,
};
pub use state::{State, Tangent};
pub use stepper::{Method, System, liegroup_step, rk4_step, step};

use crate::Result;

/// Self-convergence ratio `|y_h − y_{h/2}| / |y_{h/2} − y_{h/4}|` at `t_end`;
/// close to 16 for a fourth-order method.
pub fn richardson_ratio(
    sys: &dyn System,
    initial: &State,
    method: Method,
    dt: f64,
    t_end: f64,
) -> Result<f64> {
    let a = integrate(sys, initial, method, dt, t_end)?;
    let b = integrate(sys, initial, method, dt / 2.0, t_end)?;
    let c = integrate(sys, initial, method, dt / 4.0, t_end)?;
    Ok(a.distance(&b) / b.distance(&c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{GroupPoint, LorentzFrame, Su2Vector, lorentz_exp, su2_exp};
    use crate::{Error, Vec3};

    struct Free;
    impl System for Free {
        fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
            Ok(Tangent {
                flat: vec![y.flat[1], 0.0],
                ..Default::default()
            })
        }
    }

    struct Oscillator;
    impl System for Oscillator {
        fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
            Ok(Tangent {
                flat: vec![y.flat[1], -y.flat[0]],
                ..Default::default()
            })
        }
    }

    /// Constant algebra velocities on both groups.
    struct Spinner {
        omega: Su2Vector,
        generator: crate::liealg::Mat4,
    }
    impl System for Spinner {
        fn rhs(&self, _t: f64, _y: &State) -> Result<Tangent> {
            Ok(Tangent {
                flat: vec![],
                su2: vec![self.omega],
                lorentz: vec![self.generator],
            })
        }
    }

    /// Rigid body with state-dependent angular velocity `ω = A·hopf(s)`.
    struct Coupled;
    impl System for Coupled {
        fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
            let x = crate::liealg::hopf_project(&y.su2[0]);
            let w = Vec3::new(x[1] + 0.3, -x[0] * x[2], 1.0 + x[0]);
            Ok(Tangent {
                flat: vec![y.flat[0] * x[2]],
                su2: vec![w],
                lorentz: vec![],
            })
        }
    }

    struct Wall;
    impl System for Wall {
        fn rhs(&self, _t: f64, y: &State) -> Result<Tangent> {
            if y.flat[0] > 0.5 {
                return Err(Error::ExclusionZone {
                    r: y.flat[0],
                    r_min: 0.5,
                });
            }
            Ok(Tangent {
                flat: vec![1.0],
                ..Default::default()
            })
        }
    }

    #[test]
    fn free_particle_is_exact() {
        let y = integrate(&Free, &State::flat(vec![1.0, 0.25]), Method::Rk4, 0.1, 1.0).unwrap();
        assert!((y.flat[0] - 1.25).abs() < 1e-15);
    }

    #[test]
    fn oscillator_is_fourth_order() {
        let y0 = State::flat(vec![1.0, 0.0]);
        let r = richardson_ratio(&Oscillator, &y0, Method::Rk4, 0.1, 2.0).unwrap();
        assert!((r - 16.0).abs() < 1.0, "{r}");
    }

    #[test]
    fn constant_velocity_is_one_parameter_subgroup() {
        let omega = Su2Vector::new(0.3, -0.8, 1.1);
        let coeffs = [0.2, -0.1, 0.4, 0.5, -0.3, 0.7];
        let sys = Spinner {
            omega,
            generator: crate::liealg::algebra_element(&coeffs),
        };
        let s0 = GroupPoint::new(0.5, 0.5, -0.5, 0.5).unwrap();
        let l0 = lorentz_exp(&[0.1, 0.0, 0.3, 0.0, 0.2, 0.0]);
        let y0 = State {
            flat: vec![],
            su2: vec![s0],
            lorentz: vec![l0],
        };
        let t = 2.0;
        let y = integrate(&sys, &y0, Method::LieGroupRk4, 0.1, t).unwrap();
        let exact = su2_exp(&(omega * t)).unwrap() * s0;
        assert!(y.su2[0].distance(&exact) < 1e-13);
        let exact_l = lorentz_exp(&coeffs.map(|c| c * t)).compose(&l0);
        assert!((y.lorentz[0].matrix() - exact_l.matrix()).amax() < 1e-12);
        assert!(y.manifold_defect() < 1e-12);
    }

    #[test]
    fn both_steppers_are_fourth_order_on_group() {
        let y0 = State {
            flat: vec![1.0],
            su2: vec![GroupPoint::IDENTITY],
            lorentz: vec![],
        };
        for m in [Method::Rk4, Method::LieGroupRk4] {
            let r = richardson_ratio(&Coupled, &y0, m, 0.05, 1.0).unwrap();
            assert!((r - 16.0).abs() < 2.0, "{m:?}: {r}");
        }
    }

    #[test]
    fn zero_length_run() {
        let cfg =
            StepperConfig::new(Method::Rk4, 0.1, 0.0)
                .monitor(Monitor::drift("x", 1e-12, |y| vec![y.flat[0]]));
        let (traj, rep) = run(&Oscillator, &State::flat(vec![1.0, 0.0]), &cfg).unwrap();
        assert_eq!(traj.times, vec![0.0]);
        assert_eq!(rep.monitors[0].max_drift, 0.0);
        assert!(rep.passed() && rep.halt.is_none());
    }

    #[test]
    fn halt_returns_partial_trajectory() {
        let cfg = StepperConfig::new(Method::Rk4, 0.1, 2.0);
        let (traj, rep) = run(&Wall, &State::flat(vec![0.0]), &cfg).unwrap();
        let h = rep.halt.expect("halted");
        assert!(h.reason.contains("exclusion"));
        assert!(*traj.times.last().unwrap() <= 0.5 + 1e-12);
        assert!(traj.times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn monitor_reports_first_violation() {
        let cfg =
            StepperConfig::new(Method::Rk4, 0.1, 1.0)
                .monitor(Monitor::drift("x", 0.3, |y| vec![y.flat[0]]));
        let (_, rep) = run(&Free, &State::flat(vec![0.0, 1.0]), &cfg).unwrap();
        let m = &rep.monitors[0];
        assert!(!m.passed);
        assert!((m.first_violation.unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn identical_runs_give_identical_csv() {
        let cfg = StepperConfig::new(Method::Rk4, 0.01, 1.0).record_every(7);
        let y0 = State::flat(vec![1.0, 0.0]);
        let a = run(&Oscillator, &y0, &cfg).unwrap().0.to_csv(&Oscillator);
        let b = run(&Oscillator, &y0, &cfg).unwrap().0.to_csv(&Oscillator);
        assert_eq!(a, b);
        assert!(a.starts_with("t,y0,y1\n"));
    }

    #[test]
    fn rk4_keeps_frames_on_group() {
        let sys = Spinner {
            omega: Su2Vector::new(1.0, 2.0, 3.0),
            generator: crate::liealg::algebra_element(&[1.0, 0.5, 0.0, 0.2, 0.0, 0.1]),
        };
        let y0 = State {
            flat: vec![],
            su2: vec![GroupPoint::IDENTITY],
            lorentz: vec![LorentzFrame::identity()],
        };
        let y = integrate(&sys, &y0, Method::Rk4, 0.3, 3.0).unwrap();
        assert!(y.manifold_defect() < 1e-12);
    }
}
