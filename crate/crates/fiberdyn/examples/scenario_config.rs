//! Scenarios from flat `key = value` text, as the command-line tool reads
//! them. Prints the invariant report and the first CSV rows.

use fiberdyn::Result;
use fiberdyn::cli::{Scenario, ScenarioReport};

const CONFIG: &str = "
system.id = spin_monopole
system.params.m = 1
system.params.n = 0.5
system.params.lambda = 0.3
initial.x = 1.5, 0, 0
initial.v = 0, 0.6, 0.2
initial.s = 1, 0, 0, 0
stepper.method = liegroup
stepper.dt = 1e-3
stepper.t_end = 2
stepper.record_every = 500
";

fn main() -> Result<()> {
    let scenario = Scenario::parse(CONFIG, "example")?;
    let (traj, report) = scenario.run()?;
    for line in scenario.csv(&traj).lines().take(3) {
        println!("{line}");
    }
    let report = ScenarioReport::new(&scenario, report);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );

    match Scenario::parse(
        "system.id = monopole\nsystem.params.n = 1\ninitial.x = 1, 0, 0\ninitial.v = 0, 1, 0\nstepper.dt = 0.1\nstepper.t_end = 1\ncolour = red\n",
        "bad",
    ) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("unknown keys are rejected"),
    }
    Ok(())
}
