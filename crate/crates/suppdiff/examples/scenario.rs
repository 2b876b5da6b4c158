//! A scenario is the JSON form of a batch of CLI operations. `run` returns the
//! report, its CSV artifacts and the exit code the binary would use.

use suppdiff::cli::{run, Scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc: Scenario = serde_json::from_str(
        r#"{
            "set": {"production": "cobb-douglas", "gamma": 1.0},
            "samples": 200,
            "grid": 12,
            "operations": [
                {"op": "analyze", "dual": [[-1.0, -4.0]], "points": [[2.0, 2.0]]},
                {"op": "scan"},
                {"op": "verify", "suite": "fact14"}
            ]
        }"#,
    )?;
    let out = run(&sc)?;
    println!("{}", out.json);
    for (index, op, csv) in &out.csv {
        println!("# operation {index} ({op})");
        print!("{csv}");
    }
    println!("exit code {}", out.code);
    Ok(())
}
