//! Runs random generalized Wang instances through the reduction chain and
//! prints the count at every stage.

use tileforge::io::GenWangInstance;
use tileforge::pipeline::{run_pipeline, PipelineConfig, PipelineInput, Stage};
use tileforge::random::{random_gen_wang_instance, rng};

fn main() {
    let mut g = rng(2024);
    let cfg = PipelineConfig { stage: Stage::Irr, ..Default::default() };
    for i in 0..5 {
        let (tiles, region) = random_gen_wang_instance(&mut g);
        let out = run_pipeline(&PipelineInput::GenWang(GenWangInstance { tiles, region }), &cfg).unwrap();
        let counts: Vec<String> = out.manifest.stages.iter().map(|s| format!("{}={}", s.stage, s.count.as_ref().map_or("-".into(), |c| c.to_string()))).collect();
        println!("instance {i}: {} [{}]", counts.join(" "), if out.manifest.parsimonious() { "consistent" } else { "MISMATCH" });
    }
}
