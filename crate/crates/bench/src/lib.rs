//! Benchmark fixtures shared by the criterion targets.

use smd_core::detection::{ChannelParams, DetectionTask, ThresholdMode};
use smd_core::ModelParams;

pub fn params(beta: f64, h: f64) -> ModelParams {
    ModelParams::new(beta, h).expect("valid benchmark parameters")
}

/// Level 0 at crossover 0.3 with full observation.
pub fn zero_level_task() -> DetectionTask {
    DetectionTask::new(0.0, ChannelParams::full(0.3).expect("valid p"), ThresholdMode::DeltaScaled)
        .expect("valid level")
}
