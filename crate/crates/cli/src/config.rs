use std::path::PathBuf;

use gadgetlab_core::{Caps, KindChoice};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Compile,
    Energy,
    Verify,
    Sweep,
    Swcheck,
    Bounds,
}

/// Which compilation a command runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetMode {
    /// Full multi-level reduction to a 2-local Hamiltonian.
    Full,
    /// One level of gadgets.
    Single(KindChoice),
}

impl GadgetMode {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        if s == "full" {
            return Ok(GadgetMode::Full);
        }
        KindChoice::parse(s)
            .map(GadgetMode::Single)
            .ok_or_else(|| HarnessError::Config(format!("unknown gadget kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Absolute gap Δ shared by all gadgets.
    Delta,
    /// Relative precision ε (per-term gaps).
    Epsilon,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Self, HarnessError> {
        match s {
            "delta" => Ok(Axis::Delta),
            "eps" | "epsilon" => Ok(Axis::Epsilon),
            _ => Err(HarnessError::Config(format!("unknown sweep axis `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub input: Option<PathBuf>,
    pub epsilon: f64,
    pub mode: GadgetMode,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub seed: u64,
    pub trials: usize,
    pub output: Option<PathBuf>,
    pub caps: Caps,
    /// Record zero wall time so repeated runs produce identical bytes.
    pub deterministic: bool,
}

impl RunConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            input: None,
            epsilon: 0.1,
            mode: GadgetMode::Full,
            axis: Axis::Delta,
            values: Vec::new(),
            seed: 0,
            trials: 100,
            output: None,
            caps: Caps::default(),
            deterministic: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let needs_eps = matches!(
            self.command,
            CommandKind::Compile | CommandKind::Verify | CommandKind::Swcheck
        );
        if needs_eps && !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(HarnessError::Config(format!(
                "epsilon must lie in (0, 1), found {}",
                self.epsilon
            )));
        }
        if self.command != CommandKind::Bounds && self.input.is_none() {
            return Err(HarnessError::Config("missing --input".into()));
        }
        if self.command == CommandKind::Sweep {
            validate_axis(self.axis, &self.values)?;
        }
        if self.command == CommandKind::Bounds && self.trials == 0 {
            return Err(HarnessError::Config("--trials must be positive".into()));
        }
        Ok(())
    }
}

/// Sweep values must be non-empty, finite, positive and strictly monotone.
pub fn validate_axis(axis: Axis, values: &[f64]) -> Result<(), HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config(
            "sweep needs at least one value".into(),
        ));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(HarnessError::Config(format!("invalid sweep value {v}")));
    }
    if axis == Axis::Epsilon {
        if let Some(v) = values.iter().find(|v| **v >= 1.0) {
            return Err(HarnessError::Config(format!("epsilon {v} outside (0, 1)")));
        }
    }
    let increasing = values.windows(2).all(|w| w[0] < w[1]);
    let decreasing = values.windows(2).all(|w| w[0] > w[1]);
    if !(increasing || decreasing) {
        return Err(HarnessError::Config(
            "sweep values must be strictly monotone".into(),
        ));
    }
    Ok(())
}
