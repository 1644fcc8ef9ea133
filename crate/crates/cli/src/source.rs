//! Side construction for the two evaluation modes.

use spinenv::analytic::ThermodynamicSubsystem;
use spinenv::channel::ChannelSource;
use spinenv::{ChannelTensor, PairModel, SubsystemModel};

use crate::config::{ExperimentConfig, Mode};
use crate::error::CliError;

pub enum Source {
    Finite(SubsystemModel<f64>),
    Thermo(ThermodynamicSubsystem<f64>),
}

impl ChannelSource<f64> for Source {
    fn channel_at(&self, t: f64) -> spinenv::Result<ChannelTensor<f64>> {
        match self {
            Source::Finite(m) => m.channel_at(t),
            Source::Thermo(m) => m.channel_at(t),
        }
    }
}

fn side(cfg: &ExperimentConfig, which: char) -> Result<Source, CliError> {
    let side = cfg.side(which);
    let spec = side.spec()?;
    Ok(match cfg.mode {
        Mode::Finite => {
            if cfg.time.max > side.n as f64 {
                log::warn!(
                    "side {which}: t_max = {} exceeds N = {}; boundary reflections reach the qubit",
                    cfg.time.max,
                    side.n
                );
            }
            Source::Finite(SubsystemModel::new(spec)?)
        }
        Mode::Thermodynamic => Source::Thermo(ThermodynamicSubsystem::new(&spec, cfg.time.max)?),
    })
}

pub fn pair(cfg: &ExperimentConfig) -> Result<PairModel<f64, Source>, CliError> {
    Ok(PairModel::new(side(cfg, 'A')?, side(cfg, 'B')?))
}
