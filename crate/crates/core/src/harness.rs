//! Experiment plumbing shared by the command-line front end: strategy and
//! instance selection, trace files, and error classification.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::adversary::{greedy_nemesis, mincc_nemesis, occ_nemesis, InstanceError, MinccError, Variant};
use crate::format::{parse_instance, FormatError};
use crate::graph::ArrivalEvent;
use crate::random::{erdos_renyi, rng};
use crate::ratio::{Objective, Ratio, RatioTrace};
use crate::solver::SolveBudget;
use crate::strategy::{run_online, Greedy, Matching, Occ, OnlineStrategy, OptMode, RunError, StrategyError};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitKind {
    Ok = 0,
    Verification = 1,
    Usage = 2,
    Budget = 3,
}

impl ExitKind {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Run(#[from] RunError),
    #[error("malformed trace: {0}")]
    Trace(String),
}

impl From<MinccError> for HarnessError {
    fn from(e: MinccError) -> Self {
        match e {
            MinccError::Instance(e) => HarnessError::Instance(e),
            MinccError::Run(e) => HarnessError::Run(e),
        }
    }
}

impl HarnessError {
    pub fn exit_kind(&self) -> ExitKind {
        match self {
            HarnessError::Run(e) if e.is_budget() => ExitKind::Budget,
            HarnessError::Strategy(StrategyError::Solve(_) | StrategyError::NodeLimit { .. }) => ExitKind::Budget,
            HarnessError::Run(_) | HarnessError::Trace(_) => ExitKind::Verification,
            _ => ExitKind::Usage,
        }
    }
}

/// A strategy and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StrategySpec {
    Greedy,
    GreedyNp,
    Occ { gamma: f64 },
    Matching { limit: Option<usize> },
}

impl StrategySpec {
    pub fn parse(name: &str, gamma: Option<f64>) -> Result<Self, HarnessError> {
        let spec = match name {
            "greedy" => StrategySpec::Greedy,
            "greedy-np" => StrategySpec::GreedyNp,
            "occ" => StrategySpec::Occ {
                gamma: gamma.unwrap_or(crate::strategy::GAMMA_DEFAULT),
            },
            "matching" => StrategySpec::Matching { limit: None },
            other => {
                return Err(HarnessError::Usage(format!(
                    "unknown strategy `{other}` (greedy|greedy-np|occ|matching)"
                )))
            }
        };
        if gamma.is_some() && !matches!(spec, StrategySpec::Occ { .. }) {
            return Err(HarnessError::Usage("--gamma only applies to occ".into()));
        }
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            StrategySpec::Greedy => "greedy",
            StrategySpec::GreedyNp => "greedy-np",
            StrategySpec::Occ { .. } => "occ",
            StrategySpec::Matching { .. } => "matching",
        }
    }

    pub fn params(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        match self {
            StrategySpec::Occ { gamma } => {
                out.insert("gamma".into(), Value::from(*gamma));
            }
            StrategySpec::Matching { limit: Some(l) } => {
                out.insert("limit".into(), Value::from(*l));
            }
            _ => {}
        }
        out
    }

    pub fn build(&self) -> Result<Box<dyn OnlineStrategy>, HarnessError> {
        Ok(match *self {
            StrategySpec::Greedy => Box::new(Greedy::new(false)),
            StrategySpec::GreedyNp => Box::new(Greedy::new(true)),
            StrategySpec::Occ { gamma } => Box::new(Occ::new(gamma)?),
            StrategySpec::Matching { limit: None } => Box::new(Matching::new()),
            StrategySpec::Matching { limit: Some(l) } => Box::new(Matching::with_limit(l)),
        })
    }
}

/// Where the arrivals come from.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    GreedyNemesis {
        n: usize,
    },
    OccNemesis {
        gamma: f64,
        phases: u32,
        variant: Variant,
    },
    /// Adaptive; the strategy's answer shapes the instance.
    MinccNemesis {
        beta: usize,
        n: usize,
    },
    Random {
        n: usize,
        p: f64,
    },
}

impl InstanceSource {
    pub fn describe(&self) -> String {
        match self {
            InstanceSource::File(p) => format!("file:{}", p.display()),
            InstanceSource::GreedyNemesis { n } => format!("nemesis:greedy n={n}"),
            InstanceSource::OccNemesis { gamma, phases, variant } => {
                let v = if *variant == Variant::Plain {
                    "plain"
                } else {
                    "triangle"
                };
                format!("nemesis:occ gamma={gamma} phases={phases} variant={v}")
            }
            InstanceSource::MinccNemesis { beta, n } => format!("nemesis:mincc beta={beta} n={n}"),
            InstanceSource::Random { n, p } => format!("random:gnp n={n} p={p}"),
        }
    }

    fn needs_seed(&self) -> bool {
        matches!(self, InstanceSource::Random { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OptChoice {
    Exact(SolveBudget),
    Analytic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub strategy: StrategySpec,
    pub instance: InstanceSource,
    pub opt: OptChoice,
    pub objective: Objective,
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.instance.needs_seed() && self.seed.is_none() {
            return Err(HarnessError::Usage("random instances need --seed".into()));
        }
        if self.opt == OptChoice::Analytic
            && matches!(self.instance, InstanceSource::File(_) | InstanceSource::Random { .. })
        {
            return Err(HarnessError::Usage(
                "analytic optimum is only known for nemesis instances; use --opt exact".into(),
            ));
        }
        Ok(())
    }
}

/// Loads or generates the arrivals of a static instance, with its analytic
/// optimum when known.
pub fn load_instance(
    source: &InstanceSource,
    seed: Option<u64>,
) -> Result<(Vec<ArrivalEvent>, Option<Vec<u64>>), HarnessError> {
    Ok(match source {
        InstanceSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
                path: path.clone(),
                source,
            })?;
            (parse_instance(&text)?, None)
        }
        InstanceSource::GreedyNemesis { n } => {
            let inst = greedy_nemesis(*n)?;
            (inst.events, inst.analytic_opt)
        }
        InstanceSource::OccNemesis { gamma, phases, variant } => {
            let inst = occ_nemesis(*gamma, *phases, *variant)?;
            (inst.events, inst.analytic_opt)
        }
        InstanceSource::Random { n, p } => {
            if !(0.0..=1.0).contains(p) {
                return Err(HarnessError::Usage(format!("edge probability {p} outside [0, 1]")));
            }
            let seed = seed.ok_or_else(|| HarnessError::Usage("random instances need --seed".into()))?;
            (erdos_renyi(*n, *p, &mut rng(seed)).events(), None)
        }
        InstanceSource::MinccNemesis { .. } => {
            return Err(HarnessError::Usage(
                "the mincc nemesis is adaptive; run it with simulate".into(),
            ))
        }
    })
}

/// Runs one experiment and returns its trace file.
pub fn run_experiment(config: &ExperimentConfig) -> Result<TraceFile, HarnessError> {
    config.validate()?;
    let mut strategy = config.strategy.build()?;
    let trace = match &config.instance {
        InstanceSource::MinccNemesis { beta, n } => {
            let game = mincc_nemesis(*beta, *n, &mut strategy)?;
            match &config.opt {
                OptChoice::Analytic if config.objective == Objective::Min => game.trace,
                OptChoice::Analytic => {
                    // Convert the cost trace into profits via the edge counts.
                    let mut edges = 0u64;
                    let mut out = RatioTrace::new(Objective::Max);
                    for (event, step) in game.events.iter().zip(&game.trace.steps) {
                        edges += event.back_neighbors.len() as u64;
                        out.push(edges - step.strategy_value, edges - step.opt_value);
                    }
                    out
                }
                OptChoice::Exact(budget) => {
                    let mut fresh = config.strategy.build()?;
                    run_online(&mut fresh, &game.events, &OptMode::Exact(*budget), config.objective)?.trace
                }
            }
        }
        source => {
            let (events, analytic) = load_instance(source, config.seed)?;
            let opt = match &config.opt {
                OptChoice::Exact(budget) => OptMode::Exact(*budget),
                OptChoice::Analytic => OptMode::Analytic(
                    analytic.ok_or_else(|| HarnessError::Usage("no analytic optimum for this instance".into()))?,
                ),
            };
            run_online(&mut strategy, &events, &opt, config.objective)?.trace
        }
    };
    Ok(TraceFile::new(
        TraceMeta {
            strategy: config.strategy.name().to_string(),
            params: config.strategy.params(),
            instance: config.instance.describe(),
            objective: config.objective,
            seed: config.seed,
        },
        &trace,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub strategy: String,
    pub params: BTreeMap<String, Value>,
    pub instance: String,
    pub objective: Objective,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub t: usize,
    pub strategy_value: u64,
    pub opt_value: u64,
    /// Infinity is stored as `1 / 0`.
    pub ratio_num: u64,
    pub ratio_den: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceWorst {
    pub t: usize,
    /// Three decimals, or `inf`.
    pub ratio: String,
    pub ratio_num: u64,
    pub ratio_den: u64,
}

/// On-disk form of a ratio trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub meta: TraceMeta,
    pub steps: Vec<TraceStep>,
    pub worst: Option<TraceWorst>,
}

fn ratio_from_parts(num: u64, den: u64) -> Ratio {
    if den == 0 {
        Ratio::Infinite
    } else {
        Ratio::new(num, den)
    }
}

impl TraceFile {
    pub fn new(meta: TraceMeta, trace: &RatioTrace) -> Self {
        let steps = trace
            .steps
            .iter()
            .map(|s| {
                let (ratio_num, ratio_den) = s.ratio.parts();
                TraceStep {
                    t: s.t,
                    strategy_value: s.strategy_value,
                    opt_value: s.opt_value,
                    ratio_num,
                    ratio_den,
                }
            })
            .collect();
        let worst = trace.worst().map(|w| {
            let (ratio_num, ratio_den) = w.ratio.parts();
            TraceWorst {
                t: w.t,
                ratio: w.ratio.render(3),
                ratio_num,
                ratio_den,
            }
        });
        TraceFile { meta, steps, worst }
    }

    pub fn worst_ratio(&self) -> Option<Ratio> {
        self.worst.as_ref().map(|w| ratio_from_parts(w.ratio_num, w.ratio_den))
    }

    pub fn last_ratio(&self) -> Option<Ratio> {
        self.steps.last().map(|s| ratio_from_parts(s.ratio_num, s.ratio_den))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("trace serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Trace(e.to_string()))
    }

    /// Recomputes every ratio from the raw values and compares.
    pub fn check(&self) -> Result<(), HarnessError> {
        let mut trace = RatioTrace::new(self.meta.objective);
        for (i, s) in self.steps.iter().enumerate() {
            if s.t != i + 1 {
                return Err(HarnessError::Trace(format!("step {} out of sequence", s.t)));
            }
            trace.push(s.strategy_value, s.opt_value);
            let expected = trace.steps[i].ratio.parts();
            if expected != (s.ratio_num, s.ratio_den) {
                return Err(HarnessError::Trace(format!(
                    "step {}: stored ratio {}/{} but values give {}/{}",
                    s.t, s.ratio_num, s.ratio_den, expected.0, expected.1
                )));
            }
        }
        let rebuilt = TraceFile::new(self.meta.clone(), &trace);
        if rebuilt.worst != self.worst {
            return Err(HarnessError::Trace("worst step does not match the steps".into()));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,strategy_value,opt_value,ratio\n");
        for s in &self.steps {
            let ratio = ratio_from_parts(s.ratio_num, s.ratio_den).render(6);
            writeln!(out, "{},{},{},{}", s.t, s.strategy_value, s.opt_value, ratio).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(
        strategy: StrategySpec,
        instance: InstanceSource,
        opt: OptChoice,
        objective: Objective,
    ) -> ExperimentConfig {
        ExperimentConfig {
            strategy,
            instance,
            opt,
            objective,
            seed: None,
        }
    }

    #[test]
    fn greedy_nemesis_trace() {
        let cfg = config(
            StrategySpec::Greedy,
            InstanceSource::GreedyNemesis { n: 8 },
            OptChoice::Exact(SolveBudget::default()),
            Objective::Max,
        );
        let trace = run_experiment(&cfg).unwrap();
        assert_eq!(trace.worst.as_ref().unwrap().ratio, "4.000");
        assert_eq!(trace.worst_ratio(), trace.last_ratio());
        trace.check().unwrap();
        let back = TraceFile::from_json(&trace.to_json()).unwrap();
        assert_eq!(back, trace);
        assert!(trace.to_csv().lines().last().unwrap().ends_with(",4.000000"));
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let cfg = config(
            StrategySpec::Greedy,
            InstanceSource::GreedyNemesis { n: 6 },
            OptChoice::Analytic,
            Objective::Max,
        );
        let mut trace = run_experiment(&cfg).unwrap();
        trace.steps[3].opt_value += 1;
        assert!(matches!(trace.check(), Err(HarnessError::Trace(_))));
    }

    #[test]
    fn mincc_trace_in_both_objectives() {
        let cfg = config(
            StrategySpec::GreedyNp,
            InstanceSource::MinccNemesis { beta: 0, n: 30 },
            OptChoice::Analytic,
            Objective::Min,
        );
        let trace = run_experiment(&cfg).unwrap();
        assert_eq!(trace.last_ratio(), Some(Ratio::from_integer(28)));
        let exact = run_experiment(&ExperimentConfig {
            opt: OptChoice::Exact(SolveBudget::new(30, 10_000_000).unwrap()),
            ..cfg.clone()
        })
        .unwrap();
        assert_eq!(exact.steps, trace.steps);
        let max = run_experiment(&ExperimentConfig {
            objective: Objective::Max,
            ..cfg
        })
        .unwrap();
        let last = max.steps.last().unwrap();
        assert_eq!((last.strategy_value, last.opt_value), (C_28_2 + 1, C_28_2 + 28));
    }

    const C_28_2: u64 = 28 * 27 / 2;

    #[test]
    fn usage_errors() {
        let bad = StrategySpec::parse("nope", None).unwrap_err();
        assert_eq!(bad.exit_kind(), ExitKind::Usage);
        assert!(StrategySpec::parse("greedy", Some(2.0)).is_err());
        let cfg = ExperimentConfig {
            seed: None,
            ..config(
                StrategySpec::Greedy,
                InstanceSource::Random { n: 5, p: 0.5 },
                OptChoice::Exact(SolveBudget::default()),
                Objective::Max,
            )
        };
        assert_eq!(run_experiment(&cfg).unwrap_err().exit_kind(), ExitKind::Usage);
    }

    #[test]
    fn budget_errors_map_to_exit_three() {
        let cfg = config(
            StrategySpec::Greedy,
            InstanceSource::GreedyNemesis { n: 30 },
            OptChoice::Exact(SolveBudget::default()),
            Objective::Max,
        );
        assert_eq!(run_experiment(&cfg).unwrap_err().exit_kind(), ExitKind::Budget);
    }
}
