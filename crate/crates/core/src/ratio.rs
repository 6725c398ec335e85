//! Exact competitive ratios and per-step ratio traces.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Which clustering objective a run is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// Maximise edges inside clusters; ratio is `opt / strategy`.
    Max,
    /// Minimise edges between clusters; ratio is `strategy / opt`.
    Min,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Max => "max",
            Objective::Min => "min",
        })
    }
}

/// Non-negative rational in lowest terms, or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ratio {
    Finite { num: u64, den: u64 },
    Infinite,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    pub const ONE: Ratio = Ratio::Finite { num: 1, den: 1 };

    /// `num / den`, with `x / 0 = inf` for `x > 0` and `0 / 0 = 1`.
    pub fn new(num: u64, den: u64) -> Self {
        match (num, den) {
            (0, 0) => Ratio::ONE,
            (_, 0) => Ratio::Infinite,
            _ => {
                let g = gcd(num, den);
                Ratio::Finite {
                    num: num / g,
                    den: den / g,
                }
            }
        }
    }

    /// Ratio of one step: `opt / strategy` for MaxCC, `strategy / opt` for
    /// MinCC.
    pub fn for_step(objective: Objective, strategy_value: u64, opt_value: u64) -> Self {
        match objective {
            Objective::Max => Ratio::new(opt_value, strategy_value),
            Objective::Min => Ratio::new(strategy_value, opt_value),
        }
    }

    /// `(num, den)`; infinity is `(1, 0)`.
    pub fn parts(self) -> (u64, u64) {
        match self {
            Ratio::Finite { num, den } => (num, den),
            Ratio::Infinite => (1, 0),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Ratio::Finite { num, den } => num as f64 / den as f64,
            Ratio::Infinite => f64::INFINITY,
        }
    }

    /// Decimal rendering with a fixed number of places, `inf` for infinity.
    pub fn render(self, places: usize) -> String {
        match self {
            Ratio::Finite { .. } => format!("{:.*}", places, self.to_f64()),
            Ratio::Infinite => "inf".to_string(),
        }
    }

    pub fn from_integer(value: u64) -> Self {
        Ratio::Finite { num: value, den: 1 }
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ratio::Infinite, Ratio::Infinite) => Ordering::Equal,
            (Ratio::Infinite, _) => Ordering::Greater,
            (_, Ratio::Infinite) => Ordering::Less,
            (Ratio::Finite { num: a, den: b }, Ratio::Finite { num: c, den: d }) => {
                (u128::from(*a) * u128::from(*d)).cmp(&(u128::from(*c) * u128::from(*b)))
            }
        }
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(3))
    }
}

/// Values after one online step. `t` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub t: usize,
    pub strategy_value: u64,
    pub opt_value: u64,
    pub ratio: Ratio,
}

/// Strategy value, optimal value and their ratio after every step of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioTrace {
    pub objective: Objective,
    pub steps: Vec<StepRecord>,
}

impl RatioTrace {
    pub fn new(objective: Objective) -> Self {
        RatioTrace {
            objective,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, strategy_value: u64, opt_value: u64) {
        let t = self.steps.len() + 1;
        self.steps.push(StepRecord {
            t,
            strategy_value,
            opt_value,
            ratio: Ratio::for_step(self.objective, strategy_value, opt_value),
        });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Earliest step attaining the largest ratio.
    pub fn worst(&self) -> Option<&StepRecord> {
        self.steps.iter().fold(None, |best: Option<&StepRecord>, s| match best {
            Some(b) if b.ratio >= s.ratio => Some(b),
            _ => Some(s),
        })
    }

    pub fn last(&self) -> Option<&StepRecord> {
        self.steps.last()
    }
}
