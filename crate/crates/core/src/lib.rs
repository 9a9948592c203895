pub mod arith;
pub mod baker;
pub mod cfrac;
pub mod exec;
pub mod lattice;
pub mod padic;
pub mod pipeline;
mod ser;
pub mod search;
pub mod sextic;
pub mod trib;

use serde::{Deserialize, Serialize};

/// Sign class of the constant c in T_n - 2^x 3^y = c.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Positive,
    Negative,
    Zero,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Positive, Scenario::Negative, Scenario::Zero];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Positive => "positive",
            Scenario::Negative => "negative",
            Scenario::Zero => "zero",
        }
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "positive_c" | "pos" => Ok(Scenario::Positive),
            "negative" | "negative_c" | "neg" => Ok(Scenario::Negative),
            "zero" | "zero_c" => Ok(Scenario::Zero),
            other => Err(format!("unknown scenario `{other}`")),
        }
    }
}
