use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Proof scenarios. The first four cover subcritical powers, the rest the
/// critical curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioId {
    /// Lipschitz nonlinearity, Besov carrier, difference measured at the Sobolev-embedding exponent.
    SubcriticalUsual,
    /// Lipschitz nonlinearity, Besov carrier, difference in the improved-regularity space.
    SubcriticalBetter,
    /// Hölder nonlinearity, Sobolev carrier, Sobolev-embedding exponent.
    HolderUsual,
    /// Hölder nonlinearity, Sobolev carrier, improved-regularity space.
    HolderBetter,
    /// Plane, distributional-critical power, low regularity.
    CriticalN2Low,
    /// Plane, distributional-critical power, high regularity.
    CriticalN2High,
    /// Three dimensions, distributional-critical power.
    CriticalN3Mass,
    /// Three dimensions, energy-critical power.
    CriticalN3Energy,
    /// Four or more dimensions, energy-critical power.
    CriticalHighDim,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 9] = [
        ScenarioId::SubcriticalUsual,
        ScenarioId::SubcriticalBetter,
        ScenarioId::HolderUsual,
        ScenarioId::HolderBetter,
        ScenarioId::CriticalN2Low,
        ScenarioId::CriticalN2High,
        ScenarioId::CriticalN3Mass,
        ScenarioId::CriticalN3Energy,
        ScenarioId::CriticalHighDim,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::SubcriticalUsual => "subcritical-usual",
            ScenarioId::SubcriticalBetter => "subcritical-better",
            ScenarioId::HolderUsual => "holder-usual",
            ScenarioId::HolderBetter => "holder-better",
            ScenarioId::CriticalN2Low => "critical-n2-low",
            ScenarioId::CriticalN2High => "critical-n2-high",
            ScenarioId::CriticalN3Mass => "critical-n3-mass",
            ScenarioId::CriticalN3Energy => "critical-n3-energy",
            ScenarioId::CriticalHighDim => "critical-high-dim",
        }
    }

    pub fn is_critical(self) -> bool {
        !matches!(
            self,
            ScenarioId::SubcriticalUsual | ScenarioId::SubcriticalBetter | ScenarioId::HolderUsual | ScenarioId::HolderBetter
        )
    }
}

/// Closed-form regions: the new theorems, earlier literature, and the lists of
/// cases left open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PredicateId {
    /// Subcritical, `alpha >= 1`.
    Thm11,
    /// Subcritical, `alpha < 1`.
    Thm12,
    /// Distributional-critical power.
    Thm15,
    /// Energy-critical power.
    Thm16,
    Kato,
    FurioliTerraneo,
    Rogers,
    WinTsutsumiSub,
    WinTsutsumiCrit,
    CazenaveCrit,
    /// Subcritical cases left open by the new theorems.
    OpenSub,
    /// Critical cases left open by the new theorems.
    OpenCrit,
}

impl PredicateId {
    pub const ALL: [PredicateId; 12] = [
        PredicateId::Thm11,
        PredicateId::Thm12,
        PredicateId::Thm15,
        PredicateId::Thm16,
        PredicateId::Kato,
        PredicateId::FurioliTerraneo,
        PredicateId::Rogers,
        PredicateId::WinTsutsumiSub,
        PredicateId::WinTsutsumiCrit,
        PredicateId::CazenaveCrit,
        PredicateId::OpenSub,
        PredicateId::OpenCrit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PredicateId::Thm11 => "thm11",
            PredicateId::Thm12 => "thm12",
            PredicateId::Thm15 => "thm15",
            PredicateId::Thm16 => "thm16",
            PredicateId::Kato => "kato",
            PredicateId::FurioliTerraneo => "furioli-terraneo",
            PredicateId::Rogers => "rogers",
            PredicateId::WinTsutsumiSub => "win-tsutsumi-sub",
            PredicateId::WinTsutsumiCrit => "win-tsutsumi-crit",
            PredicateId::CazenaveCrit => "cazenave-crit",
            PredicateId::OpenSub => "open-sub",
            PredicateId::OpenCrit => "open-crit",
        }
    }

    pub fn is_theorem(self) -> bool {
        matches!(self, PredicateId::Thm11 | PredicateId::Thm12 | PredicateId::Thm15 | PredicateId::Thm16)
    }
}

macro_rules! text_id {
    ($t:ty) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $t {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                <$t>::ALL.iter().copied().find(|id| id.as_str() == s).ok_or_else(|| {
                    let known: Vec<&str> = <$t>::ALL.iter().map(|id| id.as_str()).collect();
                    format!("unknown id {s:?}; expected one of {}", known.join(", "))
                })
            }
        }
    };
}

text_id!(ScenarioId);
text_id!(PredicateId);
