use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Asymptotic constants; assertions that need them are downgraded to
    /// reports below the stated range of `q`.
    Paper,
    /// Scaled constants suitable for small `q`.
    Desk,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Caps {
    pub k4_cap: usize,
    pub alpha_cap: usize,
    pub pair_budget: u64,
    pub node_budget: u64,
    pub onan_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            k4_cap: 250,
            alpha_cap: 400,
            pair_budget: 100_000,
            node_budget: 50_000_000,
            onan_budget: 10_000_000,
        }
    }
}

/// Stand-ins for the asymptotic constants at small `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scaled {
    /// Subset size from which the density floor is asserted.
    pub m_prime: usize,
    /// Floor for `min e(X) q / |X|^2`.
    pub density_floor: f64,
    /// Base of the logarithm in the clique size thresholds.
    pub log_base: f64,
    pub delta_k: f64,
}

impl Default for Scaled {
    fn default() -> Self {
        Scaled {
            m_prime: 50,
            density_floor: 1.0 / 256.0,
            log_base: std::f64::consts::E,
            delta_k: 1.0,
        }
    }
}

/// The asymptotic constants, echoed into reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PaperConstants {
    /// `m = m_factor q^2`.
    pub m_factor: f64,
    /// Smallest `q` for which the density statement is claimed.
    pub q_min: f64,
    /// Density floor `1 / (density_denominator q)`.
    pub density_denominator: f64,
    /// `t = t_factor q log^2 q`.
    pub t_factor: f64,
}

impl Default for PaperConstants {
    fn default() -> Self {
        PaperConstants {
            m_factor: 2f64.powi(24),
            q_min: 2f64.powi(40),
            density_denominator: 256.0,
            t_factor: 2f64.powi(30),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub q: Option<u64>,
    pub master_seed: u64,
    pub profile: Profile,
    pub caps: Caps,
    pub scaled: Scaled,
    pub paper: PaperConstants,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            q: None,
            master_seed: 0,
            profile: Profile::Desk,
            caps: Caps::default(),
            scaled: Scaled::default(),
            paper: PaperConstants::default(),
            output_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        if let Some(q) = cfg.q {
            unital_ramsey::field::prime_power(q)?;
        }
        if cfg.scaled.log_base <= 1.0 {
            bail!("log_base must exceed 1");
        }
        Ok(cfg)
    }

    /// Whether asymptotic statements may be asserted at this `q`.
    pub fn in_paper_regime(&self, q: u64) -> bool {
        self.profile == Profile::Desk || q as f64 >= self.paper.q_min
    }

    /// Subset size from which the audit floor is asserted, and the floor.
    pub fn audit_thresholds(&self, q: u64) -> (usize, f64) {
        match self.profile {
            Profile::Desk => (self.scaled.m_prime, self.scaled.density_floor),
            Profile::Paper => {
                let m = self.paper.m_factor * (q * q) as f64;
                let m = if m >= usize::MAX as f64 { usize::MAX } else { m as usize };
                (m, 1.0 / self.paper.density_denominator)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        let cfg = RunConfig::parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let cfg = RunConfig::parse("q = 5\nprofile = \"paper\"\n[caps]\nk4_cap = 100\n").unwrap();
        assert_eq!(cfg.q, Some(5));
        assert_eq!(cfg.caps.k4_cap, 100);
        assert_eq!(cfg.caps.alpha_cap, 400);
        assert!(!cfg.in_paper_regime(5));
        assert_eq!(cfg.audit_thresholds(5).0, (25u64 << 24) as usize);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::parse("q = 6").is_err());
        assert!(RunConfig::parse("bogus = 1").is_err());
        assert!(RunConfig::parse("[scaled]\nlog_base = 1.0").is_err());
    }
}
