use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use toric_core::decoder::Sparsifier;
use toric_core::dynamics::RateModel;
use toric_core::{Family, Sector};

use crate::CliError;

/// Either `"lo:hi:step"` / `"a,b,c"` text or a plain list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    List(Vec<f64>),
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            GridSpec::Text(s) => parse_grid(s),
            GridSpec::List(v) => Ok(v.clone()),
        }
    }
}

/// Optional JSON configuration; every key mirrors a command-line flag.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub family: Option<Family>,
    pub sector: Option<Sector>,
    #[serde(rename = "L")]
    pub linear_size: Option<usize>,
    pub sizes: Option<Vec<usize>>,
    #[serde(rename = "T")]
    pub temperatures: Option<Vec<f64>>,
    pub p_grid: Option<GridSpec>,
    pub q_grid: Option<GridSpec>,
    pub x: Option<f64>,
    pub runs: Option<usize>,
    pub sparsifier: Option<Sparsifier>,
    pub kappa: Option<f64>,
    pub hop_override: Option<bool>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub t_max: Option<f64>,
    pub samples: Option<usize>,
    pub criterion: Option<f64>,
    pub bootstrap: Option<usize>,
    pub dual: Option<bool>,
    pub simulate: Option<bool>,
    pub data: Option<PathBuf>,
    pub lattices: Option<Vec<String>>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFlags {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    pub hop_override: bool,
}

impl RateFlags {
    pub fn model(&self, t_over_j: f64) -> Result<RateModel, CliError> {
        Ok(match (self.kappa, self.hop_override) {
            (Some(k), hop) => RateModel::with_kappa(t_over_j, k, hop)?,
            (None, true) => RateModel::new(t_over_j)?,
            (None, false) => RateModel::ohmic(t_over_j)?,
        })
    }
}

/// Fully resolved settings of one invocation. Everything except the worker
/// count and the explicit output path goes into the output headers.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<Sector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub temperatures: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    pub n_runs: usize,
    pub sparsifier: Sparsifier,
    pub rates: RateFlags,
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattices: Option<Vec<(Family, Sector)>>,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// `key: value` header lines, strings unquoted.
    pub fn meta(&self) -> Vec<(String, String)> {
        let Value::Object(map) = serde_json::to_value(self).expect("config serializes") else {
            unreachable!("struct serializes to an object")
        };
        map.into_iter()
            .map(|(k, v)| {
                let text = match v {
                    Value::String(s) => s,
                    other => other.to_string(),
                };
                (k, text)
            })
            .collect()
    }

    pub fn output_path(&self, default_name: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| self.out_dir.join(default_name))
    }

    pub fn family(&self) -> Family {
        self.family.expect("family resolved before dispatch")
    }

    pub fn sector(&self) -> Sector {
        self.sector.unwrap_or(Sector::Primal)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_runs == 0 {
            return Err(CliError::Config("--runs must be at least 1".into()));
        }
        if let (Some(family), Some(sizes)) = (self.family, &self.sizes) {
            if sizes.is_empty() {
                return Err(CliError::Config("--sizes must not be empty".into()));
            }
            for &l in sizes {
                family.check_size(l)?;
            }
        }
        if let Some(grid) = &self.p_grid {
            if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::Config("--p-grid needs at least two strictly increasing values".into()));
            }
            if let Some(p) = grid.iter().find(|p| !(0.0..=0.5).contains(*p)) {
                return Err(CliError::Config(format!("--p-grid value {p} outside [0, 0.5]")));
            }
        }
        if let Some(ts) = &self.temperatures {
            if ts.is_empty() {
                return Err(CliError::Config("--T must not be empty".into()));
            }
            if let Some(t) = ts.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
                return Err(CliError::Config(format!("temperature {t} must be positive")));
            }
        }
        if let Some(q) = &self.q_grid {
            if q.is_empty() {
                return Err(CliError::Config("--q-grid must not be empty".into()));
            }
        }
        if let Some(t) = self.t_max {
            if !(t > 0.0) {
                return Err(CliError::Config(format!("--t-max {t} must be positive")));
            }
        }
        if let Some(s) = self.samples {
            if s < 2 {
                return Err(CliError::Config("--samples must be at least 2".into()));
            }
        }
        if let Some(c) = self.criterion {
            if !(c > -1.0 && c < 1.0) {
                return Err(CliError::Config(format!("--criterion {c} outside (-1, 1)")));
            }
        }
        if let Some(k) = self.rates.kappa {
            if !(k > 0.0 && k.is_finite()) {
                return Err(CliError::Config(format!("--kappa {k} must be positive")));
            }
        }
        if self.workers == Some(0) {
            return Err(CliError::Config("--workers must be at least 1".into()));
        }
        Ok(())
    }
}

fn parse_number(s: &str) -> Result<f64, CliError> {
    let s = s.trim();
    let bad = || CliError::Config(format!("cannot parse `{s}` as a number"));
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            Ok(a / b)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `"lo:hi:step"` (inclusive) or a comma list; list entries may be fractions.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, step] => {
            let (lo, hi, step) = (parse_number(lo)?, parse_number(hi)?, parse_number(step)?);
            if !(step > 0.0) || hi < lo {
                return Err(CliError::Config(format!("grid `{s}` needs lo <= hi and a positive step")));
            }
            let n = ((hi - lo) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| round12(lo + step * k as f64)).collect())
        }
        [_] => s.split(',').filter(|p| !p.trim().is_empty()).map(parse_number).collect(),
        _ => Err(CliError::Config(format!("grid `{s}` is neither lo:hi:step nor a comma list"))),
    }
}

fn round12(x: f64) -> f64 {
    format!("{x:.12e}").parse().expect("float round-trips")
}

pub fn parse_lattice_list(items: &[String]) -> Result<Vec<(Family, Sector)>, CliError> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (f, s) = item.split_once(':').unwrap_or((item, "primal"));
            Ok((f.parse::<Family>()?, s.parse::<Sector>()?))
        })
        .collect()
}

pub fn default_sizes(family: Family, base: &[usize]) -> Vec<usize> {
    if family.cell_size() == 3 {
        base.iter().map(|l| l / 16 * 15).collect()
    } else {
        base.to_vec()
    }
}

/// A grid bracketing the expected crossing of each family.
pub fn default_p_grid(family: Family) -> Vec<f64> {
    let grid = match family {
        Family::Hexagonal => "0.11:0.20:0.01",
        Family::Triangular => "0.03:0.10:0.01",
        Family::Subedge(_) => "0.03:0.08:0.005",
        _ => "0.05:0.16:0.01",
    };
    parse_grid(grid).expect("static grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.05:0.08:0.01").unwrap(), vec![0.05, 0.06, 0.07, 0.08]);
        assert_eq!(parse_grid("3, 10/3 ,4").unwrap(), vec![3.0, 10.0 / 3.0, 4.0]);
        assert!(parse_grid("0.1:0.05:0.01").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
    }

    #[test]
    fn lattice_lists() {
        let got = parse_lattice_list(&["square,union:dual".into()]).unwrap();
        assert_eq!(got, vec![(Family::Square, Sector::Primal), (Family::Union, Sector::Dual)]);
        assert!(parse_lattice_list(&["square:sideways".into()]).is_err());
    }

    #[test]
    fn reduced_sizes_follow_the_block() {
        assert_eq!(default_sizes(Family::Union, &[16, 32, 64]), vec![15, 30, 60]);
        assert_eq!(default_sizes(Family::Square, &[16]), vec![16]);
    }
}
