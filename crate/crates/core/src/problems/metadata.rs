use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

const DATA: &str = include_str!("../../data/problems.toml");
const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Mono,
    Multi,
    Modified,
    Toy,
}

impl std::str::FromStr for Suite {
    type Err = crate::error::BmooError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mono" => Ok(Suite::Mono),
            "multi" => Ok(Suite::Multi),
            "modified" => Ok(Suite::Modified),
            "toy" => Ok(Suite::Toy),
            _ => Err(crate::error::BmooError::Config(format!("unknown suite `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemMeta {
    pub name: String,
    pub suite: Suite,
    pub d: usize,
    pub p: usize,
    pub q: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub best: Option<f64>,
    pub target: Option<f64>,
    pub gamma_percent: Option<f64>,
    pub ref_point: Option<Vec<f64>>,
    pub ref_volume: Option<f64>,
    /// Lower corner of the sampling box for Monte Carlo hypervolume.
    pub hv_lower: Option<Vec<f64>>,
    /// Initial design size overriding the `3d` default.
    pub n_init: Option<usize>,
}

#[derive(Deserialize)]
struct File {
    schema_version: u32,
    problem: Vec<ProblemMeta>,
}

pub fn metadata() -> &'static [ProblemMeta] {
    static META: OnceLock<Vec<ProblemMeta>> = OnceLock::new();
    META.get_or_init(|| {
        let file: File = toml::from_str(DATA).expect("bundled problem metadata parses");
        assert_eq!(file.schema_version, SCHEMA_VERSION);
        for m in &file.problem {
            assert_eq!(m.lower.len(), m.d, "{}", m.name);
            assert_eq!(m.upper.len(), m.d, "{}", m.name);
        }
        file.problem
    })
}
