use serde::{Deserialize, Serialize};

use super::{ratio_to_f64, PeriodicLattice};

/// On-disk lattice description. Field order is the serialized key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub family: String,
    #[serde(rename = "L")]
    pub linear_size: usize,
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub meta: LatticeMeta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeMeta {
    /// Exact rational, e.g. `32/9`.
    pub average_degree: String,
    pub dual_average_degree: String,
}

impl LatticeFile {
    pub(super) fn from_lattice(lat: &PeriodicLattice) -> Self {
        LatticeFile {
            family: lat.family_tag(),
            linear_size: lat.linear_size(),
            vertices: lat
                .positions()
                .iter()
                .map(|p| [ratio_to_f64(p[0]), ratio_to_f64(p[1])])
                .collect(),
            edges: lat.edges().iter().map(|e| e.endpoints).collect(),
            faces: lat.faces().to_vec(),
            meta: LatticeMeta {
                average_degree: lat.average_degree().to_string(),
                dual_average_degree: lat.dual_average_degree().to_string(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("lattice file serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
