//! JSON map-spec documents:
//! `{"p": 2, "branches": [{"r": "1/2", "c": "0"}, {"r": "3/2", "c": "1/2"}]}`.

use serde::{Deserialize, Serialize};

use crate::map::{Branch, HydraMap};
use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub r: String,
    pub c: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpecDocument {
    pub p: u64,
    pub branches: Vec<BranchSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_condition: Option<String>,
}

fn field_rational(s: &str, field: String) -> Result<Rational> {
    s.parse().map_err(|e: Error| Error::MapSpec { field, message: e.to_string() })
}

impl MapSpecDocument {
    pub fn to_map(&self) -> Result<HydraMap> {
        let branches = self
            .branches
            .iter()
            .enumerate()
            .map(|(j, b)| {
                Ok(Branch::new(
                    field_rational(&b.r, format!("branches[{j}].r"))?,
                    field_rational(&b.c, format!("branches[{j}].c"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let map = HydraMap::new(self.p, branches)?;
        match &self.initial_condition {
            Some(z) => map.with_initial_condition(field_rational(z, "initial_condition".into())?),
            None => Ok(map),
        }
    }

    pub fn from_map(h: &HydraMap) -> Self {
        MapSpecDocument {
            p: h.p(),
            branches: h
                .branches()
                .iter()
                .map(|b| BranchSpec { r: b.r.to_string(), c: b.c.to_string() })
                .collect(),
            initial_condition: h.initial_condition().map(Rational::to_string),
        }
    }
}

pub fn parse_map_spec(text: &str) -> Result<HydraMap> {
    let doc: MapSpecDocument = serde_json::from_str(text).map_err(|e| Error::MapSpec {
        field: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    doc.to_map()
}
