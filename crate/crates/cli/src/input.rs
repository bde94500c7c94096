//! The input document: rays made of foliated cylinders, plus optional
//! closed curves described by their intersections with the cores.
//!
//! ```json
//! {
//!   "rays": [
//!     {"id": "g", "offset": 0.0,
//!      "cylinders": [{"core_id": "l1", "width": 1.0, "bands": [[1.0], [0.5, 1.0]]}]}
//!   ],
//!   "curves": [{"id": "a", "crossings": {"l1": 2}, "turnings": {"l1": 1}}]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use stretch_core::{CylinderSpec, Error as CoreError, RaySpec, TransverseCurveData};

use crate::error::{CliError, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentRepr {
    rays: Vec<RayRepr>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    curves: Vec<CurveRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RayRepr {
    id: String,
    #[serde(default)]
    offset: f64,
    cylinders: Vec<CylinderRepr>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CylinderRepr {
    core_id: String,
    width: f64,
    bands: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveRepr {
    id: String,
    #[serde(default)]
    crossings: BTreeMap<String, u64>,
    #[serde(default)]
    turnings: BTreeMap<String, u64>,
}

/// A validated input document.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub rays: Vec<RaySpec>,
    pub curves: Vec<TransverseCurveData>,
}

fn invariant(location: String, err: CoreError) -> CliError {
    let invariant = match err {
        CoreError::InvalidCylinder(msg) | CoreError::InvalidRay(msg) => msg,
        other => other.to_string(),
    };
    CliError::Invariant { location, invariant }
}

pub fn parse_document(text: &str) -> Result<Document> {
    let repr: DocumentRepr = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut rays = Vec::with_capacity(repr.rays.len());
    for (i, ray) in repr.rays.into_iter().enumerate() {
        let mut cylinders = Vec::with_capacity(ray.cylinders.len());
        for (j, c) in ray.cylinders.into_iter().enumerate() {
            let cyl = CylinderSpec::from_arcs(c.core_id, c.width, c.bands)
                .map_err(|e| invariant(format!("rays[{i}].cylinders[{j}]"), e))?;
            cylinders.push(cyl);
        }
        let ray = RaySpec::new(ray.id, ray.offset, cylinders)
            .map_err(|e| invariant(format!("rays[{i}]"), e))?;
        rays.push(ray);
    }
    let curves = repr
        .curves
        .into_iter()
        .map(|c| TransverseCurveData {
            id: c.id,
            crossings: c.crossings.into_iter().collect(),
            turnings: c.turnings.into_iter().collect(),
        })
        .collect();
    Ok(Document { rays, curves })
}

/// Pretty-printed JSON that [`parse_document`] reads back to an equal
/// document.
pub fn print_document(doc: &Document) -> String {
    let repr = DocumentRepr {
        rays: doc
            .rays
            .iter()
            .map(|r| RayRepr {
                id: r.id().to_owned(),
                offset: r.offset(),
                cylinders: r
                    .cylinders()
                    .iter()
                    .map(|c| CylinderRepr {
                        core_id: c.core_id().to_owned(),
                        width: c.width(),
                        bands: c.bands().iter().map(|b| b.arcs().to_vec()).collect(),
                    })
                    .collect(),
            })
            .collect(),
        curves: doc
            .curves
            .iter()
            .map(|c| CurveRepr {
                id: c.id.clone(),
                crossings: c.crossings.iter().cloned().collect(),
                turnings: c.turnings.iter().cloned().collect(),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&repr).expect("document serializes");
    out.push('\n');
    out
}
