//! Exact linear algebra for K-theory comparisons: Smith forms over `Z` and
//! `Q[t]`, quotients `M/tM` and `M/(1-t)M`, graph substitution matrices and a
//! truncated dynamical model.

mod dynam;
mod graph;
mod poly;
mod presentation;
mod smith;

pub use dynam::{dynam_cokernels, shift_matrix, DynamReport};
pub use graph::{moved_edge_substitution, six_vertex_graph, Edge, Graph, Rule, Substitution, Term, TermKind};
pub use poly::{QPoly, ZPoly};
pub use presentation::{
    disguised_diagonal, parse_entry, qt_smith, rational_rank, CircleReport, ModulePresentation, ZtQuotients,
};
pub use smith::{smith_form, AbelianInvariants, EuclideanRing, IntMatrix, IntSmith, ShapeError, Smith};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KtheoryError {
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("unknown {kind} {name:?}")]
    UnknownName { kind: &'static str, name: String },
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
}

impl From<ShapeError> for KtheoryError {
    fn from(e: ShapeError) -> Self {
        KtheoryError::Shape(e.to_string())
    }
}

/// Parses `{"rows": [[int]], "cols": n}`; `cols` may be omitted when there is a row.
pub fn int_matrix_from_json(v: &serde_json::Value) -> Result<IntMatrix, KtheoryError> {
    let mut spec = serde_json::Map::new();
    if let Some(r) = v.get("rows") {
        spec.insert("rows".into(), r.clone());
    }
    if let Some(c) = v.get("cols") {
        spec.insert("generators".into(), c.clone());
    }
    let p = ModulePresentation::from_json(&serde_json::Value::Object(spec))?;
    let mut rows = Vec::new();
    for r in p.relations() {
        let mut row = Vec::new();
        for e in r {
            match e.degree() {
                None => row.push(num_bigint::BigInt::from(0)),
                Some(0) => row.push(e.coeffs()[0].clone()),
                Some(_) => return Err(KtheoryError::Input("integer matrix has a polynomial entry".into())),
            }
        }
        rows.push(row);
    }
    Ok(IntMatrix::new(rows, p.generators())?)
}
