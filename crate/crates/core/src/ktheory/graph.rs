//! Vertex-projection substitutions on directed graphs and the integer
//! matrices they induce on `Z^V`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::smith::IntMatrix;
use super::KtheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub name: String,
    pub source: String,
    pub range: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// The vertex projection `q_v`.
    Vertex,
    /// The range projection `t_h t_h^*` of an edge.
    EdgeRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub sign: i64,
    pub kind: TermKind,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub vertex: String,
    pub terms: Vec<Term>,
}

/// Images of vertex projections; unlisted vertices are fixed.
pub type Substitution = Vec<Rule>;

impl Graph {
    pub fn vertex_index(&self, name: &str) -> Result<usize, KtheoryError> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| KtheoryError::UnknownName { kind: "vertex", name: name.to_string() })
    }

    pub fn edge(&self, name: &str) -> Result<&Edge, KtheoryError> {
        self.edges
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| KtheoryError::UnknownName { kind: "edge", name: name.to_string() })
    }

    pub fn validate(&self) -> Result<(), KtheoryError> {
        for e in &self.edges {
            self.vertex_index(&e.source)?;
            self.vertex_index(&e.range)?;
        }
        Ok(())
    }

    /// Vertex whose class equals the class of a term: `[t_h t_h^*] = [t_h^* t_h] = [q_{s(h)}]`.
    fn term_class(&self, term: &Term) -> Result<usize, KtheoryError> {
        match term.kind {
            TermKind::Vertex => self.vertex_index(&term.name),
            TermKind::EdgeRange => self.vertex_index(&self.edge(&term.name)?.source),
        }
    }

    fn rule_for<'a>(&self, sub: &'a Substitution, v: usize) -> Result<Option<&'a Rule>, KtheoryError> {
        let mut found = None;
        for rule in sub {
            if self.vertex_index(&rule.vertex)? == v {
                if found.is_some() {
                    return Err(KtheoryError::Input(format!("vertex {} has two rules", rule.vertex)));
                }
                found = Some(rule);
            }
        }
        Ok(found)
    }

    fn image(&self, sub: &Substitution, v: usize) -> Result<Vec<Term>, KtheoryError> {
        Ok(match self.rule_for(sub, v)? {
            Some(rule) => rule.terms.clone(),
            None => vec![Term { sign: 1, kind: TermKind::Vertex, name: self.vertices[v].clone() }],
        })
    }

    /// Matrix on `Z^V` whose column `j` is the class of the image of `q_{v_j}`.
    pub fn substitution_matrix(&self, sub: &Substitution) -> Result<IntMatrix, KtheoryError> {
        self.validate()?;
        let n = self.vertices.len();
        let mut m = IntMatrix::zeros(n, n);
        for j in 0..n {
            for term in self.image(sub, j)? {
                let i = self.term_class(&term)?;
                let x = m.get(i, j) + BigInt::from(term.sign);
                m.set(i, j, x);
            }
        }
        Ok(m)
    }

    /// `first` followed by `second`; edge range terms are replaced by the image
    /// of the source projection, which has the same class.
    pub fn compose(&self, first: &Substitution, second: &Substitution) -> Result<Substitution, KtheoryError> {
        let mut out = Vec::new();
        for v in 0..self.vertices.len() {
            let mut terms = Vec::new();
            for term in self.image(first, v)? {
                for t in self.image(second, self.term_class(&term)?)? {
                    terms.push(Term { sign: term.sign * t.sign, ..t });
                }
            }
            out.push(Rule { vertex: self.vertices[v].clone(), terms });
        }
        Ok(out)
    }
}

/// The six-vertex graph with edges `f: v2 -> v4`, `g: v3 -> v4` and `e: v1 -> v2`
/// alongside a parallel edge `v1 -> v2` and the edges `v5 -> v2`, `v6 -> v3`,
/// `v4 -> v1`, `v4 -> v5`, `v4 -> v6`.
pub fn six_vertex_graph() -> Graph {
    let edge = |name: &str, s: &str, r: &str| Edge { name: name.into(), source: s.into(), range: r.into() };
    Graph {
        vertices: (1..=6).map(|i| format!("v{i}")).collect(),
        edges: vec![
            edge("f", "v2", "v4"),
            edge("g", "v3", "v4"),
            edge("e", "v1", "v2"),
            edge("h12", "v1", "v2"),
            edge("h52", "v5", "v2"),
            edge("h63", "v6", "v3"),
            edge("h41", "v4", "v1"),
            edge("h45", "v4", "v5"),
            edge("h46", "v4", "v6"),
        ],
    }
}

/// `q2 -> q2 + t_e t_e^*`, `q3 -> q3 - t_e t_e^*`.
pub fn moved_edge_substitution() -> Substitution {
    let term = |sign, kind, name: &str| Term { sign, kind, name: name.into() };
    vec![
        Rule { vertex: "v2".into(), terms: vec![term(1, TermKind::Vertex, "v2"), term(1, TermKind::EdgeRange, "e")] },
        Rule { vertex: "v3".into(), terms: vec![term(1, TermKind::Vertex, "v3"), term(-1, TermKind::EdgeRange, "e")] },
    ]
}
