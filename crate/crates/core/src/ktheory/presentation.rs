//! Finitely presented modules over `Z[t]` and their quotients at `t = 0`, `t = 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::Value;

use super::poly::{QPoly, ZPoly};
use super::smith::{smith_form, AbelianInvariants, IntMatrix};
use super::KtheoryError;
use crate::rational::Rational;

/// `Z[t]^n / rowspace(relations)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulePresentation {
    generators: usize,
    relations: Vec<Vec<ZPoly>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZtQuotients {
    pub at_t_equals_0: AbelianInvariants,
    pub at_t_equals_1: AbelianInvariants,
    /// Rank of the kernel of the relation map `Z^relations -> Z^n` after evaluation.
    pub relation_kernel_rank_0: usize,
    pub relation_kernel_rank_1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleReport {
    pub hypothesis_fg: bool,
    pub hypothesis_t_regular: bool,
    pub dim_m_mod_1_minus_t: usize,
    pub dim_m_mod_t: usize,
    pub isomorphic: bool,
    pub free_rank: usize,
    pub invariant_factors: Vec<String>,
}

impl ModulePresentation {
    pub fn new(generators: usize, relations: Vec<Vec<ZPoly>>) -> Result<Self, KtheoryError> {
        if relations.iter().any(|r| r.len() != generators) {
            return Err(KtheoryError::Shape(format!("every relation needs {generators} entries")));
        }
        Ok(ModulePresentation { generators, relations })
    }

    /// Relations given as coefficient lists, lowest degree first.
    pub fn from_coeffs(generators: usize, rows: &[Vec<Vec<i64>>]) -> Result<Self, KtheoryError> {
        Self::new(generators, rows.iter().map(|r| r.iter().map(|c| ZPoly::from_i64(c)).collect()).collect())
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<ZPoly>] {
        &self.relations
    }

    pub fn evaluate(&self, t: i64) -> IntMatrix {
        let t = BigInt::from(t);
        let rows = self.relations.iter().map(|r| r.iter().map(|p| p.eval(&t)).collect()).collect();
        IntMatrix::new(rows, self.generators).expect("shape checked on construction")
    }

    /// `M/tM` (evaluate at 0) and `M/(1-t)M` (evaluate at 1) as abelian groups.
    pub fn zt_quotients(&self) -> ZtQuotients {
        let (m0, m1) = (self.evaluate(0), self.evaluate(1));
        ZtQuotients {
            relation_kernel_rank_0: m0.nrows() - m0.rank(),
            relation_kernel_rank_1: m1.nrows() - m1.rank(),
            at_t_equals_0: m0.cokernel(),
            at_t_equals_1: m1.cokernel(),
        }
    }

    /// Invariant factors over `Q[t]`, monic, one per generator (zeros for free summands).
    pub fn invariant_factors(&self) -> Vec<QPoly> {
        let q: Vec<Vec<QPoly>> = self.relations.iter().map(|r| r.iter().map(ZPoly::to_q).collect()).collect();
        let mut f = qt_smith(&q, self.generators);
        f.resize(self.generators, QPoly::default());
        f
    }

    pub fn circle_theorem_check(&self) -> CircleReport {
        let factors = self.invariant_factors();
        let zero = Rational::zero();
        let one = Rational::one();
        let t_regular =
            factors.iter().filter(|f| !f.is_zero()).all(|f| !f.eval(&zero).is_zero() && !f.eval(&one).is_zero());
        let dim_at = |t: i64| {
            let m = self.evaluate(t);
            let rows: Vec<Vec<Rational>> =
                m.rows().iter().map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
            self.generators - rational_rank(rows)
        };
        let (d1, d0) = (dim_at(1), dim_at(0));
        CircleReport {
            hypothesis_fg: true,
            hypothesis_t_regular: t_regular,
            dim_m_mod_1_minus_t: d1,
            dim_m_mod_t: d0,
            isomorphic: d1 == d0,
            free_rank: factors.iter().filter(|f| f.is_zero()).count(),
            invariant_factors: factors.iter().map(|f| f.to_string()).collect(),
        }
    }

    /// `{"generators": n, "rows": [[entry]]}` where an entry is an integer or
    /// `"poly:[c0,c1,...]"`. `generators` may be omitted when there is a row.
    pub fn from_json(v: &Value) -> Result<Self, KtheoryError> {
        let bad = |m: String| KtheoryError::Input(m);
        let rows = match v.get("rows") {
            None => Vec::new(),
            Some(r) => r.as_array().ok_or_else(|| bad("rows must be an array".into()))?.clone(),
        };
        let generators = match v.get("generators") {
            Some(g) => g.as_u64().ok_or_else(|| bad("generators must be a count".into()))? as usize,
            None => rows
                .first()
                .and_then(Value::as_array)
                .map(Vec::len)
                .ok_or_else(|| bad("generators missing and no rows to infer it from".into()))?,
        };
        let relations = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| bad("each row must be an array".into()))?
                    .iter()
                    .map(parse_entry)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(generators, relations)
    }
}

/// A presentation of `Z[t]/(f_1) + ... + Z[t]/(f_n)` (a zero `f_i` gives a
/// free summand) hidden behind `ops` random elementary row and column
/// operations over `Z[t]`.
pub fn disguised_diagonal<R: Rng + ?Sized>(rng: &mut R, factors: &[ZPoly], ops: usize) -> ModulePresentation {
    let n = factors.len();
    let mut rows: Vec<Vec<ZPoly>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { factors[i].clone() } else { ZPoly::default() }).collect()).collect();
    for _ in 0..if n < 2 { 0 } else { ops } {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut c = vec![0i64; rng.gen_range(1..=2)];
        let last = c.len() - 1;
        c[last] = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let f = ZPoly::from_i64(&c);
        if rng.gen_bool(0.5) {
            let src = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(&src) {
                *x = &*x + &(&f * y);
            }
        } else {
            for row in rows.iter_mut() {
                row[i] = &row[i] + &(&f * &row[j]);
            }
        }
    }
    ModulePresentation { generators: n, relations: rows }
}

/// Parses an integer or `"poly:[c0,c1,...]"` matrix entry.
pub fn parse_entry(v: &Value) -> Result<ZPoly, KtheoryError> {
    let bad = || KtheoryError::Input(format!("bad matrix entry {v}"));
    match v {
        Value::Number(n) => {
            let x = n.as_i64().ok_or_else(bad)?;
            Ok(ZPoly::from_i64(&[x]))
        }
        Value::String(s) => {
            let body = s.strip_prefix("poly:").ok_or_else(bad)?;
            let coeffs: Vec<Value> = serde_json::from_str(body).map_err(|_| bad())?;
            let coeffs = coeffs
                .iter()
                .map(|c| match c {
                    Value::Number(n) => n.to_string().parse::<BigInt>().map_err(|_| bad()),
                    Value::String(s) => s.parse::<BigInt>().map_err(|_| bad()),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ZPoly::new(coeffs))
        }
        _ => Err(bad()),
    }
}

/// Monic diagonal of the Smith form over `Q[t]` (length `min(rows, cols)`).
pub fn qt_smith(rows: &[Vec<QPoly>], cols: usize) -> Vec<QPoly> {
    smith_form(rows, cols).diagonal().iter().map(QPoly::monic).collect()
}

/// Rank over the rationals by Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn quotients() {
        let p = ModulePresentation::from_coeffs(1, &[vec![vec![2, -2]]]).unwrap();
        let q = p.zt_quotients();
        assert_eq!(q.at_t_equals_1, AbelianInvariants::free(1));
        assert_eq!(q.at_t_equals_0.to_string(), "Z/2");
        assert_eq!(q.relation_kernel_rank_1, 1);
        let t = ModulePresentation::from_coeffs(1, &[vec![vec![0, 1]]]).unwrap().zt_quotients();
        assert_eq!((t.at_t_equals_0.to_string(), t.at_t_equals_1.to_string()), ("Z".into(), "0".into()));
        let free = ModulePresentation::new(3, vec![]).unwrap().zt_quotients();
        assert_eq!(free.at_t_equals_0, AbelianInvariants::free(3));
    }

    #[test]
    fn circle_examples() {
        let r = ModulePresentation::from_coeffs(1, &[vec![vec![-2, 0, 1]]]).unwrap().circle_theorem_check();
        assert!(r.hypothesis_t_regular && r.isomorphic);
        assert_eq!((r.dim_m_mod_1_minus_t, r.dim_m_mod_t), (0, 0));
        let r = ModulePresentation::from_coeffs(1, &[vec![vec![-1, 1]]]).unwrap().circle_theorem_check();
        assert!(!r.hypothesis_t_regular && !r.isomorphic);
        assert_eq!((r.dim_m_mod_1_minus_t, r.dim_m_mod_t), (1, 0));
        let r = ModulePresentation::new(2, vec![]).unwrap().circle_theorem_check();
        assert_eq!((r.dim_m_mod_1_minus_t, r.dim_m_mod_t, r.free_rank), (2, 2, 2));
    }

    #[test]
    fn qt_smith_examples() {
        let f = qt_smith(&[vec![QPoly::from_i64(&[-2, 0, 1])]], 1);
        assert_eq!(f, vec![QPoly::from_i64(&[-2, 0, 1])]);
        assert_eq!(qt_smith(&[vec![QPoly::default()]], 1), vec![QPoly::default()]);
    }

    #[test]
    fn json_entries() {
        let p = ModulePresentation::from_json(&json!({"rows": [["poly:[2,-2]", 0]]})).unwrap();
        assert_eq!(p.generators(), 2);
        assert_eq!(p.relations()[0][0], ZPoly::from_i64(&[2, -2]));
        assert!(ModulePresentation::from_json(&json!({"rows": [["t"]]})).is_err());
        assert!(ModulePresentation::from_json(&json!({"generators": 2, "rows": [[1]]})).is_err());
    }

    #[test]
    fn disguised_presentations_keep_their_factors() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = [ZPoly::from_i64(&[-2, 0, 1]), ZPoly::default(), ZPoly::from_i64(&[2, 1])];
        let p = disguised_diagonal(&mut rng, &f, 12);
        let got = p.invariant_factors();
        assert_eq!(got[0], QPoly::from_i64(&[1]));
        assert_eq!(got[1], QPoly::from_i64(&[-4, -2, 2, 1]));
        assert!(got[2].is_zero());
    }
}
