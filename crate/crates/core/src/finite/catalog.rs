//! Small scaled inverse semigroups used as fixtures and by `verify`.

use super::{FiniteInverseSemigroup, FiniteScale, Result, ScaledSemigroup};
use crate::rational::{int, ratio, Rational};

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Brandt semigroup `B_n` of matrix units with `N(e_ij) = w_i / w_j`.
pub fn brandt(weights: &[Rational]) -> Result<ScaledSemigroup> {
    let n = weights.len();
    let mut labels = vec!["0".to_string()];
    let mut pairs = vec![];
    for i in 0..n {
        for j in 0..n {
            labels.push(format!("e{}{}", i + 1, j + 1));
            pairs.push((i, j));
        }
    }
    let index = |i: usize, j: usize| 1 + i * n + j;
    let m = labels.len();
    let mut table = vec![vec![0; m]; m];
    for (x, &(i, j)) in pairs.iter().enumerate() {
        for (y, &(k, l)) in pairs.iter().enumerate() {
            if j == k {
                table[x + 1][y + 1] = index(i, l);
            }
        }
    }
    let s = FiniteInverseSemigroup::new(labels, Some(0), table)?;
    let mut values = vec![int(1)];
    values.extend(pairs.iter().map(|&(i, j)| &weights[i] / &weights[j]));
    let scale = FiniteScale::from_values(&s, values)?;
    ScaledSemigroup::new(s, scale)
}

/// A chain of `k` idempotents `p1 > p2 > ... > pk` (no zero).
pub fn chain(k: usize) -> ScaledSemigroup {
    let labels = (1..=k).map(|i| format!("p{i}")).collect();
    let table = (0..k).map(|i| (0..k).map(|j| i.max(j)).collect()).collect();
    ScaledSemigroup::trivial(FiniteInverseSemigroup::new(labels, None, table).expect("chain is a semilattice"))
}

/// `{0, p, q, 1}` with `pq = 0`.
pub fn two_orthogonal() -> ScaledSemigroup {
    let table = vec![vec![0, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 2, 2], vec![0, 1, 2, 3]];
    let s = FiniteInverseSemigroup::new(names(&["0", "p", "q", "1"]), Some(0), table).expect("semilattice");
    ScaledSemigroup::trivial(s)
}

/// `{0, p, q}` with `pq = 0`: two idempotents with nothing connecting them.
pub fn disconnected_pair() -> ScaledSemigroup {
    let table = vec![vec![0, 0, 0], vec![0, 1, 0], vec![0, 0, 2]];
    let s = FiniteInverseSemigroup::new(names(&["0", "p", "q"]), Some(0), table).expect("semilattice");
    ScaledSemigroup::trivial(s)
}

/// All partial bijections of `{1, ..., n}` under composition `(fg)(x) = f(g(x))`.
pub fn symmetric_inverse_monoid(n: usize) -> ScaledSemigroup {
    let mut maps: Vec<Vec<Option<usize>>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for m in &maps {
            for v in std::iter::once(None).chain((0..n).map(Some)) {
                if v.is_none() || !m.contains(&v) {
                    let mut m = m.clone();
                    m.push(v);
                    next.push(m);
                }
            }
        }
        maps = next;
    }
    // the empty map first, so that it plays the zero
    maps.sort_by_key(|m| m.iter().filter(|v| v.is_some()).count());
    let label = |m: &[Option<usize>]| {
        if m.iter().all(Option::is_none) {
            return "0".to_string();
        }
        m.iter().map(|v| v.map_or("-".to_string(), |x| (x + 1).to_string())).collect::<Vec<_>>().join("")
    };
    let labels = maps.iter().map(|m| label(m)).collect();
    let table = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| {
                    let fg: Vec<Option<usize>> = g.iter().map(|v| v.and_then(|x| f[x])).collect();
                    maps.iter().position(|m| *m == fg).expect("closed under composition")
                })
                .collect()
        })
        .collect();
    ScaledSemigroup::trivial(FiniteInverseSemigroup::new(labels, Some(0), table).expect("inverse monoid"))
}

pub struct CatalogEntry {
    pub name: String,
    pub semigroup: ScaledSemigroup,
}

/// The fixture catalog.
pub fn catalog() -> Vec<CatalogEntry> {
    let b2 = |l: Rational| brandt(&[l, int(1)]).expect("valid Brandt scale");
    let entries = [
        ("B2(2)", b2(int(2))),
        ("B2(1/2)", b2(ratio(1, 2))),
        ("B2(3)", b2(int(3))),
        ("B2(1)", b2(int(1))),
        ("B3(1,2,4)", brandt(&[int(1), int(2), int(4)]).expect("valid Brandt scale")),
        ("chain1", chain(1)),
        ("chain2", chain(2)),
        ("chain4", chain(4)),
        ("two_orthogonal", two_orthogonal()),
        ("disconnected_pair", disconnected_pair()),
        ("I2", symmetric_inverse_monoid(2)),
    ];
    entries.into_iter().map(|(n, s)| CatalogEntry { name: n.to_string(), semigroup: s }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_inverse_monoid_sizes() {
        let i2 = symmetric_inverse_monoid(2);
        assert_eq!(i2.semigroup().len(), 7);
        assert_eq!(i2.semigroup().idempotents().len(), 3);
        assert_eq!(symmetric_inverse_monoid(3).semigroup().len(), 34);
    }

    #[test]
    fn catalog_is_valid() {
        assert_eq!(catalog().len(), 11);
    }
}
