//! `verify`: certificates and seeded property checks across all engines.

use std::path::PathBuf;

use clap::ValueEnum;
use crystal_core::finite::{catalog, ScaledSemigroup, DEFAULT_IDEMPOTENT_BOUND};
use crystal_core::hull::InverseHull;
use crystal_core::kms::{KmsEngine, TraceSpec};
use crystal_core::ktheory::{
    disguised_diagonal, dynam_cokernels, moved_edge_substitution, six_vertex_graph, AbelianInvariants, IntMatrix, ZPoly,
};
use crystal_core::monoid::ScaledMonoid;
use crystal_core::rational::{int, ratio};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::load_table;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    All,
    Finite,
    Hull,
    Kms,
    Ktheory,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::All => "all",
            SuiteKind::Finite => "finite",
            SuiteKind::Hull => "hull",
            SuiteKind::Kms => "kms",
            SuiteKind::Ktheory => "ktheory",
        }
    }

    fn includes(self, other: SuiteKind) -> bool {
        self == SuiteKind::All || self == other
    }
}

#[derive(Debug, Clone)]
pub enum CatalogSource {
    Builtin,
    /// Every `*.json` Cayley table in the directory, in file name order.
    Directory(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteItem {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl SuiteItem {
    fn new(name: impl Into<String>, witness: Option<String>, detail: Value) -> Self {
        SuiteItem { name: name.into(), passed: witness.is_none(), detail, witness }
    }
}

type Catalog = Vec<(String, ScaledSemigroup)>;

/// Loads the catalog; scale and axiom violations become failed items.
fn load_catalog(source: &CatalogSource) -> Result<(Catalog, Vec<SuiteItem>), CliError> {
    match source {
        CatalogSource::Builtin => Ok((catalog().into_iter().map(|e| (e.name, e.semigroup)).collect(), Vec::new())),
        CatalogSource::Directory(dir) => {
            let read = std::fs::read_dir(dir).map_err(|source| CliError::Io { path: dir.clone(), source })?;
            let mut paths: Vec<PathBuf> = read
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            if paths.is_empty() {
                return Err(CliError::Input(format!("catalog {} contains no .json tables", dir.display())));
            }
            let mut entries = Vec::new();
            let mut failures = Vec::new();
            for p in paths {
                let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                match load_table(&p)? {
                    Ok(s) => entries.push((name, s)),
                    Err(e) => {
                        failures.push(SuiteItem::new(format!("finite/{name}/load"), Some(e.to_string()), Value::Null))
                    }
                }
            }
            Ok((entries, failures))
        }
    }
}

fn finite_items(name: &str, ss: &ScaledSemigroup) -> Vec<SuiteItem> {
    let bound = DEFAULT_IDEMPOTENT_BOUND;
    let s = ss.semigroup();
    let mut items = Vec::new();

    let crystal = ss.crystal();
    items.push(match &crystal {
        Ok(c) => SuiteItem::new(
            format!("finite/{name}/crystal"),
            None,
            json!({ "ecx": c.ecx.len(), "icx": c.icx.len(), "crystal_elements": c.crystal.len() }),
        ),
        Err(e) => SuiteItem::new(format!("finite/{name}/crystal"), Some(e.to_string()), Value::Null),
    });

    let ecx = ss.ecx();
    let boundary = (|| {
        let cmp = s.boundary_for(&ecx, bound).map_err(|e| e.to_string())?;
        if !cmp.agree || !cmp.principal_in_complement {
            return Err(format!("{} filters by complement, {} principal", cmp.complement.len(), cmp.principal.len()));
        }
        if cmp.complement.is_empty() != ecx.is_empty() {
            return Err(format!("Z has {} points while E_c^x has {} elements", cmp.complement.len(), ecx.len()));
        }
        let empty = s.boundary_for(&[], bound).map_err(|e| e.to_string())?;
        if !empty.agree || !empty.complement.is_empty() {
            return Err("with E_c^x emptied the boundary set is not empty".into());
        }
        Ok(cmp.complement.len())
    })();
    items.push(match boundary {
        Ok(n) => SuiteItem::new(format!("finite/{name}/boundary"), None, json!({ "points": n, "ecx": ecx.len() })),
        Err(w) => SuiteItem::new(format!("finite/{name}/boundary"), Some(w), Value::Null),
    });

    items.push(match ss.restriction_iso_certificate(bound) {
        Ok(c) => {
            let witness = (!c.passed).then(|| c.failures.join("; "));
            let t = ss.transversality_check();
            SuiteItem::new(
                format!("finite/{name}/restriction"),
                witness,
                json!({ "boundary_arrows": c.restricted_arrows, "crystal_arrows": c.crystal_arrows, "transversal": t.holds }),
            )
        }
        Err(e) => SuiteItem::new(format!("finite/{name}/restriction"), Some(e.to_string()), Value::Null),
    });
    items
}

fn hull_families() -> Vec<(&'static str, ScaledMonoid)> {
    vec![
        ("axb", ScaledMonoid::affine()),
        ("free(2,3)", ScaledMonoid::free(vec![int(2), int(3)]).expect("weights")),
        ("abelian(1,2)", ScaledMonoid::abelian(vec![int(1), int(2)]).expect("weights")),
    ]
}

fn hull_items(rng: &mut ChaCha8Rng) -> Vec<SuiteItem> {
    let mut items = Vec::new();
    for (name, m) in hull_families() {
        let h = InverseHull::new(m);
        items.push(match h.crystal_certificate_hull(6) {
            Ok(c) => {
                let witness = (!c.passed).then(|| {
                    c.closure_failure
                        .clone()
                        .or(c.crystal_failure.clone())
                        .or_else(|| {
                            c.idempotents
                                .iter()
                                .find(|i| !i.consistent)
                                .map(|i| format!("{} is misclassified", i.idempotent))
                        })
                        .unwrap_or_default()
                });
                SuiteItem::new(
                    format!("hull/{name}/crystal"),
                    witness,
                    json!({ "idempotents": c.idempotents.len(), "kernel_pairs": c.kernel_pairs_checked }),
                )
            }
            Err(e) => SuiteItem::new(format!("hull/{name}/crystal"), Some(e.to_string()), Value::Null),
        });
        items.push(match h.scale_consistency(rng, 200, 5, 200_000) {
            Ok(r) => {
                let witness = r.witness.clone().or_else(|| {
                    (r.idempotents < 200).then(|| format!("only {} idempotent words found", r.idempotents))
                });
                SuiteItem::new(format!("hull/{name}/scale"), witness, serde_json::to_value(&r).expect("serializes"))
            }
            Err(e) => SuiteItem::new(format!("hull/{name}/scale"), Some(e.to_string()), Value::Null),
        });
    }
    items
}

/// Families evaluated by the KMS suite; all have abelian kernels.
pub fn kms_families() -> Vec<(&'static str, ScaledMonoid)> {
    vec![
        ("free(2,2)", ScaledMonoid::free(vec![int(2), int(2)]).expect("weights")),
        ("free(2,3)", ScaledMonoid::free(vec![int(2), int(3)]).expect("weights")),
        ("abelian(1,2)", ScaledMonoid::abelian(vec![int(1), int(2)]).expect("weights")),
        ("abelian(2,3/2)", ScaledMonoid::abelian(vec![int(2), ratio(3, 2)]).expect("weights")),
        ("axb", ScaledMonoid::affine()),
    ]
}

/// A mixture of two characters with angles in twelfths of a turn.
pub fn random_trace(rng: &mut impl Rng, rank: usize) -> TraceSpec {
    let w = rng.gen_range(1..=9) as f64 / 10.0;
    let angle = |rng: &mut dyn rand::RngCore| (0..rank).map(|_| ratio(rng.gen_range(0..12), 12)).collect::<Vec<_>>();
    let a = angle(rng);
    let b = angle(rng);
    TraceSpec::new(vec![w, 1.0 - w], vec![a, b]).expect("valid mixture")
}

fn kms_items(rng: &mut ChaCha8Rng) -> Vec<SuiteItem> {
    let mut items = Vec::new();
    for (name, m) in kms_families() {
        let item = (|| {
            let e = KmsEngine::new(m).map_err(|e| e.to_string())?;
            let beta = e.beta_threshold().beta_star.max(e.abscissa()) + 0.5;
            let trace = random_trace(rng, e.monoid().kernel_rank());
            let rep =
                e.kms_condition_check(beta, &trace, 100, 3, &e.default_cutoff(), rng).map_err(|e| e.to_string())?;
            let witness = (!rep.passed).then(|| {
                format!(
                    "residual {:.3e} above allowance {:.3e} at {}",
                    rep.max_residual,
                    rep.allowance,
                    rep.worst_pair.clone().unwrap_or_default()
                )
            });
            Ok::<_, String>(SuiteItem::new(
                format!("kms/{name}/condition"),
                witness,
                serde_json::to_value(&rep).expect("serializes"),
            ))
        })();
        items.push(item.unwrap_or_else(|w| SuiteItem::new(format!("kms/{name}/condition"), Some(w), Value::Null)));
    }
    items
}

fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let r: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_i64(&r, cols).expect("rectangular")
}

fn ktheory_items(rng: &mut ChaCha8Rng) -> Vec<SuiteItem> {
    let mut items = Vec::new();

    let mut witness = None;
    for k in 0..200 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_int_matrix(rng, r, c, 100);
        if let Err(w) = a.smith().verify(&a) {
            witness = Some(format!("matrix #{k}: {w}"));
            break;
        }
    }
    items.push(SuiteItem::new("ktheory/smith", witness, json!({ "matrices": 200 })));

    let mut witness = None;
    let mut checked = 0;
    while checked < 200 && witness.is_none() {
        let a = random_int_matrix(rng, 2, 2, 4);
        let det = a.determinant();
        if det == BigInt::from(0) {
            continue;
        }
        checked += 1;
        let order = a.cokernel().order();
        if order != Some(det.magnitude().clone().into()) {
            witness = Some(format!("{:?}: cokernel order {order:?}, determinant {det}", a.rows()));
        }
    }
    items.push(SuiteItem::new("ktheory/cokernel_order", witness, json!({ "matrices": checked })));

    let pool = [ZPoly::from_i64(&[-2, 0, 1]), ZPoly::from_i64(&[2, 1]), ZPoly::from_i64(&[1, 0, 1]), ZPoly::default()];
    let mut witness = None;
    for k in 0..100 {
        let n = rng.gen_range(1..=3);
        let mut factors: Vec<ZPoly> = (0..n).map(|_| pool[rng.gen_range(0..pool.len())].clone()).collect();
        let r = disguised_diagonal(rng, &factors, 6).circle_theorem_check();
        if !r.hypothesis_t_regular || !r.isomorphic || r.dim_m_mod_t != r.free_rank {
            witness = Some(format!("presentation #{k}: {r:?}"));
            break;
        }
        factors.push(if rng.gen_bool(0.5) { ZPoly::t() } else { ZPoly::from_i64(&[-1, 1]) });
        let r = disguised_diagonal(rng, &factors, 6).circle_theorem_check();
        if r.hypothesis_t_regular {
            witness = Some(format!("presentation #{k} with a factor vanishing at 0 or 1 passed the hypotheses"));
            break;
        }
    }
    items.push(SuiteItem::new("ktheory/circle", witness, json!({ "presentations": 100 })));

    let mut witness = None;
    'dynam: for m in [1usize, 2, 3, 5] {
        for t in m..=4 * m {
            match dynam_cokernels(m, t) {
                Ok(r)
                    if r.coker_one_minus_t == AbelianInvariants::free(1) && r.coker_t == AbelianInvariants::free(1) => {
                }
                Ok(r) => {
                    witness = Some(format!(
                        "m = {m}, T = {t}: coker(1-t) = {}, coker(t) = {}",
                        r.coker_one_minus_t, r.coker_t
                    ));
                    break 'dynam;
                }
                Err(e) => {
                    witness = Some(e.to_string());
                    break 'dynam;
                }
            }
        }
    }
    items.push(SuiteItem::new("ktheory/dynam", witness, json!({ "cycles": [1, 2, 3, 5] })));

    let g = six_vertex_graph();
    let witness = match g.substitution_matrix(&moved_edge_substitution()) {
        Ok(m) => {
            let mut expected = IntMatrix::identity(6);
            expected.set(0, 1, BigInt::from(1));
            expected.set(0, 2, BigInt::from(-1));
            (m != expected).then(|| format!("got {:?}", m.rows()))
        }
        Err(e) => Some(e.to_string()),
    };
    items.push(SuiteItem::new("ktheory/graph", witness, Value::Null));
    items
}

/// Runs the selected suites. Each suite draws from its own generator
/// seeded from `seed`, so selecting a single suite reproduces its slice of `all`.
pub fn verify_suite(kind: SuiteKind, seed: u64, source: &CatalogSource) -> Result<Vec<SuiteItem>, CliError> {
    let mut items = Vec::new();
    if kind.includes(SuiteKind::Finite) {
        let (entries, failures) = load_catalog(source)?;
        items.extend(failures);
        for (name, ss) in &entries {
            items.extend(finite_items(name, ss));
        }
    }
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ k);
    if kind.includes(SuiteKind::Hull) {
        items.extend(hull_items(&mut rng(1)));
    }
    if kind.includes(SuiteKind::Kms) {
        items.extend(kms_items(&mut rng(2)));
    }
    if kind.includes(SuiteKind::Ktheory) {
        items.extend(ktheory_items(&mut rng(3)));
    }
    Ok(items)
}
