use std::fmt::Write as _;
use std::path::Path;

use crystal_core::finite::{catalog, FiniteError, ScaledSemigroup, TableSpec};
use crystal_core::kms::{KmsEngine, KmsError, SpanningElement, TraceSpec};
use crystal_core::ktheory::{
    dynam_cokernels, int_matrix_from_json, moved_edge_substitution, six_vertex_graph, Graph, IntMatrix,
    ModulePresentation, Substitution,
};
use crystal_core::monoid::{FamilyDescriptor, FamilyKind, ScaledMonoid};
use crystal_core::rational::{self, Rational};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::report::{Outcome, Report};
use crate::suite::{self, CatalogSource};
use crate::{
    read_json, CliError, Command, CrystalArgs, FamilyArgs, FamilyName, GroundArgs, KmsArgs, KtheoryCommand, VerifyArgs,
    ZetaArgs,
};

pub fn dispatch(c: &Command) -> Result<Outcome, CliError> {
    match c {
        Command::Crystal(a) => crystal(a),
        Command::Zeta(a) => zeta(a),
        Command::Kms(a) => kms(a),
        Command::Ground(a) => ground(a),
        Command::Ktheory(k) => ktheory(k),
        Command::Verify(a) => verify(a),
    }
}

/// Loads a Cayley table; axiom and scale violations are returned as `Ok(Err(..))`.
pub(crate) fn load_table(path: &Path) -> Result<Result<ScaledSemigroup, FiniteError>, CliError> {
    let spec: TableSpec =
        serde_json::from_value(read_json(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    match ScaledSemigroup::from_json(&spec) {
        Ok(s) => Ok(Ok(s)),
        Err(e @ FiniteError::Violation(_)) => Ok(Err(e)),
        Err(e) => Err(CliError::Input(format!("{}: {e}", path.display()))),
    }
}

fn violation_outcome(command: &str, subject: &str, e: &FiniteError) -> Outcome {
    let witness = match e {
        FiniteError::Violation(v) => serde_json::to_value(v).expect("violation serializes"),
        other => json!({ "detail": other.to_string() }),
    };
    Outcome {
        human: format!("{subject}: VIOLATION\n  {e}\n"),
        report: Report::violation(command, json!({ "semigroup": subject }), witness),
    }
}

fn crystal(a: &CrystalArgs) -> Result<Outcome, CliError> {
    let (name, ss) = match (&a.table, &a.builtin) {
        (Some(path), _) => {
            let name = path.display().to_string();
            match load_table(path)? {
                Ok(s) => (name, s),
                Err(e) => return Ok(violation_outcome("crystal", &name, &e)),
            }
        }
        (None, Some(b)) => {
            let entry = catalog().into_iter().find(|e| &e.name == b).ok_or_else(|| {
                let names: Vec<String> = catalog().into_iter().map(|e| e.name).collect();
                CliError::Input(format!("unknown built-in {b:?}; available: {}", names.join(", ")))
            })?;
            (entry.name, entry.semigroup)
        }
        (None, None) => return Err(CliError::Input("one of --table or --builtin is required".into())),
    };
    let finite_err = |e: FiniteError| match e {
        FiniteError::TooManyIdempotents { .. } | FiniteError::Input(_) => Err(CliError::input(e)),
        other => Ok(other),
    };
    let result = (|| {
        let crystal = ss.crystal()?;
        let z = ss.boundary_set(a.bound)?;
        let cert = ss.restriction_iso_certificate(a.bound)?;
        Ok::<_, FiniteError>((crystal, z, cert))
    })();
    let (crystal, z, cert) = match result {
        Ok(r) => r,
        Err(e) => return Ok(violation_outcome("crystal", &name, &finite_err(e)?)),
    };
    let s = ss.semigroup();
    let summary = crystal.summary(s);
    let trans = ss.transversality_check();
    let boundary: Vec<String> = z.iter().map(|f| f.label(s)).collect();
    let lemma_holds = z.is_empty() == crystal.ecx.is_empty();

    let mut h = String::new();
    let _ = writeln!(h, "semigroup {name} ({} elements, {} nonzero idempotents)", s.len(), s.idempotents().len());
    let _ = writeln!(h, "E_c^x = {{{}}}", summary.ecx.join(", "));
    let mut ic = vec![summary.crystal_elements[0].clone()];
    ic.extend(summary.icx.iter().cloned());
    let _ = writeln!(h, "I_c = {{{}}}", ic.join(", "));
    let chis: Vec<String> = boundary.iter().map(|b| format!("chi{b}")).collect();
    let _ = writeln!(h, "boundary set Z = {{{}}}", chis.join(", "));
    let _ = writeln!(
        h,
        "restriction certificate: {} (boundary groupoid {} objects / {} arrows, crystal groupoid {} / {})",
        if cert.passed { "PASS" } else { "FAIL" },
        cert.boundary_objects,
        cert.restricted_arrows,
        cert.crystal_objects,
        cert.crystal_arrows
    );
    for f in &cert.failures {
        let _ = writeln!(h, "  {f}");
    }
    let _ = writeln!(h, "transversality: {}", if trans.holds { "holds" } else { "fails" });
    for w in &trans.witnesses {
        let _ = writeln!(h, "  {} -> {} via {}", w.p, w.q, w.g);
    }
    for p in &trans.failures {
        let _ = writeln!(h, "  {p}: no element reaches E_c^x");
    }

    let payload = json!({
        "semigroup": name,
        "elements": s.len(),
        "crystal": summary,
        "boundary": boundary,
        "boundary_empty_iff_ecx_empty": lemma_holds,
        "restriction_certificate": cert,
        "transversality": trans,
    });
    let report = if cert.passed && lemma_holds {
        Report::ok("crystal", payload)
    } else {
        Report::violation("crystal", payload, json!({ "failures": cert.failures }))
    };
    Ok(Outcome {
        human: h,
        report: report
            .with("ecx", "nonzero idempotents p such that every g with g^-1 g = p has N(g) >= 1")
            .with("icx", "nonzero g whose domain and range idempotents lie in E_c^x")
            .with("crystal", "I_c with an adjoined zero; products leaving I_c are set to zero")
            .with(
                "boundary",
                "filters avoiding every idempotent outside E_c^x, cross-checked against principal filters of E_c^x",
            )
            .with(
                "restriction_certificate",
                "germ groupoid restricted to the boundary set versus germ groupoid of the crystal",
            )
            .with("transversality", "for each idempotent p, some g with g^-1 g = p and g g^-1 in E_c^x"),
    })
}

pub(crate) fn monoid_of(a: &FamilyArgs) -> Result<ScaledMonoid, CliError> {
    let descriptor = match (&a.family, &a.family_file) {
        (_, Some(path)) => serde_json::from_value::<FamilyDescriptor>(read_json(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        (Some(f), None) => FamilyDescriptor {
            family: match f {
                FamilyName::Free => FamilyKind::Free,
                FamilyName::Abelian => FamilyKind::Abelian,
                FamilyName::Axb => FamilyKind::Affine,
            },
            weights: a
                .weights
                .iter()
                .map(|w| rational::parse(w.trim()).map_err(CliError::input))
                .collect::<Result<_, _>>()?,
        },
        (None, None) => return Err(CliError::Input("one of --family or --family-file is required".into())),
    };
    ScaledMonoid::from_descriptor(&descriptor).map_err(CliError::input)
}

fn engine_of(a: &FamilyArgs) -> Result<KmsEngine, CliError> {
    KmsEngine::new(monoid_of(a)?).map_err(CliError::input)
}

fn parse_cutoff(s: &str) -> Result<Rational, CliError> {
    rational::parse(s).map_err(CliError::input)
}

fn family_label(m: &ScaledMonoid) -> String {
    let w: Vec<String> = m.weights().iter().map(|w| rational::Pretty(w).to_string()).collect();
    if w.is_empty() {
        m.kind().name().to_string()
    } else {
        format!("{}({})", m.kind().name(), w.join(","))
    }
}

fn zeta(a: &ZetaArgs) -> Result<Outcome, CliError> {
    let e = engine_of(&a.family)?;
    let cutoff = match &a.cutoff {
        Some(c) => parse_cutoff(c)?,
        None => e.default_cutoff(),
    };
    let z = e.zeta(a.beta, &cutoff).map_err(CliError::input)?;
    let t = e.beta_threshold();
    let mut h = String::new();
    let _ = writeln!(h, "family {}", family_label(e.monoid()));
    let _ = writeln!(
        h,
        "zeta_N({}) ~ {:.10} over {} classes with N <= {}",
        a.beta,
        z.partial,
        z.classes,
        rational::Pretty(&cutoff)
    );
    match (z.tail_bound, z.divergent) {
        (_, true) => {
            let _ = writeln!(h, "series diverges at beta = {} (abscissa {})", a.beta, t.abscissa);
        }
        (Some(tb), false) => {
            let _ = writeln!(h, "tail bound {tb:.3e}");
            let _ = writeln!(h, "zeta_N({}) = {:.4} +- {:.1e}", a.beta, z.partial + tb / 2.0, tb / 2.0);
        }
        (None, false) => {}
    }
    if let Some(c) = z.closed_form {
        let _ = writeln!(h, "closed form {c:.10}");
    }
    let _ = writeln!(h, "threshold beta* = {} ({})", t.beta_star, t.method);
    let report = Report::ok("zeta", json!({ "family": e.monoid().descriptor(), "zeta": z, "threshold": t }))
        .with("zeta.partial", "sum of N(r)^-beta over ~N classes with N(r) <= cutoff, in increasing order")
        .with("zeta.tail_bound", "axb: integral bound on sum over a > A of a^(1-beta); other families: closed form minus partial sum")
        .with("zeta.closed_form", "free: 1/(1 - sum w^-beta); N^k: product of 1/(1 - w^-beta) over non-unit weights; axb: Riemann zeta(beta - 1)")
        .with("threshold", "root of zeta_N(beta) = 2");
    Ok(Outcome { human: h, report })
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn trace_of(e: &KmsEngine, v: Option<Value>) -> Result<TraceSpec, CliError> {
    match v {
        Some(v) => TraceSpec::from_json(&v).map_err(CliError::input),
        None => Ok(TraceSpec::trivial(e.monoid().kernel_rank())),
    }
}

fn element_of(e: &KmsEngine, v: &Value) -> Result<SpanningElement, CliError> {
    SpanningElement::from_json(e.monoid(), v).map_err(CliError::input)
}

fn parse_element(s: &str) -> Result<Value, CliError> {
    serde_json::from_str(s).map_err(|err| CliError::Input(format!("--element: {err}")))
}

fn kms(a: &KmsArgs) -> Result<Outcome, CliError> {
    let e = engine_of(&a.family)?;
    let query = match &a.query {
        Some(p) => read_json(p)?,
        None => json!({}),
    };
    let beta = match (a.beta, query.get("beta")) {
        (Some(b), _) => b,
        (None, Some(b)) => b.as_f64().ok_or_else(|| CliError::Input("beta must be a number".into()))?,
        (None, None) => return Err(CliError::Input("beta is required".into())),
    };
    let cutoff = match (&a.cutoff, query.get("cutoff")) {
        (Some(c), _) => parse_cutoff(c)?,
        (None, Some(Value::String(c))) => parse_cutoff(c)?,
        (None, Some(Value::Number(n))) => parse_cutoff(&n.to_string())?,
        (None, Some(_)) => return Err(CliError::Input("cutoff must be a \"p/q\" string".into())),
        (None, None) => e.default_cutoff(),
    };
    let trace_json = match &a.trace {
        Some(p) => Some(read_json(p)?),
        None => query.get("trace").cloned(),
    };
    let trace = trace_of(&e, trace_json)?;
    let element = match (&a.element, query.get("element")) {
        (Some(s), _) => parse_element(s)?,
        (None, Some(v)) => v.clone(),
        (None, None) => return Err(CliError::Input("element is required".into())),
    };
    let x = element_of(&e, &element)?;
    let r = e.kms_value(beta, &trace, &x, &cutoff).map_err(|err| match err {
        KmsError::Divergent { .. } | KmsError::InvalidBeta(_) => {
            CliError::input(format!("{err}; see `zeta` for the threshold"))
        }
        other => CliError::input(other),
    })?;
    let mut h = String::new();
    let _ = writeln!(h, "family {}, beta = {beta}, cutoff {}", family_label(e.monoid()), rational::Pretty(&cutoff));
    let _ = writeln!(h, "phi({x}) = {:.10} {:+.10}i", r.value.re, r.value.im);
    let _ = writeln!(
        h,
        "zeta partial {:.10}, tail {:.3e}, error bound {:.3e}, {} classes",
        r.zeta_partial, r.tail, r.error_bound, r.classes_used
    );
    if let Some(c) = r.closed_form {
        let _ = writeln!(h, "closed form {:.10} {:+.10}i", c.re, c.im);
    }
    let report = Report::ok(
        "kms",
        json!({
            "family": e.monoid().descriptor(),
            "beta": beta,
            "cutoff": rational::format(&cutoff),
            "trace": trace.to_json(),
            "element": x.to_json(e.monoid()),
            "value": complex_json(r.value),
            "zeta": r.zeta_partial,
            "tail": r.tail,
            "error_bound": r.error_bound,
            "classes_used": r.classes_used,
            "closed_form": r.closed_form.map(complex_json),
        }),
    )
    .with(
        "value",
        "class sum of N(sr)^-beta tau(v_q v_p*) over r with sr ~N tr, divided by the partial partition function",
    )
    .with("error_bound", "twice the partition function tail divided by the partial sum")
    .with("closed_form", "free and N^k families: [s ~N t] N(s)^-beta tau(v_q v_p*)");
    Ok(Outcome { human: h, report })
}

fn ground(a: &GroundArgs) -> Result<Outcome, CliError> {
    let e = engine_of(&a.family)?;
    let trace_json = a.trace.as_deref().map(read_json).transpose()?;
    let trace = trace_of(&e, trace_json)?;
    let x = element_of(&e, &parse_element(&a.element)?)?;
    let g = e.ground_value(&trace, &x).map_err(CliError::input)?;
    let human = format!("ground state value on {x}: {:.10} {:+.10}i\n", g.re, g.im);
    let report = Report::ok(
        "ground",
        json!({
            "family": e.monoid().descriptor(),
            "trace": trace.to_json(),
            "element": x.to_json(e.monoid()),
            "value": complex_json(g),
        }),
    )
    .with("value", "tau(v_s v_t*) when s and t lie in the kernel of N, otherwise 0");
    Ok(Outcome { human, report })
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
}

fn matrix_text(m: &IntMatrix) -> String {
    let cells = matrix_rows(m);
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut s = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "  [{}]", line.join(" "));
    }
    s
}

fn load_matrix(p: &Path) -> Result<IntMatrix, CliError> {
    int_matrix_from_json(&read_json(p)?).map_err(CliError::input)
}

fn load_presentation(p: &Path) -> Result<ModulePresentation, CliError> {
    ModulePresentation::from_json(&read_json(p)?).map_err(CliError::input)
}

fn ktheory(k: &KtheoryCommand) -> Result<Outcome, CliError> {
    let out = match k {
        KtheoryCommand::Smith { matrix } => {
            let a = load_matrix(matrix)?;
            let s = a.smith();
            let diag: Vec<String> = s.diagonal().iter().map(|d| d.to_string()).collect();
            let human = format!("D = diag({})\nU =\n{}V =\n{}", diag.join(", "), matrix_text(&s.u), matrix_text(&s.v));
            let report = Report::ok(
                "ktheory smith",
                json!({ "u": matrix_rows(&s.u), "d": matrix_rows(&s.d), "v": matrix_rows(&s.v), "diagonal": diag }),
            )
            .with("d", "smallest-pivot row and column reduction over the integers, then divisibility repair");
            Outcome { human, report }
        }
        KtheoryCommand::Cokernel { matrix } => {
            let a = load_matrix(matrix)?;
            let c = a.cokernel();
            let human = format!("Z^{} / rowspace = {c}\n", a.ncols());
            let report = Report::ok("ktheory cokernel", json!({ "cokernel": c, "text": c.to_string() })).with(
                "cokernel",
                "nonzero Smith diagonal entries give torsion; zero and missing entries give free rank",
            );
            Outcome { human, report }
        }
        KtheoryCommand::Quotients { presentation } => {
            let p = load_presentation(presentation)?;
            let q = p.zt_quotients();
            let human = format!(
                "M/tM = {} (relation kernel rank {})\nM/(1-t)M = {} (relation kernel rank {})\n",
                q.at_t_equals_0, q.relation_kernel_rank_0, q.at_t_equals_1, q.relation_kernel_rank_1
            );
            let report = Report::ok("ktheory quotients", serde_json::to_value(&q).expect("serializes"))
                .with("at_t_equals_0", "relations evaluated at t = 0, then integer cokernel")
                .with("at_t_equals_1", "relations evaluated at t = 1, then integer cokernel");
            Outcome { human, report }
        }
        KtheoryCommand::Circle { presentation } => {
            let p = load_presentation(presentation)?;
            let r = p.circle_theorem_check();
            let human = format!(
                "invariant factors over Q[t]: {}\nhypotheses: finitely generated {}, t and 1-t injective {}\ndim M/(1-t)M = {}, dim M/tM = {}, {}\n",
                r.invariant_factors.join(", "),
                r.hypothesis_fg,
                r.hypothesis_t_regular,
                r.dim_m_mod_1_minus_t,
                r.dim_m_mod_t,
                if r.isomorphic { "isomorphic" } else { "not isomorphic" }
            );
            let status_ok = !r.hypothesis_t_regular || r.isomorphic;
            let payload = serde_json::to_value(&r).expect("serializes");
            let report = if status_ok {
                Report::ok("ktheory circle", payload)
            } else {
                Report::violation(
                    "ktheory circle",
                    payload,
                    json!({ "detail": "hypotheses hold but the dimensions differ" }),
                )
            };
            let report = report
                .with("invariant_factors", "monic Smith diagonal over Q[t]")
                .with("hypothesis_t_regular", "every nonzero invariant factor f has f(0) != 0 and f(1) != 0")
                .with("dims", "n minus the rational rank of the relations at t = 1 and at t = 0");
            Outcome { human, report }
        }
        KtheoryCommand::Graph { graph, substitution } => {
            let g: Graph = match graph {
                Some(p) => serde_json::from_value(read_json(p)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => six_vertex_graph(),
            };
            let sub: Substitution = match substitution {
                Some(p) => serde_json::from_value(read_json(p)?)
                    .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
                None => moved_edge_substitution(),
            };
            let m = g.substitution_matrix(&sub).map_err(CliError::input)?;
            let human = format!("induced matrix on Z^{{{}}}:\n{}", g.vertices.join(","), matrix_text(&m));
            let report = Report::ok("ktheory graph", json!({ "vertices": g.vertices, "rows": matrix_rows(&m) }))
                .with("rows", "column j is the class of the image of q_j, using [t_h t_h*] = [q_source(h)]");
            Outcome { human, report }
        }
        KtheoryCommand::Dynam { cycle, truncation } => {
            let r = dynam_cokernels(*cycle, *truncation).map_err(CliError::input)?;
            let human = format!(
                "cycle {}, truncation {}: coker(1-t) = {}, coker(t) = {}\n",
                r.cycle, r.truncation, r.coker_one_minus_t, r.coker_t
            );
            let report = Report::ok("ktheory dynam", serde_json::to_value(&r).expect("serializes"))
                .with("model", "delta_0..delta_{T-1} shifted with zero fill, h_0..h_{m-1} rotated")
                .with("cokernels", "integer cokernels of 1 - t and t on the model");
            Outcome { human, report }
        }
    };
    Ok(out)
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let source = match &a.catalog {
        Some(dir) => CatalogSource::Directory(dir.clone()),
        None => CatalogSource::Builtin,
    };
    let items = suite::verify_suite(a.suite, a.seed, &source)?;
    let mut h = String::new();
    for it in &items {
        let _ = writeln!(
            h,
            "{} {}{}",
            if it.passed { "PASS" } else { "FAIL" },
            it.name,
            it.witness.as_ref().map(|w| format!(": {w}")).unwrap_or_default()
        );
    }
    let failed = items.iter().filter(|i| !i.passed).count();
    let _ = writeln!(h, "{} checks, {failed} failed", items.len());
    let payload = json!({ "suite": a.suite.name(), "seed": a.seed, "items": items });
    let report = match items.iter().find(|i| !i.passed) {
        None => Report::ok("verify", payload),
        Some(first) => Report::violation("verify", payload, json!({ "item": first.name, "detail": first.witness })),
    };
    Ok(Outcome {
        human: h,
        report: report.with("items", "each item is a deterministic function of the seed and the catalog"),
    })
}
