//! One function per operation. Each task runs in two phases: [`prepare`]
//! validates the task's inputs against the built object table (bad input
//! data is a validation failure, before anything computes), and
//! [`PreparedTask::execute`] runs the computation and assembles a report
//! whose claims are backed by certificates that `eqmf verify` can re-check
//! with no access to this code path.

use std::sync::Arc;

use eqmf::error::{Error, Result};
use eqmf::functors::{
    forget, induce, strictify, twisted_object, HomotopyEquivariantObject, RingHom,
};
use eqmf::graded::GradedMatrix;
use eqmf::group::RingAction;
use eqmf::mf::{validate_mf, EquivariantMF};
use eqmf::morphism::{homotopy_witness, is_null_homotopic, MFMorphism};
use eqmf::rat::Rat;
use eqmf::report::{MorphExpr, ReportBuilder};
use eqmf::resolution::{kstab_default_bounds, kstab_tail_with};
use eqmf::ring::GradedRing;
use eqmf::splitting::{
    ks_decompose, split_homotopy_idempotent, split_strict_idempotent, stable_mutual_inverse,
};
use eqmf::stable::stable_hom;
use serde_json::{json, Value};

use crate::config::{BuiltObjects, MorphismSpec, ProblemConfig, TaskSpec};

/// Command-line overrides applied on top of config and task parameters.
#[derive(Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_steps: Option<usize>,
    pub degree_bound: Option<i64>,
}

/// A task whose inputs have been fully validated and resolved.
pub enum PreparedTask {
    Validate {
        objects: Vec<(String, EquivariantMF)>,
    },
    Decompose {
        object: String,
        x: EquivariantMF,
    },
    SplitIdempotent {
        object: String,
        x: EquivariantMF,
        e: MFMorphism,
        strict: bool,
    },
    StableHom {
        source: String,
        target: String,
        x: EquivariantMF,
        y: EquivariantMF,
    },
    Kstab {
        ring: Arc<GradedRing>,
        max_steps: usize,
        degree_bound: i64,
    },
    Induce {
        object: String,
        x: EquivariantMF,
    },
    Strictify {
        object: String,
        coherent: HomotopyEquivariantObject,
    },
    BaseChange {
        object: String,
        x: EquivariantMF,
        hom: RingHom,
        target_action: Arc<RingAction>,
    },
}

/// A finished task: the report document plus whether the task's own claim
/// holds (`ok` is false only for a `validate` task that found violations).
pub struct TaskReport {
    pub doc: Value,
    pub ok: bool,
}

fn parse_morphism(
    ring: &Arc<GradedRing>,
    src: &EquivariantMF,
    tgt: &EquivariantMF,
    spec: &MorphismSpec,
    what: &str,
) -> Result<MFMorphism> {
    let u0 = parse_component(ring, src.p0(), tgt.p0(), &spec.u0, &format!("{what}.u0"))?;
    let u1 = parse_component(ring, src.p1(), tgt.p1(), &spec.u1, &format!("{what}.u1"))?;
    MFMorphism::new(src, tgt, u0, u1)
}

fn parse_component(
    ring: &Arc<GradedRing>,
    src: &eqmf::graded::GradedFreeModule,
    tgt: &eqmf::graded::GradedFreeModule,
    rows: &[Vec<String>],
    what: &str,
) -> Result<GradedMatrix> {
    if rows.len() != tgt.rank() || rows.iter().any(|r| r.len() != src.rank()) {
        return Err(Error::Validation(format!(
            "`{what}` must be a {}×{} matrix",
            tgt.rank(),
            src.rank()
        )));
    }
    let mut entries = Vec::with_capacity(src.rank() * tgt.rank());
    for row in rows {
        for e in row {
            entries.push(ring.parse(e)?);
        }
    }
    GradedMatrix::new(src.clone(), tgt.clone(), 0, entries)
}

/// Validate one task's inputs against the built objects.
pub fn prepare(
    cfg: &ProblemConfig,
    built: &BuiltObjects,
    name: &str,
    spec: &TaskSpec,
    overrides: &Overrides,
) -> Result<PreparedTask> {
    match spec {
        TaskSpec::Validate { object } => {
            let names: Vec<&String> = match object {
                Some(o) => vec![o],
                None => cfg.objects.keys().collect(),
            };
            let objects = names
                .into_iter()
                .map(|n| Ok((n.clone(), built.for_validation(n)?.clone())))
                .collect::<Result<Vec<_>>>()?;
            Ok(PreparedTask::Validate { objects })
        }
        TaskSpec::Decompose { object } => Ok(PreparedTask::Decompose {
            object: object.clone(),
            x: built.strict(object)?.clone(),
        }),
        TaskSpec::SplitIdempotent { object, e } => {
            let x = built.strict(object)?.clone();
            let e = parse_morphism(&cfg.ring, &x, &x, e, &format!("{name}.idempotent"))?;
            let e2 = e.compose(&e)?;
            let strict = e2.sub(&e)?.is_zero();
            if !strict && homotopy_witness(&e2, &e)?.is_none() {
                return Err(Error::Validation(format!(
                    "task `{name}`: e∘e is neither equal nor homotopic to e"
                )));
            }
            Ok(PreparedTask::SplitIdempotent { object: object.clone(), x, e, strict })
        }
        TaskSpec::StableHom { source, target } => Ok(PreparedTask::StableHom {
            source: source.clone(),
            target: target.clone(),
            x: built.strict(source)?.clone(),
            y: built.strict(target)?.clone(),
        }),
        TaskSpec::Kstab { max_steps, degree_bound } => {
            let (def_steps, def_bound) = kstab_default_bounds(&cfg.ring);
            Ok(PreparedTask::Kstab {
                ring: cfg.ring.clone(),
                max_steps: overrides.max_steps.or(*max_steps).unwrap_or(def_steps),
                degree_bound: overrides.degree_bound.or(*degree_bound).unwrap_or(def_bound),
            })
        }
        TaskSpec::Induce { object } => Ok(PreparedTask::Induce {
            object: object.clone(),
            x: built.strict(object)?.clone(),
        }),
        TaskSpec::Strictify { object, thetas } => {
            let x = built.strict(object)?.clone();
            if x.group_order() != 1 {
                return Err(Error::Validation(format!(
                    "task `{name}`: strictify expects a trivial-group object; \
                     `{object}` already carries a group action"
                )));
            }
            let n = cfg.action.group().order();
            if thetas.len() != n {
                return Err(Error::Validation(format!(
                    "task `{name}`: {} twist maps given for a group of order {n}",
                    thetas.len()
                )));
            }
            let mut maps = Vec::with_capacity(n);
            for (g, spec) in thetas.iter().enumerate() {
                let src = twisted_object(&x, &cfg.action, g)?;
                maps.push(parse_morphism(&cfg.ring, &src, &x, spec, &format!("{name}.thetas[{g}]"))?);
            }
            let coherent = HomotopyEquivariantObject::new(x, cfg.action.clone(), maps)?;
            Ok(PreparedTask::Strictify { object: object.clone(), coherent })
        }
        TaskSpec::BaseChange { object, target_ring, images } => {
            let x = built.strict(object)?.clone();
            if x.group_order() != 1 {
                return Err(Error::Validation(format!(
                    "task `{name}`: base-change handles trivial-group objects only"
                )));
            }
            let imgs = images
                .iter()
                .map(|s| target_ring.parse(s))
                .collect::<Result<Vec<_>>>()?;
            let hom = RingHom::new(cfg.ring.clone(), target_ring.clone(), imgs)?;
            Ok(PreparedTask::BaseChange {
                object: object.clone(),
                x,
                hom,
                target_action: RingAction::trivial_group(target_ring.clone()),
            })
        }
    }
}

impl PreparedTask {
    /// True when the task consumes randomness, i.e. its report should record
    /// the seed it ran under.
    fn seeded(&self) -> bool {
        matches!(
            self,
            PreparedTask::Decompose { .. }
                | PreparedTask::SplitIdempotent { strict: false, .. }
                | PreparedTask::Strictify { .. }
        )
    }

    /// Run the computation and assemble the certified report.
    pub fn execute(&self, task_name: &str, seed: u64) -> Result<TaskReport> {
        let mut rb = ReportBuilder::new(self.op(), task_name);
        if self.seeded() {
            rb.seed(seed);
        }
        let ok = match self {
            PreparedTask::Validate { objects } => run_validate(&mut rb, objects)?,
            PreparedTask::Decompose { object, x } => {
                run_decompose(&mut rb, object, x, seed)?;
                true
            }
            PreparedTask::SplitIdempotent { object, x, e, strict } => {
                run_split(&mut rb, object, x, e, *strict, seed)?;
                true
            }
            PreparedTask::StableHom { source, target, x, y } => {
                run_stable_hom(&mut rb, source, target, x, y)?;
                true
            }
            PreparedTask::Kstab { ring, max_steps, degree_bound } => {
                run_kstab(&mut rb, ring, *max_steps, *degree_bound)?;
                true
            }
            PreparedTask::Induce { object, x } => {
                run_induce(&mut rb, object, x)?;
                true
            }
            PreparedTask::Strictify { object, coherent } => {
                run_strictify(&mut rb, object, coherent, seed)?;
                true
            }
            PreparedTask::BaseChange { object, x, hom, target_action } => {
                run_base_change(&mut rb, object, x, hom, target_action)?;
                true
            }
        };
        Ok(TaskReport { doc: rb.build(), ok })
    }

    fn op(&self) -> &'static str {
        match self {
            PreparedTask::Validate { .. } => "validate",
            PreparedTask::Decompose { .. } => "decompose",
            PreparedTask::SplitIdempotent { .. } => "split-idempotent",
            PreparedTask::StableHom { .. } => "stable-hom",
            PreparedTask::Kstab { .. } => "kstab",
            PreparedTask::Induce { .. } => "induce",
            PreparedTask::Strictify { .. } => "strictify",
            PreparedTask::BaseChange { .. } => "base-change",
        }
    }
}

fn run_validate(rb: &mut ReportBuilder, objects: &[(String, EquivariantMF)]) -> Result<bool> {
    let mut all_ok = true;
    let mut table = serde_json::Map::new();
    for (name, x) in objects {
        let report = validate_mf(x)?;
        let ok = report.ok();
        all_ok &= ok;
        if ok {
            // Only valid objects can be embedded: decoding a report runs the
            // validating constructors, so a broken object would make `verify`
            // fail for structural reasons rather than a false certificate.
            rb.add_object(name, x)?;
        }
        table.insert(
            name.clone(),
            json!({
                "ok": ok,
                "violations": report
                    .violations
                    .iter()
                    .map(|v| json!({ "identity": v.identity, "details": v.details }))
                    .collect::<Vec<_>>(),
            }),
        );
    }
    rb.result("objects", Value::Object(table));
    rb.result("ok", json!(all_ok));
    Ok(all_ok)
}

fn run_decompose(rb: &mut ReportBuilder, object: &str, x: &EquivariantMF, seed: u64) -> Result<()> {
    let ks = ks_decompose(x, seed)?;
    rb.add_object(object, x)?;
    let k = ks.summands().len();
    let sname = |i: usize| format!("summand_{i}");
    let mut summary = Vec::with_capacity(k);
    for (i, s) in ks.summands().iter().enumerate() {
        rb.add_object(&sname(i), s.object())?;
        rb.add_morphism(&format!("projection_{i}"), object, &sname(i), s.projection())?;
        rb.add_morphism(&format!("inclusion_{i}"), &sname(i), object, s.inclusion())?;
        summary.push(json!({
            "name": sname(i),
            "rank": s.object().rank(),
            "contractible": s.is_contractible(),
        }));
    }
    rb.result("summands", Value::Array(summary));
    rb.result("contractible_count", json!(ks.contractible_count()));
    rb.result(
        "classes",
        Value::Array(
            ks.classes()
                .iter()
                .map(|c| {
                    json!({
                        "representative": sname(c.representative()),
                        "members": c.members().iter().map(|&i| sname(i)).collect::<Vec<_>>(),
                        "multiplicity": c.multiplicity(),
                    })
                })
                .collect(),
        ),
    );
    rb.result("signature", json!(ks.multiplicity_signature()));

    // Split identities, orthogonality, and completeness are exact.
    for i in 0..k {
        rb.certify_equal(
            &format!("projection_{i}∘inclusion_{i} = id"),
            MorphExpr::compose(&[&format!("projection_{i}"), &format!("inclusion_{i}")]),
            MorphExpr::identity(&sname(i)),
        );
        for j in 0..k {
            if i != j {
                rb.certify_equal(
                    &format!("projection_{j}∘inclusion_{i} = 0"),
                    MorphExpr::compose(&[&format!("projection_{j}"), &format!("inclusion_{i}")]),
                    MorphExpr::zero(&sname(i), &sname(j)),
                );
            }
        }
    }
    let one = Rat::from_i64(1);
    rb.certify_equal(
        "Σ inclusion_i∘projection_i = id",
        MorphExpr::sum(
            (0..k)
                .map(|i| (one.clone(), vec![format!("inclusion_{i}"), format!("projection_{i}")]))
                .collect(),
        ),
        MorphExpr::identity(object),
    );
    // Contractible summands carry their contraction; class members carry
    // mutually inverse stable isomorphisms to their representative.
    for (i, s) in ks.summands().iter().enumerate() {
        if s.is_contractible() {
            let id = MFMorphism::identity(s.object());
            let w = is_null_homotopic(&id)?
                .ok_or_else(|| Error::Internal("contractible summand lost its contraction".into()))?;
            rb.certify_homotopic(
                &format!("summand_{i} is contractible: id ≃ 0"),
                MorphExpr::identity(&sname(i)),
                MorphExpr::zero(&sname(i), &sname(i)),
                &w,
            );
        }
    }
    for c in ks.classes() {
        let r = c.representative();
        for &m in c.members() {
            if m == r {
                continue;
            }
            let (u, v) = stable_mutual_inverse(ks.summands()[r].object(), ks.summands()[m].object())?
                .ok_or_else(|| {
                    Error::Internal("class members stopped being stably isomorphic".into())
                })?;
            let un = format!("iso_{r}_to_{m}");
            let vn = format!("iso_{m}_to_{r}");
            rb.add_morphism(&un, &sname(r), &sname(m), &u)?;
            rb.add_morphism(&vn, &sname(m), &sname(r), &v)?;
            let vu = v.compose(&u)?;
            let uv = u.compose(&v)?;
            let w_r = homotopy_witness(&vu, &MFMorphism::identity(ks.summands()[r].object()))?
                .ok_or_else(|| Error::Internal("stable inverse lost its witness".into()))?;
            let w_m = homotopy_witness(&uv, &MFMorphism::identity(ks.summands()[m].object()))?
                .ok_or_else(|| Error::Internal("stable inverse lost its witness".into()))?;
            rb.certify_homotopic(
                &format!("{vn}∘{un} ≃ id"),
                MorphExpr::compose(&[&vn, &un]),
                MorphExpr::identity(&sname(r)),
                &w_r,
            );
            rb.certify_homotopic(
                &format!("{un}∘{vn} ≃ id"),
                MorphExpr::compose(&[&un, &vn]),
                MorphExpr::identity(&sname(m)),
                &w_m,
            );
        }
    }
    Ok(())
}

fn run_split(
    rb: &mut ReportBuilder,
    object: &str,
    x: &EquivariantMF,
    e: &MFMorphism,
    strict: bool,
    seed: u64,
) -> Result<()> {
    let split = if strict {
        split_strict_idempotent(x, e)?
    } else {
        split_homotopy_idempotent(x, e, seed)?
    };
    rb.add_object(object, x)?;
    rb.add_object("summand", split.object())?;
    rb.add_morphism("idempotent", object, object, e)?;
    rb.add_morphism("projection", object, "summand", split.projection())?;
    rb.add_morphism("inclusion", "summand", object, split.inclusion())?;
    rb.result("mode", json!(if split.is_strict() { "strict" } else { "homotopy" }));
    rb.result("summand_rank", json!(split.object().rank()));
    if split.is_strict() {
        rb.certify_equal(
            "idempotent∘idempotent = idempotent",
            MorphExpr::compose(&["idempotent", "idempotent"]),
            MorphExpr::name("idempotent"),
        );
        rb.certify_equal(
            "projection∘inclusion = id",
            MorphExpr::compose(&["projection", "inclusion"]),
            MorphExpr::identity("summand"),
        );
        rb.certify_equal(
            "inclusion∘projection = idempotent",
            MorphExpr::compose(&["inclusion", "projection"]),
            MorphExpr::name("idempotent"),
        );
    } else {
        let e2 = e.compose(e)?;
        let w_idem = homotopy_witness(&e2, e)?
            .ok_or_else(|| Error::Internal("idempotency witness disappeared".into()))?;
        rb.certify_homotopic(
            "idempotent∘idempotent ≃ idempotent",
            MorphExpr::compose(&["idempotent", "idempotent"]),
            MorphExpr::name("idempotent"),
            &w_idem,
        );
        let w_retract = split
            .retract_witness()
            .ok_or_else(|| Error::Internal("homotopy split lacks a retract witness".into()))?;
        rb.certify_homotopic(
            "projection∘inclusion ≃ id",
            MorphExpr::compose(&["projection", "inclusion"]),
            MorphExpr::identity("summand"),
            w_retract,
        );
        let w_e = split
            .idempotent_witness()
            .ok_or_else(|| Error::Internal("homotopy split lacks an idempotent witness".into()))?;
        rb.certify_homotopic(
            "inclusion∘projection ≃ idempotent",
            MorphExpr::compose(&["inclusion", "projection"]),
            MorphExpr::name("idempotent"),
            w_e,
        );
    }
    Ok(())
}

fn run_stable_hom(
    rb: &mut ReportBuilder,
    source: &str,
    target: &str,
    x: &EquivariantMF,
    y: &EquivariantMF,
) -> Result<()> {
    let h = stable_hom(x, y)?;
    rb.add_object(source, x)?;
    if source != target {
        rb.add_object(target, y)?;
    }
    rb.result("dim", json!(h.dim()));
    rb.result("strict_dim", json!(h.strict_dim()));
    rb.result("boundary_dim", json!(h.boundary_dim()));
    for i in 0..h.dim() {
        let rep = h.representative(i)?;
        rb.add_morphism(&format!("representative_{i}"), source, target, &rep)?;
    }
    Ok(())
}

fn run_kstab(
    rb: &mut ReportBuilder,
    ring: &Arc<GradedRing>,
    max_steps: usize,
    degree_bound: i64,
) -> Result<()> {
    let (tail, x) = kstab_tail_with(ring, max_steps, degree_bound)?;
    let s = tail
        .period_start()
        .ok_or_else(|| Error::Internal("periodic tail lost its period".into()))?;
    rb.add_object("kstab", &x)?;
    rb.result("period_start", json!(s));
    rb.result("steps", json!(tail.matrices().len()));
    rb.result("max_steps", json!(max_steps));
    rb.result("degree_bound", json!(degree_bound));
    let mut betti = vec![tail.matrices()[0].tgt().rank()];
    betti.extend(tail.matrices().iter().map(|m| m.src().rank()));
    rb.result("betti", json!(betti));
    let d_s = &tail.matrices()[s - 1];
    let d_s2 = &tail.matrices()[s + 1];
    rb.certify_matrix_equal(
        "d_{s+2} = d_s twisted by deg f",
        d_s,
        d_s2,
        ring.potential_degree(),
    );
    Ok(())
}

fn run_induce(rb: &mut ReportBuilder, object: &str, x: &EquivariantMF) -> Result<()> {
    let plain = forget(x)?;
    let y = induce(&plain, x.action())?;
    rb.add_object(object, x)?;
    rb.add_object("induced", &y)?;
    rb.result("group_order", json!(x.group_order()));
    rb.result("induced_rank", json!(y.rank()));
    Ok(())
}

fn run_strictify(
    rb: &mut ReportBuilder,
    object: &str,
    coherent: &HomotopyEquivariantObject,
    seed: u64,
) -> Result<()> {
    let p = coherent.object();
    let action = coherent.action();
    let n = action.group().order();
    let res = strictify(coherent, seed)?;
    let z = res.object();
    let z_plain = forget(z)?;
    rb.add_object(object, p)?;
    rb.add_object("strictified", z)?;
    rb.add_object("strictified_plain", &z_plain)?;
    rb.add_morphism("comparison", object, "strictified_plain", res.comparison())?;
    rb.add_morphism("comparison_inverse", "strictified_plain", object, res.comparison_inverse())?;
    rb.result("group_order", json!(n));
    rb.result("strictified_rank", json!(z.rank()));

    // The comparison is a stable equivalence.
    let ww = res.comparison().compose(res.comparison_inverse())?;
    let w_fwd = homotopy_witness(&ww, &MFMorphism::identity(&z_plain))?
        .ok_or_else(|| Error::Internal("comparison lost its stable inverse".into()))?;
    rb.certify_homotopic(
        "comparison∘comparison_inverse ≃ id",
        MorphExpr::compose(&["comparison", "comparison_inverse"]),
        MorphExpr::identity("strictified_plain"),
        &w_fwd,
    );
    let wv = res.comparison_inverse().compose(res.comparison())?;
    let w_bwd = homotopy_witness(&wv, &MFMorphism::identity(p))?
        .ok_or_else(|| Error::Internal("comparison lost its stable inverse".into()))?;
    rb.certify_homotopic(
        "comparison_inverse∘comparison ≃ id",
        MorphExpr::compose(&["comparison_inverse", "comparison"]),
        MorphExpr::identity(object),
        &w_bwd,
    );

    // θ-compatibility per group element: θ^Z_g∘σ_g(w) ≃ w∘θ_g, with every
    // factor embedded as a named, revalidated morphism.
    let z_coherent = HomotopyEquivariantObject::from_genuine(z)?;
    for g in 0..n {
        let label = action.group().label(g).to_string();
        let p_twist = twisted_object(p, action, g)?;
        let z_twist = twisted_object(&z_plain, action, g)?;
        let pt_name = format!("{object}_twist_{label}");
        let zt_name = format!("strictified_plain_twist_{label}");
        rb.add_object(&pt_name, &p_twist)?;
        rb.add_object(&zt_name, &z_twist)?;
        let theta_name = format!("theta_{label}");
        rb.add_morphism(&theta_name, &pt_name, object, coherent.theta(g))?;
        let theta_z_name = format!("theta_strictified_{label}");
        rb.add_morphism(&theta_z_name, &zt_name, "strictified_plain", z_coherent.theta(g))?;
        let w = res.comparison();
        let w_twisted = MFMorphism::new(
            &p_twist,
            &z_twist,
            action.apply_matrix(g, w.u0())?,
            action.apply_matrix(g, w.u1())?,
        )?;
        let wt_name = format!("comparison_twist_{label}");
        rb.add_morphism(&wt_name, &pt_name, &zt_name, &w_twisted)?;
        rb.certify_homotopic(
            &format!("θ-compatibility at {label}"),
            MorphExpr::compose(&[&theta_z_name, &wt_name]),
            MorphExpr::compose(&["comparison", &theta_name]),
            &res.theta_witnesses()[g],
        );
    }
    Ok(())
}

fn run_base_change(
    rb: &mut ReportBuilder,
    object: &str,
    x: &EquivariantMF,
    hom: &RingHom,
    target_action: &Arc<RingAction>,
) -> Result<()> {
    let y = eqmf::functors::base_change(hom, x, target_action)?;
    rb.add_object(object, x)?;
    rb.add_object("image", &y)?;
    rb.result(
        "images",
        json!(hom
            .images()
            .iter()
            .map(|p| p.to_canonical_string(hom.target().vars(), hom.target().field()))
            .collect::<Vec<_>>()),
    );
    rb.result("target_variables", json!(hom.target().vars()));
    Ok(())
}
