//! Problem configurations: a JSON document naming a graded ring, an optional
//! group action, a table of named objects, and a table of named tasks.
//!
//! Decoding is staged so that a config validates before any computation:
//!
//! 1. [`ProblemConfig::from_json`] checks the document shape and builds the
//!    ring and the group action. Structural problems (missing keys, wrong
//!    types, malformed polynomial strings) surface as [`Error::Parse`];
//!    semantic ones (inhomogeneous potential, a table that is not a group,
//!    images that do not define an action) as the corresponding domain error.
//! 2. [`build_objects`] checks that every name referenced anywhere resolves,
//!    that object definitions are acyclic, and then constructs every object
//!    needed by the selected tasks through the validating constructors.
//!    Objects that only a `validate` task looks at are assembled without the
//!    identity checks, so the task can report the full violation list.
//!
//! Polynomial entries are written as strings (`"x^2 - 3*x*y"`) and parsed by
//! the ring parser; everything else is plain JSON.

use std::collections::BTreeMap;
use std::sync::Arc;

use eqmf::error::{Error, Result};
use eqmf::field::Field;
use eqmf::functors::{forget, induce};
use eqmf::graded::{GradedFreeModule, GradedMatrix};
use eqmf::group::{GroupData, RingAction};
use eqmf::mf::{direct_sum, shift, twist, EquivariantMF};
use eqmf::poly::Polynomial;
use eqmf::ring::GradedRing;
use eqmf::serialize::{field_from_json, get, get_array, get_i64, get_str, CONFIG_SCHEMA};
use serde_json::Value;

/// A decoded problem configuration. Object and task tables keep their specs
/// un-built; [`build_objects`] turns specs into validated objects.
pub struct ProblemConfig {
    pub label: String,
    pub seed: u64,
    pub ring: Arc<GradedRing>,
    /// The configured group action; the trivial one when no group block is
    /// present.
    pub action: Arc<RingAction>,
    pub objects: BTreeMap<String, ObjectSpec>,
    pub tasks: BTreeMap<String, TaskSpec>,
}

/// How one named object is built.
pub enum ObjectSpec {
    /// The 1×1 factorization `(p, q)` of `f = p·q` with the trivial group.
    RankOne { p: String, q: String },
    /// Explicit differentials (and, for a nontrivial group, explicit action
    /// matrices) between free modules with the given weights.
    Matrices {
        p0: Vec<i64>,
        p1: Vec<i64>,
        a: Vec<Vec<String>>,
        b: Vec<Vec<String>>,
        m0: Option<Vec<Vec<Vec<String>>>>,
        m1: Option<Vec<Vec<Vec<String>>>>,
    },
    /// Direct sum of previously named objects (all with equal actions).
    DirectSum { of: Vec<String> },
    /// Internal-degree twist of a named object.
    Twist { of: String, by: i64 },
    /// Homological shift of a named object.
    Shift { of: String },
    /// Induction of (the underlying plain object of) a named object along
    /// the configured group action.
    Induce { of: String },
}

/// One morphism given by explicit degree-0 component matrices.
pub struct MorphismSpec {
    pub u0: Vec<Vec<String>>,
    pub u1: Vec<Vec<String>>,
}

/// One task. Names mentioned here refer to the object table.
pub enum TaskSpec {
    /// Report every violated defining identity of one object (or of all
    /// objects when none is named).
    Validate { object: Option<String> },
    /// Krull–Schmidt decomposition with full certificates.
    Decompose { object: String },
    /// Split the given idempotent endomorphism, strictly when it is exactly
    /// idempotent and up to homotopy otherwise.
    SplitIdempotent { object: String, e: MorphismSpec },
    /// Dimensions and representatives of the stable hom space.
    StableHom { source: String, target: String },
    /// The stabilized residue-field factorization of the configured ring.
    Kstab { max_steps: Option<usize>, degree_bound: Option<i64> },
    /// Induce the named object along the configured action.
    Induce { object: String },
    /// Strictify a homotopy-coherent structure `(object, θ_g)` given by
    /// explicit twist maps, one per group element in element order.
    Strictify { object: String, thetas: Vec<MorphismSpec> },
    /// Transport a trivial-group object along a ring homomorphism into the
    /// given target ring (variable images are polynomial strings).
    BaseChange { object: String, target_ring: Arc<GradedRing>, images: Vec<String> },
}

impl TaskSpec {
    /// The operation name as spelled in configs and subcommands.
    pub fn op(&self) -> &'static str {
        match self {
            TaskSpec::Validate { .. } => "validate",
            TaskSpec::Decompose { .. } => "decompose",
            TaskSpec::SplitIdempotent { .. } => "split-idempotent",
            TaskSpec::StableHom { .. } => "stable-hom",
            TaskSpec::Kstab { .. } => "kstab",
            TaskSpec::Induce { .. } => "induce",
            TaskSpec::Strictify { .. } => "strictify",
            TaskSpec::BaseChange { .. } => "base-change",
        }
    }

    /// Object-table names this task reads.
    pub fn references(&self) -> Vec<&str> {
        match self {
            TaskSpec::Validate { object } => object.iter().map(String::as_str).collect(),
            TaskSpec::Decompose { object }
            | TaskSpec::SplitIdempotent { object, .. }
            | TaskSpec::Induce { object }
            | TaskSpec::Strictify { object, .. }
            | TaskSpec::BaseChange { object, .. } => vec![object],
            TaskSpec::StableHom { source, target } => vec![source, target],
            TaskSpec::Kstab { .. } => vec![],
        }
    }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.len() <= 64
        && s.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn checked_name(s: &str, what: &str) -> Result<String> {
    if valid_name(s) {
        Ok(s.to_string())
    } else {
        Err(Error::Parse(format!(
            "{what} name `{s}` must be 1-64 characters from [A-Za-z0-9_.-]"
        )))
    }
}

fn string_matrix(v: &Value, key: &str) -> Result<Vec<Vec<String>>> {
    get_array(v, key)?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse(format!("`{key}` rows must be arrays")))?
                .iter()
                .map(|e| {
                    e.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse(format!("`{key}` entries must be polynomial strings")))
                })
                .collect()
        })
        .collect()
}

fn weight_vec(v: &Value, key: &str) -> Result<Vec<i64>> {
    get_array(v, key)?
        .iter()
        .map(|w| w.as_i64().ok_or_else(|| Error::Parse(format!("`{key}` must list integer weights"))))
        .collect()
}

fn ring_from_config(v: &Value) -> Result<Arc<GradedRing>> {
    let field = match v.get("field") {
        Some(f) => field_from_json(f)?,
        None => Field::rationals(),
    };
    let vars: Vec<String> = get_array(v, "variables")?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse("`variables` must list variable names".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let weights: Vec<u32> = get_array(v, "weights")?
        .iter()
        .map(|w| {
            w.as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("`weights` must list positive integers".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let potential_src = get_str(v, "potential")?;
    let potential = Polynomial::parse(potential_src, &vars, &field)?;
    GradedRing::new(field, vars, weights, potential)
}

/// Apply the generator images `k` times to each variable, producing the
/// image table of `g^k`.
fn iterate_images(
    ring: &Arc<GradedRing>,
    generator: &[Polynomial],
    k: usize,
) -> Result<Vec<Polynomial>> {
    let field = ring.field();
    let mut current: Vec<Polynomial> = (0..ring.nvars())
        .map(|i| Polynomial::variable(ring.nvars(), i, field))
        .collect();
    for _ in 0..k {
        current = current
            .iter()
            .map(|p| p.substitute(generator, field, |c| Ok(c.clone())))
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(current)
}

fn action_from_config(ring: &Arc<GradedRing>, v: &Value) -> Result<Arc<RingAction>> {
    let parse_images_row = |row: &Value| -> Result<Vec<Polynomial>> {
        let imgs = row
            .as_array()
            .ok_or_else(|| Error::Parse("each image row must list one polynomial per variable".into()))?;
        imgs.iter()
            .map(|s| {
                let src = s
                    .as_str()
                    .ok_or_else(|| Error::Parse("variable images must be polynomial strings".into()))?;
                ring.parse(src)
            })
            .collect()
    };
    if let Some(kind) = v.get("kind") {
        if kind.as_str() != Some("cyclic") {
            return Err(Error::Parse(format!("unknown group kind {kind}")));
        }
        let order = get(v, "order")?
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Parse("cyclic `order` must be a positive integer".into()))?;
        let generator = parse_images_row(get(v, "generator_images")?)?;
        let group = GroupData::cyclic(order)?;
        let images = (0..order)
            .map(|k| iterate_images(ring, &generator, k))
            .collect::<Result<Vec<_>>>()?;
        return RingAction::new(ring.clone(), group, images);
    }
    let group = eqmf::serialize::group_from_json(v)?;
    let rows = get_array(v, "images")?;
    let images = rows.iter().map(parse_images_row).collect::<Result<Vec<_>>>()?;
    RingAction::new(ring.clone(), group, images)
}

fn morphism_spec(v: &Value) -> Result<MorphismSpec> {
    Ok(MorphismSpec { u0: string_matrix(v, "u0")?, u1: string_matrix(v, "u1")? })
}

fn object_spec(v: &Value) -> Result<ObjectSpec> {
    match get_str(v, "kind")? {
        "rank_one" => Ok(ObjectSpec::RankOne {
            p: get_str(v, "p")?.to_string(),
            q: get_str(v, "q")?.to_string(),
        }),
        "matrices" => {
            let action_grid = |key: &str| -> Result<Option<Vec<Vec<Vec<String>>>>> {
                match v.get(key) {
                    None => Ok(None),
                    Some(list) => list
                        .as_array()
                        .ok_or_else(|| Error::Parse(format!("`{key}` must list one matrix per group element")))?
                        .iter()
                        .map(|m| {
                            m.as_array()
                                .ok_or_else(|| Error::Parse(format!("`{key}` matrices must be row arrays")))?
                                .iter()
                                .map(|row| {
                                    row.as_array()
                                        .ok_or_else(|| Error::Parse(format!("`{key}` rows must be arrays")))?
                                        .iter()
                                        .map(|e| {
                                            e.as_str().map(str::to_string).ok_or_else(|| {
                                                Error::Parse(format!("`{key}` entries must be polynomial strings"))
                                            })
                                        })
                                        .collect::<Result<Vec<String>>>()
                                })
                                .collect::<Result<Vec<Vec<String>>>>()
                        })
                        .collect::<Result<Vec<_>>>()
                        .map(Some),
                }
            };
            Ok(ObjectSpec::Matrices {
                p0: weight_vec(v, "p0")?,
                p1: weight_vec(v, "p1")?,
                a: string_matrix(v, "a")?,
                b: string_matrix(v, "b")?,
                m0: action_grid("m0")?,
                m1: action_grid("m1")?,
            })
        }
        "direct_sum" => {
            let of = get_array(v, "of")?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("`of` must list object names".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            if of.is_empty() {
                return Err(Error::Parse("`direct_sum` needs at least one summand".into()));
            }
            Ok(ObjectSpec::DirectSum { of })
        }
        "twist" => Ok(ObjectSpec::Twist {
            of: get_str(v, "of")?.to_string(),
            by: get_i64(v, "by")?,
        }),
        "shift" => Ok(ObjectSpec::Shift { of: get_str(v, "of")?.to_string() }),
        "induce" => Ok(ObjectSpec::Induce { of: get_str(v, "of")?.to_string() }),
        other => Err(Error::Parse(format!("unknown object kind `{other}`"))),
    }
}

fn task_spec(v: &Value) -> Result<TaskSpec> {
    match get_str(v, "op")? {
        "validate" => Ok(TaskSpec::Validate {
            object: match v.get("object") {
                None => None,
                Some(s) => Some(
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("`object` must be a name".into()))?,
                ),
            },
        }),
        "decompose" => Ok(TaskSpec::Decompose { object: get_str(v, "object")?.to_string() }),
        "split-idempotent" => Ok(TaskSpec::SplitIdempotent {
            object: get_str(v, "object")?.to_string(),
            e: morphism_spec(get(v, "idempotent")?)?,
        }),
        "stable-hom" => Ok(TaskSpec::StableHom {
            source: get_str(v, "source")?.to_string(),
            target: get_str(v, "target")?.to_string(),
        }),
        "kstab" => Ok(TaskSpec::Kstab {
            max_steps: match v.get("max_steps") {
                None => None,
                Some(n) => Some(
                    n.as_u64()
                        .and_then(|n| usize::try_from(n).ok())
                        .ok_or_else(|| Error::Parse("`max_steps` must be a nonnegative integer".into()))?,
                ),
            },
            degree_bound: match v.get("degree_bound") {
                None => None,
                Some(n) => {
                    Some(n.as_i64().ok_or_else(|| Error::Parse("`degree_bound` must be an integer".into()))?)
                }
            },
        }),
        "induce" => Ok(TaskSpec::Induce { object: get_str(v, "object")?.to_string() }),
        "strictify" => Ok(TaskSpec::Strictify {
            object: get_str(v, "object")?.to_string(),
            thetas: get_array(v, "thetas")?.iter().map(morphism_spec).collect::<Result<Vec<_>>>()?,
        }),
        "base-change" => Ok(TaskSpec::BaseChange {
            object: get_str(v, "object")?.to_string(),
            target_ring: ring_from_config(get(v, "target")?)?,
            images: get_array(v, "images")?
                .iter()
                .map(|s| {
                    s.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Parse("`images` must list polynomial strings".into()))
                })
                .collect::<Result<Vec<_>>>()?,
        }),
        other => Err(Error::Parse(format!("unknown op `{other}`"))),
    }
}

impl ProblemConfig {
    pub fn from_json(doc: &Value) -> Result<ProblemConfig> {
        let schema = get_str(doc, "schema")?;
        if schema != CONFIG_SCHEMA {
            return Err(Error::Parse(format!(
                "schema mismatch: expected `{CONFIG_SCHEMA}`, found `{schema}`"
            )));
        }
        let label = match doc.get("label") {
            None => String::new(),
            Some(s) => s
                .as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Parse("`label` must be a string".into()))?,
        };
        let seed = match doc.get("seed") {
            None => 0,
            Some(s) => s.as_u64().ok_or_else(|| Error::Parse("`seed` must be a nonnegative integer".into()))?,
        };
        let ring = ring_from_config(get(doc, "ring")?)?;
        let action = match doc.get("group") {
            None => RingAction::trivial_group(ring.clone()),
            Some(g) => action_from_config(&ring, g)?,
        };
        let mut objects = BTreeMap::new();
        if let Some(tbl) = doc.get("objects") {
            let map = tbl
                .as_object()
                .ok_or_else(|| Error::Parse("`objects` must be a name → spec table".into()))?;
            for (name, spec) in map {
                objects.insert(checked_name(name, "object")?, object_spec(spec)?);
            }
        }
        let mut tasks = BTreeMap::new();
        if let Some(tbl) = doc.get("tasks") {
            let map = tbl
                .as_object()
                .ok_or_else(|| Error::Parse("`tasks` must be a name → spec table".into()))?;
            for (name, spec) in map {
                tasks.insert(checked_name(name, "task")?, task_spec(spec)?);
            }
        }
        Ok(ProblemConfig { label, seed, ring, action, objects, tasks })
    }
}

fn spec_dependencies(spec: &ObjectSpec) -> Vec<&str> {
    match spec {
        ObjectSpec::RankOne { .. } | ObjectSpec::Matrices { .. } => vec![],
        ObjectSpec::DirectSum { of } => of.iter().map(String::as_str).collect(),
        ObjectSpec::Twist { of, .. } | ObjectSpec::Shift { of } | ObjectSpec::Induce { of } => {
            vec![of]
        }
    }
}

/// The objects a selected task set actually needs, fully built. Objects that
/// only `validate` tasks read are assembled without the defining-identity
/// checks and kept separately.
pub struct BuiltObjects {
    strict: BTreeMap<String, EquivariantMF>,
    lenient: BTreeMap<String, EquivariantMF>,
}

impl BuiltObjects {
    /// A fully validated object (absent for validate-only targets).
    pub fn strict(&self, name: &str) -> Result<&EquivariantMF> {
        self.strict
            .get(name)
            .ok_or_else(|| Error::Internal(format!("object `{name}` was not built strictly")))
    }

    /// The object as assembled for a `validate` task: unvalidated when it
    /// was lenient, the strict build otherwise.
    pub fn for_validation(&self, name: &str) -> Result<&EquivariantMF> {
        self.lenient
            .get(name)
            .or_else(|| self.strict.get(name))
            .ok_or_else(|| Error::Internal(format!("object `{name}` was not built")))
    }
}

fn parse_matrix(
    ring: &Arc<GradedRing>,
    src: &GradedFreeModule,
    tgt: &GradedFreeModule,
    shift: i64,
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
    GradedMatrix::new(src.clone(), tgt.clone(), shift, entries)
}

fn build_matrices_object(
    cfg: &ProblemConfig,
    name: &str,
    spec: &ObjectSpec,
    validated: bool,
) -> Result<EquivariantMF> {
    let ObjectSpec::Matrices { p0, p1, a, b, m0, m1 } = spec else {
        return Err(Error::Internal("not a matrices spec".into()));
    };
    let ring = &cfg.ring;
    let p0 = GradedFreeModule::new(ring.clone(), p0.clone());
    let p1 = GradedFreeModule::new(ring.clone(), p1.clone());
    let a = parse_matrix(ring, &p1, &p0, 0, a, &format!("{name}.a"))?;
    let b = parse_matrix(ring, &p0, &p1, ring.potential_degree(), b, &format!("{name}.b"))?;
    let n = cfg.action.group().order();
    let action_matrices = |key: &str,
                           given: &Option<Vec<Vec<Vec<String>>>>,
                           module: &GradedFreeModule|
     -> Result<Vec<GradedMatrix>> {
        match given {
            None => {
                if n == 1 {
                    Ok(vec![GradedMatrix::identity(module)])
                } else {
                    Err(Error::Validation(format!(
                        "object `{name}` needs `{key}` (one matrix per group element) under a nontrivial group"
                    )))
                }
            }
            Some(list) => {
                if list.len() != n {
                    return Err(Error::Validation(format!(
                        "object `{name}`: `{key}` lists {} matrices for a group of order {n}",
                        list.len()
                    )));
                }
                list.iter()
                    .enumerate()
                    .map(|(g, rows)| {
                        parse_matrix(ring, module, module, 0, rows, &format!("{name}.{key}[{g}]"))
                    })
                    .collect()
            }
        }
    };
    let m0 = action_matrices("m0", m0, &p0)?;
    let m1 = action_matrices("m1", m1, &p1)?;
    if validated {
        EquivariantMF::new(cfg.action.clone(), a, b, m0, m1)
    } else {
        Ok(EquivariantMF::assemble_unvalidated(cfg.action.clone(), a, b, m0, m1))
    }
}

fn build_object(
    cfg: &ProblemConfig,
    built: &mut BTreeMap<String, EquivariantMF>,
    name: &str,
) -> Result<EquivariantMF> {
    if let Some(x) = built.get(name) {
        return Ok(x.clone());
    }
    let spec = cfg
        .objects
        .get(name)
        .ok_or_else(|| Error::Validation(format!("unknown object `{name}`")))?;
    let x = match spec {
        ObjectSpec::RankOne { p, q } => EquivariantMF::rank_one(&cfg.ring, p, q)?,
        ObjectSpec::Matrices { .. } => build_matrices_object(cfg, name, spec, true)?,
        ObjectSpec::DirectSum { of } => {
            let mut acc = build_object(cfg, built, &of[0])?;
            for part in &of[1..] {
                acc = direct_sum(&acc, &build_object(cfg, built, part)?)?;
            }
            acc
        }
        ObjectSpec::Twist { of, by } => twist(&build_object(cfg, built, of)?, *by)?,
        ObjectSpec::Shift { of } => shift(&build_object(cfg, built, of)?)?,
        ObjectSpec::Induce { of } => {
            let plain = forget(&build_object(cfg, built, of)?)?;
            induce(&plain, &cfg.action)?
        }
    };
    built.insert(name.to_string(), x.clone());
    Ok(x)
}

/// Check that every name referenced by any task or object spec exists and
/// that object definitions are acyclic. Runs on the whole config regardless
/// of which tasks were selected.
pub fn check_references(cfg: &ProblemConfig) -> Result<()> {
    for (tname, task) in &cfg.tasks {
        for r in task.references() {
            if !cfg.objects.contains_key(r) {
                return Err(Error::Validation(format!(
                    "task `{tname}` references unknown object `{r}`"
                )));
            }
        }
        if let TaskSpec::BaseChange { images, target_ring, .. } = task {
            if images.len() != cfg.ring.nvars() {
                return Err(Error::Validation(format!(
                    "task `{tname}` gives {} variable images for {} variables",
                    images.len(),
                    cfg.ring.nvars()
                )));
            }
            let _ = target_ring;
        }
    }
    // Colors: 0 unvisited, 1 on the current path, 2 done.
    let mut color: BTreeMap<&str, u8> = BTreeMap::new();
    fn visit<'a>(
        cfg: &'a ProblemConfig,
        color: &mut BTreeMap<&'a str, u8>,
        name: &'a str,
    ) -> Result<()> {
        match color.get(name) {
            Some(1) => {
                return Err(Error::Validation(format!(
                    "object definitions form a cycle through `{name}`"
                )))
            }
            Some(2) => return Ok(()),
            _ => {}
        }
        let spec = cfg
            .objects
            .get(name)
            .ok_or_else(|| Error::Validation(format!("unknown object `{name}`")))?;
        color.insert(name, 1);
        for dep in spec_dependencies(spec) {
            visit(cfg, color, dep)?;
        }
        color.insert(name, 2);
        Ok(())
    }
    for name in cfg.objects.keys() {
        visit(cfg, &mut color, name)?;
    }
    Ok(())
}

/// Build every object the selected tasks need. A target that only `validate`
/// tasks read (and nothing else depends on) is assembled without the
/// defining-identity checks so the task can report all violations; every
/// other object goes through the validating constructors here, before any
/// task computes.
pub fn build_objects(
    cfg: &ProblemConfig,
    selected: &BTreeMap<String, &TaskSpec>,
) -> Result<BuiltObjects> {
    check_references(cfg)?;
    // Names read by non-validate tasks, plus every dependency of any spec.
    let mut strict_roots: Vec<&str> = Vec::new();
    let mut validate_targets: Vec<&str> = Vec::new();
    for task in selected.values() {
        match task {
            TaskSpec::Validate { object } => match object {
                Some(o) => validate_targets.push(o),
                None => validate_targets.extend(cfg.objects.keys().map(String::as_str)),
            },
            other => strict_roots.extend(other.references()),
        }
    }
    for spec in cfg.objects.values() {
        strict_roots.extend(spec_dependencies(spec));
    }
    let mut strict = BTreeMap::new();
    for root in strict_roots {
        build_object(cfg, &mut strict, root)?;
    }
    let mut lenient = BTreeMap::new();
    for name in validate_targets {
        if strict.contains_key(name) {
            continue;
        }
        let spec = cfg
            .objects
            .get(name)
            .ok_or_else(|| Error::Validation(format!("unknown object `{name}`")))?;
        match spec {
            ObjectSpec::Matrices { .. } => {
                lenient.insert(name.to_string(), build_matrices_object(cfg, name, spec, false)?);
            }
            _ => {
                build_object(cfg, &mut strict, name)?;
            }
        }
    }
    Ok(BuiltObjects { strict, lenient })
}
