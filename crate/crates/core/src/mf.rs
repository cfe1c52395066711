//! Equivariant matrix factorizations and their additive/triangulated
//! structure.
//!
//! An object is a pair of graded free modules `P0, P1` of equal rank with
//! maps `A: P1 → P0` (internal degree 0) and `B: P0 → P1` (internal degree
//! `deg f`) satisfying `A·B = B·A = f·I`, together with a semilinear action
//! of a finite group: per element `g` a pair of degree-0 matrices
//! `(M_g⁰, M_g¹)` obeying the cocycle rule `M_g · σ_g(M_h) = M_{gh}` and
//! commuting with the differential. The trivial group recovers plain matrix
//! factorizations.
//!
//! Suspension is `shift(X) = (P1⟨-d⟩, P0, -B, -A)` where `d = deg f`; two
//! suspensions equal the twist by `-d` on the nose, and the mapping cone of
//! the zero map is literally a direct sum, which the tests pin down.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{GradedFreeModule, GradedMatrix};
use crate::group::RingAction;
use crate::ring::GradedRing;

/// One failed identity inside a validation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    /// Which identity failed, e.g. "A·B = f·I".
    pub identity: String,
    /// Indices and values witnessing the failure.
    pub details: String,
}

/// Outcome of validating an object; empty means every identity holds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, identity: &str, details: String) {
        self.violations.push(Violation {
            identity: identity.to_string(),
            details,
        });
    }
}

/// A matrix factorization of the ring potential with a semilinear group
/// action.
#[derive(Clone, PartialEq, Eq)]
pub struct EquivariantMF {
    action: Arc<RingAction>,
    a: GradedMatrix,
    b: GradedMatrix,
    /// Action matrices on P0, one per group element.
    m0: Vec<GradedMatrix>,
    /// Action matrices on P1, one per group element.
    m1: Vec<GradedMatrix>,
}

impl std::fmt::Debug for EquivariantMF {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "EquivariantMF(rank {}, P0 {:?}, P1 {:?})",
            self.rank(),
            self.p0().weights(),
            self.p1().weights()
        )
    }
}

impl EquivariantMF {
    /// Build and fully validate an object.
    pub fn new(
        action: Arc<RingAction>,
        a: GradedMatrix,
        b: GradedMatrix,
        m0: Vec<GradedMatrix>,
        m1: Vec<GradedMatrix>,
    ) -> Result<Self> {
        let x = EquivariantMF { action, a, b, m0, m1 };
        let report = validate_mf(&x)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidObject(format!("{}: {}", v.identity, v.details)));
        }
        Ok(x)
    }

    /// Plain (trivial-group) factorization from the two differentials.
    pub fn plain(ring: &Arc<GradedRing>, a: GradedMatrix, b: GradedMatrix) -> Result<Self> {
        let action = RingAction::trivial_group(ring.clone());
        let m0 = vec![GradedMatrix::identity(a.tgt())];
        let m1 = vec![GradedMatrix::identity(a.src())];
        Self::new(action, a, b, m0, m1)
    }

    /// Equivariant object for a given action with explicit action matrices.
    pub fn with_action(
        action: Arc<RingAction>,
        a: GradedMatrix,
        b: GradedMatrix,
        m0: Vec<GradedMatrix>,
        m1: Vec<GradedMatrix>,
    ) -> Result<Self> {
        Self::new(action, a, b, m0, m1)
    }

    /// Assemble an object *without* checking any defining identity, for use
    /// by validation tooling that wants the complete [`validate_mf`] report
    /// on possibly-broken input. Every other consumer must go through
    /// [`EquivariantMF::new`]. The component shapes still have to be
    /// mutually consistent enough for the checks to run (same ring, action
    /// matrices indexed by the group), which [`validate_mf`] reports on
    /// rather than assumes.
    pub fn assemble_unvalidated(
        action: Arc<RingAction>,
        a: GradedMatrix,
        b: GradedMatrix,
        m0: Vec<GradedMatrix>,
        m1: Vec<GradedMatrix>,
    ) -> Self {
        EquivariantMF { action, a, b, m0, m1 }
    }

    /// The 1x1 factorization `(p, q)` of `f = p·q`, trivial group, with
    /// `P0` in degree 0 and `P1` in degree `deg p`.
    pub fn rank_one(ring: &Arc<GradedRing>, p: &str, q: &str) -> Result<Self> {
        let pp = ring.parse(p)?;
        let qq = ring.parse(q)?;
        let dp = ring
            .degree_of(&pp)?
            .ok_or_else(|| Error::InvalidObject("zero entry in rank-one factorization".into()))?;
        let p0 = GradedFreeModule::new(ring.clone(), vec![0]);
        let p1 = GradedFreeModule::new(ring.clone(), vec![dp]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![pp])?;
        let b = GradedMatrix::new(p0, p1, ring.potential_degree(), vec![qq])?;
        Self::plain(ring, a, b)
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        self.action.ring()
    }

    pub fn action(&self) -> &Arc<RingAction> {
        &self.action
    }

    pub fn p0(&self) -> &GradedFreeModule {
        self.a.tgt()
    }

    pub fn p1(&self) -> &GradedFreeModule {
        self.a.src()
    }

    pub fn rank(&self) -> usize {
        self.p0().rank()
    }

    pub fn a(&self) -> &GradedMatrix {
        &self.a
    }

    pub fn b(&self) -> &GradedMatrix {
        &self.b
    }

    pub fn m0(&self, g: usize) -> &GradedMatrix {
        &self.m0[g]
    }

    pub fn m1(&self, g: usize) -> &GradedMatrix {
        &self.m1[g]
    }

    pub fn group_order(&self) -> usize {
        self.action.group().order()
    }

    pub fn require_compatible(&self, other: &EquivariantMF) -> Result<()> {
        self.action.require_same_action(&other.action)
    }
}

/// Check every defining identity of an [`EquivariantMF`], returning all
/// violations (the first entry is the first failed identity).
pub fn validate_mf(x: &EquivariantMF) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let ring = x.ring().clone();
    let d_f = ring.potential_degree();

    if x.p0().rank() != x.p1().rank() {
        report.push(
            "rank P0 = rank P1",
            format!("ranks {} and {}", x.p0().rank(), x.p1().rank()),
        );
    }
    if x.a.shift() != 0 {
        report.push("A has internal degree 0", format!("shift {}", x.a.shift()));
    }
    if x.b.shift() != d_f {
        report.push(
            "B has internal degree deg f",
            format!("shift {} ≠ {}", x.b.shift(), d_f),
        );
    }
    if x.b.src() != x.p0() || x.b.tgt() != x.p1() {
        report.push(
            "B maps P0 to P1",
            "source/target modules of B do not match".into(),
        );
    }
    if !report.ok() {
        // Shape problems make the remaining identities ill-posed.
        return Ok(report);
    }

    let f_id0 = GradedMatrix::identity(x.p0()).mul_poly(ring.potential())?;
    let f_id1 = GradedMatrix::identity(x.p1()).mul_poly(ring.potential())?;
    let ab = x.a.compose(&x.b)?;
    if ab != f_id0 {
        let diff = ab.sub(&f_id0)?;
        let witness = first_nonzero(&diff, &ring);
        report.push("A·B = f·I", witness);
    }
    let ba = x.b.compose(&x.a)?;
    if ba != f_id1 {
        let diff = ba.sub(&f_id1)?;
        report.push("B·A = f·I", first_nonzero(&diff, &ring));
    }

    report
        .violations
        .extend(check_semilinear_module(x)?.violations);
    Ok(report)
}

/// Verify only the semilinear module axioms: unit, cocycle rule, and
/// equivariance of the differential. Reports every violated identity with a
/// witness entry.
pub fn check_semilinear_module(x: &EquivariantMF) -> Result<ValidationReport> {
    let mut report = ValidationReport::default();
    let ring = x.ring().clone();
    let action = x.action.clone();
    let group = action.group().clone();
    let n = group.order();

    if x.m0.len() != n || x.m1.len() != n {
        report.push(
            "one action matrix pair per group element",
            format!("got {} and {}, group order {}", x.m0.len(), x.m1.len(), n),
        );
        return Ok(report);
    }
    for g in group.elements() {
        let ok0 = x.m0[g].src() == x.p0() && x.m0[g].tgt() == x.p0() && x.m0[g].shift() == 0;
        let ok1 = x.m1[g].src() == x.p1() && x.m1[g].tgt() == x.p1() && x.m1[g].shift() == 0;
        if !ok0 || !ok1 {
            report.push(
                "action matrices are degree-0 endomorphisms",
                format!("element {}", group.label(g)),
            );
            return Ok(report);
        }
    }

    let e = group.identity();
    if x.m0[e] != GradedMatrix::identity(x.p0()) || x.m1[e] != GradedMatrix::identity(x.p1()) {
        report.push("M_e = I", "identity element acts nontrivially".into());
    }

    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            let lhs0 = x.m0[g].compose(&action.apply_matrix(g, &x.m0[h])?)?;
            if lhs0 != x.m0[gh] {
                report.push(
                    "cocycle M_g·σ_g(M_h) = M_gh on P0",
                    format!("g = {}, h = {}", group.label(g), group.label(h)),
                );
            }
            let lhs1 = x.m1[g].compose(&action.apply_matrix(g, &x.m1[h])?)?;
            if lhs1 != x.m1[gh] {
                report.push(
                    "cocycle M_g·σ_g(M_h) = M_gh on P1",
                    format!("g = {}, h = {}", group.label(g), group.label(h)),
                );
            }
        }
    }

    for g in group.elements() {
        let lhs = x.m0[g].compose(&action.apply_matrix(g, &x.a)?)?;
        let rhs = x.a.compose(&x.m1[g])?;
        if lhs != rhs {
            let diff = lhs.sub(&rhs)?;
            report.push(
                "M_g⁰·σ_g(A) = A·M_g¹",
                format!("g = {}, {}", group.label(g), first_nonzero(&diff, &ring)),
            );
        }
        let lhs = x.m1[g].compose(&action.apply_matrix(g, &x.b)?)?;
        let rhs = x.b.compose(&x.m0[g])?;
        if lhs != rhs {
            let diff = lhs.sub(&rhs)?;
            report.push(
                "M_g¹·σ_g(B) = B·M_g⁰",
                format!("g = {}, {}", group.label(g), first_nonzero(&diff, &ring)),
            );
        }
    }
    Ok(report)
}

fn first_nonzero(diff: &GradedMatrix, ring: &GradedRing) -> String {
    for i in 0..diff.tgt().rank() {
        for j in 0..diff.src().rank() {
            if !diff.at(i, j).is_zero() {
                return format!("entry ({i},{j}) differs by {}", ring.to_string(diff.at(i, j)));
            }
        }
    }
    "(no differing entry)".into()
}

/// Block-diagonal direct sum.
pub fn direct_sum(x: &EquivariantMF, y: &EquivariantMF) -> Result<EquivariantMF> {
    x.require_compatible(y)?;
    let d_f = x.ring().potential_degree();
    let a = GradedMatrix::block2(
        x.p1(),
        y.p1(),
        x.p0(),
        y.p0(),
        0,
        Some(x.a()),
        None,
        None,
        Some(y.a()),
    )?;
    let b = GradedMatrix::block2(
        x.p0(),
        y.p0(),
        x.p1(),
        y.p1(),
        d_f,
        Some(x.b()),
        None,
        None,
        Some(y.b()),
    )?;
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    for g in x.action().group().elements() {
        m0.push(GradedMatrix::block2(
            x.p0(),
            y.p0(),
            x.p0(),
            y.p0(),
            0,
            Some(x.m0(g)),
            None,
            None,
            Some(y.m0(g)),
        )?);
        m1.push(GradedMatrix::block2(
            x.p1(),
            y.p1(),
            x.p1(),
            y.p1(),
            0,
            Some(x.m1(g)),
            None,
            None,
            Some(y.m1(g)),
        )?);
    }
    EquivariantMF::new(x.action().clone(), a, b, m0, m1)
}

/// Suspension: swap the modules (twisting the new even part down by `deg f`)
/// and negate both differentials.
pub fn shift(x: &EquivariantMF) -> Result<EquivariantMF> {
    let d_f = x.ring().potential_degree();
    let new_p0 = x.p1().twist(-d_f);
    let new_p1 = x.p0().clone();
    // A' = -B as a degree-0 map P0 → P1⟨-d⟩; B' = -A of degree d.
    let a = x.b().neg().retarget(new_p1.clone(), new_p0.clone(), 0)?;
    let b = x.a().neg().retarget(new_p0.clone(), new_p1.clone(), d_f)?;
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    for g in x.action().group().elements() {
        m0.push(x.m1(g).retarget(new_p0.clone(), new_p0.clone(), 0)?);
        m1.push(x.m0(g).retarget(new_p1.clone(), new_p1.clone(), 0)?);
    }
    EquivariantMF::new(x.action().clone(), a, b, m0, m1)
}

/// Raise every generator degree by `t`.
pub fn twist(x: &EquivariantMF, t: i64) -> Result<EquivariantMF> {
    let a = x.a().twist(t);
    let b = x.b().twist(t);
    let m0 = x
        .action()
        .group()
        .elements()
        .map(|g| x.m0(g).twist(t))
        .collect();
    let m1 = x
        .action()
        .group()
        .elements()
        .map(|g| x.m1(g).twist(t))
        .collect();
    EquivariantMF::new(x.action().clone(), a, b, m0, m1)
}

/// Mapping cone of a chain map given by components `(u0: P0X → P0Y,
/// u1: P1X → P1Y)`. Underlying object `Y ⊕ shift(X)` with the map stacked
/// into the top-right corner. The component shapes are validated here; the
/// chain-map identities are validated by the final object construction.
pub fn cone_of_components(
    x: &EquivariantMF,
    y: &EquivariantMF,
    u0: &GradedMatrix,
    u1: &GradedMatrix,
) -> Result<EquivariantMF> {
    x.require_compatible(y)?;
    if u0.src() != x.p0() || u0.tgt() != y.p0() || u0.shift() != 0 {
        return Err(Error::DimensionMismatch("cone: u0 must map P0X → P0Y".into()));
    }
    if u1.src() != x.p1() || u1.tgt() != y.p1() || u1.shift() != 0 {
        return Err(Error::DimensionMismatch("cone: u1 must map P1X → P1Y".into()));
    }
    let d_f = x.ring().potential_degree();
    let sx = shift(x)?;
    // New even part: P0Y ⊕ P1X⟨-d⟩; new odd part: P1Y ⊕ P0X.
    let a = GradedMatrix::block2(
        y.p1(),
        sx.p1(),
        y.p0(),
        sx.p0(),
        0,
        Some(y.a()),
        Some(u0),
        None,
        Some(sx.a()),
    )?;
    // u1 as a block P1X⟨-d⟩ → P1Y of internal degree d.
    let u1_shifted = u1.retarget(sx.p0().clone(), y.p1().clone(), d_f)?;
    let b = GradedMatrix::block2(
        y.p0(),
        sx.p0(),
        y.p1(),
        sx.p1(),
        d_f,
        Some(y.b()),
        Some(&u1_shifted),
        None,
        Some(sx.b()),
    )?;
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    for g in x.action().group().elements() {
        m0.push(GradedMatrix::block2(
            y.p0(),
            sx.p0(),
            y.p0(),
            sx.p0(),
            0,
            Some(y.m0(g)),
            None,
            None,
            Some(sx.m0(g)),
        )?);
        m1.push(GradedMatrix::block2(
            y.p1(),
            sx.p1(),
            y.p1(),
            sx.p1(),
            0,
            Some(y.m1(g)),
            None,
            None,
            Some(sx.m1(g)),
        )?);
    }
    EquivariantMF::new(x.action().clone(), a, b, m0, m1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::group::GroupData;

    fn qx(f: &str) -> Arc<GradedRing> {
        GradedRing::parse_new(Field::rationals(), &["x"], &[1], f).unwrap()
    }

    #[test]
    fn validate_examples() {
        let r = qx("x^2");
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        assert!(validate_mf(&x).unwrap().ok());

        // Unit times f, both generators in degree 0.
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![0]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.one()]).unwrap();
        let b = GradedMatrix::new(p0, p1, 2, vec![r.parse("x^2").unwrap()]).unwrap();
        let u = EquivariantMF::plain(&r, a, b).unwrap();
        assert!(validate_mf(&u).unwrap().ok());

        // (x, x) against f = x³: the degree bookkeeping already forbids it.
        let r3 = qx("x^3");
        let bad = EquivariantMF::rank_one(&r3, "x", "x");
        assert!(matches!(bad, Err(Error::NotHomogeneous(_))));
        // Degree-legal entries whose product misses f: caught by A·B = f·I.
        let bad = EquivariantMF::rank_one(&r3, "x", "2*x^2");
        assert!(matches!(bad, Err(Error::InvalidObject(_))));
    }

    #[test]
    fn shift_squared_is_twist() {
        let r = qx("x^4");
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let ss = shift(&shift(&x).unwrap()).unwrap();
        let tw = twist(&x, -4).unwrap();
        assert_eq!(ss, tw);
    }

    #[test]
    fn shift_moves_weights() {
        let r = qx("x^2");
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let s = shift(&x).unwrap();
        // New even generator: old odd one twisted by -2.
        assert_eq!(s.p0().weights(), &[-1]);
        assert_eq!(s.p1().weights(), &[0]);
        assert_eq!(*s.a().at(0, 0), r.parse("-x").unwrap());
        assert!(validate_mf(&s).unwrap().ok());
    }

    #[test]
    fn cone_of_zero_is_direct_sum() {
        let r = qx("x^4");
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let y = EquivariantMF::rank_one(&r, "x^2", "x^2").unwrap();
        let u0 = GradedMatrix::zero(x.p0().clone(), y.p0().clone(), 0);
        let u1 = GradedMatrix::zero(x.p1().clone(), y.p1().clone(), 0);
        let c = cone_of_components(&x, &y, &u0, &u1).unwrap();
        let expected = direct_sum(&y, &shift(&x).unwrap()).unwrap();
        assert_eq!(c, expected);
    }

    #[test]
    fn cone_of_identity_validates() {
        let r = qx("x^2");
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let u0 = GradedMatrix::identity(x.p0());
        let u1 = GradedMatrix::identity(x.p1());
        let c = cone_of_components(&x, &x, &u0, &u1).unwrap();
        assert!(validate_mf(&c).unwrap().ok());
        assert_eq!(c.rank(), 2);
    }

    fn sign_action_ring() -> (Arc<GradedRing>, Arc<RingAction>) {
        let r = qx("x^2");
        let g = GroupData::cyclic(2).unwrap();
        let action = RingAction::new(
            r.clone(),
            g,
            vec![vec![r.parse("x").unwrap()], vec![r.parse("-x").unwrap()]],
        )
        .unwrap();
        (r, action)
    }

    fn sign_equivariant(e0: i64, e1: i64) -> Result<EquivariantMF> {
        let (r, action) = sign_action_ring();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x").unwrap()])?;
        let b = GradedMatrix::new(p0.clone(), p1.clone(), 2, vec![r.parse("x").unwrap()])?;
        let c0 = r.constant(r.field().from_i64(e0));
        let c1 = r.constant(r.field().from_i64(e1));
        let m0 = vec![
            GradedMatrix::identity(&p0),
            GradedMatrix::new(p0.clone(), p0.clone(), 0, vec![c0])?,
        ];
        let m1 = vec![
            GradedMatrix::identity(&p1),
            GradedMatrix::new(p1.clone(), p1.clone(), 0, vec![c1])?,
        ];
        EquivariantMF::with_action(action, a, b, m0, m1)
    }

    #[test]
    fn sign_structures_on_node() {
        // For x ↦ -x on (x, x): the generator must act by (ε0, ε1) with
        // ε0·(-x) = x·ε1, i.e. ε1 = -ε0; and ε² = 1 by the cocycle rule.
        assert!(sign_equivariant(1, -1).is_ok());
        assert!(sign_equivariant(-1, 1).is_ok());
        // (1, 1) breaks equivariance of the differential.
        let bad = sign_equivariant(1, 1);
        assert!(matches!(bad, Err(Error::InvalidObject(_))));
        // (2, -2) satisfies equivariance but breaks the cocycle (2² ≠ 1).
        let bad = sign_equivariant(2, -2);
        assert!(matches!(bad, Err(Error::InvalidObject(_))));
    }

    #[test]
    fn semilinear_report_details() {
        // Build the failing structure without the constructor gate to
        // inspect the report: violate equivariance with (1, 1).
        let (r, action) = sign_action_ring();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x").unwrap()]).unwrap();
        let b = GradedMatrix::new(p0.clone(), p1.clone(), 2, vec![r.parse("x").unwrap()]).unwrap();
        let x = EquivariantMF {
            action,
            a,
            b,
            m0: vec![GradedMatrix::identity(&p0), GradedMatrix::identity(&p0)],
            m1: vec![GradedMatrix::identity(&p1), GradedMatrix::identity(&p1)],
        };
        let report = check_semilinear_module(&x).unwrap();
        assert!(!report.ok());
        assert!(report.violations[0].identity.contains("σ_g(A)"));
        // Trivial group on a valid object: clean report.
        let r2 = qx("x^2");
        let y = EquivariantMF::rank_one(&r2, "x", "x").unwrap();
        assert!(check_semilinear_module(&y).unwrap().ok());
    }

    #[test]
    fn equivariant_closure_under_constructions() {
        let x = sign_equivariant(1, -1).unwrap();
        let y = sign_equivariant(-1, 1).unwrap();
        let s = direct_sum(&x, &y).unwrap();
        assert!(validate_mf(&s).unwrap().ok());
        let sh = shift(&s).unwrap();
        assert!(validate_mf(&sh).unwrap().ok());
        let tw = twist(&sh, 3).unwrap();
        assert!(validate_mf(&tw).unwrap().ok());
        assert_eq!(shift(&shift(&x).unwrap()).unwrap(), twist(&x, -2).unwrap());
    }
}
