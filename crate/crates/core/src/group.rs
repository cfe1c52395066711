//! Finite groups acting on the ring, and the twisted group ring.
//!
//! A group is an explicit multiplication table at desk scale. An action
//! assigns to each element a graded ring automorphism fixing the potential;
//! actions compose on the left, `σ_g ∘ σ_h = σ_{gh}` — the unique convention
//! under which the twisted product `(a·g)(b·h) = a σ_g(b) · gh` is
//! associative, which construction-time checks enforce.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::GradedMatrix;
use crate::poly::Polynomial;
use crate::ring::GradedRing;

/// Finite group given by a full multiplication table.
#[derive(Debug)]
pub struct GroupData {
    labels: Vec<String>,
    /// `table[g][h]` is the index of `g·h`.
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl PartialEq for GroupData {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.table == other.table
    }
}
impl Eq for GroupData {}

impl GroupData {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Arc<Self>> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        {
            let mut sorted = labels.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::InvalidGroup("duplicate element labels".into()));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table must be |G| x |G|".into()));
        }
        if table.iter().flatten().any(|&v| v >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        // Identity: a two-sided unit.
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        // Inverses.
        let mut inverses = vec![usize::MAX; n];
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", labels[g])))?;
            inverses[g] = inv;
        }
        // Associativity.
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            labels[a], labels[b], labels[c]
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(GroupData {
            labels,
            table,
            identity,
            inverses,
        }))
    }

    /// Build from a table written with labels instead of indices.
    pub fn from_label_table(labels: Vec<String>, rows: Vec<Vec<String>>) -> Result<Arc<Self>> {
        let index = |l: &str| -> Result<usize> {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown label {l:?} in table")))
        };
        let mut table = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut r = Vec::with_capacity(row.len());
            for l in row {
                r.push(index(l)?);
            }
            table.push(r);
        }
        Self::new(labels, table)
    }

    pub fn trivial() -> Arc<Self> {
        Self::new(vec!["e".into()], vec![vec![0]]).expect("trivial group is a group")
    }

    /// Cyclic group of order `n` with labels e, g, g^2, ….
    pub fn cyclic(n: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let labels = (0..n)
            .map(|i| match i {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Self::new(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidGroup(format!("no element labelled {label:?}")))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn same_group(&self, other: &GroupData) -> bool {
        self == other
    }
}

/// Action of a finite group on the ring by graded automorphisms fixing the
/// potential.
#[derive(Debug)]
pub struct RingAction {
    ring: Arc<GradedRing>,
    group: Arc<GroupData>,
    /// `images[g][i]` is the image of the i-th variable under `σ_g`.
    images: Vec<Vec<Polynomial>>,
}

impl PartialEq for RingAction {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring)
            && self.group == other.group
            && self.images == other.images
    }
}
impl Eq for RingAction {}

impl RingAction {
    pub fn new(
        ring: Arc<GradedRing>,
        group: Arc<GroupData>,
        images: Vec<Vec<Polynomial>>,
    ) -> Result<Arc<Self>> {
        let n = group.order();
        if images.len() != n || images.iter().any(|v| v.len() != ring.nvars()) {
            return Err(Error::InvalidAction(
                "need one variable image per group element per variable".into(),
            ));
        }
        // Degree preservation: image of x_i is homogeneous of weight w_i.
        for (g, imgs) in images.iter().enumerate() {
            for (i, p) in imgs.iter().enumerate() {
                match ring.degree_of(p)? {
                    Some(d) if d == ring.weights()[i] as i64 => {}
                    got => {
                        return Err(Error::InvalidAction(format!(
                            "image of {} under {} must be homogeneous of degree {}, found {got:?}",
                            ring.vars()[i],
                            group.label(g),
                            ring.weights()[i]
                        )))
                    }
                }
            }
        }
        let action = RingAction {
            ring: ring.clone(),
            group: group.clone(),
            images,
        };
        // Identity element acts as the identity map.
        for i in 0..ring.nvars() {
            if action.images[group.identity()][i] != ring.variable(i) {
                return Err(Error::InvalidAction(
                    "identity element must act as the identity".into(),
                ));
            }
        }
        // Left-action composition law: σ_g(σ_h(x_i)) = σ_{gh}(x_i).
        for g in group.elements() {
            for h in group.elements() {
                let gh = group.mul(g, h);
                for i in 0..ring.nvars() {
                    let composed = action.apply(g, &action.images[h][i])?;
                    if composed != action.images[gh][i] {
                        return Err(Error::InvalidAction(format!(
                            "composition law fails: σ_{}(σ_{}({})) ≠ σ_{}({})",
                            group.label(g),
                            group.label(h),
                            ring.vars()[i],
                            group.label(gh),
                            ring.vars()[i]
                        )));
                    }
                }
            }
        }
        // The potential is fixed.
        for g in group.elements() {
            if action.apply(g, ring.potential())? != *ring.potential() {
                return Err(Error::InvalidAction(format!(
                    "potential is not fixed by {}",
                    group.label(g)
                )));
            }
        }
        Ok(Arc::new(action))
    }

    /// Trivial action of a given group.
    pub fn trivial(ring: Arc<GradedRing>, group: Arc<GroupData>) -> Arc<Self> {
        let vars: Vec<Polynomial> = (0..ring.nvars()).map(|i| ring.variable(i)).collect();
        let images = vec![vars; group.order()];
        Self::new(ring, group, images).expect("trivial action is valid")
    }

    /// Trivial action of the one-element group.
    pub fn trivial_group(ring: Arc<GradedRing>) -> Arc<Self> {
        Self::trivial(ring, GroupData::trivial())
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn variable_image(&self, g: usize, i: usize) -> &Polynomial {
        &self.images[g][i]
    }

    /// Apply `σ_g` to a polynomial.
    pub fn apply(&self, g: usize, p: &Polynomial) -> Result<Polynomial> {
        let field = self.ring.field().clone();
        p.substitute(&self.images[g], &field, &|c: &crate::field::Scalar| Ok(c.clone()))
    }

    /// Apply `σ_g` entrywise to a graded matrix (degree-legality preserved
    /// because the action is degree-preserving).
    pub fn apply_matrix(&self, g: usize, m: &GradedMatrix) -> Result<GradedMatrix> {
        m.map_entries(|p| self.apply(g, p))
    }

    pub fn is_trivial(&self) -> bool {
        (0..self.group.order())
            .all(|g| (0..self.ring.nvars()).all(|i| self.images[g][i] == self.ring.variable(i)))
    }

    pub fn same_action(&self, other: &RingAction) -> bool {
        self == other
    }

    pub fn require_same_action(&self, other: &RingAction) -> Result<()> {
        if self.same_action(other) {
            Ok(())
        } else {
            Err(Error::InvalidAction(
                "operands carry different group actions".into(),
            ))
        }
    }
}

/// Is `a` fixed by every element of the group?
pub fn is_invariant(a: &Polynomial, action: &RingAction) -> Result<bool> {
    for g in action.group().elements() {
        if action.apply(g, a)? != *a {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Element of the twisted group ring: a formal sum `Σ a_g · g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedElement {
    action: Arc<RingAction>,
    coeffs: Vec<Polynomial>,
}

impl TwistedElement {
    pub fn zero(action: Arc<RingAction>) -> Self {
        let n = action.group().order();
        let z = action.ring().zero();
        TwistedElement {
            action,
            coeffs: vec![z; n],
        }
    }

    pub fn one(action: Arc<RingAction>) -> Self {
        let e = action.group().identity();
        Self::single(action, e, None)
    }

    /// `a·g`; `None` coefficient means 1.
    pub fn single(action: Arc<RingAction>, g: usize, a: Option<Polynomial>) -> Self {
        let mut t = Self::zero(action);
        t.coeffs[g] = a.unwrap_or_else(|| t.action.ring().one());
        t
    }

    pub fn from_coeffs(action: Arc<RingAction>, coeffs: Vec<Polynomial>) -> Result<Self> {
        if coeffs.len() != action.group().order() {
            return Err(Error::InvalidGroup(
                "one coefficient per group element required".into(),
            ));
        }
        Ok(TwistedElement { action, coeffs })
    }

    pub fn coeff(&self, g: usize) -> &Polynomial {
        &self.coeffs[g]
    }

    pub fn action(&self) -> &Arc<RingAction> {
        &self.action
    }

    pub fn add(&self, other: &TwistedElement) -> Result<TwistedElement> {
        self.action.require_same_action(&other.action)?;
        let ring = self.action.ring().clone();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            coeffs.push(ring.add(a, b)?);
        }
        Ok(TwistedElement {
            action: self.action.clone(),
            coeffs,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }
}

/// Product in the twisted group ring: `(a·g)(b·h) = a σ_g(b) · gh`,
/// extended bilinearly.
pub fn twisted_multiply(u: &TwistedElement, v: &TwistedElement) -> Result<TwistedElement> {
    u.action.require_same_action(&v.action)?;
    let action = u.action.clone();
    let ring = action.ring().clone();
    let group = action.group().clone();
    let mut out = TwistedElement::zero(action.clone());
    for g in group.elements() {
        if u.coeffs[g].is_zero() {
            continue;
        }
        for h in group.elements() {
            if v.coeffs[h].is_zero() {
                continue;
            }
            let gh = group.mul(g, h);
            let twisted = action.apply(g, &v.coeffs[h])?;
            let prod = ring.mul(&u.coeffs[g], &twisted)?;
            out.coeffs[gh] = ring.add(&out.coeffs[gh], &prod)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sign_action() -> Arc<RingAction> {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let g = GroupData::cyclic(2).unwrap();
        let images = vec![
            vec![r.parse("x").unwrap()],
            vec![r.parse("-x").unwrap()],
        ];
        RingAction::new(r, g, images).unwrap()
    }

    fn swap_action() -> Arc<RingAction> {
        let r =
            GradedRing::parse_new(Field::rationals(), &["x", "y"], &[1, 1], "x^3 + y^3").unwrap();
        let g = GroupData::cyclic(2).unwrap();
        let images = vec![
            vec![r.parse("x").unwrap(), r.parse("y").unwrap()],
            vec![r.parse("y").unwrap(), r.parse("x").unwrap()],
        ];
        RingAction::new(r, g, images).unwrap()
    }

    #[test]
    fn group_table_validation() {
        assert!(GroupData::new(vec!["e".into()], vec![vec![0]]).is_ok());
        // Z/2 with a broken table (no identity).
        let bad = GroupData::new(vec!["a".into(), "b".into()], vec![vec![1, 0], vec![1, 0]]);
        assert!(bad.is_err());
        // Non-associative magma on 3 elements.
        let bad = GroupData::new(
            vec!["e".into(), "a".into(), "b".into()],
            vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]],
        );
        assert!(bad.is_err());
        let z4 = GroupData::cyclic(4).unwrap();
        assert_eq!(z4.order(), 4);
        assert_eq!(z4.inv(1), 3);
        assert_eq!(z4.mul(2, 3), 1);
    }

    #[test]
    fn action_validation() {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let g = GroupData::cyclic(2).unwrap();
        // x ↦ x under the generator breaks nothing (trivial action of Z/2).
        let triv = RingAction::trivial(r.clone(), g.clone());
        assert!(triv.is_trivial());
        // x ↦ 2x is degree-preserving but breaks the composition law
        // (σ_g² would be x ↦ 4x ≠ identity).
        let bad = RingAction::new(
            r.clone(),
            g.clone(),
            vec![vec![r.parse("x").unwrap()], vec![r.parse("2*x").unwrap()]],
        );
        assert!(bad.is_err());
        // x ↦ -x fixes x² and squares to the identity.
        assert!(!sign_action().is_trivial());
        // The potential must be fixed: x ↦ -x with f = x^3 fails.
        let r3 = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^3").unwrap();
        let bad = RingAction::new(
            r3.clone(),
            g,
            vec![vec![r3.parse("x").unwrap()], vec![r3.parse("-x").unwrap()]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn twisted_rule_hand_checks() {
        let act = sign_action();
        let r = act.ring().clone();
        let x = r.parse("x").unwrap();
        // (1·σ)(x·σ) = σ(x)·σ² = -x·e.
        let u = TwistedElement::single(act.clone(), 1, None);
        let v = TwistedElement::single(act.clone(), 1, Some(x.clone()));
        let prod = twisted_multiply(&u, &v).unwrap();
        assert_eq!(*prod.coeff(0), r.parse("-x").unwrap());
        assert!(prod.coeff(1).is_zero());
        // (x·σ)(x·σ) = x·σ(x)·e = -x²·e.
        let prod = twisted_multiply(&v, &v).unwrap();
        assert_eq!(*prod.coeff(0), r.parse("-x^2").unwrap());
        assert!(prod.coeff(1).is_zero());
    }

    #[test]
    fn trivial_action_recovers_group_ring() {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let act = RingAction::trivial_group(r.clone());
        let a = TwistedElement::single(act.clone(), 0, Some(r.parse("x").unwrap()));
        let b = TwistedElement::single(act.clone(), 0, Some(r.parse("x + 1").unwrap()));
        let prod = twisted_multiply(&a, &b).unwrap();
        assert_eq!(*prod.coeff(0), r.parse("x^2 + x").unwrap());
    }

    #[test]
    fn invariance_examples() {
        let act = sign_action();
        let r = act.ring().clone();
        assert!(is_invariant(&r.parse("x^2").unwrap(), &act).unwrap());
        assert!(!is_invariant(&r.parse("x").unwrap(), &act).unwrap());
        let act = swap_action();
        let r = act.ring().clone();
        assert!(is_invariant(&r.parse("x + y").unwrap(), &act).unwrap());
        assert!(!is_invariant(&r.parse("x - y").unwrap(), &act).unwrap());
    }

    fn random_element(action: &Arc<RingAction>, rng: &mut ChaCha8Rng) -> TwistedElement {
        let ring = action.ring().clone();
        let field = ring.field().clone();
        let nv = ring.nvars();
        let mut coeffs = Vec::new();
        for _ in 0..action.group().order() {
            let mut p = ring.zero();
            for _ in 0..rng.gen_range(0..3) {
                let exp: Vec<u32> = (0..nv).map(|_| rng.gen_range(0..3)).collect();
                let c = field.from_i64(rng.gen_range(-4..5));
                p = p
                    .add(
                        &crate::poly::Polynomial::monomial(nv, exp, c, &field),
                        &field,
                    )
                    .unwrap();
            }
            coeffs.push(p);
        }
        TwistedElement::from_coeffs(action.clone(), coeffs).unwrap()
    }

    #[test]
    fn twisted_multiply_associative_and_unital() {
        for action in [sign_action(), swap_action()] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let one = TwistedElement::one(action.clone());
            for _ in 0..120 {
                let a = random_element(&action, &mut rng);
                let b = random_element(&action, &mut rng);
                let c = random_element(&action, &mut rng);
                let ab_c =
                    twisted_multiply(&twisted_multiply(&a, &b).unwrap(), &c).unwrap();
                let a_bc =
                    twisted_multiply(&a, &twisted_multiply(&b, &c).unwrap()).unwrap();
                assert_eq!(ab_c, a_bc);
                assert_eq!(twisted_multiply(&one, &a).unwrap(), a);
                assert_eq!(twisted_multiply(&a, &one).unwrap(), a);
            }
        }
    }

    #[test]
    fn invariants_are_central() {
        // Invariant ring elements, viewed as a·e, commute with everything.
        for (action, inv) in [(sign_action(), "x^2"), (swap_action(), "x + y")] {
            let ring = action.ring().clone();
            let a = TwistedElement::single(action.clone(), 0, Some(ring.parse(inv).unwrap()));
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..100 {
                let u = random_element(&action, &mut rng);
                let left = twisted_multiply(&a, &u).unwrap();
                let right = twisted_multiply(&u, &a).unwrap();
                assert_eq!(left, right);
            }
        }
    }

    #[test]
    fn three_cycle_action() {
        // Z/3 permuting three variables cyclically, fixing x³+y³+z³.
        let r = GradedRing::parse_new(
            Field::rationals(),
            &["x", "y", "z"],
            &[1, 1, 1],
            "x^3 + y^3 + z^3",
        )
        .unwrap();
        let g = GroupData::cyclic(3).unwrap();
        let images = vec![
            vec![r.parse("x").unwrap(), r.parse("y").unwrap(), r.parse("z").unwrap()],
            vec![r.parse("y").unwrap(), r.parse("z").unwrap(), r.parse("x").unwrap()],
            vec![r.parse("z").unwrap(), r.parse("x").unwrap(), r.parse("y").unwrap()],
        ];
        let act = RingAction::new(r.clone(), g, images).unwrap();
        assert!(is_invariant(&r.parse("x*y*z").unwrap(), &act).unwrap());
        assert!(is_invariant(&r.parse("x + y + z").unwrap(), &act).unwrap());
        assert!(!is_invariant(&r.parse("x").unwrap(), &act).unwrap());
    }
}
