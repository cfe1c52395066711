//! Stable hom spaces: morphisms modulo null-homotopic ones.
//!
//! The strict morphisms between two objects form a finite-dimensional vector
//! space (degrees are bounded, so each matrix entry lives in a finite
//! coordinate chart). The null-homotopic ones form a subspace: the image of
//! the boundary operator `H ↦ d'∘H + H∘d` on equivariant odd pairs. A
//! boundary is automatically an equivariant chain map, so no membership
//! check is needed — the quotient is plain exact linear algebra.
//!
//! Canonical representatives make the quotient computable: a fixed
//! [`ColumnSolver`] over `[representatives | boundary basis]` writes any
//! morphism uniquely as (stable part) + (null-homotopic part).

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::{ColumnSolver, Echelon};
use crate::linsys::{LinearMapSystem, Term};
use crate::mf::EquivariantMF;
use crate::morphism::{
    boundary_of, morphism_space_coords, MFMorphism, PairChart,
};

/// Basis of equivariant odd pairs `(h0, h1)` between two objects — the
/// ambient space homotopies live in (no chain condition imposed).
fn equivariant_odd_pairs(
    x: &EquivariantMF,
    y: &EquivariantMF,
) -> Result<(PairChart, Vec<Vec<Scalar>>)> {
    let chart = PairChart::homotopies(x, y);
    if chart.dim() == 0 {
        return Ok((chart, Vec::new()));
    }
    let field = x.ring().field().clone();
    let mut sys = LinearMapSystem::new();
    let h0 = sys.add_unknown(chart.even.clone());
    let h1 = sys.add_unknown(chart.odd.clone());
    let action = x.action().clone();
    for g in action.group().elements() {
        if g == action.group().identity() {
            continue;
        }
        sys.add_constraint(
            vec![
                Term::plain(h0, field.one()).twisted(&action, g).left(y.m1(g)),
                Term::plain(h0, field.from_i64(-1)).right(x.m0(g)),
            ],
            None,
        )?;
        sys.add_constraint(
            vec![
                Term::plain(h1, field.one()).twisted(&action, g).left(y.m0(g)),
                Term::plain(h1, field.from_i64(-1)).right(x.m1(g)),
            ],
            None,
        )?;
    }
    let sol = sys
        .solve(None)?
        .ok_or_else(|| Error::Internal("homogeneous system cannot be inconsistent".into()))?;
    Ok((chart, sol.kernel))
}

/// The space of morphisms `x → y` modulo null-homotopy, with canonical
/// strict representatives.
pub struct StableHomSpace {
    source: EquivariantMF,
    target: EquivariantMF,
    chart: PairChart,
    strict_basis: Vec<Vec<Scalar>>,
    boundary_basis: Vec<Vec<Scalar>>,
    rep_vectors: Vec<Vec<Scalar>>,
    solver: ColumnSolver,
    field: Field,
}

/// Compute the stable hom space between two compatible objects.
pub fn stable_hom(x: &EquivariantMF, y: &EquivariantMF) -> Result<StableHomSpace> {
    x.require_compatible(y)?;
    let field = x.ring().field().clone();
    let (chart, strict_basis) = morphism_space_coords(x, y)?;
    let n = chart.dim();

    // Boundary subspace: image of δ on equivariant odd pairs.
    let (hchart, pairs) = equivariant_odd_pairs(x, y)?;
    let mut bd = Echelon::new(n);
    for p in pairs {
        let (h0, h1) = hchart.from_coords(&p)?;
        let (c0, c1) = boundary_of(x, y, &h0, &h1)?;
        bd.insert(chart.to_coords(&c0, &c1)?, &field);
    }
    let boundary_basis: Vec<Vec<Scalar>> = bd.basis().to_vec();

    // Stable representatives: strict basis vectors that grow the span
    // beyond the boundaries.
    let mut span = bd;
    let mut rep_vectors = Vec::new();
    for v in &strict_basis {
        if span.insert(v.clone(), &field) {
            rep_vectors.push(v.clone());
        }
    }

    // Canonical coordinates: [reps | boundaries] is a basis of the cycle
    // space, so every morphism has unique coordinates in it.
    let mut columns = rep_vectors.clone();
    columns.extend(boundary_basis.iter().cloned());
    let solver = ColumnSolver::new(&columns, n, &field)?;

    Ok(StableHomSpace {
        source: x.clone(),
        target: y.clone(),
        chart,
        strict_basis,
        boundary_basis,
        rep_vectors,
        solver,
        field,
    })
}

impl StableHomSpace {
    /// Dimension of the stable hom space.
    pub fn dim(&self) -> usize {
        self.rep_vectors.len()
    }

    /// Dimension of the strict morphism space.
    pub fn strict_dim(&self) -> usize {
        self.strict_basis.len()
    }

    /// Dimension of the null-homotopic subspace.
    pub fn boundary_dim(&self) -> usize {
        self.boundary_basis.len()
    }

    pub fn source(&self) -> &EquivariantMF {
        &self.source
    }

    pub fn target(&self) -> &EquivariantMF {
        &self.target
    }

    pub fn chart(&self) -> &PairChart {
        &self.chart
    }

    /// Strict basis vectors of the morphism space, in chart coordinates.
    pub fn strict_basis(&self) -> &[Vec<Scalar>] {
        &self.strict_basis
    }

    /// Echelonized basis of the boundary subspace, in chart coordinates.
    pub fn boundary_basis(&self) -> &[Vec<Scalar>] {
        &self.boundary_basis
    }

    /// The `i`-th canonical representative as a strict morphism.
    pub fn representative(&self, i: usize) -> Result<MFMorphism> {
        let (u0, u1) = self.chart.from_coords(&self.rep_vectors[i])?;
        MFMorphism::new(&self.source, &self.target, u0, u1)
    }

    pub fn representatives(&self) -> Result<Vec<MFMorphism>> {
        (0..self.dim()).map(|i| self.representative(i)).collect()
    }

    /// Stable coordinates of a chart vector (must be a morphism).
    pub fn reduce_coords(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        let all = self
            .solver
            .coordinates(v, &self.field)?
            .ok_or_else(|| Error::Internal("vector is not a chain map".into()))?;
        Ok(all[..self.dim()].to_vec())
    }

    /// Stable coordinates of a strict morphism.
    pub fn reduce(&self, u: &MFMorphism) -> Result<Vec<Scalar>> {
        if u.source() != &self.source || u.target() != &self.target {
            return Err(Error::DimensionMismatch("morphism endpoints differ".into()));
        }
        self.reduce_coords(&self.chart.to_coords(u.u0(), u.u1())?)
    }

    /// Strict representative of a stable coordinate vector.
    pub fn from_stable_coords(&self, coords: &[Scalar]) -> Result<MFMorphism> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch("stable coordinate length".into()));
        }
        let n = self.chart.dim();
        let mut v = vec![self.field.zero(); n];
        for (c, rep) in coords.iter().zip(&self.rep_vectors) {
            for i in 0..n {
                let t = self.field.mul(c, &rep[i]);
                v[i] = self.field.add(&v[i], &t);
            }
        }
        let (u0, u1) = self.chart.from_coords(&v)?;
        MFMorphism::new(&self.source, &self.target, u0, u1)
    }

    /// Is the morphism null-homotopic? (Linear-algebra criterion; agrees
    /// with an explicit homotopy witness.)
    pub fn is_stably_zero(&self, u: &MFMorphism) -> Result<bool> {
        Ok(self.reduce(u)?.iter().all(|c| self.field.is_zero(c)))
    }
}

/// The strict endomorphism algebra of an object: basis, multiplication
/// table, unit, and the two-sided ideal of null-homotopic endomorphisms.
pub struct StrictEnd {
    object: EquivariantMF,
    basis: Vec<MFMorphism>,
    basis_solver: ColumnSolver,
    chart: PairChart,
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    null_ideal: Vec<Vec<Scalar>>,
    field: Field,
}

/// Compute the strict endomorphism algebra of `x`.
pub fn strict_end(x: &EquivariantMF) -> Result<StrictEnd> {
    let field = x.ring().field().clone();
    let sh = stable_hom(x, x)?;
    let chart = PairChart::morphisms(x, x);
    let vectors = sh.strict_basis().to_vec();
    let n = chart.dim();
    let basis_solver = ColumnSolver::new(&vectors, n, &field)?;
    let mut basis = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let (u0, u1) = chart.from_coords(v)?;
        basis.push(MFMorphism::new(x, x, u0, u1)?);
    }
    let dim = basis.len();
    let coords_of = |u: &MFMorphism| -> Result<Vec<Scalar>> {
        let v = chart.to_coords(u.u0(), u.u1())?;
        basis_solver
            .coordinates(&v, &field)?
            .ok_or_else(|| Error::Internal("endomorphism outside its own basis span".into()))
    };
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let prod = basis[i].compose(&basis[j])?;
            table[i][j] = coords_of(&prod)?;
        }
    }
    let unit = coords_of(&MFMorphism::identity(x))?;
    // Null-homotopic endomorphisms, in basis coordinates.
    let mut ideal = Echelon::new(dim);
    for b in sh.boundary_basis() {
        let c = basis_solver
            .coordinates(b, &field)?
            .ok_or_else(|| Error::Internal("boundary endomorphism outside End".into()))?;
        ideal.insert(c, &field);
    }
    Ok(StrictEnd {
        object: x.clone(),
        basis,
        basis_solver,
        chart,
        table,
        unit,
        null_ideal: ideal.basis().to_vec(),
        field,
    })
}

impl StrictEnd {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn object(&self) -> &EquivariantMF {
        &self.object
    }

    pub fn basis(&self) -> &[MFMorphism] {
        &self.basis
    }

    /// `e_i ∘ e_j = Σ_k table()[i][j][k]·e_k`.
    pub fn table(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    /// Coordinates of the identity morphism.
    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Basis (in algebra coordinates) of the null-homotopic two-sided ideal.
    pub fn null_ideal(&self) -> &[Vec<Scalar>] {
        &self.null_ideal
    }

    /// Coordinates of an endomorphism in the algebra basis.
    pub fn coords(&self, u: &MFMorphism) -> Result<Vec<Scalar>> {
        if u.source() != &self.object || u.target() != &self.object {
            return Err(Error::DimensionMismatch("not an endomorphism of this object".into()));
        }
        let v = self.chart.to_coords(u.u0(), u.u1())?;
        self.basis_solver
            .coordinates(&v, &self.field)?
            .ok_or_else(|| Error::Internal("endomorphism outside its own basis span".into()))
    }

    /// The morphism `Σ c_i e_i`.
    pub fn element(&self, coords: &[Scalar]) -> Result<MFMorphism> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch("algebra coordinate length".into()));
        }
        let mut acc = MFMorphism::zero(&self.object, &self.object)?;
        for (c, e) in coords.iter().zip(&self.basis) {
            acc = acc.add(&e.scale(c))?;
        }
        Ok(acc)
    }

    /// Product in algebra coordinates, via the structure constants.
    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![self.field.zero(); dim];
        for i in 0..dim {
            if self.field.is_zero(&a[i]) {
                continue;
            }
            for j in 0..dim {
                if self.field.is_zero(&b[j]) {
                    continue;
                }
                let ab = self.field.mul(&a[i], &b[j]);
                for k in 0..dim {
                    let t = self.field.mul(&ab, &self.table[i][j][k]);
                    out[k] = self.field.add(&out[k], &t);
                }
            }
        }
        out
    }
}

/// The stable endomorphism algebra: stable hom space of `(x, x)` with its
/// induced multiplication.
pub struct StableEnd {
    homs: StableHomSpace,
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    field: Field,
}

/// Compute the stable endomorphism algebra of `x`.
pub fn stable_end(x: &EquivariantMF) -> Result<StableEnd> {
    let field = x.ring().field().clone();
    let homs = stable_hom(x, x)?;
    let dim = homs.dim();
    let reps = homs.representatives()?;
    let mut table = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let prod = reps[i].compose(&reps[j])?;
            table[i][j] = homs.reduce(&prod)?;
        }
    }
    let unit = homs.reduce(&MFMorphism::identity(x))?;
    Ok(StableEnd {
        homs,
        table,
        unit,
        field,
    })
}

impl StableEnd {
    pub fn dim(&self) -> usize {
        self.homs.dim()
    }

    pub fn homs(&self) -> &StableHomSpace {
        &self.homs
    }

    pub fn table(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let dim = self.dim();
        let mut out = vec![self.field.zero(); dim];
        for i in 0..dim {
            if self.field.is_zero(&a[i]) {
                continue;
            }
            for j in 0..dim {
                if self.field.is_zero(&b[j]) {
                    continue;
                }
                let ab = self.field.mul(&a[i], &b[j]);
                for k in 0..dim {
                    let t = self.field.mul(&ab, &self.table[i][j][k]);
                    out[k] = self.field.add(&out[k], &t);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::graded::{GradedFreeModule, GradedMatrix};
    use crate::group::{GroupData, RingAction};
    use crate::mf::direct_sum;
    use crate::morphism::is_null_homotopic;
    use crate::ring::GradedRing;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn qx(f: &str) -> Arc<GradedRing> {
        GradedRing::parse_new(Field::rationals(), &["x"], &[1], f).unwrap()
    }

    #[test]
    fn node_stable_end_is_scalars() {
        let r = qx("x^2");
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let s = stable_hom(&x, &x).unwrap();
        assert_eq!(s.strict_dim(), 1);
        assert_eq!(s.boundary_dim(), 0);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn contractible_object_has_zero_stable_end() {
        let r = qx("x^2");
        let t = EquivariantMF::rank_one(&r, "1", "x^2").unwrap();
        let s = stable_hom(&t, &t).unwrap();
        assert_eq!(s.strict_dim(), 1);
        assert_eq!(s.boundary_dim(), 1);
        assert_eq!(s.dim(), 0);
        assert!(s.is_stably_zero(&MFMorphism::identity(&t)).unwrap());
    }

    #[test]
    fn mixed_sum_separates_ideal() {
        let r = qx("x^3");
        let x = EquivariantMF::rank_one(&r, "x", "x^2").unwrap();
        let t = EquivariantMF::rank_one(&r, "1", "x^3").unwrap();
        let s = direct_sum(&x, &t).unwrap();
        let e = strict_end(&s).unwrap();
        assert_eq!(e.dim(), 3);
        assert_eq!(e.null_ideal().len(), 2);
        let st = stable_end(&s).unwrap();
        assert_eq!(st.dim(), 1);
        // The stable unit squares to itself.
        let sq = st.multiply(st.unit(), st.unit());
        assert_eq!(sq, st.unit());
    }

    #[test]
    fn reduction_agrees_with_homotopy_witness() {
        let r = qx("x^4");
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let y = EquivariantMF::rank_one(&r, "x^2", "x^2").unwrap();
        let s = direct_sum(&x, &y).unwrap();
        let sh = stable_hom(&s, &s).unwrap();
        let strict = crate::morphism::morphism_space(&s, &s).unwrap();
        let field = r.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let mut u = MFMorphism::zero(&s, &s).unwrap();
            for e in &strict {
                let c = field.from_i64(rng.gen_range(-2..3));
                u = u.add(&e.scale(&c)).unwrap();
            }
            let stably_zero = sh.is_stably_zero(&u).unwrap();
            let witnessed = is_null_homotopic(&u).unwrap().is_some();
            assert_eq!(stably_zero, witnessed);
            // Round-trip: u and its canonical representative differ by a
            // boundary.
            let rep = sh.from_stable_coords(&sh.reduce(&u).unwrap()).unwrap();
            let diff = u.sub(&rep).unwrap();
            assert!(is_null_homotopic(&diff).unwrap().is_some());
        }
    }

    #[test]
    fn structure_constants_are_associative_and_unital() {
        let r = qx("x^4");
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let y = EquivariantMF::rank_one(&r, "x^2", "x^2").unwrap();
        let s = direct_sum(&x, &y).unwrap();
        let e = strict_end(&s).unwrap();
        let field = r.field().clone();
        let dim = e.dim();
        let unit = e.unit().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<_> {
            (0..dim).map(|_| field.from_i64(rng.gen_range(-3..4))).collect()
        };
        for _ in 0..15 {
            let a = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let c = rand_vec(&mut rng);
            let ab_c = e.multiply(&e.multiply(&a, &b), &c);
            let a_bc = e.multiply(&a, &e.multiply(&b, &c));
            assert_eq!(ab_c, a_bc);
            assert_eq!(e.multiply(&unit, &a), a);
            assert_eq!(e.multiply(&a, &unit), a);
            // Table multiplication matches actual composition.
            let ua = e.element(&a).unwrap();
            let ub = e.element(&b).unwrap();
            assert_eq!(e.coords(&ua.compose(&ub).unwrap()).unwrap(), e.multiply(&a, &b));
        }
    }

    #[test]
    fn equivariant_stable_end_respects_structures() {
        let r = qx("x^2");
        let g = GroupData::cyclic(2).unwrap();
        let action = RingAction::new(
            r.clone(),
            g,
            vec![vec![r.parse("x").unwrap()], vec![r.parse("-x").unwrap()]],
        )
        .unwrap();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let mk = |e0: i64, e1: i64| -> EquivariantMF {
            let a =
                GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x").unwrap()]).unwrap();
            let b =
                GradedMatrix::new(p0.clone(), p1.clone(), 2, vec![r.parse("x").unwrap()]).unwrap();
            let m0 = vec![
                GradedMatrix::identity(&p0),
                GradedMatrix::scalar_identity(&p0, &r.field().from_i64(e0)),
            ];
            let m1 = vec![
                GradedMatrix::identity(&p1),
                GradedMatrix::scalar_identity(&p1, &r.field().from_i64(e1)),
            ];
            EquivariantMF::with_action(action.clone(), a, b, m0, m1).unwrap()
        };
        let xp = mk(1, -1);
        let xm = mk(-1, 1);
        let s = direct_sum(&xp, &xm).unwrap();
        let st = stable_end(&s).unwrap();
        assert_eq!(st.dim(), 2);
        // Diagonal algebra: the two projections are orthogonal idempotents.
        let e = strict_end(&s).unwrap();
        assert_eq!(e.dim(), 2);
        assert!(e.null_ideal().is_empty());
    }

    #[test]
    fn one_directional_stable_maps() {
        let r = qx("x^4");
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let y = EquivariantMF::rank_one(&r, "x^3", "x").unwrap();
        assert_eq!(stable_hom(&x, &y).unwrap().dim(), 0);
        assert_eq!(stable_hom(&y, &x).unwrap().dim(), 1);
    }
}
