//! Functors between plain and equivariant factorizations: forgetting the
//! action, induction along the twisted group ring, the averaging splitting,
//! extension of scalars, and strictification of homotopy-coherent actions.
//!
//! Induction uses the basis `v_{g,j} = g ⊗ p_j`, ordered with `g` outermost.
//! Scalars move across the tensor as `a·(g ⊗ p) = g ⊗ σ_{g⁻¹}(a)p`, so in
//! this basis the induced differential has block `σ_g(d)` at position `g` —
//! literal copies of `d` exactly when the group fixes its entries — and the
//! action of `h` is the block permutation `g ↦ hg` with identity blocks.
//!
//! Strictification turns a homotopy-coherent action `θ` on a plain object
//! `P` into a genuine equivariant object: the `θ`-twisted averaging
//! projector on `induce(P)` is made strictly equivariant by a Reynolds
//! average and split with the homotopy splitter. The comparison map back to
//! `P` and its compatibility with `θ` are certified by explicit stable
//! inverses and homotopy witnesses, so the construction is validated by its
//! output, not by the derivation.

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Scalar};
use crate::graded::{GradedFreeModule, GradedMatrix};
use crate::group::RingAction;
use crate::linalg::FMat;
use crate::mf::{shift, EquivariantMF};
use crate::morphism::{homotopy_witness, Homotopy, MFMorphism};
use crate::poly::Polynomial;
use crate::ring::GradedRing;
use crate::splitting::{split_homotopy_idempotent, stable_inverse_of, SplitResult};
use crate::stable::{stable_hom, StableHomSpace};
use std::sync::Arc;

/// Drop the group action, keeping the underlying factorization.
pub fn forget(x: &EquivariantMF) -> Result<EquivariantMF> {
    EquivariantMF::plain(x.ring(), x.a().clone(), x.b().clone())
}

fn require_plain(p: &EquivariantMF) -> Result<()> {
    if p.group_order() != 1 {
        return Err(Error::InvalidAction(
            "expected an object with trivial group; apply forget first".into(),
        ));
    }
    Ok(())
}

fn module_power(m: &GradedFreeModule, n: usize) -> Result<GradedFreeModule> {
    let mut out = m.clone();
    for _ in 1..n {
        out = out.direct_sum(m)?;
    }
    Ok(out)
}

/// Assemble an `n×n` block matrix with the given per-block contents.
fn block_matrix(
    src: GradedFreeModule,
    tgt: GradedFreeModule,
    shift: i64,
    n: usize,
    block_src_rank: usize,
    block_tgt_rank: usize,
    block: impl Fn(usize, usize) -> Result<Option<GradedMatrix>>,
) -> Result<GradedMatrix> {
    let nvars = src.ring().nvars();
    let zero = Polynomial::zero(nvars);
    let cols = src.rank();
    let mut entries = vec![zero; tgt.rank() * cols];
    for bi in 0..n {
        for bj in 0..n {
            if let Some(m) = block(bi, bj)? {
                for i in 0..block_tgt_rank {
                    for j in 0..block_src_rank {
                        entries[(bi * block_tgt_rank + i) * cols + bj * block_src_rank + j] =
                            m.at(i, j).clone();
                    }
                }
            }
        }
    }
    GradedMatrix::new(src, tgt, shift, entries)
}

/// Induce a plain object along `Q#G`: ranks multiply by `|G|`, the
/// differential acquires the block `σ_g(d)` in the `g`-th slot, and the
/// group acts by block permutations through the left tensor factor.
pub fn induce(p: &EquivariantMF, action: &Arc<RingAction>) -> Result<EquivariantMF> {
    require_plain(p)?;
    if **p.ring() != **action.ring() {
        return Err(Error::MixedRings("object and action live over different rings".into()));
    }
    let n = action.group().order();
    let p0 = module_power(p.p0(), n)?;
    let p1 = module_power(p.p1(), n)?;
    let d_f = p.ring().potential_degree();
    let a = block_matrix(p1.clone(), p0.clone(), 0, n, p.p1().rank(), p.p0().rank(), |i, j| {
        if i == j {
            Ok(Some(action.apply_matrix(i, p.a())?))
        } else {
            Ok(None)
        }
    })?;
    let b = block_matrix(p0.clone(), p1.clone(), d_f, n, p.p0().rank(), p.p1().rank(), |i, j| {
        if i == j {
            Ok(Some(action.apply_matrix(i, p.b())?))
        } else {
            Ok(None)
        }
    })?;
    let mut m0 = Vec::with_capacity(n);
    let mut m1 = Vec::with_capacity(n);
    for h in 0..n {
        let perm0 = block_matrix(p0.clone(), p0.clone(), 0, n, p.p0().rank(), p.p0().rank(), |i, j| {
            if i == action.group().mul(h, j) {
                Ok(Some(GradedMatrix::identity(p.p0())))
            } else {
                Ok(None)
            }
        })?;
        let perm1 = block_matrix(p1.clone(), p1.clone(), 0, n, p.p1().rank(), p.p1().rank(), |i, j| {
            if i == action.group().mul(h, j) {
                Ok(Some(GradedMatrix::identity(p.p1())))
            } else {
                Ok(None)
            }
        })?;
        m0.push(perm0);
        m1.push(perm1);
    }
    EquivariantMF::new(action.clone(), a, b, m0, m1)
}

fn inverse_group_order(field: &Field, n: usize) -> Result<Scalar> {
    let p = field.characteristic();
    if p != 0 && (n as u64) % p == 0 {
        return Err(Error::GroupOrderNotInvertible { order: n, characteristic: p });
    }
    field.inv(&field.from_i64(n as i64))
}

/// The averaging splitting of `Y` as a summand of `induce(forget(Y))`:
/// `p` is the multiplication map, `j(y) = 1/|G| Σ_g g⁻¹ ⊗ y^g`, and
/// `p∘j = id_Y` exactly. Both maps are validated equivariant chain maps.
pub fn averaging_splitting(y: &EquivariantMF) -> Result<(EquivariantMF, MFMorphism, MFMorphism)> {
    let action = y.action().clone();
    let n = action.group().order();
    let inv_n = inverse_group_order(y.ring().field(), n)?;
    let z = induce(&forget(y)?, &action)?;
    // p: column block g is M_g (multiplication by the tensor label).
    let row_block = |parts: Vec<GradedMatrix>, src: &GradedFreeModule, tgt: &GradedFreeModule, sh: i64| {
        let cols = src.rank();
        let nvars = src.ring().nvars();
        let mut entries = vec![Polynomial::zero(nvars); tgt.rank() * cols];
        let mut off = 0;
        for m in &parts {
            for i in 0..tgt.rank() {
                for j in 0..m.src().rank() {
                    entries[i * cols + off + j] = m.at(i, j).clone();
                }
            }
            off += m.src().rank();
        }
        GradedMatrix::new(src.clone(), tgt.clone(), sh, entries)
    };
    let col_block = |parts: Vec<GradedMatrix>, src: &GradedFreeModule, tgt: &GradedFreeModule, sh: i64| {
        let cols = src.rank();
        let nvars = src.ring().nvars();
        let mut entries = vec![Polynomial::zero(nvars); tgt.rank() * cols];
        let mut off = 0;
        for m in &parts {
            for i in 0..m.tgt().rank() {
                for j in 0..cols {
                    entries[(off + i) * cols + j] = m.at(i, j).clone();
                }
            }
            off += m.tgt().rank();
        }
        GradedMatrix::new(src.clone(), tgt.clone(), sh, entries)
    };
    let p0_parts: Vec<GradedMatrix> = (0..n).map(|g| y.m0(g).clone()).collect();
    let p1_parts: Vec<GradedMatrix> = (0..n).map(|g| y.m1(g).clone()).collect();
    let p0 = row_block(p0_parts, z.p0(), y.p0(), 0)?;
    let p1 = row_block(p1_parts, z.p1(), y.p1(), 0)?;
    let mut j0_parts = Vec::with_capacity(n);
    let mut j1_parts = Vec::with_capacity(n);
    for h in 0..n {
        let hinv = action.group().inv(h);
        j0_parts.push(
            action
                .apply_matrix(h, y.m0(hinv))?
                .map_entries(|e| Ok(e.scalar_mul(&inv_n, y.ring().field())))?,
        );
        j1_parts.push(
            action
                .apply_matrix(h, y.m1(hinv))?
                .map_entries(|e| Ok(e.scalar_mul(&inv_n, y.ring().field())))?,
        );
    }
    let j0 = col_block(j0_parts, y.p0(), z.p0(), 0)?;
    let j1 = col_block(j1_parts, y.p1(), z.p1(), 0)?;
    let p = MFMorphism::new(&z, y, p0, p1)?;
    let j = MFMorphism::new(y, &z, j0, j1)?;
    if !p.compose(&j)?.sub(&MFMorphism::identity(y))?.is_zero() {
        return Err(Error::Internal("averaging failed: p∘j is not the identity".into()));
    }
    Ok((z, p, j))
}

/// A graded homomorphism between base rings: each source variable maps to a
/// weighted-homogeneous polynomial of the same degree, coefficients embed
/// along a supported field embedding, and the potential maps to the
/// potential.
#[derive(Clone, Debug)]
pub struct RingHom {
    source: Arc<GradedRing>,
    target: Arc<GradedRing>,
    images: Vec<Polynomial>,
}

fn embed_scalar(src: &Field, tgt: &Field, s: &Scalar) -> Result<Scalar> {
    match (src.kind(), tgt.kind()) {
        (a, b) if a == b => Ok(s.clone()),
        (FieldKind::Rationals, FieldKind::Extension { .. }) => match s {
            Scalar::Rat(r) => tgt.from_rat(r.clone()),
            _ => Err(Error::Internal("rational scalar expected".into())),
        },
        _ => Err(Error::UnsupportedBaseChange(format!(
            "no embedding from {:?} into {:?}",
            src.kind(),
            tgt.kind()
        ))),
    }
}

impl RingHom {
    pub fn new(
        source: Arc<GradedRing>,
        target: Arc<GradedRing>,
        images: Vec<Polynomial>,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::DimensionMismatch(format!(
                "{} variable images for {} variables",
                images.len(),
                source.nvars()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            let deg = img.homogeneous_degree(target.weights())?;
            let expected = source.weights()[i] as i64;
            if !matches!(deg, Some(d) if d == expected) {
                return Err(Error::Validation(format!(
                    "image of variable {} is not homogeneous of degree {}",
                    source.vars()[i],
                    expected
                )));
            }
        }
        let hom = RingHom { source, target, images };
        let f_image = hom.apply(hom.source.potential())?;
        if f_image != *hom.target.potential() {
            return Err(Error::Validation(
                "the potential does not map to the target potential".into(),
            ));
        }
        Ok(hom)
    }

    /// The identity homomorphism.
    pub fn identity(ring: &Arc<GradedRing>) -> Result<Self> {
        let images = (0..ring.nvars()).map(|i| ring.variable(i)).collect();
        RingHom::new(ring.clone(), ring.clone(), images)
    }

    pub fn source(&self) -> &Arc<GradedRing> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedRing> {
        &self.target
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let sf = self.source.field().clone();
        let tf = self.target.field().clone();
        p.substitute(&self.images, &tf, |c| embed_scalar(&sf, &tf, c))
    }

    pub fn apply_matrix(&self, m: &GradedMatrix, src: GradedFreeModule, tgt: GradedFreeModule) -> Result<GradedMatrix> {
        let mut entries = Vec::with_capacity(src.rank() * tgt.rank());
        for i in 0..m.tgt().rank() {
            for j in 0..m.src().rank() {
                entries.push(self.apply(m.at(i, j))?);
            }
        }
        GradedMatrix::new(src, tgt, m.shift(), entries)
    }

    /// Check that the homomorphism intertwines the two group actions:
    /// `φ∘σ_g = σ'_g∘φ` on every variable.
    pub fn equivariant_for(&self, src: &Arc<RingAction>, tgt: &Arc<RingAction>) -> Result<()> {
        if src.group().order() != tgt.group().order() {
            return Err(Error::InvalidAction("group orders differ across the base change".into()));
        }
        for g in 0..src.group().order() {
            for i in 0..self.source.nvars() {
                let v = self.source.variable(i);
                let lhs = self.apply(&src.apply(g, &v)?)?;
                let rhs = tgt.apply(g, &self.apply(&v)?)?;
                if lhs != rhs {
                    return Err(Error::InvalidAction(format!(
                        "base change does not intertwine the actions at g = {g}, variable {}",
                        self.source.vars()[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Extend scalars along `φ`. The target action must act through the same
/// group and intertwine `φ` with the source action.
pub fn base_change(
    hom: &RingHom,
    x: &EquivariantMF,
    target_action: &Arc<RingAction>,
) -> Result<EquivariantMF> {
    if **x.ring() != **hom.source() {
        return Err(Error::MixedRings("object is not defined over the source ring".into()));
    }
    if **target_action.ring() != **hom.target() {
        return Err(Error::MixedRings("target action is not over the target ring".into()));
    }
    hom.equivariant_for(x.action(), target_action)?;
    let p0 = GradedFreeModule::new(hom.target().clone(), x.p0().weights().to_vec());
    let p1 = GradedFreeModule::new(hom.target().clone(), x.p1().weights().to_vec());
    let a = hom.apply_matrix(x.a(), p1.clone(), p0.clone())?;
    let b = hom.apply_matrix(x.b(), p0.clone(), p1.clone())?;
    let mut m0 = Vec::new();
    let mut m1 = Vec::new();
    for g in 0..x.group_order() {
        m0.push(hom.apply_matrix(x.m0(g), p0.clone(), p0.clone())?);
        m1.push(hom.apply_matrix(x.m1(g), p1.clone(), p1.clone())?);
    }
    EquivariantMF::new(target_action.clone(), a, b, m0, m1)
}

/// Push a morphism through a base change; endpoints must be the already
/// base-changed objects.
pub fn base_change_morphism(
    hom: &RingHom,
    u: &MFMorphism,
    new_source: &EquivariantMF,
    new_target: &EquivariantMF,
) -> Result<MFMorphism> {
    let u0 = hom.apply_matrix(u.u0(), new_source.p0().clone(), new_target.p0().clone())?;
    let u1 = hom.apply_matrix(u.u1(), new_source.p1().clone(), new_target.p1().clone())?;
    MFMorphism::new(new_source, new_target, u0, u1)
}

/// Ranks and dimensions of the induced map on stable endomorphisms in one
/// Z/2-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeComparison {
    pub source_dim: usize,
    pub target_dim: usize,
    pub induced_rank: usize,
}

impl DegreeComparison {
    pub fn is_isomorphism(&self) -> bool {
        self.source_dim == self.target_dim && self.induced_rank == self.source_dim
    }
}

/// Diagnostic comparison of stable endomorphisms across a base change, in
/// both Z/2-degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndComparisonReport {
    pub even: DegreeComparison,
    pub odd: DegreeComparison,
}

impl EndComparisonReport {
    pub fn is_isomorphism(&self) -> bool {
        self.even.is_isomorphism() && self.odd.is_isomorphism()
    }
}

fn induced_degree_comparison(
    hom: &RingHom,
    src_space: &StableHomSpace,
    tgt_space: &StableHomSpace,
    new_source: &EquivariantMF,
    new_target: &EquivariantMF,
) -> Result<DegreeComparison> {
    let field = hom.target().field().clone();
    let mut m = FMat::zero(&field, tgt_space.dim(), src_space.dim());
    for l in 0..src_space.dim() {
        let rep = src_space.representative(l)?;
        let moved = base_change_morphism(hom, &rep, new_source, new_target)?;
        let coords = tgt_space.reduce(&moved)?;
        for (row, c) in coords.into_iter().enumerate() {
            m.set(row, l, c);
        }
    }
    Ok(DegreeComparison {
        source_dim: src_space.dim(),
        target_dim: tgt_space.dim(),
        induced_rank: m.rank(&field)?,
    })
}

/// Compare stable endomorphisms of `X` and of its base change, in both
/// Z/2-degrees, reporting whether the induced map is an isomorphism. This
/// is a diagnostic: no flatness hypotheses are verified.
pub fn compare_end_homology(
    hom: &RingHom,
    x: &EquivariantMF,
    target_action: &Arc<RingAction>,
) -> Result<EndComparisonReport> {
    let y = base_change(hom, x, target_action)?;
    let even_src = stable_hom(x, x)?;
    let even_tgt = stable_hom(&y, &y)?;
    let even = induced_degree_comparison(hom, &even_src, &even_tgt, &y, &y)?;
    let sx = shift(x)?;
    let sy = shift(&y)?;
    let odd_src = stable_hom(x, &sx)?;
    let odd_tgt = stable_hom(&y, &sy)?;
    let odd = induced_degree_comparison(hom, &odd_src, &odd_tgt, &y, &sy)?;
    Ok(EndComparisonReport { even, odd })
}

/// The plain object `P^g = (σ_g(A), σ_g(B))` through which `g`-twisted
/// chain maps are expressed.
pub fn twisted_object(p: &EquivariantMF, action: &Arc<RingAction>, g: usize) -> Result<EquivariantMF> {
    require_plain(p)?;
    EquivariantMF::plain(
        p.ring(),
        action.apply_matrix(g, p.a())?,
        action.apply_matrix(g, p.b())?,
    )
}

/// Twist a `θ`-datum by `h`: if `t: P^g → P`, the entrywise image
/// `σ_h(t): P^{hg} → P^h`.
fn twist_theta(
    p: &EquivariantMF,
    action: &Arc<RingAction>,
    t: &MFMorphism,
    h: usize,
    g: usize,
) -> Result<MFMorphism> {
    let hg = action.group().mul(h, g);
    let src = twisted_object(p, action, hg)?;
    let tgt = twisted_object(p, action, h)?;
    let u0 = action.apply_matrix(h, t.u0())?;
    let u1 = action.apply_matrix(h, t.u1())?;
    MFMorphism::new(&src, &tgt, u0, u1)
}

/// A homotopy-coherent equivariant structure: a plain object `P` with
/// chain maps `θ_g: P^g → P` satisfying the cocycle conditions up to
/// certified homotopy.
#[derive(Clone, Debug)]
pub struct HomotopyEquivariantObject {
    object: EquivariantMF,
    action: Arc<RingAction>,
    theta: Vec<MFMorphism>,
}

impl HomotopyEquivariantObject {
    pub fn new(
        object: EquivariantMF,
        action: Arc<RingAction>,
        theta: Vec<MFMorphism>,
    ) -> Result<Self> {
        require_plain(&object)?;
        if **object.ring() != **action.ring() {
            return Err(Error::MixedRings("object and action live over different rings".into()));
        }
        let n = action.group().order();
        if theta.len() != n {
            return Err(Error::InvalidAction(format!(
                "expected {n} twist maps, found {}",
                theta.len()
            )));
        }
        for (g, t) in theta.iter().enumerate() {
            let src = twisted_object(&object, &action, g)?;
            if t.source() != &src || t.target() != &object {
                return Err(Error::InvalidAction(format!(
                    "θ_{g} is not a chain map P^{g} → P"
                )));
            }
        }
        let e = action.group().identity();
        let id = MFMorphism::identity(&object);
        if homotopy_witness(&theta[e], &id)?.is_none() {
            return Err(Error::Validation("θ_e is not homotopic to the identity".into()));
        }
        let obj = HomotopyEquivariantObject { object, action, theta };
        for h in 0..n {
            for g in 0..n {
                let lhs = obj.theta[h].compose(&twist_theta(&obj.object, &obj.action, &obj.theta[g], h, g)?)?;
                let hg = obj.action.group().mul(h, g);
                if homotopy_witness(&lhs, &obj.theta[hg])?.is_none() {
                    return Err(Error::Validation(format!(
                        "cocycle fails up to homotopy at (h, g) = ({h}, {g})"
                    )));
                }
            }
        }
        Ok(obj)
    }

    /// The coherent structure carried by a genuine equivariant object: its
    /// action matrices, which satisfy the cocycle exactly.
    pub fn from_genuine(x: &EquivariantMF) -> Result<Self> {
        let p = forget(x)?;
        let action = x.action().clone();
        let mut theta = Vec::with_capacity(x.group_order());
        for g in 0..x.group_order() {
            let src = twisted_object(&p, &action, g)?;
            theta.push(MFMorphism::new(&src, &p, x.m0(g).clone(), x.m1(g).clone())?);
        }
        HomotopyEquivariantObject::new(p, action, theta)
    }

    pub fn object(&self) -> &EquivariantMF {
        &self.object
    }

    pub fn action(&self) -> &Arc<RingAction> {
        &self.action
    }

    pub fn theta(&self, g: usize) -> &MFMorphism {
        &self.theta[g]
    }
}

/// Result of strictifying a homotopy-coherent structure: a genuine
/// equivariant object plus the certified comparison data back to `P`.
#[derive(Clone, Debug)]
pub struct StrictifyResult {
    object: EquivariantMF,
    splitting: SplitResult,
    comparison: MFMorphism,
    comparison_inverse: MFMorphism,
    theta_witnesses: Vec<Homotopy>,
}

impl StrictifyResult {
    /// The genuine equivariant object `Z`.
    pub fn object(&self) -> &EquivariantMF {
        &self.object
    }

    /// The splitting of the averaged projector on `induce(P)`.
    pub fn splitting(&self) -> &SplitResult {
        &self.splitting
    }

    /// The stable equivalence `w: P → forget(Z)`.
    pub fn comparison(&self) -> &MFMorphism {
        &self.comparison
    }

    /// A stable inverse of the comparison.
    pub fn comparison_inverse(&self) -> &MFMorphism {
        &self.comparison_inverse
    }

    /// Per-element witnesses for `θ^Z_g∘σ_g(w) ≃ w∘θ_g`.
    pub fn theta_witnesses(&self) -> &[Homotopy] {
        &self.theta_witnesses
    }
}

/// Turn a homotopy-coherent structure into a genuine equivariant object,
/// certifying that the comparison functor sends it back to the input.
pub fn strictify(obj: &HomotopyEquivariantObject, seed: u64) -> Result<StrictifyResult> {
    let p = &obj.object;
    let action = &obj.action;
    let n = action.group().order();
    let field = p.ring().field().clone();
    let inv_n = inverse_group_order(&field, n)?;
    let z0 = induce(p, action)?;
    // θ-twisted averaging projector: block (h, g) = (1/n)·σ_h(θ_{h⁻¹})∘θ_g.
    let theta_block = |h: usize, g: usize| -> Result<(GradedMatrix, GradedMatrix)> {
        let hinv = action.group().inv(h);
        let left = twist_theta(p, action, &obj.theta[hinv], h, hinv)?;
        let right = &obj.theta[g];
        let b0 = left.u0().compose(right.u0())?.map_entries(|e| Ok(e.scalar_mul(&inv_n, &field)))?;
        let b1 = left.u1().compose(right.u1())?.map_entries(|e| Ok(e.scalar_mul(&inv_n, &field)))?;
        Ok((b0, b1))
    };
    let mut blocks0 = Vec::new();
    let mut blocks1 = Vec::new();
    for h in 0..n {
        for g in 0..n {
            let (b0, b1) = theta_block(h, g)?;
            blocks0.push(b0);
            blocks1.push(b1);
        }
    }
    let e0 = block_matrix(z0.p0().clone(), z0.p0().clone(), 0, n, p.p0().rank(), p.p0().rank(), |h, g| {
        Ok(Some(blocks0[h * n + g].clone()))
    })?;
    let e1 = block_matrix(z0.p1().clone(), z0.p1().clone(), 0, n, p.p1().rank(), p.p1().rank(), |h, g| {
        Ok(Some(blocks1[h * n + g].clone()))
    })?;
    // The projector is an exact chain map but only homotopy-equivariant;
    // a Reynolds average makes it strictly equivariant without moving its
    // stable class.
    let avg = |u0: &GradedMatrix, u1: &GradedMatrix| -> Result<(GradedMatrix, GradedMatrix)> {
        let mut acc0 = GradedMatrix::zero(z0.p0().clone(), z0.p0().clone(), 0);
        let mut acc1 = GradedMatrix::zero(z0.p1().clone(), z0.p1().clone(), 0);
        for k in 0..n {
            let kinv = action.group().inv(k);
            let t0 = z0
                .m0(k)
                .compose(&action.apply_matrix(k, u0)?)?
                .compose(z0.m0(kinv))?;
            let t1 = z0
                .m1(k)
                .compose(&action.apply_matrix(k, u1)?)?
                .compose(z0.m1(kinv))?;
            acc0 = acc0.add(&t0)?;
            acc1 = acc1.add(&t1)?;
        }
        Ok((
            acc0.map_entries(|e| Ok(e.scalar_mul(&inv_n, &field)))?,
            acc1.map_entries(|e| Ok(e.scalar_mul(&inv_n, &field)))?,
        ))
    };
    let (avg0, avg1) = avg(&e0, &e1)?;
    let projector = MFMorphism::new(&z0, &z0, avg0, avg1)?;
    let split = split_homotopy_idempotent(&z0, &projector, seed)?;
    let z = split.object().clone();
    // Comparison: include P as the identity-labelled block of induce(P),
    // then project to Z; certify a stable inverse.
    let e_idx = action.group().identity();
    let z0_plain = forget(&z0)?;
    let z_plain = forget(&z)?;
    let column_inclusion = |pm: &GradedFreeModule, zm: &GradedFreeModule| -> Result<GradedMatrix> {
        let nvars = pm.ring().nvars();
        let mut entries = vec![Polynomial::zero(nvars); zm.rank() * pm.rank()];
        let one = Polynomial::one(nvars, &field);
        for j in 0..pm.rank() {
            entries[(e_idx * pm.rank() + j) * pm.rank() + j] = one.clone();
        }
        GradedMatrix::new(pm.clone(), zm.clone(), 0, entries)
    };
    let inc = MFMorphism::new(
        p,
        &z0_plain,
        column_inclusion(p.p0(), z0.p0())?,
        column_inclusion(p.p1(), z0.p1())?,
    )?;
    let proj_plain = MFMorphism::new(
        &z0_plain,
        &z_plain,
        split.projection().u0().clone(),
        split.projection().u1().clone(),
    )?;
    let w = proj_plain.compose(&inc)?;
    let w_inv = stable_inverse_of(&w)?
        .ok_or_else(|| Error::Internal("comparison map is not a stable equivalence".into()))?;
    // θ-compatibility: θ^Z_g∘σ_g(w) ≃ w∘θ_g for every g.
    let z_coherent = HomotopyEquivariantObject::from_genuine(&z)?;
    let mut theta_witnesses = Vec::with_capacity(n);
    for g in 0..n {
        let src = twisted_object(p, action, g)?;
        let w_twisted = MFMorphism::new(
            &src,
            &twisted_object(&z_plain, action, g)?,
            action.apply_matrix(g, w.u0())?,
            action.apply_matrix(g, w.u1())?,
        )?;
        let lhs = z_coherent.theta(g).compose(&w_twisted)?;
        let rhs = w.compose(&obj.theta[g])?;
        let witness = homotopy_witness(&lhs, &rhs)?.ok_or_else(|| {
            Error::Internal(format!("comparison is not θ-compatible at g = {g}"))
        })?;
        theta_witnesses.push(witness);
    }
    Ok(StrictifyResult {
        object: z,
        splitting: split,
        comparison: w,
        comparison_inverse: w_inv,
        theta_witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupData;
    use crate::mf::direct_sum;
    use crate::morphism::verify_homotopy;
    use crate::rat::Rat;
    use crate::splitting::{ks_decompose, stable_mutual_inverse};

    fn sign_action() -> (Arc<GradedRing>, Arc<RingAction>) {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let g = GroupData::cyclic(2).unwrap();
        let neg_x = r.variable(0).neg(r.field());
        let action = RingAction::new(r.clone(), g, vec![vec![r.variable(0)], vec![neg_x]]).unwrap();
        (r, action)
    }

    /// The two inequivalent equivariant structures on (x, x) under the sign
    /// action: equivariance forces m1 = -m0, leaving the sign of m0 free.
    fn sign_structure(r: &Arc<GradedRing>, action: &Arc<RingAction>, sign: i64) -> EquivariantMF {
        let plain = EquivariantMF::rank_one(r, "x", "x").unwrap();
        let m0 = vec![
            GradedMatrix::identity(plain.p0()),
            GradedMatrix::scalar_identity(plain.p0(), &r.field().from_i64(sign)),
        ];
        let m1 = vec![
            GradedMatrix::identity(plain.p1()),
            GradedMatrix::scalar_identity(plain.p1(), &r.field().from_i64(-sign)),
        ];
        EquivariantMF::new(
            action.clone(),
            plain.a().clone(),
            plain.b().clone(),
            m0,
            m1,
        )
        .unwrap()
    }

    #[test]
    fn forget_and_trivial_induce_are_identity_like() {
        let (r, action) = sign_action();
        let y = sign_structure(&r, &action, 1);
        let p = forget(&y).unwrap();
        assert_eq!(p.group_order(), 1);
        assert_eq!(p.a(), y.a());
        // Trivial group: induce changes nothing but the bookkeeping.
        let trivial = RingAction::trivial_group(r.clone());
        let ind = induce(&p, &trivial).unwrap();
        assert_eq!(ind.rank(), p.rank());
        assert_eq!(ind.a(), p.a());
    }

    #[test]
    fn induce_doubles_rank_and_decomposes() {
        let (r, action) = sign_action();
        let p = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let ind = induce(&p, &action).unwrap();
        assert_eq!(ind.rank(), 2);
        // The induced object splits into the two sign structures.
        let d = ks_decompose(&ind, 11).unwrap();
        assert_eq!(d.summands().len(), 2);
        assert_eq!(d.classes().len(), 2);
        let plus = sign_structure(&r, &action, 1);
        let minus = sign_structure(&r, &action, -1);
        for t in [&plus, &minus] {
            let hits = d
                .classes()
                .iter()
                .filter(|cls| {
                    let rep = d.summands()[cls.representative()].object();
                    stable_mutual_inverse(rep, t).unwrap().is_some()
                })
                .count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn induced_differential_has_twisted_blocks() {
        let (r, action) = sign_action();
        // Entries fixed by the action: blocks are literal copies.
        let p = EquivariantMF::plain(
            &r,
            GradedMatrix::new(
                GradedFreeModule::new(r.clone(), vec![2]),
                GradedFreeModule::new(r.clone(), vec![0]),
                0,
                vec![Polynomial::parse("x^2", &["x".into()], r.field()).unwrap()],
            )
            .unwrap(),
            GradedMatrix::new(
                GradedFreeModule::new(r.clone(), vec![0]),
                GradedFreeModule::new(r.clone(), vec![2]),
                2,
                vec![Polynomial::one(1, r.field())],
            )
            .unwrap(),
        )
        .unwrap();
        let ind = induce(&p, &action).unwrap();
        for blk in 0..2 {
            assert_eq!(ind.a().at(blk, blk), p.a().at(0, 0));
        }
        assert!(ind.a().at(0, 1).is_zero());
        assert!(ind.a().at(1, 0).is_zero());
        // Entries moved by the action: blocks are the twisted copies.
        let q = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let ind = induce(&q, &action).unwrap();
        assert_eq!(ind.a().at(0, 0), q.a().at(0, 0));
        assert_eq!(
            ind.a().at(1, 1),
            &action.apply(1, q.a().at(0, 0)).unwrap()
        );
    }

    #[test]
    fn averaging_splits_equivariant_objects() {
        let (r, action) = sign_action();
        for sign in [1, -1] {
            let y = sign_structure(&r, &action, sign);
            let (z, p, j) = averaging_splitting(&y).unwrap();
            assert_eq!(z.rank(), 2 * y.rank());
            assert!(p.compose(&j).unwrap().sub(&MFMorphism::identity(&y)).unwrap().is_zero());
        }
    }

    #[test]
    fn averaging_requires_invertible_group_order() {
        let f2 = Field::prime(2).unwrap();
        let r = GradedRing::parse_new(f2, &["x"], &[1], "x^2").unwrap();
        let g = GroupData::cyclic(2).unwrap();
        // The swap-free action: G acts trivially on the ring but the object
        // still needs 1/|G|.
        let action = RingAction::new(r.clone(), g, vec![vec![r.variable(0)], vec![r.variable(0)]])
            .unwrap();
        let plain = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let m0 = vec![GradedMatrix::identity(plain.p0()); 2];
        let m1 = vec![GradedMatrix::identity(plain.p1()); 2];
        let y = EquivariantMF::new(action, plain.a().clone(), plain.b().clone(), m0, m1).unwrap();
        assert!(matches!(
            averaging_splitting(&y),
            Err(Error::GroupOrderNotInvertible { order: 2, characteristic: 2 })
        ));
    }

    #[test]
    fn base_change_to_extension_preserves_stable_dims() {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let ext = Field::extension("i", vec![Rat::one(), Rat::zero(), Rat::one()]).unwrap();
        let r2 = GradedRing::parse_new(ext, &["x"], &[1], "x^2").unwrap();
        let hom = RingHom::new(r.clone(), r2.clone(), vec![r2.variable(0)]).unwrap();
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let report = compare_end_homology(&hom, &x, &RingAction::trivial_group(r2.clone())).unwrap();
        assert!(report.is_isomorphism());
        assert_eq!(report.even.source_dim, 1);
    }

    #[test]
    fn base_change_substitution_and_bad_potential() {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let r2 = GradedRing::parse_new(Field::rationals(), &["x", "y"], &[1, 1], "x^2").unwrap();
        let hom = RingHom::new(r.clone(), r2.clone(), vec![r2.variable(0)]).unwrap();
        let x = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let y = base_change(&hom, &x, &RingAction::trivial_group(r2.clone())).unwrap();
        assert_eq!(y.rank(), 1);
        assert_eq!(
            y.a().at(0, 0),
            &Polynomial::parse("x", &["x".into(), "y".into()], r2.field()).unwrap()
        );
        // A homomorphism that misses the target potential is rejected.
        let r3 = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^3").unwrap();
        assert!(RingHom::new(r.clone(), r3.clone(), vec![r3.variable(0)]).is_err());
    }

    #[test]
    fn strictify_roundtrip_from_genuine() {
        let (r, action) = sign_action();
        for sign in [1, -1] {
            let y = sign_structure(&r, &action, sign);
            let coherent = HomotopyEquivariantObject::from_genuine(&y).unwrap();
            let res = strictify(&coherent, 7).unwrap();
            // The strictification is equivariantly isomorphic to y.
            assert!(stable_mutual_inverse(res.object(), &y).unwrap().is_some());
            // The certified witnesses re-verify.
            for (g, wit) in res.theta_witnesses().iter().enumerate() {
                let z_coherent = HomotopyEquivariantObject::from_genuine(res.object()).unwrap();
                let src = twisted_object(coherent.object(), &action, g).unwrap();
                let z_plain = forget(res.object()).unwrap();
                let w_twisted = MFMorphism::new(
                    &src,
                    &twisted_object(&z_plain, &action, g).unwrap(),
                    action.apply_matrix(g, res.comparison().u0()).unwrap(),
                    action.apply_matrix(g, res.comparison().u1()).unwrap(),
                )
                .unwrap();
                let lhs = z_coherent.theta(g).compose(&w_twisted).unwrap();
                let rhs = res.comparison().compose(coherent.theta(g)).unwrap();
                assert!(verify_homotopy(&lhs, &rhs, wit).unwrap());
            }
        }
    }

    #[test]
    fn strictify_separates_sign_structures() {
        let (r, action) = sign_action();
        let p = EquivariantMF::rank_one(&r, "x", "x").unwrap();
        let plus = sign_structure(&r, &action, 1);
        let minus = sign_structure(&r, &action, -1);
        // θ_σ = ±(1, -1) are both coherent structures on (x, x); they
        // strictify to the two distinct equivariant structures.
        let mut results = Vec::new();
        for sign in [1i64, -1] {
            let id = MFMorphism::identity(&p);
            let src = twisted_object(&p, &action, 1).unwrap();
            let t1 = MFMorphism::new(
                &src,
                &p,
                GradedMatrix::scalar_identity(p.p0(), &r.field().from_i64(sign)),
                GradedMatrix::scalar_identity(p.p1(), &r.field().from_i64(-sign)),
            )
            .unwrap();
            let coherent = HomotopyEquivariantObject::new(p.clone(), action.clone(), vec![id, t1]).unwrap();
            results.push(strictify(&coherent, 31).unwrap());
        }
        assert!(stable_mutual_inverse(results[0].object(), &plus).unwrap().is_some());
        assert!(stable_mutual_inverse(results[1].object(), &minus).unwrap().is_some());
        assert!(stable_mutual_inverse(results[0].object(), results[1].object())
            .unwrap()
            .is_none());
    }

    #[test]
    fn strictify_trivial_group_recovers_object() {
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^4").unwrap();
        let x = EquivariantMF::rank_one(&r, "x", "x^3").unwrap();
        let coherent = HomotopyEquivariantObject::from_genuine(&x).unwrap();
        let res = strictify(&coherent, 3).unwrap();
        assert!(stable_mutual_inverse(res.object(), &x).unwrap().is_some());
    }

    #[test]
    fn functors_preserve_sums_and_homotopies() {
        let (r, action) = sign_action();
        let y1 = sign_structure(&r, &action, 1);
        let y2 = sign_structure(&r, &action, -1);
        let s = direct_sum(&y1, &y2).unwrap();
        let fs = forget(&s).unwrap();
        let sf = direct_sum(&forget(&y1).unwrap(), &forget(&y2).unwrap()).unwrap();
        assert_eq!(fs.a(), sf.a());
        assert_eq!(fs.b(), sf.b());
        let ind = induce(&fs, &action).unwrap();
        let ind2 = direct_sum(
            &induce(&forget(&y1).unwrap(), &action).unwrap(),
            &induce(&forget(&y2).unwrap(), &action).unwrap(),
        )
        .unwrap();
        // Same object up to the interleaving of blocks: equal ranks and a
        // certified stable isomorphism.
        assert_eq!(ind.rank(), ind2.rank());
        assert!(stable_mutual_inverse(&ind, &ind2).unwrap().is_some());
    }
}
