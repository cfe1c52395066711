//! Graded free modules and degree-legal matrices of polynomials.
//!
//! A free module is a list of generator degrees over a [`GradedRing`]. A
//! `GradedMatrix` from `src` to `tgt` of internal degree `shift` stores one
//! homogeneous polynomial per (row, column); entry `(i, j)` must be
//! homogeneous of degree `shift + src.weight(j) - tgt.weight(i)` (or zero).
//! Entries whose required degree is negative are forced to vanish, which is
//! what keeps all the hom spaces in this crate finite-dimensional.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::linalg::FMat;
use crate::poly::{Exp, Polynomial};
use crate::ring::GradedRing;

/// Free graded module, described by the degrees of its generators.
#[derive(Clone)]
pub struct GradedFreeModule {
    ring: Arc<GradedRing>,
    weights: Vec<i64>,
}

impl PartialEq for GradedFreeModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.weights == other.weights
    }
}
impl Eq for GradedFreeModule {}

impl std::fmt::Debug for GradedFreeModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GradedFreeModule{:?}", self.weights)
    }
}

impl GradedFreeModule {
    pub fn new(ring: Arc<GradedRing>, weights: Vec<i64>) -> Self {
        GradedFreeModule { ring, weights }
    }

    pub fn ring(&self) -> &Arc<GradedRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize) -> i64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Same module with every generator degree raised by `t`.
    pub fn twist(&self, t: i64) -> Self {
        GradedFreeModule {
            ring: self.ring.clone(),
            weights: self.weights.iter().map(|w| w + t).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.ring.require_same_ring(&other.ring)?;
        let mut weights = self.weights.clone();
        weights.extend_from_slice(&other.weights);
        Ok(GradedFreeModule {
            ring: self.ring.clone(),
            weights,
        })
    }

    /// Submodule spanned by the listed generators, in the given order.
    pub fn select(&self, indices: &[usize]) -> Self {
        GradedFreeModule {
            ring: self.ring.clone(),
            weights: indices.iter().map(|&i| self.weights[i]).collect(),
        }
    }
}

/// Homogeneous matrix between graded free modules.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    src: GradedFreeModule,
    tgt: GradedFreeModule,
    shift: i64,
    /// Row-major, `tgt.rank()` rows by `src.rank()` columns.
    entries: Vec<Polynomial>,
}

impl std::fmt::Debug for GradedMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ring = self.src.ring();
        writeln!(
            f,
            "GradedMatrix shift {} : {:?} -> {:?} [",
            self.shift,
            self.src.weights(),
            self.tgt.weights()
        )?;
        for i in 0..self.tgt.rank() {
            let row: Vec<String> = (0..self.src.rank())
                .map(|j| ring.to_string(self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl GradedMatrix {
    /// Required degree of entry `(i, j)`; entries of negative required
    /// degree must be zero.
    pub fn required_degree_for(
        src: &GradedFreeModule,
        tgt: &GradedFreeModule,
        shift: i64,
        i: usize,
        j: usize,
    ) -> i64 {
        shift + src.weight(j) - tgt.weight(i)
    }

    pub fn new(
        src: GradedFreeModule,
        tgt: GradedFreeModule,
        shift: i64,
        entries: Vec<Polynomial>,
    ) -> Result<Self> {
        src.ring().require_same_ring(tgt.ring())?;
        if entries.len() != src.rank() * tgt.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                tgt.rank(),
                src.rank()
            )));
        }
        let m = GradedMatrix {
            src,
            tgt,
            shift,
            entries,
        };
        m.validate_degrees()?;
        Ok(m)
    }

    fn validate_degrees(&self) -> Result<()> {
        let ring = self.src.ring();
        for i in 0..self.tgt.rank() {
            for j in 0..self.src.rank() {
                let p = self.at(i, j);
                if p.is_zero() {
                    continue;
                }
                if p.nvars() != ring.nvars() {
                    return Err(Error::MixedRings("matrix entry arity".into()));
                }
                let need = Self::required_degree_for(&self.src, &self.tgt, self.shift, i, j);
                match ring.degree_of(p)? {
                    Some(d) if d == need => {}
                    got => {
                        return Err(Error::NotHomogeneous(format!(
                            "entry ({i},{j}) must have degree {need}, found {got:?}"
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn zero(src: GradedFreeModule, tgt: GradedFreeModule, shift: i64) -> Self {
        let n = src.rank() * tgt.rank();
        let nvars = src.ring().nvars();
        GradedMatrix {
            src,
            tgt,
            shift,
            entries: vec![Polynomial::zero(nvars); n],
        }
    }

    pub fn identity(module: &GradedFreeModule) -> Self {
        let mut m = Self::zero(module.clone(), module.clone(), 0);
        let one = module.ring().one();
        for i in 0..module.rank() {
            m.entries[i * module.rank() + i] = one.clone();
        }
        m
    }

    /// Identity entries scaled by a field constant.
    pub fn scalar_identity(module: &GradedFreeModule, c: &Scalar) -> Self {
        let mut m = Self::identity(module);
        let field = module.ring().field().clone();
        for e in &mut m.entries {
            *e = e.scalar_mul(c, &field);
        }
        m
    }

    pub fn src(&self) -> &GradedFreeModule {
        &self.src
    }

    pub fn tgt(&self) -> &GradedFreeModule {
        &self.tgt
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn at(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.src.rank() + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// `self ∘ other` (apply `other` first). Shifts add.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.tgt {
            return Err(Error::DimensionMismatch(
                "composition: source of outer map differs from target of inner".into(),
            ));
        }
        let ring = self.src.ring().clone();
        let rows = self.tgt.rank();
        let mid = self.src.rank();
        let cols = other.src.rank();
        let mut entries = vec![Polynomial::zero(ring.nvars()); rows * cols];
        for i in 0..rows {
            for k in 0..mid {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = ring.mul(a, b)?;
                    entries[i * cols + j] = ring.add(&entries[i * cols + j], &prod)?;
                }
            }
        }
        GradedMatrix::new(
            other.src.clone(),
            self.tgt.clone(),
            self.shift + other.shift,
            entries,
        )
    }

    pub fn add(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        if self.src != other.src || self.tgt != other.tgt || self.shift != other.shift {
            return Err(Error::DimensionMismatch("matrix addition shape".into()));
        }
        let ring = self.src.ring();
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            entries.push(ring.add(a, b)?);
        }
        Ok(GradedMatrix {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            shift: self.shift,
            entries,
        })
    }

    pub fn sub(&self, other: &GradedMatrix) -> Result<GradedMatrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMatrix {
        let field = self.src.ring().field().clone();
        GradedMatrix {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            shift: self.shift,
            entries: self.entries.iter().map(|p| p.neg(&field)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> GradedMatrix {
        let field = self.src.ring().field().clone();
        GradedMatrix {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            shift: self.shift,
            entries: self.entries.iter().map(|p| p.scalar_mul(c, &field)).collect(),
        }
    }

    /// Multiply every entry by a homogeneous polynomial; the internal degree
    /// rises by its degree.
    pub fn mul_poly(&self, p: &Polynomial) -> Result<GradedMatrix> {
        let ring = self.src.ring().clone();
        let d = match ring.degree_of(p)? {
            Some(d) => d,
            None => {
                // Multiplying by zero: result is the zero map of the same shape.
                return Ok(Self::zero(self.src.clone(), self.tgt.clone(), self.shift));
            }
        };
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(ring.mul(e, p)?);
        }
        Ok(GradedMatrix {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            shift: self.shift + d,
            entries,
        })
    }

    /// Apply a ring map entrywise (for group actions and base change);
    /// degree legality is revalidated.
    pub fn map_entries<F>(&self, mut f: F) -> Result<GradedMatrix>
    where
        F: FnMut(&Polynomial) -> Result<Polynomial>,
    {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            entries.push(f(e)?);
        }
        GradedMatrix::new(self.src.clone(), self.tgt.clone(), self.shift, entries)
    }

    /// Twist source and target by `t` (entries unchanged; required degrees
    /// are invariant under a common twist).
    pub fn twist(&self, t: i64) -> GradedMatrix {
        GradedMatrix {
            src: self.src.twist(t),
            tgt: self.tgt.twist(t),
            shift: self.shift,
            entries: self.entries.clone(),
        }
    }

    /// Reinterpret with new source/target modules (for shift/cone plumbing
    /// where generator degrees move but entries stay put); validates.
    pub fn retarget(
        &self,
        src: GradedFreeModule,
        tgt: GradedFreeModule,
        shift: i64,
    ) -> Result<GradedMatrix> {
        GradedMatrix::new(src, tgt, shift, self.entries.clone())
    }

    /// Assemble a 2x2 block matrix. Missing blocks are zero.
    #[allow(clippy::too_many_arguments)]
    pub fn block2(
        src0: &GradedFreeModule,
        src1: &GradedFreeModule,
        tgt0: &GradedFreeModule,
        tgt1: &GradedFreeModule,
        shift: i64,
        tl: Option<&GradedMatrix>,
        tr: Option<&GradedMatrix>,
        bl: Option<&GradedMatrix>,
        br: Option<&GradedMatrix>,
    ) -> Result<GradedMatrix> {
        let src = src0.direct_sum(src1)?;
        let tgt = tgt0.direct_sum(tgt1)?;
        let nvars = src.ring().nvars();
        let cols = src.rank();
        let mut entries = vec![Polynomial::zero(nvars); tgt.rank() * cols];
        let mut place = |block: Option<&GradedMatrix>,
                         row_off: usize,
                         col_off: usize,
                         rows: usize,
                         bcols: usize,
                         label: &str|
         -> Result<()> {
            let Some(b) = block else { return Ok(()) };
            if b.tgt.rank() != rows || b.src.rank() != bcols || b.shift != shift {
                return Err(Error::DimensionMismatch(format!("block {label} shape")));
            }
            for i in 0..rows {
                for j in 0..bcols {
                    entries[(row_off + i) * cols + (col_off + j)] = b.at(i, j).clone();
                }
            }
            Ok(())
        };
        place(tl, 0, 0, tgt0.rank(), src0.rank(), "top-left")?;
        place(tr, 0, src0.rank(), tgt0.rank(), src1.rank(), "top-right")?;
        place(bl, tgt0.rank(), 0, tgt1.rank(), src0.rank(), "bottom-left")?;
        place(
            br,
            tgt0.rank(),
            src0.rank(),
            tgt1.rank(),
            src1.rank(),
            "bottom-right",
        )?;
        GradedMatrix::new(src, tgt, shift, entries)
    }

    /// Submatrix given by row and column generator selections.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<GradedMatrix> {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.at(i, j).clone());
            }
        }
        GradedMatrix::new(
            self.src.select(cols),
            self.tgt.select(rows),
            self.shift,
            entries,
        )
    }

    /// Constant terms of the entries, as a matrix over the field (the fiber
    /// of the map at the unique graded point).
    pub fn eval_zero(&self) -> FMat {
        let field = self.src.ring().field().clone();
        let mut m = FMat::zero(&field, self.tgt.rank(), self.src.rank());
        for i in 0..self.tgt.rank() {
            for j in 0..self.src.rank() {
                m.set(i, j, self.at(i, j).constant_term(&field));
            }
        }
        m
    }
}

/// Coordinate chart for the space of graded matrices `src -> tgt` of a fixed
/// internal degree. Each slot is one monomial in one entry; the chart gives
/// exact, canonical coordinates used by every linear solve over maps.
#[derive(Clone, Debug)]
pub struct MapSpace {
    src: GradedFreeModule,
    tgt: GradedFreeModule,
    shift: i64,
    slots: Vec<(usize, usize, Exp)>,
}

impl MapSpace {
    pub fn new(src: GradedFreeModule, tgt: GradedFreeModule, shift: i64) -> Self {
        let ring = src.ring().clone();
        let mut slots = Vec::new();
        for i in 0..tgt.rank() {
            for j in 0..src.rank() {
                let need = GradedMatrix::required_degree_for(&src, &tgt, shift, i, j);
                if need < 0 {
                    continue;
                }
                for exp in ring.monomials_of_degree(need) {
                    slots.push((i, j, exp));
                }
            }
        }
        MapSpace { src, tgt, shift, slots }
    }

    pub fn dim(&self) -> usize {
        self.slots.len()
    }

    pub fn src(&self) -> &GradedFreeModule {
        &self.src
    }

    pub fn tgt(&self) -> &GradedFreeModule {
        &self.tgt
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn from_coords(&self, coords: &[Scalar]) -> Result<GradedMatrix> {
        if coords.len() != self.slots.len() {
            return Err(Error::DimensionMismatch("map-space coordinate length".into()));
        }
        let ring = self.src.ring().clone();
        let field = ring.field().clone();
        let cols = self.src.rank();
        let mut entries = vec![Polynomial::zero(ring.nvars()); self.tgt.rank() * cols];
        for ((i, j, exp), c) in self.slots.iter().zip(coords) {
            if field.is_zero(c) {
                continue;
            }
            let mono = Polynomial::monomial(ring.nvars(), exp.clone(), c.clone(), &field);
            entries[i * cols + j] = entries[i * cols + j].add(&mono, &field)?;
        }
        GradedMatrix::new(self.src.clone(), self.tgt.clone(), self.shift, entries)
    }

    /// Coordinates of a degree-legal matrix in this chart.
    pub fn to_coords(&self, m: &GradedMatrix) -> Result<Vec<Scalar>> {
        if m.src() != &self.src || m.tgt() != &self.tgt || m.shift() != self.shift {
            return Err(Error::DimensionMismatch("matrix outside map space".into()));
        }
        let field = self.src.ring().field().clone();
        let mut coords = Vec::with_capacity(self.slots.len());
        for (i, j, exp) in &self.slots {
            coords.push(
                m.at(*i, *j)
                    .coefficient(exp)
                    .cloned()
                    .unwrap_or_else(|| field.zero()),
            );
        }
        Ok(coords)
    }

    pub fn basis_element(&self, k: usize) -> GradedMatrix {
        let field = self.src.ring().field().clone();
        let mut coords = vec![field.zero(); self.slots.len()];
        coords[k] = field.one();
        self.from_coords(&coords).expect("basis coordinates are legal")
    }
}

/// Basis of all homogeneous maps `src -> tgt` of internal degree `shift`.
pub fn graded_map_space(
    src: &GradedFreeModule,
    tgt: &GradedFreeModule,
    shift: i64,
) -> Vec<GradedMatrix> {
    let space = MapSpace::new(src.clone(), tgt.clone(), shift);
    (0..space.dim()).map(|k| space.basis_element(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn qx() -> Arc<GradedRing> {
        GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap()
    }

    #[test]
    fn map_space_basis_examples() {
        let r = qx();
        let w0 = GradedFreeModule::new(r.clone(), vec![0]);
        let w1 = GradedFreeModule::new(r.clone(), vec![1]);
        // Equal weights, shift 0: constants only.
        let b = graded_map_space(&w0, &w0, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], GradedMatrix::identity(&w0));
        // Entry degree -1: no maps.
        assert!(graded_map_space(&w0, &w1, 0).is_empty());
        // Entry degree 1: spanned by [x].
        let b = graded_map_space(&w1, &w0, 0);
        assert_eq!(b.len(), 1);
        assert_eq!(*b[0].at(0, 0), r.parse("x").unwrap());
    }

    #[test]
    fn factorization_composition_degrees() {
        let r = qx();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x").unwrap()]).unwrap();
        let b = GradedMatrix::new(p0.clone(), p1.clone(), 2, vec![r.parse("x").unwrap()]).unwrap();
        let ab = a.compose(&b).unwrap();
        let f_id = GradedMatrix::identity(&p0).mul_poly(r.potential()).unwrap();
        assert_eq!(ab, f_id);
        let ba = b.compose(&a).unwrap();
        let f_id1 = GradedMatrix::identity(&p1).mul_poly(r.potential()).unwrap();
        assert_eq!(ba, f_id1);
    }

    #[test]
    fn degree_violations_rejected() {
        let r = qx();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        // Entry must have degree 1, supply degree 2.
        let bad = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x^2").unwrap()]);
        assert!(matches!(bad, Err(Error::NotHomogeneous(_))));
        // Inhomogeneous entry.
        let bad = GradedMatrix::new(
            p1.clone(),
            p0.clone(),
            1,
            vec![r.parse("x^2 + x").unwrap()],
        );
        assert!(matches!(bad, Err(Error::NotHomogeneous(_))));
        // Zero entries are always fine, even in negative-degree slots.
        let ok = GradedMatrix::zero(p0, p1, 0);
        assert!(ok.is_zero());
    }

    #[test]
    fn block_assembly_and_submatrix() {
        let r = qx();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let a = GradedMatrix::new(p1.clone(), p0.clone(), 0, vec![r.parse("x").unwrap()]).unwrap();
        let blk = GradedMatrix::block2(&p1, &p0, &p0, &p1, 0, Some(&a), None, None, None).unwrap();
        assert_eq!(blk.src().weights(), &[1, 0]);
        assert_eq!(blk.tgt().weights(), &[0, 1]);
        assert_eq!(*blk.at(0, 0), r.parse("x").unwrap());
        assert!(blk.at(1, 1).is_zero());
        let back = blk.submatrix(&[0], &[0]).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn coords_roundtrip() {
        let r = GradedRing::parse_new(Field::rationals(), &["x", "y"], &[1, 1], "x^3 + y^3").unwrap();
        let src = GradedFreeModule::new(r.clone(), vec![2, 1]);
        let tgt = GradedFreeModule::new(r.clone(), vec![0, 1]);
        let space = MapSpace::new(src.clone(), tgt.clone(), 0);
        // Entry degrees: (0,0):2 → 3 monos; (0,1):1 → 2; (1,0):1 → 2; (1,1):0 → 1.
        assert_eq!(space.dim(), 8);
        let field = Field::rationals();
        let coords: Vec<_> = (0..8).map(|k| field.from_i64(k as i64 - 3)).collect();
        let m = space.from_coords(&coords).unwrap();
        assert_eq!(space.to_coords(&m).unwrap(), coords);
    }

    #[test]
    fn twist_preserves_legality_and_eval_zero() {
        let r = qx();
        let p0 = GradedFreeModule::new(r.clone(), vec![0]);
        let p1 = GradedFreeModule::new(r.clone(), vec![1]);
        let a = GradedMatrix::new(p1, p0, 0, vec![r.parse("x").unwrap()]).unwrap();
        let t = a.twist(5);
        assert_eq!(t.src().weights(), &[6]);
        assert_eq!(t.tgt().weights(), &[5]);
        assert_eq!(*t.at(0, 0), r.parse("x").unwrap());
        // Constant fiber of [x] is zero; of the identity is the identity.
        let f = r.field().clone();
        assert!(t.eval_zero().is_zero(&f));
        let m = GradedFreeModule::new(r.clone(), vec![0, 2]);
        let id = GradedMatrix::identity(&m);
        assert_eq!(id.eval_zero(), FMat::identity(&f, 2));
    }
}
