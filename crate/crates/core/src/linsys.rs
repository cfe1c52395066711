//! Linear systems whose unknowns are graded matrices.
//!
//! Chain-map conditions, homotopy equations, equivariance constraints, and
//! graded-matrix inversion are all linear in the entries of the unknown
//! matrices. This module assembles such systems over the coordinate charts
//! of [`MapSpace`] and hands them to the exact field solver. A term of a
//! constraint has the form `c · L ∘ σ_g(U) ∘ R` with optional known factors
//! on either side and an optional ring twist of the unknown.

use crate::cancel::CancelToken;
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::graded::{GradedMatrix, MapSpace};
use crate::group::RingAction;
use crate::linalg::{solve_linear_cancellable, FMat, LinearSolution};
use std::sync::Arc;

/// Handle to an unknown matrix inside a [`LinearMapSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnknownId(usize);

/// One summand `c · L ∘ σ_g(U) ∘ R` of a constraint.
#[derive(Clone)]
pub struct Term {
    pub unknown: UnknownId,
    pub left: Option<GradedMatrix>,
    pub right: Option<GradedMatrix>,
    /// Apply this group element's ring automorphism to the unknown first.
    pub group_twist: Option<(Arc<RingAction>, usize)>,
    pub scalar: Scalar,
}

impl Term {
    pub fn plain(unknown: UnknownId, scalar: Scalar) -> Self {
        Term {
            unknown,
            left: None,
            right: None,
            group_twist: None,
            scalar,
        }
    }

    pub fn left(mut self, l: &GradedMatrix) -> Self {
        self.left = Some(l.clone());
        self
    }

    pub fn right(mut self, r: &GradedMatrix) -> Self {
        self.right = Some(r.clone());
        self
    }

    pub fn twisted(mut self, action: &Arc<RingAction>, g: usize) -> Self {
        self.group_twist = Some((action.clone(), g));
        self
    }
}

struct Constraint {
    terms: Vec<Term>,
    /// Row coordinates live in this chart; `rhs` is its coordinate vector.
    space: MapSpace,
    rhs: Vec<Scalar>,
}

/// System of linear constraints on a tuple of unknown graded matrices.
pub struct LinearMapSystem {
    unknowns: Vec<MapSpace>,
    offsets: Vec<usize>,
    total: usize,
    constraints: Vec<Constraint>,
}

impl LinearMapSystem {
    pub fn new() -> Self {
        LinearMapSystem {
            unknowns: Vec::new(),
            offsets: Vec::new(),
            total: 0,
            constraints: Vec::new(),
        }
    }

    pub fn add_unknown(&mut self, space: MapSpace) -> UnknownId {
        let id = UnknownId(self.unknowns.len());
        self.offsets.push(self.total);
        self.total += space.dim();
        self.unknowns.push(space);
        id
    }

    pub fn unknown_space(&self, id: UnknownId) -> &MapSpace {
        &self.unknowns[id.0]
    }

    /// Total number of scalar unknowns.
    pub fn dim(&self) -> usize {
        self.total
    }

    fn apply_term(&self, term: &Term, value: &GradedMatrix) -> Result<GradedMatrix> {
        let mut m = value.clone();
        if let Some((action, g)) = &term.group_twist {
            m = action.apply_matrix(*g, &m)?;
        }
        if let Some(r) = &term.right {
            m = m.compose(r)?;
        }
        if let Some(l) = &term.left {
            m = l.compose(&m)?;
        }
        Ok(m.scale(&term.scalar))
    }

    /// Shape of a term's value: compute it on the zero matrix of the
    /// unknown's chart to learn src/tgt/shift.
    fn term_space(&self, term: &Term) -> Result<MapSpace> {
        let u = &self.unknowns[term.unknown.0];
        let zero = GradedMatrix::zero(u.src().clone(), u.tgt().clone(), u.shift());
        let out = self.apply_term(term, &zero)?;
        Ok(MapSpace::new(out.src().clone(), out.tgt().clone(), out.shift()))
    }

    /// Add the constraint `Σ terms = rhs` (`None` rhs means zero).
    pub fn add_constraint(&mut self, terms: Vec<Term>, rhs: Option<&GradedMatrix>) -> Result<()> {
        let first = terms
            .first()
            .ok_or_else(|| Error::Internal("constraint with no terms".into()))?;
        let space = self.term_space(first)?;
        for t in terms.iter().skip(1) {
            let s = self.term_space(t)?;
            if s.src() != space.src() || s.tgt() != space.tgt() || s.shift() != space.shift() {
                return Err(Error::DimensionMismatch(
                    "constraint terms target different map spaces".into(),
                ));
            }
        }
        let field = space.src().ring().field().clone();
        let rhs_coords = match rhs {
            Some(m) => space.to_coords(m)?,
            None => vec![field.zero(); space.dim()],
        };
        self.constraints.push(Constraint {
            terms,
            space,
            rhs: rhs_coords,
        });
        Ok(())
    }

    /// Assemble and solve. Returns `None` when inconsistent; otherwise one
    /// particular solution and a basis of the homogeneous solution space,
    /// as whole-system coordinate vectors.
    pub fn solve(&self, token: Option<&CancelToken>) -> Result<Option<SystemSolution>> {
        if self.unknowns.is_empty() {
            return Err(Error::Internal("system with no unknowns".into()));
        }
        let field = self.unknowns[0].src().ring().field().clone();
        let nrows: usize = self.constraints.iter().map(|c| c.space.dim()).sum();
        let mut a = FMat::zero(&field, nrows, self.total);
        let mut b = vec![field.zero(); nrows];
        let mut row0 = 0;
        for c in &self.constraints {
            crate::cancel::check(token)?;
            for (r, v) in c.rhs.iter().enumerate() {
                b[row0 + r] = v.clone();
            }
            for term in &c.terms {
                let uspace = &self.unknowns[term.unknown.0];
                let off = self.offsets[term.unknown.0];
                for k in 0..uspace.dim() {
                    let basis = uspace.basis_element(k);
                    let image = self.apply_term(term, &basis)?;
                    let coords = c.space.to_coords(&image)?;
                    for (r, v) in coords.into_iter().enumerate() {
                        if !field.is_zero(&v) {
                            let cur = a.at(row0 + r, off + k).clone();
                            a.set(row0 + r, off + k, field.add(&cur, &v));
                        }
                    }
                }
            }
            row0 += c.space.dim();
        }
        match solve_linear_cancellable(&a, &b, &field, token)? {
            LinearSolution::Inconsistent => Ok(None),
            LinearSolution::Solved { particular, kernel } => Ok(Some(SystemSolution {
                particular,
                kernel,
            })),
        }
    }

    /// Slice a whole-system coordinate vector into the unknowns' matrices.
    pub fn extract(&self, coords: &[Scalar]) -> Result<Vec<GradedMatrix>> {
        if coords.len() != self.total {
            return Err(Error::DimensionMismatch("system coordinate length".into()));
        }
        let mut out = Vec::with_capacity(self.unknowns.len());
        for (u, &off) in self.unknowns.iter().zip(&self.offsets) {
            out.push(u.from_coords(&coords[off..off + u.dim()])?);
        }
        Ok(out)
    }
}

impl Default for LinearMapSystem {
    fn default() -> Self {
        Self::new()
    }
}

/// Solution of a [`LinearMapSystem`] in whole-system coordinates.
pub struct SystemSolution {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

/// Invert a square degree-0 graded matrix, if it is invertible over the
/// graded ring. A graded unit has constant determinant, so invertibility is
/// equivalent to the constant fiber being invertible; the polynomial inverse
/// itself is found by an exact linear solve.
pub fn invert_unit(m: &GradedMatrix) -> Result<Option<GradedMatrix>> {
    if m.src().rank() != m.tgt().rank() || m.shift() != 0 {
        return Ok(None);
    }
    let field = m.src().ring().field().clone();
    let fiber = m.eval_zero();
    if fiber.inverse(&field).is_err() {
        return Ok(None);
    }
    let mut sys = LinearMapSystem::new();
    let v = sys.add_unknown(MapSpace::new(m.tgt().clone(), m.src().clone(), 0));
    let id = GradedMatrix::identity(m.tgt());
    sys.add_constraint(vec![Term::plain(v, field.one()).left(m)], Some(&id))?;
    let Some(sol) = sys.solve(None)? else {
        return Ok(None);
    };
    let inv = sys.extract(&sol.particular)?.pop().expect("one unknown");
    // A one-sided inverse of a square matrix over a commutative ring is
    // two-sided; check anyway since it is cheap.
    let check = inv.compose(m)?;
    if check != GradedMatrix::identity(m.src()) {
        return Ok(None);
    }
    Ok(Some(inv))
}
