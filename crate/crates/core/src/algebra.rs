//! Finite-dimensional associative algebras given by structure constants.
//!
//! The decomposition pipeline lives here: Jacobson radical via the trace
//! bilinear form (iterated, then certified nilpotent), Newton idempotent
//! lifting through a nilpotent ideal, and primitive decompositions obtained
//! by hunting idempotents in semisimple quotients. Every returned
//! decomposition is re-verified against its defining identities —
//! orthogonality, completeness, primitivity — before it leaves the module.
//!
//! The idempotent hunt in a semisimple algebra is a candidate sweep (basis
//! elements, pairwise sums/differences/products, seeded random
//! combinations) driven by minimal polynomials: a non-squarefree minimal
//! polynomial yields a nilpotent whose left ideal has an idempotent right
//! identity; a squarefree reducible one splits by Bezout. Over extension
//! fields the algebra is first restricted to the rationals, where the same
//! sweep applies.

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Scalar};
use crate::linalg::{solve_linear, ColumnSolver, Echelon, FMat, LinearSolution};
use crate::unipoly::{self, UniPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Associative unital algebra presented by structure constants:
/// `e_i·e_j = Σ_k table[i][j][k]·e_k`.
#[derive(Clone, Debug)]
pub struct FinDimAlgebra {
    field: Field,
    dim: usize,
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
}

impl FinDimAlgebra {
    pub fn new(field: Field, table: Vec<Vec<Vec<Scalar>>>, unit: Vec<Scalar>) -> Result<Self> {
        let dim = table.len();
        if unit.len() != dim
            || table.iter().any(|r| r.len() != dim)
            || table.iter().flatten().any(|v| v.len() != dim)
        {
            return Err(Error::DimensionMismatch("structure-constant table shape".into()));
        }
        let a = FinDimAlgebra { field, dim, table, unit };
        // Unit laws.
        for i in 0..dim {
            let ei = a.basis_vector(i);
            if a.mul(&a.unit, &ei) != ei || a.mul(&ei, &a.unit) != ei {
                return Err(Error::Validation(format!("unit law fails on basis element {i}")));
            }
        }
        // Associativity on basis triples.
        for i in 0..dim {
            for j in 0..dim {
                let ij = a.table[i][j].clone();
                for k in 0..dim {
                    let jk = a.table[j][k].clone();
                    let lhs = a.mul(&ij, &a.basis_vector(k));
                    let rhs = a.mul(&a.basis_vector(i), &jk);
                    if lhs != rhs {
                        return Err(Error::Validation(format!(
                            "associativity fails on basis triple ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(a)
    }

    /// The zero algebra (dimension 0).
    pub fn zero_algebra(field: Field) -> Self {
        FinDimAlgebra {
            field,
            dim: 0,
            table: Vec::new(),
            unit: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn table(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = self.zero_vec();
        v[i] = self.field.one();
        v
    }

    pub fn is_zero_vec(&self, a: &[Scalar]) -> bool {
        a.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| self.field.sub(x, y)).collect()
    }

    pub fn scale(&self, c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|x| self.field.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vec();
        for i in 0..self.dim {
            if self.field.is_zero(&a[i]) {
                continue;
            }
            for j in 0..self.dim {
                if self.field.is_zero(&b[j]) {
                    continue;
                }
                let c = self.field.mul(&a[i], &b[j]);
                for k in 0..self.dim {
                    let t = self.field.mul(&c, &self.table[i][j][k]);
                    out[k] = self.field.add(&out[k], &t);
                }
            }
        }
        out
    }

    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.mul(e, e) == e
    }

    /// Matrix of left multiplication by `a` (columns are `a·e_j`).
    pub fn left_mul_matrix(&self, a: &[Scalar]) -> FMat {
        let mut m = FMat::zero(&self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &self.basis_vector(j));
            for i in 0..self.dim {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    fn trace_of_left_basis_mul(&self) -> Vec<Scalar> {
        // tr(L_{e_k}) = Σ_j table[k][j][j].
        (0..self.dim)
            .map(|k| {
                let mut t = self.field.zero();
                for j in 0..self.dim {
                    t = self.field.add(&t, &self.table[k][j][j]);
                }
                t
            })
            .collect()
    }

    /// Kernel of the trace form `B(x, y) = tr(L_{xy})`.
    fn trace_kernel(&self) -> Result<Vec<Vec<Scalar>>> {
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let traces = self.trace_of_left_basis_mul();
        let mut gram = FMat::zero(&self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut t = self.field.zero();
                for k in 0..self.dim {
                    let term = self.field.mul(&self.table[i][j][k], &traces[k]);
                    t = self.field.add(&t, &term);
                }
                gram.set(i, j, t);
            }
        }
        gram.kernel_basis(&self.field, None)
    }

    /// Quotient by a subspace that is a two-sided ideal. Returns the
    /// quotient algebra, the projection, and a linear section.
    pub fn quotient_by(&self, ideal_basis: &[Vec<Scalar>]) -> Result<(FinDimAlgebra, FMat, FMat)> {
        let mut ech = Echelon::new(self.dim);
        for v in ideal_basis {
            ech.insert(v.clone(), &self.field);
        }
        let pivots: Vec<usize> = ech.basis().iter().map(|r| pivot_of(r, &self.field)).collect();
        let complement: Vec<usize> = (0..self.dim).filter(|i| !pivots.contains(i)).collect();
        let q = complement.len();
        let mut section = FMat::zero(&self.field, self.dim, q);
        for (col, &pos) in complement.iter().enumerate() {
            section.set(pos, col, self.field.one());
        }
        let mut proj = FMat::zero(&self.field, q, self.dim);
        for j in 0..self.dim {
            let reduced = ech.reduce(self.basis_vector(j), &self.field);
            for (row, &pos) in complement.iter().enumerate() {
                proj.set(row, j, reduced[pos].clone());
            }
        }
        let project = |v: &[Scalar]| -> Result<Vec<Scalar>> { proj.apply(v, &self.field) };
        let mut table = vec![vec![Vec::new(); q]; q];
        for i in 0..q {
            let si = section.column(i);
            for j in 0..q {
                let sj = section.column(j);
                table[i][j] = project(&self.mul(&si, &sj))?;
            }
        }
        let unit = project(&self.unit)?;
        let alg = FinDimAlgebra::new(self.field.clone(), table, unit)?;
        Ok((alg, proj, section))
    }

    /// Minimal polynomial of an element.
    pub fn min_poly(&self, a: &[Scalar]) -> Result<UniPoly> {
        if self.dim == 0 {
            return Ok(UniPoly::one(&self.field));
        }
        let mut powers: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        let mut cur = self.unit.clone();
        loop {
            cur = self.mul(&cur, a);
            let solver = ColumnSolver::new(&powers, self.dim, &self.field)?;
            if let Some(coords) = solver.coordinates(&cur, &self.field)? {
                let mut coeffs = coords.iter().map(|c| self.field.neg(c)).collect::<Vec<_>>();
                coeffs.push(self.field.one());
                return Ok(UniPoly::new(coeffs, &self.field));
            }
            powers.push(cur.clone());
            if powers.len() > self.dim + 1 {
                return Err(Error::Internal("minimal polynomial did not terminate".into()));
            }
        }
    }

    /// Evaluate a univariate polynomial at an algebra element.
    pub fn eval_poly(&self, p: &UniPoly, a: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.zero_vec();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, a);
            let cu = self.scale(c, &self.unit);
            acc = self.add(&acc, &cu);
        }
        acc
    }
}

fn pivot_of(row: &[Scalar], field: &Field) -> usize {
    row.iter()
        .position(|c| !field.is_zero(c))
        .expect("echelon rows are nonzero")
}

fn characteristic_window(a: &FinDimAlgebra) -> Result<()> {
    let p = a.field().characteristic();
    if p != 0 && (p as usize) <= a.dim() {
        return Err(Error::UnsupportedCharacteristic(format!(
            "trace-form radical needs characteristic 0 or p > dim = {}; got p = {p}. \
             Use the rationals or a larger prime field",
            a.dim()
        )));
    }
    Ok(())
}

/// Span of products `x·y`, `x` from `xs`, `y` from `ys`.
fn product_span(a: &FinDimAlgebra, xs: &[Vec<Scalar>], ys: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut ech = Echelon::new(a.dim());
    for x in xs {
        for y in ys {
            ech.insert(a.mul(x, y), a.field());
        }
    }
    ech.basis().to_vec()
}

/// Jacobson radical via the iterated trace-form kernel, certified nilpotent
/// and two-sided before returning.
pub fn radical(a: &FinDimAlgebra) -> Result<Vec<Vec<Scalar>>> {
    characteristic_window(a)?;
    let field = a.field().clone();
    let mut ideal = Echelon::new(a.dim());
    loop {
        let basis = ideal.basis().to_vec();
        let (q, _, section) = a.quotient_by(&basis)?;
        let kernel = q.trace_kernel()?;
        if kernel.is_empty() {
            break;
        }
        let mut grew = false;
        for v in kernel {
            let lifted = section.apply(&v, &field)?;
            if ideal.insert(lifted, &field) {
                grew = true;
            }
        }
        if !grew {
            return Err(Error::Internal("radical iteration stalled".into()));
        }
    }
    let basis = ideal.basis().to_vec();
    // Two-sided ideal check.
    for v in &basis {
        for i in 0..a.dim() {
            let e = a.basis_vector(i);
            if !ideal.contains(&a.mul(&e, v), &field) || !ideal.contains(&a.mul(v, &e), &field) {
                return Err(Error::Internal("trace kernel is not a two-sided ideal".into()));
            }
        }
    }
    // Nilpotency certificate.
    if !is_nilpotent_subspace(a, &basis)? {
        return Err(Error::IdealNotNilpotent);
    }
    Ok(basis)
}

fn is_nilpotent_subspace(a: &FinDimAlgebra, basis: &[Vec<Scalar>]) -> Result<bool> {
    let mut power = basis.to_vec();
    for _ in 0..=a.dim() {
        if power.is_empty() {
            return Ok(true);
        }
        power = product_span(a, &power, basis);
    }
    Ok(false)
}

/// Newton-lift an idempotent through a nilpotent ideal: returns `e` with
/// `e² = e` exactly and `e ≡ e0 (mod N)`.
pub fn lift_idempotent(
    a: &FinDimAlgebra,
    ideal_basis: &[Vec<Scalar>],
    e0: &[Scalar],
) -> Result<Vec<Scalar>> {
    let field = a.field().clone();
    if !is_nilpotent_subspace(a, ideal_basis)? {
        return Err(Error::IdealNotNilpotent);
    }
    let mut ech = Echelon::new(a.dim());
    for v in ideal_basis {
        ech.insert(v.clone(), &field);
    }
    let defect = a.sub(&a.mul(e0, e0), e0);
    if !a.is_zero_vec(&defect) && !ech.contains(&defect, &field) {
        return Err(Error::NotIdempotentModIdeal(
            "e0² - e0 lies outside the given ideal".into(),
        ));
    }
    let mut e = e0.to_vec();
    for _ in 0..=a.dim() + 1 {
        if a.is_idempotent(&e) {
            let diff = a.sub(&e, e0);
            if !a.is_zero_vec(&diff) && !ech.contains(&diff, &field) {
                return Err(Error::Internal("lift drifted out of the ideal coset".into()));
            }
            return Ok(e);
        }
        // e ← 3e² - 2e³.
        let e2 = a.mul(&e, &e);
        let e3 = a.mul(&e2, &e);
        let three_e2 = a.scale(&field.from_i64(3), &e2);
        let two_e3 = a.scale(&field.from_i64(2), &e3);
        e = a.sub(&three_e2, &two_e3);
    }
    Err(Error::Internal("idempotent lift did not converge".into()))
}

/// Restrict scalars of an algebra over `Q[t]/(μ)` to the rationals.
/// Returns the rational algebra and the block size (extension degree);
/// basis index `(i, a)` of the restriction maps to `i·deg + a`.
fn restrict_scalars(a: &FinDimAlgebra) -> Result<(FinDimAlgebra, usize)> {
    if !matches!(a.field().kind(), FieldKind::Extension { .. }) {
        return Err(Error::Internal("restrict_scalars on a non-extension field".into()));
    }
    let deg = a.field().ext_degree();
    let rat = Field::rationals();
    let ext = a.field();
    let n = a.dim();
    let gen = ext.generator().ok_or_else(|| Error::Internal("extension without generator".into()))?;
    // t^m for m = 0..2deg-2, reduced in the extension.
    let mut tpow = vec![ext.one()];
    for m in 1..(2 * deg - 1).max(1) {
        tpow.push(ext.mul(&tpow[m - 1], &gen));
    }
    let coeffs_of = |s: &Scalar| -> Result<Vec<crate::rat::Rat>> {
        match s {
            Scalar::Ext(v) => Ok(v.clone()),
            _ => Err(Error::Internal("expected an extension scalar".into())),
        }
    };
    let big = n * deg;
    let mut table = vec![vec![vec![rat.zero(); big]; big]; big];
    for i in 0..n {
        for ai in 0..deg {
            for j in 0..n {
                for bj in 0..deg {
                    // (e_i t^ai)(e_j t^bj) = Σ_k (c_{ijk}·t^{ai+bj}) e_k.
                    let row = &mut table[i * deg + ai][j * deg + bj];
                    for k in 0..n {
                        let c = ext.mul(&a.table()[i][j][k], &tpow[ai + bj]);
                        for (cc, r) in coeffs_of(&c)?.into_iter().enumerate() {
                            row[k * deg + cc] = Scalar::Rat(r);
                        }
                    }
                }
            }
        }
    }
    let mut unit = vec![rat.zero(); big];
    for i in 0..n {
        for (cc, r) in coeffs_of(&a.unit()[i])?.into_iter().enumerate() {
            unit[i * deg + cc] = Scalar::Rat(r);
        }
    }
    Ok((FinDimAlgebra::new(rat, table, unit)?, deg))
}

fn unrestrict_element(a: &FinDimAlgebra, deg: usize, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let ext = a.field();
    let gen = ext.generator().ok_or_else(|| Error::Internal("extension without generator".into()))?;
    let mut tpow = vec![ext.one()];
    for m in 1..deg {
        tpow.push(ext.mul(&tpow[m - 1], &gen));
    }
    let mut out = vec![ext.zero(); a.dim()];
    for i in 0..a.dim() {
        for c in 0..deg {
            let q = match &v[i * deg + c] {
                Scalar::Rat(r) => ext.from_rat(r.clone())?,
                _ => return Err(Error::Internal("expected rational coordinates".into())),
            };
            let t = ext.mul(&q, &tpow[c]);
            out[i] = ext.add(&out[i], &t);
        }
    }
    Ok(out)
}

/// Right identity of the left ideal `A·n` (assumes the ambient algebra is
/// semisimple, so the ideal is generated by an idempotent).
fn right_identity_of_left_ideal(a: &FinDimAlgebra, n: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let field = a.field().clone();
    let mut ech = Echelon::new(a.dim());
    for i in 0..a.dim() {
        ech.insert(a.mul(&a.basis_vector(i), n), &field);
    }
    let gens: Vec<Vec<Scalar>> = ech.basis().to_vec();
    let m = gens.len();
    if m == 0 {
        return Ok(None);
    }
    // Solve l_i · (Σ_j c_j l_j) = l_i for all i.
    let mut rows = FMat::zero(&field, m * a.dim(), m);
    let mut rhs = Vec::with_capacity(m * a.dim());
    for (i, li) in gens.iter().enumerate() {
        for (j, lj) in gens.iter().enumerate() {
            let prod = a.mul(li, lj);
            for (r, val) in prod.iter().enumerate() {
                rows.set(i * a.dim() + r, j, val.clone());
            }
        }
        rhs.extend(li.iter().cloned());
    }
    match solve_linear(&rows, &rhs, &field)? {
        LinearSolution::Inconsistent => Ok(None),
        LinearSolution::Solved { particular, .. } => {
            let mut e = a.zero_vec();
            for (c, l) in particular.iter().zip(&gens) {
                let t = a.scale(c, l);
                e = a.add(&e, &t);
            }
            Ok(Some(e))
        }
    }
}

fn idempotent_from_candidate(
    a: &FinDimAlgebra,
    cand: &[Scalar],
) -> Result<Option<Vec<Scalar>>> {
    if a.is_zero_vec(cand) {
        return Ok(None);
    }
    let m = a.min_poly(cand)?;
    if m.degree().unwrap_or(0) <= 1 {
        return Ok(None);
    }
    let sf = unipoly::squarefree_part(&m, a.field())?;
    let nontrivial = |e: &Vec<Scalar>| -> bool {
        !a.is_zero_vec(e) && e != &a.unit().to_vec() && a.is_idempotent(e)
    };
    if sf != m {
        // Nilpotent route: sf(cand) is nilpotent and nonzero by minimality.
        let n = a.eval_poly(&sf, cand);
        if a.is_zero_vec(&n) {
            return Ok(None);
        }
        if let Some(e) = right_identity_of_left_ideal(a, &n)? {
            if nontrivial(&e) {
                return Ok(Some(e));
            }
        }
        return Ok(None);
    }
    // Squarefree: try to split and apply Bezout.
    let Some((p, q)) = unipoly::split_squarefree(&m, a.field())? else {
        return Ok(None);
    };
    let (g, u, _v) = unipoly::extended_gcd(&p, &q, a.field())?;
    if g.degree() != Some(0) {
        return Err(Error::Internal("split factors are not coprime".into()));
    }
    let up = u.mul(&p, a.field());
    let e = a.eval_poly(&up, cand);
    if nontrivial(&e) {
        return Ok(Some(e));
    }
    Ok(None)
}

/// Hunt for a nontrivial idempotent in a semisimple algebra. `Ok(None)`
/// reports that the sweep found none (decisive over small prime fields via
/// enumeration; heuristic-but-verified over the rationals).
pub fn find_nontrivial_idempotent(
    a: &FinDimAlgebra,
    seed: u64,
) -> Result<Option<Vec<Scalar>>> {
    if a.dim() <= 1 {
        return Ok(None);
    }
    if matches!(a.field().kind(), FieldKind::Extension { .. }) {
        // Same idempotents, viewed over the rationals.
        let (ra, deg) = restrict_scalars(a)?;
        return Ok(match find_nontrivial_idempotent(&ra, seed)? {
            Some(v) => Some(unrestrict_element(a, deg, &v)?),
            None => None,
        });
    }
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..a.dim() {
        candidates.push(a.basis_vector(i));
    }
    for i in 0..a.dim() {
        for j in (i + 1)..a.dim() {
            candidates.push(a.add(&a.basis_vector(i), &a.basis_vector(j)));
            candidates.push(a.sub(&a.basis_vector(i), &a.basis_vector(j)));
        }
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if i != j {
                candidates.push(a.mul(&a.basis_vector(i), &a.basis_vector(j)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let v: Vec<Scalar> = (0..a.dim())
            .map(|_| a.field().from_i64(rng.gen_range(-2..=2)))
            .collect();
        candidates.push(v);
    }
    for cand in &candidates {
        if let Some(e) = idempotent_from_candidate(a, cand)? {
            return Ok(Some(e));
        }
    }
    // Small prime fields: exhaustive enumeration is decisive.
    if let FieldKind::Prime(p) = a.field().kind() {
        let total = (*p as u128).checked_pow(a.dim() as u32);
        if let Some(total) = total {
            if total <= 200_000 {
                let mut v = vec![0u64; a.dim()];
                loop {
                    let elem: Vec<Scalar> = v.iter().map(|&c| Scalar::Mod(c)).collect();
                    if !a.is_zero_vec(&elem)
                        && elem != a.unit()
                        && a.is_idempotent(&elem)
                    {
                        return Ok(Some(elem));
                    }
                    let mut pos = 0;
                    loop {
                        if pos == a.dim() {
                            return Ok(None);
                        }
                        v[pos] += 1;
                        if v[pos] < *p {
                            break;
                        }
                        v[pos] = 0;
                        pos += 1;
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Subalgebra `e·A·e` for an idempotent `e`: the corner algebra, its basis
/// embedding (columns in `A`-coordinates), and its unit (= `e`).
pub fn corner_algebra(a: &FinDimAlgebra, e: &[Scalar]) -> Result<(FinDimAlgebra, Vec<Vec<Scalar>>)> {
    let field = a.field().clone();
    if !a.is_idempotent(e) {
        return Err(Error::Validation("corner requires an exact idempotent".into()));
    }
    let mut ech = Echelon::new(a.dim());
    for i in 0..a.dim() {
        let v = a.mul(e, &a.mul(&a.basis_vector(i), e));
        ech.insert(v, &field);
    }
    let basis: Vec<Vec<Scalar>> = ech.basis().to_vec();
    let m = basis.len();
    let solver = ColumnSolver::new(&basis, a.dim(), &field)?;
    let coords = |v: &[Scalar]| -> Result<Vec<Scalar>> {
        solver
            .coordinates(v, &field)?
            .ok_or_else(|| Error::Internal("corner product escaped the corner".into()))
    };
    let mut table = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in 0..m {
            table[i][j] = coords(&a.mul(&basis[i], &basis[j]))?;
        }
    }
    let unit = coords(e)?;
    Ok((FinDimAlgebra::new(field, table, unit)?, basis))
}

fn embed(a: &FinDimAlgebra, basis: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = a.zero_vec();
    for (c, b) in v.iter().zip(basis) {
        let t = a.scale(c, b);
        out = a.add(&out, &t);
    }
    out
}

/// Orthogonal primitive idempotents of a semisimple algebra, summing to 1.
fn primitive_idempotents_semisimple(a: &FinDimAlgebra, seed: u64) -> Result<Vec<Vec<Scalar>>> {
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let Some(e) = find_nontrivial_idempotent(a, seed)? else {
        return Ok(vec![a.unit().to_vec()]);
    };
    let f = a.sub(a.unit(), &e);
    let mut out = Vec::new();
    for half in [e, f] {
        let (corner, basis) = corner_algebra(a, &half)?;
        for p in primitive_idempotents_semisimple(&corner, seed ^ 0x5bd1e995)? {
            out.push(embed(a, &basis, &p));
        }
    }
    Ok(out)
}

/// Complete list of orthogonal primitive idempotents of `a` summing to 1.
/// All postconditions (idempotency, orthogonality, completeness, primitivity
/// of corners) are machine-checked before returning.
pub fn primitive_decomposition(a: &FinDimAlgebra, seed: u64) -> Result<Vec<Vec<Scalar>>> {
    if a.dim() == 0 {
        return Ok(Vec::new());
    }
    let field = a.field().clone();
    let rad = radical(a)?;
    let (s, proj, _sect) = a.quotient_by(&rad)?;
    let prims_s = primitive_idempotents_semisimple(&s, 0xda1_e5 ^ seed)?;
    // Lift sequentially, keeping orthogonality by working in shrinking
    // corners; the last lift is the complement of the others.
    let mut lifted: Vec<Vec<Scalar>> = Vec::new();
    let sect_of = |v: &[Scalar]| -> Result<Vec<Scalar>> {
        // Any preimage will do; solve proj·x = v with the section implied by
        // the complement choice. quotient_by's proj has full row rank.
        match solve_linear(&proj, v, &field)? {
            LinearSolution::Solved { particular, .. } => Ok(particular),
            LinearSolution::Inconsistent => Err(Error::Internal("projection not surjective".into())),
        }
    };
    for (idx, ebar) in prims_s.iter().enumerate() {
        if idx + 1 == prims_s.len() {
            // Complement of the already-lifted ones.
            let mut rest = a.unit().to_vec();
            for e in &lifted {
                rest = a.sub(&rest, e);
            }
            lifted.push(rest);
            break;
        }
        let mut g = a.unit().to_vec();
        for e in &lifted {
            g = a.sub(&g, e);
        }
        let raw = sect_of(ebar)?;
        let cand = a.mul(&g, &a.mul(&raw, &g));
        let e = lift_idempotent(a, &rad, &cand)?;
        lifted.push(e);
    }
    // Refine: if any corner still contains a nontrivial idempotent (the
    // semisimple sweep can miss over the rationals), split it and retry.
    let mut result = lifted;
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > a.dim() + 2 {
            return Err(Error::Internal("primitive refinement did not stabilize".into()));
        }
        let mut refined = Vec::new();
        let mut changed = false;
        for e in &result {
            let (corner, basis) = corner_algebra(a, e)?;
            let crad = radical(&corner)?;
            let (cs, cproj, _) = corner.quotient_by(&crad)?;
            match find_nontrivial_idempotent(&cs, seed ^ 0xabcdef)? {
                None => refined.push(e.clone()),
                Some(ebar) => {
                    changed = true;
                    let raw = match solve_linear(&cproj, &ebar, &field)? {
                        LinearSolution::Solved { particular, .. } => particular,
                        LinearSolution::Inconsistent => {
                            return Err(Error::Internal("corner projection not surjective".into()))
                        }
                    };
                    let e1 = lift_idempotent(&corner, &crad, &raw)?;
                    let e2 = corner.sub(corner.unit(), &e1);
                    refined.push(embed(a, &basis, &e1));
                    refined.push(embed(a, &basis, &e2));
                }
            }
        }
        result = refined;
        if !changed {
            break;
        }
    }
    // Postconditions.
    let mut total = a.zero_vec();
    for (i, e) in result.iter().enumerate() {
        if !a.is_idempotent(e) {
            return Err(Error::Internal(format!("output {i} is not idempotent")));
        }
        if a.is_zero_vec(e) {
            return Err(Error::Internal(format!("output {i} is zero")));
        }
        total = a.add(&total, e);
        for (j, f) in result.iter().enumerate() {
            if i != j && !a.is_zero_vec(&a.mul(e, f)) {
                return Err(Error::Internal(format!("outputs {i} and {j} are not orthogonal")));
            }
        }
    }
    if total != a.unit() {
        return Err(Error::Internal("idempotents do not sum to the unit".into()));
    }
    Ok(result)
}

/// Does `A/J(A)` have no nontrivial idempotents (nc local)?
pub fn is_nc_local(a: &FinDimAlgebra, seed: u64) -> Result<bool> {
    if a.dim() == 0 {
        return Ok(false);
    }
    let rad = radical(a)?;
    let (s, _, _) = a.quotient_by(&rad)?;
    Ok(find_nontrivial_idempotent(&s, seed)?.is_none())
}

/// Brute-force idempotent search over a small coefficient grid (rationals)
/// or by full enumeration (small prime fields). Used as an independent
/// cross-check of the sweep at small dimensions.
pub fn brute_force_idempotent(a: &FinDimAlgebra) -> Result<Option<Vec<Scalar>>> {
    if a.dim() == 0 {
        return Ok(None);
    }
    let field = a.field().clone();
    let grid: Vec<Scalar> = match field.kind() {
        FieldKind::Prime(p)
            if (*p as u128)
                .checked_pow(a.dim() as u32)
                .is_some_and(|t| t <= 500_000) =>
        {
            (0..*p).map(Scalar::Mod).collect()
        }
        _ => [
            field.from_i64(0),
            field.from_i64(1),
            field.from_i64(-1),
            field.from_rat(crate::rat::Rat::new(1, 2))?,
            field.from_rat(crate::rat::Rat::new(-1, 2))?,
            field.from_i64(2),
        ]
        .to_vec(),
    };
    if (grid.len() as u128)
        .checked_pow(a.dim() as u32)
        .map_or(true, |t| t > 500_000)
    {
        return Err(Error::FactorizationOutOfRange(
            "brute-force idempotent grid too large".into(),
        ));
    }
    let mut idx = vec![0usize; a.dim()];
    loop {
        let elem: Vec<Scalar> = idx.iter().map(|&i| grid[i].clone()).collect();
        if !a.is_zero_vec(&elem) && elem != a.unit() && a.is_idempotent(&elem) {
            return Ok(Some(elem));
        }
        let mut pos = 0;
        loop {
            if pos == a.dim() {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    /// k × k with basis {(1,0), (0,1)}.
    fn k_times_k() -> FinDimAlgebra {
        let f = q();
        let z = f.zero();
        let o = f.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), o.clone()]],
        ];
        FinDimAlgebra::new(f.clone(), table, vec![o, f.one()]).unwrap()
    }

    /// k[n]/(n²) with basis {1, n}.
    fn dual_numbers() -> FinDimAlgebra {
        let f = q();
        let z = f.zero();
        let o = f.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        FinDimAlgebra::new(f, table, vec![o, z]).unwrap()
    }

    /// Upper-triangular 2×2 matrices, basis {E11, E12, E22}.
    fn upper_triangular() -> FinDimAlgebra {
        let f = q();
        let z = f.zero();
        let o = f.one();
        let zv = || vec![z.clone(), z.clone(), z.clone()];
        let e = |i: usize| {
            let mut v = vec![z.clone(), z.clone(), z.clone()];
            v[i] = o.clone();
            v
        };
        // E11·E11 = E11, E11·E12 = E12, E12·E22 = E12, E22·E22 = E22.
        let table = vec![
            vec![e(0), e(1), zv()],
            vec![zv(), zv(), e(1)],
            vec![zv(), zv(), e(2)],
        ];
        FinDimAlgebra::new(f, table, vec![o.clone(), z.clone(), o]).unwrap()
    }

    /// Full 2×2 matrix algebra, basis {E11, E12, E21, E22}.
    fn mat2() -> FinDimAlgebra {
        let f = q();
        let z = f.zero();
        let o = f.one();
        let e = |i: usize| {
            let mut v = vec![z.clone(), z.clone(), z.clone(), z.clone()];
            v[i] = o.clone();
            v
        };
        let zv = || vec![z.clone(), z.clone(), z.clone(), z.clone()];
        // Index: 0 = E11, 1 = E12, 2 = E21, 3 = E22.
        let table = vec![
            vec![e(0), e(1), zv(), zv()],
            vec![zv(), zv(), e(0), e(1)],
            vec![e(2), e(3), zv(), zv()],
            vec![zv(), zv(), e(2), e(3)],
        ];
        FinDimAlgebra::new(f, table, vec![o.clone(), z.clone(), z.clone(), o]).unwrap()
    }

    #[test]
    fn radicals_of_small_algebras() {
        assert!(radical(&k_times_k()).unwrap().is_empty());
        let j = radical(&dual_numbers()).unwrap();
        assert_eq!(j.len(), 1);
        let f = q();
        assert!(f.is_zero(&j[0][0]) && !f.is_zero(&j[0][1]));
        let j = radical(&upper_triangular()).unwrap();
        assert_eq!(j.len(), 1);
        // Strictly-upper span: coordinate 1 (E12).
        assert!(!f.is_zero(&j[0][1]) && f.is_zero(&j[0][0]) && f.is_zero(&j[0][2]));
        assert!(radical(&mat2()).unwrap().is_empty());
    }

    #[test]
    fn characteristic_window_enforced() {
        let f2 = Field::prime(2).unwrap();
        let o = f2.one();
        let z = f2.zero();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), o.clone()]],
            vec![vec![z.clone(), o.clone()], vec![z.clone(), z.clone()]],
        ];
        let a = FinDimAlgebra::new(f2, table, vec![o, z]).unwrap();
        assert!(matches!(
            radical(&a),
            Err(Error::UnsupportedCharacteristic(_))
        ));
    }

    #[test]
    fn newton_lift_examples() {
        let a = dual_numbers();
        let f = q();
        let j = radical(&a).unwrap();
        // e0 = 1 + n lifts to 1 in one step.
        let e0 = vec![f.one(), f.one()];
        let e = lift_idempotent(&a, &j, &e0).unwrap();
        assert_eq!(e, vec![f.one(), f.zero()]);
        // An exact idempotent is returned unchanged.
        let m = mat2();
        let e11 = m.basis_vector(0);
        let e = lift_idempotent(&m, &[], &e11).unwrap();
        assert_eq!(e, e11);
        // Non-idempotent mod N is rejected.
        let bad = vec![f.from_i64(2), f.zero()];
        assert!(matches!(
            lift_idempotent(&a, &j, &bad),
            Err(Error::NotIdempotentModIdeal(_))
        ));
    }

    #[test]
    fn primitive_decompositions() {
        let f = q();
        // k → {1}.
        let k = {
            let table = vec![vec![vec![f.one()]]];
            FinDimAlgebra::new(f.clone(), table, vec![f.one()]).unwrap()
        };
        let prims = primitive_decomposition(&k, 1).unwrap();
        assert_eq!(prims, vec![vec![f.one()]]);
        // k × k → the two projections.
        let prims = primitive_decomposition(&k_times_k(), 1).unwrap();
        assert_eq!(prims.len(), 2);
        // M₂(k) → two orthogonal primitives (value not pinned; postconditions
        // are checked inside, so reaching here is the assertion).
        let prims = primitive_decomposition(&mat2(), 1).unwrap();
        assert_eq!(prims.len(), 2);
        // Upper-triangular → two primitives through the radical.
        let prims = primitive_decomposition(&upper_triangular(), 1).unwrap();
        assert_eq!(prims.len(), 2);
    }

    #[test]
    fn nc_local_judgements() {
        assert!(is_nc_local(&dual_numbers(), 3).unwrap());
        assert!(!is_nc_local(&k_times_k(), 3).unwrap());
        assert!(!is_nc_local(&mat2(), 3).unwrap());
        let f = q();
        let k = {
            let table = vec![vec![vec![f.one()]]];
            FinDimAlgebra::new(f.clone(), table, vec![f.one()]).unwrap()
        };
        assert!(is_nc_local(&k, 3).unwrap());
    }

    #[test]
    fn min_poly_and_bezout_route() {
        let a = k_times_k();
        let f = q();
        // d = (1, -1) has minimal polynomial t² - 1.
        let d = vec![f.one(), f.from_i64(-1)];
        let m = a.min_poly(&d).unwrap();
        assert_eq!(m.coeffs().len(), 3);
        let e = find_nontrivial_idempotent(&a, 7).unwrap().unwrap();
        assert!(a.is_idempotent(&e));
        assert!(!a.is_zero_vec(&e));
        assert_ne!(e, a.unit().to_vec());
    }

    #[test]
    fn nilpotent_route_in_mat2() {
        let a = mat2();
        // E12 is nilpotent with minimal polynomial t²; the left-ideal trick
        // must produce an idempotent.
        let e12 = a.basis_vector(1);
        let e = idempotent_from_candidate(&a, &e12).unwrap().unwrap();
        assert!(a.is_idempotent(&e));
        assert_ne!(e, a.unit().to_vec());
    }

    #[test]
    fn brute_force_agrees_on_small_cases() {
        // k × k has one; dual numbers have none.
        assert!(brute_force_idempotent(&k_times_k()).unwrap().is_some());
        assert!(brute_force_idempotent(&dual_numbers()).unwrap().is_none());
    }

    #[test]
    fn extension_field_idempotents() {
        // K = Q[i] (modulus t² + 1); K × K is found via restriction to Q.
        let f = Field::extension(
            "i",
            vec![crate::rat::Rat::one(), crate::rat::Rat::zero(), crate::rat::Rat::one()],
        )
        .unwrap();
        let z = f.zero();
        let o = f.one();
        let table = vec![
            vec![vec![o.clone(), z.clone()], vec![z.clone(), z.clone()]],
            vec![vec![z.clone(), z.clone()], vec![z.clone(), o.clone()]],
        ];
        let a = FinDimAlgebra::new(f.clone(), table, vec![o, f.one()]).unwrap();
        let e = find_nontrivial_idempotent(&a, 11).unwrap().unwrap();
        assert!(a.is_idempotent(&e));
    }
}
