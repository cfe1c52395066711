//! Dense univariate polynomials over a coefficient field.
//!
//! Support code for minimal polynomials of algebra elements: Euclidean
//! arithmetic, Bezout coefficients, squarefree parts, and just enough
//! factorization to split a squarefree minimal polynomial into two coprime
//! factors — rational-root extraction and capped Kronecker interpolation
//! over the rationals, Berlekamp (with a Cantor–Zassenhaus fallback for
//! large primes) over prime fields. Full factorization into irreducibles is
//! deliberately out of scope.

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, Scalar};
use crate::linalg::FMat;
use crate::rat::Rat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `coeffs[i]` is the coefficient of `t^i`; no trailing zeros; zero = empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>, field: &Field) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Self {
        UniPoly { coeffs: vec![field.one()] }
    }

    pub fn constant(c: Scalar, field: &Field) -> Self {
        Self::new(vec![c], field)
    }

    /// `c·t^k`.
    pub fn monomial(c: Scalar, k: usize, field: &Field) -> Self {
        if field.is_zero(&c) {
            return Self::zero();
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, field: &Field) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self, field: &Field) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(field.add(&self.coeff(i, field), &other.coeff(i, field)));
        }
        Self::new(out, field)
    }

    pub fn neg(&self, field: &Field) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self, field: &Field) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: &Scalar, field: &Field) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, field: &Field) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = field.mul(a, b);
                out[i + j] = field.add(&out[i + j], &t);
            }
        }
        Self::new(out, field)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, d: &Self, field: &Field) -> Result<(Self, Self)> {
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = field.inv(d.leading().unwrap())?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![field.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() >= dd + 1 {
            let k = rem.len() - 1 - dd;
            let c = field.mul(rem.last().unwrap(), &lead_inv);
            if !field.is_zero(&c) {
                quo[k] = c.clone();
                for (i, dc) in d.coeffs.iter().enumerate() {
                    let t = field.mul(&c, dc);
                    rem[k + i] = field.sub(&rem[k + i], &t);
                }
            }
            rem.pop();
        }
        Ok((Self::new(quo, field), Self::new(rem, field)))
    }

    pub fn rem(&self, d: &Self, field: &Field) -> Result<Self> {
        Ok(self.divmod(d, field)?.1)
    }

    pub fn divides(&self, other: &Self, field: &Field) -> Result<bool> {
        Ok(other.rem(self, field)?.is_zero())
    }

    pub fn monic(&self, field: &Field) -> Result<Self> {
        let lead = self.leading().ok_or(Error::DivisionByZero)?;
        let inv = field.inv(lead)?;
        Ok(self.scale(&inv, field))
    }

    pub fn derivative(&self, field: &Field) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(field.mul(&field.from_i64(i as i64), c));
        }
        Self::new(out, field)
    }

    pub fn eval(&self, x: &Scalar, field: &Field) -> Scalar {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    /// `self^k mod m`.
    pub fn pow_mod(&self, mut k: u64, m: &Self, field: &Field) -> Result<Self> {
        let mut base = self.rem(m, field)?;
        let mut acc = Self::one(field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, field).rem(m, field)?;
            }
            base = base.mul(&base, field).rem(m, field)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn to_string_in(&self, field: &Field, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if field.is_zero(c) {
                continue;
            }
            let cs = field.scalar_to_string(c);
            let part = match i {
                0 => cs,
                1 if field.is_one(c) => var.to_string(),
                1 => format!("{cs}*{var}"),
                _ if field.is_one(c) => format!("{var}^{i}"),
                _ => format!("{cs}*{var}^{i}"),
            };
            parts.push(part);
        }
        parts.join(" + ")
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &UniPoly, b: &UniPoly, field: &Field) -> Result<UniPoly> {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = x.rem(&y, field)?;
        x = y;
        y = r;
    }
    if x.is_zero() {
        Ok(x)
    } else {
        x.monic(field)
    }
}

/// `(g, u, v)` with `u·a + v·b = g`, `g` the monic gcd.
pub fn extended_gcd(a: &UniPoly, b: &UniPoly, field: &Field) -> Result<(UniPoly, UniPoly, UniPoly)> {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = UniPoly::one(field);
    let mut u1 = UniPoly::zero();
    let mut v0 = UniPoly::zero();
    let mut v1 = UniPoly::one(field);
    while !r1.is_zero() {
        let (q, r) = r0.divmod(&r1, field)?;
        let u = u0.sub(&q.mul(&u1, field), field);
        let v = v0.sub(&q.mul(&v1, field), field);
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
        v0 = v1;
        v1 = v;
    }
    if r0.is_zero() {
        return Ok((r0, u0, v0));
    }
    let lead_inv = field.inv(r0.leading().unwrap())?;
    Ok((
        r0.scale(&lead_inv, field),
        u0.scale(&lead_inv, field),
        v0.scale(&lead_inv, field),
    ))
}

/// Monic product of the distinct irreducible factors.
pub fn squarefree_part(p: &UniPoly, field: &Field) -> Result<UniPoly> {
    if p.degree().is_none() {
        return Err(Error::DivisionByZero);
    }
    let dp = p.derivative(field);
    if dp.is_zero() {
        // Characteristic q > 0 and p(t) = r(t^q); r has the same roots, and
        // its coefficients are the originals (Frobenius fixes the prime
        // field), so recurse on the compressed polynomial.
        let q = field.characteristic() as usize;
        if q == 0 {
            return Err(Error::Internal("zero derivative in characteristic zero".into()));
        }
        let mut compressed = Vec::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            if i % q == 0 {
                compressed.push(c.clone());
            } else if !field.is_zero(c) {
                return Err(Error::Internal("zero derivative but not a q-th power shape".into()));
            }
        }
        return squarefree_part(&UniPoly::new(compressed, field), field);
    }
    let g = gcd(p, &dp, field)?;
    let (q, r) = p.divmod(&g, field)?;
    if !r.is_zero() {
        return Err(Error::Internal("gcd does not divide its argument".into()));
    }
    q.monic(field)
}

fn divisors_of(n: i128, cap: usize) -> Result<Vec<i128>> {
    let n = n.abs();
    if n == 0 {
        return Err(Error::Internal("divisors of zero requested".into()));
    }
    let mut small = Vec::new();
    let mut big = Vec::new();
    let mut d: i128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                big.push(n / d);
            }
            if small.len() + big.len() > cap {
                return Err(Error::FactorizationOutOfRange(format!(
                    "integer {n} has more than {cap} divisors in range"
                )));
            }
        }
        d += 1;
        if d > 2_000_000 && d * d <= n {
            return Err(Error::FactorizationOutOfRange(format!(
                "integer {n} too large to enumerate divisors"
            )));
        }
    }
    big.reverse();
    small.extend(big);
    Ok(small)
}

fn as_i128(r: &Rat) -> Result<i128> {
    match r.as_small() {
        Some((n, 1)) => Ok(n),
        Some(_) => Err(Error::Internal("expected an integer rational".into())),
        None => Err(Error::FactorizationOutOfRange(
            "integer coefficient exceeds i128".into(),
        )),
    }
}

fn rat_of(s: &Scalar) -> Result<Rat> {
    match s {
        Scalar::Rat(r) => Ok(r.clone()),
        _ => Err(Error::Internal("expected a rational scalar".into())),
    }
}

/// Clear denominators: `c·p` with integer coefficients, content not reduced.
fn integerize(p: &UniPoly) -> Result<Vec<i128>> {
    let mut lcm: i128 = 1;
    for c in p.coeffs() {
        let (_, den) = rat_of(c)?
            .as_small()
            .ok_or_else(|| Error::FactorizationOutOfRange("denominator exceeds i128".into()))?;
        let g = gcd_i128(lcm, den);
        lcm = lcm
            .checked_mul(den / g)
            .ok_or_else(|| Error::FactorizationOutOfRange("denominator lcm overflow".into()))?;
    }
    let mut out = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        let r = rat_of(c)?.mul(&Rat::new(lcm, 1));
        out.push(as_i128(&r)?);
    }
    Ok(out)
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Rational roots of a monic-over-Q polynomial, by the integer root theorem
/// on the denominator-cleared form.
fn rational_roots(p: &UniPoly, field: &Field) -> Result<Vec<Scalar>> {
    let ints = integerize(p)?;
    let lead = *ints.last().unwrap();
    // Strip powers of t.
    let val = ints.iter().position(|c| *c != 0).unwrap_or(0);
    let mut roots = Vec::new();
    if val > 0 {
        roots.push(field.zero());
    }
    let a0 = ints[val];
    let num_divs = divisors_of(a0, 4096)?;
    let den_divs = divisors_of(lead, 4096)?;
    for n in &num_divs {
        for d in &den_divs {
            for sign in [1i128, -1] {
                let s = field.from_rat(Rat::new(sign * n, *d))?;
                if field.is_zero(&p.eval(&s, field)) && !roots.iter().any(|r| field.eq(r, &s)) {
                    roots.push(s);
                }
            }
        }
    }
    Ok(roots)
}

/// Lagrange interpolation through `(x_i, y_i)`.
fn interpolate(points: &[(Scalar, Scalar)], field: &Field) -> Result<UniPoly> {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut num = UniPoly::constant(yi.clone(), field);
        let mut den = field.one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(
                &UniPoly::new(vec![field.neg(xj), field.one()], field),
                field,
            );
            den = field.mul(&den, &field.sub(xi, xj));
        }
        acc = acc.add(&num.scale(&field.inv(&den)?, field), field);
    }
    Ok(acc)
}

const KRONECKER_DEGREE_CAP: usize = 12;
const KRONECKER_TUPLE_CAP: usize = 400_000;

/// Kronecker's method: find a monic factor of `m` of degree `d`, if any.
/// `m_int` is an integer-coefficient multiple of `m` used for divisor
/// enumeration at the sample points.
fn kronecker_factor(
    m: &UniPoly,
    m_int: &UniPoly,
    d: usize,
    field: &Field,
) -> Result<Option<UniPoly>> {
    // Evaluation points 0, 1, -1, 2, -2, …; m has no rational roots here,
    // so all values are nonzero.
    let mut xs = Vec::with_capacity(d + 1);
    let mut k = 0i64;
    while xs.len() < d + 1 {
        xs.push(field.from_i64(k));
        k = if k > 0 { -k } else { -k + 1 };
    }
    let mut divisor_lists = Vec::with_capacity(d + 1);
    let mut tuple_count: usize = 1;
    for x in &xs {
        let v = p_eval_integer(m_int, x, field)?;
        let divs = divisors_of(v, 512)?;
        tuple_count = tuple_count.saturating_mul(divs.len() * 2);
        divisor_lists.push(divs);
    }
    if tuple_count > KRONECKER_TUPLE_CAP {
        return Err(Error::FactorizationOutOfRange(format!(
            "Kronecker search space {tuple_count} exceeds cap"
        )));
    }
    let mut idx = vec![0usize; d + 1];
    let mut signs = vec![false; d + 1];
    loop {
        let points: Vec<(Scalar, Scalar)> = (0..=d)
            .map(|i| {
                let v = divisor_lists[i][idx[i]] * if signs[i] { -1 } else { 1 };
                (xs[i].clone(), field.from_i64(v as i64))
            })
            .collect();
        let g = interpolate(&points, field)?;
        if g.degree() == Some(d) {
            let gm = g.monic(field)?;
            if gm.degree() == Some(d) && gm.divides(m, field)? {
                return Ok(Some(gm));
            }
        }
        // Advance the odometer over (divisor, sign) pairs.
        let mut pos = 0;
        loop {
            if pos > d {
                return Ok(None);
            }
            if !signs[pos] {
                signs[pos] = true;
                break;
            }
            signs[pos] = false;
            idx[pos] += 1;
            if idx[pos] < divisor_lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn p_eval_integer(m: &UniPoly, x: &Scalar, field: &Field) -> Result<i128> {
    let v = rat_of(&m.eval(x, field))?;
    as_i128(&v)
}

/// Split a monic squarefree polynomial over the rationals into two coprime
/// nonconstant factors, if it is reducible.
fn split_rationals(m: &UniPoly, field: &Field) -> Result<Option<(UniPoly, UniPoly)>> {
    let deg = m.degree().unwrap_or(0);
    if deg <= 1 {
        return Ok(None);
    }
    let roots = rational_roots(m, field)?;
    if let Some(r) = roots.first() {
        let lin = UniPoly::new(vec![field.neg(r), field.one()], field);
        let (q, rem) = m.divmod(&lin, field)?;
        if !rem.is_zero() {
            return Err(Error::Internal("root does not divide".into()));
        }
        return Ok(Some((lin, q)));
    }
    if deg > KRONECKER_DEGREE_CAP {
        return Err(Error::FactorizationOutOfRange(format!(
            "degree {deg} exceeds the rational factoring cap"
        )));
    }
    // Denominator-cleared form with integer coefficients for value
    // enumeration; the polynomial itself stays rational for arithmetic.
    let ints = integerize(m)?;
    let mut int_coeffs = Vec::with_capacity(ints.len());
    for c in ints {
        int_coeffs.push(field.from_rat(Rat::new(c, 1))?);
    }
    let m_int = UniPoly::new(int_coeffs, field);
    for d in 2..=deg / 2 {
        if let Some(g) = kronecker_factor(m, &m_int, d, field)? {
            let (q, rem) = m.divmod(&g, field)?;
            if !rem.is_zero() {
                return Err(Error::Internal("Kronecker factor does not divide".into()));
            }
            return Ok(Some((g, q)));
        }
    }
    Ok(None)
}

/// Berlekamp kernel of the Frobenius map on `k[t]/m`.
fn berlekamp_kernel(m: &UniPoly, p: u64, field: &Field) -> Result<Vec<UniPoly>> {
    let n = m.degree().unwrap();
    let t = UniPoly::monomial(field.one(), 1, field);
    let tp = t.pow_mod(p, m, field)?;
    // Column j of B is t^{jp} mod m.
    let mut b = FMat::zero(field, n, n);
    let mut cur = UniPoly::one(field);
    for j in 0..n {
        for i in 0..n {
            b.set(i, j, cur.coeff(i, field));
        }
        cur = cur.mul(&tp, field).rem(m, field)?;
    }
    for i in 0..n {
        let d = field.sub(b.at(i, i), &field.one());
        b.set(i, i, d);
    }
    let kernel = b.kernel_basis(field, None)?;
    Ok(kernel
        .into_iter()
        .map(|v| UniPoly::new(v, field))
        .collect())
}

/// Split a monic squarefree polynomial over F_p into two coprime factors.
fn split_prime(m: &UniPoly, p: u64, field: &Field) -> Result<Option<(UniPoly, UniPoly)>> {
    let deg = m.degree().unwrap_or(0);
    if deg <= 1 {
        return Ok(None);
    }
    let kernel = berlekamp_kernel(m, p, field)?;
    if kernel.len() <= 1 {
        return Ok(None); // irreducible
    }
    let v = kernel
        .iter()
        .find(|v| v.degree().map_or(false, |d| d >= 1))
        .ok_or_else(|| Error::Internal("Berlekamp kernel has no nonconstant element".into()))?;
    if p <= 4096 {
        for c in 0..p {
            let shifted = v.sub(&UniPoly::constant(field.from_i64(c as i64), field), field);
            let g = gcd(m, &shifted, field)?;
            if let Some(dg) = g.degree() {
                if dg >= 1 && dg < deg {
                    let (q, _) = m.divmod(&g, field)?;
                    return Ok(Some((g, q)));
                }
            }
        }
        return Err(Error::Internal("Berlekamp sweep found no splitting constant".into()));
    }
    // Large odd p: Cantor–Zassenhaus on the Berlekamp subalgebra.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    for _ in 0..200 {
        let mut w = UniPoly::zero();
        for kv in &kernel {
            let c = field.from_i64(rng.gen_range(0..i64::try_from(p.min(1 << 31)).unwrap()));
            w = w.add(&kv.scale(&c, field), field);
        }
        if w.degree().map_or(true, |d| d < 1) {
            continue;
        }
        let pw = w.pow_mod((p - 1) / 2, m, field)?;
        let g = gcd(m, &pw.sub(&UniPoly::one(field), field), field)?;
        if let Some(dg) = g.degree() {
            if dg >= 1 && dg < deg {
                let (q, _) = m.divmod(&g, field)?;
                return Ok(Some((g, q)));
            }
        }
    }
    Err(Error::FactorizationOutOfRange(
        "Cantor-Zassenhaus did not find a splitting".into(),
    ))
}

/// Split a monic squarefree polynomial into two coprime nonconstant factors.
/// `Ok(None)` means no splitting was found (irreducible over Q and F_p; over
/// extension fields the search is not attempted).
pub fn split_squarefree(m: &UniPoly, field: &Field) -> Result<Option<(UniPoly, UniPoly)>> {
    match field.kind() {
        FieldKind::Rationals => split_rationals(m, field),
        FieldKind::Prime(p) => split_prime(m, *p, field),
        FieldKind::Extension { .. } => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn poly(field: &Field, cs: &[i64]) -> UniPoly {
        UniPoly::new(cs.iter().map(|&c| field.from_i64(c)).collect(), field)
    }

    #[test]
    fn divmod_roundtrip() {
        let f = q();
        let a = poly(&f, &[2, 0, -3, 1, 4]);
        let d = poly(&f, &[1, 2, 1]);
        let (quo, rem) = a.divmod(&d, &f).unwrap();
        let back = quo.mul(&d, &f).add(&rem, &f);
        assert_eq!(back, a);
        assert!(rem.degree() < d.degree());
    }

    #[test]
    fn gcd_and_bezout() {
        let f = q();
        // gcd(t² - 1, t³ - 1) = t - 1.
        let a = poly(&f, &[-1, 0, 1]);
        let b = poly(&f, &[-1, 0, 0, 1]);
        let g = gcd(&a, &b, &f).unwrap();
        assert_eq!(g, poly(&f, &[-1, 1]));
        let (g2, u, v) = extended_gcd(&a, &b, &f).unwrap();
        assert_eq!(g2, g);
        let lhs = u.mul(&a, &f).add(&v.mul(&b, &f), &f);
        assert_eq!(lhs, g);
    }

    #[test]
    fn squarefree_parts() {
        let f = q();
        // (t-1)²(t+2).
        let p = poly(&f, &[-1, 1]).mul(&poly(&f, &[-1, 1]), &f).mul(&poly(&f, &[2, 1]), &f);
        let sf = squarefree_part(&p, &f).unwrap();
        assert_eq!(sf, poly(&f, &[-1, 1]).mul(&poly(&f, &[2, 1]), &f).monic(&f).unwrap());
        // (t+1)^5 over F_5 has zero derivative; the recursion digs it out.
        let f5 = Field::prime(5).unwrap();
        let mut p5 = UniPoly::one(&f5);
        let lin = poly(&f5, &[1, 1]);
        for _ in 0..5 {
            p5 = p5.mul(&lin, &f5);
        }
        assert!(p5.derivative(&f5).is_zero());
        assert_eq!(squarefree_part(&p5, &f5).unwrap(), lin);
    }

    #[test]
    fn rational_splitting() {
        let f = q();
        // t² - 1 splits by a root.
        let m = poly(&f, &[-1, 0, 1]);
        let (a, b) = split_squarefree(&m, &f).unwrap().unwrap();
        assert_eq!(a.mul(&b, &f), m);
        // (t²+1)(t²+t+1): no rational roots, Kronecker splits it.
        let m2 = poly(&f, &[0, 0, 1]).add(&UniPoly::one(&f), &f);
        let m3 = poly(&f, &[1, 1, 1]);
        let prod = m2.mul(&m3, &f);
        let (a, b) = split_squarefree(&prod, &f).unwrap().unwrap();
        assert_eq!(a.mul(&b, &f), prod);
        assert!(a.degree() == Some(2) && b.degree() == Some(2));
        // t² + 1 itself is irreducible over Q.
        assert!(split_squarefree(&m2, &f).unwrap().is_none());
    }

    #[test]
    fn prime_field_splitting() {
        let f5 = Field::prime(5).unwrap();
        // t² + 1 = (t+2)(t+3) over F_5.
        let m = poly(&f5, &[1, 0, 1]);
        let (a, b) = split_squarefree(&m, &f5).unwrap().unwrap();
        assert_eq!(a.mul(&b, &f5).monic(&f5).unwrap(), m);
        // t² + 2 is irreducible over F_5.
        let m2 = poly(&f5, &[2, 0, 1]);
        assert!(split_squarefree(&m2, &f5).unwrap().is_none());
    }

    #[test]
    fn evaluation_and_powmod() {
        let f = q();
        let p = poly(&f, &[1, 2, 3]); // 3t² + 2t + 1
        assert!(f.eq(&p.eval(&f.from_i64(2), &f), &f.from_i64(17)));
        let m = poly(&f, &[-1, 0, 1]); // t² - 1
        let t = UniPoly::monomial(f.one(), 1, &f);
        // t^10 ≡ 1 mod t² - 1.
        assert_eq!(t.pow_mod(10, &m, &f).unwrap(), UniPoly::one(&f));
    }
}
