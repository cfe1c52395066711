//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration
//! order (and hence every derived computation) is deterministic. The
//! canonical string form sorts terms by total degree, then lexicographically
//! on exponents, both descending: `3*x^2*y - 1/2*z`.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use std::collections::BTreeMap;

pub type Exp = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    /// Nonzero terms only.
    terms: BTreeMap<Exp, Scalar>,
}

impl std::fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly({} vars, {:?})", self.nvars, self.terms)
    }
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Scalar, field: &Field) -> Self {
        let mut p = Self::zero(nvars);
        if !field.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize, field: &Field) -> Self {
        Self::constant(nvars, field.one(), field)
    }

    /// The monomial `x_i` (exponent 1 on variable `i`).
    pub fn variable(nvars: usize, i: usize, field: &Field) -> Self {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        Self::monomial(nvars, exp, field.one(), field)
    }

    pub fn monomial(nvars: usize, exp: Exp, c: Scalar, field: &Field) -> Self {
        assert_eq!(exp.len(), nvars, "exponent arity mismatch");
        let mut p = Self::zero(nvars);
        if !field.is_zero(&c) {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Option<&Scalar> {
        self.terms.get(exp)
    }

    /// Constant term (value at the origin).
    pub fn constant_term(&self, field: &Field) -> Scalar {
        self.terms
            .get(&vec![0; self.nvars])
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::MixedRings(format!(
                "polynomials over {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self, field: &Field) -> Result<Self> {
        self.check_compat(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(existing) => {
                    let sum = field.add(existing, c);
                    if field.is_zero(&sum) {
                        terms.remove(e);
                    } else {
                        *existing = sum;
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn neg(&self, field: &Field) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, field: &Field) -> Result<Self> {
        self.add(&other.neg(field), field)
    }

    pub fn mul(&self, other: &Self, field: &Field) -> Result<Self> {
        self.check_compat(other)?;
        let mut terms: BTreeMap<Exp, Scalar> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let prod = field.mul(c1, c2);
                match terms.get_mut(&e) {
                    Some(existing) => {
                        let sum = field.add(existing, &prod);
                        if field.is_zero(&sum) {
                            terms.remove(&e);
                        } else {
                            *existing = sum;
                        }
                    }
                    None => {
                        if !field.is_zero(&prod) {
                            terms.insert(e, prod);
                        }
                    }
                }
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            terms,
        })
    }

    pub fn scalar_mul(&self, c: &Scalar, field: &Field) -> Self {
        if field.is_zero(c) {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), field.mul(x, c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32, field: &Field) -> Result<Self> {
        let mut out = Self::one(self.nvars, field);
        for _ in 0..n {
            out = out.mul(self, field)?;
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize, field: &Field) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let factor = field.from_i64(e[i] as i64);
            let coeff = field.mul(c, &factor);
            if field.is_zero(&coeff) {
                continue; // characteristic divides the exponent
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            terms.insert(e2, coeff);
        }
        Polynomial {
            nvars: self.nvars,
            terms,
        }
    }

    /// Substitute each variable by the given polynomial (ring homomorphism on
    /// this polynomial; coefficients mapped by `map_coeff`).
    pub fn substitute(
        &self,
        images: &[Polynomial],
        field: &Field,
        map_coeff: impl Fn(&Scalar) -> Result<Scalar>,
    ) -> Result<Polynomial> {
        if images.len() != self.nvars {
            return Err(Error::MixedRings(format!(
                "substitution arity {} for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let out_nvars = images
            .first()
            .map(|p| p.nvars)
            .unwrap_or(self.nvars);
        let mut out = Polynomial::zero(out_nvars);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(out_nvars, map_coeff(c)?, field);
            for (i, &a) in e.iter().enumerate() {
                if a > 0 {
                    term = term.mul(&images[i].pow(a, field)?, field)?;
                }
            }
            out = out.add(&term, field)?;
        }
        Ok(out)
    }

    /// Weighted degree if homogeneous (`None` for the zero polynomial);
    /// error when terms have mixed weighted degrees.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> Result<Option<i64>> {
        let mut deg: Option<i64> = None;
        for (e, _) in &self.terms {
            let d: i64 = e
                .iter()
                .zip(weights)
                .map(|(&a, &w)| a as i64 * w as i64)
                .sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(Error::NotHomogeneous(format!(
                        "terms of weighted degrees {d0} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Canonical string form; `vars` supplies the variable names.
    pub fn to_canonical_string(&self, vars: &[String], field: &Field) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Exp> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u64 = a.iter().map(|&e| e as u64).sum();
            let db: u64 = b.iter().map(|&e| e as u64).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (idx, e) in keys.iter().enumerate() {
            let c = &self.terms[*e];
            let mono = monomial_string(e, vars);
            // Negative rationals get rendered through the " - " separator.
            let (neg, mag) = match c {
                Scalar::Rat(r) if r.is_negative() => (true, field.scalar_to_string(&field.neg(c))),
                _ => (false, field.scalar_to_string(c)),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    /// Parse the canonical form (and tolerant variants: arbitrary spacing,
    /// `+ -3*x`, coefficients anywhere among the factors).
    pub fn parse(s: &str, vars: &[String], field: &Field) -> Result<Polynomial> {
        let nvars = vars.len();
        let mut out = Polynomial::zero(nvars);
        for term in split_terms(s)? {
            let term = term.trim();
            if term.is_empty() {
                continue;
            }
            let (sign, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest.trim()),
                None => (false, term.strip_prefix('+').map(str::trim).unwrap_or(term)),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {s:?}")));
            }
            let mut coeff = field.one();
            let mut exp = vec![0u32; nvars];
            for factor in split_factors(body)? {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in term {term:?}")));
                }
                let (base, pow) = match split_power(factor) {
                    Some((b, p)) => (b, p),
                    None => (factor, 1),
                };
                if let Some(vi) = vars.iter().position(|v| v == base) {
                    exp[vi] = exp[vi]
                        .checked_add(pow)
                        .ok_or_else(|| Error::Parse("exponent overflow".into()))?;
                } else {
                    // Must be a scalar literal (possibly parenthesized).
                    let mut c = field.scalar_parse(base)?;
                    for _ in 1..pow {
                        c = field.mul(&c, &field.scalar_parse(base)?);
                    }
                    if pow == 0 {
                        c = field.one();
                    }
                    coeff = field.mul(&coeff, &c);
                }
            }
            if sign {
                coeff = field.neg(&coeff);
            }
            let t = Polynomial::monomial(nvars, exp, coeff, field);
            out = out.add(&t, field)?;
        }
        Ok(out)
    }
}

fn monomial_string(e: &Exp, vars: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in e.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(vars[i].clone()),
            _ => parts.push(format!("{}^{}", vars[i], a)),
        }
    }
    parts.join("*")
}

/// Split an expression into signed terms at top-level +/-.
fn split_terms(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    let mut prev_meaningful: Option<char> = None;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
                }
            }
            _ => {}
        }
        let is_sep = depth == 0
            && (c == '+' || c == '-')
            && matches!(prev_meaningful, Some(p) if p != '*' && p != '^' && p != '+' && p != '-' && p != '/');
        if is_sep {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(c);
        if !c.is_whitespace() {
            prev_meaningful = Some(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in {s:?}")));
    }
    out.push(cur);
    Ok(out)
}

/// Split a term into factors at top-level '*'.
fn split_factors(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    Ok(out)
}

fn split_power(factor: &str) -> Option<(&str, u32)> {
    // Only split on a '^' outside parentheses.
    let mut depth = 0;
    for (i, c) in factor.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '^' if depth == 0 => {
                let base = factor[..i].trim();
                let pow: u32 = factor[i + 1..].trim().parse().ok()?;
                return Some((base, pow));
            }
            _ => {}
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;

    fn qq() -> Field {
        Field::rationals()
    }

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn canonical_string_matches_expected_form() {
        let f = qq();
        let v = vars(&["x", "y", "z"]);
        // 3*x^2*y - 1/2*z
        let p = Polynomial::monomial(3, vec![2, 1, 0], f.from_i64(3), &f)
            .add(
                &Polynomial::monomial(3, vec![0, 0, 1], f.from_rat(Rat::new(-1, 2)).unwrap(), &f),
                &f,
            )
            .unwrap();
        assert_eq!(p.to_canonical_string(&v, &f), "3*x^2*y - 1/2*z");
        let q = Polynomial::parse("3*x^2*y - 1/2*z", &v, &f).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn difference_of_squares() {
        let f = qq();
        let v = vars(&["x", "y"]);
        let xp = Polynomial::parse("x + y", &v, &f).unwrap();
        let xm = Polynomial::parse("x - y", &v, &f).unwrap();
        let prod = xp.mul(&xm, &f).unwrap();
        let expect = Polynomial::parse("x^2 - y^2", &v, &f).unwrap();
        assert_eq!(prod, expect);
    }

    #[test]
    fn parse_tolerates_variants() {
        let f = qq();
        let v = vars(&["x", "y"]);
        let a = Polynomial::parse("2*x^2 + -3*y", &v, &f).unwrap();
        let b = Polynomial::parse("2*x^2 - 3*y", &v, &f).unwrap();
        let c = Polynomial::parse("  2*x*x+- 3 * y ", &v, &f).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(Polynomial::parse("2*(x", &v, &f).is_err());
        assert!(Polynomial::parse("q + 1", &v, &f).is_err());
    }

    #[test]
    fn zero_handling() {
        let f = qq();
        let v = vars(&["x"]);
        let p = Polynomial::parse("x - x", &v, &f).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_canonical_string(&v, &f), "0");
        let q = Polynomial::parse("0", &v, &f).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn homogeneity() {
        let f = qq();
        let v = vars(&["x", "y"]);
        let p = Polynomial::parse("x^3 + y^3", &v, &f).unwrap();
        assert_eq!(p.homogeneous_degree(&[1, 1]).unwrap(), Some(3));
        let q = Polynomial::parse("x^2 + y", &v, &f).unwrap();
        assert!(q.homogeneous_degree(&[1, 1]).is_err());
        // ... but homogeneous for weights (1, 2).
        assert_eq!(q.homogeneous_degree(&[1, 2]).unwrap(), Some(2));
        assert_eq!(Polynomial::zero(2).homogeneous_degree(&[1, 1]).unwrap(), None);
    }

    #[test]
    fn partial_derivatives_respect_characteristic() {
        let f2 = Field::prime(2).unwrap();
        let v = vars(&["x"]);
        let p = Polynomial::parse("x^2", &v, &f2).unwrap();
        assert!(p.partial(0, &f2).is_zero());
        let f = qq();
        let p = Polynomial::parse("x^2", &v, &f).unwrap();
        let expect = Polynomial::parse("2*x", &v, &f).unwrap();
        assert_eq!(p.partial(0, &f), expect);
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let f = qq();
        let v = vars(&["x", "y"]);
        let p = Polynomial::parse("x^2 + y^2", &v, &f).unwrap();
        // x -> y, y -> -x (the quarter-turn substitution)
        let images = vec![
            Polynomial::parse("y", &v, &f).unwrap(),
            Polynomial::parse("-x", &v, &f).unwrap(),
        ];
        let q = p
            .substitute(&images, &f, |c| Ok(c.clone()))
            .unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn mixed_arity_rejected() {
        let f = qq();
        let a = Polynomial::zero(2);
        let b = Polynomial::zero(3);
        assert!(matches!(a.add(&b, &f), Err(Error::MixedRings(_))));
    }
}
