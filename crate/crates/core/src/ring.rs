//! Weighted-graded polynomial rings with a fixed homogeneous potential.
//!
//! `GradedRing` bundles the coefficient field, named variables with positive
//! integer weights, and the potential `f` (nonzero, weighted-homogeneous of
//! degree >= 1). It stands in for the complete local hypersurface base: the
//! grading plays the role of the completeness/henselian hypothesis, so every
//! computation stays within finite graded pieces.

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{Exp, Polynomial};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    field: Field,
    vars: Vec<String>,
    weights: Vec<u32>,
    potential: Polynomial,
    potential_degree: i64,
}

impl GradedRing {
    pub fn new(
        field: Field,
        vars: Vec<String>,
        weights: Vec<u32>,
        potential: Polynomial,
    ) -> Result<Arc<Self>> {
        if vars.is_empty() {
            return Err(Error::InvalidRing("at least one variable required".into()));
        }
        if vars.len() != weights.len() {
            return Err(Error::InvalidRing(format!(
                "{} variables but {} weights",
                vars.len(),
                weights.len()
            )));
        }
        for v in &vars {
            let ok = !v.is_empty()
                && v.chars().next().unwrap().is_ascii_alphabetic()
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidRing(format!("bad variable name {v:?}")));
            }
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != vars.len() {
            return Err(Error::InvalidRing("duplicate variable names".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::InvalidRing("weights must be positive".into()));
        }
        if potential.nvars() != vars.len() {
            return Err(Error::MixedRings(
                "potential arity does not match variables".into(),
            ));
        }
        if potential.is_zero() {
            return Err(Error::InvalidRing("potential must be nonzero".into()));
        }
        let deg = potential
            .homogeneous_degree(&weights)?
            .expect("nonzero poly has a degree");
        if deg < 1 {
            return Err(Error::InvalidRing(
                "potential must have positive weighted degree".into(),
            ));
        }
        Ok(Arc::new(GradedRing {
            field,
            vars,
            weights,
            potential,
            potential_degree: deg,
        }))
    }

    /// Convenience constructor parsing the potential from its string form.
    pub fn parse_new(
        field: Field,
        vars: &[&str],
        weights: &[u32],
        potential: &str,
    ) -> Result<Arc<Self>> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let f = Polynomial::parse(potential, &vars, &field)?;
        Self::new(field, vars, weights.to_vec(), f)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn max_weight(&self) -> i64 {
        *self.weights.iter().max().unwrap() as i64
    }

    pub fn potential(&self) -> &Polynomial {
        &self.potential
    }

    /// Weighted degree of the potential (`d_f`).
    pub fn potential_degree(&self) -> i64 {
        self.potential_degree
    }

    pub fn same_ring(&self, other: &GradedRing) -> bool {
        self == other
    }

    pub fn require_same_ring(&self, other: &GradedRing) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::MixedRings(
                "operands live over different graded rings".into(),
            ))
        }
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars(), &self.field)
    }

    pub fn variable(&self, i: usize) -> Polynomial {
        Polynomial::variable(self.nvars(), i, &self.field)
    }

    pub fn constant(&self, c: Scalar) -> Polynomial {
        Polynomial::constant(self.nvars(), c, &self.field)
    }

    pub fn parse(&self, s: &str) -> Result<Polynomial> {
        let p = Polynomial::parse(s, &self.vars, &self.field)?;
        Ok(p)
    }

    pub fn to_string(&self, p: &Polynomial) -> String {
        p.to_canonical_string(&self.vars, &self.field)
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.add(b, &self.field)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.sub(b, &self.field)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        a.mul(b, &self.field)
    }

    pub fn weighted_degree(&self, exp: &[u32]) -> i64 {
        exp.iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as i64 * w as i64)
            .sum()
    }

    /// Degree of a homogeneous polynomial (`None` for zero); errors if mixed.
    pub fn degree_of(&self, p: &Polynomial) -> Result<Option<i64>> {
        p.homogeneous_degree(&self.weights)
    }

    /// All exponent vectors of weighted degree exactly `d`, in descending
    /// lexicographic order (the canonical monomial order used everywhere).
    pub fn monomials_of_degree(&self, d: i64) -> Vec<Exp> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        let mut exp = vec![0u32; self.nvars()];
        self.enumerate_monomials(0, d, &mut exp, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate_monomials(&self, var: usize, remaining: i64, exp: &mut Exp, out: &mut Vec<Exp>) {
        if var == self.nvars() {
            if remaining == 0 {
                out.push(exp.clone());
            }
            return;
        }
        let w = self.weights[var] as i64;
        let max = remaining / w;
        for a in 0..=max {
            exp[var] = a as u32;
            self.enumerate_monomials(var + 1, remaining - a * w, exp, out);
        }
        exp[var] = 0;
    }

    /// Dimension of the degree-`d` graded piece.
    pub fn piece_dimension(&self, d: i64) -> usize {
        self.monomials_of_degree(d).len()
    }

    /// All partial derivatives of the potential.
    pub fn potential_partials(&self) -> Vec<Polynomial> {
        (0..self.nvars())
            .map(|i| self.potential.partial(i, &self.field))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates() {
        let f = Field::rationals();
        assert!(GradedRing::parse_new(f.clone(), &["x"], &[1], "x^2").is_ok());
        assert!(GradedRing::parse_new(f.clone(), &["x"], &[1], "0").is_err());
        assert!(GradedRing::parse_new(f.clone(), &["x"], &[0], "x^2").is_err());
        assert!(GradedRing::parse_new(f.clone(), &["x", "x"], &[1, 1], "x^2").is_err());
        // Inhomogeneous potential rejected.
        assert!(GradedRing::parse_new(f.clone(), &["x", "y"], &[1, 1], "x^2 + y^3").is_err());
        // ... unless the weights make it homogeneous.
        let r = GradedRing::parse_new(f, &["x", "y"], &[3, 2], "x^2 + y^3").unwrap();
        assert_eq!(r.potential_degree(), 6);
    }

    #[test]
    fn monomial_enumeration() {
        let f = Field::rationals();
        let r = GradedRing::parse_new(f, &["x", "y"], &[1, 1], "x^3 + y^3").unwrap();
        assert_eq!(r.piece_dimension(0), 1);
        assert_eq!(r.piece_dimension(2), 3);
        assert_eq!(r.piece_dimension(-1), 0);
        let m = r.monomials_of_degree(2);
        assert_eq!(m, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn weighted_enumeration() {
        let f = Field::rationals();
        let r = GradedRing::parse_new(f, &["x", "y"], &[2, 1], "x^2 + y^4").unwrap();
        assert_eq!(r.potential_degree(), 4);
        // degree 2: x, y^2
        assert_eq!(r.monomials_of_degree(2), vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(r.piece_dimension(1), 1);
    }

    #[test]
    fn ring_identity() {
        let f = Field::rationals();
        let r1 = GradedRing::parse_new(f.clone(), &["x"], &[1], "x^2").unwrap();
        let r2 = GradedRing::parse_new(f.clone(), &["x"], &[1], "x^2").unwrap();
        let r3 = GradedRing::parse_new(f, &["x"], &[1], "x^3").unwrap();
        assert!(r1.same_ring(&r2));
        assert!(!r1.same_ring(&r3));
        assert!(r1.require_same_ring(&r3).is_err());
    }

    #[test]
    fn potential_partials() {
        let f = Field::rationals();
        let r = GradedRing::parse_new(f, &["x", "y"], &[1, 1], "x^3 + y^3").unwrap();
        let parts = r.potential_partials();
        assert_eq!(r.to_string(&parts[0]), "3*x^2");
        assert_eq!(r.to_string(&parts[1]), "3*y^2");
    }
}
