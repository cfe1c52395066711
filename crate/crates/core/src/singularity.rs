//! Isolated-singularity test via the Tjurina algebra.
//!
//! The quotient `Q/(f, ∂f/∂x_1, …, ∂f/∂x_n)` is finite-dimensional over the
//! coefficient field exactly when `f` has (at most) an isolated singularity
//! at the origin. For a quasi-homogeneous `f` this is decided by a
//! degree-by-degree scan: once the ideal fills `max-weight` consecutive
//! degrees it fills everything above (any monomial of higher degree is a
//! variable times a monomial inside the filled range), and when the quotient
//! is finite its top nonzero degree is bounded by the socle degree of the
//! complete intersection cut out by the partial derivatives. That bound rests
//! on the Euler identity, so the test refuses to answer when the
//! characteristic divides every exponent of `f` (all partials vanish
//! identically and the criterion degenerates).

use crate::error::{Error, Result};
use crate::linalg::Echelon;
use crate::poly::Polynomial;
use crate::ring::GradedRing;

/// Result of the isolated-singularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedSingularity {
    pub isolated: bool,
    /// Dimension of the Tjurina algebra when finite.
    pub tjurina_dimension: Option<usize>,
}

/// Decide whether `Q/(f, ∂f)` is finite-dimensional, returning its dimension
/// as a witness when it is.
pub fn is_isolated_singularity(ring: &GradedRing) -> Result<IsolatedSingularity> {
    let field = ring.field().clone();
    let f = ring.potential();
    let partials = ring.potential_partials();
    if partials.iter().all(Polynomial::is_zero) {
        // Happens exactly when the characteristic divides every exponent.
        return Err(Error::CriterionUnreliable {
            p: field.characteristic(),
        });
    }

    // Homogeneous generators of the Tjurina ideal with their degrees.
    let mut gens: Vec<(Polynomial, i64)> = Vec::new();
    gens.push((f.clone(), ring.potential_degree()));
    for (i, p) in partials.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        gens.push((p.clone(), ring.potential_degree() - ring.weights()[i] as i64));
    }

    let w_max = ring.max_weight();
    let d_f = ring.potential_degree();
    // Socle-degree bound for the complete intersection of the partials,
    // padded by one filled window. Never negative.
    let socle: i64 = ring
        .weights()
        .iter()
        .map(|&w| (d_f - 2 * w as i64).max(0))
        .sum();
    let bound = socle.max(0) + w_max + 1;

    let mut consecutive_full = 0i64;
    let mut dimension = 0usize;
    let mut d = 0i64;
    while consecutive_full < w_max {
        if d > bound + w_max {
            return Ok(IsolatedSingularity {
                isolated: false,
                tjurina_dimension: None,
            });
        }
        let monos = ring.monomials_of_degree(d);
        let piece = monos.len();
        if piece == 0 {
            // Empty graded piece counts as trivially full.
            consecutive_full += 1;
            d += 1;
            continue;
        }
        // Index monomials of degree d for coordinate vectors.
        let index: std::collections::BTreeMap<_, _> =
            monos.iter().cloned().zip(0..).collect();
        let mut span = Echelon::new(piece);
        'outer: for (g, dg) in &gens {
            if *dg > d {
                continue;
            }
            for m in ring.monomials_of_degree(d - *dg) {
                let shifted = ring.mul(
                    g,
                    &Polynomial::monomial(ring.nvars(), m, field.one(), &field),
                )?;
                let mut v = vec![field.zero(); piece];
                for (exp, c) in shifted.terms() {
                    v[index[exp]] = c.clone();
                }
                span.insert(v, &field);
                if span.dim() == piece {
                    break 'outer;
                }
            }
        }
        if span.dim() == piece {
            consecutive_full += 1;
        } else {
            consecutive_full = 0;
            dimension += piece - span.dim();
        }
        d += 1;
    }
    Ok(IsolatedSingularity {
        isolated: true,
        tjurina_dimension: Some(dimension),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn node_is_isolated() {
        // Q[x]/(x², x) = k.
        let r = GradedRing::parse_new(Field::rationals(), &["x"], &[1], "x^2").unwrap();
        let out = is_isolated_singularity(&r).unwrap();
        assert!(out.isolated);
        assert_eq!(out.tjurina_dimension, Some(1));
    }

    #[test]
    fn whitney_umbrella_slice_is_not() {
        // (x²y, x², xy): every power of y survives in the quotient.
        let r = GradedRing::parse_new(Field::rationals(), &["x", "y"], &[1, 1], "x^2*y").unwrap();
        let out = is_isolated_singularity(&r).unwrap();
        assert!(!out.isolated);
        assert_eq!(out.tjurina_dimension, None);
    }

    #[test]
    fn cusp_pair_dimension_four() {
        // Q[x,y]/(x³+y³, x², y²) has basis 1, x, y, xy.
        let r =
            GradedRing::parse_new(Field::rationals(), &["x", "y"], &[1, 1], "x^3 + y^3").unwrap();
        let out = is_isolated_singularity(&r).unwrap();
        assert!(out.isolated);
        assert_eq!(out.tjurina_dimension, Some(4));
    }

    #[test]
    fn weighted_example() {
        // f = x² + y³ with weights (3, 2): Tjurina ideal (f, x, y²) = (x, y²),
        // quotient has basis 1, y.
        let r =
            GradedRing::parse_new(Field::rationals(), &["x", "y"], &[3, 2], "x^2 + y^3").unwrap();
        let out = is_isolated_singularity(&r).unwrap();
        assert!(out.isolated);
        assert_eq!(out.tjurina_dimension, Some(2));
    }

    #[test]
    fn char_two_square_refused() {
        // Over F_2, every exponent of x² is even: both partials vanish.
        let r = GradedRing::parse_new(Field::prime(2).unwrap(), &["x"], &[1], "x^2").unwrap();
        let err = is_isolated_singularity(&r).unwrap_err();
        assert!(matches!(err, Error::CriterionUnreliable { p: 2 }));
    }

    #[test]
    fn good_characteristic_answers() {
        // x³ over F_5: partial 3x², quotient k[x]/(x²) of dimension 2.
        let r = GradedRing::parse_new(Field::prime(5).unwrap(), &["x"], &[1], "x^3").unwrap();
        let out = is_isolated_singularity(&r).unwrap();
        assert!(out.isolated);
        assert_eq!(out.tjurina_dimension, Some(2));
    }
}
