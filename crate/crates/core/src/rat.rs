//! Exact rational numbers with a machine-word fast path.
//!
//! `Rat` keeps values as a canonical `i128` fraction while they fit and
//! transparently promotes to `num::BigRational` on overflow, demoting back as
//! soon as the value shrinks. All arithmetic is checked; results are always
//! canonical (reduced, denominator positive, small representation preferred),
//! so derived equality is value equality.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rat {
    /// Reduced fraction, denominator > 0.
    Small(i128, i128),
    /// Fallback for values outside the `i128` range; always actually large.
    Big(Box<BigRational>),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn to_big(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Rat {
    pub fn zero() -> Self {
        Rat::Small(0, 1)
    }

    pub fn one() -> Self {
        Rat::Small(1, 1)
    }

    pub fn from_i64(n: i64) -> Self {
        Rat::Small(n as i128, 1)
    }

    /// Build `n/d`, reducing to canonical form. Panics if `d == 0`.
    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
        if n == 0 {
            return Rat::Small(0, 1);
        }
        let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
        n /= g;
        d /= g;
        Rat::Small(n, d)
    }

    fn from_big(b: BigRational) -> Self {
        // BigRational::new reduces; try to demote.
        let n: Option<i128> = (&b).numer().try_into().ok();
        let d: Option<i128> = (&b).denom().try_into().ok();
        match (n, d) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(b)),
        }
    }

    pub fn to_big_rational(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => to_big(*n, *d),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n == 0,
            Rat::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1)) || matches!(self, Rat::Big(b) if b.is_one())
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(b) => b.is_negative(),
        }
    }

    /// Numerator/denominator as i128 when the value is small.
    pub fn as_small(&self) -> Option<(i128, i128)> {
        match self {
            Rat::Small(n, d) => Some((*n, *d)),
            Rat::Big(_) => None,
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        if let (Rat::Small(n1, d1), Rat::Small(n2, d2)) = (self, other) {
            // n1/d1 + n2/d2 with a shared-gcd trick to delay overflow.
            let g = gcd_u128(d1.unsigned_abs(), d2.unsigned_abs()) as i128;
            let d1g = d1 / g;
            let d2g = d2 / g;
            let num = n1
                .checked_mul(d2g)
                .and_then(|a| n2.checked_mul(d1g).and_then(|b| a.checked_add(b)));
            let den = d1g.checked_mul(*d2);
            if let (Some(num), Some(den)) = (num, den) {
                return Rat::new(num, den);
            }
        }
        Rat::from_big(self.to_big_rational() + other.to_big_rational())
    }

    pub fn sub(&self, other: &Rat) -> Rat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        if let (Rat::Small(n1, d1), Rat::Small(n2, d2)) = (self, other) {
            // Cross-reduce before multiplying to keep factors small.
            let g1 = gcd_u128(n1.unsigned_abs(), d2.unsigned_abs()).max(1) as i128;
            let g2 = gcd_u128(n2.unsigned_abs(), d1.unsigned_abs()).max(1) as i128;
            let (a, b) = (n1 / g1, d2 / g1);
            let (c, d) = (n2 / g2, d1 / g2);
            if let (Some(num), Some(den)) = (a.checked_mul(c), d.checked_mul(b)) {
                return Rat::new(num, den);
            }
        }
        Rat::from_big(self.to_big_rational() * other.to_big_rational())
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(if *n < 0 {
                Rat::Small(-d, -n)
            } else {
                Rat::Small(*d, *n)
            }),
            Rat::Big(b) => {
                if b.is_zero() {
                    None
                } else {
                    Some(Rat::from_big(b.recip()))
                }
            }
        }
    }

    pub fn div(&self, other: &Rat) -> Option<Rat> {
        other.inv().map(|i| self.mul(&i))
    }

    /// Parse "a", "-a", or "a/b". Whitespace is ignored throughout, so
    /// "- 3" and "1 / 2" are accepted, and runs of leading signs collapse
    /// ("+-3" is -3).
    pub fn parse(s: &str) -> Option<Rat> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let signs = compact.chars().take_while(|&c| c == '+' || c == '-');
        let negative = signs.clone().filter(|&c| c == '-').count() % 2 == 1;
        let rest = compact.trim_start_matches(['+', '-']);
        let s = format!("{}{}", if negative { "-" } else { "" }, rest);
        let s = s.as_str();
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::from_big(BigRational::new(n, d)))
        } else {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_big(BigRational::from_integer(n)))
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rat::Small(n1, d1), Rat::Small(n2, d2)) => {
                match (n1.checked_mul(*d2), n2.checked_mul(*d1)) {
                    (Some(a), Some(b)) => a.cmp(&b),
                    _ => self.to_big_rational().cmp(&other.to_big_rational()),
                }
            }
            _ => self.to_big_rational().cmp(&other.to_big_rational()),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(Rat::new(2, 4), Rat::new(1, 2));
        assert_eq!(Rat::new(-2, -4), Rat::new(1, 2));
        assert_eq!(Rat::new(2, -4), Rat::new(-1, 2));
        assert_eq!(Rat::new(0, 7), Rat::zero());
    }

    #[test]
    fn arithmetic_small() {
        let a = Rat::new(1, 2);
        let b = Rat::new(1, 3);
        assert_eq!(a.add(&b), Rat::new(5, 6));
        assert_eq!(a.sub(&b), Rat::new(1, 6));
        assert_eq!(a.mul(&b), Rat::new(1, 6));
        assert_eq!(a.div(&b).unwrap(), Rat::new(3, 2));
        assert_eq!(a.inv().unwrap(), Rat::new(2, 1));
        assert!(Rat::zero().inv().is_none());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::Small(i128::MAX, 1);
        let sum = big.add(&big); // overflows i128
        assert!(matches!(sum, Rat::Big(_)));
        let back = sum.sub(&big);
        // Value fits again, representation must demote for canonical equality.
        assert!(matches!(back, Rat::Small(..)));
        assert_eq!(back, big);
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in ["0", "-7", "3/4", "-12/5"] {
            let r = Rat::parse(s).unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!(Rat::parse("4/8").unwrap().to_string(), "1/2");
        assert!(Rat::parse("1/0").is_none());
        assert!(Rat::parse("x").is_none());
    }

    #[test]
    fn ordering() {
        assert!(Rat::new(1, 3) < Rat::new(1, 2));
        assert!(Rat::new(-1, 2) < Rat::zero());
    }
}
