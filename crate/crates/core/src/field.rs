//! Exact coefficient fields: rationals, prime fields, and simple extensions
//! of the rationals.
//!
//! A [`Field`] is a runtime descriptor; scalars are [`Scalar`] values whose
//! arithmetic is mediated by the field (prime fields need the modulus,
//! extensions the minimal polynomial). Mixing scalars from different fields is
//! a programming error and panics with a diagnostic; user-facing ring
//! mismatches are caught earlier at the polynomial/ring layer.

use crate::error::{Error, Result};
use crate::rat::Rat;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    /// F_p for a prime p (p <= 2^31 so products fit in u128 comfortably).
    Prime(u64),
    /// Q[t]/(modulus), modulus monic of degree >= 1 with rational
    /// coefficients `modulus[0] + modulus[1] t + ... + t^deg`.
    Extension {
        symbol: String,
        modulus: Vec<Rat>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    kind: Arc<FieldKind>,
}

/// An element of some [`Field`]. The variant must match the field kind.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rat),
    /// Canonical residue 0..p-1.
    Mod(u64),
    /// Coefficients 0..deg-1 in the extension generator; always full length.
    Ext(Vec<Rat>),
}

impl Field {
    pub fn rationals() -> Self {
        Field {
            kind: Arc::new(FieldKind::Rationals),
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p > (1 << 31) {
            return Err(Error::InvalidRing(format!(
                "prime field modulus {p} out of supported range"
            )));
        }
        let mut d = 2;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::InvalidRing(format!("{p} is not prime")));
            }
            d += 1;
        }
        Ok(Field {
            kind: Arc::new(FieldKind::Prime(p)),
        })
    }

    /// Simple extension of the rationals by a root of the given monic
    /// polynomial (coefficients constant-first, leading 1 included).
    pub fn extension(symbol: &str, modulus: Vec<Rat>) -> Result<Self> {
        if modulus.len() < 3 {
            return Err(Error::InvalidRing(
                "extension modulus must have degree >= 2".into(),
            ));
        }
        if !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidRing("extension modulus must be monic".into()));
        }
        if symbol.is_empty() || !symbol.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::InvalidRing(format!(
                "bad extension symbol {symbol:?}"
            )));
        }
        Ok(Field {
            kind: Arc::new(FieldKind::Extension {
                symbol: symbol.to_string(),
                modulus,
            }),
        })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// 0 for characteristic zero, p for prime fields.
    pub fn characteristic(&self) -> u64 {
        match &*self.kind {
            FieldKind::Prime(p) => *p,
            _ => 0,
        }
    }

    pub fn ext_degree(&self) -> usize {
        match &*self.kind {
            FieldKind::Extension { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn zero(&self) -> Scalar {
        match &*self.kind {
            FieldKind::Rationals => Scalar::Rat(Rat::zero()),
            FieldKind::Prime(_) => Scalar::Mod(0),
            FieldKind::Extension { .. } => Scalar::Ext(vec![Rat::zero(); self.ext_degree()]),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match &*self.kind {
            FieldKind::Rationals => Scalar::Rat(Rat::from_i64(n)),
            FieldKind::Prime(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Mod(m)
            }
            FieldKind::Extension { .. } => {
                let mut v = vec![Rat::zero(); self.ext_degree()];
                v[0] = Rat::from_i64(n);
                Scalar::Ext(v)
            }
        }
    }

    pub fn from_rat(&self, r: Rat) -> Result<Scalar> {
        match &*self.kind {
            FieldKind::Rationals => Ok(Scalar::Rat(r)),
            FieldKind::Prime(p) => {
                let (n, d) = r
                    .as_small()
                    .ok_or_else(|| Error::Parse("rational too large for prime field".into()))?;
                let p128 = *p as i128;
                let n = n.rem_euclid(p128) as u64;
                let d = d.rem_euclid(p128) as u64;
                let dinv = mod_inv(d, *p).ok_or(Error::DivisionByZero)?;
                Ok(Scalar::Mod(mod_mul(n, dinv, *p)))
            }
            FieldKind::Extension { .. } => {
                let mut v = vec![Rat::zero(); self.ext_degree()];
                v[0] = r;
                Ok(Scalar::Ext(v))
            }
        }
    }

    /// The extension generator, when this is an extension field.
    pub fn generator(&self) -> Option<Scalar> {
        match &*self.kind {
            FieldKind::Extension { .. } => {
                let mut v = vec![Rat::zero(); self.ext_degree()];
                v[1] = Rat::one();
                Some(Scalar::Ext(v))
            }
            _ => None,
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod(m) => *m == 0,
            Scalar::Ext(v) => v.iter().all(Rat::is_zero),
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        self.eq(a, &self.one())
    }

    pub fn eq(&self, a: &Scalar, b: &Scalar) -> bool {
        a == b
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x.add(y)),
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.prime_modulus();
                Scalar::Mod((x + y) % p)
            }
            (Scalar::Ext(x), Scalar::Ext(y)) => {
                Scalar::Ext(x.iter().zip(y).map(|(u, v)| u.add(v)).collect())
            }
            _ => panic!("scalar kind mismatch in add"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(x.neg()),
            Scalar::Mod(x) => {
                let p = self.prime_modulus();
                Scalar::Mod(if *x == 0 { 0 } else { p - x })
            }
            Scalar::Ext(x) => Scalar::Ext(x.iter().map(Rat::neg).collect()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x.mul(y)),
            (Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mod_mul(*x, *y, self.prime_modulus())),
            (Scalar::Ext(x), Scalar::Ext(y)) => {
                let modulus = self.ext_modulus();
                Scalar::Ext(ext_mul(x, y, modulus))
            }
            _ => panic!("scalar kind mismatch in mul"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        match a {
            Scalar::Rat(x) => Ok(Scalar::Rat(x.inv().unwrap())),
            Scalar::Mod(x) => mod_inv(*x, self.prime_modulus())
                .map(Scalar::Mod)
                .ok_or(Error::DivisionByZero),
            Scalar::Ext(x) => {
                let modulus = self.ext_modulus();
                ext_inv(x, modulus).ok_or_else(|| {
                    Error::NotInvertible(
                        "element not invertible; extension modulus is reducible".into(),
                    )
                })
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn prime_modulus(&self) -> u64 {
        match &*self.kind {
            FieldKind::Prime(p) => *p,
            _ => panic!("not a prime field"),
        }
    }

    fn ext_modulus(&self) -> &[Rat] {
        match &*self.kind {
            FieldKind::Extension { modulus, .. } => modulus,
            _ => panic!("not an extension field"),
        }
    }

    /// Canonical string form of a scalar ("3", "-1/2", "(1+2*i)").
    pub fn scalar_to_string(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(r) => r.to_string(),
            Scalar::Mod(m) => m.to_string(),
            Scalar::Ext(v) => {
                let symbol = match &*self.kind {
                    FieldKind::Extension { symbol, .. } => symbol.as_str(),
                    _ => unreachable!(),
                };
                let mut parts = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let coeff = c.to_string();
                    let term = match i {
                        0 => coeff,
                        1 if c.is_one() => symbol.to_string(),
                        1 => format!("{coeff}*{symbol}"),
                        _ if c.is_one() => format!("{symbol}^{i}"),
                        _ => format!("{coeff}*{symbol}^{i}"),
                    };
                    parts.push(term);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    format!("({})", parts.join("+"))
                }
            }
        }
    }

    /// Parse the canonical scalar form produced by [`Self::scalar_to_string`].
    pub fn scalar_parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        match &*self.kind {
            FieldKind::Rationals => Rat::parse(s)
                .map(Scalar::Rat)
                .ok_or_else(|| Error::Parse(format!("bad rational {s:?}"))),
            FieldKind::Prime(_) => {
                let r = Rat::parse(s).ok_or_else(|| Error::Parse(format!("bad scalar {s:?}")))?;
                self.from_rat(r)
            }
            FieldKind::Extension { symbol, .. } => {
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
                let deg = self.ext_degree();
                let mut coeffs = vec![Rat::zero(); deg];
                for part in split_signed_terms(inner) {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let (coeff_str, pow) = if let Some(idx) = part.find(symbol.as_str()) {
                        let before = part[..idx].trim().trim_end_matches('*').trim();
                        let after = part[idx + symbol.len()..].trim();
                        let pow = if let Some(e) = after.strip_prefix('^') {
                            e.trim()
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad power {after:?}")))?
                        } else if after.is_empty() {
                            1
                        } else {
                            return Err(Error::Parse(format!("bad term {part:?}")));
                        };
                        (before, pow)
                    } else {
                        (part, 0)
                    };
                    let c = if coeff_str.is_empty() || coeff_str == "+" {
                        Rat::one()
                    } else if coeff_str == "-" {
                        Rat::one().neg()
                    } else {
                        Rat::parse(coeff_str)
                            .ok_or_else(|| Error::Parse(format!("bad coefficient {coeff_str:?}")))?
                    };
                    if pow >= deg {
                        return Err(Error::Parse(format!(
                            "power {pow} exceeds extension degree {deg}"
                        )));
                    }
                    coeffs[pow] = coeffs[pow].add(&c);
                }
                Ok(Scalar::Ext(coeffs))
            }
        }
    }
}

/// Split "a+b-c" into signed terms ["a", "+b", "-c"], respecting that the
/// leading term may carry a sign.
fn split_signed_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        if c == '+' || c == '-' {
            // Split only when the running term already has content and does
            // not end in an operator (so "+-1/2" stays one signed term).
            let tail = cur.trim_end().chars().last();
            let splittable = matches!(tail, Some(t) if !"+-*/^".contains(t));
            if splittable {
                out.push(cur.clone());
                cur.clear();
            }
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inv(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // Extended Euclid on (a, p).
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(p as i128) as u64)
}

/// Multiply two extension elements modulo the (monic) modulus.
fn ext_mul(x: &[Rat], y: &[Rat], modulus: &[Rat]) -> Vec<Rat> {
    let deg = modulus.len() - 1;
    let mut prod = vec![Rat::zero(); 2 * deg - 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            prod[i + j] = prod[i + j].add(&xi.mul(yj));
        }
    }
    // Reduce from the top: t^k = -(modulus[0] + ... + modulus[deg-1] t^{deg-1}) t^{k-deg}.
    for k in (deg..prod.len()).rev() {
        if prod[k].is_zero() {
            continue;
        }
        let c = prod[k].clone();
        prod[k] = Rat::zero();
        for (j, m) in modulus.iter().take(deg).enumerate() {
            prod[k - deg + j] = prod[k - deg + j].sub(&c.mul(m));
        }
    }
    prod.truncate(deg);
    prod
}

/// Inverse in Q[t]/(modulus) by extended Euclid; `None` if gcd != 1.
fn ext_inv(x: &[Rat], modulus: &[Rat]) -> Option<Scalar> {
    type P = Vec<Rat>;
    fn deg(p: &P) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }
    fn rem_div(mut a: P, b: &P) -> (P, P) {
        let db = deg(b).expect("division by zero poly");
        let lead = b[db].clone();
        let mut q = vec![Rat::zero(); a.len()];
        while let Some(da) = deg(&a) {
            if da < db {
                break;
            }
            let c = a[da].div(&lead).unwrap();
            q[da - db] = q[da - db].add(&c);
            for j in 0..=db {
                a[da - db + j] = a[da - db + j].sub(&c.mul(&b[j]));
            }
        }
        (q, a)
    }
    fn mul(a: &P, b: &P) -> P {
        let mut out = vec![Rat::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }
    fn sub(a: &P, b: &P) -> P {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rat::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rat::zero);
                x.sub(&y)
            })
            .collect()
    }

    let n = modulus.len() - 1;
    let (mut r0, mut r1): (P, P) = (modulus.to_vec(), x.to_vec());
    let (mut s0, mut s1): (P, P) = (vec![Rat::zero()], vec![Rat::one()]);
    while deg(&r1).is_some() {
        let (q, r) = rem_div(r0.clone(), &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let d = deg(&r0)?;
    if d != 0 {
        return None; // gcd has positive degree: not invertible
    }
    let scale = r0[0].inv().unwrap();
    let mut out = vec![Rat::zero(); n];
    for (i, c) in s0.iter().enumerate() {
        if i < n {
            out[i] = c.mul(&scale);
        } else if !c.is_zero() {
            // Bezout coefficient should already be reduced below deg(modulus).
            let (_, r) = rem_div(s0.clone(), &modulus.to_vec());
            for (j, cj) in r.iter().take(n).enumerate() {
                out[j] = cj.mul(&scale);
            }
            break;
        }
    }
    Some(Scalar::Ext(out))
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Mod(m) => write!(f, "{m}"),
            Scalar::Ext(v) => write!(f, "ext{v:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let f = Field::rationals();
        let a = f.from_rat(Rat::new(1, 2)).unwrap();
        let b = f.from_i64(3);
        assert_eq!(f.scalar_to_string(&f.add(&a, &b)), "7/2");
        assert_eq!(f.scalar_to_string(&f.mul(&a, &b)), "3/2");
        assert_eq!(f.scalar_to_string(&f.inv(&a).unwrap()), "2");
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn prime_field_ops() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(f.add(&a, &b), f.from_i64(1));
        assert_eq!(f.mul(&a, &b), f.from_i64(1));
        assert_eq!(f.inv(&a).unwrap(), f.from_i64(5));
        assert_eq!(f.neg(&a), f.from_i64(4));
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert!(Field::prime(6).is_err());
        assert!(Field::prime(1).is_err());
    }

    #[test]
    fn gaussian_extension() {
        // Q(i) with i^2 = -1.
        let f = Field::extension("i", vec![Rat::one(), Rat::zero(), Rat::one()]).unwrap();
        let i = f.generator().unwrap();
        assert_eq!(f.mul(&i, &i), f.from_i64(-1));
        // (1+i)(1-i) = 2
        let a = f.add(&f.one(), &i);
        let b = f.sub(&f.one(), &i);
        assert_eq!(f.mul(&a, &b), f.from_i64(2));
        // 1/(1+i) = (1-i)/2
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&inv, &a), f.one());
        assert_eq!(f.scalar_to_string(&inv), "(1/2+-1/2*i)");
        let reparsed = f.scalar_parse(&f.scalar_to_string(&inv)).unwrap();
        assert_eq!(reparsed, inv);
    }

    #[test]
    fn extension_parse_forms() {
        let f = Field::extension("i", vec![Rat::one(), Rat::zero(), Rat::one()]).unwrap();
        let v = f.scalar_parse("(2*i+1)").unwrap();
        let w = f.scalar_parse("(1+2*i)").unwrap();
        assert_eq!(v, w);
        let neg = f.scalar_parse("(-i)").unwrap();
        assert_eq!(f.neg(&f.generator().unwrap()), neg);
    }

    #[test]
    fn characteristic_reporting() {
        assert_eq!(Field::rationals().characteristic(), 0);
        assert_eq!(Field::prime(5).unwrap().characteristic(), 5);
    }
}
