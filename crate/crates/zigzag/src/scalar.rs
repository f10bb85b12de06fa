//! Exact scalars: rationals with a machine-word fast path, and prime-field residues.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A field element. Rationals are kept reduced with a positive denominator and
/// use the `Small` variant whenever both parts fit in an `i64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u64, u64),
}

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Small(n, 1),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// `num/den` in this field. Panics on a zero denominator (or one divisible by p).
    pub fn ratio(&self, num: i64, den: i64) -> Scalar {
        let d = self.from_i64(den);
        &self.from_i64(num) * &d.inv()
    }

    pub fn sign(&self, negative: bool) -> Scalar {
        if negative {
            self.from_i64(-1)
        } else {
            self.one()
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    /// The smallest generator of the multiplicative group, for prime fields.
    pub fn primitive_root(&self) -> Option<u64> {
        let p = match *self {
            Field::Rationals => return None,
            Field::Prime(p) => p,
        };
        if p == 2 {
            return Some(1);
        }
        let factors = prime_factors(p - 1);
        (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
    }

    /// A primitive `n`-th root of unity derived from the designated primitive root.
    pub fn root_of_unity(&self, n: u64) -> Option<Scalar> {
        match *self {
            Field::Rationals => match n {
                1 => Some(self.one()),
                2 => Some(self.from_i64(-1)),
                _ => None,
            },
            Field::Prime(p) => {
                if (p - 1) % n != 0 {
                    return None;
                }
                let g = self.primitive_root()?;
                Some(Scalar::Mod(pow_mod(g, (p - 1) / n, p), p))
            }
        }
    }

    /// Parses `Q` or `Fp:p`.
    pub fn parse(text: &str) -> Option<Field> {
        let t = text.trim();
        if t == "Q" {
            return Some(Field::Rationals);
        }
        let p: u64 = t.strip_prefix("Fp:")?.parse().ok()?;
        if is_prime(p) {
            Some(Field::Prime(p))
        } else {
            None
        }
    }

    /// Parses a scalar literal (`-3`, `2/5`) into this field.
    pub fn parse_scalar(&self, text: &str) -> Option<Scalar> {
        let t = text.trim();
        if let Some((n, d)) = t.split_once('/') {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 || self.from_i64(d).is_zero() {
                return None;
            }
            Some(self.ratio(n, d))
        } else {
            Some(self.from_i64(t.parse().ok()?))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// The least prime `p > lower` with `p ≡ 1 (mod n)`.
pub fn least_prime_one_mod(n: u64, lower: u64) -> u64 {
    let mut p = lower + 1;
    p += (n + 1 - p % n) % n;
    loop {
        if is_prime(p) {
            return p;
        }
        p += n;
    }
}

fn small_from_i128(n: i128, d: i128) -> Scalar {
    debug_assert!(d != 0);
    let (mut n, mut d) = (n, d);
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Scalar::Small(a, b),
        _ => Scalar::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
    }
}

fn from_big(r: BigRational) -> Scalar {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        return Scalar::Small(n, d);
    }
    Scalar::Big(Box::new(r))
}

impl Scalar {
    fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(b) => (**b).clone(),
            Scalar::Mod(..) => panic!("prime-field residue used as a rational"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(b) => b.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(n, d) => *n == 1 && *d == 1,
            Scalar::Big(b) => b.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            _ => Field::Rationals,
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Small(n, d) => {
                if *n < 0 {
                    small_from_i128(-(*d as i128), -(*n as i128))
                } else {
                    Scalar::Small(*d, *n)
                }
            }
            Scalar::Big(b) => from_big(b.recip()),
            Scalar::Mod(v, p) => Scalar::Mod(pow_mod(*v, p - 2, *p), *p),
        }
    }

    pub fn pow(&self, e: u64) -> Scalar {
        let mut acc = match self {
            Scalar::Mod(_, p) => Scalar::Mod(1, *p),
            _ => Scalar::Small(1, 1),
        };
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `+1` or `-1` as an integer, if the scalar is one of those.
    pub fn as_sign(&self) -> Option<i8> {
        if self.is_one() {
            return Some(1);
        }
        if (-self).is_one() {
            return Some(-1);
        }
        None
    }

    /// Integer value of a rational with denominator one.
    pub fn as_integer(&self) -> Option<i64> {
        match self {
            Scalar::Small(n, 1) => Some(*n),
            Scalar::Mod(v, _) => i64::try_from(*v).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Small(a, 1), Scalar::Small(c, 1)) => match a.checked_add(*c) {
                Some(s) => Scalar::Small(s, 1),
                None => small_from_i128(*a as i128 + *c as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    small_from_i128(a + c, b)
                } else {
                    small_from_i128(a * d + c * b, b * d)
                }
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                debug_assert_eq!(p, q);
                let s = a + b;
                Scalar::Mod(if s >= *p { s - p } else { s }, *p)
            }
            _ => from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar::Small(m, *d),
                None => small_from_i128(-(*n as i128), *d as i128),
            },
            Scalar::Big(b) => from_big(-(**b).clone()),
            Scalar::Mod(v, p) => Scalar::Mod(if *v == 0 { 0 } else { p - v }, *p),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Small(a, 1), Scalar::Small(c, 1)) => match a.checked_mul(*c) {
                Some(s) => Scalar::Small(s, 1),
                None => small_from_i128(*a as i128 * *c as i128, 1),
            },
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                small_from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                debug_assert_eq!(p, q);
                Scalar::Mod(mul_mod(*a, *b, *p), *p)
            }
            _ => from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Mod(a, _), Scalar::Mod(b, _)) => Some(a.cmp(b)),
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => None,
            _ => Some(self.to_big().cmp(&other.to_big())),
        }
    }
}

impl Scalar {
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n < 0,
            Scalar::Big(b) => b.is_negative(),
            Scalar::Mod(..) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic_reduces() {
        let q = Field::Rationals;
        let a = q.ratio(1, 3);
        let b = q.ratio(1, 6);
        assert_eq!(&a + &b, q.ratio(1, 2));
        assert_eq!((&a * &b).to_string(), "1/18");
        assert_eq!(q.ratio(2, -4), q.ratio(-1, 2));
        assert_eq!(a.inv(), q.from_i64(3));
    }

    #[test]
    fn overflow_promotes_to_big_and_back() {
        let q = Field::Rationals;
        let big = q.from_i64(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq, Scalar::Big(_)));
        let back = &sq * &sq.inv();
        assert_eq!(back, q.one());
        assert_eq!(&(&big + &big) - &big, big);
    }

    #[test]
    fn prime_field_and_roots() {
        let f = Field::Prime(7);
        assert_eq!(&f.from_i64(3) * &f.from_i64(5), f.from_i64(1));
        assert_eq!(f.from_i64(3).inv(), f.from_i64(5));
        assert_eq!(f.primitive_root(), Some(3));
        let w = f.root_of_unity(3).unwrap();
        assert!(w.pow(3).is_one() && !w.is_one());
        let p = least_prime_one_mod(9, 1_000_000);
        assert!(p > 1_000_000 && p % 9 == 1 && is_prime(p));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(Field::parse("Q"), Some(Field::Rationals));
        assert_eq!(Field::parse("Fp:2"), Some(Field::Prime(2)));
        assert_eq!(Field::parse("Fp:4"), None);
        let q = Field::Rationals;
        assert_eq!(q.parse_scalar("-2/6").unwrap().to_string(), "-1/3");
        assert_eq!(Field::Prime(5).parse_scalar("-1").unwrap().to_string(), "4");
    }
}
