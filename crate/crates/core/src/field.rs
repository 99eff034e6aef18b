//! The golden-ratio field `Q(w)` with `w^2 = w + 1`, and its reductions
//! modulo primes that split `x^2 - x - 1`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element `a + b*w` of `Q(w)`.
///
/// Both coordinates are kept as reduced fractions, so equality and hashing
/// are structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        FieldElement {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        FieldElement {
            a: BigRational::new(num.into(), den.into()),
            b: BigRational::zero(),
        }
    }

    pub fn rational(a: BigRational) -> Self {
        FieldElement { a, b: BigRational::zero() }
    }

    pub fn integer(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    /// The golden ratio `w`.
    pub fn omega() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Image under the Galois automorphism `w -> 1 - w`.
    pub fn conjugate(&self) -> Self {
        FieldElement { a: &self.a + &self.b, b: -&self.b }
    }

    /// Field norm `a^2 + ab - b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(FieldElement { a: c.a / &n, b: c.b / n })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        FieldElement { a: &self.a * k, b: &self.b * k }
    }

    /// Least common multiple of the two denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.a.denom().lcm(self.b.denom())
    }

    /// Approximate value with `w ~ 1.618033988750`; rendering only.
    pub fn to_f64(&self) -> f64 {
        const OMEGA_APPROX: f64 = 1.618_033_988_750;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * OMEGA_APPROX
    }

    /// True if the element is `(a, b)` with both parts integral.
    pub fn is_algebraic_integer_coords(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }
}

impl Zero for FieldElement {
    fn zero() -> Self {
        FieldElement::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for FieldElement {
    fn one() -> Self {
        FieldElement::from_ints(1, 0)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::integer(n)
    }
}

impl From<BigRational> for FieldElement {
    fn from(q: BigRational) -> Self {
        FieldElement::rational(q)
    }
}

fn mul_parts(x: &FieldElement, y: &FieldElement) -> FieldElement {
    // (a1 + b1 w)(a2 + b2 w) = (a1 a2 + b1 b2) + (a1 b2 + a2 b1 + b1 b2) w
    if x.b.is_zero() {
        return FieldElement { a: &x.a * &y.a, b: &x.a * &y.b };
    }
    if y.b.is_zero() {
        return FieldElement { a: &x.a * &y.a, b: &x.b * &y.a };
    }
    let bb = &x.b * &y.b;
    FieldElement {
        a: &x.a * &y.a + &bb,
        b: &x.a * &y.b + &y.a * &x.b + bb,
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                let f: fn(&FieldElement, &FieldElement) -> FieldElement = $body;
                f(self, rhs)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| FieldElement { a: &x.a + &y.a, b: &x.b + &y.b });
forward_binop!(Sub, sub, |x, y| FieldElement { a: &x.a - &y.a, b: &x.b - &y.b });
forward_binop!(Mul, mul, mul_parts);

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = mul_parts(self, rhs);
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -self.a, b: -self.b }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b }
    }
}

impl Sum for FieldElement {
    fn sum<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::zero(), |acc, x| acc + x)
    }
}

impl Product for FieldElement {
    fn product<I: Iterator<Item = FieldElement>>(iter: I) -> Self {
        iter.fold(FieldElement::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for FieldElement {
    /// Canonical text: `3`, `-1/2`, `w`, `-2*w`, `1-w`, `-1/2+3/4*w`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bpart = |b: &BigRational| -> String {
            if b.is_one() {
                "w".to_string()
            } else if *b == -BigRational::one() {
                "-w".to_string()
            } else {
                format!("{}*w", b)
            }
        };
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}", bpart(&self.b)),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{}{}", self.a, bpart(&self.b))
                } else {
                    write!(f, "{}+{}", self.a, bpart(&self.b))
                }
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self)
    }
}

impl FromStr for FieldElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::text::parse_scalar(s)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Modular images

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = 17u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Square root modulo an odd prime (Tonelli-Shanks).
pub fn sqrt_mod(n: u64, p: u64) -> Option<u64> {
    let n = n % p;
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Primes ending in 1 or 9 (equivalently `p = +-1 mod 5`), ascending from `start`.
pub fn valid_primes(start: u64) -> impl Iterator<Item = u64> {
    (start..).filter(|&n| matches!(n % 10, 1 | 9) && is_prime(n))
}

/// First prime used for rank screening.
pub const SCREENING_PRIME_START: u64 = 10_007;

/// First prime used for multi-modular reconstruction.
pub const RECONSTRUCTION_PRIME_START: u64 = 1 << 30;

/// A prime `p` with a chosen root `r` of `x^2 - x - 1` mod `p`; the ring map
/// `Z[w]_(p) -> F_p` sending `w` to `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModularImage {
    pub p: u64,
    pub r: u64,
}

impl ModularImage {
    /// Uses the root `(1 + sqrt 5)/2` for the smaller square root of 5.
    pub fn new(p: u64) -> Result<Self> {
        if !(7..1 << 62).contains(&p) || !is_prime(p) || !matches!(p % 5, 1 | 4) {
            return Err(Error::BadPrime(p));
        }
        let s = sqrt_mod(5, p).ok_or(Error::BadPrime(p))?;
        let s = s.min(p - s);
        let r = mul_mod((1 + s) % p, inv_mod(2, p).unwrap(), p);
        Ok(ModularImage { p, r })
    }

    pub fn with_root(p: u64, r: u64) -> Result<Self> {
        let img = ModularImage { p, r: r % p };
        let lhs = mul_mod(img.r, img.r, p);
        if !is_prime(p) || lhs != (img.r + 1) % p {
            return Err(Error::BadPrime(p));
        }
        Ok(img)
    }

    /// The other embedding: `w -> 1 - r`.
    pub fn conjugate(&self) -> Self {
        ModularImage { p: self.p, r: (1 + self.p - self.r) % self.p }
    }

    pub fn reduce_int(&self, n: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        n.mod_floor(&p).to_u64().unwrap()
    }

    pub fn reduce_rational(&self, q: &BigRational) -> Result<u64> {
        let den = self.reduce_int(q.denom());
        let inv = inv_mod(den, self.p).ok_or(Error::BadPrime(self.p))?;
        Ok(mul_mod(self.reduce_int(q.numer()), inv, self.p))
    }

    pub fn reduce(&self, x: &FieldElement) -> Result<u64> {
        let a = self.reduce_rational(&x.a)?;
        let b = self.reduce_rational(&x.b)?;
        Ok((a + mul_mod(b, self.r, self.p)) % self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn omega_squared() {
        let w = FieldElement::omega();
        assert_eq!(&w * &w, FieldElement::from_ints(1, 1));
        assert_eq!(&w * &fe("-1+w"), FieldElement::one());
    }

    #[test]
    fn division_examples() {
        let q = fe("1+w").checked_div(&fe("w")).unwrap();
        assert_eq!(q, fe("w"));
        assert_eq!(&q * &fe("w"), fe("1+w"));
        assert!(matches!(fe("3").checked_div(&FieldElement::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "3", "-1/2", "w", "-w", "2*w", "1-w", "1+w", "-1/2+3/4*w", "-3/7*w"] {
            assert_eq!(fe(s).to_string(), s);
        }
        assert_eq!(fe("w*w"), fe("1+w"));
        assert_eq!(fe("(1/2)*(2-2*w)"), fe("1-w"));
    }

    #[test]
    fn reduction_examples() {
        let img = ModularImage::with_root(11, 4).unwrap();
        assert_eq!(img.reduce(&FieldElement::omega()).unwrap(), 4);
        assert_eq!(img.reduce(&FieldElement::from_ratio(1, 2)).unwrap(), 6);
        assert_eq!(img.reduce(&fe("w-1")).unwrap(), 3);
        assert!(matches!(img.reduce(&FieldElement::from_ratio(1, 11)), Err(Error::BadPrime(11))));
        assert!(ModularImage::with_root(11, 5).is_err());
    }

    #[test]
    fn prime_enumeration() {
        let ps: Vec<u64> = valid_primes(SCREENING_PRIME_START).take(4).collect();
        assert_eq!(ps, vec![10009, 10039, 10061, 10069]);
        for p in valid_primes(1 << 30).take(5) {
            let img = ModularImage::new(p).unwrap();
            assert_eq!(mul_mod(img.r, img.r, p), (img.r + 1) % p);
            let c = img.conjugate();
            assert_eq!(mul_mod(c.r, c.r, p), (c.r + 1) % p);
        }
        assert!(ModularImage::new(13).is_err());
    }

    fn arb_fe() -> impl Strategy<Value = FieldElement> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(an, ad, bn, bd)| {
            FieldElement::new(
                BigRational::new(an.into(), ad.into()),
                BigRational::new(bn.into(), bd.into()),
            )
        })
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb_fe(), y in arb_fe(), z in arb_fe()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn inverse_is_two_sided(x in arb_fe()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inverse().unwrap(), FieldElement::one());
        }

        #[test]
        fn reduction_is_a_homomorphism(x in arb_fe(), y in arb_fe(), k in 0usize..5) {
            let p = valid_primes(SCREENING_PRIME_START).nth(k).unwrap();
            for img in [ModularImage::new(p).unwrap(), ModularImage::new(p).unwrap().conjugate()] {
                let (rx, ry) = (img.reduce(&x).unwrap(), img.reduce(&y).unwrap());
                prop_assert_eq!(img.reduce(&(&x * &y)).unwrap(), mul_mod(rx, ry, p));
                prop_assert_eq!(img.reduce(&(&x + &y)).unwrap(), (rx + ry) % p);
            }
        }

        #[test]
        fn text_parses_back(x in arb_fe()) {
            prop_assert_eq!(x.to_string().parse::<FieldElement>().unwrap(), x);
        }
    }
}
