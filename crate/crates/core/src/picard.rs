//! The symmetric part of the Picard lattice of the blow-up at the 31 points:
//! classes `h H - m5 E5 - m3 E3 - m2 E2`, their pairing, Euler
//! characteristics, and nef/descent certificates for Waldschmidt bounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::report::Claim;

/// Orbit sizes of quintuple, triple and double points.
pub const ORBIT_SIZES: [i64; 3] = [6, 10, 15];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct DivisorClass {
    pub h: i64,
    pub m5: i64,
    pub m3: i64,
    pub m2: i64,
}

impl DivisorClass {
    pub const fn new(h: i64, m5: i64, m3: i64, m2: i64) -> Self {
        DivisorClass { h, m5, m3, m2 }
    }

    pub fn mults(&self) -> [i64; 3] {
        [self.m5, self.m3, self.m2]
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(k * self.h, k * self.m5, k * self.m3, k * self.m2)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.h + o.h, self.m5 + o.m5, self.m3 + o.m3, self.m2 + o.m2)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    /// `h h' - 6 m5 m5' - 10 m3 m3' - 15 m2 m2'`.
    pub fn intersect(&self, o: &Self) -> i64 {
        self.h * o.h - 6 * self.m5 * o.m5 - 10 * self.m3 * o.m3 - 15 * self.m2 * o.m2
    }

    pub fn self_intersection(&self) -> i64 {
        self.intersect(self)
    }

    /// Expected dimension plus one of the linear series.
    pub fn euler_char(&self) -> Result<i128> {
        if self.mults().iter().any(|&m| m < 0) {
            return Err(Error::Parse(format!("negative multiplicity in {self}")));
        }
        let c2 = |n: i64| -> i128 {
            let n = n as i128;
            n * (n - 1) / 2
        };
        Ok(c2(self.h + 2) - 6 * c2(self.m5 + 1) - 10 * c2(self.m3 + 1) - 15 * c2(self.m2 + 1))
    }
}

/// Named classes.
pub const H: DivisorClass = DivisorClass::new(1, 0, 0, 0);
pub const A: DivisorClass = DivisorClass::new(15, 5, 3, 2);
pub const B: DivisorClass = DivisorClass::new(6, 0, 0, 2);
pub const C: DivisorClass = DivisorClass::new(30, 2, 6, 6);
pub const D: DivisorClass = DivisorClass::new(40, 5, 7, 8);

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = String::new();
        let mut term = |c: i64, name: &str, first: bool| {
            if c == 0 {
                return;
            }
            let sign = if c < 0 { "-" } else if first || parts.is_empty() { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                parts.push_str(&format!("{sign}{name}"));
            } else {
                parts.push_str(&format!("{sign}{mag}{name}"));
            }
        };
        term(self.h, "H", true);
        term(-self.m5, "E5", false);
        term(-self.m3, "E3", false);
        term(-self.m2, "E2", false);
        if parts.is_empty() {
            parts.push('0');
        }
        f.write_str(&parts)
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    /// Integer combinations of `H, E5, E3, E2` in any order, such as
    /// `40H-5E5-7E3-8E2`; each symbol at most once.
    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse("empty class".into()));
        }
        if text == "0" {
            return Ok(Self::default());
        }
        let bytes = text.as_bytes();
        let mut seen = [false; 4];
        let mut coeffs = [0i64; 4];
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(Error::Parse(format!("expected '+' or '-' at offset {i} in {s:?}")));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mag: i64 = if start == i {
                1
            } else {
                text[start..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("coefficient out of range in {s:?}")))?
            };
            let rest = &text[i..];
            let (slot, len) = if rest.starts_with("E5") {
                (1, 2)
            } else if rest.starts_with("E3") {
                (2, 2)
            } else if rest.starts_with("E2") {
                (3, 2)
            } else if rest.starts_with('H') {
                (0, 1)
            } else {
                return Err(Error::Parse(format!("expected H, E5, E3 or E2 at offset {i} in {s:?}")));
            };
            if seen[slot] {
                return Err(Error::Parse(format!("repeated symbol in {s:?}")));
            }
            seen[slot] = true;
            coeffs[slot] = sign * mag;
            i += len;
        }
        Ok(DivisorClass::new(coeffs[0], -coeffs[1], -coeffs[2], -coeffs[3]))
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<De: Deserializer<'de>>(d: De) -> std::result::Result<Self, De::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A concrete invariant form backing an effectivity claim, as verified by
/// the invariants module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivityWitness {
    pub label: String,
    pub form: String,
    pub degree: u32,
    /// Multiplicity at the quintuple, triple and double points (constant on
    /// each orbit).
    pub multiplicities: [u32; 3],
    /// Reason the curve is G-irreducible, if established.
    pub g_irreducible: Option<String>,
}

impl EffectivityWitness {
    pub fn class(&self) -> DivisorClass {
        let [m5, m3, m2] = self.multiplicities.map(|m| m as i64);
        DivisorClass::new(self.degree as i64, m5, m3, m2)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NefCertificate {
    pub target: DivisorClass,
    /// Components with positive rational weights summing to `target`.
    #[serde(with = "weights_as_text")]
    pub components: Vec<(DivisorClass, BigRational)>,
    /// One witness per component, in the same order.
    pub evidence: Vec<EffectivityWitness>,
}

impl NefCertificate {
    /// `6D = 4A + 5B + 5C`.
    pub fn for_d(a: EffectivityWitness, b: EffectivityWitness, c: EffectivityWitness) -> Self {
        NefCertificate {
            target: D,
            components: vec![(A, ratio(2, 3)), (B, ratio(5, 6)), (C, ratio(5, 6))],
            evidence: vec![a, b, c],
        }
    }

    pub fn trivial(h: i64) -> Self {
        NefCertificate { target: H.scale(h), components: Vec::new(), evidence: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.target;
        if self.components.is_empty() {
            return if t.mults() == [0, 0, 0] && t.h >= 0 {
                Ok(())
            } else {
                Err(Error::InvalidCertificate(format!("{t} needs components")))
            };
        }
        if self.evidence.len() != self.components.len() {
            return Err(Error::InvalidCertificate("one witness per component required".into()));
        }
        let mut sum = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        for ((cls, w), ev) in self.components.iter().zip(&self.evidence) {
            if !w.is_positive() {
                return Err(Error::InvalidCertificate(format!("weight {w} is not positive")));
            }
            if ev.class() != *cls {
                return Err(Error::InvalidCertificate(format!(
                    "witness {} has class {}, component is {cls}",
                    ev.label,
                    ev.class()
                )));
            }
            if ev.g_irreducible.is_none() {
                return Err(Error::InvalidCertificate(format!("{} lacks a G-irreducibility witness", ev.label)));
            }
            if t.intersect(cls) < 0 {
                return Err(Error::InvalidCertificate(format!("{t} meets {cls} negatively")));
            }
            for (acc, v) in sum.iter_mut().zip([cls.h, cls.m5, cls.m3, cls.m2]) {
                *acc += w * BigRational::from_integer(BigInt::from(v));
            }
        }
        let want = [t.h, t.m5, t.m3, t.m2].map(|v| BigRational::from_integer(BigInt::from(v)));
        if sum != want {
            return Err(Error::InvalidCertificate(format!("components do not sum to {t}")));
        }
        Ok(())
    }
}

mod weights_as_text {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[(DivisorClass, BigRational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: Vec<(DivisorClass, String)> = v.iter().map(|(c, w)| (*c, w.to_string())).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(DivisorClass, BigRational)>, D::Error> {
        let text: Vec<(DivisorClass, String)> = Vec::deserialize(d)?;
        text.into_iter()
            .map(|(c, w)| w.parse::<BigRational>().map(|w| (c, w)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// The lower bound on the Waldschmidt constant of all 31 points forced by a
/// nef class: an effective `F = beta H - E5 - E3 - E2` must satisfy
/// `F . target >= 0`.
pub fn nef_lower_bound(cert: &NefCertificate) -> Result<BigRational> {
    cert.validate()?;
    let t = &cert.target;
    if t.h <= 0 {
        return Err(Error::InvalidCertificate("target must have positive degree".into()));
    }
    Ok(ratio(6 * t.m5 + 10 * t.m3 + 15 * t.m2, t.h))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DescentCertificate {
    /// `b H - mu E_k` for a single orbit.
    pub class: DivisorClass,
    pub orbit_size: i64,
    pub witness: EffectivityWitness,
}

impl DescentCertificate {
    /// The nonzero multiplicity and the index of its orbit.
    fn support(&self) -> Result<(usize, i64)> {
        let nz: Vec<(usize, i64)> =
            self.class.mults().into_iter().enumerate().filter(|(_, m)| *m != 0).collect();
        match nz.as_slice() {
            [(k, m)] if *m > 0 => Ok((*k, *m)),
            _ => Err(Error::InvalidCertificate(format!("{} is not supported on one orbit", self.class))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (k, mu) = self.support()?;
        if ORBIT_SIZES[k] != self.orbit_size {
            return Err(Error::InvalidCertificate(format!(
                "orbit size {} does not match {}",
                self.orbit_size, ORBIT_SIZES[k]
            )));
        }
        let b = self.class.h;
        if b <= 0 || b * b > mu * mu * self.orbit_size {
            return Err(Error::InvalidCertificate(format!("{} has positive self-intersection", self.class)));
        }
        let w = &self.witness;
        if w.degree as i64 != b || w.multiplicities[k] as i64 != mu {
            return Err(Error::InvalidCertificate(format!(
                "witness {} (degree {}, multiplicity {}) does not realize {}",
                w.label, w.degree, w.multiplicities[k], self.class
            )));
        }
        if w.g_irreducible.is_none() {
            return Err(Error::InvalidCertificate(format!("{} lacks a G-irreducibility witness", w.label)));
        }
        Ok(())
    }
}

/// `b / mu`: an effective `F = d H - m E_k` with `d/m < b/mu` has `F . B < 0`,
/// so it contains the G-irreducible curve of class `B`; `F - B` has the same
/// defect and repeating this drives the degree negative.
pub fn descent_bound(cert: &DescentCertificate) -> Result<BigRational> {
    cert.validate()?;
    let (_, mu) = cert.support()?;
    Ok(ratio(cert.class.h, mu))
}

/// `(55k + 2) / (10k)`: degree over multiplicity of `kD + 2H + kA`.
pub fn sandwich_term(k: i64) -> BigRational {
    ratio(55 * k + 2, 10 * k)
}

/// `kD + 2H`.
pub fn upper_series_class(k: i64) -> DivisorClass {
    D.scale(k).add(&H.scale(2))
}

pub fn verify_decomposition() -> Vec<Claim> {
    let lhs = D.scale(6);
    let rhs = A.scale(4).add(&B.scale(5)).add(&C.scale(5));
    vec![
        Claim::check("picard.decomposition", "6D = 4A + 5B + 5C", lhs == rhs, format!("6D = {lhs}, 4A+5B+5C = {rhs}")),
        Claim::expect_eq("picard.A2", "A^2", A.self_intersection(), -75),
        Claim::check("picard.B2", "B^2 < 0", B.self_intersection() < 0, format!("B^2 = {}", B.self_intersection())),
        Claim::check("picard.C2", "C^2 < 0", C.self_intersection() < 0, format!("C^2 = {}", C.self_intersection())),
        Claim::expect_eq("picard.D2", "D^2", D.self_intersection(), 0),
        Claim::check(
            "picard.D_orthogonal",
            "D.A = D.B = D.C = 0",
            [A, B, C].iter().all(|x| D.intersect(x) == 0),
            format!("D.A = {}, D.B = {}, D.C = {}", D.intersect(&A), D.intersect(&B), D.intersect(&C)),
        ),
    ]
}

/// `chi(kD + 2H) = 6 + 30k` for `k` in `1..=kmax`.
pub fn verify_euler_series(kmax: i64) -> Claim {
    let bad: Vec<i64> = (1..=kmax)
        .filter(|&k| upper_series_class(k).euler_char().ok() != Some(6 + 30 * k as i128))
        .collect();
    Claim::check(
        "picard.euler_series",
        "chi(kD + 2H) = 6 + 30k",
        bad.is_empty(),
        if bad.is_empty() { format!("k = 1..{kmax}") } else { format!("fails at k = {bad:?}") },
    )
}

/// The terms `(55k+2)/(10k)` decrease strictly, exceed 11/2 by exactly
/// `1/(5k)`, and every class `kD + 2H + kA` has multiplicity `10k` everywhere.
pub fn verify_sandwich(kmax: i64) -> Claim {
    let limit = ratio(11, 2);
    let mut ok = true;
    for k in 1..=kmax {
        let t = sandwich_term(k);
        let cls = upper_series_class(k).add(&A.scale(k));
        ok &= &t - &limit == ratio(1, 5 * k)
            && cls == DivisorClass::new(55 * k + 2, 10 * k, 10 * k, 10 * k)
            && (k == 1 || t < sandwich_term(k - 1));
    }
    Claim::check(
        "picard.sandwich",
        "(55k+2)/(10k) decreases to 11/2",
        ok,
        format!("k = 1..{kmax}, first {} last {}", sandwich_term(1), sandwich_term(kmax)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(cls: DivisorClass) -> EffectivityWitness {
        EffectivityWitness {
            label: cls.to_string(),
            form: String::new(),
            degree: cls.h as u32,
            multiplicities: cls.mults().map(|m| m as u32),
            g_irreducible: Some("test".into()),
        }
    }

    #[test]
    fn pairings() {
        assert_eq!(A.intersect(&A), -75);
        assert_eq!(B.self_intersection(), -24);
        // 900 - 4*6 - 36*10 - 36*15
        assert_eq!(C.self_intersection(), -24);
        assert_eq!(D.self_intersection(), 0);
        let f = DivisorClass::new(5, 1, 1, 1);
        assert_eq!(f.intersect(&D), -20);
    }

    #[test]
    fn euler() {
        assert_eq!(DivisorClass::default().euler_char().unwrap(), 1);
        assert_eq!(upper_series_class(1).euler_char().unwrap(), 36);
        assert!(verify_euler_series(10).passed());
        assert!(DivisorClass::new(3, -1, 0, 0).euler_char().is_err());
    }

    #[test]
    fn class_text() {
        let d: DivisorClass = "40H-5E5-7E3-8E2".parse().unwrap();
        assert_eq!(d, D);
        assert_eq!(d.to_string(), "40H-5E5-7E3-8E2");
        assert_eq!("-2E2 + 6H".parse::<DivisorClass>().unwrap(), B);
        assert_eq!("H-E5".parse::<DivisorClass>().unwrap(), DivisorClass::new(1, 1, 0, 0));
        assert_eq!(DivisorClass::new(0, -1, 0, 0).to_string(), "E5");
        assert!("6H-2E2-E2".parse::<DivisorClass>().is_err());
        assert!("6H2E2".parse::<DivisorClass>().is_err());
        assert!("6X".parse::<DivisorClass>().is_err());
        assert!("".parse::<DivisorClass>().is_err());
    }

    #[test]
    fn decomposition_and_sandwich() {
        assert!(verify_decomposition().iter().all(Claim::passed));
        assert!(verify_sandwich(100).passed());
    }

    #[test]
    fn nef_bound() {
        let cert = NefCertificate::for_d(witness(A), witness(B), witness(C));
        assert_eq!(nef_lower_bound(&cert).unwrap(), ratio(11, 2));
        assert_eq!(nef_lower_bound(&NefCertificate::trivial(1)).unwrap(), ratio(0, 1));
        let mut broken = cert.clone();
        broken.evidence[2].g_irreducible = None;
        assert!(nef_lower_bound(&broken).is_err());
        let mut wrong = cert;
        wrong.components[0].1 = ratio(1, 2);
        assert!(nef_lower_bound(&wrong).is_err());
    }

    #[test]
    fn descent_bounds() {
        let cases = [
            (DivisorClass::new(6, 0, 0, 2), 15, ratio(3, 1)),
            (DivisorClass::new(6, 0, 2, 0), 10, ratio(3, 1)),
            (DivisorClass::new(12, 5, 0, 0), 6, ratio(12, 5)),
        ];
        for (cls, s, want) in cases {
            let cert = DescentCertificate { class: cls, orbit_size: s, witness: witness(cls) };
            assert_eq!(descent_bound(&cert).unwrap(), want);
        }
        let positive = DivisorClass::new(7, 0, 2, 0);
        let cert = DescentCertificate { class: positive, orbit_size: 10, witness: witness(positive) };
        assert!(descent_bound(&cert).is_err());
        let mixed = DivisorClass::new(6, 1, 2, 0);
        let cert = DescentCertificate { class: mixed, orbit_size: 10, witness: witness(mixed) };
        assert!(descent_bound(&cert).is_err());
    }
}
