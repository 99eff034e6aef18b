//! Sparse homogeneous polynomials in `x, y, z` over `Q(w)`, and points of
//! the projective plane.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Matrix3;

/// Exponent triple `x^i y^j z^k`.
///
/// The derived order is lexicographic in `(i, j, k)`, which restricted to a
/// fixed degree is graded lex with `x > y > z`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Monomial(pub u32, pub u32, pub u32);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0 + self.1 + self.2
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.0, self.1, self.2]
    }

    pub fn from_exps(e: [u32; 3]) -> Self {
        Monomial(e[0], e[1], e[2])
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0 + o.0, self.1 + o.1, self.2 + o.2)
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0 <= o.0 && self.1 <= o.1 && self.2 <= o.2
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0 - o.0, self.1 - o.1, self.2 - o.2)
    }

    /// All monomials of degree `d`, largest first (`x^d, x^{d-1}y, ...`).
    pub fn all_of_degree(d: u32) -> Vec<Monomial> {
        let mut v = Vec::with_capacity(((d + 1) * (d + 2) / 2) as usize);
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                v.push(Monomial(i, j, d - i - j));
            }
        }
        v
    }

    /// Falling-factorial coefficient of `d^a/dx^a d^b/dy^b d^c/dz^c` on this
    /// monomial, or zero if it is annihilated.
    pub fn derivative_factor(&self, by: &Monomial) -> Option<BigInt> {
        if !by.divides(self) {
            return None;
        }
        let mut acc = BigInt::one();
        for (e, k) in self.exps().into_iter().zip(by.exps()) {
            for t in 0..k {
                acc *= e - t;
            }
        }
        Some(acc)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A point of `P^2` over `Q(w)` with first nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjectivePoint {
    coords: [FieldElement; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self> {
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Verification("zero vector is not a projective point".into()))?
            .inverse()?;
        Ok(ProjectivePoint { coords: coords.map(|c| &c * &lead) })
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Self::new([x.into(), y.into(), z.into()]).expect("nonzero")
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    /// Image under the linear map `v -> M v`.
    pub fn transform(&self, m: &Matrix3) -> Self {
        Self::new(m.apply(&self.coords)).expect("invertible matrix")
    }

    /// Intersection point of two distinct lines given by coefficient vectors.
    pub fn meet(l1: &[FieldElement; 3], l2: &[FieldElement; 3]) -> Result<Self> {
        let c = [
            &(&l1[1] * &l2[2]) - &(&l1[2] * &l2[1]),
            &(&l1[2] * &l2[0]) - &(&l1[0] * &l2[2]),
            &(&l1[0] * &l2[1]) - &(&l1[1] * &l2[0]),
        ];
        Self::new(c)
    }

    /// The linear form `<(x, y, z), p>`.
    pub fn polar_form(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial::linear(self.coords.clone())
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl FromStr for ProjectivePoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [a:b:c], got {s:?}")))?;
        let parts: Vec<&str> = inner.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three coordinates in {s:?}")));
        }
        let c: Vec<FieldElement> = parts.iter().map(|p| p.parse()).collect::<Result<_>>()?;
        Self::new([c[0].clone(), c[1].clone(), c[2].clone()])
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Powers `c^0 ..= c^n` of each coordinate.
struct PowerTable([Vec<FieldElement>; 3]);

impl PowerTable {
    fn new(v: &[FieldElement; 3], n: u32) -> Self {
        PowerTable(std::array::from_fn(|i| {
            let mut pw = Vec::with_capacity(n as usize + 1);
            pw.push(FieldElement::one());
            for k in 0..n as usize {
                let next = &pw[k] * &v[i];
                pw.push(next);
            }
            pw
        }))
    }

    fn monomial(&self, m: &Monomial) -> FieldElement {
        let [i, j, k] = m.exps().map(|e| e as usize);
        let t = &self.0[0][i] * &self.0[1][j];
        &t * &self.0[2][k]
    }
}

/// A homogeneous form of fixed degree with sparse coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    degree: u32,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl HomogeneousPolynomial {
    pub fn zero(degree: u32) -> Self {
        HomogeneousPolynomial { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(Monomial(0, 0, 0), c)
    }

    pub fn monomial(m: Monomial, c: FieldElement) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        HomogeneousPolynomial { degree: m.degree(), terms }
    }

    /// The coordinate function `x` (0), `y` (1) or `z` (2).
    pub fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(Monomial::from_exps(e), FieldElement::one())
    }

    pub fn x() -> Self {
        Self::var(0)
    }
    pub fn y() -> Self {
        Self::var(1)
    }
    pub fn z() -> Self {
        Self::var(2)
    }

    pub fn linear(c: [FieldElement; 3]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in c.into_iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0; 3];
                e[i] = 1;
                terms.insert(Monomial::from_exps(e), c);
            }
        }
        HomogeneousPolynomial { degree: 1, terms }
    }

    /// Builds a form from an exponent table, rejecting mixed degrees.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
        nominal_degree: u32,
    ) -> Result<Self> {
        let mut map: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        for (m, c) in terms {
            *map.entry(m).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut degrees = map.keys().map(|m| m.degree());
        let degree = match degrees.next() {
            None => nominal_degree,
            Some(d) => {
                if degrees.any(|e| e != d) {
                    return Err(Error::NotHomogeneous);
                }
                d
            }
        };
        Ok(HomogeneousPolynomial { degree, terms: map })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Coefficients in the order of [`Monomial::all_of_degree`].
    pub fn coefficient_vector(&self) -> Vec<FieldElement> {
        Monomial::all_of_degree(self.degree).iter().map(|m| self.coeff(m)).collect()
    }

    pub fn from_coefficient_vector(degree: u32, v: &[FieldElement]) -> Self {
        let monos = Monomial::all_of_degree(degree);
        assert_eq!(monos.len(), v.len());
        let terms = monos
            .into_iter()
            .zip(v.iter().cloned())
            .filter(|(_, c)| !c.is_zero())
            .collect();
        HomogeneousPolynomial { degree, terms }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        HomogeneousPolynomial {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        HomogeneousPolynomial {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, -v)).collect(),
        }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        if self.is_zero() && other.degree != self.degree {
            return if sign { other.clone() } else { other.neg() };
        }
        if other.is_zero() {
            return self.clone();
        }
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let e = terms.entry(*m).or_default();
            if sign {
                *e += c;
            } else {
                *e -= c;
            }
            if e.is_zero() {
                terms.remove(m);
            }
        }
        HomogeneousPolynomial { degree: self.degree, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let mut acc: HashMap<Monomial, FieldElement> =
            HashMap::with_capacity(self.terms.len() * other.terms.len().min(64));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                *acc.entry(m1.mul(m2)).or_default() += &(c1 * c2);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        HomogeneousPolynomial { degree, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(FieldElement::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a HomogeneousPolynomial>) -> Self {
        factors
            .into_iter()
            .fold(Self::constant(FieldElement::one()), |acc, f| acc.mul(f))
    }

    pub fn evaluate_vec(&self, v: &[FieldElement; 3]) -> FieldElement {
        let table = PowerTable::new(v, self.degree);
        self.terms.iter().map(|(m, c)| c * &table.monomial(m)).sum()
    }

    /// Value at the canonical representative of `p`.
    pub fn evaluate(&self, p: &ProjectivePoint) -> FieldElement {
        self.evaluate_vec(p.coords())
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut e = [0; 3];
        e[var] = 1;
        self.partial(&Monomial::from_exps(e))
    }

    /// Mixed partial derivative indexed by a multi-index.
    pub fn partial(&self, by: &Monomial) -> Self {
        let degree = self.degree.saturating_sub(by.degree());
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                m.derivative_factor(by).map(|k| (m.div(by), c.scale_int(&k)))
            })
            .collect();
        HomogeneousPolynomial { degree, terms }
    }

    /// Values at `p` of every partial derivative of order exactly `k`.
    pub fn partials_at(&self, p: &ProjectivePoint, k: u32) -> Vec<FieldElement> {
        if k > self.degree {
            return vec![FieldElement::zero(); Monomial::all_of_degree(k).len()];
        }
        let table = PowerTable::new(p.coords(), self.degree - k);
        Monomial::all_of_degree(k)
            .iter()
            .map(|by| {
                self.terms
                    .iter()
                    .filter_map(|(m, c)| {
                        m.derivative_factor(by)
                            .map(|f| &c.scale_int(&f) * &table.monomial(&m.div(by)))
                    })
                    .sum()
            })
            .collect()
    }

    /// True when every partial derivative of order `k` vanishes at `p`.
    pub fn partials_vanish(&self, p: &ProjectivePoint, k: u32) -> bool {
        self.partials_at(p, k).iter().all(|v| v.is_zero())
    }

    /// Order of vanishing at `p`: the largest `m` such that all partials of
    /// order `< m` vanish there.
    pub fn multiplicity_at(&self, p: &ProjectivePoint) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::InfiniteMultiplicity);
        }
        for k in 0..=self.degree {
            if !self.partials_vanish(p, k) {
                return Ok(k);
            }
        }
        unreachable!("a nonzero form of degree d has a nonzero partial of order d")
    }

    /// `multiplicity_at(p) >= m`, checking only the order `m - 1` partials
    /// (Euler's identity gives the lower orders).
    pub fn has_multiplicity_at_least(&self, p: &ProjectivePoint, m: u32) -> bool {
        if m == 0 {
            return true;
        }
        if self.is_zero() {
            return true;
        }
        if m - 1 > self.degree {
            return false;
        }
        self.partials_vanish(p, m - 1)
    }

    /// Substitution `f(v) -> f(M v)`; satisfies `act(act(f, g), h) = act(f, g h)`.
    pub fn act(&self, g: &Matrix3) -> Self {
        let forms: [HomogeneousPolynomial; 3] =
            std::array::from_fn(|i| Self::linear(g.row(i).clone()));
        let d = self.degree as usize;
        let mut pows: [Vec<HomogeneousPolynomial>; 3] = std::array::from_fn(|_| Vec::new());
        for (i, l) in forms.iter().enumerate() {
            let mut p = vec![Self::constant(FieldElement::one())];
            for k in 0..d {
                let next = p[k].mul(l);
                p.push(next);
            }
            pows[i] = p;
        }
        let mut by_x: BTreeMap<u32, HomogeneousPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let yz = pows[1][m.1 as usize].mul(&pows[2][m.2 as usize]).scale(c);
            let slot = by_x
                .entry(m.0)
                .or_insert_with(|| Self::zero(m.1 + m.2));
            *slot = slot.add(&yz);
        }
        let mut out = Self::zero(self.degree);
        for (i, inner) in by_x {
            out = out.add(&pows[0][i as usize].mul(&inner));
        }
        out
    }

    /// Exact quotient `f / g`, or [`Error::NotDivisible`].
    pub fn divide_exact(&self, g: &Self) -> Result<Self> {
        let (lm_g, lc_g) = g.leading_term().ok_or(Error::DivisionByZero)?;
        if self.degree < g.degree && !self.is_zero() {
            return Err(Error::NotDivisible);
        }
        let qdeg = self.degree.saturating_sub(g.degree);
        let inv_lc = lc_g.inverse()?;
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Monomial, FieldElement> = BTreeMap::new();
        while let Some((lm_r, lc_r)) = rem.iter().next_back() {
            if !lm_g.divides(lm_r) {
                return Err(Error::NotDivisible);
            }
            let qm = lm_r.div(lm_g);
            let qc = lc_r * &inv_lc;
            for (m, c) in &g.terms {
                let key = m.mul(&qm);
                let e = rem.entry(key).or_default();
                *e -= &(c * &qc);
                if e.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qm, qc);
        }
        Ok(HomogeneousPolynomial { degree: qdeg, terms: quot })
    }

    /// Returns `c` with `self = c * other`, if one exists.
    pub fn proportionality(&self, other: &Self) -> Option<FieldElement> {
        if self.degree != other.degree || self.terms.len() != other.terms.len() {
            return None;
        }
        let (m, c_other) = other.leading_term()?;
        let c = self.terms.get(m)?.checked_div(c_other).ok()?;
        if self.sub(&other.scale(&c)).is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// The same form divided by its leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inverse().expect("nonzero")),
            None => self.clone(),
        }
    }
}

/// Determinant of the 3x3 matrix of first partials of `f1, f2, f3`.
pub fn jacobian_det(
    f1: &HomogeneousPolynomial,
    f2: &HomogeneousPolynomial,
    f3: &HomogeneousPolynomial,
) -> HomogeneousPolynomial {
    let d: Vec<[HomogeneousPolynomial; 3]> = [f1, f2, f3]
        .iter()
        .map(|f| std::array::from_fn(|v| f.derivative(v)))
        .collect();
    let degree = (f1.degree() + f2.degree() + f3.degree()).saturating_sub(3);
    let minor = |a: &HomogeneousPolynomial,
                 b: &HomogeneousPolynomial,
                 c: &HomogeneousPolynomial,
                 e: &HomogeneousPolynomial| a.mul(b).sub(&c.mul(e));
    let t0 = d[0][0].mul(&minor(&d[1][1], &d[2][2], &d[1][2], &d[2][1]));
    let t1 = d[0][1].mul(&minor(&d[1][0], &d[2][2], &d[1][2], &d[2][0]));
    let t2 = d[0][2].mul(&minor(&d[1][0], &d[2][1], &d[1][1], &d[2][0]));
    let out = t0.sub(&t1).add(&t2);
    if out.is_zero() {
        HomogeneousPolynomial::zero(degree)
    } else {
        out
    }
}

impl fmt::Display for HomogeneousPolynomial {
    /// Terms in descending graded-lex order, e.g. `x^2 + (1+w)*x*y - 1/2*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(m.exps())
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect();
            let mono = mono.join("*");
            let cs = c.to_string();
            let compound = !c.a().is_zero() && !c.b().is_zero();
            let term = if mono.is_empty() {
                if compound { format!("({cs})") } else { cs }
            } else if c.is_one() {
                mono
            } else if *c == -FieldElement::one() {
                format!("-{mono}")
            } else if compound {
                format!("({cs})*{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            if first {
                write!(f, "{term}")?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousPolynomial(deg {}: {})", self.degree, self)
    }
}

impl FromStr for HomogeneousPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let terms = crate::text::parse_polynomial(s)?;
        Self::from_terms(terms, 0)
    }
}

impl Serialize for HomogeneousPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HomogeneousPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(s: &str) -> HomogeneousPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        for s in [
            "x^2 + (1+w)*x*y - 1/2*z^2",
            "-x*y*z + 2*w*z^3",
            "x",
            "-3/4",
            "(-1/2+w)*x^4*y^2 - w*y*z^5",
        ] {
            assert_eq!(poly(s).to_string(), s);
        }
        assert!(matches!("x + y^2".parse::<HomogeneousPolynomial>(), Err(Error::NotHomogeneous)));
        assert!(matches!("x +".parse::<HomogeneousPolynomial>(), Err(Error::Parse(_))));
    }

    #[test]
    fn evaluation_and_partials() {
        let f = poly("x^2 + y^2 + z^2");
        assert_eq!(f.evaluate(&ProjectivePoint::from_ints(0, 0, 1)), FieldElement::one());
        assert_eq!(f.derivative(0), poly("2*x"));
        let node = poly("x*y");
        assert_eq!(node.multiplicity_at(&ProjectivePoint::from_ints(0, 0, 1)).unwrap(), 2);
        assert_eq!(node.multiplicity_at(&ProjectivePoint::from_ints(1, 1, 1)).unwrap(), 0);
        assert!(matches!(
            HomogeneousPolynomial::zero(3).multiplicity_at(&ProjectivePoint::from_ints(1, 0, 0)),
            Err(Error::InfiniteMultiplicity)
        ));
    }

    #[test]
    fn exact_division() {
        assert_eq!(poly("x^2 - y^2").divide_exact(&poly("x - y")).unwrap(), poly("x + y"));
        assert!(matches!(
            poly("x^2 + y^2 + z^2").divide_exact(&poly("x")),
            Err(Error::NotDivisible)
        ));
        assert!(matches!(
            poly("x").divide_exact(&HomogeneousPolynomial::zero(1)),
            Err(Error::DivisionByZero)
        ));
        let f = poly("(1+w)*x^3 - y*z^2 + 2*x*y*z");
        let g = poly("w*x - 1/3*z");
        assert_eq!(f.mul(&g).divide_exact(&g).unwrap(), f);
    }

    #[test]
    fn jacobian_examples() {
        let one = jacobian_det(&poly("x"), &poly("y"), &poly("z"));
        assert_eq!(one, HomogeneousPolynomial::constant(FieldElement::one()));
        assert_eq!(one.degree(), 0);
        let q = poly("x^2 + y^2 + z^2");
        assert!(jacobian_det(&q, &q, &poly("x*y*z")).is_zero());
    }

    #[test]
    fn action_examples() {
        let x = HomogeneousPolynomial::x();
        assert_eq!(x.act(&Matrix3::diag(-1, 1, 1)), x.neg());
        let f = poly("x^2*y + w*z^3");
        assert_eq!(f.act(&Matrix3::identity()), f);
    }

    #[test]
    fn projective_point_canonical() {
        let p = ProjectivePoint::new(["0".parse().unwrap(), "2*w".parse().unwrap(), "2".parse().unwrap()])
            .unwrap();
        assert_eq!(p.to_string(), "[0:1:-1+w]");
        assert_eq!(p.to_string().parse::<ProjectivePoint>().unwrap(), p);
        let l1 = [FieldElement::one(), FieldElement::zero(), FieldElement::zero()];
        let l2 = [FieldElement::zero(), FieldElement::one(), FieldElement::zero()];
        assert_eq!(ProjectivePoint::meet(&l1, &l2).unwrap(), ProjectivePoint::from_ints(0, 0, 1));
    }

    fn arb_coeff() -> impl Strategy<Value = FieldElement> {
        (-4i64..5, -3i64..4).prop_map(|(a, b)| FieldElement::from_ints(a, b))
    }

    fn arb_form(d: u32) -> impl Strategy<Value = HomogeneousPolynomial> {
        let n = Monomial::all_of_degree(d).len();
        proptest::collection::vec(arb_coeff(), n)
            .prop_map(move |v| HomogeneousPolynomial::from_coefficient_vector(d, &v))
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix3> {
        proptest::collection::vec(arb_coeff(), 9).prop_map(|v| {
            Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j].clone())))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn euler_identity(f in (1u32..6).prop_flat_map(arb_form)) {
            let lhs = (0..3).fold(HomogeneousPolynomial::zero(f.degree()), |acc, v| {
                acc.add(&HomogeneousPolynomial::var(v).mul(&f.derivative(v)))
            });
            prop_assert_eq!(lhs, f.scale(&FieldElement::integer(f.degree() as i64)));
        }

        #[test]
        fn action_composes(f in arb_form(3), g in arb_matrix(), h in arb_matrix()) {
            prop_assert_eq!(f.act(&g).act(&h), f.act(&(&g * &h)));
        }

        #[test]
        fn multiplicity_is_additive(
            f in arb_form(2), g in arb_form(3),
            p in (-3i64..4, -3i64..4, 1i64..3),
        ) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let pt = ProjectivePoint::from_ints(p.0, p.1, p.2);
            let lhs = f.mul(&g).multiplicity_at(&pt).unwrap();
            prop_assert_eq!(lhs, f.multiplicity_at(&pt).unwrap() + g.multiplicity_at(&pt).unwrap());
        }

        #[test]
        fn jacobian_alternates(a in arb_form(2), b in arb_form(2), c in arb_form(1)) {
            prop_assert_eq!(jacobian_det(&a, &b, &c), jacobian_det(&b, &a, &c).neg());
            let two_a = a.scale(&FieldElement::integer(2));
            prop_assert_eq!(jacobian_det(&two_a, &b, &c), jacobian_det(&a, &b, &c).scale(&FieldElement::integer(2)));
        }

        #[test]
        fn text_round_trip(f in (0u32..4).prop_flat_map(arb_form)) {
            let back: HomogeneousPolynomial = f.to_string().parse().unwrap();
            if !f.is_zero() {
                prop_assert_eq!(back, f);
            }
        }
    }
}
