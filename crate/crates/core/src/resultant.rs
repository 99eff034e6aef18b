//! Intersection counts of plane curves through Sylvester resultants.

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::field::{inv_mod, mul_mod, pow_mod, valid_primes, ModularImage, RECONSTRUCTION_PRIME_START};
use crate::linalg::{bareiss_det, det_mod};
use crate::matrix::Matrix3;
use crate::poly::{HomogeneousPolynomial, Monomial};

/// Dense univariate polynomial, coefficients from low to high degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<FieldElement>);

impl UniPoly {
    fn trimmed(mut v: Vec<FieldElement>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        UniPoly(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Self {
        Self::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &FieldElement::integer(i as i64))
                .collect(),
        )
    }

    fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inverse().expect("nonzero");
                UniPoly(self.0.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.0[dd].inverse().expect("nonzero");
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = &r[k] * &inv;
            if !q.is_zero() {
                for (i, c) in d.0.iter().enumerate() {
                    r[k - dd + i] -= &(c * &q);
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        Self::trimmed(r)
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = std::mem::replace(&mut b, r);
        }
        a
    }

    /// Number of distinct roots over an algebraic closure.
    pub fn distinct_root_count(&self) -> usize {
        let Some(d) = self.degree() else { return 0 };
        if d == 0 {
            return 0;
        }
        let g = self.gcd(&self.derivative());
        d - g.degree().unwrap_or(0)
    }

    /// Newton interpolation through `(t_i, v_i)` with distinct integer nodes.
    pub fn interpolate(nodes: &[i64], values: &[FieldElement]) -> UniPoly {
        let n = nodes.len();
        let mut coef: Vec<FieldElement> = values.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &coef[i] - &coef[i - 1];
                let den = FieldElement::integer(nodes[i] - nodes[i - j]);
                coef[i] = num.checked_div(&den).expect("distinct nodes");
            }
        }
        // expand Newton form from the innermost factor outwards
        let mut acc = vec![coef[n - 1].clone()];
        for i in (0..n - 1).rev() {
            let mut next = vec![FieldElement::zero(); acc.len() + 1];
            let shift = FieldElement::integer(-nodes[i]);
            for (k, c) in acc.iter().enumerate() {
                next[k + 1] += c;
                next[k] += &(c * &shift);
            }
            next[0] += &coef[i];
            acc = next;
        }
        Self::trimmed(acc)
    }
}

/// Coefficients of `f(t, 1, z)` as a polynomial in `z`, low to high.
fn z_coefficients(f: &HomogeneousPolynomial, t: &FieldElement) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::zero(); f.degree() as usize + 1];
    for (m, c) in f.terms() {
        out[m.2 as usize] += &(c * &t.pow(m.0));
    }
    out
}

fn sylvester(a: &[FieldElement], b: &[FieldElement]) -> Vec<Vec<FieldElement>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![FieldElement::zero(); size];
        for (i, c) in a.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![FieldElement::zero(); size];
        for (i, c) in b.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// `Res_z(f, g)` dehomogenized at `y = 1`, as a polynomial in `t = x/y`.
/// Requires `f(0,0,1)` and `g(0,0,1)` nonzero.
pub fn resultant_in_z(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial) -> UniPoly {
    let total = (f.degree() * g.degree()) as i64;
    let nodes: Vec<i64> = (0..=total).collect();
    let values: Vec<FieldElement> = nodes
        .iter()
        .map(|&t| {
            let t = FieldElement::integer(t);
            bareiss_det(&sylvester(&z_coefficients(f, &t), &z_coefficients(g, &t)))
        })
        .collect();
    UniPoly::interpolate(&nodes, &values)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionCount {
    pub distinct_points: usize,
    pub total_multiplicity: usize,
}

fn random_transform(rng: &mut StdRng) -> Matrix3 {
    loop {
        let m = Matrix3(std::array::from_fn(|_| {
            std::array::from_fn(|_| FieldElement::integer(rng.gen_range(-60..=60)))
        }));
        if !m.det().is_zero() {
            return m;
        }
    }
}

/// Coefficients of `f(t, 1, z)` in `z` modulo `img`, for a fixed `t`.
fn z_coefficients_mod(f: &[(Monomial, u64)], degree: u32, t: u64, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; degree as usize + 1];
    for (m, c) in f {
        let v = mul_mod(*c, pow_mod(t, m.0 as u64, p), p);
        out[m.2 as usize] = (out[m.2 as usize] + v) % p;
    }
    out
}

fn sylvester_mod(a: &[u64], b: &[u64]) -> Vec<Vec<u64>> {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let mut rows = Vec::with_capacity(m + n);
    for (coeffs, count) in [(a, n), (b, m)] {
        for shift in 0..count {
            let mut row = vec![0u64; m + n];
            for (i, c) in coeffs.iter().rev().enumerate() {
                row[shift + i] = *c;
            }
            rows.push(row);
        }
    }
    rows
}

fn trim_mod(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Newton interpolation over `F_p` through `(i, v_i)`, `i = 0..n`.
fn interpolate_mod(values: &[u64], p: u64) -> Vec<u64> {
    let n = values.len();
    let mut coef = values.to_vec();
    for j in 1..n {
        let inv = inv_mod(j as u64 % p, p).expect("p exceeds the node count");
        for i in (j..n).rev() {
            coef[i] = mul_mod((coef[i] + p - coef[i - 1]) % p, inv, p);
        }
    }
    let mut acc = vec![coef[n - 1]];
    for i in (0..n - 1).rev() {
        let mut next = vec![0u64; acc.len() + 1];
        let shift = (p - i as u64 % p) % p;
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + mul_mod(*c, shift, p)) % p;
        }
        next[0] = (next[0] + coef[i]) % p;
        acc = next;
    }
    trim_mod(acc)
}

fn rem_mod(a: &[u64], d: &[u64], p: u64) -> Vec<u64> {
    let dd = d.len() - 1;
    let inv = inv_mod(d[dd], p).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    while r.len() > dd {
        let k = r.len() - 1;
        let q = mul_mod(r[k], inv, p);
        for (i, c) in d.iter().enumerate() {
            r[k - dd + i] = (r[k - dd + i] + p - mul_mod(*c, q, p)) % p;
        }
        r.pop();
        r = trim_mod(r);
    }
    trim_mod(r)
}

fn gcd_degree_mod(a: &[u64], b: &[u64], p: u64) -> usize {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    a.len().saturating_sub(1)
}

enum ModCount {
    CommonFactor,
    /// The resultant lost degree, possibly through a point on `y = 0`.
    Dropped,
    Distinct(usize),
}

/// Distinct roots of `Res_z(f, g)(t)` modulo `img`; never more than over
/// `Q(w)` when the degree is preserved.
fn count_mod(f: &HomogeneousPolynomial, g: &HomogeneousPolynomial, img: &ModularImage) -> Result<ModCount> {
    let p = img.p;
    let total = (f.degree() * g.degree()) as usize;
    let reduce = |h: &HomogeneousPolynomial| -> Result<Vec<(Monomial, u64)>> {
        h.terms().iter().map(|(m, c)| Ok((*m, img.reduce(c)?))).collect()
    };
    let (fr, gr) = (reduce(f)?, reduce(g)?);
    let values: Vec<u64> = (0..=total as u64)
        .map(|t| {
            let a = z_coefficients_mod(&fr, f.degree(), t, p);
            let b = z_coefficients_mod(&gr, g.degree(), t, p);
            det_mod(sylvester_mod(&a, &b), p)
        })
        .collect();
    let r = interpolate_mod(&values, p);
    if r.is_empty() {
        return Ok(ModCount::CommonFactor);
    }
    if r.len() - 1 < total {
        return Ok(ModCount::Dropped);
    }
    let dr: Vec<u64> = trim_mod(r.iter().enumerate().skip(1).map(|(i, c)| mul_mod(*c, i as u64 % p, p)).collect());
    Ok(ModCount::Distinct(total - gcd_degree_mod(&r, &dr, p)))
}

const COUNT_PRIMES: usize = 2;
const MAX_PROJECTIONS: usize = 12;

/// Number of distinct intersection points of `f = 0` and `g = 0`, and the
/// total intersection multiplicity.
///
/// After a random change of coordinates, the distinct roots of the resultant
/// in `z` are counted modulo large primes. Projection and reduction can only
/// merge points, so each count is a lower bound; the maximum over three
/// projections and two primes is kept.
pub fn intersection_count(
    f: &HomogeneousPolynomial,
    g: &HomogeneousPolynomial,
) -> Result<IntersectionCount> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::CommonFactor);
    }
    let total = (f.degree() * g.degree()) as usize;
    let mut rng = StdRng::seed_from_u64(0x1c05a);
    let e3 = [FieldElement::zero(), FieldElement::zero(), FieldElement::one()];
    let imgs: Vec<ModularImage> = valid_primes(RECONSTRUCTION_PRIME_START)
        .take(COUNT_PRIMES)
        .map(|p| ModularImage::new(p).expect("valid prime"))
        .collect();
    let mut best: Option<usize> = None;
    let (mut counted, mut all_zero) = (0, true);
    for _ in 0..MAX_PROJECTIONS {
        if counted == 3 {
            break;
        }
        let t = random_transform(&mut rng);
        let (ft, gt) = (f.act(&t), g.act(&t));
        if ft.evaluate_vec(&e3).is_zero() || gt.evaluate_vec(&e3).is_zero() {
            continue;
        }
        let mut any = false;
        for img in &imgs {
            match count_mod(&ft, &gt, img)? {
                ModCount::CommonFactor => {}
                ModCount::Dropped => all_zero = false,
                ModCount::Distinct(n) => {
                    all_zero = false;
                    any = true;
                    best = Some(best.map_or(n, |b| b.max(n)));
                }
            }
        }
        counted += usize::from(any);
    }
    match best {
        Some(n) => Ok(IntersectionCount { distinct_points: n, total_multiplicity: total }),
        None if all_zero => Err(Error::CommonFactor),
        None => Err(Error::Inconclusive("every projection lost degree".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str) -> HomogeneousPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly(vec!["1".parse().unwrap(), "w".parse().unwrap(), "-1/2".parse().unwrap()]);
        let nodes = [0i64, 1, 2, 5];
        let vals: Vec<FieldElement> = nodes
            .iter()
            .map(|&t| {
                let t = FieldElement::integer(t);
                p.0.iter().enumerate().map(|(i, c)| c * &t.pow(i as u32)).sum()
            })
            .collect();
        assert_eq!(UniPoly::interpolate(&nodes, &vals), p);
    }

    #[test]
    fn conic_and_line() {
        let c = intersection_count(&poly("x^2 + y^2 - z^2"), &poly("x")).unwrap();
        assert_eq!(c, IntersectionCount { distinct_points: 2, total_multiplicity: 2 });
        let tangent = intersection_count(&poly("x^2 + y^2 - z^2"), &poly("x - z")).unwrap();
        assert_eq!(tangent, IntersectionCount { distinct_points: 1, total_multiplicity: 2 });
    }

    #[test]
    fn common_factor_detected() {
        let r = intersection_count(&poly("x*y"), &poly("x*z"));
        assert!(matches!(r, Err(Error::CommonFactor)));
    }

    #[test]
    fn modular_count_matches_exact_resultant() {
        let f = poly("x^2 + y^2 - z^2");
        let g = poly("x^2 - 2*y^2 + z^2");
        // the four points share x/y in pairs, so this projection sees two
        assert_eq!(resultant_in_z(&f, &g).distinct_root_count(), 2);
        let c = intersection_count(&f, &g).unwrap();
        assert_eq!(c, IntersectionCount { distinct_points: 4, total_multiplicity: 4 });
        let bitangent = intersection_count(&f, &poly("(x - z)*(x + z)")).unwrap();
        assert_eq!(bitangent, IntersectionCount { distinct_points: 2, total_multiplicity: 4 });
    }

    #[test]
    fn two_triangles() {
        // xyz and (x+y+z)(x-y)(y-2z): [0:0:1] and [1:0:0] are each hit twice
        let f = poly("x*y*z");
        let g = poly("x + y + z").mul(&poly("x - y")).mul(&poly("y - 2*z"));
        let c = intersection_count(&f, &g).unwrap();
        assert_eq!(c.total_multiplicity, 9);
        assert_eq!(c.distinct_points, 7);
    }
}
