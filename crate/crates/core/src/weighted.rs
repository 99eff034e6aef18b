//! Sparse polynomials in a fixed number of variables, used for forms in the
//! weighted coordinates `(w2, w6, w10)` of the invariant ring and for
//! substitution certificates with auxiliary unknowns.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::FieldElement;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElement>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(e, FieldElement::one())
    }

    pub fn term(exps: Vec<u32>, c: FieldElement) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, FieldElement> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    fn accumulate(&mut self, e: Vec<u32>, c: &FieldElement) {
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.accumulate(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-FieldElement::one()))
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        let mut out = Self::zero(self.nvars);
        if !k.is_zero() {
            for (e, c) in &self.terms {
                out.terms.insert(e.clone(), c * k);
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.accumulate(e, &(c1 * c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, FieldElement::one()), |acc, _| acc.mul(self))
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Self) -> Self {
        let mut powers = vec![Self::constant(self.nvars, FieldElement::one())];
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().expect("nonempty").mul(value);
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            out = out.add(&Self::term(rest, c.clone()).mul(&powers[e[i] as usize]));
        }
        out
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Coefficient of `v_i^k`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, i: usize, k: u32) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut rest = e.clone();
                rest[i] = 0;
                out.terms.insert(rest, c.clone());
            }
        }
        out
    }

    /// Splits into coefficients indexed by the exponents of the `outer`
    /// variables; each coefficient lives in the remaining variables.
    pub fn collect(&self, outer: &[usize]) -> BTreeMap<Vec<u32>, MPoly> {
        let mut out: BTreeMap<Vec<u32>, MPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let key: Vec<u32> = outer.iter().map(|&i| e[i]).collect();
            let mut rest = e.clone();
            for &i in outer {
                rest[i] = 0;
            }
            out.entry(key).or_insert_with(|| Self::zero(self.nvars)).accumulate(rest, c);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Whether all terms have the same weighted degree.
    pub fn weighted_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut degs = self
            .terms
            .keys()
            .map(|e| e.iter().zip(weights).map(|(a, w)| a * w).sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Whether the monomial `x_i` divides every term.
    pub fn divisible_by_var(&self, i: usize) -> bool {
        self.terms.keys().all(|e| e[i] > 0)
    }
}

/// Variable names for display; falls back to `v0, v1, ...`.
pub struct Named<'a>(pub &'a MPoly, pub &'a [&'a str]);

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0;
        if p.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in p.terms.iter().rev().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| {
                    let name = self.1.get(i).map_or_else(|| format!("v{i}"), |s| s.to_string());
                    if d == 1 { name } else { format!("{name}^{d}") }
                })
                .collect();
            if mon.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}", mon.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Outcome of the irreducibility test for a weighted form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// Linear in variable `var` with a constant leading coefficient.
    LinearMonic { var: usize },
    /// Linear in `var` as `a v + b` where `a` is a monomial none of whose
    /// variables divides `b`.
    LinearCoprime { var: usize },
    /// No factor linear in `var`: after substituting the general root,
    /// the listed coefficient is a nonzero constant.
    NoLinearFactor { var: usize, obstruction: Vec<u32>, value: FieldElement },
}

/// Tries the linear-in-one-variable criteria on `g`.
pub fn linear_irreducibility(g: &MPoly) -> Option<IrreducibilityWitness> {
    for var in 0..g.nvars() {
        if g.degree_in(var) != 1 {
            continue;
        }
        let a = g.coefficient_in(var, 1);
        let b = g.coefficient_in(var, 0);
        if b.is_zero() {
            continue;
        }
        if a.is_constant() {
            return Some(IrreducibilityWitness::LinearMonic { var });
        }
        if a.terms().len() == 1 {
            let e = a.terms().keys().next().expect("one term");
            let coprime = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .all(|(i, _)| !b.divisible_by_var(i));
            if coprime {
                return Some(IrreducibilityWitness::LinearCoprime { var });
            }
        }
    }
    None
}

/// Certifies that `g` (a form in `nvars` variables, constant leading
/// coefficient in `var`) has no factor `c v_var + h` with `h` in the span of
/// `candidates`. The candidates receive fresh unknown coefficients appended
/// as extra variables; the coefficient system is inconsistent if some
/// coefficient of the substituted form is a nonzero constant.
pub fn no_linear_factor(
    g: &MPoly,
    var: usize,
    candidates: &[MPoly],
) -> Result<IrreducibilityWitness> {
    let n = g.nvars();
    let lead = g.coefficient_in(var, g.degree_in(var));
    if !lead.is_constant() || lead.is_zero() {
        return Err(Error::InvalidCertificate("leading coefficient is not a constant".into()));
    }
    let total = n + candidates.len();
    let widen = |p: &MPoly| -> MPoly {
        let mut out = MPoly::zero(total);
        for (e, c) in p.terms() {
            let mut e2 = e.clone();
            e2.resize(total, 0);
            out.accumulate(e2, c);
        }
        out
    };
    // a monic linear factor v + h vanishes at v = -h
    let mut root = MPoly::zero(total);
    for (k, cand) in candidates.iter().enumerate() {
        root = root.sub(&widen(cand).mul(&MPoly::var(total, n + k)));
    }
    let substituted = widen(g).substitute(var, &root);
    let outer: Vec<usize> = (0..n).collect();
    for (key, coeff) in substituted.collect(&outer) {
        if coeff.is_constant() {
            let value = coeff.coeff(&vec![0; total]);
            return Ok(IrreducibilityWitness::NoLinearFactor { var, obstruction: key, value });
        }
    }
    Err(Error::Inconclusive("no constant obstruction among the coefficient equations".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_and_substitution() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.coeff(&[1, 1]), fe("2"));
        let q = p.substitute(1, &x.scale(&fe("-1")));
        assert!(q.is_zero());
        assert_eq!(p.weighted_degree(&[1, 1]), Some(2));
        assert_eq!(x.add(&y.pow(2)).weighted_degree(&[1, 1]), None);
    }

    #[test]
    fn linear_criteria() {
        let (a, b, c) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2));
        let monic = c.add(&a.pow(3));
        assert!(matches!(linear_irreducibility(&monic), Some(IrreducibilityWitness::LinearMonic { .. })));
        let coprime = a.mul(&c).add(&b.pow(2));
        assert!(matches!(
            linear_irreducibility(&coprime),
            Some(IrreducibilityWitness::LinearCoprime { .. })
        ));
        let reducible = a.mul(&c).add(&a.mul(&b));
        assert_eq!(linear_irreducibility(&reducible), None);
    }

    #[test]
    fn linear_factor_search() {
        // v^2 - u^2 has the factor v - u
        let (u, v) = (MPoly::var(2, 0), MPoly::var(2, 1));
        let g = v.pow(2).sub(&u.pow(2));
        assert!(no_linear_factor(&g, 1, &[u]).is_err());
        // v^2 + w^2 cannot vanish at v = -s u
        let (u3, v3, w3) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2));
        let g3 = v3.pow(2).add(&w3.pow(2));
        let cert = no_linear_factor(&g3, 1, &[u3]).unwrap();
        assert_eq!(
            cert,
            IrreducibilityWitness::NoLinearFactor { var: 1, obstruction: vec![0, 0, 2], value: fe("1") }
        );
    }
}
