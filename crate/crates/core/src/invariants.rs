//! Invariant forms of the group: the generators `phi2, phi6, phi10, phi15`,
//! expansions in the invariant basis, invariant subspaces with prescribed
//! vanishing, the quotient map to `P(2,6,10)`, and the degree-30 invariant
//! `psi30` together with its irreducibility certificate.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, PointClass};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::Group;
use crate::linalg::{kernel_exact, rank_exact, solve_exact};
use crate::picard::EffectivityWitness;
use crate::poly::{jacobian_det, HomogeneousPolynomial, ProjectivePoint};
use crate::report::Claim;
use crate::resultant::{intersection_count, IntersectionCount};
use crate::weighted::{linear_irreducibility, no_linear_factor, IrreducibilityWitness, MPoly, Named};

pub const PHI2_TEXT: &str = "x^2 + y^2 + z^2";

pub const PHI6_TEXT: &str = "x^4*y^2 + y^4*z^2 + x^2*z^4 + 4*w*x^2*y^2*z^2 \
    - (w+1)*(x^2*y^4 + y^2*z^4 + x^4*z^2)";

pub const PHI10_TEXT: &str = "x^8*y^2 + x^2*z^8 + y^8*z^2 \
    + (3*w-5)*(x^2*y^8 + x^8*z^2 + y^2*z^8) \
    + (3*w-7)*(x^6*y^4 + x^4*z^6 + y^6*z^4) \
    - (6*w-11)*(x^4*y^6 + x^6*z^4 + y^4*z^6) \
    - (30*w-40)*(x^6*y^2*z^2 + x^2*y^6*z^2 + x^2*y^2*z^6) \
    + (45*w-60)*(x^2*y^4*z^4 + x^4*y^2*z^4 + x^4*y^4*z^2)";

fn fe(s: &str) -> FieldElement {
    s.parse().expect("literal")
}

/// The monomial `phi2^a phi6^b phi10^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InvariantBasisElement {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl InvariantBasisElement {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        InvariantBasisElement { a, b, c }
    }

    pub fn weighted_degree(&self) -> u32 {
        2 * self.a + 6 * self.b + 10 * self.c
    }

    /// All monomials of weighted degree `d`, ordered by `(c, b)` descending.
    pub fn enumerate(d: u32) -> Vec<Self> {
        let mut out = Vec::new();
        if !d.is_multiple_of(2) {
            return out;
        }
        for c in (0..=d / 10).rev() {
            for b in (0..=(d - 10 * c) / 6).rev() {
                let rest = d - 10 * c - 6 * b;
                out.push(Self::new(rest / 2, b, c));
            }
        }
        out
    }

    pub fn evaluate(&self, v: &[FieldElement; 3]) -> FieldElement {
        &(&v[0].pow(self.a) * &v[1].pow(self.b)) * &v[2].pow(self.c)
    }

    pub fn polynomial(&self, gens: &[HomogeneousPolynomial; 3]) -> HomogeneousPolynomial {
        gens[0].pow(self.a).mul(&gens[1].pow(self.b)).mul(&gens[2].pow(self.c))
    }

    pub fn weighted(&self) -> MPoly {
        MPoly::term(vec![self.a, self.b, self.c], FieldElement::one())
    }
}

impl fmt::Display for InvariantBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [("phi2", self.a), ("phi6", self.b), ("phi10", self.c)]
            .iter()
            .filter(|(_, e)| *e > 0)
            .map(|(n, e)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Outcome of checking a displayed formula against its reconstruction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranscriptionCheck {
    pub name: String,
    pub invariant: bool,
    /// `c` with `transcribed = c * reconstruction`, when it exists.
    pub ratio: Option<FieldElement>,
    pub used_reconstruction: bool,
    pub diff: Option<String>,
}

#[derive(Clone, Debug)]
pub struct FundamentalInvariants {
    pub phi2: HomogeneousPolynomial,
    pub phi6: HomogeneousPolynomial,
    pub phi10: HomogeneousPolynomial,
    pub phi15: HomogeneousPolynomial,
    pub transcription: Vec<TranscriptionCheck>,
}

impl FundamentalInvariants {
    pub fn generators(&self) -> [HomogeneousPolynomial; 3] {
        [self.phi2.clone(), self.phi6.clone(), self.phi10.clone()]
    }
}

/// `act(f, g) = f` for every generator of the group.
pub fn is_invariant(f: &HomogeneousPolynomial, group: &Group) -> bool {
    group.generators().iter().all(|g| &f.act(g) == f)
}

/// Product of the polar forms `<(x, y, z), p>` over `points`.
pub fn polar_product(points: &[ProjectivePoint]) -> HomogeneousPolynomial {
    let forms: Vec<HomogeneousPolynomial> = points.iter().map(|p| p.polar_form()).collect();
    HomogeneousPolynomial::product(&forms)
}

fn checked_transcription(
    name: &str,
    text: &str,
    orbit: &[ProjectivePoint],
    group: &Group,
) -> Result<(HomogeneousPolynomial, TranscriptionCheck)> {
    let transcribed: HomogeneousPolynomial = text.parse()?;
    let polar = polar_product(orbit);
    let invariant = is_invariant(&transcribed, group);
    let ratio = transcribed.proportionality(&polar);
    if invariant && ratio.is_some() {
        let check = TranscriptionCheck { name: name.into(), invariant, ratio, used_reconstruction: false, diff: None };
        return Ok((transcribed, check));
    }
    if !is_invariant(&polar, group) {
        return Err(Error::Verification(format!("reconstruction of {name} is not invariant")));
    }
    // match the transcribed leading coefficient where possible
    let scale = transcribed
        .leading_term()
        .and_then(|(m, c)| {
            let pc = polar.coeff(m);
            (!pc.is_zero()).then(|| c.checked_div(&pc).ok()).flatten()
        })
        .unwrap_or_else(|| polar.leading_term().expect("nonzero").1.inverse().expect("nonzero"));
    let rebuilt = polar.scale(&scale);
    let diff = transcribed.sub(&rebuilt).to_string();
    let check = TranscriptionCheck { name: name.into(), invariant, ratio, used_reconstruction: true, diff: Some(diff) };
    Ok((rebuilt, check))
}

/// The generators, with displayed formulas checked against polar products
/// of the quintuple and triple orbits.
pub fn fundamental_invariants(group: &Group, arr: &Arrangement) -> Result<FundamentalInvariants> {
    let phi2: HomogeneousPolynomial = PHI2_TEXT.parse()?;
    if !is_invariant(&phi2, group) {
        return Err(Error::Verification("phi2 is not invariant".into()));
    }
    let (phi6, t6) = checked_transcription("phi6", PHI6_TEXT, &arr.points_of(PointClass::Quintuple), group)?;
    let (phi10, t10) = checked_transcription("phi10", PHI10_TEXT, &arr.points_of(PointClass::Triple), group)?;
    let phi15 = jacobian_det(&phi2, &phi6, &phi10);
    Ok(FundamentalInvariants { phi2, phi6, phi10, phi15, transcription: vec![t6, t10] })
}

/// Coefficients of an invariant form in the monomials `phi2^a phi6^b phi10^c`.
///
/// Solved from evaluations at random integer points, then confirmed by exact
/// subtraction.
pub fn express_in_invariants(
    f: &HomogeneousPolynomial,
    gens: &[HomogeneousPolynomial; 3],
) -> Result<Vec<(InvariantBasisElement, FieldElement)>> {
    let d = f.degree();
    let basis = InvariantBasisElement::enumerate(d);
    if basis.is_empty() {
        return Err(Error::NotInSubalgebra(format!("no invariant monomials of degree {d}")));
    }
    let n = basis.len();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut rank = 0;
    let mut attempts = 0;
    while rank < n || rows.len() < n + 3 {
        attempts += 1;
        if attempts > 20 * n + 50 {
            return Err(Error::Verification("could not find enough independent sample points".into()));
        }
        let p = [0; 3].map(|_| FieldElement::integer(rng.gen_range(-9..=9)));
        if p.iter().all(|c| c.is_zero()) {
            continue;
        }
        let vals = gens.clone().map(|g| g.evaluate_vec(&p));
        rows.push(basis.iter().map(|m| m.evaluate(&vals)).collect::<Vec<_>>());
        rhs.push(f.evaluate_vec(&p));
        rank = rank_exact(&mut rows.clone());
    }
    let (x, _) = solve_exact(&rows, &rhs)
        .ok_or_else(|| Error::NotInSubalgebra("evaluation system is inconsistent".into()))?;
    let mut recon = HomogeneousPolynomial::zero(d);
    for (m, c) in basis.iter().zip(&x) {
        if !c.is_zero() {
            recon = recon.add(&m.polynomial(gens).scale(c));
        }
    }
    if &recon != f {
        return Err(Error::NotInSubalgebra("exact check failed".into()));
    }
    Ok(basis.into_iter().zip(x).collect())
}

/// A displayed term of the relation for `phi15^2`.
#[derive(Clone, Debug)]
pub struct DisplayedTerm {
    pub element: InvariantBasisElement,
    pub coefficient: FieldElement,
}

/// The displayed right-hand side of `c phi15^2 = ...`, term by term.
pub fn displayed_relation() -> Vec<DisplayedTerm> {
    let t = |a, b, c, s: &str| DisplayedTerm { element: InvariantBasisElement::new(a, b, c), coefficient: fe(s) };
    vec![
        t(0, 0, 3, "125"),
        t(2, 1, 2, "1300*w-2275"),
        t(5, 0, 2, "-12*w+16"),
        t(1, 3, 1, "46800*w-75600"),
        t(4, 2, 1, "-(6360*w-10335)"),
        t(7, 1, 1, "200*w-320"),
        t(5, 0, 0, "343872*w-556416"),
        t(3, 4, 0, "-(84624*w-136912)"),
        t(6, 3, 0, "6916*w-11193"),
        t(9, 2, 0, "-(188*w-304)"),
    ]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationRow {
    pub element: InvariantBasisElement,
    pub computed: FieldElement,
    pub displayed: Option<FieldElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypoResolution {
    pub displayed_element: InvariantBasisElement,
    pub displayed_coefficient: FieldElement,
    /// The degree-30 monomial carrying this coefficient in the computed
    /// relation, if exactly one unlisted monomial does.
    pub resolved_to: Option<InvariantBasisElement>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationCheck {
    /// The constant with `c phi15^2 = displayed right-hand side`.
    pub c: FieldElement,
    pub rows: Vec<RelationRow>,
    pub typos: Vec<TypoResolution>,
    /// Every correctly-typed displayed term matches and every typo resolves.
    pub matched: bool,
}

/// Expands `phi15^2` and compares with the displayed relation.
pub fn check_relation(inv: &FundamentalInvariants) -> Result<RelationCheck> {
    let sq = inv.phi15.pow(2);
    let coeffs = express_in_invariants(&sq, &inv.generators())?;
    let lead = InvariantBasisElement::new(0, 0, 3);
    let v = coeffs
        .iter()
        .find(|(m, _)| *m == lead)
        .map(|(_, c)| c.clone())
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::Verification("phi10^3 does not occur in phi15^2".into()))?;
    let c = fe("125").checked_div(&v)?;
    let displayed = displayed_relation();
    let (proper, typo_terms): (Vec<_>, Vec<_>) =
        displayed.into_iter().partition(|t| t.element.weighted_degree() == 30);
    let rows: Vec<RelationRow> = coeffs
        .iter()
        .map(|(m, val)| RelationRow {
            element: *m,
            computed: &c * val,
            displayed: proper.iter().find(|t| t.element == *m).map(|t| t.coefficient.clone()),
        })
        .collect();
    let unlisted: Vec<&RelationRow> =
        rows.iter().filter(|r| r.displayed.is_none() && !r.computed.is_zero()).collect();
    let typos: Vec<TypoResolution> = typo_terms
        .iter()
        .map(|t| {
            let hits: Vec<&&RelationRow> = unlisted.iter().filter(|r| r.computed == t.coefficient).collect();
            TypoResolution {
                displayed_element: t.element,
                displayed_coefficient: t.coefficient.clone(),
                resolved_to: (hits.len() == 1).then(|| hits[0].element),
            }
        })
        .collect();
    let listed_ok = rows.iter().all(|r| r.displayed.as_ref().is_none_or(|d| d == &r.computed));
    let resolved: HashSet<InvariantBasisElement> = typos.iter().filter_map(|t| t.resolved_to).collect();
    let unlisted_ok = unlisted.iter().all(|r| resolved.contains(&r.element));
    let matched = listed_ok && unlisted_ok && typos.iter().all(|t| t.resolved_to.is_some());
    Ok(RelationCheck { c, rows, typos, matched })
}

/// Invariant forms of degree `d` with multiplicity at least `mults[k]` at
/// every point of orbit `k` (quintuple, triple, double).
#[derive(Clone, Debug)]
pub struct InvariantSubspace {
    pub degree: u32,
    pub multiplicities: [u32; 3],
    pub basis: Vec<InvariantBasisElement>,
    /// Coefficient vectors over `basis`.
    pub kernel: Vec<Vec<FieldElement>>,
    pub forms: Vec<HomogeneousPolynomial>,
}

impl InvariantSubspace {
    pub fn dimension(&self) -> usize {
        self.forms.len()
    }
}

/// Conditions are imposed at one representative per orbit and confirmed on
/// every point afterwards.
pub fn invariant_subspace(
    gens: &[HomogeneousPolynomial; 3],
    arr: &Arrangement,
    d: u32,
    mults: [u32; 3],
) -> Result<InvariantSubspace> {
    let basis = InvariantBasisElement::enumerate(d);
    let empty = InvariantSubspace { degree: d, multiplicities: mults, basis: basis.clone(), kernel: vec![], forms: vec![] };
    if basis.is_empty() || mults.iter().any(|&m| m > d) {
        return Ok(empty);
    }
    let polys: Vec<HomogeneousPolynomial> = basis.iter().map(|m| m.polynomial(gens)).collect();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for (class, &m) in PointClass::ALL.iter().zip(&mults) {
        if m == 0 {
            continue;
        }
        let p = arr.representative(*class);
        let cols: Vec<Vec<FieldElement>> = polys.iter().map(|f| f.partials_at(&p, m - 1)).collect();
        for r in 0..cols[0].len() {
            rows.push(cols.iter().map(|c| c[r].clone()).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| if i == j { FieldElement::one() } else { FieldElement::zero() }).collect())
            .collect()
    } else {
        kernel_exact(&rows, basis.len())
    };
    let forms: Vec<HomogeneousPolynomial> = kernel
        .iter()
        .map(|v| {
            v.iter().zip(&polys).fold(HomogeneousPolynomial::zero(d), |acc, (c, f)| {
                if c.is_zero() { acc } else { acc.add(&f.scale(c)) }
            })
        })
        .collect();
    for f in &forms {
        for (class, &m) in PointClass::ALL.iter().zip(&mults) {
            if !arr.points_of(*class).iter().all(|p| f.has_multiplicity_at_least(p, m)) {
                return Err(Error::Verification(format!(
                    "kernel form misses multiplicity {m} on the {} orbit",
                    class.name()
                )));
            }
        }
    }
    Ok(InvariantSubspace { degree: d, multiplicities: mults, basis, kernel, forms })
}

/// A point of `P(2,6,10)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub w: [FieldElement; 3],
}

impl WeightedPoint {
    pub fn new(w: [FieldElement; 3]) -> Result<Self> {
        if w.iter().all(|c| c.is_zero()) {
            return Err(Error::BaseLocus);
        }
        Ok(WeightedPoint { w })
    }

    pub fn from_strs(s: [&str; 3]) -> Result<Self> {
        Self::new(s.map(fe))
    }

    /// Equality up to `t -> (t^2 w2, t^6 w6, t^10 w10)`.
    pub fn weighted_eq(&self, o: &Self) -> bool {
        let [a2, a6, a10] = &self.w;
        let [b2, b6, b10] = &o.w;
        let zeros = |w: &[FieldElement; 3]| w.clone().map(|c| c.is_zero());
        zeros(&self.w) == zeros(&o.w)
            && &a2.pow(3) * b6 == &b2.pow(3) * a6
            && &a2.pow(5) * b10 == &b2.pow(5) * a10
            && &a6.pow(5) * &b10.pow(3) == &b6.pow(5) * &a10.pow(3)
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.w[0], self.w[1], self.w[2])
    }
}

/// `p -> [f2(p) : f6(p) : f10(p)]`.
pub fn quotient_map(p: &ProjectivePoint, gens: &[HomogeneousPolynomial; 3]) -> Result<WeightedPoint> {
    WeightedPoint::new(gens.clone().map(|g| g.evaluate(p)))
}

/// The rescaled forms used to assemble `psi30`.
#[derive(Clone, Debug)]
pub struct PsiForms {
    pub psi2: HomogeneousPolynomial,
    pub psi6: HomogeneousPolynomial,
    pub psi6p: HomogeneousPolynomial,
    pub psi10: HomogeneousPolynomial,
}

impl PsiForms {
    pub fn new(inv: &FundamentalInvariants) -> Self {
        let (p2, p6, p10) = (&inv.phi2, &inv.phi6, &inv.phi10);
        let psi2 = p2.scale(&fe("3"));
        let psi6 = p6.scale(&fe("-3*(w-1)"));
        let psi6p = p2.pow(3).sub(&p6.scale(&fe("27*(w-1)"))).scale(&fe("-25"));
        let psi10 = p2
            .pow(2)
            .mul(p6)
            .scale(&fe("25*(w-1)"))
            .sub(&p10.scale(&fe("9*w+3")))
            .scale(&fe("15/4"));
        PsiForms { psi2, psi6, psi6p, psi10 }
    }

    pub fn map_generators(&self) -> [HomogeneousPolynomial; 3] {
        [self.psi2.clone(), self.psi6.clone(), self.psi10.clone()]
    }

    /// `psi10^3, psi2^2 psi6 psi10^2, psi2 psi6^2 psi6' psi10, psi6^3 psi6'^2`.
    pub fn summands(&self) -> [HomogeneousPolynomial; 4] {
        let (p2, p6, q6, p10) = (&self.psi2, &self.psi6, &self.psi6p, &self.psi10);
        [
            p10.pow(3),
            p2.pow(2).mul(p6).mul(&p10.pow(2)),
            p2.mul(&p6.pow(2)).mul(q6).mul(p10),
            p6.pow(3).mul(&q6.pow(2)),
        ]
    }
}

/// The same summands in the weighted coordinates `(w2, w6, w10)` of the
/// psi map, with `w6'` the image of `psi6'`.
pub fn weighted_summands(w6p: &MPoly) -> [MPoly; 4] {
    let (w2, w6, w10) = (MPoly::var(3, 0), MPoly::var(3, 1), MPoly::var(3, 2));
    [
        w10.pow(3),
        w2.pow(2).mul(&w6).mul(&w10.pow(2)),
        w2.mul(&w6.pow(2)).mul(w6p).mul(&w10),
        w6.pow(3).mul(&w6p.pow(2)),
    ]
}

/// `psi6' = -25 (w2^3 / 27 + 9 w6)` in psi coordinates.
pub fn weighted_psi6p() -> MPoly {
    let (w2, w6) = (MPoly::var(3, 0), MPoly::var(3, 1));
    w2.pow(3).scale(&fe("1/27")).add(&w6.scale(&fe("9"))).scale(&fe("-25"))
}

/// `sum c * g2^a g6^b g10^c` for a form in weighted coordinates.
pub fn pullback(g: &MPoly, gens: &[HomogeneousPolynomial; 3]) -> Result<HomogeneousPolynomial> {
    let weights = [gens[0].degree(), gens[1].degree(), gens[2].degree()];
    let d = g
        .weighted_degree(&weights)
        .ok_or_else(|| Error::Verification("weighted form is not homogeneous".into()))?;
    let mut out = HomogeneousPolynomial::zero(d);
    for (e, c) in g.terms() {
        let m = InvariantBasisElement::new(e[0], e[1], e[2]);
        out = out.add(&m.polynomial(gens).scale(c));
    }
    Ok(out)
}

/// Smallest `alpha` with `alpha psi2 psi10 = psi6 psi6'` modulo the cube of
/// the ideal of every triple point.
pub fn congruence_constant(psi: &PsiForms, arr: &Arrangement) -> Result<FieldElement> {
    let lhs = psi.psi2.mul(&psi.psi10);
    let rhs = psi.psi6.mul(&psi.psi6p);
    let p3 = arr.representative(PointClass::Triple);
    let u = lhs.partials_at(&p3, 2);
    let v = rhs.partials_at(&p3, 2);
    let k = u
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::Verification("psi2 psi10 has multiplicity above 2 at a triple point".into()))?;
    let alpha = v[k].checked_div(&u[k])?;
    let diff = rhs.sub(&lhs.scale(&alpha));
    for p in arr.points_of(PointClass::Triple) {
        if !(0..=2).all(|order| diff.partials_vanish(&p, order)) {
            return Err(Error::Verification(format!("congruence fails at {p}")));
        }
    }
    Ok(alpha)
}

/// The displayed 5x4 system for `lambda`, as a function of `alpha`.
pub fn lambda_system(alpha: &FieldElement) -> Vec<Vec<FieldElement>> {
    let a = alpha.clone();
    let a2 = alpha.pow(2);
    let i = |n: i64| FieldElement::integer(n);
    vec![
        vec![i(-32), i(9), i(15), i(25)],
        vec![i(0), i(1), a.clone(), a2.clone()],
        vec![i(0), i(5), &i(7) * &a, &i(9) * &a2],
        vec![i(0), i(0), i(1), &i(2) * &a],
        vec![i(0), i(2), a, i(0)],
    ]
}

fn normalized_kernel(rows: &[Vec<FieldElement>]) -> Result<Vec<FieldElement>> {
    let ker = kernel_exact(rows, 4);
    if ker.len() != 1 {
        return Err(Error::Verification(format!("solution space has dimension {}", ker.len())));
    }
    let v = &ker[0];
    let s = v[1].inverse().map_err(|_| Error::Verification("lambda2 vanishes".into()))?;
    Ok(v.iter().map(|c| c * &s).collect())
}

#[derive(Clone, Debug)]
pub struct Psi30System {
    pub psi: PsiForms,
    pub psi30: HomogeneousPolynomial,
    pub lambda: [FieldElement; 4],
    pub alpha_const: FieldElement,
    pub system: Vec<Vec<FieldElement>>,
    /// Kernel of the conditions derived directly from derivatives at a
    /// triple point and the value at a quintuple point, normalized like
    /// `lambda`.
    pub derived_lambda: Vec<FieldElement>,
    /// Minimum multiplicity of `psi30` over each orbit.
    pub multiplicities: [u32; 3],
}

/// The quintuple point used for the value condition.
pub fn p5() -> ProjectivePoint {
    "[w:0:1]".parse().expect("literal")
}

pub fn build_psi30(inv: &FundamentalInvariants, arr: &Arrangement) -> Result<Psi30System> {
    let psi = PsiForms::new(inv);
    let alpha = congruence_constant(&psi, arr)?;
    let system = lambda_system(&alpha);
    let lambda_vec = normalized_kernel(&system)?;
    let summands = psi.summands();

    let p3 = arr.representative(PointClass::Triple);
    let q5 = p5();
    let mut derived = vec![summands.iter().map(|s| s.evaluate(&q5)).collect::<Vec<_>>()];
    for order in 0..=5 {
        let cols: Vec<Vec<FieldElement>> = summands.iter().map(|s| s.partials_at(&p3, order)).collect();
        for r in 0..cols[0].len() {
            derived.push(cols.iter().map(|c| c[r].clone()).collect());
        }
    }
    let derived_lambda = normalized_kernel(&derived)?;

    let lambda: [FieldElement; 4] = std::array::from_fn(|i| lambda_vec[i].clone());
    let psi30 = summands
        .iter()
        .zip(&lambda)
        .fold(HomogeneousPolynomial::zero(30), |acc, (s, l)| acc.add(&s.scale(l)));
    let mut multiplicities = [u32::MAX; 3];
    for (k, class) in PointClass::ALL.iter().enumerate() {
        for p in arr.points_of(*class) {
            multiplicities[k] = multiplicities[k].min(psi30.multiplicity_at(&p)?);
        }
    }
    Ok(Psi30System { psi, psi30, lambda, alpha_const: alpha, system, derived_lambda, multiplicities })
}

#[derive(Debug)]
pub struct IrreducibilityReport {
    /// `psi30` in the weighted coordinates of the psi map.
    pub weighted_form: MPoly,
    pub pullback_matches: bool,
    pub witness: Result<IrreducibilityWitness>,
    /// The same test on the displayed form with leading coefficient 1 and
    /// `w6' = w2^3/27 + 9 w6`.
    pub displayed_witness: Result<IrreducibilityWitness>,
    /// Weighted degrees of the divisors of `w6^3 w6'^2`.
    pub divisor_degrees: Vec<u32>,
    /// No mirror line divides `psi30`.
    pub mirror_free: bool,
}

impl IrreducibilityReport {
    pub fn passed(&self) -> bool {
        self.pullback_matches
            && matches!(self.witness, Ok(IrreducibilityWitness::NoLinearFactor { .. }))
            && !self.divisor_degrees.contains(&10)
            && self.mirror_free
    }
}

/// The curve `psi30 = 0` is G-irreducible: its weighted form is cubic in
/// `w10` with constant leading coefficient, so a factorization needs a factor
/// `w10 + s w2^5 + t w2^2 w6`, and substituting the root leaves a nonzero
/// constant coefficient.
pub fn irreducibility_certificate(sys: &Psi30System, arr: &Arrangement) -> IrreducibilityReport {
    let names = ["w2", "w6", "w10"];
    let w6p = weighted_psi6p();
    let parts = weighted_summands(&w6p);
    let g = parts
        .iter()
        .zip(&sys.lambda)
        .fold(MPoly::zero(3), |acc, (s, l)| acc.add(&s.scale(l)));
    let pullback_matches = pullback(&g, &sys.psi.map_generators()).is_ok_and(|f| f == sys.psi30);
    let (w2, w6) = (MPoly::var(3, 0), MPoly::var(3, 1));
    let candidates = [w2.pow(5), w2.pow(2).mul(&w6)];
    let witness = no_linear_factor(&g, 2, &candidates);

    let w6p_displayed = w2.pow(3).scale(&fe("1/27")).add(&w6.scale(&fe("9")));
    let shown = weighted_summands(&w6p_displayed);
    let coeffs = [fe("1"), fe("1"), fe("2"), fe("1")];
    let displayed = shown.iter().zip(&coeffs).fold(MPoly::zero(3), |acc, (s, l)| acc.add(&s.scale(l)));
    let displayed_witness = no_linear_factor(&displayed, 2, &candidates);

    // w6 and w6' are irreducible of weighted degree 6, so divisors of
    // w6^3 w6'^2 are w6^i w6'^j
    let mut divisor_degrees: Vec<u32> = (0..=3).flat_map(|i| (0..=2).map(move |j| 6 * (i + j))).collect();
    divisor_degrees.sort_unstable();
    divisor_degrees.dedup();
    debug_assert!(linear_irreducibility(&w6p).is_some());

    let mirror_free = arr.lines.iter().all(|l| sys.psi30.divide_exact(l).is_err());
    let _ = Named(&g, &names);
    IrreducibilityReport { weighted_form: g, pullback_matches, witness, displayed_witness, divisor_degrees, mirror_free }
}

/// Minimum and maximum multiplicity of `f` over each orbit.
pub fn orbit_multiplicities(f: &HomogeneousPolynomial, arr: &Arrangement) -> Result<[(u32, u32); 3]> {
    let mut out = [(u32::MAX, 0u32); 3];
    for (k, class) in PointClass::ALL.iter().enumerate() {
        for p in arr.points_of(*class) {
            let m = f.multiplicity_at(&p)?;
            out[k] = (out[k].0.min(m), out[k].1.max(m));
        }
    }
    Ok(out)
}

/// Builds an effectivity witness after checking invariance up to sign, constant
/// multiplicity on each orbit, and G-irreducibility via `reason`.
pub fn witness_for(
    label: &str,
    f: &HomogeneousPolynomial,
    arr: &Arrangement,
    group: &Group,
    g_irreducible: Option<String>,
) -> Result<EffectivityWitness> {
    let semi = group.generators().iter().all(|g| {
        let a = f.act(g);
        a == *f || a == f.neg()
    });
    if !semi {
        return Err(Error::Verification(format!("{label} is not invariant up to sign")));
    }
    let mults = orbit_multiplicities(f, arr)?;
    if mults.iter().any(|(lo, hi)| lo != hi) {
        return Err(Error::Verification(format!("{label} has non-constant multiplicity on an orbit")));
    }
    Ok(EffectivityWitness {
        label: label.into(),
        form: f.to_string(),
        degree: f.degree(),
        multiplicities: mults.map(|(lo, _)| lo),
        g_irreducible,
    })
}

/// Irreducibility of an invariant form via its weighted expression.
pub fn weighted_irreducibility(
    f: &HomogeneousPolynomial,
    gens: &[HomogeneousPolynomial; 3],
    arr: &Arrangement,
) -> Result<Option<String>> {
    let coeffs = express_in_invariants(f, gens)?;
    let g = coeffs.iter().fold(MPoly::zero(3), |acc, (m, c)| acc.add(&m.weighted().scale(c)));
    let mirror_free = arr.lines.iter().all(|l| f.divide_exact(l).is_err());
    let names = ["phi2", "phi6", "phi10"];
    Ok(match (linear_irreducibility(&g), mirror_free) {
        (Some(w), true) => Some(format!("{} is irreducible in the invariant ring ({w:?}) and no mirror line divides it", Named(&g, &names))),
        _ => None,
    })
}

/// The polar lines of an orbit are permuted transitively by the group.
pub fn single_orbit_lines(points: &[ProjectivePoint], group: &Group) -> bool {
    let forms: Vec<HomogeneousPolynomial> = points.iter().map(|p| p.polar_form().monic()).collect();
    let orbit: HashSet<HomogeneousPolynomial> =
        group.elements().iter().map(|g| forms[0].act(&g.entries).monic()).collect();
    orbit.len() == forms.len() && forms.iter().all(|f| orbit.contains(f))
}

/// Intersection counts of pairs of generators.
pub fn intersection_claims(inv: &FundamentalInvariants) -> Vec<Claim> {
    let cases: [(&str, &HomogeneousPolynomial, &HomogeneousPolynomial, IntersectionCount); 3] = [
        ("invariants.meet.phi2_phi6", &inv.phi2, &inv.phi6, IntersectionCount { distinct_points: 12, total_multiplicity: 12 }),
        ("invariants.meet.phi2_phi10", &inv.phi2, &inv.phi10, IntersectionCount { distinct_points: 20, total_multiplicity: 20 }),
        ("invariants.meet.phi6_phi10", &inv.phi6, &inv.phi10, IntersectionCount { distinct_points: 15, total_multiplicity: 60 }),
    ];
    cases
        .into_iter()
        .map(|(id, f, g, want)| {
            Claim::from_result(id, "intersection of generator curves", intersection_count(f, g), |got| {
                Claim::check(
                    id,
                    "intersection of generator curves",
                    got == want,
                    format!(
                        "{} distinct, total {} (expected {} / {})",
                        got.distinct_points, got.total_multiplicity, want.distinct_points, want.total_multiplicity
                    ),
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Group, Arrangement, FundamentalInvariants) {
        let g = Group::generate().unwrap();
        let a = Arrangement::build(&g).unwrap();
        let i = fundamental_invariants(&g, &a).unwrap();
        (g, a, i)
    }

    #[test]
    fn basis_enumeration() {
        assert_eq!(InvariantBasisElement::enumerate(30).len(), 13);
        assert_eq!(InvariantBasisElement::enumerate(6).len(), 2);
        assert!(InvariantBasisElement::enumerate(7).is_empty());
        assert!(InvariantBasisElement::enumerate(30).iter().all(|m| m.weighted_degree() == 30));
    }

    #[test]
    fn evaluation_at_double_point() {
        let (_, _, inv) = setup();
        let p2 = ProjectivePoint::from_ints(0, 0, 1);
        assert_eq!(inv.phi2.evaluate(&p2), fe("1"));
        assert!(inv.phi6.evaluate(&p2).is_zero());
        assert!(inv.phi10.evaluate(&p2).is_zero());
        assert_eq!(inv.phi6.multiplicity_at(&p2).unwrap(), 2);
    }

    #[test]
    fn simple_expansions() {
        let (_, _, inv) = setup();
        let gens = inv.generators();
        let e = express_in_invariants(&inv.phi2.mul(&inv.phi6), &gens).unwrap();
        let nz: Vec<_> = e.iter().filter(|(_, c)| !c.is_zero()).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].0, InvariantBasisElement::new(1, 1, 0));
        assert_eq!(nz[0].1, fe("1"));
        assert!(matches!(
            express_in_invariants(&HomogeneousPolynomial::x().pow(2), &gens),
            Err(Error::NotInSubalgebra(_))
        ));
        assert!(express_in_invariants(&HomogeneousPolynomial::x().pow(3), &gens).is_err());
    }

    #[test]
    fn weighted_equality() {
        let a = WeightedPoint::from_strs(["1", "2", "3"]).unwrap();
        let b = WeightedPoint::from_strs(["4", "128", "3072"]).unwrap();
        assert!(a.weighted_eq(&b));
        let c = WeightedPoint::from_strs(["4", "128", "3071"]).unwrap();
        assert!(!a.weighted_eq(&c));
        assert!(WeightedPoint::from_strs(["0", "0", "0"]).is_err());
    }
}
