//! Initial degrees of symbolic powers of the singular point sets.
//!
//! A degree-`d` form has multiplicity at least `m` at `p` iff all of its
//! partials of order `m - 1` vanish at `p` (for `d >= m - 1`). The conditions
//! are screened modulo small primes, kernels are lifted to `Q(w)` by Chinese
//! remaindering over both embeddings of `w`, and the degree below is
//! certified by a full-rank minor modulo a prime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{Arrangement, PointClass};
use crate::error::{Error, Result};
use crate::field::{
    inv_mod, mul_mod, valid_primes, FieldElement, ModularImage, RECONSTRUCTION_PRIME_START, SCREENING_PRIME_START,
};
use crate::group::Group;
use crate::linalg::{bareiss_rank, det_mod, kernel_exact, rref_mod, CrtAccumulator, ModEchelon};
use crate::poly::{HomogeneousPolynomial, Monomial, ProjectivePoint};
use crate::report::Claim;

/// Extra degrees tried above the search floor before giving up.
pub const DEGREE_BUDGET: u32 = 25;
const SCREENING_PRIMES: usize = 2;
const MAX_RECONSTRUCTION_PRIMES: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointSet {
    All,
    Quintuples,
    Triples,
    Doubles,
}

impl PointSet {
    pub const ALL: [PointSet; 4] = [PointSet::All, PointSet::Quintuples, PointSet::Triples, PointSet::Doubles];

    pub fn label(self) -> &'static str {
        match self {
            PointSet::All => "all",
            PointSet::Quintuples => "quintuples",
            PointSet::Triples => "triples",
            PointSet::Doubles => "doubles",
        }
    }

    pub fn points(self, arr: &Arrangement) -> Vec<ProjectivePoint> {
        match self {
            PointSet::All => arr.all_points(),
            PointSet::Quintuples => arr.points_of(PointClass::Quintuple),
            PointSet::Triples => arr.points_of(PointClass::Triple),
            PointSet::Doubles => arr.points_of(PointClass::Double),
        }
    }

    /// Certified lower bound on the Waldschmidt constant.
    pub fn lower_bound(self) -> BigRational {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        match self {
            PointSet::All => r(11, 2),
            PointSet::Quintuples => r(12, 5),
            PointSet::Triples | PointSet::Doubles => r(3, 1),
        }
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PointSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PointSet::ALL
            .into_iter()
            .find(|p| p.label() == s || p.label().strip_suffix('s') == Some(s))
            .ok_or_else(|| Error::Parse(format!("unknown point set {s:?}")))
    }
}

/// Conditions for a degree-`d` form to have multiplicity `m` at `points`.
#[derive(Clone, Debug)]
pub struct VanishingSystem {
    pub points: Vec<ProjectivePoint>,
    pub m: u32,
    pub d: u32,
}

pub fn vanishing_matrix(points: &[ProjectivePoint], m: u32, d: u32) -> VanishingSystem {
    assert!(m >= 1, "multiplicity must be positive");
    VanishingSystem { points: points.to_vec(), m, d }
}

impl VanishingSystem {
    pub fn nrows(&self) -> usize {
        let k = self.order();
        self.points.len() * ((k + 1) * (k + 2) / 2) as usize
    }

    pub fn ncols(&self) -> usize {
        ((self.d + 1) * (self.d + 2) / 2) as usize
    }

    pub fn columns(&self) -> Vec<Monomial> {
        Monomial::all_of_degree(self.d)
    }

    /// Order of the partials used as conditions. Below degree `m - 1` the
    /// order-`(m - 1)` partials vanish identically, and the order-`d`
    /// partials (the coefficients) are used instead, so only zero survives.
    fn order(&self) -> u32 {
        (self.m - 1).min(self.d)
    }

    fn functionals(&self) -> Vec<Monomial> {
        Monomial::all_of_degree(self.order())
    }

    /// Rows over `Q(w)`, one per (point, partial) pair.
    pub fn exact_rows(&self) -> Vec<Vec<FieldElement>> {
        let cols = self.columns();
        let by = self.functionals();
        self.points
            .iter()
            .flat_map(|p| {
                let powers: [Vec<FieldElement>; 3] = std::array::from_fn(|i| {
                    let mut v = vec![FieldElement::one()];
                    for k in 0..self.d as usize {
                        let next = &v[k] * &p.coords()[i];
                        v.push(next);
                    }
                    v
                });
                let cols = &cols;
                by.iter()
                    .map(move |b| {
                        cols.iter()
                            .map(|e| match e.derivative_factor(b) {
                                None => FieldElement::zero(),
                                Some(f) => {
                                    let [i, j, k] = e.div(b).exps().map(|x| x as usize);
                                    let v = &(&powers[0][i] * &powers[1][j]) * &powers[2][k];
                                    v.scale_int(&f)
                                }
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    /// Rows reduced along `img`, built from reduced point coordinates.
    pub fn modular_rows(&self, img: &ModularImage) -> Result<Vec<Vec<u64>>> {
        let p = img.p;
        let cols = self.columns();
        let by = self.functionals();
        let mut out = Vec::with_capacity(self.nrows());
        for pt in &self.points {
            let c: Vec<u64> = pt.coords().iter().map(|x| img.reduce(x)).collect::<Result<_>>()?;
            let powers: Vec<Vec<u64>> = c
                .iter()
                .map(|&x| {
                    let mut v = vec![1u64];
                    for k in 0..self.d as usize {
                        v.push(mul_mod(v[k], x, p));
                    }
                    v
                })
                .collect();
            for b in &by {
                let [bx, by_, bz] = b.exps();
                out.push(
                    cols.iter()
                        .map(|e| {
                            let [ex, ey, ez] = e.exps();
                            if ex < bx || ey < by_ || ez < bz {
                                return 0;
                            }
                            let mut f = 1u64;
                            for (n, k) in [(ex, bx), (ey, by_), (ez, bz)] {
                                for t in 0..k {
                                    f = mul_mod(f, (n - t) as u64 % p, p);
                                }
                            }
                            let v = mul_mod(powers[0][(ex - bx) as usize], powers[1][(ey - by_) as usize], p);
                            mul_mod(f, mul_mod(v, powers[2][(ez - bz) as usize], p), p)
                        })
                        .collect(),
                );
            }
        }
        Ok(out)
    }

    pub fn rank_mod(&self, img: &ModularImage) -> Result<usize> {
        Ok(rref_mod(self.modular_rows(img)?, img.p).rank())
    }

    /// Fraction-free exact rank.
    pub fn rank_exact(&self) -> usize {
        bareiss_rank(&self.exact_rows())
    }

    pub fn form_of(&self, coeffs: &[FieldElement]) -> HomogeneousPolynomial {
        HomogeneousPolynomial::from_coefficient_vector(self.d, coeffs)
    }

    /// Exact kernel as polynomials.
    pub fn kernel_forms(&self) -> Vec<HomogeneousPolynomial> {
        kernel_exact(&self.exact_rows(), self.ncols()).iter().map(|v| self.form_of(v)).collect()
    }

    pub fn satisfied_by(&self, f: &HomogeneousPolynomial) -> bool {
        f.degree() == self.d && self.points.iter().all(|p| f.has_multiplicity_at_least(p, self.m))
    }
}

/// Full column rank of the degree-`degree` system modulo `prime` (with `w`
/// sent to `root`), witnessed by the listed rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerWitness {
    pub degree: u32,
    pub prime: u64,
    pub root: u64,
    pub rows: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaCertificate {
    pub orbit: PointSet,
    pub m: u32,
    pub alpha: u32,
    pub upper_witness: HomogeneousPolynomial,
    pub lower_witness: LowerWitness,
}

impl AlphaCertificate {
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.alpha), BigInt::from(self.m))
    }
}

/// Re-checks both halves of a certificate from scratch.
pub fn validate_certificate(cert: &AlphaCertificate, arr: &Arrangement) -> Result<()> {
    let points = cert.orbit.points(arr);
    let f = &cert.upper_witness;
    if f.is_zero() || f.degree() != cert.alpha {
        return Err(Error::InvalidCertificate("upper witness must be nonzero of degree alpha".into()));
    }
    for p in &points {
        if f.multiplicity_at(p)? < cert.m {
            return Err(Error::InvalidCertificate(format!("upper witness has multiplicity below {} at {p}", cert.m)));
        }
    }
    let lw = &cert.lower_witness;
    if lw.degree + 1 != cert.alpha {
        return Err(Error::InvalidCertificate("lower witness must sit at degree alpha - 1".into()));
    }
    if lw.degree + 1 < cert.m {
        return Err(Error::InvalidCertificate("degree too small for the derivative conditions".into()));
    }
    let sys = vanishing_matrix(&points, cert.m, lw.degree);
    let img = ModularImage::with_root(lw.prime, lw.root)?;
    let rows = sys.modular_rows(&img)?;
    if lw.rows.len() != sys.ncols() || lw.rows.iter().any(|&r| r >= rows.len()) {
        return Err(Error::InvalidCertificate("minor must be square on all columns".into()));
    }
    let minor: Vec<Vec<u64>> = lw.rows.iter().map(|&r| rows[r].clone()).collect();
    if det_mod(minor, img.p) == 0 {
        return Err(Error::InvalidCertificate("minor is singular".into()));
    }
    Ok(())
}

fn screening_images() -> Vec<ModularImage> {
    valid_primes(SCREENING_PRIME_START)
        .take(SCREENING_PRIMES)
        .map(|p| ModularImage::new(p).expect("valid prime"))
        .collect()
}

/// A full-rank witness at `sys`, if some screening prime gives one.
fn full_rank_witness(sys: &VanishingSystem) -> Result<Option<LowerWitness>> {
    let n = sys.ncols();
    if sys.nrows() < n {
        return Ok(None);
    }
    for img in screening_images() {
        let e = rref_mod(sys.modular_rows(&img)?, img.p);
        if e.rank() == n {
            return Ok(Some(LowerWitness { degree: sys.d, prime: img.p, root: img.r, rows: e.pivot_rows }));
        }
    }
    Ok(None)
}

/// Kernel vector for the first free column, or `None` at full rank.
fn modular_kernel(e: &ModEchelon, ncols: usize, p: u64) -> Option<Vec<u64>> {
    let f = *e.free_columns(ncols).first()?;
    Some(e.kernel_vector(f, ncols, p))
}

/// Outcome of lifting: an exact kernel form, or a full-rank witness found
/// at a reconstruction prime.
#[derive(Clone, Debug)]
pub enum Lifted {
    Form(HomogeneousPolynomial),
    FullRank(LowerWitness),
}

/// Lifts a kernel vector of `sys` to `Q(w)` and checks it exactly.
pub fn exact_kernel_form(sys: &VanishingSystem) -> Result<Lifted> {
    let n = sys.ncols();
    let mut acc = CrtAccumulator::new(2 * n);
    let mut best: Option<Vec<usize>> = None;
    let mut previous: Option<Vec<BigRational>> = None;
    let primes: Vec<u64> = valid_primes(RECONSTRUCTION_PRIME_START).take(MAX_RECONSTRUCTION_PRIMES).collect();
    for p in primes {
        let img = ModularImage::new(p)?;
        let imgs = [img, img.conjugate()];
        let echelons: Vec<Result<ModEchelon>> =
            imgs.par_iter().map(|i| sys.modular_rows(i).map(|rows| rref_mod(rows, p))).collect();
        let (Ok(e1), Ok(e2)) = (&echelons[0], &echelons[1]) else {
            continue;
        };
        if e1.pivots != e2.pivots {
            continue;
        }
        match &best {
            Some(piv) if piv.len() > e1.pivots.len() => continue,
            Some(piv) if *piv == e1.pivots => {}
            _ => {
                // a larger rank means every earlier prime was unlucky
                best = Some(e1.pivots.clone());
                acc = CrtAccumulator::new(2 * n);
                previous = None;
            }
        }
        let (Some(v1), Some(v2)) = (modular_kernel(e1, n, p), modular_kernel(e2, n, p)) else {
            let w = LowerWitness { degree: sys.d, prime: p, root: imgs[0].r, rows: e1.pivot_rows.clone() };
            return Ok(Lifted::FullRank(w));
        };
        // v1 = a + b r, v2 = a + b r'
        let inv = inv_mod((imgs[0].r + p - imgs[1].r) % p, p).expect("distinct roots");
        let mut residues = Vec::with_capacity(2 * n);
        let mut bs = Vec::with_capacity(n);
        for (&x1, &x2) in v1.iter().zip(&v2) {
            let b = mul_mod((x1 + p - x2) % p, inv, p);
            residues.push((x1 + p - mul_mod(b, imgs[0].r, p)) % p);
            bs.push(b);
        }
        residues.extend(bs);
        acc.push(&residues, p);
        let Some(values) = acc.reconstruct() else {
            continue;
        };
        if previous.as_ref() != Some(&values) {
            previous = Some(values);
            continue;
        }
        let coeffs: Vec<FieldElement> =
            (0..n).map(|i| FieldElement::new(values[i].clone(), values[n + i].clone())).collect();
        let f = sys.form_of(&coeffs);
        if !f.is_zero() && sys.satisfied_by(&f) {
            return Ok(Lifted::Form(f));
        }
        previous = None;
    }
    Err(Error::Inconclusive(format!(
        "kernel at degree {} not confirmed after {MAX_RECONSTRUCTION_PRIMES} primes",
        sys.d
    )))
}

/// Search floor: the certified bound times `m`, rounded up.
pub fn default_floor(set: PointSet, m: u32) -> u32 {
    let b = set.lower_bound() * BigRational::from_integer(BigInt::from(m));
    let c: BigInt = b.ceil().to_integer();
    u32::try_from(c).expect("small")
}

/// The least degree of a form with multiplicity `m` at every point of `set`.
pub fn alpha(arr: &Arrangement, set: PointSet, m: u32, search_floor: Option<u32>) -> Result<AlphaCertificate> {
    alpha_bounded(arr, set, m, search_floor, None)
}

/// As [`alpha`], giving up after degree `max_degree` (default: floor + [`DEGREE_BUDGET`]).
pub fn alpha_bounded(
    arr: &Arrangement,
    set: PointSet,
    m: u32,
    search_floor: Option<u32>,
    max_degree: Option<u32>,
) -> Result<AlphaCertificate> {
    if m == 0 {
        return Err(Error::Parse("multiplicity must be positive".into()));
    }
    let points = set.points(arr);
    let floor = search_floor.unwrap_or(0).max(default_floor(set, m)).max(m);
    let cap = max_degree.unwrap_or(floor + DEGREE_BUDGET);
    if cap < floor {
        return Err(Error::Inconclusive(format!("max degree {cap} is below the certified floor {floor}")));
    }
    let mut below = {
        let sys = vanishing_matrix(&points, m, floor - 1);
        full_rank_witness(&sys)?
    };
    if below.is_none() {
        return Err(Error::Verification(format!(
            "degree {} below the search floor is not certified empty",
            floor - 1
        )));
    }
    for d in floor..=cap {
        let sys = vanishing_matrix(&points, m, d);
        if let Some(w) = full_rank_witness(&sys)? {
            below = Some(w);
            continue;
        }
        let f = match exact_kernel_form(&sys)? {
            Lifted::Form(f) => f,
            Lifted::FullRank(w) => {
                below = Some(w);
                continue;
            }
        };
        return Ok(AlphaCertificate {
            orbit: set,
            m,
            alpha: d,
            upper_witness: f,
            lower_witness: below.expect("set above"),
        });
    }
    Err(Error::Inconclusive(format!(
        "no form of degree <= {cap} found for {set}, m = {m}"
    )))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WaldschmidtTable {
    pub set: PointSet,
    pub rows: Vec<AlphaCertificate>,
}

impl WaldschmidtTable {
    pub fn alpha(&self, m: u32) -> Option<u32> {
        self.rows.iter().find(|c| c.m == m).map(|c| c.alpha)
    }

    /// `alpha(m1 + m2) <= alpha(m1) + alpha(m2)` for all computed pairs.
    pub fn subadditive(&self) -> bool {
        self.rows.iter().all(|a| {
            self.rows.iter().all(|b| self.alpha(a.m + b.m).is_none_or(|s| s <= a.alpha + b.alpha))
        })
    }

    /// `alpha(m) < alpha(m + 1)` for consecutive computed values.
    pub fn strictly_increasing(&self) -> bool {
        self.rows
            .iter()
            .all(|a| self.alpha(a.m + 1).is_none_or(|next| a.alpha < next))
    }

    pub fn respects_bound(&self) -> bool {
        let b = self.set.lower_bound();
        self.rows.iter().all(|c| c.ratio() >= b)
    }
}

impl fmt::Display for WaldschmidtTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4} {:>6} {:>8}", "m", "alpha", "ratio")?;
        for c in &self.rows {
            writeln!(f, "{:>4} {:>6} {:>8}", c.m, c.alpha, c.ratio())?;
        }
        Ok(())
    }
}

/// Certified values of `alpha(I^(m))` for `m = 1..=m_max`, with the
/// consistency checks enforced.
pub fn waldschmidt_table(arr: &Arrangement, set: PointSet, ms: &[u32]) -> Result<WaldschmidtTable> {
    let rows = ms.iter().map(|&m| alpha(arr, set, m, None)).collect::<Result<Vec<_>>>()?;
    WaldschmidtTable::checked(set, rows)
}

impl WaldschmidtTable {
    /// Builds a table from certificates computed elsewhere, rejecting
    /// rows that are inconsistent with each other or with the lower bound.
    pub fn checked(set: PointSet, rows: Vec<AlphaCertificate>) -> Result<Self> {
        if rows.iter().any(|c| c.orbit != set) {
            return Err(Error::InvalidCertificate(format!("table for {set} has a row for another point set")));
        }
        table_checks(WaldschmidtTable { set, rows })
    }
}

fn table_checks(table: WaldschmidtTable) -> Result<WaldschmidtTable> {
    let set = table.set;
    if !table.respects_bound() {
        return Err(Error::Verification(format!("a ratio falls below the certified bound for {set}")));
    }
    if !table.subadditive() || !table.strictly_increasing() {
        return Err(Error::Verification("computed values are not subadditive and increasing".into()));
    }
    Ok(table)
}

/// The kernel at (`set`, `m`, `d`) is mapped into itself by each generator.
pub fn kernel_is_equivariant(group: &Group, arr: &Arrangement, set: PointSet, m: u32, d: u32) -> bool {
    let sys = vanishing_matrix(&set.points(arr), m, d);
    sys.kernel_forms()
        .iter()
        .all(|f| group.generators().iter().all(|g| sys.satisfied_by(&f.act(g))))
}

/// Modular and exact ranks agree on every system with at most `max_cols`
/// columns among the given multiplicities.
pub fn rank_oracle_claims(arr: &Arrangement, max_cols: usize) -> Vec<Claim> {
    let img = ModularImage::new(valid_primes(SCREENING_PRIME_START).next().expect("prime")).expect("valid");
    let mut out = Vec::new();
    for set in PointSet::ALL {
        let points = set.points(arr);
        for m in 1..=2 {
            for d in m.. {
                let sys = vanishing_matrix(&points, m, d);
                if sys.ncols() > max_cols {
                    break;
                }
                let id = format!("oracle.rank.{set}.m{m}.d{d}");
                let exact = sys.rank_exact();
                out.push(Claim::from_result(&id, "modular rank", sys.rank_mod(&img), |r| {
                    Claim::check(&id, "modular rank", r == exact, format!("mod {}: {r}, exact: {exact}", img.p))
                }));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arr() -> Arrangement {
        Arrangement::build(&Group::generate().unwrap()).unwrap()
    }

    #[test]
    fn system_shapes() {
        let a = arr();
        let sys = vanishing_matrix(&a.all_points(), 1, 1);
        assert_eq!((sys.nrows(), sys.ncols()), (31, 3));
        assert_eq!(sys.rank_exact(), 3);
        let sys = vanishing_matrix(&PointSet::Doubles.points(&a), 2, 6);
        assert_eq!((sys.nrows(), sys.ncols()), (45, 28));
        assert!(sys.rank_exact() < 28);
        let rows = sys.exact_rows();
        assert_eq!(rows.len(), sys.nrows());
    }

    #[test]
    fn degree_below_multiplicity_has_no_forms() {
        let a = arr();
        let p = &a.all_points()[..1];
        for (m, d) in [(3, 1), (4, 2), (5, 1), (3, 2)] {
            let sys = vanishing_matrix(p, m, d);
            assert!(sys.kernel_forms().is_empty(), "m = {m}, d = {d}");
        }
        assert_eq!(vanishing_matrix(p, 3, 3).kernel_forms().len(), 4);
    }

    #[test]
    fn modular_rows_reduce_exact_rows() {
        let a = arr();
        let sys = vanishing_matrix(&PointSet::Triples.points(&a), 3, 5);
        let img = ModularImage::new(10009).unwrap();
        let exact = sys.exact_rows();
        let modular = sys.modular_rows(&img).unwrap();
        for (er, mr) in exact.iter().zip(&modular) {
            let reduced: Vec<u64> = er.iter().map(|x| img.reduce(x).unwrap()).collect();
            assert_eq!(&reduced, mr);
        }
    }

    #[test]
    fn doubles_at_multiplicity_two() {
        let a = arr();
        let cert = alpha(&a, PointSet::Doubles, 2, None).unwrap();
        assert_eq!(cert.alpha, 6);
        validate_certificate(&cert, &a).unwrap();
        let mut bad = cert.clone();
        bad.lower_witness.rows.pop();
        assert!(validate_certificate(&bad, &a).is_err());
        let json = serde_json::to_string(&cert).unwrap();
        let back: AlphaCertificate = serde_json::from_str(&json).unwrap();
        validate_certificate(&back, &a).unwrap();
    }

    #[test]
    fn point_set_names() {
        for s in PointSet::ALL {
            assert_eq!(s.label().parse::<PointSet>().unwrap(), s);
        }
        assert_eq!("double".parse::<PointSet>().unwrap(), PointSet::Doubles);
        assert!("lines".parse::<PointSet>().is_err());
        assert_eq!(default_floor(PointSet::All, 3), 17);
        assert_eq!(default_floor(PointSet::Quintuples, 5), 12);
    }
}
