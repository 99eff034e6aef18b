//! The eight acceptance criteria, one printed line each.
//!
//! Criteria run in order in a single process, sharing one [`Context`]. The
//! picard criterion reuses the effectivity witness for `psi30` built under
//! criterion 4, so its time limit applies to the warm run.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use icosa_core::context::Context;
use icosa_core::report::{Claim, VerificationReport};
use icosa_core::suites::{equivariance_claims, run, Suite};
use icosa_core::symbolic::rank_oracle_claims;
use icosa_core::{FieldElement, HomogeneousPolynomial, Monomial, ProjectivePoint};

struct Line {
    number: usize,
    name: &'static str,
    passed: bool,
    elapsed: Duration,
    limit: Option<Duration>,
    detail: String,
}

impl Line {
    fn print(&self) {
        let limit = self.limit.map_or("no limit".to_string(), |l| format!("limit {} s", l.as_secs()));
        println!(
            "criterion {} {:<14} {}  {:>8.3} s ({limit})  {}",
            self.number,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        );
    }
}

fn from_claims(
    number: usize,
    name: &'static str,
    claims: &[Claim],
    required: &[&str],
    elapsed: Duration,
    limit: Option<Duration>,
) -> Line {
    let failed: Vec<&str> = claims.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect();
    let missing: Vec<&str> = required.iter().copied().filter(|id| !claims.iter().any(|c| c.id == *id)).collect();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let mut detail = format!("{} claims", claims.len());
    if !failed.is_empty() {
        detail.push_str(&format!("; failed {failed:?}"));
    }
    if !missing.is_empty() {
        detail.push_str(&format!("; missing {missing:?}"));
    }
    if !in_time {
        detail.push_str("; over time");
    }
    Line {
        number,
        name,
        passed: !claims.is_empty() && failed.is_empty() && missing.is_empty() && in_time,
        elapsed,
        limit,
        detail,
    }
}

fn suite(ctx: &Context, number: usize, s: Suite, required: &[&str], limit_secs: u64) -> Line {
    let start = Instant::now();
    let report: VerificationReport = run(s, ctx);
    let elapsed = start.elapsed();
    assert!(report.ids_unique(), "duplicate claim ids in {s}");
    from_claims(number, s.name(), &report.claims, required, elapsed, Some(Duration::from_secs(limit_secs)))
}

// Multiplicity oracle: move the point to the origin of an affine chart and
// read off the lowest degree present.

type Affine = HashMap<(u32, u32), FieldElement>;

fn binomial(n: u32, k: u32) -> FieldElement {
    let mut c = FieldElement::one();
    for i in 0..k {
        c = &(&c * &FieldElement::integer(i64::from(n - i))) * &FieldElement::from_ratio(1, i64::from(i + 1));
    }
    c
}

/// `(c + u)^e` as a list of `(power of u, coefficient)`.
fn shifted_power(c: &FieldElement, e: u32) -> Vec<(u32, FieldElement)> {
    (0..=e).map(|k| (k, &binomial(e, k) * &c.pow(e - k))).collect()
}

fn dehomogenize_at(f: &HomogeneousPolynomial, p: &ProjectivePoint) -> Affine {
    let coords = p.coords();
    let pivot = (0..3).find(|&i| !coords[i].is_zero()).expect("projective point");
    let inv = coords[pivot].inverse().expect("nonzero");
    let affine: Vec<FieldElement> = coords.iter().map(|c| c * &inv).collect();
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    let mut out = Affine::new();
    for (m, c) in f.terms() {
        let e = m.exps();
        let s = shifted_power(&affine[others[0]], e[others[0]]);
        let t = shifted_power(&affine[others[1]], e[others[1]]);
        for (i, a) in &s {
            for (j, b) in &t {
                let term = &(a * b) * c;
                *out.entry((*i, *j)).or_insert_with(FieldElement::zero) += &term;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn oracle_multiplicity(f: &HomogeneousPolynomial, p: &ProjectivePoint) -> Option<u32> {
    dehomogenize_at(f, p).keys().map(|(i, j)| i + j).min()
}

fn random_element(rng: &mut StdRng) -> FieldElement {
    FieldElement::from_ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4))
}

fn random_form(rng: &mut StdRng, d: u32) -> HomogeneousPolynomial {
    let terms = Monomial::all_of_degree(d).into_iter().map(|m| (m, random_element(rng)));
    HomogeneousPolynomial::from_terms(terms, d).expect("homogeneous")
}

/// A line through `p`: the cross product of `p` with a random vector.
fn random_line_through(rng: &mut StdRng, p: &ProjectivePoint) -> HomogeneousPolynomial {
    loop {
        let v = [random_element(rng), random_element(rng), random_element(rng)];
        let c = p.coords();
        let l = [
            &(&c[1] * &v[2]) - &(&c[2] * &v[1]),
            &(&c[2] * &v[0]) - &(&c[0] * &v[2]),
            &(&c[0] * &v[1]) - &(&c[1] * &v[0]),
        ];
        if l.iter().any(|x| !x.is_zero()) {
            return HomogeneousPolynomial::linear(l);
        }
    }
}

fn multiplicity_oracle_claims(ctx: &Context, pairs: usize) -> Vec<Claim> {
    let mut rng = StdRng::seed_from_u64(0xacce_0008);
    let points = ctx.arrangement.all_points();
    (0..pairs)
        .map(|n| {
            let p = if n % 5 == 4 {
                ProjectivePoint::new([random_element(&mut rng), random_element(&mut rng), FieldElement::one()])
                    .expect("z = 1")
            } else {
                points[rng.gen_range(0..points.len())].clone()
            };
            let through = rng.gen_range(0..=4u32);
            let d = rng.gen_range(0..=3);
            let mut f = random_form(&mut rng, d);
            for _ in 0..through {
                f = f.mul(&random_line_through(&mut rng, &p));
            }
            if n % 7 == 6 {
                f = f.mul(&ctx.invariants.phi6);
            }
            let got = f.multiplicity_at(&p).ok();
            let want = oracle_multiplicity(&f, &p);
            let id = format!("oracle.multiplicity.{n}");
            Claim::check(
                &id,
                "homogeneous multiplicity agrees with the affine lowest degree",
                got == want && want.is_none_or(|w| w >= through),
                format!("degree {} at {p}: {got:?} vs {want:?}", f.degree()),
            )
        })
        .collect()
}

#[test]
fn acceptance() {
    let ctx = Context::shared().expect("context builds");
    let mut lines = Vec::new();

    lines.push(suite(
        ctx,
        1,
        Suite::Group,
        &["group.order", "group.projective_order", "group.class_sizes", "group.character", "group.pseudoreflections"],
        5,
    ));
    lines.push(suite(
        ctx,
        2,
        Suite::Arrangement,
        &[
            "arrangement.histogram",
            "arrangement.per_line",
            "arrangement.pair_count",
            "arrangement.orbit.quintuple",
            "arrangement.orbit.triple",
            "arrangement.orbit.double",
            "arrangement.stabilizer.quintuple",
            "arrangement.stabilizer.triple",
            "arrangement.stabilizer.double",
        ],
        5,
    ));
    lines.push(suite(
        ctx,
        3,
        Suite::Invariants,
        &[
            "invariants.phi2.invariant",
            "invariants.phi6.invariant",
            "invariants.phi10.invariant",
            "invariants.phi6.polar",
            "invariants.phi10.polar",
            "invariants.phi15.mirrors",
            "invariants.phi6.doubles",
            "invariants.phi10.doubles",
            "invariants.relation.span",
            "invariants.relation.constant",
            "invariants.relation.coefficients",
            "invariants.relation.typo",
        ],
        60,
    ));
    lines.push(suite(
        ctx,
        4,
        Suite::Psi30,
        &[
            "psi30.alpha",
            "psi30.lambda",
            "psi30.mult.quintuple",
            "psi30.mult.triple",
            "psi30.mult.double",
            "psi30.irreducible",
        ],
        120,
    ));
    lines.push(suite(
        ctx,
        5,
        Suite::Picard,
        &[
            "picard.A2",
            "picard.B2",
            "picard.C2",
            "picard.D2",
            "picard.decomposition",
            "picard.D_orthogonal",
            "picard.euler_series",
            "picard.nef",
            "picard.sandwich",
        ],
        1,
    ));
    lines.push(suite(ctx, 6, Suite::Descent, &["descent.doubles", "descent.triples", "descent.quintuples"], 30));
    lines.push(suite(
        ctx,
        7,
        Suite::Interpolation,
        &[
            "interpolation.alpha.doubles.m2",
            "interpolation.alpha.triples.m2",
            "interpolation.alpha.quintuples.m5",
            "interpolation.all",
        ],
        600,
    ));

    let start = Instant::now();
    let ranks = rank_oracle_claims(&ctx.arrangement, 50);
    let mults = multiplicity_oracle_claims(ctx, 50);
    let equi = equivariance_claims(ctx);
    let elapsed = start.elapsed();
    let enough = ranks.len() >= 10 && mults.len() == 50 && !equi.is_empty();
    let mut all = ranks;
    all.extend(mults);
    all.extend(equi);
    let mut line = from_claims(8, "oracles", &all, &[], elapsed, None);
    line.passed &= enough;
    lines.push(line);

    for l in &lines {
        l.print();
    }
    let failed: Vec<usize> = lines.iter().filter(|l| !l.passed).map(|l| l.number).collect();
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}

#[test]
fn oracle_sees_tangency() {
    // y^2 - x z has multiplicity 1 at [0:0:1]; x^2 y has 3 at the origin.
    let p = ProjectivePoint::from_ints(0, 0, 1);
    let conic: HomogeneousPolynomial = "y^2 - x*z".parse().unwrap();
    assert_eq!(oracle_multiplicity(&conic, &p), Some(1));
    let cubic: HomogeneousPolynomial = "x^2*y".parse().unwrap();
    assert_eq!(oracle_multiplicity(&cubic, &p), Some(3));
    let off = ProjectivePoint::from_ints(1, 1, 1);
    assert_eq!(oracle_multiplicity(&cubic, &off), Some(0));
}
