//! Verification suites: each gathers the checks for one part of the
//! computation into a [`VerificationReport`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arrangement::{verify_orbit_claims, PointClass};
use crate::context::Context;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::invariants::{
    check_relation, express_in_invariants, intersection_claims, invariant_subspace, is_invariant,
    orbit_multiplicities, polar_product, quotient_map, InvariantBasisElement, WeightedPoint,
};
use crate::picard::{
    descent_bound, nef_lower_bound, verify_decomposition, verify_euler_series, verify_sandwich, DescentCertificate,
    DivisorClass, NefCertificate, ORBIT_SIZES,
};
use crate::poly::{HomogeneousPolynomial, ProjectivePoint};
use crate::report::{Claim, VerificationReport};
use crate::symbolic::{alpha, kernel_is_equivariant, validate_certificate, AlphaCertificate, WaldschmidtTable, PointSet};

pub type AlphaSource<'a> = dyn FnMut(PointSet, u32) -> Result<AlphaCertificate> + 'a;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Group,
    Arrangement,
    Invariants,
    Psi30,
    Picard,
    Descent,
    Interpolation,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Group,
        Suite::Arrangement,
        Suite::Invariants,
        Suite::Psi30,
        Suite::Picard,
        Suite::Descent,
        Suite::Interpolation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Arrangement => "arrangement",
            Suite::Invariants => "invariants",
            Suite::Psi30 => "psi30",
            Suite::Picard => "picard",
            Suite::Descent => "descent",
            Suite::Interpolation => "interpolation",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

pub fn run(suite: Suite, ctx: &Context) -> VerificationReport {
    run_with(suite, ctx, &mut |s, m| alpha(&ctx.arrangement, s, m, None))
}

/// As [`run`], taking symbolic-power certificates from `alpha_of` (for
/// instance a cache); every certificate is revalidated before use.
pub fn run_with(suite: Suite, ctx: &Context, alpha_of: &mut AlphaSource<'_>) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new(suite.name());
    match suite {
        Suite::Group => report.extend(group_claims(ctx)),
        Suite::Arrangement => report.extend(arrangement_claims(ctx)),
        Suite::Invariants => report.extend(invariant_claims(ctx)),
        Suite::Psi30 => report.extend(psi30_claims(ctx)),
        Suite::Picard => report.extend(picard_claims(ctx)),
        Suite::Descent => report.extend(descent_claims(ctx)),
        Suite::Interpolation => report.extend(interpolation_claims_with(ctx, alpha_of)),
        Suite::All => {
            for s in Suite::EACH {
                report.extend(run_with(s, ctx, alpha_of).claims);
            }
        }
    }
    report.timing_ms = start.elapsed().as_millis();
    report
}

fn failed(id: &str, anchor: &str, e: Error) -> Claim {
    Claim::from_result::<()>(id, anchor, Err(e), |_| unreachable!())
}

// ---------------------------------------------------------------------------

/// `(size, trace)` pairs of the character row of the defining representation.
pub fn expected_class_row() -> Vec<(usize, FieldElement)> {
    let t = |s: &str| s.parse::<FieldElement>().expect("literal");
    vec![
        (1, t("3")),
        (1, t("-3")),
        (15, t("1")),
        (15, t("-1")),
        (20, t("0")),
        (12, t("w")),
        (12, t("1-w")),
        (20, t("0")),
        (12, t("w-1")),
        (12, t("-w")),
    ]
}

fn sorted_row(mut v: Vec<(usize, FieldElement)>) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = v.drain(..).map(|(s, t)| (s, t.to_string())).collect();
    out.sort();
    out
}

pub fn group_claims(ctx: &Context) -> Vec<Claim> {
    let g = &ctx.group;
    let classes = g.class_data();
    let mut sizes: Vec<usize> = classes.iter().map(|c| c.size).collect();
    sizes.sort_unstable();
    let mut want_sizes: Vec<usize> = expected_class_row().iter().map(|(s, _)| *s).collect();
    want_sizes.sort_unstable();
    let got_row = sorted_row(classes.iter().map(|c| (c.size, c.trace.clone())).collect());
    let want_row = sorted_row(expected_class_row());
    let ok_gens = g.generators().iter().all(|m| (m * m) == crate::Matrix3::identity());
    vec![
        Claim::check("group.generators", "generators are involutions", ok_gens, "g^2 = h^2 = i^2 = 1"),
        Claim::expect_eq("group.order", "group order", g.order(), 120),
        Claim::expect_eq("group.projective_order", "projective image", g.projective_image().len(), 60),
        Claim::check(
            "group.class_sizes",
            "conjugacy class sizes",
            sizes == want_sizes,
            format!("{sizes:?}"),
        ),
        Claim::check(
            "group.character",
            "character of the defining representation",
            got_row == want_row,
            got_row.iter().map(|(s, t)| format!("{s}:{t}")).collect::<Vec<_>>().join(" "),
        ),
        Claim::expect_eq("group.pseudoreflections", "pseudoreflections", g.pseudoreflections().len(), 15),
        Claim::check(
            "group.central",
            "-1 lies in the group",
            g.contains(&crate::Matrix3::diag(-1, -1, -1)),
            "center of order 2",
        ),
    ]
}

// ---------------------------------------------------------------------------

pub fn arrangement_claims(ctx: &Context) -> Vec<Claim> {
    let arr = &ctx.arrangement;
    let g = &ctx.group;
    let mut out = Vec::new();
    let mirrors = g.mirror_lines();
    out.push(Claim::from_result("arrangement.mirrors", "lines are the mirrors", mirrors, |m| {
        let same = m.len() == 15 && m.iter().all(|l| arr.lines.iter().any(|k| k.monic() == l.monic()));
        Claim::check("arrangement.mirrors", "lines are the mirrors", same, format!("{} mirror lines", m.len()))
    }));
    out.push(Claim::expect_eq("arrangement.points", "singular points", arr.points.len(), 31));
    let h = arr.histogram();
    out.push(Claim::check(
        "arrangement.histogram",
        "6 quintuple, 10 triple, 15 double",
        h == [6, 10, 15],
        format!("quintuple {}, triple {}, double {}", h[0], h[1], h[2]),
    ));
    let per_line = arr.per_line_counts();
    out.push(Claim::check(
        "arrangement.per_line",
        "each line meets 2 + 2 + 2 singular points",
        per_line.iter().all(|c| *c == [2, 2, 2]),
        format!("{} lines checked", per_line.len()),
    ));
    out.push(Claim::expect_eq(
        "arrangement.pair_count",
        "sum of C(mult, 2) equals C(15, 2)",
        arr.line_pair_count(),
        105,
    ));
    out.extend(verify_orbit_claims(arr, g));
    let p5: ProjectivePoint = "[w:0:1]".parse().expect("literal");
    let alt: ProjectivePoint = "[w+1:0:2]".parse().expect("literal");
    out.push(Claim::check(
        "arrangement.p5",
        "[w:0:1] is a quintuple point",
        arr.class_of(&p5) == Some(PointClass::Quintuple),
        format!("[w+1:0:2] is {}", arr.class_of(&alt).map_or("not a singular point", |c| c.name())),
    ));
    out
}

// ---------------------------------------------------------------------------

fn weighted(s: [&str; 3]) -> WeightedPoint {
    WeightedPoint::from_strs(s).expect("literal")
}

fn strip_by_lines(f: &HomogeneousPolynomial, lines: &[HomogeneousPolynomial]) -> Result<HomogeneousPolynomial> {
    lines.iter().try_fold(f.clone(), |acc, l| acc.divide_exact(l))
}

pub fn invariant_claims(ctx: &Context) -> Vec<Claim> {
    let (g, arr, inv) = (&ctx.group, &ctx.arrangement, &ctx.invariants);
    let gens = inv.generators();
    let mut out = Vec::new();
    for (name, f) in [("phi2", &inv.phi2), ("phi6", &inv.phi6), ("phi10", &inv.phi10)] {
        out.push(Claim::check(
            &format!("invariants.{name}.invariant"),
            "invariant under the generators",
            is_invariant(f, g),
            format!("degree {}", f.degree()),
        ));
    }
    let signs: Vec<String> = g
        .generators()
        .iter()
        .map(|m| {
            let a = inv.phi15.act(m);
            if a == inv.phi15 { "+".into() } else if a == inv.phi15.neg() { "-".into() } else { "?".into() }
        })
        .collect();
    out.push(Claim::check(
        "invariants.phi15.semi_invariant",
        "phi15 changes at most by sign",
        signs.iter().all(|s| s != "?"),
        format!("signs under g, h, i: {}", signs.join(" ")),
    ));
    for t in &inv.transcription {
        out.push(Claim::check(
            &format!("invariants.{}.transcription", t.name),
            "displayed formula",
            t.invariant && !t.used_reconstruction,
            match &t.diff {
                None => format!("displayed form equals {} times the polar product", t.ratio.clone().unwrap_or_default()),
                Some(d) => format!("reconstructed; displayed minus reconstruction = {d}"),
            },
        ));
    }
    for (id, class, f) in [
        ("invariants.phi6.polar", PointClass::Quintuple, &inv.phi6),
        ("invariants.phi10.polar", PointClass::Triple, &inv.phi10),
        ("invariants.phi15.polar", PointClass::Double, &inv.phi15),
    ] {
        let pp = polar_product(&arr.points_of(class));
        let r = pp.proportionality(f);
        out.push(Claim::check(
            id,
            "product of polar forms of an orbit",
            r.is_some(),
            match r {
                Some(c) => format!("polar product = ({c}) * form"),
                None => "not proportional".into(),
            },
        ));
    }
    out.push(Claim::from_result(
        "invariants.phi15.mirrors",
        "phi15 is the product of the mirror forms",
        strip_by_lines(&inv.phi15, &arr.lines),
        |q| Claim::check("invariants.phi15.mirrors", "phi15 is the product of the mirror forms", q.degree() == 0, format!("unit {q}")),
    ));
    out.push(Claim::check(
        "invariants.phi15.points",
        "phi15 vanishes at all singular points",
        arr.all_points().iter().all(|p| inv.phi15.evaluate(p).is_zero()),
        "31 points",
    ));
    for (name, f) in [("phi6", &inv.phi6), ("phi10", &inv.phi10)] {
        let mults: Vec<u32> = arr
            .points_of(PointClass::Double)
            .iter()
            .map(|p| f.multiplicity_at(p).unwrap_or(u32::MAX))
            .collect();
        out.push(Claim::check(
            &format!("invariants.{name}.doubles"),
            "double at every double point",
            mults.iter().all(|&m| m == 2),
            format!("multiplicities {:?}", mults.iter().collect::<std::collections::BTreeSet<_>>()),
        ));
    }
    out.extend(relation_claims(ctx));
    out.extend(psi_form_claims(ctx));
    out.extend(subspace_claims(ctx));

    let p2 = ProjectivePoint::from_ints(0, 0, 1);
    let p3 = ProjectivePoint::from_ints(1, 1, 1);
    let psi_gens = ctx.psi().map_generators();
    for (id, p, want) in [
        ("invariants.quotient.p2", &p2, weighted(["1", "0", "0"])),
        ("invariants.quotient.p3", &p3, weighted(["3", "w", "45*w-60"])),
    ] {
        let phi_img = quotient_map(p, &gens);
        let psi_img = quotient_map(p, &psi_gens);
        out.push(match (phi_img, psi_img) {
            (Ok(a), Ok(b)) => Claim::check(
                id,
                "image in P(2,6,10)",
                a.weighted_eq(&want),
                format!(
                    "phi-map {a}, psi-map {b}; displayed {want} matches the {}",
                    match (a.weighted_eq(&want), b.weighted_eq(&want)) {
                        (true, true) => "both maps",
                        (true, false) => "phi-map",
                        (false, true) => "psi-map",
                        (false, false) => "neither map",
                    }
                ),
            ),
            (Err(e), _) | (_, Err(e)) => failed(id, "image in P(2,6,10)", e),
        });
    }
    let orbit_images_agree = PointClass::ALL.iter().all(|c| {
        let pts = arr.points_of(*c);
        let first = quotient_map(&pts[0], &gens);
        pts.iter()
            .all(|p| matches!((&first, quotient_map(p, &gens)), (Ok(a), Ok(b)) if a.weighted_eq(&b)))
    });
    out.push(Claim::check(
        "invariants.quotient.orbits",
        "the quotient map is constant on orbits",
        orbit_images_agree,
        "checked on all 31 singular points",
    ));
    let gp = crate::arrangement::generic_point(arr);
    let orbit = g.orbit(&gp);
    let img = quotient_map(&gp, &gens);
    let fibre_ok = orbit.size() == 60
        && img.as_ref().is_ok_and(|a| {
            orbit.points.iter().all(|q| quotient_map(q, &gens).is_ok_and(|b| b.weighted_eq(a)))
        });
    out.push(Claim::check(
        "invariants.quotient.generic_fibre",
        "generic fibres have 60 points",
        fibre_ok,
        format!("orbit of {gp} has {} points with one image", orbit.size()),
    ));

    let forms: Vec<(&str, HomogeneousPolynomial)> = {
        let psi = ctx.psi();
        vec![
            ("phi6", inv.phi6.clone()),
            ("phi10", inv.phi10.clone()),
            ("phi15", inv.phi15.clone()),
            ("psi6", psi.psi6),
            ("psi6'", psi.psi6p),
            ("psi10", psi.psi10),
        ]
    };
    for (name, f) in &forms {
        let id = format!("invariants.{name}.orbit_multiplicities");
        out.push(Claim::from_result(&id, "constant multiplicity on orbits, at least 2 where it vanishes", orbit_multiplicities(f, arr), |m| {
            let ok = m.iter().all(|(lo, hi)| lo == hi && (*lo == 0 || *lo >= 2));
            Claim::check(
                &id,
                "constant multiplicity on orbits, at least 2 where it vanishes",
                ok,
                format!("quintuple {:?}, triple {:?}, double {:?}", m[0], m[1], m[2]),
            )
        }));
    }
    out.extend(intersection_claims(inv));
    out
}

fn relation_claims(ctx: &Context) -> Vec<Claim> {
    let anchor = "relation for phi15^2";
    match check_relation(&ctx.invariants) {
        Err(e) => vec![failed("invariants.relation", anchor, e)],
        Ok(rel) => {
            let nonzero = rel.rows.iter().filter(|r| !r.computed.is_zero()).count();
            let typos: Vec<String> = rel
                .typos
                .iter()
                .map(|t| match t.resolved_to {
                    Some(m) => format!("displayed {} resolves to {m}", t.displayed_element),
                    None => format!("displayed {} unresolved", t.displayed_element),
                })
                .collect();
            let listed_match = rel.rows.iter().all(|r| r.displayed.as_ref().is_none_or(|d| d == &r.computed));
            vec![
                Claim::check(
                    "invariants.relation.span",
                    anchor,
                    rel.rows.len() == 13,
                    format!("phi15^2 in the span of {} monomials, {nonzero} nonzero", rel.rows.len()),
                ),
                Claim::check("invariants.relation.constant", anchor, !rel.c.is_zero(), format!("c = {}", rel.c)),
                Claim::check(
                    "invariants.relation.coefficients",
                    anchor,
                    listed_match,
                    "every displayed degree-30 coefficient equals c times the computed one",
                ),
                Claim::check("invariants.relation.typo", anchor, rel.matched, typos.join("; ")),
            ]
        }
    }
}

fn psi_form_claims(ctx: &Context) -> Vec<Claim> {
    let psi = ctx.psi();
    let gens = ctx.invariants.generators();
    let id = "invariants.psi6p.expansion";
    let anchor = "psi6' in terms of phi2, phi6";
    let want: BTreeMap<InvariantBasisElement, FieldElement> = [
        (InvariantBasisElement::new(3, 0, 0), "-25"),
        (InvariantBasisElement::new(0, 1, 0), "675*(w-1)"),
    ]
    .into_iter()
    .map(|(m, s)| (m, s.parse().expect("literal")))
    .collect();
    let mut out = vec![Claim::from_result(id, anchor, express_in_invariants(&psi.psi6p, &gens), |c| {
        let got: BTreeMap<InvariantBasisElement, FieldElement> = c.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let text: Vec<String> = got.iter().map(|(m, v)| format!("({v})*{m}")).collect();
        Claim::check(id, anchor, got == want, text.join(" + "))
    })];
    let expr = psi.psi6p.sub(&psi.psi2.pow(3).scale(&FieldElement::from_ratio(-25, 27)).add(&psi.psi6.scale(&FieldElement::integer(-225))));
    out.push(Claim::check(
        "invariants.psi6p.in_psi",
        "psi6' = -25(psi2^3/27 + 9 psi6)",
        expr.is_zero(),
        "exact identity",
    ));
    out
}

fn subspace_claims(ctx: &Context) -> Vec<Claim> {
    let gens = ctx.invariants.generators();
    let psi = ctx.psi();
    let cases: [(&str, u32, [u32; 3], Option<&HomogeneousPolynomial>); 4] = [
        ("invariants.subspace.d6_doubles", 6, [0, 0, 1], Some(&psi.psi6)),
        ("invariants.subspace.d6_triples", 6, [0, 1, 0], Some(&psi.psi6p)),
        ("invariants.subspace.d10", 10, [0, 1, 1], Some(&psi.psi10)),
        ("invariants.subspace.d12", 12, [5, 0, 0], None),
    ];
    cases
        .into_iter()
        .map(|(id, d, m, expected)| {
            let anchor = "unique invariant with prescribed vanishing";
            Claim::from_result(id, anchor, invariant_subspace(&gens, &ctx.arrangement, d, m), |s| {
                let matches = match (expected, s.forms.first()) {
                    (Some(e), Some(f)) => f.proportionality(e).is_some(),
                    (None, Some(_)) => true,
                    _ => false,
                };
                Claim::check(
                    id,
                    anchor,
                    s.dimension() == 1 && matches,
                    format!("degree {d}, multiplicities {m:?}: dimension {}", s.dimension()),
                )
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------

pub fn psi30_claims(ctx: &Context) -> Vec<Claim> {
    let anchor = "psi30";
    let sys = match ctx.psi30() {
        Ok(s) => s,
        Err(e) => return vec![failed("psi30.build", anchor, e)],
    };
    let one = FieldElement::one();
    let two = FieldElement::integer(2);
    let expected = [two.clone(), one.clone(), two, one];
    let mut out = vec![
        Claim::expect_eq("psi30.alpha", "congruence constant", sys.alpha_const.clone(), -FieldElement::one()),
        Claim::check(
            "psi30.lambda",
            "solution of the 5x4 system",
            sys.lambda == expected,
            format!("one-dimensional, spanned by ({})", sys.lambda.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")),
        ),
        Claim::check(
            "psi30.lambda.derived",
            "conditions from derivatives at a triple point and the value at [w:0:1]",
            sys.derived_lambda.as_slice() == expected.as_slice(),
            format!("({})", sys.derived_lambda.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")),
        ),
    ];
    out.push(Claim::from_result("psi30.witness", anchor, ctx.witness_c(), |w| {
        Claim::check(
            "psi30.witness",
            anchor,
            w.degree == 30,
            format!("invariant up to sign, orbit multiplicities {:?}", w.multiplicities),
        )
    }));
    for (k, (class, need)) in PointClass::ALL.iter().zip([2u32, 6, 6]).enumerate() {
        out.push(Claim::check(
            &format!("psi30.mult.{}", class.name()),
            "multiplicities of psi30",
            sys.multiplicities[k] >= need,
            format!("minimum over {} points: {} (need {need})", ORBIT_SIZES[k], sys.multiplicities[k]),
        ));
    }
    match ctx.psi30_irreducibility() {
        Err(e) => out.push(failed("psi30.irreducible", anchor, e)),
        Ok(rep) => {
            let show = |w: &Result<crate::weighted::IrreducibilityWitness>| match w {
                Ok(crate::weighted::IrreducibilityWitness::NoLinearFactor { obstruction, value, .. }) => {
                    format!("coefficient of w2^{}*w6^{} is the constant {value}", obstruction[0], obstruction[1])
                }
                Ok(other) => format!("{other:?}"),
                Err(e) => e.to_string(),
            };
            out.push(Claim::check(
                "psi30.pullback",
                "weighted form pulls back to psi30",
                rep.pullback_matches,
                crate::weighted::Named(&rep.weighted_form, &["w2", "w6", "w10"]).to_string(),
            ));
            out.push(Claim::check(
                "psi30.irreducible",
                "no factor linear in w10",
                matches!(rep.witness, Ok(crate::weighted::IrreducibilityWitness::NoLinearFactor { .. })),
                show(&rep.witness),
            ));
            out.push(Claim::check(
                "psi30.irreducible.displayed",
                "displayed weighted form",
                rep.displayed_witness.is_ok(),
                show(&rep.displayed_witness),
            ));
            out.push(Claim::check(
                "psi30.degree_parity",
                "divisors of w6^3 w6'^2",
                !rep.divisor_degrees.contains(&10),
                format!("weighted degrees {:?}", rep.divisor_degrees),
            ));
            out.push(Claim::check("psi30.mirror_free", "no mirror line divides psi30", rep.mirror_free, "15 lines"));
        }
    }
    out
}

// ---------------------------------------------------------------------------

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn nef_certificate(ctx: &Context) -> Result<NefCertificate> {
    Ok(NefCertificate::for_d(ctx.witness_a()?, ctx.witness_b()?, ctx.witness_c()?))
}

pub fn picard_claims(ctx: &Context) -> Vec<Claim> {
    let mut out = verify_decomposition();
    out.push(verify_euler_series(10));
    let cls: DivisorClass = "42H-5E5-7E3-8E2".parse().expect("literal");
    out.push(Claim::from_result("picard.chi_example", "chi(D + 2H)", cls.euler_char(), |v| {
        Claim::expect_eq("picard.chi_example", "chi(D + 2H)", v, 36)
    }));
    let anchor = "nef certificate for D";
    out.push(Claim::from_result("picard.nef", anchor, nef_certificate(ctx).and_then(|c| nef_lower_bound(&c)), |b| {
        Claim::check("picard.nef", anchor, b == ratio(11, 2), format!("lower bound {b}"))
    }));
    out.push(verify_sandwich(100));
    out
}

pub fn descent_certificates(ctx: &Context) -> Result<Vec<(PointSet, DescentCertificate)>> {
    let make = |w: crate::picard::EffectivityWitness, k: usize| {
        let class = w.class();
        DescentCertificate { class, orbit_size: ORBIT_SIZES[k], witness: w }
    };
    Ok(vec![
        (PointSet::Doubles, make(ctx.witness_b()?, 2)),
        (PointSet::Triples, make(ctx.witness_triples()?, 1)),
        (PointSet::Quintuples, make(ctx.witness_quintuples()?, 0)),
    ])
}

pub fn descent_claims(ctx: &Context) -> Vec<Claim> {
    let anchor = "descent certificate";
    let certs = match descent_certificates(ctx) {
        Ok(c) => c,
        Err(e) => return vec![failed("descent.witnesses", anchor, e)],
    };
    certs
        .into_iter()
        .map(|(set, cert)| {
            let id = format!("descent.{set}");
            let want = set.lower_bound();
            Claim::from_result(&id, anchor, descent_bound(&cert), |b| {
                Claim::check(
                    &id,
                    anchor,
                    b == want,
                    format!("{} via {} (class {}): {b}", set, cert.witness.label, cert.class),
                )
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------

pub fn interpolation_claims(ctx: &Context) -> Vec<Claim> {
    interpolation_claims_with(ctx, &mut |s, m| alpha(&ctx.arrangement, s, m, None))
}

fn fetch(arr: &crate::arrangement::Arrangement, alpha_of: &mut AlphaSource<'_>, set: PointSet, m: u32) -> Result<AlphaCertificate> {
    let c = alpha_of(set, m)?;
    if c.orbit != set || c.m != m {
        return Err(Error::InvalidCertificate(format!("certificate is for {} m = {}", c.orbit, c.m)));
    }
    validate_certificate(&c, arr)?;
    Ok(c)
}

pub fn interpolation_claims_with(ctx: &Context, alpha_of: &mut AlphaSource<'_>) -> Vec<Claim> {
    let arr = &ctx.arrangement;
    let mut out = Vec::new();
    for (set, m, want) in [(PointSet::Doubles, 2, 6), (PointSet::Triples, 2, 6), (PointSet::Quintuples, 5, 12)] {
        let id = format!("interpolation.alpha.{set}.m{m}");
        let anchor = "initial degree of a symbolic power";
        let r = fetch(arr, alpha_of, set, m);
        out.push(Claim::from_result(&id, anchor, r, |c| {
            Claim::check(
                &id,
                anchor,
                c.alpha == want,
                format!("alpha = {}, ratio {}, lower witness mod {}", c.alpha, c.ratio(), c.lower_witness.prime),
            )
        }));
    }
    let anchor = "alpha(I^(m))/m >= 11/2";
    let table = [1, 2, 3, 4]
        .into_iter()
        .map(|m| fetch(arr, alpha_of, PointSet::All, m))
        .collect::<Result<Vec<_>>>()
        .and_then(|rows| WaldschmidtTable::checked(PointSet::All, rows));
    out.push(Claim::from_result("interpolation.all", anchor, table, |t| {
        let text: Vec<String> = t.rows.iter().map(|c| format!("m={}: {} ({})", c.m, c.alpha, c.ratio())).collect();
        Claim::check(
            "interpolation.all",
            anchor,
            t.respects_bound() && t.subadditive() && t.strictly_increasing(),
            format!("{}; subadditive and increasing", text.join(", ")),
        )
    }));
    out
}

// ---------------------------------------------------------------------------

/// Checks shared with the property suite that are cheap enough to run often.
pub fn equivariance_claims(ctx: &Context) -> Vec<Claim> {
    [(PointSet::Doubles, 2, 6), (PointSet::Triples, 2, 7), (PointSet::Quintuples, 3, 7), (PointSet::All, 1, 7)]
        .into_iter()
        .map(|(set, m, d)| {
            Claim::check(
                &format!("oracle.equivariance.{set}.m{m}.d{d}"),
                "kernels are closed under the group",
                kernel_is_equivariant(&ctx.group, &ctx.arrangement, set, m, d),
                format!("{set}, m = {m}, d = {d}"),
            )
        })
        .collect()
}

/// Summary used by `bounds`.
#[derive(Clone, Debug)]
pub struct Bounds {
    pub set: PointSet,
    pub lower: BigRational,
    pub lower_source: String,
    /// Best ratio `alpha(m)/m` among computed values.
    pub upper: Option<BigRational>,
    pub upper_source: String,
}

impl Bounds {
    pub fn verdict(&self) -> Option<BigRational> {
        match &self.upper {
            Some(u) if *u == self.lower => Some(u.clone()),
            _ => None,
        }
    }
}

pub fn bounds(ctx: &Context, set: PointSet) -> Result<Bounds> {
    bounds_with(ctx, set, &mut |s, m| alpha(&ctx.arrangement, s, m, None))
}

/// As [`bounds`], obtaining certificates from `alpha_of`; each one is revalidated.
pub fn bounds_with(
    ctx: &Context,
    set: PointSet,
    alpha_of: &mut AlphaSource<'_>,
) -> Result<Bounds> {
    let arr = &ctx.arrangement;
    let (lower, lower_source, ms): (BigRational, String, Vec<u32>) = match set {
        PointSet::All => (nef_lower_bound(&nef_certificate(ctx)?)?, "nef certificate 6D = 4A + 5B + 5C".into(), vec![1, 2]),
        _ => {
            let (_, cert) = descent_certificates(ctx)?
                .into_iter()
                .find(|(s, _)| *s == set)
                .expect("one per orbit");
            let b = descent_bound(&cert)?;
            let src = format!("descent via {} ({})", cert.witness.label, cert.class);
            let ms = match set {
                PointSet::Quintuples => vec![5],
                _ => vec![2],
            };
            (b, src, ms)
        }
    };
    let mut upper: Option<(BigRational, u32, u32)> = None;
    for m in ms {
        let c = fetch(arr, alpha_of, set, m)?;
        if upper.as_ref().is_none_or(|(u, _, _)| c.ratio() < *u) {
            upper = Some((c.ratio(), c.m, c.alpha));
        }
    }
    let (upper, upper_source) = match upper {
        Some((u, m, a)) => (Some(u), format!("alpha(I^({m})) = {a}")),
        None => (None, String::new()),
    };
    Ok(Bounds { set, lower, lower_source, upper, upper_source })
}

/// `(k, (55k+2)/(10k))` for the sandwich table.
pub fn sandwich_table(kmax: i64) -> Vec<(i64, BigRational)> {
    (1..=kmax).map(|k| (k, crate::picard::sandwich_term(k))).collect()
}
