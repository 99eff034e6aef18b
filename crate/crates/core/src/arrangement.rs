//! The 15 mirror lines and their 31 singular points.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::group::{Group, StabilizerType};
use crate::poly::{HomogeneousPolynomial, Monomial, ProjectivePoint};
use crate::report::Claim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointClass {
    Quintuple,
    Triple,
    Double,
}

impl PointClass {
    pub const ALL: [PointClass; 3] = [PointClass::Quintuple, PointClass::Triple, PointClass::Double];

    pub fn multiplicity(self) -> u32 {
        match self {
            PointClass::Quintuple => 5,
            PointClass::Triple => 3,
            PointClass::Double => 2,
        }
    }

    pub fn from_multiplicity(m: u32) -> Option<Self> {
        match m {
            5 => Some(PointClass::Quintuple),
            3 => Some(PointClass::Triple),
            2 => Some(PointClass::Double),
            _ => None,
        }
    }

    pub fn expected_count(self) -> usize {
        match self {
            PointClass::Quintuple => 6,
            PointClass::Triple => 10,
            PointClass::Double => 15,
        }
    }

    pub fn expected_stabilizer(self) -> (usize, StabilizerType) {
        match self {
            PointClass::Quintuple => (10, StabilizerType::Dihedral10),
            PointClass::Triple => (6, StabilizerType::Dihedral6),
            PointClass::Double => (4, StabilizerType::KleinFour),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PointClass::Quintuple => "quintuple",
            PointClass::Triple => "triple",
            PointClass::Double => "double",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub point: ProjectivePoint,
    pub multiplicity: u32,
    pub orbit_id: PointClass,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub lines: Vec<HomogeneousPolynomial>,
    pub points: Vec<SingularPoint>,
    /// Indices into `lines` through each point, parallel to `points`.
    pub incidence: Vec<Vec<usize>>,
}

pub fn line_coefficients(l: &HomogeneousPolynomial) -> [FieldElement; 3] {
    [Monomial(1, 0, 0), Monomial(0, 1, 0), Monomial(0, 0, 1)].map(|m| l.coeff(&m))
}

impl Arrangement {
    /// Meets all pairs of mirror lines and classifies the results.
    pub fn build(group: &Group) -> Result<Self> {
        Self::from_lines(group.mirror_lines()?)
    }

    pub fn from_lines(lines: Vec<HomogeneousPolynomial>) -> Result<Self> {
        let coeffs: Vec<[FieldElement; 3]> = lines.iter().map(line_coefficients).collect();
        let mut found: HashMap<ProjectivePoint, usize> = HashMap::new();
        let mut order = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let p = ProjectivePoint::meet(&coeffs[i], &coeffs[j])?;
                if !found.contains_key(&p) {
                    found.insert(p.clone(), order.len());
                    order.push(p);
                }
            }
        }
        let mut rows: Vec<(SingularPoint, Vec<usize>)> = Vec::new();
        for p in order {
            let through: Vec<usize> = (0..lines.len())
                .filter(|&k| lines[k].evaluate(&p).is_zero())
                .collect();
            let mult = through.len() as u32;
            let class = PointClass::from_multiplicity(mult).ok_or_else(|| {
                Error::Verification(format!("point {p} lies on {mult} lines"))
            })?;
            rows.push((SingularPoint { point: p, multiplicity: mult, orbit_id: class }, through));
        }
        rows.sort_by_key(|(s, _)| s.orbit_id);
        let (points, incidence) = rows.into_iter().unzip();
        let arr = Arrangement { lines, points, incidence };
        let hist = arr.histogram();
        if hist != [6, 10, 15] {
            return Err(Error::Verification(format!(
                "multiplicity histogram (5,3,2) = {hist:?}, expected [6, 10, 15]"
            )));
        }
        Ok(arr)
    }

    /// Counts of quintuple, triple and double points.
    pub fn histogram(&self) -> [usize; 3] {
        PointClass::ALL.map(|c| self.points.iter().filter(|p| p.orbit_id == c).count())
    }

    pub fn points_of(&self, class: PointClass) -> Vec<ProjectivePoint> {
        self.points
            .iter()
            .filter(|p| p.orbit_id == class)
            .map(|p| p.point.clone())
            .collect()
    }

    pub fn all_points(&self) -> Vec<ProjectivePoint> {
        self.points.iter().map(|p| p.point.clone()).collect()
    }

    pub fn representative(&self, class: PointClass) -> ProjectivePoint {
        self.points_of(class).into_iter().next().expect("nonempty class")
    }

    pub fn class_of(&self, p: &ProjectivePoint) -> Option<PointClass> {
        self.points.iter().find(|s| &s.point == p).map(|s| s.orbit_id)
    }

    /// For each line, the number of quintuple, triple and double points on it.
    pub fn per_line_counts(&self) -> Vec<[usize; 3]> {
        let mut out = vec![[0usize; 3]; self.lines.len()];
        for (s, through) in self.points.iter().zip(&self.incidence) {
            let slot = PointClass::ALL.iter().position(|&c| c == s.orbit_id).expect("class");
            for &l in through {
                out[l][slot] += 1;
            }
        }
        out
    }

    /// Sum of `C(mult, 2)` over all points; each pair of lines contributes once.
    pub fn line_pair_count(&self) -> u64 {
        self.points.iter().map(|p| crate::poly::binomial(p.multiplicity as u64, 2)).sum()
    }

    /// The product of all mirror forms.
    pub fn defining_polynomial(&self) -> HomogeneousPolynomial {
        HomogeneousPolynomial::product(&self.lines)
    }

    pub fn dump(&self) -> ArrangementDump {
        ArrangementDump {
            lines: self.lines.iter().map(|l| l.to_string()).collect(),
            points: self
                .points
                .iter()
                .zip(&self.incidence)
                .map(|(s, inc)| PointDump {
                    point: s.point.clone(),
                    multiplicity: s.multiplicity,
                    class: s.orbit_id,
                    lines: inc.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointDump {
    pub point: ProjectivePoint,
    pub multiplicity: u32,
    pub class: PointClass,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArrangementDump {
    pub lines: Vec<String>,
    pub points: Vec<PointDump>,
}

/// A point of the line `x = 0` that is not one of the 31.
fn smooth_point_on_x(arr: &Arrangement) -> ProjectivePoint {
    (2..)
        .map(|t| ProjectivePoint::from_ints(0, 1, t))
        .find(|p| arr.class_of(p).is_none())
        .expect("infinitely many candidates")
}

/// A point on none of the lines.
pub fn generic_point(arr: &Arrangement) -> ProjectivePoint {
    (1..)
        .map(|t| ProjectivePoint::from_ints(1, t + 1, 3 * t + 4))
        .find(|p| arr.lines.iter().all(|l| !l.evaluate(p).is_zero()))
        .expect("infinitely many candidates")
}

/// Orbit, stabilizer and closure checks for the arrangement.
pub fn verify_orbit_claims(arr: &Arrangement, group: &Group) -> Vec<Claim> {
    let mut out = Vec::new();
    for class in PointClass::ALL {
        let pts = arr.points_of(class);
        let orbit = group.orbit(&pts[0]);
        let same = orbit.size() == pts.len() && orbit.points.iter().all(|q| pts.contains(q));
        out.push(Claim::check(
            &format!("arrangement.orbit.{}", class.name()),
            "multiplicity classes are single orbits",
            same,
            format!("{} points, orbit of representative has {}", pts.len(), orbit.size()),
        ));
        let (order, ty) = class.expected_stabilizer();
        out.push(Claim::check(
            &format!("arrangement.stabilizer.{}", class.name()),
            "stabilizer orders",
            orbit.stabilizer_order == order && orbit.stabilizer_type() == ty,
            format!(
                "order {}, type {:?}, element orders {:?}",
                orbit.stabilizer_order,
                orbit.stabilizer_type(),
                orbit.stabilizer_exponent_profile
            ),
        ));
    }
    let smooth = smooth_point_on_x(arr);
    out.push(Claim::expect_eq(
        "arrangement.orbit.smooth_line_point",
        "orbit of a smooth point of a line",
        group.orbit(&smooth).size(),
        30,
    ));
    out.push(Claim::expect_eq(
        "arrangement.orbit.generic",
        "orbit of a generic point",
        group.orbit(&generic_point(arr)).size(),
        60,
    ));
    let line_orbit: std::collections::HashSet<HomogeneousPolynomial> = group
        .elements()
        .iter()
        .map(|g| arr.lines[0].act(&g.entries).monic())
        .collect();
    out.push(Claim::check(
        "arrangement.lines.single_orbit",
        "the 15 lines form one orbit",
        line_orbit.len() == 15 && arr.lines.iter().all(|l| line_orbit.contains(&l.monic())),
        format!("orbit of the first line has {} members", line_orbit.len()),
    ));
    let closed = group.elements().iter().all(|g| {
        arr.points.iter().all(|s| arr.class_of(&s.point.transform(&g.entries)) == Some(s.orbit_id))
    });
    out.push(Claim::check(
        "arrangement.points.closed",
        "point set is closed under the group",
        closed,
        "every element permutes each multiplicity class",
    ));
    out
}

/// Result of drawing the arrangement in an affine chart.
#[derive(Clone, Debug)]
pub struct Rendering {
    pub svg: String,
    pub finite_points: usize,
    pub points_at_infinity: Vec<SingularPoint>,
    pub lines_drawn: usize,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = dot(&a, &a).sqrt();
    a.map(|c| c / n)
}

fn color(class: PointClass) -> &'static str {
    match class {
        PointClass::Quintuple => "#c0392b",
        PointClass::Triple => "#2471a3",
        PointClass::Double => "#229954",
    }
}

/// Clips `a X + b Y + c = 0` to the square `[-r, r]^2`.
fn clip(a: f64, b: f64, c: f64, r: f64) -> Option<([f64; 2], [f64; 2])> {
    let mut hits: Vec<[f64; 2]> = Vec::new();
    let eps = 1e-9 * r;
    if b.abs() > 1e-12 {
        for x in [-r, r] {
            let y = -(a * x + c) / b;
            if y.abs() <= r + eps {
                hits.push([x, y]);
            }
        }
    }
    if a.abs() > 1e-12 {
        for y in [-r, r] {
            let x = -(b * y + c) / a;
            if x.abs() <= r + eps {
                hits.push([x, y]);
            }
        }
    }
    let mut best: Option<([f64; 2], [f64; 2], f64)> = None;
    for i in 0..hits.len() {
        for j in i + 1..hits.len() {
            let d = (hits[i][0] - hits[j][0]).powi(2) + (hits[i][1] - hits[j][1]).powi(2);
            if best.is_none_or(|(_, _, bd)| d > bd) {
                best = Some((hits[i], hits[j], d));
            }
        }
    }
    best.filter(|b| b.2 > 0.0).map(|(p, q, _)| (p, q))
}

/// Draws the arrangement in the chart where `patch` is nonzero.
///
/// The chart is the central projection onto the plane orthogonal to the
/// coefficient vector of `patch`. Decimal values appear only here.
pub fn render_affine(arr: &Arrangement, patch: &HomogeneousPolynomial) -> Result<Rendering> {
    if patch.degree() != 1 || patch.is_zero() {
        return Err(Error::Parse(format!("patch must be a nonzero linear form, got {patch}")));
    }
    let nc = line_coefficients(patch);
    if arr.points.iter().all(|s| patch.evaluate(&s.point).is_zero()) {
        return Err(Error::Verification("patch vanishes on every arrangement point".into()));
    }
    let n = nc.clone().map(|c| c.to_f64());
    let n2 = dot(&n, &n);
    let helper = if n[0].abs() < 0.9 * n2.sqrt() { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let u = normalize(cross(&n, &helper));
    let v = normalize(cross(&n, &u));

    let mut finite = Vec::new();
    let mut at_infinity = Vec::new();
    for s in &arr.points {
        if patch.evaluate(&s.point).is_zero() {
            at_infinity.push(s.clone());
            continue;
        }
        let p = s.point.coords().clone().map(|c| c.to_f64());
        let w = dot(&n, &p);
        finite.push((s.orbit_id, [dot(&u, &p) / w, dot(&v, &p) / w]));
    }
    let extent = finite.iter().flat_map(|(_, q)| [q[0].abs(), q[1].abs()]).fold(0.0, f64::max);
    let r = if extent > 0.0 { extent * 1.25 } else { 1.0 };

    let size = 800.0;
    let to_px = |q: [f64; 2]| [(q[0] + r) / (2.0 * r) * size, (r - q[1]) / (2.0 * r) * size];
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{h}" viewBox="0 0 {size} {h}">"#,
        h = size + 80.0
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut lines_drawn = 0;
    for l in &arr.lines {
        let c = line_coefficients(l).map(|x| x.to_f64());
        // points of the chart are n/|n|^2 + X u + Y v
        let (a, b, k) = (dot(&c, &u), dot(&c, &v), dot(&c, &n) / n2);
        if let Some((p, q)) = clip(a, b, k, r) {
            let (p, q) = (to_px(p), to_px(q));
            let _ = writeln!(
                svg,
                r##"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="#555" stroke-width="1.2"/>"##,
                p[0], p[1], q[0], q[1]
            );
            lines_drawn += 1;
        }
    }
    for (class, q) in &finite {
        let p = to_px(*q);
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{}" fill="{}"/>"#,
            p[0],
            p[1],
            class.multiplicity() + 2,
            color(*class)
        );
    }
    let mut y = size + 20.0;
    for class in PointClass::ALL {
        let inf = at_infinity.iter().filter(|s| s.orbit_id == class).count();
        let _ = writeln!(
            svg,
            r#"<text x="10" y="{y}" font-family="sans-serif" font-size="14" fill="{}">{} points: {} finite, {} at infinity</text>"#,
            color(class),
            class.name(),
            arr.points_of(class).len() - inf,
            inf
        );
        y += 20.0;
    }
    let _ = writeln!(
        svg,
        r##"<text x="10" y="{y}" font-family="sans-serif" font-size="12" fill="#333">chart {patch} != 0</text>"##
    );
    svg.push_str("</svg>\n");
    Ok(Rendering { svg, finite_points: finite.len(), points_at_infinity: at_infinity, lines_drawn })
}

/// The default chart `y - w z`.
pub fn default_patch() -> HomogeneousPolynomial {
    "y - w*z".parse().expect("literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrangement() -> (Group, Arrangement) {
        let g = Group::generate().unwrap();
        let a = Arrangement::build(&g).unwrap();
        (g, a)
    }

    #[test]
    fn counts() {
        let (_, a) = arrangement();
        assert_eq!(a.lines.len(), 15);
        assert_eq!(a.points.len(), 31);
        assert_eq!(a.histogram(), [6, 10, 15]);
        assert_eq!(a.line_pair_count(), 105);
        assert!(a.per_line_counts().iter().all(|c| *c == [2, 2, 2]));
        assert_eq!(a.class_of(&ProjectivePoint::from_ints(0, 0, 1)), Some(PointClass::Double));
        assert_eq!(a.class_of(&ProjectivePoint::from_ints(1, 1, 1)), Some(PointClass::Triple));
    }

    #[test]
    fn orbit_claims_pass() {
        let (g, a) = arrangement();
        for c in verify_orbit_claims(&a, &g) {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn default_render() {
        let (_, a) = arrangement();
        let r = render_affine(&a, &default_patch()).unwrap();
        assert_eq!(r.finite_points, 26);
        assert_eq!(r.points_at_infinity.len(), 5);
        assert!(r.points_at_infinity.iter().all(|s| s.orbit_id == PointClass::Double));
        assert_eq!(r.lines_drawn, 15);
        assert!(r.svg.contains("5 at infinity"));
    }

    #[test]
    fn render_in_z_chart() {
        let (_, a) = arrangement();
        let r = render_affine(&a, &HomogeneousPolynomial::z()).unwrap();
        let finite = a.points.iter().filter(|s| !s.point.coords()[2].is_zero()).count();
        assert_eq!(r.finite_points, finite);
        assert!(render_affine(&a, &"x^2".parse().unwrap()).is_err());
    }

    #[test]
    fn rejects_bad_line_sets() {
        let lines = vec![HomogeneousPolynomial::x(), HomogeneousPolynomial::y(), HomogeneousPolynomial::z()];
        assert!(matches!(Arrangement::from_lines(lines), Err(Error::Verification(_))));
    }
}
