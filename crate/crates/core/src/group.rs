//! The icosahedral reflection group `A5 x Z2` in its 3-dimensional
//! orthogonal representation over `Q(w)`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Matrix3;
use crate::poly::{HomogeneousPolynomial, ProjectivePoint};

/// Closure size above which the generators are rejected.
pub const GENERATION_GUARD: usize = 240;

/// A group element together with its projective normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub entries: Matrix3,
    pub canonical_projective: Matrix3,
}

impl GroupElement {
    pub fn new(entries: Matrix3) -> Self {
        let canonical_projective = entries.canonical_projective();
        GroupElement { entries, canonical_projective }
    }

    pub fn trace(&self) -> FieldElement {
        self.entries.trace()
    }

    pub fn order(&self) -> u32 {
        self.entries.order(GENERATION_GUARD as u32).expect("finite order")
    }

    pub fn projective_order(&self) -> u32 {
        self.entries.projective_order(GENERATION_GUARD as u32).expect("finite order")
    }

    /// Order 2 with a 2-dimensional fixed space.
    pub fn is_pseudoreflection(&self) -> bool {
        self.entries != Matrix3::identity()
            && (&self.entries * &self.entries) == Matrix3::identity()
            && self.entries.rank_shifted(&FieldElement::one()) == 1
    }
}

/// The three generating involutions `g`, `h`, `i`.
pub fn generators() -> [Matrix3; 3] {
    let f = |s: &str| -> FieldElement { s.parse().expect("literal") };
    let half = f("-1/2");
    let i = Matrix3([
        [f("w-1"), f("w"), f("1")],
        [f("w"), f("-1"), f("w-1")],
        [f("1"), f("w-1"), f("-w")],
    ])
    .scale(&half);
    [Matrix3::diag(-1, 1, 1), Matrix3::diag(1, -1, 1), i]
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub size: usize,
    pub trace: FieldElement,
    pub element_order: u32,
    pub representative: Matrix3,
}

/// Isomorphism type of a point stabilizer in the projective group,
/// decided from its order and the multiset of element orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilizerType {
    Trivial,
    KleinFour,
    Dihedral6,
    Dihedral10,
    Other,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub seed: ProjectivePoint,
    pub points: Vec<ProjectivePoint>,
    pub stabilizer_order: usize,
    /// Projective orders of the stabilizer elements, sorted.
    pub stabilizer_exponent_profile: Vec<u32>,
}

impl OrbitRecord {
    pub fn size(&self) -> usize {
        self.points.len()
    }

    pub fn stabilizer_type(&self) -> StabilizerType {
        let prof = &self.stabilizer_exponent_profile;
        let count = |k: u32| prof.iter().filter(|&&o| o == k).count();
        match self.stabilizer_order {
            1 => StabilizerType::Trivial,
            4 if count(2) == 3 => StabilizerType::KleinFour,
            6 if count(2) == 3 && count(3) == 2 => StabilizerType::Dihedral6,
            10 if count(2) == 5 && count(5) == 4 => StabilizerType::Dihedral10,
            _ => StabilizerType::Other,
        }
    }
}

/// The finite group generated by [`generators`].
#[derive(Clone, Debug)]
pub struct Group {
    elements: Vec<GroupElement>,
    index: HashMap<Matrix3, usize>,
    gens: Vec<Matrix3>,
}

impl Group {
    pub fn generate() -> Result<Self> {
        Self::generate_from(generators().to_vec())
    }

    /// Breadth-first closure under right multiplication by the generators.
    pub fn generate_from(gens: Vec<Matrix3>) -> Result<Self> {
        let mut elements = vec![GroupElement::new(Matrix3::identity())];
        let mut index: HashMap<Matrix3, usize> = HashMap::new();
        index.insert(Matrix3::identity(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in &gens {
                let prod = &elements[k].entries * g;
                if !index.contains_key(&prod) {
                    if elements.len() >= GENERATION_GUARD {
                        return Err(Error::BadGenerators(GENERATION_GUARD));
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(GroupElement::new(prod));
                }
            }
        }
        Ok(Group { elements, index, gens })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[Matrix3] {
        &self.gens
    }

    pub fn contains(&self, m: &Matrix3) -> bool {
        self.index.contains_key(m)
    }

    /// One representative per class in `PGL(3)`.
    pub fn projective_image(&self) -> Vec<&GroupElement> {
        let mut seen = HashSet::new();
        self.elements
            .iter()
            .filter(|e| seen.insert(e.canonical_projective.clone()))
            .collect()
    }

    /// Conjugacy classes by brute-force conjugation.
    pub fn class_data(&self) -> Vec<ConjugacyClass> {
        let inverses: Vec<Matrix3> = self
            .elements
            .iter()
            .map(|e| e.entries.inverse().expect("invertible"))
            .collect();
        let mut assigned = vec![false; self.elements.len()];
        let mut classes = Vec::new();
        for (k, x) in self.elements.iter().enumerate() {
            if assigned[k] {
                continue;
            }
            let mut members = HashSet::new();
            for (g, ginv) in self.elements.iter().zip(&inverses) {
                let c = &(&g.entries * &x.entries) * ginv;
                members.insert(self.index[&c]);
            }
            for &m in &members {
                assigned[m] = true;
            }
            classes.push(ConjugacyClass {
                size: members.len(),
                trace: x.trace(),
                element_order: x.order(),
                representative: x.entries.clone(),
            });
        }
        classes
    }

    /// Involutions of trace 1.
    pub fn pseudoreflections(&self) -> Vec<&GroupElement> {
        let one = FieldElement::one();
        self.elements
            .iter()
            .filter(|e| e.trace() == one && e.order() == 2)
            .collect()
    }

    /// Mirror lines of all pseudoreflections, deduplicated.
    pub fn mirror_lines(&self) -> Result<Vec<HomogeneousPolynomial>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for r in self.pseudoreflections() {
            let l = mirror_line(r)?;
            if seen.insert(l.clone()) {
                out.push(l);
            }
        }
        Ok(out)
    }

    /// Stabilizer of `p` in the projective image, as a list of
    /// representatives.
    pub fn stabilizer(&self, p: &ProjectivePoint) -> Vec<&GroupElement> {
        self.projective_image()
            .into_iter()
            .filter(|g| &p.transform(&g.entries) == p)
            .collect()
    }

    pub fn orbit(&self, p: &ProjectivePoint) -> OrbitRecord {
        let mut seen = HashSet::new();
        let mut points = Vec::new();
        for g in &self.elements {
            let q = p.transform(&g.entries);
            if seen.insert(q.clone()) {
                points.push(q);
            }
        }
        let stab = self.stabilizer(p);
        let mut profile: Vec<u32> = stab.iter().map(|g| g.projective_order()).collect();
        profile.sort_unstable();
        OrbitRecord {
            seed: p.clone(),
            points,
            stabilizer_order: stab.len(),
            stabilizer_exponent_profile: profile,
        }
    }

    /// Whether every element maps the given polynomial set to itself up to
    /// scalars.
    pub fn permutes_lines(&self, lines: &[HomogeneousPolynomial]) -> bool {
        let set: HashSet<HomogeneousPolynomial> = lines.iter().map(|l| l.monic_first()).collect();
        self.elements
            .iter()
            .all(|g| lines.iter().all(|l| set.contains(&l.act(&g.entries).monic_first())))
    }

    pub fn dump(&self) -> Result<GroupDump> {
        Ok(GroupDump {
            order: self.order(),
            projective_order: self.projective_image().len(),
            elements: self.elements.iter().map(|e| e.entries.to_string()).collect(),
            classes: self.class_data(),
            mirrors: self.mirror_lines()?.iter().map(|l| l.to_string()).collect(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupDump {
    pub order: usize,
    pub projective_order: usize,
    pub elements: Vec<String>,
    pub classes: Vec<ConjugacyClass>,
    pub mirrors: Vec<String>,
}

impl HomogeneousPolynomial {
    /// Rescaled so the coefficient of the largest monomial in the order
    /// `x > y > z` is 1; for linear forms this is the first nonzero
    /// coefficient of `(x, y, z)`.
    pub fn monic_first(&self) -> HomogeneousPolynomial {
        self.monic()
    }
}

/// The linear form cutting out the fixed plane of a pseudoreflection,
/// normalized with first nonzero coefficient 1.
pub fn mirror_line(r: &GroupElement) -> Result<HomogeneousPolynomial> {
    if !r.is_pseudoreflection() {
        return Err(Error::NotPseudoreflection);
    }
    let m = &r.entries;
    let row = (0..3)
        .map(|i| -> [FieldElement; 3] {
            std::array::from_fn(|j| {
                if i == j {
                    m.entry(i, j) - &FieldElement::one()
                } else {
                    m.entry(i, j).clone()
                }
            })
        })
        .find(|row| row.iter().any(|c| !c.is_zero()))
        .expect("rank one");
    Ok(HomogeneousPolynomial::linear(row).monic_first())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> Group {
        Group::generate().unwrap()
    }

    #[test]
    fn generators_are_involutions() {
        for g in generators() {
            assert_eq!(&g * &g, Matrix3::identity());
            assert!(!g.det().is_zero());
        }
    }

    #[test]
    fn orders() {
        let g = group();
        assert_eq!(g.order(), 120);
        assert_eq!(g.projective_image().len(), 60);
        assert!(g.contains(&Matrix3::scalar(-FieldElement::one())));
    }

    #[test]
    fn bad_generators_rejected() {
        let rot = Matrix3([
            [FieldElement::integer(1), FieldElement::integer(1), FieldElement::zero()],
            [FieldElement::zero(), FieldElement::one(), FieldElement::zero()],
            [FieldElement::zero(), FieldElement::zero(), FieldElement::one()],
        ]);
        assert!(matches!(Group::generate_from(vec![rot]), Err(Error::BadGenerators(_))));
    }

    #[test]
    fn mirrors_of_coordinate_reflections() {
        let [g, h, _] = generators();
        assert_eq!(mirror_line(&GroupElement::new(g)).unwrap(), HomogeneousPolynomial::x());
        assert_eq!(mirror_line(&GroupElement::new(h)).unwrap(), HomogeneousPolynomial::y());
        let id = GroupElement::new(Matrix3::identity());
        assert!(matches!(mirror_line(&id), Err(Error::NotPseudoreflection)));
    }

    #[test]
    fn pseudoreflection_properties() {
        let g = group();
        let refl = g.pseudoreflections();
        assert_eq!(refl.len(), 15);
        for r in &refl {
            assert!(r.is_pseudoreflection());
            let l = mirror_line(r).unwrap();
            assert!(l.act(&r.entries).proportionality(&l).is_some());
        }
        let lines = g.mirror_lines().unwrap();
        assert_eq!(lines.len(), 15);
        assert!(g.permutes_lines(&lines));
    }

    #[test]
    fn orbit_sizes() {
        let g = group();
        let o2 = g.orbit(&ProjectivePoint::from_ints(0, 0, 1));
        assert_eq!((o2.size(), o2.stabilizer_order), (15, 4));
        assert_eq!(o2.stabilizer_type(), StabilizerType::KleinFour);
        let o3 = g.orbit(&ProjectivePoint::from_ints(1, 1, 1));
        assert_eq!((o3.size(), o3.stabilizer_order), (10, 6));
        assert_eq!(o3.stabilizer_type(), StabilizerType::Dihedral6);
        let generic = g.orbit(&ProjectivePoint::from_ints(2, 3, 7));
        assert_eq!((generic.size(), generic.stabilizer_order), (60, 1));
    }
}
