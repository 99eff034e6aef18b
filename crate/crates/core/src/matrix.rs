use std::fmt;
use std::ops::Mul;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;

/// A 3x3 matrix over `Q(w)`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Matrix3(pub [[FieldElement; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Self {
        Self::scalar(FieldElement::one())
    }

    pub fn scalar(c: FieldElement) -> Self {
        let z = FieldElement::zero;
        Matrix3([
            [c.clone(), z(), z()],
            [z(), c.clone(), z()],
            [z(), z(), c],
        ])
    }

    pub fn diag(a: i64, b: i64, c: i64) -> Self {
        let f = FieldElement::integer;
        Matrix3([
            [f(a), f(0), f(0)],
            [f(0), f(b), f(0)],
            [f(0), f(0), f(c)],
        ])
    }

    pub fn from_rows(rows: [[FieldElement; 3]; 3]) -> Self {
        Matrix3(rows)
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.0[i][j]
    }

    pub fn row(&self, i: usize) -> &[FieldElement; 3] {
        &self.0[i]
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| &self.0[i][j] * c)))
    }

    pub fn transpose(&self) -> Self {
        Matrix3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    pub fn trace(&self) -> FieldElement {
        &(&self.0[0][0] + &self.0[1][1]) + &self.0[2][2]
    }

    pub fn det(&self) -> FieldElement {
        let m = &self.0;
        let t1 = &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
        let t2 = &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
        let t3 = &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
        &(&t1 - &t2) + &t3
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        let inv_d = d.inverse()?;
        let m = &self.0;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
        };
        // adjugate = transpose of cofactor matrix
        let adj = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        Ok(Matrix3(adj).scale(&inv_d))
    }

    pub fn apply(&self, v: &[FieldElement; 3]) -> [FieldElement; 3] {
        std::array::from_fn(|i| {
            (0..3).map(|j| &self.0[i][j] * &v[j]).sum()
        })
    }

    /// Row vector times matrix: `v^T M`.
    pub fn apply_left(&self, v: &[FieldElement; 3]) -> [FieldElement; 3] {
        std::array::from_fn(|j| (0..3).map(|i| &v[i] * &self.0[i][j]).sum())
    }

    pub fn is_scalar(&self) -> bool {
        let m = &self.0;
        (0..3).all(|i| (0..3).all(|j| i == j || m[i][j].is_zero()))
            && m[0][0] == m[1][1]
            && m[1][1] == m[2][2]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_zero())
    }

    /// The matrix rescaled so that its first nonzero entry (row-major) is 1.
    pub fn canonical_projective(&self) -> Self {
        match self.0.iter().flatten().find(|x| !x.is_zero()) {
            Some(lead) => self.scale(&lead.inverse().expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Matrix3::identity(), |acc, _| &acc * self)
    }

    /// Smallest `k >= 1` with `M^k = I`.
    pub fn order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc == Matrix3::identity() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Smallest `k >= 1` with `M^k` scalar, i.e. the order in `PGL(3)`.
    pub fn projective_order(&self, bound: u32) -> Option<u32> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_scalar() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Rank of `M - c*I`.
    pub fn rank_shifted(&self, c: &FieldElement) -> usize {
        let mut rows: Vec<Vec<FieldElement>> = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| if i == j { &self.0[i][j] - c } else { self.0[i][j].clone() })
                    .collect()
            })
            .collect();
        crate::linalg::rank_exact(&mut rows)
    }

    pub fn checked_non_singular(self) -> Result<Self> {
        if self.det().is_zero() {
            Err(Error::Verification("singular matrix".into()))
        } else {
            Ok(self)
        }
    }
}

impl<'a> Mul<&'a Matrix3> for &'a Matrix3 {
    type Output = Matrix3;
    fn mul(self, rhs: &'a Matrix3) -> Matrix3 {
        Matrix3(std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| &self.0[i][k] * &rhs.0[k][j]).sum())
        }))
    }
}

impl fmt::Display for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
