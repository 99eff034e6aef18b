//! Exact and modular linear algebra: Gauss-Jordan over `Q(w)`, fraction-free
//! (Bareiss) rank over `Z[w]`, elimination over `F_p`, CRT and rational
//! reconstruction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{inv_mod, mul_mod, FieldElement};

/// Gauss-Jordan elimination in place. Returns pivot columns.
pub fn rref_exact(rows: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inverse().expect("nonzero pivot");
        for j in c..ncols {
            rows[r][j] = &rows[r][j] * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for j in c..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &(&f * &pivot_row[j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_exact(rows: &mut [Vec<FieldElement>]) -> usize {
    rref_exact(rows).len()
}

/// Basis of the right kernel, one vector per free column, normalized to 1
/// at its free column and 0 at the other free columns.
pub fn kernel_exact(rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut a = rows.to_vec();
    let pivots = rref_exact(&mut a);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::zero(); ncols];
        v[f] = FieldElement::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][f];
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` exactly. `None` if inconsistent; `Some((x, rank))`
/// otherwise, with free variables set to zero.
pub fn solve_exact(
    a: &[Vec<FieldElement>],
    b: &[FieldElement],
) -> Option<(Vec<FieldElement>, usize)> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref_exact(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![FieldElement::zero(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][ncols].clone();
    }
    Some((x, pivots.len()))
}

/// Rank by fraction-free elimination: rows are first scaled into `Z[w]`,
/// after which every Bareiss quotient is exact in `Z[w]`.
pub fn bareiss_rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut m: Vec<Vec<FieldElement>> = rows.iter().map(|r| clear_denominators(r)).collect();
    bareiss_in_place(&mut m).0
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn bareiss_det(rows: &[Vec<FieldElement>]) -> FieldElement {
    let n = rows.len();
    let mut scale = FieldElement::one();
    let mut m: Vec<Vec<FieldElement>> = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
            scale = &scale * &FieldElement::rational(BigRational::from_integer(l.clone()));
            r.iter().map(|x| x.scale_int(&l)).collect()
        })
        .collect();
    let (rank, sign) = bareiss_in_place(&mut m);
    if rank < n {
        return FieldElement::zero();
    }
    let det = m[n - 1][n - 1].clone();
    let det = if sign { det } else { -det };
    det.checked_div(&scale).expect("nonzero scale")
}

fn clear_denominators(row: &[FieldElement]) -> Vec<FieldElement> {
    let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator_lcm()));
    row.iter().map(|x| x.scale_int(&l)).collect()
}

/// Returns (rank, even permutation parity).
fn bareiss_in_place(m: &mut [Vec<FieldElement>]) -> (usize, bool) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev = FieldElement::one();
    let mut r = 0;
    let mut even = true;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if pr != r {
            m.swap(r, pr);
            even = !even;
        }
        let inv_prev = prev.inverse().expect("nonzero");
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = &(&pivot_row[c] * &row[j]) - &(&lead * &pivot_row[j]);
                row[j] = &v * &inv_prev;
                debug_assert!(row[j].is_algebraic_integer_coords());
            }
            row[c] = FieldElement::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    (r, even)
}

// ---------------------------------------------------------------------------
// F_p

/// Result of reducing a matrix over `F_p` to reduced row echelon form.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
    /// Original row indices whose rows were promoted to pivots; restricted
    /// to the pivot columns they form an invertible minor.
    pub pivot_rows: Vec<usize>,
}

impl ModEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel vector attached to the free column `f`.
    pub fn kernel_vector(&self, f: usize, ncols: usize, p: u64) -> Vec<u64> {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (r, &pc) in self.pivots.iter().enumerate() {
            v[pc] = (p - self.rows[r][f]) % p;
        }
        v
    }

    pub fn free_columns(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).filter(|c| !self.pivots.contains(c)).collect()
    }
}

pub fn rref_mod(mut rows: Vec<Vec<u64>>, p: u64) -> ModEchelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut order: Vec<usize> = (0..nrows).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        order.swap(r, pr);
        let inv = inv_mod(rows[r][c], p).expect("nonzero pivot");
        for j in c..ncols {
            rows[r][j] = mul_mod(rows[r][j], inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..ncols {
                if pivot_row[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pivot_row[j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let pivot_rows = order[..r].to_vec();
    ModEchelon { rows, pivots, pivot_rows }
}

/// Determinant of a square matrix over `F_p`.
pub fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            m.swap(pr, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p).unwrap();
        for i in c + 1..n {
            if m[i][c] == 0 {
                continue;
            }
            let f = mul_mod(m[i][c], inv, p);
            for j in c..n {
                m[i][j] = (m[i][j] + p - mul_mod(f, m[c][j], p)) % p;
            }
        }
    }
    det
}

// ---------------------------------------------------------------------------
// CRT and rational reconstruction

/// Incremental Chinese remaindering of a vector of residues.
#[derive(Clone, Debug)]
pub struct CrtAccumulator {
    pub modulus: BigInt,
    pub values: Vec<BigInt>,
}

impl CrtAccumulator {
    pub fn new(len: usize) -> Self {
        CrtAccumulator { modulus: BigInt::one(), values: vec![BigInt::zero(); len] }
    }

    pub fn push(&mut self, residues: &[u64], p: u64) {
        let pb = BigInt::from(p);
        let m_mod_p = self.modulus.mod_floor(&pb);
        let m_mod_p: u64 = m_mod_p.try_into().unwrap();
        let inv = inv_mod(m_mod_p, p).expect("coprime moduli");
        for (x, &r) in self.values.iter_mut().zip(residues) {
            let x_mod_p: u64 = x.mod_floor(&pb).try_into().unwrap();
            let delta = mul_mod((r + p - x_mod_p) % p, inv, p);
            *x += &self.modulus * BigInt::from(delta);
        }
        self.modulus *= pb;
    }

    /// Symmetric rational reconstruction of every entry.
    pub fn reconstruct(&self) -> Option<Vec<BigRational>> {
        self.values.iter().map(|u| rational_reconstruction(u, &self.modulus)).collect()
    }
}

/// Finds `n/d` with `n = d u (mod m)` and `|n|, d <= sqrt(m/2)`.
pub fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let q = BigRational::new(r1, t1);
    let check = (q.numer() - q.denom() * u).mod_floor(m);
    if check.is_zero() {
        Some(q)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str) -> FieldElement {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> Vec<Vec<FieldElement>> {
        rows.iter().map(|r| r.iter().map(|s| fe(s)).collect()).collect()
    }

    #[test]
    fn exact_rank_and_kernel() {
        let a = mat(&[&["1", "w", "1+w"], &["w", "1+w", "1+2*w"], &["0", "1", "1"]]);
        assert_eq!(rank_exact(&mut a.clone()), 2);
        assert_eq!(bareiss_rank(&a), 2);
        let k = kernel_exact(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            let s: FieldElement = row.iter().zip(&k[0]).map(|(x, y)| x * y).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn determinants() {
        let a = mat(&[&["1/2", "w"], &["w", "3"]]);
        // 3/2 - w^2 = 1/2 - w
        assert_eq!(bareiss_det(&a), fe("1/2-w"));
        let m = vec![vec![2, 3], vec![5, 7]];
        assert_eq!(det_mod(m, 11), 10);
    }

    #[test]
    fn solve_consistency() {
        let a = mat(&[&["1", "1"], &["1", "-1"], &["2", "0"]]);
        let (x, r) = solve_exact(&a, &[fe("3"), fe("1"), fe("4")]).unwrap();
        assert_eq!((x, r), (vec![fe("2"), fe("1")], 2));
        assert!(solve_exact(&a, &[fe("3"), fe("1"), fe("5")]).is_none());
    }

    #[test]
    fn modular_echelon_tracks_rows() {
        let p = 10009;
        let rows = vec![vec![0, 0, 0], vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        let e = rref_mod(rows.clone(), p);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.pivot_rows, vec![1, 3]);
        let v = e.kernel_vector(2, 3, p);
        for r in &rows {
            let s = r.iter().zip(&v).fold(0, |acc, (a, b)| (acc + mul_mod(*a, *b, p)) % p);
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn reconstruction_recovers_fractions() {
        let primes = [1_000_000_007u64, 998_244_353, 1_000_000_009];
        let target = BigRational::new(BigInt::from(-123_456_789i64), BigInt::from(987_654_321i64));
        let mut acc = CrtAccumulator::new(1);
        for p in primes {
            let pb = BigInt::from(p);
            let d: u64 = target.denom().mod_floor(&pb).try_into().unwrap();
            let n: u64 = target.numer().mod_floor(&pb).try_into().unwrap();
            acc.push(&[mul_mod(n, inv_mod(d, p).unwrap(), p)], p);
        }
        assert_eq!(acc.reconstruct().unwrap(), vec![target]);
    }
}
