//! Vanishing at the 31 points, degree by degree, against a dense evaluation
//! matrix reduced by plain Gauss-Jordan.

use num_traits::One;

use icosa_core::context::Context;
use icosa_core::field::{valid_primes, SCREENING_PRIME_START};
use icosa_core::linalg::rank_exact;
use icosa_core::symbolic::vanishing_matrix;
use icosa_core::{FieldElement, ModularImage, Monomial};

fn evaluation_rank(points: &[icosa_core::ProjectivePoint], d: u32) -> usize {
    let cols = Monomial::all_of_degree(d);
    let mut rows: Vec<Vec<FieldElement>> = points
        .iter()
        .map(|p| {
            cols.iter()
                .map(|m| {
                    let e = m.exps();
                    (0..3).fold(FieldElement::one(), |acc, i| &acc * &p.coords()[i].pow(e[i]))
                })
                .collect()
        })
        .collect();
    rank_exact(&mut rows)
}

#[test]
fn all_points_simple_vanishing() {
    let ctx = Context::shared().unwrap();
    let points = ctx.arrangement.all_points();
    let img = ModularImage::new(valid_primes(SCREENING_PRIME_START).next().unwrap()).unwrap();
    let mut kernel_dims = Vec::new();
    for d in 1..=15u32 {
        let sys = vanishing_matrix(&points, 1, d);
        let dense = evaluation_rank(&points, d);
        assert_eq!(sys.rank_exact(), dense, "d = {d}");
        assert_eq!(sys.rank_mod(&img).unwrap(), dense, "d = {d}");
        assert!(dense <= 31);
        kernel_dims.push(sys.ncols() - dense);
    }
    // Nothing below degree 6 passes through all 31 points.
    assert!(kernel_dims[..5].iter().all(|&k| k == 0), "{kernel_dims:?}");
    assert!(kernel_dims[5] >= 1);
    // Once the points impose independent conditions they keep doing so.
    let first = (1..=15).find(|&d| evaluation_rank(&points, d) == 31).expect("independent by degree 15");
    for d in first..=15 {
        assert_eq!(kernel_dims[(d - 1) as usize], ((d + 1) * (d + 2) / 2) as usize - 31);
    }
}
