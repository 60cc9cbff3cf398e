//! Exact linear algebra against a dense fraction-field elimination.

use avfilt::exactlin::{rat, rref, Rat, SparseVec, Subspace};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dense_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] / &pivot;
                for k in c..cols {
                    let d = &f * &m[rank][k];
                    m[r][k] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_dense(v: &SparseVec) -> Vec<BigRational> {
    v.to_dense().iter().map(Rat::to_big).collect()
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize, density: f64) -> Vec<SparseVec> {
    (0..n)
        .map(|_| {
            let vals: Vec<Rat> = (0..dim)
                .map(|_| if rng.gen_bool(density) { rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)) } else { Rat::zero() })
                .collect();
            SparseVec::from_dense(&vals)
        })
        .collect()
}

#[test]
fn small_cases() {
    assert_eq!(rref(3, &[]).unwrap().rank(), 0);
    let rows = [SparseVec::unit(2, 0), SparseVec::unit(2, 1), SparseVec::from_dense(&[rat(1, 1), rat(1, 1)])];
    let s = rref(2, &rows).unwrap();
    assert_eq!(s.rank(), 2);
    assert_eq!(s.rows(), &[SparseVec::unit(2, 0), SparseVec::unit(2, 1)]);
    let xy = Subspace::coordinate(3, [0, 1]);
    let yz = Subspace::coordinate(3, [1, 2]);
    assert_eq!(xy.intersect(&yz).unwrap().rows(), &[SparseVec::unit(3, 1)]);
    assert_eq!(xy.intersect(&xy).unwrap(), xy);
}

#[test]
fn rank_of_fifty_rows_in_dimension_thirty() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for density in [0.1, 0.3, 0.9] {
        let mut rows = random_rows(&mut rng, 50, 30, density);
        // force some dependence
        let extra = rows[0].add(&rows[1].scaled(&rat(-2, 3)));
        rows.push(extra);
        let s = rref(30, &rows).unwrap();
        let dense: Vec<_> = rows.iter().map(to_dense).collect();
        assert_eq!(s.rank(), dense_rank(&dense));
        for r in &rows {
            assert!(s.contains(r).unwrap());
        }
    }
}

#[test]
fn low_rank_products() {
    // A 20x20 matrix of rank 4 built as a product of 20x4 and 4x20 factors.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let left = random_rows(&mut rng, 20, 4, 0.8);
    let right = random_rows(&mut rng, 4, 20, 0.8);
    let rows: Vec<SparseVec> = left
        .iter()
        .map(|l| {
            let mut v = SparseVec::zero(20);
            for (k, c) in l.entries() {
                v.add_scaled(c, &right[*k]);
            }
            v
        })
        .collect();
    let r = rref(20, &rows).unwrap().rank();
    assert_eq!(r, dense_rank(&rows.iter().map(to_dense).collect::<Vec<_>>()));
    assert!(r <= 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_has_the_dimension_of_the_formula(seed in any::<u64>(), dim in 1usize..=12, a in 0usize..=8, b in 0usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ra = random_rows(&mut rng, a, dim, 0.5);
        let mut rb = random_rows(&mut rng, b, dim, 0.5);
        if let (Some(x), Some(y)) = (ra.first(), rb.first()) {
            rb[0] = x.add(y);
        }
        let sa = rref(dim, &ra).unwrap();
        let sb = rref(dim, &rb).unwrap();
        let both: Vec<_> = ra.iter().chain(&rb).map(to_dense).collect();
        let sum_rank = if both.is_empty() { 0 } else { dense_rank(&both) };
        let meet = sa.intersect(&sb).unwrap();
        prop_assert_eq!(meet.rank() + sum_rank, sa.rank() + sb.rank());
        for r in meet.rows() {
            prop_assert!(sa.contains(r).unwrap() && sb.contains(r).unwrap());
        }
    }

    #[test]
    fn quotient_coordinates_round_trip(seed in any::<u64>(), dim in 1usize..=10, k in 0usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rel = rref(dim, &random_rows(&mut rng, k, dim, 0.6)).unwrap();
        let v = random_rows(&mut rng, 1, dim, 0.7).remove(0);
        let q = rel.quotient_coords(&v).unwrap();
        prop_assert!(rel.contains(&v.sub(&q)).unwrap());
        prop_assert!(q.entries().iter().all(|(c, _)| !rel.is_pivot(*c)));
        if let Some(r) = rel.rows().first() {
            prop_assert!(rel.quotient_coords(r).unwrap().is_zero());
        }
        prop_assert_eq!(Subspace::zero(dim).quotient_coords(&v).unwrap(), v);
    }

    #[test]
    fn rows_are_reduced_echelon(seed in any::<u64>(), dim in 1usize..=10, k in 0usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = rref(dim, &random_rows(&mut rng, k, dim, 0.5)).unwrap();
        prop_assert_eq!(s.rows().len(), s.rank());
        for (i, (row, &p)) in s.rows().iter().zip(s.pivots()).enumerate() {
            prop_assert_eq!(row.leading().map(|(c, _)| c), Some(p));
            prop_assert!(row.get(p).is_one());
            for (j, other) in s.rows().iter().enumerate() {
                if i != j {
                    prop_assert!(other.get(p).is_zero());
                }
            }
            prop_assert!(row.entries().iter().all(|(_, c)| !c.is_zero()));
        }
    }

    #[test]
    fn rational_arithmetic_matches_bigrational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let (x, y) = (rat(a, b), rat(c, d));
        let (bx, by) = (BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()));
        prop_assert_eq!((&x + &y).to_big(), &bx + &by);
        prop_assert_eq!((&x * &y).to_big(), &bx * &by);
        prop_assert_eq!((&x - &y).to_big(), &bx - &by);
        if !y.is_zero() {
            prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            prop_assert!((&(&x / &y) * &y) == x);
        }
        prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x.clone());
        prop_assert!(BigRational::one() == Rat::one().to_big());
    }
}
