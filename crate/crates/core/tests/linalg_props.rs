use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use syzlab_core::arith::FieldCtx;
use syzlab_core::linalg::{dense_rank, inverse, rank_kernel, sparse_rank, DenseMat, SparseMat, Strategy};

fn ctx() -> FieldCtx {
    FieldCtx::new(10007).unwrap()
}

fn random_sparse(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> SparseMat {
    let f = ctx();
    let mut trips = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                trips.push((r, c, rng.gen_range(1..f.p())));
            }
        }
    }
    SparseMat::from_triplets(f, rows, cols, trips)
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> DenseMat {
    let f = ctx();
    loop {
        let m = DenseMat::from_vec(f, n, n, (0..n * n).map(|_| rng.gen_range(0..f.p())).collect());
        if inverse(&m).is_some() {
            return m;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]
    #[test]
    fn sparse_matches_dense(seed in any::<u64>(), rows in 1usize..400, cols in 1usize..400, density in 0.0f64..0.05) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sparse(&mut rng, rows, cols, density);
        let d = m.to_dense();
        let r = sparse_rank(&m, Strategy::Markowitz);
        prop_assert_eq!(r, sparse_rank(&m, Strategy::Dense));
        prop_assert_eq!(r, dense_rank(d.ctx(), rows, cols, d.data().to_vec()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn rank_of_constructed_product(seed in any::<u64>(), n in 1usize..40, m in 1usize..40, r in 0usize..40) {
        // U D V has rank exactly r when U, V are invertible and D = diag(1^r, 0)
        let f = ctx();
        let r = r.min(n).min(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_invertible(&mut rng, n);
        let v = random_invertible(&mut rng, m);
        let mut d = DenseMat::zeros(f, n, m);
        for i in 0..r {
            d.set(i, i, 1);
        }
        let a = u.mul(&d).mul(&v);
        let s = SparseMat::from_dense(&a);
        prop_assert_eq!(sparse_rank(&s, Strategy::Markowitz), r);
        prop_assert_eq!(rank_kernel(&a).rank, r);
    }

    #[test]
    fn permutation_and_scaling_invariance(seed in any::<u64>(), rows in 1usize..80, cols in 1usize..80) {
        let f = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sparse(&mut rng, rows, cols, 0.08);
        let base = sparse_rank(&m, Strategy::Markowitz);
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rand::seq::SliceRandom::shuffle(&mut rp[..], &mut rng);
        rand::seq::SliceRandom::shuffle(&mut cp[..], &mut rng);
        let rs: Vec<u32> = (0..rows).map(|_| rng.gen_range(1..f.p())).collect();
        let cs: Vec<u32> = (0..cols).map(|_| rng.gen_range(1..f.p())).collect();
        let mut trips = Vec::new();
        for (c, col) in m.columns().iter().enumerate() {
            for &(r, v) in col {
                let r = r as usize;
                trips.push((rp[r], cp[c], f.mul(v, f.mul(rs[r], cs[c]))));
            }
        }
        let moved = SparseMat::from_triplets(f, rows, cols, trips);
        prop_assert_eq!(sparse_rank(&moved, Strategy::Markowitz), base);
        prop_assert_eq!(sparse_rank(&m.transpose(), Strategy::Markowitz), base);
        // repeated runs agree
        prop_assert_eq!(sparse_rank(&m, Strategy::Markowitz), base);
    }

    #[test]
    fn kernel_is_annihilated(seed in any::<u64>(), rows in 1usize..30, cols in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sparse(&mut rng, rows, cols, 0.3).to_dense();
        let rk = rank_kernel(&m);
        prop_assert_eq!(rk.rank + rk.kernel_dim, cols);
        for v in &rk.kernel_basis {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn dump_load_round_trip(seed in any::<u64>(), rows in 0usize..50, cols in 0usize..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_sparse(&mut rng, rows, cols, 0.1);
        let mut buf = Vec::new();
        m.dump(&mut buf).unwrap();
        let back = SparseMat::load(&buf[..]).unwrap();
        prop_assert_eq!(back.to_dense(), m.to_dense());
        prop_assert_eq!(back.rows(), rows);
        prop_assert_eq!(back.cols(), cols);
    }
}
