use proptest::prelude::*;
use syzlab_core::arith::{FieldCtx, HomogPoly, MonomialBasis};

const PRIMES: [u64; 4] = [3, 10007, 31513, 65521];

fn poly(ctx: FieldCtx, degree: u32, seed: &[u32]) -> HomogPoly {
    let n = MonomialBasis::count(degree);
    let coeffs: Vec<u32> = (0..n).map(|i| seed[i % seed.len()].wrapping_mul(i as u32 + 1) % ctx.p()).collect();
    HomogPoly::from_dense(ctx, degree, &coeffs)
}

proptest! {
    #[test]
    fn field_inverse_and_fermat(pi in 0usize..4, a in 1u64..1_000_000) {
        let f = FieldCtx::new(PRIMES[pi]).unwrap();
        let a = f.reduce_u64(a);
        prop_assume!(a != 0);
        prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        prop_assert_eq!(f.pow(a, f.p() as u64 - 1), 1);
        prop_assert_eq!(f.div(f.mul(a, 7 % f.p()), a), 7 % f.p());
    }

    #[test]
    fn signed_round_trip(a in -32_760i64..=32_760) {
        let f = FieldCtx::new(65521).unwrap();
        prop_assert_eq!(f.signed(f.from_i64(a)), a);
        prop_assert_eq!(f.add(f.from_i64(a), f.neg(f.from_i64(a))), 0);
    }

    #[test]
    fn square_roots_square(a in 0u32..31513) {
        let f = FieldCtx::new(31513).unwrap();
        let sq = f.mul(a, a);
        let r = f.sqrt(sq).expect("a square has a root");
        prop_assert_eq!(f.mul(r, r), sq);
        prop_assert!(f.is_square(sq));
    }

    #[test]
    fn distributive_and_commutative(
        da in 0u32..5, db in 0u32..5,
        sa in prop::collection::vec(any::<u32>(), 1..8),
        sb in prop::collection::vec(any::<u32>(), 1..8),
        sc in prop::collection::vec(any::<u32>(), 1..8),
    ) {
        let f = FieldCtx::new(10007).unwrap();
        let (a, b, c) = (poly(f, da, &sa), poly(f, db, &sb), poly(f, db, &sc));
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left.to_dense(), right.to_dense());
        prop_assert_eq!(a.mul(&b).unwrap().to_dense(), b.mul(&a).unwrap().to_dense());
    }

    #[test]
    fn evaluation_is_multiplicative(
        da in 0u32..6, db in 0u32..6,
        sa in prop::collection::vec(any::<u32>(), 1..8),
        sb in prop::collection::vec(any::<u32>(), 1..8),
        pt in prop::array::uniform3(0u32..10007),
    ) {
        let f = FieldCtx::new(10007).unwrap();
        let (a, b) = (poly(f, da, &sa), poly(f, db, &sb));
        prop_assert_eq!(a.mul(&b).unwrap().eval(pt), f.mul(a.eval(pt), b.eval(pt)));
        prop_assert_eq!(a.pow(3).eval(pt), f.pow(a.eval(pt), 3));
    }

    #[test]
    fn euler_identity(d in 1u32..7, s in prop::collection::vec(any::<u32>(), 1..8)) {
        let f = FieldCtx::new(10007).unwrap();
        let g = poly(f, d, &s);
        let mut sum = HomogPoly::zero(f, d);
        for v in 0..3 {
            sum = sum.add(&HomogPoly::var(f, v).mul(&g.partial(v)).unwrap()).unwrap();
        }
        prop_assert_eq!(sum.to_dense(), g.scale(d % f.p()).to_dense());
    }
}

#[test]
fn degree_mismatch_is_an_error() {
    let f = FieldCtx::new(10007).unwrap();
    assert!(HomogPoly::var(f, 0).add(&HomogPoly::constant(f, 1)).is_err());
    assert!(FieldCtx::new(10005).is_err());
}
