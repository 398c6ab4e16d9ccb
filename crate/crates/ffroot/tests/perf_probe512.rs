use ffroot::fq::FieldCtx;
use ffroot::natural::nat;
use ffroot::{cipolla_sqrt, tth_root, PrimeModulus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[test]
#[ignore]
fn probe512() {
    let p = PrimeModulus::new(nat((1u64 << 61) - 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t0 = Instant::now();
    let ctx = FieldCtx::random(&p, 512, &mut rng);
    println!("field build 512: {:?}", t0.elapsed());
    let c = ctx.random_nonzero(&mut rng);
    let a = c.square();
    let t0 = Instant::now();
    let r = tth_root(&a, 2, &mut rng).unwrap();
    println!("new 512: {:?}", t0.elapsed());
    assert_eq!(r.root.square(), a);
    let t0 = Instant::now();
    let r = cipolla_sqrt(&a, &mut rng).unwrap();
    println!("cipolla 512: {:?}", t0.elapsed());
    assert_eq!(r.square(), a);
}
