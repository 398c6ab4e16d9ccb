// Temporary probe for the growth-trend budget; deleted before shipping.
use ffroot::fq::FieldCtx;
use ffroot::natural::nat;
use ffroot::{cipolla_sqrt, tth_root, PrimeModulus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

#[test]
#[ignore]
fn probe() {
    let p = PrimeModulus::new(nat((1u64 << 61) - 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [64usize, 128, 256] {
        let t0 = Instant::now();
        let ctx = FieldCtx::random(&p, n, &mut rng);
        let build = t0.elapsed();
        let c = ctx.random_nonzero(&mut rng);
        let a = c.square();
        let t0 = Instant::now();
        let r = tth_root(&a, 2, &mut rng).unwrap();
        let new_t = t0.elapsed();
        assert_eq!(r.root.square(), a);
        let t0 = Instant::now();
        let r = cipolla_sqrt(&a, &mut rng).unwrap();
        let cip_t = t0.elapsed();
        assert_eq!(r.square(), a);
        println!("n={n}: field build {build:?}, new {new_t:?}, cipolla {cip_t:?}");
    }
}
