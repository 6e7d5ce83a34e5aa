use edge34::specfun::airy;
use num_complex::Complex64;

const FIXTURE: &str = include_str!("../fixtures/airy_reference.csv");

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn matches_high_precision_table() {
    let mut worst = [0.0f64; 4];
    let mut rows = 0;
    for line in FIXTURE.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        let z = Complex64::new(v[0], v[1]);
        let want = [
            Complex64::new(v[2], v[3]),
            Complex64::new(v[4], v[5]),
            Complex64::new(v[6], v[7]),
            Complex64::new(v[8], v[9]),
        ];
        let got = airy(z).unwrap();
        let got = [got.ai, got.ai_prime, got.bi, got.bi_prime];
        for k in 0..4 {
            let e = rel(got[k], want[k]);
            worst[k] = worst[k].max(e);
            if z.norm() <= 30.0 {
                assert!(e < 1e-12, "component {k} at {z}: rel err {e:e}");
            }
        }
        rows += 1;
    }
    assert!(rows >= 50);
    eprintln!("worst relative errors (Ai, Ai', Bi, Bi'): {worst:?}");
}
