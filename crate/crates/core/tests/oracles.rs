//! Reference values from a 40-digit arbitrary-precision implementation.

use weylball::spectral::exact_count;
use weylball::specfun::bessel_j;
use weylball::zeros::{count_zeros_below, zero, ZeroConfig};
use weylball::BesselOrder;

const J_VALUES: [(f64, f64, f64); 9] = [
    (0.0, 1.0, 0.76519768655796655145),
    (0.5, 10.0, -0.13726373575505048121),
    (2.0, 5.0, 0.046565116277752215532),
    (7.5, 3.0, 0.0011399140728703852808),
    (20.0, 25.0, 0.05199404922830323178),
    (50.0, 49.5, 0.10653691484070380291),
    (100.0, 150.0, -0.015359526118405390629),
    (3.0, 1000.0, -0.0048274208252039478996),
    (150.5, 400.0, -0.040877291022755187324),
];

const ZEROS: [(f64, u64, f64); 9] = [
    (0.0, 10, 30.63460646843197511755),
    (1.5, 1, 4.493409457909064175308),
    (2.0, 5, 17.95981949498782645512),
    (10.0, 1, 14.47550068655454123845),
    (10.0, 3, 22.04698536469780187205),
    (25.5, 7, 55.27060473509818688789),
    (100.0, 1, 108.8361658984097743631),
    (100.0, 20, 192.5177703004963330904),
    (3.0, 500, 1574.720539340885918026),
];

// (d, μ, number of eigenvalues ≤ μ² with multiplicity)
const COUNTS: [(u32, f64, u128); 6] = [
    (3, 10.0, 46),
    (3, 17.3, 306),
    (4, 12.5, 264),
    (5, 9.0, 51),
    (3, 25.0, 978),
    (6, 14.0, 1443),
];

#[test]
fn bessel_values() {
    for (nu, x, want) in J_VALUES {
        let got = bessel_j(BesselOrder::new(nu).unwrap(), x).unwrap();
        // absolute error relative to the envelope max(|J|, 1/√x)
        let scale = want.abs().max(x.sqrt().recip());
        assert!((got - want).abs() <= 1e-13 * scale, "J_{nu}({x}) = {got}, want {want}");
    }
}

#[test]
fn zeros_match() {
    let cfg = ZeroConfig::default();
    for (nu, k, want) in ZEROS {
        let got = zero(BesselOrder::new(nu).unwrap(), k, &cfg).unwrap().value;
        assert!((got / want - 1.0).abs() <= 1e-12, "j_{{{nu},{k}}} = {got}, want {want}");
    }
}

#[test]
fn counting_at_a_zero_is_inclusive() {
    for (nu, k, want) in ZEROS {
        let order = BesselOrder::new(nu).unwrap();
        assert_eq!(count_zeros_below(order, want * (1.0 + 1e-9), 1e-12).unwrap().count, k);
        assert_eq!(count_zeros_below(order, want * (1.0 - 1e-9), 1e-12).unwrap().count, k - 1);
    }
}

#[test]
fn eigenvalue_counts() {
    for (d, mu, want) in COUNTS {
        assert_eq!(exact_count(mu, d).unwrap().exact, want, "d = {d}, mu = {mu}");
    }
}
