//! Parabolic-curve certificates in the exact and float backends.

use parabolic::coeffs::{ComplexFloat, GaussianRational};
use parabolic::parser::parse_diffeo;
use parabolic::resolution::{certify_parabolic, ResolveConfig};

fn main() {
    let cfg = ResolveConfig::default();
    for (x, y) in [("x + y^2", "y + x^2"), ("x + y^2", "y + 2 x^2"), ("x + x^2", "y + y^2")] {
        let f = parse_diffeo::<GaussianRational>(x, y, 12).expect("valid").germ;
        let exact = certify_parabolic::<GaussianRational>(&f, &cfg).expect("certificate");
        println!("F = ({x}, {y})");
        println!("  exact: {} with {} curve(s)", exact.status, exact.curve_count);
        if !exact.is_certified() {
            let float = certify_parabolic::<ComplexFloat>(&f, &cfg).expect("certificate");
            println!("  float: {}", float.status);
        }
        if let Some(d) = &exact.reduced {
            println!("  (k, lambda, mu) = ({}, {}, {})", d.k, d.lambda, d.mu);
        }
    }
}
