//! Reduction of a vector field to the terminal form.

use parabolic::coeffs::GaussianRational;
use parabolic::parser::parse_vf;
use parabolic::resolution::{resolve, ResolveConfig};

fn main() {
    let cfg = ResolveConfig::default();
    for (dx, dy) in [("x^2", "y^2"), ("x^2", "x y"), ("x^2 + y^3", "x y^2 + x^3")] {
        let x = parse_vf::<GaussianRational>(dx, dy, 12).expect("valid").germ;
        let res = resolve(&x, &cfg).expect("resolution");
        println!("X = ({dx}) d/dx + ({dy}) d/dy: {}", res.status);
        for step in &res.chain {
            println!("  blow up at {} (index {}, {:?})", step.point, step.index, step.class);
        }
        if let Some(d) = &res.reduced {
            println!("  reduced: k = {}, lambda = {}, mu = {}", d.k, d.lambda, d.mu);
        }
    }
}
