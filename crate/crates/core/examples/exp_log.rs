//! Infinitesimal generator of a polynomial map and the round trip back.

use parabolic::coeffs::GaussianRational;
use parabolic::germs::{exp_vf, log_diffeo};
use parabolic::parser::parse_diffeo;

fn main() {
    let f = parse_diffeo::<GaussianRational>("x + y^2", "y + x^2", 8).expect("valid input").germ;
    let x = log_diffeo(&f).expect("tangent to the identity");
    println!("log F:");
    println!("  a = {}", x.a.to_text(("x", "y")));
    println!("  b = {}", x.b.to_text(("x", "y")));
    let back = exp_vf(&x).expect("order >= 2");
    println!("exp(log F) = F: {}", back.p == f.p && back.q == f.q);
}
