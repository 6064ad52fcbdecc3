//! Characteristic directions of `(x + y^2, y + a x^2)` in both backends.

use parabolic::coeffs::{Coefficient, ComplexFloat, GaussianRational};
use parabolic::germs::characteristic_directions;
use parabolic::parser::parse_diffeo;

fn show<C: Coefficient>(y: &str) {
    let f = parse_diffeo::<GaussianRational>("x + y^2", y, 10).expect("valid").germ.convert::<C>();
    let d = characteristic_directions(&f).expect("tangent to the identity");
    println!("[{}] F2 = {y}, order {}", C::BACKEND, d.order);
    for dir in &d.directions {
        println!("  [{} : {}] lambda = {} mult {}", dir.direction.0, dir.direction.1, dir.lambda, dir.multiplicity);
    }
    if let Some(u) = &d.unresolved {
        println!("  roots outside the field: {}", u.to_text("v"));
    }
}

fn main() {
    show::<GaussianRational>("y + x^2");
    show::<ComplexFloat>("y + x^2");
    show::<GaussianRational>("y + 2 x^2");
}
