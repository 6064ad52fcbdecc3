//! Parsing germ files and polynomial expressions.

use parabolic::coeffs::GaussianRational;
use parabolic::parser::{parse_diffeo, parse_poly, GermFile};

fn main() {
    let p = parse_poly::<GaussianRational>("(1 + 1/2 i) x y^2 - 0.25 (x + y)^3", ("x", "y"), 12).expect("valid");
    println!("{}", p.jet.to_text(("x", "y")));

    let file = GermFile::from_json(r#"{"format": 1, "trunc": 4, "map": {"x": "x + y^2", "y": "y + x^2 + x^5"}}"#).expect("valid file");
    let m = file.map.expect("map input");
    let parsed = parse_diffeo::<GaussianRational>(&m.x, &m.y, file.trunc.unwrap_or(12)).expect("valid");
    for w in &parsed.warnings {
        println!("warning: {w}");
    }
    println!("usable as a polynomial map: {}", parsed.germ.polynomial);

    match parse_poly::<GaussianRational>("x^-1", ("x", "y"), 12) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("error: {e}"),
    }
}
