//! Camacho-Sad indices along the exceptional divisor.

use parabolic::coeffs::{ClassifyConfig, ComplexFloat, GaussianRational};
use parabolic::germs::log_diffeo;
use parabolic::indices::divisor_index_report;
use parabolic::parser::{parse_diffeo, parse_vf};

fn main() {
    let cfg = ClassifyConfig::default();
    let x = parse_vf::<GaussianRational>("x^2", "y^2", 10).expect("valid").germ;
    let report = divisor_index_report(&x, &cfg).expect("report");
    println!("x^2 d/dx + y^2 d/dy");
    for (p, index, class) in report.points() {
        println!("  {p}: {index} ({class:?})");
    }
    println!("  sum {}", report.sum.expect("all points rational"));

    let f = parse_diffeo::<GaussianRational>("x + y^2", "y + x^2", 10).expect("valid").germ;
    let fx = log_diffeo(&f.convert::<ComplexFloat>()).expect("generator");
    let report = divisor_index_report(&fx, &cfg).expect("report");
    println!("log (x + y^2, y + x^2), float backend");
    for (p, index, class) in report.points() {
        println!("  {p}: {index} ({class:?})");
    }
    println!("  sum {}", report.sum.expect("float roots are always found"));
}
