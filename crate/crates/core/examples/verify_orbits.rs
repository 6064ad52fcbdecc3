//! Iterating seeds from the certified petals under the map itself.

use parabolic::coeffs::GaussianRational;
use parabolic::dynamics::{verify_certificate, PolyMap, VerifyConfig};
use parabolic::parser::parse_diffeo;
use parabolic::resolution::{certify_parabolic, ResolveConfig};

fn main() {
    let parsed = parse_diffeo::<GaussianRational>("x + y^2", "y + x^2", 12).expect("valid");
    let cert = certify_parabolic::<GaussianRational>(&parsed.germ, &ResolveConfig::default()).expect("certificate");
    let f = PolyMap::from_terms(&parsed.components);
    let report = verify_certificate(&f, &cert, &VerifyConfig::default()).expect("certified");
    for petal in &report.petals {
        let kind = if petal.repelling { "repelling" } else { "attracting" };
        println!("{kind} direction {:.3}", petal.direction);
        for s in &petal.seeds {
            let last = s.record.last();
            println!(
                "  r = {:.4}: {:?} after {} steps, |p| = {:.3e}, tangency {:.1e}, n|x_n| = {:.3}",
                s.radius,
                s.record.verdict,
                last.n,
                last.abs,
                s.record.tangency_error.unwrap_or(f64::NAN),
                s.record.rate()
            );
        }
    }
    println!("fraction converged: {:?}", report.fraction());
    print!("{}", report.petals[0].seeds[0].record.to_csv());
}
