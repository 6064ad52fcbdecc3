//! Blowing up a map and its generator at a characteristic direction.

use parabolic::blowup::{blow_down, blowup_diffeo, blowup_vf, characteristic_points, ChartMap};
use parabolic::coeffs::GaussianRational;
use parabolic::germs::{exp_vf, log_diffeo, order_of};
use parabolic::parser::parse_diffeo;

use num_complex::Complex64;

fn main() {
    let f = parse_diffeo::<GaussianRational>("x + y^2", "y + x^2", 10).expect("valid").germ;
    let x = log_diffeo(&f).expect("generator");
    for p in characteristic_points(&f).expect("directions") {
        let ft = blowup_diffeo(&f, &p).expect("characteristic");
        let xt = blowup_vf(&x, &p).expect("in the tangent cone");
        let via_generator = exp_vf(&xt).expect("order >= 2");
        println!("at {p}: ord {:?} -> {:?}", order_of(&f), order_of(&ft));
        println!("  F~1 - e = {}", ft.p.to_text(("e", "t")));
        println!("  F~2 - t = {}", ft.q.to_text(("e", "t")));
        println!("  commutes with Exp: {}", via_generator == ft);

        let mut m = ChartMap::default();
        m.push(&p);
        let down = blow_down(&m.to_float(), (Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.0)));
        println!("  (0.1, 0) in the chart lies over {down:?}");
    }
}
