//! 2-tuple values on a five-term scale, and what a modifier does to them.

use geoling::linguistic::{apply_modifier, delta, delta_inv, Partition, Polarity};

fn main() {
    let g = 4;
    for beta in [0.0, 1.3, 2.5, 3.75, 4.0] {
        let t = delta(beta, g).expect("beta within [0, g]");
        println!("delta({beta}) = {t}  back to {}", delta_inv(&t));
    }

    let labels = ["InTheCenter", "VeryCloseTo", "Near", "Far", "OutOfRoute"];
    let distance = Partition::twofold(&labels, &[0.0, 200.0, 400.0, 700.0, 1200.0]).unwrap();
    for x in [150.0, 550.0, 600.0, 950.0] {
        let t = distance.to_two_tuple(x).unwrap();
        let label = &labels[t.term_index()];
        println!("{x:>6} m -> ({label}, {:+.3})", t.alpha());
    }

    // "very close to": Near pushed half a term toward the low end
    let near = delta(2.0, g).unwrap();
    let very_near = apply_modifier(&near, 0.5, Polarity::TowardLow);
    println!(
        "very near = {very_near} = {} m",
        distance.from_two_tuple(&very_near).unwrap()
    );
}
