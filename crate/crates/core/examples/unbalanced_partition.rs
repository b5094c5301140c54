//! Builds the distance scale from synonym bags and compares it with the
//! evenly spaced scale over the same labels.

use geoling::linguistic::Partition;
use geoling::partition_builder::{order_terms, parse_bags, place_apexes, resemblance_matrix};

const BAGS: &str = include_str!("../data/distance_bags.txt");

fn main() {
    let bags = parse_bags(BAGS).unwrap();
    let m = resemblance_matrix(&bags).unwrap();
    for (i, a) in m.labels().iter().enumerate() {
        let row: Vec<String> = (0..m.labels().len()).map(|j| format!("{:.3}", m.rate(i, j))).collect();
        println!("{a:>12} {}", row.join(" "));
    }

    let order = order_terms(&m, "InTheCenter", "OutOfRoute").unwrap();
    let apexes = place_apexes(&m, &order, 0.0, 1200.0).unwrap();
    let twofold = Partition::twofold(&order, &apexes).unwrap();
    let uniform = Partition::uniform(&order, 0.0, 1200.0).unwrap();

    println!();
    print!("{}", twofold.to_text());
    for c in twofold.crossings() {
        println!("{c:?}");
    }
    println!("coverage: twofold {:.4}, uniform {:.4}", twofold.coverage_min(), uniform.coverage_min());

    println!("\n   x  {:>24}  {:>24}", "twofold", "uniform");
    for x in (0..=1200).step_by(100) {
        let x = x as f64;
        let show = |p: &Partition| {
            let t = p.to_two_tuple(x).unwrap();
            format!("{}{:+.2}", order[t.term_index()], t.alpha())
        };
        println!("{x:>5}  {:>24}  {:>24}", show(&twofold), show(&uniform));
    }
}
