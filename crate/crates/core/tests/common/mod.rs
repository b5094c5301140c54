#![allow(dead_code)]

use geoling::alerts::{BATTERY, DISTANCE, OUTPUT, TOLERANCE};
use geoling::fcl::CompiledController;
use geoling::partition_builder::ResemblanceMatrix;

/// Every ordering of the labels between the anchors, by Heap's algorithm.
/// Best summed neighbour resemblance wins; ties go to the
/// lexicographically smallest label sequence.
pub fn brute_force_order(m: &ResemblanceMatrix, low: &str, high: &str) -> Vec<String> {
    let labels = m.labels();
    let mut middle: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] != low && labels[i] != high)
        .collect();
    let (lo, hi) = (m.index_of(low).unwrap(), m.index_of(high).unwrap());
    let mut best: Option<(f64, Vec<String>)> = None;
    let mut consider = |perm: &[usize]| {
        let seq: Vec<usize> = std::iter::once(lo).chain(perm.iter().copied()).chain(std::iter::once(hi)).collect();
        let score: f64 = seq.windows(2).map(|w| m.rate(w[0], w[1])).sum();
        let names: Vec<String> = seq.iter().map(|&i| labels[i].clone()).collect();
        let replace = match &best {
            None => true,
            Some((s, n)) => score > *s || (score == *s && names < *n),
        };
        if replace {
            best = Some((score, names));
        }
    };
    let n = middle.len();
    let mut c = vec![0usize; n];
    consider(&middle);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                middle.swap(0, i);
            } else {
                middle.swap(c[i], i);
            }
            consider(&middle);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best.unwrap().1
}

pub fn trigger(c: &CompiledController, battery: f64, distance: f64, tolerance: f64) -> f64 {
    c.infer_with(&[(BATTERY, battery), (DISTANCE, distance), (TOLERANCE, tolerance)])
        .unwrap()
        .output(OUTPUT)
        .unwrap()
}

/// Centroid of `trian 0 0 1` clipped at `h`, in closed form.
pub fn clipped_no_alert_centroid(h: f64) -> f64 {
    let area = h * (1.0 - h) + h * h / 2.0;
    let moment = h * (1.0 - h).powi(2) / 2.0 + h * h / 2.0 - h.powi(3) / 3.0;
    moment / area
}

/// Quarter-step resemblance rates, so that ties are common and sums exact.
pub fn quarter_matrix(n: usize, raw: &[u8]) -> ResemblanceMatrix {
    let mut rates = vec![vec![1.0; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let r = (raw[k] % 5) as f64 / 4.0;
            rates[i][j] = r;
            rates[j][i] = r;
            k += 1;
        }
    }
    let labels = (0..n).map(|i| format!("L{i}")).collect();
    ResemblanceMatrix::from_rates(labels, rates).unwrap()
}
