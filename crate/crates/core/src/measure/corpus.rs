//! Seeded corpora of simple functions.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FunctionSpec, MeasurableSet, SimplePiece};

fn value(rng: &mut ChaCha8Rng) -> f64 {
    let v = rng.gen_range(0.1..4.0);
    if rng.gen_bool(0.3) {
        -v
    } else {
        v
    }
}

/// Simple functions with one to four pieces supported in `[-8, 8)`.
pub fn simple_on_line(seed: u64, count: usize) -> Vec<FunctionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let pieces = rng.gen_range(1..=4usize);
            let mut cuts: Vec<f64> = (0..2 * pieces).map(|_| rng.gen_range(-8.0..8.0)).collect();
            cuts.sort_by(f64::total_cmp);
            let pieces = cuts
                .chunks(2)
                .filter(|c| c[0] < c[1])
                .map(|c| SimplePiece {
                    set: MeasurableSet::interval(c[0], c[1]).expect("ordered cut points"),
                    value: value(&mut rng),
                })
                .collect();
            FunctionSpec::Simple { pieces }
        })
        .collect()
}

/// Simple functions with one to four pieces on disjoint subsets of `{lo, ..., hi}`.
pub fn simple_on_integers(seed: u64, count: usize, lo: i64, hi: i64) -> Vec<FunctionSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = (hi - lo + 1) as usize;
    (0..count)
        .map(|_| {
            let pieces = rng.gen_range(1..=4usize);
            let per = rng.gen_range(1..=5usize);
            let picked = index::sample(&mut rng, span, (pieces * per).min(span)).into_vec();
            let pieces = picked
                .chunks(per)
                .map(|c| SimplePiece {
                    set: MeasurableSet::integers(c.iter().map(|&i| lo + i as i64)),
                    value: value(&mut rng),
                })
                .collect();
            FunctionSpec::Simple { pieces }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureSpace;

    #[test]
    fn corpora_are_valid_and_reproducible() {
        let a = simple_on_line(7, 20);
        assert_eq!(a, simple_on_line(7, 20));
        for f in &a {
            f.validate(&MeasureSpace::LebesgueLine).unwrap();
        }
        let b = simple_on_integers(7, 20, 0, 40);
        assert_eq!(b, simple_on_integers(7, 20, 0, 40));
        for f in &b {
            f.validate(&MeasureSpace::CountingIntegers).unwrap();
        }
    }
}
