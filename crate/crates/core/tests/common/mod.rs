#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use fi_tails::combinatorics::enumerate_injections;
use fi_tails::{FIPresentation, FormalSum, IntMatrix};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("reading fixture {name}: {e}"))
}

/// `name: value` lines, skipping comments and blank lines.
pub fn keyed_fixture(name: &str) -> BTreeMap<String, String> {
    fixture(name)
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (k, v) = l.split_once(':').expect("`key: value` line");
            (k.trim().to_string(), v.trim().to_string())
        })
        .collect()
}

/// Generators in degrees 0..=3, relations in degrees 1..=3, at most 3 terms
/// per entry with coefficients in [-7, 7].
pub fn random_presentation(rng: &mut StdRng) -> FIPresentation {
    let generators: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..=3)).collect();
    let relations: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=3)).collect();
    let entries = generators
        .iter()
        .map(|&a| {
            relations
                .iter()
                .map(|&b| {
                    let mut sum = FormalSum::new();
                    if a <= b {
                        let all = enumerate_injections(a, b);
                        for _ in 0..rng.gen_range(0..=3) {
                            let f = all[rng.gen_range(0..all.len())].clone();
                            sum.add_term(f, BigInt::from(rng.gen_range(-7..=7)));
                        }
                    }
                    sum
                })
                .collect()
        })
        .collect();
    FIPresentation::new(generators, relations, entries).expect("degrees are consistent")
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    if rows == 0 {
        return IntMatrix::zeros(0, cols);
    }
    IntMatrix::from_i64_rows(&data)
}
