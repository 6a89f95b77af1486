#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

pub const GOLDEN: &str = include_str!("../data/golden_vectors.txt");

/// Minimal reader for the golden file, kept separate from the library's own parser.
pub fn golden() -> BTreeMap<String, Vec<u8>> {
    GOLDEN
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, value) = l.split_once('=').expect("name = hex");
            (name.trim().to_string(), hex::decode(value.trim()).expect("hex"))
        })
        .collect()
}

pub fn golden_value(name: &str) -> Vec<u8> {
    golden().remove(name).unwrap_or_else(|| panic!("missing golden vector {name}"))
}
