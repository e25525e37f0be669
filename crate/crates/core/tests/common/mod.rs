#![allow(dead_code)]

use std::path::PathBuf;

use braess::netfile::parse;
use braess::Net;

pub const NOT_VULNERABLE: [&str; 5] = ["diamond", "series2", "fig6a", "fig6b", "fig6c"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.net"))
}

pub fn fixture(name: &str) -> Net {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse(&text).expect("fixture parses")
}
