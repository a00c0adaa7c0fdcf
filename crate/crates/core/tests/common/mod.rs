//! Fixture data shared by the integration tests.
#![allow(dead_code)]

use burgers_source::InitialData;

/// (name, datum) for the six fixture data.
pub fn fixture_data() -> Vec<(&'static str, InitialData)> {
    vec![
        ("zero", InitialData::zero()),
        ("plus_one", InitialData::constant(1.0).unwrap()),
        ("minus_one", InitialData::constant(-1.0).unwrap()),
        ("riemann_-1_+1", InitialData::riemann(-1.0, 1.0).unwrap()),
        ("riemann_0_-1", InitialData::riemann(0.0, -1.0).unwrap()),
        ("rectangle_3", InitialData::rectangle(-1.0, 1.0, 3.0, 0.0).unwrap()),
    ]
}
