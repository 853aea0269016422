#![no_main]

use libfuzzer_sys::fuzz_target;
use paperlab_core::text::{parse_voltages, write_voltages};

fuzz_target!(|data: &[u8]| {
    let Some((&deg, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let degree = usize::from(deg % 16) + 1;
    if let Ok(v) = parse_voltages(text, degree) {
        assert_eq!(parse_voltages(&write_voltages(&v), degree).expect("round trip"), v);
    }
});
