#![no_main]

use libfuzzer_sys::fuzz_target;
use paperlab_core::text::{parse_complex, write_complex};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = parse_complex(text) {
        // anything accepted must survive a round trip
        let again = parse_complex(&write_complex(&c)).expect("round trip");
        assert_eq!(again.counts(), c.counts());
    }
});
