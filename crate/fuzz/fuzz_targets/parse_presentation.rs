#![no_main]

use libfuzzer_sys::fuzz_target;
use paperlab_core::text::NamedPresentation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = NamedPresentation::parse(text) {
        assert_eq!(NamedPresentation::parse(&p.to_text()).expect("round trip"), p);
    }
});
