#![no_main]

use libfuzzer_sys::fuzz_target;
use paperlab_core::conj::parse_instance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = parse_instance(text) {
        let back = parse_instance(&inst.to_text()).expect("round trip");
        assert_eq!(back.g_gens, inst.g_gens);
        assert_eq!(back.sigma, inst.sigma);
    }
});
