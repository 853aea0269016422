#![no_main]

use libfuzzer_sys::fuzz_target;
use paperlab_core::perm::Perm;

fuzz_target!(|data: &[u8]| {
    let Some((&deg, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let degree = usize::from(deg % 32) + 1;
    if let Ok(p) = Perm::parse(degree, text) {
        assert_eq!(Perm::parse(degree, &p.to_cycle_string()).expect("round trip"), p);
        assert!(p.then(&p.inverse()).is_identity());
    }
});
