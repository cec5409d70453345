#![no_main]

use bondperc::arms::EventSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(e) = EventSpec::parse(text) {
        assert_eq!(EventSpec::parse(&e.to_json()).unwrap(), e);
    }
});
