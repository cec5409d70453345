#![no_main]

use bondperc::criticality::ModelSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(m) = serde_json::from_slice::<ModelSpec>(data) {
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ModelSpec>(&json).unwrap(), m);
    }
});
