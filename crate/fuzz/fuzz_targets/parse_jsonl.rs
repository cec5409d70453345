#![no_main]

use bondperc::estimator::persist::{parse_jsonl, write_jsonl};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = parse_jsonl(text) {
        let mut out = Vec::new();
        write_jsonl(&mut out, &records).unwrap();
        let again = parse_jsonl(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again, records);
    }
});
