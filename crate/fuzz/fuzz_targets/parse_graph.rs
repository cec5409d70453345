#![no_main]

use bondperc::lattice::dump::{parse_graph, write_graph};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(g) = parse_graph(text) {
        // Anything accepted must survive a write/parse round trip unchanged.
        let once = write_graph(&g);
        let again = parse_graph(&once).expect("written graphs parse");
        assert_eq!(write_graph(&again), once);
    }
});
