#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(dict) = dl_core::io::parse_dictionary_csv(text) {
        // Anything accepted must survive a write/read round trip.
        let written = dl_core::io::dictionary_to_csv(&dict);
        let back = dl_core::io::parse_dictionary_csv(&written)
            .expect("round trip of an accepted dictionary");
        assert_eq!(back.points(), dict.points());
    }
});
