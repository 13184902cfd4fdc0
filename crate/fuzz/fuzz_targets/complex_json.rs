#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = dl_core::io::parse_complex_json(text) {
        let written = serde_json::to_string(&file).expect("complex serializes");
        let back = dl_core::io::parse_complex_json(&written).expect("round trip");
        assert_eq!(back, file);
    }
});
