#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // The first byte steers the expected dimension.
    let d = 1 + (data.first().copied().unwrap_or(0) as usize % 4);
    if let Ok(rows) = dl_core::io::parse_queries_csv(text, d) {
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.len() == d));
        assert!(rows.iter().flatten().all(|v| v.is_finite()));
    }
});
