#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 256 {
        return;
    }
    if let Ok(grid) = dl_core::io::parse_rho_grid(text) {
        let values = grid.values();
        assert!(!values.is_empty());
        assert!(values.iter().all(|v| v.is_finite() && *v > 0.0));
        assert!(values.windows(2).all(|w| w[1] < w[0]),
            "grid from '{text}' is not strictly decreasing: {values:?}");
    }
});
