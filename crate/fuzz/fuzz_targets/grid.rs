#![no_main]

use libfuzzer_sys::fuzz_target;
use squeeze3::grid::Grid;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = s.parse::<Grid>() {
            let pts = g.points();
            assert_eq!(pts.len(), g.len());
            assert!(pts.iter().all(|x| x.is_finite()));
        }
    }
});
