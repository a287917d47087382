#![no_main]

use libfuzzer_sys::fuzz_target;
use squeeze3_cli::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(z) = parse::complex(s) {
        assert!(z.re.is_finite() && z.im.is_finite());
    }
    let _ = parse::complex_triple(s);
    let _ = parse::real_triple(s);
    if let Ok(cuts) = parse::cutoff_list(s) {
        assert!(cuts.windows(2).all(|w| w[0] < w[1]));
    }
});
