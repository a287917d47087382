#![no_main]

use libfuzzer_sys::fuzz_target;
use squeeze3_cli::table::Table;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = Table::read_csv(data) {
        // Anything accepted must be writable in both formats.
        let _ = t.to_csv_string();
        let _ = t.to_json();
    }
});
