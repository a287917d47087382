#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use squeeze3_cli::Cli;

// Arguments are NUL-separated; only parsing is exercised, nothing is run.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = Cli::try_parse_from(std::iter::once("squeeze3").chain(s.split('\0')));
});
