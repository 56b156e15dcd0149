#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::codec::{format_bits, parse_bits};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(bits) = parse_bits(text) {
        assert_eq!(parse_bits(&format_bits(&bits)).unwrap(), bits);
    }
});
