#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::ConvSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = ConvSpec::from_octal(text) {
        assert_eq!(ConvSpec::from_octal(&spec.to_octal()).unwrap(), spec);
    }
});
