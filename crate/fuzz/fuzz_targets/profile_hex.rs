#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::profiles::RateProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = RateProfile::from_hex_file_contents(text) {
        let again = RateProfile::from_hex_file_contents(&p.to_hex_file_contents().unwrap()).unwrap();
        assert_eq!(p, again);
    }
});
