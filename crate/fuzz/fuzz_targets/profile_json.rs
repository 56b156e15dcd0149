#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::profiles::RateProfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = RateProfile::from_json(text) {
        assert_eq!(RateProfile::from_json(&p.to_json().unwrap()).unwrap(), p);
    }
});
