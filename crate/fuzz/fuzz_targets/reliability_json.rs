#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::polarization::ReliabilityTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = ReliabilityTable::from_json(text);
});
