#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::list::{list_decode, path_metric_of};
use pac_codes::profiles::RateProfile;
use pac_codes::ConvSpec;

// byte 0: list size; bytes 1..3: mask of N = 16; then one byte per LLR
fuzz_target!(|data: &[u8]| {
    if data.len() < 19 {
        return;
    }
    let list_size = (data[0] % 64) as usize + 1;
    let bits = u16::from_le_bytes([data[1], data[2]]);
    let Ok(profile) = RateProfile::from_mask((0..16).map(|i| bits >> i & 1 == 1).collect()) else { return };
    let llrs: Vec<f64> = data[3..19].iter().map(|&b| (b as i8) as f64 / 8.0).collect();
    let conv = ConvSpec::default();
    let out = list_decode(&llrs, &profile, &conv, list_size).unwrap();
    let replay = path_metric_of(&llrs, &out.v_hat, &conv).unwrap();
    assert!((replay - out.path_metric).abs() <= 1e-9 * (1.0 + replay.abs()));
});
