#![no_main]

use libfuzzer_sys::fuzz_target;
use pac_codes::codec::Demapper;
use pac_codes::fano::{fano_decode, FanoConfig};
use pac_codes::profiles::RateProfile;
use pac_codes::ConvSpec;

// first 2 bytes: frozen mask of N = 16; then one byte per channel LLR
fuzz_target!(|data: &[u8]| {
    if data.len() < 18 {
        return;
    }
    let bits = u16::from_le_bytes([data[0], data[1]]);
    let Ok(profile) = RateProfile::from_mask((0..16).map(|i| bits >> i & 1 == 1).collect()) else { return };
    let llrs: Vec<f64> = data[2..18].iter().map(|&b| (b as i8) as f64 / 8.0).collect();
    let cfg = FanoConfig::with_rate_bias(16, profile.rate(), 2.0, ConvSpec::from_octal("13").unwrap())
        .unwrap()
        .with_max_visits(Some(100_000));
    let mut dm = Demapper::new(&llrs).unwrap();
    let out = fano_decode(&mut dm, &profile, &cfg).unwrap();
    assert_eq!(out.v_hat.len(), 16);
    assert!((0..16).all(|i| profile.is_info(i) || out.v_hat[i] == 0));
});
