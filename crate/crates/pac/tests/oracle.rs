mod common;

use common::{gaussian, kronecker, octal_taps, sigma2, toeplitz, vec_mat, Codebook};
use pac_codes::codec::{conv_encode, encode, insert_data, polar_transform, Demapper};
use pac_codes::fano::{fano_decode, FanoConfig};
use pac_codes::list::list_decode;
use pac_codes::polarization::ReliabilityTable;
use pac_codes::profiles::{polar_profile, RateProfile};
use pac_codes::ConvSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[test]
fn octal_taps_agree() {
    for g in ["3211", "13", "1", "7", "155"] {
        assert_eq!(ConvSpec::from_octal(g).unwrap().taps(), octal_taps(g).as_slice(), "g = {g}");
    }
}

proptest! {
    #[test]
    fn pac_encoder_matches_matrix_product(n_log in 0u32..7, seed in any::<u64>()) {
        let n = 1usize << n_log;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        let profile = RateProfile::from_indices(n, idx[..k].iter().copied()).unwrap();
        let d: Vec<u8> = (0..k).map(|_| rng.gen_range(0..2)).collect();
        let v = insert_data(&d, &profile).unwrap().into_bits();
        let taps = octal_taps("3211");
        let expected = vec_mat(&vec_mat(&v, &toeplitz(&taps, n)), &kronecker(n));
        prop_assert_eq!(encode(&d, &profile, &ConvSpec::default()).unwrap(), expected);
    }

    #[test]
    fn polar_transform_matches_kronecker(bits in proptest::collection::vec(0u8..2, 256)) {
        for n in [1usize, 2, 4, 8, 16, 32, 64, 128, 256] {
            prop_assert_eq!(polar_transform(&bits[..n]).unwrap(), vec_mat(&bits[..n], &kronecker(n)));
        }
    }
}

fn small_code(n: usize, k: usize) -> (RateProfile, Codebook) {
    let table = ReliabilityTable::compute(n, 2.0, k as f64 / n as f64).unwrap();
    let profile = polar_profile(&table, k).unwrap();
    let book = Codebook::new(n, profile.info_indices(), &octal_taps("13"));
    (profile, book)
}

#[test]
fn codebook_matches_library_encoder() {
    let (_, book) = small_code(16, 8);
    let conv = ConvSpec::from_octal("13").unwrap();
    for (v, x) in &book.words {
        assert_eq!(&polar_transform(&conv_encode(v, &conv)).unwrap(), x);
    }
}

#[test]
fn full_list_is_maximum_likelihood() {
    let conv = ConvSpec::from_octal("13").unwrap();
    for (n, k) in [(8, 4), (16, 8)] {
        let (profile, book) = small_code(n, k);
        let var = sigma2(1.0, k as f64 / n as f64);
        let mut rng = ChaCha20Rng::seed_from_u64(n as u64);
        for _ in 0..500 {
            let (_, x) = &book.words[rng.gen_range(0..book.words.len())];
            let llrs: Vec<f64> = x
                .iter()
                .map(|&b| {
                    let y = if b == 0 { 1.0 } else { -1.0 } + var.sqrt() * gaussian(1.0 - rng.gen::<f64>(), rng.gen());
                    2.0 * y / var
                })
                .collect();
            if book.ml_margin(&llrs) < 1e-9 {
                continue;
            }
            let ml = book.ml(&llrs).to_vec();
            assert_eq!(list_decode(&llrs, &profile, &conv, 1 << k).unwrap().v_hat, ml);
            let cfg = FanoConfig::with_rate_bias(n, k as f64 / n as f64, 2.0, conv.clone()).unwrap();
            let out = fano_decode(&mut Demapper::new(&llrs).unwrap(), &profile, &cfg).unwrap();
            // whatever Fano returns is a codeword of this code
            assert!(book.words.iter().any(|(w, _)| *w == out.v_hat));
        }
    }
}
