//! Reference implementations written directly from the definitions, sharing
//! no code with the library: dense GF(2) matrices for the pre-transform and
//! the polar kernel, and brute-force maximum-likelihood decoding.

#![allow(dead_code)]

/// `F^{⊗n}` as a dense 0/1 matrix, row-major.
pub fn kronecker(n: usize) -> Vec<Vec<u8>> {
    let mut g = vec![vec![1u8]];
    while g.len() < n {
        let m = g.len();
        let mut next = vec![vec![0u8; 2 * m]; 2 * m];
        for r in 0..m {
            for c in 0..m {
                next[r][c] = g[r][c];
                next[r + m][c] = g[r][c];
                next[r + m][c + m] = g[r][c];
            }
        }
        g = next;
    }
    g
}

/// Upper-triangular Toeplitz matrix with first row `taps`.
pub fn toeplitz(taps: &[u8], n: usize) -> Vec<Vec<u8>> {
    let mut t = vec![vec![0u8; n]; n];
    for (r, row) in t.iter_mut().enumerate() {
        for (j, &c) in taps.iter().enumerate() {
            if r + j < n {
                row[r + j] = c;
            }
        }
    }
    t
}

pub fn vec_mat(v: &[u8], m: &[Vec<u8>]) -> Vec<u8> {
    let n = m[0].len();
    let mut out = vec![0u8; n];
    for (i, &b) in v.iter().enumerate() {
        if b == 1 {
            for (o, &x) in out.iter_mut().zip(&m[i]) {
                *o ^= x;
            }
        }
    }
    out
}

/// Octal connection polynomial to taps, most significant digit first.
pub fn octal_taps(s: &str) -> Vec<u8> {
    let bits: String = s.chars().map(|c| format!("{:03b}", c.to_digit(8).unwrap())).collect();
    bits.trim_start_matches('0').bytes().map(|b| b - b'0').collect()
}

/// A small PAC code with every codeword listed.
pub struct Codebook {
    pub n: usize,
    pub info: Vec<usize>,
    /// `(v, x)` for every message, in message order
    pub words: Vec<(Vec<u8>, Vec<u8>)>,
}

impl Codebook {
    pub fn new(n: usize, info: &[usize], taps: &[u8]) -> Self {
        let t = toeplitz(taps, n);
        let f = kronecker(n);
        let k = info.len();
        let words = (0..1u64 << k)
            .map(|msg| {
                let mut v = vec![0u8; n];
                for (j, &i) in info.iter().enumerate() {
                    v[i] = ((msg >> j) & 1) as u8;
                }
                let x = vec_mat(&vec_mat(&v, &t), &f);
                (v, x)
            })
            .collect();
        Self { n, info: info.to_vec(), words }
    }

    pub fn encode(&self, v: &[u8]) -> Vec<u8> {
        self.words.iter().find(|(w, _)| w == v).map(|(_, x)| x.clone()).unwrap()
    }

    /// Maximum-likelihood carrier word for channel LLRs (`ln P(0)/P(1)`):
    /// the codeword maximizing `Σ (1 − 2x_j) llr_j`.
    pub fn ml(&self, llrs: &[f64]) -> &[u8] {
        let score = |x: &[u8]| -> f64 { x.iter().zip(llrs).map(|(&b, &l)| if b == 0 { l } else { -l }).sum() };
        let mut best = &self.words[0];
        let mut best_score = score(&best.1);
        for w in &self.words[1..] {
            let s = score(&w.1);
            if s > best_score {
                best = w;
                best_score = s;
            }
        }
        &best.0
    }

    /// Gap between the best and second-best codeword correlations.
    pub fn ml_margin(&self, llrs: &[f64]) -> f64 {
        let mut scores: Vec<f64> = self
            .words
            .iter()
            .map(|(_, x)| x.iter().zip(llrs).map(|(&b, &l)| if b == 0 { l } else { -l }).sum())
            .collect();
        scores.sort_by(|a, b| b.total_cmp(a));
        scores[0] - scores[1]
    }
}

/// Standard normal deviate by Box–Muller from two uniforms in (0, 1].
pub fn gaussian(u1: f64, u2: f64) -> f64 {
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// BI-AWGN noise variance for unit-energy BPSK at `ebn0_db` and `rate`.
pub fn sigma2(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Linear interpolation of log10(FER) to find where it crosses `target`.
/// Points must be sorted by SNR.
pub fn crossing_db(points: &[(f64, f64)], target: f64) -> Option<f64> {
    points.windows(2).find_map(|w| {
        let ((s0, f0), (s1, f1)) = (w[0], w[1]);
        if f0 >= target && f1 < target && f1 > 0.0 {
            let (l0, l1, lt) = (f0.log10(), f1.log10(), target.log10());
            Some(s0 + (s1 - s0) * (l0 - lt) / (l0 - l1))
        } else {
            None
        }
    })
}
