use crate::{Error, Result};

/// Exact check-node update `2 atanh(tanh(a/2) tanh(b/2))`, evaluated as
/// `sgn(a) sgn(b) [min(|a|,|b|) + ln(1+e^{−(|a|+|b|)}) − ln(1+e^{−||a|−|b||})]`.
#[inline]
pub fn check_node(a: f64, b: f64) -> f64 {
    let (x, y) = (a.abs(), b.abs());
    let mag = x.min(y) + softplus_neg(x + y) - softplus_neg((x - y).abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// `ln(1 + e^{−t})` for `t ≥ 0`; below one ulp of 1 past `t = 40`.
#[inline]
fn softplus_neg(t: f64) -> f64 {
    if t > 40.0 {
        (-t).exp()
    } else {
        (-t).exp().ln_1p()
    }
}

#[inline]
pub fn check_node_min_sum(a: f64, b: f64) -> f64 {
    let mag = a.abs().min(b.abs());
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node update `b + (1 − 2s) a`.
#[inline]
pub fn variable_node(a: f64, b: f64, s: u8) -> f64 {
    if s == 0 {
        b + a
    } else {
        b - a
    }
}

#[inline]
fn bit_length(x: usize) -> usize {
    (usize::BITS - x.leading_zeros()) as usize
}

/// Successive-cancellation demapper for `x = u F^{⊗n}`.
///
/// Produces `z_i = ln P(u_i = 0 | y, û^{i−1}) / P(u_i = 1 | y, û^{i−1})` one
/// position at a time. LLRs and partial sums are kept for every node of the
/// SC tree (`O(N log N)` storage), so [`rewind`](Self::rewind) to an earlier
/// position only recomputes the part of the tree below the deepest node
/// shared with the last evaluated leaf.
#[derive(Debug, Clone)]
pub struct Demapper {
    n: usize,
    levels: usize,
    /// depth-major: node `k` at depth `d` occupies `[d*n + k*s, d*n + (k+1)*s)`, `s = n >> d`
    alpha: Vec<f64>,
    beta: Vec<u8>,
    pos: usize,
    /// leaf whose root-to-leaf LLR path was last evaluated
    path_leaf: Option<usize>,
    /// depths `0..=valid_depth` of that path are consistent with the current decisions
    valid_depth: usize,
    min_sum: bool,
}

impl Demapper {
    pub fn new(channel_llrs: &[f64]) -> Result<Self> {
        let n = channel_llrs.len();
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let levels = n.trailing_zeros() as usize;
        let mut alpha = vec![0.0; (levels + 1) * n];
        alpha[..n].copy_from_slice(channel_llrs);
        Ok(Self {
            n,
            levels,
            alpha,
            beta: vec![0; (levels + 1) * n],
            pos: 0,
            path_leaf: None,
            valid_depth: 0,
            min_sum: false,
        })
    }

    /// Use the min-sum check-node approximation instead of the exact update.
    pub fn with_min_sum(mut self, enabled: bool) -> Self {
        self.min_sum = enabled;
        self.path_leaf = None;
        self.valid_depth = 0;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the next undecided position.
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn is_exhausted(&self) -> bool {
        self.pos == self.n
    }

    pub fn channel_llrs(&self) -> &[f64] {
        &self.alpha[..self.n]
    }

    /// Decisions `û_0 … û_{pos−1}`.
    pub fn decisions(&self) -> &[u8] {
        &self.beta[self.levels * self.n..self.levels * self.n + self.pos]
    }

    /// LLR of the current position given the decisions fed so far.
    pub fn next_llr(&mut self) -> Result<f64> {
        if self.is_exhausted() {
            return Err(Error::DemapperExhausted(self.n));
        }
        Ok(self.llr_at(self.pos))
    }

    fn llr_at(&mut self, i: usize) -> f64 {
        let (n, levels) = (self.n, self.levels);
        let start = match self.path_leaf {
            Some(c) => (levels - bit_length(c ^ i)).min(self.valid_depth),
            None => 0,
        };
        for d in start + 1..=levels {
            let k = i >> (levels - d);
            let s = n >> d;
            let parent = (d - 1) * n + (k & !1) * s;
            let (above, below) = self.alpha.split_at_mut(d * n);
            let a = &above[parent..parent + s];
            let b = &above[parent + s..parent + 2 * s];
            let dst = &mut below[k * s..(k + 1) * s];
            if k & 1 == 0 {
                if self.min_sum {
                    for t in 0..s {
                        dst[t] = check_node_min_sum(a[t], b[t]);
                    }
                } else {
                    for t in 0..s {
                        dst[t] = check_node(a[t], b[t]);
                    }
                }
            } else {
                let left = &self.beta[d * n + (k - 1) * s..d * n + k * s];
                for t in 0..s {
                    dst[t] = variable_node(a[t], b[t], left[t]);
                }
            }
        }
        self.path_leaf = Some(i);
        self.valid_depth = levels;
        self.alpha[levels * n + i]
    }

    /// Fixes `û_pos = u_bit` and advances.
    pub fn feed(&mut self, u_bit: u8) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::DemapperExhausted(self.n));
        }
        let (n, levels) = (self.n, self.levels);
        self.beta[levels * n + self.pos] = u_bit & 1;
        let (mut d, mut k) = (levels, self.pos);
        while d > 0 && k & 1 == 1 {
            let s = n >> d;
            let (above, below) = self.beta.split_at_mut(d * n);
            let left = &below[(k - 1) * s..k * s];
            let right = &below[k * s..(k + 1) * s];
            let parent = &mut above[(d - 1) * n + (k - 1) * s..(d - 1) * n + (k + 1) * s];
            for t in 0..s {
                parent[t] = left[t] ^ right[t];
                parent[s + t] = right[t];
            }
            k >>= 1;
            d -= 1;
        }
        self.pos += 1;
        Ok(())
    }

    /// Forgets decisions at positions `>= target`.
    pub fn rewind(&mut self, target: usize) -> Result<()> {
        if target > self.pos {
            return Err(Error::InvalidRewind {
                target,
                position: self.pos,
            });
        }
        if let Some(c) = self.path_leaf {
            if c >= target {
                let common = self.levels - bit_length(c ^ target);
                self.valid_depth = self.valid_depth.min(common);
            }
        }
        self.pos = target;
        Ok(())
    }
}
