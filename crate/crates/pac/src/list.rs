//! Successive-cancellation list decoding of PAC codes.
//!
//! Every path carries its own demapper and convolutional register. Frozen
//! positions extend each path by `v_i = 0`; information positions fork every
//! path and the `L` candidates with the smallest penalty survive. The penalty
//! of a decision `u_i` with demapper LLR `z_i` is
//! `log2(1 + exp(−(1 − 2u_i) z_i))`.

use crate::codec::{ConvSpec, Demapper};
use crate::fano::log2_one_plus_exp_neg;
use crate::profiles::RateProfile;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct ListPath {
    pub v_prefix: Vec<u8>,
    pub conv_state: u64,
    pub path_metric: f64,
    demapper: Demapper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ListOutcome {
    pub v_hat: Vec<u8>,
    /// Penalty of the selected path.
    pub path_metric: f64,
}

/// Penalty for deciding `u_bit` on an LLR of `llr`.
#[inline]
pub fn decision_penalty(llr: f64, u_bit: u8) -> f64 {
    log2_one_plus_exp_neg(if u_bit == 0 { llr } else { -llr })
}

pub fn list_decode(
    channel_llrs: &[f64],
    profile: &RateProfile,
    conv: &ConvSpec,
    list_size: usize,
) -> Result<ListOutcome> {
    if list_size == 0 {
        return Err(Error::InvalidListSize);
    }
    let n = profile.n();
    if channel_llrs.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: channel_llrs.len() });
    }

    let mut paths = vec![ListPath {
        v_prefix: Vec::with_capacity(n),
        conv_state: 0,
        path_metric: 0.0,
        demapper: Demapper::new(channel_llrs)?,
    }];
    // (parent, v, penalty after decision)
    let mut candidates: Vec<(usize, u8, f64)> = Vec::with_capacity(2 * list_size);

    for i in 0..n {
        if !profile.is_info(i) {
            for p in &mut paths {
                let z = p.demapper.next_llr()?;
                let (u, next) = conv.step(p.conv_state, 0);
                p.path_metric += decision_penalty(z, u);
                p.demapper.feed(u)?;
                p.v_prefix.push(0);
                p.conv_state = next;
            }
            continue;
        }

        candidates.clear();
        for (idx, p) in paths.iter_mut().enumerate() {
            let z = p.demapper.next_llr()?;
            let (u0, _) = conv.step(p.conv_state, 0);
            for v in 0..2u8 {
                candidates.push((idx, v, p.path_metric + decision_penalty(z, u0 ^ v)));
            }
        }
        if candidates.len() > list_size {
            // stable sort keeps lower (parent, v) first among equal penalties
            candidates.sort_by(|a, b| a.2.total_cmp(&b.2));
            candidates.truncate(list_size);
            candidates.sort_by_key(|c| (c.0, c.1));
        }

        let mut next_paths = Vec::with_capacity(candidates.len());
        let mut old: Vec<Option<ListPath>> = paths.into_iter().map(Some).collect();
        for (k, &(parent, v, metric)) in candidates.iter().enumerate() {
            let shared = candidates.get(k + 1).is_some_and(|c| c.0 == parent);
            let mut p = if shared {
                old[parent].clone().expect("parent alive")
            } else {
                old[parent].take().expect("parent alive")
            };
            let (u, next) = conv.step(p.conv_state, v);
            p.demapper.feed(u)?;
            p.v_prefix.push(v);
            p.conv_state = next;
            p.path_metric = metric;
            next_paths.push(p);
        }
        paths = next_paths;
    }

    let best = paths
        .into_iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.path_metric.total_cmp(&b.path_metric).then(ia.cmp(ib)))
        .map(|(_, p)| p)
        .expect("at least one path");
    Ok(ListOutcome { v_hat: best.v_prefix, path_metric: best.path_metric })
}

/// Penalty of a complete carrier word, recomputed from scratch.
pub fn path_metric_of(channel_llrs: &[f64], v: &[u8], conv: &ConvSpec) -> Result<f64> {
    let mut dm = Demapper::new(channel_llrs)?;
    if v.len() != dm.n() {
        return Err(Error::LengthMismatch { expected: dm.n(), actual: v.len() });
    }
    let mut metric = 0.0;
    let mut state = 0;
    for &b in v {
        let z = dm.next_llr()?;
        let (u, next) = conv.step(state, b);
        metric += decision_penalty(z, u);
        dm.feed(u)?;
        state = next;
    }
    Ok(metric)
}
