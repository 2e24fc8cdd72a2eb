//! AWGN and the multiple-access, broadcast and interference channels.
//!
//! Noise levels follow `N_0 = E_b 10^(-Eb/N0 / 10)` with variance `N_0 / 2`
//! per real dimension. `E_b` is the analytic `K / N_b` of the scheme.

use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::codec::{Constellation, SparseMessage};
use crate::dictionary::Dictionary;
use crate::error::{invalid, Result};
use crate::C64;

/// Channel noise: none at all, or a given `E_b/N_0` in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseSetting {
    Noiseless,
    EbN0Db(f64),
}

impl NoiseSetting {
    /// `N_0` for energy per bit `eb`; zero when noiseless.
    pub fn n0(self, eb: f64) -> f64 {
        match self {
            NoiseSetting::Noiseless => 0.0,
            NoiseSetting::EbN0Db(db) => eb * 10f64.powf(-db / 10.0),
        }
    }

    /// Standard deviation per real dimension, `sqrt(N_0 / 2)`.
    pub fn sigma(self, eb: f64) -> f64 {
        (self.n0(eb) / 2.0).sqrt()
    }
}

/// Adds i.i.d. `N(0, sigma^2)` to every real (and, if `complex`, imaginary)
/// component. Draws real then imaginary part for each sample in order.
pub fn add_awgn<R: Rng + ?Sized>(y: &mut [C64], sigma: f64, complex: bool, rng: &mut R) {
    if sigma == 0.0 {
        return;
    }
    for v in y.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        v.re += sigma * re;
        if complex {
            let im: f64 = rng.sample(StandardNormal);
            v.im += sigma * im;
        }
    }
}

/// `y = s + v`.
pub fn awgn<R: Rng + ?Sized>(s: &[C64], sigma: f64, complex: bool, rng: &mut R) -> Vec<C64> {
    let mut y = s.to_vec();
    add_awgn(&mut y, sigma, complex, rng);
    y
}

/// One user's link: channel gain `h`, transmit gain `g` and a noise
/// variance multiplier applied to `N_0 / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserChannel {
    #[serde(default = "one")]
    pub gain_re: f64,
    #[serde(default)]
    pub gain_im: f64,
    #[serde(default = "one")]
    pub power_re: f64,
    #[serde(default)]
    pub power_im: f64,
    #[serde(default = "one")]
    pub sigma2: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for UserChannel {
    fn default() -> Self {
        UserChannel { gain_re: 1.0, gain_im: 0.0, power_re: 1.0, power_im: 0.0, sigma2: 1.0 }
    }
}

impl UserChannel {
    pub fn new(h: C64, g: C64, sigma2: f64) -> Self {
        UserChannel { gain_re: h.re, gain_im: h.im, power_re: g.re, power_im: g.im, sigma2 }
    }

    /// Effective gain `h g`.
    pub fn effective_gain(&self) -> C64 {
        C64::new(self.gain_re, self.gain_im) * C64::new(self.power_re, self.power_im)
    }
}

/// Splits `k` subblocks into consecutive groups of the given sizes.
pub fn assign_subblocks(k: usize, per_user: &[usize]) -> Result<Vec<Range<usize>>> {
    if per_user.contains(&0) || per_user.iter().sum::<usize>() != k {
        return Err(invalid(format!("user sparsities {per_user:?} must be positive and sum to K = {k}")));
    }
    let mut start = 0;
    Ok(per_user
        .iter()
        .map(|&n| {
            start += n;
            start - n..start
        })
        .collect())
}

fn check_disjoint(messages: &[&SparseMessage]) -> Result<()> {
    let mut all: Vec<usize> = messages.iter().flat_map(|m| m.support.iter().copied()).collect();
    all.sort_unstable();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("users share a dictionary column"));
    }
    Ok(())
}

/// `sum_i gain_i A x_i`, accumulated entry by entry in user order. A gain of
/// exactly one adds the symbol unscaled, so unit-gain superposition matches
/// single-user synthesis bit for bit.
pub fn superpose(d: &Dictionary, c: &Constellation, parts: &[(&SparseMessage, C64)]) -> Result<Vec<C64>> {
    check_disjoint(&parts.iter().map(|p| p.0).collect::<Vec<_>>())?;
    let mut s = vec![C64::new(0.0, 0.0); d.n_rows()];
    let unit = C64::new(1.0, 0.0);
    for (msg, gain) in parts {
        for (&alpha, &beta) in msg.support.iter().zip(&msg.symbols) {
            let b = c.symbol(beta);
            d.axpy(if *gain == unit { b } else { gain * b }, alpha, &mut s);
        }
    }
    Ok(s)
}

/// Multiple access: `y = sum_i h_i g_i s_i + v`.
#[allow(clippy::too_many_arguments)]
pub fn mac_combine<R: Rng + ?Sized>(
    d: &Dictionary,
    c: &Constellation,
    messages: &[SparseMessage],
    users: &[UserChannel],
    sigma: f64,
    complex: bool,
    rng: &mut R,
) -> Result<Vec<C64>> {
    if messages.len() != users.len() {
        return Err(invalid("one channel per user required"));
    }
    let parts: Vec<(&SparseMessage, C64)> = messages.iter().zip(users).map(|(m, u)| (m, u.effective_gain())).collect();
    let mut y = superpose(d, c, &parts)?;
    add_awgn(&mut y, sigma, complex, rng);
    Ok(y)
}

/// Broadcast: the transmitter sends the sum of all users' codewords.
pub fn bc_transmit(d: &Dictionary, c: &Constellation, messages: &[SparseMessage]) -> Result<Vec<C64>> {
    let parts: Vec<(&SparseMessage, C64)> = messages.iter().map(|m| (m, C64::new(1.0, 0.0))).collect();
    superpose(d, c, &parts)
}

/// Broadcast: user `i` sees `y_i = s + n_i`.
pub fn bc_observe<R: Rng + ?Sized>(s: &[C64], sigma_i: f64, complex: bool, rng: &mut R) -> Vec<C64> {
    awgn(s, sigma_i, complex, rng)
}

/// Interference: receiver `i` sees `y_i = sum_j h[i][j] s_j + n_i`.
#[allow(clippy::too_many_arguments)]
pub fn ic_observe<R: Rng + ?Sized>(
    d: &Dictionary,
    c: &Constellation,
    messages: &[SparseMessage],
    receiver: usize,
    h: &[Vec<C64>],
    sigma_i: f64,
    complex: bool,
    rng: &mut R,
) -> Result<Vec<C64>> {
    let row = h.get(receiver).ok_or_else(|| invalid("receiver index outside the interference matrix"))?;
    if row.len() != messages.len() {
        return Err(invalid("interference row length differs from the user count"));
    }
    let parts: Vec<(&SparseMessage, C64)> = messages.iter().zip(row).map(|(m, &g)| (m, g)).collect();
    let mut y = superpose(d, c, &parts)?;
    add_awgn(&mut y, sigma_i, complex, rng);
    Ok(y)
}
