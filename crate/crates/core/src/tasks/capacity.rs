use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest Legendre order accepted; squared binomials stay exact in f64 up to here.
pub const MAX_LEGENDRE_ORDER: u32 = 20;

/// A target sequence aligned to the input stream: `values[i]` is the desired
/// output at input index `start + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedTarget {
    pub values: Vec<f64>,
    pub start: usize,
}

impl AlignedTarget {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `t` i.i.d. samples, uniform on (0, 1]. Never exactly zero.
pub fn uniform_input(t: usize, seed: u64) -> Result<Vec<f64>> {
    if t == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // random::<f64>() is uniform on [0, 1)
    Ok((0..t).map(|_| 1.0 - rng.random::<f64>()).collect())
}

/// `y_t = u_{t - tau}` for `t` in `[tau, T)`. The first `tau` inputs have no
/// target and are dropped rather than padded.
pub fn delay_target(u: &[f64], tau: usize) -> Result<AlignedTarget> {
    if tau >= u.len() {
        return Err(Error::InvalidArgument(format!(
            "delay {tau} leaves no targets for {} inputs",
            u.len()
        )));
    }
    Ok(AlignedTarget {
        values: u[..u.len() - tau].to_vec(),
        start: tau,
    })
}

fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc * (n as u64 - i) / (i + 1);
    }
    acc as f64
}

/// Legendre polynomial of order `n` at `x`, in the form
/// `2^-n sum_k C(n,k)^2 (x - 1)^(n-k) (x + 1)^k`.
pub fn legendre_value(x: f64, n: u32) -> f64 {
    let mut sum = 0.0;
    for k in 0..=n {
        let c = binomial(n, k);
        sum += c * c * (x - 1.0).powi((n - k) as i32) * (x + 1.0).powi(k as i32);
    }
    sum / 2f64.powi(n as i32)
}

/// Legendre polynomial of order `n` applied to the `tau`-delayed input, with
/// the same alignment as [`delay_target`].
pub fn legendre_target(u: &[f64], n: u32, tau: usize) -> Result<AlignedTarget> {
    if n > MAX_LEGENDRE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "Legendre order {n} exceeds {MAX_LEGENDRE_ORDER}"
        )));
    }
    let delayed = delay_target(u, tau)?;
    Ok(AlignedTarget {
        values: delayed.values.iter().map(|&x| legendre_value(x, n)).collect(),
        start: delayed.start,
    })
}
