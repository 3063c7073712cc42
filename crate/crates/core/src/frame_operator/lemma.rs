//! The lattice sum `Σ_n e^{2πiCn} (1/(z₁ - n) - 1/(z₂ - n))` in closed form and by
//! partial sums.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::window::C64;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `e^{2πiCz} / (e^{2πiz} - 1)`, rewritten for `Im z < 0` so neither exponential overflows.
pub fn comb_ratio(c: f64, z: C64) -> C64 {
    if z.im >= 0.0 {
        (2.0 * PI * I * c * z).exp() / ((2.0 * PI * I * z).exp() - 1.0)
    } else {
        (2.0 * PI * I * (c - 1.0) * z).exp() / (1.0 - (-2.0 * PI * I * z).exp())
    }
}

fn check_not_integer(z: C64) -> Result<()> {
    if z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12 {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok(())
}

/// `2πi e^{2πiCz₁}/(e^{2πiz₁} - 1) - 2πi e^{2πiCz₂}/(e^{2πiz₂} - 1)` for `C ∈ [0, 1)`.
pub fn lemma_sum_closed(c: f64, z1: C64, z2: C64) -> Result<C64> {
    if !(0.0..1.0).contains(&c) {
        return Err(invalid("C", format!("must lie in [0, 1), got {c}")));
    }
    check_not_integer(z1)?;
    check_not_integer(z2)?;
    Ok(2.0 * PI * I * (comb_ratio(c, z1) - comb_ratio(c, z2)))
}

/// Symmetric partial sum over `|n| ≤ N`, pairing the two fractions so each term decays
/// like `1/n²`.
pub fn lemma_sum_partial(c: f64, z1: C64, z2: C64, n_max: u64) -> C64 {
    let term = |n: f64| C64::cis(2.0 * PI * c * n) * (z2 - z1) / ((z1 - n) * (z2 - n));
    let mut acc = C64::new(0.0, 0.0);
    // tail first, to limit rounding
    for k in (1..=n_max).rev() {
        let k = k as f64;
        acc += term(k) + term(-k);
    }
    acc + term(0.0)
}
