//! The frame operator `Sf = Σ_{m,n} (f, g_{m,n}) g_{m,n}`: a truncated brute-force sum
//! and closed forms for windows `P(t)/(t - iw)` built on the Dirac comb.

mod closed;
mod comb;
mod direct;
mod lemma;

pub use closed::{
    closed_form_applicable, frame_operator_explicit_small_params, frame_operator_general,
    frame_operator_sinc_general, frame_operator_sinc_small_alpha, snapped_fract,
};
pub use comb::{comb_convolve, CombKernel};
pub use direct::{frame_operator_direct, frame_operator_direct_nested, DirectOutput, DirectTruncation};
pub use lemma::{comb_ratio, lemma_sum_closed, lemma_sum_partial};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::window::{Lattice, WindowSpec, C64};

/// `g_{m,n}(t) = e^{2πimβt} g(t - αn)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaborAtom {
    pub spec: WindowSpec,
    pub lattice: Lattice,
    pub m: i64,
    pub n: i64,
}

impl GaborAtom {
    pub fn eval(&self, t: f64) -> Result<C64> {
        let shifted = self.spec.eval(C64::new(t - self.lattice.alpha * self.n as f64, 0.0))?;
        Ok(C64::cis(2.0 * PI * self.m as f64 * self.lattice.beta * t) * shifted)
    }
}

pub fn gabor_atom_eval(atom: &GaborAtom, t: f64) -> Result<C64> {
    atom.eval(t)
}
