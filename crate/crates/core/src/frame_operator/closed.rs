//! Closed forms of `Sf = Σ_{m,n} (f, g_{m,n}) g_{m,n}` for windows `P(t)/(t - iw)`.
//!
//! Summing the modulations through the Dirac comb and the translations through the
//! lattice-sum identity leaves, for each pair of terms `(k, l)`,
//!
//! `(2πi/α) conj(a_k) a_l Σ_j f(t) e^{2πi(b_l x - b_k t)} [E_C(z₁) - E_C(z₂)] / (β (s - 2iw))`
//!
//! with `s = j/β`, `t = x - s`, `z₁ = (t + iw)/α`, `z₂ = (x - iw)/α`, `C = {(b_k - b_l)α}`
//! and `E_C(z) = e^{2πiCz}/(e^{2πiz} - 1)`.

use std::f64::consts::PI;

use crate::criterion::in_boundary_band;
use crate::error::{invalid, Error, Result};
use crate::frame_operator::comb::comb_block;
use crate::frame_operator::lemma::comb_ratio;
use crate::sampled::SampledFunction;
use crate::window::{CauchyTerm, Lattice, WindowSpec, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const SNAP: f64 = 1e-9;

/// Fractional part with integers within `1e-9` snapped to zero.
pub fn snapped_fract(x: f64) -> f64 {
    let f = x - x.floor();
    if f < SNAP || 1.0 - f < SNAP {
        0.0
    } else {
        f
    }
}

fn one(_: f64) -> C64 {
    C64::new(1.0, 0.0)
}

struct Setup {
    w: f64,
    terms: Vec<CauchyTerm>,
    alpha: f64,
    beta: f64,
}

impl Setup {
    fn new(spec: &WindowSpec, lattice: Lattice) -> Result<Self> {
        let (w, terms) = spec
            .cauchy_terms()
            .ok_or_else(|| invalid("spec", "closed forms need a window P(t)/(t - iw)"))?;
        Ok(Self {
            w,
            terms,
            alpha: lattice.alpha,
            beta: lattice.beta,
        })
    }

    fn z1(&self, t: f64) -> C64 {
        C64::new(t, self.w) / self.alpha
    }

    fn z2(&self, x: f64) -> C64 {
        C64::new(x, -self.w) / self.alpha
    }

    fn h(&self, s: f64) -> C64 {
        1.0 / C64::new(s, -2.0 * self.w)
    }

    fn finish(&self, acc: SampledFunction) -> SampledFunction {
        acc.scale(2.0 * PI * I / self.alpha)
    }
}

fn accumulate(acc: &mut SampledFunction, part: Result<SampledFunction>) -> Result<()> {
    *acc = acc.add(&part?)?;
    Ok(())
}

/// The general pair-wise form, valid for every lattice.
pub fn frame_operator_general(spec: &WindowSpec, lattice: Lattice, f: &SampledFunction) -> Result<SampledFunction> {
    let st = Setup::new(spec, lattice)?;
    let mut acc = f.zeros_like();
    for tk in &st.terms {
        for tl in &st.terms {
            let coef = tk.amplitude.conj() * tl.amplitude;
            let (bk, bl) = (tk.frequency, tl.frequency);
            let c = snapped_fract((bk - bl) * st.alpha);
            accumulate(
                &mut acc,
                comb_block(
                    f,
                    st.beta,
                    |t| C64::cis(2.0 * PI * (bl - bk) * t) * comb_ratio(c, st.z1(t)),
                    |s| coef * C64::cis(2.0 * PI * bl * s) * st.h(s),
                    one,
                ),
            )?;
            accumulate(
                &mut acc,
                comb_block(
                    f,
                    st.beta,
                    one,
                    |s| coef * C64::cis(2.0 * PI * bk * s) * st.h(s),
                    |x| -C64::cis(2.0 * PI * (bl - bk) * x) * comb_ratio(c, st.z2(x)),
                ),
            )?;
        }
    }
    Ok(st.finish(acc))
}

/// Block form for `α · max |b_k - b_l| ≤ 1`, where every fractional part is either
/// `(b_k - b_l)α` or `1 + (b_k - b_l)α` and the phase factors drop out.
pub fn frame_operator_explicit_small_params(
    spec: &WindowSpec,
    lattice: Lattice,
    f: &SampledFunction,
) -> Result<SampledFunction> {
    let st = Setup::new(spec, lattice)?;
    let spread = st.terms.last().map(|t| t.frequency).unwrap_or(0.0) - st.terms[0].frequency;
    if st.alpha * spread > 1.0 + SNAP {
        return Err(Error::Precondition(format!(
            "alpha * max |b_k - b_l| = {} exceeds 1",
            st.alpha * spread
        )));
    }
    let w = st.w;
    let lower_pre = |t: f64| 1.0 / ((2.0 * PI * I * st.z1(t)).exp() - 1.0);
    let lower_post = |x: f64| 1.0 / ((2.0 * PI * I * st.z2(x)).exp() - 1.0);
    let upper_pre = |t: f64| 1.0 / (1.0 - (-2.0 * PI * I * st.z1(t)).exp());
    let upper_post = |x: f64| 1.0 / (1.0 - (-2.0 * PI * I * st.z2(x)).exp());

    let mut acc = f.zeros_like();
    for tk in &st.terms {
        for tl in &st.terms {
            let coef = tk.amplitude.conj() * tl.amplitude;
            let (bk, bl) = (tk.frequency, tl.frequency);
            let d = bk - bl;
            let pre_kernel = |s: f64| coef * st.h(s) * C64::cis(2.0 * PI * bl * s) * (-2.0 * PI * w * d).exp();
            let post_kernel = |s: f64| -coef * st.h(s) * C64::cis(2.0 * PI * bk * s) * (2.0 * PI * w * d).exp();
            if d > 0.0 {
                accumulate(&mut acc, comb_block(f, st.beta, lower_pre, pre_kernel, one))?;
                accumulate(&mut acc, comb_block(f, st.beta, one, post_kernel, lower_post))?;
            } else if d < 0.0 {
                accumulate(&mut acc, comb_block(f, st.beta, upper_pre, pre_kernel, one))?;
                accumulate(&mut acc, comb_block(f, st.beta, one, post_kernel, upper_post))?;
            } else {
                let demod = |t: f64| C64::cis(-2.0 * PI * bk * t);
                let remod = |x: f64| coef * C64::cis(2.0 * PI * bk * x);
                accumulate(
                    &mut acc,
                    comb_block(f, st.beta, |t| demod(t) * lower_pre(t), |s| st.h(s), remod),
                )?;
                accumulate(
                    &mut acc,
                    comb_block(f, st.beta, demod, |s| st.h(s), |x| -remod(x) * lower_post(x)),
                )?;
            }
        }
    }
    Ok(st.finish(acc))
}

/// Sinc window `(1 - e^{2πw}e^{2πit})/(t - iw)` (bandwidth one) with `α < 1`:
/// `Sf = (2πi/α) f ∗ h` where `h(s) = (1 - e^{4πw} e^{2πis})/(s - 2iw) · Σ_m e^{2πimβs}`.
pub fn frame_operator_sinc_small_alpha(f: &SampledFunction, w: f64, alpha: f64, beta: f64) -> Result<SampledFunction> {
    if !(w < 0.0) {
        return Err(invalid("w", format!("must be negative, got {w}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Precondition(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let lattice = Lattice::new(alpha, beta)?;
    let st = Setup::new(&WindowSpec::shifted_sinc(1.0, w)?, lattice)?;
    let out = comb_block(
        f,
        beta,
        one,
        |s| (1.0 - (4.0 * PI * w).exp() * C64::cis(2.0 * PI * s)) * st.h(s),
        one,
    )?;
    Ok(st.finish(out))
}

/// Sinc window of bandwidth `b` at any `α`: the equal-frequency pairs combine into
/// `S_R`, a single comb against `sin((π/α)(s - 2iw))/(s - 2iw) · (1 + e^{4πwb} e^{2πibs})`
/// between the multipliers `1/sin((π/α)(t + iw))` and `(π/α)/sin((π/α)(x - iw))`; the
/// cross pairs add four blocks with fractional parts `{bα}` and `{-bα}`.
pub fn frame_operator_sinc_general(
    f: &SampledFunction,
    w: f64,
    alpha: f64,
    beta: f64,
    b: f64,
) -> Result<SampledFunction> {
    let spec = WindowSpec::shifted_sinc(b, w)?;
    let lattice = Lattice::new(alpha, beta)?;
    let st = Setup::new(&spec, lattice)?;
    let k = PI / alpha;
    let sin = |z: C64| z.sin();
    let floor = (k * w.abs()).sinh();
    if floor < 1e-300 {
        return Err(Error::Precondition("sin denominators vanish".into()));
    }

    let mut acc = comb_block(
        f,
        beta,
        |t| 1.0 / sin(k * C64::new(t, w)),
        |s| sin(k * C64::new(s, -2.0 * w)) * st.h(s) * (1.0 + (4.0 * PI * w * b).exp() * C64::cis(2.0 * PI * b * s)),
        |x| k / sin(k * C64::new(x, -w)),
    )?
    .scale(alpha / (2.0 * PI * I));

    let c_plus = snapped_fract(b * alpha);
    let c_minus = snapped_fract(-b * alpha);
    let weight = (2.0 * PI * w * b).exp();
    let demod = |t: f64| C64::cis(-2.0 * PI * b * t);
    let remod = |x: f64| C64::cis(2.0 * PI * b * x);
    let h = |s: f64| weight * st.h(s);
    let mut cross = f.zeros_like();
    accumulate(&mut cross, comb_block(f, beta, demod, h, |x| comb_ratio(c_plus, st.z2(x))))?;
    accumulate(
        &mut cross,
        comb_block(f, beta, |t| -demod(t) * comb_ratio(c_plus, st.z1(t)), h, one),
    )?;
    accumulate(&mut cross, comb_block(f, beta, one, h, |x| remod(x) * comb_ratio(c_minus, st.z2(x))))?;
    accumulate(
        &mut cross,
        comb_block(f, beta, |t| -comb_ratio(c_minus, st.z1(t)), h, remod),
    )?;
    acc = acc.add(&cross)?;
    Ok(st.finish(acc))
}

/// Whether a closed form is expected to be numerically reliable for this lattice.
pub fn closed_form_applicable(spec: &WindowSpec, lattice: Lattice) -> bool {
    spec.cauchy_terms().is_some() && !in_boundary_band(spec, lattice, 0.0)
}
