//! Scalar parameters of the construction and the constants derived from them.

use crate::error::{Error, Result};
use crate::hypergraph::power;

/// Input parameters `(k, pi, eps)` on `n` vertices plus every derived constant.
///
/// `log2` is `log_n 2`. The primed constants parametrize the recursive
/// construction one uniformity level down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub k: usize,
    pub n: usize,
    pub pi: f64,
    pub eps: f64,
    pub delta: f64,
    pub sigma: f64,
    pub log2: f64,
    pub delta_p: f64,
    pub pi_p: f64,
    pub pi_tilde: f64,
    pub eps_tilde: f64,
    pub eps_p: f64,
    pub sigma_p: f64,
    /// `eps >= 2k log_n 2`
    pub hyp_eps_ok: bool,
    /// `pi >= (k-1) log_n 2`
    pub hyp_pi_ok: bool,
}

impl Params {
    /// Validated constructor. Hypothesis failures only clear the flags.
    pub fn derive(k: usize, pi: f64, eps: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices { n });
        }
        if k == 0 {
            return Err(Error::ZeroUniformity);
        }
        for (name, value) in [("pi", pi), ("eps", eps)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::ParamOutOfRange { name, value });
            }
        }
        Ok(Self::derive_unchecked(k, pi, eps, n))
    }

    /// Recursive levels may leave `[0, 1]`; no range checks here.
    pub(crate) fn derive_unchecked(k: usize, pi: f64, eps: f64, n: usize) -> Self {
        let kf = k as f64;
        let log2 = 1.0 / (n as f64).log2();
        let delta = 1.0 - pi;
        let delta_p = delta + log2;
        let eps_p = 2.0 * eps + 2.0 * kf * log2;
        Params {
            k,
            n,
            pi,
            eps,
            delta,
            sigma: 3f64.powi(k as i32 - 1) * eps,
            log2,
            delta_p,
            pi_p: 1.0 - delta_p,
            pi_tilde: pi - eps - kf * log2,
            eps_tilde: eps + (kf + 1.0) * log2,
            eps_p,
            sigma_p: 3f64.powi(k as i32 - 2) * eps_p,
            hyp_eps_ok: eps >= 2.0 * kf * log2,
            hyp_pi_ok: pi >= (kf - 1.0) * log2,
        }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hyp_eps_ok && self.hyp_pi_ok
    }

    /// Parameters `(k-1, pi', eps')` of the construction for fibers.
    pub fn for_fibers(&self) -> Params {
        Self::derive_unchecked(self.k.saturating_sub(1).max(1), self.pi_p, self.eps_p, self.n)
    }

    /// Largest admissible fingerprint size, `n^pi`.
    pub fn fingerprint_bound(&self) -> f64 {
        power(self.n, self.pi)
    }

    pub fn is_fingerprint(&self, size: usize) -> bool {
        size as f64 <= self.fingerprint_bound()
    }

    /// Exponent a fiber's bounded capacity must reach for expansion:
    /// `1 + (k-2) delta' - eps'`.
    pub fn expanding_exponent(&self) -> f64 {
        1.0 + (self.k as f64 - 2.0) * self.delta_p - self.eps_p
    }

    /// Per-element exponent `(k-1) delta' - eps~`, shared by the expansive
    /// inequality and the container degree test.
    pub fn per_vertex_exponent(&self) -> f64 {
        (self.k as f64 - 1.0) * self.delta_p - self.eps_tilde
    }

    /// `n^{pi~} + 1 <= n^pi`: a fingerprint below `n^{pi~}` always has room
    /// for one more vertex.
    pub fn has_fingerprint_room(&self) -> bool {
        power(self.n, self.pi_tilde) + 1.0 <= self.fingerprint_bound()
    }

    /// Fingerprint room at this level and every recursive level below it.
    pub fn has_fingerprint_room_all_levels(&self) -> bool {
        let mut p = *self;
        loop {
            if p.k < 2 {
                return true;
            }
            if !p.has_fingerprint_room() {
                return false;
            }
            p = p.for_fibers();
        }
    }

    /// Key/value lines in a fixed order.
    pub fn to_lines(&self) -> Vec<(&'static str, String)> {
        use crate::report::fmt_real as r;
        vec![
            ("k", self.k.to_string()),
            ("n", self.n.to_string()),
            ("pi", r(self.pi)),
            ("eps", r(self.eps)),
            ("delta", r(self.delta)),
            ("sigma", r(self.sigma)),
            ("log2", r(self.log2)),
            ("delta_p", r(self.delta_p)),
            ("pi_p", r(self.pi_p)),
            ("pi_tilde", r(self.pi_tilde)),
            ("eps_tilde", r(self.eps_tilde)),
            ("eps_p", r(self.eps_p)),
            ("sigma_p", r(self.sigma_p)),
            ("hyp_eps_ok", self.hyp_eps_ok.to_string()),
            ("hyp_pi_ok", self.hyp_pi_ok.to_string()),
        ]
    }
}
