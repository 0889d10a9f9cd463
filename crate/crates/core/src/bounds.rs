//! Balanced Forman curvature and the closed-form bounds on Ollivier–Ricci
//! curvature: the coverage envelope, the lazy transport envelope, and the
//! matching-augmented lower bound with its lazy transfer.

use serde::Serialize;

use crate::graph::EdgeKey;
use crate::local::{ComparisonModuli, EdgeStats, LazyParams, LocalStats};

#[inline]
pub(crate) fn pos(x: f64) -> f64 {
    x.max(0.0)
}

/// `S + T·tri + c4`, or 0 on a pendant edge.
pub fn bf_curvature(ls: &LocalStats, cm: &ComparisonModuli) -> f64 {
    if ls.deg_min() == 1 {
        0.0
    } else {
        cm.s + cm.t * ls.tri as f64 + ls.c4_edge
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnvelopeTerms {
    pub const_alpha: f64,
    pub slope_alpha: f64,
    pub envelope_exact_xi: f64,
    pub theta_at_tri: f64,
}

/// Intercept of the coverage envelope in the triangle count.
pub fn coverage_const(lp: &LazyParams) -> f64 {
    -1.0 + 2.0 * (lp.z_i + lp.z_j)
        + lp.residual_sum()
        + (lp.deg_i + lp.deg_j - 2) as f64 / lp.sigma
}

/// Slope of the coverage envelope in the triangle count.
pub fn coverage_slope(lp: &LazyParams) -> f64 {
    lp.w_i + lp.w_j - 2.0 / lp.sigma
}

/// Coverage envelope evaluated at a (possibly fractional) triangle count.
pub fn theta(lp: &LazyParams, tri: f64) -> f64 {
    coverage_const(lp) + coverage_slope(lp) * tri
}

/// Intercept, slope, the envelope with the true cross-edge count, and the
/// coverage envelope at the edge's own triangle count.
pub fn coverage_theta(lp: &LazyParams, ls: &LocalStats) -> EnvelopeTerms {
    EnvelopeTerms {
        const_alpha: coverage_const(lp),
        slope_alpha: coverage_slope(lp),
        envelope_exact_xi: envelope_upper(lp, ls),
        theta_at_tri: theta(lp, ls.tri as f64),
    }
}

/// Upper bound on lazy OR curvature from diagonal saturation, with the
/// unique-to-unique and triangle slack terms at their envelopes.
pub fn envelope_upper(lp: &LazyParams, ls: &LocalStats) -> f64 {
    let tri = ls.tri as f64;
    let ui = ls.unique_i() as f64 * lp.w_i;
    let uj = ls.unique_j() as f64 * lp.w_j;
    -1.0 + 2.0 * (lp.z_i + lp.z_j)
        + lp.residual_sum()
        + 2.0 * tri * lp.w_meet
        + ui.min(uj).min(ls.xi as f64 / lp.sigma)
        + (tri * (lp.w_i - lp.w_j).abs()).min(ui + uj)
}

/// Matching-augmented lower bound on the non-lazy curvature:
/// `-[K - z_max - Sq]_+ - [K - z_min - Sq]_+ + z_max`.
pub fn jl_lower_nonlazy(cm: &ComparisonModuli) -> f64 {
    jl_template(cm.k, cm.z_max, cm.z_min, cm.sq)
}

pub(crate) fn jl_template(k: f64, z_max: f64, z_min: f64, sq: f64) -> f64 {
    -pos(k - z_max - sq) - pos(k - z_min - sq) + z_max
}

/// Turns a lower bound `x` on the non-lazy curvature into one on the lazy
/// curvature: the better of `(1 - beta) x - delta` over
/// `beta ∈ {alpha_min, alpha_max}`.
pub fn lazy_transfer_lower(x: f64, lp: &LazyParams) -> f64 {
    let a = (1.0 - lp.alpha_min) * x;
    let b = (1.0 - lp.alpha_max) * x;
    a.max(b) - lp.delta
}

pub fn jl_lower_lazy(cm: &ComparisonModuli, lp: &LazyParams) -> f64 {
    lazy_transfer_lower(jl_lower_nonlazy(cm), lp)
}

/// Per-edge curvature values and closed-form bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureRecord {
    pub edge: EdgeKey,
    pub c_bf: f64,
    pub c_or_exact: Option<f64>,
    pub c_or0_exact: Option<f64>,
    pub theta_upper: f64,
    pub envelope_upper: f64,
    pub jl_lower_nonlazy: f64,
    pub jl_lower_lazy: f64,
}

impl CurvatureRecord {
    /// Closed-form part of the record; exact values are filled in later.
    pub fn from_stats(st: &EdgeStats) -> CurvatureRecord {
        CurvatureRecord {
            edge: st.local.edge,
            c_bf: bf_curvature(&st.local, &st.moduli),
            c_or_exact: None,
            c_or0_exact: None,
            theta_upper: theta(&st.lazy, st.local.tri as f64),
            envelope_upper: envelope_upper(&st.lazy, &st.local),
            jl_lower_nonlazy: jl_lower_nonlazy(&st.moduli),
            jl_lower_lazy: jl_lower_lazy(&st.moduli, &st.lazy),
        }
    }
}
