//! Edgewise transfer moduli between Balanced Forman and Ollivier–Ricci
//! curvature.
//!
//! Each modulus is a nondecreasing function of a curvature level that turns a
//! one-sided bound on one curvature into a one-sided bound on the other,
//! using only the local statistics of the edge.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{coverage_const, coverage_slope, jl_template, lazy_transfer_lower, pos, theta};
use crate::error::{Error, Result};
use crate::graph::EdgeKey;
use crate::local::EdgeStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "bf2or")]
    BfToOr,
    #[serde(rename = "or2bf")]
    OrToBf,
}

impl Direction {
    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::BfToOr => "bf2or",
            Direction::OrToBf => "or2bf",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "bf2or" => Ok(Direction::BfToOr),
            "or2bf" => Ok(Direction::OrToBf),
            other => Err(Error::Parameter(format!(
                "direction must be bf2or or or2bf, got {other:?}"
            ))),
        }
    }
}

/// Lower and upper transfer bounds of one edge at one input level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferBand {
    pub edge: EdgeKey,
    pub direction: Direction,
    pub input_level: f64,
    /// `None` where the lower modulus is undefined (pendant edges, OR to BF).
    pub lower: Option<f64>,
    pub upper: f64,
}

/// Non-lazy floor implied by `c_BF >= zeta`.
pub fn phi_bf_to_or_nonlazy(st: &EdgeStats, zeta: f64) -> f64 {
    let cm = &st.moduli;
    let c4 = st.local.c4_edge;
    let (dmin, dmax) = (st.deg_min() as f64, st.deg_max() as f64);
    let tri_floor = pos((zeta - cm.s - c4) / cm.t);
    let sq_floor = (c4 / 2.0).max(0.5 * pos(zeta - cm.s - cm.t * (dmin - 1.0)));
    jl_template(cm.k, tri_floor / dmax, tri_floor / dmin, sq_floor)
}

/// Lower bound on lazy OR curvature implied by `c_BF >= zeta`.
pub fn phi_bf_to_or(st: &EdgeStats, zeta: f64) -> f64 {
    lazy_transfer_lower(phi_bf_to_or_nonlazy(st, zeta), &st.lazy)
}

/// The affine pieces of the upper envelope at one BF level.
#[derive(Clone, Copy, Debug)]
struct Envelope {
    base: f64,
    slope_meet: f64,
    w_i: f64,
    w_j: f64,
    di: f64,
    dj: f64,
    sigma: f64,
    /// `th* / sigma`.
    box_rate: f64,
    budget: f64,
    t: f64,
    th_star: f64,
    tri_max: f64,
}

impl Envelope {
    fn new(st: &EdgeStats, zeta: f64) -> Envelope {
        let lp = &st.lazy;
        let cm = &st.moduli;
        let dmax = st.deg_max() as f64;
        let dmin = st.deg_min() as f64;
        let budget = pos(zeta - cm.s);
        let th_star = dmax * (dmax - 1.0);
        Envelope {
            base: -1.0 + 2.0 * (lp.z_i + lp.z_j) + lp.residual_sum(),
            slope_meet: 2.0 * lp.w_meet,
            w_i: lp.w_i,
            w_j: lp.w_j,
            di: st.local.deg_i as f64,
            dj: st.local.deg_j as f64,
            sigma: lp.sigma,
            box_rate: th_star / lp.sigma,
            budget,
            t: cm.t,
            th_star,
            tri_max: (dmin - 1.0).min(budget / cm.t),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let a_i = (self.di - 1.0 - x) * self.w_i;
        let a_j = (self.dj - 1.0 - x) * self.w_j;
        let b = self.box_rate * (self.budget - self.t * x);
        let d = (self.di + self.dj - 2.0 - 2.0 * x) / self.sigma;
        let c = (x * (self.w_i - self.w_j).abs()).min(a_i + a_j);
        self.base + self.slope_meet * x + pos(a_i.min(a_j).min(b).min(d)) + c
    }

    fn knots(&self) -> Vec<f64> {
        let mut ks = vec![0.0, self.tri_max];
        let mut add = |num: f64, den: f64| {
            if den != 0.0 {
                ks.push(num / den);
            }
        };
        let (wi, wj, di, dj) = (self.w_i, self.w_j, self.di, self.dj);
        add(wj * (dj - 1.0) - wi * (di - 1.0), wj - wi);
        for (w, d) in [(wi, di), (wj, dj)] {
            add(self.box_rate * self.budget - w * (d - 1.0), self.box_rate * self.t - w);
            add(di + dj - 2.0 - self.sigma * w * (d - 1.0), 2.0 - self.sigma * w);
        }
        add(di + dj - 2.0 - self.th_star * self.budget, 2.0 - self.th_star * self.t);
        add(wi * (di - 1.0) + wj * (dj - 1.0), wi + wj + (wi - wj).abs());
        let hi = self.tri_max;
        ks.retain(|&x| x.is_finite() && (0.0..=hi).contains(&x));
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        ks
    }
}

/// Candidate maximizers of the upper envelope, all within `[0, tri_max]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KnotSet {
    pub tri_max: f64,
    pub knots: Vec<f64>,
}

pub fn knot_set(st: &EdgeStats, zeta: f64) -> KnotSet {
    let env = Envelope::new(st, zeta);
    KnotSet {
        tri_max: env.tri_max,
        knots: env.knots(),
    }
}

/// The piecewise-affine envelope at triangle value `x` for BF level `zeta`.
pub fn psi_hat(st: &EdgeStats, zeta: f64, x: f64) -> f64 {
    Envelope::new(st, zeta).eval(x)
}

/// Upper bound on lazy OR curvature implied by `c_BF <= zeta`: the envelope
/// maximized over its knot set.
pub fn psi_bf_to_or(st: &EdgeStats, zeta: f64) -> f64 {
    let env = Envelope::new(st, zeta);
    env.knots()
        .into_iter()
        .map(|x| env.eval(x))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Rounding allowance before a level counts as unattainable. Complete graphs
/// meet the threshold exactly.
pub const VACUITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OrToBfLower {
    pub value: f64,
    /// True when no edge with these degrees and laziness reaches the level,
    /// so the implication holds vacuously.
    pub vacuous: bool,
}

/// Lower bound on BF curvature implied by `c_OR >= vartheta`.
/// Undefined when an endpoint has degree 1.
pub fn phi_or_to_bf(st: &EdgeStats, vartheta: f64) -> Result<OrToBfLower> {
    let dmin = st.deg_min();
    if dmin < 2 {
        return Err(Error::Domain(format!(
            "edge ({}, {}) has a degree-1 endpoint",
            st.local.edge.u, st.local.edge.v
        )));
    }
    let lp = &st.lazy;
    let cap = (dmin - 1) as f64;
    let t_min = pos((vartheta - coverage_const(lp)) / coverage_slope(lp)).min(cap);
    Ok(OrToBfLower {
        value: st.moduli.s + st.moduli.t * t_min,
        vacuous: vartheta > theta(lp, cap) + VACUITY_TOL,
    })
}

/// Triangle envelope behind [`psi_or_to_bf`], before clamping.
pub fn u_max(st: &EdgeStats, vartheta: f64) -> f64 {
    let lp = &st.lazy;
    let cm = &st.moduli;
    let (dmin, dmax) = (st.deg_min() as f64, st.deg_max() as f64);
    let s0 = ((vartheta + lp.delta) / (1.0 - lp.alpha_min))
        .min((vartheta + lp.delta) / (1.0 - lp.alpha_max));
    let k_sq = pos(cm.k - cm.sq);
    let s_break = k_sq * (2.0 * dmin / dmax - 1.0);
    if s0 <= -2.0 * k_sq {
        0.0
    } else if s0 <= s_break {
        (s0 + 2.0 * k_sq) / cm.t
    } else if s0 <= k_sq {
        dmax / 2.0 * (s0 + k_sq)
    } else {
        dmax * s0
    }
}

/// Upper bound on BF curvature implied by `c_OR <= vartheta`.
pub fn psi_or_to_bf(st: &EdgeStats, vartheta: f64) -> f64 {
    let cap = (st.deg_min() - 1) as f64;
    st.moduli.s + st.moduli.t * u_max(st, vartheta).min(cap) + st.local.c4_edge
}

/// Both moduli of `direction` at `level`.
pub fn transfer_band(st: &EdgeStats, direction: Direction, level: f64) -> TransferBand {
    let (lower, upper) = match direction {
        Direction::BfToOr => (Some(phi_bf_to_or(st, level)), psi_bf_to_or(st, level)),
        Direction::OrToBf => (
            phi_or_to_bf(st, level).ok().map(|l| l.value),
            psi_or_to_bf(st, level),
        ),
    };
    TransferBand {
        edge: st.local.edge,
        direction,
        input_level: level,
        lower,
        upper,
    }
}
