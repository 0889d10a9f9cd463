//! Per-edge report pipeline, distribution summaries, soundness audit, and
//! CSV/JSON emission.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::CurvatureRecord;
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph};
use crate::local::{AlphaProfile, EdgeStats, LocalScratch};
use crate::transfer::{
    phi_bf_to_or, phi_or_to_bf, psi_bf_to_or, psi_or_to_bf, transfer_band, Direction, TransferBand,
};
use crate::transport::{or0_curvature_with, or_curvature_with, OrScratch};

/// Tolerance of the soundness audit.
pub const AUDIT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ReportOptions {
    pub exact_or: bool,
    pub profile: AlphaProfile,
    pub directions: Vec<Direction>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            exact_or: false,
            profile: AlphaProfile::Default,
            directions: vec![Direction::BfToOr, Direction::OrToBf],
        }
    }
}

/// Local statistics and curvature record of one edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeAnalysis {
    pub stats: EdgeStats,
    pub record: CurvatureRecord,
}

/// Computes statistics, bounds, and (optionally) exact curvatures for every
/// edge, in canonical edge order.
pub fn analyze_edges(g: &Graph, exact_or: bool, profile: AlphaProfile) -> Result<Vec<EdgeAnalysis>> {
    profile.validate()?;
    let edges: Vec<EdgeKey> = g.edges().collect();
    edges
        .par_iter()
        .map_init(
            || (LocalScratch::new(), OrScratch::new()),
            |(ls, os), &e| {
                let stats = EdgeStats::compute_with(g, e, profile, ls)?;
                let mut record = CurvatureRecord::from_stats(&stats);
                if exact_or {
                    record.c_or_exact = Some(or_curvature_with(g, e, profile, os)?);
                    record.c_or0_exact = Some(or0_curvature_with(g, e, os)?);
                }
                Ok(EdgeAnalysis { stats, record })
            },
        )
        .collect()
}

/// One CSV row per edge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeReport {
    pub u: usize,
    pub v: usize,
    pub deg_u: usize,
    pub deg_v: usize,
    pub tri: usize,
    #[serde(rename = "Xi")]
    pub xi: usize,
    pub pi_max: usize,
    pub sho_max: usize,
    pub matching: usize,
    pub c_bf: f64,
    pub c_or: Option<f64>,
    pub c_or0: Option<f64>,
    pub theta_upper: f64,
    pub envelope_upper: f64,
    pub jl_lower_lazy: f64,
    /// BF-to-OR band at the edge's own BF curvature.
    pub bf2or_lower: Option<f64>,
    pub bf2or_upper: Option<f64>,
    /// OR-to-BF band at the edge's own exact OR curvature.
    pub or2bf_lower: Option<f64>,
    pub or2bf_upper: Option<f64>,
}

/// Column names of the edge CSV, in order.
pub const REPORT_COLUMNS: [&str; 19] = [
    "u",
    "v",
    "deg_u",
    "deg_v",
    "tri",
    "Xi",
    "pi_max",
    "sho_max",
    "matching",
    "c_bf",
    "c_or",
    "c_or0",
    "theta_upper",
    "envelope_upper",
    "jl_lower_lazy",
    "bf2or_lower",
    "bf2or_upper",
    "or2bf_lower",
    "or2bf_upper",
];

impl EdgeReport {
    pub fn from_analysis(a: &EdgeAnalysis, directions: &[Direction]) -> EdgeReport {
        let (st, rec) = (&a.stats, &a.record);
        let mut r = EdgeReport {
            u: rec.edge.u,
            v: rec.edge.v,
            deg_u: st.local.deg_i,
            deg_v: st.local.deg_j,
            tri: st.local.tri,
            xi: st.local.xi,
            pi_max: st.local.pi_max,
            sho_max: st.local.sho_max,
            matching: st.local.matching,
            c_bf: rec.c_bf,
            c_or: rec.c_or_exact,
            c_or0: rec.c_or0_exact,
            theta_upper: rec.theta_upper,
            envelope_upper: rec.envelope_upper,
            jl_lower_lazy: rec.jl_lower_lazy,
            bf2or_lower: None,
            bf2or_upper: None,
            or2bf_lower: None,
            or2bf_upper: None,
        };
        if directions.contains(&Direction::BfToOr) {
            let band = transfer_band(st, Direction::BfToOr, rec.c_bf);
            r.bf2or_lower = band.lower;
            r.bf2or_upper = Some(band.upper);
        }
        if let (true, Some(or)) = (directions.contains(&Direction::OrToBf), rec.c_or_exact) {
            let band = transfer_band(st, Direction::OrToBf, or);
            r.or2bf_lower = band.lower;
            r.or2bf_upper = Some(band.upper);
        }
        r
    }

    fn cells(&self) -> Vec<String> {
        let f = |x: f64| format_sig(x);
        let o = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
        vec![
            self.u.to_string(),
            self.v.to_string(),
            self.deg_u.to_string(),
            self.deg_v.to_string(),
            self.tri.to_string(),
            self.xi.to_string(),
            self.pi_max.to_string(),
            self.sho_max.to_string(),
            self.matching.to_string(),
            f(self.c_bf),
            o(self.c_or),
            o(self.c_or0),
            f(self.theta_upper),
            f(self.envelope_upper),
            f(self.jl_lower_lazy),
            o(self.bf2or_lower),
            o(self.bf2or_upper),
            o(self.or2bf_lower),
            o(self.or2bf_upper),
        ]
    }
}

pub fn compute_edge_reports(g: &Graph, opts: &ReportOptions) -> Result<Vec<EdgeReport>> {
    Ok(analyze_edges(g, opts.exact_or, opts.profile)?
        .iter()
        .map(|a| EdgeReport::from_analysis(a, &opts.directions))
        .collect())
}

/// Transfer bands of every edge, either at one fixed level or at each edge's
/// own source curvature (exact OR is computed for `OrToBf`).
pub fn compute_bands(
    g: &Graph,
    direction: Direction,
    level: Option<f64>,
    profile: AlphaProfile,
) -> Result<Vec<TransferBand>> {
    let need_or = level.is_none() && direction == Direction::OrToBf;
    let analyses = analyze_edges(g, need_or, profile)?;
    Ok(analyses
        .iter()
        .map(|a| {
            let own = match direction {
                Direction::BfToOr => a.record.c_bf,
                Direction::OrToBf => a.record.c_or_exact.unwrap_or(f64::NAN),
            };
            transfer_band(&a.stats, direction, level.unwrap_or(own))
        })
        .collect())
}

/// Formats with 12 significant digits, fixed notation for moderate
/// exponents, trailing zeros removed.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_reports_csv<W: Write>(reports: &[EdgeReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", REPORT_COLUMNS.join(","))?;
    for r in reports {
        writeln!(out, "{}", r.cells().join(","))?;
    }
    Ok(())
}

/// Parses a CSV written by [`write_reports_csv`].
pub fn read_reports_csv(text: &str) -> Result<Vec<EdgeReport>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == REPORT_COLUMNS.join(",") => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "unexpected header".into(),
            })
        }
    }
    let mut out = Vec::new();
    for (idx, line) in lines {
        let bad = |msg: &str| Error::Parse {
            line: idx + 1,
            msg: msg.to_string(),
        };
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != REPORT_COLUMNS.len() {
            return Err(bad("wrong number of cells"));
        }
        let int = |k: usize| cells[k].parse::<usize>().map_err(|_| bad("bad integer"));
        let real = |k: usize| cells[k].parse::<f64>().map_err(|_| bad("bad number"));
        let opt = |k: usize| -> Result<Option<f64>> {
            if cells[k].is_empty() {
                Ok(None)
            } else {
                real(k).map(Some)
            }
        };
        out.push(EdgeReport {
            u: int(0)?,
            v: int(1)?,
            deg_u: int(2)?,
            deg_v: int(3)?,
            tri: int(4)?,
            xi: int(5)?,
            pi_max: int(6)?,
            sho_max: int(7)?,
            matching: int(8)?,
            c_bf: real(9)?,
            c_or: opt(10)?,
            c_or0: opt(11)?,
            theta_upper: real(12)?,
            envelope_upper: real(13)?,
            jl_lower_lazy: real(14)?,
            bf2or_lower: opt(15)?,
            bf2or_upper: opt(16)?,
            or2bf_lower: opt(17)?,
            or2bf_upper: opt(18)?,
        });
    }
    Ok(out)
}

pub fn write_bands_csv<W: Write>(bands: &[TransferBand], mut out: W) -> std::io::Result<()> {
    writeln!(out, "u,v,direction,input_level,lower,upper")?;
    for b in bands {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            b.edge.u,
            b.edge.v,
            b.direction,
            format_sig(b.input_level),
            b.lower.map(format_sig).unwrap_or_default(),
            format_sig(b.upper)
        )?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DirectionSummary {
    pub width_max: Option<f64>,
    pub width_p95: Option<f64>,
    pub slack_p50: Option<f64>,
    pub slack_p95: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub edge_count: usize,
    pub pearson_r: Option<f64>,
    pub or_range: Option<f64>,
    pub bf_range: f64,
    pub bf2or: DirectionSummary,
    pub or2bf: DirectionSummary,
}

/// Spread below which a curvature counts as edgewise constant.
const CONSTANT_SPREAD: f64 = 1e-12;

/// Linear interpolation between closest ranks; `p` in `[0, 1]`.
pub fn percentile(sorted: &[f64], p: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    Some(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

fn range(xs: &[f64]) -> f64 {
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Pearson correlation; `None` when either sample is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    if range(xs) <= CONSTANT_SPREAD || range(ys) <= CONSTANT_SPREAD {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    Some(sxy / (sxx * syy).sqrt())
}

fn direction_summary(rows: impl Iterator<Item = (f64, f64, Option<f64>)>) -> DirectionSummary {
    let mut widths = Vec::new();
    let mut slacks = Vec::new();
    for (lower, upper, target) in rows {
        widths.push(upper - lower);
        if let Some(t) = target {
            slacks.push((t - lower).min(upper - t));
        }
    }
    widths.sort_by(f64::total_cmp);
    slacks.sort_by(f64::total_cmp);
    DirectionSummary {
        width_max: widths.last().copied(),
        width_p95: percentile(&widths, 0.95),
        slack_p50: percentile(&slacks, 0.50),
        slack_p95: percentile(&slacks, 0.95),
    }
}

/// Aggregates edge reports. Width is `upper - lower` of the band at the
/// edge's own source curvature; slack is the distance from the other
/// curvature to the nearer end of that band.
pub fn summarize(reports: &[EdgeReport]) -> Result<SummaryStats> {
    if reports.is_empty() {
        return Err(Error::Empty("no edge reports to summarize".into()));
    }
    let bf: Vec<f64> = reports.iter().map(|r| r.c_bf).collect();
    let or: Option<Vec<f64>> = reports.iter().map(|r| r.c_or).collect();
    let bf2or = direction_summary(reports.iter().filter_map(|r| {
        Some((r.bf2or_lower?, r.bf2or_upper?, r.c_or))
    }));
    let or2bf = direction_summary(reports.iter().filter_map(|r| {
        Some((r.or2bf_lower?, r.or2bf_upper?, Some(r.c_bf)))
    }));
    Ok(SummaryStats {
        edge_count: reports.len(),
        pearson_r: or.as_ref().and_then(|or| pearson(or, &bf)),
        or_range: or.as_ref().map(|or| range(or)),
        bf_range: range(&bf),
        bf2or,
        or2bf,
    })
}

pub fn write_summary_json<W: Write>(stats: &SummaryStats, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, stats)?;
    writeln!(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes the edge CSV or the summary JSON to `path`.
pub fn emit(reports: &[EdgeReport], stats: &SummaryStats, format: Format, path: &Path) -> Result<()> {
    let shown = path.display().to_string();
    let file = File::create(path).map_err(|e| Error::io(&shown, e))?;
    let mut out = BufWriter::new(file);
    match format {
        Format::Csv => write_reports_csv(reports, &mut out),
        Format::Json => write_summary_json(stats, &mut out),
    }
    .and_then(|_| out.flush())
    .map_err(|e| Error::io(&shown, e))
}

/// A failed inequality: `lhs <= rhs` was expected.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub edge: EdgeKey,
    pub check: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditReport {
    pub edges: usize,
    pub sandwich_edges: usize,
    pub violations: Vec<Violation>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every envelope and sandwich inequality on analyses that carry
/// exact curvatures. Sandwich checks apply to edges with both degrees >= 2.
pub fn audit_analyses(analyses: &[EdgeAnalysis], tol: f64) -> AuditReport {
    let mut rep = AuditReport::default();
    for a in analyses {
        let (st, rec) = (&a.stats, &a.record);
        let (Some(or), Some(or0)) = (rec.c_or_exact, rec.c_or0_exact) else {
            continue;
        };
        rep.edges += 1;
        let mut check = |name: &'static str, lhs: f64, rhs: f64| {
            // Negated so that NaN counts as a violation.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(lhs <= rhs + tol) {
                rep.violations.push(Violation {
                    edge: rec.edge,
                    check: name,
                    lhs,
                    rhs,
                });
            }
        };
        check("jl_lower_lazy <= c_or", rec.jl_lower_lazy, or);
        check("jl_lower_nonlazy <= c_or0", rec.jl_lower_nonlazy, or0);
        check("c_or <= envelope_upper", or, rec.envelope_upper);
        check("envelope_upper <= theta_upper", rec.envelope_upper, rec.theta_upper);
        if st.deg_min() >= 2 {
            let bf = rec.c_bf;
            check("phi_bf2or <= c_or", phi_bf_to_or(st, bf), or);
            check("c_or <= psi_bf2or", or, psi_bf_to_or(st, bf));
            if let Ok(lo) = phi_or_to_bf(st, or) {
                check("phi_or2bf <= c_bf", lo.value, bf);
            }
            check("c_bf <= psi_or2bf", bf, psi_or_to_bf(st, or));
        }
    }
    rep.sandwich_edges = analyses
        .iter()
        .filter(|a| a.record.c_or_exact.is_some() && a.stats.deg_min() >= 2)
        .count();
    rep
}

/// Computes exact curvatures for every edge and audits them.
pub fn audit(g: &Graph, profile: AlphaProfile) -> Result<AuditReport> {
    Ok(audit_analyses(&analyze_edges(g, true, profile)?, AUDIT_TOL))
}
