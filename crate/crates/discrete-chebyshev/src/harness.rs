//! Error-measurement harness: approximation vs exact oracle over parameter
//! sweeps, empirical convergence orders, and machine-readable tables.

use crate::asymptotic::{approx_in_regime, fold_by_symmetry};
use crate::error::{Error, Result};
use crate::exact::{eval_exact_series, to_signed_log, PolyTriple};
use crate::regime::{classify, Regime, RegimeConstants, Thresholds};
use crate::signed_log::SignedLogValue;
use std::io::Write;

/// Big-rational feasibility guard for the exact oracle (O(n) multiplies on
/// operands of O(N log N) bits).
pub const EXACT_ORACLE_MAX_N: u64 = 50_000;

/// One exact-vs-approximate comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorRecord {
    pub n: u64,
    pub x: i64,
    pub cap_n: u64,
    pub regime: Regime,
    pub exact: SignedLogValue,
    pub approx: SignedLogValue,
    /// |exp(log approx - log exact) * sign_ratio - 1|; a sign mismatch makes
    /// this >= 1 by construction.
    pub rel_err: f64,
    pub sign_match: bool,
    pub constants: Option<RegimeConstants>,
}

/// Relative error in log space. Magnitudes can be e^(+-1e5), so the ratio is
/// formed from the log difference, never from the raw values.
fn log_space_rel_err(exact: &SignedLogValue, approx: &SignedLogValue) -> (f64, bool) {
    if exact.is_zero() && approx.is_zero() {
        return (0.0, true);
    }
    if exact.is_zero() || approx.is_zero() {
        return (f64::INFINITY, false);
    }
    let sign_match = exact.sign == approx.sign;
    let ratio = (approx.log_abs - exact.log_abs).exp();
    let rel = if sign_match {
        (ratio - 1.0).abs()
    } else {
        ratio + 1.0
    };
    (rel, sign_match)
}

/// Compare one point against the exact oracle. With no override the regime
/// comes from `classify` (after symmetry folding); an override must satisfy
/// the target regime's own preconditions or the error surfaces unchanged.
pub fn compare(
    p: &PolyTriple,
    regime_override: Option<Regime>,
    thresholds: &Thresholds,
    series_terms: u64,
) -> Result<ErrorRecord> {
    if p.n() > EXACT_ORACLE_MAX_N {
        return Err(Error::Infeasible(format!(
            "exact oracle guarded at n <= {EXACT_ORACLE_MAX_N}, got n = {}",
            p.n()
        )));
    }
    let x = p
        .x_i64()
        .ok_or_else(|| Error::DegenerateInput("comparison records need integer x".into()))?;
    let exact = to_signed_log(&eval_exact_series(p)?);
    let (p_eff, fold_sign) = fold_by_symmetry(p);
    let regime = regime_override.unwrap_or_else(|| classify(&p_eff, thresholds));
    let r = approx_in_regime(&p_eff, regime, series_terms)?;
    let approx = if fold_sign < 0 {
        r.value.neg()
    } else {
        r.value
    };
    let (rel_err, sign_match) = log_space_rel_err(&exact, &approx);
    Ok(ErrorRecord {
        n: p.n(),
        x,
        cap_n: p.cap_n(),
        regime,
        exact,
        approx,
        rel_err,
        sign_match,
        constants: r.constants,
    })
}

/// Canonical sweep paths, one per asymptotic regime. Each encodes the
/// regime's limit direction as closed-form rules N -> (n, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepPath {
    /// x = floor(N/4), n = floor(N^0.4): ratio x N / n^2 grows, x large.
    Bessel,
    /// x = 5, n = floor(N^0.7): ratio -> 0 with n^2/N -> infinity.
    Kummer,
    /// x = ceil(N^0.2), n = round(sqrt(x N)): ratio pinned near 1.
    Airy,
    /// x = -3, n = floor(N^0.6).
    GammaNeg,
    /// n = floor(N/2), x = floor(N/8): b fixed at 1/2.
    FixedB,
}

impl SweepPath {
    pub fn name(&self) -> &'static str {
        match self {
            SweepPath::Bessel => "bessel",
            SweepPath::Kummer => "kummer",
            SweepPath::Airy => "airy",
            SweepPath::GammaNeg => "gamma-neg",
            SweepPath::FixedB => "fixed-b",
        }
    }

    pub fn from_name(s: &str) -> Option<SweepPath> {
        Some(match s {
            "bessel" => SweepPath::Bessel,
            "kummer" => SweepPath::Kummer,
            "airy" => SweepPath::Airy,
            "gamma-neg" => SweepPath::GammaNeg,
            "fixed-b" => SweepPath::FixedB,
            _ => return None,
        })
    }

    pub fn intended_regime(&self) -> Regime {
        match self {
            SweepPath::Bessel => Regime::BesselSmallB,
            SweepPath::Kummer => Regime::KummerSmallB,
            SweepPath::Airy => Regime::AirySmallB,
            SweepPath::GammaNeg => Regime::GammaNegSmallB,
            SweepPath::FixedB => Regime::KummerFixedB,
        }
    }

    /// Center point (n, x) for one support size.
    pub fn rules(&self, cap_n: u64) -> (u64, i64) {
        let nf = cap_n as f64;
        match self {
            SweepPath::Bessel => (nf.powf(0.4).floor() as u64, (cap_n / 4) as i64),
            SweepPath::Kummer => (nf.powf(0.7).floor() as u64, 5),
            SweepPath::Airy => {
                let x = nf.powf(0.2).ceil();
                ((x * nf).sqrt().round() as u64, x as i64)
            }
            SweepPath::GammaNeg => (nf.powf(0.6).floor() as u64, -3),
            SweepPath::FixedB => (cap_n / 2, (cap_n / 8) as i64),
        }
    }

    pub fn default_n_list(&self) -> Vec<u64> {
        match self {
            SweepPath::Bessel => vec![500, 2000, 8000],
            SweepPath::Kummer => vec![1000, 4000, 16000],
            SweepPath::Airy => vec![2000, 8000, 32000],
            SweepPath::GammaNeg => vec![1000, 4000, 16000],
            SweepPath::FixedB => vec![200, 800, 3200],
        }
    }
}

/// A sweep request: one canonical path, increasing support sizes, and the
/// number of adjacent integer x values for the median rule.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub path: SweepPath,
    pub n_list: Vec<u64>,
    pub x_jitter: usize,
}

impl SweepSpec {
    pub fn new(path: SweepPath, n_list: Vec<u64>) -> SweepSpec {
        SweepSpec {
            path,
            n_list,
            x_jitter: 5,
        }
    }
}

/// Sweep outcome: records in deterministic order plus per-point failures
/// (a failed point never aborts the sweep).
#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub records: Vec<ErrorRecord>,
    pub failures: Vec<(u64, i64, u64, String)>,
    pub warnings: Vec<String>,
}

/// Run one sweep: for every N in the list and every jittered x, compare the
/// intended regime's approximation against the exact oracle. The intended
/// regime is passed as an override so the sweep measures its target
/// expansion even where the default thresholds would route elsewhere; a
/// warning records any such disagreement.
pub fn sweep(spec: &SweepSpec, thresholds: &Thresholds) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    let regime = spec.path.intended_regime();
    let half = (spec.x_jitter as i64) / 2;
    for &cap_n in &spec.n_list {
        let (n, x_center) = spec.path.rules(cap_n);
        for k in 0..spec.x_jitter as i64 {
            let mut x = x_center - half + k;
            if x_center > 0 && x < 1 {
                x = 1; // keep positive-x paths on their side
            }
            if x_center < 0 && x > -1 {
                x = -1;
            }
            let p = match PolyTriple::from_ints(n, x, cap_n) {
                Ok(p) => p,
                Err(e) => {
                    out.failures.push((n, x, cap_n, e.to_string()));
                    continue;
                }
            };
            let classified = classify(&p, thresholds);
            if classified != regime {
                out.warnings.push(format!(
                    "point n={n} x={x} capN={cap_n} classifies as {classified}, \
                     overridden to {regime}"
                ));
            }
            match compare(&p, Some(regime), thresholds, 2) {
                Ok(r) => out.records.push(r),
                Err(e) => out.failures.push((n, x, cap_n, e.to_string())),
            }
        }
    }
    out
}

/// Median of a slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in medians"));
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

/// Median relative error per support size, ordered by N.
pub fn median_errors_by_n(records: &[ErrorRecord]) -> Vec<(u64, f64)> {
    let mut ns: Vec<u64> = records.iter().map(|r| r.cap_n).collect();
    ns.sort_unstable();
    ns.dedup();
    ns.into_iter()
        .map(|cap_n| {
            let errs: Vec<f64> = records
                .iter()
                .filter(|r| r.cap_n == cap_n)
                .map(|r| r.rel_err)
                .collect();
            (cap_n, median(&errs))
        })
        .collect()
}

/// Least-squares slope of ln(median rel_err) against ln N; negative slopes
/// mean convergence. Needs at least three distinct N.
pub fn convergence_order(records: &[ErrorRecord]) -> Result<f64> {
    let meds = median_errors_by_n(records);
    if meds.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "convergence order needs >= 3 distinct N, got {}",
            meds.len()
        )));
    }
    let pts: Vec<(f64, f64)> = meds
        .iter()
        .map(|&(n, e)| ((n as f64).ln(), e.max(1e-300).ln()))
        .collect();
    let len = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Ok((len * sxy - sx * sy) / (len * sxx - sx * sx))
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

impl EmitFormat {
    pub fn from_name(s: &str) -> Option<EmitFormat> {
        match s {
            "csv" => Some(EmitFormat::Csv),
            "json" => Some(EmitFormat::Json),
            _ => None,
        }
    }
}

/// Shortest round-trip float text (Rust's Debug formatting for f64 keeps all
/// information and is stable); non-finite values print as inf/-inf/NaN.
fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub const CSV_HEADER: &str =
    "n,x,capN,regime,exact_sign,exact_log,approx_sign,approx_log,rel_err,sign_match";

/// Serialize records as CSV with the fixed column set.
pub fn to_csv(records: &[ErrorRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.x,
            r.cap_n,
            r.regime,
            r.exact.sign,
            fmt_f64(r.exact.log_abs),
            r.approx.sign,
            fmt_f64(r.approx.log_abs),
            fmt_f64(r.rel_err),
            r.sign_match
        ));
    }
    out
}

/// Serialize records as a JSON array with the same field names. Non-finite
/// numbers (legal here: exact_log is -inf at a polynomial zero) are emitted
/// as strings, and the parser accepts both forms.
pub fn to_json(records: &[ErrorRecord]) -> String {
    fn jnum(v: f64) -> String {
        if v.is_finite() {
            format!("{v:?}")
        } else {
            format!("\"{v:?}\"")
        }
    }
    let items: Vec<String> = records
        .iter()
        .map(|r| {
            format!(
                "{{\"n\":{},\"x\":{},\"capN\":{},\"regime\":\"{}\",\"exact_sign\":{},\
                 \"exact_log\":{},\"approx_sign\":{},\"approx_log\":{},\"rel_err\":{},\
                 \"sign_match\":{}}}",
                r.n,
                r.x,
                r.cap_n,
                r.regime,
                r.exact.sign,
                jnum(r.exact.log_abs),
                r.approx.sign,
                jnum(r.approx.log_abs),
                jnum(r.rel_err),
                r.sign_match
            )
        })
        .collect();
    format!("[\n{}\n]\n", items.join(",\n"))
}

/// Write records to any destination in the chosen format.
pub fn emit<W: Write>(records: &[ErrorRecord], format: EmitFormat, dest: &mut W) -> Result<()> {
    let text = match format {
        EmitFormat::Csv => to_csv(records),
        EmitFormat::Json => to_json(records),
    };
    dest.write_all(text.as_bytes())?;
    Ok(())
}

fn parse_f64_token(tok: &str) -> Result<f64> {
    let t = tok.trim().trim_matches('"');
    match t {
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        "NaN" => Ok(f64::NAN),
        _ => t
            .parse()
            .map_err(|_| Error::Parse(format!("bad float {tok:?}"))),
    }
}

/// Parse CSV produced by `to_csv` (round-trip partner).
pub fn parse_csv(text: &str) -> Result<Vec<ErrorRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Parse(format!("bad CSV header: {other:?}"))),
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(Error::Parse(format!("expected 10 fields, got {}", f.len())));
        }
        out.push(ErrorRecord {
            n: f[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad n {:?}", f[0])))?,
            x: f[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad x {:?}", f[1])))?,
            cap_n: f[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad capN {:?}", f[2])))?,
            regime: Regime::from_tag(f[3])
                .ok_or_else(|| Error::Parse(format!("bad regime {:?}", f[3])))?,
            exact: SignedLogValue::new(
                f[4].parse().map_err(|_| Error::Parse("bad sign".into()))?,
                parse_f64_token(f[5])?,
            ),
            approx: SignedLogValue::new(
                f[6].parse().map_err(|_| Error::Parse("bad sign".into()))?,
                parse_f64_token(f[7])?,
            ),
            rel_err: parse_f64_token(f[8])?,
            sign_match: f[9]
                .parse()
                .map_err(|_| Error::Parse(format!("bad sign_match {:?}", f[9])))?,
            constants: None,
        });
    }
    Ok(out)
}

/// Parse the JSON produced by `to_json` (round-trip partner; a minimal
/// field-oriented reader, not a general JSON parser).
pub fn parse_json(text: &str) -> Result<Vec<ErrorRecord>> {
    let mut out = Vec::new();
    for obj in text.split('{').skip(1) {
        let obj = obj.split('}').next().unwrap_or("");
        let mut fields = std::collections::HashMap::new();
        for kv in obj.split(',') {
            if let Some((k, v)) = kv.split_once(':') {
                fields.insert(k.trim().trim_matches('"').to_string(), v.trim().to_string());
            }
        }
        let get = |k: &str| -> Result<String> {
            fields
                .get(k)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("missing field {k}")))
        };
        out.push(ErrorRecord {
            n: get("n")?
                .parse()
                .map_err(|_| Error::Parse("bad n".into()))?,
            x: get("x")?
                .parse()
                .map_err(|_| Error::Parse("bad x".into()))?,
            cap_n: get("capN")?
                .parse()
                .map_err(|_| Error::Parse("bad capN".into()))?,
            regime: Regime::from_tag(get("regime")?.trim_matches('"'))
                .ok_or_else(|| Error::Parse("bad regime".into()))?,
            exact: SignedLogValue::new(
                get("exact_sign")?
                    .parse()
                    .map_err(|_| Error::Parse("bad sign".into()))?,
                parse_f64_token(&get("exact_log")?)?,
            ),
            approx: SignedLogValue::new(
                get("approx_sign")?
                    .parse()
                    .map_err(|_| Error::Parse("bad sign".into()))?,
                parse_f64_token(&get("approx_log")?)?,
            ),
            rel_err: parse_f64_token(&get("rel_err")?)?,
            sign_match: get("sign_match")?
                .parse()
                .map_err(|_| Error::Parse("bad sign_match".into()))?,
            constants: None,
        });
    }
    Ok(out)
}
