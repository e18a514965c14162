//! Command-line front door: exact evaluation, regime classification,
//! asymptotic approximation, oracle comparison and convergence sweeps.
//!
//! Data goes to stdout (or --out); diagnostics and errors go to stderr.
//! Exit codes: 0 success, 2 argument errors, 3 domain/regime errors,
//! 4 I/O errors.

use discrete_chebyshev::asymptotic::{approx_in_regime, fold_by_symmetry};
use discrete_chebyshev::error::Error;
use discrete_chebyshev::exact::{eval_exact_series, PolyTriple};
use discrete_chebyshev::harness::{
    compare, convergence_order, emit, median_errors_by_n, sweep, EmitFormat, SweepPath, SweepSpec,
};
use discrete_chebyshev::regime::{classify, scaled_params, Regime, RegimeConstants, Thresholds};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::io::Write;
use std::process::ExitCode;

const USAGE: &str = "usage: dchb <subcommand> [flags]

subcommands:
  eval      --n N --x X --capN CAP
            exact value of t_n(x, capN+1); prints the rational if it fits in
            80 characters, otherwise `sign log_abs`
  classify  --n N --x X --capN CAP [--thresholds FILE]
            regime tag plus the scaled parameters rho, a, b
  approx    --n N --x X --capN CAP [--regime R] [--terms K] [--thresholds FILE]
            leading-order asymptotic value with regime, constants and
            coefficients; R in auto|kummer|airy|bessel|gamma-neg|fixed-b|series
  compare   --n N --x X --capN CAP [--regime R] [--terms K] [--thresholds FILE]
            [--format csv|json] [--out PATH]
            one exact-vs-approximate error record
  sweep     --path P --N-list N1,N2,... [--jitter J] [--thresholds FILE]
            [--format csv|json] [--out PATH]
            error records along a canonical path; P in
            bessel|kummer|airy|gamma-neg|fixed-b

--capN is the N of t_n(x, N+1): the weight jumps at x = 0..capN and the
polynomial family is t_0..t_capN.";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dchb: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 2,
                Error::Io(_) => 4,
                _ => 3,
            })
        }
    }
}

/// Parsed flag set; every flag takes one value and unknown flags are errors.
struct Flags {
    n: Option<u64>,
    x: Option<BigRational>,
    cap_n: Option<u64>,
    thresholds: Thresholds,
    out: Option<String>,
    format: EmitFormat,
    regime: String,
    terms: u64,
    path: Option<SweepPath>,
    n_list: Option<Vec<u64>>,
    jitter: usize,
}

fn parse_rational(text: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("cannot parse {text:?} as a rational"));
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(Error::Parse("zero denominator".into()));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        let digits = format!("{}{}", int.trim_start_matches(['+', '-']), frac);
        let p: BigInt = digits.parse().map_err(|_| bad())?;
        let p = if text.trim_start().starts_with('-') {
            -p
        } else {
            p
        };
        let q = BigInt::from(10).pow(frac.len() as u32);
        return Ok(BigRational::new(p, q));
    }
    let p: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::new(p, BigInt::one()))
}

fn parse_flags(args: &[String]) -> Result<Flags, Error> {
    let mut f = Flags {
        n: None,
        x: None,
        cap_n: None,
        thresholds: Thresholds::default(),
        out: None,
        format: EmitFormat::Csv,
        regime: "auto".into(),
        terms: 2,
        path: None,
        n_list: None,
        jitter: 5,
    };
    let mut it = args.iter();
    while let Some(flag) = it.next() {
        let mut value = || {
            it.next()
                .cloned()
                .ok_or_else(|| Error::Parse(format!("flag {flag} needs a value")))
        };
        match flag.as_str() {
            "--n" => {
                f.n = Some(
                    value()?
                        .parse()
                        .map_err(|_| Error::Parse("bad --n".into()))?,
                )
            }
            "--x" => f.x = Some(parse_rational(&value()?)?),
            "--capN" => {
                f.cap_n = Some(
                    value()?
                        .parse()
                        .map_err(|_| Error::Parse("bad --capN".into()))?,
                )
            }
            "--thresholds" => {
                f.thresholds = Thresholds::from_file(std::path::Path::new(&value()?))?
            }
            "--out" => f.out = Some(value()?),
            "--format" => {
                let v = value()?;
                f.format = EmitFormat::from_name(&v)
                    .ok_or_else(|| Error::Parse(format!("bad --format {v:?}")))?;
            }
            "--regime" => f.regime = value()?,
            "--terms" => {
                f.terms = value()?
                    .parse()
                    .map_err(|_| Error::Parse("bad --terms".into()))?
            }
            "--path" => {
                let v = value()?;
                f.path = Some(
                    SweepPath::from_name(&v)
                        .ok_or_else(|| Error::Parse(format!("bad --path {v:?}")))?,
                );
            }
            "--N-list" => {
                let v = value()?;
                let list: Result<Vec<u64>, _> =
                    v.split(',').map(|s| s.trim().parse::<u64>()).collect();
                f.n_list = Some(list.map_err(|_| Error::Parse(format!("bad --N-list {v:?}")))?);
            }
            "--jitter" => {
                f.jitter = value()?
                    .parse()
                    .map_err(|_| Error::Parse("bad --jitter".into()))?
            }
            other => return Err(Error::Parse(format!("unknown flag {other:?}"))),
        }
    }
    Ok(f)
}

fn require_triple(f: &Flags) -> Result<PolyTriple, Error> {
    let n = f.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
    let x =
        f.x.clone()
            .ok_or_else(|| Error::Parse("--x is required".into()))?;
    let cap_n = f
        .cap_n
        .ok_or_else(|| Error::Parse("--capN is required".into()))?;
    PolyTriple::new(n, x, cap_n)
}

fn regime_from_name(name: &str) -> Result<Option<Regime>, Error> {
    Ok(match name {
        "auto" => None,
        "kummer" => Some(Regime::KummerSmallB),
        "airy" => Some(Regime::AirySmallB),
        "bessel" => Some(Regime::BesselSmallB),
        "gamma-neg" => Some(Regime::GammaNegSmallB),
        "fixed-b" => Some(Regime::KummerFixedB),
        "series" => Some(Regime::SeriesAsymptotic),
        other => return Err(Error::Parse(format!("bad --regime {other:?}"))),
    })
}

fn write_output(f: &Flags, text: &str) -> Result<(), Error> {
    match &f.out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(args: &[String]) -> Result<(), Error> {
    let Some(sub) = args.first() else {
        return Err(Error::Parse(format!("missing subcommand\n{USAGE}")));
    };
    let flags = parse_flags(&args[1..])?;
    match sub.as_str() {
        "eval" => cmd_eval(&flags),
        "classify" => cmd_classify(&flags),
        "approx" => cmd_approx(&flags),
        "compare" => cmd_compare(&flags),
        "sweep" => cmd_sweep(&flags),
        "help" | "--help" | "-h" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(Error::Parse(format!(
            "unknown subcommand {other:?}\n{USAGE}"
        ))),
    }
}

fn cmd_eval(f: &Flags) -> Result<(), Error> {
    let p = require_triple(f)?;
    let v = eval_exact_series(&p)?;
    let text = v.value.to_string();
    if text.len() <= 80 {
        write_output(f, &format!("{text}\n"))
    } else {
        let s = v.to_signed_log();
        write_output(f, &format!("{} {:?}\n", s.sign, s.log_abs))
    }
}

fn cmd_classify(f: &Flags) -> Result<(), Error> {
    let p = require_triple(f)?;
    let tag = classify(&p, &f.thresholds);
    let line = match scaled_params(&p) {
        Ok(s) => format!("{tag} rho={:?} a={:?} b={:?}\n", s.rho, s.a, s.b),
        Err(_) => format!("{tag}\n"),
    };
    write_output(f, &line)
}

fn cmd_approx(f: &Flags) -> Result<(), Error> {
    let p = require_triple(f)?;
    let (p_eff, fold_sign) = fold_by_symmetry(&p);
    let regime = match regime_from_name(&f.regime)? {
        Some(r) => r,
        None => classify(&p_eff, &f.thresholds),
    };
    let r = approx_in_regime(&p_eff, regime, f.terms)?;
    let value = if fold_sign < 0 {
        r.value.neg()
    } else {
        r.value
    };
    let mut out = String::new();
    out.push_str(&format!("sign={}\n", value.sign));
    out.push_str(&format!("log_abs={:?}\n", value.log_abs));
    out.push_str(&format!("regime={}\n", r.regime));
    match r.constants {
        Some(RegimeConstants::Kummer { eta, gamma }) => {
            out.push_str(&format!("eta={eta:?}\ngamma={gamma:?}\n"));
        }
        Some(RegimeConstants::Airy { zeta, a_const }) => {
            out.push_str(&format!("zeta={zeta:?}\nA={a_const:?}\n"));
        }
        Some(RegimeConstants::Bessel { m, gamma }) => {
            out.push_str(&format!("m={m:?}\ngamma={gamma:?}\n"));
        }
        Some(RegimeConstants::GammaNeg { gamma }) => {
            out.push_str(&format!("gamma={gamma:?}\n"));
        }
        None => {}
    }
    out.push_str(&format!("c0={:?}\n", r.coeffs.c0));
    if let Some(d0) = r.coeffs.d0 {
        out.push_str(&format!("d0={d0:?}\n"));
    }
    for k in &r.kernels {
        out.push_str(&format!(
            "kernel_{}_sign={} kernel_{}_log={:?}\n",
            k.name, k.value.sign, k.name, k.value.log_abs
        ));
    }
    for d in &r.diagnostics {
        eprintln!("dchb: note: {d}");
    }
    write_output(f, &out)
}

fn cmd_compare(f: &Flags) -> Result<(), Error> {
    let p = require_triple(f)?;
    let rec = compare(&p, regime_from_name(&f.regime)?, &f.thresholds, f.terms)?;
    let mut buf = Vec::new();
    emit(&[rec], f.format, &mut buf)?;
    write_output(f, &String::from_utf8(buf).expect("utf8"))
}

fn cmd_sweep(f: &Flags) -> Result<(), Error> {
    let path = f
        .path
        .ok_or_else(|| Error::Parse("--path is required".into()))?;
    let n_list = f.n_list.clone().unwrap_or_else(|| path.default_n_list());
    let mut spec = SweepSpec::new(path, n_list);
    spec.x_jitter = f.jitter;
    let out = sweep(&spec, &f.thresholds);
    for w in &out.warnings {
        eprintln!("dchb: note: {w}");
    }
    for (n, x, cap_n, e) in &out.failures {
        eprintln!("dchb: point n={n} x={x} capN={cap_n} failed: {e}");
    }
    let mut buf = Vec::new();
    emit(&out.records, f.format, &mut buf)?;
    write_output(f, &String::from_utf8(buf).expect("utf8"))?;
    if let Ok(slope) = convergence_order(&out.records) {
        eprintln!("dchb: fitted convergence order {slope:?}");
        for (cap_n, med) in median_errors_by_n(&out.records) {
            eprintln!("dchb: median rel_err at N={cap_n}: {med:?}");
        }
    }
    Ok(())
}
