//! Subcommand implementations, decoupled from argument parsing so the
//! integration tests can drive them directly. Every command returns a
//! `RunReport`; the summary's pass flag is the exit-code verdict.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use posinorm::classify::{analyze, PosinormalCertificate, PropertyReport};
use posinorm::matop::{family_of, jordan_block, random_ep, truncated_shift, FamilyKind, OperatorMatrix};
use posinorm::qtop::{
    qt_bounded_below_probe, qt_is_hyponormal, qt_truncate, qt_verify_equal, self_commutator,
};
use posinorm::rangelab::PowerDiagnosis;
use posinorm::{CMatrix, Error, Result, ToleranceConfig};

use crate::expr::{expression_operator, parse_equation};
use crate::matfile::MatrixFile;
use crate::report::{matrix_json, RunReport};
use crate::suites::{outcome_table, run_suite, SuiteParams};

/// Settings shared by every subcommand.
#[derive(Clone, Copy, Debug)]
pub struct GlobalOpts {
    pub seed: u64,
    pub tol: ToleranceConfig,
    pub no_timestamp: bool,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: 0,
            tol: ToleranceConfig::default(),
            no_timestamp: false,
        }
    }
}

fn parse_count(text: &str, what: &str) -> Result<usize> {
    text.parse::<usize>()
        .map_err(|_| Error::Input(format!("{what} must be a nonnegative integer, got '{text}'")))
}

fn parse_real(text: &str, what: &str) -> Result<f64> {
    text.parse::<f64>()
        .map_err(|_| Error::Input(format!("{what} must be a number, got '{text}'")))
}

/// Builds an operator from a constructor spec: name followed by its
/// arguments, e.g. ["ep", "6", "3"] or ["toeplitz", "8", "U* + 2U"].
pub fn construct_operator(args: &[String], seed: u64) -> Result<OperatorMatrix> {
    let Some(name) = args.first() else {
        return Err(Error::Input("empty constructor spec".into()));
    };
    let rest = &args[1..];
    let need = |k: usize, usage: &str| -> Result<()> {
        if rest.len() == k {
            Ok(())
        } else {
            Err(Error::Input(format!("constructor usage: {usage}")))
        }
    };
    match name.as_str() {
        "identity" => {
            need(1, "identity N")?;
            let n = parse_count(&rest[0], "N")?;
            if n == 0 {
                return Err(Error::Input("identity needs N >= 1".into()));
            }
            OperatorMatrix::new(CMatrix::identity(n, n), format!("identity n={n}"))
        }
        "jordan" => {
            if rest.is_empty() || rest.len() > 3 {
                return Err(Error::Input("constructor usage: jordan N [RE [IM]]".into()));
            }
            let n = parse_count(&rest[0], "N")?;
            let re = rest.get(1).map(|s| parse_real(s, "RE")).transpose()?.unwrap_or(0.0);
            let im = rest.get(2).map(|s| parse_real(s, "IM")).transpose()?.unwrap_or(0.0);
            jordan_block(n, Complex64::new(re, im))
        }
        "ep" => {
            need(2, "ep N RANK")?;
            let n = parse_count(&rest[0], "N")?;
            let r = parse_count(&rest[1], "RANK")?;
            random_ep(n, r, seed)
        }
        "shift" => {
            need(1, "shift N")?;
            truncated_shift(parse_count(&rest[0], "N")?)
        }
        "block" | "example1" => {
            need(1, "block N")?;
            family_of(FamilyKind::BlockHarmonic)?.generate(parse_count(&rest[0], "N")?)
        }
        "diag" | "diag-inv-k" => {
            need(1, "diag N")?;
            family_of(FamilyKind::DiagonalHarmonic)?.generate(parse_count(&rest[0], "N")?)
        }
        "toeplitz" => {
            if rest.len() < 2 {
                return Err(Error::Input("constructor usage: toeplitz N EXPRESSION".into()));
            }
            let n = parse_count(&rest[0], "N")?;
            let text = rest[1..].join(" ");
            let op = expression_operator(&text)?;
            qt_truncate(&op, n)
        }
        other => Err(Error::Input(format!(
            "unknown constructor '{other}'; known: identity, jordan, ep, shift, block, diag, toeplitz"
        ))),
    }
}

/// Resolves the operator for analyze/powers from exactly one of a
/// matrix file or a constructor spec, with its provenance record.
pub fn resolve_input(
    input: Option<&Path>,
    construct: Option<&[String]>,
    seed: u64,
) -> Result<(OperatorMatrix, Value)> {
    match (input, construct) {
        (Some(_), Some(_)) => Err(Error::Input(
            "pass either --input FILE or --construct SPEC, not both".into(),
        )),
        (None, None) => Err(Error::Input(
            "an operator is required: --input FILE or --construct SPEC".into(),
        )),
        (Some(path), None) => {
            let file = MatrixFile::load(path)?;
            let op = file.to_operator()?;
            Ok((op, json!({ "file": path.display().to_string() })))
        }
        (None, Some(args)) => {
            let op = construct_operator(args, seed)?;
            Ok((
                op,
                json!({ "constructor": args.join(" "), "seed": seed }),
            ))
        }
    }
}

fn certificate_json(c: &PosinormalCertificate) -> Value {
    json!({
        "lambda_min": c.lambda_min,
        "lambda_bisect": c.lambda_bisect,
        "residual_factorization": c.residual_factorization,
        "residual_interrupter": c.residual_interrupter,
        "witness": matrix_json(&c.witness, Some("witness T with A = A*T".into())),
        "interrupter": matrix_json(&c.interrupter, Some("interrupter P with AA* = A*PA".into())),
    })
}

fn property_report_json(r: &PropertyReport) -> Value {
    json!({
        "normal": r.normal,
        "normal_defect": r.normal_defect,
        "hyponormal": r.hyponormal,
        "hyponormal_lambda_min": r.hyponormal_lambda_min,
        "posinormal": r.posinormal,
        "posinormal_defect": r.posinormal_defect,
        "coposinormal": r.coposinormal,
        "coposinormal_defect": r.coposinormal_defect,
        "ep": r.ep,
        "kernel_dim": r.kernel_dim,
        "kernel_sq_dim": r.kernel_sq_dim,
        "kernel_power_equal": r.kernel_power_equal,
        "certificate": r.certificate.as_ref().map(certificate_json),
        "caveats": r.caveats,
    })
}

/// Full property verdicts and certificate for one operator.
pub fn cmd_analyze(
    input: Option<&Path>,
    construct: Option<&[String]>,
    opts: &GlobalOpts,
) -> Result<RunReport> {
    let (op, provenance) = resolve_input(input, construct, opts.seed)?;
    let report = analyze(&op, &opts.tol)?;
    let results = json!({
        "label": op.label(),
        "dim": op.dim(),
        "properties": property_report_json(&report),
    });
    Ok(RunReport::new(
        opts.seed,
        &opts.tol,
        opts.no_timestamp,
        provenance,
        results,
        Vec::new(),
    ))
}

/// Per-power verdicts; for an EP input the run asserts that every power
/// stays EP.
pub fn cmd_powers(
    input: Option<&Path>,
    construct: Option<&[String]>,
    k_max: usize,
    opts: &GlobalOpts,
) -> Result<RunReport> {
    if k_max == 0 {
        return Err(Error::Input("kmax must be >= 1".into()));
    }
    let (op, provenance) = resolve_input(input, construct, opts.seed)?;
    let base = analyze(&op, &opts.tol)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for k in 1..=k_max {
        let power = op.power(k);
        let rep = analyze(&power, &opts.tol)?;
        if base.ep && !rep.ep {
            failures.push(format!("power k={k} of an EP input lost the EP property"));
        }
        rows.push(json!({
            "k": k,
            "posinormal": rep.posinormal,
            "posinormal_defect": rep.posinormal_defect,
            "coposinormal": rep.coposinormal,
            "ep": rep.ep,
            "kernel_dim": rep.kernel_dim,
            "kernel_sq_dim": rep.kernel_sq_dim,
            "caveats": rep.caveats,
        }));
    }
    let results = json!({
        "label": op.label(),
        "dim": op.dim(),
        "input_ep": base.ep,
        "closure_asserted": base.ep,
        "powers": rows,
    });
    Ok(RunReport::new(
        opts.seed,
        &opts.tol,
        opts.no_timestamp,
        provenance,
        results,
        failures,
    ))
}

/// Parses "LO..HI" as the doubling ladder LO, 2·LO, ... capped at HI,
/// or a comma-separated explicit list.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>> {
    if let Some((lo_text, hi_text)) = text.split_once("..") {
        let lo = parse_count(lo_text, "range start")?;
        let hi = parse_count(hi_text, "range end")?;
        if lo == 0 || hi < lo {
            return Err(Error::Input(format!("invalid size range '{text}'")));
        }
        let mut sizes = Vec::new();
        let mut n = lo;
        while n <= hi {
            sizes.push(n);
            match n.checked_mul(2) {
                Some(next) => n = next,
                None => break,
            }
        }
        Ok(sizes)
    } else {
        let sizes: Result<Vec<usize>> = text
            .split(',')
            .map(|s| parse_count(s.trim(), "size"))
            .collect();
        sizes
    }
}

fn family_by_name(kind: &str, symbol: Option<&str>) -> Result<posinorm::matop::TruncationFamily> {
    let needs_no_symbol = |k: FamilyKind| -> Result<posinorm::matop::TruncationFamily> {
        if symbol.is_some() {
            return Err(Error::Input(format!(
                "--symbol only applies to the toeplitz family, not '{kind}'"
            )));
        }
        family_of(k)
    };
    match kind {
        "example1" | "block" => needs_no_symbol(FamilyKind::BlockHarmonic),
        "shift" => needs_no_symbol(FamilyKind::Shift),
        "diag-inv-k" | "diag" => needs_no_symbol(FamilyKind::DiagonalHarmonic),
        "toeplitz" => {
            let text = symbol.ok_or_else(|| {
                Error::Input("the toeplitz family needs --symbol EXPRESSION".into())
            })?;
            let op = expression_operator(text)?;
            if op.window() != 0 {
                return Err(Error::Input(format!(
                    "'{text}' is not a pure banded symbol (it carries a correction window of {})",
                    op.window()
                )));
            }
            family_of(FamilyKind::Toeplitz(op.symbol().to_vec()))
        }
        other => Err(Error::Input(format!(
            "unknown family '{other}'; known: example1, shift, diag-inv-k, toeplitz"
        ))),
    }
}

fn diagnosis_json(pd: &PowerDiagnosis) -> Value {
    json!({
        "k": pd.k,
        "classification": pd.diagnosis.classification.as_str(),
        "stable_floor": pd.diagnosis.stable_floor,
        "fitted_decay_exponent": pd.diagnosis.fitted_decay_exponent,
        "curve": pd.diagnosis.curve.iter().map(|p| json!({
            "n": p.n,
            "sigma_min_nonzero": p.sigma,
            "rank": p.rank,
        })).collect::<Vec<Value>>(),
    })
}

/// Sigma curves and closed-range classifications for a registered
/// family; also returns the CSV rendering of the curves.
pub fn cmd_family(
    kind: &str,
    sizes_text: &str,
    k_max: usize,
    symbol: Option<&str>,
    opts: &GlobalOpts,
) -> Result<(RunReport, String)> {
    let family = family_by_name(kind, symbol)?;
    let sizes = parse_sizes(sizes_text)?;
    let report = posinorm::rangelab::power_range_report(&family, k_max, &sizes, &opts.tol)?;
    let csv = crate::report::curves_to_csv(&report);
    let results = json!({
        "family": family.label(),
        "description": family.description(),
        "sizes": sizes,
        "powers": report.iter().map(diagnosis_json).collect::<Vec<Value>>(),
    });
    let provenance = json!({
        "family": kind,
        "sizes": sizes_text,
        "kmax": k_max,
        "symbol": symbol,
    });
    let run = RunReport::new(
        opts.seed,
        &opts.tol,
        opts.no_timestamp,
        provenance,
        results,
        Vec::new(),
    );
    Ok((run, csv))
}

/// Probe settings for the qtop bounded-below action.
#[derive(Clone, Copy, Debug)]
pub struct ProbeOpts {
    pub c: f64,
    pub trials: usize,
    pub max_support: usize,
}

impl Default for ProbeOpts {
    fn default() -> Self {
        ProbeOpts {
            c: 1.0,
            trials: 10_000,
            max_support: 512,
        }
    }
}

const QTOP_ACTIONS: [&str; 4] = ["self-commutator", "hyponormal", "verify", "probe"];

/// Exact banded-operator actions. The expression and the action may be
/// given in either order.
pub fn cmd_qtop(
    first: &str,
    second: &str,
    probe: &ProbeOpts,
    opts: &GlobalOpts,
) -> Result<RunReport> {
    let (action, text) = if QTOP_ACTIONS.contains(&first) {
        (first, second)
    } else if QTOP_ACTIONS.contains(&second) {
        (second, first)
    } else {
        return Err(Error::Input(format!(
            "one argument must be an action ({}), got '{first}' and '{second}'",
            QTOP_ACTIONS.join(", ")
        )));
    };
    let provenance = json!({ "expression": text, "action": action });
    let (results, failures) = match action {
        "self-commutator" => {
            let op = expression_operator(text)?;
            let comm = self_commutator(&op)?;
            (
                json!({
                    "operator": op.to_string(),
                    "commutator_window": comm.nrows(),
                    "commutator": matrix_json(&comm, Some("X*X - XX* on the correction window".into())),
                }),
                Vec::new(),
            )
        }
        "hyponormal" => {
            let op = expression_operator(text)?;
            let (hypo, lambda_min) = qt_is_hyponormal(&op, &opts.tol)?;
            (
                json!({
                    "operator": op.to_string(),
                    "hyponormal": hypo,
                    "smallest_commutator_eigenvalue": lambda_min,
                }),
                Vec::new(),
            )
        }
        "verify" => {
            let (lhs, rhs) = parse_equation(text)?;
            let outcome = qt_verify_equal(&lhs, &rhs, &opts.tol);
            let failures = if outcome.equal {
                Vec::new()
            } else {
                vec![format!(
                    "sides differ: symbol residual {:.3e}, correction residual {:.3e}",
                    outcome.symbol_residual, outcome.correction_residual
                )]
            };
            (
                json!({
                    "lhs": lhs.to_string(),
                    "rhs": rhs.to_string(),
                    "equal": outcome.equal,
                    "symbol_residual": outcome.symbol_residual,
                    "correction_residual": outcome.correction_residual,
                }),
                failures,
            )
        }
        "probe" => {
            let op = expression_operator(text)?;
            let out = qt_bounded_below_probe(&op, probe.c, probe.trials, probe.max_support, opts.seed)?;
            let failures = if out.falsified {
                vec![format!(
                    "bound {} falsified: ratio {:.12} at support {}",
                    probe.c, out.worst_ratio, out.worst_support
                )]
            } else {
                Vec::new()
            };
            (
                json!({
                    "operator": op.to_string(),
                    "claimed_bound": probe.c,
                    "trials": out.trials,
                    "max_support": probe.max_support,
                    "falsified": out.falsified,
                    "worst_ratio": out.worst_ratio,
                    "worst_support": out.worst_support,
                }),
                failures,
            )
        }
        _ => unreachable!(),
    };
    Ok(RunReport::new(
        opts.seed,
        &opts.tol,
        opts.no_timestamp,
        provenance,
        results,
        failures,
    ))
}

/// Runs a named suite, prints its pass/fail table to stderr, and
/// reports the outcomes.
pub fn cmd_suite(name: &str, instances: Option<usize>, opts: &GlobalOpts) -> Result<RunReport> {
    let params = SuiteParams {
        seed: opts.seed,
        instances,
        tol: opts.tol,
    };
    let outcomes = run_suite(name, &params)?;
    eprint!("{}", outcome_table(&outcomes));
    let failures: Vec<String> = outcomes
        .iter()
        .flat_map(|o| {
            o.checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: {}", o.suite, c.label))
                .collect::<Vec<String>>()
        })
        .collect();
    let results = serde_json::to_value(&outcomes)
        .map_err(|e| Error::Internal(format!("suite serialization failed: {e}")))?;
    Ok(RunReport::new(
        opts.seed,
        &opts.tol,
        opts.no_timestamp,
        json!({ "suite": name, "instances": instances }),
        results,
        failures,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> GlobalOpts {
        GlobalOpts {
            no_timestamp: true,
            ..GlobalOpts::default()
        }
    }

    #[test]
    fn constructors_cover_the_registered_shapes() {
        let id = construct_operator(&["identity".into(), "4".into()], 0).unwrap();
        assert_eq!(id.dim(), 4);
        let j = construct_operator(&["jordan".into(), "3".into(), "1".into()], 0).unwrap();
        assert_eq!(j.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        let ep = construct_operator(&["ep".into(), "5".into(), "2".into()], 9).unwrap();
        assert_eq!(ep.dim(), 5);
        let t = construct_operator(
            &["toeplitz".into(), "6".into(), "U* + 2U".into()],
            0,
        )
        .unwrap();
        assert_eq!(t.matrix()[(1, 0)], Complex64::new(2.0, 0.0));
        assert!(construct_operator(&["wat".into()], 0).is_err());
        assert!(construct_operator(&["identity".into()], 0).is_err());
    }

    #[test]
    fn size_ladders_double_and_lists_parse() {
        assert_eq!(parse_sizes("4..256").unwrap(), vec![4, 8, 16, 32, 64, 128, 256]);
        assert_eq!(parse_sizes("3..20").unwrap(), vec![3, 6, 12]);
        assert_eq!(parse_sizes("5,9,11").unwrap(), vec![5, 9, 11]);
        assert!(parse_sizes("0..8").is_err());
        assert!(parse_sizes("8..4").is_err());
        assert!(parse_sizes("a,b").is_err());
    }

    #[test]
    fn analyze_identity_is_everything() {
        let rep = cmd_analyze(
            None,
            Some(&["identity".into(), "4".into()]),
            &opts(),
        )
        .unwrap();
        assert!(rep.summary.pass);
        let props = &rep.results["properties"];
        for key in ["normal", "hyponormal", "posinormal", "coposinormal", "ep"] {
            assert_eq!(props[key], serde_json::json!(true), "{key}");
        }
        let lambda = props["certificate"]["lambda_min"].as_f64().unwrap();
        assert!((lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analyze_jordan_is_not_posinormal() {
        let rep = cmd_analyze(None, Some(&["jordan".into(), "2".into()]), &opts()).unwrap();
        assert_eq!(rep.results["properties"]["posinormal"], serde_json::json!(false));
        assert!(rep.summary.pass);
    }

    #[test]
    fn powers_assert_closure_only_for_ep_inputs() {
        let rep = cmd_powers(
            None,
            Some(&["ep".into(), "6".into(), "3".into()]),
            4,
            &GlobalOpts {
                seed: 3,
                ..opts()
            },
        )
        .unwrap();
        assert!(rep.summary.pass);
        assert_eq!(rep.results["input_ep"], serde_json::json!(true));

        let rep = cmd_powers(None, Some(&["jordan".into(), "3".into()]), 3, &opts()).unwrap();
        assert!(rep.summary.pass);
        let rows = rep.results["powers"].as_array().unwrap();
        assert_eq!(rows[0]["posinormal"], serde_json::json!(false));
        assert_eq!(rows[1]["posinormal"], serde_json::json!(false));
        assert_eq!(rows[2]["posinormal"], serde_json::json!(true));
        assert_eq!(rows[2]["kernel_dim"], serde_json::json!(3));
    }

    #[test]
    fn qtop_accepts_either_argument_order() {
        let a = cmd_qtop("U* + 2U", "self-commutator", &ProbeOpts::default(), &opts()).unwrap();
        let b = cmd_qtop("self-commutator", "U* + 2U", &ProbeOpts::default(), &opts()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(matches!(
            cmd_qtop("U", "2U", &ProbeOpts::default(), &opts()),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn qtop_verify_failure_is_a_property_failure() {
        let rep = cmd_qtop("verify", "U = U*", &ProbeOpts::default(), &opts()).unwrap();
        assert!(!rep.summary.pass);
        let rep = cmd_qtop("verify", "U* U = I", &ProbeOpts::default(), &opts()).unwrap();
        assert!(rep.summary.pass);
    }

    #[test]
    fn family_emits_curves_and_csv() {
        let (rep, csv) = cmd_family("example1", "4..32", 2, None, &opts()).unwrap();
        assert!(rep.summary.pass);
        assert!(csv.starts_with("n,k,sigma_min_nonzero,rank\n"));
        assert_eq!(csv.lines().count(), 1 + 4 * 2);
        assert!(matches!(
            cmd_family("wat", "4..32", 1, None, &opts()),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            cmd_family("toeplitz", "4..32", 1, Some("U U*"), &opts()),
            Err(Error::Input(_))
        ));
        let (rep, _) = cmd_family("toeplitz", "4,8,16,32", 1, Some("I + U"), &opts()).unwrap();
        assert!(rep.summary.pass);
    }
}
