use std::process::{Command, Output};

use copoly::config::{ExperimentConfig, OutputFormat, SchemeSpec, SCHEMA_VERSION};
use copoly::scalar::q;
use copoly::Perturbation;
use copoly_cli::expr::{parse, parse_with_pi, Expr};
use proptest::prelude::*;

fn copoly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copoly")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn quad_reproduces_the_table_one_cell_with_published_pi() {
    let o = copoly(&["quad", "--n", "4", "--mu", "0.1", "--k", "0", "--integrand", "example3", "--published-pi"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5444480269).abs() < 1e-6, "{v}");
}

#[test]
fn quad_with_true_pi_differs_by_the_offset_factor() {
    let o = copoly(&["quad", "--n", "4", "--mu", "0.1", "--k", "0", "--integrand", "example3", "--precision", "full"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let factor = 22.0 / (7.0 * std::f64::consts::PI);
    assert!((v * factor - 0.5444480269).abs() < 1e-9, "{v}");
}

#[test]
fn expression_integrand_matches_builtin() {
    let a = copoly(&["quad", "--n", "6", "--mu", "1/100"]);
    let b = copoly(&["quad", "--n", "6", "--mu", "1/100", "--integrand", "pi*exp(-x^2)/(x^2+1)^7"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn structural_check_reports_no_failures() {
    let o = copoly(&["check", "--suite", "structural", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().last().unwrap() == "0 failures");
}

#[test]
fn table_four_is_a_ten_row_csv() {
    let o = copoly(&["table", "--id", "t4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert!(!text.contains('\r'));
    for line in &lines[1..] {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[1] - cols[2]).abs() < 1e-8);
        assert!((cols[4] - cols[5]).abs() < 1e-8);
    }
}

#[test]
fn table_one_csv_has_the_report_columns() {
    let o = copoly(&["table", "--id", "t1", "--out", "csv"]);
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    for col in ["n", "mu", "k", "nu", "kp", "I_star", "paper_value", "abs_dev"] {
        assert!(header.split(',').any(|h| h == col), "{col}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(copoly(&["quad", "--bogus"]).status.code(), Some(2));
    assert_eq!(copoly(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(copoly(&["quad"]).status.code(), Some(2));
    let o = copoly(&["quad", "--n", "4", "--integrand", "exp(x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position"));
}

#[test]
fn complex_zeros_exit_one_with_structured_message() {
    let o = copoly(&["zeros", "--n", "18", "--kp", "1", "--nu", "2.12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[complex_zeros]"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["check", "--suite", "all", "--seed", "11", "--count", "5", "--out", "json"][..],
        &["flip", "--published-pi"][..],
        &["measure", "--n", "10", "--mu", "0.01", "--method", "spline", "--samples", "50"][..],
    ] {
        assert_eq!(copoly(args).stdout, copoly(args).stdout);
    }
}

#[test]
fn json_reports_carry_the_schema_version() {
    let o = copoly(&["zeros", "--n", "5", "--out", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "zeros");
    assert_eq!(v["data"][0]["nodes"].as_array().unwrap().len(), 5);
}

#[test]
fn measure_csv_columns() {
    let o = copoly(&["measure", "--n", "10", "--mu", "0.01", "--method", "lagrange", "--samples", "400", "--out", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("x,density,flag"));
    assert_eq!(text.lines().count(), 401);
}

#[test]
fn config_file_drives_quad() {
    let cfg = ExperimentConfig {
        schema_version: SCHEMA_VERSION,
        scheme: SchemeSpec::Example,
        perturbations: vec![Perturbation::corec(0, q(1, 10)), Perturbation::corec(0, q(1, 100))],
        n: vec![4, 6],
        integrand: "example3".into(),
        output: OutputFormat::Csv,
        seed: 0,
    };
    let path = std::env::temp_dir().join(format!("copoly-cli-test-{}.json", std::process::id()));
    std::fs::write(&path, cfg.to_json().unwrap()).unwrap();
    let o = copoly(&["quad", "--config", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,mu,k,nu,kp,I_star"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn poly_prints_the_perturbed_first_kind_polynomial() {
    let o = copoly(&["poly", "--n", "1", "--mu", "0.1"]);
    assert_eq!(stdout(&o).trim(), "P_1(x) = x - 1/10");
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0u32..1000).prop_map(|n| Expr::Num(n as f64 / 8.0)), Just(Expr::X)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone(), 0usize..5).prop_map(|(a, b, i)| {
                use copoly_cli::expr::BinOp::*;
                Expr::Bin([Add, Sub, Mul, Div, Pow][i], Box::new(a), Box::new(b))
            }),
            (inner, 0usize..4).prop_map(|(e, i)| {
                use copoly_cli::expr::Func::*;
                Expr::Call([Exp, Sin, Cos, Abs][i], Box::new(e))
            }),
        ]
    })
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a.is_nan() && b.is_nan())
}

proptest! {
    #[test]
    fn printed_expressions_reparse_to_the_same_function(e in expr_strategy(), x in -3.0f64..3.0) {
        let back = parse(&e.to_string()).unwrap();
        prop_assert!(same(back.eval(x), e.eval(x)), "{} -> {}", e, back);
    }

    #[test]
    fn rejections_carry_a_position_inside_the_text(s in "[-+*/^()x0-9a-z. ]{0,16}") {
        if let Err(err) = parse_with_pi(&s, std::f64::consts::PI) {
            prop_assert!(err.pos <= s.len());
        }
    }

    #[test]
    fn config_round_trips(
        mus in proptest::collection::vec((0usize..6, -50i64..50, 1i64..40), 0..4),
        ns in proptest::collection::vec(1usize..30, 1..4),
        seed in any::<u64>(),
        json_out in any::<bool>(),
    ) {
        let cfg = ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            scheme: SchemeSpec::Example,
            perturbations: mus.iter().map(|&(k, a, b)| Perturbation::both(k, q(a, b), k + 1, q(b, 7))).collect(),
            n: ns,
            integrand: "pi*exp(-x^2)".into(),
            output: if json_out { OutputFormat::Json } else { OutputFormat::Csv },
            seed,
        };
        prop_assert_eq!(ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap(), cfg);
    }
}
