use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use tricount::analytics::BoundKind;
use tricount::report::{self, Payload, PlanInput, RunReport};
use tricount::SamplerKind;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tricount"))
}

#[test]
fn exact_command() {
    let r = report::cmd_exact(&data("paw.edges"), true).unwrap();
    let Payload::Exact(e) = &r.result else {
        panic!()
    };
    assert_eq!(e.triangles, 1);
    assert_eq!(e.per_vertex.as_deref(), Some(&[1, 1, 1, 0][..]));
    let Payload::Exact(e) = report::cmd_exact(&data("k4.edges"), false).unwrap().result else {
        panic!()
    };
    assert_eq!(e.triangles, 4);
    assert!(report::cmd_exact(&data("empty-graph.edges"), false).is_err());
}

#[test]
fn estimate_command() {
    let r = report::cmd_estimate(&data("k4.edges"), SamplerKind::Optimal, 3, 7, true).unwrap();
    let Payload::Estimate(e) = &r.result else {
        panic!()
    };
    assert_eq!(e.estimate, 4.0);
    assert_eq!(r.seed, Some(7));

    let Payload::Estimate(e) =
        report::cmd_estimate(&data("path3.edges"), SamplerKind::EdgeDegree, 100, 1, true)
            .unwrap()
            .result
    else {
        panic!()
    };
    assert_eq!(e.estimate, 0.0);

    let Payload::Estimate(e) = report::cmd_estimate(
        &data("paw.edges"),
        SamplerKind::QOptUniform,
        100_000,
        1,
        false,
    )
    .unwrap()
    .result
    else {
        panic!()
    };
    assert!((0.97..=1.03).contains(&e.estimate), "{}", e.estimate);

    let err =
        report::cmd_estimate(&data("path3.edges"), SamplerKind::Optimal, 10, 1, true).unwrap_err();
    assert!(err.to_string().contains("undefined"));
}

#[test]
fn variance_command() {
    let Payload::Variance(v) =
        report::cmd_variance(&data("paw.edges"), Some(SamplerKind::QOptDegree), 1)
            .unwrap()
            .result
    else {
        panic!()
    };
    assert!((v.rows[0].closed_form - 5.0 / 27.0).abs() < 1e-12);
    assert!(v.rows[0].difference.abs() < 1e-12);
    let Payload::Variance(v) =
        report::cmd_variance(&data("paw.edges"), Some(SamplerKind::EdgeUniform), 1)
            .unwrap()
            .result
    else {
        panic!()
    };
    assert!((v.rows[0].generic - 5.0 / 9.0).abs() < 1e-12);
    let Payload::Variance(v) = report::cmd_variance(&data("k3.edges"), None, 1)
        .unwrap()
        .result
    else {
        panic!()
    };
    assert_eq!(v.rows.len(), 5);
    assert!(v
        .rows
        .iter()
        .all(|r| r.closed_form.abs() < 1e-12 && r.generic.abs() < 1e-12));
}

#[test]
fn plan_command() {
    let params = |eps| {
        let input = PlanInput::Params {
            n: 1000,
            upper_bound: 2.0,
            average: 1.0,
        };
        report::cmd_plan(eps, 1.0, BoundKind::Vertex, input)
    };
    let s = |r: tricount::Result<RunReport>| match r.unwrap().result {
        Payload::Plan(p) => p.s,
        _ => panic!(),
    };
    assert_eq!(s(params(0.1)), 2764);
    assert_eq!(s(params(0.2)), 691);
    assert!(params(1.5).is_err());
    let from_file = report::cmd_plan(
        0.1,
        1.0,
        BoundKind::Edge,
        PlanInput::File {
            path: &data("paw.edges"),
            upper_bound: None,
        },
    );
    assert!(from_file.is_ok());
    assert!(report::cmd_plan(
        0.1,
        1.0,
        BoundKind::Edge,
        PlanInput::File {
            path: &data("path3.edges"),
            upper_bound: None
        }
    )
    .is_err());
}

#[test]
fn stream_command() {
    let r = report::cmd_stream(&data("paw.edges"), 4, 1, Some(4), false).unwrap();
    let Payload::Stream(s) = &r.result else {
        panic!()
    };
    assert_eq!(s.passes_used, 2);
    let Payload::Stream(s) = report::cmd_stream(&data("paw.edges"), 4, 1, None, false)
        .unwrap()
        .result
    else {
        panic!()
    };
    assert_eq!(s.passes_used, 3);
    for seed in 0..10 {
        let Payload::Stream(s) = report::cmd_stream(&data("k3.edges"), 1, seed, None, false)
            .unwrap()
            .result
        else {
            panic!()
        };
        assert_eq!(s.estimate, 1.0);
    }
}

#[test]
fn stream_with_every_paw_vertex_sampled() {
    // Find a seed whose four uniform draws cover all four vertices.
    let seed = (0..1000u64)
        .find(|&seed| {
            let mut v = tricount::stream::sample_vertices(4, 4, seed);
            v.sort_unstable();
            v == [0, 1, 2, 3]
        })
        .expect("a covering seed exists");
    let Payload::Stream(s) = report::cmd_stream(&data("paw.edges"), 4, seed, Some(4), false)
        .unwrap()
        .result
    else {
        panic!()
    };
    assert!((s.estimate - 1.0).abs() < 1e-15);
    assert_eq!(s.passes_used, 2);
}

#[test]
fn bench_command() {
    let r = report::cmd_bench(
        &data("paw.edges"),
        &SamplerKind::ALL,
        &[10, 100, 1000],
        100,
        5,
        false,
    )
    .unwrap();
    let Payload::Bench(b) = &r.result else {
        panic!()
    };
    for kind in SamplerKind::ALL.into_iter().skip(1) {
        let errors: Vec<f64> = b
            .rows
            .iter()
            .filter(|r| r.sampler == kind)
            .map(|r| r.mean_error)
            .collect();
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "{kind}: {errors:?}");
    }
    let Payload::Bench(b) = report::cmd_bench(
        &data("k4.edges"),
        &[SamplerKind::Optimal],
        &[1, 10, 100],
        5,
        0,
        true,
    )
    .unwrap()
    .result
    else {
        panic!()
    };
    assert!(b.rows.iter().all(|r| r.mean_error == 0.0));
    let Payload::Bench(b) =
        report::cmd_bench(&data("path3.edges"), &SamplerKind::ALL, &[10], 3, 0, true)
            .unwrap()
            .result
    else {
        panic!()
    };
    assert!(b.rows.iter().all(|r| r.mean_error == 0.0));
    assert_eq!(b.skipped.len(), 1);
    assert!(b
        .rows
        .iter()
        .all(|r| r.error_metric == report::ErrorMetric::Absolute));
}

#[test]
fn reports_round_trip_byte_for_byte() {
    let reports = [
        report::cmd_exact(&data("paw.edges"), true).unwrap(),
        report::cmd_estimate(&data("paw.edges"), SamplerKind::EdgeUniform, 1000, 3, true).unwrap(),
        report::cmd_variance(&data("paw.edges"), None, 3).unwrap(),
        report::cmd_plan(
            0.1,
            2.0,
            BoundKind::Vertex,
            PlanInput::File {
                path: &data("paw.edges"),
                upper_bound: None,
            },
        )
        .unwrap(),
        report::cmd_stream(&data("paw.edges"), 9, 3, None, false).unwrap(),
        report::cmd_bench(&data("paw.edges"), &SamplerKind::ALL, &[10, 20], 4, 1, true).unwrap(),
    ];
    for r in reports {
        let text = r.to_json();
        let parsed = RunReport::from_json(&text).unwrap();
        assert_eq!(parsed, r);
        assert_eq!(parsed.to_json(), text);
    }
}

#[test]
fn binary_exit_codes_and_channels() {
    let out = bin()
        .args(["exact"])
        .arg(data("paw.edges"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(matches!(report.result, Payload::Exact(ref e) if e.triangles == 1));
    assert!(out.stderr.is_empty());

    let out = bin()
        .args(["exact"])
        .arg(data("empty-graph.edges"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let out = bin()
        .args([
            "plan",
            "--epsilon",
            "1.5",
            "--n",
            "1000",
            "--upper-bound",
            "2",
            "--average",
            "1",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());

    let out = bin()
        .args([
            "estimate",
            "--sampler",
            "optimal",
            "--samples",
            "3",
            "--seed",
            "7",
        ])
        .arg(data("k4.edges"))
        .output()
        .unwrap();
    let report = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(matches!(report.result, Payload::Estimate(ref e) if e.estimate == 4.0));

    let out = bin()
        .args([
            "--format",
            "tsv",
            "bench",
            "--samples",
            "10",
            "--repetitions",
            "2",
        ])
        .arg(data("paw.edges"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().next().unwrap().contains("mean_error"));
}

#[test]
fn binary_stream_from_stdin() {
    let paw = std::fs::read(data("paw.edges")).unwrap();
    let run = |args: &[&str]| {
        let mut child = bin()
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        use std::io::Write;
        child.stdin.take().unwrap().write_all(&paw).unwrap();
        child.wait_with_output().unwrap()
    };
    let out = run(&["stream", "-", "--samples", "4"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
    let out = run(&["stream", "-", "--samples", "4", "--n", "4"]);
    assert!(out.status.success());
    let report = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!(matches!(report.result, Payload::Stream(ref s) if s.passes_used == 2));
}
