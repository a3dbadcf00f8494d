use std::fs;

use busytime::experiment::{
    build_instance, emit_report, format_csv, run_experiment, ExperimentError, ExperimentSpec, InstanceSource,
    OutputPaths, SchedulerEntry, CSV_HEADER,
};
use busytime::model::{HostConfig, Instance};
use busytime::workload::{generate_jobs, write_instance, write_swf, GeneratorConfig};

fn small_generator(seed: u64) -> GeneratorConfig {
    GeneratorConfig {
        seed,
        jobs: 40,
        ..Default::default()
    }
}

#[test]
fn spec_paths_resolve_against_spec_directory() {
    let dir = tempfile::tempdir().unwrap();
    let jobs = generate_jobs(&small_generator(3)).unwrap();
    write_swf(&jobs, fs::File::create(dir.path().join("trace.swf")).unwrap()).unwrap();
    fs::write(
        dir.path().join("spec.json"),
        r#"{
            "instance": {"swf": "trace.swf"},
            "hosts": 300,
            "schedulers": [{"name": "tian-mffde"}, {"name": "emintre-lft", "label": "ours"}],
            "baseline": "tian-mffde",
            "output": {"csv": "out.csv", "json": "out.json"}
        }"#,
    )
    .unwrap();
    let spec = ExperimentSpec::load(&dir.path().join("spec.json")).unwrap();
    let report = run_experiment(&spec).unwrap();
    emit_report(&report, &spec.output).unwrap();

    let csv = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some(CSV_HEADER));
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().any(|l| l.starts_with("ours,")));
    assert!(csv
        .lines()
        .any(|l| l.starts_with("Tian-MFFDE,") && l.contains(",1.000,0.000,")));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 2);
    assert_eq!(
        json["vms"].as_u64().unwrap() as usize,
        jobs.iter().map(|j| j.processors as usize).sum::<usize>()
    );
}

#[test]
fn json_instance_keeps_its_hosts_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let vms = busytime::workload::generate_synthetic(&small_generator(5)).unwrap();
    let hosts = (0..250).map(HostConfig::reference).collect();
    let path = dir.path().join("inst.json");
    write_instance(&Instance::new(vms, hosts), &path).unwrap();

    let mut spec = ExperimentSpec::standard(InstanceSource::Json(path));
    let (inst, _) = build_instance(&spec).unwrap();
    assert_eq!(inst.hosts.len(), 250);
    spec.hosts = Some(400);
    let (inst, _) = build_instance(&spec).unwrap();
    assert_eq!(inst.hosts.len(), 400);
}

#[test]
fn generator_defaults_to_full_fleet() {
    let spec = ExperimentSpec::standard(InstanceSource::Generator(small_generator(1)));
    let (inst, rejected) = build_instance(&spec).unwrap();
    assert_eq!(inst.hosts.len(), 5000);
    assert_eq!(rejected, 0);
}

#[test]
fn baseline_may_be_a_label() {
    let mut spec = ExperimentSpec::standard(InstanceSource::Generator(small_generator(2)));
    spec.hosts = Some(300);
    spec.schedulers = vec![
        SchedulerEntry {
            label: Some("reference".into()),
            ..SchedulerEntry::named("pabfd")
        },
        SchedulerEntry::emintre(1.0),
    ];
    spec.baseline = "reference".into();
    let report = run_experiment(&spec).unwrap();
    assert_eq!(report.baseline, "reference");
    let base = report.rows.iter().find(|r| r.algorithm == "reference").unwrap();
    assert_eq!(base.norm_energy, 1.0);
}

#[test]
fn different_seeds_give_different_reports() {
    let run = |seed| {
        let mut spec = ExperimentSpec::standard(InstanceSource::Generator(small_generator(seed)));
        spec.hosts = Some(300);
        format_csv(&run_experiment(&spec).unwrap().rows)
    };
    assert_eq!(run(11), run(11));
    assert_ne!(run(11), run(12));
}

#[test]
fn missing_trace_is_io_error() {
    let spec = ExperimentSpec::standard(InstanceSource::Swf("/nonexistent/trace.swf".into()));
    let err = run_experiment(&spec).unwrap_err();
    assert!(err.is_io(), "{err}");
}

#[test]
fn unknown_scheduler_in_spec_is_rejected() {
    let mut spec = ExperimentSpec::standard(InstanceSource::Generator(small_generator(1)));
    spec.schedulers.push(SchedulerEntry::named("round-robin"));
    assert!(matches!(run_experiment(&spec), Err(ExperimentError::Scheduler(_))));
}

#[test]
fn report_to_unwritable_directory_fails() {
    let mut spec = ExperimentSpec::standard(InstanceSource::Generator(small_generator(1)));
    spec.hosts = Some(300);
    let report = run_experiment(&spec).unwrap();
    let paths = OutputPaths {
        csv: None,
        json: Some("/nonexistent/dir/report.json".into()),
    };
    assert!(emit_report(&report, &paths).unwrap_err().is_io());
}
