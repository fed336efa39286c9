use std::path::PathBuf;

use psba::format::{InstanceFile, SolutionFile};
use psba::svg::render_svg;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

#[test]
fn golden_files_round_trip_byte_for_byte() {
    for name in ["two_agents.json", "huge_timeline.json", "partition_1_1_2.json"] {
        let text = read(name);
        assert_eq!(InstanceFile::parse(&text).unwrap().to_json(), text, "{name}");
    }
    let text = read("two_agents_solution.json");
    assert_eq!(SolutionFile::parse(&text).unwrap().to_json(), text);
}

#[test]
fn instance_survives_conversion() {
    let file = InstanceFile::parse(&read("two_agents.json")).unwrap();
    assert_eq!(InstanceFile::from(&file.to_instance()), file);
}

#[test]
fn recorded_solution_matches_recomputation() {
    let instance = InstanceFile::parse(&read("two_agents.json")).unwrap().to_instance();
    let recorded = SolutionFile::parse(&read("two_agents_solution.json")).unwrap();
    let schedule = recorded.schedule(&instance).unwrap();
    assert_eq!(SolutionFile::new(&instance, &schedule, "manual", None).unwrap(), recorded);
}

/// Set `PSBA_BLESS=1` to rewrite the snapshot after an intended change.
#[test]
fn two_agents_chart_is_stable() {
    let instance = InstanceFile::parse(&read("two_agents.json")).unwrap().to_instance();
    let schedule = instance.schedule(&[(0, 3), (1, 8)]).unwrap();
    let svg = render_svg(&instance, &schedule).unwrap();
    assert_eq!(render_svg(&instance, &schedule).unwrap(), svg);
    let path = data("two_agents.svg");
    if std::env::var_os("PSBA_BLESS").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    assert_eq!(svg, std::fs::read_to_string(path).unwrap());
}
