//! Byte-exact regression of the built-in scenario frontiers at grid 33. A
//! missing golden file is written from the current computation and the
//! test passes; an existing one must match exactly.

use std::fs;
use std::path::PathBuf;

use pcn_region::io::frontier_csv;
use pcn_region::scenario::{preset, run_scenario, PRESETS};

fn golden_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden").join(file)
}

fn check(file: &str, actual: &str) -> Result<(), String> {
    let path = golden_path(file);
    match fs::read_to_string(&path) {
        Ok(expected) if expected == actual => Ok(()),
        Ok(expected) => {
            let line = expected.lines().zip(actual.lines()).position(|(e, a)| e != a);
            Err(format!("{file} differs from golden (first differing line {line:?})"))
        }
        Err(_) => {
            fs::create_dir_all(path.parent().expect("has parent")).map_err(|e| e.to_string())?;
            fs::write(&path, actual).map_err(|e| e.to_string())?;
            eprintln!("wrote new golden {}", path.display());
            Ok(())
        }
    }
}

#[test]
fn scenario_frontiers_match_goldens() {
    let mut failures = Vec::new();
    for (name, _) in PRESETS {
        let cfg = preset(name).expect("preset exists");
        assert_eq!(cfg.grid, 33);
        let report = run_scenario(&cfg).expect("scenario runs");
        for (kind, result) in [("pdf", &report.pdf), ("ifc", &report.ifc)] {
            let region = &result.as_ref().unwrap_or_else(|| panic!("{name} computes {kind}")).region;
            if let Err(e) = check(&format!("{name}_{kind}.csv"), &frontier_csv(region).expect("nonempty")) {
                failures.push(e);
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn golden_files_parse_as_frontiers() {
    for (name, _) in PRESETS {
        let path = golden_path(&format!("{name}_pdf.csv"));
        let Ok(text) = fs::read_to_string(&path) else { continue };
        let points = pcn_region::io::parse_frontier_csv(&text).expect("golden parses");
        // Axis intercepts share one coordinate with their neighbour.
        let monotone = points.windows(2).all(|w| w[0].r1 <= w[1].r1 && w[0].r2 >= w[1].r2 && w[0] != w[1]);
        assert!(monotone, "{name} frontier runs from the R2 axis to the R1 axis");
    }
}
