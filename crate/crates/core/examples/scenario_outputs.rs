//! A scenario end to end: config text, both regions, oracle summary and the
//! CSV, JSON and SVG artifacts.

use pcn_region::io::Format;
use pcn_region::scenario::{parse_config, run_scenario, write_artifacts};

const CONFIG: &str = "\
# strong interference, weak relay links
[demo]
h12 = 1
h13 = 10
h14 = 1
h23 = 10
h24 = 10
h34 = 1
P1 = 1
P2 = 1
P3 = 1
N2 = 1
N3 = 1
N4 = 1
grid = 9
regions = both
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = parse_config(CONFIG)?.remove(0);
    let dir = std::env::temp_dir().join("pcn-scenario-demo");
    cfg.outputs.dir = Some(dir.clone());
    cfg.outputs.format = Format::Json;
    cfg.outputs.plot = Some(dir.join("demo.svg"));

    let report = run_scenario(&cfg)?;
    println!("config hash {}", report.config_hash);
    if let (Some(pdf), Some(ifc)) = (&report.pdf, &report.ifc) {
        println!("equal rate: collaborative {:.6}, baseline {:.6}", pdf.equal_rate, ifc.equal_rate);
    }
    println!("gain {:?}, baseline excess {:?}", report.equal_rate_gain(), report.ifc_excess_over_pdf());
    if let Some(o) = report.oracle {
        println!("oracle: {} splits, max relative deviation {:.1e}", o.splits, o.max_relative_deviation);
    }
    write_artifacts(&report, &cfg.outputs)?;
    let mut files: Vec<_> = std::fs::read_dir(&dir)?.map(|e| e.map(|e| e.file_name())).collect::<Result<_, _>>()?;
    files.sort();
    println!("wrote {files:?} to {}", dir.display());
    Ok(())
}
