// Scans a dual grid and prints the same CSV the `scan` subcommand writes.

use suppdiff::cli::scan_csv;
use suppdiff::fixtures::set_fixture;
use suppdiff::report::GridSummary;
use suppdiff::support::{dual_grid, scan, SupportConfig};

fn main() -> suppdiff::error::Result<()> {
    for name in ["ex3b", "ex-adsz-L", "hyperbola"] {
        let set = set_fixture(name)?;
        let grid = dual_grid(&set.cone, 15);
        let rows = scan(&set, &grid, &SupportConfig::default())?;
        let summary = GridSummary::from_rows(&rows);
        println!("# {name}: {summary:?}");
        print!("{}", scan_csv(&rows, set.dim())?);
    }
    Ok(())
}
