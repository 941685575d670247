//! Validates the bundled gadget tile sets and prints a per-property summary.

use std::collections::BTreeMap;

use tileforge::gadgets::{load_tileset_t, load_tileset_tprime, validate_gadget_tileset};

fn main() {
    let depth = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    for ts in [load_tileset_t().unwrap(), load_tileset_tprime().unwrap()] {
        let report = validate_gadget_tileset(&ts, depth);
        let mut by_prop: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for c in &report.checks {
            let e = by_prop.entry(&c.property).or_default();
            e.0 += usize::from(c.pass);
            e.1 += 1;
        }
        println!("{} ({} tiles, depth {depth}): {}", ts.name, ts.tiles.len(), if report.passed() { "ok" } else { "FAILED" });
        for (p, (ok, n)) in by_prop {
            println!("  ({p}) {ok}/{n}");
        }
        for f in report.failures().take(3) {
            println!("  ({}) {}: {}", f.property, f.case, f.detail);
        }
    }
}
