use tileforge::gadgets::{build_tileset_2sat, build_tileset_t, build_tileset_tprime, load_tileset_2sat, load_tileset_t, load_tileset_tprime, GadgetTileset};

fn path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("assets").join(name)
}

fn write(name: &str, ts: &GadgetTileset) {
    let s = serde_json::to_string_pretty(ts).unwrap() + "\n";
    std::fs::write(path(name), s).unwrap();
}

/// Set TILEFORGE_REGEN_ASSETS=1 to rewrite the shipped tilesets from the builders.
#[test]
fn shipped_assets_match_builders() {
    if std::env::var("TILEFORGE_REGEN_ASSETS").is_ok() {
        write("tileset_t.json", &build_tileset_t());
        write("tileset_tprime.json", &build_tileset_tprime());
        write("tileset_2sat.json", &build_tileset_2sat());
        return;
    }
    assert_eq!(load_tileset_t().unwrap(), build_tileset_t());
    assert_eq!(load_tileset_tprime().unwrap(), build_tileset_tprime());
    assert_eq!(load_tileset_2sat().unwrap(), build_tileset_2sat());
}
