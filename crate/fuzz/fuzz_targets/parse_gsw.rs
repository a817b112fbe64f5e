#![no_main]
use std::sync::OnceLock;

use gschnyder::generators::grid_torus;
use gschnyder::Map;
use libfuzzer_sys::fuzz_target;

fn mesh() -> &'static Map {
    static MESH: OnceLock<Map> = OnceLock::new();
    MESH.get_or_init(|| grid_torus(3, 3).unwrap())
}

fuzz_target!(|data: &str| {
    let map = mesh();
    if let Ok(wood) = gschnyder::io::parse_gsw(map, data) {
        let _ = gschnyder::wood::validate(map, &wood);
        let text = gschnyder::io::write_gsw(map, &wood);
        assert_eq!(gschnyder::io::parse_gsw(map, &text).unwrap(), wood);
    }
});
