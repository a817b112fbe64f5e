#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(map) = gschnyder::io::parse_tri(data) {
        // written back and re-read, the mesh keeps its shape
        let again = gschnyder::io::parse_tri(&gschnyder::io::write_tri(&map)).unwrap();
        assert_eq!(again.edge_count(), map.edge_count());
        assert_eq!(again.genus().ok(), map.genus().ok());
    }
});
