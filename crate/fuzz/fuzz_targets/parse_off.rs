#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(map) = gschnyder::io::parse_off(data) {
        assert!(map.validate_triangulation().is_triangulation);
    }
});
