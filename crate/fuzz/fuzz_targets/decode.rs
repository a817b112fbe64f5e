#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(code) = gschnyder::codec::deserialize(data) else {
        return;
    };
    if let Ok((map, wood)) = gschnyder::codec::decode(&code) {
        assert!(map.validate_triangulation().is_triangulation);
        assert_eq!(map.vertex_count(), code.n);
        let _ = gschnyder::wood::validate(&map, &wood);
    }
});
