#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(code) = gschnyder::codec::deserialize(data) {
        // varints are minimal and padding is zero, so the layout is canonical
        assert_eq!(gschnyder::codec::serialize(&code), data);
    }
});
