#![no_main]

use libfuzzer_sys::fuzz_target;
use searchlabel::oracles::TranscriptRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else { return };
    if let Ok(r) = TranscriptRecord::parse_line(line) {
        let again = TranscriptRecord::parse_line(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(again, r);
    }
});
