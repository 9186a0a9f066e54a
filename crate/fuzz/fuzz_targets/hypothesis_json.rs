#![no_main]

use libfuzzer_sys::fuzz_target;
use searchlabel::hypotheses::{Hypothesis, Point};

fuzz_target!(|data: &[u8]| {
    if let Ok(h) = serde_json::from_slice::<Hypothesis>(data) {
        let back: Hypothesis = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
        for x in [0.0, 0.25, 0.5, 1.0] {
            h.predict(Point::new(x).unwrap());
        }
    }
});
