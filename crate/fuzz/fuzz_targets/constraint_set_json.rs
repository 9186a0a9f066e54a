#![no_main]

use libfuzzer_sys::fuzz_target;
use searchlabel::hypotheses::{ConstrainedSpace, Family, LabeledExample, VersionSpace};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = serde_json::from_slice::<Vec<LabeledExample>>(data) else { return };
    for family in [Family::Thresholds, Family::Intervals { k: 2 }] {
        let v = VersionSpace::Constrained(ConstrainedSpace::new(family, &s));
        if v.is_empty() {
            continue;
        }
        let region = v.dis_region().unwrap();
        assert!(region.iter().all(|&(a, b)| 0.0 <= a && a < b && b <= 1.0));
        for e in &s {
            assert_eq!(v.classify(e.x.get()).unwrap(), Some(e.y));
        }
    }
});
