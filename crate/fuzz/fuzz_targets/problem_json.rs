#![no_main]

use gmt::problem::ProblemFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = ProblemFile::from_json(text) {
        let again = ProblemFile::from_json(&p.to_json()).expect("written problem re-parses");
        assert_eq!(again, p);
        assert_eq!(again.hash(), p.hash());
    }
});
