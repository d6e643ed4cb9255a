#![no_main]

use gmt::simulator::CampaignFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = CampaignFile::from_json(text) {
        let again = CampaignFile::from_json(&c.to_json()).expect("written campaign re-parses");
        assert_eq!(again, c);
    }
});
