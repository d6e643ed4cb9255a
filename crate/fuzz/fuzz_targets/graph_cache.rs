#![no_main]

use gmt::graph::cache::GraphCache;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = GraphCache::decode(data) {
        let bytes = c.encode();
        let again = GraphCache::decode(&bytes).expect("encoded cache decodes");
        assert_eq!(again.encode(), bytes);
    }
});
