#![no_main]

use libfuzzer_sys::fuzz_target;
use ncause_core::lang::{parse, pretty};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sf) = parse(text) {
        let printed = pretty(&sf);
        let again = parse(&printed).expect("pretty output parses");
        assert_eq!(again, sf);
        assert_eq!(pretty(&again), printed);
    }
});
