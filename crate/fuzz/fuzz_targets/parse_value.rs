#![no_main]

use libfuzzer_sys::fuzz_target;
use ncause_core::ValueDomain;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (cases, query) = text.split_once('\n').unwrap_or((text, ""));
    let names: Vec<&str> = cases.split(',').map(str::trim).collect();
    let Ok(domain) = ValueDomain::declare("Fuzz", names.iter().map(|n| (*n, Default::default())))
    else {
        return;
    };
    if let Ok(v) = domain.parse_value(query) {
        assert_eq!(domain.parse_value(&domain.show(v)).unwrap(), v);
    }
    let _ = ValueDomain::boolean().parse_value(query);
});
