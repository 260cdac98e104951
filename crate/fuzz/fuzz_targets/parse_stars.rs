//! Star-file JSON as accepted by `majorana reconstruct`.

#![no_main]

use libfuzzer_sys::fuzz_target;
use majorana::io::{parse_stars, stars_json};
use majorana::stellar::state_from_stars;

fuzz_target!(|data: &[u8]| {
    if data.len() > 16 * 1024 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(star_set) = parse_stars(text) else {
        return;
    };
    // serialization must be stable under a parse round trip
    let again = parse_stars(&stars_json(&star_set)).expect("own output parses");
    assert_eq!(again, star_set);
    if let Ok(state) = state_from_stars(&star_set) {
        assert_eq!(state.amplitudes().len(), star_set.points().len() + 1);
    }
});
