//! State-file JSON as accepted by `majorana stars`. Parsed states must map
//! to exactly 2j stars and reconstruct to a unit vector.

#![no_main]

use libfuzzer_sys::fuzz_target;
use majorana::io::parse_state;
use majorana::stellar::{state_from_stars, stars};
use majorana::Error;

const MAX_INPUT_SIZE: usize = 16 * 1024;
const MAX_TWO_J: i32 = 64;

fuzz_target!(|data: &[u8]| {
    if data.len() > MAX_INPUT_SIZE {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    for normalize in [false, true] {
        let Ok(state) = parse_state(text, normalize) else {
            continue;
        };
        assert!((state.norm() - 1.0).abs() < 1e-9);
        if state.two_j().doubled() > MAX_TWO_J {
            continue;
        }
        match stars(&state) {
            Ok(star_set) => {
                assert_eq!(star_set.points().len(), state.two_j().doubled() as usize);
                let back = state_from_stars(&star_set).expect("valid star set reconstructs");
                assert!((back.norm() - 1.0).abs() < 1e-9);
            }
            Err(Error::NonConvergence { .. }) => {}
            Err(e) => panic!("unexpected error for a valid state: {e}"),
        }
    }
});
