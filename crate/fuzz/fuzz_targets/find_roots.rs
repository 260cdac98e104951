//! Raw coefficient vectors, 16 bytes per complex coefficient, highest degree
//! first.

#![no_main]

use libfuzzer_sys::fuzz_target;
use majorana::roots::find_roots;
use num_complex::Complex64;

fuzz_target!(|data: &[u8]| {
    let coeffs: Vec<Complex64> = data
        .chunks_exact(16)
        .take(48)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    if coeffs.len() < 2 {
        return;
    }
    if let Ok(roots) = find_roots(&coeffs) {
        assert_eq!(roots.finite.len() + roots.at_infinity, coeffs.len() - 1);
    }
});
