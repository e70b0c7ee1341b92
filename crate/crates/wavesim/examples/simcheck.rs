fn main() {
    for c in qgal_wavesim::checks::verify_suite() {
        println!("[{}] {}: {}", if c.passed { "pass" } else { "FAIL" }, c.key, c.detail);
    }
}
