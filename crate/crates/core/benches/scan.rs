// Placeholder; filled in once the scan API lands.
fn main() {}
