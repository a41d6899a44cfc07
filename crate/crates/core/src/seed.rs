/// Derives an independent seed from `master` and a path of stream tags
/// (splitmix64 mixing), so every randomized sub-step is reproducible no
/// matter in which order the steps execute.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix(master);
    for &t in tags {
        state = splitmix(state ^ splitmix(t.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    state
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
