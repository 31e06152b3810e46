//! Helpers shared by integration tests.

/// `χ^λ(μ)` by removing rim hooks of size `μ_1`, `μ_2`, … on beta-numbers.
pub fn mn_character(lam: &[usize], mu: &[usize]) -> i64 {
    if mu.is_empty() {
        return if lam.iter().all(|&p| p == 0) { 1 } else { 0 };
    }
    let l = lam.len();
    let beta: Vec<i64> = lam.iter().enumerate().map(|(i, &p)| (p + l - 1 - i) as i64).collect();
    let r = mu[0] as i64;
    let mut total = 0;
    for (i, &b) in beta.iter().enumerate() {
        let nb = b - r;
        if nb < 0 || beta.contains(&nb) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > nb && x < b).count();
        let mut next = beta.clone();
        next[i] = nb;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let parts: Vec<usize> = next.iter().enumerate().map(|(j, &x)| (x - (l - 1 - j) as i64) as usize).collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_character(&parts, &mu[1..]);
    }
    total
}
