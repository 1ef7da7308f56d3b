/// Number of unlabeled rooted trees on `n` vertices, by the Euler-transform
/// recurrence `a(m+1) = (1/m) sum_{k=1..m} (sum_{d|k} d a(d)) a(m-k+1)`.
///
/// Independent of the enumerator; used to cross-check its output.
pub fn rooted_tree_count(n: usize) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut a = vec![0u128; n + 1];
    a[1] = 1;
    let mut divisor_sums = vec![0u128; n + 1];
    for m in 1..n {
        divisor_sums[m] = (1..=m).filter(|d| m % d == 0).map(|d| d as u128 * a[d]).sum();
        let total: u128 = (1..=m).map(|k| divisor_sums[k] * a[m - k + 1]).sum();
        a[m + 1] = total / m as u128;
    }
    a[n]
}
