//! Integer partitions in the two canonical orders used by the cobordism
//! basis (reverse-lexicographic, largest part first) and by Chern-number
//! columns (its reverse, so dimension-3 columns read `c1^3, c1c2, c3`).

/// A partition stored with weakly decreasing parts.
pub type Partition = Vec<u32>;

/// All partitions of `n` in reverse-lexicographic order: `(n)` first,
/// `(1, ..., 1)` last. `partitions_of(0)` is `[()]`, the empty partition.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(n, n, &mut current, &mut out);
    out
}

fn rec(left: u32, max: u32, current: &mut Partition, out: &mut Vec<Partition>) {
    if left == 0 {
        out.push(current.clone());
        return;
    }
    for part in (1..=left.min(max)).rev() {
        current.push(part);
        rec(left - part, part, current, out);
        current.pop();
    }
}

/// Partitions of `n` in the Chern-number column order: length descending,
/// then lexicographic. For `n = 3` this is `(1,1,1), (2,1), (3)`.
pub fn chern_order(n: u32) -> Vec<Partition> {
    let mut v = partitions_of(n);
    v.reverse();
    v
}

/// Number of partitions of `n`.
pub fn count(n: u32) -> usize {
    partitions_of(n).len()
}

/// Renders as `(3,1,1)`; the empty partition is `()`.
pub fn render(p: &Partition) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
