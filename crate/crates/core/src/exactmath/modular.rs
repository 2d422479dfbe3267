//! Arithmetic modulo a word-sized prime, used only to pick candidate row
//! subsets whose choice is re-validated exactly.

pub const PRIME: u64 = (1 << 61) - 1;

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse via Fermat; `p` must be prime.
pub fn inverse(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow(a, p - 2, p))
}

/// Indices of a maximal set of rows that are independent modulo `p`, taken
/// greedily in order. Rows are sparse `(column, residue)` lists.
pub fn independent_rows(rows: &[Vec<(usize, u64)>], cols: usize, p: u64) -> Vec<usize> {
    // reduced basis rows, each normalized to a leading 1 at `lead`
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut kept = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut dense = vec![0u64; cols];
        for &(j, v) in row {
            dense[j] = v % p;
        }
        for (lead, b) in &basis {
            let f = dense[*lead];
            if f == 0 {
                continue;
            }
            for (x, y) in dense.iter_mut().zip(b) {
                if *y != 0 {
                    *x = (*x + p - mul(f, *y, p)) % p;
                }
            }
        }
        if let Some(lead) = dense.iter().position(|&v| v != 0) {
            let inv = inverse(dense[lead], p).expect("nonzero residue");
            for x in dense.iter_mut() {
                *x = mul(*x, inv, p);
            }
            basis.push((lead, dense));
            kept.push(i);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        for a in [1u64, 2, 3, 12345, PRIME - 1] {
            assert_eq!(mul(a, inverse(a, PRIME).unwrap(), PRIME), 1);
        }
        assert_eq!(inverse(0, PRIME), None);
    }

    #[test]
    fn drops_dependent_rows() {
        let rows = vec![
            vec![(0, 1), (1, 1)],
            vec![(1, 1), (2, 1)],
            vec![(0, 1), (2, PRIME - 1)],
            vec![(2, 5)],
        ];
        assert_eq!(independent_rows(&rows, 3, PRIME), vec![0, 1, 3]);
    }
}
