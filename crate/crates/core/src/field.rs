//! Arithmetic and elimination over small prime fields GF(q).

pub fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `>= from`.
pub fn next_prime(from: u64) -> u64 {
    let mut q = from.max(2);
    while !is_prime(q) {
        q += 1;
    }
    q
}

pub fn inv_mod(a: u64, q: u64) -> u64 {
    assert!(!a.is_multiple_of(q), "zero has no inverse");
    pow_mod(a % q, q - 2, q)
}

fn pow_mod(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// Rank of a dense matrix over GF(q). The matrix is consumed in row-echelon form.
pub fn rank(rows: &mut [Vec<u64>], q: u64) -> usize {
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..height).find(|&r| !rows[r][col].is_multiple_of(q)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], q);
        for v in rows[rank].iter_mut() {
            *v = *v * inv % q;
        }
        for r in 0..height {
            if r == rank || rows[r][col] == 0 {
                continue;
            }
            let factor = rows[r][col];
            for c in col..width {
                let sub = factor * rows[rank][c] % q;
                rows[r][c] = (rows[r][c] + q - sub) % q;
            }
        }
        rank += 1;
        if rank == height {
            break;
        }
    }
    rank
}

/// Rank of the submatrix formed by the selected columns of `generator`.
pub fn column_rank(generator: &[Vec<u64>], cols: &[usize], q: u64) -> usize {
    let mut m: Vec<Vec<u64>> = generator
        .iter()
        .map(|row| cols.iter().map(|&c| row[c] % q).collect())
        .collect();
    rank(&mut m, q)
}

/// Whether the unit vector `e_target` lies in the span of the selected columns.
pub fn spans_unit(generator: &[Vec<u64>], cols: &[usize], target: usize, q: u64) -> bool {
    let base = column_rank(generator, cols, q);
    let mut augmented: Vec<Vec<u64>> = generator
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v: Vec<u64> = cols.iter().map(|&c| row[c] % q).collect();
            v.push(u64::from(r == target));
            v
        })
        .collect();
    rank(&mut augmented, q) == base
}
