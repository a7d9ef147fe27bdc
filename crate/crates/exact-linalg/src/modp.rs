//! Rank modulo a fixed 62-bit prime.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::matrix::SparseMatrix;
use crate::rational::Rational;

/// Largest prime below 2^62.
pub const PRIME: u64 = 4_611_686_018_427_387_847;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    acc
}

fn inv(a: u64) -> u64 {
    powm(a, PRIME - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = ((n % &p) + &p) % &p;
    r.to_u64().expect("residue fits")
}

/// Image of `x` in `F_p`, `None` when the denominator vanishes mod p.
pub fn residue(x: &Rational) -> Option<u64> {
    let (n, d) = match x.as_small() {
        Some((n, d)) => (
            (n as i128).rem_euclid(PRIME as i128) as u64,
            (d as i128).rem_euclid(PRIME as i128) as u64,
        ),
        None => (reduce_int(&x.numer()), reduce_int(&x.denom())),
    };
    if d == 0 {
        None
    } else {
        Some(mulm(n, inv(d)))
    }
}

/// Rank of `m` reduced mod p, a lower bound for the rational rank.
/// `None` if some denominator is divisible by p.
pub fn rank_mod_p(m: &SparseMatrix) -> Option<usize> {
    let mut rows: Vec<Vec<(usize, u64)>> = Vec::with_capacity(m.rows());
    for r in m.row_vectors() {
        let mut row = Vec::with_capacity(r.len());
        for (c, x) in r {
            let v = residue(&x)?;
            if v != 0 {
                row.push((c, v));
            }
        }
        rows.push(row);
    }
    rows.sort_by_key(|r| r.len());
    let mut pivots: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut lead: HashMap<usize, usize> = HashMap::new();
    for mut r in rows {
        let mut from = 0;
        loop {
            let hit = r.iter().skip(from).position(|(c, _)| lead.contains_key(c)).map(|k| k + from);
            let Some(k) = hit else { break };
            let (c, x) = r[k];
            // pivot rows are monic
            let p = &pivots[lead[&c]];
            let mut out = Vec::with_capacity(r.len() + p.len());
            let (mut i, mut j) = (0, 0);
            while i < r.len() || j < p.len() {
                if j >= p.len() || (i < r.len() && r[i].0 < p[j].0) {
                    out.push(r[i]);
                    i += 1;
                } else if i >= r.len() || p[j].0 < r[i].0 {
                    out.push((p[j].0, PRIME - mulm(x, p[j].1)));
                    j += 1;
                } else {
                    let v = (r[i].1 + PRIME - mulm(x, p[j].1)) % PRIME;
                    if v != 0 {
                        out.push((r[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            r = out;
            from = r.partition_point(|e| e.0 < c);
        }
        if let Some(&(c, x)) = r.first() {
            let s = inv(x);
            let monic = r.into_iter().map(|(cc, v)| (cc, mulm(v, s))).collect();
            lead.insert(c, pivots.len());
            pivots.push(monic);
        }
    }
    Some(pivots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_is_prime() {
        // deterministic Miller-Rabin bases valid for all 64-bit integers
        let n = PRIME;
        let mut d = n - 1;
        let mut s = 0;
        while d % 2 == 0 {
            d /= 2;
            s += 1;
        }
        for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            let mut x = powm(a, d);
            if x == 1 || x == n - 1 {
                continue;
            }
            let mut witness = true;
            for _ in 1..s {
                x = mulm(x, x);
                if x == n - 1 {
                    witness = false;
                    break;
                }
            }
            assert!(!witness, "composite");
        }
        assert!(n < 1 << 62 && n > 1 << 61);
    }
}
