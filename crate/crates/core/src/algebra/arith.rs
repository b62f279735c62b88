//! Integer utilities: exact square roots, square-freeness and factorization.
//!
//! Factorization runs trial division by the primes below 10^6 and hands any cofactor
//! left over to Pollard rho (Brent's variant) guarded by Miller–Rabin.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u32 = 1_000_000;

/// First 13 primes: a deterministic Miller–Rabin witness set below 3.3e24.
const MR_WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const MR_EXTRA: [u32; 8] = [43, 47, 53, 59, 61, 67, 71, 73];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i as u32))
            .collect()
    })
}

/// `Some(s)` with `s*s == n` when `n` is a perfect square.
pub fn integer_sqrt_exact(n: &BigInt) -> Result<Option<BigInt>> {
    if n.is_negative() {
        return Err(Error::NegativeInput(n.clone()));
    }
    let s = n.sqrt();
    Ok((&s * &s == *n).then_some(s))
}

/// Square root of a nonnegative perfect square, `None` otherwise (including negatives).
pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    integer_sqrt_exact(n).ok().flatten()
}

/// True iff no prime square divides `|n|`.
pub fn squarefree_integer(n: &BigInt) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(factorize(n).values().all(|&e| e == 1))
}

/// Prime factorization of `|n|` as prime -> exponent. Empty for `|n| <= 1`.
pub fn factorize(n: &BigInt) -> BTreeMap<BigUint, u32> {
    let mut out = BTreeMap::new();
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return out;
    }
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.insert(pb, e);
        }
    }
    if m.is_one() {
        return out;
    }
    let limit = BigUint::from(TRIAL_LIMIT);
    if m < &limit * &limit {
        *out.entry(m).or_insert(0) += 1;
        return out;
    }
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            *out.entry(c).or_insert(0) += 1;
            continue;
        }
        let r = c.sqrt();
        if &r * &r == c {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = pollard_brent(&c);
        stack.push(&c / &d);
        stack.push(d);
    }
    out
}

/// All positive divisors of `|n|`, ascending. `n` must be nonzero.
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut divs = vec![BigUint::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    divs.into_iter().map(|d| BigInt::from_biguint(Sign::Plus, d)).collect()
}

/// Positive and negative divisors of a nonzero integer.
pub fn signed_divisors(n: &BigInt) -> Vec<BigInt> {
    let pos = divisors(n);
    let mut out: Vec<BigInt> = pos.iter().map(|d| -d).collect();
    out.reverse();
    out.extend(pos);
    out
}

/// Miller–Rabin; deterministic below 3.3e24, extra bases beyond that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &MR_WITNESSES {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    let bases = MR_WITNESSES.iter().chain(
        // 3.317e24 bound of the 13-prime witness set
        (n.bits() > 81).then_some(MR_EXTRA.iter()).into_iter().flatten(),
    );
    'witness: for &a in bases {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Nontrivial factor of an odd composite `n` that is not a perfect square.
fn pollard_brent(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

/// Narrow a `BigInt` to `i128` if it fits.
pub fn to_i128(n: &BigInt) -> Option<i128> {
    n.to_i128()
}
