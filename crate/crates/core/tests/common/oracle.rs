//! Exact small-n spectral radius oracle.
//!
//! Works only with rational arithmetic: the characteristic polynomial comes
//! from Faddeev–LeVerrier over `BigRational`, its square-free part feeds a
//! Sturm chain, and the Perron root is isolated as the largest real root
//! inside the row-sum bracket by bisection on dyadic rationals. Nothing here
//! touches the library's power iteration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

type Poly = Vec<BigRational>;

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite entry")
}

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &Poly) -> usize {
    p.len().saturating_sub(1)
}

fn is_zero_poly(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Coefficients of det(xI - A), lowest degree first.
pub fn char_poly(rows: &[Vec<f64>]) -> Poly {
    let n = rows.len();
    let a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| rat(v)).collect())
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    // M_0 = 0; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k) / k
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for l in 0..n {
                    if !a[i][l].is_zero() && !m[l][j].is_zero() {
                        acc += &a[i][l] * &m[l][j];
                    }
                }
                if i == j {
                    acc += &coeffs[n - k + 1];
                }
                next[i][j] = acc;
            }
        }
        m = next;
        let mut tr = BigRational::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![BigRational::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

fn div_rem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = degree(&b);
    let lead = b[db].clone();
    if is_zero_poly(&r) || degree(&r) < db {
        return (vec![BigRational::zero()], r);
    }
    let mut q = vec![BigRational::zero(); degree(&r) - db + 1];
    while !is_zero_poly(&r) && degree(&r) >= db {
        let dr = degree(&r);
        let f = &r[dr] / &lead;
        for (k, bc) in b.iter().enumerate() {
            r[dr - db + k] -= &f * bc;
        }
        q[dr - db] = f;
        r[dr] = BigRational::zero();
        r = trim(r);
    }
    (q, r)
}

fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = trim(a.clone());
    let mut y = trim(b.clone());
    while !is_zero_poly(&y) {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    x
}

/// Positive multiple of `p` with coprime integer coefficients; signs and
/// roots are unchanged and the coefficients stay small.
fn primitive(p: &Poly) -> Poly {
    let p = trim(p.clone());
    if is_zero_poly(&p) {
        return p;
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter()
        .map(|c| BigRational::from_integer(c / &content))
        .collect()
}

/// Sign of `p(x)` in integer arithmetic. With x = a/b, b > 0, this is the
/// sign of b^d p(x) = Σ c_k a^k b^(d-k). Requires integer coefficients.
fn sign_at(p: &Poly, x: &BigRational) -> i8 {
    let (a, b) = (x.numer(), x.denom());
    let d = degree(p);
    let mut acc = BigInt::zero();
    let mut bpow = BigInt::one();
    let mut pows = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        pows.push(bpow.clone());
        bpow *= b;
    }
    for (k, c) in p.iter().enumerate().rev() {
        acc = acc * a + c.to_integer() * &pows[d - k];
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let p = primitive(p);
    let mut chain = vec![p.clone(), primitive(&derivative(&p))];
    loop {
        let k = chain.len();
        if is_zero_poly(&chain[k - 1]) {
            chain.pop();
            break;
        }
        if degree(&chain[k - 1]) == 0 {
            break;
        }
        let (_, r) = div_rem(&chain[k - 2], &chain[k - 1]);
        let neg: Poly = r.into_iter().map(|c| -c).collect();
        chain.push(primitive(&neg));
    }
    chain
}

fn variations(chain: &[Poly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut prev: Option<bool> = None;
    for p in chain {
        let v = sign_at(p, x);
        if v == 0 {
            continue;
        }
        let pos = v > 0;
        if let Some(s) = prev {
            if s != pos {
                count += 1;
            }
        }
        prev = Some(pos);
    }
    count
}

/// Largest real root of det(xI - A) inside [min_i r_i - 1, max_i r_i + 1].
///
/// For a nonnegative matrix this is the spectral radius.
pub fn perron_root(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    assert!(n >= 1);
    if n == 1 {
        return rows[0][0];
    }
    let p = char_poly(rows);
    let g = gcd(&p, &trim(derivative(&p)));
    let (square_free, rem) = div_rem(&p, &g);
    assert!(is_zero_poly(&rem));
    let square_free = primitive(&square_free);
    let chain = sturm_chain(&square_free);

    let sums: Vec<f64> = rows.iter().map(|r| r.iter().sum()).collect();
    let rmin = sums.iter().cloned().fold(f64::INFINITY, f64::min);
    let rmax = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut lo = rat(rmin) - BigRational::one();
    let top = rat(rmax) + BigRational::one();
    let mut hi = top.clone();
    let v_top = variations(&chain, &top);
    let tol = rat(1e-14 * rmax.abs().max(1.0));
    let two = BigRational::from_integer(BigInt::from(2));
    // invariant: the largest root lies in (lo, hi]
    while &hi - &lo > tol {
        let mid = (&lo + &hi) / &two;
        let above = variations(&chain, &mid) - v_top;
        if above >= 1 {
            lo = mid;
        } else {
            if sign_at(&square_free, &mid) == 0 {
                return mid.to_f64().unwrap();
            }
            hi = mid;
        }
    }
    ((&lo + &hi) / &two).to_f64().unwrap()
}
