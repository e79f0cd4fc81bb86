use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), e as usize)
}

fn decimal_digits(x: &BigInt) -> i64 {
    x.abs().to_string().len() as i64
}

/// Round to `digits` significant decimal digits, half away from zero.
pub fn round_sig(x: &BigRational, digits: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let a = x.abs();
    // 10^e <= a < 10^(e+1)
    let mut e = decimal_digits(a.numer()) - decimal_digits(a.denom());
    let ten = BigRational::from_integer(BigInt::from(10u32));
    let p10 = |k: i64| {
        if k >= 0 {
            BigRational::from_integer(pow10(k as u32))
        } else {
            BigRational::new(BigInt::one(), pow10((-k) as u32))
        }
    };
    while p10(e) > a {
        e -= 1;
    }
    while p10(e) * &ten <= a {
        e += 1;
    }
    let shift = digits as i64 - 1 - e;
    let scaled = &a * p10(shift);
    let half = BigRational::new(BigInt::one(), BigInt::from(2u32));
    let rounded = BigRational::from_integer((scaled + half).floor().to_integer());
    let out = rounded / p10(shift);
    if x.is_negative() {
        -out
    } else {
        out
    }
}

/// `ln 2` rounded to `digits` significant digits, from `Sum 1/(k 2^k)` in
/// fixed point with guard digits.
pub fn ln2_rational(digits: u32) -> BigRational {
    let scale = pow10(digits + 10);
    let mut sum = BigInt::zero();
    let mut two_k = BigInt::from(2u32);
    let mut k = 1u64;
    loop {
        let term = &scale / (&two_k * k);
        if term.is_zero() {
            break;
        }
        sum += term;
        two_k *= 2u32;
        k += 1;
    }
    round_sig(&BigRational::new(sum, scale), digits)
}

/// Plain Gaver weights `M C(2M,M) (-1)^k C(M,k)`, `k = 0..=M`, paired with
/// nodes `(M + k) ln2 / t` and the overall factor `ln2 / t`.
pub fn gs_weights(m: usize, precision: u32) -> Vec<BigRational> {
    let m = m as u64;
    let lead = binomial(2 * m, m) * m;
    (0..=m)
        .map(|k| {
            let w = &lead * binomial(m, k);
            let w = if k.is_odd() { -w } else { w };
            round_sig(&BigRational::from_integer(w), precision)
        })
        .collect()
}

/// Stehfest weights `V_k`, `k = 1..=2M`, paired with nodes `k ln2 / t`.
/// These are the Salzer-accelerated combination of the first `M` Gaver
/// functionals, written out per node.
pub fn stehfest_weights(m: usize, precision: u32) -> Vec<BigRational> {
    let half = m as u64;
    (1..=2 * half)
        .map(|k| {
            let mut acc = BigRational::zero();
            for j in k.div_ceil(2)..=k.min(half) {
                let num = num_traits::pow(BigInt::from(j), half as usize) * factorial(2 * j);
                let den = factorial(half - j) * factorial(j) * factorial(j - 1) * factorial(k - j) * factorial(2 * j - k);
                acc += BigRational::new(num, den);
            }
            if (k + half).is_odd() {
                acc = -acc;
            }
            round_sig(&acc, precision)
        })
        .collect()
}
