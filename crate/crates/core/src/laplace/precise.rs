//! Contour constants at more than double precision, as rationals.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::weights::round_sig;
use crate::error::{Error, Result};

pub(crate) type CRational = Complex<BigRational>;

const RM: RoundingMode = RoundingMode::ToEven;

fn bits(digits: u32) -> usize {
    (digits as usize * 10 / 3 + 128).div_ceil(64) * 64
}

pub(crate) fn to_rational(x: &BigFloat) -> Result<BigRational> {
    if x.is_zero() {
        return Ok(BigRational::zero());
    }
    let (words, _, sign, exp, _) =
        x.as_raw_parts().ok_or_else(|| Error::Inversion("non-finite contour constant".into()))?;
    let mant = BigUint::from_slice(
        &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<u32>>(),
    );
    // value = 0.mantissa * 2^exp with the mantissa filling all words
    let shift = exp as i64 - 64 * words.len() as i64;
    let mut r = BigRational::from_integer(BigInt::from(mant));
    let two = BigRational::from_integer(BigInt::from(2u32));
    let pow = num_traits::pow(two, shift.unsigned_abs() as usize);
    r = if shift >= 0 { r * pow } else { r / pow };
    Ok(if sign == Sign::Neg { -r } else { r })
}

/// `(delta_k, gamma_k)` for the fixed Talbot contour, each component
/// rounded to `digits` significant digits.
pub(crate) fn talbot_nodes_rational(m: usize, digits: u32) -> Result<Vec<(CRational, CRational)>> {
    let p = bits(digits);
    let mut cc = Consts::new().map_err(|e| Error::Inversion(format!("constant cache: {e:?}")))?;
    let pi = cc.pi(p, RM);
    let num = |k: i64| BigFloat::from_i64(k, p);
    let round = |x: &BigFloat| -> Result<BigRational> { Ok(round_sig(&to_rational(x)?, digits)) };
    let mut out = Vec::with_capacity(m);
    let d0 = num(2 * m as i64).div(&num(5), p, RM);
    let g0 = d0.exp(p, RM, &mut cc).div(&num(2), p, RM);
    out.push((
        Complex::new(round(&d0)?, BigRational::zero()),
        Complex::new(round(&g0)?, BigRational::zero()),
    ));
    for k in 1..m {
        let theta = pi.mul(&num(k as i64), p, RM).div(&num(m as i64), p, RM);
        let cot = theta.cos(p, RM, &mut cc).div(&theta.sin(p, RM, &mut cc), p, RM);
        let im = pi.mul(&num(2 * k as i64), p, RM).div(&num(5), p, RM);
        let re = im.mul(&cot, p, RM);
        let mag = re.exp(p, RM, &mut cc);
        let (ec, es) = (mag.mul(&im.cos(p, RM, &mut cc), p, RM), mag.mul(&im.sin(p, RM, &mut cc), p, RM));
        // (1 + i w) e^{delta}, w = theta (1 + cot^2) - cot
        let one = BigFloat::from_i64(1, p);
        let w = theta.mul(&one.add(&cot.mul(&cot, p, RM), p, RM), p, RM).sub(&cot, p, RM);
        let g_re = ec.sub(&w.mul(&es, p, RM), p, RM);
        let g_im = es.add(&w.mul(&ec, p, RM), p, RM);
        out.push((Complex::new(round(&re)?, round(&im)?), Complex::new(round(&g_re)?, round(&g_im)?)));
    }
    Ok(out)
}

/// `round(x * 10^scale)` as an integer, half away from zero.
pub(crate) fn fixed_point(x: &BigRational, scale: u32) -> BigInt {
    let s = BigRational::from_integer(num_traits::pow(BigInt::from(10u32), scale as usize));
    let y = x * s;
    let half = BigRational::new(BigInt::one(), BigInt::from(2u32));
    if y >= BigRational::zero() {
        (y + half).floor().to_integer()
    } else {
        -((-y + half).floor().to_integer())
    }
}

pub(crate) fn from_fixed_point(x: BigInt, scale: u32) -> BigRational {
    BigRational::new(x, num_traits::pow(BigInt::from(10u32), scale as usize))
}
