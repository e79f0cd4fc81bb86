//! Gaver-Stehfest and Talbot inversion on transforms with known originals.

use fluctuation::laplace::{invert, ClosedForm, InversionConfig};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

fn main() -> fluctuation::Result<()> {
    // 1/(s+1) <-> e^{-t}. Stehfest weights grow fast, so beyond a handful of
    // terms the transform itself has to be evaluated in exact arithmetic.
    let f = ClosedForm::new(1, |s| 1.0 / (s[0] + 1.0))
        .with_exact(|s| BigRational::one() / (&s[0] + BigRational::from_integer(BigInt::from(1))))
        .with_complex(|s| Complex64::new(1.0, 0.0) / (s[0] + 1.0));
    let plain = ClosedForm::new(1, |s| 1.0 / (s[0] + 1.0));
    for m in [5, 7, 9, 12] {
        let v = invert(&plain, &[1.0], &InversionConfig::gaver_stehfest(m))?;
        println!("GS M={m} with a double-precision transform: err {:.1e}", (v - (-1.0f64).exp()).abs());
    }
    for t in [0.5f64, 1.0, 3.0] {
        let gs = invert(&f, &[t], &InversionConfig::gaver_stehfest(12))?;
        let tb = invert(&f, &[t], &InversionConfig::talbot(32))?;
        let exact = (-t).exp();
        println!("t = {t}: GS err {:.1e}, Talbot err {:.1e}", (gs - exact).abs(), (tb - exact).abs());
    }

    // 1/((s1+1)(s2+2)) <-> e^{-t1 - 2 t2}
    let f2 = ClosedForm::new(2, |s| 1.0 / ((s[0] + 1.0) * (s[1] + 2.0)))
        .with_complex(|s| Complex64::new(1.0, 0.0) / ((s[0] + 1.0) * (s[1] + 2.0)));
    let (t1, t2) = (0.7f64, 0.4);
    let exact = (-t1 - 2.0 * t2).exp();
    let gs = invert(&f2, &[t1, t2], &InversionConfig::gaver_stehfest(5))?;
    let tb = invert(&f2, &[t1, t2], &InversionConfig::talbot(18))?;
    println!("2-D: GS err {:.1e}, Talbot err {:.1e}", (gs - exact).abs(), (tb - exact).abs());

    // More terms need more digits in the weights.
    let cfg = InversionConfig::gaver_stehfest(16).with_precision(60);
    println!("GS M=16 at 60 digits: err {:.1e}", (invert(&f, &[1.0], &cfg)? - (-1.0f64).exp()).abs());
    Ok(())
}
