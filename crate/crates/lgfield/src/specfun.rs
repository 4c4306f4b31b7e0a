//! Complex error-function family: `erf`, `erfc`, `erfcx` and the Faddeeva
//! function `w(z) = exp(-z^2) erfc(-iz)`, plus the real helpers (`dawson`,
//! `erfi`, scaled complement) they are built from.
//!
//! The Faddeeva function is the workhorse: every other member of the family
//! is obtained from it through exact identities, so accuracy is certified in
//! one place. `w` is computed with the usual region split:
//!
//! * near the real or imaginary axis, dedicated real-valued routines
//!   (`exp(-x^2)` + Dawson integral, scaled complement) avoid cancellation;
//! * moderate `|z|` uses the expansion of `w` over a lattice of Gaussians
//!   (spacing `a = pi / sqrt(-ln(eps/2))`), whose terms decay like
//!   `exp(-a^2 n^2)`;
//! * large `|z|` uses the Laplace continued fraction with a depth estimate
//!   fitted to the target precision, falling back to one- and two-term
//!   asymptotics when `|z|` is huge.
//!
//! Relative accuracy is ~1e-13 or better over the tested domain `|z| <= 30`
//! (see `tests/specfun_oracle.rs`, which checks against a 600-bit
//! fixed-point series oracle). Values are always finite on success paths;
//! `erf`/`erfc` report [`SpecFunError::OverflowDomain`] where the true value
//! exceeds the double range (e.g. `erf(30i)`), directing callers to the
//! scaled forms.

use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

/// Failure modes of the error-function family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SpecFunError {
    /// The requested value (or a required intermediate) exceeds the double
    /// range. Callers should switch to `erfcx`/`faddeeva`, which stay finite.
    #[error("value outside double range; use the scaled forms erfcx/faddeeva")]
    OverflowDomain,
}

/// 1/sqrt(pi).
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_3;
/// sqrt(pi)/2.
const SQRT_PI_OVER_2: f64 = 0.886_226_925_452_758_1;
/// 2/sqrt(pi).
const TWO_OVER_SQRT_PI: f64 = 1.128_379_167_095_512_6;

// Lattice spacing a = pi/sqrt(-ln(eps/2)) for the Gaussian-lattice expansion,
// with c = (2/pi) a and a^2 precomputed.
const LATTICE_A: f64 = 0.518_321_480_430_085_9;
const LATTICE_C: f64 = 0.329_973_702_884_629_07;
const LATTICE_A2: f64 = 0.268_657_157_075_235_94;

fn expa2n2(n: usize) -> f64 {
    static TABLE: OnceLock<[f64; 64]> = OnceLock::new();
    let t = TABLE.get_or_init(|| {
        let mut t = [0.0; 64];
        for (i, slot) in t.iter_mut().enumerate() {
            let n = (i + 1) as f64;
            *slot = (-LATTICE_A2 * n * n).exp();
        }
        t
    });
    if n == 0 || n > 64 {
        0.0
    } else {
        t[n - 1]
    }
}

#[inline]
fn sinc(x: f64, sinx: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - (0.1666666666666666667) * x * x
    } else {
        sinx / x
    }
}

#[inline]
fn sinh_taylor(x: f64) -> f64 {
    x * (1.0 + (x * x) * (0.1666666666666666667 + 0.00833333333333333333 * (x * x)))
}

/// Dawson integral `D(x) = exp(-x^2) * int_0^x exp(t^2) dt`.
///
/// Small `|x|` sums the (all-positive) erfi series and multiplies by
/// `exp(-x^2)`; large `|x|` uses the asymptotic series at its optimal
/// truncation, whose remainder is below double rounding for `|x| >= 6`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 6.0 {
        SQRT_PI_OVER_2 * (-x * x).exp() * erfi_series(x)
    } else {
        // D(x) ~ 1/(2x) (1 + 1/(2x^2) + 3/(2x^2)^2 * ... ), term ratio (2m-1)/(2x^2)
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0 / (2.0 * x);
        let mut sum = term;
        for m in 1..60 {
            let next = term * (2.0 * m as f64 - 1.0) * inv2x2;
            if next.abs() >= term.abs() || next.abs() < f64::EPSILON * sum.abs() {
                break;
            }
            sum += next;
            term = next;
        }
        sum
    }
}

/// Imaginary part of `w` on the real axis: `Im w(x) = 2 D(x)/sqrt(pi)`.
pub fn w_im(x: f64) -> f64 {
    TWO_OVER_SQRT_PI * dawson(x)
}

// Maclaurin sum for erfi(x)/(2/sqrt(pi)) restored to erfi: all terms are
// positive, so there is no cancellation; the only loss is the final product
// with exp(-x^2) in dawson(). Converges for any x, practical for |x| <~ 6.
fn erfi_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x; // x^(2n+1)/n!
    let mut sum = x;
    for n in 1..200 {
        power *= x2 / n as f64;
        let term = power / (2.0 * n as f64 + 1.0);
        sum += term;
        if term.abs() < f64::EPSILON * sum.abs() {
            break;
        }
    }
    TWO_OVER_SQRT_PI * sum
}

/// Imaginary error function `erfi(x) = -i erf(ix)` for real `x`.
///
/// Overflows to infinity beyond `|x| ~ 26.6` where the true value does.
pub fn erfi(x: f64) -> f64 {
    if x.abs() < 6.0 {
        erfi_series(x)
    } else {
        (x * x).exp() * w_im(x)
    }
}

// erf on the real axis. Series below |x| = 2, scaled complement above.
pub fn erf_real(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 2.0 {
        let x2 = x * x;
        let mut power = x;
        let mut sum = x;
        let mut sign = 1.0;
        for n in 1..60 {
            power *= x2 / n as f64;
            sign = -sign;
            let term = sign * power / (2.0 * n as f64 + 1.0);
            sum += term;
            if term.abs() < f64::EPSILON * sum.abs() {
                break;
            }
        }
        TWO_OVER_SQRT_PI * sum
    } else if ax > 6.0 {
        1f64.copysign(x)
    } else {
        (1.0 - (-ax * ax).exp() * erfcx_real(ax)).copysign(x)
    }
}

pub fn erfc_real(x: f64) -> f64 {
    if x < -6.0 {
        2.0
    } else if x < 0.0 {
        2.0 - erfc_real(-x)
    } else if x < 2.0 {
        1.0 - erf_real(x)
    } else {
        (-x * x).exp() * erfcx_real(x)
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)` on the real axis.
///
/// For `x >= 2` the Laplace continued fraction is evaluated by the modified
/// Lentz recurrence; below that the direct product has no cancellation worth
/// scaling away. Negative arguments use the reflection
/// `erfcx(-x) = 2 exp(x^2) - erfcx(x)` and may overflow to infinity where the
/// true value does (`x < -26.6`).
pub fn erfcx_real(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 * (x * x).exp() - erfcx_real(-x);
    }
    if x < 2.0 {
        return (x * x).exp() * (1.0 - erf_real(x));
    }
    // erfcx(x) = (1/sqrt(pi)) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..300 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d == 0.0 {
            d = tiny;
        }
        c = x + a / c;
        if c == 0.0 {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    INV_SQRT_PI / f
}

/// Faddeeva function `w(z) = exp(-z^2) erfc(-iz)`.
///
/// Total on finite inputs. In the upper half-plane `|w| <= 1` and the result
/// is accurate to ~1e-13 relative; the lower half-plane is reached through
/// `w(z) = 2 exp(-z^2) - w(-z)` and inherits the (possibly huge, eventually
/// infinite) growth of the true value there.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.re == 0.0 {
        // w(iy) = erfcx(y); keep the signed zero of the real part.
        return Complex64::new(erfcx_real(z.im), z.re);
    }
    if z.im == 0.0 {
        return Complex64::new((-z.re * z.re).exp(), w_im(z.re));
    }
    let x = z.re.abs();
    let ya = z.im.abs();
    if ya > 7.0 || (x > 6.0 && (ya > 0.1 || (x > 8.0 && ya > 1e-10) || x > 28.0)) {
        w_continued_fraction(z, x, ya)
    } else {
        w_lattice_sums(z, x, z.im)
    }
}

// Laplace continued fraction / asymptotics for large |z|. Computes in the
// upper half-plane and reflects for Im z < 0.
fn w_continued_fraction(z: Complex64, x: f64, ya: f64) -> Complex64 {
    // Work on -z when Im z < 0 so the CF sees the upper half-plane.
    let xs = if z.im < 0.0 { -z.re } else { z.re };
    let ret;
    if x + ya > 4000.0 {
        if x + ya > 1e7 {
            // w(z) ~ i/(sqrt(pi) z), scaled to avoid overflow
            if x > ya {
                let yax = ya / xs;
                let denom = INV_SQRT_PI / (xs + yax * ya);
                ret = Complex64::new(denom * yax, denom);
            } else if ya.is_infinite() {
                return if x.is_nan() || z.im < 0.0 {
                    Complex64::new(f64::NAN, f64::NAN)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            } else {
                let xya = xs / ya;
                let denom = INV_SQRT_PI / (xya * xs + ya);
                ret = Complex64::new(denom, denom * xya);
            }
        } else {
            // w(z) ~ i/sqrt(pi) * z/(z^2 - 1/2)
            let dr = xs * xs - ya * ya - 0.5;
            let di = 2.0 * xs * ya;
            let denom = INV_SQRT_PI / (dr * dr + di * di);
            ret = Complex64::new(denom * (xs * di - ya * dr), denom * (xs * dr + ya * di));
        }
    } else {
        // Depth estimate fitted for double precision.
        let nu = (3.9 + 11.398 / (0.08254 * x + 0.1421 * ya + 0.2023)).floor();
        let mut wr = xs;
        let mut wi = ya;
        let mut nu = 0.5 * (nu - 1.0);
        while nu > 0.4 {
            // w <- z - nu/w
            let denom = nu / (wr * wr + wi * wi);
            wr = xs - wr * denom;
            wi = ya + wi * denom;
            nu -= 0.5;
        }
        let denom = INV_SQRT_PI / (wr * wr + wi * wi);
        ret = Complex64::new(denom * wi, denom * wr);
    }
    if z.im < 0.0 {
        // w(z) = 2 exp(-z^2) - w(-z); exponent assembled to dodge overflow
        // in the separate squares.
        let e = Complex64::new((ya - xs) * (xs + ya), 2.0 * xs * z.im).exp();
        2.0 * e - ret
    } else {
        ret
    }
}

// Gaussian-lattice expansion for moderate |z| (|Im z| <= 7 here). The sums
// have no catastrophic cancellation; the leading exp(-x^2) erfcx(y) term
// carries the axis behaviour.
fn w_lattice_sums(z: Complex64, x: f64, y: f64) -> Complex64 {
    let relerr = f64::EPSILON;
    let a = LATTICE_A;
    let a2 = LATTICE_A2;
    let c = LATTICE_C;
    let mut sum1 = 0.0;
    let mut sum2 = 0.0;
    let mut sum3 = 0.0;
    let mut sum4 = 0.0;
    let mut sum5 = 0.0;
    let ret;
    if x < 10.0 {
        let mut prod2ax = 1.0;
        let mut prodm2ax = 1.0;
        let expx2;
        if x < 5e-4 {
            // exp(±2ax) by Taylor; sum5 - sum4 assembled from sinh directly.
            let x2 = x * x;
            expx2 = 1.0 - x2 * (1.0 - 0.5 * x2);
            let ax2 = 2.0 * a * x;
            let exp2ax = 1.0 + ax2 * (1.0 + ax2 * (0.5 + 0.1666666666666666667 * ax2));
            let expm2ax = 1.0 - ax2 * (1.0 - ax2 * (0.5 - 0.1666666666666666667 * ax2));
            let mut n = 1usize;
            loop {
                let nf = n as f64;
                let coef = expa2n2(n) * expx2 / (a2 * nf * nf + y * y);
                prod2ax *= exp2ax;
                prodm2ax *= expm2ax;
                sum1 += coef;
                sum2 += coef * prodm2ax;
                sum3 += coef * prod2ax;
                sum5 += coef * (2.0 * a * nf) * sinh_taylor(2.0 * a * nf * x);
                if coef * prod2ax < relerr * sum3 {
                    break;
                }
                n += 1;
            }
        } else {
            expx2 = (-x * x).exp();
            let exp2ax = (2.0 * a * x).exp();
            let expm2ax = 1.0 / exp2ax;
            let mut n = 1usize;
            loop {
                let nf = n as f64;
                let coef = expa2n2(n) * expx2 / (a2 * nf * nf + y * y);
                prod2ax *= exp2ax;
                prodm2ax *= expm2ax;
                sum1 += coef;
                sum2 += coef * prodm2ax;
                sum4 += coef * prodm2ax * (a * nf);
                sum3 += coef * prod2ax;
                sum5 += coef * prod2ax * (a * nf);
                if coef * prod2ax * (a * nf) < relerr * sum5 {
                    break;
                }
                n += 1;
            }
        }
        // Avoid spurious overflow for large negative y.
        let expx2erfcxy = if y > -6.0 {
            expx2 * erfcx_real(y)
        } else {
            2.0 * (y * y - x * x).exp()
        };
        if y > 5.0 {
            // imaginary trig terms cancel below rounding
            let sinxy = (x * y).sin();
            ret = Complex64::new(
                (expx2erfcxy - c * y * sum1) * (2.0 * x * y).cos()
                    + (c * x * expx2) * sinxy * sinc(x * y, sinxy),
                0.0,
            );
        } else {
            let xs = z.re;
            let sinxy = (xs * y).sin();
            let sin2xy = (2.0 * xs * y).sin();
            let cos2xy = (2.0 * xs * y).cos();
            let coef1 = expx2erfcxy - c * y * sum1;
            let coef2 = c * xs * expx2;
            ret = Complex64::new(
                coef1 * cos2xy + coef2 * sinxy * sinc(xs * y, sinxy),
                coef2 * sinc(2.0 * xs * y, sin2xy) - coef1 * sin2xy,
            );
        }
    } else {
        // x >= 10 with |y| < 1e-10: only the lattice terms near n0 = x/a
        // contribute; real part is exp(-x^2) alone.
        if x.is_nan() || y.is_nan() {
            return Complex64::new(f64::NAN, f64::NAN);
        }
        ret = Complex64::new((-x * x).exp(), 0.0);
        let n0 = (x / a + 0.5).floor();
        let dx = a * n0 - x;
        sum3 = (-dx * dx).exp() / (a2 * n0 * n0 + y * y);
        sum5 = a * n0 * sum3;
        let exp1 = (4.0 * a * dx).exp();
        let mut exp1dn = 1.0;
        let mut dn = 1usize;
        while (dn as f64) < n0 {
            let np = n0 + dn as f64;
            let nm = n0 - dn as f64;
            let mut tp = (-sq(a * dn as f64 + dx)).exp();
            exp1dn *= exp1;
            let mut tm = tp * exp1dn;
            tp /= a2 * np * np + y * y;
            tm /= a2 * nm * nm + y * y;
            sum3 += tp + tm;
            sum5 += a * (np * tp + nm * tm);
            if a * (np * tp + nm * tm) < relerr * sum5 {
                return finish_lattice(z, ret, c, y, sum1, sum2, sum3, sum4, sum5);
            }
            dn += 1;
        }
        loop {
            // only n0 + dn terms remain
            let np = n0 + dn as f64;
            let tp = (-sq(a * np - x)).exp() / (a2 * np * np + y * y);
            sum3 += tp;
            sum5 += a * np * tp;
            if a * np * tp < relerr * sum5 {
                return finish_lattice(z, ret, c, y, sum1, sum2, sum3, sum4, sum5);
            }
            dn += 1;
        }
    }
    finish_lattice(z, ret, c, y, sum1, sum2, sum3, sum4, sum5)
}

#[inline]
fn sq(v: f64) -> f64 {
    v * v
}

#[allow(clippy::too_many_arguments)]
fn finish_lattice(
    z: Complex64,
    ret: Complex64,
    c: f64,
    y: f64,
    _sum1: f64,
    sum2: f64,
    sum3: f64,
    sum4: f64,
    sum5: f64,
) -> Complex64 {
    ret + Complex64::new(
        0.5 * c * y * (sum2 + sum3),
        (0.5 * c * (sum5 - sum4)).copysign(z.re),
    )
}

/// Scaled complementary error function `erfcx(z) = exp(z^2) erfc(z) = w(iz)`
/// for complex argument.
pub fn erfcx(z: Complex64) -> Complex64 {
    faddeeva(Complex64::new(-z.im, z.re))
}

/// Complementary error function for complex argument.
///
/// Right half-plane: `erfc(z) = exp(-z^2) w(iz)`, a cancellation-free
/// product. Left half-plane by `erfc(z) = 2 - erfc(-z)`. Errors with
/// [`SpecFunError::OverflowDomain`] where `|erfc|` exceeds the double range
/// (attainable within `|z| < 30` near the imaginary axis).
pub fn erfc(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 {
        return Ok(Complex64::new(erfc_real(z.re), -z.im));
    }
    if z.re >= 0.0 {
        let mre = (z.im - z.re) * (z.re + z.im); // Re(-z^2) without overflow
        let mim = -2.0 * z.re * z.im;
        if mre > 709.0 {
            return Err(SpecFunError::OverflowDomain);
        }
        if mre < -750.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = Complex64::new(mre, mim).exp() * faddeeva(Complex64::new(-z.im, z.re));
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(SpecFunError::OverflowDomain);
        }
        Ok(v)
    } else {
        let v = erfc(-z)?;
        Ok(Complex64::new(2.0 - v.re, -v.im))
    }
}

/// Error function for complex argument.
///
/// Built from the Faddeeva function: `erf(z) = 1 - exp(-z^2) w(iz)` in the
/// right half-plane, extended by oddness, with a Maclaurin series near the
/// origin. Errors with [`SpecFunError::OverflowDomain`] where the true value
/// leaves the double range.
pub fn erf(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.im == 0.0 {
        return Ok(Complex64::new(erf_real(z.re), z.im));
    }
    if z.re == 0.0 {
        // erf(iy) = i erfi(y)
        if z.im * z.im > 709.0 {
            return Err(SpecFunError::OverflowDomain);
        }
        return Ok(Complex64::new(z.re, (z.im * z.im).exp() * w_im(z.im)));
    }
    if z.re < 0.0 {
        return erf(-z).map(|v| -v);
    }
    if z.norm_sqr() < 0.25 {
        return Ok(erf_maclaurin(z));
    }
    let mre = (z.im - z.re) * (z.re + z.im);
    let mim = -2.0 * z.re * z.im;
    if mre < -750.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if mre > 709.0 {
        return Err(SpecFunError::OverflowDomain);
    }
    let e = Complex64::new(mre, mim).exp() * faddeeva(Complex64::new(-z.im, z.re));
    let v = Complex64::new(1.0 - e.re, -e.im);
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(SpecFunError::OverflowDomain);
    }
    Ok(v)
}

fn erf_maclaurin(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = z;
    let mut sum = z;
    let mut sign = 1.0;
    for n in 1..24 {
        power *= z2 / n as f64;
        sign = -sign;
        let term = power * (sign / (2.0 * n as f64 + 1.0));
        sum += term;
        if term.norm_sqr() < sum.norm_sqr() * 1e-34 {
            break;
        }
    }
    sum * TWO_OVER_SQRT_PI
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(erf(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(erfc(c(0.0, 0.0)).unwrap(), c(1.0, -0.0));
        assert_eq!(faddeeva(c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn real_axis_against_known_digits() {
        // High-precision reference digits (cross-checked by the big-integer
        // oracle in tests/specfun_oracle.rs).
        assert!((erf_real(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf_real(3.0) - 0.999_977_909_503_001_4).abs() < 1e-15);
        assert!((erfc_real(3.0) - 2.209_049_699_858_544e-5).abs() < 1e-19);
        assert!((erfcx_real(1.0) - 0.427_583_576_155_807).abs() < 1e-15);
    }

    #[test]
    fn dawson_and_erfi() {
        // D(1) = 0.5380795069127684, erfi(1) = 1.6504257587975429
        assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-15);
        assert!((erfi(1.0) - 1.650_425_758_797_542_9).abs() < 2e-15);
        assert!((dawson(10.0) - 0.050_253_847_187_598_54).abs() < 1e-15);
        assert!((dawson(-1.060_66) + 0.531_840_636_503_980_1).abs() < 1e-15);
        assert!(dawson(-2.5) + dawson(2.5) == 0.0);
    }

    #[test]
    fn faddeeva_axis_consistency() {
        // w(iy) = erfcx(y)
        for y in [0.3, 1.0, 4.5, 9.0] {
            let v = faddeeva(c(0.0, y));
            assert!((v.re - erfcx_real(y)).abs() <= 1e-15 * v.re);
            assert_eq!(v.im, 0.0);
        }
        // w(x) = exp(-x^2) + i 2 D(x)/sqrt(pi)
        for x in [0.5, 2.0, 7.5, 26.0] {
            let v = faddeeva(c(x, 0.0));
            assert_eq!(v.re, (-x * x).exp());
            assert!((v.im - w_im(x)).abs() <= 1e-15);
        }
    }

    #[test]
    fn faddeeva_large_real_argument_asymptotics() {
        // Two-term tail: w(x) ~ i/(sqrt(pi) x) (1 + 1/(2x^2)); the leading
        // term alone differs by ~2.3e-6 at x = 50.
        let x = 50.0;
        let v = faddeeva(c(x, 0.0));
        let lead = INV_SQRT_PI / x;
        assert!((v.im - lead * (1.0 + 1.0 / (2.0 * x * x))).abs() < 5e-9);
        assert!((v.im - lead).abs() < 3e-6);
    }

    #[test]
    fn erf_overflow_domain() {
        assert_eq!(erf(c(0.0, 29.0)).unwrap_err(), SpecFunError::OverflowDomain);
        assert_eq!(erfc(c(1.0, 28.5)).unwrap_err(), SpecFunError::OverflowDomain);
        // but the scaled forms stay finite there
        let w = faddeeva(c(-29.0, 0.5));
        assert!(w.re.is_finite() && w.im.is_finite());
    }

    #[test]
    fn erf_plus_erfc_is_one_to_rounding() {
        for &z in &[c(0.3, 0.8), c(-2.0, 1.5), c(4.0, -3.0), c(-0.1, -6.0)] {
            let e = erf(z).unwrap();
            let ec = erfc(z).unwrap();
            let scale = (e.norm() + ec.norm()).max(1.0);
            assert!((e + ec - c(1.0, 0.0)).norm() <= 1e-15 * scale, "z = {z}");
        }
    }

    #[test]
    fn symmetries() {
        for &z in &[c(1.3, 0.7), c(0.2, -3.1), c(5.5, 2.0)] {
            let e = erf(z).unwrap();
            let en = erf(-z).unwrap();
            let ec = erf(z.conj()).unwrap();
            assert!((e + en).norm() <= 1e-15 * e.norm());
            assert!((ec - e.conj()).norm() <= 1e-15 * e.norm());
        }
    }
}
