//! Special functions used by the helium form factors.

use std::f64::consts::PI;

use once_cell::sync::Lazy;

const H: f64 = 0.2;
const TERMS: usize = 20;

static RYBICKI: Lazy<[f64; TERMS]> = Lazy::new(|| {
    let mut c = [0.0; TERMS];
    for (i, ci) in c.iter_mut().enumerate() {
        let t = (2.0 * i as f64 + 1.0) * H;
        *ci = (-t * t).exp();
    }
    c
});

/// Dawson's integral `F(x) = e^{−x²} ∫₀ˣ e^{t²} dt`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 0.2 {
        // x Σ (−2x²)^n / (2n+1)!!
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for n in 1..12 {
            term *= -2.0 * x2 / (2.0 * n as f64 + 1.0);
            sum += term;
        }
        return sum;
    }
    let n0 = 2.0 * (0.5 * ax / H + 0.5).floor();
    let xp = ax - n0 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = n0 + 1.0;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for c in RYBICKI.iter() {
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    let v = sum * (-xp * xp).exp() / PI.sqrt();
    v.copysign(x)
}

/// Spherical Bessel function `j_l(x)` for `l ∈ {0, 1}`.
pub fn spherical_bessel(l: u32, x: f64) -> f64 {
    match l {
        0 => {
            if x.abs() < 1e-4 {
                1.0 - x * x / 6.0
            } else {
                x.sin() / x
            }
        }
        1 => {
            if x.abs() < 1e-3 {
                x / 3.0 - x * x * x / 30.0
            } else {
                x.sin() / (x * x) - x.cos() / x
            }
        }
        _ => unimplemented!("only l <= 1 is needed"),
    }
}

/// `∫₀^∞ r² e^{−r²/(2a²)} j_l(kr) dr` for `l ∈ {0, 1}`.
pub fn gaussian_bessel_integral(l: u32, k: f64, a: f64) -> f64 {
    let p = 1.0 / (2.0 * a * a);
    let p32 = p.powf(1.5);
    match l {
        0 => PI.sqrt() / (4.0 * p32) * (-k * k / (4.0 * p)).exp(),
        1 => {
            let x = k / (2.0 * p.sqrt());
            if x < 1e-3 {
                x / (3.0 * p32) * (1.0 - 0.4 * x * x)
            } else {
                (dawson(x) * (1.0 + 2.0 * x * x) - x) / (4.0 * p32 * x * x)
            }
        }
        _ => unimplemented!("only l <= 1 is needed"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::quadrature::Adaptive;

    #[test]
    fn dawson_against_quadrature() {
        let quad = Adaptive::default();
        for &x in &[0.05, 0.19, 0.21, 0.5, 0.9241388730, 1.7, 3.0, 7.5, 20.0, -1.3] {
            let (i, _) = quad.integrate(|t: f64| (t * t - x * x).exp(), 0.0, x);
            let d = dawson(x);
            assert!((d - i).abs() < 1e-13 * (1.0 + i.abs()), "x={x}: {d} vs {i}");
        }
        // Maximum of F at x ≈ 0.9241388730 is 0.5410442246.
        assert!((dawson(0.924_138_873_0) - 0.541_044_224_6).abs() < 1e-9);
    }

    #[test]
    fn form_factor_integrals_against_quadrature() {
        let quad = Adaptive::default();
        for &a in &[0.7, 1.5] {
            for &k in &[1e-4, 0.01, 0.3, 1.0, 2.5, 6.0] {
                for l in 0..=1 {
                    let (num, _) = quad.integrate(
                        |r: f64| r * r * (-r * r / (2.0 * a * a)).exp() * spherical_bessel(l, k * r),
                        0.0,
                        12.0 * a,
                    );
                    let an = gaussian_bessel_integral(l, k, a);
                    assert!((num - an).abs() < 1e-11 * (1.0 + an.abs()), "l={l} k={k} a={a}: {num} vs {an}");
                }
            }
        }
    }
}
