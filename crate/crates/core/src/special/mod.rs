//! Complex special functions (Γ, log Γ, ψ, Hurwitz ζ, Euler's γ) and the
//! quadrature engine used for semi-infinite and contour integrals.

mod gamma;
mod hurwitz;
mod quad;

pub use gamma::{digamma, euler_gamma, gamma, log_gamma, trigamma};
pub use hurwitz::hurwitz_zeta;
pub use quad::{
    gauss_legendre, quad_circle, quad_finite, quad_path, quad_semi_infinite, ParametricPath, QuadResult, QuadratureSpec,
};

/// `B_{2j}/(2j)!` for `j = 1..=30`.
pub(crate) const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    0.083333333333333333333,
    -0.0013888888888888888889,
    0.000033068783068783068783,
    -8.2671957671957671958e-7,
    2.0876756987868098979e-8,
    -5.2841901386874931848e-10,
    1.3382536530684678833e-11,
    -3.3896802963225828668e-13,
    8.5860620562778445641e-15,
    -2.174868698558061873e-16,
    5.5090028283602295152e-18,
    -1.3954464685812523341e-19,
    3.5347070396294674717e-21,
    -8.9535174270375468504e-23,
    2.2679524523376830603e-24,
    -5.7447906688722024453e-26,
    1.4551724756148649019e-27,
    -3.6859949406653101782e-29,
    9.336734257095044672e-31,
    -2.3650224157006299346e-32,
    5.9906717624821343047e-34,
    -1.5174548844682902617e-35,
    3.8437581254541882322e-37,
    -9.7363530726466910353e-39,
    2.4662470442006809571e-40,
    -6.2470767418207436931e-42,
    1.5824030244644914298e-43,
    -4.0082736859489359685e-45,
    1.0153075855569556312e-46,
    -2.5718041582418717499e-48,
];

/// `B_{2j}` for `j = 1..=12`.
pub(crate) const BERNOULLI_EVEN: [f64; 12] = [
    0.16666666666666666667,
    -0.033333333333333333333,
    0.023809523809523809524,
    -0.033333333333333333333,
    0.075757575757575757576,
    -0.25311355311355311355,
    1.1666666666666666667,
    -7.0921568627450980392,
    54.971177944862155388,
    -529.12424242424242424,
    6192.1231884057971014,
    -86580.253113553113553,
];
