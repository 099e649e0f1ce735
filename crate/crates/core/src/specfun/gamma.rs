use crate::error::{check_positive, domain, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// ζ(k) − 1 for k = 2, 3, ...
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 31] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
    0.000_994_575_127_818_085_3,
    0.000_494_188_604_119_464_6,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_1,
    6.124_813_505_870_483e-5,
    3.058_823_630_702_049e-5,
    1.528_225_940_865_187e-5,
    7.637_197_637_899_762e-6,
    3.817_293_264_999_840e-6,
    1.908_212_716_553_939e-6,
    9.539_620_338_727_961e-7,
    4.769_329_867_878_065e-7,
    2.384_505_027_277_330e-7,
    1.192_199_259_653_111e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504e-8,
    7.450_711_789_835_429e-9,
    3.725_334_024_788_457e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_682e-10,
    4.656_629_065_033_784e-10,
    2.328_311_833_676_505e-10,
];

/// ln Γ(2 + z) − z(1 − γ) for |z| ≤ 1/2; the power series in ζ(k) − 1.
fn lgamma_series_at_two(z: f64) -> f64 {
    let mut pow = -z;
    let mut acc = 0.0;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -z;
        acc += zm1 * pow / k;
    }
    z * (1.0 - EULER_GAMMA) + acc
}

/// ln Γ(x) − [(x − ½) ln x − x + ln √(2π)], the Stirling correction.
fn stirling_corr(x: f64) -> f64 {
    // Bernoulli terms B_{2k} / (2k (2k-1) x^{2k-1}), k = 1..8
    const C: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in C {
        corr += c * p;
        p *= inv2;
    }
    corr
}

fn lgamma_stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_corr(x)
}

fn lgamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the argument in the series window.
        return lgamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let z = x - 1.0;
        return lgamma_series_at_two(z) - z.ln_1p();
    }
    if x < 2.5 {
        return lgamma_series_at_two(x - 2.0);
    }
    if x < 15.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return prod.ln() + lgamma_series_at_two(y - 2.0);
    }
    lgamma_stirling(x)
}

/// Natural log of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma argument", x)?;
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(lgamma_unchecked(x))
}

/// ln B(a, b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("log_beta a", a)?;
    check_positive("log_beta b", b)?;
    Ok(ln_beta(a, b))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    lgamma_unchecked(x)
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    if hi >= 15.0 {
        // ln Γ(hi) - ln Γ(hi + lo) via Stirling difference avoids losing the
        // small argument's contribution in the cancellation.
        let s = hi + lo;
        let diff = -(hi - 0.5) * (lo / hi).ln_1p() - lo * s.ln() + lo + stirling_corr(hi)
            - stirling_corr(s);
        return lgamma_unchecked(lo) + diff;
    }
    lgamma_unchecked(a) + lgamma_unchecked(b) - lgamma_unchecked(a + b)
}

/// ln Γ(x + d) − ln Γ(x) without cancellation when `x` is large.
pub(crate) fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    let y = x + d;
    if x.min(y) >= 15.0 {
        return (x - 0.5) * (d / x).ln_1p() + d * y.ln() - d + stirling_corr(y) - stirling_corr(x);
    }
    lgamma_unchecked(y) - lgamma_unchecked(x)
}

/// Digamma (k = 0) or trigamma (k = 1).
pub fn polygamma(k: u32, x: f64) -> Result<f64> {
    check_positive("polygamma argument", x)?;
    match k {
        0 => Ok(digamma(x)),
        1 => Ok(trigamma(x)),
        _ => Err(domain(format!("polygamma order {k} not supported (only 0 and 1)"))),
    }
}

pub(crate) fn digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - tail
}

pub(crate) fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = 1.0 / 6.0
        - inv2
            * (1.0 / 30.0
                - inv2
                    * (1.0 / 42.0
                        - inv2
                            * (1.0 / 30.0
                                - inv2
                                    * (5.0 / 66.0 - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0)))));
    acc + inv + 0.5 * inv2 + inv2 * inv * series
}
