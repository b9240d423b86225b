use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent random streams used within one drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    ServingChannel = 0,
    Geometry = 1,
    Fading = 2,
    EigenSample = 3,
}

const PURPOSES: u64 = 4;

/// Stateless substream for `(seed, index, purpose)`: the ChaCha key comes
/// from the master seed and the stream id from the index and purpose, so a
/// drop's randomness never depends on which worker evaluates it.
pub fn substream(seed: u64, index: u64, purpose: Purpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(PURPOSES).wrapping_add(purpose as u64));
    rng
}

/// `CN(0, 1)`: independent real and imaginary parts of variance 1/2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
