//! Fixtures shared by the kernel benchmarks.

use schemoid::corpus::{blow_up, hamming_times_bullet};
use schemoid::extensions::{Coefficients, NaturalSystem};
use schemoid::{hamming, j_embed, thicken_scheme, AssociationSchemoid, FinCategory, Thickening};

/// The complete-graph schemoid of `H(n, q)`.
pub fn hamming_schemoid(n: usize, q: usize) -> AssociationSchemoid {
    j_embed(hamming(n, q).expect("small Hamming scheme").configuration())
}

/// `H(n, 2)` thickened with thickness `z` on every class.
pub fn thick_hamming(n: usize, z: usize) -> Thickening {
    let h = hamming(n, 2).expect("small Hamming scheme");
    thicken_scheme(&h, &vec![z; h.rank()]).expect("valid thickness")
}

/// Base category and trivial `Z/2` system of the blow-up example.
pub fn blow_up_base() -> (FinCategory, NaturalSystem) {
    let c = hamming_times_bullet().category().clone();
    let d = NaturalSystem::trivial(&c, Coefficients::modulo(2).expect("prime"), 1)
        .expect("trivial system");
    (c, d)
}

/// The lifted schemoid of the twisted blow-up.
pub fn twisted_blow_up() -> AssociationSchemoid {
    blow_up(true).expect("valid cocycle").lifted
}
