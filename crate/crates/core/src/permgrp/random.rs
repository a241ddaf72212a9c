use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::perm::{compose, Perm};

/// Number of product-replacement slots (raised to the generator count if larger).
pub const PR_SLOTS: usize = 10;
/// Warm-up steps discarded before the first output.
pub const PR_WARMUP: usize = 50;

/// Product-replacement generator with an accumulator ("rattle" variant).
///
/// The stream is a pure function of the generators, the seed and the
/// worker index.
#[derive(Clone, Debug)]
pub struct ProductReplacement {
    slots: Vec<Perm>,
    acc: Perm,
    rng: ChaCha8Rng,
}

impl ProductReplacement {
    pub fn new(gens: &[Perm], seed: u64) -> Self {
        Self::for_worker(gens, seed, 0)
    }

    /// Independent sub-stream `worker` of the master `seed`.
    pub fn for_worker(gens: &[Perm], seed: u64, worker: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(worker);
        let gens: Vec<Perm> = if gens.is_empty() { vec![Perm::identity()] } else { gens.to_vec() };
        let n = PR_SLOTS.max(gens.len());
        let slots = (0..n).map(|i| gens[i % gens.len()].clone()).collect();
        let mut pr = ProductReplacement { slots, acc: Perm::identity(), rng };
        for _ in 0..PR_WARMUP {
            pr.step();
        }
        pr
    }

    fn step(&mut self) {
        let n = self.slots.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if self.rng.gen_bool(0.5) { self.slots[j].clone() } else { self.slots[j].inverse() };
        self.slots[i] = if self.rng.gen_bool(0.5) {
            compose(&self.slots[i], &other)
        } else {
            compose(&other, &self.slots[i])
        };
        self.acc = compose(&self.acc, &self.slots[i]);
    }

    pub fn next_element(&mut self) -> Perm {
        self.step();
        self.acc.clone()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

impl Iterator for ProductReplacement {
    type Item = Perm;
    fn next(&mut self) -> Option<Perm> {
        Some(self.next_element())
    }
}
