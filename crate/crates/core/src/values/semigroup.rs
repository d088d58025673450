use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A numerical semigroup `⟨a_1, …, a_m⟩ ⊆ ℕ` with finite complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericalSemigroup {
    generators: Vec<i64>,
    conductor: i64,
    // members[x] for 0 <= x < conductor + smallest generator.
    members: Vec<bool>,
}

impl NumericalSemigroup {
    /// Builds the semigroup generated by the positive entries of `generators`;
    /// nonpositive entries are ignored.
    ///
    /// The conductor is found by sieving until a run of `min(generators)`
    /// consecutive members appears, after which every integer is a member.
    pub fn new(generators: &[i64]) -> Result<Self> {
        let mut gens: Vec<i64> = generators.iter().copied().filter(|&g| g > 0).collect();
        gens.sort_unstable();
        gens.dedup();
        let g = gens.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(Error::InfiniteConductor(g as u64));
        }
        let a1 = gens[0];
        let mut members = vec![true];
        let mut run = 1;
        let mut x = 0i64;
        while run < a1 {
            x += 1;
            let m = gens
                .iter()
                .any(|&g| g <= x && members[(x - g) as usize]);
            members.push(m);
            run = if m { run + 1 } else { 0 };
        }
        let conductor = x - run + 1;
        Ok(Self {
            generators: gens,
            conductor,
            members,
        })
    }

    /// The generators as given, sorted and deduplicated.
    pub fn generators(&self) -> &[i64] {
        &self.generators
    }

    /// The least `c` with `c + ℕ` contained in the semigroup.
    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// The smallest positive element.
    pub fn multiplicity(&self) -> i64 {
        self.generators[0]
    }

    pub fn contains(&self, x: i64) -> bool {
        if x < 0 {
            return false;
        }
        if x >= self.conductor {
            return true;
        }
        self.members[x as usize]
    }

    /// The integers not in the semigroup.
    pub fn gaps(&self) -> Vec<i64> {
        (0..self.conductor).filter(|&x| !self.contains(x)).collect()
    }

    /// The unique minimal generating set.
    pub fn minimal_generators(&self) -> Vec<i64> {
        let mut out: Vec<i64> = Vec::new();
        for &g in &self.generators {
            let sub = NumericalSemigroupView(&out);
            if !sub.contains(g) {
                out.push(g);
            }
        }
        out
    }

    /// Conductor of the monomodule `gens + S`: the least `c` with
    /// `c + ℕ ⊆ gens + S`.
    pub fn module_conductor(&self, gens: &[i64]) -> Result<i64> {
        let lo = *gens
            .iter()
            .min()
            .ok_or_else(|| Error::MissingData(alloc::string::String::from("monomodule generators")))?;
        let member = |x: i64| gens.iter().any(|&g| self.contains(x - g));
        let a1 = self.multiplicity();
        let mut x = lo;
        let mut run = 0;
        let mut start = lo;
        while run < a1 {
            if member(x) {
                if run == 0 {
                    start = x;
                }
                run += 1;
            } else {
                run = 0;
            }
            x += 1;
        }
        Ok(start)
    }
}

/// Membership in the (possibly non-numerical) semigroup generated by a slice.
struct NumericalSemigroupView<'a>(&'a [i64]);

impl NumericalSemigroupView<'_> {
    fn contains(&self, x: i64) -> bool {
        let mut reach = vec![false; x as usize + 1];
        reach[0] = true;
        for s in 1..=x as usize {
            reach[s] = self.0.iter().any(|&g| g as usize <= s && reach[s - g as usize]);
        }
        reach[x as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conductors() {
        assert_eq!(NumericalSemigroup::new(&[6, 8, 10, 17, 19]).unwrap().conductor(), 22);
        assert_eq!(NumericalSemigroup::new(&[1]).unwrap().conductor(), 0);
        assert_eq!(NumericalSemigroup::new(&[2, 3]).unwrap().conductor(), 2);
        assert_eq!(NumericalSemigroup::new(&[6, 8, 10, 17, 19, 21]).unwrap().conductor(), 16);
        // The product of the two smallest generators is not a valid sieve bound here.
        assert_eq!(NumericalSemigroup::new(&[4, 6, 101]).unwrap().conductor(), 104);
        assert_eq!(NumericalSemigroup::new(&[4, 6]), Err(Error::InfiniteConductor(2)));
    }

    #[test]
    fn gaps_and_generators() {
        let s = NumericalSemigroup::new(&[3, 5, 6, 10]).unwrap();
        assert_eq!(s.gaps(), vec![1, 2, 4, 7]);
        assert_eq!(s.minimal_generators(), vec![3, 5]);
        assert!(s.contains(8) && !s.contains(-3));
    }

    #[test]
    fn monomodules() {
        let g1 = NumericalSemigroup::new(&[6, 8, 10, 17, 19]).unwrap();
        assert_eq!(g1.module_conductor(&[25, 27, 29, 32, 34, 36]).unwrap(), 31);
        let g2 = NumericalSemigroup::new(&[6, 8, 10, 17, 19, 21]).unwrap();
        assert_eq!(g2.module_conductor(&[21, 25, 32, 34, 36]).unwrap(), 31);
        let n = NumericalSemigroup::new(&[1]).unwrap();
        assert_eq!(n.module_conductor(&[3]).unwrap(), 3);
    }
}
