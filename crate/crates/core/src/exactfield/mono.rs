use std::cmp::Ordering;

/// Exponent vector indexed by variable. Trailing zeros are trimmed so that
/// equal monomials have equal representations regardless of ring size.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(Vec<u32>);

impl Mono {
    pub fn one() -> Mono {
        Mono(Vec::new())
    }

    pub fn var(index: usize) -> Mono {
        Mono::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Mono {
        let mut v = vec![0; index + 1];
        v[index] = exp;
        Mono::from_exps(v)
    }

    pub fn from_exps(mut exps: Vec<u32>) -> Mono {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Mono(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i) + other.exp(i)).collect();
        Mono::from_exps(v)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().enumerate().all(|(i, &e)| e <= other.exp(i))
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let n = other.0.len();
        let v = (0..n).map(|i| other.exp(i) - self.exp(i)).collect();
        Mono::from_exps(v)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        let v = (0..n).map(|i| self.exp(i).max(other.exp(i))).collect();
        Mono::from_exps(v)
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        let n = self.0.len().min(other.0.len());
        let v = (0..n).map(|i| self.exp(i).min(other.exp(i))).collect();
        Mono::from_exps(v)
    }

    pub fn is_coprime(&self, other: &Mono) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Removes `var` entirely, returning the remaining monomial and the exponent.
    pub fn split_var(&self, var: usize) -> (Mono, u32) {
        let e = self.exp(var);
        if e == 0 {
            return (self.clone(), 0);
        }
        let mut v = self.0.clone();
        v[var] = 0;
        (Mono::from_exps(v), e)
    }

    /// Renames variables; `map[i]` is the new index of variable `i`.
    pub fn remap(&self, map: &[usize]) -> Mono {
        let mut v: Vec<u32> = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let j = map[i];
            if v.len() <= j {
                v.resize(j + 1, 0);
            }
            v[j] += e;
        }
        Mono::from_exps(v)
    }
}

/// Graded reverse lexicographic order with variable 0 largest.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            let (a, b) = (self.exp(i), other.exp(i));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let x = Mono::var(0);
        let y = Mono::var(1);
        let z = Mono::var(2);
        assert!(x > y && y > z);
        // x*z < y^2 under grevlex
        assert!(x.mul(&z) < y.mul(&y));
        assert!(x.mul(&x) > x.mul(&y));
        assert!(Mono::one() < z);
    }

    #[test]
    fn trimming_makes_representation_canonical() {
        assert_eq!(Mono::from_exps(vec![1, 0, 0]), Mono::var(0));
        assert_eq!(Mono::var(2).quotient_of(&Mono::var(2)), Mono::one());
    }
}
