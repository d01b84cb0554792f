/// Fixed-length bitset over the colorings of a local configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { words: vec![0; len.div_ceil(64)] }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[cfg(test)]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    /// `self = src & !kill`
    pub fn assign_andnot(&mut self, src: &Bits, kill: &Bits) {
        for ((a, s), k) in self.words.iter_mut().zip(&src.words).zip(&kill.words) {
            *a = *s & !*k;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    #[cfg(test)]
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_and_scan() {
        let mut b = Bits::zeros(130);
        assert!(b.is_zero());
        b.set(3);
        b.set(129);
        assert_eq!(b.first_one(), Some(3));
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![3, 129]);
        let mut c = Bits::zeros(130);
        c.assign_andnot(&b, &b);
        assert!(c.is_zero());
        c.or_assign(&b);
        assert_eq!(c.count(), 2);
        assert!(c.get(129));
    }
}
